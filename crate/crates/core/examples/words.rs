//! Free-group words: parsing, reduction, products and conjugacy classes.

use selfsim::GroupModel;

fn main() {
    let f2 = GroupModel::free(["a", "b"]).expect("distinct names");

    let g = f2.parse("a b b^-1 a^-1 b a").unwrap();
    println!("reduced:    {}", f2.format(&g));

    let h = f2.parse("a^-1 b^-1 b^-1").unwrap();
    let gh = f2.multiply(&g, &h).unwrap();
    println!("g·h:        {}  (length {} ≤ {} + {})", f2.format(&gh), gh.length(), g.length(), h.length());

    let w = f2.parse("a^-1 b a b^-1 a").unwrap();
    let (core, conj) = f2.cyclically_reduce(&w).unwrap();
    println!("cyclic:     {} = ({}) {} ({})^-1", f2.format(&w), f2.format(&conj), f2.format(&core), f2.format(&conj));

    let (rep, _) = f2.conjugacy_representative(&f2.parse("b a b^-1").unwrap()).unwrap();
    println!("class rep:  {}", f2.format(&rep));

    let z2 = GroupModel::abelian(2).unwrap();
    let v = z2.parse("3,-1").unwrap();
    println!("Z² element: {} with L¹ length {}", z2.format(&v), v.length());
}
