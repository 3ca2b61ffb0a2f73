//! Loading a wreath recursion and acting on words.

use selfsim::fixtures;

fn main() {
    let m = fixtures::basilica();
    let model = m.model();
    let alphabet = m.alphabet();
    println!("basilica on alphabet {:?}", alphabet.labels());

    let g = model.parse("a b^-1").unwrap();
    for w in ["0", "01", "0110", "111"] {
        let word = alphabet.parse_word(w).unwrap();
        let (image, rest) = m.act_word(&g, &word).unwrap();
        let rest = if rest.is_identity() { "1".to_string() } else { model.format(&rest) };
        println!("  {} · {w} = {} · {rest}", model.format(&g), alphabet.format_word(&image));
    }

    // the action on level 3 as a permutation of the 8 words
    let perm = m.level_action(&g, 3, 1 << 16).unwrap();
    println!("level 3 permutation: {perm:?}");

    // the machine round-trips through its JSON form
    let again = selfsim::BisetMachine::from_json(&m.to_json()).unwrap();
    assert_eq!(again, m);
}
