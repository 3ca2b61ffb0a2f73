//! Torus endomorphisms `v ↦ A v` with `det A ≥ 2`: exact spectral
//! classification, the induced biset over `Z²`, and unit-eigenvalue
//! witnesses.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::biset::{Alphabet, BisetMachine, GeneratorRecursion};
use crate::contraction::{levy_search, nucleus, Budget, ContractionStatus, LevyOptions};
use crate::group::{GroupElement, GroupModel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("determinant {0} is below 2")]
    Determinant(i64),
    #[error("malformed matrix `{0}` (expected a,b,c,d)")]
    Parse(String),
}

/// `[[a, b], [c, d]]` acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> IntMatrix2 {
        IntMatrix2 { a, b, c, d }
    }

    pub fn parse(s: &str) -> Result<IntMatrix2, TorusError> {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| TorusError::Parse(s.into()))?;
        match v[..] {
            [a, b, c, d] => Ok(IntMatrix2::new(a, b, c, d)),
            _ => Err(TorusError::Parse(s.into())),
        }
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn discriminant(&self) -> i64 {
        self.trace() * self.trace() - 4 * self.det()
    }

    pub fn apply(&self, v: [i64; 2]) -> [i64; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// `A⁻¹ v`, which must be integral.
    ///
    /// # Panics
    /// If `v ∉ A·Z²`; callers only pass coset-reduced differences.
    fn solve_exact(&self, v: [i64; 2]) -> [i64; 2] {
        let det = self.det();
        let x = self.d * v[0] - self.b * v[1];
        let y = -self.c * v[0] + self.a * v[1];
        assert!(
            x % det == 0 && y % det == 0,
            "A^-1 applied to {v:?} is not integral for {self:?}"
        );
        [x / det, y / det]
    }

    fn require_det(&self) -> Result<i64, TorusError> {
        match self.det() {
            det if det >= 2 => Ok(det),
            det => Err(TorusError::Determinant(det)),
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "sign")]
pub enum TorusKind {
    /// All eigenvalues outside the closed unit disk.
    Expanding,
    /// No eigenvalue on the unit circle, one inside the disk.
    HyperbolicNotExpanding,
    /// An eigenvalue equal to `+1` or `-1`.
    UnitEigenvalue(i8),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusClass {
    #[serde(flatten)]
    pub kind: TorusKind,
    pub trace: i64,
    pub det: i64,
    pub discriminant: i64,
    /// `complex`, `rational` or `irrational`.
    pub roots: &'static str,
}

fn isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Exact classification from trace and determinant of
/// `p(λ) = λ² − τλ + δ`.
pub fn classify(m: &IntMatrix2) -> Result<TorusClass, TorusError> {
    let det = m.require_det()?;
    let tr = m.trace();
    let disc = m.discriminant();
    let kind = if disc < 0 || tr.abs() < det + 1 {
        // complex pair: |λ|² = δ > 1. real pair with p(±1) > 0: both roots lie
        // on one side of ±1 and their product δ ≥ 2 puts them outside
        TorusKind::Expanding
    } else if tr.abs() == det + 1 {
        TorusKind::UnitEigenvalue(tr.signum() as i8)
    } else {
        TorusKind::HyperbolicNotExpanding
    };
    let roots = if disc < 0 {
        "complex"
    } else if isqrt(disc).is_some() {
        "rational"
    } else {
        "irrational"
    };
    Ok(TorusClass { kind, trace: tr, det, discriminant: disc, roots })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive integer eigenvector for the eigenvalue `±1`, when there is one.
/// The first nonzero coordinate is positive.
pub fn unit_eigen_witness(m: &IntMatrix2) -> Result<Option<[i64; 2]>, TorusError> {
    let TorusKind::UnitEigenvalue(sign) = classify(m)?.kind else {
        return Ok(None);
    };
    let s = sign as i64;
    let (p, q, r, t) = (m.a - s, m.b, m.c, m.d - s);
    // kernel of [[p, q], [r, t]], which is singular and nonzero
    let mut v = if p != 0 || q != 0 { [q, -p] } else { [t, -r] };
    let g = gcd(v[0], v[1]);
    v = [v[0] / g, v[1] / g];
    if v[0] < 0 || (v[0] == 0 && v[1] < 0) {
        v = [-v[0], -v[1]];
    }
    debug_assert_eq!(m.apply(v), [s * v[0], s * v[1]]);
    Ok(Some(v))
}

/// Column Hermite form `[[h11, 0], [h21, h22]]` of the lattice `A·Z²`, with
/// `h11, h22 > 0` and `0 ≤ h21 < h22`.
fn lattice_hermite(m: &IntMatrix2) -> (i64, i64, i64) {
    let mut u = [m.a, m.c];
    let mut v = [m.b, m.d];
    while v[0] != 0 {
        let q = u[0].div_euclid(v[0]);
        u = [u[0] - q * v[0], u[1] - q * v[1]];
        std::mem::swap(&mut u, &mut v);
    }
    if u[0] < 0 {
        u = [-u[0], -u[1]];
    }
    if v[1] < 0 {
        v = [-v[0], -v[1]];
    }
    let (h11, h22) = (u[0], v[1]);
    (h11, u[1].rem_euclid(h22), h22)
}

/// The `Z²`-biset of a torus endomorphism together with its coset
/// representatives (letter `i` is `reps[i]`; letter 0 is the origin).
#[derive(Clone, Debug)]
pub struct TorusBiset {
    pub matrix: IntMatrix2,
    pub reps: Vec<[i64; 2]>,
    pub machine: BisetMachine,
    cosets: Cosets,
}

/// Coset arithmetic modulo `A·Z²` in Hermite coordinates.
#[derive(Clone, Copy, Debug)]
struct Cosets {
    matrix: IntMatrix2,
    h11: i64,
    h21: i64,
    h22: i64,
}

impl Cosets {
    fn new(matrix: &IntMatrix2) -> Cosets {
        let (h11, h21, h22) = lattice_hermite(matrix);
        Cosets { matrix: *matrix, h11, h21, h22 }
    }

    fn reduce(&self, v: [i64; 2]) -> [i64; 2] {
        let k = v[0].div_euclid(self.h11);
        [v[0] - k * self.h11, (v[1] - k * self.h21).rem_euclid(self.h22)]
    }

    fn letter_of(&self, rep: [i64; 2]) -> usize {
        (rep[1] * self.h11 + rep[0]) as usize
    }

    fn rep(&self, x: usize) -> [i64; 2] {
        let x = x as i64;
        [x % self.h11, x / self.h11]
    }

    fn act(&self, v: [i64; 2], x: usize) -> (usize, [i64; 2]) {
        let r = self.rep(x);
        let s = [v[0] + r[0], v[1] + r[1]];
        let t = self.reduce(s);
        let u = self.matrix.solve_exact([s[0] - t[0], s[1] - t[1]]);
        (self.letter_of(t), u)
    }
}

impl TorusBiset {
    /// Canonical representative of `v` modulo `A·Z²`.
    pub fn reduce(&self, v: [i64; 2]) -> [i64; 2] {
        self.cosets.reduce(v)
    }

    pub fn letter_of(&self, rep: [i64; 2]) -> usize {
        self.cosets.letter_of(rep)
    }

    /// Coset recursion evaluated directly: `v + r_x = r_y + A u`, returns
    /// `(y, u)`.
    pub fn act(&self, v: [i64; 2], x: usize) -> (usize, [i64; 2]) {
        self.cosets.act(v, x)
    }
}

pub fn torus_biset(m: &IntMatrix2) -> Result<TorusBiset, TorusError> {
    let det = m.require_det()?;
    let cosets = Cosets::new(m);
    debug_assert_eq!(cosets.h11 * cosets.h22, det);
    let reps: Vec<[i64; 2]> = (0..det as usize).map(|x| cosets.rep(x)).collect();
    let alphabet = Alphabet::numbered(det as usize).expect("det ≥ 2");
    let model = GroupModel::abelian(2).expect("rank 2");
    let forward = (0..2)
        .map(|g| {
            let e = if g == 0 { [1, 0] } else { [0, 1] };
            let (perm, restrictions) = (0..det as usize)
                .map(|x| {
                    let (y, u) = cosets.act(e, x);
                    (y, GroupElement::Abelian(u.to_vec()))
                })
                .unzip();
            GeneratorRecursion { generator: g, perm, restrictions }
        })
        .collect();
    let machine = BisetMachine::from_recursions(model, alphabet, forward).expect("torus recursion is consistent");
    Ok(TorusBiset { matrix: *m, reps, machine, cosets })
}

/// One row of a sweep over small matrices.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub matrix: [i64; 4],
    pub class: TorusClass,
    pub nucleus_status: ContractionStatus,
    pub nucleus_size: Option<usize>,
    pub nucleus_level: Option<usize>,
    pub levy_witness: Option<String>,
    pub witness_replays: bool,
    /// `Contracting ⇔ Expanding`, and unit eigenvalues carry a witness.
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub range: i64,
    pub det_min: i64,
    pub det_max: i64,
    pub budget: Budget,
    pub levy: LevyOptions,
    pub rows: Vec<SweepRow>,
    pub agreement: usize,
    pub total: usize,
}

/// All matrices with entries in `[-range, range]` and determinant in
/// `[2, det_max]`, in lexicographic order of `(a, b, c, d)`.
pub fn sweep_matrices(range: i64, det_max: i64) -> Vec<IntMatrix2> {
    let r = -range..=range;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let m = IntMatrix2::new(a, b, c, d);
                    if (2..=det_max).contains(&m.det()) {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

pub fn sweep_row(m: &IntMatrix2, budget: &Budget, levy: &LevyOptions) -> SweepRow {
    let class = classify(m).expect("sweep keeps det ≥ 2");
    let tb = torus_biset(m).expect("sweep keeps det ≥ 2");
    let report = nucleus(&tb.machine, budget);
    let expanding = class.kind == TorusKind::Expanding;
    let contracting = report.status == ContractionStatus::Contracting;
    let (levy_witness, witness_replays) = if matches!(class.kind, TorusKind::UnitEigenvalue(_)) {
        match levy_search(&tb.machine, levy) {
            Some(w) => (Some(w.describe(&tb.machine)), w.replay(&tb.machine)),
            None => (None, false),
        }
    } else {
        (None, false)
    };
    let unit_ok = !matches!(class.kind, TorusKind::UnitEigenvalue(_)) || witness_replays;
    SweepRow {
        matrix: m.entries(),
        class,
        nucleus_status: report.status,
        nucleus_size: contracting.then_some(report.nucleus.len()),
        nucleus_level: contracting.then_some(report.level),
        levy_witness,
        witness_replays,
        agrees: (contracting == expanding) && unit_ok,
    }
}

/// Cross-checks the spectral classifier against nucleus closure and the
/// Levy search on every matrix of [`sweep_matrices`].
pub fn sweep(range: i64, det_max: i64, budget: &Budget, levy: &LevyOptions) -> SweepReport {
    let rows: Vec<SweepRow> = sweep_matrices(range, det_max)
        .par_iter()
        .map(|m| sweep_row(m, budget, levy))
        .collect();
    let agreement = rows.iter().filter(|r| r.agrees).count();
    SweepReport {
        range,
        det_min: 2,
        det_max,
        budget: budget.clone(),
        levy: levy.clone(),
        total: rows.len(),
        agreement,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn classify_examples() {
        let c = classify(&IntMatrix2::new(2, 0, 0, 2)).unwrap();
        assert_eq!(c.kind, TorusKind::Expanding);
        let c = classify(&IntMatrix2::new(3, 1, 1, 1)).unwrap();
        assert_eq!(c.kind, TorusKind::HyperbolicNotExpanding);
        assert_eq!((c.trace, c.det, c.roots), (4, 2, "irrational"));
        let c = classify(&IntMatrix2::new(2, 0, 1, 1)).unwrap();
        assert_eq!(c.kind, TorusKind::UnitEigenvalue(1));
        assert_eq!(classify(&IntMatrix2::new(1, 0, 0, 1)), Err(TorusError::Determinant(1)));
        // τ = -(δ+1): eigenvalue -1
        let c = classify(&IntMatrix2::new(-2, 0, 0, -1)).unwrap();
        assert_eq!(c.kind, TorusKind::UnitEigenvalue(-1));
        // τ < -(δ+1): eigenvalues -(2±√3)
        let c = classify(&IntMatrix2::new(-3, -1, -1, -1)).unwrap();
        assert_eq!(c.kind, TorusKind::HyperbolicNotExpanding);
    }

    #[test]
    fn witness_examples() {
        assert_eq!(unit_eigen_witness(&IntMatrix2::new(2, 0, 1, 1)).unwrap(), Some([0, 1]));
        assert_eq!(unit_eigen_witness(&IntMatrix2::new(2, 0, 0, 2)).unwrap(), None);
        assert_eq!(unit_eigen_witness(&IntMatrix2::new(3, 0, 1, -1)), Err(TorusError::Determinant(-3)));
        let m = IntMatrix2::new(-2, 0, 0, -1);
        let v = unit_eigen_witness(&m).unwrap().unwrap();
        assert_eq!(m.apply(v), [-v[0], -v[1]]);
    }

    #[test]
    fn doubling_biset_recursion() {
        let tb = torus_biset(&IntMatrix2::new(2, 0, 0, 2)).unwrap();
        assert_eq!(tb.reps, vec![[0, 0], [1, 0], [0, 1], [1, 1]]);
        assert_eq!(tb.act([1, 0], 1), (0, [1, 0]));
        for x in 0..4 {
            assert_eq!(tb.act([0, 0], x), (x, [0, 0]));
        }
    }

    #[test]
    fn unit_eigenvalue_biset_fixes_origin_letter() {
        let tb = torus_biset(&IntMatrix2::new(2, 0, 1, 1)).unwrap();
        assert_eq!(tb.reps[0], [0, 0]);
        assert_eq!(tb.act([0, 1], 0), (0, [0, 1]));
        let g = GroupElement::Abelian(vec![0, 1]);
        assert_eq!(tb.machine.act_letter(&g, 0).unwrap(), (0, g.clone()));
    }

    #[test]
    fn machine_agrees_with_direct_coset_action() {
        for entries in [[2, 0, 0, 2], [2, 0, 1, 1], [3, 1, 1, 1], [1, -2, 1, 1], [0, -3, 1, 2]] {
            let m = IntMatrix2::new(entries[0], entries[1], entries[2], entries[3]);
            let tb = torus_biset(&m).unwrap();
            assert_eq!(tb.reps.len() as i64, m.det());
            for vx in -4..=4 {
                for vy in -4..=4 {
                    for x in 0..tb.reps.len() {
                        let (y, u) = tb.act([vx, vy], x);
                        let (y2, u2) = tb.machine.act_letter(&GroupElement::Abelian(vec![vx, vy]), x).unwrap();
                        assert_eq!((y, GroupElement::Abelian(u.to_vec())), (y2, u2));
                    }
                }
            }
        }
        let _ = fixtures::torus_machine([2, 0, 0, 2]);
    }

    #[test]
    fn hermite_reps_are_distinct_cosets() {
        for m in sweep_matrices(3, 9) {
            let tb = torus_biset(&m).unwrap();
            for (i, &r) in tb.reps.iter().enumerate() {
                assert_eq!(tb.reduce(r), r);
                assert_eq!(tb.letter_of(r), i);
            }
        }
    }

    #[test]
    fn classification_is_conjugation_invariant() {
        let unimodular = [IntMatrix2::new(1, 1, 0, 1), IntMatrix2::new(2, 1, 1, 1), IntMatrix2::new(0, -1, 1, 0)];
        let inverses = [IntMatrix2::new(1, -1, 0, 1), IntMatrix2::new(1, -1, -1, 2), IntMatrix2::new(0, 1, -1, 0)];
        for m in sweep_matrices(2, 6) {
            for (p, q) in unimodular.iter().zip(&inverses) {
                assert_eq!(p.mul(q), IntMatrix2::new(1, 0, 0, 1));
                let conj = p.mul(&m).mul(q);
                assert_eq!(classify(&conj).unwrap().kind, classify(&m).unwrap().kind);
            }
        }
    }
}
