//! Bisets presented by wreath recursions.
//!
//! Every positive generator `s` carries a permutation of the alphabet and one
//! restriction per letter, so that `s · x = perm(x) · s|_x`. Elements act on
//! words letter by letter with the rightmost generator acting first:
//! `(gh)·w = g·(h·w)`.
//!
//! Machines are read from and written to JSON:
//!
//! ```json
//! { "model": {"kind": "free", "generators": ["a"]},
//!   "alphabet": ["0", "1"],
//!   "generators": [ {"name": "a", "perm": [1, 0], "restrictions": ["", "a"]} ] }
//! ```
//!
//! Abelian models use `{"kind": "abelian", "rank": n}`, generators named
//! `e1..en`, and restrictions given either as integer arrays or as
//! comma-separated strings.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupModel, Letter, ModelKind};

/// A word over the alphabet, as letter indices.
pub type Word = Vec<usize>;

#[derive(Debug, Error)]
pub enum BisetError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("alphabet must have at least 2 distinct labels")]
    BadAlphabet,
    #[error("generator `{0}`: permutation is not a bijection of the alphabet")]
    NonBijective(String),
    #[error("generator `{name}`: expected {expected} entries, found {found}")]
    AlphabetMismatch { name: String, expected: usize, found: usize },
    #[error("generator `{0}` is not part of the group model")]
    UnknownGenerator(String),
    #[error("generator `{0}` has no recursion")]
    MissingRecursion(String),
    #[error("generator `{0}` has more than one recursion")]
    DuplicateRecursion(String),
    #[error("generator `{generator}`, letter {letter}: restriction: {source}")]
    BadRestriction { generator: String, letter: usize, source: GroupError },
    #[error("abelian generators `{0}` and `{1}` do not commute under the recursion")]
    NonCommuting(String, String),
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(String),
    #[error("level table of {needed} cells exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("machine file: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
    compact: bool,
}

impl Alphabet {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Alphabet, BisetError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 || labels.iter().any(|l| l.is_empty() || l.contains('.')) {
            return Err(BisetError::BadAlphabet);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(BisetError::BadAlphabet);
            }
        }
        let compact = labels.iter().all(|l| l.chars().count() == 1);
        Ok(Alphabet { labels, compact })
    }

    /// Alphabet labelled `0..size-1`.
    pub fn numbered(size: usize) -> Result<Alphabet, BisetError> {
        Alphabet::new((0..size).map(|i| i.to_string()))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Renders a word. Single-character alphabets concatenate; otherwise
    /// letters are joined by `.`.
    pub fn format_word(&self, w: &[usize]) -> String {
        let sep = if self.compact { "" } else { "." };
        w.iter().map(|&x| self.labels[x].as_str()).collect::<Vec<_>>().join(sep)
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, BisetError> {
        if s.is_empty() {
            return Ok(Vec::new());
        }
        let find = |t: &str| {
            self.labels
                .iter()
                .position(|l| l == t)
                .ok_or_else(|| BisetError::UnknownLetter(t.to_string()))
        };
        if self.compact {
            s.chars().map(|c| find(&c.to_string())).collect()
        } else {
            s.split('.').map(find).collect()
        }
    }

    /// All words of length `n` in lexicographic order (first letter most
    /// significant).
    pub fn words(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        let d = self.size();
        let count = d.pow(n as u32);
        (0..count).map(move |mut i| {
            let mut w = vec![0; n];
            for slot in w.iter_mut().rev() {
                *slot = i % d;
                i /= d;
            }
            w
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorRecursion {
    pub generator: usize,
    pub perm: Vec<usize>,
    pub restrictions: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisetMachine {
    model: GroupModel,
    alphabet: Alphabet,
    forward: Vec<GeneratorRecursion>,
    backward: Vec<GeneratorRecursion>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelSpec {
    Free { generators: Vec<String> },
    Abelian { rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RestrictionSpec {
    Vector(Vec<i64>),
    Text(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionSpec {
    pub name: String,
    pub perm: Vec<usize>,
    pub restrictions: Vec<RestrictionSpec>,
}

/// Parsed, unvalidated machine description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineSpec {
    pub model: ModelSpec,
    pub alphabet: Vec<String>,
    pub generators: Vec<RecursionSpec>,
}

impl MachineSpec {
    pub fn from_json(text: &str) -> Result<MachineSpec, BisetError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("machine spec serializes")
    }
}

impl BisetMachine {
    /// Validates a machine description and derives the inverse recursions.
    pub fn validate(spec: &MachineSpec) -> Result<BisetMachine, BisetError> {
        let model = match &spec.model {
            ModelSpec::Free { generators } => GroupModel::free(generators.iter().cloned())?,
            ModelSpec::Abelian { rank } => GroupModel::abelian(*rank)?,
        };
        let alphabet = Alphabet::new(spec.alphabet.iter().cloned())?;
        let d = alphabet.size();
        let mut slots: Vec<Option<GeneratorRecursion>> = vec![None; model.rank()];
        for rs in &spec.generators {
            let idx = model
                .generator_index(&rs.name)
                .ok_or_else(|| BisetError::UnknownGenerator(rs.name.clone()))?;
            if slots[idx].is_some() {
                return Err(BisetError::DuplicateRecursion(rs.name.clone()));
            }
            for found in [rs.perm.len(), rs.restrictions.len()] {
                if found != d {
                    return Err(BisetError::AlphabetMismatch { name: rs.name.clone(), expected: d, found });
                }
            }
            let mut seen = vec![false; d];
            for &y in &rs.perm {
                if y >= d || std::mem::replace(&mut seen[y], true) {
                    return Err(BisetError::NonBijective(rs.name.clone()));
                }
            }
            let mut restrictions = Vec::with_capacity(d);
            for (letter, r) in rs.restrictions.iter().enumerate() {
                let parsed = match r {
                    RestrictionSpec::Text(t) => model.parse(t),
                    RestrictionSpec::Vector(v) => {
                        let g = GroupElement::Abelian(v.clone());
                        model.check(&g).map(|_| g)
                    }
                };
                let g = parsed.map_err(|source| BisetError::BadRestriction {
                    generator: rs.name.clone(),
                    letter,
                    source,
                })?;
                restrictions.push(g);
            }
            slots[idx] = Some(GeneratorRecursion { generator: idx, perm: rs.perm.clone(), restrictions });
        }
        let forward: Vec<GeneratorRecursion> = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| BisetError::MissingRecursion(model.generator_names()[i].clone())))
            .collect::<Result<_, _>>()?;
        BisetMachine::from_recursions(model, alphabet, forward)
    }

    /// Builds a machine from already-checked recursions, one per generator in
    /// generator order.
    pub fn from_recursions(
        model: GroupModel,
        alphabet: Alphabet,
        forward: Vec<GeneratorRecursion>,
    ) -> Result<BisetMachine, BisetError> {
        // perm_{s^-1} = perm_s^-1 and (s^-1)|_x = (s|_{perm_s^-1(x)})^-1
        let backward = forward
            .iter()
            .map(|r| {
                let mut inv = vec![0; r.perm.len()];
                for (x, &y) in r.perm.iter().enumerate() {
                    inv[y] = x;
                }
                let restrictions = inv.iter().map(|&x| r.restrictions[x].inverse()).collect();
                GeneratorRecursion { generator: r.generator, perm: inv, restrictions }
            })
            .collect();
        let machine = BisetMachine { model, alphabet, forward, backward };
        if machine.model.kind() == ModelKind::Abelian {
            machine.check_commuting()?;
        }
        Ok(machine)
    }

    fn check_commuting(&self) -> Result<(), BisetError> {
        let rank = self.model.rank();
        for i in 0..rank {
            for j in i + 1..rank {
                let gi = self.model.generator(i);
                let gj = self.model.generator(j);
                for x in 0..self.alphabet.size() {
                    let (y1, r1) = self.act_letter_unchecked(&gi, self.forward[j].perm[x]);
                    let (y2, r2) = self.act_letter_unchecked(&gj, self.forward[i].perm[x]);
                    let r1 = r1.mul(&self.forward[j].restrictions[x])?;
                    let r2 = r2.mul(&self.forward[i].restrictions[x])?;
                    if y1 != y2 || r1 != r2 {
                        let names = self.model.generator_names();
                        return Err(BisetError::NonCommuting(names[i].clone(), names[j].clone()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn model(&self) -> &GroupModel {
        &self.model
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn degree(&self) -> usize {
        self.alphabet.size()
    }

    pub fn recursion(&self, letter: Letter) -> &GeneratorRecursion {
        if letter.is_inverse() {
            &self.backward[letter.index()]
        } else {
            &self.forward[letter.index()]
        }
    }

    pub fn recursions(&self) -> &[GeneratorRecursion] {
        &self.forward
    }

    /// Generators and their inverses, in shortlex order.
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        (0..self.model.rank())
            .flat_map(|i| [Letter::new(i, false), Letter::new(i, true)])
            .map(|l| self.model.letter_element(l))
            .collect()
    }

    pub fn to_spec(&self) -> MachineSpec {
        let names = self.model.generator_names();
        let model = match self.model.kind() {
            ModelKind::Free => ModelSpec::Free { generators: names.to_vec() },
            ModelKind::Abelian => ModelSpec::Abelian { rank: self.model.rank() },
        };
        let generators = self
            .forward
            .iter()
            .map(|r| RecursionSpec {
                name: names[r.generator].clone(),
                perm: r.perm.clone(),
                restrictions: r
                    .restrictions
                    .iter()
                    .map(|g| match g {
                        GroupElement::Abelian(v) => RestrictionSpec::Vector(v.clone()),
                        GroupElement::Free(_) => RestrictionSpec::Text(self.model.format(g)),
                    })
                    .collect(),
            })
            .collect();
        MachineSpec { model, alphabet: self.alphabet.labels().to_vec(), generators }
    }

    pub fn from_json(text: &str) -> Result<BisetMachine, BisetError> {
        BisetMachine::validate(&MachineSpec::from_json(text)?)
    }

    pub fn to_json(&self) -> String {
        self.to_spec().to_json()
    }

    /// `g · x = y · rest`.
    pub fn act_letter(&self, g: &GroupElement, x: usize) -> Result<(usize, GroupElement), BisetError> {
        if x >= self.degree() {
            return Err(BisetError::UnknownLetter(x.to_string()));
        }
        self.model.check(g)?;
        Ok(self.act_letter_unchecked(g, x))
    }

    pub(crate) fn act_letter_unchecked(&self, g: &GroupElement, mut x: usize) -> (usize, GroupElement) {
        match g {
            GroupElement::Free(word) => {
                // pieces are produced right to left; the last one is leftmost
                let mut pieces: Vec<&[Letter]> = Vec::with_capacity(word.len());
                for &l in word.iter().rev() {
                    let rec = self.recursion(l);
                    if let GroupElement::Free(r) = &rec.restrictions[x] {
                        pieces.push(r);
                    }
                    x = rec.perm[x];
                }
                let rest = crate::group::free_reduce(pieces.iter().rev().flat_map(|p| p.iter().copied()));
                (x, GroupElement::Free(rest))
            }
            GroupElement::Abelian(v) => {
                let mut rest = vec![0i64; v.len()];
                for l in g.letters().into_iter().rev() {
                    let rec = self.recursion(l);
                    if let GroupElement::Abelian(r) = &rec.restrictions[x] {
                        for (a, b) in rest.iter_mut().zip(r) {
                            *a += b;
                        }
                    }
                    x = rec.perm[x];
                }
                (x, GroupElement::Abelian(rest))
            }
        }
    }

    /// `g · w = v · g|_w`, returning `(v, g|_w)`.
    pub fn act_word(&self, g: &GroupElement, w: &[usize]) -> Result<(Word, GroupElement), BisetError> {
        if let Some(&bad) = w.iter().find(|&&x| x >= self.degree()) {
            return Err(BisetError::UnknownLetter(bad.to_string()));
        }
        self.model.check(g)?;
        Ok(self.act_word_unchecked(g, w))
    }

    pub(crate) fn act_word_unchecked(&self, g: &GroupElement, w: &[usize]) -> (Word, GroupElement) {
        let mut out = Vec::with_capacity(w.len());
        let mut cur = g.clone();
        for &x in w {
            if cur.is_identity() {
                out.push(x);
                continue;
            }
            let (y, r) = self.act_letter_unchecked(&cur, x);
            out.push(y);
            cur = r;
        }
        (out, cur)
    }

    /// Restriction `g|_w` only.
    pub fn restriction(&self, g: &GroupElement, w: &[usize]) -> Result<GroupElement, BisetError> {
        Ok(self.act_word(g, w)?.1)
    }

    /// The permutation of `X^n` induced by `g`, indexed by words in
    /// [`Alphabet::words`] order. `max_cells` bounds `n · d^n`.
    pub fn level_action(&self, g: &GroupElement, n: usize, max_cells: u128) -> Result<Vec<usize>, BisetError> {
        self.model.check(g)?;
        let d = self.degree() as u128;
        let needed = (n.max(1) as u128).saturating_mul(d.saturating_pow(n as u32));
        if needed > max_cells {
            return Err(BisetError::BudgetExceeded { needed, budget: max_cells });
        }
        let d = self.degree();
        Ok(self
            .alphabet
            .words(n)
            .map(|w| {
                let (v, _) = self.act_word_unchecked(g, &w);
                v.iter().fold(0usize, |acc, &y| acc * d + y)
            })
            .collect())
    }
}

/// Bounded memo table for single-letter actions. Purely an accelerator:
/// lookups return exactly what [`BisetMachine::act_letter`] would.
#[derive(Debug)]
pub struct RestrictionCache {
    capacity: usize,
    table: Mutex<HashMap<(GroupElement, usize), (usize, GroupElement)>>,
}

impl RestrictionCache {
    pub fn new(capacity: usize) -> RestrictionCache {
        RestrictionCache { capacity, table: Mutex::new(HashMap::new()) }
    }

    pub fn act_letter(&self, machine: &BisetMachine, g: &GroupElement, x: usize) -> (usize, GroupElement) {
        let key = (g.clone(), x);
        if let Some(hit) = self.table.lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let value = machine.act_letter_unchecked(g, x);
        let mut table = self.table.lock().expect("cache lock");
        if table.len() < self.capacity {
            table.insert(key, value.clone());
        }
        value
    }

    pub fn len(&self) -> usize {
        self.table.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
