//! Exact arithmetic in free groups and free abelian groups.
//!
//! Both models sit behind [`GroupElement`]. Free-group words are stored as
//! signed letter codes into the model's generator table and are always kept
//! freely reduced; free abelian elements are integer vectors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("unknown generator symbol `{0}`")]
    UnknownSymbol(String),
    #[error("malformed token `{0}`")]
    BadToken(String),
    #[error("element does not belong to this group model")]
    ModelMismatch,
    #[error("operation `{0}` is not supported for this group model")]
    Unsupported(&'static str),
    #[error("invalid group model: {0}")]
    InvalidModel(String),
}

/// A generator or its formal inverse, stored as a signed index into the
/// generator table: `+(i+1)` is generator `i`, `-(i+1)` its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Letter {
        let code = index as i32 + 1;
        Letter(if inverse { -code } else { code })
    }

    pub fn generator(index: usize) -> Letter {
        Letter::new(index, false)
    }

    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 for a generator, -1 for a formal inverse.
    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    fn key(self) -> (usize, bool) {
        (self.index(), self.is_inverse())
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Free,
    Abelian,
}

/// A free group on named generators, or the free abelian group `Z^rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    kind: ModelKind,
    names: Vec<String>,
}

/// An element of a [`GroupModel`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupElement {
    /// Freely reduced word.
    Free(Vec<Letter>),
    /// Coordinate vector.
    Abelian(Vec<i64>),
}

fn free_reduce_into(stack: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for l in letters {
        if stack.last() == Some(&l.inverse()) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
}

pub(crate) fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut stack = Vec::new();
    free_reduce_into(&mut stack, letters);
    stack
}

impl GroupModel {
    pub fn free<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<GroupModel, GroupError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(GroupError::InvalidModel("rank must be at least 1".into()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c == '^' || c == ',') {
                return Err(GroupError::InvalidModel(format!("bad generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(GroupError::InvalidModel(format!("duplicate generator name `{n}`")));
            }
        }
        Ok(GroupModel { kind: ModelKind::Free, names })
    }

    /// `Z^rank` with standard generators named `e1..e{rank}`.
    pub fn abelian(rank: usize) -> Result<GroupModel, GroupError> {
        if rank == 0 {
            return Err(GroupError::InvalidModel("rank must be at least 1".into()));
        }
        let names = (1..=rank).map(|i| format!("e{i}")).collect();
        Ok(GroupModel { kind: ModelKind::Abelian, names })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn identity(&self) -> GroupElement {
        match self.kind {
            ModelKind::Free => GroupElement::Free(Vec::new()),
            ModelKind::Abelian => GroupElement::Abelian(vec![0; self.rank()]),
        }
    }

    pub fn generator(&self, index: usize) -> GroupElement {
        self.letter_element(Letter::generator(index))
    }

    pub fn letter_element(&self, letter: Letter) -> GroupElement {
        match self.kind {
            ModelKind::Free => GroupElement::Free(vec![letter]),
            ModelKind::Abelian => {
                let mut v = vec![0; self.rank()];
                v[letter.index()] = letter.sign() as i64;
                GroupElement::Abelian(v)
            }
        }
    }

    /// Checks that `g` is a well-formed element of this model.
    pub fn check(&self, g: &GroupElement) -> Result<(), GroupError> {
        match (self.kind, g) {
            (ModelKind::Free, GroupElement::Free(w)) => {
                if w.iter().any(|l| l.index() >= self.rank()) {
                    return Err(GroupError::ModelMismatch);
                }
                if w.windows(2).any(|p| p[0] == p[1].inverse()) {
                    return Err(GroupError::ModelMismatch);
                }
                Ok(())
            }
            (ModelKind::Abelian, GroupElement::Abelian(v)) if v.len() == self.rank() => Ok(()),
            _ => Err(GroupError::ModelMismatch),
        }
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce(&self, letters: &[Letter]) -> Result<GroupElement, GroupError> {
        if let Some(bad) = letters.iter().find(|l| l.index() >= self.rank()) {
            return Err(GroupError::UnknownSymbol(format!("#{}", bad.index())));
        }
        Ok(match self.kind {
            ModelKind::Free => GroupElement::Free(free_reduce(letters.iter().copied())),
            ModelKind::Abelian => {
                let mut v = vec![0i64; self.rank()];
                for l in letters {
                    v[l.index()] += l.sign() as i64;
                }
                GroupElement::Abelian(v)
            }
        })
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        self.check(h)?;
        g.mul(h)
    }

    pub fn invert(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(g)?;
        Ok(g.inverse())
    }

    /// Splits `g = conjugator · core · conjugator⁻¹` with `core` cyclically
    /// reduced. Free model only.
    pub fn cyclically_reduce(
        &self,
        g: &GroupElement,
    ) -> Result<(GroupElement, GroupElement), GroupError> {
        self.check(g)?;
        let GroupElement::Free(w) = g else {
            return Err(GroupError::Unsupported("cyclically_reduce"));
        };
        let (core, conj) = cyclic_split(w);
        Ok((GroupElement::Free(core), GroupElement::Free(conj)))
    }

    /// Canonical conjugacy-class representative: cyclic reduction followed by
    /// the lexicographically least rotation. Returns `(representative,
    /// conjugator)` with `g = conjugator · representative · conjugator⁻¹`.
    pub fn conjugacy_representative(
        &self,
        g: &GroupElement,
    ) -> Result<(GroupElement, GroupElement), GroupError> {
        self.check(g)?;
        let GroupElement::Free(w) = g else {
            return Err(GroupError::Unsupported("conjugacy_representative"));
        };
        let (core, conj) = cyclic_split(w);
        let k = least_rotation(&core);
        let rotated: Vec<Letter> = core[k..].iter().chain(&core[..k]).copied().collect();
        let conj = free_reduce(conj.iter().chain(&core[..k]).copied());
        Ok((GroupElement::Free(rotated), GroupElement::Free(conj)))
    }

    /// Parses a word (`a b^-1 a`) for free models or a comma-separated vector
    /// (`2,-1`) for abelian ones. The empty string is the identity.
    pub fn parse(&self, text: &str) -> Result<GroupElement, GroupError> {
        match self.kind {
            ModelKind::Free => {
                let mut letters = Vec::new();
                for tok in text.split_whitespace() {
                    letters.push(self.parse_letter(tok)?);
                }
                self.reduce(&letters)
            }
            ModelKind::Abelian => {
                let text = text.trim();
                if text.is_empty() {
                    return Ok(self.identity());
                }
                // word syntax over e1..en is accepted as well
                if text.split_whitespace().all(|t| self.parse_letter(t).is_ok()) {
                    let letters: Vec<Letter> = text
                        .split_whitespace()
                        .map(|t| self.parse_letter(t))
                        .collect::<Result<_, _>>()?;
                    return self.reduce(&letters);
                }
                let v: Vec<i64> = text
                    .split(',')
                    .map(|t| t.trim().parse::<i64>().map_err(|_| GroupError::BadToken(t.trim().into())))
                    .collect::<Result<_, _>>()?;
                if v.len() != self.rank() {
                    return Err(GroupError::ModelMismatch);
                }
                Ok(GroupElement::Abelian(v))
            }
        }
    }

    fn parse_letter(&self, tok: &str) -> Result<Letter, GroupError> {
        let (name, inverse) = match tok.split_once('^') {
            Some((n, "-1")) => (n, true),
            Some((n, "1")) => (n, false),
            Some(_) => return Err(GroupError::BadToken(tok.into())),
            None => (tok, false),
        };
        let idx = self
            .generator_index(name)
            .ok_or_else(|| GroupError::UnknownSymbol(name.into()))?;
        Ok(Letter::new(idx, inverse))
    }

    pub fn format(&self, g: &GroupElement) -> String {
        match g {
            GroupElement::Free(w) => w
                .iter()
                .map(|l| {
                    let name = self.names.get(l.index()).map(String::as_str).unwrap_or("?");
                    if l.is_inverse() {
                        format!("{name}^-1")
                    } else {
                        name.to_string()
                    }
                })
                .collect::<Vec<_>>()
                .join(" "),
            GroupElement::Abelian(v) => v.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
        }
    }
}

fn cyclic_split(w: &[Letter]) -> (Vec<Letter>, Vec<Letter>) {
    let mut i = 0;
    let mut j = w.len();
    while j > i + 1 && w[i] == w[j - 1].inverse() {
        i += 1;
        j -= 1;
    }
    (w[i..j].to_vec(), w[..i].to_vec())
}

fn least_rotation(w: &[Letter]) -> usize {
    (0..w.len())
        .min_by(|&a, &b| {
            let ra = w[a..].iter().chain(&w[..a]);
            let rb = w[b..].iter().chain(&w[..b]);
            ra.cmp(rb).then(a.cmp(&b))
        })
        .unwrap_or(0)
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        match self {
            GroupElement::Free(w) => w.is_empty(),
            GroupElement::Abelian(v) => v.iter().all(|&x| x == 0),
        }
    }

    /// Word length: letter count for free words, L¹ norm for vectors.
    pub fn length(&self) -> usize {
        match self {
            GroupElement::Free(w) => w.len(),
            GroupElement::Abelian(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Free(w) => GroupElement::Free(w.iter().rev().map(|l| l.inverse()).collect()),
            GroupElement::Abelian(v) => GroupElement::Abelian(v.iter().map(|x| -x).collect()),
        }
    }

    /// Product `self · other`. Fails only if the two elements come from
    /// different kinds of model (or abelian ranks differ).
    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        match (self, other) {
            (GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut stack = a.clone();
                free_reduce_into(&mut stack, b.iter().copied());
                Ok(GroupElement::Free(stack))
            }
            (GroupElement::Abelian(a), GroupElement::Abelian(b)) if a.len() == b.len() => {
                Ok(GroupElement::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
            _ => Err(GroupError::ModelMismatch),
        }
    }

    /// Spells the element as a sequence of generator letters, in the order
    /// they act on a word (rightmost first is the caller's concern).
    pub fn letters(&self) -> Vec<Letter> {
        match self {
            GroupElement::Free(w) => w.clone(),
            GroupElement::Abelian(v) => v
                .iter()
                .enumerate()
                .flat_map(|(i, &x)| std::iter::repeat_n(Letter::new(i, x < 0), x.unsigned_abs() as usize))
                .collect(),
        }
    }
}

/// Shortlex order: length first, then lexicographic. Letters compare as
/// `a < a^-1 < b < b^-1 < …`; vectors compare coordinate-wise.
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupElement::Free(a), GroupElement::Free(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (GroupElement::Abelian(a), GroupElement::Abelian(b)) => {
                self.length().cmp(&other.length()).then_with(|| a.cmp(b))
            }
            (GroupElement::Free(_), GroupElement::Abelian(_)) => Ordering::Less,
            (GroupElement::Abelian(_), GroupElement::Free(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    /// Model-free rendering; use [`GroupModel::format`] for generator names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Free(w) => {
                let parts: Vec<String> = w
                    .iter()
                    .map(|l| if l.is_inverse() { format!("g{}^-1", l.index()) } else { format!("g{}", l.index()) })
                    .collect();
                write!(f, "{}", parts.join(" "))
            }
            GroupElement::Abelian(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}
