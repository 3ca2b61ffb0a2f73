//! Contraction of the virtual endomorphism: nucleus closure, contraction
//! ratio estimates, and searches for Levy-type fixed identities
//! `g · w = w · g`.
//!
//! # Nucleus closure
//!
//! For a restriction depth `m ≥ 1` the closure starts from
//! `N₀ = S ∪ S⁻¹ ∪ {1}` and iterates
//!
//! ```text
//! N_{k+1} = N_k ∪ { (g·h)|_u : g, h ∈ N_k, |u| = m }
//! ```
//!
//! If the chain stabilizes, every element of length `2^k` has all of its
//! restrictions at depth `k·m` inside `N`, so the biset is contracting and
//! `N` contains the nucleus. Depth 1 is tried first; when an element or the
//! set outgrows the budget the closure is restarted at the next depth, up to
//! [`Budget::max_level`]. Running out of budget at every depth is reported
//! as inconclusive, never as a proof of non-contraction.

use std::collections::{BTreeSet, HashSet};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::biset::{BisetMachine, Word};
use crate::group::{GroupElement, Letter, ModelKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nucleus_size: usize,
    pub max_element_length: usize,
    /// Closure iterations per restriction depth.
    pub max_depth: usize,
    /// Largest restriction depth `m` tried.
    pub max_level: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nucleus_size: 500, max_element_length: 50, max_depth: 30, max_level: 4 }
    }
}

impl Budget {
    pub fn is_valid(&self) -> bool {
        self.max_nucleus_size > 0 && self.max_element_length > 0 && self.max_depth > 0 && self.max_level > 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionStatus {
    Contracting,
    BudgetExceeded,
    ObstructionFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WitnessKind {
    /// `g · w = w` and `g|_w = g`.
    ExactFixed,
    /// `g₀ → g₁ → … → g₀` with `gᵢ · xᵢ = xᵢ · gᵢ₊₁`.
    RestrictionCycle { orbit: Vec<GroupElement> },
}

/// A nontrivial `g` and a word `w` with `g · w = w · g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevyWitness {
    pub element: GroupElement,
    pub word: Word,
    pub kind: WitnessKind,
}

impl LevyWitness {
    /// Re-derives the defining identity through [`BisetMachine::act_word`].
    pub fn replay(&self, machine: &BisetMachine) -> bool {
        if self.element.is_identity() || self.word.is_empty() {
            return false;
        }
        let Ok((v, r)) = machine.act_word(&self.element, &self.word) else {
            return false;
        };
        if v != self.word || r != self.element {
            return false;
        }
        match &self.kind {
            WitnessKind::ExactFixed => true,
            WitnessKind::RestrictionCycle { orbit } => {
                orbit.len() == self.word.len()
                    && orbit[0] == self.element
                    && orbit.iter().enumerate().all(|(i, g)| {
                        let next = &orbit[(i + 1) % orbit.len()];
                        machine.act_letter(g, self.word[i]).ok() == Some((self.word[i], next.clone()))
                    })
            }
        }
    }

    pub fn describe(&self, machine: &BisetMachine) -> String {
        format!(
            "({}, \"{}\")",
            machine.model().format(&self.element),
            machine.alphabet().format_word(&self.word)
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub level: usize,
    pub iterations: usize,
    pub peak_size: usize,
    pub outcome: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClosureStats {
    pub iterations: usize,
    pub peak_size: usize,
    pub levels: Vec<LevelStats>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionReport {
    pub status: ContractionStatus,
    /// Restriction depth at which the closure stabilized (or last tried).
    pub level: usize,
    /// The stabilized set, shortlex-sorted. Empty unless contracting.
    pub nucleus: Vec<GroupElement>,
    /// Elements of `nucleus` that are restrictions of other elements of
    /// the recurrent part (the nucleus proper).
    pub recurrent: Vec<GroupElement>,
    pub witness: Option<LevyWitness>,
    pub stats: ClosureStats,
}

/// All distinct restrictions `g|_u` with `|u| = depth`.
pub fn restrictions_at_depth(machine: &BisetMachine, g: &GroupElement, depth: usize) -> HashSet<GroupElement> {
    let mut frontier: HashSet<GroupElement> = HashSet::from([g.clone()]);
    for _ in 0..depth {
        let mut next = HashSet::with_capacity(frontier.len() * machine.degree());
        for h in &frontier {
            if h.is_identity() {
                next.insert(h.clone());
                continue;
            }
            for x in 0..machine.degree() {
                next.insert(machine.act_letter_unchecked(h, x).1);
            }
        }
        frontier = next;
    }
    frontier
}

/// `Some(x)` if `g` is nontrivial and `g · x = x · g` for the letter `x`.
fn fixed_letter_witness(machine: &BisetMachine, g: &GroupElement) -> Option<LevyWitness> {
    if g.is_identity() {
        return None;
    }
    (0..machine.degree()).find_map(|x| {
        let (y, r) = machine.act_letter_unchecked(g, x);
        (y == x && &r == g).then(|| LevyWitness { element: g.clone(), word: vec![x], kind: WitnessKind::ExactFixed })
    })
}

enum ClosureOutcome {
    Stable(BTreeSet<GroupElement>),
    Exceeded(&'static str),
    Obstruction(LevyWitness),
}

const CHUNK: usize = 256;

fn closure_at_level(
    machine: &BisetMachine,
    budget: &Budget,
    level: usize,
    stats: &mut LevelStats,
) -> ClosureOutcome {
    let mut set: BTreeSet<GroupElement> = BTreeSet::new();
    set.insert(machine.model().identity());
    set.extend(machine.symmetric_generators());
    for g in &set {
        if let Some(w) = fixed_letter_witness(machine, g) {
            return ClosureOutcome::Obstruction(w);
        }
    }
    let mut delta: Vec<GroupElement> = set.iter().cloned().collect();
    stats.peak_size = set.len();
    for iteration in 1..=budget.max_depth {
        stats.iterations = iteration;
        let all: Vec<GroupElement> = set.iter().cloned().collect();
        let fresh: HashSet<&GroupElement> = delta.iter().collect();
        // pairs (g, h) with at least one side new since the last round
        let pairs: Vec<(&GroupElement, &GroupElement)> = all
            .iter()
            .flat_map(|g| {
                let g_new = fresh.contains(g);
                let fresh = &fresh;
                all.iter().filter(move |h| g_new || fresh.contains(h)).map(move |h| (g, h))
            })
            .collect();
        let room = budget.max_nucleus_size.saturating_sub(set.len());
        let chunks: Vec<Result<HashSet<GroupElement>, &'static str>> = pairs
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut local = HashSet::new();
                for (g, h) in chunk {
                    let product = g.mul(h).expect("same model");
                    for r in restrictions_at_depth(machine, &product, level) {
                        if r.length() > budget.max_element_length {
                            return Err("element length");
                        }
                        if !set.contains(&r) {
                            local.insert(r);
                            if local.len() > room {
                                return Err("nucleus size");
                            }
                        }
                    }
                }
                Ok(local)
            })
            .collect();
        let mut new: BTreeSet<GroupElement> = BTreeSet::new();
        for c in chunks {
            match c {
                Ok(local) => new.extend(local),
                Err(why) => return ClosureOutcome::Exceeded(why),
            }
        }
        if new.is_empty() {
            return ClosureOutcome::Stable(set);
        }
        if set.len() + new.len() > budget.max_nucleus_size {
            return ClosureOutcome::Exceeded("nucleus size");
        }
        for g in &new {
            if let Some(w) = fixed_letter_witness(machine, g) {
                return ClosureOutcome::Obstruction(w);
            }
        }
        delta = new.iter().cloned().collect();
        set.extend(new);
        stats.peak_size = set.len();
    }
    ClosureOutcome::Exceeded("iterations")
}

/// Largest subset `R ⊆ set` in which every element is a depth-`level`
/// restriction of some element of `R`.
fn recurrent_part(machine: &BisetMachine, set: &BTreeSet<GroupElement>, level: usize) -> Vec<GroupElement> {
    let succ: Vec<(GroupElement, HashSet<GroupElement>)> =
        set.iter().map(|g| (g.clone(), restrictions_at_depth(machine, g, level))).collect();
    let mut alive: BTreeSet<GroupElement> = set.clone();
    loop {
        let hit: HashSet<&GroupElement> = succ
            .iter()
            .filter(|(g, _)| alive.contains(g))
            .flat_map(|(_, s)| s.iter())
            .collect();
        let next: BTreeSet<GroupElement> = alive.iter().filter(|g| hit.contains(g)).cloned().collect();
        if next.len() == alive.len() {
            return next.into_iter().collect();
        }
        alive = next;
    }
}

/// Nucleus closure with depth escalation; see the module docs.
pub fn nucleus(machine: &BisetMachine, budget: &Budget) -> ContractionReport {
    let mut stats = ClosureStats::default();
    let mut last_level = 1;
    for level in 1..=budget.max_level.max(1) {
        last_level = level;
        let mut ls = LevelStats { level, ..LevelStats::default() };
        let outcome = closure_at_level(machine, budget, level, &mut ls);
        stats.iterations += ls.iterations;
        stats.peak_size = stats.peak_size.max(ls.peak_size);
        match outcome {
            ClosureOutcome::Stable(set) => {
                ls.outcome = "stable".into();
                stats.levels.push(ls);
                let recurrent = recurrent_part(machine, &set, level);
                return ContractionReport {
                    status: ContractionStatus::Contracting,
                    level,
                    nucleus: set.into_iter().collect(),
                    recurrent,
                    witness: None,
                    stats,
                };
            }
            ClosureOutcome::Obstruction(w) => {
                assert!(w.replay(machine), "emitted witness must replay");
                ls.outcome = "obstruction".into();
                stats.levels.push(ls);
                return ContractionReport {
                    status: ContractionStatus::ObstructionFound,
                    level,
                    nucleus: Vec::new(),
                    recurrent: Vec::new(),
                    witness: Some(w),
                    stats,
                };
            }
            ClosureOutcome::Exceeded(why) => {
                ls.outcome = format!("budget exceeded: {why}");
                stats.levels.push(ls);
            }
        }
    }
    ContractionReport {
        status: ContractionStatus::BudgetExceeded,
        level: last_level,
        nucleus: Vec::new(),
        recurrent: Vec::new(),
        witness: None,
        stats,
    }
}

/// A triple `(g, h, (g·h)|_u)` escaping a claimed closed set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureViolation {
    pub left: GroupElement,
    pub right: GroupElement,
    pub restriction: GroupElement,
}

/// Exhaustively checks that `set` is closed under `(g·h)|_u` for all
/// `g, h ∈ set` and all words `|u| = level`, contains the identity, and is
/// inverse-closed.
pub fn verify_closure(machine: &BisetMachine, set: &[GroupElement], level: usize) -> Result<(), ClosureViolation> {
    let members: HashSet<&GroupElement> = set.iter().collect();
    let id = machine.model().identity();
    if !members.contains(&id) {
        return Err(ClosureViolation { left: id.clone(), right: id.clone(), restriction: id });
    }
    for g in set {
        if !members.contains(&g.inverse()) {
            return Err(ClosureViolation { left: g.clone(), right: id.clone(), restriction: g.inverse() });
        }
    }
    set.par_iter().try_for_each(|g| {
        for h in set {
            let p = g.mul(h).expect("same model");
            for r in restrictions_at_depth(machine, &p, level) {
                if !members.contains(&r) {
                    return Err(ClosureViolation { left: g.clone(), right: h.clone(), restriction: r });
                }
            }
        }
        Ok(())
    })
}

/// How the elements of a ratio estimate were chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SampleMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioOptions {
    /// Enumerate exhaustively while the candidate count stays below this.
    pub exhaustive_limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for RatioOptions {
    fn default() -> Self {
        RatioOptions { exhaustive_limit: 200_000, samples: 50_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub depth: usize,
    pub max_length: usize,
    /// `max ‖φⁿ(g)‖ / ‖g‖` over the examined domain elements.
    pub max_ratio: Ratio<u64>,
    /// `max_ratio^{1/n}`.
    pub estimate: f64,
    /// `max_ratio^{1/n}` when it is an exact rational.
    pub exact: Option<Ratio<u64>>,
    pub argmax: Option<GroupElement>,
    pub examined: usize,
    pub in_domain: usize,
    pub sampling: SampleMode,
    /// No domain element was found in the length window.
    pub inconclusive: bool,
    /// Every image `φⁿ(g)` was trivial.
    pub degenerate: bool,
}

fn exact_root(n: u64, k: u32) -> Option<u64> {
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    for cand in [r.saturating_sub(1), r, r + 1] {
        if cand.checked_pow(k) == Some(n) {
            r = cand;
            return Some(r);
        }
    }
    None
}

fn free_words_of_length(rank: usize, len: usize) -> u128 {
    if len == 0 {
        1
    } else {
        let k = 2 * rank as u128;
        k * (k - 1).pow(len as u32 - 1)
    }
}

/// All reduced free words of exactly `len` letters, in shortlex order.
pub(crate) fn free_words(rank: usize, len: usize) -> Vec<Vec<Letter>> {
    let letters: Vec<Letter> = (0..rank).flat_map(|i| [Letter::new(i, false), Letter::new(i, true)]).collect();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * letters.len());
        for w in &out {
            for &l in &letters {
                if w.last() != Some(&l.inverse()) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// All integer vectors of the given rank with L¹ norm exactly `len`, in
/// lexicographic order.
pub(crate) fn vectors_of_norm(rank: usize, len: usize) -> Vec<Vec<i64>> {
    fn rec(rank: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == rank - 1 {
            for last in [-left, left] {
                prefix.push(last);
                out.push(prefix.clone());
                prefix.pop();
                if left == 0 {
                    break;
                }
            }
            return;
        }
        for x in -left..=left {
            prefix.push(x);
            rec(rank, left - x.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(rank, len as i64, &mut Vec::new(), &mut out);
    out
}

fn vectors_of_norm_count(rank: usize, len: usize) -> u128 {
    // coarse upper bound is enough to pick a strategy
    (2 * len as u128 + 1).saturating_pow(rank as u32 - 1) * 2
}

/// Estimates the contraction ratio from `φⁿ(g) = g|_{x₀ⁿ}` over elements
/// of length in `[⌈L/2⌉, L]` fixing `x₀ⁿ`.
pub fn contraction_ratio_estimate(
    machine: &BisetMachine,
    depth: usize,
    max_length: usize,
    opts: &RatioOptions,
) -> RatioEstimate {
    assert!(depth >= 1 && max_length >= 2, "depth ≥ 1 and L ≥ 2");
    let base: Word = vec![0; depth];
    let lo = max_length.div_ceil(2);
    let model = machine.model();
    let rank = model.rank();
    let total: u128 = (lo..=max_length)
        .map(|l| match model.kind() {
            ModelKind::Free => free_words_of_length(rank, l),
            ModelKind::Abelian => vectors_of_norm_count(rank, l),
        })
        .sum();
    let exhaustive = total <= opts.exhaustive_limit as u128;
    let candidates: Vec<GroupElement> = if exhaustive {
        (lo..=max_length)
            .flat_map(|l| match model.kind() {
                ModelKind::Free => free_words(rank, l).into_iter().map(GroupElement::Free).collect::<Vec<_>>(),
                ModelKind::Abelian => vectors_of_norm(rank, l).into_iter().map(GroupElement::Abelian).collect(),
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.samples)
            .map(|_| {
                let len = rng.gen_range(lo..=max_length);
                match model.kind() {
                    ModelKind::Free => {
                        let mut w: Vec<Letter> = Vec::with_capacity(len);
                        while w.len() < len {
                            let l = Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5));
                            if w.last() != Some(&l.inverse()) {
                                w.push(l);
                            }
                        }
                        GroupElement::Free(w)
                    }
                    ModelKind::Abelian => {
                        // random composition of `len` into signed coordinates
                        let mut v = vec![0i64; rank];
                        for _ in 0..len {
                            v[rng.gen_range(0..rank)] += 1;
                        }
                        for x in v.iter_mut() {
                            if rng.gen_bool(0.5) {
                                *x = -*x;
                            }
                        }
                        GroupElement::Abelian(v)
                    }
                }
            })
            .collect()
    };
    let mut best: Option<(Ratio<u64>, GroupElement)> = None;
    let mut in_domain = 0;
    for g in &candidates {
        let (v, image) = machine.act_word_unchecked(g, &base);
        if v != base {
            continue;
        }
        in_domain += 1;
        let r = Ratio::new(image.length() as u64, g.length() as u64);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, g.clone()));
        }
    }
    let sampling = if exhaustive {
        SampleMode::Exhaustive
    } else {
        SampleMode::Sampled { samples: opts.samples, seed: opts.seed }
    };
    let (max_ratio, argmax) = match best {
        Some((r, g)) => (r, Some(g)),
        None => (Ratio::from_integer(0), None),
    };
    let k = depth as u32;
    let exact = match (exact_root(*max_ratio.numer(), k), exact_root(*max_ratio.denom(), k)) {
        (Some(p), Some(q)) => Some(Ratio::new(p, q)),
        _ => None,
    };
    let estimate = (*max_ratio.numer() as f64 / *max_ratio.denom() as f64).powf(1.0 / depth as f64);
    RatioEstimate {
        depth,
        max_length,
        max_ratio,
        estimate,
        exact,
        argmax,
        examined: candidates.len(),
        in_domain,
        sampling,
        inconclusive: in_domain == 0,
        degenerate: in_domain > 0 && *max_ratio.numer() == 0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevyOptions {
    pub max_g: usize,
    pub max_w: usize,
    /// Orbit length followed when scanning for restriction cycles.
    pub cycle_depth: usize,
}

impl LevyOptions {
    pub fn new(max_g: usize, max_w: usize) -> LevyOptions {
        LevyOptions { max_g, max_w, cycle_depth: 4 * max_w.max(1) }
    }
}

/// Nontrivial candidates of length ≤ `max_len` in shortlex order; free
/// words are restricted to canonical conjugacy representatives, vectors to
/// those whose first nonzero coordinate is positive.
pub fn levy_candidates(machine: &BisetMachine, max_len: usize) -> Vec<GroupElement> {
    let model = machine.model();
    let mut out = Vec::new();
    for len in 1..=max_len {
        match model.kind() {
            ModelKind::Free => {
                for w in free_words(model.rank(), len) {
                    let g = GroupElement::Free(w);
                    let (rep, _) = model.conjugacy_representative(&g).expect("free model");
                    if rep == g {
                        out.push(g);
                    }
                }
            }
            ModelKind::Abelian => {
                // g and g⁻¹ fix the same words, so keep one of each pair
                out.extend(
                    vectors_of_norm(model.rank(), len)
                        .into_iter()
                        .filter(|v| v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0))
                        .map(GroupElement::Abelian),
                );
            }
        }
    }
    out
}

/// Searches for `g · w = w · g` with `g` nontrivial. Words are explored
/// breadth-first along letters fixed by the running restriction, so the
/// first hit is minimal in `(g, w)` length-lexicographic order. If none is
/// found, restriction orbits are followed for cycles.
pub fn levy_search(machine: &BisetMachine, opts: &LevyOptions) -> Option<LevyWitness> {
    let candidates = levy_candidates(machine, opts.max_g);
    for g in &candidates {
        let mut frontier: Vec<(Word, GroupElement)> = vec![(Vec::new(), g.clone())];
        for _ in 0..opts.max_w {
            let mut next = Vec::new();
            for (w, r) in &frontier {
                for x in 0..machine.degree() {
                    let (y, r2) = machine.act_letter_unchecked(r, x);
                    if y == x {
                        let mut w2 = w.clone();
                        w2.push(x);
                        if &r2 == g {
                            let wit = LevyWitness { element: g.clone(), word: w2, kind: WitnessKind::ExactFixed };
                            assert!(wit.replay(machine), "emitted witness must replay");
                            return Some(wit);
                        }
                        next.push((w2, r2));
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
    }
    for g in &candidates {
        let orbit = restriction_cycle(machine, g, opts.cycle_depth);
        if let CycleOutcome::Cycle { start, period } = orbit.outcome {
            let cyc = orbit.orbit[start..start + period].to_vec();
            let word = orbit.letters[start..start + period].to_vec();
            let wit = LevyWitness {
                element: cyc[0].clone(),
                word,
                kind: WitnessKind::RestrictionCycle { orbit: cyc },
            };
            assert!(wit.replay(machine), "emitted witness must replay");
            return Some(wit);
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CycleOutcome {
    /// `orbit[start + period] == orbit[start]`, all nontrivial.
    Cycle { start: usize, period: usize },
    /// The orbit reached the identity.
    Trivial,
    /// The last element fixes no letter.
    DeadEnd,
    DepthExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleReport {
    pub orbit: Vec<GroupElement>,
    /// `letters[k]` is the fixed letter used to pass from `orbit[k]` to
    /// `orbit[k+1]`.
    pub letters: Word,
    pub outcome: CycleOutcome,
}

impl CycleReport {
    /// Concatenated word `x₀x₁…` along the orbit.
    pub fn word(&self) -> &[usize] {
        &self.letters
    }
}

/// Follows `g_{k+1} = g_k|_{x_k}` through the smallest letter `x_k` fixed by
/// `g_k`, for at most `depth` steps.
pub fn restriction_cycle(machine: &BisetMachine, g: &GroupElement, depth: usize) -> CycleReport {
    let mut orbit = vec![g.clone()];
    let mut letters = Vec::new();
    if g.is_identity() {
        return CycleReport { orbit, letters, outcome: CycleOutcome::Trivial };
    }
    for _ in 0..depth {
        let cur = orbit.last().expect("nonempty");
        let step = (0..machine.degree()).find_map(|x| {
            let (y, r) = machine.act_letter_unchecked(cur, x);
            (y == x).then_some((x, r))
        });
        let Some((x, next)) = step else {
            return CycleReport { orbit, letters, outcome: CycleOutcome::DeadEnd };
        };
        letters.push(x);
        if next.is_identity() {
            orbit.push(next);
            return CycleReport { orbit, letters, outcome: CycleOutcome::Trivial };
        }
        if let Some(start) = orbit.iter().position(|h| h == &next) {
            let period = orbit.len() - start;
            orbit.push(next);
            return CycleReport { orbit, letters, outcome: CycleOutcome::Cycle { start, period } };
        }
        orbit.push(next);
    }
    CycleReport { orbit, letters, outcome: CycleOutcome::DepthExhausted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(machine: &BisetMachine, v: &[GroupElement]) -> Vec<String> {
        v.iter().map(|g| machine.model().format(g)).collect()
    }

    #[test]
    fn odometer_nucleus_is_three_elements() {
        let m = fixtures::odometer();
        let r = nucleus(&m, &Budget::default());
        assert_eq!(r.status, ContractionStatus::Contracting);
        assert_eq!(r.level, 1);
        assert_eq!(names(&m, &r.nucleus), ["", "a", "a^-1"]);
        assert_eq!(r.recurrent, r.nucleus);
        verify_closure(&m, &r.nucleus, r.level).unwrap();
    }

    #[test]
    fn obstructed_machine_reports_witness() {
        let m = fixtures::obstructed();
        let r = nucleus(&m, &Budget::default());
        assert_eq!(r.status, ContractionStatus::ObstructionFound);
        let w = r.witness.unwrap();
        assert_eq!(w.describe(&m), "(g, \"0\")");
        assert!(w.replay(&m));
    }

    #[test]
    fn basilica_closure_is_closed() {
        let m = fixtures::basilica();
        let r = nucleus(&m, &Budget::default());
        assert_eq!(r.status, ContractionStatus::Contracting);
        verify_closure(&m, &r.nucleus, r.level).unwrap();
        assert!(r.recurrent.iter().all(|g| r.nucleus.contains(g)));
    }

    #[test]
    fn closure_violation_is_detected() {
        let m = fixtures::basilica();
        let set = m.symmetric_generators().into_iter().chain([m.model().identity()]).collect::<Vec<_>>();
        assert!(verify_closure(&m, &set, 1).is_err());
    }

    #[test]
    fn budget_exceeded_is_inconclusive() {
        let m = fixtures::basilica();
        let tight = Budget { max_nucleus_size: 6, max_element_length: 50, max_depth: 30, max_level: 1 };
        let r = nucleus(&m, &tight);
        assert_eq!(r.status, ContractionStatus::BudgetExceeded);
        assert!(r.nucleus.is_empty());
    }

    #[test]
    fn ratio_odometer_depth_one() {
        let m = fixtures::odometer();
        let e = contraction_ratio_estimate(&m, 1, 8, &RatioOptions::default());
        assert_eq!(e.exact, Some(Ratio::new(1, 2)));
        assert_eq!(e.sampling, SampleMode::Exhaustive);
        // a^4, a^6, a^8 and their inverses
        assert_eq!(e.in_domain, 6);
    }

    #[test]
    fn ratio_doubling_torus_halves() {
        let m = fixtures::torus_machine([2, 0, 0, 2]);
        let e = contraction_ratio_estimate(&m, 1, 8, &RatioOptions::default());
        assert_eq!(e.exact, Some(Ratio::new(1, 2)));
        assert!(!e.degenerate && !e.inconclusive);
    }

    #[test]
    fn ratio_finite_action_is_degenerate() {
        let text = r#"{"model":{"kind":"free","generators":["a"]},"alphabet":["0","1"],
            "generators":[{"name":"a","perm":[1,0],"restrictions":["",""]}]}"#;
        let m = BisetMachine::from_json(text).unwrap();
        let e = contraction_ratio_estimate(&m, 1, 6, &RatioOptions::default());
        assert!(e.degenerate);
        assert_eq!(e.max_ratio, Ratio::from_integer(0));
    }

    #[test]
    fn ratio_sampling_is_seeded() {
        let m = fixtures::basilica();
        let opts = RatioOptions { exhaustive_limit: 10, samples: 2000, seed: 7 };
        let a = contraction_ratio_estimate(&m, 2, 12, &opts);
        let b = contraction_ratio_estimate(&m, 2, 12, &opts);
        assert_eq!(a, b);
        assert_eq!(a.sampling, SampleMode::Sampled { samples: 2000, seed: 7 });
    }

    #[test]
    fn levy_examples() {
        let m = fixtures::obstructed();
        let w = levy_search(&m, &LevyOptions::new(2, 2)).unwrap();
        assert_eq!(w.describe(&m), "(g, \"0\")");
        assert_eq!(w.kind, WitnessKind::ExactFixed);
        assert_eq!(levy_search(&fixtures::odometer(), &LevyOptions::new(4, 4)), None);
        let t = fixtures::torus_machine([2, 0, 1, 1]);
        let w = levy_search(&t, &LevyOptions::new(4, 4)).unwrap();
        assert_eq!(w.element, GroupElement::Abelian(vec![0, 1]));
        assert_eq!(w.word, vec![0]);
        assert!(w.replay(&t));
    }

    #[test]
    fn restriction_cycle_examples() {
        let m = fixtures::odometer();
        let a2 = m.model().parse("a a").unwrap();
        let r = restriction_cycle(&m, &a2, 4);
        assert_eq!(names(&m, &r.orbit), ["a a", "a"]);
        assert_eq!(r.outcome, CycleOutcome::DeadEnd);
        let r = restriction_cycle(&m, &m.model().identity(), 4);
        assert_eq!(r.outcome, CycleOutcome::Trivial);
        let o = fixtures::obstructed();
        let g = o.model().generator(0);
        let r = restriction_cycle(&o, &g, 4);
        assert_eq!(r.outcome, CycleOutcome::Cycle { start: 0, period: 1 });
        assert_eq!(r.word(), &[0]);
    }

    #[test]
    fn candidates_are_canonical() {
        let m = fixtures::basilica();
        let c = levy_candidates(&m, 2);
        // a, a^-1, b, b^-1, then length-2 cyclic reps: aa, ab, ab^-1, a^-1a^-1, ... (least rotations only)
        assert_eq!(&names(&m, &c)[..4], ["a", "a^-1", "b", "b^-1"]);
        for g in &c {
            assert_eq!(&m.model().conjugacy_representative(g).unwrap().0, g);
        }
        assert!(!names(&m, &c).contains(&"b a".to_string()));
    }

    #[test]
    fn vector_enumeration_counts() {
        assert_eq!(vectors_of_norm(2, 0), vec![vec![0, 0]]);
        assert_eq!(vectors_of_norm(2, 1).len(), 4);
        assert_eq!(vectors_of_norm(2, 3).len(), 12);
        assert_eq!(free_words(2, 3).len(), 36);
    }
}
