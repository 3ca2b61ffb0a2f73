//! Leveled graphs: truncations of the self-similarity complex, the shift
//! map, BFS metrics, a four-point hyperbolicity probe, and DOT/JSON export.
//!
//! The same [`ComplexGraph`] also holds tile-adjacency graphs built by
//! [`crate::subdivision::tile_graph`].
//!
//! Distances and δ are those of the finite truncation, which is not
//! isometrically embedded in the full complex.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::biset::{BisetMachine, Word};
use crate::group::{GroupElement, Letter};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("truncation needs {needed} vertices, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: usize },
    #[error("the empty word has no shift")]
    EmptyWord,
    #[error("unknown export format '{0}' (expected dot or json)")]
    UnknownFormat(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("graph file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Distance between vertices in different components.
pub const UNREACHABLE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub level: usize,
}

/// An undirected edge with `u < v`. Parallel edges of the same kind are
/// merged; their labels are kept in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub kind: EdgeKind,
    pub labels: Vec<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexGraph {
    vertices: Vec<Vertex>,
    index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<(usize, usize, EdgeKind), usize>,
    adjacency: Vec<Vec<usize>>,
}

impl ComplexGraph {
    pub fn new() -> ComplexGraph {
        ComplexGraph::default()
    }

    /// Adds a vertex; labels must be unique.
    pub fn add_vertex(&mut self, label: impl Into<String>, level: usize) -> usize {
        let label = label.into();
        assert!(!self.index.contains_key(&label), "duplicate vertex {label:?}");
        let id = self.vertices.len();
        self.index.insert(label.clone(), id);
        self.vertices.push(Vertex { label, level });
        self.adjacency.push(Vec::new());
        id
    }

    /// Adds or merges an edge. Self-loops are dropped. Returns whether a new
    /// undirected edge was created.
    pub fn add_edge(&mut self, a: usize, b: usize, kind: EdgeKind, label: impl Into<String>) -> bool {
        if a == b {
            return false;
        }
        let (u, v) = (a.min(b), a.max(b));
        let label = label.into();
        if let Some(&e) = self.edge_index.get(&(u, v, kind)) {
            let edge = &mut self.edges[e];
            edge.multiplicity += 1;
            if !edge.labels.contains(&label) {
                edge.labels.push(label);
            }
            return false;
        }
        self.edge_index.insert((u, v, kind), self.edges.len());
        self.edges.push(Edge { u, v, kind, labels: vec![label], multiplicity: 1 });
        if !self.adjacency[u].contains(&v) {
            self.adjacency[u].push(v);
            self.adjacency[v].push(u);
        }
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn level(&self, u: usize) -> usize {
        self.vertices[u].level
    }

    pub fn max_level(&self) -> usize {
        self.vertices.iter().map(|v| v.level).max().unwrap_or(0)
    }

    pub fn level_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_level() + 1];
        for v in &self.vertices {
            counts[v.level] += 1;
        }
        counts
    }

    pub fn edges_of_kind(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    /// Vertical neighbours of `u` on level `level(u) - 1`.
    pub fn parents(&self, u: usize) -> Vec<usize> {
        self.vertical_neighbors(u, |l| l + 1 == self.level(u))
    }

    /// Vertical neighbours of `u` on level `level(u) + 1`.
    pub fn children(&self, u: usize) -> Vec<usize> {
        self.vertical_neighbors(u, |l| l == self.level(u) + 1)
    }

    fn vertical_neighbors(&self, u: usize, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .adjacency[u]
            .iter()
            .copied()
            .filter(|&v| keep(self.level(v)) && self.edge_index.contains_key(&(u.min(v), u.max(v), EdgeKind::Vertical)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Breadth-first distances from `source`; [`UNREACHABLE`] marks other
    /// components.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHABLE; self.vertices.len()];
        let mut queue = std::collections::VecDeque::from([source]);
        dist[source] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == UNREACHABLE {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertices.is_empty() || self.distances_from(0).iter().all(|&d| d != UNREACHABLE)
    }

    /// All-pairs distances, row-major.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.vertices.len()).into_par_iter().map(|u| self.distances_from(u)).collect()
    }

    fn sorted_edges(&self) -> Vec<&Edge> {
        let mut edges: Vec<&Edge> = self.edges.iter().collect();
        edges.sort_by_key(|e| (e.u, e.v, e.kind));
        edges
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph complex {\n  node [shape=circle];\n");
        let mut by_level: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            by_level.entry(v.level).or_default().push(i);
        }
        for (level, ids) in &by_level {
            let _ = writeln!(s, "  {{ rank=same; // level {level}");
            for &i in ids {
                let label = &self.vertices[i].label;
                let shown = if label.is_empty() { "∅" } else { label };
                let _ = writeln!(s, "    n{i} [label=\"{}\"];", escape(shown));
            }
            s.push_str("  }\n");
        }
        for e in self.sorted_edges() {
            let style = match e.kind {
                EdgeKind::Horizontal => "solid",
                EdgeKind::Vertical => "dashed",
            };
            let mut label = e.labels.join(",");
            if e.multiplicity > e.labels.len() {
                let _ = write!(label, " ×{}", e.multiplicity);
            }
            let _ = writeln!(s, "  n{} -- n{} [label=\"{}\", style={style}];", e.u, e.v, escape(&label));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            vertices: self.vertices.iter().map(|v| VertexDoc { word: v.label.clone(), level: v.level }).collect(),
            edges: self
                .sorted_edges()
                .into_iter()
                .map(|e| EdgeDoc {
                    u: self.vertices[e.u].label.clone(),
                    v: self.vertices[e.v].label.clone(),
                    kind: e.kind,
                    label: e.labels.join(","),
                    multiplicity: e.multiplicity,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<ComplexGraph, ComplexError> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        let mut g = ComplexGraph::new();
        for v in doc.vertices {
            if g.find(&v.word).is_some() {
                return Err(ComplexError::Malformed(format!("duplicate vertex '{}'", v.word)));
            }
            g.add_vertex(v.word, v.level);
        }
        for e in doc.edges {
            let u = g.find(&e.u).ok_or_else(|| ComplexError::UnknownVertex(e.u.clone()))?;
            let v = g.find(&e.v).ok_or_else(|| ComplexError::UnknownVertex(e.v.clone()))?;
            let labels: Vec<&str> = if e.label.is_empty() { vec![""] } else { e.label.split(',').collect() };
            if e.multiplicity < labels.len() {
                return Err(ComplexError::Malformed(format!("multiplicity of {}–{} below label count", e.u, e.v)));
            }
            if u == v {
                return Err(ComplexError::Malformed(format!("self-loop at '{}'", e.u)));
            }
            for l in labels {
                g.add_edge(u, v, e.kind, l);
            }
            let id = g.edge_index[&(u.min(v), u.max(v), e.kind)];
            g.edges[id].multiplicity = e.multiplicity;
        }
        Ok(g)
    }

    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Dot => self.to_dot(),
            ExportFormat::Json => self.to_json(),
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    word: String,
    level: usize,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: String,
    v: String,
    kind: EdgeKind,
    label: String,
    #[serde(default = "one")]
    multiplicity: usize,
}

fn one() -> usize {
    1
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = ComplexError;

    fn from_str(s: &str) -> Result<ExportFormat, ComplexError> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(ComplexError::UnknownFormat(other.to_string())),
        }
    }
}

/// Vertex id of `w` in a truncation built by [`build_truncation`].
pub fn word_id(degree: usize, w: &[usize]) -> usize {
    let offset: usize = (0..w.len()).map(|k| degree.pow(k as u32)).sum();
    offset + w.iter().fold(0, |acc, &x| acc * degree + x)
}

/// The truncation `Σ_n`: all words of length ≤ `n`, horizontal edges
/// `{w, s·w}` for generators `s`, vertical edges `{w, xw}`.
pub fn build_truncation(machine: &BisetMachine, n: usize, max_vertices: usize) -> Result<ComplexGraph, ComplexError> {
    let d = machine.degree() as u128;
    let needed: u128 = (0..=n as u32).map(|k| d.saturating_pow(k)).fold(0u128, u128::saturating_add);
    if needed > max_vertices as u128 {
        return Err(ComplexError::BudgetExceeded { needed, budget: max_vertices });
    }
    let alphabet = machine.alphabet();
    let degree = machine.degree();
    let mut g = ComplexGraph::new();
    let mut levels: Vec<Vec<Word>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let words: Vec<Word> = alphabet.words(k).collect();
        for w in &words {
            g.add_vertex(alphabet.format_word(w), k);
        }
        levels.push(words);
    }
    let names = machine.model().generator_names().to_vec();
    for words in &levels {
        for w in words {
            let id = word_id(degree, w);
            for (i, name) in names.iter().enumerate() {
                let s = machine.model().letter_element(Letter::generator(i));
                let (v, _) = machine.act_word_unchecked(&s, w);
                g.add_edge(id, word_id(degree, &v), EdgeKind::Horizontal, name.as_str());
            }
        }
    }
    for words in &levels[..n] {
        for w in words {
            for x in 0..degree {
                let mut child = vec![x];
                child.extend_from_slice(w);
                g.add_edge(word_id(degree, w), word_id(degree, &child), EdgeKind::Vertical, alphabet.labels()[x].as_str());
            }
        }
    }
    Ok(g)
}

/// Deletes the first letter.
pub fn shift(w: &[usize]) -> Result<Word, ComplexError> {
    match w.split_first() {
        Some((_, rest)) => Ok(rest.to_vec()),
        None => Err(ComplexError::EmptyWord),
    }
}

pub fn graph_distance(g: &ComplexGraph, u: usize, v: usize) -> usize {
    g.distances_from(u)[v]
}

/// A horizontal edge `{x·w′, y·w″}` whose shifted endpoints are not related
/// by the restriction `s|_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftViolation {
    pub generator: usize,
    pub word: Word,
    pub image: Word,
}

/// For each generator `s` and each word `x·w′` on levels `2..=n`, checks
/// that `s·(x·w′) = y·w″` implies `s|_x · w′ = w″`, and that the edge
/// `{w′, w″}` is present in `graph` whenever `s|_x` is a generator or its
/// inverse.
pub fn shift_equivariance_violations(machine: &BisetMachine, graph: &ComplexGraph, n: usize) -> Vec<ShiftViolation> {
    let alphabet = machine.alphabet();
    let mut out = Vec::new();
    for k in 2..=n {
        for w in alphabet.words(k) {
            for i in 0..machine.model().rank() {
                let s = machine.model().generator(i);
                let (image, _) = machine.act_word_unchecked(&s, &w);
                let (_, r) = machine.act_letter_unchecked(&s, w[0]);
                let (projected, _) = machine.act_word_unchecked(&r, &w[1..]);
                let mut ok = projected == image[1..];
                if ok && projected != w[1..] {
                    if let GroupElement::Free(letters) = &r {
                        if letters.len() == 1 {
                            let a = graph.find(&alphabet.format_word(&w[1..]));
                            let b = graph.find(&alphabet.format_word(&projected));
                            ok = match (a, b) {
                                (Some(a), Some(b)) => graph.neighbors(a).contains(&b),
                                _ => false,
                            };
                        }
                    }
                }
                if !ok {
                    out.push(ShiftViolation { generator: i, word: w.clone(), image });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum DeltaMode {
    Exhaustive,
    /// Random triples, each completed by scanning every fourth vertex.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaProbe {
    pub vertices: usize,
    /// Quadruples evaluated.
    pub quadruples: u64,
    /// `2δ`, an integer.
    pub twice_delta: usize,
    pub delta: f64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    /// Fewer than four vertices.
    pub degenerate: bool,
}

fn four_point(d: &[Vec<usize>], w: usize, x: usize, y: usize, z: usize) -> usize {
    let mut s = [d[w][x] + d[y][z], d[w][y] + d[x][z], d[w][z] + d[x][y]];
    s.sort_unstable();
    s[2] - s[1]
}

/// Gromov four-point probe: the largest `(S₁ − S₂)/2` over the scanned
/// quadruples, where `S₁ ≥ S₂` are the two largest pairwise distance sums.
pub fn delta_estimate(g: &ComplexGraph, mode: DeltaMode) -> Result<DeltaProbe, ComplexError> {
    let n = g.vertex_count();
    let seed = match mode {
        DeltaMode::Exhaustive => None,
        DeltaMode::Sampled { seed, .. } => Some(seed),
    };
    if n < 4 {
        return Ok(DeltaProbe {
            vertices: n,
            quadruples: 0,
            twice_delta: 0,
            delta: 0.0,
            exhaustive: matches!(mode, DeltaMode::Exhaustive),
            seed,
            degenerate: true,
        });
    }
    if !g.is_connected() {
        return Err(ComplexError::Disconnected);
    }
    let d = g.distance_matrix();
    let (twice, quadruples) = match mode {
        DeltaMode::Exhaustive => {
            let per_w: Vec<(usize, u64)> = (0..n)
                .into_par_iter()
                .map(|w| {
                    let mut best = 0;
                    let mut count = 0u64;
                    for x in w + 1..n {
                        for y in x + 1..n {
                            for z in y + 1..n {
                                best = best.max(four_point(&d, w, x, y, z));
                                count += 1;
                            }
                        }
                    }
                    (best, count)
                })
                .collect();
            per_w.into_iter().fold((0, 0), |(b, c), (b2, c2)| (b.max(b2), c + c2))
        }
        DeltaMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<[usize; 3]> = (0..samples)
                .map(|_| [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)])
                .collect();
            let best = triples
                .par_iter()
                .map(|&[x, y, z]| (0..n).map(|w| four_point(&d, w, x, y, z)).max().unwrap_or(0))
                .max()
                .unwrap_or(0);
            (best, samples as u64 * n as u64)
        }
    };
    Ok(DeltaProbe {
        vertices: n,
        quadruples,
        twice_delta: twice,
        delta: twice as f64 / 2.0,
        exhaustive: matches!(mode, DeltaMode::Exhaustive),
        seed,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn path(n: usize) -> ComplexGraph {
        let mut g = ComplexGraph::new();
        for i in 0..n {
            g.add_vertex(i.to_string(), 0);
        }
        for i in 1..n {
            g.add_edge(i - 1, i, EdgeKind::Horizontal, "e");
        }
        g
    }

    #[test]
    fn odometer_two_levels() {
        let m = fixtures::odometer();
        let g = build_truncation(&m, 2, 1000).unwrap();
        assert_eq!(g.vertex_count(), 7);
        assert_eq!(g.edges_of_kind(EdgeKind::Vertical).count(), 6);
        let mut h: Vec<String> = g
            .edges_of_kind(EdgeKind::Horizontal)
            .filter(|e| g.level(e.u) == 2)
            .map(|e| format!("{}-{}", g.vertices()[e.u].label, g.vertices()[e.v].label))
            .collect();
        h.sort();
        assert_eq!(h, ["00-10", "00-11", "01-10", "01-11"]);
        let id = |w: &str| g.find(w).unwrap();
        assert_eq!(graph_distance(&g, id("00"), id("11")), 1);
        assert_eq!(graph_distance(&g, id("00"), id("01")), 2);
        assert_eq!(graph_distance(&g, id("01"), id("01")), 0);
    }

    #[test]
    fn level_zero_is_single_vertex() {
        let g = build_truncation(&fixtures::basilica(), 0, 10).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        assert!(g.to_dot().contains("n0 [label=\"∅\"]"));
    }

    #[test]
    fn basilica_parents_are_unique() {
        let g = build_truncation(&fixtures::basilica(), 3, 100).unwrap();
        assert_eq!(g.vertex_count(), 15);
        for u in 0..g.vertex_count() {
            let expected = usize::from(g.level(u) >= 1);
            assert_eq!(g.parents(u).len(), expected);
            let kids = if g.level(u) < 3 { 2 } else { 0 };
            assert_eq!(g.children(u).len(), kids);
        }
    }

    #[test]
    fn vertical_descent_is_geodesic() {
        let g = build_truncation(&fixtures::basilica(), 4, 100).unwrap();
        let d = g.distances_from(0);
        for (u, &du) in d.iter().enumerate() {
            assert_eq!(du, g.level(u));
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            build_truncation(&fixtures::odometer(), 10, 100),
            Err(ComplexError::BudgetExceeded { needed: 2047, .. })
        ));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&[0, 1, 1]).unwrap(), vec![1, 1]);
        assert_eq!(shift(&[0]).unwrap(), Vec::<usize>::new());
        assert!(shift(&[]).is_err());
        let m = fixtures::odometer();
        let pre = m.alphabet().words(3).filter(|w| shift(w).unwrap() == [1, 0]).count();
        assert_eq!(pre, 2);
    }

    #[test]
    fn shift_equivariance_on_fixtures() {
        for m in [fixtures::odometer(), fixtures::basilica(), fixtures::torus_machine([2, 0, 0, 2])] {
            let g = build_truncation(&m, 4, 10_000).unwrap();
            assert!(shift_equivariance_violations(&m, &g, 4).is_empty());
        }
    }

    #[test]
    fn odometer_level_one_export() {
        let g = build_truncation(&fixtures::odometer(), 1, 10).unwrap();
        assert_eq!(g.vertex_count(), 3);
        let h: Vec<&Edge> = g.edges_of_kind(EdgeKind::Horizontal).collect();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].labels, ["a"]);
        assert_eq!(g.edges_of_kind(EdgeKind::Vertical).count(), 2);
        let json = g.to_json();
        assert!(json.contains("\"kind\": \"horizontal\""));
        let again = ComplexGraph::from_json(&json).unwrap().to_json();
        assert_eq!(json, again);
    }

    #[test]
    fn json_round_trip_keeps_multi_labels() {
        let g = build_truncation(&fixtures::basilica(), 3, 100).unwrap();
        let json = g.to_json();
        let back = ComplexGraph::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        assert_eq!(back.to_dot(), g.to_dot());
    }

    #[test]
    fn unknown_format_is_rejected() {
        assert!("svg".parse::<ExportFormat>().is_err());
        assert_eq!("dot".parse::<ExportFormat>().unwrap(), ExportFormat::Dot);
    }

    #[test]
    fn delta_of_tree_and_cycle() {
        let p = delta_estimate(&path(5), DeltaMode::Exhaustive).unwrap();
        assert_eq!(p.twice_delta, 0);
        assert_eq!(p.quadruples, 5);
        let mut c = path(4);
        c.add_edge(3, 0, EdgeKind::Horizontal, "e");
        // sums on the 4-cycle: 1+1, 1+1, 2+2
        let p = delta_estimate(&c, DeltaMode::Exhaustive).unwrap();
        assert_eq!(p.twice_delta, 2);
        assert_eq!(p.delta, 1.0);
        assert!(delta_estimate(&path(3), DeltaMode::Exhaustive).unwrap().degenerate);
    }

    #[test]
    fn delta_sampled_matches_exhaustive_on_odometer() {
        let g = build_truncation(&fixtures::odometer(), 6, 1000).unwrap();
        let e = delta_estimate(&g, DeltaMode::Exhaustive).unwrap();
        let s = delta_estimate(&g, DeltaMode::Sampled { samples: 10_000, seed: 1 }).unwrap();
        assert_eq!(e.twice_delta, s.twice_delta);
        assert!(e.exhaustive && !s.exhaustive);
    }

    #[test]
    fn disconnected_delta_errors() {
        let mut g = path(4);
        g.add_vertex("x", 0);
        assert!(matches!(delta_estimate(&g, DeltaMode::Exhaustive), Err(ComplexError::Disconnected)));
        assert_eq!(graph_distance(&g, 0, 4), UNREACHABLE);
    }
}
