//! Combinatorial finite subdivision rules on the sphere.
//!
//! Conventions. Every edge has an intrinsic direction `start → end`. A tile
//! lists its sides counter-clockwise; side `i` runs from corner `i` to
//! corner `i+1`, and its orientation is `+1` when the edge's intrinsic
//! direction agrees with the counter-clockwise one. An edge type subdivides
//! into a chain of `(type, orientation)` pieces listed from the intrinsic
//! start, each orientation relative to the parent. Inside a tile
//! subdivision, `boundary_chains[i]` lists the sub-edges of side `i` in that
//! same intrinsic order, and each face lists its sides counter-clockwise.
//!
//! Two tiles glued along a side traverse it in opposite directions, so one of
//! them may see the edge against its own type's orientation. Refinement then
//! reads that side's sub-edge chain backwards, which requires the reversed
//! chain of types to match.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexGraph, EdgeKind};

#[derive(Debug, Error)]
pub enum SubdivisionError {
    #[error("rule file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown type '{0}'")]
    UnknownType(String),
    #[error("duplicate type name '{0}'")]
    DuplicateType(String),
    #[error("orientation must be 1 or -1, got {0}")]
    BadOrientation(i64),
    #[error("edge type '{0}' has an empty subdivision")]
    EmptySubdivision(String),
    #[error("tile type '{tile}': {reason}")]
    Tile { tile: String, reason: String },
    #[error("tile type '{tile}' side {side}: {reason}")]
    Chain { tile: String, side: usize, reason: String },
    #[error("tile type '{tile}' is not a disk: V - E + F = {euler}")]
    NotDisk { tile: String, euler: i64 },
    #[error("rule has no level-0 complex")]
    MissingComplex,
    #[error("gluing: {0}")]
    Gluing(String),
    #[error("orientation mismatch along edge {edge}")]
    OrientationMismatch { edge: usize },
    #[error("complex is not a sphere: {0}")]
    NotSphere(String),
    #[error("gluing inconsistency while refining: {0}")]
    GluingInconsistency(String),
    #[error("tile graph needs {needed} vertices, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
}

type Result<T> = std::result::Result<T, SubdivisionError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTypeSpec {
    pub name: String,
    pub subdivision: Vec<(String, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSpec {
    pub cycle: Vec<usize>,
    #[serde(rename = "type")]
    pub tile_type: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSubdivisionSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, String)>,
    pub faces: Vec<FaceSpec>,
    pub boundary_chains: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileTypeSpec {
    pub name: String,
    pub boundary: Vec<(String, i64)>,
    pub subdivision: TileSubdivisionSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSpec {
    #[serde(rename = "type")]
    pub tile_type: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub tiles: Vec<TileSpec>,
    /// `[tile, side, tile′, side′, orientation]`.
    pub gluings: Vec<(usize, usize, usize, usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub edge_types: Vec<EdgeTypeSpec>,
    pub tile_types: Vec<TileTypeSpec>,
    #[serde(default)]
    pub complex: Option<ComplexSpec>,
}

impl RuleSpec {
    pub fn from_json(text: &str) -> Result<RuleSpec> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeType {
    pub name: String,
    pub pieces: Vec<(usize, i8)>,
}

/// A validated tile subdivision: a disk whose faces are listed with the
/// traversal direction of each side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalComplex {
    pub vertices: usize,
    /// `(start, end, edge type)`.
    pub edges: Vec<(usize, usize, usize)>,
    /// `(tile type, [(edge, direction)])`.
    pub faces: Vec<(usize, Vec<(usize, i8)>)>,
    pub chains: Vec<Vec<usize>>,
    /// Local vertices along each side, in intrinsic order.
    pub chain_points: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileType {
    pub name: String,
    pub boundary: Vec<(usize, i8)>,
    pub subdivision: LocalComplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionRule {
    spec: RuleSpec,
    edge_types: Vec<EdgeType>,
    tile_types: Vec<TileType>,
}

fn orientation(o: i64) -> Result<i8> {
    match o {
        1 => Ok(1),
        -1 => Ok(-1),
        other => Err(SubdivisionError::BadOrientation(other)),
    }
}

fn name_table<'a>(names: impl Iterator<Item = &'a str>) -> Result<HashMap<&'a str, usize>> {
    let mut table = HashMap::new();
    for (i, n) in names.enumerate() {
        if table.insert(n, i).is_some() {
            return Err(SubdivisionError::DuplicateType(n.to_string()));
        }
    }
    Ok(table)
}

fn lookup(table: &HashMap<&str, usize>, name: &str) -> Result<usize> {
    table.get(name).copied().ok_or_else(|| SubdivisionError::UnknownType(name.to_string()))
}

/// Directions along a closed edge cycle, inferred from vertex continuity.
/// The first edge is taken forward when both directions close up.
fn cycle_directions(edges: &[(usize, usize, usize)], cycle: &[usize]) -> Option<Vec<i8>> {
    'first: for first in [1i8, -1] {
        let mut dirs = Vec::with_capacity(cycle.len());
        let (u0, v0, _) = edges[cycle[0]];
        let (start, mut at) = if first > 0 { (u0, v0) } else { (v0, u0) };
        dirs.push(first);
        for &e in &cycle[1..] {
            let (u, v, _) = edges[e];
            if u == at {
                dirs.push(1);
                at = v;
            } else if v == at {
                dirs.push(-1);
                at = u;
            } else {
                continue 'first;
            }
        }
        if at == start {
            return Some(dirs);
        }
    }
    None
}

impl SubdivisionRule {
    pub fn validate(spec: &RuleSpec) -> Result<SubdivisionRule> {
        let edge_names = name_table(spec.edge_types.iter().map(|e| e.name.as_str()))?;
        let tile_names = name_table(spec.tile_types.iter().map(|t| t.name.as_str()))?;
        let mut edge_types = Vec::new();
        for e in &spec.edge_types {
            if e.subdivision.is_empty() {
                return Err(SubdivisionError::EmptySubdivision(e.name.clone()));
            }
            let pieces = e
                .subdivision
                .iter()
                .map(|(n, o)| Ok((lookup(&edge_names, n)?, orientation(*o)?)))
                .collect::<Result<Vec<_>>>()?;
            edge_types.push(EdgeType { name: e.name.clone(), pieces });
        }
        let mut tile_types = Vec::new();
        for t in &spec.tile_types {
            let boundary = t
                .boundary
                .iter()
                .map(|(n, o)| Ok((lookup(&edge_names, n)?, orientation(*o)?)))
                .collect::<Result<Vec<_>>>()?;
            tile_types.push(TileType {
                name: t.name.clone(),
                boundary,
                subdivision: LocalComplex { vertices: 0, edges: vec![], faces: vec![], chains: vec![], chain_points: vec![] },
            });
        }
        for (ti, t) in spec.tile_types.iter().enumerate() {
            let local = validate_tile(t, &tile_types[ti].boundary, &edge_types, &tile_types, &edge_names, &tile_names)?;
            tile_types[ti].subdivision = local;
        }
        let rule = SubdivisionRule { spec: spec.clone(), edge_types, tile_types };
        if let Some(c) = &spec.complex {
            CellComplex2::from_spec(&rule, c)?;
        }
        Ok(rule)
    }

    pub fn from_json(text: &str) -> Result<SubdivisionRule> {
        SubdivisionRule::validate(&RuleSpec::from_json(text)?)
    }

    pub fn spec(&self) -> &RuleSpec {
        &self.spec
    }

    pub fn edge_types(&self) -> &[EdgeType] {
        &self.edge_types
    }

    pub fn tile_types(&self) -> &[TileType] {
        &self.tile_types
    }

    /// The level-0 complex declared in the rule file.
    pub fn initial_complex(&self) -> Result<CellComplex2> {
        let c = self.spec.complex.as_ref().ok_or(SubdivisionError::MissingComplex)?;
        CellComplex2::from_spec(self, c)
    }
}

fn validate_tile(
    t: &TileTypeSpec,
    boundary: &[(usize, i8)],
    edge_types: &[EdgeType],
    tile_types: &[TileType],
    edge_names: &HashMap<&str, usize>,
    tile_names: &HashMap<&str, usize>,
) -> Result<LocalComplex> {
    let tile_err = |reason: String| SubdivisionError::Tile { tile: t.name.clone(), reason };
    let sub = &t.subdivision;
    if boundary.len() < 2 {
        return Err(tile_err("a tile needs at least two sides".into()));
    }
    let mut edges = Vec::new();
    for (i, (u, v, ty)) in sub.edges.iter().enumerate() {
        if *u >= sub.vertices || *v >= sub.vertices {
            return Err(tile_err(format!("edge {i} uses a vertex outside 0..{}", sub.vertices)));
        }
        edges.push((*u, *v, lookup(edge_names, ty)?));
    }
    if sub.boundary_chains.len() != boundary.len() {
        return Err(tile_err(format!(
            "{} boundary chains for {} sides",
            sub.boundary_chains.len(),
            boundary.len()
        )));
    }
    // boundary edge -> counter-clockwise direction relative to (start, end)
    let mut on_boundary: HashMap<usize, i8> = HashMap::new();
    let mut chain_points = Vec::new();
    let mut ccw_ends = Vec::new();
    for (side, chain) in sub.boundary_chains.iter().enumerate() {
        let chain_err = |reason: String| SubdivisionError::Chain { tile: t.name.clone(), side, reason };
        let (ty, orient) = boundary[side];
        let pieces = &edge_types[ty].pieces;
        if chain.len() != pieces.len() {
            return Err(chain_err(format!(
                "chain has {} sub-edges but edge type '{}' subdivides into {}",
                chain.len(),
                edge_types[ty].name,
                pieces.len()
            )));
        }
        let mut points = Vec::new();
        for (j, (&e, &(pty, pori))) in chain.iter().zip(pieces).enumerate() {
            let &(u, v, ety) = edges.get(e).ok_or_else(|| chain_err(format!("unknown edge {e}")))?;
            if ety != pty {
                return Err(chain_err(format!(
                    "sub-edge {j} has type '{}', expected '{}'",
                    edge_types[ety].name, edge_types[pty].name
                )));
            }
            let (a, b) = if pori > 0 { (u, v) } else { (v, u) };
            if let Some(&last) = points.last() {
                if last != a {
                    return Err(chain_err(format!("chain breaks before sub-edge {j}")));
                }
            } else {
                points.push(a);
            }
            points.push(b);
            if on_boundary.insert(e, pori * orient).is_some() {
                return Err(chain_err(format!("edge {e} appears twice on the boundary")));
            }
        }
        let (first, last) = (points[0], *points.last().expect("nonempty"));
        ccw_ends.push(if orient > 0 { (first, last) } else { (last, first) });
        chain_points.push(points);
    }
    for side in 0..boundary.len() {
        let next = (side + 1) % boundary.len();
        if ccw_ends[side].1 != ccw_ends[next].0 {
            return Err(SubdivisionError::Chain {
                tile: t.name.clone(),
                side,
                reason: format!("corner with side {next} does not match"),
            });
        }
    }
    let mut faces = Vec::new();
    let mut incidences: Vec<Vec<i8>> = vec![Vec::new(); edges.len()];
    for (fi, f) in sub.faces.iter().enumerate() {
        let ty = lookup(tile_names, &f.tile_type)?;
        let sub_boundary = &tile_types[ty].boundary;
        if f.cycle.is_empty() || f.cycle.iter().any(|&e| e >= edges.len()) {
            return Err(tile_err(format!("face {fi} has an invalid cycle")));
        }
        if f.cycle.len() != sub_boundary.len() {
            return Err(tile_err(format!(
                "face {fi} has {} sides but tile type '{}' has {}",
                f.cycle.len(),
                f.tile_type,
                sub_boundary.len()
            )));
        }
        let dirs = cycle_directions(&edges, &f.cycle).ok_or_else(|| tile_err(format!("face {fi} is not a closed cycle")))?;
        for (i, (&e, &d)) in f.cycle.iter().zip(&dirs).enumerate() {
            let (ety, eori) = sub_boundary[i];
            if edges[e].2 != ety {
                return Err(tile_err(format!("face {fi} side {i}: edge type does not match tile type '{}'", f.tile_type)));
            }
            if d != eori {
                return Err(tile_err(format!("face {fi} side {i}: orientation does not match tile type '{}'", f.tile_type)));
            }
            incidences[e].push(d);
        }
        faces.push((ty, f.cycle.iter().copied().zip(dirs).collect()));
    }
    for (e, inc) in incidences.iter().enumerate() {
        let ok = match on_boundary.get(&e) {
            Some(&ccw) => inc.as_slice() == [ccw],
            None => inc.len() == 2 && inc[0] == -inc[1],
        };
        if !ok {
            return Err(tile_err(format!("edge {e} is not bounded consistently by the faces")));
        }
    }
    let euler = sub.vertices as i64 - edges.len() as i64 + faces.len() as i64;
    if euler != 1 {
        return Err(SubdivisionError::NotDisk { tile: t.name.clone(), euler });
    }
    Ok(LocalComplex { vertices: sub.vertices, edges, faces, chains: sub.boundary_chains.clone(), chain_points })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellEdge {
    pub start: usize,
    pub end: usize,
    pub edge_type: usize,
    pub parent: Option<usize>,
    /// Level-0 edge containing this edge, if any.
    pub root: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellFace {
    pub tile_type: usize,
    /// Sides counter-clockwise as `(edge, direction)`.
    pub sides: Vec<(usize, i8)>,
    pub parent: Option<usize>,
    pub root: usize,
    /// Index among the faces of the parent's subdivision (or the level-0
    /// tile index).
    pub local: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellComplex2 {
    pub level: usize,
    pub vertices: usize,
    pub edges: Vec<CellEdge>,
    pub faces: Vec<CellFace>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl CellComplex2 {
    /// Builds a level-0 complex from tiles and side gluings.
    pub fn from_spec(rule: &SubdivisionRule, spec: &ComplexSpec) -> Result<CellComplex2> {
        let names: HashMap<&str, usize> =
            rule.tile_types.iter().enumerate().map(|(i, t)| (t.name.as_str(), i)).collect();
        let types: Vec<usize> = spec.tiles.iter().map(|t| lookup(&names, &t.tile_type)).collect::<Result<_>>()?;
        let mut corner_base = Vec::with_capacity(types.len());
        let mut total = 0;
        for &ty in &types {
            corner_base.push(total);
            total += rule.tile_types[ty].boundary.len();
        }
        let sides = |tile: usize| rule.tile_types[types[tile]].boundary.len();
        let corner = |tile: usize, i: usize| corner_base[tile] + i % sides(tile);
        let mut glued: HashMap<(usize, usize), usize> = HashMap::new();
        let mut uf = UnionFind((0..total).collect());
        for (gi, &(a, sa, b, sb, o)) in spec.gluings.iter().enumerate() {
            let o = orientation(o)?;
            if a >= types.len() || b >= types.len() || sa >= sides(a) || sb >= sides(b) {
                return Err(SubdivisionError::Gluing(format!("gluing {gi} names a missing tile or side")));
            }
            if (a, sa) == (b, sb) {
                return Err(SubdivisionError::Gluing(format!("gluing {gi} glues a side to itself")));
            }
            for key in [(a, sa), (b, sb)] {
                if glued.insert(key, gi).is_some() {
                    return Err(SubdivisionError::Gluing(format!("tile {} side {} is glued twice", key.0, key.1)));
                }
            }
            let ta = rule.tile_types[types[a]].boundary[sa].0;
            let tb = rule.tile_types[types[b]].boundary[sb].0;
            if ta != tb {
                return Err(SubdivisionError::Gluing(format!("gluing {gi} joins different edge types")));
            }
            // an orientable gluing runs the two sides in opposite directions
            if o > 0 {
                return Err(SubdivisionError::OrientationMismatch { edge: gi });
            }
            uf.union(corner(a, sa), corner(b, sb + 1));
            uf.union(corner(a, sa + 1), corner(b, sb));
        }
        for (t, _) in types.iter().enumerate() {
            for s in 0..sides(t) {
                if !glued.contains_key(&(t, s)) {
                    return Err(SubdivisionError::Gluing(format!("tile {t} side {s} is not glued")));
                }
            }
        }
        let mut vertex_of = HashMap::new();
        let mut vid = |uf: &mut UnionFind, c: usize| {
            let r = uf.find(c);
            let n = vertex_of.len();
            *vertex_of.entry(r).or_insert(n)
        };
        let mut edges = Vec::new();
        for &(a, sa, _, _, _) in &spec.gluings {
            let (ty, oa) = rule.tile_types[types[a]].boundary[sa];
            let (p, q) = (vid(&mut uf, corner(a, sa)), vid(&mut uf, corner(a, sa + 1)));
            let (start, end) = if oa > 0 { (p, q) } else { (q, p) };
            let id = edges.len();
            edges.push(CellEdge { start, end, edge_type: ty, parent: None, root: Some(id) });
        }
        for c in 0..total {
            vid(&mut uf, c);
        }
        let faces = types
            .iter()
            .enumerate()
            .map(|(t, &ty)| CellFace {
                tile_type: ty,
                sides: (0..sides(t))
                    .map(|s| {
                        let gi = glued[&(t, s)];
                        let (a, sa, ..) = spec.gluings[gi];
                        let oa = rule.tile_types[types[a]].boundary[sa].1;
                        (gi, if (a, sa) == (t, s) { oa } else { -oa })
                    })
                    .collect(),
                parent: None,
                root: t,
                local: t,
            })
            .collect();
        let c = CellComplex2 { level: 0, vertices: vertex_of.len(), edges, faces };
        c.check_sphere()?;
        Ok(c)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Every edge bounds exactly two faces with opposite directions, face
    /// sides close up, and `V − E + F = 2`.
    pub fn check_sphere(&self) -> Result<()> {
        let mut inc: Vec<Vec<i8>> = vec![Vec::new(); self.edges.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            for (i, &(e, d)) in f.sides.iter().enumerate() {
                inc[e].push(d);
                let (e2, d2) = f.sides[(i + 1) % f.sides.len()];
                let at = if d > 0 { self.edges[e].end } else { self.edges[e].start };
                let from = if d2 > 0 { self.edges[e2].start } else { self.edges[e2].end };
                if at != from {
                    return Err(SubdivisionError::NotSphere(format!("face {fi} boundary does not close")));
                }
            }
        }
        for (e, i) in inc.iter().enumerate() {
            if i.len() != 2 {
                return Err(SubdivisionError::NotSphere(format!("edge {e} bounds {} faces", i.len())));
            }
            if i[0] != -i[1] {
                return Err(SubdivisionError::OrientationMismatch { edge: e });
            }
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            return Err(SubdivisionError::NotSphere(format!("V - E + F = {chi}")));
        }
        Ok(())
    }

    /// The vertices on the boundary of face `f`.
    pub fn face_vertices(&self, f: usize) -> BTreeSet<usize> {
        self.faces[f]
            .sides
            .iter()
            .flat_map(|&(e, _)| [self.edges[e].start, self.edges[e].end])
            .collect()
    }

    /// One application of the rule.
    pub fn refine(&self, rule: &SubdivisionRule) -> Result<CellComplex2> {
        let mut vertices = self.vertices;
        let mut edges = Vec::new();
        let mut points: Vec<Vec<usize>> = Vec::with_capacity(self.edges.len());
        let mut children: Vec<Vec<usize>> = Vec::with_capacity(self.edges.len());
        for (ei, e) in self.edges.iter().enumerate() {
            let ty = rule
                .edge_types
                .get(e.edge_type)
                .ok_or_else(|| SubdivisionError::UnknownType(format!("edge type #{}", e.edge_type)))?;
            let k = ty.pieces.len();
            let mut p = Vec::with_capacity(k + 1);
            p.push(e.start);
            for _ in 1..k {
                p.push(vertices);
                vertices += 1;
            }
            p.push(e.end);
            let mut kids = Vec::with_capacity(k);
            for (j, &(pty, pori)) in ty.pieces.iter().enumerate() {
                let (start, end) = if pori > 0 { (p[j], p[j + 1]) } else { (p[j + 1], p[j]) };
                kids.push(edges.len());
                edges.push(CellEdge { start, end, edge_type: pty, parent: Some(ei), root: e.root });
            }
            points.push(p);
            children.push(kids);
        }
        let mut faces = Vec::new();
        for (fi, f) in self.faces.iter().enumerate() {
            let tt = rule
                .tile_types
                .get(f.tile_type)
                .ok_or_else(|| SubdivisionError::UnknownType(format!("tile type #{}", f.tile_type)))?;
            let local = &tt.subdivision;
            let mut vmap: Vec<Option<usize>> = vec![None; local.vertices];
            let mut emap: Vec<Option<usize>> = vec![None; local.edges.len()];
            // local edge -> +1 if its (start, end) agrees with the global edge
            let mut eflip: Vec<i8> = vec![1; local.edges.len()];
            for (side, &(ge, dir)) in f.sides.iter().enumerate() {
                let (sty, sori) = tt.boundary[side];
                let reversed = dir != sori;
                let lp = &local.chain_points[side];
                if sty != self.edges[ge].edge_type || lp.len() != points[ge].len() {
                    return Err(SubdivisionError::GluingInconsistency(format!("face {fi} side {side} edge type")));
                }
                let mut gp = points[ge].clone();
                let mut gc = children[ge].clone();
                if reversed {
                    gp.reverse();
                    gc.reverse();
                }
                for (&l, &g) in lp.iter().zip(&gp) {
                    match vmap[l] {
                        Some(prev) if prev != g => {
                            return Err(SubdivisionError::GluingInconsistency(format!(
                                "face {fi}: local vertex {l} lands on two global vertices"
                            )))
                        }
                        _ => vmap[l] = Some(g),
                    }
                }
                let pieces = &rule.edge_types[sty].pieces;
                let r = pieces.len();
                for (j, (&le, &g)) in local.chains[side].iter().zip(&gc).enumerate() {
                    if local.edges[le].2 != edges[g].edge_type {
                        return Err(SubdivisionError::GluingInconsistency(format!(
                            "face {fi} side {side}: reversed sub-edge types do not match"
                        )));
                    }
                    // directions relative to the global parent edge
                    let local_dir = pieces[j].1 * if reversed { -1 } else { 1 };
                    let global_dir = pieces[if reversed { r - 1 - j } else { j }].1;
                    eflip[le] = local_dir * global_dir;
                    emap[le] = Some(g);
                }
            }
            for v in vmap.iter_mut() {
                if v.is_none() {
                    *v = Some(vertices);
                    vertices += 1;
                }
            }
            for (le, &(u, v, ty)) in local.edges.iter().enumerate() {
                if emap[le].is_none() {
                    emap[le] = Some(edges.len());
                    edges.push(CellEdge {
                        start: vmap[u].expect("mapped"),
                        end: vmap[v].expect("mapped"),
                        edge_type: ty,
                        parent: None,
                        root: None,
                    });
                }
            }
            for (li, (sty, sides)) in local.faces.iter().enumerate() {
                faces.push(CellFace {
                    tile_type: *sty,
                    sides: sides.iter().map(|&(le, d)| (emap[le].expect("mapped"), d * eflip[le])).collect(),
                    parent: Some(fi),
                    root: f.root,
                    local: li,
                });
            }
        }
        let c = CellComplex2 { level: self.level + 1, vertices, edges, faces };
        c.check_sphere()?;
        Ok(c)
    }
}

/// Refines `c0` `n` times, returning levels `0..=n`.
pub fn refine_levels(rule: &SubdivisionRule, c0: &CellComplex2, n: usize) -> Result<Vec<CellComplex2>> {
    let mut levels = vec![c0.clone()];
    for _ in 0..n {
        let next = levels.last().expect("nonempty").refine(rule)?;
        levels.push(next);
    }
    Ok(levels)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionI {
    pub pass: bool,
    /// Level-0 edges with fewer than two level-n descendants.
    pub offending_edges: Vec<usize>,
    /// Number of level-n edges inside each level-0 edge.
    pub pieces: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Offence {
    pub tile: usize,
    pub edge: usize,
    pub other_edge: usize,
    /// A level-n face touching both edges.
    pub face: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionII {
    pub pass: bool,
    pub offending: Vec<Offence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeshReport {
    pub level: usize,
    pub condition_i: ConditionI,
    pub condition_ii: ConditionII,
    pub pass: bool,
    pub euler: i64,
}

/// Checks conditions (i) and (ii) on a level-`n` refinement of `c0`.
pub fn mesh_report(c0: &CellComplex2, cn: &CellComplex2) -> MeshReport {
    let mut pieces = vec![0; c0.edges.len()];
    for e in &cn.edges {
        if let Some(r) = e.root {
            pieces[r] += 1;
        }
    }
    let offending_edges: Vec<usize> = (0..c0.edges.len()).filter(|&e| pieces[e] < 2).collect();
    // level-0 edges touched by each level-n face
    let touched: Vec<BTreeSet<usize>> = cn
        .faces
        .iter()
        .map(|f| f.sides.iter().filter_map(|&(e, _)| cn.edges[e].root).collect())
        .collect();
    let mut offending = Vec::new();
    for (t, f) in c0.faces.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (i, &(e, _)) in f.sides.iter().enumerate() {
            for &(e2, _) in &f.sides[i + 1..] {
                let (a, b) = (e.min(e2), e.max(e2));
                if a == b || !seen.insert((a, b)) {
                    continue;
                }
                let ends = |x: usize| [c0.edges[x].start, c0.edges[x].end];
                if ends(a).iter().any(|v| ends(b).contains(v)) {
                    continue;
                }
                if let Some(face) = touched.iter().position(|s| s.contains(&a) && s.contains(&b)) {
                    offending.push(Offence { tile: t, edge: a, other_edge: b, face });
                }
            }
        }
    }
    let condition_i = ConditionI { pass: offending_edges.is_empty(), offending_edges, pieces };
    let condition_ii = ConditionII { pass: offending.is_empty(), offending };
    MeshReport {
        level: cn.level - c0.level,
        pass: condition_i.pass && condition_ii.pass,
        condition_i,
        condition_ii,
        euler: cn.euler_characteristic(),
    }
}

pub fn mesh_check(rule: &SubdivisionRule, c0: &CellComplex2, n: usize) -> Result<MeshReport> {
    assert!(n >= 1, "mesh check needs n ≥ 1");
    let levels = refine_levels(rule, c0, n)?;
    Ok(mesh_report(c0, &levels[n]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeshSearch {
    /// Smallest passing level, if any up to `max_n`.
    pub level: Option<usize>,
    pub reports: Vec<MeshReport>,
}

/// Smallest `n ≤ max_n` at which [`mesh_check`] passes. `None` is
/// inconclusive: the condition is existential in `n`.
pub fn mesh_search(rule: &SubdivisionRule, c0: &CellComplex2, max_n: usize) -> Result<MeshSearch> {
    assert!(max_n >= 1, "mesh search needs max_n ≥ 1");
    let mut reports = Vec::new();
    let mut current = c0.clone();
    for _ in 1..=max_n {
        current = current.refine(rule)?;
        let r = mesh_report(c0, &current);
        let pass = r.pass;
        reports.push(r);
        if pass {
            return Ok(MeshSearch { level: Some(current.level - c0.level), reports });
        }
    }
    Ok(MeshSearch { level: None, reports })
}

/// Face counts of levels `0..=n`, from the tile types alone.
pub fn tile_counts(rule: &SubdivisionRule, c0: &CellComplex2, n: usize) -> Vec<usize> {
    let mut by_type = vec![0usize; rule.tile_types.len()];
    for f in &c0.faces {
        by_type[f.tile_type] += 1;
    }
    let mut out = vec![by_type.iter().sum()];
    for _ in 0..n {
        let mut next = vec![0usize; by_type.len()];
        for (t, &count) in by_type.iter().enumerate() {
            for (sub, _) in &rule.tile_types[t].subdivision.faces {
                next[*sub] = next[*sub].saturating_add(count);
            }
        }
        by_type = next;
        out.push(by_type.iter().fold(0usize, |a, &b| a.saturating_add(b)));
    }
    out
}

/// What counts as two tiles touching.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Contact {
    /// Closures share a vertex.
    #[default]
    Vertex,
    /// Closures share an edge.
    Edge,
}

/// Tile-adjacency graph on levels `0..=n`: the root (empty label, graph
/// level 0), then the tiles of level `k` on graph level `k + 1`, labelled
/// by their path of face indices.
pub fn tile_graph(
    rule: &SubdivisionRule,
    c0: &CellComplex2,
    n: usize,
    contact: Contact,
    max_vertices: usize,
) -> Result<ComplexGraph> {
    let needed = tile_counts(rule, c0, n).iter().sum::<usize>().saturating_add(1);
    if needed > max_vertices {
        return Err(SubdivisionError::BudgetExceeded { needed, budget: max_vertices });
    }
    let levels = refine_levels(rule, c0, n)?;
    let mut g = ComplexGraph::new();
    let root = g.add_vertex("", 0);
    let mut ids: Vec<Vec<usize>> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    for (k, c) in levels.iter().enumerate() {
        let mut lv_ids = Vec::with_capacity(c.faces.len());
        let mut lv_labels = Vec::with_capacity(c.faces.len());
        for f in &c.faces {
            let label = match f.parent {
                None => f.local.to_string(),
                Some(p) => format!("{}.{}", labels[k - 1][p], f.local),
            };
            lv_ids.push(g.add_vertex(label.clone(), k + 1));
            lv_labels.push(label);
        }
        ids.push(lv_ids);
        labels.push(lv_labels);
    }
    for (k, c) in levels.iter().enumerate() {
        for (fi, f) in c.faces.iter().enumerate() {
            match f.parent {
                None => g.add_edge(root, ids[k][fi], EdgeKind::Vertical, f.local.to_string()),
                Some(p) => g.add_edge(ids[k - 1][p], ids[k][fi], EdgeKind::Vertical, f.local.to_string()),
            };
        }
        // cells shared by at least two faces, in increasing order
        let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (fi, f) in c.faces.iter().enumerate() {
            let cells: BTreeSet<usize> = match contact {
                Contact::Vertex => c.face_vertices(fi),
                Contact::Edge => f.sides.iter().map(|&(e, _)| e).collect(),
            };
            for cell in cells {
                incident.entry(cell).or_default().push(fi);
            }
        }
        for faces in incident.values() {
            for (i, &a) in faces.iter().enumerate() {
                for &b in &faces[i + 1..] {
                    g.add_edge(ids[k][a], ids[k][b], EdgeKind::Horizontal, "contact");
                }
            }
        }
    }
    Ok(g)
}
