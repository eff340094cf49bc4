//! Configuration spaces of finite graphs.
//!
//! A cell of the model of `Conf_k(X)` assigns to every coordinate a vertex
//! or an edge of the graph, with distinct vertices, and orders the points on
//! each edge strictly. Coordinates on an edge carry their rank, counted from
//! the 0-end. A boundary lift sends some edge coordinates to an end of their
//! edge: only the minimum of an edge group may move to the 0-end and only
//! the maximum to the 1-end, and the resulting vertices must stay distinct.


use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::{AcyclicCategory, GroupAction};
use crate::error::{Error, Result};
use crate::json::JsonId;
use crate::poset::Poset;
use crate::strata::CombinatorialCss;

/// A finite graph; loops and parallel edges are allowed. Edge `e` runs from
/// its 0-end `edges[e].0` to its 1-end `edges[e].1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    edge_labels: Vec<String>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>, edge_labels: Vec<String>) -> Result<Self> {
        if edge_labels.len() != edges.len() {
            return Err(Error::InvalidGraph("one label per edge is required".into()));
        }
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices.len() || v >= vertices.len() {
                return Err(Error::InvalidGraph(format!("edge {} names a missing vertex", edge_labels[e])));
            }
        }
        Ok(Graph { vertices, edges, edge_labels })
    }

    /// A graph with numbered vertices `v0, v1, …` and edges `e0, e1, …`.
    pub fn from_edges(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let labels = (0..edges.len()).map(|e| format!("e{e}")).collect();
        Self::new((0..vertex_count).map(|v| format!("v{v}")).collect(), edges, labels)
    }

    /// A single edge between two vertices.
    pub fn edge() -> Self {
        Self::from_edges(2, vec![(0, 1)]).expect("valid graph")
    }

    /// One vertex with one loop.
    pub fn loop_graph() -> Self {
        Self::from_edges(1, vec![(0, 0)]).expect("valid graph")
    }

    /// Three edges from a hub `v0`.
    pub fn y_graph() -> Self {
        Self::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).expect("valid graph")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, edges).expect("valid graph")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        if let Some(n) = name.strip_prefix('k').and_then(|n| n.parse().ok()) {
            return Ok(Self::complete(n));
        }
        match name {
            "edge" => Ok(Self::edge()),
            "loop" => Ok(Self::loop_graph()),
            "y" | "Y" => Ok(Self::y_graph()),
            _ => Err(Error::InvalidGraph(format!("unknown fixture {name:?}"))),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_label(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.num_vertices()];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Vertices then edges, with one morphism per edge end.
    pub fn to_css(&self) -> Result<CombinatorialCss> {
        let nv = self.num_vertices();
        let mut grades = vec![Some(0); nv];
        grades.extend(vec![Some(1); self.num_edges()]);
        let mut labels: Vec<Option<String>> = self.vertices.iter().cloned().map(Some).collect();
        labels.extend(self.edge_labels.iter().cloned().map(Some));
        let mut morphisms = Vec::new();
        let mut mlabels = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            morphisms.push((u, nv + e));
            mlabels.push(Some(format!("{}.0", self.edge_labels[e])));
            morphisms.push((v, nv + e));
            mlabels.push(Some(format!("{}.1", self.edge_labels[e])));
        }
        CombinatorialCss::from_category(AcyclicCategory::with_labels(grades, labels, morphisms, mlabels, vec![]))
    }

    /// Replaces every edge by a path of `n` edges; a loop becomes an
    /// `n`-cycle through fresh vertices.
    pub fn subdivide(&self, n: usize) -> Result<Graph> {
        if n < 1 {
            return Err(Error::InvalidSubdivisionCount);
        }
        let mut vertices = self.vertices.clone();
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            let name = &self.edge_labels[e];
            let mut path = vec![u];
            for i in 1..n {
                path.push(vertices.len());
                vertices.push(format!("{name}/{i}"));
            }
            path.push(v);
            for i in 0..n {
                edges.push((path[i], path[i + 1]));
                labels.push(if n == 1 { name.clone() } else { format!("{name}:{i}") });
            }
        }
        Graph::new(vertices, edges, labels)
    }

    /// Violations of the path-length conditions under which the discretized
    /// configuration space of `k` points is homotopy equivalent to the
    /// configuration space.
    pub fn abrams_violations(&self, k: usize) -> Vec<AbramsViolation> {
        let required = k + 1;
        let mut out = Vec::new();
        let essential: Vec<usize> =
            self.degrees().iter().enumerate().filter(|(_, &d)| d != 2).map(|(v, _)| v).collect();
        let adj = self.adjacency();
        let mut shortest: Option<(usize, usize, usize)> = None;
        for &s in &essential {
            let dist = bfs(&adj, s);
            for &t in &essential {
                if t > s {
                    if let Some(d) = dist[t] {
                        if shortest.map_or(true, |(_, _, best)| d < best) {
                            shortest = Some((s, t, d));
                        }
                    }
                }
            }
        }
        if let Some((from, to, length)) = shortest {
            if length < required {
                out.push(AbramsViolation::ShortPath { from, to, length, required });
            }
        }
        if let Some(length) = self.girth() {
            if length < required {
                out.push(AbramsViolation::ShortCycle { length, required });
            }
        }
        out
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            if u != v {
                adj[v].push((u, e));
            }
        }
        adj
    }

    /// Length of a shortest cycle, counting loops and parallel edges.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut keep = |len: usize| {
            if best.map_or(true, |b| len < b) {
                best = Some(len);
            }
        };
        let mut seen = HashSet::new();
        for &(u, v) in &self.edges {
            if u == v {
                keep(1);
            } else if !seen.insert((u.min(v), u.max(v))) {
                keep(2);
            }
        }
        let adj = self.adjacency();
        for s in 0..self.num_vertices() {
            // BFS tree from s; a non-tree edge closes a cycle through s or
            // bounds one from above
            let mut dist = vec![usize::MAX; self.num_vertices()];
            let mut via = vec![usize::MAX; self.num_vertices()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, e) in &adj[x] {
                    if y == x {
                        continue;
                    }
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        via[y] = e;
                        queue.push_back(y);
                    } else if via[x] != e {
                        keep(dist[x] + dist[y] + 1);
                    }
                }
            }
        }
        best
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.iter().map(|v| JsonId::Str(v.clone())).collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| EdgeJson {
                    id: JsonId::Str(self.edge_labels[e].clone()),
                    ends: [JsonId::Str(self.vertices[u].clone()), JsonId::Str(self.vertices[v].clone())],
                })
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, v) in json.vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Schema { path: format!("/vertices/{i}"), message: format!("duplicate vertex id {v}") });
            }
        }
        let mut seen = HashSet::new();
        let mut edges = Vec::new();
        for (e, edge) in json.edges.iter().enumerate() {
            if !seen.insert(edge.id.clone()) {
                return Err(Error::Schema { path: format!("/edges/{e}/id"), message: format!("duplicate edge id {}", edge.id) });
            }
            let look = |k: usize| {
                index.get(&edge.ends[k]).copied().ok_or_else(|| Error::Schema {
                    path: format!("/edges/{e}/ends/{k}"),
                    message: format!("unknown vertex id {}", edge.ends[k]),
                })
            };
            edges.push((look(0)?, look(1)?));
        }
        Graph::new(
            json.vertices.iter().map(|v| v.to_string()).collect(),
            edges,
            json.edges.iter().map(|e| e.id.to_string()).collect(),
        )
    }
}

fn bfs(adj: &[Vec<(usize, usize)>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for &(y, _) in &adj[x] {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AbramsViolation {
    /// A path between distinct vertices of degree other than 2 is too short.
    ShortPath { from: usize, to: usize, length: usize, required: usize },
    /// A homotopically essential cycle is too short.
    ShortCycle { length: usize, required: usize },
}

impl std::fmt::Display for AbramsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ShortPath { from, to, length, required } => {
                write!(f, "path between vertices {from} and {to} has length {length}, needs {required}")
            }
            Self::ShortCycle { length, required } => write!(f, "cycle of length {length}, needs {required}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: JsonId,
    pub ends: [JsonId; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<JsonId>,
    pub edges: Vec<EdgeJson>,
}

/// Where one coordinate of a configuration cell sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Vertex(usize),
    /// On an edge, at the given rank counted from the 0-end.
    Edge { edge: usize, rank: usize },
}

pub type ConfCell = Vec<Slot>;

/// Per coordinate: 0 keeps it, 1 sends it to the 0-end, 2 to the 1-end.
pub type Specialization = Vec<u8>;

/// The cellular model of the ordered configuration space `Conf_k(X)`.
#[derive(Clone, Debug)]
pub struct ConfSpace {
    pub k: usize,
    pub cells: Vec<ConfCell>,
    /// Non-identity morphisms as (target cell, specialization).
    pub lifts: Vec<(usize, Specialization)>,
    pub css: CombinatorialCss,
}

fn group_sizes(cell: &[Slot], edges: usize) -> Vec<usize> {
    let mut sizes = vec![0; edges];
    for s in cell {
        if let Slot::Edge { edge, .. } = *s {
            sizes[edge] += 1;
        }
    }
    sizes
}

/// Applies a specialization, or returns `None` when it is not admissible.
fn specialize(g: &Graph, cell: &[Slot], spec: &[u8]) -> Option<ConfCell> {
    let sizes = group_sizes(cell, g.num_edges());
    let mut out = cell.to_vec();
    let mut used: HashSet<usize> =
        cell.iter().filter_map(|s| if let Slot::Vertex(v) = s { Some(*v) } else { None }).collect();
    for (i, (&slot, &s)) in cell.iter().zip(spec).enumerate() {
        if s == 0 {
            continue;
        }
        let Slot::Edge { edge, rank } = slot else { return None };
        let (u, v) = g.edges[edge];
        let target = match s {
            1 if rank == 0 => u,
            2 if rank + 1 == sizes[edge] => v,
            _ => return None,
        };
        if !used.insert(target) {
            return None;
        }
        out[i] = Slot::Vertex(target);
    }
    // the points left on an edge shift down when its minimum left
    let mut min_left = vec![false; g.num_edges()];
    for (slot, &s) in cell.iter().zip(spec) {
        if let (Slot::Edge { edge, rank: 0 }, 1..) = (*slot, s) {
            min_left[edge] = true;
        }
    }
    for slot in out.iter_mut() {
        if let Slot::Edge { edge, rank } = *slot {
            if min_left[edge] {
                *slot = Slot::Edge { edge, rank: rank - 1 };
            }
        }
    }
    Some(out)
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q: Vec<usize> = p.iter().map(|&x| x + (x >= pos) as usize).collect();
            q.insert(0, pos);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn conf_cells(g: &Graph, k: usize) -> Vec<ConfCell> {
    let nv = g.num_vertices();
    let choices = nv + g.num_edges();
    let mut placements: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        placements = placements
            .into_iter()
            .flat_map(|p| {
                (0..choices)
                    .filter(|&c| c >= nv || !p.contains(&c))
                    .map(|c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut cells: Vec<ConfCell> = placements
        .par_iter()
        .flat_map_iter(|p| {
            // every edge group gets every strict order
            let mut partial: Vec<ConfCell> = vec![p
                .iter()
                .map(|&c| if c < nv { Slot::Vertex(c) } else { Slot::Edge { edge: c - nv, rank: 0 } })
                .collect()];
            for e in 0..g.num_edges() {
                let coords: Vec<usize> = (0..k).filter(|&i| p[i] == nv + e).collect();
                if coords.len() < 2 {
                    continue;
                }
                let perms = permutations(coords.len());
                partial = partial
                    .into_iter()
                    .flat_map(|cell| {
                        perms
                            .iter()
                            .map(|perm| {
                                let mut c = cell.clone();
                                for (j, &i) in coords.iter().enumerate() {
                                    c[i] = Slot::Edge { edge: e, rank: perm[j] };
                                }
                                c
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
            }
            partial
        })
        .collect();
    cells.sort();
    cells
}

fn cell_label(g: &Graph, cell: &[Slot]) -> String {
    let parts: Vec<String> = cell
        .iter()
        .map(|s| match *s {
            Slot::Vertex(v) => g.vertex_label(v).to_string(),
            Slot::Edge { edge, rank } => format!("{}#{rank}", g.edge_label(edge)),
        })
        .collect();
    format!("({})", parts.join(","))
}

fn dim_of(cell: &[Slot]) -> usize {
    cell.iter().filter(|s| matches!(s, Slot::Edge { .. })).count()
}

impl ConfSpace {
    pub fn new(g: &Graph, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidPointCount);
        }
        let cells = conf_cells(g, k);
        let index: HashMap<&ConfCell, usize> = cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let per_cell: Vec<Vec<(Specialization, usize)>> = cells
            .par_iter()
            .map(|cell| {
                let edge_coords: Vec<usize> = (0..k).filter(|&i| matches!(cell[i], Slot::Edge { .. })).collect();
                let mut out = Vec::new();
                let total = 3usize.pow(edge_coords.len() as u32);
                for code in 1..total {
                    let mut spec = vec![0u8; k];
                    let mut c = code;
                    for &i in &edge_coords {
                        spec[i] = (c % 3) as u8;
                        c /= 3;
                    }
                    if let Some(src) = specialize(g, cell, &spec) {
                        out.push((spec, index[&src]));
                    }
                }
                out.sort();
                out
            })
            .collect();
        let mut lifts = Vec::new();
        let mut morphisms = Vec::new();
        let mut lift_index = HashMap::new();
        for (t, specs) in per_cell.into_iter().enumerate() {
            for (spec, s) in specs {
                lift_index.insert((t, spec.clone()), lifts.len());
                morphisms.push((s, t));
                lifts.push((t, spec));
            }
        }
        let mut incoming = vec![Vec::new(); cells.len()];
        for (f, &(_, t)) in morphisms.iter().enumerate() {
            incoming[t].push(f);
        }
        // g∘f is the union of the two specializations
        let compose: Vec<(usize, usize, usize)> = (0..lifts.len())
            .into_par_iter()
            .flat_map_iter(|gm| {
                let (t, spec_g) = &lifts[gm];
                let mid = morphisms[gm].0;
                incoming[mid]
                    .iter()
                    .map(|&fm| {
                        let union: Vec<u8> = spec_g.iter().zip(&lifts[fm].1).map(|(a, b)| a + b).collect();
                        let gf = lift_index[&(*t, union)];
                        (gm, fm, gf)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let grades = cells.iter().map(|c| Some(dim_of(c) as i64)).collect();
        let labels = cells.iter().map(|c| Some(cell_label(g, c))).collect();
        let mlabels = lifts
            .iter()
            .map(|(_, spec)| {
                let parts: Vec<String> = spec
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s != 0)
                    .map(|(i, &s)| format!("{i}->{}", s - 1))
                    .collect();
                Some(parts.join(","))
            })
            .collect();
        let cat = AcyclicCategory::with_labels(grades, labels, morphisms, mlabels, compose);
        let css = CombinatorialCss::from_category(cat)?;
        Ok(ConfSpace { k, cells, lifts, css })
    }

    fn cell_index(&self, cell: &ConfCell) -> usize {
        self.cells.binary_search(cell).expect("permuted cells exist")
    }

    /// The action of a coordinate permutation: coordinate `i` moves to
    /// position `perm[i]`. Returns permutations of objects and morphisms.
    pub fn permutation_action(&self, perm: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let move_vec = |v: &[Slot]| {
            let mut out = v.to_vec();
            for (i, &p) in perm.iter().enumerate() {
                out[p] = v[i];
            }
            out
        };
        let obj: Vec<usize> = self.cells.iter().map(|c| self.cell_index(&move_vec(c))).collect();
        let index: HashMap<(usize, &Specialization), usize> =
            self.lifts.iter().enumerate().map(|(f, (t, s))| ((*t, s), f)).collect();
        let mor = self
            .lifts
            .iter()
            .map(|(t, spec)| {
                let mut moved = spec.clone();
                for (i, &p) in perm.iter().enumerate() {
                    moved[p] = spec[i];
                }
                index[&(obj[*t], &moved)]
            })
            .collect();
        (obj, mor)
    }

    /// The symmetric group acting by adjacent transpositions of coordinates.
    pub fn sigma_action(&self) -> GroupAction {
        let generators = (0..self.k.saturating_sub(1))
            .map(|i| {
                let mut perm: Vec<usize> = (0..self.k).collect();
                perm.swap(i, i + 1);
                self.permutation_action(&perm)
            })
            .collect();
        GroupAction { generators }
    }

    /// The unordered configuration space as the orbit category.
    pub fn unordered(&self) -> Result<CombinatorialCss> {
        let q = self.css.category().quotient_by_free_action(&self.sigma_action())?;
        CombinatorialCss::from_category(q)
    }
}

/// The ordered discretized configuration space: `k`-tuples of closed cells
/// of the `subdivisions`-fold subdivided graph with pairwise disjoint
/// closures, ordered as a subposet of the product of face posets.
pub fn abrams_complex(g: &Graph, k: usize, subdivisions: usize) -> Result<CombinatorialCss> {
    if k < 1 {
        return Err(Error::InvalidPointCount);
    }
    let g = g.subdivide(subdivisions)?;
    let nv = g.num_vertices();
    let closure = |c: usize| -> Vec<usize> {
        if c < nv {
            vec![c]
        } else {
            let (u, v) = g.edges[c - nv];
            if u == v {
                vec![u]
            } else {
                vec![u, v]
            }
        }
    };
    let cells_total = nv + g.num_edges();
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..cells_total)
                    .filter(|&c| {
                        let cl = closure(c);
                        t.iter().all(|&d| closure(d).iter().all(|v| !cl.contains(v)))
                    })
                    .map(|c| {
                        let mut u = t.clone();
                        u.push(c);
                        u
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    tuples.sort();
    let index: BTreeMap<&Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut covers = Vec::new();
    for (i, t) in tuples.iter().enumerate() {
        for (j, &c) in t.iter().enumerate() {
            if c < nv {
                continue;
            }
            for v in closure(c) {
                let mut lower = t.clone();
                lower[j] = v;
                covers.push((index[&lower], i));
            }
        }
    }
    let name = |c: usize| if c < nv { g.vertex_label(c).to_string() } else { g.edge_label(c - nv).to_string() };
    let grades = tuples.iter().map(|t| Some(t.iter().filter(|&&c| c >= nv).count() as i64)).collect();
    let labels = tuples
        .iter()
        .map(|t| Some(format!("({})", t.iter().map(|&c| name(c)).collect::<Vec<_>>().join(","))))
        .collect();
    CombinatorialCss::from_poset(&Poset::with_labels(grades, labels, covers))
}
