//! Finite simple undirected graphs with dense vertex indices.
//!
//! Every other module consumes [`Graph`]; the ambient host and its spanning
//! subgraphs share this type and the same index space.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge-list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Simple undirected graph in compressed adjacency form.
///
/// Neighbor lists are sorted ascending and duplicate free; adjacency is
/// symmetric and loop free. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    vertices: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = GraphError;
    fn try_from(r: GraphRepr) -> Result<Self, GraphError> {
        Graph::new(r.vertices, &r.edges)
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            vertices: g.vertex_count(),
            edges: g.edges().collect(),
        }
    }
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate and reversed pairs collapse.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_adjacency(adj))
    }

    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect();
        Self::from_adjacency(adj)
    }

    /// Adjacency lists need not be sorted or deduplicated, but must be
    /// symmetric and loop free.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<Vertex>>) -> Self {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Self { offsets, targets }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.vertex_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.vertices().map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Spanning subgraph keeping the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> Graph {
        let adj = self
            .vertices()
            .map(|u| {
                self.neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&v| {
                        let (a, b) = if u < v { (u, v) } else { (v, u) };
                        keep(a, b)
                    })
                    .collect()
            })
            .collect();
        Self::from_adjacency(adj)
    }

    /// Spanning subgraph with every edge touching a masked vertex removed.
    pub fn isolate(&self, mask: &[bool]) -> Graph {
        self.filter_edges(|u, v| !mask[u] && !mask[v])
    }

    /// Induced subgraph on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter_map(|&u| (local[u] != usize::MAX).then_some(local[u]))
                    .collect()
            })
            .collect();
        Self::from_adjacency(adj)
    }

    /// Number of edges of `self` with both ends in `vertices`.
    pub fn induced_edge_count(&self, vertices: &[Vertex]) -> usize {
        let mut inside = vec![false; self.vertex_count()];
        for &v in vertices {
            inside[v] = true;
        }
        vertices
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&u| inside[u] && u > v)
                    .count()
            })
            .sum()
    }

    pub fn is_spanning_subgraph_of(&self, host: &Graph) -> bool {
        self.vertex_count() == host.vertex_count() && self.edges().all(|(u, v)| host.has_edge(u, v))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        bfs_within(self, &[0], None, usize::MAX).len() == self.vertex_count()
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            let mut comp = bfs_within(self, &[s], None, usize::MAX);
            for &v in &comp {
                seen[v] = true;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whitespace edge-list text: `n m` header followed by sorted `u v` lines.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), GraphError> {
            let mut it = l.split_whitespace();
            let mut next = || {
                it.next()
                    .ok_or_else(|| GraphError::Parse {
                        line,
                        msg: "expected two integers".into(),
                    })?
                    .parse::<usize>()
                    .map_err(|e| GraphError::Parse {
                        line,
                        msg: e.to_string(),
                    })
            };
            let a = next()?;
            let b = next()?;
            Ok((a, b))
        };
        let (hl, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let (n, m) = parse_pair(hl + 1, header)?;
        let mut edges = Vec::with_capacity(m);
        for (i, l) in lines {
            edges.push(parse_pair(i + 1, l)?);
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: hl + 1,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, &edges)
    }
}

/// Vertex order witnessing a degeneracy bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyOrdering {
    /// Each vertex has at most `degeneracy` neighbors earlier in `order`.
    pub order: Vec<Vertex>,
    pub degeneracy: usize,
}

impl DegeneracyOrdering {
    /// `position[v]` is the index of `v` in `order`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn is_witness_for(&self, g: &Graph) -> bool {
        let pos = self.positions();
        self.order.iter().all(|&v| {
            g.neighbors(v).iter().filter(|&&u| pos[u] < pos[v]).count() <= self.degeneracy
        })
    }
}

/// Min-degree peeling, smallest index first among ties. The returned order
/// is the reverse of the peeling order, so every vertex sees at most
/// `degeneracy` neighbors before it.
pub fn degeneracy_ordering(g: &Graph) -> DegeneracyOrdering {
    let n = g.vertex_count();
    let mut deg = g.degrees();
    let mut queue: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut peel = Vec::with_capacity(n);
    let mut degeneracy = 0;
    while let Some((d, v)) = queue.pop_first() {
        degeneracy = degeneracy.max(d);
        removed[v] = true;
        peel.push(v);
        for &u in g.neighbors(v) {
            if !removed[u] {
                queue.remove(&(deg[u], u));
                deg[u] -= 1;
                queue.insert((deg[u], u));
            }
        }
    }
    peel.reverse();
    DegeneracyOrdering {
        order: peel,
        degeneracy,
    }
}

/// Vertices within `radius` of `sources` in `g - excluded`, sorted.
pub fn bfs_within(
    g: &Graph,
    sources: &[Vertex],
    excluded: Option<Vertex>,
    radius: usize,
) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &s in sources {
        if Some(s) != excluded && dist[s] == usize::MAX {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        out.push(v);
        if dist[v] == radius {
            continue;
        }
        for &u in g.neighbors(v) {
            if Some(u) != excluded && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Largest common neighborhood over distinct vertex pairs.
pub fn max_codegree(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut count = vec![0usize; n];
    let mut touched = Vec::new();
    let mut best = 0;
    for u in 0..n {
        for &w in g.neighbors(u) {
            for &v in g.neighbors(w) {
                if v > u {
                    if count[v] == 0 {
                        touched.push(v);
                    }
                    count[v] += 1;
                }
            }
        }
        for v in touched.drain(..) {
            best = best.max(count[v]);
            count[v] = 0;
        }
    }
    best
}

/// A vertex set together with an edge set inside it and its exact density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
    pub edge_count: usize,
    #[serde(with = "ratio_serde")]
    pub average_degree: Ratio<u64>,
}

impl DensityWitness {
    /// Witness made of the subgraph of `g` induced on `vertices`.
    pub fn induced(g: &Graph, vertices: &[Vertex]) -> Self {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let set: BTreeSet<_> = vs.iter().copied().collect();
        let edges: Vec<_> = vs
            .iter()
            .flat_map(|&u| {
                g.neighbors(u)
                    .iter()
                    .copied()
                    .filter(move |&v| v > u)
                    .map(move |v| (u, v))
            })
            .filter(|(_, v)| set.contains(v))
            .collect();
        Self::from_parts(vs, edges)
    }

    /// Witness from an explicit edge set (not necessarily induced).
    pub fn from_parts(mut vertices: Vec<Vertex>, mut edges: Vec<(Vertex, Vertex)>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        for e in edges.iter_mut() {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let edge_count = edges.len();
        let average_degree = if vertices.is_empty() {
            Ratio::from_integer(0)
        } else {
            Ratio::new(2 * edge_count as u64, vertices.len() as u64)
        };
        Self {
            vertices,
            edges,
            edge_count,
            average_degree,
        }
    }

    /// Recounts against `g`: every edge exists, lies inside the vertex set,
    /// and the stored density matches.
    pub fn verify(&self, g: &Graph) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().copied().collect();
        let edges_ok = self
            .edges
            .iter()
            .all(|&(u, v)| g.has_edge(u, v) && set.contains(&u) && set.contains(&v));
        let expected = if self.vertices.is_empty() {
            Ratio::from_integer(0)
        } else {
            Ratio::new(2 * self.edges.len() as u64, self.vertices.len() as u64)
        };
        edges_ok && self.edge_count == self.edges.len() && self.average_degree == expected
    }
}

/// Result of a bounded-size density search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityAudit {
    pub witness: Option<DensityWitness>,
    /// True when every vertex subset up to the cap was examined, so an empty
    /// `witness` proves absence.
    pub exhaustive: bool,
}

const EXHAUSTIVE_AUDIT_LIMIT: usize = 14;

/// Searches for a subgraph on at most `size_cap` vertices with average degree
/// strictly above `threshold`. Sound always; complete only when `exhaustive`.
pub fn density_audit(g: &Graph, size_cap: usize, threshold: Ratio<u64>) -> DensityAudit {
    let n = g.vertex_count();
    if n <= EXHAUSTIVE_AUDIT_LIMIT {
        return DensityAudit {
            witness: exhaustive_densest(g, size_cap, threshold),
            exhaustive: true,
        };
    }
    let k = threshold.ceil().to_integer() as usize;
    let core = k_core(g, k.max(1));
    let mut alive = vec![false; n];
    for &v in &core {
        alive[v] = true;
    }
    let core_graph = g.filter_edges(|u, v| alive[u] && alive[v]);
    let mut candidates: Vec<Vec<Vertex>> = core_graph
        .components()
        .into_iter()
        .filter(|c| c.len() > 1)
        .collect();
    // local balls inside the core, peeled to their densest prefix
    for &v in &core {
        let mut ball = Vec::new();
        let mut r = 1;
        loop {
            let next = bfs_within(&core_graph, &[v], None, r);
            if next.len() > size_cap || next.len() == ball.len() {
                break;
            }
            ball = next;
            r += 1;
        }
        if ball.len() > 1 {
            candidates.push(ball);
        }
    }
    let mut best: Option<DensityWitness> = None;
    for cand in candidates {
        let w = densest_prefix(g, &cand, size_cap);
        if let Some(w) = w {
            if w.average_degree > threshold
                && best.as_ref().is_none_or(|b| w.average_degree > b.average_degree)
            {
                best = Some(w);
            }
        }
    }
    DensityAudit {
        witness: best,
        exhaustive: false,
    }
}

fn exhaustive_densest(g: &Graph, size_cap: usize, threshold: Ratio<u64>) -> Option<DensityWitness> {
    let n = g.vertex_count();
    let mut best: Option<(Ratio<u64>, u32)> = None;
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size > size_cap {
            continue;
        }
        let mut e = 0u64;
        for u in 0..n {
            if mask >> u & 1 == 1 {
                e += g
                    .neighbors(u)
                    .iter()
                    .filter(|&&v| v > u && mask >> v & 1 == 1)
                    .count() as u64;
            }
        }
        let avg = Ratio::new(2 * e, size as u64);
        if avg > threshold && best.is_none_or(|(b, _)| avg > b) {
            best = Some((avg, mask));
        }
    }
    best.map(|(_, mask)| {
        let vs: Vec<_> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        DensityWitness::induced(g, &vs)
    })
}

/// Vertices of the `k`-core of `g`, sorted.
pub fn k_core(g: &Graph, k: usize) -> Vec<Vertex> {
    let n = g.vertex_count();
    let mut deg = g.degrees();
    let mut removed = vec![false; n];
    let mut stack: Vec<_> = (0..n).filter(|&v| deg[v] < k).collect();
    for &v in &stack {
        removed[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
                if deg[u] < k {
                    removed[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    (0..n).filter(|&v| !removed[v]).collect()
}

/// Peels minimum-degree vertices of `g[set]` and returns the densest
/// intermediate set of size at most `size_cap`.
pub(crate) fn densest_prefix(g: &Graph, set: &[Vertex], size_cap: usize) -> Option<DensityWitness> {
    let sub = g.induced(set);
    let m = sub.vertex_count();
    let mut deg = sub.degrees();
    let mut edges = sub.edge_count() as u64;
    let mut queue: BTreeSet<(usize, usize)> = (0..m).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; m];
    let mut alive = m;
    let mut best: Option<(Ratio<u64>, usize)> = None;
    let mut peel = Vec::with_capacity(m);
    loop {
        if alive >= 1 && alive <= size_cap {
            let avg = Ratio::new(2 * edges, alive as u64);
            if best.is_none_or(|(b, _)| avg > b) {
                best = Some((avg, peel.len()));
            }
        }
        let Some((d, v)) = queue.pop_first() else { break };
        removed[v] = true;
        peel.push(v);
        alive -= 1;
        edges -= d as u64;
        for &u in sub.neighbors(v) {
            if !removed[u] {
                queue.remove(&(deg[u], u));
                deg[u] -= 1;
                queue.insert((deg[u], u));
            }
        }
    }
    best.map(|(_, cut)| {
        let mut gone = vec![false; m];
        for &v in &peel[..cut] {
            gone[v] = true;
        }
        let keep: Vec<_> = (0..m).filter(|&v| !gone[v]).map(|v| set[v]).collect();
        DensityWitness::induced(g, &keep)
    })
}

pub(crate) mod ratio_serde {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        format!("{}/{}", r.numer(), r.denom()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let s = String::deserialize(d)?;
        let (a, b) = s
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom("expected a/b"))?;
        let a = a.trim().parse().map_err(serde::de::Error::custom)?;
        let b: u64 = b.trim().parse().map_err(serde::de::Error::custom)?;
        if b == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Ratio::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &e).unwrap()
    }

    #[test]
    fn build_examples() {
        assert_eq!(path(3).degrees(), vec![1, 2, 1]);
        let g = Graph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(cycle(4).degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::EndpointOutOfRange { u: 0, v: 2, n: 2 })
        );
        assert_eq!(Graph::new(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn degeneracy_examples() {
        let tree = Graph::new(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(degeneracy_ordering(&tree).degeneracy, 1);
        assert_eq!(degeneracy_ordering(&Graph::complete(4)).degeneracy, 3);
        let mut e: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.push((0, 3));
        let g = Graph::new(6, &e).unwrap();
        let ord = degeneracy_ordering(&g);
        assert_eq!(ord.degeneracy, 2);
        assert!(ord.is_witness_for(&g));
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(bfs_within(&path(4), &[0], None, 2), vec![0, 1, 2]);
        assert_eq!(bfs_within(&path(4), &[0], Some(1), 3), vec![0]);
        assert_eq!(bfs_within(&cycle(4), &[0], Some(3), 2), vec![0, 1, 2]);
    }

    #[test]
    fn codegree_examples() {
        let star = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(max_codegree(&star), 1);
        assert_eq!(max_codegree(&Graph::complete(4)), 2);
        assert_eq!(max_codegree(&cycle(4)), 2);
        assert_eq!(max_codegree(&Graph::new(2, &[(0, 1)]).unwrap()), 0);
    }

    #[test]
    fn audit_tree_and_clique() {
        let t = Ratio::new(12, 5);
        let audit = density_audit(&path(9), 9, t);
        assert!(audit.exhaustive && audit.witness.is_none());
        let w = density_audit(&Graph::complete(5), 5, t).witness.unwrap();
        assert_eq!(w.average_degree, Ratio::from_integer(4));
        assert!(w.verify(&Graph::complete(5)));
    }

    #[test]
    fn audit_chorded_cycle_matches_enumeration() {
        let mut e: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        e.push((0, 4));
        let g = Graph::new(8, &e).unwrap();
        let w = density_audit(&g, 9, Ratio::from_integer(2)).witness.unwrap();
        // the only subset denser than 2 is the whole graph: 9 edges on 8 vertices
        assert_eq!(w.vertices, (0..8).collect::<Vec<_>>());
        assert_eq!(w.average_degree, Ratio::new(9, 4));
    }

    #[test]
    fn audit_heuristic_branch_finds_clique_in_large_sparse_graph() {
        // K5 hanging off a long path; 30 vertices forces the heuristic branch
        let mut e: Vec<_> = (5..29).map(|i| (i, i + 1)).collect();
        for a in 0..5 {
            for b in a + 1..5 {
                e.push((a, b));
            }
        }
        e.push((4, 5));
        let g = Graph::new(30, &e).unwrap();
        let audit = density_audit(&g, 10, Ratio::new(12, 5));
        assert!(!audit.exhaustive);
        let w = audit.witness.unwrap();
        assert!(w.verify(&g));
        assert!(w.average_degree > Ratio::new(12, 5));
        assert!(w.vertices.len() <= 10);
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = cycle(5);
        let text = g.to_edge_list();
        assert!(text.starts_with("5 5\n0 1\n0 4\n"));
        assert_eq!(Graph::from_edge_list(&text).unwrap(), g);
        assert!(matches!(
            Graph::from_edge_list("2 1\n0 0\n"),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            Graph::from_edge_list("2 1\n0 5\n"),
            Err(GraphError::EndpointOutOfRange { .. })
        ));
        assert!(Graph::from_edge_list("3 2\n0 1\n").is_err());
    }

    #[test]
    fn induced_relabels() {
        let g = cycle(6);
        let h = g.induced(&[0, 1, 2]);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(g.induced_edge_count(&[0, 1, 2, 5]), 3);
    }
}
