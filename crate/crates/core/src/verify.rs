//! Brute-force oracles: induced-subtree search, escape-way enumeration and
//! small-case boundary ratios.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{verify_induced, Embedding};
use crate::escape::{check_escape_way, ArcSet};
use crate::graph::{Graph, Vertex};
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleBudget {
    /// Largest host the oracle accepts.
    pub max_vertices: usize,
    pub max_nodes_expanded: u64,
    /// Wall-clock limit in seconds.
    pub time_hint: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 2_000,
            max_nodes_expanded: 5_000_000,
            time_hint: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum OracleResult {
    Found { embedding: Embedding, expanded: u64 },
    /// The search space was exhausted: no induced copy exists.
    NotFound { expanded: u64 },
    BudgetExhausted { expanded: u64 },
}

impl OracleResult {
    pub fn is_found(&self) -> bool {
        matches!(self, OracleResult::Found { .. })
    }

    pub fn is_exhaustive(&self) -> bool {
        !matches!(self, OracleResult::BudgetExhausted { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("host has {got} vertices, budget allows {limit}")]
    TooLarge { got: usize, limit: usize },
    #[error("j is not a spanning subgraph of g")]
    NotSpanning,
}

struct Search<'a> {
    g: &'a Graph,
    j: &'a Graph,
    /// `(parent, child)` in BFS order from node 0.
    edges: Vec<(usize, usize)>,
    map: Vec<Option<Vertex>>,
    used: Vec<bool>,
    /// Number of mapped vertices adjacent in `g`.
    touch: Vec<u32>,
    expanded: u64,
    limit: u64,
    deadline: Instant,
    out_of_budget: bool,
}

impl Search<'_> {
    fn place(&mut self, node: usize, v: Vertex) {
        self.map[node] = Some(v);
        self.used[v] = true;
        for &w in self.g.neighbors(v) {
            self.touch[w] += 1;
        }
    }

    fn unplace(&mut self, node: usize, v: Vertex) {
        self.map[node] = None;
        self.used[v] = false;
        for &w in self.g.neighbors(v) {
            self.touch[w] -= 1;
        }
    }

    fn tick(&mut self) -> bool {
        self.expanded += 1;
        if self.expanded >= self.limit
            || (self.expanded % 1024 == 0 && Instant::now() >= self.deadline)
        {
            self.out_of_budget = true;
        }
        !self.out_of_budget
    }

    fn by_degree(&self, mut vs: Vec<Vertex>) -> Vec<Vertex> {
        vs.sort_by_key(|&v| (std::cmp::Reverse(self.j.degree(v)), v));
        vs
    }

    fn extend(&mut self, k: usize) -> bool {
        if k == self.edges.len() {
            return true;
        }
        let (p, c) = self.edges[k];
        let pv = self.map[p].expect("parent placed first");
        let cands: Vec<Vertex> = self
            .j
            .neighbors(pv)
            .iter()
            .copied()
            .filter(|&v| !self.used[v] && self.touch[v] == 1)
            .collect();
        for v in self.by_degree(cands) {
            if !self.tick() {
                return false;
            }
            self.place(c, v);
            if self.extend(k + 1) {
                return true;
            }
            self.unplace(c, v);
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

/// Backtracking search for an induced copy of `t` in `g` whose tree edges
/// are edges of `j`. Candidates are tried in descending `j`-degree.
pub fn brute_force_induced_embed(
    g: &Graph,
    j: &Graph,
    t: &Tree,
    budget: &OracleBudget,
) -> Result<OracleResult, OracleError> {
    let n = g.vertex_count();
    if n > budget.max_vertices {
        return Err(OracleError::TooLarge {
            got: n,
            limit: budget.max_vertices,
        });
    }
    if !j.is_spanning_subgraph_of(g) {
        return Err(OracleError::NotSpanning);
    }
    let mut s = Search {
        g,
        j,
        edges: t.bfs_edges(),
        map: vec![None; t.node_count()],
        used: vec![false; n],
        touch: vec![0; n],
        expanded: 0,
        limit: budget.max_nodes_expanded.max(1),
        deadline: Instant::now() + Duration::from_secs_f64(budget.time_hint.max(0.0)),
        out_of_budget: false,
    };
    let roots = s.by_degree(g.vertices().collect());
    for r in roots {
        if !s.tick() {
            break;
        }
        s.place(0, r);
        if s.extend(0) {
            let mut e = Embedding {
                nodes: s
                    .map
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i, v.expect("complete map")))
                    .collect(),
                edges: s.edges.clone(),
                certificate: None,
            };
            let cert = verify_induced(g, j, &e);
            assert!(cert.passed(), "oracle produced a non-induced copy");
            e.certificate = Some(cert);
            return Ok(OracleResult::Found {
                embedding: e,
                expanded: s.expanded,
            });
        }
        s.unplace(0, r);
        if s.out_of_budget {
            break;
        }
    }
    Ok(if s.out_of_budget {
        OracleResult::BudgetExhausted { expanded: s.expanded }
    } else {
        OracleResult::NotFound { expanded: s.expanded }
    })
}

pub const ESCAPE_ENUMERATION_LIMIT: usize = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("graph has {0} vertices; exhaustive enumeration is limited to {ESCAPE_ENUMERATION_LIMIT}")]
pub struct TooLarge(pub usize);

/// Calls `f` on every escape-way of `g` and returns how many there are.
///
/// Each vertex picks at most one in-neighbour; choices that create a
/// bi-oriented pair or break inducedness are discarded.
pub fn for_each_escape_way(g: &Graph, mut f: impl FnMut(&ArcSet)) -> Result<usize, TooLarge> {
    let n = g.vertex_count();
    if n > ESCAPE_ENUMERATION_LIMIT {
        return Err(TooLarge(n));
    }
    let mut choice = vec![0usize; n];
    let mut count = 0;
    loop {
        let mut a = ArcSet::new(n);
        let mut ok = true;
        for v in 0..n {
            if choice[v] > 0 {
                let u = g.neighbors(v)[choice[v] - 1];
                if a.contains(v, u) {
                    ok = false;
                    break;
                }
                a.insert(g, u, v).expect("neighbour arc");
            }
        }
        if ok && check_escape_way(g, &a).is_ok() {
            count += 1;
            f(&a);
        }
        // odometer over in-neighbour choices
        let mut i = 0;
        loop {
            if i == n {
                return Ok(count);
            }
            choice[i] += 1;
            if choice[i] <= g.degree(i) {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub fn enumerate_escape_ways(g: &Graph) -> Result<Vec<ArcSet>, TooLarge> {
    let mut out = Vec::new();
    for_each_escape_way(g, |a| out.push(a.clone()))?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheegerEstimate {
    #[serde(with = "crate::graph::ratio_serde")]
    pub edge_boundary_min_ratio: Ratio<u64>,
    pub edge_argmin: Vec<Vertex>,
    #[serde(with = "crate::graph::ratio_serde")]
    pub vertex_boundary_min_ratio: Ratio<u64>,
    pub vertex_argmin: Vec<Vertex>,
    /// Largest subset size enumerated.
    pub size_cap: usize,
    /// Every subset of at most half the vertices was covered.
    pub exact_flag: bool,
}

struct Cheeger<'a> {
    g: &'a Graph,
    cap: usize,
    set: Vec<Vertex>,
    inside: Vec<bool>,
    /// Neighbours inside the current set.
    hits: Vec<u32>,
    inner_edges: u64,
    deg_sum: u64,
    outer: u64,
    best_edge: (Ratio<u64>, Vec<Vertex>),
    best_vertex: (Ratio<u64>, Vec<Vertex>),
}

impl Cheeger<'_> {
    fn push(&mut self, v: Vertex) {
        self.set.push(v);
        self.inside[v] = true;
        self.inner_edges += self.hits[v] as u64;
        self.deg_sum += self.g.degree(v) as u64;
        if self.hits[v] > 0 {
            self.outer -= 1;
        }
        for &w in self.g.neighbors(v) {
            if self.hits[w] == 0 && !self.inside[w] {
                self.outer += 1;
            }
            self.hits[w] += 1;
        }
    }

    fn pop(&mut self) {
        let v = self.set.pop().expect("nonempty");
        for &w in self.g.neighbors(v) {
            self.hits[w] -= 1;
            if self.hits[w] == 0 && !self.inside[w] {
                self.outer -= 1;
            }
        }
        self.inside[v] = false;
        if self.hits[v] > 0 {
            self.outer += 1;
        }
        self.deg_sum -= self.g.degree(v) as u64;
        self.inner_edges -= self.hits[v] as u64;
    }

    fn record(&mut self) {
        let k = self.set.len() as u64;
        let e = Ratio::new(self.deg_sum - 2 * self.inner_edges, k);
        if e < self.best_edge.0 {
            self.best_edge = (e, self.set.clone());
        }
        let vr = Ratio::new(self.outer, k);
        if vr < self.best_vertex.0 {
            self.best_vertex = (vr, self.set.clone());
        }
    }

    fn walk(&mut self, from: Vertex) {
        for v in from..self.g.vertex_count() {
            self.push(v);
            self.record();
            if self.set.len() < self.cap {
                self.walk(v + 1);
            }
            self.pop();
        }
    }
}

/// Minimum edge- and vertex-boundary ratios over all nonempty subsets of
/// size at most `min(size_cap, n/2)`.
pub fn cheeger_small(g: &Graph, size_cap: usize) -> CheegerEstimate {
    let n = g.vertex_count();
    let cap = size_cap.min(n / 2).max(1).min(n);
    let inf = Ratio::from_integer(u64::MAX);
    let mut c = Cheeger {
        g,
        cap,
        set: Vec::new(),
        inside: vec![false; n],
        hits: vec![0; n],
        inner_edges: 0,
        deg_sum: 0,
        outer: 0,
        best_edge: (inf, Vec::new()),
        best_vertex: (inf, Vec::new()),
    };
    if n > 0 {
        c.walk(0);
    }
    let zero = Ratio::from_integer(0);
    CheegerEstimate {
        edge_boundary_min_ratio: if n == 0 { zero } else { c.best_edge.0 },
        edge_argmin: c.best_edge.1,
        vertex_boundary_min_ratio: if n == 0 { zero } else { c.best_vertex.0 },
        vertex_argmin: c.best_vertex.1,
        size_cap: cap,
        exact_flag: 2 * size_cap >= n,
    }
}

/// Minimum of `(Σ ambient(x) − 2e(X)) / |X|` over connected `X` with
/// `|X| ≤ cap`: the edge-boundary ratio when `g` sits inside a larger graph
/// whose degrees are `ambient`. Disconnected sets never do better, since
/// their ratio is a mediant of their components' ratios.
pub fn connected_edge_ratio(g: &Graph, ambient: &[usize], cap: usize) -> Option<(Ratio<u64>, Vec<Vertex>)> {
    let n = g.vertex_count();
    assert_eq!(ambient.len(), n);
    let mut best: Option<(Ratio<u64>, Vec<Vertex>)> = None;
    let mut set = Vec::new();
    let mut inside = vec![false; n];
    for v in 0..n {
        // connected sets whose smallest vertex is v
        set.push(v);
        inside[v] = true;
        let ext: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        grow(g, ambient, cap, v, &mut set, &mut inside, ext, &mut best);
        inside[v] = false;
        set.pop();
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn grow(
    g: &Graph,
    ambient: &[usize],
    cap: usize,
    root: Vertex,
    set: &mut Vec<Vertex>,
    inside: &mut [bool],
    mut ext: Vec<Vertex>,
    best: &mut Option<(Ratio<u64>, Vec<Vertex>)>,
) {
    let inner: u64 = set
        .iter()
        .map(|&x| g.neighbors(x).iter().filter(|&&y| inside[y]).count() as u64)
        .sum::<u64>()
        / 2;
    let amb: u64 = set.iter().map(|&x| ambient[x] as u64).sum();
    let r = Ratio::new(amb.saturating_sub(2 * inner), set.len() as u64);
    if best.as_ref().is_none_or(|(b, _)| r < *b) {
        *best = Some((r, set.clone()));
    }
    if set.len() == cap {
        return;
    }
    while let Some(w) = ext.pop() {
        // exclusive neighbours of w: not in set and not adjacent to it
        let mut next = ext.clone();
        for &u in g.neighbors(w) {
            if u > root
                && !inside[u]
                && !next.contains(&u)
                && u != w
                && !g.neighbors(u).iter().any(|&y| inside[y])
            {
                next.push(u);
            }
        }
        set.push(w);
        inside[w] = true;
        grow(g, ambient, cap, root, set, inside, next, best);
        inside[w] = false;
        set.pop();
    }
}
