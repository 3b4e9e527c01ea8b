//! `d`-critical bootstrap percolation.
//!
//! Starting from a seed set `X`, a vertex `v` joins the current set `S` once
//! at least `d` of its neighbors lie within distance two of `S` in `G - v`
//! (members of `S` are at distance zero). Vertices join one at a time.
//!
//! The state keeps, for every vertex, the number of neighbors in `S` and the
//! number of neighbors in the first shell `N(S) \ S`. With these a
//! neighbor `u` of a candidate `v` qualifies iff `u ∈ S`, `u ∈ N(S)`, or `u`
//! has a first-shell neighbor other than `v`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::escape::{closure_k, is_available, ArcSet, EscapeWay};
use crate::graph::{bfs_within, DensityWitness, Graph, Vertex};

/// One percolation step: `vertex` joined, certified by `triggers` (the `d`
/// smallest-index qualifying neighbors at that moment).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Addition {
    pub vertex: Vertex,
    pub triggers: Vec<Vertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TieBreak {
    #[default]
    Ascending,
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalState {
    d: usize,
    member: Vec<bool>,
    seed: Vec<bool>,
    members: Vec<Vertex>,
    log: Vec<Addition>,
    /// Neighbors inside the set.
    set_nbrs: Vec<u32>,
    /// Neighbors in the first shell.
    shell_nbrs: Vec<u32>,
}

impl CriticalState {
    fn empty(n: usize, d: usize) -> Self {
        Self {
            d,
            member: vec![false; n],
            seed: vec![false; n],
            members: Vec::new(),
            log: Vec::new(),
            set_nbrs: vec![0; n],
            shell_nbrs: vec![0; n],
        }
    }

    pub fn threshold(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.member[v]
    }

    /// Members in order of entry (seeds first).
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn sorted_members(&self) -> Vec<Vertex> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn seeds(&self) -> Vec<Vertex> {
        (0..self.seed.len()).filter(|&v| self.seed[v]).collect()
    }

    pub fn addition_log(&self) -> &[Addition] {
        &self.log
    }

    #[inline]
    fn in_shell(&self, w: Vertex) -> bool {
        !self.member[w] && self.set_nbrs[w] > 0
    }

    fn insert(&mut self, g: &Graph, z: Vertex) {
        if self.in_shell(z) {
            for &w in g.neighbors(z) {
                self.shell_nbrs[w] -= 1;
            }
        }
        self.member[z] = true;
        self.members.push(z);
        for &w in g.neighbors(z) {
            self.set_nbrs[w] += 1;
            if !self.member[w] && self.set_nbrs[w] == 1 {
                for &t in g.neighbors(w) {
                    self.shell_nbrs[t] += 1;
                }
            }
        }
    }

    #[inline]
    fn qualifies(&self, u: Vertex, v_in_shell: bool) -> bool {
        self.member[u] || self.set_nbrs[u] > 0 || self.shell_nbrs[u] > u32::from(v_in_shell)
    }

    /// Neighbors of a non-member `v` within distance two of the set in `G - v`.
    pub fn qualifying_neighbors(&self, g: &Graph, v: Vertex) -> Vec<Vertex> {
        let vs = self.in_shell(v);
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.qualifies(u, vs))
            .collect()
    }

    /// Number of qualifying neighbors of `v`, stopping early at `cap`.
    pub fn score(&self, g: &Graph, v: Vertex, cap: usize) -> usize {
        let vs = self.in_shell(v);
        let mut c = 0;
        for &u in g.neighbors(v) {
            if self.qualifies(u, vs) {
                c += 1;
                if c >= cap {
                    break;
                }
            }
        }
        c
    }

    fn add_seeds(&mut self, g: &Graph, seeds: &[Vertex]) {
        for &x in seeds {
            self.seed[x] = true;
            if !self.member[x] {
                self.insert(g, x);
            }
        }
    }

    fn percolate(&mut self, g: &Graph, order: TieBreak, budget: Option<usize>) {
        let n = g.vertex_count();
        let d = self.d;
        let mut candidates: Vec<Vertex> = (0..n).filter(|&v| g.degree(v) >= d).collect();
        if order == TieBreak::Descending {
            candidates.reverse();
        }
        let mut steps = 0;
        loop {
            if budget.is_some_and(|b| steps >= b) {
                break;
            }
            candidates.retain(|&v| !self.member[v]);
            let Some(v) = candidates
                .iter()
                .copied()
                .find(|&v| self.score(g, v, d) >= d)
            else {
                break;
            };
            let mut triggers = self.qualifying_neighbors(g, v);
            triggers.truncate(d);
            self.insert(g, v);
            self.log.push(Addition { vertex: v, triggers });
            steps += 1;
        }
    }

    /// Line trace `v <- {a,b,c}`, one line per percolation step.
    pub fn trace(&self) -> String {
        let mut s = String::new();
        for a in &self.log {
            let t: Vec<String> = a.triggers.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(s, "{} <- {{{}}}", a.vertex, t.join(","));
        }
        s
    }

    /// Parses a trace produced by [`CriticalState::trace`].
    pub fn parse_trace(text: &str) -> Option<Vec<Addition>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let (v, rest) = l.split_once("<-")?;
                let rest = rest.trim().strip_prefix('{')?.strip_suffix('}')?;
                let triggers = if rest.trim().is_empty() {
                    Vec::new()
                } else {
                    rest.split(',')
                        .map(|t| t.trim().parse().ok())
                        .collect::<Option<Vec<_>>>()?
                };
                Some(Addition {
                    vertex: v.trim().parse().ok()?,
                    triggers,
                })
            })
            .collect()
    }
}

/// `C(X)` with smallest-index tie-breaking.
pub fn critical_set(g: &Graph, x: &[Vertex], d: usize) -> CriticalState {
    critical_set_ordered(g, x, d, TieBreak::Ascending)
}

pub fn critical_set_ordered(g: &Graph, x: &[Vertex], d: usize, order: TieBreak) -> CriticalState {
    assert!(d >= 1, "criticality threshold must be positive");
    let mut s = CriticalState::empty(g.vertex_count(), d);
    s.add_seeds(g, x);
    s.percolate(g, order, None);
    s
}

/// `C(seeds ∪ new_seeds)` grown from an existing fixed point.
pub fn extend_critical(g: &Graph, s: &CriticalState, new_seeds: &[Vertex]) -> CriticalState {
    let mut next = s.clone();
    next.add_seeds(g, new_seeds);
    next.percolate(g, TieBreak::Ascending, None);
    next
}

/// As [`extend_critical`], but stops once more than `max_new` vertices
/// have joined and reports how many had joined by then.
pub fn extend_critical_bounded(
    g: &Graph,
    s: &CriticalState,
    new_seeds: &[Vertex],
    max_new: usize,
) -> Result<CriticalState, usize> {
    let mut next = s.clone();
    next.add_seeds(g, new_seeds);
    let added = next.len() - s.len();
    if added > max_new {
        return Err(added);
    }
    next.percolate(g, TieBreak::Ascending, Some(max_new - added + 1));
    let added = next.len() - s.len();
    if added > max_new {
        Err(added)
    } else {
        Ok(next)
    }
}

/// Replays `state`'s log against the definition using plain BFS, returning
/// the first step whose certificate does not hold.
pub fn audit_log(g: &Graph, state: &CriticalState) -> Result<(), Vertex> {
    let mut current: Vec<Vertex> = state.seeds();
    for a in state.addition_log() {
        let near = bfs_within(g, &current, Some(a.vertex), 2);
        let ok = a.triggers.len() >= state.d
            && a
                .triggers
                .iter()
                .all(|t| g.has_edge(a.vertex, *t) && near.binary_search(t).is_ok());
        if !ok {
            return Err(a.vertex);
        }
        current.push(a.vertex);
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("out-vertex {0} of the escape-way lies outside the critical set")]
pub struct OutsideCritical(pub Vertex);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvailableBoundReport {
    pub checked: usize,
    /// `(v, |A_{K(B)}(v)|, deg(v))` for each vertex breaking the bound.
    pub violators: Vec<(Vertex, usize, usize)>,
}

/// Checks `|A_{K(B)}(v)| ≥ deg(v) - d` for every non-member `v`.
pub fn assert_available_bound(
    g: &Graph,
    s: &CriticalState,
    b: &EscapeWay,
) -> Result<AvailableBoundReport, OutsideCritical> {
    if let Some(v) = b.v_out().into_iter().find(|&v| !s.contains(v)) {
        return Err(OutsideCritical(v));
    }
    let k = closure_k(g, b);
    Ok(available_bound_with_closure(g, s, &k))
}

pub(crate) fn available_bound_with_closure(
    g: &Graph,
    s: &CriticalState,
    k: &ArcSet,
) -> AvailableBoundReport {
    let mut checked = 0;
    let mut violators = Vec::new();
    for v in g.vertices().filter(|&v| !s.contains(v)) {
        checked += 1;
        let avail = g
            .neighbors(v)
            .iter()
            .filter(|&&u| is_available(k, v, u))
            .count();
        if avail + s.d < g.degree(v) {
            violators.push((v, avail, g.degree(v)));
        }
    }
    AvailableBoundReport { checked, violators }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("the seed set must induce a connected subgraph")]
    ConnectivityRequired,
    #[error("cascade reached {reached} vertices, fewer than twice the {seeds} seeds")]
    CascadeTooSmall { reached: usize, seeds: usize },
    #[error("constructed witness misses its bound: {0}")]
    BoundMissed(String),
}

/// Dense subgraph certifying a large cascade from a connected seed set.
///
/// Takes the seeds plus the first `|x|` percolation steps, connects each
/// step to its triggers and each trigger back to the earlier set through at
/// most one middle vertex, greedily drops redundant middle vertices, then
/// strips degree-one vertices. The result has at most `(2d+2)|x|` vertices
/// and average degree at least `2 + (d-2)/(2d+2)`; both are rechecked.
pub fn density_witness(g: &Graph, x: &[Vertex], d: usize) -> Result<DensityWitness, WitnessError> {
    let mut seeds = x.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.is_empty() || !g.induced(&seeds).is_connected() {
        return Err(WitnessError::ConnectivityRequired);
    }
    let k = seeds.len();
    let mut state = CriticalState::empty(g.vertex_count(), d);
    state.add_seeds(g, &seeds);
    state.percolate(g, TieBreak::Ascending, Some(k));
    if state.len() < 2 * k {
        return Err(WitnessError::CascadeTooSmall {
            reached: state.len(),
            seeds: k,
        });
    }
    let steps = &state.addition_log()[..k];
    let n = g.vertex_count();

    // earlier[j] = seeds ∪ first j additions
    let mut order_of = vec![usize::MAX; n];
    for &s in &seeds {
        order_of[s] = 0;
    }
    for (j, a) in steps.iter().enumerate() {
        order_of[a.vertex] = j + 1;
    }
    let in_earlier = |v: Vertex, j: usize| order_of[v] <= j;

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for &a in &seeds {
        for &b in g.neighbors(a) {
            if a < b && order_of[b] == 0 {
                edges.push((a, b));
            }
        }
    }
    let mut middles: Vec<Vertex> = Vec::new();
    for (j, a) in steps.iter().enumerate() {
        let v = a.vertex;
        for &u in &a.triggers {
            edges.push((v, u));
            if in_earlier(u, j) {
                continue;
            }
            if let Some(&c) = g.neighbors(u).iter().find(|&&c| c != v && in_earlier(c, j)) {
                edges.push((u, c));
                continue;
            }
            let z = g
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&z| z != v)
                .find_map(|z| {
                    g.neighbors(z)
                        .iter()
                        .copied()
                        .find(|&c| c != v && in_earlier(c, j))
                        .map(|c| (z, c))
                });
            let (z, c) = z.expect("trigger certified within distance two");
            edges.push((u, z));
            edges.push((z, c));
            middles.push(z);
        }
    }
    let core: std::collections::BTreeSet<Vertex> = seeds
        .iter()
        .copied()
        .chain(steps.iter().map(|a| a.vertex))
        .chain(steps.iter().flat_map(|a| a.triggers.iter().copied()))
        .collect();
    middles.sort_unstable();
    middles.dedup();
    middles.retain(|z| !core.contains(z));

    let mut h = SimpleSubgraph::new(n, &edges);
    // drop middle vertices whose removal keeps every trigger certificate
    for &z in &middles {
        let removed = h.remove_vertex(z);
        let ok = steps.iter().enumerate().all(|(j, a)| {
            a.triggers
                .iter()
                .all(|&u| h.within_two(u, a.vertex, |c| in_earlier(c, j)))
        });
        if !ok {
            h.restore(z, removed);
        }
    }
    h.strip_leaves();
    let witness = DensityWitness::from_parts(h.vertices(), h.edges());

    let size_cap = (2 * d + 2) * k;
    if witness.vertices.len() > size_cap {
        return Err(WitnessError::BoundMissed(format!(
            "{} vertices exceeds {size_cap}",
            witness.vertices.len()
        )));
    }
    if !meets_density_bound(&witness, d) {
        return Err(WitnessError::BoundMissed(format!(
            "average degree {} below 2 + ({d}-2)/(2*{d}+2)",
            witness.average_degree
        )));
    }
    Ok(witness)
}

/// `avg ≥ 2 + (d-2)/(2d+2)` in exact arithmetic.
pub fn meets_density_bound(w: &DensityWitness, d: usize) -> bool {
    use num_rational::Ratio;
    let d = d as i64;
    let bound = Ratio::from_integer(2) + Ratio::new(d - 2, 2 * d + 2);
    let avg = Ratio::new(*w.average_degree.numer() as i64, *w.average_degree.denom() as i64);
    !w.vertices.is_empty() && avg >= bound
}

/// Edge set over the host index space with vertex deletion and restore.
struct SimpleSubgraph {
    adj: Vec<Vec<Vertex>>,
}

impl SimpleSubgraph {
    fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u != v && !adj[u].contains(&v) {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        Self { adj }
    }

    fn remove_vertex(&mut self, z: Vertex) -> Vec<Vertex> {
        let nb = std::mem::take(&mut self.adj[z]);
        for &w in &nb {
            self.adj[w].retain(|&t| t != z);
        }
        nb
    }

    fn restore(&mut self, z: Vertex, nb: Vec<Vertex>) {
        for &w in &nb {
            self.adj[w].push(z);
        }
        self.adj[z] = nb;
    }

    /// `u` within distance two of the earlier set in `self - v`.
    fn within_two(&self, u: Vertex, v: Vertex, earlier: impl Fn(Vertex) -> bool) -> bool {
        earlier(u)
            || self.adj[u].iter().any(|&c| c != v && earlier(c))
            || self.adj[u]
                .iter()
                .filter(|&&z| z != v)
                .any(|&z| self.adj[z].iter().any(|&c| c != v && earlier(c)))
    }

    fn strip_leaves(&mut self) {
        let mut stack: Vec<Vertex> = (0..self.adj.len()).filter(|&v| self.adj[v].len() == 1).collect();
        while let Some(v) = stack.pop() {
            if self.adj[v].len() != 1 {
                continue;
            }
            let w = self.adj[v][0];
            self.remove_vertex(v);
            if self.adj[w].len() == 1 {
                stack.push(w);
            }
        }
    }

    fn vertices(&self) -> Vec<Vertex> {
        (0..self.adj.len()).filter(|&v| !self.adj[v].is_empty()).collect()
    }

    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut e = Vec::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if u < v {
                    e.push((u, v));
                }
            }
        }
        e
    }
}

/// Growth of the connector subgraph during one percolation step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeStep {
    pub vertex: Vertex,
    pub vertices_added: usize,
    pub edges_added: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioProbe {
    /// `H_0 = G[x]`, then one subgraph per step that added a vertex.
    pub sequence: Vec<DensityWitness>,
    pub steps: Vec<ProbeStep>,
}

impl RatioProbe {
    /// Every step adds edges and vertices in ratio at least `3d/(2d+1)`.
    pub fn ratio_bound_holds(&self, d: usize) -> bool {
        self.steps
            .iter()
            .all(|s| s.edges_added * (2 * d + 1) >= 3 * d * s.vertices_added)
    }
}

/// Follows up to `budget` percolation steps, growing `H` by the new vertex,
/// an edge to each of its `d` triggers, and a shortest connector path (of
/// length at most two) from the current `H` to each trigger.
pub fn unbounded_ratio_probe(g: &Graph, x: &[Vertex], d: usize, budget: usize) -> RatioProbe {
    let mut seeds = x.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let mut state = CriticalState::empty(g.vertex_count(), d);
    state.add_seeds(g, &seeds);
    state.percolate(g, TieBreak::Ascending, Some(budget));

    let n = g.vertex_count();
    let mut in_h = vec![false; n];
    for &s in &seeds {
        in_h[s] = true;
    }
    let mut h_vertices = seeds.clone();
    let mut h_edges: Vec<(Vertex, Vertex)> = DensityWitness::induced(g, &seeds).edges;
    let mut sequence = vec![DensityWitness::from_parts(h_vertices.clone(), h_edges.clone())];
    let mut steps = Vec::new();
    for a in state.addition_log() {
        let v = a.vertex;
        if in_h[v] {
            continue;
        }
        in_h[v] = true;
        h_vertices.push(v);
        let mut vertices_added = 1;
        let mut edges_added = 0;
        for &u in &a.triggers {
            if !in_h[u] {
                // shortest path from H - v to u in G - v, length ≤ 2
                let path = connector(g, &in_h, v, u)
                    .expect("trigger within distance two of the current subgraph");
                for w in &path[1..] {
                    in_h[*w] = true;
                    h_vertices.push(*w);
                    vertices_added += 1;
                }
                for p in path.windows(2) {
                    h_edges.push((p[0], p[1]));
                    edges_added += 1;
                }
            }
            h_edges.push((v, u));
            edges_added += 1;
        }
        steps.push(ProbeStep {
            vertex: v,
            vertices_added,
            edges_added,
        });
        sequence.push(DensityWitness::from_parts(h_vertices.clone(), h_edges.clone()));
    }
    RatioProbe { sequence, steps }
}

/// Path `[h, .., u]` from a vertex of `H - v` to `u` avoiding `v`, with at
/// most one intermediate vertex.
fn connector(g: &Graph, in_h: &[bool], v: Vertex, u: Vertex) -> Option<Vec<Vertex>> {
    if let Some(&h) = g.neighbors(u).iter().find(|&&h| h != v && in_h[h]) {
        return Some(vec![h, u]);
    }
    g.neighbors(u).iter().copied().filter(|&z| z != v && !in_h[z]).find_map(|z| {
        g.neighbors(z)
            .iter()
            .copied()
            .find(|&h| h != v && in_h[h])
            .map(|h| vec![h, z, u])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(leaves: usize) -> Graph {
        let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::new(leaves + 1, &e).unwrap()
    }

    #[test]
    fn empty_seed_gives_empty_set() {
        let g = Graph::complete(5);
        assert!(critical_set(&g, &[], 1).is_empty());
    }

    #[test]
    fn threshold_above_degree_never_fires() {
        let g = Graph::complete(5);
        let s = critical_set(&g, &[0], 5);
        assert_eq!(s.sorted_members(), vec![0]);
    }

    #[test]
    fn star_center_joins() {
        let g = star(4);
        let leaves: Vec<_> = (1..=4).collect();
        let s = critical_set(&g, &leaves, 4);
        assert_eq!(s.sorted_members(), vec![0, 1, 2, 3, 4]);
        assert_eq!(s.addition_log()[0].vertex, 0);
        assert_eq!(s.addition_log()[0].triggers, vec![1, 2, 3, 4]);
        assert_eq!(s.trace(), "0 <- {1,2,3,4}\n");
        assert_eq!(CriticalState::parse_trace(&s.trace()).unwrap(), s.addition_log());
    }

    #[test]
    fn distance_is_measured_without_the_candidate() {
        // path 0-1-2: from {0}, vertex 2's neighbor 1 is at distance 1 from 0
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let s = critical_set(&g, &[0], 1);
        assert_eq!(s.sorted_members(), vec![0, 1, 2]);
        // path 0-1-2-3: vertex 1's neighbor 2 reaches 0 only through 1
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = critical_set(&g, &[0], 2);
        assert_eq!(s.sorted_members(), vec![0]);
    }

    #[test]
    fn extension_is_idempotent_on_members() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let s = critical_set(&g, &[0, 1], 2);
        let members = s.sorted_members();
        assert_eq!(extend_critical(&g, &s, &members).sorted_members(), members);
        assert_eq!(extend_critical(&g, &s, &[]).sorted_members(), members);
    }

    #[test]
    fn bound_holds_for_empty_escape_way() {
        let g = Graph::complete(4);
        let s = critical_set(&g, &[0], 3);
        let r = assert_available_bound(&g, &s, &EscapeWay::empty(4)).unwrap();
        assert!(r.violators.is_empty());
    }

    #[test]
    fn bound_precondition_enforced() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let s = critical_set(&g, &[0], 5);
        let b = crate::escape::validate_escape_way(
            &g,
            &ArcSet::from_arcs(&g, &[(1, 2)]).unwrap(),
        )
        .unwrap();
        assert_eq!(assert_available_bound(&g, &s, &b), Err(OutsideCritical(1)));
    }

    #[test]
    fn witness_gate_on_small_cascade() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(matches!(
            density_witness(&g, &[0], 3),
            Err(WitnessError::CascadeTooSmall { .. })
        ));
        assert_eq!(
            density_witness(&g, &[0, 2], 1),
            Err(WitnessError::ConnectivityRequired)
        );
    }

    #[test]
    fn witness_on_four_cycle() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let w = density_witness(&g, &[0, 1], 2).unwrap();
        assert!(w.verify(&g));
        assert!(w.vertices.len() <= 6 * 2);
        assert!(w.average_degree >= num_rational::Ratio::from_integer(2));
    }

    #[test]
    fn probe_stops_immediately_without_cascade() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let p = unbounded_ratio_probe(&g, &[0, 1], 5, 10);
        assert_eq!(p.sequence.len(), 1);
        assert_eq!(p.sequence[0].vertices, vec![0, 1]);
        assert_eq!(p.sequence[0].edge_count, 1);
        assert!(p.steps.is_empty());
    }
}
