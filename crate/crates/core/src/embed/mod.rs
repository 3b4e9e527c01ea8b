//! The online embedding game.
//!
//! [`EmbedState`] holds a partial tree `T` mapped into the host, an
//! escape-way `B` whose arcs reserve future extensions, the critical set
//! `C` of the tree's non-leaves (plus root) and the cached closure `K(B)`.
//! Between moves it maintains:
//!
//! * every tree arc is an arc of `B`;
//! * the vertices with out-arcs in `B` are exactly `C`;
//! * every critical vertex has at least `Δ-1` out-arcs, and the root keeps
//!   an arc to each of its reserved neighbors (a maximal independent set of
//!   its `j`-neighbors, taken greedily by index).
//!
//! A request to extend node `x` is answered from `x`'s reserved
//! out-neighbors when `x` is critical. Otherwise the critical set is grown,
//! the newly critical vertices get fresh reservations, and then `x` is
//! extended.

mod adversary;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::critical::{critical_set, density_witness, extend_critical_bounded, CriticalState};
use crate::escape::{
    available_neighbors, check_escape_way, closure_k, extend_closure_arc, union_escape_ways_with_closure,
    ArcSet, EscapeWay,
};
use crate::graph::{density_audit, DensityWitness, Graph, Vertex};
use crate::reservation::{reserve_for, ReservationError, ReservationParams, TargetRule};

pub use adversary::{subtree, 
    parse_script, Adversary, FreeRandom, Request, ScriptError, Scripted, TreeAdversary, TreeOrder,
};

pub type NodeId = usize;

/// Minimum-degree factor of the literal hypotheses: `min deg ≥ 10⁷Δ`.
pub const PAPER_DEGREE_FACTOR: u64 = 10_000_000;
/// Largest subset size the paper-mode density audit searches.
pub const PAPER_AUDIT_LOCAL_CAP: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Literal hypotheses are checked and refused when violated.
    Paper,
    #[default]
    Practical,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootPolicy {
    /// Smallest index among vertices of maximum `j`-degree.
    #[default]
    MaxDegree,
    Fixed(Vertex),
}

/// Which host neighbors of the root are cut out before the game starts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootDeletion {
    /// Host neighbors of the root that it does not reserve are isolated.
    #[default]
    Unreserved,
    /// Nothing is removed. Embeddings may then contain chords at the root,
    /// which [`verify_induced`] reports.
    Keep,
}

/// Abort rule for a single cascade.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CascadeBound {
    /// Abort once more vertices join than `|X ∪ {x}|`.
    #[default]
    SeedCount,
    Fixed(usize),
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbedConfig {
    pub delta: usize,
    /// Criticality threshold.
    pub d: usize,
    pub mode: Mode,
    pub root: RootPolicy,
    pub root_deletion: RootDeletion,
    pub cascade_bound: CascadeBound,
    /// Floor on the reservation's `C`; `None` picks `⌈√(d/2Δ)⌉` in practical
    /// mode and 1 in paper mode.
    pub reservation_floor: Option<usize>,
    pub max_retries: usize,
    pub seed: u64,
    /// Full closure recomputation every this many steps (0 disables).
    pub spot_check_every: usize,
    /// Rollback expands each deleted node to its subtree instead of
    /// rejecting sets that are not closed downward.
    pub expand_rollback: bool,
}

impl EmbedConfig {
    pub fn practical(delta: usize, d: usize, seed: u64) -> Self {
        Self {
            delta,
            d,
            mode: Mode::Practical,
            root: RootPolicy::MaxDegree,
            root_deletion: RootDeletion::Unreserved,
            cascade_bound: CascadeBound::SeedCount,
            reservation_floor: None,
            max_retries: 256,
            seed,
            spot_check_every: 64,
            expand_rollback: false,
        }
    }

    pub fn paper(delta: usize, d: usize, seed: u64) -> Self {
        Self {
            mode: Mode::Paper,
            ..Self::practical(delta, d, seed)
        }
    }

    /// Out-degree reserved for every critical vertex.
    pub fn reserve_target(&self) -> usize {
        self.delta.saturating_sub(1).max(1)
    }

    fn cap_floor(&self) -> usize {
        self.reservation_floor.unwrap_or(match self.mode {
            Mode::Paper => 1,
            Mode::Practical => {
                let r = self.d as f64 / (2.0 * self.delta.max(1) as f64);
                r.sqrt().ceil().max(1.0) as usize
            }
        })
    }
}

/// How the criticality threshold is derived from the host.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdRule {
    /// `max(8, min deg / 4)`.
    MinDegreeQuarter,
    /// `max(8, q-quantile of the degree sequence)`.
    DegreeQuantile(f64),
    /// `max(8, D + 1)` where `D` is the `(k+1)`-th largest degree, so at most
    /// `k` vertices have degree at least the threshold.
    HubCount(usize),
    Fixed(usize),
}

impl Default for ThresholdRule {
    fn default() -> Self {
        ThresholdRule::HubCount(8)
    }
}

impl ThresholdRule {
    /// Threshold for host `g`; criticality counts `g`-neighbours, so the
    /// degrees used are those of `g`, not of the spanning subgraph.
    pub fn resolve(&self, g: &Graph) -> usize {
        match *self {
            ThresholdRule::MinDegreeQuarter => (g.min_degree() / 4).max(8),
            ThresholdRule::DegreeQuantile(q) => {
                let mut deg = g.degrees();
                if deg.is_empty() {
                    return 8;
                }
                deg.sort_unstable();
                let idx = ((deg.len() - 1) as f64 * q.clamp(0.0, 1.0)).round() as usize;
                deg[idx].max(8)
            }
            ThresholdRule::HubCount(k) => {
                let mut deg = g.degrees();
                deg.sort_unstable_by(|a, b| b.cmp(a));
                deg.get(k).map_or(0, |&x| x + 1).max(8)
            }
            ThresholdRule::Fixed(d) => d,
        }
    }
}

/// A literal hypothesis failing on the given host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "hypothesis", rename_all = "kebab-case")]
pub enum Hypothesis {
    MinimumDegree { required: u64, actual: usize },
    Density {
        size_cap: usize,
        threshold: String,
        witness: DensityWitness,
    },
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::MinimumDegree { required, actual } => {
                write!(f, "minimum degree {actual} is below {required}")
            }
            Hypothesis::Density {
                size_cap,
                threshold,
                witness,
            } => write!(
                f,
                "density audit: {} vertices (cap {size_cap}) with average degree {} > {threshold}",
                witness.vertices.len(),
                witness.average_degree
            ),
        }
    }
}

/// Literal hypotheses on `j` that fail. Empty means the run may proceed.
pub fn paper_hypotheses(j: &Graph, delta: usize) -> Vec<Hypothesis> {
    let mut out = Vec::new();
    let required = PAPER_DEGREE_FACTOR.saturating_mul(delta as u64);
    if (j.min_degree() as u64) < required {
        out.push(Hypothesis::MinimumDegree {
            required,
            actual: j.min_degree(),
        });
    }
    let threshold = Ratio::new(12u64, 5);
    let cap = j.vertex_count().min(PAPER_AUDIT_LOCAL_CAP);
    if let Some(w) = density_audit(j, cap, threshold).witness {
        out.push(Hypothesis::Density {
            size_cap: cap,
            threshold: "12/5".into(),
            witness: w,
        });
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("the host graph has no vertices")]
    EmptyGraph,
    #[error("j is not a spanning subgraph of g")]
    NotSpanning,
    #[error("root {0} has no neighbors in j")]
    RootIsolated(Vertex),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("paper-mode hypotheses fail: {}", .0.iter().map(|h| h.to_string()).collect::<Vec<_>>().join("; "))]
    HypothesisRefused(Vec<Hypothesis>),
    #[error("node {0} is not in the current tree")]
    UnknownNode(NodeId),
    #[error("node {node} already has tree degree {degree}")]
    NodeSaturated { node: NodeId, degree: usize },
    #[error("cascade of {size} new critical vertices exceeds the bound {bound}")]
    CascadeTooLarge {
        size: usize,
        bound: usize,
        witness: Option<Box<DensityWitness>>,
    },
    #[error("reservation failed after {attempts} attempts; {} critical vertices short", deficits.len())]
    ReservationFailed { attempts: usize, deficits: Vec<Vertex> },
    #[error("no reserved out-neighbor left at node {node} (vertex {vertex})")]
    NoAvailableExtension { node: NodeId, vertex: Vertex },
    #[error("the root cannot be rolled back")]
    RootDeletion,
    #[error("rollback set is missing descendant {0}")]
    NotClosed(NodeId),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

/// One line of the game trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum Event {
    Init {
        root: Vertex,
        reserved: usize,
        removed: usize,
        critical: usize,
    },
    Case1 {
        node: NodeId,
        vertex: Vertex,
        child: NodeId,
        child_vertex: Vertex,
    },
    Case2 {
        node: NodeId,
        vertex: Vertex,
        cascade: usize,
        retries: usize,
        new_arcs: usize,
        child: NodeId,
        child_vertex: Vertex,
    },
    Rollback {
        nodes: Vec<NodeId>,
        critical: usize,
        arcs: usize,
    },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Init {
                root,
                reserved,
                removed,
                critical,
            } => write!(f, "init root={root} reserved={reserved} removed={removed} critical={critical}"),
            Event::Case1 {
                node,
                vertex,
                child,
                child_vertex,
            } => write!(f, "case1 {node}@{vertex} -> {child}@{child_vertex}"),
            Event::Case2 {
                node,
                vertex,
                cascade,
                retries,
                new_arcs,
                child,
                child_vertex,
            } => write!(
                f,
                "case2 {node}@{vertex} cascade={cascade} retries={retries} arcs=+{new_arcs} -> {child}@{child_vertex}"
            ),
            Event::Rollback {
                nodes,
                critical,
                arcs,
            } => {
                let ids: Vec<String> = nodes.iter().map(|n| n.to_string()).collect();
                write!(f, "rollback {} critical={critical} arcs={arcs}", ids.join(","))
            }
        }
    }
}

/// Renders an event log one line per event.
pub fn format_log(log: &[Event]) -> String {
    log.iter().map(|e| format!("{e}\n")).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameStats {
    pub case1: usize,
    pub case2: usize,
    pub rollbacks: usize,
    pub reservation_attempts: usize,
    pub max_cascade: usize,
    pub cascade_sizes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct EmbedState {
    cfg: EmbedConfig,
    host: Graph,
    g: Graph,
    j: Graph,
    root: Vertex,
    removed: Vec<Vertex>,
    /// The root's reserved neighbours.
    root_reserve: Vec<Vertex>,
    node_vertex: Vec<Option<Vertex>>,
    node_parent: Vec<Option<NodeId>>,
    node_children: Vec<Vec<NodeId>>,
    vertex_node: Vec<Option<NodeId>>,
    live: usize,
    bway: ArcSet,
    crit: CriticalState,
    closure: ArcSet,
    step: usize,
    log: Vec<Event>,
    stats: GameStats,
}

impl EmbedState {
    /// Chooses the root, reserves all its `j`-neighbors and sets `C = C({r})`.
    pub fn init(g: &Graph, j: &Graph, cfg: EmbedConfig) -> Result<Self, EmbedError> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(EmbedError::EmptyGraph);
        }
        if cfg.delta == 0 || cfg.d == 0 {
            return Err(EmbedError::InvalidConfig("delta and d must be positive".into()));
        }
        if j.vertex_count() != n || !j.is_spanning_subgraph_of(g) {
            return Err(EmbedError::NotSpanning);
        }
        if cfg.mode == Mode::Paper {
            let failed = paper_hypotheses(j, cfg.delta);
            if !failed.is_empty() {
                return Err(EmbedError::HypothesisRefused(failed));
            }
        }
        let root = match cfg.root {
            RootPolicy::MaxDegree => {
                let best = j.max_degree();
                j.vertices().find(|&v| j.degree(v) == best).expect("nonempty")
            }
            RootPolicy::Fixed(r) if r < n => r,
            RootPolicy::Fixed(r) => {
                return Err(EmbedError::InvalidConfig(format!("root {r} out of range")));
            }
        };
        if n > 1 && j.degree(root) == 0 {
            return Err(EmbedError::RootIsolated(root));
        }

        // the root reserves an independent part of its j-neighbourhood
        let mut kept: Vec<Vertex> = Vec::new();
        for &u in j.neighbors(root) {
            if kept.iter().all(|&w| !g.has_edge(u, w)) {
                kept.push(u);
            }
        }
        let removed: Vec<Vertex> = match cfg.root_deletion {
            RootDeletion::Unreserved => g
                .neighbors(root)
                .iter()
                .copied()
                .filter(|u| kept.binary_search(u).is_err())
                .collect(),
            RootDeletion::Keep => Vec::new(),
        };
        let (gw, jw) = if removed.is_empty() {
            (g.clone(), j.clone())
        } else {
            let mut mask = vec![false; n];
            for &u in &removed {
                mask[u] = true;
            }
            (g.isolate(&mask), j.isolate(&mask))
        };

        let mut bway = ArcSet::new(n);
        for &u in &kept {
            bway.insert_unchecked(root, u);
        }
        let root_reserve = kept;
        let closure = closure_k(&gw, &bway);
        let crit = critical_set(&gw, &[root], cfg.d);

        let mut s = EmbedState {
            host: g.clone(),
            g: gw,
            j: jw,
            root,
            removed,
            root_reserve,
            node_vertex: vec![Some(root)],
            node_parent: vec![None],
            node_children: vec![Vec::new()],
            vertex_node: {
                let mut m = vec![None; n];
                m[root] = Some(0);
                m
            },
            live: 1,
            bway,
            crit,
            closure,
            step: 0,
            log: Vec::new(),
            stats: GameStats::default(),
            cfg,
        };
        // vertices already critical from the root alone need reservations too
        let extra: Vec<Vertex> = s.crit.members().iter().copied().filter(|&v| v != root).collect();
        if !extra.is_empty() {
            s.reserve_new(&extra)?;
        }
        s.log.push(Event::Init {
            root,
            reserved: s.bway.out_degree(root),
            removed: s.removed.len(),
            critical: s.crit.len(),
        });
        s.check_invariants()?;
        Ok(s)
    }

    pub fn config(&self) -> &EmbedConfig {
        &self.cfg
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    /// Host as given to [`EmbedState::init`].
    pub fn host(&self) -> &Graph {
        &self.host
    }

    /// Host after root deletions.
    pub fn working_g(&self) -> &Graph {
        &self.g
    }

    pub fn working_j(&self) -> &Graph {
        &self.j
    }

    /// Vertices isolated by the root rule.
    pub fn removed(&self) -> &[Vertex] {
        &self.removed
    }

    pub fn escape_way(&self) -> &ArcSet {
        &self.bway
    }

    pub fn critical(&self) -> &CriticalState {
        &self.crit
    }

    pub fn closure_cache(&self) -> &ArcSet {
        &self.closure
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn log(&self) -> &[Event] {
        &self.log
    }

    pub fn stats(&self) -> &GameStats {
        &self.stats
    }

    /// Number of nodes in the current tree.
    pub fn node_count(&self) -> usize {
        self.live
    }

    pub fn vertex_of(&self, node: NodeId) -> Option<Vertex> {
        self.node_vertex.get(node).copied().flatten()
    }

    pub fn node_of(&self, v: Vertex) -> Option<NodeId> {
        self.vertex_node.get(v).copied().flatten()
    }

    pub fn parent_of(&self, node: NodeId) -> Option<NodeId> {
        self.node_parent.get(node).copied().flatten()
    }

    pub fn children_of(&self, node: NodeId) -> &[NodeId] {
        &self.node_children[node]
    }

    /// Live node ids, ascending.
    pub fn nodes(&self) -> Vec<NodeId> {
        (0..self.node_vertex.len())
            .filter(|&i| self.node_vertex[i].is_some())
            .collect()
    }

    pub fn tree_degree(&self, node: NodeId) -> usize {
        self.node_children[node].len() + usize::from(self.node_parent[node].is_some())
    }

    /// Live nodes that may still be extended.
    pub fn open_nodes(&self) -> Vec<NodeId> {
        self.nodes()
            .into_iter()
            .filter(|&x| self.tree_degree(x) < self.cfg.delta)
            .collect()
    }

    /// Qualifying-neighbor count of `node`'s vertex, capped at `d`.
    pub fn criticality_score(&self, node: NodeId) -> usize {
        match self.vertex_of(node) {
            Some(v) if self.crit.contains(v) => self.cfg.d,
            Some(v) => self.crit.score(&self.g, v, self.cfg.d),
            None => 0,
        }
    }

    fn attach(&mut self, parent: NodeId, y: Vertex) -> NodeId {
        let id = self.node_vertex.len();
        self.node_vertex.push(Some(y));
        self.node_parent.push(Some(parent));
        self.node_children.push(Vec::new());
        self.node_children[parent].push(id);
        self.vertex_node[y] = Some(id);
        self.live += 1;
        id
    }

    /// Smallest reserved out-neighbor of `x` not yet in the tree.
    fn pick_child(&self, x: Vertex) -> Option<Vertex> {
        self.bway
            .out_neighbors(x)
            .iter()
            .copied()
            .find(|&y| self.vertex_node[y].is_none())
    }

    /// Answers a request to extend `node`; returns the new child's id.
    pub fn extend(&mut self, node: NodeId) -> Result<NodeId, EmbedError> {
        let x = self.vertex_of(node).ok_or(EmbedError::UnknownNode(node))?;
        let degree = self.tree_degree(node);
        if degree >= self.cfg.delta {
            return Err(EmbedError::NodeSaturated { node, degree });
        }
        self.step += 1;
        if self.crit.contains(x) {
            let y = self
                .pick_child(x)
                .ok_or(EmbedError::NoAvailableExtension { node, vertex: x })?;
            let child = self.attach(node, y);
            self.stats.case1 += 1;
            self.log.push(Event::Case1 {
                node,
                vertex: x,
                child,
                child_vertex: y,
            });
        } else {
            let before = self.bway.len();
            let attempts_before = self.stats.reservation_attempts;
            let bound = match self.cfg.cascade_bound {
                CascadeBound::SeedCount => self.seed_set().len() + 1,
                CascadeBound::Fixed(k) => k,
                CascadeBound::Unbounded => usize::MAX,
            };
            let next = match extend_critical_bounded(&self.g, &self.crit, &[x], bound) {
                Ok(next) => next,
                Err(size) => {
                    let mut seeds = self.seed_set();
                    seeds.push(x);
                    let witness = density_witness(&self.g, &seeds, self.cfg.d).ok().map(Box::new);
                    return Err(EmbedError::CascadeTooLarge {
                        size,
                        bound,
                        witness,
                    });
                }
            };
            let fresh: Vec<Vertex> = next.members()[self.crit.len()..].to_vec();
            debug_assert!(fresh.contains(&x));
            // a failed step leaves the previous state in place
            let saved = (self.bway.clone(), self.closure.clone());
            let prev = std::mem::replace(&mut self.crit, next);
            let y = match self.reserve_new(&fresh).and_then(|()| {
                self.pick_child(x)
                    .ok_or(EmbedError::NoAvailableExtension { node, vertex: x })
            }) {
                Ok(y) => y,
                Err(e) => {
                    self.crit = prev;
                    (self.bway, self.closure) = saved;
                    return Err(e);
                }
            };
            let child = self.attach(node, y);
            self.stats.case2 += 1;
            self.stats.max_cascade = self.stats.max_cascade.max(fresh.len());
            self.stats.cascade_sizes.push(fresh.len());
            self.log.push(Event::Case2 {
                node,
                vertex: x,
                cascade: fresh.len(),
                retries: self.stats.reservation_attempts - attempts_before,
                new_arcs: self.bway.len() - before,
                child,
                child_vertex: y,
            });
        }
        if self.cfg.spot_check_every > 0 && self.step % self.cfg.spot_check_every == 0 {
            let full = closure_k(&self.g, &self.bway);
            if full != self.closure {
                return Err(EmbedError::InvariantBreach("closure cache drifted".into()));
            }
        }
        self.check_invariants()?;
        Ok(self.node_vertex.len() - 1)
    }

    /// Root plus the vertices of non-leaf nodes.
    fn seed_set(&self) -> Vec<Vertex> {
        let mut out = vec![self.root];
        for (i, v) in self.node_vertex.iter().enumerate() {
            if let Some(v) = *v {
                if i != 0 && !self.node_children[i].is_empty() {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Gives each vertex of `fresh` (just made critical) its own reserved
    /// out-arcs, merged into `B`.
    fn reserve_new(&mut self, fresh: &[Vertex]) -> Result<(), EmbedError> {
        let n = self.g.vertex_count();
        let mut in_plus = vec![false; n];
        let mut plus = Vec::new();
        for &v in fresh {
            if !in_plus[v] {
                in_plus[v] = true;
                plus.push(v);
            }
            let avail = available_neighbors(&self.g, &self.closure, v);
            for u in avail.into_iter().take(self.cfg.d) {
                if !in_plus[u] {
                    in_plus[u] = true;
                    plus.push(u);
                }
            }
        }
        let local = |h: &Graph| {
            let mut edges = Vec::new();
            for &u in &plus {
                for &w in h.neighbors(u) {
                    if u < w && in_plus[w] {
                        edges.push((u, w));
                    }
                }
            }
            Graph::new(n, &edges).expect("subgraph edges are valid")
        };
        let f = local(&self.g);
        let jf = local(&self.j);
        let params = ReservationParams {
            degeneracy_cap: None,
            cap_floor: self.cfg.cap_floor(),
            sample_prob: None,
            target: TargetRule::Constant(self.cfg.reserve_target()),
            max_retries: self.cfg.max_retries,
            rng_seed: mix(self.cfg.seed, self.step as u64),
        };
        let outcome = match reserve_for(&f, &jf, &self.closure, &params, fresh) {
            Ok(o) => o,
            Err(ReservationError::TargetUnreachable { attempts, best }) => {
                self.stats.reservation_attempts += attempts;
                return Err(EmbedError::ReservationFailed {
                    attempts,
                    deficits: best.deficits,
                });
            }
        };
        self.stats.reservation_attempts += outcome.retries_used;
        let mut is_fresh = vec![false; n];
        for &v in fresh {
            is_fresh[v] = true;
        }
        let kept = outcome.escape_way.restrict(|u, _| is_fresh[u]);
        let merged = union_escape_ways_with_closure(
            &self.g,
            &EscapeWay::trusted(self.bway.clone()),
            &self.closure,
            &kept,
        )
        .map_err(|e| EmbedError::InvariantBreach(format!("reservation does not merge: {e}")))?;
        for (u, v) in kept.arcs().arcs() {
            extend_closure_arc(&self.g, &mut self.closure, u, v);
        }
        self.bway = merged.into_arcs();
        Ok(())
    }

    /// Removes `nodes` from the tree and rebuilds `C` and `B` from what is
    /// left.
    pub fn rollback(&mut self, nodes: &[NodeId]) -> Result<(), EmbedError> {
        if nodes.is_empty() {
            return Ok(());
        }
        let mut doomed = BTreeSet::new();
        for &x in nodes {
            if self.vertex_of(x).is_none() {
                return Err(EmbedError::UnknownNode(x));
            }
            if x == 0 {
                return Err(EmbedError::RootDeletion);
            }
            doomed.insert(x);
        }
        let mut stack: Vec<NodeId> = doomed.iter().copied().collect();
        while let Some(x) = stack.pop() {
            for &c in &self.node_children[x] {
                if doomed.insert(c) {
                    if !self.cfg.expand_rollback {
                        return Err(EmbedError::NotClosed(c));
                    }
                    stack.push(c);
                }
            }
        }
        for &x in &doomed {
            let v = self.node_vertex[x].take().expect("live");
            self.vertex_node[v] = None;
            if let Some(p) = self.node_parent[x] {
                self.node_children[p].retain(|&c| c != x);
            }
            self.node_children[x].clear();
            self.live -= 1;
        }
        self.crit = critical_set(&self.g, &self.seed_set(), self.cfg.d);
        let crit = &self.crit;
        self.bway = self.bway.filtered(|u, _| crit.contains(u));
        self.closure = closure_k(&self.g, &self.bway);
        self.stats.rollbacks += 1;
        self.log.push(Event::Rollback {
            nodes: doomed.into_iter().collect(),
            critical: self.crit.len(),
            arcs: self.bway.len(),
        });
        self.check_invariants()
    }

    /// Checks all maintained invariants plus escape-way validity of `B`.
    pub fn check_invariants(&self) -> Result<(), EmbedError> {
        let breach = |m: String| Err(EmbedError::InvariantBreach(m));
        for (i, v) in self.node_vertex.iter().enumerate() {
            if let (Some(c), Some(p)) = (v, self.node_parent[i]) {
                let pv = self.node_vertex[p].expect("parent is live");
                if !self.bway.contains(pv, *c) {
                    return breach(format!("tree arc {pv}->{c} missing from B"));
                }
            }
        }
        let mut out: Vec<Vertex> = self.bway.v_out();
        if self.j.degree(self.root) == 0 {
            // a root without neighbors has nothing to reserve
            out.push(self.root);
            out.sort_unstable();
        }
        if out != self.crit.sorted_members() {
            return breach(format!(
                "out-vertices of B ({}) differ from the critical set ({})",
                out.len(),
                self.crit.len()
            ));
        }
        let need = self.cfg.reserve_target();
        for &v in self.crit.members() {
            if v == self.root {
                if let Some(&u) = self.root_reserve.iter().find(|&&u| !self.bway.contains(v, u)) {
                    return breach(format!("root lost its arc to {u}"));
                }
            } else if self.bway.out_degree(v) < need {
                return breach(format!(
                    "critical vertex {v} has out-degree {} < {need}",
                    self.bway.out_degree(v)
                ));
            }
        }
        if let Err(e) = check_escape_way(&self.g, &self.bway) {
            return breach(format!("B is not an escape-way: {e}"));
        }
        Ok(())
    }

    /// Current tree as an embedding (not yet verified).
    pub fn embedding(&self) -> Embedding {
        let nodes: Vec<(NodeId, Vertex)> = self
            .node_vertex
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect();
        let edges = nodes
            .iter()
            .filter_map(|&(i, _)| self.node_parent[i].map(|p| (p, i)))
            .collect();
        Embedding {
            nodes,
            edges,
            certificate: None,
        }
    }

    /// Graphviz rendering of `B`: tree arcs solid, reserved arcs dashed,
    /// critical vertices filled.
    pub fn to_dot(&self) -> String {
        let mut touched = BTreeSet::new();
        for (u, v) in self.bway.arcs() {
            touched.insert(u);
            touched.insert(v);
        }
        for v in self.node_vertex.iter().flatten() {
            touched.insert(*v);
        }
        let mut s = String::from("digraph B {\n  node [shape=circle];\n");
        for &v in &touched {
            let mut attrs = Vec::new();
            if let Some(id) = self.node_of(v) {
                attrs.push(format!("label=\"{v}\\nt{id}\""));
                attrs.push("penwidth=2".to_string());
            }
            if self.crit.contains(v) {
                attrs.push("style=filled".into());
                attrs.push("fillcolor=\"#f4a582\"".into());
            }
            if v == self.root {
                attrs.push("shape=doublecircle".into());
            }
            s.push_str(&format!("  {v} [{}];\n", attrs.join(",")));
        }
        for (u, v) in self.bway.arcs() {
            let tree = self
                .node_of(v)
                .and_then(|c| self.node_parent[c])
                .is_some_and(|p| self.node_vertex[p] == Some(u));
            let style = if tree { "style=bold" } else { "style=dashed,color=gray50" };
            s.push_str(&format!("  {u} -> {v} [{style}];\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn mix(seed: u64, step: u64) -> u64 {
    let mut z = seed ^ step.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// What went wrong in a pair check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Two nodes share a vertex.
    NotInjective,
    /// A tree edge maps to a non-edge of `j`.
    MissingEdge,
    /// A non-adjacent pair maps to an edge of `g`.
    Chord,
    /// A node maps outside the host.
    OutOfRange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub a: NodeId,
    pub b: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub nodes: usize,
    pub edges_checked: usize,
    pub pairs_checked: usize,
    pub violation: Option<Violation>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// A tree (nodes with ids, `(parent, child)` edges) mapped into a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub nodes: Vec<(NodeId, Vertex)>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub certificate: Option<Certificate>,
}

impl Embedding {
    pub fn certified_induced(&self) -> bool {
        self.certificate.as_ref().is_some_and(Certificate::passed)
    }

    pub fn vertex_of(&self, node: NodeId) -> Option<Vertex> {
        self.nodes.iter().find(|p| p.0 == node).map(|p| p.1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Compacted tree shape with nodes renumbered `0..len` in id order.
    pub fn shape(&self) -> crate::tree::Tree {
        let index = |id: NodeId| self.nodes.iter().position(|p| p.0 == id).expect("edge endpoint is a node");
        let edges: Vec<_> = self.edges.iter().map(|&(a, b)| (index(a), index(b))).collect();
        crate::tree::Tree::new(self.nodes.len(), &edges).expect("embedding edges form a tree")
    }
}

/// Checks injectivity, tree edges against `j` and non-edges against `g`.
pub fn verify_induced(g: &Graph, j: &Graph, e: &Embedding) -> Certificate {
    let n = g.vertex_count();
    let mut cert = Certificate {
        nodes: e.nodes.len(),
        edges_checked: 0,
        pairs_checked: 0,
        violation: None,
    };
    let fail = |cert: &mut Certificate, kind, a, b| {
        cert.violation = Some(Violation { kind, a, b });
    };
    if let Some(&(a, _)) = e.nodes.iter().find(|p| p.1 >= n) {
        fail(&mut cert, ViolationKind::OutOfRange, a, a);
        return cert;
    }
    let tree_edges: BTreeSet<(NodeId, NodeId)> = e
        .edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect();
    for (i, &(a, va)) in e.nodes.iter().enumerate() {
        for &(b, vb) in &e.nodes[i + 1..] {
            cert.pairs_checked += 1;
            if va == vb {
                fail(&mut cert, ViolationKind::NotInjective, a, b);
                return cert;
            }
            if tree_edges.contains(&(a.min(b), a.max(b))) {
                cert.edges_checked += 1;
                if !j.has_edge(va, vb) {
                    fail(&mut cert, ViolationKind::MissingEdge, a, b);
                    return cert;
                }
            } else if g.has_edge(va, vb) {
                fail(&mut cert, ViolationKind::Chord, a, b);
                return cert;
            }
        }
    }
    if cert.edges_checked != tree_edges.len() {
        let &(a, b) = tree_edges
            .iter()
            .find(|(a, b)| e.vertex_of(*a).is_none() || e.vertex_of(*b).is_none())
            .unwrap_or(&(0, 0));
        fail(&mut cert, ViolationKind::MissingEdge, a, b);
    }
    cert
}

/// A failed game: the error, when it happened and the log up to that point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureReport {
    pub step: usize,
    pub nodes: usize,
    pub error: String,
    pub kind: FailureKind,
    pub log: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    HypothesisRefused(Vec<Hypothesis>),
    InvalidRequest,
    CascadeTooLarge,
    ReservationFailed,
    NotInduced,
    Other,
}

impl FailureReport {
    fn new(state: Option<&EmbedState>, err: EmbedError) -> Self {
        let kind = match &err {
            EmbedError::HypothesisRefused(h) => FailureKind::HypothesisRefused(h.clone()),
            EmbedError::UnknownNode(_)
            | EmbedError::NodeSaturated { .. }
            | EmbedError::RootDeletion
            | EmbedError::NotClosed(_) => FailureKind::InvalidRequest,
            EmbedError::CascadeTooLarge { .. } => FailureKind::CascadeTooLarge,
            EmbedError::ReservationFailed { .. } => FailureKind::ReservationFailed,
            _ => FailureKind::Other,
        };
        FailureReport {
            step: state.map_or(0, |s| s.step),
            nodes: state.map_or(0, |s| s.live),
            error: err.to_string(),
            kind,
            log: state.map_or_else(Vec::new, |s| s.log.iter().map(|e| e.to_string()).collect()),
        }
    }

    pub fn is_hypothesis_refusal(&self) -> bool {
        matches!(self.kind, FailureKind::HypothesisRefused(_))
    }
}

/// Plays until the tree has `target_n` nodes or the adversary stops, then
/// certifies the result against the original host.
pub fn run_game(
    state: &mut EmbedState,
    adversary: &mut dyn Adversary,
    target_n: usize,
) -> Result<Embedding, FailureReport> {
    while state.node_count() < target_n {
        let Some(req) = adversary.next_request(state) else {
            break;
        };
        match req {
            Request::Extend(x) => {
                let child = state.extend(x).map_err(|e| FailureReport::new(Some(state), e))?;
                adversary.on_extended(x, child);
            }
            Request::Rollback(nodes) => {
                let before: BTreeSet<NodeId> = state.nodes().into_iter().collect();
                state
                    .rollback(&nodes)
                    .map_err(|e| FailureReport::new(Some(state), e))?;
                let after: BTreeSet<NodeId> = state.nodes().into_iter().collect();
                let gone: Vec<NodeId> = before.difference(&after).copied().collect();
                adversary.on_rollback(&gone);
            }
        }
    }
    let mut e = state.embedding();
    let cert = verify_induced(&state.host, &state.j, &e);
    let ok = cert.passed();
    e.certificate = Some(cert);
    if !ok {
        let mut report = FailureReport::new(
            Some(state),
            EmbedError::InvariantBreach("final tree is not induced".into()),
        );
        report.kind = FailureKind::NotInduced;
        return Err(report);
    }
    Ok(e)
}

/// A finished game.
#[derive(Clone, Debug)]
pub struct GameResult {
    pub outcome: Result<Embedding, FailureReport>,
    pub stats: GameStats,
    pub state: Option<EmbedState>,
}

/// Initializes a state and runs the game in one call.
pub fn play(
    g: &Graph,
    j: &Graph,
    cfg: EmbedConfig,
    adversary: &mut dyn Adversary,
    target_n: usize,
) -> GameResult {
    match EmbedState::init(g, j, cfg) {
        Err(e) => GameResult {
            outcome: Err(FailureReport::new(None, e)),
            stats: GameStats::default(),
            state: None,
        },
        Ok(mut s) => {
            let outcome = run_game(&mut s, adversary, target_n);
            GameResult {
                outcome,
                stats: s.stats.clone(),
                state: Some(s),
            }
        }
    }
}

#[cfg(test)]
mod tests;
