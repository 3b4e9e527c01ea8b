//! Request policies for the embedding game.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{EmbedState, NodeId};
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", content = "nodes", rename_all = "kebab-case")]
pub enum Request {
    Extend(NodeId),
    Rollback(Vec<NodeId>),
}

/// An opponent choosing which node to extend next. Returning `None` ends
/// the game.
pub trait Adversary {
    fn next_request(&mut self, state: &EmbedState) -> Option<Request>;

    /// `child` was attached below `parent`.
    fn on_extended(&mut self, _parent: NodeId, _child: NodeId) {}

    /// `removed` left the tree.
    fn on_rollback(&mut self, _removed: &[NodeId]) {}
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeOrder {
    Dfs,
    Bfs,
    Random(u64),
    /// Extends the embedded parent closest to becoming critical.
    Hostile,
}

impl TreeOrder {
    pub fn name(&self) -> &'static str {
        match self {
            TreeOrder::Dfs => "dfs",
            TreeOrder::Bfs => "bfs",
            TreeOrder::Random(_) => "random",
            TreeOrder::Hostile => "hostile",
        }
    }
}

/// Grows a fixed target tree, rooted at its node 0, in a chosen order.
#[derive(Clone, Debug)]
pub struct TreeAdversary {
    edges: Vec<(usize, usize)>,
    order: TreeOrder,
    rng: ChaCha8Rng,
    /// Target node -> engine node.
    placed: Vec<Option<NodeId>>,
    /// Engine node -> target node.
    origin: Vec<Option<usize>>,
    /// Edge index of the outstanding request.
    pending: Option<usize>,
}

impl TreeAdversary {
    pub fn new(tree: &Tree, order: TreeOrder) -> Self {
        let edges = match order {
            TreeOrder::Bfs => tree.bfs_edges(),
            _ => tree.dfs_edges(),
        };
        let seed = match order {
            TreeOrder::Random(s) => s,
            _ => 0,
        };
        let mut placed = vec![None; tree.node_count()];
        placed[0] = Some(0);
        TreeAdversary {
            edges,
            order,
            rng: ChaCha8Rng::seed_from_u64(seed),
            placed,
            origin: vec![Some(0)],
            pending: None,
        }
    }

    /// Target edges whose parent is embedded and child is not.
    fn ready(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| {
                let (p, c) = self.edges[i];
                self.placed[p].is_some() && self.placed[c].is_none()
            })
            .collect()
    }
}

impl Adversary for TreeAdversary {
    fn next_request(&mut self, state: &EmbedState) -> Option<Request> {
        let ready = self.ready();
        let pick = match self.order {
            TreeOrder::Dfs | TreeOrder::Bfs => ready.first().copied(),
            TreeOrder::Random(_) => ready.choose(&mut self.rng).copied(),
            TreeOrder::Hostile => ready
                .iter()
                .copied()
                .map(|i| {
                    let node = self.placed[self.edges[i].0].expect("ready parent is placed");
                    let v = state.vertex_of(node).expect("placed node is live");
                    let critical = state.critical().contains(v);
                    // non-critical parents first, then by score
                    ((!critical, state.criticality_score(node)), std::cmp::Reverse(i))
                })
                .max()
                .map(|(_, std::cmp::Reverse(i))| i),
        }?;
        self.pending = Some(pick);
        Some(Request::Extend(self.placed[self.edges[pick].0].expect("placed")))
    }

    fn on_extended(&mut self, _parent: NodeId, child: NodeId) {
        let i = self.pending.take().expect("extension answers a request");
        let c = self.edges[i].1;
        self.placed[c] = Some(child);
        if self.origin.len() <= child {
            self.origin.resize(child + 1, None);
        }
        self.origin[child] = Some(c);
    }

    fn on_rollback(&mut self, removed: &[NodeId]) {
        for &x in removed {
            if let Some(Some(t)) = self.origin.get(x).copied() {
                self.placed[t] = None;
                self.origin[x] = None;
            }
        }
    }
}

/// Extends a uniformly random open node; with probability
/// `rollback_prob` instead deletes a random non-root node's subtree.
#[derive(Clone, Debug)]
pub struct FreeRandom {
    rng: ChaCha8Rng,
    pub rollback_prob: f64,
}

impl FreeRandom {
    pub fn new(seed: u64, rollback_prob: f64) -> Self {
        FreeRandom {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rollback_prob,
        }
    }
}

/// `node` and all its descendants.
pub fn subtree(state: &EmbedState, node: NodeId) -> Vec<NodeId> {
    let mut out = vec![node];
    let mut i = 0;
    while i < out.len() {
        out.extend_from_slice(state.children_of(out[i]));
        i += 1;
    }
    out.sort_unstable();
    out
}

impl Adversary for FreeRandom {
    fn next_request(&mut self, state: &EmbedState) -> Option<Request> {
        let nodes = state.nodes();
        if nodes.len() > 1 && self.rng.random_bool(self.rollback_prob.clamp(0.0, 1.0)) {
            let &x = nodes[1..].choose(&mut self.rng)?;
            return Some(Request::Rollback(subtree(state, x)));
        }
        let open = state.open_nodes();
        open.choose(&mut self.rng).map(|&x| Request::Extend(x))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("script line {line}: {msg}")]
pub struct ScriptError {
    pub line: usize,
    pub msg: String,
}

/// Parses `extend <id>` / `rollback <id>[,<id>...]` lines; blank lines and
/// `#` comments are skipped.
pub fn parse_script(text: &str) -> Result<Vec<Request>, ScriptError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| ScriptError {
            line: i + 1,
            msg: msg.to_string(),
        };
        let (op, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let ids: Vec<NodeId> = rest
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| err("bad node id")))
            .collect::<Result<_, _>>()?;
        match op {
            "extend" if ids.len() == 1 => out.push(Request::Extend(ids[0])),
            "extend" => return Err(err("extend takes exactly one node id")),
            "rollback" => out.push(Request::Rollback(ids)),
            _ => return Err(err("expected `extend` or `rollback`")),
        }
    }
    Ok(out)
}

/// Replays a fixed request list.
#[derive(Clone, Debug)]
pub struct Scripted {
    requests: Vec<Request>,
    pos: usize,
}

impl Scripted {
    pub fn new(requests: Vec<Request>) -> Self {
        Scripted { requests, pos: 0 }
    }

    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        parse_script(text).map(Scripted::new)
    }
}

impl Adversary for Scripted {
    fn next_request(&mut self, _state: &EmbedState) -> Option<Request> {
        let r = self.requests.get(self.pos).cloned();
        self.pos += 1;
        r
    }
}
