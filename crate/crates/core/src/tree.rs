//! Target trees and the standard families used by the experiments.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("a tree needs at least one node")]
    Empty,
    #[error("{edges} edges on {nodes} nodes cannot form a tree")]
    WrongEdgeCount { nodes: usize, edges: usize },
    #[error("edge list is not connected")]
    Disconnected,
    #[error("maximum degree {0} is too small for more than two nodes")]
    DeltaTooSmall(usize),
    #[error("invalid edge list: {0}")]
    Graph(#[from] crate::graph::GraphError),
}

/// A finite tree on nodes `0..n`, rooted at node 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct Tree {
    graph: Graph,
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<TreeRepr> for Tree {
    type Error = TreeError;
    fn try_from(r: TreeRepr) -> Result<Self, TreeError> {
        Tree::new(r.nodes, &r.edges)
    }
}

impl From<Tree> for TreeRepr {
    fn from(t: Tree) -> Self {
        TreeRepr {
            nodes: t.node_count(),
            edges: t.edges(),
        }
    }
}

impl Tree {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Tree, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if edges.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount {
                nodes: n,
                edges: edges.len(),
            });
        }
        let graph = Graph::new(n, edges)?;
        if !graph.is_connected() {
            return Err(TreeError::Disconnected);
        }
        Ok(Tree { graph })
    }

    pub fn single() -> Tree {
        Tree {
            graph: Graph::empty(1),
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges().collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    pub fn as_graph(&self) -> &Graph {
        &self.graph
    }

    /// Parent of every node when rooted at 0.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.node_count()];
        for &(p, c) in &self.bfs_edges() {
            parent[c] = Some(p);
        }
        parent
    }

    /// `(parent, child)` pairs in breadth-first order from node 0.
    pub fn bfs_edges(&self) -> Vec<(usize, usize)> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0]);
        let mut out = Vec::with_capacity(n - 1);
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    out.push((u, v));
                    queue.push_back(v);
                }
            }
        }
        out
    }

    /// `(parent, child)` pairs in depth-first preorder from node 0.
    pub fn dfs_edges(&self) -> Vec<(usize, usize)> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![(0usize, 0usize)];
        let mut out = Vec::with_capacity(n - 1);
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if let Some(&v) = self.neighbors(u).get(*i) {
                *i += 1;
                if !seen[v] {
                    seen[v] = true;
                    out.push((u, v));
                    stack.push((v, 0));
                }
            } else {
                stack.pop();
            }
        }
        out
    }

    /// Edge list text: first line `n m`, then `u v` per edge.
    pub fn to_edge_list(&self) -> String {
        self.graph.to_edge_list()
    }

    pub fn from_edge_list(text: &str) -> Result<Tree, TreeError> {
        let g = Graph::from_edge_list(text)?;
        let edges: Vec<_> = g.edges().collect();
        Tree::new(g.vertex_count(), &edges)
    }
}

/// Standard tree families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum TreeFamily {
    Path { nodes: usize },
    Star { nodes: usize },
    /// Breadth-first filled tree: the root has `delta` children, every other
    /// node `delta - 1`, truncated at `nodes`.
    CompleteAry { delta: usize, nodes: usize },
    /// Uniform attachment among nodes of degree below `delta`.
    Random { delta: usize, nodes: usize, seed: u64 },
}

impl TreeFamily {
    pub fn build(&self) -> Result<Tree, TreeError> {
        match *self {
            TreeFamily::Path { nodes } => path(nodes),
            TreeFamily::Star { nodes } => star(nodes),
            TreeFamily::CompleteAry { delta, nodes } => complete_ary(delta, nodes),
            TreeFamily::Random { delta, nodes, seed } => random_bounded(delta, nodes, seed),
        }
    }
}

pub fn path(n: usize) -> Result<Tree, TreeError> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Tree::new(n, &edges)
}

pub fn star(n: usize) -> Result<Tree, TreeError> {
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    Tree::new(n, &edges)
}

pub fn complete_ary(delta: usize, n: usize) -> Result<Tree, TreeError> {
    if n > 2 && delta < 2 {
        return Err(TreeError::DeltaTooSmall(delta));
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut parent = 0;
    let mut used = 0;
    for c in 1..n {
        let cap = if parent == 0 { delta } else { delta - 1 };
        if used == cap {
            parent += 1;
            used = 0;
        }
        edges.push((parent, c));
        used += 1;
    }
    Tree::new(n, &edges)
}

pub fn random_bounded(delta: usize, n: usize, seed: u64) -> Result<Tree, TreeError> {
    if n > 2 && delta < 2 {
        return Err(TreeError::DeltaTooSmall(delta));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut open: Vec<usize> = if n > 0 { vec![0] } else { Vec::new() };
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for c in 1..n {
        let &p = open.choose(&mut rng).expect("an open node always exists");
        edges.push((p, c));
        deg[p] += 1;
        deg[c] = 1;
        if deg[p] == delta {
            open.retain(|&x| x != p);
        }
        if delta > 1 {
            open.push(c);
        }
    }
    Tree::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_respect_degree() {
        for n in [1, 2, 7, 50] {
            assert_eq!(path(n).unwrap().node_count(), n);
            assert!(complete_ary(3, n).unwrap().max_degree() <= 3);
            assert!(random_bounded(3, n, 9).unwrap().max_degree() <= 3);
        }
        assert_eq!(star(6).unwrap().max_degree(), 5);
        assert_eq!(complete_ary(2, 15).unwrap().max_degree(), 2);
    }

    #[test]
    fn rejects_non_trees() {
        assert_eq!(Tree::new(0, &[]), Err(TreeError::Empty));
        assert!(matches!(
            Tree::new(3, &[(0, 1)]),
            Err(TreeError::WrongEdgeCount { .. })
        ));
        assert_eq!(
            Tree::new(4, &[(0, 1), (1, 2), (2, 0)]).unwrap_err(),
            TreeError::Disconnected
        );
    }

    #[test]
    fn traversal_orders() {
        let t = Tree::new(5, &[(0, 1), (0, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(t.bfs_edges(), vec![(0, 1), (0, 2), (1, 3), (1, 4)]);
        assert_eq!(t.dfs_edges(), vec![(0, 1), (1, 3), (1, 4), (0, 2)]);
        assert_eq!(t.parents()[4], Some(1));
    }

    #[test]
    fn serde_round_trip() {
        let t = random_bounded(3, 12, 4).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<Tree>(&s).unwrap(), t);
        assert_eq!(Tree::from_edge_list(&t.to_edge_list()).unwrap(), t);
    }
}
