//! Oriented overlays on a host graph and the escape-way calculus.
//!
//! An [`ArcSet`] is any (bi-)oriented subgraph of the host. An
//! [`EscapeWay`] is an arc set in which every vertex has in-degree at most
//! one, no pair is oriented both ways, and any two adjacent vertices that
//! both have an in-arc are joined by an arc. Reserving `u` for `v` is the
//! arc `v -> u`.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcError {
    #[error("arc {0} -> {1} is not an edge of the host graph")]
    NotAnEdge(Vertex, Vertex),
    #[error("arc-list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum EscapeWayError {
    #[error("vertex {0} has in-degree at least 2")]
    InDegreeViolation(Vertex),
    #[error("edge {0}-{1} is oriented both ways")]
    BiOrientedEdge(Vertex, Vertex),
    #[error("vertices {0} and {1} both have in-arcs and are adjacent, but the edge is not an arc")]
    InducednessViolation(Vertex, Vertex),
}

/// Set of ordered pairs over the vertex set of a host graph.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ArcSet {
    out: Vec<Vec<Vertex>>,
    inn: Vec<Vec<Vertex>>,
    len: usize,
}

impl ArcSet {
    pub fn new(n: usize) -> Self {
        Self {
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            len: 0,
        }
    }

    pub fn from_arcs(g: &Graph, arcs: &[(Vertex, Vertex)]) -> Result<Self, ArcError> {
        let mut a = Self::new(g.vertex_count());
        for &(u, v) in arcs {
            a.insert(g, u, v)?;
        }
        Ok(a)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts `u -> v` after checking it lies on an edge of `g`.
    pub fn insert(&mut self, g: &Graph, u: Vertex, v: Vertex) -> Result<bool, ArcError> {
        if !g.has_edge(u, v) {
            return Err(ArcError::NotAnEdge(u, v));
        }
        Ok(self.insert_unchecked(u, v))
    }

    pub(crate) fn insert_unchecked(&mut self, u: Vertex, v: Vertex) -> bool {
        match self.out[u].binary_search(&v) {
            Ok(_) => false,
            Err(i) => {
                self.out[u].insert(i, v);
                let j = self.inn[v].binary_search(&u).unwrap_err();
                self.inn[v].insert(j, u);
                self.len += 1;
                true
            }
        }
    }

    pub fn remove(&mut self, u: Vertex, v: Vertex) -> bool {
        match self.out[u].binary_search(&v) {
            Ok(i) => {
                self.out[u].remove(i);
                let j = self.inn[v].binary_search(&u).unwrap();
                self.inn[v].remove(j);
                self.len -= 1;
                true
            }
            Err(_) => false,
        }
    }

    /// Removes every arc entering `v`.
    pub fn clear_in_arcs(&mut self, v: Vertex) {
        for u in std::mem::take(&mut self.inn[v]) {
            let i = self.out[u].binary_search(&v).unwrap();
            self.out[u].remove(i);
            self.len -= 1;
        }
    }

    #[inline]
    pub fn contains(&self, u: Vertex, v: Vertex) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    #[inline]
    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    #[inline]
    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.inn[v]
    }

    #[inline]
    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    #[inline]
    pub fn in_degree(&self, v: Vertex) -> usize {
        self.inn[v].len()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// Vertices with at least one in-arc.
    pub fn v_in(&self) -> Vec<Vertex> {
        (0..self.vertex_count()).filter(|&v| !self.inn[v].is_empty()).collect()
    }

    /// Vertices with at least one out-arc.
    pub fn v_out(&self) -> Vec<Vertex> {
        (0..self.vertex_count()).filter(|&v| !self.out[v].is_empty()).collect()
    }

    pub fn is_subset_of(&self, other: &ArcSet) -> bool {
        self.arcs().all(|(u, v)| other.contains(u, v))
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut a = self.clone();
        for (u, v) in other.arcs() {
            a.insert_unchecked(u, v);
        }
        a
    }

    /// Keeps the arcs accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> ArcSet {
        let mut a = ArcSet::new(self.vertex_count());
        for (u, v) in self.arcs() {
            if keep(u, v) {
                a.insert_unchecked(u, v);
            }
        }
        a
    }

    /// Every arc lies on an edge of `g`.
    pub fn lives_on(&self, g: &Graph) -> bool {
        self.vertex_count() == g.vertex_count() && self.arcs().all(|(u, v)| g.has_edge(u, v))
    }

    /// Text form: one `u > v` line per arc.
    pub fn to_arc_list(&self) -> String {
        let mut s = String::new();
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "{u} > {v}");
        }
        s
    }

    pub fn from_arc_list(g: &Graph, text: &str) -> Result<ArcSet, ArcError> {
        let mut a = ArcSet::new(g.vertex_count());
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| ArcError::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            let (l, r) = line.split_once('>').ok_or_else(|| err("expected `u > v`"))?;
            let u: usize = l.trim().parse().map_err(|_| err("bad tail vertex"))?;
            let v: usize = r.trim().parse().map_err(|_| err("bad head vertex"))?;
            if u >= g.vertex_count() || v >= g.vertex_count() {
                return Err(err("vertex out of range"));
            }
            a.insert(g, u, v)?;
        }
        Ok(a)
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_arc_list())
    }
}

/// A validated escape-way. Construct through [`validate_escape_way`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeWay {
    arcs: ArcSet,
}

impl EscapeWay {
    pub fn empty(n: usize) -> Self {
        Self {
            arcs: ArcSet::new(n),
        }
    }

    pub fn arcs(&self) -> &ArcSet {
        &self.arcs
    }

    pub fn into_arcs(self) -> ArcSet {
        self.arcs
    }

    #[inline]
    pub fn in_neighbor(&self, v: Vertex) -> Option<Vertex> {
        self.arcs.in_neighbors(v).first().copied()
    }

    /// Restriction to a sub-collection of arcs; always an escape-way again.
    pub fn restrict(&self, keep: impl FnMut(Vertex, Vertex) -> bool) -> EscapeWay {
        EscapeWay {
            arcs: self.arcs.filtered(keep),
        }
    }

    /// Wraps arcs already known to satisfy the escape-way conditions.
    pub(crate) fn trusted(arcs: ArcSet) -> Self {
        Self { arcs }
    }
}

impl std::ops::Deref for EscapeWay {
    type Target = ArcSet;
    fn deref(&self) -> &ArcSet {
        &self.arcs
    }
}

/// Checks the three escape-way conditions, reporting the first violation:
/// in-degree, then bi-orientation, then inducedness on `V_in`.
pub fn validate_escape_way(g: &Graph, a: &ArcSet) -> Result<EscapeWay, EscapeWayError> {
    check_escape_way(g, a)?;
    Ok(EscapeWay { arcs: a.clone() })
}

pub fn check_escape_way(g: &Graph, a: &ArcSet) -> Result<(), EscapeWayError> {
    let n = a.vertex_count();
    for v in 0..n {
        if a.in_degree(v) > 1 {
            return Err(EscapeWayError::InDegreeViolation(v));
        }
    }
    for (u, v) in a.arcs() {
        if u < v && a.contains(v, u) {
            return Err(EscapeWayError::BiOrientedEdge(u, v));
        }
    }
    for x in 0..n {
        if a.in_degree(x) == 0 {
            continue;
        }
        for &y in g.neighbors(x) {
            if y > x && a.in_degree(y) > 0 && !a.contains(x, y) && !a.contains(y, x) {
                return Err(EscapeWayError::InducednessViolation(x, y));
            }
        }
    }
    Ok(())
}

/// Closure `K(D)`: `D` plus, for each arc `u -> v`, the arcs `v -> w` for
/// every other neighbor `w` of `v`.
pub fn closure_k(g: &Graph, d: &ArcSet) -> ArcSet {
    let mut k = d.clone();
    for (u, v) in d.arcs() {
        extend_closure_arc(g, &mut k, u, v);
    }
    k
}

/// Adds the closure contribution of the arc `u -> v` to `k` (including the
/// arc itself).
pub(crate) fn extend_closure_arc(g: &Graph, k: &mut ArcSet, u: Vertex, v: Vertex) {
    k.insert_unchecked(u, v);
    for &w in g.neighbors(v) {
        if w != u {
            k.insert_unchecked(v, w);
        }
    }
}

/// Whether neighbor `u` of `v` is available to `v` with respect to `d`.
#[inline]
pub fn is_available(d: &ArcSet, v: Vertex, u: Vertex) -> bool {
    d.in_neighbors(u).iter().all(|&w| w == v) && !d.contains(u, v)
}

/// `A_D(v)`: neighbors `u` of `v` with no in-arc from a vertex other than
/// `v`, and with `u -> v` not an arc.
pub fn available_neighbors(g: &Graph, d: &ArcSet, v: Vertex) -> Vec<Vertex> {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&u| is_available(d, v, u))
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("the restricting graph is not a spanning subgraph of the host")]
pub struct NotASubgraph;

/// `A_D(v)` restricted to neighbors of `v` in the spanning subgraph `j`.
pub fn available_neighbors_in(
    g: &Graph,
    j: &Graph,
    d: &ArcSet,
    v: Vertex,
) -> Result<Vec<Vertex>, NotASubgraph> {
    if !j.is_spanning_subgraph_of(g) {
        return Err(NotASubgraph);
    }
    Ok(j.neighbors(v)
        .iter()
        .copied()
        .filter(|&u| is_available(d, v, u))
        .collect())
}

/// Whether `d_new` agrees with the overlay `h`: shared in-vertices have the
/// same in-neighborhood, and no arc of `h` is reversed in `d_new`.
pub fn agrees(d_new: &ArcSet, h: &ArcSet) -> bool {
    let n = d_new.vertex_count();
    for x in 0..n {
        if d_new.in_degree(x) > 0 && h.in_degree(x) > 0 && d_new.in_neighbors(x) != h.in_neighbors(x) {
            return false;
        }
    }
    h.arcs().all(|(x, y)| !d_new.contains(y, x))
}

/// The three compatibility conditions for a pair of escape-ways.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Compatibility {
    /// `D ∪ D'` is an escape-way.
    UnionIsEscapeWay,
    /// `D'` agrees with `K(D)`.
    Agreement,
    /// `N⁺_{D'}(x) ⊆ A_{K(D)}(x)` for every `x`.
    ClosureContainment,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnionError {
    #[error("escape-ways are not compatible: {0:?} fails")]
    NotCompatible(Compatibility),
    #[error("compatibility conditions disagree ({0:?}); escape-way calculus is inconsistent")]
    EquivalenceBroken([bool; 3]),
}

/// Evaluates the three compatibility conditions for `(d, d2)` independently.
pub fn compatibility_conditions(g: &Graph, d: &ArcSet, d2: &ArcSet) -> [bool; 3] {
    let k = closure_k(g, d);
    compatibility_conditions_with_closure(g, d, &k, d2)
}

pub fn compatibility_conditions_with_closure(
    g: &Graph,
    d: &ArcSet,
    k_d: &ArcSet,
    d2: &ArcSet,
) -> [bool; 3] {
    let union_ok = check_escape_way(g, &d.union(d2)).is_ok();
    // Agreement with `d` itself is too weak: on a triangle, `1 -> 0` and
    // `1 -> 2` agree, yet their union leaves `02` unoriented.
    let agree = agrees(d2, k_d);
    let contain = d2.arcs().all(|(x, y)| is_available(k_d, x, y));
    [union_ok, agree, contain]
}

/// Union of two escape-ways, accepted only when all three compatibility
/// conditions hold; they are evaluated separately and must coincide.
pub fn union_escape_ways(g: &Graph, d: &EscapeWay, d2: &EscapeWay) -> Result<EscapeWay, UnionError> {
    let k = closure_k(g, d);
    union_escape_ways_with_closure(g, d, &k, d2)
}

/// As [`union_escape_ways`], reusing a precomputed `K(d)`.
pub fn union_escape_ways_with_closure(
    g: &Graph,
    d: &EscapeWay,
    k_d: &ArcSet,
    d2: &EscapeWay,
) -> Result<EscapeWay, UnionError> {
    let conds = compatibility_conditions_with_closure(g, d, k_d, d2);
    match conds {
        [true, true, true] => Ok(EscapeWay {
            arcs: d.arcs.union(&d2.arcs),
        }),
        [false, false, false] => Err(UnionError::NotCompatible(Compatibility::UnionIsEscapeWay)),
        other => Err(UnionError::EquivalenceBroken(other)),
    }
}

/// Shape of an orientation of a connected graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrientationClass {
    /// In-degrees at most one with some in-degree-zero vertex.
    RootedTree,
    /// Every in-degree exactly one.
    PseudoforestCyclic,
    Invalid,
}

/// Classifies an orientation `a` covering every edge of the connected graph
/// `component` by its in-degree profile alone.
pub fn classify_orientation(component: &Graph, a: &ArcSet) -> OrientationClass {
    let n = component.vertex_count();
    let mut zero = false;
    for v in 0..n {
        match a.in_degree(v) {
            0 => zero = true,
            1 => {}
            _ => return OrientationClass::Invalid,
        }
    }
    if zero {
        OrientationClass::RootedTree
    } else {
        OrientationClass::PseudoforestCyclic
    }
}
