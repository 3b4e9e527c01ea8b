//! Randomized reservation of out-neighborhoods.
//!
//! Given an ambient graph `f`, a spanning subgraph `j` and an overlay `h`,
//! builds an escape-way in `f` that agrees with `h` and gives every vertex
//! many out-neighbors:
//!
//! 1. orient `f` forward along a degeneracy ordering, copying `h` where it
//!    orients an edge;
//! 2. keep only arcs `v -> u` with `u` an `h`-available `j`-neighbor of `v`;
//! 3. sample each remaining arc with probability `p = 1/C^2`;
//! 4. drop all in-arcs of any vertex with sampled in-degree at least two, or
//!    with sampled in-degree one while some unsampled in-neighbor (in the
//!    oriented graph of step 1) itself has a sampled in-arc.
//!
//! Step 4 always yields an escape-way. Steps 3-4 are repeated with fresh
//! streams until every vertex meets its target.
//!
//! `h` may live on a supergraph of `f` sharing its vertex indices;
//! availability is always judged against all of `h`.

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::escape::{check_escape_way, is_available, ArcSet, EscapeWay};
use crate::exec::{map_trials, stream_rng};
use crate::graph::{degeneracy_ordering, max_codegree, DegeneracyOrdering, Graph, Vertex};

/// Required out-degree as a function of the number of available neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TargetRule {
    /// `⌈|A|/10^7 - 5 ln Δ⌉`, with vertices whose concentration exponent is
    /// at most `5 ln Δ` exempt.
    Paper { max_degree: usize },
    /// `max(Δ, ⌈|A|/(2eC²)⌉)`; vertices with `|A| ≤ C` are exempt.
    Practical { delta: usize },
    Constant(usize),
}

impl TargetRule {
    pub fn required(&self, available: usize, c: usize) -> usize {
        let a = available as f64;
        let cf = c as f64;
        match *self {
            TargetRule::Paper { max_degree } => {
                let log_delta = (max_degree.max(1) as f64).ln();
                if concentration_exponent(available, c) <= 5.0 * log_delta {
                    return 0;
                }
                (a / 1e7 - 5.0 * log_delta).ceil().max(0.0) as usize
            }
            TargetRule::Practical { delta } => {
                if available <= c {
                    return 0;
                }
                let centre = (a / (2.0 * std::f64::consts::E * cf * cf)).ceil() as usize;
                delta.max(centre)
            }
            TargetRule::Constant(k) => k,
        }
    }
}

/// The exponent `q_v = (|A|-C)² / (|A| · 128 e² C⁶)` of the per-vertex
/// deviation bound.
pub fn concentration_exponent(available: usize, c: usize) -> f64 {
    if available <= c {
        return 0.0;
    }
    let a = available as f64;
    let cf = c as f64;
    let e2 = std::f64::consts::E.powi(2);
    (a - cf).powi(2) / (a * 128.0 * e2 * cf.powi(6))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReservationParams {
    /// `C`; measured from the degeneracy ordering when `None`.
    pub degeneracy_cap: Option<usize>,
    /// Lower bound applied to `C` after measuring or overriding it.
    #[serde(default = "one")]
    pub cap_floor: usize,
    /// `p`; `1/C²` when `None`.
    #[serde(default, with = "opt_ratio")]
    pub sample_prob: Option<Ratio<u64>>,
    pub target: TargetRule,
    pub max_retries: usize,
    pub rng_seed: u64,
}

fn one() -> usize {
    1
}

impl Default for ReservationParams {
    fn default() -> Self {
        Self {
            degeneracy_cap: None,
            cap_floor: 1,
            sample_prob: None,
            target: TargetRule::Constant(0),
            max_retries: 64,
            rng_seed: 0,
        }
    }
}

impl ReservationParams {
    fn resolve(&self, ord: &DegeneracyOrdering) -> (usize, Ratio<u64>) {
        let c = self
            .degeneracy_cap
            .unwrap_or(ord.degeneracy)
            .max(self.cap_floor)
            .max(1);
        let p = self
            .sample_prob
            .unwrap_or_else(|| Ratio::new(1, (c * c) as u64));
        assert!(
            *p.numer() > 0 && p <= Ratio::from_integer(1),
            "sample probability must lie in (0, 1]"
        );
        assert!(self.max_retries >= 1, "at least one attempt is required");
        (c, p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReservationOutcome {
    pub escape_way: EscapeWay,
    /// Out-degree of every vertex in `escape_way`.
    pub achieved: Vec<usize>,
    /// Required out-degree per vertex (zero for non-subjects).
    pub targets: Vec<usize>,
    /// Available-neighbor counts `|A_h^j(v)|`.
    pub available: Vec<usize>,
    pub deficits: Vec<Vertex>,
    /// Attempts made, including the returned one.
    pub retries_used: usize,
    pub degeneracy_cap: usize,
    pub sample_prob: Ratio<u64>,
}

impl ReservationOutcome {
    pub fn succeeded(&self) -> bool {
        self.deficits.is_empty()
    }

    /// Histogram of achieved out-degrees over vertices with positive target.
    pub fn histogram(&self) -> Vec<(usize, usize)> {
        let mut h = std::collections::BTreeMap::new();
        for (v, &t) in self.targets.iter().enumerate() {
            if t > 0 {
                *h.entry(self.achieved[v]).or_insert(0) += 1;
            }
        }
        h.into_iter().collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReservationError {
    #[error("targets unreachable after {attempts} attempts; {} vertices short", best.deficits.len())]
    TargetUnreachable {
        attempts: usize,
        best: Box<ReservationOutcome>,
    },
}

/// `G''`: edges oriented by `h` keep that orientation (both ways if `h`
/// has both); every other edge of `f` points forward in `ord`.
pub fn orient_forward(f: &Graph, h: &ArcSet, ord: &DegeneracyOrdering) -> ArcSet {
    let pos = ord.positions();
    let mut out = ArcSet::new(f.vertex_count());
    for (u, v) in f.edges() {
        let uv = h.contains(u, v);
        let vu = h.contains(v, u);
        if uv || vu {
            if uv {
                out.insert_unchecked(u, v);
            }
            if vu {
                out.insert_unchecked(v, u);
            }
        } else if pos[u] < pos[v] {
            out.insert_unchecked(u, v);
        } else {
            out.insert_unchecked(v, u);
        }
    }
    out
}

/// `G'`: arcs `v -> u` of `g2` with `u ∈ A_h(v) ∩ N_j(v)`.
pub fn restrict_available(j: &Graph, g2: &ArcSet, h: &ArcSet) -> ArcSet {
    g2.filtered(|v, u| j.has_edge(v, u) && is_available(h, v, u))
}

/// Deterministic clash resolution of a sample of `G'` into an escape-way
/// of `f`. In-degrees are those of the sample; `g2` supplies the
/// competing in-neighbors for the second rule.
pub fn clash_resolve(f: &Graph, g2: &ArcSet, sample: &ArcSet, ord: &DegeneracyOrdering) -> EscapeWay {
    let mut out = sample.clone();
    for &v in &ord.order {
        let indeg = sample.in_degree(v);
        let clash = indeg >= 2
            || (indeg == 1
                && g2
                    .in_neighbors(v)
                    .iter()
                    .any(|&u| !sample.contains(u, v) && sample.in_degree(u) >= 1));
        if clash {
            out.clear_in_arcs(v);
        }
    }
    if let Err(e) = check_escape_way(f, &out) {
        panic!("clash resolution produced an invalid escape-way: {e}");
    }
    EscapeWay::trusted(out)
}

/// Everything that does not depend on the random sample.
struct Prepared {
    ord: DegeneracyOrdering,
    g2: ArcSet,
    g1: ArcSet,
    g1_arcs: Vec<(Vertex, Vertex)>,
    available: Vec<usize>,
    c: usize,
    p: Ratio<u64>,
}

fn prepare(f: &Graph, j: &Graph, h: &ArcSet, params: &ReservationParams) -> Prepared {
    let ord = degeneracy_ordering(f);
    let (c, p) = params.resolve(&ord);
    let g2 = orient_forward(f, h, &ord);
    let g1 = restrict_available(j, &g2, h);
    let available: Vec<usize> = f
        .vertices()
        .map(|v| {
            j.neighbors(v)
                .iter()
                .filter(|&&u| f.has_edge(v, u) && is_available(h, v, u))
                .count()
        })
        .collect();
    for v in f.vertices() {
        assert!(
            g1.out_degree(v) + ord.degeneracy >= available[v],
            "forward orientation lost more than the degeneracy at vertex {v}"
        );
    }
    let g1_arcs = g1.arcs().collect();
    Prepared {
        ord,
        g2,
        g1,
        g1_arcs,
        available,
        c,
        p,
    }
}

fn sample_arcs(prep: &Prepared, rng: &mut impl Rng) -> ArcSet {
    let num = *prep.p.numer();
    let den = *prep.p.denom();
    let mut s = ArcSet::new(prep.g1.vertex_count());
    for &(u, v) in &prep.g1_arcs {
        if rng.random_range(0..den) < num {
            s.insert_unchecked(u, v);
        }
    }
    s
}

/// Reservation with targets applied to every vertex.
pub fn reserve(
    f: &Graph,
    j: &Graph,
    h: &ArcSet,
    params: &ReservationParams,
) -> Result<ReservationOutcome, ReservationError> {
    let all: Vec<Vertex> = f.vertices().collect();
    reserve_for(f, j, h, params, &all)
}

/// Reservation with targets applied only to `subjects`; other vertices
/// still take part in sampling and clash resolution.
pub fn reserve_for(
    f: &Graph,
    j: &Graph,
    h: &ArcSet,
    params: &ReservationParams,
    subjects: &[Vertex],
) -> Result<ReservationOutcome, ReservationError> {
    let prep = prepare(f, j, h, params);
    let mut targets = vec![0; f.vertex_count()];
    for &v in subjects {
        targets[v] = params.target.required(prep.available[v], prep.c);
    }
    let mut best: Option<(usize, ReservationOutcome)> = None;
    for attempt in 0..params.max_retries {
        let mut rng = stream_rng(params.rng_seed, attempt as u64);
        let sample = sample_arcs(&prep, &mut rng);
        let d = clash_resolve(f, &prep.g2, &sample, &prep.ord);
        let achieved: Vec<usize> = f.vertices().map(|v| d.out_degree(v)).collect();
        let deficits: Vec<Vertex> = subjects
            .iter()
            .copied()
            .filter(|&v| achieved[v] < targets[v])
            .collect();
        let score: usize = subjects.iter().map(|&v| achieved[v].min(targets[v])).sum();
        let outcome = ReservationOutcome {
            escape_way: d,
            achieved,
            targets: targets.clone(),
            available: prep.available.clone(),
            deficits,
            retries_used: attempt + 1,
            degeneracy_cap: prep.c,
            sample_prob: prep.p,
        };
        if outcome.succeeded() {
            return Ok(outcome);
        }
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            best = Some((score, outcome));
        }
    }
    Err(ReservationError::TargetUnreachable {
        attempts: params.max_retries,
        best: Box::new(best.expect("at least one attempt").1),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurvivalReport {
    pub trials: usize,
    pub degeneracy_cap: usize,
    pub sample_prob: f64,
    /// `1/(eC²)`.
    pub bound: f64,
    pub slack: f64,
    /// Per arc of `G'`: `(tail, head, empirical survival frequency)`.
    pub arcs: Vec<(Vertex, Vertex, f64)>,
}

impl SurvivalReport {
    pub fn threshold(&self) -> f64 {
        (1.0 - self.slack) * self.bound
    }

    pub fn min_frequency(&self) -> f64 {
        self.arcs.iter().map(|a| a.2).fold(f64::INFINITY, f64::min)
    }

    pub fn all_pass(&self) -> bool {
        self.arcs.iter().all(|a| a.2 >= self.threshold())
    }
}

/// Monte-Carlo survival frequency of each arc of `G'` through sampling and
/// clash resolution (`j = f`). Trial `t` uses stream `t` of the seed.
pub fn survival_probability_probe(
    f: &Graph,
    h: &ArcSet,
    params: &ReservationParams,
    trials: usize,
) -> SurvivalReport {
    let prep = prepare(f, f, h, params);
    let counts = map_trials(trials, |t| {
        let mut rng = stream_rng(params.rng_seed, t as u64);
        let sample = sample_arcs(&prep, &mut rng);
        let d = clash_resolve(f, &prep.g2, &sample, &prep.ord);
        prep.g1_arcs
            .iter()
            .map(|&(u, v)| d.contains(u, v))
            .collect::<Vec<bool>>()
    });
    let mut totals = vec![0usize; prep.g1_arcs.len()];
    for row in counts {
        for (i, hit) in row.into_iter().enumerate() {
            totals[i] += usize::from(hit);
        }
    }
    let c = prep.c as f64;
    SurvivalReport {
        trials,
        degeneracy_cap: prep.c,
        sample_prob: *prep.p.numer() as f64 / *prep.p.denom() as f64,
        bound: 1.0 / (std::f64::consts::E * c * c),
        slack: 0.15,
        arcs: prep
            .g1_arcs
            .iter()
            .zip(totals)
            .map(|(&(u, v), k)| (u, v, k as f64 / trials as f64))
            .collect(),
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LipschitzError {
    #[error("max codegree {0} exceeds 6: the ambient graph has a K(2,7), so a subgraph of average degree above 3")]
    DenseAmbient(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub flips: usize,
    /// Largest number of out-arc indicators of a single vertex changed by
    /// flipping one sampled arc.
    pub max_influence: usize,
}

/// Flips each arc of `G'` in `trials` random samples and records how many
/// out-arc survival indicators of one tail vertex change.
pub fn lipschitz_probe(
    f: &Graph,
    params: &ReservationParams,
    trials: usize,
) -> Result<LipschitzReport, LipschitzError> {
    let codeg = max_codegree(f);
    if codeg > 6 {
        return Err(LipschitzError::DenseAmbient(codeg));
    }
    let h = ArcSet::new(f.vertex_count());
    let prep = prepare(f, f, &h, params);
    let per_trial = map_trials(trials, |t| {
        let mut rng = stream_rng(params.rng_seed, t as u64);
        let sample = sample_arcs(&prep, &mut rng);
        let base = clash_resolve(f, &prep.g2, &sample, &prep.ord);
        let mut worst = 0;
        for &(a, b) in &prep.g1_arcs {
            let mut flipped = sample.clone();
            if !flipped.remove(a, b) {
                flipped.insert_unchecked(a, b);
            }
            let d = clash_resolve(f, &prep.g2, &flipped, &prep.ord);
            let mut changed = vec![0usize; f.vertex_count()];
            for &(v, u) in &prep.g1_arcs {
                if base.contains(v, u) != d.contains(v, u) {
                    changed[v] += 1;
                }
            }
            worst = worst.max(changed.into_iter().max().unwrap_or(0));
        }
        (prep.g1_arcs.len(), worst)
    });
    Ok(LipschitzReport {
        flips: per_trial.iter().map(|p| p.0).sum(),
        max_influence: per_trial.iter().map(|p| p.1).max().unwrap_or(0),
    })
}

mod opt_ratio {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Ratio<u64>>, s: S) -> Result<S::Ok, S::Error> {
        r.map(|r| format!("{}/{}", r.numer(), r.denom())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Ratio<u64>>, D::Error> {
        let s: Option<String> = Option::deserialize(d)?;
        s.map(|s| {
            let (a, b) = s
                .split_once('/')
                .ok_or_else(|| serde::de::Error::custom("expected a/b"))?;
            let a: u64 = a.trim().parse().map_err(serde::de::Error::custom)?;
            let b: u64 = b.trim().parse().map_err(serde::de::Error::custom)?;
            if b == 0 {
                return Err(serde::de::Error::custom("zero denominator"));
            }
            Ok(Ratio::new(a, b))
        })
        .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::escape::agrees;

    fn p3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn ord(order: &[usize], degeneracy: usize) -> DegeneracyOrdering {
        DegeneracyOrdering {
            order: order.to_vec(),
            degeneracy,
        }
    }

    #[test]
    fn forward_orientation_examples() {
        let g = p3();
        let o = ord(&[0, 1, 2], 1);
        let a = orient_forward(&g, &ArcSet::new(3), &o);
        assert_eq!(a.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let h = ArcSet::from_arcs(&g, &[(2, 1)]).unwrap();
        let a = orient_forward(&g, &h, &o);
        assert_eq!(a.arcs().collect::<Vec<_>>(), vec![(0, 1), (2, 1)]);
        let t = Graph::complete(3);
        let a = orient_forward(&t, &ArcSet::new(3), &o);
        assert_eq!(a.arcs().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        let deg = degeneracy_ordering(&t).degeneracy;
        assert!((0..3).all(|v| a.in_degree(v) <= deg));
    }

    #[test]
    fn restriction_examples() {
        let g = p3();
        let o = ord(&[0, 1, 2], 1);
        let g2 = orient_forward(&g, &ArcSet::new(3), &o);
        assert_eq!(restrict_available(&g, &g2, &ArcSet::new(3)), g2);
        // 1 has in-arc from 2 in h, so 0 -> 1 is not available
        let h = ArcSet::from_arcs(&g, &[(2, 1)]).unwrap();
        let g2 = orient_forward(&g, &h, &o);
        let g1 = restrict_available(&g, &g2, &h);
        assert!(!g1.contains(0, 1));
    }

    #[test]
    fn clash_examples() {
        let g = p3();
        let o = ord(&[0, 1, 2], 1);
        let g2 = orient_forward(&g, &ArcSet::new(3), &o);
        let sample = ArcSet::from_arcs(&g, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(clash_resolve(&g, &g2, &sample, &o).arcs(), &sample);
        let star = Graph::new(3, &[(0, 2), (1, 2)]).unwrap();
        let o = ord(&[0, 1, 2], 2);
        let g2 = orient_forward(&star, &ArcSet::new(3), &o);
        let sample = g2.clone();
        assert!(clash_resolve(&star, &g2, &sample, &o).is_empty());
    }

    #[test]
    fn rule_two_enforces_inducedness() {
        // triangle oriented 0->1, 0->2, 1->2; sample 0->1 only... and 0->2:
        // 2 has in-degree 1 from 0 but competitor 1 has an in-arc
        let t = Graph::complete(3);
        let o = ord(&[0, 1, 2], 2);
        let g2 = orient_forward(&t, &ArcSet::new(3), &o);
        let sample = ArcSet::from_arcs(&t, &[(0, 1), (0, 2)]).unwrap();
        let d = clash_resolve(&t, &g2, &sample, &o);
        assert_eq!(d.arcs().arcs().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn zero_target_succeeds_first_attempt() {
        let g = Graph::complete(5);
        let out = reserve(&g, &g, &ArcSet::new(5), &ReservationParams::default()).unwrap();
        assert_eq!(out.retries_used, 1);
    }

    #[test]
    fn single_edge_deterministic_sample() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let params = ReservationParams {
            sample_prob: Some(Ratio::from_integer(1)),
            ..Default::default()
        };
        let out = reserve(&g, &g, &ArcSet::new(2), &params).unwrap();
        assert_eq!(out.escape_way.len(), 1);
        let tail = usize::from(out.achieved[0] == 0);
        let first = degeneracy_ordering(&g).order[0];
        assert_eq!(tail, first);
        let params = ReservationParams {
            target: TargetRule::Constant(1),
            ..params
        };
        assert!(reserve_for(&g, &g, &ArcSet::new(2), &params, &[first]).is_ok());
    }

    #[test]
    fn default_probability_is_inverse_square() {
        // K4 has degeneracy 3
        let g = Graph::complete(4);
        let out = reserve(&g, &g, &ArcSet::new(4), &ReservationParams::default()).unwrap();
        assert_eq!(out.degeneracy_cap, 3);
        assert_eq!(out.sample_prob, Ratio::new(1, 9));
    }

    #[test]
    fn unreachable_target_reports_best() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let params = ReservationParams {
            target: TargetRule::Constant(2),
            max_retries: 3,
            ..Default::default()
        };
        match reserve(&g, &g, &ArcSet::new(2), &params) {
            Err(ReservationError::TargetUnreachable { attempts, best }) => {
                assert_eq!(attempts, 3);
                assert_eq!(best.deficits, vec![0, 1]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn outcome_agrees_with_overlay() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let h = ArcSet::from_arcs(&g, &[(3, 0)]).unwrap();
        let params = ReservationParams {
            sample_prob: Some(Ratio::from_integer(1)),
            ..Default::default()
        };
        let out = reserve(&g, &g, &h, &params).unwrap();
        assert!(agrees(out.escape_way.arcs(), &h));
    }

    #[test]
    fn matching_keeps_every_arc_at_full_probability() {
        let g = Graph::new(6, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        let params = ReservationParams {
            sample_prob: Some(Ratio::from_integer(1)),
            ..Default::default()
        };
        let out = reserve(&g, &g, &ArcSet::new(6), &params).unwrap();
        assert_eq!(out.escape_way.len(), 3);
    }

    #[test]
    fn target_rules() {
        assert_eq!(TargetRule::Constant(4).required(0, 3), 4);
        assert_eq!(TargetRule::Practical { delta: 3 }.required(2, 3), 0);
        assert_eq!(TargetRule::Practical { delta: 3 }.required(10, 1), 3);
        // ⌈200 / (2e)⌉ = 37
        assert_eq!(TargetRule::Practical { delta: 3 }.required(200, 1), 37);
        assert_eq!(TargetRule::Paper { max_degree: 50 }.required(1000, 3), 0);
    }

    #[test]
    fn lipschitz_single_edge_and_tree() {
        let params = ReservationParams {
            rng_seed: 3,
            ..Default::default()
        };
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(lipschitz_probe(&g, &params, 5).unwrap().max_influence, 1);
        let tree = Graph::new(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        assert!(lipschitz_probe(&tree, &params, 50).unwrap().max_influence <= 2);
        let k29 = {
            let mut e = Vec::new();
            for x in 2..9 {
                e.push((0, x));
                e.push((1, x));
            }
            Graph::new(9, &e).unwrap()
        };
        assert_eq!(lipschitz_probe(&k29, &params, 1), Err(LipschitzError::DenseAmbient(7)));
    }

    #[test]
    fn isolated_arc_survives_with_sampling_probability() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let params = ReservationParams {
            sample_prob: Some(Ratio::new(1, 4)),
            rng_seed: 11,
            ..Default::default()
        };
        let rep = survival_probability_probe(&g, &ArcSet::new(2), &params, 20_000);
        assert_eq!(rep.arcs.len(), 1);
        assert!((rep.arcs[0].2 - 0.25).abs() < 0.02);
    }
}
