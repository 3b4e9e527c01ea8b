//! Random hosts, the preprocessing pipeline, Ramsey hosts with colourings,
//! and the small counterexample families.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{density_audit, k_core, Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GnpParams {
    pub n: usize,
    #[serde(with = "crate::graph::ratio_serde")]
    pub edge_prob: Ratio<u64>,
    pub seed: u64,
}

impl GnpParams {
    /// `G(n, d/n)`.
    pub fn with_average_degree(n: usize, d: u64, seed: u64) -> Self {
        let p = if n == 0 {
            Ratio::from_integer(0)
        } else {
            Ratio::new(d.min(n as u64), n as u64)
        };
        GnpParams {
            n,
            edge_prob: p,
            seed,
        }
    }
}

/// Erdős–Rényi graph; pairs `u < v` in row order, skipping geometrically.
pub fn gnp(params: &GnpParams) -> Graph {
    let n = params.n;
    let p = *params.edge_prob.numer() as f64 / *params.edge_prob.denom() as f64;
    assert!((0.0..=1.0).contains(&p), "edge probability must lie in [0, 1]");
    if p == 0.0 || n < 2 {
        return Graph::empty(n);
    }
    if p >= 1.0 {
        return Graph::complete(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let geo = Geometric::new(p).expect("valid probability");
    let mut adj = vec![Vec::new(); n];
    let (mut u, mut v) = (0usize, 0usize);
    let mut skip = geo.sample(&mut rng);
    loop {
        // advance (u, v) by skip + 1 positions
        let mut k = skip + 1;
        loop {
            let room = (n - 1 - v) as u64;
            if k <= room {
                v += k as usize;
                break;
            }
            k -= room;
            u += 1;
            if u >= n - 1 {
                return Graph::from_adjacency(adj);
            }
            v = u;
        }
        adj[u].push(v);
        adj[v].push(u);
        skip = geo.sample(&mut rng);
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("n*k must be even and k < n (n={n}, k={k})")]
    InvalidRegular { n: usize, k: usize },
    #[error("no simple pairing found in {0} attempts")]
    PairingRejected(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Uniform `k`-regular graph via the pairing model, rejecting pairings with
/// loops or repeated edges.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if (n * k) % 2 == 1 || (k >= n && n > 0) {
        return Err(GeneratorError::InvalidRegular { n, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 10_000;
    let mut points: Vec<Vertex> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    'attempt: for _ in 0..ATTEMPTS {
        points.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(points.len() / 2);
        for pair in points.chunks(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Ok(Graph::new(n, &edges).expect("pairing edges are valid"));
    }
    Err(GeneratorError::PairingRejected(ATTEMPTS))
}

/// An induced subgraph, renumbered `0..len`, with the map back to the host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedView {
    pub graph: Graph,
    /// `original[i]` is the host vertex of local vertex `i`.
    pub original: Vec<Vertex>,
}

impl InducedView {
    pub fn new(host: &Graph, mut keep: Vec<Vertex>) -> Self {
        keep.sort_unstable();
        keep.dedup();
        InducedView {
            graph: host.induced(&keep),
            original: keep,
        }
    }

    pub fn to_host(&self, v: Vertex) -> Vertex {
        self.original[v]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    HighDegree,
    DenseSpot,
    LowDegreePeel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: Stage,
    pub removed: usize,
    pub remaining: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Largest dense spot searched for; `None` uses `n/(200 d ln d)`.
    pub dense_cap: Option<usize>,
    /// Rounds of the dense-spot finder before giving up.
    pub finder_rounds: usize,
    pub min_order: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            dense_cap: None,
            finder_rounds: 1_000,
            min_order: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub input_order: usize,
    pub d: u64,
    pub max_degree_bound: u64,
    pub min_degree_bound: u64,
    pub dense_cap: usize,
    pub stages: Vec<StageReport>,
    pub dense_spots: Vec<Vec<Vertex>>,
    /// True when the last dense-spot search was exhaustive, so "none found"
    /// means "none exists".
    pub dense_search_exhaustive: bool,
    /// Every deleted host vertex with the stage that removed it, in order.
    pub deletions: Vec<(Vertex, Stage)>,
    pub output_order: usize,
    pub output_min_degree: usize,
    pub output_max_degree: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("pipeline left {remaining} vertices, below the minimum {min_order}")]
    PipelineEmptied {
        remaining: usize,
        min_order: usize,
        report: Box<PipelineReport>,
    },
}

/// Default dense-spot cap `n/(200 d ln d)`; unbounded when `ln d ≤ 0`.
pub fn default_dense_cap(n: usize, d: u64) -> usize {
    let denom = 200.0 * d as f64 * (d as f64).ln();
    if denom <= 0.0 {
        n
    } else {
        (n as f64 / denom).floor() as usize
    }
}

/// Keeps an induced subgraph with maximum degree at most `20d`, no dense
/// spot found up to the cap, and minimum degree at least `d/16`.
pub fn preprocess_random(
    g: &Graph,
    d: u64,
    cfg: &PipelineConfig,
) -> Result<(InducedView, PipelineReport), PipelineError> {
    let n = g.vertex_count();
    let max_bound = 20 * d;
    let min_bound = d.div_ceil(16);
    let cap = cfg.dense_cap.unwrap_or_else(|| default_dense_cap(n, d));
    let mut alive = vec![true; n];
    let mut deletions = Vec::new();
    let mut stages = Vec::new();

    let mut removed = 0;
    for v in g.vertices() {
        if g.degree(v) as u64 > max_bound {
            alive[v] = false;
            deletions.push((v, Stage::HighDegree));
            removed += 1;
        }
    }
    let remaining = |alive: &[bool]| alive.iter().filter(|&&a| a).count();
    stages.push(StageReport {
        stage: Stage::HighDegree,
        removed,
        remaining: remaining(&alive),
    });

    let mut dense_spots = Vec::new();
    let mut exhaustive = true;
    let mut removed = 0;
    if cap > 0 {
        let threshold = Ratio::new(12u64, 5);
        for _ in 0..cfg.finder_rounds {
            let keep: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
            if keep.is_empty() {
                break;
            }
            let view = InducedView::new(g, keep);
            let audit = density_audit(&view.graph, cap, threshold);
            exhaustive = audit.exhaustive;
            let Some(w) = audit.witness else { break };
            let spot: Vec<Vertex> = w.vertices.iter().map(|&v| view.to_host(v)).collect();
            for &v in &spot {
                alive[v] = false;
                deletions.push((v, Stage::DenseSpot));
            }
            removed += spot.len();
            dense_spots.push(spot);
        }
    }
    stages.push(StageReport {
        stage: Stage::DenseSpot,
        removed,
        remaining: remaining(&alive),
    });

    let keep: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    let view = InducedView::new(g, keep);
    let core: Vec<Vertex> = k_core(&view.graph, min_bound as usize)
        .into_iter()
        .map(|v| view.to_host(v))
        .collect();
    let mut in_core = vec![false; n];
    for &v in &core {
        in_core[v] = true;
    }
    let mut removed = 0;
    for v in 0..n {
        if alive[v] && !in_core[v] {
            alive[v] = false;
            deletions.push((v, Stage::LowDegreePeel));
            removed += 1;
        }
    }
    stages.push(StageReport {
        stage: Stage::LowDegreePeel,
        removed,
        remaining: core.len(),
    });

    let out = InducedView::new(g, core);
    let report = PipelineReport {
        input_order: n,
        d,
        max_degree_bound: max_bound,
        min_degree_bound: min_bound,
        dense_cap: cap,
        stages,
        dense_spots,
        dense_search_exhaustive: exhaustive,
        deletions,
        output_order: out.graph.vertex_count(),
        output_min_degree: out.graph.min_degree(),
        output_max_degree: out.graph.max_degree(),
    };
    if out.graph.vertex_count() < cfg.min_order.max(1) {
        return Err(PipelineError::PipelineEmptied {
            remaining: out.graph.vertex_count(),
            min_order: cfg.min_order.max(1),
            report: Box::new(report),
        });
    }
    assert!(out.graph.max_degree() as u64 <= max_bound);
    assert!(out.graph.min_degree() as u64 >= min_bound);
    Ok((out, report))
}

/// Replays a deletion log against the host, returning the survivors.
pub fn replay_deletions(n: usize, deletions: &[(Vertex, Stage)]) -> Vec<Vertex> {
    let mut alive = vec![true; n];
    for &(v, _) in deletions {
        alive[v] = false;
    }
    (0..n).filter(|&v| alive[v]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyHostParams {
    pub delta: usize,
    #[serde(with = "crate::graph::ratio_serde")]
    pub epsilon: Ratio<u64>,
    /// Order of the target trees.
    pub n: usize,
    pub q: usize,
    pub seed: u64,
}

impl RamseyHostParams {
    /// `ε = 1/q`.
    pub fn for_colours(delta: usize, n: usize, q: usize, seed: u64) -> Self {
        RamseyHostParams {
            delta,
            epsilon: Ratio::new(1, q.max(1) as u64),
            n,
            q,
            seed,
        }
    }
}

/// How the astronomically large host is scaled to desk size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shrink", rename_all = "kebab-case")]
pub enum Shrink {
    /// Divide the exact order and degree by these factors.
    Factors { order: f64, degree: f64 },
    /// Use these values directly; the implied factors are recorded.
    Target { order: usize, degree: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HostReport {
    /// `10³⁰ n ln Δ Δ² (ln 1/ε)³ / ε`.
    pub exact_order: f64,
    /// `10¹² Δ ln(1/ε) / ε`.
    pub exact_degree: f64,
    pub order: usize,
    pub degree: u64,
    pub order_shrink: f64,
    pub degree_shrink: f64,
    pub epsilon: String,
    pub q: usize,
    pub pipeline: PipelineReport,
}

/// Exact host order and average degree for the given parameters.
pub fn exact_host_size(delta: usize, epsilon: Ratio<u64>, n: usize) -> (f64, f64) {
    let eps = *epsilon.numer() as f64 / *epsilon.denom() as f64;
    let l = (1.0 / eps).ln();
    let dl = delta as f64;
    let order = 1e30 * n as f64 * dl.ln() * dl * dl * l.powi(3) / eps;
    let degree = 1e12 * dl * l / eps;
    (order, degree)
}

/// Builds the shrunk `G(N, d/N)` host and preprocesses it.
pub fn ramsey_host(
    params: &RamseyHostParams,
    shrink: Shrink,
    cfg: &PipelineConfig,
) -> Result<(InducedView, HostReport), GeneratorError> {
    if params.delta == 0 || *params.epsilon.numer() == 0 || params.epsilon > Ratio::from_integer(1) {
        return Err(GeneratorError::InvalidParams("need Δ ≥ 1 and 0 < ε ≤ 1".into()));
    }
    let (exact_order, exact_degree) = exact_host_size(params.delta, params.epsilon, params.n);
    let (order, degree) = match shrink {
        Shrink::Factors { order, degree } => {
            if order < 1.0 || degree < 1.0 {
                return Err(GeneratorError::InvalidParams("shrink factors must be ≥ 1".into()));
            }
            ((exact_order / order).round() as usize, (exact_degree / degree).round() as u64)
        }
        Shrink::Target { order, degree } => (order, degree),
    };
    if order == 0 || order > 50_000_000 {
        return Err(GeneratorError::InvalidParams(format!(
            "shrunk order {order} is not buildable"
        )));
    }
    let g = gnp(&GnpParams::with_average_degree(order, degree, params.seed));
    let ratio = |exact: f64, used: f64| if used > 0.0 { exact / used } else { f64::INFINITY };
    let (view, pipeline) = match preprocess_random(&g, degree, cfg) {
        Ok(x) => x,
        Err(PipelineError::PipelineEmptied { report, .. }) => {
            return Err(GeneratorError::InvalidParams(format!(
                "preprocessing emptied the host ({} of {} left)",
                report.output_order, report.input_order
            )))
        }
    };
    let report = HostReport {
        exact_order,
        exact_degree,
        order,
        degree,
        order_shrink: ratio(exact_order, order as f64),
        degree_shrink: ratio(exact_degree, degree as f64),
        epsilon: format!("{}/{}", params.epsilon.numer(), params.epsilon.denom()),
        q: params.q,
        pipeline,
    };
    Ok((view, report))
}

/// Edge colouring policies, colours `0..q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum Coloring {
    Random { q: usize, seed: u64 },
    /// Colour 0 on every edge inside the top `n/q` vertices by degree, the
    /// rest spread over the other colours in edge order.
    DenseCore { q: usize },
    /// One colour per edge, in `Graph::edges` order.
    Scripted { colours: Vec<usize> },
}

impl Coloring {
    pub fn colours(&self) -> usize {
        match self {
            Coloring::Random { q, .. } | Coloring::DenseCore { q } => *q,
            Coloring::Scripted { colours } => colours.iter().max().map_or(1, |m| m + 1),
        }
    }

    pub fn apply(&self, g: &Graph) -> Result<Vec<usize>, ColorError> {
        let m = g.edge_count();
        match self {
            Coloring::Random { q, seed } => {
                if *q == 0 {
                    return Err(ColorError::NoColours);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..m).map(|_| rng.random_range(0..*q)).collect())
            }
            Coloring::DenseCore { q } => {
                if *q == 0 {
                    return Err(ColorError::NoColours);
                }
                let n = g.vertex_count();
                let mut by_deg: Vec<Vertex> = g.vertices().collect();
                by_deg.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
                let mut core = vec![false; n];
                for &v in by_deg.iter().take(n.div_ceil(*q)) {
                    core[v] = true;
                }
                let mut next = 0;
                Ok(g.edges()
                    .map(|(u, v)| {
                        if core[u] && core[v] || *q == 1 {
                            0
                        } else {
                            next += 1;
                            1 + (next - 1) % (q - 1)
                        }
                    })
                    .collect())
            }
            Coloring::Scripted { colours } => {
                if colours.len() != m {
                    return Err(ColorError::ScriptLength {
                        expected: m,
                        got: colours.len(),
                    });
                }
                Ok(colours.clone())
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColorError {
    #[error("a colouring needs at least one colour")]
    NoColours,
    #[error("scripted colouring has {got} colours for {expected} edges")]
    ScriptLength { expected: usize, got: usize },
    #[error("no colour class has {needed} of the {total} edges (largest: {largest})")]
    NoQualifyingClass {
        needed: usize,
        total: usize,
        largest: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub colour: usize,
    pub class_sizes: Vec<usize>,
    pub total_edges: usize,
    pub epsilon: String,
    pub min_degree_target: usize,
    /// `(vertex, colour degree at removal)` in peel order.
    pub peel_trace: Vec<(Vertex, usize)>,
    pub met_target: bool,
    /// The chosen class as a spanning subgraph of the host.
    #[serde(skip)]
    pub class: Option<Graph>,
    /// Host induced on the survivors, renumbered.
    #[serde(skip)]
    pub host_view: Option<InducedView>,
    /// The colour class on the survivors, same numbering as `host_view`.
    #[serde(skip)]
    pub class_view: Option<Graph>,
}

/// Picks the largest colour class (it must hold at least `ε e(g)` edges)
/// and peels it to minimum degree `⌈εd/20⌉`.
pub fn color_and_extract(
    g: &Graph,
    coloring: &Coloring,
    epsilon: Ratio<u64>,
    d: u64,
) -> Result<Extraction, ColorError> {
    let colours = coloring.apply(g)?;
    let q = colours.iter().max().map_or(1, |m| m + 1).max(coloring.colours());
    let mut sizes = vec![0usize; q];
    for &c in &colours {
        sizes[c] += 1;
    }
    let m = g.edge_count();
    let needed = (epsilon * Ratio::from_integer(m as u64)).ceil().to_integer() as usize;
    let (colour, &largest) = sizes
        .iter()
        .enumerate()
        .max_by_key(|&(c, s)| (*s, std::cmp::Reverse(c)))
        .expect("at least one colour");
    if largest < needed {
        return Err(ColorError::NoQualifyingClass {
            needed,
            total: m,
            largest,
        });
    }
    let edges: Vec<(Vertex, Vertex)> = g
        .edges()
        .zip(&colours)
        .filter(|(_, &c)| c == colour)
        .map(|(e, _)| e)
        .collect();
    let class = Graph::new(g.vertex_count(), &edges).expect("class edges are host edges");
    let target = (epsilon * Ratio::from_integer(d) / Ratio::from_integer(20))
        .ceil()
        .to_integer() as usize;

    // peel smallest index among vertices below target, one at a time
    let n = g.vertex_count();
    let mut deg = class.degrees();
    let mut alive = vec![true; n];
    let mut low: std::collections::BTreeSet<Vertex> = (0..n).filter(|&v| deg[v] < target).collect();
    let mut trace = Vec::new();
    while let Some(v) = low.pop_first() {
        alive[v] = false;
        trace.push((v, deg[v]));
        for &u in class.neighbors(v) {
            if alive[u] {
                deg[u] -= 1;
                if deg[u] < target {
                    low.insert(u);
                }
            }
        }
    }
    let keep: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    let host_view = InducedView::new(g, keep);
    let class_view = class.induced(&host_view.original);
    Ok(Extraction {
        colour,
        class_sizes: sizes,
        total_edges: m,
        epsilon: format!("{}/{}", epsilon.numer(), epsilon.denom()),
        min_degree_target: target,
        peel_trace: trace,
        met_target: !host_view.original.is_empty(),
        class: Some(class),
        host_view: Some(host_view),
        class_view: Some(class_view),
    })
}

/// Small constructions showing the escape-way definition is tight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Counterexample {
    /// Cycle of length `len` with chord `(0, len/2)` and `d` pendant edges
    /// at every cycle vertex.
    ChordCyclePendants { len: usize, d: usize },
    /// Complete `d`-ary tree of the given depth.
    DAryTree { d: usize, depth: usize },
    /// The `d/2`-regular tree truncated at `radius`, each vertex replaced by
    /// an independent pair and each edge by a `K_{2,2}`.
    K22Blowup { d: usize, radius: usize },
}

pub fn counterexample(kind: Counterexample) -> Result<Graph, GeneratorError> {
    match kind {
        Counterexample::ChordCyclePendants { len, d } => {
            if len < 4 {
                return Err(GeneratorError::InvalidParams("cycle length must be at least 4".into()));
            }
            let mut edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
            edges.push((0, len / 2));
            let mut next = len;
            for i in 0..len {
                for _ in 0..d {
                    edges.push((i, next));
                    next += 1;
                }
            }
            let g = Graph::new(next, &edges).expect("valid construction");
            assert_eq!(g.max_degree(), d + 3);
            Ok(g)
        }
        Counterexample::DAryTree { d, depth } => {
            if d == 0 {
                return Err(GeneratorError::InvalidParams("arity must be positive".into()));
            }
            let mut edges = Vec::new();
            let mut level = vec![0usize];
            let mut next = 1;
            for _ in 0..depth {
                let mut new_level = Vec::new();
                for &p in &level {
                    for _ in 0..d {
                        edges.push((p, next));
                        new_level.push(next);
                        next += 1;
                    }
                }
                level = new_level;
            }
            Ok(Graph::new(next, &edges).expect("valid construction"))
        }
        Counterexample::K22Blowup { d, radius } => {
            if d < 2 || d % 2 == 1 {
                return Err(GeneratorError::InvalidParams("d must be even and at least 2".into()));
            }
            let k = d / 2;
            // truncated k-regular tree
            let mut tree_edges = Vec::new();
            let mut level = vec![0usize];
            let mut next = 1;
            for r in 0..radius {
                let mut new_level = Vec::new();
                for &p in &level {
                    let kids = if r == 0 { k } else { k - 1 };
                    for _ in 0..kids {
                        tree_edges.push((p, next));
                        new_level.push(next);
                        next += 1;
                    }
                }
                level = new_level;
            }
            let tree = Graph::new(next, &tree_edges).expect("valid tree");
            let mut edges = Vec::new();
            for &(a, b) in &tree_edges {
                for x in [2 * a, 2 * a + 1] {
                    for y in [2 * b, 2 * b + 1] {
                        edges.push((x, y));
                    }
                }
            }
            let g = Graph::new(2 * next, &edges).expect("valid construction");
            for t in tree.vertices() {
                assert!(!g.has_edge(2 * t, 2 * t + 1));
                assert_eq!(g.degree(2 * t), 2 * tree.degree(t));
                assert_eq!(g.degree(2 * t + 1), 2 * tree.degree(t));
            }
            Ok(g)
        }
    }
}

/// Orients every edge of the cycle-plus-chord core of length `len` in all
/// `2^(len+1)` ways and reports whether each orientation has a vertex of
/// in-degree at least two.
pub fn forced_cycle_orientations_clash(len: usize) -> bool {
    let mut edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
    edges.push((0, len / 2));
    let m = edges.len();
    (0u64..1 << m).all(|mask| {
        let mut indeg = vec![0u8; len];
        for (i, &(a, b)) in edges.iter().enumerate() {
            let head = if mask >> i & 1 == 1 { b } else { a };
            indeg[head] += 1;
        }
        indeg.iter().any(|&x| x >= 2)
    })
}

/// Degree histogram as sorted `(degree, count)` pairs.
pub fn degree_histogram(g: &Graph) -> Vec<(usize, usize)> {
    let mut h = BTreeMap::new();
    for v in g.vertices() {
        *h.entry(g.degree(v)).or_insert(0) += 1;
    }
    h.into_iter().collect()
}

/// Parses `a/b` or a bare integer.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>, String> {
    let (a, b) = s.split_once('/').unwrap_or((s, "1"));
    let a: u64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    if b == 0 {
        return Err("zero denominator".into());
    }
    Ok(Ratio::new(a, b))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes_and_determinism() {
        let p0 = GnpParams {
            n: 30,
            edge_prob: Ratio::from_integer(0),
            seed: 1,
        };
        assert_eq!(gnp(&p0).edge_count(), 0);
        let p1 = GnpParams {
            edge_prob: Ratio::from_integer(1),
            ..p0.clone()
        };
        assert_eq!(gnp(&p1).edge_count(), 435);
        let p = GnpParams::with_average_degree(500, 6, 3);
        assert_eq!(gnp(&p), gnp(&p));
        assert_ne!(gnp(&p), gnp(&GnpParams { seed: 4, ..p.clone() }));
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        let n = 10_000usize;
        let g = gnp(&GnpParams::with_average_degree(n, 8, 17));
        let pairs = (n * (n - 1) / 2) as f64;
        let p = 8.0 / n as f64;
        let mean = pairs * p;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() < 3.0 * sd);
    }

    #[test]
    fn gnp_small_probability_covers_all_pairs() {
        // every pair reachable: with p close to 1 only a few pairs are skipped
        let g = gnp(&GnpParams {
            n: 40,
            edge_prob: Ratio::new(99, 100),
            seed: 2,
        });
        assert!(g.edge_count() > 700);
        assert!(g.has_edge(38, 39) || g.has_edge(0, 1));
    }

    #[test]
    fn regular_pairing() {
        let g = random_regular(50, 4, 1).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 4));
        assert_eq!(random_regular(5, 3, 0), Err(GeneratorError::InvalidRegular { n: 5, k: 3 }));
    }

    #[test]
    fn pipeline_leaves_regular_graph_alone() {
        let g = random_regular(200, 3, 5).unwrap();
        // cap 0 at this size, and degree 3 sits inside [1, 60]
        let (view, rep) = preprocess_random(&g, 3, &PipelineConfig::default()).unwrap();
        assert_eq!(view.graph, g);
        assert!(rep.deletions.is_empty());
    }

    #[test]
    fn complete_graph_is_emptied() {
        let g = Graph::complete(20);
        match preprocess_random(&g, 1, &PipelineConfig::default()) {
            Err(PipelineError::PipelineEmptied { report, .. }) => {
                assert_eq!(report.stages[0].removed, 0);
                assert_eq!(report.stages[1].removed, 20);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn pipeline_survivors_and_replay() {
        let g = gnp(&GnpParams::with_average_degree(10_000, 8, 7));
        let (view, rep) = preprocess_random(&g, 8, &PipelineConfig::default()).unwrap();
        assert!(view.graph.vertex_count() >= 10_000 / 50);
        assert_eq!(replay_deletions(g.vertex_count(), &rep.deletions), view.original);
        assert!(view.graph.min_degree() >= 1);
    }

    #[test]
    fn dense_spots_are_removed() {
        // K5 hanging off a long cycle
        let mut e: Vec<_> = (0..30).map(|i| (i, (i + 1) % 30)).collect();
        for a in 30..35 {
            for b in a + 1..35 {
                e.push((a, b));
            }
        }
        e.push((0, 30));
        let g = Graph::new(35, &e).unwrap();
        let cfg = PipelineConfig {
            dense_cap: Some(6),
            ..Default::default()
        };
        let (view, rep) = preprocess_random(&g, 2, &cfg).unwrap();
        assert!(rep.dense_spots.iter().flatten().any(|&v| v >= 30));
        assert!(view.original.iter().all(|&v| v < 30));
    }

    #[test]
    fn host_report_carries_exact_values() {
        let p = RamseyHostParams::for_colours(3, 20, 2, 1);
        let (view, rep) = ramsey_host(
            &p,
            Shrink::Target {
                order: 5_000,
                degree: 40,
            },
            &PipelineConfig::default(),
        )
        .unwrap();
        assert!(rep.exact_order > 1e30);
        assert!(rep.order_shrink > 1e20);
        assert_eq!(rep.epsilon, "1/2");
        assert!(view.graph.vertex_count() > 4_000);
        let q3 = RamseyHostParams::for_colours(3, 20, 3, 1);
        assert_eq!(q3.epsilon, Ratio::new(1, 3));
        let q1 = RamseyHostParams::for_colours(3, 20, 1, 1);
        assert_eq!(exact_host_size(3, q1.epsilon, 20), (0.0, 0.0));
    }

    #[test]
    fn colouring_extraction() {
        let g = gnp(&GnpParams::with_average_degree(2_000, 40, 3));
        let one = color_and_extract(&g, &Coloring::Random { q: 1, seed: 0 }, Ratio::from_integer(1), 40).unwrap();
        assert_eq!(one.class.as_ref().unwrap(), &g);
        let two = color_and_extract(&g, &Coloring::Random { q: 2, seed: 5 }, Ratio::new(1, 2), 40).unwrap();
        assert!(2 * two.class_sizes[two.colour] >= g.edge_count());
        assert!(two.met_target);
        let cv = two.class_view.as_ref().unwrap();
        assert!(cv.min_degree() >= two.min_degree_target);
        let dense = color_and_extract(&g, &Coloring::DenseCore { q: 2 }, Ratio::new(1, 2), 40).unwrap();
        assert!(dense.met_target || !dense.peel_trace.is_empty());
        let bad = Coloring::Scripted {
            colours: vec![0, 1, 2]
                .into_iter()
                .cycle()
                .take(g.edge_count())
                .collect(),
        };
        assert!(matches!(
            color_and_extract(&g, &bad, Ratio::new(1, 2), 40),
            Err(ColorError::NoQualifyingClass { .. })
        ));
    }

    #[test]
    fn counterexample_shapes() {
        let t = counterexample(Counterexample::DAryTree { d: 2, depth: 3 }).unwrap();
        assert_eq!(t.vertex_count(), 15);
        let c = counterexample(Counterexample::ChordCyclePendants { len: 6, d: 4 }).unwrap();
        assert_eq!((c.vertex_count(), c.max_degree()), (30, 7));
        let k = counterexample(Counterexample::K22Blowup { d: 6, radius: 2 }).unwrap();
        assert_eq!(k.vertex_count(), 20);
        assert_eq!(k.max_degree(), 6);
    }

    #[test]
    fn chord_cycle_is_sparse_and_forces_a_clash() {
        for len in 4..=8 {
            let g = counterexample(Counterexample::ChordCyclePendants { len, d: 1 }).unwrap();
            let core: Vec<_> = (0..len).collect();
            let audit = density_audit(&g.induced(&core), len, Ratio::new(41, 14));
            assert!(audit.exhaustive && audit.witness.is_none());
            assert!(forced_cycle_orientations_clash(len));
        }
    }
}
