//! Command-line flags, config files and their resolution.
//!
//! Every run flag may also come from a TOML file given with `--config`;
//! flags win over the file, the file wins over built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use induced_embed::embed::{parse_script, EmbedConfig, RootPolicy, ThresholdRule};
use induced_embed::experiments::{Coloring, Shrink};
use induced_embed::tree::TreeFamily;
use induced_embed::trials::AdversarySpec;
use induced_embed::Graph;
use serde::{Deserialize, Serialize};

/// Options shared by the game-playing commands.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameArgs {
    /// Maximum tree degree Δ.
    #[arg(long)]
    pub delta: Option<usize>,
    /// Criticality threshold; overrides --threshold.
    #[arg(long)]
    pub d: Option<usize>,
    /// Threshold rule: `hub:K`, `quantile:Q`, `min-quarter`, or an integer.
    #[arg(long)]
    pub threshold: Option<String>,
    /// `practical` or `paper`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seeds per adversary.
    #[arg(long)]
    pub trials: Option<usize>,
    /// `dfs`, `bfs`, `random`, `hostile`, `free`, `all`, or a script file.
    #[arg(long)]
    pub adversary: Option<String>,
    /// Rollback probability of the `free` adversary.
    #[arg(long)]
    pub rollback_prob: Option<f64>,
    /// Tree family: `path`, `star`, `complete`, `random`.
    #[arg(long)]
    pub family: Option<String>,
    /// Tree order.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Explicit tree as an edge list; overrides --family.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Fixed host root vertex.
    #[arg(long)]
    pub root: Option<usize>,
    /// Cross-check every game with the brute-force search.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub oracle: Option<bool>,
    /// Write `final.dot` for the first trial.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub dot: Option<bool>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! merge_fields {
    ($a:expr, $b:expr; $($f:ident),*) => {
        $( if $a.$f.is_none() { $a.$f = $b.$f.clone(); } )*
    };
}

impl GameArgs {
    fn merge(&mut self, file: &GameArgs) {
        merge_fields!(self, file; delta, d, threshold, mode, seed, trials, adversary,
            rollback_prob, family, nodes, tree, root, oracle, dot, out);
    }
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedArgs {
    /// Host graph as an edge list.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Spanning subgraph of the host the tree edges must use.
    #[arg(long)]
    pub j: Option<PathBuf>,
    /// Generate the host as `G(N, D/N)`: `N,D`.
    #[arg(long)]
    pub gnp: Option<String>,
    /// Run the random-graph preprocessing with this `d` (default: the
    /// `D` of --gnp).
    #[arg(long)]
    pub preprocess: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RamseyArgs {
    /// Number of colours.
    #[arg(long)]
    pub q: Option<usize>,
    /// Host scaling: `F` (both factors), `FN,FD`, or `N:D` for explicit
    /// order and average degree.
    #[arg(long)]
    pub shrink: Option<String>,
    /// `random` or `dense-core`.
    #[arg(long)]
    pub coloring: Option<String>,
    /// Largest dense spot searched during preprocessing.
    #[arg(long)]
    pub dense_cap: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
}

pub fn load<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        }
    }
}

impl EmbedArgs {
    pub fn merge(&mut self, file: &EmbedArgs) {
        merge_fields!(self, file; graph, j, gnp, preprocess);
        self.game.merge(&file.game);
    }
}

impl RamseyArgs {
    pub fn merge(&mut self, file: &RamseyArgs) {
        merge_fields!(self, file; q, shrink, coloring, dense_cap);
        self.game.merge(&file.game);
    }
}

/// Game options with every default filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedGame {
    pub delta: usize,
    pub d: usize,
    pub threshold: String,
    pub mode: String,
    pub seed: u64,
    pub trials: usize,
    pub adversary: String,
    pub rollback_prob: f64,
    pub family: String,
    pub nodes: usize,
    pub tree: Option<PathBuf>,
    pub root: Option<usize>,
    pub oracle: bool,
    pub dot: bool,
    pub out: Option<PathBuf>,
}

pub fn parse_threshold(s: &str) -> Result<ThresholdRule> {
    if let Ok(d) = s.parse::<usize>() {
        return Ok(ThresholdRule::Fixed(d));
    }
    if s == "min-quarter" {
        return Ok(ThresholdRule::MinDegreeQuarter);
    }
    if let Some(k) = s.strip_prefix("hub:") {
        return Ok(ThresholdRule::HubCount(k.parse().context("hub count")?));
    }
    if let Some(q) = s.strip_prefix("quantile:") {
        let q: f64 = q.parse().context("quantile")?;
        if !(0.0..=1.0).contains(&q) {
            bail!("quantile must lie in [0, 1]");
        }
        return Ok(ThresholdRule::DegreeQuantile(q));
    }
    bail!("unknown threshold rule `{s}`")
}

impl GameArgs {
    /// Fills defaults and validates; the threshold comes from host `g`.
    pub fn resolve(&self, g: &Graph) -> Result<ResolvedGame> {
        let delta = self.delta.unwrap_or(3);
        if delta == 0 {
            bail!("--delta must be positive");
        }
        let threshold = self.threshold.clone().unwrap_or_else(|| "hub:8".into());
        let rule = parse_threshold(&threshold)?;
        let d = match self.d {
            Some(0) => bail!("--d must be positive"),
            Some(d) => d,
            None => rule.resolve(g),
        };
        let mode = self.mode.clone().unwrap_or_else(|| "practical".into());
        if mode != "practical" && mode != "paper" {
            bail!("--mode must be `practical` or `paper`");
        }
        let trials = self.trials.unwrap_or(20);
        if trials == 0 {
            bail!("--trials must be positive");
        }
        let family = self.family.clone().unwrap_or_else(|| "random".into());
        if !["path", "star", "complete", "random"].contains(&family.as_str()) {
            bail!("unknown tree family `{family}`");
        }
        let rollback_prob = self.rollback_prob.unwrap_or(0.1);
        if !(0.0..=1.0).contains(&rollback_prob) {
            bail!("--rollback-prob must lie in [0, 1]");
        }
        if let Some(r) = self.root {
            if r >= g.vertex_count() {
                bail!("--root {r} is not a host vertex");
            }
        }
        Ok(ResolvedGame {
            delta,
            d,
            threshold,
            mode,
            seed: self.seed.unwrap_or(0),
            trials,
            adversary: self.adversary.clone().unwrap_or_else(|| "all".into()),
            rollback_prob,
            family,
            nodes: self.nodes.unwrap_or(50),
            tree: self.tree.clone(),
            root: self.root,
            oracle: self.oracle.unwrap_or(false),
            dot: self.dot.unwrap_or(false),
            out: self.out.clone(),
        })
    }
}

impl ResolvedGame {
    /// Writes every resolved value back, so the config file reproduces
    /// the run exactly. The output directory is dropped.
    pub fn pin(&self, args: &mut GameArgs) {
        *args = GameArgs {
            delta: Some(self.delta),
            d: Some(self.d),
            threshold: Some(self.threshold.clone()),
            mode: Some(self.mode.clone()),
            seed: Some(self.seed),
            trials: Some(self.trials),
            adversary: Some(self.adversary.clone()),
            rollback_prob: Some(self.rollback_prob),
            family: Some(self.family.clone()),
            nodes: Some(self.nodes),
            tree: self.tree.clone(),
            root: self.root,
            oracle: Some(self.oracle),
            dot: Some(self.dot),
            out: None,
        };
    }

    pub fn embed_config(&self) -> EmbedConfig {
        let base = if self.mode == "paper" {
            EmbedConfig::paper(self.delta, self.d, self.seed)
        } else {
            EmbedConfig::practical(self.delta, self.d, self.seed)
        };
        EmbedConfig {
            root: self.root.map_or(RootPolicy::MaxDegree, RootPolicy::Fixed),
            ..base
        }
    }

    pub fn family(&self) -> Result<TreeFamily> {
        let (delta, nodes) = (self.delta, self.nodes);
        if nodes == 0 {
            bail!("--nodes must be positive");
        }
        let f = match self.family.as_str() {
            "path" => TreeFamily::Path { nodes },
            "star" => TreeFamily::Star { nodes },
            "complete" => TreeFamily::CompleteAry { delta, nodes },
            _ => TreeFamily::Random {
                delta,
                nodes,
                seed: self.seed,
            },
        };
        f.build().context("tree family")?;
        Ok(f)
    }

    pub fn adversaries(&self) -> Result<Vec<AdversarySpec>> {
        let a = self.adversary.as_str();
        if a == "all" {
            return Ok(AdversarySpec::standard());
        }
        if a == "free" {
            return Ok(vec![AdversarySpec::Free {
                rollback_prob: self.rollback_prob,
            }]);
        }
        if let Some(s) = AdversarySpec::parse(a) {
            return Ok(vec![s]);
        }
        let text = std::fs::read_to_string(a).with_context(|| format!("adversary `{a}` is neither a policy nor a readable script"))?;
        Ok(vec![AdversarySpec::Script {
            requests: parse_script(&text)?,
        }])
    }
}

pub fn parse_shrink(s: &str) -> Result<Shrink> {
    if let Some((n, d)) = s.split_once(':') {
        return Ok(Shrink::Target {
            order: n.trim().parse().context("shrink order")?,
            degree: d.trim().parse().context("shrink degree")?,
        });
    }
    let (a, b) = s.split_once(',').unwrap_or((s, s));
    Ok(Shrink::Factors {
        order: a.trim().parse().context("shrink factor")?,
        degree: b.trim().parse().context("shrink factor")?,
    })
}

pub fn parse_coloring(s: &str, q: usize, seed: u64) -> Result<Coloring> {
    Ok(match s {
        "random" => Coloring::Random { q, seed },
        "dense-core" => Coloring::DenseCore { q },
        other => bail!("unknown colouring `{other}`"),
    })
}
