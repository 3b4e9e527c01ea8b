mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use induced_embed::embed::{verify_induced, Embedding, ViolationKind};
use induced_embed::escape::{check_escape_way, ArcSet};
use induced_embed::experiments::{
    color_and_extract, counterexample, gnp, parse_ratio, preprocess_random, random_regular, ramsey_host,
    Counterexample, GnpParams, PipelineConfig, RamseyHostParams,
};
use induced_embed::report::ExperimentReport;
use induced_embed::tree::Tree;
use induced_embed::trials::{run_trial_with_state, run_trials, TreeSource, TrialPlan};
use induced_embed::verify::{brute_force_induced_embed, OracleBudget, OracleResult};
use induced_embed::Graph;

use config::{load, parse_coloring, parse_shrink, EmbedArgs, RamseyArgs, ResolvedGame};

/// Exit statuses.
const EXIT_OK: u8 = 0;
const EXIT_REFUSED: u8 = 1;
const EXIT_FAILED: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser)]
#[command(name = "induced-embed", version, about = "Induced tree embedding experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file (stdout when absent).
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Play embedding games on a host graph.
    Embed {
        /// TOML file with defaults for any flag.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        args: EmbedArgs,
    },
    /// Colour a shrunk random host and embed into the largest class.
    Ramsey {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        args: RamseyArgs,
    },
    /// Re-check embeddings, escape-ways or whole output directories.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum GenKind {
    /// `G(n, p)`; give either --d (average degree) or --p.
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "p")]
        d: Option<u64>,
        /// Edge probability as `a/b`.
        #[arg(long)]
        p: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random `k`-regular graph.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Small constructions where the definitions are tight.
    Counterexample {
        #[arg(value_enum)]
        kind: CounterKind,
        #[arg(long, default_value_t = 6)]
        len: usize,
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CounterKind {
    ChordCyclePendants,
    DAryTree,
    K22Blowup,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    j: Option<PathBuf>,
    /// Embedding as JSON.
    #[arg(long)]
    embedding: Option<PathBuf>,
    /// Check every run directory (one holding `report.json`) at or below.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Arc list to check against the escape-way conditions.
    #[arg(long)]
    escape_way: Option<PathBuf>,
    /// Search for an induced copy of --tree by brute force.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    tree: Option<PathBuf>,
}

/// Error carrying its own exit status.
#[derive(Debug)]
struct Exit(u8, String);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.1)
    }
}

impl std::error::Error for Exit {}

fn failed(msg: impl Into<String>) -> anyhow::Error {
    Exit(EXIT_FAILED, msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let res = match cli.cmd {
        Command::Gen { kind, out } => cmd_gen(kind, out.as_deref()),
        Command::Embed { config, args } => cmd_embed(config.as_deref(), args),
        Command::Ramsey { config, args } => cmd_ramsey(config.as_deref(), args),
        Command::Verify(v) => cmd_verify(v),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = e.downcast_ref::<Exit>().map_or(EXIT_CONFIG, |x| x.0);
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Graph::from_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_tree(path: &Path) -> Result<Tree> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Tree::from_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_gen(kind: GenKind, out: Option<&Path>) -> Result<u8> {
    let g = match kind {
        GenKind::Gnp { n, d, p, seed } => {
            let params = match (d, p) {
                (Some(d), None) => GnpParams::with_average_degree(n, d, seed),
                (None, Some(p)) => {
                    let edge_prob = parse_ratio(&p).map_err(|e| anyhow!(e))?;
                    if edge_prob > 1u64.into() {
                        bail!("--p must be at most 1");
                    }
                    GnpParams { n, edge_prob, seed }
                }
                _ => bail!("give exactly one of --d and --p"),
            };
            gnp(&params)
        }
        GenKind::Regular { n, k, seed } => random_regular(n, k, seed)?,
        GenKind::Counterexample {
            kind,
            len,
            d,
            depth,
            radius,
        } => counterexample(match kind {
            CounterKind::ChordCyclePendants => Counterexample::ChordCyclePendants { len, d },
            CounterKind::DAryTree => Counterexample::DAryTree { d, depth },
            CounterKind::K22Blowup => Counterexample::K22Blowup { d, radius },
        })?,
    };
    let text = g.to_edge_list();
    match out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    eprintln!("{} vertices, {} edges", g.vertex_count(), g.edge_count());
    Ok(EXIT_OK)
}

/// Everything a finished batch needs to be written out.
struct Run<'a> {
    g: &'a Graph,
    j: &'a Graph,
    plan: TrialPlan,
    resolved: ResolvedGame,
    report: ExperimentReport,
}

fn plan_for(game: &ResolvedGame) -> Result<TrialPlan> {
    let trees = match &game.tree {
        Some(p) => {
            let tree = read_tree(p)?;
            if tree.max_degree() > game.delta {
                bail!("tree has maximum degree {} above --delta {}", tree.max_degree(), game.delta);
            }
            TreeSource::Fixed { tree }
        }
        None => TreeSource::Family {
            family: game.family()?,
        },
    };
    Ok(TrialPlan {
        trees,
        adversaries: game.adversaries()?,
        seeds: (0..game.trials as u64).map(|i| game.seed + i).collect(),
        embed: game.embed_config(),
        oracle: game.oracle.then(OracleBudget::default),
    })
}

fn play_batch<'a>(
    g: &'a Graph,
    j: &'a Graph,
    resolved: ResolvedGame,
    mut echo: serde_json::Value,
) -> Result<Run<'a>> {
    let plan = plan_for(&resolved)?;
    // the output location is not part of the experiment
    if let Some(m) = echo.as_object_mut() {
        m.remove("out");
    }
    echo["game"] = serde_json::to_value(ResolvedGame {
        out: None,
        ..resolved.clone()
    })?;
    echo["embed"] = serde_json::to_value(&plan.embed)?;
    echo["host"] = serde_json::json!({
        "order": g.vertex_count(),
        "edges": g.edge_count(),
        "j_edges": j.edge_count(),
        "min_degree": j.min_degree(),
        "max_degree": g.max_degree(),
    });
    let report = run_trials(g, j, &plan, echo);
    Ok(Run {
        g,
        j,
        plan,
        resolved,
        report,
    })
}

fn finish(run: Run<'_>, config_toml: String) -> Result<u8> {
    let r = &run.report;
    if let Some(dir) = &run.resolved.out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write(&dir.join("report.json"), &r.to_json())?;
        write(&dir.join("trials.csv"), &r.to_csv())?;
        write(&dir.join("config.toml"), &config_toml)?;
        write(&dir.join("host.edges"), &run.g.to_edge_list())?;
        if run.j != run.g {
            write(&dir.join("j.edges"), &run.j.to_edge_list())?;
        }
        let (first, state) = run_trial_with_state(run.g, run.j, &run.plan, 0);
        if let Some(e) = &first.embedding {
            write(&dir.join("embedding.json"), &serde_json::to_string_pretty(e)?)?;
        }
        if run.resolved.dot {
            if let Some(s) = state {
                write(&dir.join("final.dot"), &s.to_dot())?;
            }
        }
    } else {
        println!("{}", r.to_json());
    }
    let a = &r.aggregate;
    eprintln!(
        "{}/{} games succeeded ({:.3}, {:.0}% CI [{:.3}, {:.3}])",
        a.successes,
        a.trials,
        a.frequency,
        a.confidence * 100.0,
        a.ci_low,
        a.ci_high
    );
    for (name, agg) in &r.by_adversary {
        eprintln!("  {name}: {}/{}", agg.successes, agg.trials);
    }
    if r.any_refusal() {
        if let Some(f) = r.records.iter().filter_map(|x| x.failure.as_ref()).find(|f| f.is_hypothesis_refusal()) {
            eprintln!("refused: {}", f.error);
        }
        return Ok(EXIT_REFUSED);
    }
    if !r.successes_certified() {
        eprintln!("a reported success failed its certificate");
        return Ok(EXIT_FAILED);
    }
    if a.successes == 0 {
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}

fn cmd_embed(config: Option<&Path>, mut args: EmbedArgs) -> Result<u8> {
    let file: EmbedArgs = load(config)?;
    args.merge(&file);
    let mut notes = serde_json::Map::new();
    let (g, j) = match (&args.graph, &args.gnp) {
        (Some(_), Some(_)) => bail!("give at most one of --graph and --gnp"),
        (Some(path), None) => {
            let g = read_graph(path)?;
            let j = match &args.j {
                Some(p) => read_graph(p)?,
                None => g.clone(),
            };
            if !j.is_spanning_subgraph_of(&g) {
                bail!("--j is not a spanning subgraph of --graph");
            }
            (g, j)
        }
        (None, Some(spec)) => {
            if args.j.is_some() {
                bail!("--j needs --graph");
            }
            let (n, d) = spec.split_once(',').ok_or_else(|| anyhow!("--gnp expects N,D"))?;
            let n: usize = n.trim().parse().context("--gnp order")?;
            let d: u64 = d.trim().parse().context("--gnp degree")?;
            let seed = args.game.seed.unwrap_or(0);
            let raw = gnp(&GnpParams::with_average_degree(n, d, seed));
            let pd = args.preprocess.unwrap_or(d);
            let g = if pd > 0 {
                let (view, rep) = preprocess_random(&raw, pd, &PipelineConfig::default())
                    .map_err(|e| failed(e.to_string()))?;
                notes.insert("pipeline".into(), serde_json::to_value(&rep)?);
                view.graph
            } else {
                raw
            };
            (g.clone(), g)
        }
        (None, None) => bail!("give --graph or --gnp"),
    };
    let resolved = args.game.resolve(&g)?;
    resolved.pin(&mut args.game);
    let echo = serde_json::to_value(&args)?;
    let toml_text = toml::to_string(&args).context("serializing config")?;
    let mut run = play_batch(&g, &j, resolved, echo)?;
    run.report.notes.extend(notes);
    finish(run, toml_text)
}

fn cmd_ramsey(config: Option<&Path>, mut args: RamseyArgs) -> Result<u8> {
    let file: RamseyArgs = load(config)?;
    args.merge(&file);
    let q = args.q.unwrap_or(2);
    if q == 0 {
        bail!("--q must be positive");
    }
    let shrink = parse_shrink(args.shrink.as_deref().ok_or_else(|| anyhow!("--shrink is required"))?)?;
    let delta = args.game.delta.unwrap_or(3);
    let nodes = args.game.nodes.unwrap_or(50);
    let seed = args.game.seed.unwrap_or(0);
    let coloring = parse_coloring(args.coloring.get_or_insert_with(|| "random".into()), q, seed)?;
    args.q = Some(q);
    let params = RamseyHostParams::for_colours(delta, nodes, q, seed);
    let cfg = PipelineConfig {
        dense_cap: args.dense_cap,
        ..PipelineConfig::default()
    };
    let (host, host_report) = ramsey_host(&params, shrink, &cfg).map_err(|e| failed(e.to_string()))?;
    let ext = color_and_extract(&host.graph, &coloring, params.epsilon, host_report.degree)
        .map_err(|e| failed(e.to_string()))?;
    eprintln!(
        "host {} vertices; colour {} holds {} of {} edges; peeled {} vertices, target degree {} {}",
        host.graph.vertex_count(),
        ext.colour,
        ext.class_sizes[ext.colour],
        ext.total_edges,
        ext.peel_trace.len(),
        ext.min_degree_target,
        if ext.met_target { "met" } else { "not met" }
    );
    let (Some(view), Some(j)) = (ext.host_view.clone(), ext.class_view.clone()) else {
        return Err(failed("colour class peeled to nothing"));
    };
    if view.graph.vertex_count() == 0 {
        return Err(failed("colour class peeled to nothing"));
    }
    let resolved = args.game.resolve(&view.graph)?;
    resolved.pin(&mut args.game);
    let echo = serde_json::to_value(&args)?;
    let toml_text = toml::to_string(&args).context("serializing config")?;
    let mut run = play_batch(&view.graph, &j, resolved, echo)?;
    run.report.notes.insert("host".into(), serde_json::to_value(&host_report)?);
    run.report.notes.insert("extraction".into(), serde_json::to_value(&ext)?);
    finish(run, toml_text)
}

fn describe(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::NotInjective => "share a host vertex",
        ViolationKind::MissingEdge => "are tree neighbours without a j edge",
        ViolationKind::Chord => "are joined in the host but not in the tree",
        ViolationKind::OutOfRange => "lie outside the host",
    }
}

fn show(v: Option<usize>) -> String {
    v.map_or_else(|| "none".into(), |v| v.to_string())
}

/// Verifies one embedding; the message names the first offending pair.
fn check_embedding(g: &Graph, j: &Graph, e: &Embedding) -> std::result::Result<usize, String> {
    let cert = verify_induced(g, j, e);
    match cert.violation {
        None => Ok(cert.nodes),
        Some(v) => Err(format!(
            "nodes {} and {} (vertices {} and {}) {}",
            v.a,
            v.b,
            show(e.vertex_of(v.a)),
            show(e.vertex_of(v.b)),
            describe(v.kind)
        )),
    }
}

fn run_dirs(root: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    if root.join("report.json").is_file() {
        out.push(root.to_path_buf());
    }
    let mut subs: Vec<PathBuf> = fs::read_dir(root)
        .with_context(|| format!("reading {}", root.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    subs.sort();
    for s in subs {
        run_dirs(&s, out)?;
    }
    Ok(())
}

fn verify_dir(dir: &Path) -> Result<(usize, Vec<String>)> {
    let report: ExperimentReport = serde_json::from_str(
        &fs::read_to_string(dir.join("report.json")).with_context(|| format!("reading {}", dir.display()))?,
    )
    .context("parsing report.json")?;
    let g = read_graph(&dir.join("host.edges"))?;
    let jp = dir.join("j.edges");
    let j = if jp.is_file() { read_graph(&jp)? } else { g.clone() };
    let mut checked = 0;
    let mut problems = Vec::new();
    for r in &report.records {
        match &r.embedding {
            Some(e) => {
                checked += 1;
                if let Err(m) = check_embedding(&g, &j, e) {
                    problems.push(format!("trial {}: {m}", r.id));
                }
            }
            None if r.success => problems.push(format!("trial {}: success without an embedding", r.id)),
            None => {}
        }
    }
    let ep = dir.join("embedding.json");
    if ep.is_file() {
        let e: Embedding = serde_json::from_str(&fs::read_to_string(&ep)?).context("parsing embedding.json")?;
        checked += 1;
        if let Err(m) = check_embedding(&g, &j, &e) {
            problems.push(format!("embedding.json: {m}"));
        }
    }
    Ok((checked, problems))
}

fn cmd_verify(v: VerifyArgs) -> Result<u8> {
    if let Some(root) = &v.dir {
        let mut dirs = Vec::new();
        run_dirs(root, &mut dirs)?;
        if dirs.is_empty() {
            bail!("no report.json under {}", root.display());
        }
        let mut bad = 0;
        for d in &dirs {
            let (checked, problems) = verify_dir(d)?;
            println!("{}: {checked} embeddings, {} violations", d.display(), problems.len());
            for p in &problems {
                println!("  {p}");
            }
            bad += problems.len();
        }
        return Ok(if bad == 0 { EXIT_OK } else { EXIT_FAILED });
    }
    let g = read_graph(v.graph.as_deref().ok_or_else(|| anyhow!("give --graph or --dir"))?)?;
    let j = match &v.j {
        Some(p) => read_graph(p)?,
        None => g.clone(),
    };
    let mut code = EXIT_OK;
    let mut did = false;
    if let Some(p) = &v.embedding {
        did = true;
        let e: Embedding = serde_json::from_str(&fs::read_to_string(p)?).context("parsing embedding")?;
        match check_embedding(&g, &j, &e) {
            Ok(n) => println!("embedding of {n} nodes is induced"),
            Err(m) => {
                println!("violation: {m}");
                code = EXIT_FAILED;
            }
        }
    }
    if let Some(p) = &v.escape_way {
        did = true;
        let arcs = ArcSet::from_arc_list(&g, &fs::read_to_string(p)?).context("parsing arc list")?;
        match check_escape_way(&g, &arcs) {
            Ok(()) => println!("escape-way with {} arcs is valid", arcs.len()),
            Err(e) => {
                println!("not an escape-way: {e}");
                code = EXIT_FAILED;
            }
        }
    }
    if v.oracle {
        did = true;
        let tree = read_tree(v.tree.as_deref().ok_or_else(|| anyhow!("--oracle needs --tree"))?)?;
        match brute_force_induced_embed(&g, &j, &tree, &OracleBudget::default())? {
            OracleResult::Found { embedding, expanded } => {
                println!("found after {expanded} expansions");
                println!("{}", serde_json::to_string_pretty(&embedding)?);
            }
            OracleResult::NotFound { expanded } => {
                println!("no induced copy ({expanded} expansions)");
                code = EXIT_FAILED;
            }
            OracleResult::BudgetExhausted { expanded } => {
                println!("budget exhausted after {expanded} expansions");
                code = EXIT_FAILED;
            }
        }
    }
    if !did {
        bail!("nothing to verify: give --embedding, --escape-way or --oracle");
    }
    Ok(code)
}
