use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use hcst::bench::{emit_reports, run_matrix, BenchInstance, ExperimentConfig, TerminalPlan};
use hcst::fixtures::{load_fixture, Fixture};
use hcst::{
    check_feasible, exact_hcst, parse_orlib, phase1_grow, select_terminals, to_orlib, validate_graph, Algorithm, Edge,
    ExactOutcome, Graph, Instance, SteinerTree, Vertex,
};

#[derive(Parser)]
#[command(name = "hcst", version, about = "Hop-constrained Steiner tree heuristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one tree and print it.
    Solve(SolveArgs),
    /// Run the experiment matrix over a directory of instances.
    Bench(BenchArgs),
    /// Check a tree file against an instance; exits 1 when infeasible.
    Validate(ValidateArgs),
    /// Exhaustive optimum for a small instance.
    Oracle(OracleArgs),
    /// Print a built-in example instance in OR-Library format.
    Fixtures {
        #[arg(long)]
        name: Fixture,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 1)]
    root: Vertex,
    /// Comma-separated terminal ids. Defaults to the terminals listed in the file.
    #[arg(long, value_delimiter = ',', conflicts_with = "terminal_count")]
    terminals: Option<Vec<Vertex>>,
    /// Sample this many terminals instead.
    #[arg(long)]
    terminal_count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    hop: usize,
    #[arg(long, default_value = "nrbi")]
    algo: Algorithm,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    out: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of OR-Library files.
    #[arg(long)]
    instances: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    hops: Vec<usize>,
    #[arg(long)]
    terminal_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vectors per instance are this times the hop limit.
    #[arg(long, default_value_t = hcst::bench::DEFAULT_MULTIPLIER)]
    multiplier: usize,
    #[arg(long, value_delimiter = ',', default_value = "voss,minhig,maxhig,mm,nrbi")]
    algos: Vec<Algorithm>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    threads: Option<usize>,
    /// Keep records for vectors on which phase one fails.
    #[arg(long)]
    keep_failures: bool,
    /// Fill the runtime column (makes output differ between runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Tree JSON as written by `solve`.
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    hop: usize,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    hop: usize,
    #[arg(long, default_value_t = hcst::validation::DEFAULT_VERTEX_CAP)]
    cap: usize,
}

fn main() -> anyhow::Result<ExitCode> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
        Command::Validate(args) => validate(args),
        Command::Oracle(args) => oracle(args),
        Command::Fixtures { name } => {
            let inst = load_fixture(name);
            print!("{}", to_orlib(inst.graph(), inst.terminals()));
            eprintln!("{name}: root {}, hop limit {}", inst.root(), inst.hop_limit());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_graph(path: &Path) -> anyhow::Result<(Graph, BTreeSet<Vertex>)> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse_orlib(&bytes).with_context(|| format!("parsing {}", path.display()))?;
    for w in validate_graph(&parsed.0, 1).warnings() {
        log::warn!("{}: {w}", path.display());
    }
    Ok(parsed)
}

fn load_instance(args: &InstanceArgs, hop: usize) -> anyhow::Result<Instance> {
    let (graph, declared) = read_graph(&args.instance)?;
    let terminals = match (&args.terminals, args.terminal_count) {
        (Some(list), _) => list.iter().copied().collect(),
        (None, Some(k)) => select_terminals(&graph, args.root, k, args.seed)?,
        (None, None) => declared.into_iter().filter(|&t| t != args.root).collect(),
    };
    Ok(Instance::new(graph, args.root, terminals, hop)?)
}

fn instance_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn tree_json(name: &str, algo: Option<Algorithm>, instance: &Instance, tree: &SteinerTree) -> serde_json::Value {
    json!({
        "instance": name,
        "algo": algo,
        "hop": instance.hop_limit(),
        "root": instance.root(),
        "terminals": instance.terminals(),
        "cost": tree.total_cost,
        "edges": tree.edges.iter().map(|e| [e.u as u64, e.v as u64, e.cost]).collect::<Vec<_>>(),
        "depths": tree.depth,
        "feasible": check_feasible(tree, instance).passed(),
    })
}

fn print_tree(format: Format, value: &serde_json::Value, tree: &SteinerTree) -> anyhow::Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => {
            println!("cost {}", tree.total_cost);
            println!("feasible {}", value["feasible"]);
            for e in &tree.edges {
                println!("edge {} {} {}", e.u, e.v, e.cost);
            }
            for (v, d) in &tree.depth {
                println!("depth {v} {d}");
            }
        }
    }
    Ok(())
}

fn solve(args: SolveArgs) -> anyhow::Result<ExitCode> {
    let instance = load_instance(&args.input, args.hop)?;
    let growth = phase1_grow(&instance)?;
    let tree = args.algo.run(&instance, &growth)?;
    let value = tree_json(&instance_name(&args.input.instance), Some(args.algo), &instance, &tree);
    print_tree(args.out, &value, &tree)?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    let instances = BenchInstance::load_dir(&args.instances)?;
    if instances.is_empty() {
        bail!("no instance files in {}", args.instances.display());
    }
    if args.algos.is_empty() {
        bail!("no algorithms selected");
    }
    let mut config =
        ExperimentConfig::new(instances, args.hops, TerminalPlan::Sampled { count: args.terminal_count }, args.seed);
    config.algorithms = args.algos;
    config.multiplier = args.multiplier;
    config.keep_failures = args.keep_failures;
    config.record_timings = args.timings;
    config.threads = args.threads;
    let records = run_matrix(&config)?;
    let files = emit_reports(&records, &config, &args.out)?;
    eprintln!("{} records written to {}", records.len(), files.runs.display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Deserialize)]
struct TreeFile {
    #[serde(default = "default_root")]
    root: Vertex,
    terminals: Option<BTreeSet<Vertex>>,
    edges: Vec<(Vertex, Vertex, u64)>,
    cost: Option<u64>,
}

fn default_root() -> Vertex {
    1
}

fn validate(args: ValidateArgs) -> anyhow::Result<ExitCode> {
    let (graph, declared) = read_graph(&args.instance)?;
    let text = fs::read_to_string(&args.tree).with_context(|| format!("reading {}", args.tree.display()))?;
    let file: TreeFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", args.tree.display()))?;
    let terminals = file.terminals.unwrap_or(declared);
    let instance = Instance::new(graph, file.root, terminals.into_iter().filter(|&t| t != file.root), args.hop)?;
    let mut tree = SteinerTree::from_parts(file.edges.iter().map(|&(u, v, c)| Edge::new(u, v, c)), file.root);
    if let Some(cost) = file.cost {
        tree.total_cost = cost;
    }
    let report = check_feasible(&tree, &instance);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn oracle(args: OracleArgs) -> anyhow::Result<ExitCode> {
    let instance = load_instance(&args.input, args.hop)?;
    match exact_hcst(&instance, args.cap)? {
        ExactOutcome::Optimal { tree, .. } => {
            let value = tree_json(&instance_name(&args.input.instance), None, &instance, &tree);
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        ExactOutcome::Infeasible => println!("{}", json!({ "infeasible": true })),
    }
    Ok(ExitCode::SUCCESS)
}
