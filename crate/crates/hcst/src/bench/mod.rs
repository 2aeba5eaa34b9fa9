//! Experiment matrix: terminal vectors, algorithm runs, pairwise tables.

mod generate;
mod report;
mod stats;

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use generate::random_connected_graph;
pub use report::{emit_reports, instance_group, ReportFiles};
pub use stats::{improvement_pct, pairwise_stats, PairwiseStats};

use crate::construction::phase1_grow;
use crate::error::{Error, Result};
use crate::graph::{parse_orlib, Cost, Graph, Vertex};
use crate::heuristics::Algorithm;
use crate::instance::{select_terminals, Instance};
use crate::validation::check_feasible;

pub const DEFAULT_MULTIPLIER: usize = 100;

/// A named graph with its root. Terminals come from the experiment's
/// [`TerminalPlan`], not from the file.
#[derive(Clone, Debug)]
pub struct BenchInstance {
    pub name: String,
    pub graph: Arc<Graph>,
    pub root: Vertex,
}

impl BenchInstance {
    pub fn new(name: impl Into<String>, graph: impl Into<Arc<Graph>>) -> Self {
        BenchInstance { name: name.into(), graph: graph.into(), root: 1 }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let wrap = |source: Error| Error::File { path: path.to_owned(), source: Box::new(source) };
        let bytes = fs::read(path).map_err(|e| wrap(e.into()))?;
        let (graph, _) = parse_orlib(&bytes).map_err(wrap)?;
        let name =
            path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string());
        Ok(BenchInstance::new(name, graph))
    }

    /// Every regular, non-hidden file in `dir`, sorted by file name.
    pub fn load_dir(dir: &Path) -> Result<Vec<Self>> {
        let mut paths = Vec::new();
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            let hidden = entry.file_name().to_string_lossy().starts_with('.');
            if entry.file_type()?.is_file() && !hidden {
                paths.push(entry.path());
            }
        }
        paths.sort();
        paths.iter().map(|p| BenchInstance::load(p)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalPlan {
    /// `multiplier * H` sampled vectors per instance and hop limit.
    Sampled { count: usize },
    /// A single vector, reported under the base seed.
    Fixed(BTreeSet<Vertex>),
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub instances: Vec<BenchInstance>,
    pub hops: Vec<usize>,
    pub terminals: TerminalPlan,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub multiplier: usize,
    /// Keep records of vectors on which phase one fails, marked infeasible.
    pub keep_failures: bool,
    /// Fill the runtime column. Off by default so reruns are byte-identical.
    pub record_timings: bool,
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(instances: Vec<BenchInstance>, hops: Vec<usize>, terminals: TerminalPlan, base_seed: u64) -> Self {
        ExperimentConfig {
            instances,
            hops,
            terminals,
            base_seed,
            algorithms: Algorithm::ALL.to_vec(),
            multiplier: DEFAULT_MULTIPLIER,
            keep_failures: false,
            record_timings: false,
            threads: None,
        }
    }

    pub fn vector_count(&self, hop: usize) -> usize {
        match self.terminals {
            TerminalPlan::Sampled { .. } => self.multiplier * hop,
            TerminalPlan::Fixed(_) => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalVector {
    pub seed: u64,
    pub terminals: BTreeSet<Vertex>,
}

/// `multiplier * hop` terminal sets drawn with seeds `base_seed`,
/// `base_seed + 1`, and so on.
pub fn generate_vectors(
    graph: &Graph,
    root: Vertex,
    hop: usize,
    terminal_count: usize,
    base_seed: u64,
    multiplier: usize,
) -> Result<Vec<TerminalVector>> {
    (0..(multiplier * hop) as u64)
        .map(|i| {
            let seed = base_seed.wrapping_add(i);
            Ok(TerminalVector { seed, terminals: select_terminals(graph, root, terminal_count, seed)? })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub hop: usize,
    pub vector_seed: u64,
    #[serde(rename = "algo")]
    pub algorithm: Algorithm,
    pub cost: Cost,
    pub feasible: bool,
    pub runtime_ms: Option<f64>,
}

impl RunRecord {
    pub(crate) fn key(&self) -> (&str, usize, u64) {
        (&self.instance, self.hop, self.vector_seed)
    }
}

struct Job<'a> {
    bench: &'a BenchInstance,
    hop: usize,
    vector: TerminalVector,
}

/// Runs every requested algorithm on every (instance, hop, vector). Records
/// come back sorted by instance, hop, seed and algorithm whatever the thread
/// count.
pub fn run_matrix(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    if config.algorithms.is_empty() {
        return Ok(Vec::new());
    }
    let mut jobs = Vec::new();
    for bench in &config.instances {
        for &hop in &config.hops {
            let vectors = match &config.terminals {
                TerminalPlan::Sampled { count } => {
                    generate_vectors(&bench.graph, bench.root, hop, *count, config.base_seed, config.multiplier)?
                }
                TerminalPlan::Fixed(set) => vec![TerminalVector { seed: config.base_seed, terminals: set.clone() }],
            };
            jobs.extend(vectors.into_iter().map(|vector| Job { bench, hop, vector }));
        }
    }

    let run = || -> Result<Vec<RunRecord>> {
        let per_job: Vec<Vec<RunRecord>> = jobs.par_iter().map(|job| run_job(job, config)).collect::<Result<_>>()?;
        Ok(per_job.into_iter().flatten().collect())
    };
    let mut records = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Argument(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    records.sort_by(|a, b| a.key().cmp(&b.key()).then(a.algorithm.cmp(&b.algorithm)));
    Ok(records)
}

fn run_job(job: &Job, config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let instance =
        Instance::new(job.bench.graph.clone(), job.bench.root, job.vector.terminals.iter().copied(), job.hop)?;
    let record = |algorithm, cost, feasible, runtime_ms| RunRecord {
        instance: job.bench.name.clone(),
        hop: job.hop,
        vector_seed: job.vector.seed,
        algorithm,
        cost,
        feasible,
        runtime_ms,
    };

    let start = Instant::now();
    let growth = match phase1_grow(&instance) {
        Ok(g) => g,
        Err(Error::Infeasible { terminal }) => {
            warn!(
                "{} H={} seed={}: terminal {terminal} unreachable within the hop limit",
                job.bench.name, job.hop, job.vector.seed
            );
            if !config.keep_failures {
                return Ok(Vec::new());
            }
            return Ok(config.algorithms.iter().map(|&a| record(a, 0, false, None)).collect());
        }
        Err(e) => return Err(e),
    };
    let shared = start.elapsed();

    let mut out = Vec::with_capacity(config.algorithms.len());
    for &algorithm in &config.algorithms {
        let start = Instant::now();
        let tree = algorithm.run(&instance, &growth)?;
        let elapsed = shared + start.elapsed();
        let feasible = check_feasible(&tree, &instance).passed();
        debug!("{} H={} seed={} {algorithm}: {}", job.bench.name, job.hop, job.vector.seed, tree.total_cost);
        let runtime = config.record_timings.then_some(elapsed.as_secs_f64() * 1e3);
        out.push(record(algorithm, tree.total_cost, feasible, runtime));
    }
    Ok(out)
}
