use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::{ExperimentConfig, PairwiseStats, RunRecord, TerminalPlan};
use crate::error::{Error, Result};
use crate::graph::Cost;
use crate::heuristics::Algorithm;

#[derive(Clone, Debug)]
pub struct ReportFiles {
    pub runs: PathBuf,
    pub pairwise: PathBuf,
    pub summary: PathBuf,
    pub manifest: PathBuf,
}

/// Summary group of an instance: OR-Library names ending in 5 or 10 are
/// `sparse`, 15 or 20 `dense`; anything else is its own group.
pub fn instance_group(name: &str) -> String {
    let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    match name[name.len() - digits..].parse::<u32>() {
        Ok(5 | 10) => "sparse".into(),
        Ok(15 | 20) => "dense".into(),
        _ => name.into(),
    }
}

type VectorCosts = BTreeMap<Algorithm, Cost>;

/// Writes `runs.csv`, `pairwise.csv`, `summary.csv` and `manifest.json`.
///
/// Pairwise and summary figures use only vectors on which every configured
/// algorithm produced a feasible tree.
pub fn emit_reports(records: &[RunRecord], config: &ExperimentConfig, out_dir: &Path) -> Result<ReportFiles> {
    if config.algorithms.is_empty() {
        return Err(Error::Argument("no algorithms selected".into()));
    }
    if records.is_empty() {
        return Err(Error::Argument("no run records to report".into()));
    }
    fs::create_dir_all(out_dir)?;
    let files = ReportFiles {
        runs: out_dir.join("runs.csv"),
        pairwise: out_dir.join("pairwise.csv"),
        summary: out_dir.join("summary.csv"),
        manifest: out_dir.join("manifest.json"),
    };

    let mut records = records.to_vec();
    records.sort_by(|a, b| a.key().cmp(&b.key()).then(a.algorithm.cmp(&b.algorithm)));

    let mut w = csv::Writer::from_path(&files.runs)?;
    w.write_record(["instance", "hop", "vector_seed", "algo", "cost", "feasible", "runtime_ms"])?;
    for r in &records {
        w.write_record([
            r.instance.clone(),
            r.hop.to_string(),
            r.vector_seed.to_string(),
            r.algorithm.to_string(),
            r.cost.to_string(),
            r.feasible.to_string(),
            r.runtime_ms.map(|t| format!("{t:.3}")).unwrap_or_default(),
        ])?;
    }
    w.flush()?;

    // (instance, hop) -> seed -> costs, complete vectors only.
    let mut complete: BTreeMap<(String, usize), BTreeMap<u64, VectorCosts>> = BTreeMap::new();
    for bench in &config.instances {
        for &hop in &config.hops {
            complete.entry((bench.name.clone(), hop)).or_default();
        }
    }
    for r in records.iter().filter(|r| r.feasible && config.algorithms.contains(&r.algorithm)) {
        complete
            .entry((r.instance.clone(), r.hop))
            .or_default()
            .entry(r.vector_seed)
            .or_default()
            .insert(r.algorithm, r.cost);
    }
    for vectors in complete.values_mut() {
        vectors.retain(|_, costs| costs.len() == config.algorithms.len());
    }

    let mut groups: BTreeMap<(String, usize), Vec<&VectorCosts>> = BTreeMap::new();
    for ((instance, hop), vectors) in &complete {
        groups.entry((instance_group(instance), *hop)).or_default().extend(vectors.values());
    }

    let mut w = csv::Writer::from_path(&files.pairwise)?;
    w.write_record(["group", "hop", "algo_a", "algo_b", "fos", "sfos", "sof", "ssof"])?;
    for ((group, hop), vectors) in &groups {
        for &a in &config.algorithms {
            for &b in config.algorithms.iter().filter(|&&b| b != a) {
                let mut s = PairwiseStats::default();
                for costs in vectors {
                    s.record(costs[&a], costs[&b]);
                }
                w.write_record([
                    group.clone(),
                    hop.to_string(),
                    a.to_string(),
                    b.to_string(),
                    s.fos.to_string(),
                    s.sfos.to_string(),
                    s.sof.to_string(),
                    s.ssof.to_string(),
                ])?;
            }
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(&files.summary)?;
    w.write_record(["group", "hop", "algo", "mean_cost", "imp_pct_vs_voss"])?;
    for ((group, hop), vectors) in &groups {
        let mean = |a: Algorithm| {
            (!vectors.is_empty()).then(|| vectors.iter().map(|c| c[&a] as f64).sum::<f64>() / vectors.len() as f64)
        };
        let voss = config.algorithms.contains(&Algorithm::Voss).then(|| mean(Algorithm::Voss)).flatten();
        for &a in &config.algorithms {
            let m = mean(a);
            let imp = match (voss, m) {
                (Some(v), Some(m)) if v > 0.0 => Some(super::improvement_pct(v, m)?),
                _ => None,
            };
            w.write_record([
                group.clone(),
                hop.to_string(),
                a.to_string(),
                m.map(|m| format!("{m:.4}")).unwrap_or_default(),
                imp.map(|i| format!("{i:.2}")).unwrap_or_default(),
            ])?;
        }
    }
    w.flush()?;

    let vectors: Vec<_> = complete
        .iter()
        .map(|((instance, hop), done)| {
            json!({
                "instance": instance,
                "hop": hop,
                "first_seed": config.base_seed,
                "count": config.vector_count(*hop),
                "complete": done.len(),
            })
        })
        .collect();
    let manifest = json!({
        "software": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "prng": {
            "generator": "SplitMix64 (rand_xoshiro 0.7.0)",
            "sampler": "rand 0.9.5 seq::index::sample over non-root vertex ids in ascending order",
            "vector_seeds": "base_seed + i for i in 0..multiplier*hop",
        },
        "config": {
            "instances": config.instances.iter().map(|b| json!({
                "name": b.name,
                "group": instance_group(&b.name),
                "vertices": b.graph.vertex_count(),
                "edges": b.graph.edge_count(),
                "root": b.root,
            })).collect::<Vec<_>>(),
            "hops": config.hops,
            "terminals": match &config.terminals {
                TerminalPlan::Sampled { count } => json!({ "sampled": count }),
                TerminalPlan::Fixed(set) => json!({ "fixed": set }),
            },
            "base_seed": config.base_seed,
            "multiplier": config.multiplier,
            "algorithms": config.algorithms,
            "keep_failures": config.keep_failures,
            "record_timings": config.record_timings,
        },
        "vectors": vectors,
        "records": records.len(),
    });
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    fs::write(&files.manifest, text)?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{run_matrix, BenchInstance, ExperimentConfig};
    use crate::fixtures::{load_fixture, Fixture};

    fn fixture_run(hops: Vec<usize>) -> (Vec<RunRecord>, ExperimentConfig) {
        let inst = load_fixture(Fixture::Fig3);
        let bench = BenchInstance::new("fig3", inst.shared_graph().clone());
        let config = ExperimentConfig::new(vec![bench], hops, TerminalPlan::Fixed(inst.terminals().clone()), 1);
        (run_matrix(&config).unwrap(), config)
    }

    #[test]
    fn groups() {
        assert_eq!(instance_group("steinc5"), "sparse");
        assert_eq!(instance_group("steind10"), "sparse");
        assert_eq!(instance_group("steinc20"), "dense");
        assert_eq!(instance_group("fig3"), "fig3");
        assert_eq!(instance_group("plain"), "plain");
    }

    #[test]
    fn voss_never_beats_nrbi_in_the_table() {
        let (records, config) = fixture_run(vec![5]);
        let dir = tempfile::tempdir().unwrap();
        let files = emit_reports(&records, &config, dir.path()).unwrap();
        let pairwise = fs::read_to_string(files.pairwise).unwrap();
        assert!(pairwise.lines().any(|l| l == "fig3,5,voss,nrbi,0,0,1,1"), "{pairwise}");
        assert!(pairwise.lines().any(|l| l == "fig3,5,nrbi,voss,1,1,0,0"));
        assert_eq!(pairwise.lines().count(), 1 + 5 * 4);
        let summary = fs::read_to_string(files.summary).unwrap();
        assert!(summary.contains("fig3,5,nrbi,30.0000,3.23"), "{summary}");
        let runs = fs::read_to_string(files.runs).unwrap();
        assert_eq!(runs.lines().next().unwrap(), "instance,hop,vector_seed,algo,cost,feasible,runtime_ms");
        assert!(runs.contains("fig3,5,1,nrbi,30,true,\n"));
        let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(files.manifest).unwrap()).unwrap();
        assert_eq!(manifest["config"]["base_seed"], 1);
    }

    #[test]
    fn two_hops_give_two_summary_rows_per_algorithm() {
        let (records, config) = fixture_run(vec![5, 6]);
        let dir = tempfile::tempdir().unwrap();
        let files = emit_reports(&records, &config, dir.path()).unwrap();
        let summary = fs::read_to_string(files.summary).unwrap();
        for a in Algorithm::ALL {
            assert_eq!(summary.lines().filter(|l| l.split(',').nth(2) == Some(a.name())).count(), 2);
        }
    }

    #[test]
    fn preconditions() {
        let (records, mut config) = fixture_run(vec![5]);
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_reports(&[], &config, dir.path()).is_err());
        config.algorithms.clear();
        assert!(matches!(emit_reports(&records, &config, dir.path()), Err(Error::Argument(_))));
    }

    #[test]
    fn unwritable_directory_is_an_io_error() {
        let (records, config) = fixture_run(vec![5]);
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "").unwrap();
        assert!(matches!(emit_reports(&records, &config, &blocker.join("out")), Err(Error::Io(_))));
    }
}
