use std::collections::BTreeMap;

use serde::Serialize;

use super::RunRecord;
use crate::error::{Error, Result};
use crate::graph::Cost;

/// Head-to-head counts between a first and second algorithm: how often and
/// by how much in total each one was strictly cheaper.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairwiseStats {
    pub fos: u64,
    pub sfos: u64,
    pub sof: u64,
    pub ssof: u64,
}

impl PairwiseStats {
    pub fn record(&mut self, a: Cost, b: Cost) {
        if a < b {
            self.fos += 1;
            self.sfos += b - a;
        } else if b < a {
            self.sof += 1;
            self.ssof += a - b;
        }
    }

    pub fn from_costs(a: &[Cost], b: &[Cost]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Pairing(format!("{} costs against {}", a.len(), b.len())));
        }
        let mut stats = PairwiseStats::default();
        for (&x, &y) in a.iter().zip(b) {
            stats.record(x, y);
        }
        Ok(stats)
    }

    /// The same comparison seen from the second algorithm.
    pub fn swapped(self) -> Self {
        PairwiseStats { fos: self.sof, sfos: self.ssof, sof: self.fos, ssof: self.sfos }
    }
}

/// Pairs records on (instance, hop, vector seed). Every key must appear
/// exactly once on each side.
pub fn pairwise_stats(a: &[RunRecord], b: &[RunRecord]) -> Result<PairwiseStats> {
    let index = |records: &'_ [RunRecord]| -> Result<BTreeMap<(String, usize, u64), Cost>> {
        let mut map = BTreeMap::new();
        for r in records {
            if map.insert((r.instance.clone(), r.hop, r.vector_seed), r.cost).is_some() {
                return Err(Error::Pairing(format!("duplicate record for {}", describe(r.key()))));
            }
        }
        Ok(map)
    };
    let (a, mut b) = (index(a)?, index(b)?);
    let mut stats = PairwiseStats::default();
    for (key, cost_a) in a {
        let cost_b = b
            .remove(&key)
            .ok_or_else(|| Error::Pairing(format!("no second record for {}", describe((&key.0, key.1, key.2)))))?;
        stats.record(cost_a, cost_b);
    }
    if let Some(key) = b.keys().next() {
        return Err(Error::Pairing(format!("no first record for {}", describe((&key.0, key.1, key.2)))));
    }
    Ok(stats)
}

fn describe((instance, hop, seed): (&str, usize, u64)) -> String {
    format!("instance {instance}, H={hop}, seed {seed}")
}

/// Percentage by which `alg_mean` undercuts `voss_mean`.
pub fn improvement_pct(voss_mean: f64, alg_mean: f64) -> Result<f64> {
    if voss_mean.is_nan() || voss_mean <= 0.0 {
        return Err(Error::Argument(format!("baseline mean must be positive, got {voss_mean}")));
    }
    Ok(100.0 * (voss_mean - alg_mean) / voss_mean)
}
