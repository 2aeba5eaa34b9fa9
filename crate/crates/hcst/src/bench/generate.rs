use std::collections::HashSet;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::{Cost, Graph};

/// A connected random graph: a random recursive spanning tree topped up with
/// uniformly drawn extra edges. Costs are uniform over `costs`.
pub fn random_connected_graph(
    vertex_count: usize,
    edge_count: usize,
    costs: RangeInclusive<Cost>,
    seed: u64,
) -> Result<Graph> {
    let max_edges = vertex_count * vertex_count.saturating_sub(1) / 2;
    if vertex_count == 0 || edge_count + 1 < vertex_count || edge_count > max_edges {
        return Err(Error::Argument(format!(
            "cannot build a connected simple graph with {vertex_count} vertices and {edge_count} edges"
        )));
    }
    if costs.is_empty() {
        return Err(Error::Argument("empty cost range".into()));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(edge_count);
    let mut edges = Vec::with_capacity(edge_count);
    for v in 2..=vertex_count {
        let u = rng.random_range(1..v);
        seen.insert((u, v));
        edges.push((u, v, rng.random_range(costs.clone())));
    }
    while edges.len() < edge_count {
        let a = rng.random_range(1..=vertex_count);
        let b = rng.random_range(1..=vertex_count);
        let key = (a.min(b), a.max(b));
        if a != b && seen.insert(key) {
            edges.push((key.0, key.1, rng.random_range(costs.clone())));
        }
    }
    Graph::new(vertex_count, edges)
}
