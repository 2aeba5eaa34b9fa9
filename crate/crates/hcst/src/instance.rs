use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::index;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// A hop-constrained Steiner tree instance.
///
/// The root is always required but is not stored among `terminals`.
#[derive(Clone, Debug)]
pub struct Instance {
    graph: Arc<Graph>,
    root: Vertex,
    terminals: BTreeSet<Vertex>,
    hop_limit: usize,
}

impl Instance {
    pub fn new(
        graph: impl Into<Arc<Graph>>,
        root: Vertex,
        terminals: impl IntoIterator<Item = Vertex>,
        hop_limit: usize,
    ) -> Result<Self> {
        let graph = graph.into();
        if !graph.contains(root) {
            return Err(Error::Argument(format!("root {root} is not a vertex of the graph")));
        }
        if hop_limit == 0 {
            return Err(Error::Argument("hop limit must be at least 1".into()));
        }
        let terminals: BTreeSet<Vertex> = terminals.into_iter().collect();
        if let Some(&bad) = terminals.iter().find(|&&t| !graph.contains(t)) {
            return Err(Error::Argument(format!("terminal {bad} is not a vertex of the graph")));
        }
        if terminals.contains(&root) {
            return Err(Error::Argument(format!("root {root} must not be listed as a terminal")));
        }
        Ok(Instance { graph, root, terminals, hop_limit })
    }

    /// Same graph and root with another terminal set or hop limit.
    pub fn with_terminals(&self, terminals: impl IntoIterator<Item = Vertex>, hop_limit: usize) -> Result<Self> {
        Instance::new(self.graph.clone(), self.root, terminals, hop_limit)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn terminals(&self) -> &BTreeSet<Vertex> {
        &self.terminals
    }

    pub fn hop_limit(&self) -> usize {
        self.hop_limit
    }

    pub fn is_terminal(&self, v: Vertex) -> bool {
        self.terminals.contains(&v)
    }

    /// Root plus terminals: every vertex a solution must contain.
    pub fn required(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.root).chain(self.terminals.iter().copied())
    }
}

/// Draws `count` distinct non-root vertices.
///
/// The stream is SplitMix64 seeded with `seed`, consumed by `rand`'s
/// `seq::index::sample` over the non-root vertices in ascending id order.
/// Both crates are pinned to exact versions so a seed names the same sample
/// on every platform.
pub fn select_terminals(graph: &Graph, root: Vertex, count: usize, seed: u64) -> Result<BTreeSet<Vertex>> {
    if !graph.contains(root) {
        return Err(Error::Argument(format!("root {root} is not a vertex of the graph")));
    }
    let pool: Vec<Vertex> = graph.vertices().filter(|&v| v != root).collect();
    if count > pool.len() {
        return Err(Error::Argument(format!("cannot draw {count} terminals from {} non-root vertices", pool.len())));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    Ok(index::sample(&mut rng, pool.len(), count).into_iter().map(|i| pool[i]).collect())
}
