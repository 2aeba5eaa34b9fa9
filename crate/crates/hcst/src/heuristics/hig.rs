//! Root-based rebuilds driven by the phase-one U labels.
//!
//! Terminals are attached one at a time in U order (ascending for MinHIG,
//! descending for MaxHIG), each by the cheapest path from any vertex already in
//! the tree such that the new terminal's depth stays within the hop limit.

use std::collections::{BTreeMap, VecDeque};

use log::debug;

use super::ensure_hop_feasible;
use crate::construction::GrowthState;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Vertex};
use crate::hop_paths::{hop_limited_sssp, Path, VertexMask};
use crate::instance::Instance;
use crate::tree::{strip_leaves, tree_cost_and_depths, SteinerTree};

pub fn minhig(instance: &Instance, growth: &GrowthState) -> Result<SteinerTree> {
    attach_by_level(instance, growth, false)
}

pub fn maxhig(instance: &Instance, growth: &GrowthState) -> Result<SteinerTree> {
    attach_by_level(instance, growth, true)
}

/// The cheaper of MinHIG and MaxHIG; MinHIG wins ties.
pub fn mm(instance: &Instance, growth: &GrowthState) -> Result<SteinerTree> {
    let low = minhig(instance, growth)?;
    let high = maxhig(instance, growth)?;
    Ok(if high.total_cost < low.total_cost { high } else { low })
}

struct PartialTree {
    members: VertexMask,
    depth: BTreeMap<Vertex, usize>,
    edges: Vec<Edge>,
}

impl PartialTree {
    fn rooted(vertex_count: usize, root: Vertex) -> Self {
        PartialTree {
            members: VertexMask::from_vertices(vertex_count, [root]),
            depth: BTreeMap::from([(root, 0)]),
            edges: Vec::new(),
        }
    }

    fn add_path(&mut self, graph: &Graph, path: &Path) {
        let base = self.depth[&path.first()];
        for (i, (a, b)) in path.steps().enumerate() {
            self.edges.push(Edge::new(a, b, graph.edge_cost(a, b).expect("path edges exist")));
            self.members.insert(b);
            self.depth.insert(b, base + i + 1);
        }
    }

    /// Merges the terminal's phase-one root path into the tree and re-derives
    /// a tree of minimum depths: every vertex hangs from its cheapest
    /// neighbour one breadth-first layer closer to the root.
    fn splice(&mut self, instance: &Instance, root_path: &[Vertex]) {
        let graph = instance.graph();
        let mut union = self.edges.clone();
        for w in root_path.windows(2) {
            let e = Edge::new(w[0], w[1], graph.edge_cost(w[0], w[1]).expect("path edges exist"));
            if !union.contains(&e) {
                union.push(e);
            }
        }
        let mut adj: BTreeMap<Vertex, Vec<(Vertex, u64)>> = BTreeMap::new();
        for e in &union {
            adj.entry(e.u).or_default().push((e.v, e.cost));
            adj.entry(e.v).or_default().push((e.u, e.cost));
        }
        let root = instance.root();
        let mut layer = BTreeMap::from([(root, 0usize)]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[&v] {
                if !layer.contains_key(&w) {
                    layer.insert(w, layer[&v] + 1);
                    queue.push_back(w);
                }
            }
        }
        let edges: Vec<Edge> = layer
            .iter()
            .filter(|&(&v, _)| v != root)
            .map(|(&v, &l)| {
                let (cost, parent) = adj[&v]
                    .iter()
                    .filter(|(w, _)| layer[w] + 1 == l)
                    .map(|&(w, c)| (c, w))
                    .min()
                    .expect("non-root vertices have a parent layer");
                Edge::new(parent, v, cost)
            })
            .collect();
        let edges = strip_leaves(&edges, |v| v == root || instance.is_terminal(v));
        let depth = crate::tree::bfs_depths(&edges, root);
        self.members = VertexMask::from_vertices(graph.vertex_count(), depth.keys().copied());
        self.depth = depth;
        self.edges = edges;
    }
}

fn attach_by_level(instance: &Instance, growth: &GrowthState, descending: bool) -> Result<SteinerTree> {
    let graph = instance.graph();
    let hop = instance.hop_limit();
    let mut order = Vec::with_capacity(instance.terminals().len());
    for &t in instance.terminals() {
        let u = growth
            .u(t)
            .ok_or_else(|| Error::Argument(format!("terminal {t} has no U label; growth is from another instance")))?;
        order.push((u, t));
    }
    if descending {
        order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    } else {
        order.sort_unstable();
    }

    let mut tree = PartialTree::rooted(graph.vertex_count(), instance.root());
    for &(_, t) in &order {
        if tree.members.contains(t) {
            continue;
        }
        let sources: Vec<_> = tree.depth.iter().map(|(&v, &d)| (v, d)).collect();
        let table = hop_limited_sssp(graph, &sources, hop, &tree.members);
        match table.best_layer(t, hop) {
            Some(layer) => tree.add_path(graph, &table.extract_path(t, layer)?),
            None => {
                // Earlier attachments can leave the vertices of t's certified
                // root path deeper than their U labels, cutting t off.
                debug!("terminal {t} cannot attach within hop {hop}; splicing its phase-one path");
                let root_path = growth.root_path(t).ok_or_else(|| Error::Postcondition {
                    message: format!("terminal {t} has no phase-one root path"),
                    edges: tree.edges.clone(),
                })?;
                tree.splice(instance, &root_path);
            }
        }
    }
    let result = tree_cost_and_depths(&tree.edges, instance)
        .map_err(|e| Error::Postcondition { message: e.to_string(), edges: tree.edges.clone() })?;
    ensure_hop_feasible(result, instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::phase1_grow;
    use crate::fixtures::{load_fixture, vertex, Fixture, ROOT};
    use crate::validation::check_feasible;

    fn run(f: Fixture, alg: fn(&Instance, &GrowthState) -> Result<SteinerTree>) -> SteinerTree {
        let inst = load_fixture(f);
        let g = phase1_grow(&inst).unwrap();
        let t = alg(&inst, &g).unwrap();
        assert!(check_feasible(&t, &inst).passed());
        t
    }

    #[test]
    fn minhig_fixture_costs() {
        let t = run(Fixture::Fig1, minhig);
        assert_eq!(t.total_cost, 10);
        assert!(t.edges.contains(&Edge::new(vertex(3), vertex(5), 2)));
        assert_eq!(run(Fixture::Fig2, minhig).total_cost, 19);
        assert_eq!(run(Fixture::Fig3, minhig).total_cost, 31);
    }

    #[test]
    fn maxhig_fixture_costs() {
        let t = run(Fixture::Fig2, maxhig);
        assert_eq!(t.total_cost, 10);
        assert_eq!(t.depth[&vertex(8)], 4);
        assert_eq!(run(Fixture::Fig1, maxhig).total_cost, 15);
        let t = run(Fixture::Fig3, maxhig);
        assert_eq!(t.total_cost, 31);
        // vertex 2 is picked up inside vertex 7's path
        assert_eq!(t.depth[&vertex(2)], 2);
        assert_eq!(t.depth[&vertex(7)], 5);
    }

    #[test]
    fn mm_takes_the_cheaper_tree() {
        assert_eq!(run(Fixture::Fig1, mm).total_cost, 10);
        assert_eq!(run(Fixture::Fig2, mm).total_cost, 10);
        assert_eq!(run(Fixture::Fig3, mm).total_cost, 31);
    }

    /// Phase one reaches s from the root, but MinHIG first hangs s below t1,
    /// one level deeper than its U label, which leaves t2 out of reach.
    fn stranded_instance() -> Instance {
        let (r, t1, s, w, t2, t3) = (1, 2, 3, 4, 5, 6);
        let graph = Graph::new(6, [(r, t1, 1), (r, s, 3), (t1, s, 2), (s, w, 1), (w, t2, 1), (s, t3, 10)]).unwrap();
        Instance::new(graph, ROOT, [t1, t2, t3], 3).unwrap()
    }

    #[test]
    fn stranded_terminal_is_spliced_in() {
        let inst = stranded_instance();
        let g = phase1_grow(&inst).unwrap();
        assert_eq!(g.u(3), Some(1));
        assert_eq!(g.u(6), Some(2));
        assert_eq!(g.u(5), Some(3));

        // Without the splice the direct attachment fails.
        let mut partial = PartialTree::rooted(6, 1);
        partial.add_path(inst.graph(), &Path { vertices: vec![1, 2], cost: 1, start_layer: 0 });
        partial.add_path(inst.graph(), &Path { vertices: vec![2, 3, 6], cost: 12, start_layer: 1 });
        let sources: Vec<_> = partial.depth.iter().map(|(&v, &d)| (v, d)).collect();
        let table = hop_limited_sssp(inst.graph(), &sources, 3, &partial.members);
        assert_eq!(table.dist(5, 3), None);

        let t = minhig(&inst, &g).unwrap();
        let report = check_feasible(&t, &inst);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(t.depth[&3], 1);
        assert_eq!(t.depth[&5], 3);
    }
}
