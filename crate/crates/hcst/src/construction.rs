//! Phase-one growth: starting from the root, repeatedly attach the cheapest
//! hop-feasible path to a terminal not yet reached, Prim-style, recording each
//! vertex's depth (its U label) and the order in which terminals entered
//! (their itr label). The constructive baseline keeps that grown tree.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Cost, Edge, Vertex};
use crate::hop_paths::{hop_limited_sssp, Path, VertexMask};
use crate::instance::Instance;
use crate::tree::{prune_non_terminal_leaves, SteinerTree};

#[derive(Clone, Debug)]
pub struct GrowthState {
    pub g_vertices: BTreeSet<Vertex>,
    pub g_edges: Vec<Edge>,
    /// Hop depth of every grown vertex.
    pub u_label: BTreeMap<Vertex, usize>,
    /// Entry order of every terminal, starting at 1.
    pub itr_label: BTreeMap<Vertex, usize>,
    /// For each terminal, the added path from its attachment vertex up to and
    /// including the terminal.
    pub g_path: BTreeMap<Vertex, Path>,
    /// For each terminal, the part of its added path after the previous
    /// terminal on that path (or after the attachment vertex). Segments
    /// partition `g_edges`.
    pub segment: BTreeMap<Vertex, Path>,
    /// Added paths in order.
    pub attach_order: Vec<Path>,
}

impl GrowthState {
    pub fn u(&self, v: Vertex) -> Option<usize> {
        self.u_label.get(&v).copied()
    }

    pub fn itr(&self, terminal: Vertex) -> Option<usize> {
        self.itr_label.get(&terminal).copied()
    }

    pub fn total_cost(&self) -> Cost {
        self.g_edges.iter().map(|e| e.cost).sum()
    }

    /// Terminals sorted by descending entry order.
    pub fn terminals_by_itr_desc(&self) -> Vec<Vertex> {
        let mut out: Vec<_> = self.itr_label.iter().map(|(&v, &i)| (i, v)).collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out.into_iter().map(|(_, v)| v).collect()
    }

    /// The root-to-`v` path inside the grown tree.
    pub fn root_path(&self, v: Vertex) -> Option<Vec<Vertex>> {
        let mut depth = self.u(v)?;
        let mut out = vec![v];
        let mut cur = v;
        while depth > 0 {
            let parent = self
                .g_edges
                .iter()
                .filter(|e| e.u == cur || e.v == cur)
                .map(|e| e.other(cur))
                .find(|&w| self.u(w) == Some(depth - 1))?;
            out.push(parent);
            cur = parent;
            depth -= 1;
        }
        out.reverse();
        Some(out)
    }
}

pub fn phase1_grow(instance: &Instance) -> Result<GrowthState> {
    let graph = instance.graph();
    let hop = instance.hop_limit();
    let root = instance.root();
    let mut in_g = VertexMask::new(graph.vertex_count());
    in_g.insert(root);
    let mut state = GrowthState {
        g_vertices: BTreeSet::from([root]),
        g_edges: Vec::new(),
        u_label: BTreeMap::from([(root, 0)]),
        itr_label: BTreeMap::new(),
        g_path: BTreeMap::new(),
        segment: BTreeMap::new(),
        attach_order: Vec::new(),
    };
    let mut remaining: BTreeSet<Vertex> = instance.terminals().clone();

    while let Some(&first_remaining) = remaining.first() {
        let sources: Vec<_> = state.u_label.iter().map(|(&v, &u)| (v, u)).collect();
        let table = hop_limited_sssp(graph, &sources, hop, &in_g);
        let (_, layer, terminal) = remaining
            .iter()
            .filter_map(|&t| Some((table.dist(t, hop)?, table.best_layer(t, hop)?, t)))
            .min()
            .ok_or(Error::Infeasible { terminal: first_remaining })?;
        let path = table.extract_path(terminal, layer)?;

        let base = state.u_label[&path.first()];
        let mut segment_start = 0;
        for (i, (a, b)) in path.steps().enumerate() {
            let pos = i + 1;
            let cost = graph.edge_cost(a, b).expect("path edges exist");
            state.g_edges.push(Edge::new(a, b, cost));
            state.g_vertices.insert(b);
            state.u_label.insert(b, base + pos);
            in_g.insert(b);
            if remaining.remove(&b) {
                let itr = state.itr_label.len() + 1;
                state.itr_label.insert(b, itr);
                state.g_path.insert(b, sub_path(instance, &path, 0, pos));
                state.segment.insert(b, sub_path(instance, &path, segment_start, pos));
                segment_start = pos;
            }
        }
        state.attach_order.push(path);
    }
    Ok(state)
}

fn sub_path(instance: &Instance, path: &Path, from: usize, to: usize) -> Path {
    let vertices = path.vertices[from..=to].to_vec();
    let cost = vertices.windows(2).map(|w| instance.graph().edge_cost(w[0], w[1]).expect("path edges exist")).sum();
    Path { vertices, cost, start_layer: path.start_layer + from }
}

/// The constructive baseline: the phase-one tree with non-terminal leaves
/// pruned. Depths are the U labels.
pub fn voss_baseline(instance: &Instance) -> Result<SteinerTree> {
    let growth = phase1_grow(instance)?;
    voss_from_growth(instance, &growth)
}

pub fn voss_from_growth(instance: &Instance, growth: &GrowthState) -> Result<SteinerTree> {
    prune_non_terminal_leaves(&growth.g_edges, instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{load_fixture, vertex, Fixture, ROOT};
    use crate::graph::Graph;
    use std::collections::VecDeque;

    fn labels(of: &BTreeMap<Vertex, usize>) -> Vec<(String, usize)> {
        of.iter().map(|(&v, &l)| (crate::fixtures::label(v), l)).collect()
    }

    #[test]
    fn fig1_u_labels() {
        let f = load_fixture(Fixture::Fig1);
        let g = phase1_grow(&f).unwrap();
        let expect = [(ROOT, 0), (vertex(1), 1), (vertex(2), 1), (vertex(3), 2), (vertex(4), 2), (vertex(5), 3)];
        assert_eq!(g.u_label, BTreeMap::from(expect));
        assert_eq!(g.attach_order[0].vertices, vec![ROOT, vertex(2), vertex(4), vertex(5)]);
        assert_eq!(g.attach_order[0].cost, 7);
        assert_eq!(g.attach_order[1].vertices, vec![ROOT, vertex(1), vertex(3)]);
        assert_eq!(g.attach_order[1].cost, 8);
    }

    #[test]
    fn fig3_itr_labels() {
        let f = load_fixture(Fixture::Fig3);
        let g = phase1_grow(&f).unwrap();
        assert_eq!(labels(&g.itr_label), vec![("2".into(), 1), ("5".into(), 3), ("7".into(), 2)]);
        assert_eq!(g.u(vertex(5)), Some(2));
        assert_eq!(g.u(vertex(2)), Some(2));
        assert_eq!(g.u(vertex(7)), Some(5));
        let costs: Vec<_> = g.attach_order.iter().map(|p| p.cost).collect();
        assert_eq!(costs, vec![8, 6, 17]);
        assert_eq!(g.segment[&vertex(7)].vertices, vec![vertex(2), vertex(4), vertex(6), vertex(7)]);
    }

    #[test]
    fn single_adjacent_terminal() {
        let graph = Graph::new(3, [(1, 2, 4), (2, 3, 1)]).unwrap();
        let inst = Instance::new(graph, 1, [2], 1).unwrap();
        let g = phase1_grow(&inst).unwrap();
        assert_eq!(g.g_vertices, BTreeSet::from([1, 2]));
        assert_eq!(g.g_edges, vec![Edge::new(1, 2, 4)]);
        assert_eq!(g.u(2), Some(1));
        assert_eq!(g.itr(2), Some(1));
    }

    #[test]
    fn each_added_path_reaches_one_new_terminal() {
        // A terminal inside a cheapest path would itself be at least as cheap
        // and strictly shallower, so it is always taken first.
        let graph = Graph::new(5, [(1, 2, 0), (2, 3, 0), (3, 4, 5), (1, 5, 2)]).unwrap();
        let inst = Instance::new(graph, 1, [3, 4, 5], 3).unwrap();
        let g = phase1_grow(&inst).unwrap();
        let ends: Vec<_> = g.attach_order.iter().map(|p| p.last()).collect();
        assert_eq!(ends, vec![3, 5, 4]);
        assert_eq!(g.attach_order[2].vertices, vec![3, 4]);
        assert_eq!(g.segment[&4].vertices, vec![3, 4]);
        for p in &g.attach_order {
            let inside = p.vertices[1..].iter().filter(|v| inst.is_terminal(**v)).count();
            assert_eq!(inside, 1);
        }
    }

    #[test]
    fn infeasible_terminal_is_named() {
        let graph = Graph::new(4, [(1, 2, 1), (2, 3, 1)]).unwrap();
        let inst = Instance::new(graph, 1, [3, 4], 3).unwrap();
        assert!(matches!(phase1_grow(&inst), Err(Error::Infeasible { terminal: 4 })));
        let graph = Graph::new(3, [(1, 2, 1), (2, 3, 1)]).unwrap();
        let inst = Instance::new(graph, 1, [3], 1).unwrap();
        assert!(matches!(phase1_grow(&inst), Err(Error::Infeasible { terminal: 3 })));
    }

    #[test]
    fn baseline_costs_on_fixtures() {
        assert_eq!(voss_baseline(&load_fixture(Fixture::Fig1)).unwrap().total_cost, 15);
        assert_eq!(voss_baseline(&load_fixture(Fixture::Fig2)).unwrap().total_cost, 19);
        assert_eq!(voss_baseline(&load_fixture(Fixture::Fig3)).unwrap().total_cost, 31);
    }

    #[test]
    fn fig2_phase1_is_already_pruned() {
        let f = load_fixture(Fixture::Fig2);
        let g = phase1_grow(&f).unwrap();
        assert_eq!(g.total_cost(), 19);
        let t = prune_non_terminal_leaves(&g.g_edges, &f).unwrap();
        assert_eq!(t.edges.len(), g.g_edges.len());
        assert_eq!(t.total_cost, 19);
    }

    #[test]
    fn u_labels_are_tree_depths() {
        for fixture in Fixture::ALL {
            let inst = load_fixture(fixture);
            let g = phase1_grow(&inst).unwrap();
            assert_eq!(g.g_edges.len() + 1, g.g_vertices.len());
            let mut depth = BTreeMap::from([(ROOT, 0usize)]);
            let mut queue = VecDeque::from([ROOT]);
            while let Some(v) = queue.pop_front() {
                for e in g.g_edges.iter().filter(|e| e.u == v || e.v == v) {
                    let w = e.other(v);
                    if !depth.contains_key(&w) {
                        depth.insert(w, depth[&v] + 1);
                        queue.push_back(w);
                    }
                }
            }
            assert_eq!(depth, g.u_label);
            assert!(g.u_label.values().all(|&u| u <= inst.hop_limit()));
            let mut itrs: Vec<_> = g.itr_label.values().copied().collect();
            itrs.sort_unstable();
            assert_eq!(itrs, (1..=inst.terminals().len()).collect::<Vec<_>>());
            for t in inst.terminals() {
                assert_eq!(g.root_path(*t).unwrap().len(), g.u(*t).unwrap() + 1);
            }
        }
    }
}
