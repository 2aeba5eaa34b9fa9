//! Non-root-based insertion.
//!
//! Terminals are revisited in reverse phase-one entry order and joined into a
//! forest Kruskal-style. Each terminal either keeps its phase-one segment or
//! takes a cheaper path to any forest vertex `u` whose label satisfies
//! `label(u) + hops <= U(terminal)`, so labels only ever decrease toward the
//! root and the final tree respects the hop limit.
//!
//! Two rules keep the forest joinable into one tree:
//!
//! * Vertices of segments belonging to terminals not yet visited are off
//!   limits for detours. Those segments may still be needed intact.
//! * If another component already hangs from the inside of the current
//!   segment, the segment is kept down to the deepest such vertex and only the
//!   remainder competes with the detour.
//!
//! Every terminal therefore pays at most its segment's cost, so the result
//! never costs more than the phase-one tree.

use super::ensure_hop_feasible;
use crate::construction::GrowthState;
use crate::error::{Error, Result};
use crate::graph::{Cost, Edge, Graph, Vertex};
use crate::hop_paths::{hop_limited_sssp, Path, VertexMask};
use crate::instance::Instance;
use crate::tree::{tree_cost_and_depths, SteinerTree};

struct Forest {
    members: VertexMask,
    label: Vec<Option<usize>>,
    parent: Vec<Option<Vertex>>,
    edges: Vec<Edge>,
}

impl Forest {
    fn new(vertex_count: usize) -> Self {
        Forest {
            members: VertexMask::new(vertex_count),
            label: vec![None; vertex_count + 1],
            parent: vec![None; vertex_count + 1],
            edges: Vec::new(),
        }
    }

    fn contains(&self, v: Vertex) -> bool {
        self.members.contains(v)
    }

    fn insert(&mut self, v: Vertex, label: usize) {
        if !self.contains(v) {
            self.members.insert(v);
            self.label[v] = Some(label);
        }
    }

    fn top(&self, mut v: Vertex) -> Vertex {
        while let Some(p) = self.parent[v] {
            v = p;
        }
        v
    }

    fn link(&mut self, graph: &Graph, child: Vertex, parent: Vertex) {
        debug_assert!(self.parent[child].is_none(), "vertex {child} already has a parent");
        if self.parent[child].is_some() {
            return;
        }
        self.parent[child] = Some(parent);
        self.edges.push(Edge::new(child, parent, graph.edge_cost(child, parent).expect("path edges exist")));
    }

    /// Keeps a run of a phase-one segment, labelled with the U values.
    fn keep_segment(&mut self, graph: &Graph, growth: &GrowthState, run: &[Vertex]) {
        for &v in run {
            self.insert(v, growth.u(v).expect("segment vertices are grown"));
        }
        for w in run.windows(2) {
            self.link(graph, w[1], w[0]);
        }
    }

    /// Adds a detour from a forest vertex to the terminal at its end.
    fn take_detour(&mut self, graph: &Graph, path: &Path) {
        let base = self.label[path.first()].expect("detours start in the forest");
        for (i, &v) in path.vertices.iter().enumerate().skip(1) {
            self.insert(v, base + i);
        }
        for w in path.vertices.windows(2) {
            self.link(graph, w[1], w[0]);
        }
    }
}

fn run_cost(graph: &Graph, run: &[Vertex]) -> Cost {
    run.windows(2).map(|w| graph.edge_cost(w[0], w[1]).expect("segment edges exist")).sum()
}

pub fn nrbi(instance: &Instance, growth: &GrowthState) -> Result<SteinerTree> {
    let graph = instance.graph();
    let n = graph.vertex_count();
    let order = growth.terminals_by_itr_desc();
    if order.len() != instance.terminals().len() {
        return Err(Error::Argument("growth state does not cover the instance's terminals".into()));
    }

    // Smallest entry order among the segments through each vertex.
    let mut claimed_by = vec![usize::MAX; n + 1];
    for (t, seg) in &growth.segment {
        let itr = growth.itr(*t).expect("segments belong to terminals");
        for &v in &seg.vertices {
            claimed_by[v] = claimed_by[v].min(itr);
        }
    }

    let mut forest = Forest::new(n);
    forest.insert(instance.root(), 0);

    for x in order {
        let itr = growth.itr(x).expect("ordered terminals have itr labels");
        let budget = growth.u(x).expect("terminals are grown");
        let seg = &growth.segment[&x].vertices;
        let last = seg.len() - 1;

        let mut from = 0;
        if let Some(j) = (1..last).rev().find(|&i| forest.contains(seg[i])) {
            forest.keep_segment(graph, growth, &seg[..=j]);
            from = j;
        }
        if forest.parent[x].is_some() {
            continue;
        }
        let remainder = &seg[from..];
        let keep_cost = run_cost(graph, remainder);

        let own_top = forest.contains(x).then_some(x);
        let sources: Vec<(Vertex, usize)> = forest
            .members
            .iter()
            .filter(|&v| Some(forest.top(v)) != own_top)
            .filter_map(|v| forest.label[v].filter(|&l| l < budget).map(|l| (v, l)))
            .collect();
        let detour = if sources.is_empty() {
            None
        } else {
            let mut blocked = forest.members.clone();
            for v in graph.vertices() {
                if claimed_by[v] < itr {
                    blocked.insert(v);
                }
            }
            let table = hop_limited_sssp(graph, &sources, budget, &blocked);
            match table.dist(x, budget) {
                Some(cost) if cost < keep_cost => Some(table.extract_path(x, budget)?),
                _ => None,
            }
        };
        match detour {
            Some(path) => forest.take_detour(graph, &path),
            None => forest.keep_segment(graph, growth, remainder),
        }
    }

    let tree = tree_cost_and_depths(&forest.edges, instance)
        .map_err(|e| Error::Postcondition { message: e.to_string(), edges: forest.edges.clone() })?;
    ensure_hop_feasible(tree, instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::phase1_grow;
    use crate::fixtures::{load_fixture, vertex, Fixture, ROOT};
    use crate::validation::check_feasible;

    fn run(f: Fixture) -> SteinerTree {
        let inst = load_fixture(f);
        let g = phase1_grow(&inst).unwrap();
        let t = nrbi(&inst, &g).unwrap();
        assert!(check_feasible(&t, &inst).passed());
        t
    }

    fn e(inst: &Instance, a: Option<usize>, b: usize) -> Edge {
        let (a, b) = (a.map_or(ROOT, vertex), vertex(b));
        Edge::new(a, b, inst.graph().edge_cost(a, b).unwrap())
    }

    #[test]
    fn fig3_reaches_the_optimum() {
        let inst = load_fixture(Fixture::Fig3);
        let t = run(Fixture::Fig3);
        assert_eq!(t.total_cost, 30);
        let mut expect = vec![
            e(&inst, None, 3),
            e(&inst, Some(3), 5),
            e(&inst, Some(2), 4),
            e(&inst, Some(4), 6),
            e(&inst, Some(6), 7),
            e(&inst, Some(2), 3),
        ];
        expect.sort();
        assert_eq!(t.edges, expect);
        assert_eq!(t.max_depth(), 5);
    }

    #[test]
    fn fig1_switches_to_the_shortcut() {
        let inst = load_fixture(Fixture::Fig1);
        let t = run(Fixture::Fig1);
        assert_eq!(t.total_cost, 10);
        assert!(t.edges.contains(&e(&inst, Some(3), 5)));
    }

    #[test]
    fn fig2_respects_u_budget() {
        let inst = load_fixture(Fixture::Fig2);
        let t = run(Fixture::Fig2);
        assert_eq!(t.total_cost, 15);
        // 7-8 would put 8 below its U label of 3.
        assert!(!t.edges.contains(&e(&inst, Some(7), 8)));
        assert!(t.edges.contains(&e(&inst, Some(3), 6)));
    }

    /// t2's segment r-a-x-t2 is the anchor of t3's segment a-b-t3. The detour
    /// b-t2 is cheaper than a-x-t2, but taking it alone would strand the
    /// component {a, b, t3, t2} away from the root; r-a has to stay.
    #[test]
    fn component_hanging_inside_a_segment_stays_connected() {
        let (r, a, x, t2, b, t3) = (1, 2, 3, 4, 5, 6);
        let graph = Graph::new(6, [(r, a, 1), (a, x, 2), (x, t2, 2), (a, b, 2), (b, t2, 3), (b, t3, 3)]).unwrap();
        let inst = Instance::new(graph, r, [t2, t3], 3).unwrap();
        let g = phase1_grow(&inst).unwrap();
        assert_eq!(g.segment[&t2].vertices, vec![r, a, x, t2]);
        assert_eq!(g.segment[&t3].vertices, vec![a, b, t3]);
        assert_eq!(g.total_cost(), 10);
        let t = nrbi(&inst, &g).unwrap();
        let report = check_feasible(&t, &inst);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(t.total_cost, 9);
        assert!(t.edges.contains(&Edge::new(r, a, 1)));
        assert!(t.edges.contains(&Edge::new(b, t2, 3)));
    }
}
