use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::graph::Vertex;
use crate::instance::Instance;
use crate::tree::SteinerTree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub is_tree: bool,
    pub connected: bool,
    pub contains_root: bool,
    pub spans_terminals: bool,
    pub edges_in_graph: bool,
    pub cost_consistent: bool,
    pub max_depth: usize,
    pub hop_feasible: bool,
    pub violations: Vec<String>,
}

impl FeasibilityReport {
    pub fn passed(&self) -> bool {
        self.is_tree
            && self.connected
            && self.contains_root
            && self.spans_terminals
            && self.edges_in_graph
            && self.cost_consistent
            && self.hop_feasible
    }
}

/// Judges `tree` against the instance without trusting any of its derived
/// fields: structure, cost and depths are all recomputed from the edge list.
pub fn check_feasible(tree: &SteinerTree, instance: &Instance) -> FeasibilityReport {
    let graph = instance.graph();
    let root = instance.root();
    let mut violations = Vec::new();

    let mut edges_in_graph = true;
    for e in &tree.edges {
        match graph.edge_cost(e.u, e.v).filter(|_| graph.contains(e.u) && graph.contains(e.v)) {
            None => {
                edges_in_graph = false;
                violations.push(format!("edge {}-{} is not in the graph", e.u, e.v));
            }
            Some(c) if c != e.cost => {
                edges_in_graph = false;
                violations.push(format!("edge {}-{} costs {c} in the graph, not {}", e.u, e.v, e.cost));
            }
            Some(_) => {}
        }
    }

    let mut vertices: BTreeSet<Vertex> = tree.vertices.clone();
    for e in &tree.edges {
        vertices.insert(e.u);
        vertices.insert(e.v);
    }
    if vertices != tree.vertices {
        violations.push("vertex set omits edge endpoints".into());
    }
    let contains_root = tree.vertices.contains(&root);
    if !contains_root {
        violations.push(format!("root {root} is missing"));
    }
    vertices.insert(root);

    // Acyclicity by union-find over the listed edges.
    let mut parent: BTreeMap<Vertex, Vertex> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<Vertex, Vertex>, mut v: Vertex) -> Vertex {
        while parent[&v] != v {
            let up = parent[&parent[&v]];
            parent.insert(v, up);
            v = up;
        }
        v
    }
    let mut acyclic = true;
    for e in &tree.edges {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            acyclic = false;
            violations.push(format!("edge {}-{} closes a cycle", e.u, e.v));
        } else {
            parent.insert(a, b);
        }
    }

    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in &tree.edges {
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    let mut depth = BTreeMap::from([(root, 0usize)]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if !depth.contains_key(&w) {
                depth.insert(w, depth[&v] + 1);
                queue.push_back(w);
            }
        }
    }
    let unreached: Vec<_> = vertices.iter().filter(|v| !depth.contains_key(v)).collect();
    let connected = unreached.is_empty();
    if !connected {
        violations.push(format!("vertices {unreached:?} are not connected to the root"));
    }
    let is_tree = acyclic && tree.edges.len() + 1 == vertices.len();
    if acyclic && !is_tree {
        violations.push(format!("{} edges on {} vertices", tree.edges.len(), vertices.len()));
    }

    let missing: Vec<_> = instance.terminals().iter().filter(|t| !tree.vertices.contains(t)).collect();
    let spans_terminals = missing.is_empty();
    if !spans_terminals {
        violations.push(format!("terminals {missing:?} are missing"));
    }

    let max_depth = depth.values().copied().max().unwrap_or(0);
    let hop_feasible = max_depth <= instance.hop_limit();
    if !hop_feasible {
        let deep: Vec<_> = depth.iter().filter(|(_, &d)| d > instance.hop_limit()).map(|(v, _)| v).collect();
        violations.push(format!("vertices {deep:?} lie deeper than hop limit {}", instance.hop_limit()));
    }

    let recomputed: u64 = tree.edges.iter().map(|e| e.cost).sum();
    let mut cost_consistent = recomputed == tree.total_cost;
    if !cost_consistent {
        violations.push(format!("recorded cost {} but edges sum to {recomputed}", tree.total_cost));
    }
    if connected && tree.depth != depth {
        cost_consistent = false;
        violations.push("recorded depths disagree with the tree".into());
    }

    FeasibilityReport {
        is_tree,
        connected,
        contains_root,
        spans_terminals,
        edges_in_graph,
        cost_consistent,
        max_depth,
        hop_feasible,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::phase1_grow;
    use crate::fixtures::{load_fixture, vertex, Fixture, ROOT};
    use crate::graph::Edge;
    use crate::heuristics::minhig;

    #[test]
    fn fig1_minhig_passes() {
        let f = load_fixture(Fixture::Fig1);
        let t = minhig(&f, &phase1_grow(&f).unwrap()).unwrap();
        let r = check_feasible(&t, &f);
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.max_depth, 3);
    }

    #[test]
    fn missing_terminal_is_reported() {
        let f = load_fixture(Fixture::Fig1);
        let t = SteinerTree::from_parts(
            [Edge::new(ROOT, vertex(2), 3), Edge::new(vertex(2), vertex(4), 2), Edge::new(vertex(4), vertex(5), 2)],
            ROOT,
        );
        let r = check_feasible(&t, &f);
        assert!(!r.spans_terminals);
        assert!(r.is_tree && r.connected && r.hop_feasible);
        assert!(!r.passed());
    }

    #[test]
    fn depth_violation_is_reported() {
        let f = load_fixture(Fixture::Fig2);
        let t = maxhig_tree(&f);
        let lowered = f.with_terminals(f.terminals().iter().copied(), 3).unwrap();
        let r = check_feasible(&t, &lowered);
        assert!(!r.hop_feasible);
        assert_eq!(r.max_depth, 4);
        assert!(r.spans_terminals && r.is_tree);
    }

    fn maxhig_tree(f: &Instance) -> SteinerTree {
        crate::heuristics::maxhig(f, &phase1_grow(f).unwrap()).unwrap()
    }

    #[test]
    fn foreign_edges_cycles_and_bad_costs() {
        let f = load_fixture(Fixture::Fig1);
        let mut t = SteinerTree::from_parts([Edge::new(ROOT, vertex(5), 1), Edge::new(ROOT, vertex(3), 1)], ROOT);
        let r = check_feasible(&t, &f);
        assert!(!r.edges_in_graph);
        t.total_cost += 1;
        assert!(!check_feasible(&t, &f).cost_consistent);

        let cyc = SteinerTree::from_parts(
            [
                Edge::new(ROOT, vertex(1), 4),
                Edge::new(vertex(1), vertex(3), 4),
                Edge::new(vertex(3), vertex(5), 2),
                Edge::new(vertex(5), vertex(4), 2),
                Edge::new(vertex(4), vertex(2), 2),
                Edge::new(vertex(2), ROOT, 3),
            ],
            ROOT,
        );
        let r = check_feasible(&cyc, &f);
        assert!(!r.is_tree);
        assert!(!r.passed());
    }
}
