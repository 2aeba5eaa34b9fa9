use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Cost, Edge, Vertex};
use crate::instance::Instance;

/// A rooted tree solution. Edges are kept sorted for deterministic output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinerTree {
    pub edges: Vec<Edge>,
    pub vertices: BTreeSet<Vertex>,
    pub total_cost: Cost,
    pub depth: BTreeMap<Vertex, usize>,
}

impl SteinerTree {
    /// Assembles a tree from raw parts without checking structure; depths are
    /// whatever a breadth-first search from `root` reaches. Use
    /// [`crate::validation::check_feasible`] to judge the result.
    pub fn from_parts(edges: impl IntoIterator<Item = Edge>, root: Vertex) -> Self {
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        let mut vertices = BTreeSet::from([root]);
        for e in &edges {
            vertices.insert(e.u);
            vertices.insert(e.v);
        }
        let total_cost = edges.iter().map(|e| e.cost).sum();
        let depth = bfs_depths(&edges, root);
        SteinerTree { edges, vertices, total_cost, depth }
    }

    pub fn max_depth(&self) -> usize {
        self.depth.values().copied().max().unwrap_or(0)
    }
}

pub(crate) fn bfs_depths(edges: &[Edge], root: Vertex) -> BTreeMap<Vertex, usize> {
    let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in edges {
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    let mut depth = BTreeMap::from([(root, 0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = depth[&v];
        for &w in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if let std::collections::btree_map::Entry::Vacant(slot) = depth.entry(w) {
                slot.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    depth
}

/// Checks that `edges` form a tree containing the root and every terminal,
/// and fills in cost and depths.
pub fn tree_cost_and_depths(edges: &[Edge], instance: &Instance) -> Result<SteinerTree> {
    let tree = SteinerTree::from_parts(edges.iter().copied(), instance.root());
    let mut unique = tree.edges.clone();
    unique.dedup_by_key(|e| (e.u, e.v));
    if unique.len() != tree.edges.len() {
        return Err(Error::Structure("repeated edge".into()));
    }
    if tree.depth.len() != tree.vertices.len() {
        let stray = tree.vertices.iter().find(|v| !tree.depth.contains_key(v)).copied();
        return Err(Error::Structure(format!("vertex {} is not connected to the root", stray.unwrap_or_default())));
    }
    if tree.edges.len() + 1 != tree.vertices.len() {
        return Err(Error::Structure(format!(
            "{} edges on {} vertices contain a cycle",
            tree.edges.len(),
            tree.vertices.len()
        )));
    }
    if let Some(t) = instance.terminals().iter().find(|t| !tree.vertices.contains(t)) {
        return Err(Error::Structure(format!("terminal {t} is missing")));
    }
    Ok(tree)
}

/// Repeatedly strips degree-one vertices that are neither the root nor a
/// terminal.
pub fn prune_non_terminal_leaves(edges: &[Edge], instance: &Instance) -> Result<SteinerTree> {
    let tree = tree_cost_and_depths(edges, instance)?;
    let kept = strip_leaves(&tree.edges, |v| v == instance.root() || instance.is_terminal(v));
    if kept.len() == tree.edges.len() {
        return Ok(tree);
    }
    tree_cost_and_depths(&kept, instance)
}

/// Removes leaves for which `keep` is false until none remain.
pub(crate) fn strip_leaves(edges: &[Edge], keep: impl Fn(Vertex) -> bool) -> Vec<Edge> {
    let mut incident: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        incident.entry(e.u).or_default().push(i);
        incident.entry(e.v).or_default().push(i);
    }
    let mut degree: BTreeMap<Vertex, usize> = incident.iter().map(|(&v, es)| (v, es.len())).collect();
    let mut alive = vec![true; edges.len()];
    let mut queue: VecDeque<Vertex> = degree.iter().filter(|&(&v, &d)| d == 1 && !keep(v)).map(|(&v, _)| v).collect();
    while let Some(v) = queue.pop_front() {
        if degree[&v] != 1 {
            continue;
        }
        let i = incident[&v].iter().copied().find(|&i| alive[i]).expect("leaf has a live edge");
        alive[i] = false;
        *degree.get_mut(&v).unwrap() = 0;
        let w = edges[i].other(v);
        let d = degree.get_mut(&w).unwrap();
        *d -= 1;
        if *d == 1 && !keep(w) {
            queue.push_back(w);
        }
    }
    edges.iter().zip(alive).filter(|(_, a)| *a).map(|(e, _)| *e).collect()
}
