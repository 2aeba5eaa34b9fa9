//! Exhaustive optimum for tiny instances.
//!
//! Every subset of optional (non-terminal) vertices is tried, smallest first.
//! For each, spanning trees of the induced subgraph are enumerated by
//! include/exclude branching over edges in ascending cost order, pruned by a
//! running cost bound and by the depths already fixed in the root's component.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Cost, Edge, Vertex};
use crate::instance::Instance;
use crate::tree::SteinerTree;

pub const DEFAULT_VERTEX_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Optimal {
        cost: Cost,
        tree: SteinerTree,
    },
    /// No tree spans the root and terminals within the hop limit.
    Infeasible,
}

impl ExactOutcome {
    pub fn cost(&self) -> Option<Cost> {
        match self {
            ExactOutcome::Optimal { cost, .. } => Some(*cost),
            ExactOutcome::Infeasible => None,
        }
    }
}

pub fn exact_hcst(instance: &Instance, vertex_cap: usize) -> Result<ExactOutcome> {
    let graph = instance.graph();
    if graph.vertex_count() > vertex_cap {
        return Err(Error::TooLarge { vertices: graph.vertex_count(), cap: vertex_cap });
    }
    let required: Vec<Vertex> = instance.required().collect();
    let optional: Vec<Vertex> =
        graph.vertices().filter(|v| *v != instance.root() && !instance.is_terminal(*v)).collect();

    let mut masks: Vec<u32> = (0..1u32 << optional.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));

    let mut search = Search { best_cost: Cost::MAX, best: None, hop: instance.hop_limit() };
    for mask in masks {
        let mut members = required.clone();
        members.extend(optional.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v));
        search.subset(instance, &members);
    }

    Ok(match search.best {
        Some(edges) => {
            ExactOutcome::Optimal { cost: search.best_cost, tree: SteinerTree::from_parts(edges, instance.root()) }
        }
        None => ExactOutcome::Infeasible,
    })
}

struct Search {
    best_cost: Cost,
    best: Option<Vec<Edge>>,
    hop: usize,
}

/// Spanning-tree enumeration over one induced subgraph. Vertex 0 is the root.
struct Subset<'a> {
    members: &'a [Vertex],
    edges: Vec<(usize, usize, Cost)>,
    /// `prefix[i]` is the cost of the first `i` edges.
    prefix: Vec<Cost>,
}

fn find(uf: &mut [usize], mut v: usize) -> usize {
    while uf[v] != v {
        uf[v] = uf[uf[v]];
        v = uf[v];
    }
    v
}

fn components(uf: &mut [usize]) -> usize {
    (0..uf.len()).filter(|&v| find(uf, v) == v).count()
}

impl Search {
    fn subset(&mut self, instance: &Instance, members: &[Vertex]) {
        let graph = instance.graph();
        let local = |v: Vertex| members.iter().position(|&m| m == v);
        let mut edges = Vec::new();
        for (i, &a) in members.iter().enumerate() {
            for n in graph.neighbors(a) {
                if let Some(j) = local(n.vertex) {
                    if i < j {
                        edges.push((i, j, n.cost));
                    }
                }
            }
        }
        edges.sort_by_key(|&(a, b, c)| (c, a, b));
        let k = members.len();
        if edges.len() + 1 < k {
            return;
        }
        // Induced hop distances bound every spanning tree's depths from below.
        let mut dist = vec![usize::MAX; k];
        dist[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &(a, b, _) in &edges {
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist.iter().any(|&d| d > self.hop) {
            return;
        }
        let mut prefix = vec![0];
        for &(_, _, c) in &edges {
            prefix.push(prefix.last().unwrap() + c);
        }
        let sub = Subset { members, edges, prefix };
        let uf: Vec<usize> = (0..k).collect();
        self.branch(&sub, 0, &mut Vec::new(), uf, 0);
    }

    fn branch(&mut self, sub: &Subset, i: usize, chosen: &mut Vec<usize>, uf: Vec<usize>, cost: Cost) {
        let need = sub.members.len() - 1 - chosen.len();
        if need == 0 {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = Some(
                    chosen
                        .iter()
                        .map(|&e| {
                            let (a, b, c) = sub.edges[e];
                            Edge::new(sub.members[a], sub.members[b], c)
                        })
                        .collect(),
                );
            }
            return;
        }
        if sub.edges.len() - i < need {
            return;
        }
        if cost + (sub.prefix[i + need] - sub.prefix[i]) >= self.best_cost {
            return;
        }
        let (a, b, c) = sub.edges[i];

        let mut with = uf.clone();
        let (ra, rb) = (find(&mut with, a), find(&mut with, b));
        if ra != rb {
            with[ra] = rb;
            chosen.push(i);
            if self.root_depths_ok(sub, chosen) {
                self.branch(sub, i + 1, chosen, with, cost + c);
            }
            chosen.pop();
        }

        let mut rest = uf.clone();
        for &(x, y, _) in &sub.edges[i + 1..] {
            let (rx, ry) = (find(&mut rest, x), find(&mut rest, y));
            if rx != ry {
                rest[rx] = ry;
            }
        }
        if components(&mut rest) == 1 {
            self.branch(sub, i + 1, chosen, uf, cost);
        }
    }

    /// Depths inside the root's component never change once edges join it.
    fn root_depths_ok(&self, sub: &Subset, chosen: &[usize]) -> bool {
        let k = sub.members.len();
        let mut depth = vec![usize::MAX; k];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &e in chosen {
                let (a, b, _) = sub.edges[e];
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    if depth[w] > self.hop {
                        return false;
                    }
                    queue.push_back(w);
                }
            }
        }
        true
    }
}
