//! Hop-bounded shortest paths by layered Bellman-Ford relaxation.
//!
//! Layer `h` of a [`HopTable`] holds, for every vertex, the cheapest cost of
//! reaching it at depth at most `h`, where a path leaving source `s` starts at
//! that source's own layer. Several sources may start at different layers,
//! which is how a partial tree is grown: each tree vertex is a source seeded at
//! its current depth.
//!
//! Ties resolve toward lower cost, then the lower layer, then the smaller
//! predecessor id. Because costs are non-negative and an entry only changes on
//! strict improvement, every reconstructed path is simple.

use crate::error::{Error, Result};
use crate::graph::{Cost, Graph, Vertex};

pub const INFINITY: Cost = Cost::MAX;

/// Dense membership set over vertex ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMask {
    bits: Vec<bool>,
}

impl VertexMask {
    pub fn new(vertex_count: usize) -> Self {
        VertexMask { bits: vec![false; vertex_count + 1] }
    }

    pub fn from_vertices(vertex_count: usize, vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut mask = VertexMask::new(vertex_count);
        for v in vertices {
            mask.insert(v);
        }
        mask
    }

    pub fn insert(&mut self, v: Vertex) {
        self.bits[v] = true;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.bits[v] = false;
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits.get(v).copied().unwrap_or(false)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.bits.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<Vertex>,
    pub cost: Cost,
    /// Layer of the first vertex.
    pub start_layer: usize,
}

impl Path {
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().expect("paths are non-empty")
    }

    pub fn end_layer(&self) -> usize {
        self.start_layer + self.hops()
    }

    /// Consecutive vertex pairs.
    pub fn steps(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Unreached,
    /// The vertex is a source starting at this layer.
    Source,
    /// Same entry as the layer below.
    Carry,
    /// Reached from `from` one layer down; `start` means from `from`'s own
    /// source entry rather than through it.
    Edge {
        from: Vertex,
        start: bool,
    },
}

#[derive(Clone, Debug)]
pub struct HopTable {
    hop_limit: usize,
    width: usize,
    dist: Vec<Cost>,
    step: Vec<Step>,
    sources: Vec<(Vertex, usize)>,
}

/// Builds the layered table for `sources` up to `hop_limit`.
///
/// Vertices in `blocked` never appear strictly inside a path. They can still
/// be endpoints, and a blocked source can start a path. Runs in
/// O(|E| · hop_limit).
pub fn hop_limited_sssp(
    graph: &Graph,
    sources: &[(Vertex, usize)],
    hop_limit: usize,
    blocked: &VertexMask,
) -> HopTable {
    let width = graph.vertex_count() + 1;
    let layers = hop_limit + 1;
    let mut dist = vec![INFINITY; width * layers];
    let mut step = vec![Step::Unreached; width * layers];

    let mut start_layer: Vec<Option<usize>> = vec![None; width];
    for &(s, layer) in sources {
        debug_assert!(layer <= hop_limit, "source layer {layer} beyond hop limit {hop_limit}");
        if layer <= hop_limit {
            let slot = &mut start_layer[s];
            *slot = Some(slot.map_or(layer, |l| l.min(layer)));
        }
    }
    let mut starts_at: Vec<Vec<Vertex>> = vec![Vec::new(); layers];
    for (v, layer) in start_layer.iter().enumerate() {
        if let Some(l) = layer {
            starts_at[*l].push(v);
        }
    }
    let mut sources: Vec<(Vertex, usize)> =
        start_layer.iter().enumerate().filter_map(|(v, l)| l.map(|l| (v, l))).collect();
    sources.sort_unstable();

    for &s in &starts_at[0] {
        dist[s] = 0;
        step[s] = Step::Source;
    }
    // Vertices whose entry improved on the previous layer; only they can
    // improve anything on the next.
    let mut active: Vec<Vertex> = starts_at[0].clone();
    for h in 1..layers {
        let (below, here) = dist.split_at_mut(h * width);
        let below = &below[(h - 1) * width..];
        let here = &mut here[..width];
        let steps = &mut step[h * width..(h + 1) * width];
        for v in 0..width {
            here[v] = below[v];
            if below[v] != INFINITY {
                steps[v] = Step::Carry;
            }
        }
        let mut changed = vec![false; width];
        for &s in &starts_at[h] {
            if here[s] > 0 {
                here[s] = 0;
                steps[s] = Step::Source;
                changed[s] = true;
            }
        }
        active.sort_unstable();
        active.dedup();
        for &u in &active {
            let (base, start) = if blocked.contains(u) {
                if start_layer[u] != Some(h - 1) {
                    continue;
                }
                (0, true)
            } else {
                (below[u], false)
            };
            if base == INFINITY {
                continue;
            }
            for n in graph.neighbors(u) {
                let cand = base.saturating_add(n.cost);
                let v = n.vertex;
                if cand < here[v] {
                    here[v] = cand;
                    steps[v] = Step::Edge { from: u, start };
                    changed[v] = true;
                }
            }
        }
        active.clear();
        active.extend((0..width).filter(|&v| changed[v]));
        // A blocked source starting here only relaxes on the next round.
        for &s in &starts_at[h] {
            if blocked.contains(s) {
                active.push(s);
            }
        }
    }

    HopTable { hop_limit, width, dist, step, sources }
}

impl HopTable {
    pub fn hop_limit(&self) -> usize {
        self.hop_limit
    }

    pub fn sources(&self) -> &[(Vertex, usize)] {
        &self.sources
    }

    fn at(&self, v: Vertex, layer: usize) -> usize {
        assert!(layer <= self.hop_limit, "layer {layer} beyond hop limit {}", self.hop_limit);
        layer * self.width + v
    }

    /// Cheapest cost of reaching `v` at layer at most `layer`, `None` if
    /// unreachable.
    pub fn dist(&self, v: Vertex, layer: usize) -> Option<Cost> {
        let d = self.dist[self.at(v, layer)];
        (d != INFINITY).then_some(d)
    }

    /// Raw entry, [`INFINITY`] when unreachable.
    pub fn raw_dist(&self, v: Vertex, layer: usize) -> Cost {
        self.dist[self.at(v, layer)]
    }

    /// Lowest layer at which `dist(v, layer)` is attained.
    pub fn best_layer(&self, v: Vertex, layer: usize) -> Option<usize> {
        let mut h = layer;
        loop {
            match self.step[self.at(v, h)] {
                Step::Unreached => return None,
                Step::Carry => h -= 1,
                Step::Source | Step::Edge { .. } => return Some(h),
            }
        }
    }

    /// Reconstructs an optimal path for `dist(target, layer)`.
    pub fn extract_path(&self, target: Vertex, layer: usize) -> Result<Path> {
        if target >= self.width || self.dist(target, layer).is_none() {
            return Err(Error::NotReachable { target, layer });
        }
        let cost = self.dist[self.at(target, layer)];
        let mut rev = vec![target];
        let (mut v, mut h) = (target, layer);
        loop {
            match self.step[self.at(v, h)] {
                Step::Unreached => unreachable!("finite entries have predecessors"),
                Step::Source => break,
                Step::Carry => h -= 1,
                Step::Edge { from, start } => {
                    rev.push(from);
                    v = from;
                    h -= 1;
                    if start {
                        break;
                    }
                }
            }
        }
        rev.reverse();
        Ok(Path { vertices: rev, cost, start_layer: h })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{load_fixture, vertex, Fixture, ROOT};
    use proptest::prelude::*;

    /// Exhaustive oracle: cheapest simple path with interiors outside
    /// `blocked`, per (target, layer), by depth-first enumeration.
    fn brute_force(
        graph: &Graph,
        sources: &[(Vertex, usize)],
        hop_limit: usize,
        blocked: &VertexMask,
    ) -> Vec<Vec<Cost>> {
        let n = graph.vertex_count();
        let mut best = vec![vec![INFINITY; hop_limit + 1]; n + 1];
        fn walk(
            graph: &Graph,
            blocked: &VertexMask,
            hop_limit: usize,
            path: &mut Vec<Vertex>,
            layer: usize,
            cost: Cost,
            best: &mut Vec<Vec<Cost>>,
        ) {
            let v = *path.last().unwrap();
            for b in &mut best[v][layer..=hop_limit] {
                *b = (*b).min(cost);
            }
            if layer == hop_limit || (path.len() > 1 && blocked.contains(v)) {
                return;
            }
            for nb in graph.neighbors(v) {
                if path.contains(&nb.vertex) {
                    continue;
                }
                path.push(nb.vertex);
                walk(graph, blocked, hop_limit, path, layer + 1, cost + nb.cost, best);
                path.pop();
            }
        }
        for &(s, l) in sources {
            walk(graph, blocked, hop_limit, &mut vec![s], l, 0, &mut best);
        }
        best
    }

    fn check_path(graph: &Graph, table: &HopTable, blocked: &VertexMask, target: Vertex, layer: usize) {
        let p = table.extract_path(target, layer).unwrap();
        assert_eq!(p.last(), target);
        assert_eq!(p.cost, table.raw_dist(target, layer));
        assert!(p.end_layer() <= layer);
        assert!(table.sources().contains(&(p.first(), p.start_layer)));
        let sum: Cost = p.steps().map(|(a, b)| graph.edge_cost(a, b).unwrap()).sum();
        assert_eq!(sum, p.cost);
        let mut seen = p.vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), p.vertices.len(), "path {:?} repeats a vertex", p.vertices);
        for &v in p.vertices.iter().skip(1).take(p.vertices.len().saturating_sub(2)) {
            assert!(!blocked.contains(v), "path {:?} passes through blocked {v}", p.vertices);
        }
    }

    #[test]
    fn fig1_from_root() {
        let f = load_fixture(Fixture::Fig1);
        let g = f.graph();
        let blocked = VertexMask::new(g.vertex_count());
        let t = hop_limited_sssp(g, &[(ROOT, 0)], 3, &blocked);
        let oracle = brute_force(g, &[(ROOT, 0)], 3, &blocked);
        assert_eq!(oracle[vertex(5)][3], 7);
        assert_eq!(oracle[vertex(3)][2], 8);
        assert_eq!(oracle[vertex(5)][2], INFINITY);
        assert_eq!(t.dist(vertex(5), 3), Some(7));
        assert_eq!(t.dist(vertex(3), 2), Some(8));
        assert_eq!(t.dist(vertex(5), 2), None);
        assert_eq!(t.dist(ROOT, 0), Some(0));

        let p = t.extract_path(vertex(5), 3).unwrap();
        assert_eq!(p.vertices, vec![ROOT, vertex(2), vertex(4), vertex(5)]);
        assert_eq!(p.cost, 7);

        let p = t.extract_path(ROOT, 0).unwrap();
        assert_eq!(p.vertices, vec![ROOT]);
        assert_eq!(p.cost, 0);

        assert!(matches!(t.extract_path(vertex(5), 2), Err(Error::NotReachable { .. })));
    }

    #[test]
    fn fig3_from_root() {
        let f = load_fixture(Fixture::Fig3);
        let blocked = VertexMask::new(f.graph().vertex_count());
        let t = hop_limited_sssp(f.graph(), &[(ROOT, 0)], 5, &blocked);
        let p = t.extract_path(vertex(5), 5).unwrap();
        assert_eq!(p.vertices, vec![ROOT, vertex(3), vertex(5)]);
        assert_eq!(p.cost, 17);
    }

    #[test]
    fn blocked_source_is_not_passed_through() {
        // 1 -0- 2 -1- 3, with 2 a blocked source starting deeper than its
        // zero-cost arrival from 1.
        let g = Graph::new(3, [(1, 2, 0), (2, 3, 1)]).unwrap();
        let blocked = VertexMask::from_vertices(3, [1, 2]);
        let t = hop_limited_sssp(&g, &[(1, 0), (2, 2)], 3, &blocked);
        let p = t.extract_path(3, 3).unwrap();
        assert_eq!(p.vertices, vec![2, 3]);
        assert_eq!(p.start_layer, 2);
        assert_eq!(t.best_layer(3, 3), Some(3));
        assert_eq!(t.dist(3, 2), None);
    }

    #[test]
    fn zero_cost_ties_prefer_fewer_hops() {
        let g = Graph::new(4, [(1, 2, 0), (2, 3, 0), (1, 3, 0), (3, 4, 0)]).unwrap();
        let t = hop_limited_sssp(&g, &[(1, 0)], 3, &VertexMask::new(4));
        assert_eq!(t.extract_path(4, 3).unwrap().vertices, vec![1, 3, 4]);
        assert_eq!(t.best_layer(4, 3), Some(2));
    }

    fn small_graph() -> impl Strategy<Value = (Graph, Vec<(Vertex, usize)>, usize, VertexMask)> {
        (3usize..=8, 1usize..=5).prop_flat_map(|(n, h)| {
            let edges = prop::collection::vec((1..=n, 1..=n, 0u64..15), 1..(n * 3));
            let sources = prop::collection::vec((1..=n, 0..=h), 1..4);
            let blocked = prop::collection::vec(any::<bool>(), n + 1);
            (Just(n), Just(h), edges, sources, blocked).prop_map(|(n, h, edges, sources, blocked)| {
                let edges: Vec<_> = edges.into_iter().filter(|(a, b, _)| a != b).collect();
                let g = Graph::new(n, edges).unwrap();
                let mut mask = VertexMask::new(n);
                for (v, b) in blocked.into_iter().enumerate().skip(1) {
                    if b {
                        mask.insert(v);
                    }
                }
                (g, sources, h, mask)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]

        #[test]
        fn matches_exhaustive_enumeration((g, sources, h, blocked) in small_graph()) {
            let table = hop_limited_sssp(&g, &sources, h, &blocked);
            let oracle = brute_force(&g, &sources, h, &blocked);
            for v in g.vertices() {
                for (layer, &expect) in oracle[v].iter().enumerate() {
                    prop_assert_eq!(table.raw_dist(v, layer), expect, "v={} layer={}", v, layer);
                    if layer < h {
                        prop_assert!(table.raw_dist(v, layer + 1) <= table.raw_dist(v, layer));
                    }
                    if expect != INFINITY {
                        check_path(&g, &table, &blocked, v, layer);
                    }
                }
            }
            for &(s, l) in table.sources() {
                prop_assert_eq!(table.dist(s, l), Some(0));
            }
        }
    }
}
