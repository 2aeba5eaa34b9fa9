//! Undirected graphs with non-negative integer edge costs, and the OR-Library
//! Steiner text format.
//!
//! Vertex ids are 1-based. Internally every per-vertex table is sized
//! `vertex_count + 1` and slot 0 is left unused, so ids index directly.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Cost = u64;

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub cost: Cost,
}

impl Edge {
    pub fn new(a: Vertex, b: Vertex, cost: Cost) -> Self {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, cost }
    }

    pub fn other(&self, end: Vertex) -> Vertex {
        if end == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub vertex: Vertex,
    pub cost: Cost,
    pub edge: usize,
}

/// Record of two parallel edges merged into one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DuplicateEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub kept: Cost,
    pub dropped: Cost,
}

#[derive(Clone, Debug)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Neighbor>>,
    index: HashMap<(Vertex, Vertex), usize>,
    collapsed: Vec<DuplicateEdge>,
}

impl Graph {
    /// Builds a simple graph. Parallel edges collapse to the cheaper cost at
    /// the position of their first occurrence; self-loops are rejected.
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Cost)>,
    {
        if vertex_count == 0 {
            return Err(Error::Graph("vertex count must be positive".into()));
        }
        let mut graph = Graph {
            vertex_count,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); vertex_count + 1],
            index: HashMap::new(),
            collapsed: Vec::new(),
        };
        for (a, b, cost) in edges {
            graph.insert(a, b, cost)?;
        }
        for (i, e) in graph.edges.iter().enumerate() {
            graph.adjacency[e.u].push(Neighbor { vertex: e.v, cost: e.cost, edge: i });
            graph.adjacency[e.v].push(Neighbor { vertex: e.u, cost: e.cost, edge: i });
        }
        for list in &mut graph.adjacency {
            list.sort_by_key(|n| n.vertex);
        }
        Ok(graph)
    }

    fn insert(&mut self, a: Vertex, b: Vertex, cost: Cost) -> Result<()> {
        for x in [a, b] {
            if x == 0 || x > self.vertex_count {
                return Err(Error::Graph(format!("vertex {x} outside 1..={}", self.vertex_count)));
            }
        }
        if a == b {
            return Err(Error::Graph(format!("self-loop on vertex {a}")));
        }
        let edge = Edge::new(a, b, cost);
        match self.index.get(&(edge.u, edge.v)) {
            Some(&i) => {
                let existing = &mut self.edges[i];
                let (kept, dropped) = if cost < existing.cost { (cost, existing.cost) } else { (existing.cost, cost) };
                existing.cost = kept;
                self.collapsed.push(DuplicateEdge { u: edge.u, v: edge.v, kept, dropped });
            }
            None => {
                self.index.insert((edge.u, edge.v), self.edges.len());
                self.edges.push(edge);
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.vertex_count
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (1..=self.vertex_count).contains(&v)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Neighbor] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_cost(&self, a: Vertex, b: Vertex) -> Option<Cost> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.index.get(&key).map(|&i| self.edges[i].cost)
    }

    pub fn duplicate_collapses(&self) -> &[DuplicateEdge] {
        &self.collapsed
    }
}

/// Parses the OR-Library Steiner format: `n m`, then `m` triples `u v c`,
/// then `t` and `t` terminal ids. Any whitespace separates tokens.
///
/// The declared terminal set is returned as-is; experiments usually sample
/// their own.
pub fn parse_orlib(text: &[u8]) -> Result<(Graph, BTreeSet<Vertex>)> {
    let mut tokens = Tokens { text, pos: 0 };
    let n = tokens.count("vertex count")?;
    if n == 0 {
        return Err(Error::Parse { offset: 0, message: "vertex count must be positive".into() });
    }
    let m = tokens.count("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let u = tokens.vertex(n)?;
        let v = tokens.vertex(n)?;
        let (offset, c) = tokens.integer("edge cost")?;
        if c < 0 {
            return Err(Error::Parse { offset, message: format!("negative edge cost {c}") });
        }
        if u.1 == v.1 {
            return Err(Error::Parse { offset: v.0, message: format!("self-loop on vertex {}", u.1) });
        }
        edges.push((u.1, v.1, c as Cost));
    }
    let t = tokens.count("terminal count")?;
    let mut terminals = BTreeSet::new();
    for _ in 0..t {
        terminals.insert(tokens.vertex(n)?.1);
    }
    if let Some((offset, extra)) = tokens.next() {
        return Err(Error::Parse { offset, message: format!("unexpected trailing token `{extra}`") });
    }
    let graph = Graph::new(n, edges)?;
    Ok((graph, terminals))
}

/// Writes a graph and terminal set back out in OR-Library layout.
pub fn to_orlib(graph: &Graph, terminals: &BTreeSet<Vertex>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", graph.vertex_count(), graph.edge_count());
    for e in graph.edges() {
        let _ = writeln!(out, "{} {} {}", e.u, e.v, e.cost);
    }
    let _ = writeln!(out, "{}", terminals.len());
    for t in terminals {
        let _ = writeln!(out, "{t}");
    }
    out
}

struct Tokens<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.text.len() {
            return None;
        }
        let start = self.pos;
        while self.pos < self.text.len() && !self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        // Non-UTF-8 bytes surface as a parse error below rather than a panic.
        let token = std::str::from_utf8(&self.text[start..self.pos]).unwrap_or("\u{fffd}");
        Some((start, token))
    }

    fn integer(&mut self, what: &str) -> Result<(usize, i64)> {
        let (offset, token) = self.next().ok_or_else(|| Error::Parse {
            offset: self.text.len(),
            message: format!("unexpected end of input, expected {what}"),
        })?;
        let value = token
            .parse::<i64>()
            .map_err(|_| Error::Parse { offset, message: format!("expected integer {what}, found `{token}`") })?;
        Ok((offset, value))
    }

    fn count(&mut self, what: &str) -> Result<usize> {
        let (offset, value) = self.integer(what)?;
        usize::try_from(value)
            .map_err(|_| Error::Parse { offset, message: format!("{what} must be non-negative, found {value}") })
    }

    fn vertex(&mut self, n: usize) -> Result<(usize, Vertex)> {
        let (offset, value) = self.integer("vertex id")?;
        if value < 1 || value as u64 > n as u64 {
            return Err(Error::Parse { offset, message: format!("vertex id {value} outside 1..={n}") });
        }
        Ok((offset, value as Vertex))
    }
}

/// Structural report on a graph, relative to a chosen root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphDiagnostics {
    pub isolated: Vec<Vertex>,
    pub collapsed: Vec<DuplicateEdge>,
    pub root_component_size: usize,
    pub connected: bool,
}

impl GraphDiagnostics {
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for v in &self.isolated {
            out.push(format!("vertex {v} is isolated"));
        }
        for d in &self.collapsed {
            out.push(format!("duplicate edge {}-{} collapsed: kept cost {}, dropped {}", d.u, d.v, d.kept, d.dropped));
        }
        if !self.connected {
            out.push(format!("root component reaches {} vertices, graph is disconnected", self.root_component_size));
        }
        out
    }
}

pub fn validate_graph(graph: &Graph, root: Vertex) -> GraphDiagnostics {
    let isolated = graph.vertices().filter(|&v| graph.degree(v) == 0).collect();
    let mut seen = vec![false; graph.vertex_count() + 1];
    let mut size = 0;
    if graph.contains(root) {
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            size += 1;
            for n in graph.neighbors(v) {
                if !seen[n.vertex] {
                    seen[n.vertex] = true;
                    queue.push_back(n.vertex);
                }
            }
        }
    }
    GraphDiagnostics {
        isolated,
        collapsed: graph.duplicate_collapses().to_vec(),
        root_component_size: size,
        connected: size == graph.vertex_count(),
    }
}
