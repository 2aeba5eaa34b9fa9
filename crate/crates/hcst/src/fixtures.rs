//! The three small worked-example graphs.
//!
//! The examples label their vertices `r, 1, 2, …`. Here the root `r` is
//! vertex 1 and example label `k` is vertex `k + 1`; [`vertex`] does the
//! translation so tests can be written in the original labels.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::graph::{Graph, Vertex};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixture {
    Fig1,
    Fig2,
    Fig3,
}

pub const ROOT: Vertex = 1;

/// Vertex id for example label `label` (the root is [`ROOT`]).
pub const fn vertex(label: usize) -> Vertex {
    label + 1
}

/// Example label of a vertex id, `"r"` for the root.
pub fn label(v: Vertex) -> String {
    if v == ROOT {
        "r".to_string()
    } else {
        (v - 1).to_string()
    }
}

// (a, b, cost) in example labels; `None` is the root.
type LabelledEdge = (Option<usize>, usize, u64);

const FIG1: &[LabelledEdge] =
    &[(None, 1, 4), (Some(1), 3, 4), (None, 2, 3), (Some(2), 4, 2), (Some(4), 5, 2), (Some(3), 5, 2)];

const FIG2: &[LabelledEdge] = &[
    (None, 2, 2),
    (Some(2), 6, 3),
    (None, 1, 2),
    (Some(1), 4, 2),
    (Some(4), 8, 2),
    (None, 3, 5),
    (Some(3), 5, 1),
    (Some(5), 7, 1),
    (Some(7), 9, 1),
    (Some(7), 8, 1),
    (Some(3), 6, 1),
];

const FIG3: &[LabelledEdge] = &[
    (None, 1, 4),
    (Some(1), 2, 4),
    (Some(2), 4, 2),
    (Some(4), 6, 2),
    (Some(6), 7, 2),
    (None, 3, 5),
    (Some(3), 5, 12),
    (Some(2), 3, 7),
];

impl Fixture {
    pub const ALL: [Fixture; 3] = [Fixture::Fig1, Fixture::Fig2, Fixture::Fig3];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Fig1 => "fig1",
            Fixture::Fig2 => "fig2",
            Fixture::Fig3 => "fig3",
        }
    }

    fn parts(self) -> (usize, &'static [LabelledEdge], &'static [usize], usize) {
        match self {
            Fixture::Fig1 => (6, FIG1, &[3, 5], 3),
            Fixture::Fig2 => (10, FIG2, &[6, 8, 9], 4),
            Fixture::Fig3 => (8, FIG3, &[2, 5, 7], 5),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fig1" => Ok(Fixture::Fig1),
            "fig2" => Ok(Fixture::Fig2),
            "fig3" => Ok(Fixture::Fig3),
            other => Err(Error::Argument(format!("unknown fixture `{other}`"))),
        }
    }
}

pub fn load_fixture(fixture: Fixture) -> Instance {
    let (n, edges, terminals, hop) = fixture.parts();
    let edges = edges.iter().map(|&(a, b, c)| (a.map_or(ROOT, vertex), vertex(b), c));
    let graph = Graph::new(n, edges).expect("fixture graphs are well formed");
    Instance::new(graph, ROOT, terminals.iter().map(|&t| vertex(t)), hop).expect("fixture instances are well formed")
}
