//! Hop-constrained Steiner trees.
//!
//! Given an undirected graph with non-negative integer edge costs, a root,
//! a set of terminals and a hop limit `H`, find a cheap tree that contains
//! the root and every terminal and in which no vertex is more than `H` edges
//! from the root.
//!
//! All heuristics share one construction phase, [`phase1_grow`], which grows
//! a hop-feasible tree Prim-style from the root. The Voss baseline keeps that
//! tree; [`minhig`], [`maxhig`] and [`mm`] rebuild it by attaching terminals
//! level by level; [`nrbi`] rebuilds it as a forest, letting a terminal hang
//! off any part of the forest that is shallow enough.
//!
//! ```
//! use hcst::fixtures::{load_fixture, Fixture};
//! use hcst::{phase1_grow, Algorithm};
//!
//! let instance = load_fixture(Fixture::Fig3);
//! let growth = phase1_grow(&instance).unwrap();
//! let voss = Algorithm::Voss.run(&instance, &growth).unwrap();
//! let nrbi = Algorithm::Nrbi.run(&instance, &growth).unwrap();
//! assert_eq!((voss.total_cost, nrbi.total_cost), (31, 30));
//! ```

pub mod bench;
pub mod construction;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod heuristics;
pub mod hop_paths;
pub mod instance;
pub mod tree;
pub mod validation;

pub use construction::{phase1_grow, voss_baseline, GrowthState};
pub use error::{Error, Result};
pub use graph::{parse_orlib, to_orlib, validate_graph, Cost, Edge, Graph, Vertex};
pub use heuristics::{maxhig, minhig, mm, nrbi, Algorithm};
pub use hop_paths::{hop_limited_sssp, HopTable, Path, VertexMask};
pub use instance::{select_terminals, Instance};
pub use tree::{prune_non_terminal_leaves, tree_cost_and_depths, SteinerTree};
pub use validation::{check_feasible, exact_hcst, ExactOutcome, FeasibilityReport};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/hop-paths.md")]
    mod hop_paths {}
    #[doc = include_str!("../../../book/src/phase-one.md")]
    mod phase_one {}
    #[doc = include_str!("../../../book/src/level-insertion.md")]
    mod level_insertion {}
    #[doc = include_str!("../../../book/src/nrbi.md")]
    mod nrbi {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/benchmarking.md")]
    mod benchmarking {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
