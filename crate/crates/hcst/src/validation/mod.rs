//! Independent checks on solutions: structural feasibility, and an exhaustive
//! exact solver for instances of a dozen vertices or so.

mod exact;
mod feasibility;

pub use exact::{exact_hcst, ExactOutcome, DEFAULT_VERTEX_CAP};
pub use feasibility::{check_feasible, FeasibilityReport};
