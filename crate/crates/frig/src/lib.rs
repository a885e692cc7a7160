//! Fuzzy requirement interdependency graphs and dependency-aware
//! requirement selection.
//!
//! Release planning picks a subset of requirements under a budget. When
//! requirement values depend on each other, the estimated value of a
//! selection overstates what customers get: excluding a requirement
//! depreciates everything that depends on it. This crate models those
//! value dependencies as a directed fuzzy graph, derives the strongest
//! implicit dependency between every pair of requirements (the max-min
//! closure), and solves selection exactly under three models:
//!
//! * `bkp` — plain binary knapsack over estimated values,
//! * `bkp-pc` — knapsack with dependencies as hard precedence constraints,
//! * `gors` — maximization of the dependency-discounted overall value.
//!
//! ```
//! use frig::{catalog_from_pairs, closure, Frig, gors_solve};
//!
//! let catalog = catalog_from_pairs(&[(20.0, 10), (10.0, 10), (50.0, 15), (10.0, 10)]);
//! let graph = Frig::from_edges(
//!     catalog,
//!     &[
//!         (0, 1, 0.4), (0, 2, 0.8), (1, 3, 0.3), (2, 0, 0.8),
//!         (2, 1, 0.6), (2, 3, 0.8), (3, 2, 0.2),
//!     ],
//! )
//! .unwrap();
//!
//! // the strongest dependency path from r1 to r4 has strength 0.8
//! assert_eq!(closure(&graph).strength(0, 3), 0.8);
//!
//! // under budget 25, maximizing overall value picks {r3, r4}
//! let result = gors_solve(&graph, 25);
//! assert_eq!(result.selection.member_names(), "{r3,r4}");
//! assert!((result.objective - 18.0).abs() < 1e-9);
//! ```
//!
//! The `frig` binary exposes the same machinery on the command line; the
//! book under `book/` walks through the concepts chapter by chapter.

pub mod cli;
pub mod datasets;
pub mod graph;
pub mod io;
pub mod mining;
pub mod simulation;
pub mod solvers;
pub mod valuation;

/// Runs every code block in the book as a doctest, keeping the guide in
/// lockstep with the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/dependency-graphs.md")]
    mod dependency_graphs {}
    #[doc = include_str!("../../../book/src/valuation.md")]
    mod valuation {}
    #[doc = include_str!("../../../book/src/selection-models.md")]
    mod selection_models {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/mining.md")]
    mod mining {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub use datasets::Dataset;
pub use graph::{
    catalog_from_pairs, closure, loi, path_strength, total_cost, total_value, validate,
    DependencyPath, Frig, GraphError, Requirement, StrengthClosure, StrengthMatrix,
    ValidationReport, Violation,
};
pub use mining::{
    frig_from_preferences, map_strength, pearl_strength, CausalStrengths, MembershipMapping,
    MiningWarning, PreferenceMatrix,
};
pub use simulation::{
    cell_seed, generate_frig, run_sweep, write_surface_csv, DatasetSpec, SimulationConfig,
    SurfaceCell,
};
pub use solvers::{
    bkp_solve, bkppc_solve, brute_force_solve, gors_solve, ModelKind, SelectionModel, SolveResult,
    SolverError,
};
pub use valuation::{
    accumulated, customer_value, evaluate, impact_vector, overall_value, percent, sdp_check,
    Evaluated, ImpactVector, SdpOutcome, Selection, ValuationError,
};
