//! Exact requirement-selection solvers.
//!
//! Three models, one tie rule. `bkp` maximizes accumulated value and
//! ignores dependencies, `bkp-pc` maximizes accumulated value under hard
//! precedence constraints, `gors` maximizes the dependency-discounted
//! overall value. All three return provably optimal selections; among
//! equal-objective optima the lexicographically smallest indicator vector
//! (unselected before selected, `x_1` first) wins.

mod bkp;
mod bkp_pc;
mod brute;
mod gors;

pub use bkp::bkp_solve;
pub use bkp_pc::bkppc_solve;
pub use brute::{brute_force_solve, BRUTE_FORCE_MAX};
pub use gors::gors_solve;

use thiserror::Error;

use crate::valuation::Selection;

/// Tolerance for comparing objectives that are sums of short-decimal
/// products.
pub(crate) const OBJECTIVE_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum SolverError {
    #[error("refusing to enumerate {n} requirements by brute force (max {max})")]
    TooManyRequirements { n: usize, max: usize },
}

/// Model label without parameters, for output columns and CLI flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Bkp,
    BkpPc,
    Gors,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Bkp, ModelKind::BkpPc, ModelKind::Gors];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Bkp => "bkp",
            ModelKind::BkpPc => "bkp-pc",
            ModelKind::Gors => "gors",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the three selection models. `BkpPc` carries the strength
/// threshold above which an explicit dependency becomes a hard precedence
/// constraint; 0 turns every positive strength into one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionModel {
    Bkp,
    BkpPc { threshold: f64 },
    Gors,
}

impl SelectionModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            SelectionModel::Bkp => ModelKind::Bkp,
            SelectionModel::BkpPc { .. } => ModelKind::BkpPc,
            SelectionModel::Gors => ModelKind::Gors,
        }
    }
}

/// An optimal selection for one model and budget.
///
/// `objective` is the accumulated value for `bkp`/`bkp-pc` and the overall
/// value for `gors`. The `optimal` flag marks the result as produced by an
/// exact search; every solver in this module sets it.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub selection: Selection,
    pub objective: f64,
    pub model: SelectionModel,
    pub budget: u64,
    pub optimal: bool,
}

/// Index order that sorts by value density descending (zero-cost items
/// first), index ascending on ties. Shared branching heuristic.
pub(crate) fn density_order(values: &[f64], costs: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        // compare v_a / c_a vs v_b / c_b by cross-multiplication
        let lhs = values[a] * costs[b] as f64;
        let rhs = values[b] * costs[a] as f64;
        rhs.partial_cmp(&lhs)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// True when vector `a` precedes vector `b` lexicographically with
/// unselected (false) ordered before selected (true).
pub(crate) fn lex_less(a: &[bool], b: &[bool]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return !x;
        }
    }
    false
}
