//! Plain binary-knapsack selection over integer costs.

use crate::graph::{total_cost, Requirement};
use crate::valuation::{accumulated, Selection};

use super::{SelectionModel, SolveResult};

/// Maximizes accumulated value subject to the budget, ignoring
/// dependencies. Exact dynamic program over integer costs; ties resolve to
/// the lexicographically smallest indicator vector.
pub fn bkp_solve(catalog: &[Requirement], budget: u64) -> SolveResult {
    let n = catalog.len();
    let cap = budget.min(total_cost(catalog)) as usize;

    // best[i][w]: maximal AV over items i.. within capacity w
    let mut best = vec![vec![0.0f64; cap + 1]; n + 1];
    for i in (0..n).rev() {
        let cost = catalog[i].cost as usize;
        let value = catalog[i].value;
        for w in 0..=cap {
            let skip = best[i + 1][w];
            best[i][w] = if cost <= w {
                skip.max(value + best[i + 1][w - cost])
            } else {
                skip
            };
        }
    }

    // Walk forward preferring "unselected" whenever the remaining items
    // still reach the optimum; this yields the lex-smallest optimal vector.
    let mut flags = vec![false; n];
    let mut w = cap;
    for i in 0..n {
        if best[i][w] == best[i + 1][w] {
            continue;
        }
        flags[i] = true;
        w -= catalog[i].cost as usize;
    }

    let selection = Selection::from_flags(flags);
    let (_, av) = accumulated(catalog, &selection).expect("selection built over the same catalog");
    SolveResult {
        selection,
        objective: av,
        model: SelectionModel::Bkp,
        budget,
        optimal: true,
    }
}
