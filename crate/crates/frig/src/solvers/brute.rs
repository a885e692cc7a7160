//! Exhaustive-enumeration oracle for the three selection models.

use crate::graph::{closure, Frig};
use crate::valuation::Selection;

use super::{lex_less, SelectionModel, SolveResult, SolverError, OBJECTIVE_EPS};

/// Enumeration guard: `2^20` subsets is where the oracle stops being fun.
pub const BRUTE_FORCE_MAX: usize = 20;

/// Enumerates every subset, filters feasibility (budget, and precedence
/// for `bkp-pc`), and returns the objective-maximal one under the shared
/// tie rule: lexicographically smallest indicator vector.
pub fn brute_force_solve(
    frig: &Frig,
    budget: u64,
    model: SelectionModel,
) -> Result<SolveResult, SolverError> {
    let n = frig.len();
    if n > BRUTE_FORCE_MAX {
        return Err(SolverError::TooManyRequirements {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let values: Vec<f64> = frig.requirements().iter().map(|r| r.value).collect();
    let costs: Vec<u64> = frig.requirements().iter().map(|r| r.cost).collect();

    let rho_inf = match model {
        SelectionModel::Gors => {
            let c = closure(frig);
            let mut flat = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    flat[i * n + j] = c.strength(i, j);
                }
            }
            Some(flat)
        }
        _ => None,
    };
    let constraints: Vec<(usize, usize)> = match model {
        SelectionModel::BkpPc { threshold } => frig
            .edges()
            .filter(|&(_, _, s)| s > threshold)
            .map(|(i, j, _)| (i, j))
            .collect(),
        _ => Vec::new(),
    };

    let mut flags = vec![false; n];
    let mut best_flags: Option<Vec<bool>> = None;
    let mut best = f64::NEG_INFINITY;

    'masks: for mask in 0u64..(1u64 << n) {
        let mut cost = 0u64;
        for i in 0..n {
            flags[i] = mask & (1 << i) != 0;
            if flags[i] {
                cost += costs[i];
            }
        }
        if cost > budget {
            continue;
        }
        for &(i, j) in &constraints {
            if flags[i] && !flags[j] {
                continue 'masks;
            }
        }

        let objective = match &rho_inf {
            Some(rho_inf) => {
                // overall value, impacts straight off the closure
                let mut ov = 0.0;
                for i in 0..n {
                    if !flags[i] {
                        continue;
                    }
                    let mut impact = 0.0f64;
                    for j in 0..n {
                        if !flags[j] {
                            impact = impact.max(rho_inf[i * n + j]);
                        }
                    }
                    ov += values[i] * (1.0 - impact);
                }
                ov
            }
            None => (0..n).filter(|&i| flags[i]).map(|i| values[i]).sum(),
        };

        let better = objective > best + OBJECTIVE_EPS
            || ((objective - best).abs() <= OBJECTIVE_EPS
                && best_flags
                    .as_ref()
                    .is_some_and(|current| lex_less(&flags, current)));
        if better || best_flags.is_none() {
            best = objective;
            best_flags = Some(flags.clone());
        }
    }

    let flags = best_flags.expect("the empty subset is always feasible");
    Ok(SolveResult {
        selection: Selection::from_flags(flags),
        objective: best,
        model,
        budget,
        optimal: true,
    })
}
