//! Exact overall-value maximization.
//!
//! The overall value is not separable: the impact on a selected
//! requirement depends on the whole excluded set, so no knapsack dynamic
//! program applies. The solver runs a depth-first branch and bound over
//! include/exclude decisions. Excluding a requirement can only raise
//! impacts, so the overall value of already-included requirements under
//! the exclusions decided so far, plus a fractional-knapsack relaxation of
//! the undecided remainder, upper-bounds every completion.

use crate::graph::{closure, Frig};
use crate::valuation::Selection;

use super::{density_order, SelectionModel, SolveResult, OBJECTIVE_EPS};

/// Maximizes overall value subject to the budget. Exact; ties resolve to
/// the lexicographically smallest indicator vector.
pub fn gors_solve(frig: &Frig, budget: u64) -> SolveResult {
    let search = Search::new(frig, budget);
    let (selection, objective) = search.run();
    SolveResult {
        selection,
        objective,
        model: SelectionModel::Gors,
        budget,
        optimal: true,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Undecided,
    In,
    Out,
}

struct Search {
    n: usize,
    budget: u64,
    values: Vec<f64>,
    costs: Vec<u64>,
    /// full-graph closure, row-major
    rho_inf: Vec<f64>,
    /// branch order for the optimum phase: value density descending
    order: Vec<usize>,
    status: Vec<Status>,
    /// per requirement: strongest closure strength into the set excluded
    /// so far; only grows along a branch
    impact: Vec<f64>,
    /// undo log of (requirement, previous impact)
    trail: Vec<(usize, f64)>,
    cost_in: u64,
    best: f64,
}

impl Search {
    fn new(frig: &Frig, budget: u64) -> Self {
        let n = frig.len();
        let rho_inf_matrix = closure(frig);
        let mut rho_inf = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                rho_inf[i * n + j] = rho_inf_matrix.strength(i, j);
            }
        }
        let values: Vec<f64> = frig.requirements().iter().map(|r| r.value).collect();
        let costs: Vec<u64> = frig.requirements().iter().map(|r| r.cost).collect();
        let order = density_order(&values, &costs);
        Search {
            n,
            budget,
            values,
            costs,
            rho_inf,
            order,
            status: vec![Status::Undecided; n],
            impact: vec![0.0; n],
            trail: Vec::new(),
            cost_in: 0,
            best: -1.0,
        }
    }

    fn run(mut self) -> (Selection, f64) {
        self.optimise(0);
        let optimum = self.best;
        debug_assert!(self.trail.is_empty());
        let flags = self
            .lex_smallest(0, optimum)
            .expect("the optimum found in phase one stays reachable");
        let objective = self.canonical_ov(&flags);
        (Selection::from_flags(flags), objective)
    }

    fn include(&mut self, i: usize) {
        self.status[i] = Status::In;
        self.cost_in += self.costs[i];
    }

    fn undo_include(&mut self, i: usize) {
        self.status[i] = Status::Undecided;
        self.cost_in -= self.costs[i];
    }

    /// Marks `j` excluded and raises the running impacts of everything
    /// still in play. Returns a trail mark for [`Self::undo_exclude`].
    fn exclude(&mut self, j: usize) -> usize {
        let mark = self.trail.len();
        self.status[j] = Status::Out;
        for i in 0..self.n {
            if i == j || self.status[i] == Status::Out {
                continue;
            }
            let s = self.rho_inf[i * self.n + j];
            if s > self.impact[i] {
                self.trail.push((i, self.impact[i]));
                self.impact[i] = s;
            }
        }
        mark
    }

    fn undo_exclude(&mut self, j: usize, mark: usize) {
        while self.trail.len() > mark {
            let (i, old) = self.trail.pop().unwrap();
            self.impact[i] = old;
        }
        self.status[j] = Status::Undecided;
    }

    /// Discounted value of the included set so far plus the cheaper of two
    /// relaxations of the undecided remainder: its total discounted value
    /// (ignoring the budget) and its fractional knapsack value (ignoring
    /// future discounts).
    fn bound(&self) -> f64 {
        let mut ov_in = 0.0;
        let mut potential = 0.0;
        for i in 0..self.n {
            match self.status[i] {
                Status::In => ov_in += self.values[i] * (1.0 - self.impact[i]),
                Status::Undecided => potential += self.values[i] * (1.0 - self.impact[i]),
                Status::Out => {}
            }
        }
        let mut cap = (self.budget - self.cost_in) as f64;
        let mut relaxed = 0.0;
        for &i in &self.order {
            if self.status[i] != Status::Undecided {
                continue;
            }
            let c = self.costs[i] as f64;
            if c <= cap {
                relaxed += self.values[i];
                cap -= c;
            } else {
                relaxed += self.values[i] * (cap / c);
                break;
            }
        }
        ov_in + potential.min(relaxed)
    }

    /// Phase one: branch by density, include first, to find the optimal
    /// overall value.
    fn optimise(&mut self, depth: usize) {
        if depth == self.n {
            let ov = self.current_ov();
            if ov > self.best {
                self.best = ov;
            }
            return;
        }
        let i = self.order[depth];

        if self.cost_in + self.costs[i] <= self.budget {
            self.include(i);
            if self.bound() > self.best {
                self.optimise(depth + 1);
            }
            self.undo_include(i);
        }

        let mark = self.exclude(i);
        if self.bound() > self.best {
            self.optimise(depth + 1);
        }
        self.undo_exclude(i, mark);
    }

    /// Phase two: walk requirement indices in order, unselected branch
    /// first; the first completion reaching the optimum is the
    /// lexicographically smallest optimal vector.
    fn lex_smallest(&mut self, i: usize, optimum: f64) -> Option<Vec<bool>> {
        if i == self.n {
            if self.current_ov() >= optimum - OBJECTIVE_EPS {
                return Some(self.status.iter().map(|&s| s == Status::In).collect());
            }
            return None;
        }

        let mark = self.exclude(i);
        if self.bound() >= optimum - OBJECTIVE_EPS {
            if let Some(flags) = self.lex_smallest(i + 1, optimum) {
                return Some(flags);
            }
        }
        self.undo_exclude(i, mark);

        if self.cost_in + self.costs[i] <= self.budget {
            self.include(i);
            if self.bound() >= optimum - OBJECTIVE_EPS {
                if let Some(flags) = self.lex_smallest(i + 1, optimum) {
                    return Some(flags);
                }
            }
            self.undo_include(i);
        }
        None
    }

    /// Overall value of the current complete assignment, summed in
    /// catalog order.
    fn current_ov(&self) -> f64 {
        let mut ov = 0.0;
        for i in 0..self.n {
            if self.status[i] == Status::In {
                ov += self.values[i] * (1.0 - self.impact[i]);
            }
        }
        ov
    }

    fn canonical_ov(&self, flags: &[bool]) -> f64 {
        let mut impact = vec![0.0f64; self.n];
        for j in 0..self.n {
            if flags[j] {
                continue;
            }
            for (i, slot) in impact.iter_mut().enumerate() {
                if flags[i] {
                    *slot = slot.max(self.rho_inf[i * self.n + j]);
                }
            }
        }
        flags
            .iter()
            .enumerate()
            .filter(|&(_, &f)| f)
            .map(|(i, _)| self.values[i] * (1.0 - impact[i]))
            .sum()
    }
}
