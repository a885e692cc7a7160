//! Knapsack selection under hard precedence constraints.
//!
//! Every explicit dependency stronger than the threshold becomes a
//! constraint `x_i <= x_j`. Cycles of constraints force all-or-nothing
//! groups, so the solver contracts strongly connected components first,
//! then runs an exact depth-first search over the condensation with
//! constraint propagation and a fractional-knapsack bound.

use crate::graph::Frig;
use crate::valuation::Selection;

use super::{density_order, SelectionModel, SolveResult, OBJECTIVE_EPS};

/// Maximizes accumulated value subject to the budget and to
/// `x_i <= x_j` for every edge with strength above `threshold`.
///
/// For `threshold = 0` every feasible selection is closed under explicit
/// dependencies, so its accumulated and overall values coincide.
pub fn bkppc_solve(frig: &Frig, budget: u64, threshold: f64) -> SolveResult {
    assert!(
        (0.0..=1.0).contains(&threshold),
        "precedence threshold must lie in [0, 1], got {threshold}"
    );
    let search = Search::new(frig, budget, threshold);
    let (selection, objective) = search.run();
    SolveResult {
        selection,
        objective,
        model: SelectionModel::BkpPc { threshold },
        budget,
        optimal: true,
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum GroupState {
    Undecided,
    In,
    Out,
}

struct Groups {
    /// group id per requirement
    comp_of: Vec<usize>,
    /// per group: summed cost, summed value
    cost: Vec<u64>,
    value: Vec<f64>,
    /// per group: every group reachable through constraints (selecting the
    /// key forces these), excluding itself
    descendants: Vec<Vec<usize>>,
    /// reverse reachability (excluding the key forces these out)
    ancestors: Vec<Vec<usize>>,
}

impl Groups {
    fn build(frig: &Frig, threshold: f64) -> Self {
        let n = frig.len();
        let mut adj = vec![Vec::new(); n];
        for (from, out) in adj.iter_mut().enumerate() {
            for to in 0..n {
                if from != to && frig.strength(from, to) > threshold {
                    out.push(to);
                }
            }
        }
        let comps = tarjan_scc(&adj);
        let mut comp_of = vec![usize::MAX; n];
        for (id, comp) in comps.iter().enumerate() {
            for &v in comp {
                comp_of[v] = id;
            }
        }
        let ncomp = comps.len();
        let mut cost = vec![0u64; ncomp];
        let mut value = vec![0.0f64; ncomp];
        for (i, r) in frig.requirements().iter().enumerate() {
            cost[comp_of[i]] += r.cost;
            value[comp_of[i]] += r.value;
        }

        // condensation adjacency, then full reachability per group
        let mut dag = vec![Vec::new(); ncomp];
        let mut rev = vec![Vec::new(); ncomp];
        for u in 0..n {
            for &v in &adj[u] {
                let (cu, cv) = (comp_of[u], comp_of[v]);
                if cu != cv {
                    dag[cu].push(cv);
                    rev[cv].push(cu);
                }
            }
        }
        for out in dag.iter_mut().chain(rev.iter_mut()) {
            out.sort_unstable();
            out.dedup();
        }
        let descendants = (0..ncomp).map(|g| reachable(&dag, g)).collect();
        let ancestors = (0..ncomp).map(|g| reachable(&rev, g)).collect();

        Groups {
            comp_of,
            cost,
            value,
            descendants,
            ancestors,
        }
    }

    fn len(&self) -> usize {
        self.cost.len()
    }
}

fn reachable(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut out = Vec::new();
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                out.push(v);
                stack.push(v);
            }
        }
    }
    out
}

/// Tarjan's strongly connected components over an adjacency list.
fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comps: Vec<Vec<usize>>,
    }

    fn connect(v: usize, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for i in 0..st.adj[v].len() {
            let w = st.adj[v][i];
            if st.idx[w].is_none() {
                connect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("tarjan stack underflow");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.comps.push(comp);
        }
    }

    let n = adj.len();
    let mut st = State {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, &mut st);
        }
    }
    st.comps
}

struct Search {
    n: usize,
    budget: u64,
    /// per-requirement estimated values, for canonical objective sums
    values: Vec<f64>,
    groups: Groups,
    /// group ids by value density, branch order for the optimum phase
    group_order: Vec<usize>,
    state: Vec<GroupState>,
    cost_in: u64,
    undecided: usize,
    trail: Vec<usize>,
    best: f64,
}

impl Search {
    fn new(frig: &Frig, budget: u64, threshold: f64) -> Self {
        let groups = Groups::build(frig, threshold);
        let group_order = density_order(&groups.value, &groups.cost);
        let undecided = groups.len();
        Search {
            n: frig.len(),
            budget,
            values: frig.requirements().iter().map(|r| r.value).collect(),
            groups,
            group_order,
            state: vec![GroupState::Undecided; undecided],
            cost_in: 0,
            undecided,
            trail: Vec::new(),
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
        let objective = self.canonical_av(&flags);
        (Selection::from_flags(flags), objective)
    }

    fn set(&mut self, g: usize, s: GroupState) {
        debug_assert!(self.state[g] == GroupState::Undecided);
        self.state[g] = s;
        self.undecided -= 1;
        if s == GroupState::In {
            self.cost_in += self.groups.cost[g];
        }
        self.trail.push(g);
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let g = self.trail.pop().unwrap();
            if self.state[g] == GroupState::In {
                self.cost_in -= self.groups.cost[g];
            }
            self.state[g] = GroupState::Undecided;
            self.undecided += 1;
        }
    }

    /// Includes `g` and everything it reaches. False if that is
    /// contradictory or over budget (state rolled back by the caller).
    fn include(&mut self, g: usize) -> bool {
        if self.state[g] == GroupState::Out {
            return false;
        }
        if self.state[g] == GroupState::Undecided {
            self.set(g, GroupState::In);
        }
        for i in 0..self.groups.descendants[g].len() {
            let d = self.groups.descendants[g][i];
            match self.state[d] {
                GroupState::Out => return false,
                GroupState::Undecided => self.set(d, GroupState::In),
                GroupState::In => {}
            }
        }
        self.cost_in <= self.budget
    }

    /// Excludes `g` and everything that reaches it.
    fn exclude(&mut self, g: usize) -> bool {
        if self.state[g] == GroupState::In {
            return false;
        }
        if self.state[g] == GroupState::Undecided {
            self.set(g, GroupState::Out);
        }
        for i in 0..self.groups.ancestors[g].len() {
            let a = self.groups.ancestors[g][i];
            match self.state[a] {
                GroupState::In => return false,
                GroupState::Undecided => self.set(a, GroupState::Out),
                GroupState::Out => {}
            }
        }
        true
    }

    /// Accumulated value of included groups plus the fractional-knapsack
    /// relaxation over undecided groups; upper-bounds every completion.
    fn bound(&self) -> f64 {
        let mut value_in = 0.0;
        for g in 0..self.groups.len() {
            if self.state[g] == GroupState::In {
                value_in += self.groups.value[g];
            }
        }
        let mut cap = (self.budget - self.cost_in) as f64;
        let mut relaxed = 0.0;
        for &g in &self.group_order {
            if self.state[g] != GroupState::Undecided {
                continue;
            }
            let c = self.groups.cost[g] as f64;
            if c <= cap {
                relaxed += self.groups.value[g];
                cap -= c;
            } else {
                relaxed += self.groups.value[g] * (cap / c);
                break;
            }
        }
        value_in + relaxed
    }

    /// Phase one: branch over groups by density, include first, to find
    /// the optimal accumulated value.
    fn optimise(&mut self, depth: usize) {
        if self.undecided == 0 {
            let mut value_in = 0.0;
            for g in 0..self.groups.len() {
                if self.state[g] == GroupState::In {
                    value_in += self.groups.value[g];
                }
            }
            if value_in > self.best {
                self.best = value_in;
            }
            return;
        }
        let g = match self.group_order[depth..]
            .iter()
            .find(|&&g| self.state[g] == GroupState::Undecided)
        {
            Some(&g) => g,
            None => unreachable!("undecided count and states disagree"),
        };

        let mark = self.trail.len();
        if self.include(g) && self.bound() > self.best {
            self.optimise(depth + 1);
        }
        self.rollback(mark);

        let mark = self.trail.len();
        if self.exclude(g) && self.bound() > self.best {
            self.optimise(depth + 1);
        }
        self.rollback(mark);
    }

    /// Phase two: walk requirement indices in order, unselected branch
    /// first, and return the first completion that reaches the optimum —
    /// the lexicographically smallest optimal vector.
    fn lex_smallest(&mut self, i: usize, optimum: f64) -> Option<Vec<bool>> {
        if i == self.n {
            let flags = self.current_flags();
            if self.canonical_av(&flags) >= optimum - OBJECTIVE_EPS {
                return Some(flags);
            }
            return None;
        }
        let g = self.groups.comp_of[i];
        if self.state[g] != GroupState::Undecided {
            return self.lex_smallest(i + 1, optimum);
        }

        let mark = self.trail.len();
        if self.exclude(g) && self.bound() >= optimum - OBJECTIVE_EPS {
            if let Some(flags) = self.lex_smallest(i + 1, optimum) {
                return Some(flags);
            }
        }
        self.rollback(mark);

        let mark = self.trail.len();
        if self.include(g) && self.bound() >= optimum - OBJECTIVE_EPS {
            if let Some(flags) = self.lex_smallest(i + 1, optimum) {
                return Some(flags);
            }
        }
        self.rollback(mark);
        None
    }

    fn current_flags(&self) -> Vec<bool> {
        (0..self.n)
            .map(|i| self.state[self.groups.comp_of[i]] == GroupState::In)
            .collect()
    }

    fn canonical_av(&self, flags: &[bool]) -> f64 {
        let mut av = 0.0;
        for (i, &f) in flags.iter().enumerate() {
            if f {
                av += self.values[i];
            }
        }
        av
    }
}
