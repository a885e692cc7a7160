//! Fuzzy requirement interdependency graphs (FRIGs).
//!
//! A FRIG is a directed fuzzy graph over a requirement catalog. Edge
//! strengths in `[0, 1]` grade the explicit value-related dependencies
//! between requirements; `0` encodes the absence of an edge. From the
//! explicit strengths this module derives path strengths (weakest edge on
//! a path), the max-min closure `rho_inf` (strongest path between each
//! pair), and the level of interdependency.

use std::fmt;
use std::ops::{Index, IndexMut};

use thiserror::Error;

/// A software requirement with stakeholder estimates attached.
///
/// Ids are 0-based indices into the owning catalog; display is 1-based
/// (`r1..rn`).
#[derive(Debug, Clone, PartialEq)]
pub struct Requirement {
    pub id: usize,
    pub label: Option<String>,
    /// Estimated value in stakeholder value units, non-negative.
    pub value: f64,
    /// Estimated cost in integer effort units.
    pub cost: u64,
}

impl Requirement {
    pub fn new(id: usize, value: f64, cost: u64) -> Self {
        Requirement {
            id,
            label: None,
            value,
            cost,
        }
    }

    pub fn with_label(id: usize, label: impl Into<String>, value: f64, cost: u64) -> Self {
        Requirement {
            id,
            label: Some(label.into()),
            value,
            cost,
        }
    }

    /// Conventional 1-based display name: `r1`, `r2`, ...
    pub fn name(&self) -> String {
        format!("r{}", self.id + 1)
    }
}

/// Builds a catalog of unlabeled requirements from `(value, cost)` pairs.
pub fn catalog_from_pairs(pairs: &[(f64, u64)]) -> Vec<Requirement> {
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(value, cost))| Requirement::new(i, value, cost))
        .collect()
}

/// Total estimated value of a catalog.
pub fn total_value(catalog: &[Requirement]) -> f64 {
    catalog.iter().map(|r| r.value).sum()
}

/// Total cost of a catalog.
pub fn total_cost(catalog: &[Requirement]) -> u64 {
    catalog.iter().map(|r| r.cost).sum()
}

/// Square matrix of dependency strengths, indexed `(from, to)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthMatrix {
    n: usize,
    cells: Vec<f64>,
}

impl StrengthMatrix {
    pub fn zeros(n: usize) -> Self {
        StrengthMatrix {
            n,
            cells: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from dense rows. Panics if the rows are not square.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = StrengthMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(
                row.len(),
                n,
                "row {i} has length {} in a {n}x{n} matrix",
                row.len()
            );
            for (j, &s) in row.iter().enumerate() {
                m[(i, j)] = s;
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.cells[from * self.n + to]
    }

    pub fn set(&mut self, from: usize, to: usize, strength: f64) {
        self.cells[from * self.n + to] = strength;
    }

    /// Number of strictly positive cells.
    pub fn positive_cells(&self) -> usize {
        self.cells.iter().filter(|&&s| s > 0.0).count()
    }
}

impl Index<(usize, usize)> for StrengthMatrix {
    type Output = f64;

    fn index(&self, (from, to): (usize, usize)) -> &f64 {
        &self.cells[from * self.n + to]
    }
}

impl IndexMut<(usize, usize)> for StrengthMatrix {
    fn index_mut(&mut self, (from, to): (usize, usize)) -> &mut f64 {
        &mut self.cells[from * self.n + to]
    }
}

/// One violated invariant found by [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Matrix side differs from the catalog length.
    DimensionMismatch { requirements: usize, matrix: usize },
    /// Requirement at `position` carries a different id.
    IdMismatch { position: usize, id: usize },
    /// Value is negative or not finite.
    InvalidValue { id: usize, value: f64 },
    /// Strength outside `[0, 1]` (or not finite).
    StrengthOutOfRange {
        from: usize,
        to: usize,
        strength: f64,
    },
    /// Positive strength on the diagonal.
    SelfDependency { id: usize, strength: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { requirements, matrix } => write!(
                f,
                "catalog has {requirements} requirements but the strength matrix is {matrix}x{matrix}"
            ),
            Violation::IdMismatch { position, id } => {
                write!(f, "requirement at position {position} has id {id}")
            }
            Violation::InvalidValue { id, value } => {
                write!(f, "r{} has invalid value {value}", id + 1)
            }
            Violation::StrengthOutOfRange { from, to, strength } => write!(
                f,
                "strength at cell ({}, {}) is {strength}, outside [0, 1]",
                from + 1,
                to + 1
            ),
            Violation::SelfDependency { id, strength } => {
                write!(f, "r{} has a self-dependency of strength {strength}", id + 1)
            }
        }
    }
}

/// Outcome of validating catalog + strength matrix against the FRIG
/// invariants. Empty means valid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every FRIG invariant and reports each violated cell.
pub fn validate(requirements: &[Requirement], rho: &StrengthMatrix) -> ValidationReport {
    let mut violations = Vec::new();
    if requirements.len() != rho.n() {
        violations.push(Violation::DimensionMismatch {
            requirements: requirements.len(),
            matrix: rho.n(),
        });
        return ValidationReport { violations };
    }
    for (position, r) in requirements.iter().enumerate() {
        if r.id != position {
            violations.push(Violation::IdMismatch { position, id: r.id });
        }
        if !(r.value >= 0.0 && r.value.is_finite()) {
            violations.push(Violation::InvalidValue {
                id: r.id,
                value: r.value,
            });
        }
    }
    let n = rho.n();
    for from in 0..n {
        for to in 0..n {
            let s = rho[(from, to)];
            if !(0.0..=1.0).contains(&s) || s.is_nan() {
                violations.push(Violation::StrengthOutOfRange {
                    from,
                    to,
                    strength: s,
                });
            } else if from == to && s > 0.0 {
                violations.push(Violation::SelfDependency {
                    id: from,
                    strength: s,
                });
            }
        }
    }
    ValidationReport { violations }
}

/// A fuzzy requirement interdependency graph: a requirement catalog plus
/// the matrix of explicit dependency strengths.
///
/// Immutable once constructed; construction enforces all invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Frig {
    requirements: Vec<Requirement>,
    rho: StrengthMatrix,
}

impl Frig {
    /// Validates and wraps a catalog + strength matrix.
    pub fn new(
        requirements: Vec<Requirement>,
        rho: StrengthMatrix,
    ) -> Result<Self, ValidationReport> {
        let report = validate(&requirements, &rho);
        if report.is_valid() {
            Ok(Frig { requirements, rho })
        } else {
            Err(report)
        }
    }

    /// Builds a FRIG from `(from, to, strength)` edges over a catalog.
    pub fn from_edges(
        requirements: Vec<Requirement>,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self, ValidationReport> {
        let mut rho = StrengthMatrix::zeros(requirements.len());
        for &(from, to, strength) in edges {
            rho[(from, to)] = strength;
        }
        Frig::new(requirements, rho)
    }

    /// A FRIG with no dependencies at all.
    pub fn edgeless(requirements: Vec<Requirement>) -> Self {
        let rho = StrengthMatrix::zeros(requirements.len());
        Frig::new(requirements, rho).expect("edgeless graph over a sane catalog is valid")
    }

    pub fn len(&self) -> usize {
        self.requirements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requirements.is_empty()
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.requirements
    }

    pub fn rho(&self) -> &StrengthMatrix {
        &self.rho
    }

    /// Explicit dependency strength from `from` to `to`.
    pub fn strength(&self, from: usize, to: usize) -> f64 {
        self.rho[(from, to)]
    }

    /// Number of explicit dependencies (positive cells).
    pub fn edge_count(&self) -> usize {
        self.rho.positive_cells()
    }

    /// Iterates explicit edges as `(from, to, strength)` in row order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |from| {
            (0..n).filter_map(move |to| {
                let s = self.rho[(from, to)];
                (s > 0.0).then_some((from, to, s))
            })
        })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("a dependency path needs at least 2 nodes, got {len}")]
    PathTooShort { len: usize },
    #[error("node r{} repeats within the path", id + 1)]
    RepeatedNode { id: usize },
    #[error("node r{} is outside the catalog of {n} requirements", id + 1)]
    NodeOutOfRange { id: usize, n: usize },
    #[error("no explicit dependency from r{} to r{}", from + 1, to + 1)]
    MissingEdge { from: usize, to: usize },
    #[error("level of interdependency is undefined for {n} requirement(s)")]
    TooFewRequirements { n: usize },
}

/// A sequence of distinct requirement ids, at least two long.
///
/// Whether every hop is backed by a positive-strength edge is checked
/// against a concrete graph by [`path_strength`].
#[derive(Debug, Clone, PartialEq)]
pub struct DependencyPath {
    nodes: Vec<usize>,
}

impl DependencyPath {
    pub fn new(nodes: Vec<usize>) -> Result<Self, GraphError> {
        if nodes.len() < 2 {
            return Err(GraphError::PathTooShort { len: nodes.len() });
        }
        for (i, &a) in nodes.iter().enumerate() {
            if nodes[i + 1..].contains(&a) {
                return Err(GraphError::RepeatedNode { id: a });
            }
        }
        Ok(DependencyPath { nodes })
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }
}

/// Strength of a dependency path: the weakest explicit edge along it
/// (fuzzy AND).
pub fn path_strength(frig: &Frig, path: &DependencyPath) -> Result<f64, GraphError> {
    let n = frig.len();
    let mut strength = f64::INFINITY;
    for pair in path.nodes().windows(2) {
        let (from, to) = (pair[0], pair[1]);
        for id in [from, to] {
            if id >= n {
                return Err(GraphError::NodeOutOfRange { id, n });
            }
        }
        let s = frig.strength(from, to);
        if s <= 0.0 {
            return Err(GraphError::MissingEdge { from, to });
        }
        strength = strength.min(s);
    }
    Ok(strength)
}

/// The max-min closure of a FRIG: `rho_inf[i][j]` is the strength of the
/// strongest dependency path from `i` to `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthClosure {
    rho_inf: StrengthMatrix,
}

impl StrengthClosure {
    pub fn matrix(&self) -> &StrengthMatrix {
        &self.rho_inf
    }

    pub fn n(&self) -> usize {
        self.rho_inf.n()
    }

    /// Overall dependency strength from `from` to `to`.
    pub fn strength(&self, from: usize, to: usize) -> f64 {
        self.rho_inf[(from, to)]
    }
}

/// Computes the overall strengths `rho_inf` by relaxation over the
/// (max, min) semiring.
///
/// Any walk contains a simple path whose weakest edge is at least the
/// walk's weakest edge, so the relaxation over walks yields exactly the
/// maximum over simple paths. The diagonal is fixed at 1 afterwards; it is
/// a display convention and no impact computation reads it.
pub fn closure(frig: &Frig) -> StrengthClosure {
    let n = frig.len();
    let mut m = frig.rho().clone();
    for k in 0..n {
        for i in 0..n {
            let ik = m[(i, k)];
            if ik <= 0.0 {
                continue;
            }
            for j in 0..n {
                let through = ik.min(m[(k, j)]);
                if through > m[(i, j)] {
                    m[(i, j)] = through;
                }
            }
        }
    }
    for i in 0..n {
        m[(i, i)] = 1.0;
    }
    StrengthClosure { rho_inf: m }
}

/// Level of interdependency: the fraction of ordered requirement pairs
/// carrying a positive explicit strength, `k / (n * (n - 1))`.
pub fn loi(frig: &Frig) -> Result<f64, GraphError> {
    let n = frig.len();
    if n < 2 {
        return Err(GraphError::TooFewRequirements { n });
    }
    let pairs = (n * (n - 1)) as f64;
    Ok(frig.edge_count() as f64 / pairs)
}
