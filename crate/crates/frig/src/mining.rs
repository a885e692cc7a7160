//! Mining explicit dependency strengths from user preferences.
//!
//! Users preferring requirement `r_j` often also prefer `r_i`; the
//! conditional probability `p(r_i | r_j)` estimated from a binary
//! preference matrix measures that causal pull, and a monotone membership
//! mapping turns it into a dependency strength from `r_i` to `r_j`.

use thiserror::Error;

use crate::graph::{Frig, Requirement, StrengthMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum MiningError {
    #[error("preference matrix needs at least one requirement row")]
    NoRequirements,
    #[error("preference matrix needs at least one user column")]
    NoUsers,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("catalog has {catalog} requirements but the preference matrix has {matrix} rows")]
    DimensionMismatch { catalog: usize, matrix: usize },
    #[error("causal strength {eta} is outside [0, 1]")]
    EtaOutOfRange { eta: f64 },
    #[error("mapping bounds must satisfy 0 <= lo < hi <= 1, got lo={lo}, hi={hi}")]
    BadMappingBounds { lo: f64, hi: f64 },
}

/// Binary requirements-by-users preference table: entry `(i, j)` says
/// whether user `j` prefers requirement `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceMatrix {
    rows: Vec<Vec<bool>>,
    users: usize,
}

impl PreferenceMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self, MiningError> {
        if rows.is_empty() {
            return Err(MiningError::NoRequirements);
        }
        let users = rows[0].len();
        if users == 0 {
            return Err(MiningError::NoUsers);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != users {
                return Err(MiningError::RaggedRow {
                    row,
                    expected: users,
                    got: r.len(),
                });
            }
        }
        Ok(PreferenceMatrix { rows, users })
    }

    pub fn n_requirements(&self) -> usize {
        self.rows.len()
    }

    pub fn n_users(&self) -> usize {
        self.users
    }

    pub fn prefers(&self, requirement: usize, user: usize) -> bool {
        self.rows[requirement][user]
    }
}

/// Pairwise causal strengths `eta(i, j) = p(r_i | r_j)`.
///
/// Cells conditioned on a never-preferred requirement are undefined, which
/// is distinct from 0: absence of evidence rather than evidence of
/// independence.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalStrengths {
    n: usize,
    cells: Vec<Option<f64>>,
    undefined_targets: Vec<usize>,
}

impl CausalStrengths {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.cells[i * self.n + j]
    }

    /// Requirements nobody prefers, making every strength conditioned on
    /// them undefined.
    pub fn undefined_targets(&self) -> &[usize] {
        &self.undefined_targets
    }
}

/// Estimates causal strengths from preference co-occurrence counts:
/// `eta(i, j) = #(users preferring both) / #(users preferring j)`.
pub fn pearl_strength(prefs: &PreferenceMatrix) -> CausalStrengths {
    let n = prefs.n_requirements();
    let users = prefs.n_users();
    let mut cells = vec![None; n * n];
    let undefined_targets: Vec<usize> = (0..n)
        .filter(|&j| (0..users).all(|u| !prefs.prefers(j, u)))
        .collect();
    for i in 0..n {
        for j in 0..n {
            let mut joint = 0u32;
            let mut marginal = 0u32;
            for u in 0..users {
                if prefs.prefers(j, u) {
                    marginal += 1;
                    if prefs.prefers(i, u) {
                        joint += 1;
                    }
                }
            }
            if marginal > 0 {
                cells[i * n + j] = Some(f64::from(joint) / f64::from(marginal));
            }
        }
    }
    CausalStrengths {
        n,
        cells,
        undefined_targets,
    }
}

/// Monotone mapping from causal strength to dependency strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MembershipMapping {
    /// Identity: the causal strength is the dependency strength.
    Linear,
    /// 0 below `lo`, 1 at or above `hi`, linear in between; tunes out
    /// negligible associations and saturates strong ones.
    ClippedLinear { lo: f64, hi: f64 },
    /// Cubic ease between `lo` and `hi` for a non-linear taper.
    Smoothstep { lo: f64, hi: f64 },
}

impl MembershipMapping {
    pub fn clipped_linear(lo: f64, hi: f64) -> Result<Self, MiningError> {
        check_bounds(lo, hi)?;
        Ok(MembershipMapping::ClippedLinear { lo, hi })
    }

    pub fn smoothstep(lo: f64, hi: f64) -> Result<Self, MiningError> {
        check_bounds(lo, hi)?;
        Ok(MembershipMapping::Smoothstep { lo, hi })
    }
}

fn check_bounds(lo: f64, hi: f64) -> Result<(), MiningError> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(MiningError::BadMappingBounds { lo, hi });
    }
    Ok(())
}

/// Applies a membership mapping to one causal strength.
pub fn map_strength(eta: f64, mapping: &MembershipMapping) -> Result<f64, MiningError> {
    if !(0.0..=1.0).contains(&eta) || eta.is_nan() {
        return Err(MiningError::EtaOutOfRange { eta });
    }
    Ok(match *mapping {
        MembershipMapping::Linear => eta,
        MembershipMapping::ClippedLinear { lo, hi } => {
            if eta < lo {
                0.0
            } else if eta >= hi {
                1.0
            } else {
                (eta - lo) / (hi - lo)
            }
        }
        MembershipMapping::Smoothstep { lo, hi } => {
            let t = ((eta - lo) / (hi - lo)).clamp(0.0, 1.0);
            t * t * (3.0 - 2.0 * t)
        }
    })
}

/// Warning attached to a mined graph: the strengths into `target` were
/// undefined (never preferred) and defaulted to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiningWarning {
    pub target: usize,
}

impl std::fmt::Display for MiningWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "r{} is preferred by no user; dependencies on it default to strength 0",
            self.target + 1
        )
    }
}

/// Mines a dependency graph for `catalog` from user preferences: each
/// off-diagonal strength is the mapped causal strength, the diagonal stays
/// 0, and undefined cells become 0 with a warning per affected target.
pub fn frig_from_preferences(
    catalog: &[Requirement],
    prefs: &PreferenceMatrix,
    mapping: &MembershipMapping,
) -> Result<(Frig, Vec<MiningWarning>), MiningError> {
    if catalog.len() != prefs.n_requirements() {
        return Err(MiningError::DimensionMismatch {
            catalog: catalog.len(),
            matrix: prefs.n_requirements(),
        });
    }
    let eta = pearl_strength(prefs);
    let n = catalog.len();
    let mut rho = StrengthMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(eta) = eta.get(i, j) {
                rho[(i, j)] = map_strength(eta, mapping)?;
            }
        }
    }
    let warnings = eta
        .undefined_targets()
        .iter()
        .map(|&target| MiningWarning { target })
        .collect();
    let frig = Frig::new(catalog.to_vec(), rho)
        .expect("mapped strengths stay within [0, 1] over a valid catalog");
    Ok((frig, warnings))
}
