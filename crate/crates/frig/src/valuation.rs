//! Dependency-aware valuation of requirement selections.
//!
//! A selection splits the catalog into selected and excluded requirements.
//! Each selected requirement is impacted by the strongest closure path
//! into the excluded set; its customer value is the estimated value
//! discounted by that impact. The overall value of a selection accumulates
//! customer values, the accumulated value sums raw estimates.

use std::fmt;

use thiserror::Error;

use crate::graph::{Frig, Requirement, StrengthClosure};

#[derive(Debug, Error, PartialEq)]
pub enum ValuationError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("impact {impact} is outside [0, 1]")]
    ImpactOutOfRange { impact: f64 },
    #[error("selection costs {ac}, over the budget {budget}")]
    InfeasibleSelection { ac: u64, budget: u64 },
}

/// An indicator vector over a requirement catalog: `true` = selected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    flags: Vec<bool>,
}

impl Selection {
    pub fn empty(n: usize) -> Self {
        Selection {
            flags: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        Selection {
            flags: vec![true; n],
        }
    }

    pub fn from_flags(flags: Vec<bool>) -> Self {
        Selection { flags }
    }

    /// Selection over `n` requirements containing exactly `indices`.
    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mut flags = vec![false; n];
        for &i in indices {
            flags[i] = true;
        }
        Selection { flags }
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn is_selected(&self, i: usize) -> bool {
        self.flags[i]
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
    }

    pub fn excluded(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(i, &s)| (!s).then_some(i))
    }

    pub fn count_selected(&self) -> usize {
        self.flags.iter().filter(|&&s| s).count()
    }

    /// Member list in solution-table style: `{r1,r3}`.
    pub fn member_names(&self) -> String {
        let names: Vec<String> = self.selected().map(|i| format!("r{}", i + 1)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Prints the indicator vector in solution-table style: `{1,0,1,0}`.
impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, &s) in self.flags.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", s as u8)?;
        }
        write!(f, "}}")
    }
}

/// Per-requirement impacts of the excluded set, `I_i` in `[0, 1]`.
/// Excluded requirements always carry impact 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactVector {
    impacts: Vec<f64>,
}

impl ImpactVector {
    pub fn get(&self, i: usize) -> f64 {
        self.impacts[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.impacts
    }
}

/// Impact of the excluded set on each selected requirement: the maximum
/// overall strength from it to any excluded requirement.
///
/// Paths are taken on the full-graph closure; whether intermediate nodes
/// are themselves selected does not matter.
pub fn impact_vector(
    closure: &StrengthClosure,
    selection: &Selection,
) -> Result<ImpactVector, ValuationError> {
    let n = closure.n();
    if selection.len() != n {
        return Err(ValuationError::DimensionMismatch {
            expected: n,
            got: selection.len(),
        });
    }
    let mut impacts = vec![0.0; n];
    for (i, slot) in impacts.iter_mut().enumerate() {
        if !selection.is_selected(i) {
            continue;
        }
        let mut impact = 0.0f64;
        for j in 0..n {
            if !selection.is_selected(j) {
                impact = impact.max(closure.strength(i, j));
            }
        }
        *slot = impact;
    }
    Ok(ImpactVector { impacts })
}

/// Customer value of one requirement: `v * (1 - impact)`.
pub fn customer_value(value: f64, impact: f64) -> Result<f64, ValuationError> {
    if !(0.0..=1.0).contains(&impact) || impact.is_nan() {
        return Err(ValuationError::ImpactOutOfRange { impact });
    }
    Ok(value * (1.0 - impact))
}

/// Accumulated cost and accumulated value of a selection.
pub fn accumulated(
    catalog: &[Requirement],
    selection: &Selection,
) -> Result<(u64, f64), ValuationError> {
    if selection.len() != catalog.len() {
        return Err(ValuationError::DimensionMismatch {
            expected: catalog.len(),
            got: selection.len(),
        });
    }
    let mut ac = 0u64;
    let mut av = 0.0f64;
    for i in selection.selected() {
        ac += catalog[i].cost;
        av += catalog[i].value;
    }
    Ok((ac, av))
}

/// Overall value of a selection: the customer values of selected
/// requirements summed in catalog order.
pub fn overall_value(
    catalog: &[Requirement],
    closure: &StrengthClosure,
    selection: &Selection,
) -> Result<f64, ValuationError> {
    if catalog.len() != closure.n() {
        return Err(ValuationError::DimensionMismatch {
            expected: closure.n(),
            got: catalog.len(),
        });
    }
    let impacts = impact_vector(closure, selection)?;
    let mut ov = 0.0;
    for i in selection.selected() {
        ov += catalog[i].value * (1.0 - impacts.get(i));
    }
    Ok(ov)
}

/// Everything the valuation derives for one selection.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated {
    pub ac: u64,
    pub av: f64,
    pub ov: f64,
    pub impacts: ImpactVector,
}

pub fn evaluate(
    catalog: &[Requirement],
    closure: &StrengthClosure,
    selection: &Selection,
) -> Result<Evaluated, ValuationError> {
    let (ac, av) = accumulated(catalog, selection)?;
    let impacts = impact_vector(closure, selection)?;
    let mut ov = 0.0;
    for i in selection.selected() {
        ov += catalog[i].value * (1.0 - impacts.get(i));
    }
    Ok(Evaluated {
        ac,
        av,
        ov,
        impacts,
    })
}

/// Ratio of `x` to `total` as a percentage; 0 when the total is 0.
pub fn percent(x: f64, total: f64) -> f64 {
    if total == 0.0 {
        0.0
    } else {
        100.0 * x / total
    }
}

/// Outcome of a selection deficiency check.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpOutcome {
    pub occurs: bool,
    /// First witness pair `(i, j)` in lexicographic order when the
    /// condition holds: an excluded explicit dependency whose source fits
    /// the remaining budget but whose source + target does not.
    pub witness: Option<(usize, usize)>,
}

/// Checks the selection deficiency condition for a feasible selection:
/// some excluded pair `(r_i, r_j)` with an explicit dependency where
/// `AC + c_i <= budget` and `AC + c_i + c_j > budget`.
pub fn sdp_check(
    frig: &Frig,
    selection: &Selection,
    budget: u64,
) -> Result<SdpOutcome, ValuationError> {
    let catalog = frig.requirements();
    let (ac, _) = accumulated(catalog, selection)?;
    if ac > budget {
        return Err(ValuationError::InfeasibleSelection { ac, budget });
    }
    for i in selection.excluded() {
        for j in selection.excluded() {
            if i == j || frig.strength(i, j) <= 0.0 {
                continue;
            }
            if ac + catalog[i].cost <= budget && ac + catalog[i].cost + catalog[j].cost > budget {
                return Ok(SdpOutcome {
                    occurs: true,
                    witness: Some((i, j)),
                });
            }
        }
    }
    Ok(SdpOutcome {
        occurs: false,
        witness: None,
    })
}
