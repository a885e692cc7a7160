//! Randomized dependency sweeps over fixed catalogs.
//!
//! For each requested level of interdependency the sweep draws a random
//! dependency graph over the catalog, then solves every budget with all
//! three models and records accumulated- and overall-value percentages.
//! Randomness comes from a portable, counter-seeded ChaCha8 stream: every
//! (level, replication) cell derives its own seed from the master seed by
//! SplitMix64 mixing, so results never depend on execution order.

use std::io::{self, Write};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::datasets::Dataset;
use crate::graph::{total_value, Frig, Requirement, StrengthMatrix};
use crate::io::load_frig;
use crate::solvers::{bkp_solve, bkppc_solve, gors_solve, ModelKind};
use crate::valuation::{evaluate, percent};

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error("unknown dataset {0:?} (expected ran, pmr, pms, example3, or a FRIG file path)")]
    UnknownDataset(String),
    #[error("level of interdependency {0} is outside [0, 1]")]
    InvalidLoiLevel(f64),
    #[error("budgets must be positive, got {0}")]
    InvalidBudget(u64),
    #[error("at least one replication is required")]
    NoReplications,
    #[error("failed to load {path}: {source}")]
    DatasetLoad {
        path: PathBuf,
        source: crate::io::FrigFileError,
    },
}

/// Where a sweep takes its catalog from. Only the values and costs are
/// used; explicit dependencies are replaced by generated ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DatasetSpec {
    Embedded(Dataset),
    File(PathBuf),
}

impl DatasetSpec {
    pub fn parse(text: &str) -> Self {
        match Dataset::from_id(text) {
            Some(d) => DatasetSpec::Embedded(d),
            None => DatasetSpec::File(PathBuf::from(text)),
        }
    }

    pub fn load_catalog(&self) -> Result<Vec<Requirement>, SimulationError> {
        match self {
            DatasetSpec::Embedded(d) => Ok(d.frig().requirements().to_vec()),
            DatasetSpec::File(path) => {
                if !path.exists() {
                    return Err(SimulationError::UnknownDataset(path.display().to_string()));
                }
                let frig = load_frig(path).map_err(|source| SimulationError::DatasetLoad {
                    path: path.clone(),
                    source,
                })?;
                Ok(frig.requirements().to_vec())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub dataset: DatasetSpec,
    pub loi_levels: Vec<f64>,
    pub budgets: Vec<u64>,
    pub replications: u32,
    pub master_seed: u64,
}

impl SimulationConfig {
    /// Default sweep grid: levels 0, 0.1, ..., 1.0 and budgets 1..=120,
    /// one replication.
    pub fn new(dataset: DatasetSpec, master_seed: u64) -> Self {
        SimulationConfig {
            dataset,
            loi_levels: (0..=10).map(|i| i as f64 / 10.0).collect(),
            budgets: (1..=120).collect(),
            replications: 1,
            master_seed,
        }
    }

    fn validate(&self) -> Result<(), SimulationError> {
        for &level in &self.loi_levels {
            if !(0.0..=1.0).contains(&level) || level.is_nan() {
                return Err(SimulationError::InvalidLoiLevel(level));
            }
        }
        for &b in &self.budgets {
            if b == 0 {
                return Err(SimulationError::InvalidBudget(b));
            }
        }
        if self.replications == 0 {
            return Err(SimulationError::NoReplications);
        }
        Ok(())
    }
}

/// One solved (level, budget, model) point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceCell {
    pub loi: f64,
    pub budget: u64,
    pub model: ModelKind,
    pub replication: u32,
    pub seed: u64,
    pub av_pct: f64,
    pub ov_pct: f64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the graph drawn for one (level, replication) cell, derived
/// from the master seed by SplitMix64 chaining.
pub fn cell_seed(master_seed: u64, loi_index: usize, replication: u32) -> u64 {
    let a = splitmix64(master_seed);
    let b = splitmix64(a ^ loi_index as u64);
    splitmix64(b ^ u64::from(replication))
}

/// Draws a dependency graph over the catalog with exactly
/// `round(target_loi * n * (n - 1))` edges.
///
/// Edge positions come from a partial Fisher-Yates shuffle over the
/// ordered pairs; strengths are uniform on the half-open interval (0, 1],
/// so a drawn edge can never have the absent-edge strength 0.
pub fn generate_frig(catalog: &[Requirement], target_loi: f64, seed: u64) -> Frig {
    assert!(
        (0.0..=1.0).contains(&target_loi),
        "target LOI must lie in [0, 1], got {target_loi}"
    );
    let n = catalog.len();
    let pair_count = n * (n - 1);
    let k = (target_loi * pair_count as f64).round() as usize;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<usize> = (0..pair_count).collect();
    let mut rho = StrengthMatrix::zeros(n);
    for t in 0..k {
        let swap_with = t + rng.random_range(0..pair_count - t);
        pairs.swap(t, swap_with);
        let (from, offset) = (pairs[t] / (n - 1), pairs[t] % (n - 1));
        let to = if offset < from { offset } else { offset + 1 };
        rho[(from, to)] = 1.0 - rng.random::<f64>();
    }
    Frig::new(catalog.to_vec(), rho).expect("generated strengths satisfy the invariants")
}

/// Runs the full sweep: one generated graph per (level, replication),
/// all three models on every budget. Cells come back in deterministic
/// (level, replication, budget, model) order.
pub fn run_sweep(config: &SimulationConfig) -> Result<Vec<SurfaceCell>, SimulationError> {
    config.validate()?;
    let catalog = config.dataset.load_catalog()?;
    Ok(run_sweep_on(&catalog, config))
}

fn run_sweep_on(catalog: &[Requirement], config: &SimulationConfig) -> Vec<SurfaceCell> {
    let total = total_value(catalog);
    let mut cells = Vec::with_capacity(
        config.loi_levels.len()
            * config.replications as usize
            * config.budgets.len()
            * ModelKind::ALL.len(),
    );
    for (loi_index, &loi) in config.loi_levels.iter().enumerate() {
        for replication in 1..=config.replications {
            let seed = cell_seed(config.master_seed, loi_index, replication);
            let frig = generate_frig(catalog, loi, seed);
            let rho_inf = crate::graph::closure(&frig);
            for &budget in &config.budgets {
                for model in ModelKind::ALL {
                    let result = match model {
                        ModelKind::Bkp => bkp_solve(catalog, budget),
                        ModelKind::BkpPc => bkppc_solve(&frig, budget, 0.0),
                        ModelKind::Gors => gors_solve(&frig, budget),
                    };
                    let e = evaluate(catalog, &rho_inf, &result.selection)
                        .expect("solver selections match the catalog");
                    cells.push(SurfaceCell {
                        loi,
                        budget,
                        model,
                        replication,
                        seed,
                        av_pct: percent(e.av, total),
                        ov_pct: percent(e.ov, total),
                    });
                }
            }
        }
    }
    cells
}

/// Writes cells as CSV: `loi,budget,model,replication,seed,av_pct,ov_pct`,
/// percentages with four decimals.
pub fn write_surface_csv<W: Write>(cells: &[SurfaceCell], mut out: W) -> io::Result<()> {
    writeln!(out, "loi,budget,model,replication,seed,av_pct,ov_pct")?;
    for cell in cells {
        writeln!(
            out,
            "{},{},{},{},{},{:.4},{:.4}",
            cell.loi,
            cell.budget,
            cell.model,
            cell.replication,
            cell.seed,
            cell.av_pct,
            cell.ov_pct
        )?;
    }
    Ok(())
}
