//! Command-line interface.
//!
//! Exit codes: 0 success, 2 usage errors (via clap), 3 data or file
//! validation errors, 4 violated computational preconditions.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::datasets::Dataset;
use crate::graph::{closure, loi, total_value, Frig};
use crate::io::{
    load_frig, load_preferences, parse_selection, save_frig, FrigFileError, PrefsFileError,
    SelectionParseError,
};
use crate::mining::{frig_from_preferences, MembershipMapping, MiningError};
use crate::simulation::{
    run_sweep, write_surface_csv, DatasetSpec, SimulationConfig, SimulationError,
};
use crate::solvers::{
    bkp_solve, bkppc_solve, brute_force_solve, gors_solve, ModelKind, SolveResult,
};
use crate::valuation::{evaluate, percent, sdp_check, Selection, ValuationError};

#[derive(Debug, Parser)]
#[command(
    name = "frig",
    version,
    about = "Fuzzy requirement dependency graphs and dependency-aware release planning"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the overall dependency strengths (max-min closure) of a graph
    Closure {
        /// FRIG JSON file or embedded dataset id (example3|ran|pmr|pms)
        frig: String,
    },
    /// Print the level of interdependency of a graph
    Loi { frig: String },
    /// Evaluate one selection: accumulated cost/value, overall value, impacts
    Evaluate {
        frig: String,
        /// Indicator vector, e.g. {1,0,1,0} or 1010
        #[arg(long)]
        select: String,
    },
    /// Solve a selection model exactly for one budget
    Select {
        frig: String,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        budget: u64,
        /// Strength above which a dependency becomes a precedence
        /// constraint (bkp-pc only)
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        /// Cross-check the result against exhaustive enumeration (n <= 20)
        #[arg(long)]
        verify: bool,
    },
    /// Random-strength sweep over budgets and interdependency levels
    Sweep {
        /// Catalog: ran, pmr, pms, example3, or a FRIG JSON path
        #[arg(long)]
        dataset: String,
        #[arg(long)]
        seed: u64,
        /// Comma-separated levels in [0,1]; default 0,0.1,...,1.0
        #[arg(long, value_delimiter = ',')]
        loi_levels: Option<Vec<f64>>,
        /// Either lo..hi (inclusive) or a comma list; default 1..120
        #[arg(long)]
        budgets: Option<String>,
        #[arg(long, default_value_t = 1)]
        replications: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mine dependency strengths from a user-preference matrix
    Mine {
        /// Preference CSV: header of user ids, then req_id,0/1,... rows
        #[arg(long)]
        prefs: PathBuf,
        /// Catalog supplying values and costs: file path or dataset id
        #[arg(long)]
        catalog: String,
        /// linear | clipped:lo,hi | smooth:lo,hi
        #[arg(long, default_value = "linear", value_parser = parse_mapping)]
        mapping: MembershipMapping,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the selection-deficiency condition for a selection and budget
    Sdp {
        frig: String,
        #[arg(long)]
        select: String,
        #[arg(long)]
        budget: u64,
    },
    /// Export an embedded dataset as FRIG JSON
    Dataset {
        #[arg(value_enum)]
        id: DatasetArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Regenerate the closure, subset-valuation, and case-study tables as CSV
    ReproduceTables {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelArg {
    Bkp,
    BkpPc,
    Gors,
}

impl ModelArg {
    fn kind(self) -> ModelKind {
        match self {
            ModelArg::Bkp => ModelKind::Bkp,
            ModelArg::BkpPc => ModelKind::BkpPc,
            ModelArg::Gors => ModelKind::Gors,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DatasetArg {
    Example3,
    Ran,
    Pmr,
    Pms,
}

impl DatasetArg {
    fn dataset(self) -> Dataset {
        match self {
            DatasetArg::Example3 => Dataset::Example3,
            DatasetArg::Ran => Dataset::Ran,
            DatasetArg::Pmr => Dataset::Pmr,
            DatasetArg::Pms => Dataset::Pms,
        }
    }
}

/// Errors past argument parsing, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Broken input data or files; exit code 3.
    Data(String),
    /// Violated computational precondition; exit code 4.
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Data(m) | CliError::Precondition(m) => f.write_str(m),
        }
    }
}

impl From<FrigFileError> for CliError {
    fn from(e: FrigFileError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<PrefsFileError> for CliError {
    fn from(e: PrefsFileError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<SelectionParseError> for CliError {
    fn from(e: SelectionParseError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<MiningError> for CliError {
    fn from(e: MiningError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ValuationError> for CliError {
    fn from(e: ValuationError) -> Self {
        match e {
            ValuationError::InfeasibleSelection { .. }
            | ValuationError::ImpactOutOfRange { .. } => CliError::Precondition(e.to_string()),
            ValuationError::DimensionMismatch { .. } => CliError::Data(e.to_string()),
        }
    }
}

impl From<SimulationError> for CliError {
    fn from(e: SimulationError) -> Self {
        match e {
            SimulationError::UnknownDataset(_) | SimulationError::DatasetLoad { .. } => {
                CliError::Data(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<crate::graph::GraphError> for CliError {
    fn from(e: crate::graph::GraphError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<crate::solvers::SolverError> for CliError {
    fn from(e: crate::solvers::SolverError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("cannot write {}: {e}", path.display()))
}

/// Resolves a positional graph argument: embedded dataset id or file path.
fn resolve_frig(arg: &str) -> Result<Frig, CliError> {
    match Dataset::from_id(arg) {
        Some(dataset) => Ok(dataset.frig()),
        None => Ok(load_frig(arg)?),
    }
}

fn parse_mapping(text: &str) -> Result<MembershipMapping, String> {
    if text == "linear" {
        return Ok(MembershipMapping::Linear);
    }
    let (kind, bounds) = text.split_once(':').ok_or_else(|| {
        format!("unknown mapping {text:?}; expected linear, clipped:lo,hi, or smooth:lo,hi")
    })?;
    let (lo, hi) = bounds
        .split_once(',')
        .ok_or_else(|| format!("mapping bounds {bounds:?} must be lo,hi"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad bound {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad bound {hi:?}"))?;
    match kind {
        "clipped" => MembershipMapping::clipped_linear(lo, hi).map_err(|e| e.to_string()),
        "smooth" => MembershipMapping::smoothstep(lo, hi).map_err(|e| e.to_string()),
        other => Err(format!("unknown mapping kind {other:?}")),
    }
}

/// Parses a budget set: inclusive range `lo..hi` or comma list.
fn parse_budgets(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = |m: String| CliError::Data(m);
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad budget bound {lo:?}")))?;
        let hi: u64 = hi
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad budget bound {hi:?}")))?;
        if lo > hi {
            return Err(bad(format!("empty budget range {text:?}")));
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|f| {
            f.trim()
                .parse()
                .map_err(|_| bad(format!("bad budget {f:?}")))
        })
        .collect()
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Closure { frig } => {
            let frig = resolve_frig(&frig)?;
            let rho_inf = closure(&frig);
            for i in 0..frig.len() {
                let row: Vec<String> = (0..frig.len())
                    .map(|j| format!("{:.4}", rho_inf.strength(i, j)))
                    .collect();
                println!("{}", row.join(" "));
            }
            Ok(())
        }
        Command::Loi { frig } => {
            let frig = resolve_frig(&frig)?;
            let n = frig.len();
            let level = loi(&frig)?;
            println!("edges: {}", frig.edge_count());
            println!("pairs: {}", n * (n - 1));
            println!("LOI: {level}");
            Ok(())
        }
        Command::Evaluate { frig, select } => {
            let frig = resolve_frig(&frig)?;
            let selection = parse_selection(&select, frig.len())?;
            let rho_inf = closure(&frig);
            let e = evaluate(frig.requirements(), &rho_inf, &selection)?;
            println!("vector: {selection}");
            println!("selected: {}", selection.member_names());
            println!("AC: {}", e.ac);
            println!("AV: {:.4}", e.av);
            println!("OV: {:.4}", e.ov);
            let impacts: Vec<String> = e
                .impacts
                .as_slice()
                .iter()
                .map(|i| format!("{i:.4}"))
                .collect();
            println!("impacts: {{{}}}", impacts.join(","));
            Ok(())
        }
        Command::Select {
            frig,
            model,
            budget,
            threshold,
            verify,
        } => {
            let frig = resolve_frig(&frig)?;
            if !(0.0..=1.0).contains(&threshold) {
                return Err(CliError::Precondition(format!(
                    "threshold {threshold} is outside [0, 1]"
                )));
            }
            let result = match model.kind() {
                ModelKind::Bkp => bkp_solve(frig.requirements(), budget),
                ModelKind::BkpPc => bkppc_solve(&frig, budget, threshold),
                ModelKind::Gors => gors_solve(&frig, budget),
            };
            if verify {
                let oracle = brute_force_solve(&frig, budget, result.model)?;
                if (oracle.objective - result.objective).abs() > 1e-9 {
                    return Err(CliError::Precondition(format!(
                        "solver/oracle mismatch: {} vs {}",
                        result.objective, oracle.objective
                    )));
                }
                println!("verified: objective matches exhaustive enumeration");
            }
            print_result(&frig, &result);
            Ok(())
        }
        Command::Sweep {
            dataset,
            seed,
            loi_levels,
            budgets,
            replications,
            out,
        } => {
            let mut config = SimulationConfig::new(DatasetSpec::parse(&dataset), seed);
            if let Some(levels) = loi_levels {
                config.loi_levels = levels;
            }
            if let Some(text) = budgets {
                config.budgets = parse_budgets(&text)?;
            }
            config.replications = replications;
            let cells = run_sweep(&config)?;
            let mut buffer = Vec::new();
            write_surface_csv(&cells, &mut buffer).expect("writing to memory cannot fail");
            fs::write(&out, buffer).map_err(|e| io_error(&out, e))?;
            println!("wrote {} cells to {}", cells.len(), out.display());
            Ok(())
        }
        Command::Mine {
            prefs,
            catalog,
            mapping,
            out,
        } => {
            let prefs = load_preferences(&prefs)?;
            let catalog = resolve_frig(&catalog)?.requirements().to_vec();
            let (frig, warnings) = frig_from_preferences(&catalog, &prefs, &mapping)?;
            for warning in &warnings {
                eprintln!("warning: {warning}");
            }
            save_frig(&frig, &out)?;
            println!(
                "mined {} dependencies over {} requirements into {}",
                frig.edge_count(),
                frig.len(),
                out.display()
            );
            Ok(())
        }
        Command::Sdp {
            frig,
            select,
            budget,
        } => {
            let frig = resolve_frig(&frig)?;
            let selection = parse_selection(&select, frig.len())?;
            let outcome = sdp_check(&frig, &selection, budget)?;
            if let Some((i, j)) = outcome.witness {
                println!("SDP: yes");
                println!("witness: (r{},r{})", i + 1, j + 1);
            } else {
                println!("SDP: no");
            }
            Ok(())
        }
        Command::Dataset { id, out } => {
            let frig = id.dataset().frig();
            save_frig(&frig, &out)?;
            println!("wrote {} to {}", id.dataset(), out.display());
            Ok(())
        }
        Command::ReproduceTables { out } => {
            fs::create_dir_all(&out).map_err(|e| io_error(&out, e))?;
            let table1 = out.join("table1.csv");
            fs::write(&table1, closure_table()).map_err(|e| io_error(&table1, e))?;
            let table2 = out.join("table2.csv");
            fs::write(&table2, subset_table()).map_err(|e| io_error(&table2, e))?;
            let table4 = out.join("table4.csv");
            fs::write(&table4, case_study_table()).map_err(|e| io_error(&table4, e))?;
            println!(
                "wrote table1.csv, table2.csv, table4.csv to {}",
                out.display()
            );
            Ok(())
        }
    }
}

fn print_result(frig: &Frig, result: &SolveResult) {
    let rho_inf = closure(frig);
    let e = evaluate(frig.requirements(), &rho_inf, &result.selection)
        .expect("solver selections match their graph");
    let total = total_value(frig.requirements());
    println!("model: {}", result.model.kind());
    println!("budget: {}", result.budget);
    println!("vector: {}", result.selection);
    println!("selected: {}", result.selection.member_names());
    println!("AC: {}", e.ac);
    println!("AV: {:.4}", e.av);
    println!("OV: {:.4}", e.ov);
    println!("OV%: {:.2}", percent(e.ov, total));
    println!("objective: {:.4}", result.objective);
}

/// Budget column of the case-study solution table.
pub const CASE_STUDY_BUDGETS: [u64; 18] = [
    16, 46, 71, 76, 81, 141, 146, 151, 156, 161, 166, 171, 176, 181, 186, 191, 196, 246,
];

fn closure_table() -> String {
    let frig = Dataset::Example3.frig();
    let rho_inf = closure(&frig);
    let n = frig.len();
    let mut text = String::from("rho_inf");
    for j in 0..n {
        text.push_str(&format!(",r{}", j + 1));
    }
    text.push('\n');
    for i in 0..n {
        text.push_str(&format!("r{}", i + 1));
        for j in 0..n {
            text.push_str(&format!(",{}", rho_inf.strength(i, j)));
        }
        text.push('\n');
    }
    text
}

fn subset_table() -> String {
    let frig = Dataset::Example3.frig();
    let rho_inf = closure(&frig);
    let n = frig.len();

    // every subset in size-then-lex order, the conventional s_0..s_15
    // numbering
    let mut subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let mut text = String::from("subset,vector,AC,AV,OV\n");
    for (index, members) in subsets.iter().enumerate() {
        let selection = Selection::from_indices(n, members);
        let e = evaluate(frig.requirements(), &rho_inf, &selection).expect("matching sizes");
        let vector: String = selection
            .flags()
            .iter()
            .map(|&f| if f { '1' } else { '0' })
            .collect();
        text.push_str(&format!(
            "s{index},{vector},{},{:.4},{:.4}\n",
            e.ac, e.av, e.ov
        ));
    }
    text
}

fn case_study_table() -> String {
    let frig = Dataset::Pms.frig();
    let rho_inf = closure(&frig);
    let total = total_value(frig.requirements());
    let mut text = String::from("budget,model,ov_pct,vector\n");
    for budget in CASE_STUDY_BUDGETS {
        for kind in ModelKind::ALL {
            let result = match kind {
                ModelKind::Bkp => bkp_solve(frig.requirements(), budget),
                ModelKind::BkpPc => bkppc_solve(&frig, budget, 0.0),
                ModelKind::Gors => gors_solve(&frig, budget),
            };
            let e = evaluate(frig.requirements(), &rho_inf, &result.selection)
                .expect("solver selections match their graph");
            let vector: String = result
                .selection
                .flags()
                .iter()
                .map(|&f| if f { '1' } else { '0' })
                .collect();
            text.push_str(&format!(
                "{budget},{kind},{:.2},{vector}\n",
                percent(e.ov, total)
            ));
        }
    }
    text
}
