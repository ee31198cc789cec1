//! Argument surface and command implementations.
//!
//! Exit codes form a total mapping from outcomes: 0 optimal, 2 infeasible,
//! 3 unbounded, 4 not converged, 5 parse or model error, 6 usage error.
//! Code 1 is reserved for unexpected internal failures.

use crate::geometry::{self, Geometry};
use crate::problem_file::{self, ParseError};
use crate::report::{self, CertificateDoc, Row, SolveDoc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use robustlp::{
    grid_points, refine_until_stable, solve_by_cuts, solve_interval, solve_nominal,
    solve_scenario, CutOptions, GridSpec, RobustSolution, Sense, SimplexError, SolveError,
    SolveStatus, UncertainLP,
};
use std::path::PathBuf;
use std::time::Instant;

pub const EXIT_OPTIMAL: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_UNBOUNDED: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
pub const EXIT_PARSE: i32 = 5;
pub const EXIT_USAGE: i32 = 6;

#[derive(Parser)]
#[command(
    name = "robustlp",
    version,
    about = "Solve linear programs whose constraint data ranges over boxes, ellipsoids or scenario lists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Solve one problem file with one method
    Solve(SolveArgs),
    /// Sweep region geometries and methods, emitting one row per cell
    Compare(CompareArgs),
    /// Emit perturbation grid points for plotting
    PlotData(PlotDataArgs),
    /// Parse a problem file and report model issues
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Ignore uncertainty, solve the nominal rows
    Nominal,
    /// Expand finite scenario lists exactly
    Scenario,
    /// Exact linear counterpart of box sets
    Interval,
    /// Cutting planes from closed-form worst cases; any set kind
    EllipsoidCuts,
    /// Realize rows on refining perturbation grids
    Grid,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Nominal => "nominal",
            MethodArg::Scenario => "scenario",
            MethodArg::Interval => "interval",
            MethodArg::EllipsoidCuts => "ellipsoid-cuts",
            MethodArg::Grid => "grid",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Table,
    Csv,
    Json,
}

#[derive(Args)]
pub struct MethodOptions {
    /// Decimal places in tables; also the grid refinement stopping digits
    #[arg(long, default_value_t = 4)]
    pub decimals: u32,
    /// Worst-case violation below which the cut loop stops
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    /// Cut rounds before giving up
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Starting grid resolution (points per axis)
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    /// Grid refinement solves before giving up; each step maps g to 2g-1
    #[arg(long, default_value_t = 6)]
    pub refine_steps: usize,
}

#[derive(Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long, value_enum)]
    pub method: MethodArg,
    #[command(flatten)]
    pub options: MethodOptions,
    /// Write the result here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    pub format: FormatArg,
    /// Report zero seconds so equal inputs give byte-identical output
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args)]
pub struct CompareArgs {
    pub file: PathBuf,
    /// Comma-separated regions swept over the uncertain constraints,
    /// e.g. box(1x1),box(2x1),ellipse(2x2)
    #[arg(long, value_delimiter = ',', required = true)]
    pub geometries: Vec<String>,
    /// Methods run per geometry
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [MethodArg::EllipsoidCuts, MethodArg::Grid])]
    pub methods: Vec<MethodArg>,
    /// Objective spread within one geometry that flags a MISMATCH row
    #[arg(long, default_value_t = 1e-3)]
    pub mismatch_tol: f64,
    #[command(flatten)]
    pub options: MethodOptions,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Report zero seconds so equal inputs give byte-identical output
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args)]
pub struct PlotDataArgs {
    pub file: PathBuf,
    /// Which constraint's region to sample
    #[arg(long, default_value_t = 0)]
    pub constraint: usize,
    /// Points per axis
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    /// Additional region sampled into the same output, e.g. ellipse(2x2)
    #[arg(long)]
    pub also: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
}

enum Failure {
    Parse(String),
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Parse(m) | Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e.to_string())
    }
}

/// Incompatible method and set kind is a usage error; exhausted iteration
/// budgets mean the answer is not settled; the rest are input problems.
fn solve_failure(e: SolveError) -> Failure {
    match e {
        SolveError::Reformulation(robustlp::ReformulationError::WrongSetKind {
            constraint,
            expected,
            found,
            ..
        }) => Failure::Usage(format!(
            "constraint {constraint} ranges over a {found} set, but this method handles \
             {expected} sets; ellipsoid-cuts and grid accept any kind"
        )),
        SolveError::InvalidOptions(_) => Failure::Usage(e.to_string()),
        SolveError::Simplex(SimplexError::IterationLimit { .. }) => Failure::Internal(e.to_string()),
        SolveError::Simplex(_) => Failure::Internal(e.to_string()),
        _ => Failure::Parse(e.to_string()),
    }
}

pub fn dispatch(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Compare(args) => cmd_compare(args),
        Command::PlotData(args) => cmd_plot_data(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn exit_for(status: SolveStatus) -> i32 {
    match status {
        SolveStatus::Optimal => EXIT_OPTIMAL,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::Unbounded => EXIT_UNBOUNDED,
        SolveStatus::NotConverged => EXIT_NOT_CONVERGED,
    }
}

fn run_method(
    problem: &UncertainLP,
    method: MethodArg,
    options: &MethodOptions,
) -> Result<RobustSolution, SolveError> {
    match method {
        MethodArg::Nominal => solve_nominal(problem),
        MethodArg::Scenario => solve_scenario(problem),
        MethodArg::Interval => solve_interval(problem),
        MethodArg::EllipsoidCuts => {
            let opts = CutOptions { eps: options.eps, max_iter: options.max_iter };
            solve_by_cuts(problem, &opts).map(|(sol, _)| sol)
        }
        MethodArg::Grid => {
            let spec = GridSpec::with_resolution(options.grid);
            let (mut sol, trace) =
                refine_until_stable(problem, &spec, options.decimals, options.refine_steps)?;
            // an optimal grid value that stopped moving is trusted; one that
            // ran out of refinement steps is not a settled robust optimum
            if !trace.converged && sol.status == SolveStatus::Optimal {
                sol.status = SolveStatus::NotConverged;
            }
            Ok(sol)
        }
    }
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            // a closed pipe downstream (e.g. `| head`) is not our error
            use std::io::Write;
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32, Failure> {
    let loaded = problem_file::load(&args.file)?;
    let started = Instant::now();
    let sol = run_method(&loaded.problem, args.method, &args.options).map_err(solve_failure)?;
    let seconds = if args.deterministic { 0.0 } else { started.elapsed().as_secs_f64() };
    let doc = SolveDoc {
        instance: loaded.name,
        geometry: geometry::describe(&loaded.problem),
        method: args.method.name().to_string(),
        status: sol.status.name().to_string(),
        objective: sol.objective,
        x: sol.x.clone(),
        certificates: sol
            .certificates
            .iter()
            .map(|c| CertificateDoc { constraint: c.constraint, xi: c.xi.clone() })
            .collect(),
        constraints: sol.diagnostics.constraint_count,
        iterations: sol.diagnostics.iterations,
        pivots: sol.diagnostics.pivots,
        seconds,
    };
    let text = match args.format {
        FormatArg::Table => report::solve_table(&doc, args.options.decimals),
        FormatArg::Csv => report::solve_csv(&doc),
        FormatArg::Json => report::solve_json(&doc),
    };
    write_out(&args.out, &text)?;
    Ok(exit_for(sol.status))
}

struct Cell {
    geometry: Geometry,
    method: MethodArg,
}

fn run_cell(
    instance: &str,
    problem: &UncertainLP,
    cell: &Cell,
    options: &MethodOptions,
    deterministic: bool,
) -> Row {
    let started = Instant::now();
    let outcome = geometry::apply(problem, &cell.geometry)
        .map_err(|m| Failure::Usage(m))
        .and_then(|p| run_method(&p, cell.method, options).map_err(solve_failure));
    let seconds = if deterministic { 0.0 } else { started.elapsed().as_secs_f64() };
    match outcome {
        Ok(sol) => Row {
            instance: instance.to_string(),
            geometry: cell.geometry.label(),
            method: cell.method.name().to_string(),
            objective: sol.objective,
            constraints: sol.diagnostics.constraint_count,
            iterations: sol.diagnostics.iterations,
            seconds,
            status: sol.status.name().to_string(),
        },
        Err(f) => {
            eprintln!("cell {} {}: {}", cell.geometry.label(), cell.method.name(), f.message());
            Row {
                instance: instance.to_string(),
                geometry: cell.geometry.label(),
                method: cell.method.name().to_string(),
                objective: None,
                constraints: 0,
                iterations: 0,
                seconds,
                status: "error".to_string(),
            }
        }
    }
}

fn cells_in_order(
    instance: &str,
    problem: &UncertainLP,
    cells: &[Cell],
    options: &MethodOptions,
    deterministic: bool,
) -> Vec<Row> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        cells
            .par_iter()
            .map(|c| run_cell(instance, problem, c, options, deterministic))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cells
            .iter()
            .map(|c| run_cell(instance, problem, c, options, deterministic))
            .collect()
    }
}

fn cmd_compare(args: CompareArgs) -> Result<i32, Failure> {
    let loaded = problem_file::load(&args.file)?;
    if args.mismatch_tol < 0.0 {
        return Err(Failure::Usage("mismatch tolerance must be >= 0".into()));
    }
    let geometries: Vec<Geometry> = args
        .geometries
        .iter()
        .map(|s| Geometry::parse(s).map_err(Failure::Usage))
        .collect::<Result<_, _>>()?;
    let cells: Vec<Cell> = geometries
        .iter()
        .flat_map(|&geometry| {
            args.methods.iter().map(move |&method| Cell { geometry, method })
        })
        .collect();
    let per_cell = cells_in_order(&loaded.name, &loaded.problem, &cells, &args.options, args.deterministic);

    // cell rows in sweep order, a MISMATCH row after any geometry whose
    // optimal cells disagree beyond the tolerance
    let mut rows = Vec::with_capacity(per_cell.len() + geometries.len());
    let per_geometry = args.methods.len().max(1);
    for (g, chunk) in per_cell.chunks(per_geometry).enumerate() {
        rows.extend(chunk.iter().cloned());
        let optima: Vec<f64> = chunk
            .iter()
            .filter(|r| r.status == "optimal")
            .filter_map(|r| r.objective)
            .collect();
        if optima.len() >= 2 {
            let max = optima.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = optima.iter().cloned().fold(f64::INFINITY, f64::min);
            if max - min > args.mismatch_tol {
                rows.push(Row {
                    instance: loaded.name.clone(),
                    geometry: geometries[g].label(),
                    method: "MISMATCH".to_string(),
                    objective: Some(max - min),
                    constraints: optima.len(),
                    iterations: 0,
                    seconds: 0.0,
                    status: "mismatch".to_string(),
                });
            }
        }
    }

    // one monotonicity verdict per set kind and method, in sweep order; the
    // sweep is expected to go from smaller regions to larger ones
    for kind in ["box", "ellipse"] {
        for &method in &args.methods {
            let values: Vec<f64> = per_cell
                .iter()
                .enumerate()
                .filter(|(i, r)| {
                    geometries[i / per_geometry].kind() == kind
                        && r.method == method.name()
                        && r.status == "optimal"
                })
                .filter_map(|(_, r)| r.objective)
                .collect();
            if values.len() < 2 {
                continue;
            }
            let tol = 1e-9;
            let monotone = values.windows(2).all(|w| match loaded.problem.sense {
                Sense::Maximize => w[1] <= w[0] + tol,
                Sense::Minimize => w[1] >= w[0] - tol,
            });
            rows.push(Row {
                instance: loaded.name.clone(),
                geometry: format!("monotonicity({kind})"),
                method: method.name().to_string(),
                objective: None,
                constraints: values.len(),
                iterations: 0,
                seconds: 0.0,
                status: if monotone { "monotone" } else { "non-monotone" }.to_string(),
            });
        }
    }

    let text = match args.format {
        FormatArg::Csv => report::csv(&rows),
        FormatArg::Table => report::rows_table(&rows),
        FormatArg::Json => report::rows_json(&rows),
    };
    write_out(&args.out, &text)?;
    Ok(EXIT_OPTIMAL)
}

fn cmd_plot_data(args: PlotDataArgs) -> Result<i32, Failure> {
    let loaded = problem_file::load(&args.file)?;
    let constraint = loaded
        .problem
        .constraints
        .get(args.constraint)
        .ok_or_else(|| {
            Failure::Usage(format!(
                "constraint {} out of range, the file has {}",
                args.constraint,
                loaded.problem.constraints.len()
            ))
        })?;
    let set = &constraint.perturbation.set;
    if set.dimension() != 2 {
        return Err(Failure::Usage(format!(
            "plot-data needs a two-component region, constraint {} has {}",
            args.constraint,
            set.dimension()
        )));
    }
    let mut clouds = vec![(geometry::set_label(set), set.clone())];
    if let Some(also) = &args.also {
        let g = Geometry::parse(also).map_err(Failure::Usage)?;
        clouds.push((g.label(), g.to_set().map_err(Failure::Usage)?));
    }
    let spec = GridSpec::with_resolution(args.grid);
    let mut text = String::new();
    for (label, set) in &clouds {
        for point in grid_points(set, &spec) {
            text.push_str(&format!(
                "{} {} {}\n",
                report::fmt_g6(point[0]),
                report::fmt_g6(point[1]),
                label
            ));
        }
    }
    write_out(&args.out, &text)?;
    Ok(EXIT_OPTIMAL)
}

fn cmd_validate(args: ValidateArgs) -> Result<i32, Failure> {
    let (loaded, issues) = problem_file::load_lenient(&args.file)?;
    if issues.is_empty() {
        let text = format!(
            "ok: {} with {} variables, {} constraints\n",
            loaded.name,
            loaded.problem.num_vars(),
            loaded.problem.constraints.len()
        );
        write_out(&None, &text)?;
        return Ok(EXIT_OPTIMAL);
    }
    let mut text = String::new();
    for issue in &issues {
        text.push_str(&format!("{issue}\n"));
    }
    write_out(&None, &text)?;
    Ok(EXIT_PARSE)
}
