//! Method-independent solution reporting.
//!
//! Every solve path (nominal, scenario expansion, interval counterpart,
//! cutting planes, grids) funnels into [`RobustSolution`] so callers compare
//! methods without caring how the answer was produced.

use crate::cuts::worst_case_perturbation;
use crate::model::UncertainLP;
use crate::reformulation::ReformulationError;
use crate::simplex::{solve_lp, LinearProgram, LpStatus, RowRelation, SimplexError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration or refinement budget ran out before the answer stabilized.
    NotConverged,
}

impl SolveStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::NotConverged => "not-converged",
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Nominal,
    Scenario,
    Interval,
    /// Pessimization-driven cutting planes. Named for its primary use on ball
    /// sets; the loop itself accepts any set kind.
    EllipsoidCuts,
    Grid,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Nominal => "nominal",
            Method::Scenario => "scenario",
            Method::Interval => "interval",
            Method::EllipsoidCuts => "ellipsoid-cuts",
            Method::Grid => "grid",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete perturbation that is (near) binding at the reported solution:
/// evidence that the robust value cannot be improved just by ignoring some of
/// the uncertainty.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub constraint: usize,
    pub xi: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Method-level iterations: cut rounds, grid refinement steps, or simplex
    /// pivots for one-shot solves.
    pub iterations: usize,
    /// Simplex pivots across every LP solved on the way.
    pub pivots: usize,
    pub grid_resolution: Option<usize>,
    /// Rows handed to the LP before duplicate removal.
    pub constraint_count: usize,
    pub deduped_constraint_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobustSolution {
    pub status: SolveStatus,
    pub x: Option<Vec<f64>>,
    pub objective: Option<f64>,
    pub method: Method,
    pub certificates: Vec<Realization>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Simplex(#[from] SimplexError),
    #[error(transparent)]
    Reformulation(#[from] ReformulationError),
    #[error("problem failed validation: {0}")]
    InvalidProblem(String),
    #[error("invalid options: {0}")]
    InvalidOptions(String),
}

pub(crate) fn validate_or_err(problem: &UncertainLP) -> Result<(), SolveError> {
    match problem.validate().issues.first() {
        Some(issue) => Err(SolveError::InvalidProblem(issue.to_string())),
        None => Ok(()),
    }
}

pub(crate) fn from_lp_status(status: LpStatus) -> SolveStatus {
    match status {
        LpStatus::Optimal => SolveStatus::Optimal,
        LpStatus::Infeasible => SolveStatus::Infeasible,
        LpStatus::Unbounded => SolveStatus::Unbounded,
    }
}

/// Margin below which a worst-case realization counts as binding.
pub(crate) const BINDING_TOL: f64 = 1e-6;

pub(crate) fn binding_certificates(problem: &UncertainLP, x: &[f64]) -> Vec<Realization> {
    problem
        .constraints
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let w = worst_case_perturbation(&c.perturbation, x);
            (w.margin <= BINDING_TOL).then(|| Realization { constraint: i, xi: w.xi })
        })
        .collect()
}

/// The problem with every perturbation pinned to zero.
pub fn nominal_lp(problem: &UncertainLP) -> LinearProgram {
    let rows: Vec<Vec<f64>> = problem
        .constraints
        .iter()
        .map(|c| c.perturbation.nominal_row.clone())
        .collect();
    let rhs = problem
        .constraints
        .iter()
        .map(|c| c.perturbation.nominal_rhs)
        .collect();
    let nrows = rows.len();
    LinearProgram {
        sense: problem.sense,
        objective: problem.objective.clone(),
        rows,
        relations: vec![RowRelation::GreaterEqual; nrows],
        rhs,
        lower_bounds: problem.lower_bounds.clone(),
        upper_bounds: problem.upper_bounds.clone(),
    }
}

pub fn solve_nominal(problem: &UncertainLP) -> Result<RobustSolution, SolveError> {
    validate_or_err(problem)?;
    let lp = nominal_lp(problem);
    let r = solve_lp(&lp)?;
    Ok(RobustSolution {
        status: from_lp_status(r.status),
        x: r.x,
        objective: r.objective_value,
        method: Method::Nominal,
        certificates: Vec::new(),
        diagnostics: Diagnostics {
            iterations: r.iterations,
            pivots: r.iterations,
            grid_resolution: None,
            constraint_count: lp.rows.len(),
            deduped_constraint_count: None,
        },
    })
}

/// Exact solve through the scenario counterpart; every uncertain row must
/// carry a finite scenario list.
pub fn solve_scenario(problem: &UncertainLP) -> Result<RobustSolution, SolveError> {
    let lp = crate::reformulation::build_scenario_rc(problem)?;
    let r = solve_lp(&lp)?;
    let certificates = match &r.x {
        Some(x) => binding_certificates(problem, x),
        None => Vec::new(),
    };
    Ok(RobustSolution {
        status: from_lp_status(r.status),
        x: r.x,
        objective: r.objective_value,
        method: Method::Scenario,
        certificates,
        diagnostics: Diagnostics {
            iterations: r.iterations,
            pivots: r.iterations,
            grid_resolution: None,
            constraint_count: lp.rows.len(),
            deduped_constraint_count: None,
        },
    })
}

/// Exact solve through the interval counterpart; every uncertain row must
/// carry a box set. The absolute-value helper variables are stripped from the
/// reported point.
pub fn solve_interval(problem: &UncertainLP) -> Result<RobustSolution, SolveError> {
    let lp = crate::reformulation::build_interval_rc(problem)?;
    let r = solve_lp(&lp)?;
    let n = problem.num_vars();
    let x = r.x.map(|mut v| {
        v.truncate(n);
        v
    });
    let certificates = match &x {
        Some(x) => binding_certificates(problem, x),
        None => Vec::new(),
    };
    Ok(RobustSolution {
        status: from_lp_status(r.status),
        x,
        objective: r.objective_value,
        method: Method::Interval,
        certificates,
        diagnostics: Diagnostics {
            iterations: r.iterations,
            pivots: r.iterations,
            grid_resolution: None,
            constraint_count: lp.rows.len(),
            deduped_constraint_count: None,
        },
    })
}
