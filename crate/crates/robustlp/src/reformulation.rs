//! Exact counterparts of uncertain programs.
//!
//! Each builder turns every uncertain `>=` row into constraints that hold for
//! all perturbations in its set:
//!
//! * scenario lists expand into one realized row per listed point,
//! * boxes linearize the worst case with one absolute-value variable per
//!   perturbation axis, and the protection is subtracted from the row,
//! * balls yield conic-quadratic rows, which are not an LP; they are kept as
//!   data for margin checks while the cutting-plane loop does the solving.
//!
//! Subtracting the protection term is the load-bearing sign: the worst case of
//! `a(xi).x >= b` over symmetric perturbations tightens the row, never relaxes
//! it.

use crate::cuts::worst_case_perturbation;
use crate::model::{dot, UncertainLP, UncertaintySet};
use crate::simplex::{LinearProgram, RowRelation};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReformulationError {
    #[error("constraint {constraint} ranges over a {found} set, not {expected}; use {hint} instead")]
    WrongSetKind {
        constraint: usize,
        expected: &'static str,
        found: &'static str,
        hint: &'static str,
    },
    #[error("problem failed validation: {0}")]
    InvalidProblem(String),
}

fn builder_for(kind: &str) -> &'static str {
    match kind {
        "box" => "build_interval_rc",
        "ball" => "build_ellipsoid_rc",
        _ => "build_scenario_rc",
    }
}

fn validated(problem: &UncertainLP) -> Result<(), ReformulationError> {
    let report = problem.validate();
    match report.issues.first() {
        Some(issue) => Err(ReformulationError::InvalidProblem(issue.to_string())),
        None => Ok(()),
    }
}

/// Counterpart of a problem whose uncertain rows carry scenario lists: one
/// realized row per listed perturbation. Certain rows pass through unchanged.
pub fn build_scenario_rc(problem: &UncertainLP) -> Result<LinearProgram, ReformulationError> {
    validated(problem)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (i, c) in problem.constraints.iter().enumerate() {
        let pm = &c.perturbation;
        if pm.directions.is_empty() {
            rows.push(pm.nominal_row.clone());
            rhs.push(pm.nominal_rhs);
            continue;
        }
        match &pm.set {
            UncertaintySet::Scenarios { points } => {
                for p in points {
                    let (row, b) = pm.instantiate(p).expect("validation fixed lengths");
                    rows.push(row);
                    rhs.push(b);
                }
            }
            other => {
                return Err(ReformulationError::WrongSetKind {
                    constraint: i,
                    expected: "scenarios",
                    found: other.kind(),
                    hint: builder_for(other.kind()),
                })
            }
        }
    }
    let nrows = rows.len();
    Ok(LinearProgram {
        sense: problem.sense,
        objective: problem.objective.clone(),
        rows,
        relations: vec![RowRelation::GreaterEqual; nrows],
        rhs,
        lower_bounds: problem.lower_bounds.clone(),
        upper_bounds: problem.upper_bounds.clone(),
    })
}

/// Counterpart for box (interval) uncertainty. Per uncertain row the result
/// has variables `u_l >= |a_l . x - b_l|` for every axis with a positive
/// half-width and the main row
///
/// `a0 . x - sum_l rho_l * u_l >= b0`.
///
/// Axes with zero half-width contribute nothing; a row whose half-widths are
/// all zero collapses to its nominal form.
pub fn build_interval_rc(problem: &UncertainLP) -> Result<LinearProgram, ReformulationError> {
    validated(problem)?;
    let n = problem.num_vars();
    // columns for the absolute-value variables, in (constraint, axis) order
    let mut extra = 0usize;
    for (i, c) in problem.constraints.iter().enumerate() {
        let pm = &c.perturbation;
        if pm.directions.is_empty() {
            continue;
        }
        match &pm.set {
            UncertaintySet::Box { half_widths } => {
                extra += half_widths.iter().filter(|w| **w > 0.0).count();
            }
            other => {
                return Err(ReformulationError::WrongSetKind {
                    constraint: i,
                    expected: "box",
                    found: other.kind(),
                    hint: builder_for(other.kind()),
                })
            }
        }
    }
    let total = n + extra;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut next_u = n;
    for c in &problem.constraints {
        let pm = &c.perturbation;
        if pm.directions.is_empty() {
            let mut row = vec![0.0; total];
            row[..n].copy_from_slice(&pm.nominal_row);
            rows.push(row);
            rhs.push(pm.nominal_rhs);
            continue;
        }
        let UncertaintySet::Box { half_widths } = &pm.set else { unreachable!() };
        let mut main = vec![0.0; total];
        main[..n].copy_from_slice(&pm.nominal_row);
        for (d, &w) in pm.directions.iter().zip(half_widths) {
            if w <= 0.0 {
                continue;
            }
            let u = next_u;
            next_u += 1;
            main[u] = -w;
            // u >= a_l . x - b_l
            let mut above = vec![0.0; total];
            for (dst, &v) in above[..n].iter_mut().zip(&d.row) {
                *dst = -v;
            }
            above[u] = 1.0;
            rows.push(above);
            rhs.push(-d.rhs);
            // u >= -(a_l . x - b_l)
            let mut below = vec![0.0; total];
            below[..n].copy_from_slice(&d.row);
            below[u] = 1.0;
            rows.push(below);
            rhs.push(d.rhs);
        }
        rows.push(main);
        rhs.push(pm.nominal_rhs);
    }
    debug_assert_eq!(next_u, total);
    let mut objective = problem.objective.clone();
    objective.resize(total, 0.0);
    let mut lower = problem.lower_bounds.clone();
    lower.resize(total, 0.0);
    let mut upper = problem.upper_bounds.clone();
    upper.resize(total, f64::INFINITY);
    let nrows = rows.len();
    Ok(LinearProgram {
        sense: problem.sense,
        objective,
        rows,
        relations: vec![RowRelation::GreaterEqual; nrows],
        rhs,
        lower_bounds: lower,
        upper_bounds: upper,
    })
}

/// One robustified row under ball uncertainty:
/// `linear . x - rhs - radius * || (term_rows . x - term_rhs) ||_2 >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicQuadraticRow {
    pub linear: Vec<f64>,
    pub rhs: f64,
    /// Row `l` holds the scaled deviation `s_l * a_l`.
    pub term_rows: Vec<Vec<f64>>,
    pub term_rhs: Vec<f64>,
    pub radius: f64,
}

impl ConicQuadraticRow {
    /// Worst-case slack at `x`; nonnegative means robustly satisfied.
    pub fn margin(&self, x: &[f64]) -> f64 {
        let norm = self
            .term_rows
            .iter()
            .zip(&self.term_rhs)
            .map(|(row, b)| {
                let d = dot(row, x) - b;
                d * d
            })
            .sum::<f64>()
            .sqrt();
        dot(&self.linear, x) - self.rhs - self.radius * norm
    }
}

/// Counterpart for ball uncertainty. The protection term is a Euclidean norm,
/// so the result is conic rather than linear; it exists to certify and score
/// candidate points, not to be handed to the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidRc {
    pub sense: crate::model::Sense,
    pub objective: Vec<f64>,
    pub conic_rows: Vec<ConicQuadraticRow>,
    /// Certain rows, as `(row, rhs)` meaning `row . x >= rhs`.
    pub linear_rows: Vec<(Vec<f64>, f64)>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
}

impl EllipsoidRc {
    /// Smallest slack over every row at `x`; negative means some row fails.
    pub fn worst_margin(&self, x: &[f64]) -> f64 {
        let conic = self
            .conic_rows
            .iter()
            .map(|r| r.margin(x))
            .fold(f64::INFINITY, f64::min);
        let linear = self
            .linear_rows
            .iter()
            .map(|(row, b)| dot(row, x) - b)
            .fold(f64::INFINITY, f64::min);
        conic.min(linear)
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        let bounds_ok = x
            .iter()
            .zip(self.lower_bounds.iter().zip(&self.upper_bounds))
            .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol);
        bounds_ok && self.worst_margin(x) >= -tol
    }
}

pub fn build_ellipsoid_rc(problem: &UncertainLP) -> Result<EllipsoidRc, ReformulationError> {
    validated(problem)?;
    let mut conic_rows = Vec::new();
    let mut linear_rows = Vec::new();
    for (i, c) in problem.constraints.iter().enumerate() {
        let pm = &c.perturbation;
        if pm.directions.is_empty() {
            linear_rows.push((pm.nominal_row.clone(), pm.nominal_rhs));
            continue;
        }
        match &pm.set {
            UncertaintySet::Ball { radius, axis_scales } => {
                let term_rows = pm
                    .directions
                    .iter()
                    .zip(axis_scales)
                    .map(|(d, s)| d.row.iter().map(|v| s * v).collect())
                    .collect();
                let term_rhs = pm
                    .directions
                    .iter()
                    .zip(axis_scales)
                    .map(|(d, s)| s * d.rhs)
                    .collect();
                conic_rows.push(ConicQuadraticRow {
                    linear: pm.nominal_row.clone(),
                    rhs: pm.nominal_rhs,
                    term_rows,
                    term_rhs,
                    radius: *radius,
                });
            }
            other => {
                return Err(ReformulationError::WrongSetKind {
                    constraint: i,
                    expected: "ball",
                    found: other.kind(),
                    hint: builder_for(other.kind()),
                })
            }
        }
    }
    Ok(EllipsoidRc {
        sense: problem.sense,
        objective: problem.objective.clone(),
        conic_rows,
        linear_rows,
        lower_bounds: problem.lower_bounds.clone(),
        upper_bounds: problem.upper_bounds.clone(),
    })
}

/// Objective value and per-constraint worst-case slack of a candidate point.
/// A negative margin pinpoints the constraint that fails under its own set.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustValue {
    pub objective: f64,
    pub margins: Vec<f64>,
}

impl RobustValue {
    pub fn worst_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        self.worst_margin() >= -tol
    }
}

pub fn evaluate_robust_value(problem: &UncertainLP, x: &[f64]) -> RobustValue {
    let margins = problem
        .constraints
        .iter()
        .map(|c| worst_case_perturbation(&c.perturbation, x).margin)
        .collect();
    RobustValue { objective: dot(&problem.objective, x), margins }
}
