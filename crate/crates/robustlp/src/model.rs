//! Uncertain-LP data model.
//!
//! A constraint row is an affine family `a(xi) = a0 + sum_l xi_l * a_l`,
//! `b(xi) = b0 + sum_l xi_l * b_l`, with the perturbation vector `xi` ranging
//! over a box, a scaled Euclidean ball, or a finite scenario list. Every
//! constraint is stored in `>=` orientation; `<=` input is negated on
//! ingestion so the rest of the crate only ever sees one orientation.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Constraint orientation as written by the caller. Stored models are always
/// normalized to `GreaterEqual`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    GreaterEqual,
    LessEqual,
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("perturbation vector has length {got}, model has {expected} directions")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("objective perturbation must not carry right-hand-side terms")]
    ObjectiveRhsTerm,
}

/// Region the perturbation vector ranges over.
#[derive(Debug, Clone, PartialEq)]
pub enum UncertaintySet {
    /// `|xi_l| <= half_widths[l]` per axis.
    Box { half_widths: Vec<f64> },
    /// `sum_l (xi_l / axis_scales[l])^2 <= radius^2`.
    Ball { radius: f64, axis_scales: Vec<f64> },
    /// Explicit finite list of perturbation vectors.
    Scenarios { points: Vec<Vec<f64>> },
}

impl UncertaintySet {
    pub fn dimension(&self) -> usize {
        match self {
            UncertaintySet::Box { half_widths } => half_widths.len(),
            UncertaintySet::Ball { axis_scales, .. } => axis_scales.len(),
            UncertaintySet::Scenarios { points } => points.first().map_or(0, Vec::len),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            UncertaintySet::Box { .. } => "box",
            UncertaintySet::Ball { .. } => "ball",
            UncertaintySet::Scenarios { .. } => "scenarios",
        }
    }

    /// Membership test with an absolute tolerance.
    pub fn contains(&self, xi: &[f64], tol: f64) -> bool {
        if xi.len() != self.dimension() {
            return false;
        }
        match self {
            UncertaintySet::Box { half_widths } => xi
                .iter()
                .zip(half_widths)
                .all(|(v, w)| v.abs() <= w + tol),
            UncertaintySet::Ball { radius, axis_scales } => {
                let norm = xi
                    .iter()
                    .zip(axis_scales)
                    .map(|(v, s)| (v / s) * (v / s))
                    .sum::<f64>()
                    .sqrt();
                norm <= radius + tol
            }
            UncertaintySet::Scenarios { points } => points
                .iter()
                .any(|p| p.iter().zip(xi).all(|(a, b)| (a - b).abs() <= tol)),
        }
    }
}

/// One perturbation direction: what gets added to the row and to the
/// right-hand side per unit of the corresponding `xi` component.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    pub row: Vec<f64>,
    pub rhs: f64,
}

/// Affine family of constraint rows over an uncertainty set.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationModel {
    pub nominal_row: Vec<f64>,
    pub nominal_rhs: f64,
    pub directions: Vec<Direction>,
    pub set: UncertaintySet,
}

impl PerturbationModel {
    /// Certain row: no directions, degenerate set.
    pub fn certain(row: Vec<f64>, rhs: f64) -> Self {
        PerturbationModel {
            nominal_row: row,
            nominal_rhs: rhs,
            directions: Vec::new(),
            set: UncertaintySet::Box { half_widths: Vec::new() },
        }
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    /// Realized `(row, rhs)` at a concrete perturbation vector.
    pub fn instantiate(&self, xi: &[f64]) -> Result<(Vec<f64>, f64), ModelError> {
        if xi.len() != self.directions.len() {
            return Err(ModelError::DimensionMismatch {
                expected: self.directions.len(),
                got: xi.len(),
            });
        }
        let mut row = self.nominal_row.clone();
        let mut rhs = self.nominal_rhs;
        for (t, d) in xi.iter().zip(&self.directions) {
            for (r, c) in row.iter_mut().zip(&d.row) {
                *r += t * c;
            }
            rhs += t * d.rhs;
        }
        Ok((row, rhs))
    }

    /// `a_l . x - b_l` per direction; the quantity the protection term is
    /// built from.
    pub fn deviations(&self, x: &[f64]) -> Vec<f64> {
        self.directions
            .iter()
            .map(|d| dot(&d.row, x) - d.rhs)
            .collect()
    }

    /// Slack of the nominal row, `a0 . x - b0`.
    pub fn nominal_slack(&self, x: &[f64]) -> f64 {
        dot(&self.nominal_row, x) - self.nominal_rhs
    }

    fn negated(&self) -> Self {
        PerturbationModel {
            nominal_row: self.nominal_row.iter().map(|v| -v).collect(),
            nominal_rhs: -self.nominal_rhs,
            directions: self
                .directions
                .iter()
                .map(|d| Direction {
                    row: d.row.iter().map(|v| -v).collect(),
                    rhs: -d.rhs,
                })
                .collect(),
            set: self.set.clone(),
        }
    }
}

/// Uncertain constraint, stored in `>=` orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertainConstraint {
    pub perturbation: PerturbationModel,
}

impl UncertainConstraint {
    pub fn greater_equal(perturbation: PerturbationModel) -> Self {
        UncertainConstraint { perturbation }
    }

    /// `<=` input; negated so the stored orientation is `>=`.
    pub fn less_equal(perturbation: PerturbationModel) -> Self {
        UncertainConstraint { perturbation: perturbation.negated() }
    }

    pub fn new(relation: Relation, perturbation: PerturbationModel) -> Self {
        match relation {
            Relation::GreaterEqual => Self::greater_equal(perturbation),
            Relation::LessEqual => Self::less_equal(perturbation),
        }
    }
}

/// Linear program whose constraint data is uncertain. The objective is
/// certain; uncertain objectives are rewritten by [`normalize_objective`].
#[derive(Debug, Clone, PartialEq)]
pub struct UncertainLP {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<UncertainConstraint>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
}

impl UncertainLP {
    /// Default variable domain: `x >= 0`, no upper bounds.
    pub fn new(sense: Sense, objective: Vec<f64>, constraints: Vec<UncertainConstraint>) -> Self {
        let n = objective.len();
        UncertainLP {
            sense,
            objective,
            constraints,
            lower_bounds: vec![0.0; n],
            upper_bounds: vec![f64::INFINITY; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let n = self.num_vars();
        if n == 0 {
            issues.push(ValidationIssue::global("objective", "no variables"));
        }
        if self.constraints.is_empty() {
            issues.push(ValidationIssue::global("constraints", "no constraints"));
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            issues.push(ValidationIssue::global("objective", "non-finite coefficient"));
        }
        for (name, bounds) in [("lower_bounds", &self.lower_bounds), ("upper_bounds", &self.upper_bounds)] {
            if bounds.len() != n {
                issues.push(ValidationIssue::global(
                    name,
                    format!("length {} does not match {} variables", bounds.len(), n),
                ));
            }
        }
        for (l, u) in self.lower_bounds.iter().zip(&self.upper_bounds) {
            if l > u {
                issues.push(ValidationIssue::global("lower_bounds", "lower bound exceeds upper bound"));
                break;
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            let pm = &c.perturbation;
            if pm.nominal_row.len() != n {
                issues.push(ValidationIssue::at(
                    i,
                    "nominal",
                    format!("row length {} does not match {} variables", pm.nominal_row.len(), n),
                ));
            }
            if pm.nominal_row.iter().any(|v| !v.is_finite()) || !pm.nominal_rhs.is_finite() {
                issues.push(ValidationIssue::at(i, "nominal", "non-finite value"));
            }
            for (l, d) in pm.directions.iter().enumerate() {
                if d.row.len() != n {
                    issues.push(ValidationIssue::at(
                        i,
                        "directions",
                        format!("direction {l} has row length {}, expected {n}", d.row.len()),
                    ));
                }
                if d.row.iter().any(|v| !v.is_finite()) || !d.rhs.is_finite() {
                    issues.push(ValidationIssue::at(i, "directions", format!("direction {l} has a non-finite value")));
                }
            }
            if pm.set.dimension() != pm.directions.len() {
                issues.push(ValidationIssue::at(
                    i,
                    "set",
                    format!(
                        "set dimension {} does not match {} directions",
                        pm.set.dimension(),
                        pm.directions.len()
                    ),
                ));
            }
            match &pm.set {
                UncertaintySet::Box { half_widths } => {
                    if half_widths.iter().any(|w| !w.is_finite() || *w < 0.0) {
                        issues.push(ValidationIssue::at(i, "set", "box half-widths must be finite and >= 0"));
                    }
                }
                UncertaintySet::Ball { radius, axis_scales } => {
                    if !radius.is_finite() || *radius < 0.0 {
                        issues.push(ValidationIssue::at(i, "set", "ball radius must be finite and >= 0"));
                    }
                    if axis_scales.iter().any(|s| !s.is_finite() || *s <= 0.0) {
                        issues.push(ValidationIssue::at(i, "set", "ball axis scales must be finite and > 0"));
                    }
                }
                UncertaintySet::Scenarios { points } => {
                    if points.is_empty() {
                        issues.push(ValidationIssue::at(i, "set", "scenario list is empty"));
                    }
                    let len = pm.set.dimension();
                    if points.iter().any(|p| p.len() != len) {
                        issues.push(ValidationIssue::at(i, "set", "scenario points have mixed lengths"));
                    }
                    if points.iter().flatten().any(|v| !v.is_finite()) {
                        issues.push(ValidationIssue::at(i, "set", "scenario point has a non-finite value"));
                    }
                }
            }
        }
        ValidationReport { issues }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationIssue {
    /// Constraint index, or `None` for problem-level issues.
    pub constraint: Option<usize>,
    pub field: &'static str,
    pub message: String,
}

impl ValidationIssue {
    fn global(field: &'static str, message: impl Into<String>) -> Self {
        ValidationIssue { constraint: None, field, message: message.into() }
    }

    fn at(constraint: usize, field: &'static str, message: impl Into<String>) -> Self {
        ValidationIssue { constraint: Some(constraint), field, message: message.into() }
    }
}

impl std::fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.constraint {
            Some(i) => write!(f, "constraint {i}, {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Rewrites an uncertain objective into certain (epigraph) form: one extra
/// free variable becomes the objective and one uncertain constraint pins it
/// to the worst realized objective value. The optimal value is unchanged.
pub fn normalize_objective(
    problem: &UncertainLP,
    objective: &PerturbationModel,
) -> Result<UncertainLP, ModelError> {
    let n = problem.num_vars();
    if objective.nominal_row.len() != n {
        return Err(ModelError::DimensionMismatch { expected: n, got: objective.nominal_row.len() });
    }
    if objective.nominal_rhs != 0.0 || objective.directions.iter().any(|d| d.rhs != 0.0) {
        return Err(ModelError::ObjectiveRhsTerm);
    }
    for d in &objective.directions {
        if d.row.len() != n {
            return Err(ModelError::DimensionMismatch { expected: n, got: d.row.len() });
        }
    }
    // Minimize: t >= c(xi).x  <=>  t - c(xi).x >= 0
    // Maximize: t <= c(xi).x  <=>  c(xi).x - t >= 0
    let flip = match problem.sense {
        Sense::Minimize => -1.0,
        Sense::Maximize => 1.0,
    };
    let mut nominal_row: Vec<f64> = objective.nominal_row.iter().map(|v| flip * v).collect();
    nominal_row.push(-flip);
    let directions = objective
        .directions
        .iter()
        .map(|d| {
            let mut row: Vec<f64> = d.row.iter().map(|v| flip * v).collect();
            row.push(0.0);
            Direction { row, rhs: 0.0 }
        })
        .collect();
    let epigraph = UncertainConstraint::greater_equal(PerturbationModel {
        nominal_row,
        nominal_rhs: 0.0,
        directions,
        set: objective.set.clone(),
    });

    let mut constraints: Vec<UncertainConstraint> = problem
        .constraints
        .iter()
        .map(|c| {
            let pm = &c.perturbation;
            let mut nominal_row = pm.nominal_row.clone();
            nominal_row.push(0.0);
            let directions = pm
                .directions
                .iter()
                .map(|d| {
                    let mut row = d.row.clone();
                    row.push(0.0);
                    Direction { row, rhs: d.rhs }
                })
                .collect();
            UncertainConstraint::greater_equal(PerturbationModel {
                nominal_row,
                nominal_rhs: pm.nominal_rhs,
                directions,
                set: pm.set.clone(),
            })
        })
        .collect();
    constraints.push(epigraph);

    let mut objective_vec = vec![0.0; n];
    objective_vec.push(1.0);
    let mut lower = problem.lower_bounds.clone();
    lower.push(f64::NEG_INFINITY);
    let mut upper = problem.upper_bounds.clone();
    upper.push(f64::INFINITY);
    Ok(UncertainLP {
        sense: problem.sense,
        objective: objective_vec,
        constraints,
        lower_bounds: lower,
        upper_bounds: upper,
    })
}

/// Moves right-hand-side uncertainty into the coefficient matrix by appending
/// one variable fixed to -1. Solutions of the result map back to the original
/// problem by dropping the appended coordinate.
pub fn normalize_rhs(problem: &UncertainLP) -> UncertainLP {
    let constraints = problem
        .constraints
        .iter()
        .map(|c| {
            let pm = &c.perturbation;
            let mut nominal_row = pm.nominal_row.clone();
            nominal_row.push(0.0);
            let directions = pm
                .directions
                .iter()
                .map(|d| {
                    // b_l * xi_l moves into the appended column: the fixed -1
                    // variable times b_l reproduces -xi_l * b_l on the left.
                    let mut row = d.row.clone();
                    row.push(d.rhs);
                    Direction { row, rhs: 0.0 }
                })
                .collect();
            UncertainConstraint::greater_equal(PerturbationModel {
                nominal_row,
                nominal_rhs: pm.nominal_rhs,
                directions,
                set: pm.set.clone(),
            })
        })
        .collect();
    let mut objective = problem.objective.clone();
    objective.push(0.0);
    let mut lower = problem.lower_bounds.clone();
    lower.push(-1.0);
    let mut upper = problem.upper_bounds.clone();
    upper.push(-1.0);
    UncertainLP {
        sense: problem.sense,
        objective,
        constraints,
        lower_bounds: lower,
        upper_bounds: upper,
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
