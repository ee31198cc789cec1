//! Robust linear optimization toolkit.
//!
//! Constraint rows are affine families over a perturbation vector that ranges
//! over a box, a scaled ball, or a finite scenario list ([`model`]). A
//! solution is robust when it satisfies every realization of every row. Four
//! routes lead there:
//!
//! * [`solution::solve_scenario`] expands finite scenario lists exactly,
//! * [`solution::solve_interval`] solves the linear counterpart of box sets
//!   exactly,
//! * [`cuts::solve_by_cuts`] alternates relaxation solves with closed-form
//!   worst-case searches and handles every set kind, including balls whose
//!   exact counterpart is conic,
//! * [`grid::solve_by_grid`] realizes rows on a finite grid of perturbations,
//!   optionally refined until the reported digits stop moving.
//!
//! All LP solving runs on the built-in dictionary simplex ([`simplex`]); no
//! external solver is involved. The `parallel` feature (on by default) uses
//! rayon for grid realization and row deduplication; disabling it yields the
//! same results on one thread.

pub mod cuts;
pub mod grid;
pub mod model;
mod par;
pub mod reformulation;
pub mod simplex;
pub mod solution;

pub use cuts::{
    solve_by_cuts, worst_case_perturbation, CutLoopTrace, CutOptions, CutRound, WorstCase,
};
pub use grid::{
    grid_points, refine_until_stable, solve_by_grid, ConvergenceTrace, GridSpec, RefineStep,
};
pub use model::{
    normalize_objective, normalize_rhs, Direction, ModelError, PerturbationModel, Relation,
    Sense, UncertainConstraint, UncertainLP, UncertaintySet, ValidationIssue, ValidationReport,
};
pub use reformulation::{
    build_ellipsoid_rc, build_interval_rc, build_scenario_rc, evaluate_robust_value,
    ConicQuadraticRow, EllipsoidRc, ReformulationError, RobustValue,
};
pub use simplex::{
    check_feasible, solve_lp, FeasibilityReport, LinearProgram, LpResult, LpStatus, RowRelation,
    RowViolation, SimplexError,
};
pub use solution::{
    nominal_lp, solve_interval, solve_nominal, solve_scenario, Diagnostics, Method, Realization,
    RobustSolution, SolveError, SolveStatus,
};
