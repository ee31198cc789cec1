//! Finite grid approximations of uncertainty sets.
//!
//! A grid replaces a set by finitely many perturbations; instantiating every
//! uncertain row at every grid point gives an ordinary LP whose feasible
//! region contains the robust one. The approximation is conservative in the
//! optimistic direction (it can only report a value at least as good as the
//! robust one) and is exact for boxes as soon as the vertices are on the grid,
//! because a realized row depends linearly on each perturbation component.
//!
//! Refinement maps a resolution `g` to `2g - 1` so every coarse point stays on
//! the finer grid; objective values are then monotone along the schedule.

use crate::model::{UncertainLP, UncertaintySet};
use crate::simplex::{solve_lp, LinearProgram, RowRelation};
use crate::solution::{
    from_lp_status, validate_or_err, Diagnostics, Method, Realization, RobustSolution,
    SolveError, SolveStatus,
};
use crate::{par, solution::BINDING_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    /// Points per axis (boxes) or radial steps (balls); at least 2.
    pub resolution: usize,
    /// Boxes: sample axis endpoints (true) or cell midpoints (false).
    pub include_vertices: bool,
    /// Balls: sample the boundary sphere (true) or stay strictly inside.
    pub include_boundary: bool,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { resolution: 5, include_vertices: true, include_boundary: true }
    }
}

impl GridSpec {
    pub fn with_resolution(resolution: usize) -> Self {
        GridSpec { resolution, ..GridSpec::default() }
    }

    /// Next step of the nesting refinement schedule.
    pub fn refined(&self) -> Self {
        GridSpec { resolution: 2 * self.resolution - 1, ..*self }
    }
}

// evenly spaced samples of [-half_width, half_width]; the (2j - (g-1))/(g-1)
// form makes the center land on exactly 0.0 for odd g
fn axis_points(half_width: f64, g: usize, closed: bool) -> Vec<f64> {
    if half_width <= 0.0 {
        return vec![0.0];
    }
    if closed {
        (0..g)
            .map(|j| half_width * (2.0 * j as f64 - (g - 1) as f64) / (g - 1) as f64)
            .collect()
    } else {
        (0..g)
            .map(|j| half_width * (2.0 * j as f64 + 1.0 - g as f64) / g as f64)
            .collect()
    }
}

fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for &v in axis {
                let mut p = prefix.clone();
                p.push(v);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Grid over one uncertainty set. Scenario lists are their own grid and
/// ignore the spec.
pub fn grid_points(set: &UncertaintySet, spec: &GridSpec) -> Vec<Vec<f64>> {
    let g = spec.resolution.max(2);
    match set {
        UncertaintySet::Box { half_widths } => {
            let axes: Vec<Vec<f64>> = half_widths
                .iter()
                .map(|&w| axis_points(w, g, spec.include_vertices))
                .collect();
            cartesian(&axes)
        }
        UncertaintySet::Scenarios { points } => points.clone(),
        UncertaintySet::Ball { radius, axis_scales } => {
            let dim = axis_scales.len();
            if dim == 0 {
                return vec![Vec::new()];
            }
            if *radius <= 0.0 {
                return vec![vec![0.0; dim]];
            }
            match dim {
                1 => axis_points(radius * axis_scales[0], g, spec.include_boundary)
                    .into_iter()
                    .map(|v| vec![v])
                    .collect(),
                2 => {
                    // polar: center, then rings of 4(g-1) angles; ring radii
                    // are j/(g-1) of the full radius (j/g when the boundary is
                    // excluded), so refining g -> 2g-1 keeps old points
                    let mut pts = vec![vec![0.0, 0.0]];
                    let angles = 4 * (g - 1);
                    for j in 1..g {
                        let frac = if spec.include_boundary {
                            j as f64 / (g - 1) as f64
                        } else {
                            j as f64 / g as f64
                        };
                        let r = radius * frac;
                        for k in 0..angles {
                            let theta = 2.0 * std::f64::consts::PI * k as f64 / angles as f64;
                            pts.push(vec![
                                axis_scales[0] * r * theta.cos(),
                                axis_scales[1] * r * theta.sin(),
                            ]);
                        }
                    }
                    pts
                }
                _ => {
                    // lattice clipped to the ball, plus boundary projections
                    let axes: Vec<Vec<f64>> = axis_scales
                        .iter()
                        .map(|&s| axis_points(radius * s, g, true))
                        .collect();
                    let mut pts = Vec::new();
                    let limit = radius * radius * (1.0 + 1e-14);
                    for p in cartesian(&axes) {
                        let sq: f64 = p
                            .iter()
                            .zip(axis_scales)
                            .map(|(v, s)| (v / s) * (v / s))
                            .sum();
                        if sq <= limit {
                            if spec.include_boundary && sq > 0.0 {
                                let scale = radius / sq.sqrt();
                                pts.push(p.iter().map(|v| v * scale).collect());
                            }
                            pts.push(p);
                        }
                    }
                    pts
                }
            }
        }
    }
}

// refuse grids that would not fit in memory
const MAX_POINTS_PER_SET: usize = 5_000_000;

fn grid_size_ok(set: &UncertaintySet, g: usize) -> bool {
    let per_axis = g as f64;
    match set {
        UncertaintySet::Box { half_widths } => {
            let active = half_widths.iter().filter(|w| **w > 0.0).count() as i32;
            per_axis.powi(active) <= MAX_POINTS_PER_SET as f64
        }
        UncertaintySet::Ball { axis_scales, .. } => match axis_scales.len() {
            0 | 1 => true,
            2 => (4 * (g - 1) * (g - 1) + 1) <= MAX_POINTS_PER_SET,
            d => 2.0 * per_axis.powi(d as i32) <= MAX_POINTS_PER_SET as f64,
        },
        UncertaintySet::Scenarios { .. } => true,
    }
}

/// One grid solve: realize every uncertain row at every grid point, remove
/// duplicate rows, solve the resulting LP.
pub fn solve_by_grid(problem: &UncertainLP, spec: &GridSpec) -> Result<RobustSolution, SolveError> {
    validate_or_err(problem)?;
    if spec.resolution < 2 {
        return Err(SolveError::InvalidOptions("grid resolution must be at least 2".into()));
    }
    let mut all_rows: Vec<(Vec<f64>, f64)> = Vec::new();
    // per-constraint points are kept for the certificate search
    let mut per_constraint: Vec<Option<Vec<Vec<f64>>>> = Vec::new();
    for (i, c) in problem.constraints.iter().enumerate() {
        let pm = &c.perturbation;
        if pm.directions.is_empty() {
            all_rows.push((pm.nominal_row.clone(), pm.nominal_rhs));
            per_constraint.push(None);
            continue;
        }
        if !grid_size_ok(&pm.set, spec.resolution) {
            return Err(SolveError::InvalidOptions(format!(
                "grid for constraint {i} exceeds {MAX_POINTS_PER_SET} points"
            )));
        }
        let pts = grid_points(&pm.set, spec);
        let rows = par::map_collect(&pts, |p| {
            pm.instantiate(p).expect("lengths fixed by validation")
        });
        all_rows.extend(rows);
        per_constraint.push(Some(pts));
    }
    let pre_dedup = all_rows.len();
    par::sort_rows(&mut all_rows);
    all_rows.dedup();
    let kept = all_rows.len();

    let (rows, rhs): (Vec<Vec<f64>>, Vec<f64>) = all_rows.into_iter().unzip();
    let lp = LinearProgram {
        sense: problem.sense,
        objective: problem.objective.clone(),
        rows,
        relations: vec![RowRelation::GreaterEqual; kept],
        rhs,
        lower_bounds: problem.lower_bounds.clone(),
        upper_bounds: problem.upper_bounds.clone(),
    };
    let r = solve_lp(&lp)?;

    let mut certificates = Vec::new();
    if let Some(x) = &r.x {
        for (i, (c, pts)) in problem.constraints.iter().zip(&per_constraint).enumerate() {
            let pm = &c.perturbation;
            match pts {
                None => {
                    if pm.nominal_slack(x) <= BINDING_TOL {
                        certificates.push(Realization { constraint: i, xi: Vec::new() });
                    }
                }
                Some(pts) => {
                    let s0 = pm.nominal_slack(x);
                    let dev = pm.deviations(x);
                    let mut best: Option<(usize, f64)> = None;
                    for (k, p) in pts.iter().enumerate() {
                        let slack =
                            s0 + p.iter().zip(&dev).map(|(a, b)| a * b).sum::<f64>();
                        match best {
                            Some((_, m)) if slack >= m => {}
                            _ => best = Some((k, slack)),
                        }
                    }
                    if let Some((k, m)) = best {
                        if m <= BINDING_TOL {
                            certificates.push(Realization { constraint: i, xi: pts[k].clone() });
                        }
                    }
                }
            }
        }
    }

    Ok(RobustSolution {
        status: from_lp_status(r.status),
        x: r.x,
        objective: r.objective_value,
        method: Method::Grid,
        certificates,
        diagnostics: Diagnostics {
            iterations: 1,
            pivots: r.iterations,
            grid_resolution: Some(spec.resolution),
            constraint_count: pre_dedup,
            deduped_constraint_count: Some(kept),
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineStep {
    pub resolution: usize,
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub constraint_count: usize,
    pub deduped_constraint_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub steps: Vec<RefineStep>,
    pub converged: bool,
    /// Successive objectives closer than this ended the refinement.
    pub threshold: f64,
}

/// Solves on finer and finer grids (`g -> 2g - 1`) until two successive
/// objectives agree to `decimals` places, the grid proves infeasibility, or
/// `max_steps` runs out.
pub fn refine_until_stable(
    problem: &UncertainLP,
    spec: &GridSpec,
    decimals: u32,
    max_steps: usize,
) -> Result<(RobustSolution, ConvergenceTrace), SolveError> {
    if max_steps == 0 {
        return Err(SolveError::InvalidOptions("max_steps must be at least 1".into()));
    }
    let threshold = 0.5 * 10f64.powi(-(decimals as i32));
    let mut current = GridSpec { resolution: spec.resolution.max(2), ..*spec };
    let mut steps = Vec::new();
    let mut previous: Option<f64> = None;
    let mut converged = false;
    let mut last: Option<RobustSolution> = None;
    for _ in 0..max_steps {
        let sol = solve_by_grid(problem, &current)?;
        steps.push(RefineStep {
            resolution: current.resolution,
            status: sol.status,
            objective: sol.objective,
            constraint_count: sol.diagnostics.constraint_count,
            deduped_constraint_count: sol.diagnostics.deduped_constraint_count,
        });
        // a grid LP relaxes the robust problem, so its infeasibility settles
        // the question at any resolution
        if sol.status == SolveStatus::Infeasible {
            converged = true;
            last = Some(sol);
            break;
        }
        if sol.status == SolveStatus::Optimal {
            let obj = sol.objective.expect("optimal solutions carry a value");
            if let Some(p) = previous {
                if (obj - p).abs() < threshold {
                    converged = true;
                    last = Some(sol);
                    break;
                }
            }
            previous = Some(obj);
        } else {
            previous = None;
        }
        last = Some(sol);
        current = current.refined();
    }
    let mut solution = last.expect("max_steps >= 1 guarantees one solve");
    solution.diagnostics.iterations = steps.len();
    Ok((solution, ConvergenceTrace { steps, converged, threshold }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        Direction, PerturbationModel, Sense, UncertainConstraint, UncertaintySet,
    };
    use approx::assert_abs_diff_eq;

    fn key(p: &[f64]) -> Vec<u64> {
        p.iter().map(|v| v.to_bits()).collect()
    }

    #[test]
    fn box_grid_includes_vertices_and_center() {
        let set = UncertaintySet::Box { half_widths: vec![1.0, 2.0] };
        let pts = grid_points(&set, &GridSpec::with_resolution(3));
        assert_eq!(pts.len(), 9);
        let keys: std::collections::HashSet<_> = pts.iter().map(|p| key(p)).collect();
        for corner in [[-1.0, -2.0], [1.0, 2.0], [-1.0, 2.0], [1.0, -2.0], [0.0, 0.0]] {
            assert!(keys.contains(&key(&corner)), "missing {corner:?}");
        }
    }

    #[test]
    fn zero_half_width_axis_collapses() {
        let set = UncertaintySet::Box { half_widths: vec![1.0, 0.0] };
        let pts = grid_points(&set, &GridSpec::with_resolution(3));
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p[1] == 0.0));
    }

    #[test]
    fn midpoint_lattice_avoids_vertices() {
        let set = UncertaintySet::Box { half_widths: vec![1.0] };
        let spec = GridSpec { include_vertices: false, ..GridSpec::with_resolution(4) };
        let pts = grid_points(&set, &spec);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| p[0].abs() < 1.0));
    }

    #[test]
    fn ball_grid_at_resolution_two_is_center_plus_cardinals() {
        let set = UncertaintySet::Ball { radius: 2.0, axis_scales: vec![1.0, 1.0] };
        let pts = grid_points(&set, &GridSpec::with_resolution(2));
        assert_eq!(pts.len(), 5);
        for p in &pts {
            assert!(set.contains(p, 1e-12));
        }
        assert_eq!(pts[0], vec![0.0, 0.0]);
        assert_abs_diff_eq!(pts[1][0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn refinement_keeps_coarse_ball_points() {
        let set = UncertaintySet::Ball { radius: 1.5, axis_scales: vec![2.0, 0.5] };
        let coarse = grid_points(&set, &GridSpec::with_resolution(3));
        let fine = grid_points(&set, &GridSpec::with_resolution(5));
        let fine_keys: std::collections::HashSet<_> = fine.iter().map(|p| key(p)).collect();
        for p in &coarse {
            assert!(fine_keys.contains(&key(p)), "lost point {p:?}");
        }
    }

    #[test]
    fn high_dimensional_ball_stays_inside() {
        let set = UncertaintySet::Ball { radius: 2.0, axis_scales: vec![1.0, 2.0, 0.5] };
        let pts = grid_points(&set, &GridSpec::with_resolution(3));
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(set.contains(p, 1e-12));
        }
        // boundary projections really are on the boundary
        let on_boundary = pts.iter().any(|p| {
            let norm: f64 = p
                .iter()
                .zip([1.0, 2.0, 0.5])
                .map(|(v, s)| (v / s) * (v / s))
                .sum::<f64>()
                .sqrt();
            (norm - 2.0).abs() <= 1e-9
        });
        assert!(on_boundary);
    }

    #[test]
    fn scenario_sets_are_their_own_grid() {
        let set = UncertaintySet::Scenarios { points: vec![vec![1.0], vec![-1.0]] };
        let pts = grid_points(&set, &GridSpec::with_resolution(7));
        assert_eq!(pts, vec![vec![1.0], vec![-1.0]]);
    }

    fn box_problem() -> UncertainLP {
        let pm = PerturbationModel {
            nominal_row: vec![2.0, 1.0],
            nominal_rhs: 1.0,
            directions: vec![
                Direction { row: vec![1.0, 0.0], rhs: 0.0 },
                Direction { row: vec![0.0, 1.0], rhs: 0.0 },
            ],
            set: UncertaintySet::Box { half_widths: vec![0.01, 0.01] },
        };
        UncertainLP::new(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![UncertainConstraint::greater_equal(pm)],
        )
    }

    #[test]
    fn box_grid_solve_is_exact_at_resolution_two() {
        let sol = solve_by_grid(&box_problem(), &GridSpec::with_resolution(2)).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.objective.unwrap(), 2.0 / 1.99, epsilon = 1e-9);
        assert_eq!(sol.diagnostics.constraint_count, 4);
        assert!(!sol.certificates.is_empty());
        assert_eq!(sol.certificates[0].xi, vec![-0.01, -0.01]);
    }

    #[test]
    fn duplicate_rows_are_removed_but_counted() {
        let pm = PerturbationModel {
            nominal_row: vec![1.0],
            nominal_rhs: 1.0,
            directions: vec![Direction { row: vec![0.5], rhs: 0.0 }],
            set: UncertaintySet::Scenarios { points: vec![vec![0.0], vec![0.0], vec![1.0]] },
        };
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![1.0],
            vec![UncertainConstraint::greater_equal(pm)],
        );
        let sol = solve_by_grid(&p, &GridSpec::default()).unwrap();
        assert_eq!(sol.diagnostics.constraint_count, 3);
        assert_eq!(sol.diagnostics.deduped_constraint_count, Some(2));
    }

    #[test]
    fn refinement_stops_when_digits_stabilize() {
        let (sol, trace) = refine_until_stable(
            &box_problem(),
            &GridSpec::with_resolution(2),
            4,
            10,
        )
        .unwrap();
        // box grids are exact from the first step, so two steps suffice
        assert!(trace.converged);
        assert_eq!(trace.steps.len(), 2);
        assert_abs_diff_eq!(sol.objective.unwrap(), 2.0 / 1.99, epsilon = 1e-9);
        assert_eq!(sol.diagnostics.iterations, 2);
    }

    #[test]
    fn refinement_tightens_ball_answers_monotonically() {
        let pm = PerturbationModel {
            nominal_row: vec![2.0, 1.0],
            nominal_rhs: 1.0,
            directions: vec![
                Direction { row: vec![1.0, 0.0], rhs: 0.0 },
                Direction { row: vec![0.0, 1.0], rhs: 0.0 },
            ],
            set: UncertaintySet::Ball { radius: 0.5, axis_scales: vec![1.0, 1.0] },
        };
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![UncertainConstraint::greater_equal(pm)],
        );
        let mut spec = GridSpec::with_resolution(2);
        let mut prev = f64::NEG_INFINITY;
        for _ in 0..4 {
            let sol = solve_by_grid(&p, &spec).unwrap();
            let obj = sol.objective.unwrap();
            // nested grids only add rows, so the minimum cannot drop
            assert!(obj >= prev - 1e-9, "{obj} < {prev}");
            prev = obj;
            spec = spec.refined();
        }
        // grid answers approach the exact protection 2x - 0.5x >= 1
        assert_abs_diff_eq!(prev, 2.0 / 1.5, epsilon = 2e-3);
    }

    #[test]
    fn infeasible_grids_settle_the_question() {
        let pm = PerturbationModel {
            nominal_row: vec![1.0],
            nominal_rhs: 2.0,
            directions: vec![Direction { row: vec![1.0], rhs: 0.0 }],
            set: UncertaintySet::Box { half_widths: vec![0.5] },
        };
        let cap = PerturbationModel::certain(vec![-1.0], -1.0);
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![1.0],
            vec![
                UncertainConstraint::greater_equal(pm),
                UncertainConstraint::greater_equal(cap),
            ],
        );
        let (sol, trace) = refine_until_stable(&p, &GridSpec::with_resolution(2), 4, 5).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(trace.converged);
        assert_eq!(trace.steps.len(), 1);
    }

    #[test]
    fn rejects_absurd_resolutions() {
        let err = solve_by_grid(&box_problem(), &GridSpec::with_resolution(1)).unwrap_err();
        assert!(matches!(err, SolveError::InvalidOptions(_)));
    }
}
