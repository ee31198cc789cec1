//! Pessimization-driven cutting planes.
//!
//! The loop alternates two steps. Solve a relaxation holding the rows
//! collected so far (initially the nominal rows). Then, for the candidate
//! point, find each constraint's worst perturbation in closed form; every
//! constraint violated beyond `eps` contributes its realized row as a cut and
//! the relaxation is resolved warm via dual simplex. Cuts are rows the true
//! robust problem must satisfy, so a relaxation that goes infeasible proves
//! the robust problem infeasible.
//!
//! An unbounded relaxation does not prove the robust problem unbounded: a
//! later cut could close the escaping direction. The loop therefore probes
//! far along the improving ray, cuts there if any constraint eventually
//! fails, and only reports unbounded when the ray survives the probes.

use crate::model::{PerturbationModel, UncertainLP, UncertaintySet};
use crate::simplex::{IncrementalSimplex, LpStatus, RowRelation};
use crate::solution::{
    validate_or_err, Diagnostics, Method, Realization, RobustSolution, SolveError, SolveStatus,
};

/// Worst perturbation of one constraint at a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct WorstCase {
    pub xi: Vec<f64>,
    /// Realized slack at that perturbation; negative means the point is not
    /// robustly feasible for this constraint.
    pub margin: f64,
}

/// Minimizes the realized slack `a(xi).x - b(xi)` over the constraint's set.
/// Boxes and balls have closed forms; scenario lists are enumerated with ties
/// going to the earliest point.
pub fn worst_case_perturbation(pm: &PerturbationModel, x: &[f64]) -> WorstCase {
    let slack = pm.nominal_slack(x);
    if pm.directions.is_empty() {
        return WorstCase { xi: Vec::new(), margin: slack };
    }
    let dev = pm.deviations(x);
    match &pm.set {
        UncertaintySet::Box { half_widths } => {
            let xi = dev
                .iter()
                .zip(half_widths)
                .map(|(d, w)| if *d == 0.0 { 0.0 } else { -w * d.signum() })
                .collect();
            let protection: f64 = dev.iter().zip(half_widths).map(|(d, w)| w * d.abs()).sum();
            WorstCase { xi, margin: slack - protection }
        }
        UncertaintySet::Ball { radius, axis_scales } => {
            let scaled: Vec<f64> = dev.iter().zip(axis_scales).map(|(d, s)| s * d).collect();
            let norm = scaled.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= 0.0 {
                return WorstCase { xi: vec![0.0; dev.len()], margin: slack };
            }
            let xi = scaled
                .iter()
                .zip(axis_scales)
                .map(|(v, s)| -radius * s * v / norm)
                .collect();
            WorstCase { xi, margin: slack - radius * norm }
        }
        UncertaintySet::Scenarios { points } => {
            let mut best: Option<(usize, f64)> = None;
            for (k, p) in points.iter().enumerate() {
                let value = slack + p.iter().zip(&dev).map(|(a, b)| a * b).sum::<f64>();
                match best {
                    Some((_, m)) if value >= m => {}
                    _ => best = Some((k, value)),
                }
            }
            match best {
                Some((k, margin)) => WorstCase { xi: points[k].clone(), margin },
                // an empty list constrains nothing
                None => WorstCase { xi: vec![0.0; dev.len()], margin: f64::INFINITY },
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutOptions {
    /// Largest tolerated worst-case violation.
    pub eps: f64,
    /// Relaxation-solve budget.
    pub max_iter: usize,
}

impl Default for CutOptions {
    fn default() -> Self {
        CutOptions { eps: 1e-6, max_iter: 500 }
    }
}

/// One relaxation solve and its pessimization outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct CutRound {
    /// Relaxation objective, a bound on the robust value from the optimistic
    /// side.
    pub objective: f64,
    pub max_violation: f64,
    /// Constraint attaining the worst violation; `None` on the closing round.
    pub constraint: Option<usize>,
    /// Perturbation added for that constraint.
    pub xi: Option<Vec<f64>>,
    pub cuts_added: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutLoopTrace {
    pub rounds: Vec<CutRound>,
    /// True when the loop ended with a certified verdict rather than an
    /// exhausted budget.
    pub converged: bool,
}

// far-probe multipliers along an unbounded ray; the margin is concave along
// the ray so a miss at the larger scale means no constraint ever cuts it
const RAY_PROBES: [f64; 2] = [1e6, 1e12];

fn ray_cut(
    problem: &UncertainLP,
    x0: &[f64],
    ray: &[f64],
) -> Option<(usize, Vec<f64>, Vec<f64>, f64)> {
    for t in RAY_PROBES {
        let probe: Vec<f64> = x0.iter().zip(ray).map(|(a, r)| a + t * r).collect();
        let mut best: Option<(usize, f64, Vec<f64>)> = None;
        for (i, c) in problem.constraints.iter().enumerate() {
            let w = worst_case_perturbation(&c.perturbation, &probe);
            if w.margin < 0.0 {
                match &best {
                    Some((_, m, _)) if w.margin >= *m => {}
                    _ => best = Some((i, w.margin, w.xi)),
                }
            }
        }
        if let Some((i, _, xi)) = best {
            let (row, rhs) = problem.constraints[i]
                .perturbation
                .instantiate(&xi)
                .expect("lengths fixed by validation");
            return Some((i, xi, row, rhs));
        }
    }
    None
}

/// Cutting-plane solve. Works for any mix of set kinds; it is the only
/// exact method here for ball sets, whose counterpart is conic rather than
/// linear.
pub fn solve_by_cuts(
    problem: &UncertainLP,
    options: &CutOptions,
) -> Result<(RobustSolution, CutLoopTrace), SolveError> {
    validate_or_err(problem)?;
    if !(options.eps > 0.0) {
        return Err(SolveError::InvalidOptions("eps must be positive".into()));
    }
    if options.max_iter == 0 {
        return Err(SolveError::InvalidOptions("max_iter must be at least 1".into()));
    }

    let base = crate::solution::nominal_lp(problem);
    let mut solver = IncrementalSimplex::new(&base)?;
    let mut status = solver.optimize()?;
    let mut extra_rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut pivots_banked = 0usize;

    let mut rounds: Vec<CutRound> = Vec::new();
    let mut converged = false;
    let mut final_status = SolveStatus::NotConverged;
    let mut x_out = None;
    let mut obj_out = None;
    let mut certificates = Vec::new();

    while rounds.len() < options.max_iter {
        match status {
            LpStatus::Infeasible => {
                final_status = SolveStatus::Infeasible;
                converged = true;
                break;
            }
            LpStatus::Unbounded => {
                let x0 = solver.solution();
                let cut = solver.unbounded_ray().and_then(|ray| ray_cut(problem, &x0, &ray));
                match cut {
                    Some((i, xi, row, rhs)) => {
                        rounds.push(CutRound {
                            objective: solver.objective_value(),
                            max_violation: f64::INFINITY,
                            constraint: Some(i),
                            xi: Some(xi),
                            cuts_added: 1,
                        });
                        extra_rows.push((row, rhs));
                        // the basis is not dual feasible here, so restart cold
                        pivots_banked += solver.iterations();
                        let mut lp = base.clone();
                        for (row, rhs) in &extra_rows {
                            lp.rows.push(row.clone());
                            lp.relations.push(RowRelation::GreaterEqual);
                            lp.rhs.push(*rhs);
                        }
                        solver = IncrementalSimplex::new(&lp)?;
                        status = solver.optimize()?;
                    }
                    None => {
                        final_status = SolveStatus::Unbounded;
                        converged = true;
                        break;
                    }
                }
            }
            LpStatus::Optimal => {
                let x = solver.solution();
                let objective = solver.objective_value();
                let worst: Vec<WorstCase> = problem
                    .constraints
                    .iter()
                    .map(|c| worst_case_perturbation(&c.perturbation, &x))
                    .collect();
                let mut worst_index = None;
                let mut worst_violation = 0.0_f64;
                for (i, w) in worst.iter().enumerate() {
                    if -w.margin > worst_violation {
                        worst_violation = -w.margin;
                        worst_index = Some(i);
                    }
                }
                if worst_violation <= options.eps {
                    rounds.push(CutRound {
                        objective,
                        max_violation: worst_violation,
                        constraint: None,
                        xi: None,
                        cuts_added: 0,
                    });
                    certificates = worst
                        .iter()
                        .enumerate()
                        .filter(|(_, w)| w.margin <= crate::solution::BINDING_TOL)
                        .map(|(i, w)| Realization { constraint: i, xi: w.xi.clone() })
                        .collect();
                    final_status = SolveStatus::Optimal;
                    x_out = Some(x);
                    obj_out = Some(objective);
                    converged = true;
                    break;
                }
                let mut cuts_added = 0;
                let mut worst_xi = None;
                for (i, w) in worst.iter().enumerate() {
                    if w.margin < -options.eps {
                        let (row, rhs) = problem.constraints[i]
                            .perturbation
                            .instantiate(&w.xi)
                            .expect("lengths fixed by validation");
                        solver.add_ge_row(&row, rhs);
                        extra_rows.push((row, rhs));
                        cuts_added += 1;
                        if worst_index == Some(i) {
                            worst_xi = Some(w.xi.clone());
                        }
                    }
                }
                rounds.push(CutRound {
                    objective,
                    max_violation: worst_violation,
                    constraint: worst_index,
                    xi: worst_xi,
                    cuts_added,
                });
                status = solver.reoptimize()?;
            }
        }
    }

    if !converged && status == LpStatus::Optimal {
        // report the last relaxation point; its objective still bounds the
        // robust value from the optimistic side
        x_out = Some(solver.solution());
        obj_out = Some(solver.objective_value());
    }
    let solution = RobustSolution {
        status: final_status,
        x: x_out,
        objective: obj_out,
        method: Method::EllipsoidCuts,
        certificates,
        diagnostics: Diagnostics {
            iterations: rounds.len(),
            pivots: pivots_banked + solver.iterations(),
            grid_resolution: None,
            constraint_count: base.rows.len() + extra_rows.len(),
            deduped_constraint_count: None,
        },
    };
    Ok((solution, CutLoopTrace { rounds, converged }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Direction, PerturbationModel, Sense, UncertainConstraint, UncertaintySet};
    use approx::assert_abs_diff_eq;

    fn row(nominal: Vec<f64>, rhs: f64, dirs: Vec<(Vec<f64>, f64)>, set: UncertaintySet) -> PerturbationModel {
        PerturbationModel {
            nominal_row: nominal,
            nominal_rhs: rhs,
            directions: dirs.into_iter().map(|(row, rhs)| Direction { row, rhs }).collect(),
            set,
        }
    }

    #[test]
    fn box_worst_case_flips_against_the_deviation() {
        let pm = row(
            vec![2.0, 1.0],
            1.0,
            vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
            UncertaintySet::Box { half_widths: vec![0.5, 0.25] },
        );
        let w = worst_case_perturbation(&pm, &[1.0, 2.0]);
        assert_eq!(w.xi, vec![-0.5, -0.25]);
        // slack 3, protection 0.5*1 + 0.25*2
        assert_abs_diff_eq!(w.margin, 2.0, epsilon = 1e-12);
        // the closed form matches direct instantiation
        let (r, b) = pm.instantiate(&w.xi).unwrap();
        let direct = r[0] + 2.0 * r[1] - b;
        assert_abs_diff_eq!(direct, w.margin, epsilon = 1e-12);
    }

    #[test]
    fn ball_worst_case_lies_on_the_boundary() {
        let pm = row(
            vec![2.0, 1.0],
            1.0,
            vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
            UncertaintySet::Ball { radius: 0.5, axis_scales: vec![1.0, 2.0] },
        );
        let x = [3.0, 4.0];
        let w = worst_case_perturbation(&pm, &x);
        assert!(pm.set.contains(&w.xi, 1e-9));
        // protection = 0.5 * sqrt(3^2 + (2*4)^2)
        let expected = (2.0 * 3.0 + 4.0 - 1.0) - 0.5 * (9.0_f64 + 64.0).sqrt();
        assert_abs_diff_eq!(w.margin, expected, epsilon = 1e-12);
        let (r, b) = pm.instantiate(&w.xi).unwrap();
        assert_abs_diff_eq!(r[0] * x[0] + r[1] * x[1] - b, w.margin, epsilon = 1e-12);
    }

    #[test]
    fn scenario_worst_case_enumerates_with_stable_ties() {
        let pm = row(
            vec![1.0],
            0.0,
            vec![(vec![1.0], 0.0)],
            UncertaintySet::Scenarios { points: vec![vec![-1.0], vec![-1.0], vec![1.0]] },
        );
        let w = worst_case_perturbation(&pm, &[2.0]);
        assert_eq!(w.xi, vec![-1.0]);
        assert_abs_diff_eq!(w.margin, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cuts_reproduce_the_interval_answer_on_a_box() {
        let pm = row(
            vec![2.0, 1.0],
            1.0,
            vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
            UncertaintySet::Box { half_widths: vec![0.01, 0.01] },
        );
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![UncertainConstraint::greater_equal(pm)],
        );
        let (sol, trace) = solve_by_cuts(&p, &CutOptions::default()).unwrap();
        assert!(trace.converged);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.objective.unwrap(), 2.0 / 1.99, epsilon = 1e-6);
        assert!(!sol.certificates.is_empty());
    }

    #[test]
    fn cuts_subtract_protection_on_the_sign_toy() {
        // (1 + 0.5 xi) x >= 1, |xi| <= 1: the robust answer is x = 2
        let pm = row(
            vec![1.0],
            1.0,
            vec![(vec![0.5], 0.0)],
            UncertaintySet::Box { half_widths: vec![1.0] },
        );
        let p = UncertainLP::new(Sense::Minimize, vec![1.0], vec![UncertainConstraint::greater_equal(pm)]);
        let (sol, _) = solve_by_cuts(&p, &CutOptions::default()).unwrap();
        let x = sol.x.unwrap();
        assert_abs_diff_eq!(x[0], 2.0, epsilon = 1e-6);
    }

    #[test]
    fn cuts_handle_ball_sets() {
        let pm = row(
            vec![2.0, 1.0],
            1.0,
            vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
            UncertaintySet::Ball { radius: 1.0, axis_scales: vec![1.0, 1.0] },
        );
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![UncertainConstraint::greater_equal(pm)],
        );
        let (sol, trace) = solve_by_cuts(&p, &CutOptions::default()).unwrap();
        assert!(trace.converged);
        // 2x1 - x1 >= 1 at x2 = 0, so x1 = 1
        assert_abs_diff_eq!(sol.objective.unwrap(), 2.0, epsilon = 1e-5);
        let rc = crate::reformulation::build_ellipsoid_rc(&p).unwrap();
        assert!(rc.is_feasible(sol.x.as_ref().unwrap(), 1e-5));
    }

    #[test]
    fn infeasible_relaxation_is_conclusive() {
        let pm = row(
            vec![1.0],
            2.0,
            vec![(vec![1.0], 0.0)],
            UncertaintySet::Box { half_widths: vec![0.5] },
        );
        let certain = PerturbationModel::certain(vec![-1.0], -1.0); // x <= 1
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![1.0],
            vec![
                UncertainConstraint::greater_equal(pm),
                UncertainConstraint::greater_equal(certain),
            ],
        );
        let (sol, trace) = solve_by_cuts(&p, &CutOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(trace.converged);
    }

    #[test]
    fn unbounded_relaxation_gets_cut_when_the_set_bounds_it() {
        // nominal row is vacuous (0 >= -1) so the relaxation is unbounded,
        // yet the box forces |x| <= 1 in the worst case
        let pm = row(
            vec![0.0],
            -1.0,
            vec![(vec![1.0], 0.0)],
            UncertaintySet::Box { half_widths: vec![1.0] },
        );
        let p = UncertainLP::new(Sense::Maximize, vec![1.0], vec![UncertainConstraint::greater_equal(pm)]);
        let (sol, trace) = solve_by_cuts(&p, &CutOptions::default()).unwrap();
        assert!(trace.converged);
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.objective.unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn genuinely_unbounded_problems_are_reported() {
        let pm = row(
            vec![1.0],
            0.0,
            vec![(vec![0.0], 1.0)], // only the rhs wobbles
            UncertaintySet::Box { half_widths: vec![0.5] },
        );
        let p = UncertainLP::new(Sense::Maximize, vec![1.0], vec![UncertainConstraint::greater_equal(pm)]);
        let (sol, trace) = solve_by_cuts(&p, &CutOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Unbounded);
        assert!(trace.converged);
    }

    #[test]
    fn budget_exhaustion_reports_not_converged() {
        // Symmetric costs put the robust optimum strictly inside the positive
        // quadrant, where ball cuts are tangent lines that never close the gap
        // exactly. Two rounds cannot reach eps = 1e-12.
        let pm = row(
            vec![1.0, 1.0],
            1.0,
            vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
            UncertaintySet::Ball { radius: 0.5, axis_scales: vec![1.0, 1.0] },
        );
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![1.0, 1.0],
            vec![UncertainConstraint::greater_equal(pm)],
        );
        let tight = CutOptions { eps: 1e-12, max_iter: 2 };
        let (sol, trace) = solve_by_cuts(&p, &tight).unwrap();
        assert_eq!(sol.status, SolveStatus::NotConverged);
        assert!(!trace.converged);
        assert!(sol.x.is_some());
    }

    #[test]
    fn certificates_lie_inside_their_sets() {
        let pm = row(
            vec![2.0, 1.0],
            1.0,
            vec![(vec![1.0, 0.0], 0.0), (vec![0.0, 1.0], 0.0)],
            UncertaintySet::Ball { radius: 0.5, axis_scales: vec![1.0, 3.0] },
        );
        let p = UncertainLP::new(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![UncertainConstraint::greater_equal(pm)],
        );
        let (sol, _) = solve_by_cuts(&p, &CutOptions::default()).unwrap();
        for cert in &sol.certificates {
            let set = &p.constraints[cert.constraint].perturbation.set;
            assert!(set.contains(&cert.xi, 1e-9));
        }
    }
}
