//! Brute-force reference solver for tiny dense linear programs.
//!
//! This crate exists so that the real solver can be cross-checked against an
//! implementation that shares none of its code or algorithmic ideas. Candidate
//! optima are found by enumerating every n-subset of constraint and bound
//! hyperplanes and solving the resulting square systems; unboundedness is
//! decided by enumerating vertices of the recession cone clipped to the unit
//! box. Everything is exponential in the problem size, so keep n and m small
//! (n, m <= 6 is comfortable).
//!
//! The enumeration only sees vertices, so the feasible region must be pointed.
//! Problems where every variable has a finite lower bound satisfy this, as do
//! epigraph-style liftings whose free variable is pinned by the rows.

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

/// Dense LP in row form. `lower`/`upper` may be infinite.
#[derive(Debug, Clone)]
pub struct Problem {
    pub maximize: bool,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

const FEAS_TOL: f64 = 1e-7;
const RAY_TOL: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-9;

fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() < PIVOT_TOL {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn is_feasible(p: &Problem, x: &[f64], tol: f64) -> bool {
    for (j, &v) in x.iter().enumerate() {
        if v < p.lower[j] - tol || v > p.upper[j] + tol {
            return false;
        }
    }
    for (i, row) in p.rows.iter().enumerate() {
        let lhs: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
        let ok = match p.relations[i] {
            Relation::Ge => lhs >= p.rhs[i] - tol,
            Relation::Le => lhs <= p.rhs[i] + tol,
            Relation::Eq => (lhs - p.rhs[i]).abs() <= tol,
        };
        if !ok {
            return false;
        }
    }
    true
}

fn for_each_combination(pool: usize, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k > pool {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // advance to the next k-combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + pool - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every feasible vertex of the (pointed) feasible region.
fn feasible_vertices(p: &Problem) -> Vec<Vec<f64>> {
    let n = p.objective.len();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for (i, row) in p.rows.iter().enumerate() {
        if row.iter().any(|&v| v != 0.0) {
            planes.push((row.clone(), p.rhs[i]));
        }
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        if p.lower[j].is_finite() {
            planes.push((e.clone(), p.lower[j]));
        }
        if p.upper[j].is_finite() {
            planes.push((e, p.upper[j]));
        }
    }
    // all-zero rows never intersect anything; they are checked in is_feasible
    for (i, row) in p.rows.iter().enumerate() {
        if row.iter().all(|&v| v == 0.0) {
            let ok = match p.relations[i] {
                Relation::Ge => 0.0 >= p.rhs[i] - FEAS_TOL,
                Relation::Le => 0.0 <= p.rhs[i] + FEAS_TOL,
                Relation::Eq => p.rhs[i].abs() <= FEAS_TOL,
            };
            if !ok {
                return Vec::new();
            }
        }
    }
    let mut out = Vec::new();
    for_each_combination(planes.len(), n, &mut |pick| {
        let a: Vec<Vec<f64>> = pick.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_square(a, b) {
            if x.iter().all(|v| v.is_finite()) && is_feasible(p, &x, FEAS_TOL) {
                out.push(x);
            }
        }
    });
    out
}

/// Recession cone of `p` clipped to the unit box, as its own problem.
fn clipped_recession_cone(p: &Problem) -> Problem {
    Problem {
        maximize: p.maximize,
        objective: p.objective.clone(),
        rows: p.rows.clone(),
        relations: p.relations.clone(),
        rhs: vec![0.0; p.rows.len()],
        lower: p
            .lower
            .iter()
            .map(|l| if l.is_finite() { 0.0 } else { -1.0 })
            .collect(),
        upper: p
            .upper
            .iter()
            .map(|u| if u.is_finite() { 0.0 } else { 1.0 })
            .collect(),
    }
}

/// Solves by exhaustive vertex enumeration. See the module docs for the
/// pointedness requirement.
pub fn solve(p: &Problem) -> Outcome {
    let verts = feasible_vertices(p);
    if verts.is_empty() {
        return Outcome::Infeasible;
    }
    let cone = clipped_recession_cone(p);
    for d in feasible_vertices(&cone) {
        let gain: f64 = p.objective.iter().zip(&d).map(|(a, b)| a * b).sum();
        let improving = if p.maximize { gain > RAY_TOL } else { gain < -RAY_TOL };
        if improving {
            return Outcome::Unbounded;
        }
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for x in verts {
        let v: f64 = p.objective.iter().zip(&x).map(|(a, b)| a * b).sum();
        let better = match &best {
            None => true,
            Some((bv, _)) => {
                if p.maximize {
                    v > *bv
                } else {
                    v < *bv
                }
            }
        };
        if better {
            best = Some((v, x));
        }
    }
    let (value, x) = best.unwrap();
    Outcome::Optimal { value, x }
}

/// True when the constraint system admits any point at all.
pub fn feasible(p: &Problem) -> bool {
    !feasible_vertices(p).is_empty()
}

/// Random small LP with integer data. All lower bounds are zero so the
/// feasible region stays pointed; upper bounds and equality rows appear with
/// moderate probability to exercise those paths in the solver under test.
pub fn random_problem<R: Rng>(rng: &mut R, max_vars: usize, max_rows: usize) -> Problem {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_rows);
    let mut rows = Vec::with_capacity(m);
    let mut relations = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for _ in 0..m {
        let row: Vec<f64> = loop {
            let r: Vec<f64> = (0..n).map(|_| rng.gen_range(-5..=5) as f64).collect();
            if r.iter().any(|&v| v != 0.0) {
                break r;
            }
        };
        rows.push(row);
        relations.push(match rng.gen_range(0..10) {
            0 => Relation::Eq,
            1..=5 => Relation::Ge,
            _ => Relation::Le,
        });
        rhs.push(rng.gen_range(-5..=5) as f64);
    }
    let upper = (0..n)
        .map(|_| {
            if rng.gen_bool(0.25) {
                rng.gen_range(1..=6) as f64
            } else {
                f64::INFINITY
            }
        })
        .collect();
    Problem {
        maximize: rng.gen_bool(0.5),
        objective: (0..n).map(|_| rng.gen_range(-5..=5) as f64).collect(),
        rows,
        relations,
        rhs,
        lower: vec![0.0; n],
        upper,
    }
}
