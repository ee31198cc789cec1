//! Dense two-phase primal simplex.
//!
//! The solver keeps a condensed dictionary rather than a full tableau: one row
//! per constraint over the nonbasic columns only. Counterpart problems built
//! from fine grids have tens of thousands of rows but only a handful of
//! structural variables, so the dictionary stays narrow and pivots stay cheap.
//!
//! Pivoting uses Dantzig's rule and falls back to Bland's rule after a run of
//! degenerate pivots. All tie-breaks go to the lowest variable label, which
//! makes the solve deterministic. Phase 1 is the single-artificial-variable
//! construction; equality rows are split into two inequalities before phase 1
//! so both phases share one pivoting code path.
//!
//! Rows can be appended after an optimal solve (the cutting-plane loop does
//! this); feasibility is then restored with dual simplex steps, which keeps
//! the previous basis as a warm start.

use crate::model::{dot, Sense};
use thiserror::Error;

/// Row feasibility tolerance.
pub const TOL_FEAS: f64 = 1e-7;
/// Reduced-cost optimality tolerance.
pub const TOL_OPT: f64 = 1e-9;
/// Smallest pivot element magnitude accepted.
pub const PIVOT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRelation {
    GreaterEqual,
    LessEqual,
    Equal,
}

/// Dense LP in row form. Bounds may be infinite; `lower == upper` pins a
/// variable.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub relations: Vec<RowRelation>,
    pub rhs: Vec<f64>,
    pub lower_bounds: Vec<f64>,
    pub upper_bounds: Vec<f64>,
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub x: Option<Vec<f64>>,
    pub objective_value: Option<f64>,
    /// Simplex pivots over both phases.
    pub iterations: usize,
}

#[derive(Debug, Error)]
pub enum SimplexError {
    /// Hitting this signals cycling or numerical trouble, not a property of
    /// the problem.
    #[error("simplex iteration limit exceeded after {iterations} pivots")]
    IterationLimit { iterations: usize },
    #[error("malformed linear program: {0}")]
    Invalid(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Violations of `lp`'s rows at `x`, measured per row; entries below `tol`
/// are not reported. `max_violation` is 0 for a feasible point.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub max_violation: f64,
    pub violations: Vec<RowViolation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation {
    pub row: usize,
    pub amount: f64,
}

pub fn check_feasible(lp: &LinearProgram, x: &[f64], tol: f64) -> FeasibilityReport {
    let mut violations = Vec::new();
    let mut max_violation = 0.0_f64;
    for (i, row) in lp.rows.iter().enumerate() {
        let lhs = dot(row, x);
        let amount = match lp.relations[i] {
            RowRelation::GreaterEqual => lp.rhs[i] - lhs,
            RowRelation::LessEqual => lhs - lp.rhs[i],
            RowRelation::Equal => (lhs - lp.rhs[i]).abs(),
        };
        if amount > tol {
            violations.push(RowViolation { row: i, amount });
        }
        max_violation = max_violation.max(amount);
    }
    FeasibilityReport { max_violation: max_violation.max(0.0), violations }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpResult, SimplexError> {
    let mut solver = IncrementalSimplex::new(lp)?;
    let status = solver.optimize()?;
    Ok(solver.result(status))
}

// how each original variable maps onto nonnegative dictionary columns
#[derive(Debug, Clone, Copy)]
enum ColMap {
    Shift { lower: f64, col: usize },
    Mirror { upper: f64, col: usize },
    Split { pos: usize, neg: usize },
}

const AUX: u32 = u32::MAX;

pub(crate) struct IncrementalSimplex {
    // dictionary; row i reads x[row_label[i]] = rhs_i - sum_k t[i][k] * x[col_label[k]]
    t: Vec<f64>,
    nrows: usize,
    width: usize,
    stride: usize,
    ncols0: usize,
    obj: Vec<f64>,
    aux: Vec<f64>,
    row_label: Vec<u32>,
    col_label: Vec<u32>,
    next_label: u32,
    iterations: usize,
    bland: bool,
    degen_streak: usize,
    maps: Vec<ColMap>,
    negate_value: bool,
    trivially_infeasible: bool,
    solved: bool,
    unbounded_col: Option<usize>,
}

impl IncrementalSimplex {
    pub(crate) fn new(lp: &LinearProgram) -> Result<Self, SimplexError> {
        let n = lp.num_vars();
        let m = lp.num_rows();
        if n == 0 {
            return Err(SimplexError::Invalid("no variables".into()));
        }
        if lp.rows.len() != m || lp.relations.len() != m || lp.rhs.len() != m {
            return Err(SimplexError::Invalid("row, relation and rhs counts differ".into()));
        }
        if lp.lower_bounds.len() != n || lp.upper_bounds.len() != n {
            return Err(SimplexError::Invalid("bound lengths do not match variable count".into()));
        }
        if lp.rows.iter().any(|r| r.len() != n) {
            return Err(SimplexError::Invalid("row length does not match variable count".into()));
        }
        let finite_ok = lp.objective.iter().all(|v| v.is_finite())
            && lp.rhs.iter().all(|v| v.is_finite())
            && lp.rows.iter().flatten().all(|v| v.is_finite())
            && lp.lower_bounds.iter().all(|v| !v.is_nan() && *v < f64::INFINITY)
            && lp.upper_bounds.iter().all(|v| !v.is_nan() && *v > f64::NEG_INFINITY);
        if !finite_ok {
            return Err(SimplexError::Invalid("non-finite coefficient".into()));
        }
        let trivially_infeasible = lp
            .lower_bounds
            .iter()
            .zip(&lp.upper_bounds)
            .any(|(l, u)| l > u);

        // assign dictionary columns
        let mut maps = Vec::with_capacity(n);
        let mut ncols0 = 0usize;
        for j in 0..n {
            let l = lp.lower_bounds[j];
            let u = lp.upper_bounds[j];
            let map = if l.is_finite() {
                ColMap::Shift { lower: l, col: ncols0 }
            } else if u.is_finite() {
                ColMap::Mirror { upper: u, col: ncols0 }
            } else {
                ncols0 += 1;
                ColMap::Split { pos: ncols0 - 1, neg: ncols0 }
            };
            ncols0 += 1;
            maps.push(map);
        }

        // internal objective is always minimized
        let mut obj_coef = vec![0.0; ncols0];
        let mut obj_const = 0.0;
        for j in 0..n {
            let c = lp.objective[j];
            match maps[j] {
                ColMap::Shift { lower, col } => {
                    obj_coef[col] += c;
                    obj_const += c * lower;
                }
                ColMap::Mirror { upper, col } => {
                    obj_coef[col] -= c;
                    obj_const += c * upper;
                }
                ColMap::Split { pos, neg } => {
                    obj_coef[pos] += c;
                    obj_coef[neg] -= c;
                }
            }
        }
        let negate_value = lp.sense == Sense::Maximize;
        if negate_value {
            obj_coef.iter_mut().for_each(|v| *v = -*v);
            obj_const = -obj_const;
        }

        let stride = ncols0 + 2;
        let mut this = IncrementalSimplex {
            t: Vec::new(),
            nrows: 0,
            width: ncols0,
            stride,
            ncols0,
            obj: vec![0.0; stride],
            aux: vec![0.0; stride],
            row_label: Vec::new(),
            col_label: (0..ncols0 as u32).collect(),
            next_label: ncols0 as u32,
            iterations: 0,
            bland: false,
            degen_streak: 0,
            maps,
            negate_value,
            trivially_infeasible,
            solved: false,
            unbounded_col: None,
        };
        for (k, &c) in obj_coef.iter().enumerate() {
            this.obj[k] = -c;
        }
        this.obj[stride - 1] = obj_const;

        for i in 0..m {
            match lp.relations[i] {
                RowRelation::LessEqual => this.push_le_row(&lp.rows[i], lp.rhs[i]),
                RowRelation::GreaterEqual => this.push_ge_row(&lp.rows[i], lp.rhs[i]),
                RowRelation::Equal => {
                    this.push_le_row(&lp.rows[i], lp.rhs[i]);
                    this.push_ge_row(&lp.rows[i], lp.rhs[i]);
                }
            }
        }
        // finite upper bounds of shifted variables become explicit rows
        for j in 0..n {
            if let ColMap::Shift { lower, col } = this.maps[j] {
                let u = lp.upper_bounds[j];
                if u.is_finite() {
                    let mut r = vec![0.0; stride];
                    r[col] = 1.0;
                    r[stride - 1] = u - lower;
                    this.push_raw_row(r);
                }
            }
        }
        Ok(this)
    }

    // `row <= rhs` over original variables, mapped onto dictionary columns
    fn transformed_le(&self, row: &[f64], rhs: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.stride];
        let mut b = rhs;
        for (j, &g) in row.iter().enumerate() {
            if g == 0.0 {
                continue;
            }
            match self.maps[j] {
                ColMap::Shift { lower, col } => {
                    out[col] += g;
                    b -= g * lower;
                }
                ColMap::Mirror { upper, col } => {
                    out[col] -= g;
                    b -= g * upper;
                }
                ColMap::Split { pos, neg } => {
                    out[pos] += g;
                    out[neg] -= g;
                }
            }
        }
        out[self.stride - 1] = b;
        out
    }

    fn push_le_row(&mut self, row: &[f64], rhs: f64) {
        let r = self.transformed_le(row, rhs);
        self.push_raw_row(r);
    }

    fn push_ge_row(&mut self, row: &[f64], rhs: f64) {
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        let r = self.transformed_le(&neg, -rhs);
        self.push_raw_row(r);
    }

    fn push_raw_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.stride);
        self.t.extend_from_slice(&row);
        self.row_label.push(self.next_label);
        self.next_label += 1;
        self.nrows += 1;
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.t[i * self.stride + self.stride - 1]
    }

    fn max_iterations(&self) -> usize {
        10_000 + 2 * (self.nrows + self.width)
    }

    fn pivot(&mut self, e: usize, f: usize) {
        let stride = self.stride;
        let re = e * stride;
        let p = self.t[re + f];
        let inv = 1.0 / p;
        for k in 0..stride {
            self.t[re + k] *= inv;
        }
        self.t[re + f] = inv;
        let erow = self.t[re..re + stride].to_vec();
        for i in 0..self.nrows {
            if i == e {
                continue;
            }
            let ri = i * stride;
            let g = self.t[ri + f];
            if g != 0.0 {
                for k in 0..stride {
                    self.t[ri + k] -= g * erow[k];
                }
                self.t[ri + f] = -g * inv;
            }
        }
        for row in [&mut self.obj, &mut self.aux] {
            let g = row[f];
            if g != 0.0 {
                for k in 0..stride {
                    row[k] -= g * erow[k];
                }
                row[f] = -g * inv;
            }
        }
        std::mem::swap(&mut self.row_label[e], &mut self.col_label[f]);
        self.iterations += 1;
    }

    // improving column of `cost`, Dantzig normally, Bland under degeneracy
    fn entering(&self, cost: &[f64]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for k in 0..self.width {
            let v = cost[k];
            if v <= TOL_OPT {
                continue;
            }
            best = match best {
                None => Some(k),
                Some(b) => {
                    let better = if self.bland {
                        self.col_label[k] < self.col_label[b]
                    } else {
                        v > cost[b] || (v == cost[b] && self.col_label[k] < self.col_label[b])
                    };
                    if better {
                        Some(k)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    fn ratio_test(&self, f: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.nrows {
            let a = self.t[i * self.stride + f];
            if a <= PIVOT_TOL {
                continue;
            }
            let r = self.rhs(i) / a;
            best = match best {
                None => Some((i, r)),
                Some((bi, br)) => {
                    if r < br || (r == br && self.row_label[i] < self.row_label[bi]) {
                        Some((i, r))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn note_pivot_degeneracy(&mut self, leaving_rhs: f64) {
        if leaving_rhs.abs() <= TOL_FEAS {
            self.degen_streak += 1;
            if self.degen_streak > 3 * (self.nrows + self.width) {
                self.bland = true;
            }
        } else {
            self.degen_streak = 0;
            self.bland = false;
        }
    }

    fn run(&mut self, phase1: bool) -> Result<LpStatus, SimplexError> {
        loop {
            if self.iterations >= self.max_iterations() {
                return Err(SimplexError::IterationLimit { iterations: self.iterations });
            }
            let cost = if phase1 { &self.aux } else { &self.obj };
            let f = match self.entering(cost) {
                Some(f) => f,
                None => return Ok(LpStatus::Optimal),
            };
            let e = match self.ratio_test(f) {
                Some(e) => e,
                None => {
                    self.unbounded_col = Some(f);
                    return Ok(LpStatus::Unbounded);
                }
            };
            let step = self.rhs(e);
            self.pivot(e, f);
            self.note_pivot_degeneracy(step);
        }
    }

    fn min_rhs_row(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.nrows {
            best = match best {
                None => Some(i),
                Some(b) => {
                    let (ri, rb) = (self.rhs(i), self.rhs(b));
                    if ri < rb || (ri == rb && self.row_label[i] < self.row_label[b]) {
                        Some(i)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }

    fn phase1(&mut self) -> Result<bool, SimplexError> {
        // activate the artificial column
        let auxcol = self.ncols0;
        self.width = auxcol + 1;
        self.col_label.push(AUX);
        for i in 0..self.nrows {
            self.t[i * self.stride + auxcol] = -1.0;
        }
        self.aux.iter_mut().for_each(|v| *v = 0.0);
        self.aux[auxcol] = -1.0;

        let e = self.min_rhs_row().expect("phase 1 requires at least one row");
        self.pivot(e, auxcol);
        if self.run(true)? == LpStatus::Unbounded {
            return Err(SimplexError::Numerical("auxiliary objective unbounded".into()));
        }
        let artificial_residual = self.aux[self.stride - 1];
        if artificial_residual > TOL_FEAS {
            return Ok(false);
        }
        // drive the artificial variable out of the basis if it lingers at zero
        if let Some(r) = (0..self.nrows).find(|&i| self.row_label[i] == AUX) {
            let mut f = None;
            for k in 0..self.width {
                if self.col_label[k] == AUX {
                    continue;
                }
                if self.t[r * self.stride + k].abs() > PIVOT_TOL {
                    f = match f {
                        None => Some(k),
                        Some(b) if self.col_label[k] < self.col_label[b] => Some(k),
                        keep => keep,
                    };
                }
            }
            match f {
                Some(f) => self.pivot(r, f),
                None => self.remove_row(r),
            }
        }
        // retire the artificial column; when the artificial row was removed
        // outright the label is gone and the extra column slot stays in use
        if let Some(p) = self.col_label.iter().position(|&l| l == AUX) {
            let last = self.width - 1;
            for i in 0..self.nrows {
                let ri = i * self.stride;
                self.t.swap(ri + p, ri + last);
                self.t[ri + last] = 0.0;
            }
            self.obj.swap(p, last);
            self.obj[last] = 0.0;
            self.col_label.swap(p, last);
            self.col_label.pop();
            self.width = last;
        }
        Ok(true)
    }

    fn remove_row(&mut self, r: usize) {
        let s = self.stride;
        self.t.drain(r * s..(r + 1) * s);
        self.row_label.remove(r);
        self.nrows -= 1;
    }

    pub(crate) fn optimize(&mut self) -> Result<LpStatus, SimplexError> {
        self.solved = true;
        if self.trivially_infeasible {
            return Ok(LpStatus::Infeasible);
        }
        if self.nrows > 0 {
            if let Some(e) = self.min_rhs_row() {
                if self.rhs(e) < -TOL_FEAS && !self.phase1()? {
                    return Ok(LpStatus::Infeasible);
                }
            }
        }
        self.run(false)
    }

    /// Improving direction in original variable space, available after a
    /// phase-2 `Unbounded` verdict. Scaled to unit max-norm.
    pub(crate) fn unbounded_ray(&self) -> Option<Vec<f64>> {
        let f = self.unbounded_col?;
        let mut y = vec![0.0; self.ncols0];
        if let Some(&label) = self.col_label.get(f) {
            if (label as usize) < self.ncols0 {
                y[label as usize] = 1.0;
            }
        }
        for (i, &label) in self.row_label.iter().enumerate() {
            if (label as usize) < self.ncols0 {
                y[label as usize] = -self.t[i * self.stride + f];
            }
        }
        let mut ray: Vec<f64> = self
            .maps
            .iter()
            .map(|m| match *m {
                ColMap::Shift { col, .. } => y[col],
                ColMap::Mirror { col, .. } => -y[col],
                ColMap::Split { pos, neg } => y[pos] - y[neg],
            })
            .collect();
        let scale = ray.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        if scale <= 0.0 {
            return None;
        }
        ray.iter_mut().for_each(|v| *v /= scale);
        Some(ray)
    }

    /// Appends `row . x >= rhs` (original variable space) and restores
    /// feasibility with dual simplex steps from the current basis.
    #[cfg(test)]
    pub(crate) fn add_ge_row_and_reoptimize(
        &mut self,
        row: &[f64],
        rhs: f64,
    ) -> Result<LpStatus, SimplexError> {
        self.add_ge_row(row, rhs);
        self.reoptimize()
    }

    /// Appends `row . x >= rhs` without resolving; follow with
    /// [`Self::reoptimize`]. Valid only on a dual-feasible (optimally solved)
    /// dictionary.
    pub(crate) fn add_ge_row(&mut self, row: &[f64], rhs: f64) {
        debug_assert!(self.solved, "warm start requires a prior optimize()");
        let neg: Vec<f64> = row.iter().map(|v| -v).collect();
        let flat = self.transformed_le(&neg, -rhs);

        // express the new slack in the current nonbasic coordinates
        let mut row_of_label = vec![None; self.ncols0];
        for (i, &l) in self.row_label.iter().enumerate() {
            if (l as usize) < self.ncols0 {
                row_of_label[l as usize] = Some(i);
            }
        }
        let mut pos_of_label = vec![None; self.ncols0];
        for (k, &l) in self.col_label.iter().enumerate().take(self.width) {
            if (l as usize) < self.ncols0 {
                pos_of_label[l as usize] = Some(k);
            }
        }
        let mut out = vec![0.0; self.stride];
        out[self.stride - 1] = flat[self.stride - 1];
        for label in 0..self.ncols0 {
            let g = flat[label];
            if g == 0.0 {
                continue;
            }
            if let Some(k) = pos_of_label[label] {
                out[k] += g;
            } else if let Some(i) = row_of_label[label] {
                let ri = i * self.stride;
                for k in 0..self.width {
                    out[k] -= g * self.t[ri + k];
                }
                out[self.stride - 1] -= g * self.rhs(i);
            }
            // a structural label that is neither basic nor nonbasic cannot occur
        }
        self.push_raw_row(out);
    }

    pub(crate) fn reoptimize(&mut self) -> Result<LpStatus, SimplexError> {
        self.dual_simplex()
    }

    fn dual_simplex(&mut self) -> Result<LpStatus, SimplexError> {
        loop {
            if self.iterations >= self.max_iterations() {
                return Err(SimplexError::IterationLimit { iterations: self.iterations });
            }
            let e = match self.min_rhs_row() {
                Some(e) if self.rhs(e) < -TOL_FEAS => e,
                _ => return Ok(LpStatus::Optimal),
            };
            let re = e * self.stride;
            let mut f: Option<(usize, f64)> = None;
            for k in 0..self.width {
                let a = self.t[re + k];
                if a >= -PIVOT_TOL {
                    continue;
                }
                let ratio = self.obj[k] / a;
                f = match f {
                    None => Some((k, ratio)),
                    Some((bk, br)) => {
                        if ratio < br || (ratio == br && self.col_label[k] < self.col_label[bk]) {
                            Some((k, ratio))
                        } else {
                            Some((bk, br))
                        }
                    }
                };
            }
            let (f, _) = match f {
                Some(v) => v,
                None => return Ok(LpStatus::Infeasible),
            };
            self.pivot(e, f);
        }
    }

    pub(crate) fn iterations(&self) -> usize {
        self.iterations
    }

    fn transformed_solution(&self) -> Vec<f64> {
        let mut y = vec![0.0; self.ncols0];
        for (i, &l) in self.row_label.iter().enumerate() {
            if (l as usize) < self.ncols0 {
                y[l as usize] = self.rhs(i);
            }
        }
        y
    }

    pub(crate) fn solution(&self) -> Vec<f64> {
        let y = self.transformed_solution();
        self.maps
            .iter()
            .map(|m| match *m {
                ColMap::Shift { lower, col } => y[col] + lower,
                ColMap::Mirror { upper, col } => upper - y[col],
                ColMap::Split { pos, neg } => y[pos] - y[neg],
            })
            .collect()
    }

    pub(crate) fn objective_value(&self) -> f64 {
        let v = self.obj[self.stride - 1];
        if self.negate_value {
            -v
        } else {
            v
        }
    }

    pub(crate) fn result(&self, status: LpStatus) -> LpResult {
        match status {
            LpStatus::Optimal => LpResult {
                status,
                x: Some(self.solution()),
                objective_value: Some(self.objective_value()),
                iterations: self.iterations,
            },
            _ => LpResult { status, x: None, objective_value: None, iterations: self.iterations },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lp(
        sense: Sense,
        c: Vec<f64>,
        rows: Vec<Vec<f64>>,
        relations: Vec<RowRelation>,
        rhs: Vec<f64>,
    ) -> LinearProgram {
        let n = c.len();
        LinearProgram {
            sense,
            objective: c,
            rows,
            relations,
            rhs,
            lower_bounds: vec![0.0; n],
            upper_bounds: vec![f64::INFINITY; n],
        }
    }

    #[test]
    fn two_var_minimum() {
        let p = lp(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![vec![2.0, 1.0]],
            vec![RowRelation::GreaterEqual],
            vec![1.0],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        let x = r.x.unwrap();
        assert_abs_diff_eq!(x[0], 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.objective_value.unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn three_scenario_counterpart() {
        let p = lp(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![vec![1.99, 0.99], vec![2.0, 1.0], vec![2.01, 1.01]],
            vec![RowRelation::GreaterEqual; 3],
            vec![1.0, 1.0, 1.0],
        );
        let r = solve_lp(&p).unwrap();
        let x = r.x.unwrap();
        assert_abs_diff_eq!(x[0], 1.0 / 1.99, epsilon = 1e-9);
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.objective_value.unwrap(), 2.0 / 1.99, epsilon = 1e-9);
    }

    #[test]
    fn unbounded_maximization() {
        let p = lp(
            Sense::Maximize,
            vec![1.0],
            vec![vec![1.0]],
            vec![RowRelation::GreaterEqual],
            vec![0.0],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Unbounded);
        assert!(r.x.is_none());
    }

    #[test]
    fn infeasible_pair() {
        let p = lp(
            Sense::Minimize,
            vec![1.0],
            vec![vec![1.0], vec![-1.0]],
            vec![RowRelation::GreaterEqual, RowRelation::GreaterEqual],
            vec![2.0, -1.0],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_row_is_honored() {
        let p = lp(
            Sense::Maximize,
            vec![1.0, 1.0],
            vec![vec![1.0, 1.0]],
            vec![RowRelation::Equal],
            vec![3.0],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.objective_value.unwrap(), 3.0, epsilon = 1e-9);
    }

    #[test]
    fn free_variable_can_go_negative() {
        let mut p = lp(
            Sense::Minimize,
            vec![1.0],
            vec![vec![1.0]],
            vec![RowRelation::GreaterEqual],
            vec![-4.0],
        );
        p.lower_bounds = vec![f64::NEG_INFINITY];
        let r = solve_lp(&p).unwrap();
        assert_abs_diff_eq!(r.objective_value.unwrap(), -4.0, epsilon = 1e-9);
    }

    #[test]
    fn fixed_variable_bounds() {
        let mut p = lp(
            Sense::Minimize,
            vec![1.0, 0.0],
            vec![vec![1.0, 1.0]],
            vec![RowRelation::GreaterEqual],
            vec![1.0],
        );
        p.lower_bounds = vec![0.0, -1.0];
        p.upper_bounds = vec![f64::INFINITY, -1.0];
        let r = solve_lp(&p).unwrap();
        let x = r.x.unwrap();
        assert_abs_diff_eq!(x[1], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(x[0], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn upper_bounds_clip_the_optimum() {
        let mut p = lp(
            Sense::Maximize,
            vec![1.0, 1.0],
            vec![vec![1.0, 1.0]],
            vec![RowRelation::LessEqual],
            vec![10.0],
        );
        p.upper_bounds = vec![2.0, 3.0];
        let r = solve_lp(&p).unwrap();
        assert_abs_diff_eq!(r.objective_value.unwrap(), 5.0, epsilon = 1e-9);
    }

    #[test]
    fn conflicting_bounds_are_infeasible() {
        let mut p = lp(
            Sense::Minimize,
            vec![1.0],
            vec![vec![1.0]],
            vec![RowRelation::GreaterEqual],
            vec![0.0],
        );
        p.lower_bounds = vec![2.0];
        p.upper_bounds = vec![1.0];
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Infeasible);
        assert_eq!(r.iterations, 0);
    }

    #[test]
    fn objective_matches_recomputation_from_x() {
        let p = lp(
            Sense::Maximize,
            vec![5.0, 3.0, 4.0],
            vec![vec![1.0, 1.0, 2.0], vec![0.0, 1.0, 1.0]],
            vec![RowRelation::LessEqual, RowRelation::LessEqual],
            vec![18.0, 16.0],
        );
        let r = solve_lp(&p).unwrap();
        let x = r.x.unwrap();
        let direct: f64 = p.objective.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert_abs_diff_eq!(r.objective_value.unwrap(), direct, epsilon = 1e-9);
        assert_abs_diff_eq!(r.objective_value.unwrap(), 90.0, epsilon = 1e-9);
    }

    #[test]
    fn warm_started_rows_tighten_the_optimum() {
        let p = lp(
            Sense::Maximize,
            vec![1.0, 1.0],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![RowRelation::LessEqual, RowRelation::LessEqual],
            vec![4.0, 4.0],
        );
        let mut s = IncrementalSimplex::new(&p).unwrap();
        assert_eq!(s.optimize().unwrap(), LpStatus::Optimal);
        assert_abs_diff_eq!(s.objective_value(), 8.0, epsilon = 1e-9);
        // cut off the corner: x1 + x2 <= 6, i.e. -x1 - x2 >= -6
        let st = s.add_ge_row_and_reoptimize(&[-1.0, -1.0], -6.0).unwrap();
        assert_eq!(st, LpStatus::Optimal);
        assert_abs_diff_eq!(s.objective_value(), 6.0, epsilon = 1e-9);
        let st = s.add_ge_row_and_reoptimize(&[-1.0, 0.0], -1.0).unwrap();
        assert_eq!(st, LpStatus::Optimal);
        assert_abs_diff_eq!(s.objective_value(), 5.0, epsilon = 1e-9);
    }

    #[test]
    fn warm_started_rows_can_reveal_infeasibility() {
        let p = lp(
            Sense::Minimize,
            vec![1.0],
            vec![vec![1.0]],
            vec![RowRelation::LessEqual],
            vec![1.0],
        );
        let mut s = IncrementalSimplex::new(&p).unwrap();
        assert_eq!(s.optimize().unwrap(), LpStatus::Optimal);
        let st = s.add_ge_row_and_reoptimize(&[1.0], 2.0).unwrap();
        assert_eq!(st, LpStatus::Infeasible);
    }

    #[test]
    fn degenerate_problem_still_terminates() {
        // many redundant rows through the same vertex
        let p = lp(
            Sense::Maximize,
            vec![1.0, 1.0],
            vec![
                vec![1.0, 1.0],
                vec![2.0, 2.0],
                vec![3.0, 3.0],
                vec![1.0, 2.0],
                vec![2.0, 1.0],
            ],
            vec![RowRelation::LessEqual; 5],
            vec![2.0, 4.0, 6.0, 3.0, 3.0],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_abs_diff_eq!(r.objective_value.unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn check_feasible_reports_violation_amount() {
        let p = lp(
            Sense::Minimize,
            vec![2.0, 3.0],
            vec![vec![1.99, 0.99]],
            vec![RowRelation::GreaterEqual],
            vec![1.0],
        );
        let rep = check_feasible(&p, &[0.5, 0.0], 1e-9);
        assert_eq!(rep.violations.len(), 1);
        assert_eq!(rep.violations[0].row, 0);
        assert_abs_diff_eq!(rep.max_violation, 0.005, epsilon = 1e-9);
    }

    #[test]
    fn solve_is_deterministic() {
        let p = lp(
            Sense::Maximize,
            vec![5.0, 3.0, 4.0],
            vec![vec![1.0, 1.0, 2.0], vec![0.0, 1.0, 1.0], vec![3.0, 1.0, 0.0]],
            vec![RowRelation::LessEqual; 3],
            vec![18.0, 16.0, 20.0],
        );
        let a = solve_lp(&p).unwrap();
        let b = solve_lp(&p).unwrap();
        assert_eq!(a, b);
    }
}
