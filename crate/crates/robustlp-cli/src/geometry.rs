//! Geometry labels for two-component perturbation regions, written
//! `box(AxB)` or `ellipse(AxB)`. A and B are the half-widths of the box or
//! the semi-axes of the ellipse.

use crate::report::fmt_g6;
use robustlp::{UncertainLP, UncertaintySet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Box2 { a: f64, b: f64 },
    Ellipse2 { a: f64, b: f64 },
}

impl Geometry {
    pub fn parse(s: &str) -> Result<Geometry, String> {
        let s = s.trim();
        let inner = s
            .strip_suffix(')')
            .ok_or_else(|| format!("geometry `{s}` must look like box(1x1) or ellipse(2x1)"))?;
        let (kind, dims) = inner
            .split_once('(')
            .ok_or_else(|| format!("geometry `{s}` must look like box(1x1) or ellipse(2x1)"))?;
        let (a, b) = dims
            .split_once('x')
            .ok_or_else(|| format!("geometry `{s}` needs two sizes separated by `x`"))?;
        let a: f64 = a.trim().parse().map_err(|_| format!("bad size `{a}` in `{s}`"))?;
        let b: f64 = b.trim().parse().map_err(|_| format!("bad size `{b}` in `{s}`"))?;
        if !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
            return Err(format!("sizes in `{s}` must be finite and >= 0"));
        }
        match kind.trim() {
            "box" => Ok(Geometry::Box2 { a, b }),
            "ellipse" => Ok(Geometry::Ellipse2 { a, b }),
            other => Err(format!("unknown geometry kind `{other}`, expected box or ellipse")),
        }
    }

    pub fn to_set(&self) -> Result<UncertaintySet, String> {
        match *self {
            Geometry::Box2 { a, b } => Ok(UncertaintySet::Box { half_widths: vec![a, b] }),
            Geometry::Ellipse2 { a, b } => {
                if a == 0.0 && b == 0.0 {
                    // a zero-size region; scales stay positive and the radius
                    // carries the degeneracy
                    Ok(UncertaintySet::Ball { radius: 0.0, axis_scales: vec![1.0, 1.0] })
                } else if a == 0.0 || b == 0.0 {
                    Err("ellipse semi-axes must both be zero or both be positive".into())
                } else {
                    Ok(UncertaintySet::Ball { radius: 1.0, axis_scales: vec![a, b] })
                }
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Geometry::Box2 { .. } => "box",
            Geometry::Ellipse2 { .. } => "ellipse",
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Geometry::Box2 { a, b } => format!("box({}x{})", fmt_g6(a), fmt_g6(b)),
            Geometry::Ellipse2 { a, b } => format!("ellipse({}x{})", fmt_g6(a), fmt_g6(b)),
        }
    }
}

/// Swaps the uncertainty set of every uncertain constraint for the geometry.
/// Requires two perturbation directions per uncertain constraint so the
/// two-dimensional region lines up; certain rows pass through.
pub fn apply(problem: &UncertainLP, geometry: &Geometry) -> Result<UncertainLP, String> {
    let set = geometry.to_set()?;
    let mut out = problem.clone();
    for (i, c) in out.constraints.iter_mut().enumerate() {
        let pm = &mut c.perturbation;
        if pm.directions.is_empty() {
            continue;
        }
        if pm.directions.len() != 2 {
            return Err(format!(
                "constraint {i} has {} perturbation directions, geometry sweeps need 2",
                pm.directions.len()
            ));
        }
        pm.set = set.clone();
    }
    Ok(out)
}

pub fn set_label(set: &UncertaintySet) -> String {
    match set {
        UncertaintySet::Box { half_widths } => {
            let dims: Vec<String> = half_widths.iter().map(|&w| fmt_g6(w)).collect();
            format!("box({})", dims.join("x"))
        }
        UncertaintySet::Ball { radius, axis_scales } => {
            let dims: Vec<String> = axis_scales.iter().map(|&s| fmt_g6(radius * s)).collect();
            format!("ellipse({})", dims.join("x"))
        }
        UncertaintySet::Scenarios { points } => format!("scenarios({})", points.len()),
    }
}

/// Geometry column for a problem solved as-is: the shared set label, or
/// `certain` / `mixed` when there is no single one.
pub fn describe(problem: &UncertainLP) -> String {
    let mut labels: Vec<String> = problem
        .constraints
        .iter()
        .filter(|c| !c.perturbation.directions.is_empty())
        .map(|c| set_label(&c.perturbation.set))
        .collect();
    labels.dedup();
    match labels.len() {
        0 => "certain".to_string(),
        1 => labels.pop().unwrap(),
        _ => "mixed".to_string(),
    }
}
