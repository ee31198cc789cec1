//! JSON problem files and their mapping onto [`UncertainLP`].
//!
//! Schema, version 1:
//!
//! ```json
//! {
//!   "version": 1,
//!   "name": "short-slug",
//!   "comment": "free text",
//!   "sense": "minimize",
//!   "objective": [2.0, 3.0],
//!   "lower_bounds": [0.0, null],
//!   "upper_bounds": [null, 5.0],
//!   "constraints": [
//!     {
//!       "relation": "ge",
//!       "nominal": [2.0, 1.0],
//!       "rhs": 1.0,
//!       "directions": [{ "row": [0.01, 0.01], "rhs": 0.0 }],
//!       "set": { "kind": "scenarios", "points": [[-1.0], [0.0], [1.0]] },
//!       "comment": "free text"
//!     }
//!   ]
//! }
//! ```
//!
//! `name`, `comment`, `lower_bounds`, `upper_bounds`, `directions` and `set`
//! are optional. A `null` bound means unbounded on that side; missing bound
//! arrays default to `x >= 0`. A constraint without directions and set is
//! certain. Set kinds are `box` (`half_widths`), `ball` (`radius`,
//! `axis_scales`) and `scenarios` (`points`).
//!
//! Constraints are stored internally in `>=` orientation, so serializing a
//! parsed model writes `ge` rows; reparsing that output yields an identical
//! model.

use robustlp::{
    Direction, PerturbationModel, Sense, UncertainConstraint, UncertainLP, UncertaintySet,
};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported file version {0}, expected 1")]
    Version(u32),
    #[error("invalid model: {field}: {message}")]
    Model { field: String, message: String },
    #[error("invalid model: constraint {constraint}: {field}: {message}")]
    ConstraintModel { constraint: usize, field: String, message: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    #[serde(default = "one")]
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub sense: SenseFile,
    pub objective: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bounds: Option<Vec<Option<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_bounds: Option<Vec<Option<f64>>>,
    pub constraints: Vec<ConstraintFile>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SenseFile {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationFile {
    Ge,
    Le,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub relation: RelationFile,
    pub nominal: Vec<f64>,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub directions: Vec<DirectionFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionFile {
    pub row: Vec<f64>,
    #[serde(default)]
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetFile {
    Box { half_widths: Vec<f64> },
    Ball { radius: f64, axis_scales: Vec<f64> },
    Scenarios { points: Vec<Vec<f64>> },
}

/// Parsed problem plus the display name used in reports.
#[derive(Debug)]
pub struct LoadedProblem {
    pub name: String,
    pub problem: UncertainLP,
}

pub fn load(path: &Path) -> Result<LoadedProblem, ParseError> {
    let (loaded, issues) = load_lenient(path)?;
    if let Some(first) = issues.into_iter().next() {
        return Err(first);
    }
    Ok(loaded)
}

/// Like [`load`], but collects model-level issues instead of failing on the
/// first one. Structural problems (unreadable file, bad JSON, wrong version)
/// still error out.
pub fn load_lenient(path: &Path) -> Result<(LoadedProblem, Vec<ParseError>), ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "problem".to_string());
    parse_str_lenient(&text, &fallback)
}

#[cfg(test)]
pub fn parse_str(text: &str, fallback_name: &str) -> Result<LoadedProblem, ParseError> {
    let (loaded, issues) = parse_str_lenient(text, fallback_name)?;
    if let Some(first) = issues.into_iter().next() {
        return Err(first);
    }
    Ok(loaded)
}

pub fn parse_str_lenient(
    text: &str,
    fallback_name: &str,
) -> Result<(LoadedProblem, Vec<ParseError>), ParseError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: classify(&e),
    })?;
    if file.version != 1 {
        return Err(ParseError::Version(file.version));
    }
    let name = file.name.clone().unwrap_or_else(|| fallback_name.to_string());
    let (problem, issues) = build(&file)?;
    Ok((LoadedProblem { name, problem }, issues))
}

fn classify(e: &serde_json::Error) -> String {
    // serde_json puts the position at the end of its message; strip it since
    // the surrounding error already reports line and column
    let m = e.to_string();
    match m.find(" at line ") {
        Some(pos) => m[..pos].to_string(),
        None => m,
    }
}

fn build(file: &ProblemFile) -> Result<(UncertainLP, Vec<ParseError>), ParseError> {
    let sense = match file.sense {
        SenseFile::Minimize => Sense::Minimize,
        SenseFile::Maximize => Sense::Maximize,
    };
    let mut constraints = Vec::with_capacity(file.constraints.len());
    for (i, c) in file.constraints.iter().enumerate() {
        if !c.directions.is_empty() && c.set.is_none() {
            return Err(ParseError::ConstraintModel {
                constraint: i,
                field: "set".into(),
                message: "directions given without an uncertainty set".into(),
            });
        }
        let pm = match &c.set {
            None => PerturbationModel::certain(c.nominal.clone(), c.rhs),
            Some(set) => PerturbationModel {
                nominal_row: c.nominal.clone(),
                nominal_rhs: c.rhs,
                directions: c
                    .directions
                    .iter()
                    .map(|d| Direction { row: d.row.clone(), rhs: d.rhs })
                    .collect(),
                set: to_set(set),
            },
        };
        constraints.push(match c.relation {
            RelationFile::Ge => UncertainConstraint::greater_equal(pm),
            RelationFile::Le => UncertainConstraint::less_equal(pm),
        });
    }
    let mut problem = UncertainLP::new(sense, file.objective.clone(), constraints);
    if let Some(lower) = &file.lower_bounds {
        problem.lower_bounds = lower.iter().map(|b| b.unwrap_or(f64::NEG_INFINITY)).collect();
    }
    if let Some(upper) = &file.upper_bounds {
        problem.upper_bounds = upper.iter().map(|b| b.unwrap_or(f64::INFINITY)).collect();
    }
    let issues = problem
        .validate()
        .issues
        .into_iter()
        .map(|issue| match issue.constraint {
            Some(c) => ParseError::ConstraintModel {
                constraint: c,
                field: issue.field.to_string(),
                message: issue.message,
            },
            None => ParseError::Model { field: issue.field.to_string(), message: issue.message },
        })
        .collect();
    Ok((problem, issues))
}

fn to_set(set: &SetFile) -> UncertaintySet {
    match set {
        SetFile::Box { half_widths } => UncertaintySet::Box { half_widths: half_widths.clone() },
        SetFile::Ball { radius, axis_scales } => UncertaintySet::Ball {
            radius: *radius,
            axis_scales: axis_scales.clone(),
        },
        SetFile::Scenarios { points } => UncertaintySet::Scenarios { points: points.clone() },
    }
}

/// Inverse of [`parse_str`], up to the `>=` normalization noted in the module
/// docs.
#[cfg(test)]
pub fn to_document(problem: &UncertainLP, name: Option<&str>) -> ProblemFile {
    let constraints = problem
        .constraints
        .iter()
        .map(|c| {
            let pm = &c.perturbation;
            ConstraintFile {
                relation: RelationFile::Ge,
                nominal: pm.nominal_row.clone(),
                rhs: pm.nominal_rhs,
                directions: pm
                    .directions
                    .iter()
                    .map(|d| DirectionFile { row: d.row.clone(), rhs: d.rhs })
                    .collect(),
                set: if pm.directions.is_empty() {
                    None
                } else {
                    Some(from_set(&pm.set))
                },
                comment: None,
            }
        })
        .collect();
    ProblemFile {
        version: 1,
        name: name.map(str::to_string),
        comment: None,
        sense: match problem.sense {
            Sense::Minimize => SenseFile::Minimize,
            Sense::Maximize => SenseFile::Maximize,
        },
        objective: problem.objective.clone(),
        lower_bounds: Some(problem.lower_bounds.iter().map(|&b| finite(b)).collect()),
        upper_bounds: Some(problem.upper_bounds.iter().map(|&b| finite(b)).collect()),
        constraints,
    }
}

#[cfg(test)]
fn finite(b: f64) -> Option<f64> {
    b.is_finite().then_some(b)
}

#[cfg(test)]
fn from_set(set: &UncertaintySet) -> SetFile {
    match set {
        UncertaintySet::Box { half_widths } => SetFile::Box { half_widths: half_widths.clone() },
        UncertaintySet::Ball { radius, axis_scales } => SetFile::Ball {
            radius: *radius,
            axis_scales: axis_scales.clone(),
        },
        UncertaintySet::Scenarios { points } => SetFile::Scenarios { points: points.clone() },
    }
}
