//! Output formatting. Tables round to a fixed number of decimals for humans;
//! CSV and JSON use 6 significant digits so identical inputs produce
//! byte-identical output.

use serde::Serialize;

pub const CSV_HEADER: &str = "instance,geometry,method,objective,constraints,iterations,seconds,status";

/// One comparison or solve row, in the fixed CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub instance: String,
    pub geometry: String,
    pub method: String,
    pub objective: Option<f64>,
    pub constraints: usize,
    pub iterations: usize,
    pub seconds: f64,
    pub status: String,
}

/// Full result of a solve, richer than a CSV row.
#[derive(Debug, Clone, Serialize)]
pub struct SolveDoc {
    pub instance: String,
    pub geometry: String,
    pub method: String,
    pub status: String,
    pub objective: Option<f64>,
    pub x: Option<Vec<f64>>,
    pub certificates: Vec<CertificateDoc>,
    pub constraints: usize,
    pub iterations: usize,
    pub pivots: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateDoc {
    pub constraint: usize,
    pub xi: Vec<f64>,
}

/// Shortest of fixed and scientific notation at 6 significant digits, with
/// trailing zeros removed. Deterministic for equal inputs.
pub fn fmt_g6(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let digits = (5 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.digits$}"))
    } else {
        let s = format!("{v:.5e}");
        // normalize 1.20000e7 to 1.2e7
        match s.split_once('e') {
            Some((mant, e)) => format!("{}e{}", trim_zeros(mant), e),
            None => s,
        }
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn csv_cell(objective: Option<f64>) -> String {
    objective.map(fmt_g6).unwrap_or_default()
}

pub fn csv_line(r: &Row) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.instance,
        r.geometry,
        r.method,
        csv_cell(r.objective),
        r.constraints,
        r.iterations,
        fmt_g6(r.seconds),
        r.status
    )
}

pub fn csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&csv_line(r));
        out.push('\n');
    }
    out
}

pub fn rows_table(rows: &[Row]) -> String {
    let header: Vec<String> = CSV_HEADER.split(',').map(str::to_string).collect();
    let mut cells: Vec<Vec<String>> = vec![header];
    for r in rows {
        cells.push(vec![
            r.instance.clone(),
            r.geometry.clone(),
            r.method.clone(),
            csv_cell(r.objective),
            r.constraints.to_string(),
            r.iterations.to_string(),
            fmt_g6(r.seconds),
            r.status.clone(),
        ]);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn rows_json(rows: &[Row]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

fn fmt_fixed(v: f64, decimals: u32) -> String {
    format!("{v:.prec$}", prec = decimals as usize)
}

pub fn solve_table(doc: &SolveDoc, decimals: u32) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        out.push_str(&format!("{k:<12} {v}\n"));
    };
    line("instance", doc.instance.clone());
    line("geometry", doc.geometry.clone());
    line("method", doc.method.clone());
    line("status", doc.status.clone());
    if let Some(obj) = doc.objective {
        line("objective", fmt_fixed(obj, decimals));
    }
    if let Some(x) = &doc.x {
        let xs: Vec<String> = x.iter().map(|&v| fmt_fixed(v, decimals)).collect();
        line("x", xs.join(" "));
    }
    for c in &doc.certificates {
        let xs: Vec<String> = c.xi.iter().map(|&v| fmt_fixed(v, decimals)).collect();
        line("binding", format!("constraint {} at xi [{}]", c.constraint, xs.join(" ")));
    }
    line("constraints", doc.constraints.to_string());
    line("iterations", doc.iterations.to_string());
    line("pivots", doc.pivots.to_string());
    line("seconds", fmt_g6(doc.seconds));
    out
}

pub fn solve_csv(doc: &SolveDoc) -> String {
    csv(&[Row {
        instance: doc.instance.clone(),
        geometry: doc.geometry.clone(),
        method: doc.method.clone(),
        objective: doc.objective,
        constraints: doc.constraints,
        iterations: doc.iterations,
        seconds: doc.seconds,
        status: doc.status.clone(),
    }])
}

pub fn solve_json(doc: &SolveDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("solve doc serializes");
    s.push('\n');
    s
}
