//! Output encoding shared by every subcommand.
//!
//! Numbers carry 12 significant digits, in lowercase scientific notation
//! when `|x| < 1e-4` or `|x| ≥ 1e6` and positional notation otherwise. JSON
//! values are the same rounded numbers, so CSV and JSON agree exactly.

use serde::Serialize;

/// First line of every CSV file.
pub const CSV_VERSION_LINE: &str = "# thermowork-csv v1";

pub const COLUMNS: [&str; 11] = [
    "g_over_omega",
    "work",
    "work_local_only",
    "bound",
    "efficiency",
    "ground_energy",
    "sz_mean",
    "n_mean",
    "hi_mean",
    "mi_term",
    "converged_cutoff",
];

pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let rounded: f64 = sci.parse().expect("formatted float parses");
    let a = rounded.abs();
    if !(1e-4..1e6).contains(&a) {
        return sci;
    }
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (11 - exp).max(0) as usize;
    format!("{rounded:.decimals$}")
}

/// `x` rounded to the value [`format_number`] prints.
pub fn round_sig(x: f64) -> f64 {
    if x.is_finite() {
        format_number(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

/// One output row. Optional cells are empty in CSV and `null` in JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub g_over_omega: f64,
    pub work: Option<f64>,
    pub work_local_only: Option<f64>,
    pub bound: Option<f64>,
    pub efficiency: Option<f64>,
    pub ground_energy: Option<f64>,
    pub sz_mean: Option<f64>,
    pub n_mean: Option<f64>,
    pub hi_mean: Option<f64>,
    pub mi_term: Option<f64>,
    pub converged_cutoff: Option<usize>,
}

impl Row {
    /// Placeholder for a parameter value that could not be evaluated.
    pub fn failed(g_over_omega: f64) -> Self {
        Self {
            g_over_omega,
            work: None,
            work_local_only: None,
            bound: None,
            efficiency: None,
            ground_energy: None,
            sz_mean: None,
            n_mean: None,
            hi_mean: None,
            mi_term: None,
            converged_cutoff: None,
        }
    }

    /// Every real-valued cell rounded to 12 significant digits.
    pub fn rounded(&self) -> Self {
        let r = |v: Option<f64>| v.map(round_sig);
        Self {
            g_over_omega: round_sig(self.g_over_omega),
            work: r(self.work),
            work_local_only: r(self.work_local_only),
            bound: r(self.bound),
            efficiency: r(self.efficiency),
            ground_energy: r(self.ground_energy),
            sz_mean: r(self.sz_mean),
            n_mean: r(self.n_mean),
            hi_mean: r(self.hi_mean),
            mi_term: r(self.mi_term),
            converged_cutoff: self.converged_cutoff,
        }
    }

    fn cells(&self) -> Vec<String> {
        let f = |v: Option<f64>| v.map(format_number).unwrap_or_default();
        vec![
            format_number(self.g_over_omega),
            f(self.work),
            f(self.work_local_only),
            f(self.bound),
            f(self.efficiency),
            f(self.ground_energy),
            f(self.sz_mean),
            f(self.n_mean),
            f(self.hi_mean),
            f(self.mi_term),
            self.converged_cutoff
                .map(|n| n.to_string())
                .unwrap_or_default(),
        ]
    }
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::new();
    out.push_str(CSV_VERSION_LINE);
    out.push('\n');
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.cells().join(","));
        out.push('\n');
    }
    out
}

pub fn to_json_array(rows: &[Row]) -> String {
    let rounded: Vec<Row> = rows.iter().map(Row::rounded).collect();
    let mut s = serde_json::to_string_pretty(&rounded).expect("rows serialize");
    s.push('\n');
    s
}

pub fn to_json_object(row: &Row) -> String {
    let mut s = serde_json::to_string_pretty(&row.rounded()).expect("row serializes");
    s.push('\n');
    s
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct CsvParseError {
    pub line: usize,
    pub reason: String,
}

/// Reads back a file written by [`to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<Row>, CsvParseError> {
    let mut lines = text.lines().enumerate();
    let err = |line: usize, reason: &str| CsvParseError {
        line: line + 1,
        reason: reason.to_string(),
    };
    match lines.next() {
        Some((_, l)) if l == CSV_VERSION_LINE => {}
        _ => return Err(err(0, "missing version line")),
    }
    match lines.next() {
        Some((_, l)) if l == COLUMNS.join(",") => {}
        _ => return Err(err(1, "unexpected header")),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != COLUMNS.len() {
            return Err(err(i, "wrong number of cells"));
        }
        let num = |s: &str| -> Result<Option<f64>, CsvParseError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| err(i, "bad number"))
            }
        };
        rows.push(Row {
            g_over_omega: num(cells[0])?.ok_or_else(|| err(i, "missing parameter"))?,
            work: num(cells[1])?,
            work_local_only: num(cells[2])?,
            bound: num(cells[3])?,
            efficiency: num(cells[4])?,
            ground_energy: num(cells[5])?,
            sz_mean: num(cells[6])?,
            n_mean: num(cells[7])?,
            hi_mean: num(cells[8])?,
            mi_term: num(cells[9])?,
            converged_cutoff: if cells[10].is_empty() {
                None
            } else {
                Some(cells[10].parse().map_err(|_| err(i, "bad cutoff"))?)
            },
        });
    }
    Ok(rows)
}
