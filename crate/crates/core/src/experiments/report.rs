use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::io::fmt_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::NotApplicable => "not-applicable",
        }
    }

    pub fn is_fail(self) -> bool {
        self == Self::Fail
    }
}

/// One named criterion of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictLine {
    pub check: String,
    pub criterion: String,
    pub verdict: Verdict,
    pub detail: String,
}

impl VerdictLine {
    pub fn new(check: &str, criterion: &str, verdict: Verdict, detail: impl Into<String>) -> Self {
        Self { check: check.into(), criterion: criterion.into(), verdict, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<Verdict> for Cell {
    fn from(v: Verdict) -> Self {
        Cell::Text(v.as_str().into())
    }
}

/// Column-ordered numeric table rendered as CSV with a header line.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    pub fn column_f64(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name)?.into_iter().map(Cell::as_f64).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Table plus verdicts of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub table: Table,
    pub verdicts: Vec<VerdictLine>,
}

impl ExperimentReport {
    pub fn all_pass(&self) -> bool {
        !self.verdicts.iter().any(|v| v.verdict.is_fail())
    }

    pub fn failures(&self) -> Vec<&VerdictLine> {
        self.verdicts.iter().filter(|v| v.verdict.is_fail()).collect()
    }

    pub fn verdict(&self, criterion: &str) -> Option<Verdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion).map(|v| v.verdict)
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    experiments: Vec<SummaryEntry<'a>>,
    all_pass: bool,
}

#[derive(Serialize)]
struct SummaryEntry<'a> {
    name: &'a str,
    all_pass: bool,
    verdicts: &'a [VerdictLine],
}

/// JSON summary of verdicts; key order is fixed by the struct layout.
pub fn summary_json(reports: &[ExperimentReport]) -> String {
    let summary = Summary {
        experiments: reports
            .iter()
            .map(|r| SummaryEntry { name: &r.name, all_pass: r.all_pass(), verdicts: &r.verdicts })
            .collect(),
        all_pass: reports.iter().all(ExperimentReport::all_pass),
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}

pub(crate) fn fmt_list(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.6e}")).collect::<Vec<_>>().join(", ")
}

/// `true` when each entry is strictly below its predecessor.
pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

pub fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] > w[0])
}
