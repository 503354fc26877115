//! CSV tables, summary JSON and the run error type.

use std::path::Path;

use serde::{Deserialize, Serialize};

/// Fixed 17-significant-digit rendering used in every CSV.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x)
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// One CSV cell.
#[derive(Clone, Debug)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => fmt_f64(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::render))?;
        }
        w.flush()
    }
}

/// Read a CSV written by [`Table::write`] as named float columns.
pub fn read_columns(path: &Path) -> Result<Vec<(String, Vec<f64>)>, String> {
    let mut r = csv::Reader::from_path(path).map_err(|e| format!("{}: {}", path.display(), e))?;
    let header: Vec<String> = r
        .headers()
        .map_err(|e| format!("{}: {}", path.display(), e))?
        .iter()
        .map(String::from)
        .collect();
    let mut cols: Vec<(String, Vec<f64>)> = header.into_iter().map(|h| (h, Vec::new())).collect();
    for rec in r.records() {
        let rec = rec.map_err(|e| format!("{}: {}", path.display(), e))?;
        for (c, v) in cols.iter_mut().zip(rec.iter()) {
            c.1.push(v.parse().unwrap_or(f64::NAN));
        }
    }
    Ok(cols)
}

pub fn column<'a>(cols: &'a [(String, Vec<f64>)], name: &str) -> Result<&'a [f64], String> {
    cols.iter()
        .find(|c| c.0 == name)
        .map(|c| c.1.as_slice())
        .ok_or_else(|| format!("missing column `{}`", name))
}

/// JSON has no NaN or infinity; `serde_json` writes them as `null`.
fn null_as_nan<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Outcome of one check made during a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub passed: bool,
    #[serde(deserialize_with = "null_as_nan")]
    pub value: f64,
    #[serde(deserialize_with = "null_as_nan")]
    pub threshold: f64,
    pub detail: String,
}

impl Invariant {
    /// `value ≤ threshold`.
    pub fn at_most(name: &str, value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
            detail: detail.into(),
        }
    }

    pub fn holds(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            value: passed as u8 as f64,
            threshold: 1.0,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Validation,
    Runtime,
    InvariantFailure,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Validation => 2,
            Status::Runtime => 3,
            Status::InvariantFailure => 4,
        }
    }
}

/// Contents of `summary.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub kind: String,
    pub status: Status,
    pub exit_code: i32,
    pub error: Option<String>,
    pub invariants: Vec<Invariant>,
    pub metrics: serde_json::Map<String, serde_json::Value>,
    pub files: Vec<String>,
}

impl Summary {
    pub fn new(kind: &str) -> Self {
        Self {
            kind: kind.into(),
            status: Status::Ok,
            exit_code: 0,
            error: None,
            invariants: Vec::new(),
            metrics: serde_json::Map::new(),
            files: Vec::new(),
        }
    }

    pub fn metric(&mut self, key: &str, v: impl Into<serde_json::Value>) {
        self.metrics.insert(key.into(), v.into());
    }

    pub fn all_passed(&self) -> bool {
        self.invariants.iter().all(|i| i.passed)
    }
}

/// A run failure with its exit-code class.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct RunError {
    pub status: Status,
    pub message: String,
}

impl RunError {
    pub fn validation(m: impl Into<String>) -> Self {
        Self {
            status: Status::Validation,
            message: m.into(),
        }
    }

    pub fn runtime(m: impl Into<String>) -> Self {
        Self {
            status: Status::Runtime,
            message: m.into(),
        }
    }
}

impl From<stratocore::Error> for RunError {
    fn from(e: stratocore::Error) -> Self {
        use stratocore::Error as E;
        let status = match &e {
            E::InvalidTorus(_)
            | E::Config(_)
            | E::Recipe(_)
            | E::Domain(_)
            | E::Constraint(_)
            | E::Exactness(_) => Status::Validation,
            E::Certificate(_) | E::ResonantDomain { .. } | E::Divisor { .. } => {
                Status::InvariantFailure
            }
            _ => Status::Runtime,
        };
        Self {
            status,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::runtime(format!("io: {}", e))
    }
}

impl From<crate::manifest::ManifestError> for RunError {
    fn from(e: crate::manifest::ManifestError) -> Self {
        RunError::validation(e.to_string())
    }
}

impl From<crate::snapshot::SnapshotError> for RunError {
    fn from(e: crate::snapshot::SnapshotError) -> Self {
        RunError::validation(format!("snapshot: {}", e))
    }
}

/// Least-squares slope of `ln y` against `t`, negated: the fitted rate `r`
/// in `y ≈ A e^{−rt}`. Non-positive samples are skipped.
pub fn fit_decay_rate(t: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(_, &v)| v > 0.0 && v.is_finite())
        .map(|(&a, &b)| (a, b.ln()))
        .collect();
    least_squares_slope(&pts).map(|s| -s)
}

/// Slope of the least-squares line through `pts`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
