//! Human-readable report of an output directory.

use std::fmt::Write as _;
use std::path::Path;

use crate::output::{column, fit_decay_rate, least_squares_slope, read_columns, Summary};
use crate::run::{MANIFEST_FILE, SUMMARY_FILE};

fn table_for(kind: &str) -> Option<&'static str> {
    match kind {
        "simulate" => Some("trajectory.csv"),
        "limit" => Some("limit.csv"),
        "converge" => Some("converge.csv"),
        "resonance-scan" => Some("resonant_triads.csv"),
        "propcheck" => Some("propcheck.csv"),
        _ => None,
    }
}

/// Tables, decay-rate fits and convergence-order estimates for `dir`.
pub fn summarize(dir: &Path) -> Result<String, String> {
    let missing: Vec<&str> = [MANIFEST_FILE, SUMMARY_FILE]
        .into_iter()
        .filter(|f| !dir.join(f).is_file())
        .collect();
    if !missing.is_empty() {
        return Err(format!(
            "{} is not a run directory: missing {} (expected {}, {} and the kind's table: trajectory.csv, limit.csv, converge.csv, resonant_triads.csv, propcheck.csv or certificate.json)",
            dir.display(),
            missing.join(", "),
            MANIFEST_FILE,
            SUMMARY_FILE
        ));
    }
    let text = std::fs::read_to_string(dir.join(SUMMARY_FILE)).map_err(|e| e.to_string())?;
    let summary: Summary =
        serde_json::from_str(&text).map_err(|e| format!("{}: {}", SUMMARY_FILE, e))?;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "kind: {}  status: {:?}  exit code: {}",
        summary.kind, summary.status, summary.exit_code
    );
    if let Some(e) = &summary.error {
        let _ = writeln!(out, "error: {}", e);
    }
    if !summary.invariants.is_empty() {
        let _ = writeln!(
            out,
            "\n{:<28} {:<6} {:>14} {:>14}",
            "invariant", "pass", "value", "threshold"
        );
        for i in &summary.invariants {
            let _ = writeln!(
                out,
                "{:<28} {:<6} {:>14.6e} {:>14.6e}",
                i.name, i.passed, i.value, i.threshold
            );
        }
    }
    let table = match table_for(&summary.kind) {
        Some(t) if summary.status != crate::output::Status::Validation => t,
        _ => {
            if let Some(m) = summary.metrics.get("certificate_margin") {
                let _ = writeln!(out, "\ncertificate margin: {}", m);
            }
            return Ok(out);
        }
    };
    let path = dir.join(table);
    if !path.is_file() {
        let _ = writeln!(
            out,
            "\n{} missing; the run stopped before writing it",
            table
        );
        return Ok(out);
    }
    let cols = read_columns(&path)?;
    match summary.kind.as_str() {
        "simulate" => {
            let t = column(&cols, "t")?;
            let l2 = column(&cols, "L2")?;
            print_columns(&mut out, &cols, &["t", "L2", "Hs", "div_residual"]);
            if let Some(r) = fit_decay_rate(t, l2) {
                let _ = writeln!(out, "\nfitted L2 decay rate: {:.6e}", r);
            }
        }
        "limit" => {
            let t = column(&cols, "t")?;
            let bar = column(&cols, "bar_Linf_L2h")?;
            print_columns(&mut out, &cols, &["t", "bar_L2", "bar_Linf_L2h", "osc_L2"]);
            let c_nu = summary.metrics.get("c_nu").and_then(|v| v.as_f64());
            if let (Some(r), Some(c)) = (fit_decay_rate(t, bar), c_nu) {
                let _ = writeln!(
                    out,
                    "\nfitted decay rate of ‖ū‖_(L∞_v L²_h): {:.6e}  (c·ν = {:.6e}, ratio {:.4})",
                    r,
                    c,
                    r / c
                );
            }
        }
        "converge" => {
            print_columns(&mut out, &cols, &["epsilon", "sup_Hs", "L2_Hs1", "ratio"]);
            let eps = column(&cols, "epsilon")?;
            let sup = column(&cols, "sup_Hs")?;
            let decreasing = sup.windows(2).all(|w| w[1] < w[0]);
            let _ = writeln!(
                out,
                "\ntrend: {}",
                if decreasing {
                    "strictly decreasing"
                } else {
                    "not monotone"
                }
            );
            let pts: Vec<(f64, f64)> = eps.iter().zip(sup).map(|(e, s)| (e.ln(), s.ln())).collect();
            if let Some(p) = least_squares_slope(&pts) {
                let _ = writeln!(out, "estimated order in ε: {:.4}", p);
            }
        }
        "resonance-scan" => {
            let _ = writeln!(
                out,
                "\nresonant triads: {}",
                summary
                    .metrics
                    .get("resonant_triads")
                    .cloned()
                    .unwrap_or_default()
            );
            if let Some(c) = summary.metrics.get("by_class") {
                let _ = writeln!(out, "by class: {}", c);
            }
        }
        _ => {
            let _ = writeln!(
                out,
                "\n{} rows in {}",
                cols.first().map(|c| c.1.len()).unwrap_or(0),
                table
            );
        }
    }
    Ok(out)
}

fn print_columns(out: &mut String, cols: &[(String, Vec<f64>)], names: &[&str]) {
    let picked: Vec<&(String, Vec<f64>)> = names
        .iter()
        .filter_map(|n| cols.iter().find(|c| c.0 == *n))
        .collect();
    let _ = writeln!(out);
    for c in &picked {
        let _ = write!(out, "{:>16}", c.0);
    }
    let _ = writeln!(out);
    let rows = picked.first().map(|c| c.1.len()).unwrap_or(0);
    for r in 0..rows {
        for c in &picked {
            let _ = write!(out, "{:>16.8e}", c.1[r]);
        }
        let _ = writeln!(out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::{Cell, Table};

    #[test]
    fn empty_directory_lists_expected_files() {
        let d = tempfile::tempdir().unwrap();
        let e = summarize(d.path()).unwrap_err();
        assert!(
            e.contains("manifest.toml") && e.contains("summary.json"),
            "{}",
            e
        );
    }

    #[test]
    fn limit_report_fits_the_decay_rate() {
        let d = tempfile::tempdir().unwrap();
        let c_nu = 0.05;
        let mut t = Table::new(&["t", "bar_L2", "bar_Linf_L2h", "osc_L2"]);
        for j in 0..=20 {
            let s = j as f64;
            t.push(vec![
                Cell::F(s),
                Cell::F((-c_nu * s).exp()),
                Cell::F(0.3 * (-c_nu * s).exp()),
                Cell::F(0.1),
            ]);
        }
        t.write(&d.path().join("limit.csv")).unwrap();
        let mut s = Summary::new("limit");
        s.metric("c_nu", c_nu);
        std::fs::write(
            d.path().join(SUMMARY_FILE),
            serde_json::to_string(&s).unwrap(),
        )
        .unwrap();
        std::fs::write(d.path().join(MANIFEST_FILE), "").unwrap();
        let report = summarize(d.path()).unwrap();
        let ratio: f64 = report
            .rsplit("ratio ")
            .next()
            .unwrap()
            .trim()
            .trim_end_matches(')')
            .parse()
            .unwrap();
        assert!((ratio - 1.0).abs() < 0.05, "{}", report);
    }
}
