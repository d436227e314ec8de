//! CSV and JSON rendering of experiment results, and atomic file output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::experiments::{GeodesicCheck, GroverTrace, FORMAT_VERSION};

/// Column names of the per-step trace CSV, in order.
pub const TRACE_COLUMNS: [&str; 7] = [
    "step",
    "phi",
    "p_marked",
    "p_unmarked",
    "fisher_estimate",
    "geodesic_residual_max",
    "action_cumulative",
];

pub const CHECK_COLUMNS: [&str; 4] = ["metric", "value", "tolerance", "passed"];

/// 17 significant digits, enough to round-trip an `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trace_csv(trace: &GroverTrace) -> String {
    let mut out = format!(
        "# format_version: {FORMAT_VERSION}\n{}\n",
        TRACE_COLUMNS.join(",")
    );
    for r in &trace.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.step,
            format_float(r.phi),
            format_float(r.p_marked),
            format_float(r.p_unmarked),
            format_float(r.fisher_estimate),
            format_float(r.geodesic_residual_max),
            format_float(r.action_cumulative),
        );
    }
    out
}

pub fn check_csv(check: &GeodesicCheck) -> String {
    let mut out = format!(
        "# format_version: {FORMAT_VERSION}\n{}\n",
        CHECK_COLUMNS.join(",")
    );
    let tol = &check.tolerances;
    let rows = [
        (
            "integrator_vs_analytic_max_dev",
            check.integrator_vs_analytic_max_dev,
            tol.deviation,
        ),
        (
            "integrator_vs_simulated_max_dev",
            check.integrator_vs_simulated_max_dev,
            tol.deviation,
        ),
        ("action_distance_gap", check.action_distance_gap, tol.action),
    ];
    for (name, value, limit) in rows {
        let _ = writeln!(
            out,
            "{name},{},{},{}",
            format_float(value),
            format_float(limit),
            value <= limit
        );
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

/// Writes `contents` to a temporary file beside `path` and renames it into
/// place.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
