use std::io::{self, Write};

use dyadic_bellman::{BellmanReport, ExtremalFunction, Params};

/// 17 significant digits, enough for every `f64` to parse back exactly.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Aligned `name  value` lines.
pub fn table(out: &mut impl Write, rows: &[(&str, String)]) -> io::Result<()> {
    let width = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(())
}

pub fn param_rows(params: &Params) -> Vec<(&'static str, String)> {
    vec![
        ("p", num(params.p.get())),
        ("f", num(params.f)),
        ("F", num(params.big_f)),
        ("k", num(params.k)),
    ]
}

pub fn report_rows(report: &BellmanReport) -> Vec<(&'static str, String)> {
    let mut rows = param_rows(&report.params);
    rows.extend([
        ("value", num(report.value)),
        ("B0", num(report.b0)),
        ("Z0", num(report.z0)),
        ("omega_pk", num(report.omega_pk)),
        ("a", num(report.a)),
        ("p0", num(report.interval.p0)),
        ("p1", num(report.interval.p1)),
        ("grid_max", num(report.grid_max_value)),
        ("grid_argmax", num(report.grid_max_location)),
        ("grid_gap", num(report.grid_relative_gap())),
        ("grid_check", pass(report.grid_consistent()).to_string()),
    ]);
    rows
}

pub fn extremal_rows(g: &ExtremalFunction) -> Vec<(&'static str, String)> {
    let mut rows = param_rows(&g.params);
    rows.extend([
        ("a", num(g.a)),
        ("A1", num(g.a1)),
        ("c", num(g.c)),
        ("B0", num(g.b0)),
    ]);
    rows
}
