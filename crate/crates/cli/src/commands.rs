use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use dyadic_bellman::sweep::evaluate_point;
use dyadic_bellman::verification::{
    check_strong_type, check_weak_type, discretize, dyadic_bellman_bound, dyadic_maximal,
    probe_supremum, quadrature_hardy_estimate, sample_admissible_rng, trial_rng, ProbeReport,
    StepFunction,
};
use dyadic_bellman::{
    bellman_value, build_extremizer, run_sweep, BellmanConfig, Error, Execution, Params,
    SweepParam, SweepSpec, SweepValues,
};
use serde_json::json;

use crate::render::{extremal_rows, num, param_rows, pass, report_rows, table};
use crate::{Command, Format, ParamArgs, SweepArgs};

/// Step functions from the probe that are also run through the dyadic model.
const DYADIC_SAMPLES: usize = 32;
const WEAK_LEVELS: usize = 8;
/// Relative slack for the dyadic inequalities, which hold with equality in
/// some cases.
const DYADIC_SLACK: f64 = 1e-9;

pub const CSV_HEADER: [&str; 12] = [
    "p", "f", "F", "k", "value", "B0", "Z0", "a", "A1", "c", "p0", "p1",
];

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Check(_) | CliError::Io(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Check(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

/// Bad input is a usage error; anything else the library reports is a
/// failed internal check.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Domain { .. } | Error::Size(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Check(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed,
    Failed,
}

impl Status {
    fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Passed
        } else {
            Status::Failed
        }
    }
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Passed => ExitCode::SUCCESS,
            Status::Failed => ExitCode::from(2),
        }
    }
}

type CliResult = Result<Status, CliError>;

pub fn run(command: Command, format: Format) -> CliResult {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = match command {
        Command::Value(params) => value(&mut out, &params, format),
        Command::Extremal { params, samples } => extremal(&mut out, &params, samples, format),
        Command::Verify {
            params,
            trials,
            n,
            seed,
            tol,
            out: path,
        } => verify(
            &mut out,
            &params,
            trials,
            n,
            seed,
            tol,
            path.as_deref(),
            format,
        ),
        Command::Sweep(args) => sweep(&mut out, &args, format),
    }?;
    out.flush()?;
    Ok(status)
}

fn params_of(args: &ParamArgs) -> Result<Params, CliError> {
    Ok(Params::new(args.p, args.f, args.big_f, args.k)?)
}

fn csv_row(point: [f64; 4], values: Option<&SweepValues>) -> Vec<String> {
    let tail = match values {
        Some(v) => [v.value, v.b0, v.z0, v.a, v.a1, v.c, v.p0, v.p1],
        None => [f64::NAN; 8],
    };
    point.iter().chain(tail.iter()).map(|&x| num(x)).collect()
}

fn write_sweep_csv(
    out: impl Write,
    rows: &[([f64; 4], Option<SweepValues>)],
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (point, values) in rows {
        w.write_record(csv_row(*point, values.as_ref()))?;
    }
    w.flush()?;
    Ok(())
}

fn value(out: &mut impl Write, args: &ParamArgs, format: Format) -> CliResult {
    let params = params_of(args)?;
    let report = bellman_value(&params)?;
    let status = Status::from_ok(report.grid_consistent());
    match format {
        Format::Human => table(out, &report_rows(&report))?,
        Format::Json => {
            let record = json!({
                "p": params.p.get(),
                "f": params.f,
                "F": params.big_f,
                "k": params.k,
                "value": report.value,
                "B0": report.b0,
                "Z0": report.z0,
                "omega_pk": report.omega_pk,
                "a": report.a,
                "p0": report.interval.p0,
                "p1": report.interval.p1,
                "grid_max_value": report.grid_max_value,
                "grid_max_location": report.grid_max_location,
                "grid_relative_gap": report.grid_relative_gap(),
                "grid_consistent": report.grid_consistent(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
        }
        Format::Csv => {
            let point = [params.p.get(), params.f, params.big_f, params.k];
            let values = evaluate_point(point, &BellmanConfig::default())?;
            write_sweep_csv(out, &[(point, Some(values))])?;
        }
    }
    if status == Status::Failed {
        eprintln!(
            "error: grid maximum {} disagrees with the closed form (relative gap {})",
            num(report.grid_max_value),
            num(report.grid_relative_gap())
        );
    }
    Ok(status)
}

/// `m` points `10^(-6 (1 - i/(m-1)))`, ending exactly at 1.
fn log_grid(m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..m)
            .map(|i| {
                if i + 1 == m {
                    1.0
                } else {
                    10f64.powf(-6.0 * (1.0 - i as f64 / (m - 1) as f64))
                }
            })
            .collect(),
    }
}

fn extremal(out: &mut impl Write, args: &ParamArgs, samples: usize, format: Format) -> CliResult {
    let params = params_of(args)?;
    let g = build_extremizer(&params)?;
    let rows = log_grid(samples)
        .into_iter()
        .map(|t| Ok((t, g.g_eval(t)?, g.hardy_average(t)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    match format {
        Format::Human => {
            table(out, &extremal_rows(&g))?;
            if !rows.is_empty() {
                writeln!(out)?;
                writeln!(out, "{:<24}  {:<24}  hardy_average", "t", "g")?;
                for (t, v, h) in &rows {
                    writeln!(out, "{:<24}  {:<24}  {}", num(*t), num(*v), num(*h))?;
                }
            }
        }
        Format::Json => {
            let table: Vec<_> = rows
                .iter()
                .map(|(t, v, h)| json!({"t": t, "g": v, "hardy_average": h}))
                .collect();
            let record = json!({
                "p": params.p.get(),
                "f": params.f,
                "F": params.big_f,
                "k": params.k,
                "a": g.a,
                "A1": g.a1,
                "c": g.c,
                "B0": g.b0,
                "table": table,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if rows.is_empty() {
                w.write_record(["p", "f", "F", "k", "a", "A1", "c", "B0"])?;
                let rec = [
                    params.p.get(),
                    params.f,
                    params.big_f,
                    params.k,
                    g.a,
                    g.a1,
                    g.c,
                    g.b0,
                ];
                w.write_record(rec.iter().map(|&x| num(x)))?;
            } else {
                w.write_record(["t", "g", "hardy_average"])?;
                for (t, v, h) in &rows {
                    w.write_record([num(*t), num(*v), num(*h)])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(Status::Passed)
}

#[derive(Debug, Default)]
struct DyadicTally {
    functions: usize,
    weak: usize,
    strong: usize,
    bellman: usize,
    worst_bellman_gap: f64,
}

impl DyadicTally {
    fn violations(&self) -> usize {
        self.weak + self.strong + self.bellman
    }

    fn check(&mut self, phi: &StepFunction, params: &Params) -> Result<(), Error> {
        self.functions += 1;
        let top = dyadic_maximal(phi)?
            .values()
            .iter()
            .copied()
            .fold(0.0, f64::max);
        for j in 1..=WEAK_LEVELS {
            let (lhs, rhs) = check_weak_type(phi, top * j as f64 / WEAK_LEVELS as f64)?;
            if lhs > rhs * (1.0 + DYADIC_SLACK) {
                self.weak += 1;
            }
        }
        let (lhs, rhs) = check_strong_type(phi, params.p)?;
        if lhs > rhs * (1.0 + DYADIC_SLACK) {
            self.strong += 1;
        }
        let (lhs, bound) = dyadic_bellman_bound(phi, params.p, params.k)?;
        let gap = (lhs - bound) / bound;
        if self.functions == 1 || gap > self.worst_bellman_gap {
            self.worst_bellman_gap = gap;
        }
        if gap > DYADIC_SLACK {
            self.bellman += 1;
        }
        Ok(())
    }
}

fn dyadic_checks(
    params: &Params,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DyadicTally, Error> {
    let mut tally = DyadicTally::default();
    tally.check(&discretize(&build_extremizer(params)?, n)?, params)?;
    for i in 0..trials.min(DYADIC_SAMPLES) {
        let mut rng = trial_rng(seed, i as u64);
        match sample_admissible_rng(params, n, &mut rng) {
            Ok(phi) => tally.check(&phi, params)?,
            Err(Error::Rejected { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(tally)
}

fn write_trials(path: &Path, report: &ProbeReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(["trial", "value"])?;
    for (i, v) in report.trial_values.iter().enumerate() {
        w.write_record([i.to_string(), num(v.unwrap_or(f64::NAN))])?;
    }
    w.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    out: &mut impl Write,
    args: &ParamArgs,
    trials: usize,
    n: usize,
    seed: u64,
    tol: f64,
    path: Option<&Path>,
    format: Format,
) -> CliResult {
    let params = params_of(args)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage(format!("tol > 0 violated (tol = {tol})")));
    }
    if n == 0 {
        return Err(CliError::Usage("n > 0 violated (n = 0)".into()));
    }
    let value = bellman_value(&params)?.value;
    let g = build_extremizer(&params)?;
    let quad = quadrature_hardy_estimate(&g, params.k)?;
    let quad_gap = (quad.value - value).abs() / value;
    let quad_ok = quad_gap <= tol && quad.error_estimate <= tol * value;

    let probe = if trials > 0 {
        Some(probe_supremum(&params, n, trials, seed)?)
    } else {
        None
    };
    let probe_ok = probe.as_ref().is_none_or(|r| r.passes(tol * value));
    if let (Some(path), Some(report)) = (path, probe.as_ref()) {
        write_trials(path, report)?;
    }

    let dyadic = if trials > 0 && n.is_power_of_two() {
        Some(dyadic_checks(&params, n, trials, seed)?)
    } else {
        None
    };
    let dyadic_ok = dyadic.as_ref().is_none_or(|t| t.violations() == 0);
    let ok = quad_ok && probe_ok && dyadic_ok;

    match format {
        Format::Human => {
            let mut rows = param_rows(&params);
            rows.push(("value", num(value)));
            rows.push(("quadrature", num(quad.value)));
            rows.push(("quadrature_gap", num(quad_gap)));
            rows.push(("quadrature_check", pass(quad_ok).to_string()));
            match &probe {
                Some(r) => {
                    rows.push((
                        "trials",
                        format!(
                            "{} ({} accepted, {} rejected)",
                            r.trials, r.accepted, r.rejected
                        ),
                    ));
                    rows.push(("n", r.n.to_string()));
                    rows.push(("seed", r.seed.to_string()));
                    rows.push(("extremizer_discrete", num(r.extremizer_discrete_value)));
                    rows.push(("best_value", num(r.best_value)));
                    rows.push(("max_violation", num(r.max_violation)));
                    rows.push(("probe_check", pass(probe_ok).to_string()));
                }
                None => rows.push(("probe_check", "SKIPPED (no trials)".into())),
            }
            match &dyadic {
                Some(t) => {
                    rows.push(("dyadic_functions", t.functions.to_string()));
                    rows.push((
                        "dyadic_violations",
                        format!(
                            "weak {}, strong {}, bellman {}",
                            t.weak, t.strong, t.bellman
                        ),
                    ));
                    rows.push(("dyadic_worst_gap", num(t.worst_bellman_gap)));
                    rows.push(("dyadic_check", pass(dyadic_ok).to_string()));
                }
                None => rows.push(("dyadic_check", "SKIPPED".into())),
            }
            rows.push(("result", pass(ok).to_string()));
            table(out, &rows)?;
        }
        Format::Json => {
            let record = json!({
                "p": params.p.get(),
                "f": params.f,
                "F": params.big_f,
                "k": params.k,
                "value": value,
                "tol": tol,
                "quadrature": {
                    "value": quad.value,
                    "error_estimate": quad.error_estimate,
                    "relative_gap": quad_gap,
                    "pass": quad_ok,
                },
                "probe": probe.as_ref().map(|r| json!({
                    "n": r.n,
                    "trials": r.trials,
                    "seed": r.seed,
                    "accepted": r.accepted,
                    "rejected": r.rejected,
                    "best_value": r.best_value,
                    "analytic_value": r.analytic_value,
                    "max_violation": r.max_violation,
                    "extremizer_discrete_value": r.extremizer_discrete_value,
                    "pass": probe_ok,
                })),
                "dyadic": dyadic.as_ref().map(|t| json!({
                    "functions": t.functions,
                    "weak_violations": t.weak,
                    "strong_violations": t.strong,
                    "bellman_violations": t.bellman,
                    "worst_bellman_gap": t.worst_bellman_gap,
                    "pass": dyadic_ok,
                })),
                "pass": ok,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&record)?)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["check", "status", "detail"])?;
            w.write_record(["quadrature", pass(quad_ok), &num(quad_gap)])?;
            match &probe {
                Some(r) => w.write_record(["probe", pass(probe_ok), &num(r.max_violation)])?,
                None => w.write_record(["probe", "SKIPPED", ""])?,
            }
            match &dyadic {
                Some(t) => {
                    w.write_record(["dyadic", pass(dyadic_ok), &t.violations().to_string()])?
                }
                None => w.write_record(["dyadic", "SKIPPED", ""])?,
            }
            w.flush()?;
        }
    }
    Ok(Status::from_ok(ok))
}

fn sweep(out: &mut impl Write, args: &SweepArgs, format: Format) -> CliResult {
    let param: SweepParam = args.param.parse()?;
    let fixed = [
        ("p", args.p),
        ("f", args.f),
        ("F", args.big_f),
        ("k", args.k),
    ];
    let mut base = [0.0; 4];
    for (i, (name, v)) in fixed.iter().enumerate() {
        match v {
            Some(v) => base[i] = *v,
            None if *name == param.to_string() => {}
            None => {
                return Err(CliError::Usage(format!(
                    "--{name} is required unless sweeping {name}"
                )))
            }
        }
    }
    let spec = SweepSpec {
        param,
        start: args.start,
        stop: args.stop,
        steps: args.steps,
        base,
    };
    let rows = run_sweep(&spec, &BellmanConfig::default(), Execution::default())?;
    let mut ok = true;
    let mut results = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let [p, f, big_f, k] = row.point;
        match &row.outcome {
            Ok(v) => {
                if !v.grid_consistent {
                    eprintln!("error: row {i}: grid maximum disagrees with the closed form");
                    ok = false;
                }
                results.push((row.point, Some(*v)));
            }
            Err(reason) => {
                if Params::new(p, f, big_f, k).is_ok() {
                    eprintln!("error: row {i}: {reason}");
                    ok = false;
                } else {
                    eprintln!("warning: row {i} skipped: {reason}");
                }
                results.push((row.point, None));
            }
        }
    }
    match (format, &args.out) {
        (Format::Json, _) => {
            let records: Vec<_> = results
                .iter()
                .map(|([p, f, big_f, k], v)| {
                    json!({
                        "p": p, "f": f, "F": big_f, "k": k,
                        "skipped": v.is_none(),
                        "value": v.map(|v| v.value),
                        "B0": v.map(|v| v.b0),
                        "Z0": v.map(|v| v.z0),
                        "a": v.map(|v| v.a),
                        "A1": v.map(|v| v.a1),
                        "c": v.map(|v| v.c),
                        "p0": v.map(|v| v.p0),
                        "p1": v.map(|v| v.p1),
                    })
                })
                .collect();
            let text = serde_json::to_string_pretty(&records)?;
            match &args.out {
                Some(path) => writeln!(File::create(path)?, "{text}")?,
                None => writeln!(out, "{text}")?,
            }
        }
        (_, Some(path)) => write_sweep_csv(BufWriter::new(File::create(path)?), &results)?,
        (_, None) => write_sweep_csv(out, &results)?,
    }
    Ok(Status::from_ok(ok))
}
