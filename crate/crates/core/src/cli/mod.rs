//! Command-line front end: scene files in, JSON reports and CSV tables out.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

mod analyze;
pub mod check;
pub mod report;
pub mod scene;
mod tensor_job;

use crate::curve::{bonnet_reconstruct, sampled_curvature_torsion, CurvatureProfile, ProfileFn};
use crate::error::Error;
use crate::expr::ExprMap;
use crate::tensor2::Vec3;
use clap::{Parser, Subcommand, ValueEnum};
use report::{num, Failure, Report, Table};
use scene::{ProfileSpec, ProfileValue};
use serde_json::{json, Value};
use std::collections::HashSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{message}")]
    Numerical { message: String, point: Option<Vec<f64>> },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical {
                message: e.to_string(),
                point: e.point(),
            }
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "tensorgeo", version, about = "Analyze parametric curves, surfaces, coordinate maps and tensors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Samples per axis for grid requests.
    #[arg(long, global = true, default_value_t = 64)]
    pub grid: usize,
    /// Relative regularity tolerance for curves.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Directory for report.json and CSV tables; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the requests of a curve, surface, coordmap or tensor_job scene.
    Analyze { scene: PathBuf },
    /// Rebuild a curve from curvature and torsion profiles.
    Reconstruct { profile: PathBuf },
    /// Run a tensor_job scene.
    Tensor { job: PathBuf },
    /// Run the built-in invariant battery.
    Check,
}

/// Accumulates results and tables for one run.
pub struct Output {
    pub report: Report,
    pub grid: usize,
    pub tol: Option<f64>,
    tables: Vec<(String, Table)>,
    repeated: HashSet<String>,
}

impl Output {
    fn new(command: &str, input: Value, grid: usize, tol: Option<f64>) -> Self {
        let mut report = Report::new(command, input);
        report.diagnostics.grid = grid as u64;
        Output {
            report,
            grid,
            tol,
            tables: Vec::new(),
            repeated: HashSet::new(),
        }
    }

    fn note_ops<'a>(&mut self, ops: impl Iterator<Item = &'a str>) {
        let mut seen = HashSet::new();
        for op in ops {
            if !seen.insert(op) {
                self.repeated.insert(op.to_string());
            }
        }
    }

    /// Keep a table for CSV output and return its JSON result stub.
    fn table(&mut self, index: usize, op: &str, t: Table) -> Value {
        let name = if self.repeated.contains(op) {
            format!("{op}_{index}.csv")
        } else {
            format!("{op}.csv")
        };
        let v = json!({"table": t, "csv": name});
        self.tables.push((name, t));
        v
    }

    fn push(&mut self, op: &str, mut result: Value) {
        if let Value::Object(m) = &mut result {
            m.insert("op".into(), Value::String(op.into()));
        }
        self.report.results.push(result);
    }

    pub fn tables(&self) -> &[(String, Table)] {
        &self.tables
    }

    fn write(&mut self, dir: Option<&Path>, format: Format) -> Result<(), CliError> {
        let io = |p: &Path, e: std::io::Error| CliError::Validation(format!("{}: {e}", p.display()));
        let Some(dir) = dir else {
            if format != Format::Json {
                return Err(CliError::Validation("CSV output needs --out DIR".into()));
            }
            print!("{}", self.report.to_json());
            return Ok(());
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        if format != Format::Json {
            for (name, t) in &self.tables {
                let p = dir.join(name);
                std::fs::write(&p, t.to_csv()).map_err(|e| io(&p, e))?;
                self.report.files.push(name.clone());
            }
        }
        if format != Format::Csv {
            let p = dir.join("report.json");
            std::fs::write(&p, self.report.to_json()).map_err(|e| io(&p, e))?;
        }
        Ok(())
    }
}

fn profile_fn(v: &ProfileValue, spec: &ProfileSpec, what: &str) -> Result<ProfileFn, CliError> {
    match v {
        ProfileValue::Expr(src) => {
            let consts = spec.constants.iter().map(|(k, v)| (k.clone(), *v)).collect();
            let m = ExprMap::parse_owned(&[src], vec![spec.variable.clone()], consts)
                .map_err(|e| CliError::Validation(format!("profile.{what}: {e}")))?;
            Ok(ProfileFn::Expr(m))
        }
        ProfileValue::Table(rows) => {
            if rows.is_empty() || rows.windows(2).any(|w| !(w[0][0] < w[1][0])) {
                return Err(CliError::Validation(format!("profile.{what}: table needs increasing s")));
            }
            Ok(ProfileFn::Table {
                s: rows.iter().map(|r| r[0]).collect(),
                values: rows.iter().map(|r| r[1]).collect(),
            })
        }
    }
}

fn reconstruct(spec: &ProfileSpec, out: &mut Output) -> Result<(), CliError> {
    let profile = CurvatureProfile {
        curvature: profile_fn(&spec.curvature, spec, "curvature")?,
        torsion: profile_fn(&spec.torsion, spec, "torsion")?,
        s_range: (spec.s_range[0], spec.s_range[1]),
    };
    let p0 = Vec3(spec.origin.unwrap_or([0.0; 3]));
    let f = spec.frame.unwrap_or([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    let curve = bonnet_reconstruct(&profile, p0, [Vec3(f[0]), Vec3(f[1]), Vec3(f[2])], spec.step)?;
    let every = spec.every.unwrap_or(1).max(1);
    let mut t = Table::new(&["s", "x1", "x2", "x3"]);
    for (k, (s, p)) in curve.s.iter().zip(&curve.points).enumerate() {
        if k % every == 0 || k + 1 == curve.s.len() {
            t.push_numbers(&[*s, p[0], p[1], p[2]]);
        }
    }
    let mid = curve.s.len() / 2;
    let stride = ((0.01 / spec.step).round() as usize).max(1);
    let sampled = sampled_curvature_torsion(&curve.points, spec.step, mid, stride);
    let mut r = out.table(0, "reconstruct", t);
    r["frame_drift"] = num(curve.frame_drift());
    r["midpoint"] = match sampled {
        Some((c, th)) => json!({
            "s": curve.s[mid],
            "curvature": c,
            "torsion": th,
            "prescribed_curvature": profile.curvature.eval(curve.s[mid])?,
            "prescribed_torsion": profile.torsion.eval(curve.s[mid])?,
        }),
        None => Value::Null,
    };
    out.push("reconstruct", r);
    Ok(())
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if cli.grid < 2 {
        return Err(CliError::Validation("--grid must be at least 2".into()));
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Validation("--tol must be positive".into()));
        }
    }
    let (mut out, result) = match &cli.command {
        Command::Analyze { scene: path } | Command::Tensor { job: path } => {
            let (sc, raw) = scene::load_scene(path)?;
            if matches!(cli.command, Command::Tensor { .. }) && sc.kind != scene::SceneKind::TensorJob {
                return Err(CliError::Validation("tensor: the job file needs kind `tensor_job`".into()));
            }
            let name = if matches!(cli.command, Command::Tensor { .. }) { "tensor" } else { "analyze" };
            let mut out = Output::new(name, raw, cli.grid, cli.tol);
            out.note_ops(sc.requests.iter().map(|r| r.op.as_str()));
            let r = analyze::run_scene(&sc, &mut out);
            (out, r)
        }
        Command::Reconstruct { profile } => {
            let (spec, raw) = scene::load_profile(profile)?;
            let mut out = Output::new("reconstruct", raw, cli.grid, cli.tol);
            let r = reconstruct(&spec, &mut out);
            (out, r)
        }
        Command::Check => {
            let rows = check::battery();
            let all = rows.iter().all(|r| r.pass);
            let mut out = Output::new("check", Value::Null, cli.grid, cli.tol);
            if cli.out.is_none() && cli.format == Format::Json {
                print!("{}", check::render(&rows));
                return Ok(if all { 0 } else { 3 });
            }
            let mut t = Table::new(&["check", "value", "threshold", "pass"]);
            for r in &rows {
                t.rows.push(vec![json!(r.name), num(r.value), num(r.threshold), json!(r.pass)]);
            }
            let stub = out.table(0, "check", t);
            out.push("check", stub);
            out.write(cli.out.as_deref(), cli.format)?;
            print!("{}", check::render(&rows));
            return Ok(if all { 0 } else { 3 });
        }
    };
    match result {
        Ok(()) => {
            out.write(cli.out.as_deref(), cli.format)?;
            Ok(0)
        }
        Err(CliError::Numerical { message, point }) => {
            out.report.diagnostics.failure = Some(Failure {
                message: message.clone(),
                point: point.clone(),
            });
            if cli.format != Format::Csv {
                let _ = out.write(cli.out.as_deref(), Format::Json);
            }
            Err(CliError::Numerical { message, point })
        }
        Err(e) => Err(e),
    }
}

/// Parse arguments, run, print errors to stderr; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Numerical { point: Some(p), .. } = &e {
                eprintln!("at point {p:?}");
            }
            e.exit_code()
        }
    }
}
