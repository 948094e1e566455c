//! Argument parsing and subcommand execution.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use tacnode_core::tacnode::{big_from_sigma, sigma_from_big};
use tacnode_core::verify::{self, CheckReport, Suite, VerifyConfig};
use tacnode_core::{
    gap_probability, AiryResolvent, FvParams, ResidueEntries, Resolution, RhParams, TailSpec,
};

use crate::cache;
use crate::error::CliError;
use crate::grid::{self, Method};
use crate::table::{csv_string, csv_text, fmt_real, json_string};

#[derive(Parser, Debug)]
#[command(
    name = "tacnode",
    version,
    about = "Tacnode kernels, Tracy–Widom functions and identity checks"
)]
pub struct Cli {
    /// Also build each resolvent on a longer interval and fail if the
    /// results move.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Diagnostic banner on stderr is suppressed.
    #[arg(long, global = true)]
    pub no_banner: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tracy–Widom scalars q, p, u, v and det(I − K) on a σ grid.
    Tw(TwArgs),
    /// Tacnode kernel on a (u, v) grid.
    Kernel(KernelArgs),
    /// Gap probability det(I − 𝓛) on a finite interval.
    Gap(GapArgs),
    /// Residue-matrix entries for Riemann–Hilbert parameters.
    Residue(ResidueArgs),
    /// Run the identity checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ResolutionArgs {
    /// Gauss–Legendre order of the resolvent discretization.
    #[arg(long, default_value_t = 80)]
    pub m: usize,
    /// Truncation point of (0, ∞).
    #[arg(long = "T", default_value_t = 16.0)]
    pub cutoff: f64,
}

impl ResolutionArgs {
    fn resolution(&self) -> Result<Resolution, CliError> {
        Ok(Resolution::new(self.m, self.cutoff)?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `a:b:n`, `n` evenly spaced points from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.end - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err("expected a:b:n".into());
    }
    let start: f64 = parts[0].parse().map_err(|e| format!("{e}"))?;
    let end: f64 = parts[1].parse().map_err(|e| format!("{e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("{e}"))?;
    if !(start.is_finite() && end.is_finite()) {
        return Err("endpoints must be finite".into());
    }
    Ok(Range { start, end, count })
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected a1:a2")?;
    let a: f64 = a.parse().map_err(|e| format!("{e}"))?;
    let b: f64 = b.parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

#[derive(Args, Debug)]
pub struct TwArgs {
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub sigma_grid: Range,
    #[command(flatten)]
    pub res: ResolutionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug, Clone, Copy)]
#[group(id = "shift", required = true, multiple = false)]
pub struct ShiftArgs {
    /// Temperature-like parameter Σ.
    #[arg(long = "Sigma", allow_hyphen_values = true, group = "shift")]
    pub big_sigma: Option<f64>,
    /// Airy shift σ.
    #[arg(long, allow_hyphen_values = true, group = "shift")]
    pub sigma: Option<f64>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct FvArgs {
    #[arg(long)]
    pub lambda: f64,
    #[command(flatten)]
    pub shift: ShiftArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau: f64,
    /// Second time; equal to --tau when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub tau2: Option<f64>,
}

impl FvArgs {
    /// `(Σ, σ)` with σ canonical.
    fn shifts(&self) -> Result<(f64, f64), CliError> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(CliError::Usage("--lambda must be positive".into()));
        }
        match (self.shift.big_sigma, self.shift.sigma) {
            (Some(b), None) => Ok((b, sigma_from_big(self.lambda, b))),
            (None, Some(s)) => Ok((big_from_sigma(self.lambda, s), s)),
            _ => Err(CliError::Usage(
                "exactly one of --Sigma and --sigma is required".into(),
            )),
        }
    }

    fn params(&self, res: &Resolution, ctx: &Ctx) -> Result<FvParams, CliError> {
        let (big, sigma) = self.shifts()?;
        let r = ctx.resolvent(sigma, res)?;
        Ok(FvParams::with_resolvent(
            self.lambda,
            big,
            self.tau,
            self.tau2.unwrap_or(self.tau),
            Arc::new(r),
        )?)
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct TailArgs {
    #[arg(long, default_value_t = TailSpec::default().span)]
    pub tail_span: f64,
    #[arg(long, default_value_t = TailSpec::default().nodes)]
    pub tail_nodes: usize,
    /// Largest accepted ratio of the integrand at the end of the span to
    /// the integral.
    #[arg(long, default_value_t = TailSpec::default().gate)]
    pub tail_gate: f64,
}

impl TailArgs {
    fn spec(&self) -> Result<TailSpec, CliError> {
        Ok(TailSpec::new(
            self.tail_span,
            self.tail_nodes,
            self.tail_gate,
        )?)
    }
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ParallelArgs {
    /// Worker threads; all cores when absent.
    #[arg(long, conflicts_with = "serial")]
    pub threads: Option<usize>,
    /// Evaluate on the calling thread only.
    #[arg(long)]
    pub serial: bool,
}

impl ParallelArgs {
    fn run<T: Send>(&self, f: impl FnOnce(bool) -> T + Send) -> Result<T, CliError> {
        if self.serial {
            return Ok(f(false));
        }
        match self.threads {
            Some(0) => Err(CliError::Usage("--threads must be positive".into())),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(pool.install(|| f(true)))
            }
            None => Ok(f(true)),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fv,
    Sixterm,
    Rh,
    Tail,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fv => Method::Fv,
            MethodArg::Sixterm => Method::Sixterm,
            MethodArg::Rh => Method::Rh,
            MethodArg::Tail => Method::Tail,
        }
    }
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[command(flatten)]
    pub fv: FvArgs,
    /// u grid, and the v grid unless --vgrid is given.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-2:2:21")]
    pub grid: Range,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub vgrid: Option<Range>,
    #[arg(long, value_enum, default_value_t = MethodArg::Fv)]
    pub method: MethodArg,
    #[command(flatten)]
    pub tail: TailArgs,
    #[command(flatten)]
    pub parallel: ParallelArgs,
    #[command(flatten)]
    pub res: ResolutionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GapArgs {
    #[command(flatten)]
    pub fv: FvArgs,
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub interval: (f64, f64),
    /// Quadrature order on the interval.
    #[arg(long, default_value_t = 60)]
    pub m2: usize,
    #[command(flatten)]
    pub res: ResolutionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ResidueArgs {
    #[arg(long)]
    pub r1: f64,
    #[arg(long)]
    pub r2: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub s2: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau: f64,
    #[command(flatten)]
    pub res: ResolutionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// tw, fv, rh, equivalence, compat, or all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    /// Print the check name → identity list and exit.
    #[arg(long)]
    pub manifest: bool,
    #[command(flatten)]
    pub tail: TailArgs,
    #[command(flatten)]
    pub parallel: ParallelArgs,
    #[command(flatten)]
    pub res: ResolutionArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Per-invocation settings shared by the subcommands.
struct Ctx {
    strict: bool,
    cache_dir: Option<PathBuf>,
}

impl Ctx {
    fn resolvent(&self, sigma: f64, res: &Resolution) -> Result<AiryResolvent, CliError> {
        cache::load_or_build(sigma, res, self.strict, self.cache_dir.as_deref())
    }
}

/// Parse `args` (including the program name) and run. Returns the process
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    let started = std::time::Instant::now();
    let ctx = Ctx {
        strict: cli.strict,
        cache_dir: cache::cache_dir_from_env(),
    };
    let result = execute(&cli.command, &ctx, out);
    if !cli.no_banner {
        let _ = writeln!(
            err,
            "tacnode {} {} ({:.2?})",
            crate::VERSION,
            command_name(&cli.command),
            started.elapsed()
        );
    }
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Tw(_) => "tw",
        Command::Kernel(_) => "kernel",
        Command::Gap(_) => "gap",
        Command::Residue(_) => "residue",
        Command::Verify(_) => "verify",
    }
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cmd: &Command, ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Tw(a) => tw(a, ctx, out),
        Command::Kernel(a) => kernel(a, ctx, out),
        Command::Gap(a) => gap(a, ctx, out),
        Command::Residue(a) => residue(a, out),
        Command::Verify(a) => verify_cmd(a, ctx, out),
    }
}

#[derive(Serialize)]
struct TwMeta {
    m: usize,
    #[serde(rename = "T")]
    cutoff: f64,
    strict: bool,
    version: &'static str,
}

#[derive(Serialize)]
struct TwRow {
    sigma: f64,
    q: f64,
    p: f64,
    u: f64,
    v: f64,
    det: f64,
}

#[derive(Serialize)]
struct Doc<M, D> {
    meta: M,
    data: D,
}

fn tw(a: &TwArgs, ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    let res = a.res.resolution()?;
    let rows: Vec<TwRow> = a
        .sigma_grid
        .points()
        .par_iter()
        .map(|&s| {
            let r = ctx.resolvent(s, &res)?;
            Ok(TwRow {
                sigma: s,
                q: r.q(),
                p: r.p(),
                u: r.u(),
                v: r.v(),
                det: r.det(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let text = match a.output.format {
        Format::Csv => csv_string(
            &["sigma", "q", "p", "u", "v", "det"],
            rows.iter().map(|r| [r.sigma, r.q, r.p, r.u, r.v, r.det]),
        ),
        Format::Json => json_string(&Doc {
            meta: TwMeta {
                m: res.order,
                cutoff: res.cutoff,
                strict: ctx.strict,
                version: crate::VERSION,
            },
            data: rows,
        })?,
    };
    emit(&text, a.output.out.as_ref(), out)
}

fn kernel(a: &KernelArgs, ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    let res = a.res.resolution()?;
    let tail = a.tail.spec()?;
    let params = a.fv.params(&res, ctx)?;
    let us = a.grid.points();
    let vs = a.vgrid.unwrap_or(a.grid).points();
    let g = a
        .parallel
        .run(|par| grid::evaluate(&params, a.method.into(), &us, &vs, &tail, par))??;
    let text = match a.output.format {
        Format::Csv => g.to_csv(),
        Format::Json => g.to_json()?,
    };
    emit(&text, a.output.out.as_ref(), out)
}

#[derive(Serialize)]
struct GapData {
    a1: f64,
    a2: f64,
    m2: usize,
    gap: f64,
}

fn gap(a: &GapArgs, ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    let res = a.res.resolution()?;
    let (a1, a2) = a.interval;
    if !(a1 < a2) {
        return Err(CliError::Usage("--interval needs a1 < a2".into()));
    }
    let params = a.fv.params(&res, ctx)?;
    let value = gap_probability(&params, a1, a2, a.m2)?;
    let text = match a.output.format {
        Format::Csv => csv_string(&["a1", "a2", "gap"], [[a1, a2, value]]),
        Format::Json => json_string(&Doc {
            meta: grid::meta(&params, Method::Fv, &TailSpec::default()),
            data: GapData {
                a1,
                a2,
                m2: a.m2,
                gap: value,
            },
        })?,
    };
    emit(&text, a.output.out.as_ref(), out)
}

#[derive(Serialize)]
struct ResidueMeta {
    r1: f64,
    r2: f64,
    s1: f64,
    s2: f64,
    tau: f64,
    sigma: f64,
    m: usize,
    #[serde(rename = "T")]
    cutoff: f64,
    version: &'static str,
}

fn residue(a: &ResidueArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let res = a.res.resolution()?;
    let p = RhParams::new(a.r1, a.r2, a.s1, a.s2, a.tau, &res)?;
    let e = p.residue_matrix();
    let values = e.values();
    let text = match a.output.format {
        Format::Csv => csv_string(&ResidueEntries::NAMES, [values]),
        Format::Json => {
            let data: serde_json::Map<String, serde_json::Value> = ResidueEntries::NAMES
                .iter()
                .zip(values)
                .map(|(k, v)| (k.to_string(), v.into()))
                .collect();
            json_string(&Doc {
                meta: ResidueMeta {
                    r1: a.r1,
                    r2: a.r2,
                    s1: a.s1,
                    s2: a.s2,
                    tau: a.tau,
                    sigma: p.sigma(),
                    m: res.order,
                    cutoff: res.cutoff,
                    version: crate::VERSION,
                },
                data,
            })?
        }
    };
    emit(&text, a.output.out.as_ref(), out)
}

#[derive(Serialize)]
struct ReportOut<'a> {
    name: &'a str,
    identity: &'a str,
    max_residual: f64,
    tolerance: f64,
    passed: bool,
    points: &'a [Vec<f64>],
}

/// Run the verification jobs, concurrently when `parallel`; the report
/// order is the canonical job order either way.
pub fn run_verify(suites: &[Suite], cfg: &VerifyConfig, parallel: bool) -> Vec<CheckReport> {
    let jobs = verify::jobs(suites);
    let per_job: Vec<Vec<CheckReport>> = if parallel {
        jobs.par_iter().map(|j| j.run(cfg)).collect()
    } else {
        jobs.iter().map(|j| j.run(cfg)).collect()
    };
    verify::merge_reports(per_job.into_iter().flatten().collect())
}

pub fn render_reports(reports: &[CheckReport], format: ReportFormat) -> Result<String, CliError> {
    Ok(match format {
        ReportFormat::Text => {
            let mut s = String::new();
            for r in reports {
                s += &format!(
                    "{} {:<30} {:>10.3e} <= {:.1e}  {}\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.max_residual,
                    r.tolerance,
                    r.anchor
                );
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            s += &format!("{} checks, {} failed\n", reports.len(), failed);
            s
        }
        ReportFormat::Csv => {
            let mut s = String::from("name,max_residual,tolerance,passed,points,identity\n");
            for r in reports {
                s += &format!(
                    "{},{},{},{},{},{}\n",
                    r.name,
                    fmt_real(r.max_residual),
                    fmt_real(r.tolerance),
                    r.passed,
                    r.points.len(),
                    csv_text(&r.anchor)
                );
            }
            s
        }
        ReportFormat::Json => {
            let rows: Vec<ReportOut> = reports
                .iter()
                .map(|r| ReportOut {
                    name: &r.name,
                    identity: &r.anchor,
                    max_residual: r.max_residual,
                    tolerance: r.tolerance,
                    passed: r.passed,
                    points: &r.points,
                })
                .collect();
            json_string(&rows)?
        }
    })
}

fn verify_cmd(a: &VerifyArgs, _ctx: &Ctx, out: &mut dyn Write) -> Result<(), CliError> {
    if a.manifest {
        let mut s = String::new();
        for (name, identity) in verify::coverage_manifest() {
            s += &format!("{name}\t{identity}\n");
        }
        return emit(&s, a.out.as_ref(), out);
    }
    let suites = Suite::parse(&a.suite)
        .ok_or_else(|| CliError::Usage(format!("unknown suite {:?}", a.suite)))?;
    if !(a.tol_scale > 0.0 && a.tol_scale.is_finite()) {
        return Err(CliError::Usage("--tol-scale must be positive".into()));
    }
    let cfg = VerifyConfig {
        resolution: a.res.resolution()?,
        tail: a.tail.spec()?,
        tol_scale: a.tol_scale,
    };
    let reports = a.parallel.run(|par| run_verify(&suites, &cfg, par))?;
    emit(&render_reports(&reports, a.format)?, a.out.as_ref(), out)?;
    match reports.iter().filter(|r| !r.passed).count() {
        0 => Ok(()),
        n => Err(CliError::VerificationFailed(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = parse_range("-2:2:5").unwrap();
        assert_eq!(r.points(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(parse_range("1:3:1").unwrap().points(), vec![1.0]);
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("a:2:3").is_err());
        assert_eq!(parse_interval("-1:0.5").unwrap(), (-1.0, 0.5));
    }

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("tacnode").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, out, err) = run_str(&["tw", "--bogus"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("Usage"));
    }

    #[test]
    fn sigma_flags_are_exclusive() {
        let (code, _, _) = run_str(&["kernel", "--lambda", "1", "--Sigma", "1", "--sigma", "1"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_str(&["kernel", "--lambda", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn tw_csv_shape() {
        let (code, out, _) = run_str(&[
            "--no-banner",
            "tw",
            "--sigma-grid",
            "-2:2:5",
            "--m",
            "40",
            "--T",
            "12",
        ]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "sigma,q,p,u,v,det");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn singular_resolvent_is_numerical_failure() {
        let (code, _, err) = run_str(&["--no-banner", "tw", "--sigma-grid", "-7.5:-7.5:1"]);
        assert_eq!(code, 3, "{err}");
    }

    #[test]
    fn bad_lambda_is_argument_error() {
        let (code, _, _) = run_str(&["--no-banner", "kernel", "--lambda", "-1", "--Sigma", "1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn residue_json_echoes_parameters() {
        let (code, out, _) = run_str(&[
            "--no-banner",
            "residue",
            "--r1",
            "1.2",
            "--r2",
            "0.9",
            "--s1",
            "0.5",
            "--s2",
            "0.3",
            "--tau",
            "0.1",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["meta"]["r1"], 1.2);
        assert_eq!(v["meta"]["tau"], 0.1);
        assert!(v["data"]["d"].is_f64());
    }
}
