//! The `nkgeo` command line.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::checks::{self, Check, Fault, Suite, VerifyOptions};
use crate::error::{Error, Result};
use crate::geodesics::{Closedness, FactorConstants, GeodesicCurve};
use crate::manifold::{NKPoint, NKTangent};
use crate::oracle::{Integrator, Projection};
use crate::quat::Quaternion;
use crate::tol;

/// Tolerance for `--start` to count as a point of S³×S³.
const START_UNIT_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "nkgeo", version, about = "Geodesics of the nearly Kähler S3xS3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the closed-form geodesic on [0, t_end]
    Sample(SampleArgs),
    /// Print the case and derived constants of an initial velocity
    Classify(ClassifyArgs),
    /// Run the verification suites; exits nonzero on any failure
    Verify(VerifyArgs),
    /// Decide whether the geodesic closes up and report its period
    Closedness(ClosednessArgs),
    /// Run the tensor identity and frame table suites
    Identities(IdentitiesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct InitialArgs {
    /// Base point as eight reals, p then q; defaults to (1, 1)
    #[arg(long, value_parser = parse_reals8, allow_hyphen_values = true)]
    pub start: Option<[f64; 8]>,
    /// Velocity as eight reals, U then V
    #[arg(long, value_parser = parse_reals8, allow_hyphen_values = true)]
    pub velocity: [f64; 8],
}

impl InitialArgs {
    pub fn tangent(&self) -> Result<NKTangent> {
        let base = match self.start {
            Some(c) => NKPoint::from_components(c, START_UNIT_TOL)
                .map_err(|e| Error::InvalidInput(format!("--start: {e}")))?,
            None => NKPoint::IDENTITY,
        };
        let c = self.velocity;
        NKTangent::new(
            base,
            Quaternion::new(c[0], c[1], c[2], c[3]),
            Quaternion::new(c[4], c[5], c[6], c[7]),
        )
        .map_err(|e| Error::InvalidInput(format!("--velocity: {e}")))
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub initial: InitialArgs,
    #[arg(long)]
    pub t_end: f64,
    /// Number of rows, evenly spaced including both endpoints
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Also integrate with RK4 and report the deviation
    #[arg(long)]
    pub oracle: bool,
    /// RK4 step for --oracle
    #[arg(long, default_value_t = tol::RK4_STEP)]
    pub step: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub initial: InitialArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClosednessArgs {
    #[command(flatten)]
    pub initial: InitialArgs,
    #[arg(long, default_value_t = tol::DEFAULT_MAX_DENOMINATOR)]
    pub max_denominator: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only this suite (repeatable)
    #[arg(long, value_parser = parse_suite)]
    pub only: Vec<Suite>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = tol::DEFAULT_MAX_DENOMINATOR)]
    pub max_denominator: u64,
    #[arg(long, hide = true, value_parser = parse_fault, default_value = "none")]
    pub inject_fault: Fault,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, hide = true, value_parser = parse_fault, default_value = "none")]
    pub inject_fault: Fault,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_reals8(s: &str) -> std::result::Result<[f64; 8], String> {
    let values = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err("components must be finite".into());
    }
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 8 reals, got {}", v.len()))
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_fault(s: &str) -> std::result::Result<Fault, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Sample(args) => sample(args).map(|()| 0),
        Command::Classify(args) => classify(args).map(|()| 0),
        Command::Closedness(args) => closedness(args).map(|()| 0),
        Command::Verify(args) => {
            let suites = if args.only.is_empty() {
                Suite::ALL.to_vec()
            } else {
                args.only.clone()
            };
            let opts = VerifyOptions {
                seed: args.seed,
                max_denominator: args.max_denominator,
                fault: args.inject_fault,
                ..VerifyOptions::default()
            };
            report_checks(&checks::run(&suites, &opts)?, &args.output)
        }
        Command::Identities(args) => {
            let opts = VerifyOptions {
                seed: args.seed,
                fault: args.inject_fault,
                ..VerifyOptions::default()
            };
            let checks = checks::run(&[Suite::Identities, Suite::Tables], &opts)?;
            report_checks(&checks, &args.output)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FactorReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "A")]
    pub freq_hi: f64,
    #[serde(rename = "B")]
    pub freq_lo: f64,
    pub phi: f64,
}

impl From<&FactorConstants> for FactorReport {
    fn from(f: &FactorConstants) -> Self {
        Self {
            a: f.axial,
            b: f.transverse,
            c: f.rate,
            freq_hi: f.freq_hi,
            freq_lo: f.freq_lo,
            phi: f.mix,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Constants {
    pub c1: [f64; 3],
    pub c2: [f64; 3],
    pub d1: f64,
    pub h: [f64; 4],
    pub first: FactorReport,
    pub second: FactorReport,
    pub speed: f64,
    pub euclidean_coincident: bool,
    pub p_eigen: String,
}

impl From<&GeodesicCurve> for Constants {
    fn from(curve: &GeodesicCurve) -> Self {
        let p = &curve.params;
        Self {
            c1: p.c1.to_array(),
            c2: p.c2.to_array(),
            d1: p.d1,
            h: p.h.quat().to_array(),
            first: (&p.first).into(),
            second: (&p.second).into(),
            speed: curve.speed,
            euclidean_coincident: p.is_euclidean_geodesic(),
            p_eigen: p.p_eigenvector_class().to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SampleRow {
    pub t: f64,
    pub point: [f64; 8],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<[f64; 8]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dev: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub case: Option<String>,
    pub constants: Option<Constants>,
    pub samples: Vec<SampleRow>,
    pub checks: &'a [Check],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closedness: Option<Closedness>,
}

impl Report<'_> {
    fn for_curve(curve: &GeodesicCurve) -> Self {
        Self {
            case: Some(curve.case().to_string()),
            constants: Some(curve.into()),
            samples: Vec::new(),
            checks: &[],
            closedness: None,
        }
    }
}

fn write_json(report: &Report, output: &OutputArgs) -> Result<()> {
    let mut w = output.writer()?;
    serde_json::to_writer_pretty(&mut w, report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Evaluation times `t_end·k/(n − 1)` for `k = 0..n`.
pub fn sample_times(t_end: f64, samples: usize) -> Vec<f64> {
    let last = (samples - 1) as f64;
    (0..samples).map(|k| t_end * k as f64 / last).collect()
}

pub fn sample_rows(curve: &GeodesicCurve, t_end: f64, samples: usize, oracle_step: Option<f64>) -> Result<Vec<SampleRow>> {
    let mut stepper = oracle_step
        .map(|h| Integrator::new(&curve.eval_velocity(0.0), h, Projection::Renormalize))
        .transpose()?;
    Ok(sample_times(t_end, samples)
        .into_iter()
        .map(|t| {
            let at = curve.eval(t);
            let oracle = stepper.as_mut().map(|s| {
                s.advance_to(t);
                s.point()
            });
            SampleRow {
                t,
                point: at.to_array(),
                oracle: oracle.map(NKPoint::to_array),
                dev: oracle.map(|o| o.distance(&at)),
            }
        })
        .collect())
}

pub const CSV_HEADER: [&str; 9] = ["t", "x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"];
pub const CSV_ORACLE_HEADER: [&str; 9] = ["ox0", "ox1", "ox2", "ox3", "oy0", "oy1", "oy2", "oy3", "dev"];

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(rows: &[SampleRow], with_oracle: bool, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = CSV_HEADER.to_vec();
    if with_oracle {
        header.extend(CSV_ORACLE_HEADER);
    }
    out.write_record(&header)?;
    for row in rows {
        let mut record = vec![fmt_real(row.t)];
        record.extend(row.point.iter().copied().map(fmt_real));
        if let (Some(o), Some(dev)) = (row.oracle, row.dev) {
            record.extend(o.iter().copied().map(fmt_real));
            record.push(fmt_real(dev));
        }
        out.write_record(&record)?;
    }
    out.flush()?;
    Ok(())
}

fn sample(args: &SampleArgs) -> Result<()> {
    if args.samples < 2 {
        return Err(Error::InvalidInput(format!("--samples must be at least 2, got {}", args.samples)));
    }
    if args.t_end <= 0.0 || !args.t_end.is_finite() {
        return Err(Error::InvalidInput(format!("--t-end must be positive, got {}", args.t_end)));
    }
    let curve = GeodesicCurve::new(&args.initial.tangent()?)?;
    let rows = sample_rows(&curve, args.t_end, args.samples, args.oracle.then_some(args.step))?;
    match args.output.format {
        Format::Csv => write_csv(&rows, args.oracle, args.output.writer()?),
        Format::Json => write_json(
            &Report {
                samples: rows,
                ..Report::for_curve(&curve)
            },
            &args.output,
        ),
    }
}

/// One-line summary such as `Case1, a=1, P-eigenvalue -1, Euclidean-coincident`.
pub fn summary_line(curve: &GeodesicCurve) -> String {
    let p = &curve.params;
    let coincident = if p.is_euclidean_geodesic() {
        "Euclidean-coincident"
    } else {
        "not Euclidean-coincident"
    };
    format!(
        "{}, a={}, {}, {}",
        p.case,
        p.first.axial,
        p.p_eigenvector_class(),
        coincident
    )
}

fn classify(args: &ClassifyArgs) -> Result<()> {
    let curve = GeodesicCurve::new(&args.initial.tangent()?)?;
    if args.output.format == Format::Json {
        return write_json(&Report::for_curve(&curve), &args.output);
    }
    let c = Constants::from(&curve);
    let mut w = args.output.writer()?;
    writeln!(w, "{}", summary_line(&curve))?;
    writeln!(w, "c1 = {:?}", c.c1)?;
    writeln!(w, "c2 = {:?}", c.c2)?;
    writeln!(w, "d1 = {}", c.d1)?;
    writeln!(w, "h = {:?}", c.h)?;
    for (label, f) in [("", &c.first), ("~", &c.second)] {
        writeln!(
            w,
            "a{label} = {}, b{label} = {}, c{label} = {}, A{label} = {}, B{label} = {}, phi{label} = {}",
            f.a, f.b, f.c, f.freq_hi, f.freq_lo, f.phi
        )?;
    }
    writeln!(w, "speed = {}", c.speed)?;
    w.flush()?;
    Ok(())
}

fn closedness(args: &ClosednessArgs) -> Result<()> {
    let curve = GeodesicCurve::new(&args.initial.tangent()?)?;
    let verdict = curve.closedness(args.max_denominator);
    if args.output.format == Format::Json {
        return write_json(
            &Report {
                closedness: Some(verdict),
                ..Report::for_curve(&curve)
            },
            &args.output,
        );
    }
    let mut w = args.output.writer()?;
    match verdict.period {
        Some(period) => writeln!(w, "closed, period {period}")?,
        None => writeln!(w, "open")?,
    }
    for r in &verdict.ratios {
        match r.approx {
            Some(f) => writeln!(w, "{} = {} ~ {f}", r.label, r.value)?,
            None => writeln!(
                w,
                "{} = {} (no fraction with denominator <= {})",
                r.label, r.value, args.max_denominator
            )?,
        }
    }
    w.flush()?;
    Ok(())
}

fn report_checks(checks: &[Check], output: &OutputArgs) -> Result<i32> {
    let failed = checks.iter().filter(|c| !c.pass).count();
    if output.format == Format::Json {
        write_json(
            &Report {
                case: None,
                constants: None,
                samples: Vec::new(),
                checks,
                closedness: None,
            },
            output,
        )?;
    } else {
        let mut w = output.writer()?;
        for c in checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(w, "{verdict} {}: max_dev={:e} tol={:e}", c.name, c.max_dev, c.tol)?;
        }
        writeln!(w, "{} checks, {failed} failed", checks.len())?;
        w.flush()?;
    }
    Ok(i32::from(failed > 0))
}
