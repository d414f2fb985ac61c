#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use spherecap::certifier::{
    aux_below, derive_box, find_series_crossing, profile_for_box, profile_from_crossing, run_certificate,
    CertConfig, CertError, Certificate, Outcome, DEFAULT_MAX_DEPTH, DEFAULT_TOLERANCE,
};
use spherecap::interval::{DecimalInterval, Interval, Precision};
use spherecap::legendre::{eval_all, LegendreQuery, TailRatio, DEFAULT_ORDER};
use spherecap::spectrum::{
    boundary_shape, figure_grid, linear_grid, search_crossings, trace_curve, Bc, Crossing, Geometry, SpectrumCurve,
    SpectrumError,
};

const EXIT_FAILED: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;

/// Rigorous and floating-point spectral tools for spherical caps.
///
/// Every flag can also be set through the environment variable named in its
/// help text; flags take precedence.
#[derive(Parser)]
#[command(name = "spherecap", version)]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "SPHERECAP_WORKERS", default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the crossing certificate and write it as JSON.
    Certify(CertifyArgs),
    /// Print rigorous enclosures of P, dP, Q, dQ over a box.
    Eval(EvalArgs),
    /// Trace one eigenvalue branch as CSV.
    Trace(TraceArgs),
    /// Search for Dirichlet/zonal-Neumann crossings and print them as JSON.
    Crossings(CrossingsArgs),
    /// Emit the first-order bifurcated boundary as CSV.
    Shape(ShapeArgs),
}

#[derive(Args, Clone)]
struct Numerics {
    /// Mantissa bits of interval endpoints.
    #[arg(long, env = "SPHERECAP_PRECISION_BITS", default_value_t = 256)]
    precision_bits: u32,
    /// Number of series terms summed explicitly.
    #[arg(long, env = "SPHERECAP_ORDER", default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Tail ratio as `p/q` or an integer.
    #[arg(long, env = "SPHERECAP_GAMMA", default_value = "3/2")]
    gamma: TailRatio,
}

impl Numerics {
    fn precision(&self) -> Result<Precision> {
        Precision::new(self.precision_bits).map_err(usage)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Ell8,
    Ell6,
    Custom,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long, value_enum, env = "SPHERECAP_PROFILE", default_value = "ell8")]
    profile: Profile,
    #[command(flatten)]
    numerics: Numerics,
    /// Smallest λ-width the exclusion sweep may bisect to.
    #[arg(long, env = "SPHERECAP_TOLERANCE", default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Bisection depth limit for sign checks.
    #[arg(long, env = "SPHERECAP_MAX_DEPTH", default_value_t = DEFAULT_MAX_DEPTH)]
    max_depth: u32,
    /// Dirichlet mode for `--profile custom`.
    #[arg(long, env = "SPHERECAP_ELL")]
    ell: Option<u32>,
    /// Crossing box in ρ, `lo:hi`.
    #[arg(long, env = "SPHERECAP_RHO_BOX")]
    rho_box: Option<String>,
    /// Crossing box in λ, `lo:hi`.
    #[arg(long, env = "SPHERECAP_LAMBDA_BOX")]
    lambda_box: Option<String>,
    /// Upper end of the exclusion sweep; derived from the λ box when omitted.
    #[arg(long, env = "SPHERECAP_LAMBDA_AUX")]
    lambda_aux: Option<String>,
    #[arg(long, short, env = "SPHERECAP_OUTPUT", default_value = "certificate.json")]
    output: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long, env = "SPHERECAP_ELL")]
    ell: u32,
    /// Eigenvalue, a decimal or `lo:hi`.
    #[arg(long, env = "SPHERECAP_LAMBDA")]
    lambda: String,
    /// Stereographic radius, a decimal or `lo:hi`.
    #[arg(long, env = "SPHERECAP_RHO")]
    rho: String,
    #[command(flatten)]
    numerics: Numerics,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long, env = "SPHERECAP_GEOMETRY", default_value = "s2")]
    geometry: Geometry,
    #[arg(long, env = "SPHERECAP_ELL")]
    ell: u32,
    #[arg(long, env = "SPHERECAP_BC")]
    bc: Bc,
    #[arg(long, env = "SPHERECAP_BRANCH", default_value_t = 0)]
    branch: usize,
    /// Uniform grid `lo:hi:count`; the figure grid by default.
    #[arg(long, env = "SPHERECAP_GRID")]
    grid: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long, short, env = "SPHERECAP_OUTPUT")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CrossingsArgs {
    #[arg(long, env = "SPHERECAP_GEOMETRY", default_value = "s2")]
    geometry: Geometry,
    #[arg(long, env = "SPHERECAP_ELL")]
    ell: u32,
    #[arg(long, env = "SPHERECAP_GRID")]
    grid: Option<String>,
    /// Dirichlet branches of mode ℓ to include.
    #[arg(long, env = "SPHERECAP_DIRICHLET_BRANCHES", default_value_t = 1)]
    dirichlet_branches: usize,
    /// Positive zonal Neumann branches to include.
    #[arg(long, env = "SPHERECAP_NEUMANN_BRANCHES", default_value_t = 6)]
    neumann_branches: usize,
    /// Also print a rigorous box for each crossing in the series range.
    #[arg(long)]
    suggest_box: bool,
    #[command(flatten)]
    numerics: Numerics,
    #[arg(long, short, env = "SPHERECAP_OUTPUT")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ShapeArgs {
    /// Crossing to perturb; `ell8` or `ell6`.
    #[arg(long, value_enum, env = "SPHERECAP_PROFILE", default_value = "ell8")]
    profile: Profile,
    /// Perturbation parameter.
    #[arg(long, env = "SPHERECAP_S", default_value_t = 0.01, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, env = "SPHERECAP_SAMPLES", default_value_t = 360)]
    samples: usize,
    #[arg(long, short, env = "SPHERECAP_OUTPUT")]
    output: Option<PathBuf>,
}

/// Marks errors caused by the invocation rather than the computation.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    anyhow::Error::new(Usage(e.to_string()))
}

fn cert_error(e: CertError) -> anyhow::Error {
    match e {
        CertError::Legendre(_) | CertError::Config(_) | CertError::Spectrum(SpectrumError::Domain(_)) => usage(e),
        other => anyhow!(other),
    }
}

fn spectrum_error(e: SpectrumError) -> anyhow::Error {
    match e {
        SpectrumError::Domain(_) => usage(e),
        other => anyhow!(other),
    }
}

fn parse_box(s: &str, prec: Precision) -> Result<DecimalInterval> {
    let iv = Interval::parse(s, prec).map_err(|e| usage(format!("{s:?}: {e}")))?;
    let (lo, hi) = match s.split_once(':') {
        Some((lo, hi)) => (lo.trim().to_string(), hi.trim().to_string()),
        None => (s.trim().to_string(), s.trim().to_string()),
    };
    debug_assert!(iv.is_finite());
    Ok(DecimalInterval { lo, hi })
}

fn parse_grid(s: Option<&str>, geometry: Geometry) -> Result<Vec<f64>> {
    let Some(s) = s else {
        return Ok(match geometry {
            Geometry::Sphere(_) => figure_grid(),
            Geometry::Hyperbolic2 => linear_grid(0.2, 4.0, 200),
        });
    };
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("grid {s:?} must look like lo:hi:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n < 2 || !(hi > lo) {
        return Err(bad());
    }
    Ok(linear_grid(lo, hi, n))
}

fn sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn base_config(args: &CertifyArgs) -> CertConfig {
    CertConfig {
        order: args.numerics.order,
        gamma: args.numerics.gamma,
        precision_bits: args.numerics.precision_bits,
        tolerance: args.tolerance,
        max_depth: args.max_depth,
        ..CertConfig::ell8()
    }
}

fn certify_config(args: &CertifyArgs) -> Result<CertConfig> {
    let prec = args.numerics.precision()?;
    let rho = args.rho_box.as_deref().map(|s| parse_box(s, prec)).transpose()?;
    let lambda = args.lambda_box.as_deref().map(|s| parse_box(s, prec)).transpose()?;
    let base = base_config(args);
    let mut cfg = match args.profile {
        Profile::Ell8 => base,
        Profile::Ell6 => {
            let c = find_series_crossing(6).map_err(cert_error)?;
            profile_from_crossing("ell6", &c, &CertConfig { ell: 6, ..base }).map_err(cert_error)?
        }
        Profile::Custom => {
            let (Some(r), Some(l)) = (rho.clone(), lambda.clone()) else {
                return Err(usage("--profile custom needs --rho-box and --lambda-box"));
            };
            let ell = args.ell.ok_or_else(|| usage("--profile custom needs --ell"))?;
            profile_for_box("custom", ell, r, l, &base).map_err(cert_error)?
        }
    };
    if let Some(r) = rho {
        cfg.rho_box = r;
    }
    if let Some(l) = lambda {
        let lo = l.to_interval(prec).map_err(usage)?.lo_f64();
        cfg.lambda_aux = aux_below(lo);
        cfg.lambda_box = l;
    }
    if let Some(a) = &args.lambda_aux {
        cfg.lambda_aux = a.clone();
    }
    Ok(cfg)
}

fn print_summary(out: &mut impl Write, cert: &Certificate) -> io::Result<()> {
    writeln!(out, "{:<36} {:<13} {:>8} {:>10}", "check", "status", "subdiv", "time")?;
    for c in &cert.checks {
        writeln!(
            out,
            "{:<36} {:<13} {:>8} {:>7} ms",
            c.id,
            c.status.to_string(),
            c.subdivisions,
            c.wall_time_ms
        )?;
        if let Some(d) = &c.detail {
            if !c.is_verified() {
                writeln!(out, "    {d}")?;
            }
        }
    }
    let c = &cert.conclusion;
    for (name, v) in [
        ("a★", &c.a_star),
        ("λ★", &c.lambda_star),
        ("ρ★", &c.rho_star),
        ("μ′", &c.mu_prime),
        ("λ′", &c.lambda_prime),
    ] {
        if let Some(v) = v {
            writeln!(out, "{name} ∈ [{}, {}]", v.lo, v.hi)?;
        }
    }
    writeln!(
        out,
        "crossing: {}  n★ = 0: {}  m★ ≥ {}  transversal: {}  nonresonant: {}",
        c.exists_crossing, c.n_star_is_zero, c.m_star_lower_bound, c.transversal, c.nonresonant
    )
}

fn cmd_certify(args: CertifyArgs) -> Result<u8> {
    let cfg = certify_config(&args)?;
    let total = std::time::Instant::now();
    let cert = run_certificate(&cfg).map_err(cert_error)?;
    fs::write(&args.output, cert.to_json()).with_context(|| format!("writing {}", args.output.display()))?;
    let mut out = io::stdout().lock();
    print_summary(&mut out, &cert)?;
    let outcome = cert.outcome();
    writeln!(
        out,
        "outcome: {:?} in {:.2} s, certificate written to {}",
        outcome,
        total.elapsed().as_secs_f64(),
        args.output.display()
    )?;
    Ok(match outcome {
        Outcome::Certified => 0,
        Outcome::Failed => EXIT_FAILED,
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

fn cmd_eval(args: EvalArgs) -> Result<u8> {
    let prec = args.numerics.precision()?;
    let lambda = Interval::parse(&args.lambda, prec).map_err(usage)?;
    let rho = Interval::parse(&args.rho, prec).map_err(usage)?;
    let q = LegendreQuery::new(args.ell, lambda, rho)
        .with_order(args.numerics.order)
        .with_gamma(args.numerics.gamma);
    let ev = eval_all(&q).map_err(usage)?;
    let mut out = io::stdout().lock();
    for (name, v) in [("P", &ev.p), ("dP", &ev.dp), ("Q", &ev.q), ("dQ", &ev.dq)] {
        let (lo, hi) = v.to_decimal_strings(25);
        writeln!(out, "{name:<3} [{lo}, {hi}]  sign {:?}", v.sign())?;
    }
    let r = &ev.tail_radii;
    writeln!(out, "tail C  {:.6e}", ev.tail_c.hi_f64())?;
    writeln!(
        out,
        "tail radii  P {:.6e}  dP {:.6e}  Q {:.6e}  dQ {:.6e}",
        r.p.to_f64(),
        r.dp.to_f64(),
        r.q.to_f64(),
        r.dq.to_f64()
    )?;
    Ok(0)
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_curve(curve: &SpectrumCurve, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "# geometry,ell,bc,branch")?;
    writeln!(out, "# {},{},{},{}", curve.geometry, curve.ell, curve.bc, curve.branch)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([curve.geometry.param_name(), "lambda"])?;
    for &(a, l) in &curve.samples {
        w.write_record([fmt17(a), fmt17(l)])?;
    }
    w.flush()?;
    Ok(())
}

fn report_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
    if !warnings.is_empty() {
        eprintln!("{} warning(s)", warnings.len());
    }
}

fn cmd_trace(args: TraceArgs) -> Result<u8> {
    let grid = parse_grid(args.grid.as_deref(), args.geometry)?;
    let curve = trace_curve(args.geometry, args.ell, args.bc, args.branch, &grid).map_err(spectrum_error)?;
    write_curve(&curve, &mut *sink(args.output.as_ref())?)?;
    report_warnings(&curve.warnings);
    Ok(0)
}

fn cmd_crossings(args: CrossingsArgs) -> Result<u8> {
    let grid = parse_grid(args.grid.as_deref(), args.geometry)?;
    let (found, curves) = search_crossings(
        args.geometry,
        args.ell,
        &grid,
        args.dirichlet_branches,
        args.neumann_branches,
    )
    .map_err(spectrum_error)?;
    let mut out = sink(args.output.as_ref())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&found)?)?;
    if args.suggest_box {
        let prec = args.numerics.precision()?;
        let cfg = spherecap::certifier::EvalConfig {
            order: args.numerics.order,
            gamma: args.numerics.gamma,
            precision: prec,
        };
        for c in found.iter().filter(|c| c.rho_star.is_some()) {
            suggest_box(c, &cfg)?;
        }
    }
    let warnings: Vec<String> = curves.into_iter().flat_map(|c| c.warnings).collect();
    report_warnings(&warnings);
    Ok(0)
}

fn suggest_box(c: &Crossing, cfg: &spherecap::certifier::EvalConfig) -> Result<()> {
    let rho = c.rho_star.expect("filtered");
    match derive_box(c.ell, rho, c.lambda_star, cfg) {
        Ok(b) => eprintln!(
            "suggested box (a ≈ {:.6}, m = {}): certify --profile custom --ell {} --rho-box {}:{} --lambda-box {}:{}",
            c.a_star, c.neumann_branch, c.ell, b.rho.lo, b.rho.hi, b.lambda.lo, b.lambda.hi
        ),
        Err(e) => eprintln!("no box for the crossing at a ≈ {:.6}: {e}", c.a_star),
    }
    Ok(())
}

fn cmd_shape(args: ShapeArgs) -> Result<u8> {
    let ell = match args.profile {
        Profile::Ell8 => 8,
        Profile::Ell6 => 6,
        Profile::Custom => return Err(usage("shape supports --profile ell8 or ell6")),
    };
    let crossing = find_series_crossing(ell).map_err(cert_error)?;
    let shape = boundary_shape(&crossing, args.s, args.samples).map_err(spectrum_error)?;
    eprintln!("a★ = {}  λ★ = {}  b★ = {}", shape.a_star, crossing.lambda_star, shape.b_star);
    let mut w = csv::Writer::from_writer(sink(args.output.as_ref())?);
    w.write_record(["phi", "theta"])?;
    for &(phi, theta) in &shape.samples {
        w.write_record([fmt17(phi), fmt17(theta)])?;
    }
    w.flush()?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    if cli.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global()
            .context("building the worker pool")?;
    }
    match cli.cmd {
        Cmd::Certify(a) => cmd_certify(a),
        Cmd::Eval(a) => cmd_eval(a),
        Cmd::Trace(a) => cmd_trace(a),
        Cmd::Crossings(a) => cmd_crossings(a),
        Cmd::Shape(a) => cmd_shape(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAILED)
            }
        }
    }
}
