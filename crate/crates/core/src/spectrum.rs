//! Non-rigorous spectral computations for geodesic caps and disks.
//!
//! On `S²` with `a > 0.2` the boundary functional comes from the same series
//! as the rigorous evaluator, summed in extended precision. Elsewhere, and on
//! `S³`, `S⁴`, `H²`, it comes from shooting the radial equation from the pole.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use ode_solvers::dop_shared::OutputType;
use ode_solvers::{Dopri5, System, Vector2};
use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cap heights above this use the series; `ρ² < 2/3` there.
pub const SERIES_MIN_A: f64 = 0.2;
pub const MAX_TERMS: usize = 400;
const ROOT_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),
    #[error("outside the supported domain: {0}")]
    Domain(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Geometry {
    Sphere(u32),
    Hyperbolic2,
}

impl Geometry {
    pub const S2: Geometry = Geometry::Sphere(2);

    /// Name of the domain parameter in output files.
    pub fn param_name(self) -> &'static str {
        match self {
            Geometry::Sphere(_) => "a",
            Geometry::Hyperbolic2 => "r",
        }
    }

    /// Boundary radius from the domain parameter.
    pub fn radius(self, param: f64) -> Result<f64, SpectrumError> {
        match self {
            Geometry::Sphere(_) => {
                if !(-0.999..1.0).contains(&param) {
                    return Err(SpectrumError::Domain(format!("cap height {param} not in [-0.999, 1)")));
                }
                Ok(param.acos())
            }
            Geometry::Hyperbolic2 => {
                if !(param > 0.0 && param.is_finite()) {
                    return Err(SpectrumError::Domain(format!("disk radius {param} must be positive")));
                }
                Ok(param)
            }
        }
    }

    fn validate(self) -> Result<(), SpectrumError> {
        match self {
            Geometry::Sphere(n) if !(2..=4).contains(&n) => {
                Err(SpectrumError::Domain(format!("sphere dimension {n} not in 2..=4")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geometry::Sphere(n) => write!(f, "s{n}"),
            Geometry::Hyperbolic2 => f.write_str("h2"),
        }
    }
}

impl From<Geometry> for String {
    fn from(g: Geometry) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for Geometry {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for Geometry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s2" => Ok(Geometry::Sphere(2)),
            "s3" => Ok(Geometry::Sphere(3)),
            "s4" => Ok(Geometry::Sphere(4)),
            "h2" => Ok(Geometry::Hyperbolic2),
            other => Err(format!("unknown geometry {other:?}; expected s2, s3, s4 or h2")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bc {
    Dirichlet,
    Neumann,
}

impl fmt::Display for Bc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bc::Dirichlet => "dirichlet",
            Bc::Neumann => "neumann",
        })
    }
}

impl FromStr for Bc {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dirichlet" | "d" => Ok(Bc::Dirichlet),
            "neumann" | "n" => Ok(Bc::Neumann),
            other => Err(format!("unknown boundary condition {other:?}")),
        }
    }
}

/// Point values of `P, ∂P/∂ρ, Q, ∂Q/∂ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatEval {
    pub p: f64,
    pub dp: f64,
    pub q: f64,
    pub dq: f64,
    /// `P/ρ^ℓ`.
    pub p_reduced: f64,
    /// `P′/ρ^(ℓ−1)`, or `P′/ρ` when `ℓ = 0`.
    pub dp_reduced: f64,
    pub terms: usize,
}

fn series_bits(lambda: f64, x: f64) -> u32 {
    // the largest term is about exp(2√(λρ²)); carry that many extra bits
    80 + (2.9 * (lambda * x).sqrt()).ceil() as u32
}

/// Series evaluation in extended precision, rounded to `f64` at the end.
pub fn eval_float(ell: u32, lambda: f64, rho: f64) -> Result<FloatEval, SpectrumError> {
    if !(rho >= 0.0) || rho * rho >= 2.0 / 3.0 {
        return Err(SpectrumError::Domain(format!("ρ = {rho} outside ρ² < 2/3")));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(SpectrumError::Domain(format!("λ = {lambda} must be nonnegative")));
    }
    let x = rho * rho;
    let prec = series_bits(lambda, x);
    let f = |v: f64| Float::with_val(prec, v);
    let lam = f(lambda);
    let xf = f(x);
    let l = ell as i64;
    let eps = 1e-20 * lambda.max(1.0);

    let mut p_prev = f(0.0);
    let mut q_prev = f(0.0);
    let mut p = -lam.clone();
    let mut q = f(-1.0);
    let mut s = f(0.0);
    let mut e = f(0.0);
    let mut sq = f(0.0);
    let mut eq = f(0.0);
    let mut xk = f(1.0);
    let mut quiet = 0;
    let mut terms = 0;
    for k in 1..=MAX_TERMS as i64 {
        let r = f(1.0) / f((k * (k + l)) as f64);
        let c = Float::with_val(prec, &p * &r);
        let d = Float::with_val(prec, &q * &r);
        let w = (2 * k + l) as f64;
        let tc = Float::with_val(prec, &c * &xk);
        let td = Float::with_val(prec, &d * &xk);
        s += &tc;
        e += Float::with_val(prec, &tc * w);
        sq += &td;
        eq += Float::with_val(prec, &td * w);
        terms = k as usize;
        let mag = tc.to_f64().abs().max(td.to_f64().abs()) * w * x;
        quiet = if mag < eps { quiet + 1 } else { 0 };
        if quiet >= 2 {
            break;
        }
        // advance to p_{k+1}, q_{k+1}
        let (pn, qn) = if k == 1 {
            let inv = f(1.0) / f((1 + l) as f64);
            let pn = Float::with_val(prec, &lam * 2u32) + Float::with_val(prec, lam.clone().square() * &inv);
            let qn = f(2.0) + Float::with_val(prec, &lam * 2u32) * &inv;
            (pn, qn)
        } else {
            let t = f(2.0) + Float::with_val(prec, &lam * &r);
            let pn = -(Float::with_val(prec, &t * &p) + &p_prev);
            let qn = -(Float::with_val(prec, &t * &q) + Float::with_val(prec, &r * &p) + &q_prev);
            (pn, qn)
        };
        p_prev = std::mem::replace(&mut p, pn);
        q_prev = std::mem::replace(&mut q, qn);
        xk *= &xf;
    }
    if quiet < 2 {
        return Err(SpectrumError::NonConvergence(MAX_TERMS));
    }
    let pbar = f(1.0) + Float::with_val(prec, &xf * &s);
    let gbar = f(ell as f64) + Float::with_val(prec, &xf * &e);
    let qbar = Float::with_val(prec, &xf * &sq);
    let hbar = Float::with_val(prec, &xf * &eq);
    let rl = rho.powi(ell as i32);
    let (dp_reduced, dp, dq) = if ell == 0 {
        (e.to_f64(), rho * e.to_f64(), rho * eq.to_f64())
    } else {
        let rl1 = rho.powi(ell as i32 - 1);
        (gbar.to_f64(), rl1 * gbar.to_f64(), rl1 * hbar.to_f64())
    };
    Ok(FloatEval {
        p: rl * pbar.to_f64(),
        dp,
        q: rl * qbar.to_f64(),
        dq,
        p_reduced: pbar.to_f64(),
        dp_reduced,
        terms,
    })
}

/// `ρ = √((1−a)/(1+a))`.
pub fn rho_of_a(a: f64) -> f64 {
    ((1.0 - a) / (1.0 + a)).sqrt()
}

/// `a = (1−ρ²)/(1+ρ²)`.
pub fn a_of_rho(rho: f64) -> f64 {
    (1.0 - rho * rho) / (1.0 + rho * rho)
}

struct Radial {
    dim: f64,
    coupling: f64,
    lambda: f64,
    hyperbolic: bool,
}

impl System<f64, Vector2<f64>> for Radial {
    fn system(&self, t: f64, y: &Vector2<f64>, dy: &mut Vector2<f64>) {
        let (damp, s) = if self.hyperbolic {
            (1.0 / t.tanh(), t.sinh())
        } else {
            (1.0 / t.tan(), t.sin())
        };
        dy[0] = y[1];
        dy[1] = -(self.dim - 1.0) * damp * y[1] - (self.lambda - self.coupling / (s * s)) * y[0];
    }
}

/// Radial solution regular at the pole, normalized to 1 at the start point,
/// integrated to `radius`. Returns `(u, u′)` there.
pub fn shoot(geometry: Geometry, ell: u32, lambda: f64, radius: f64) -> Result<(f64, f64), SpectrumError> {
    geometry.validate()?;
    let start = (1e-4f64).min(radius / 100.0);
    match shoot_from(geometry, ell, lambda, radius, start) {
        Err(SpectrumError::Integration(e)) => {
            log::debug!("retrying with a smaller start offset after: {e}");
            shoot_from(geometry, ell, lambda, radius, start / 10.0)
        }
        r => r,
    }
}

fn shoot_from(geometry: Geometry, ell: u32, lambda: f64, radius: f64, t0: f64) -> Result<(f64, f64), SpectrumError> {
    let (dim, hyperbolic) = match geometry {
        Geometry::Sphere(n) => (n as f64, false),
        Geometry::Hyperbolic2 => (2.0, true),
    };
    let l = ell as f64;
    let coupling = l * (l + dim - 2.0);
    // u ≈ t^ℓ (1 + c t²) near the pole
    let c = if hyperbolic {
        -(l + l * l + 3.0 * lambda) / (12.0 * (l + 1.0))
    } else {
        ((dim - 1.0) * l + coupling - 3.0 * lambda) / (6.0 * (2.0 * l + dim))
    };
    let u0 = 1.0 + c * t0 * t0;
    let du0 = l / t0 * u0 + 2.0 * c * t0;
    let sys = Radial {
        dim,
        coupling,
        lambda,
        hyperbolic,
    };
    let mut stepper = Dopri5::from_param(
        sys,
        t0,
        radius,
        radius - t0,
        Vector2::new(u0, du0),
        1e-12,
        1e-14,
        0.9,
        0.04,
        0.2,
        10.0,
        radius - t0,
        0.0,
        1_000_000,
        1000,
        OutputType::Sparse,
    );
    stepper
        .integrate()
        .map_err(|e| SpectrumError::Integration(format!("{e:?}")))?;
    let (xs, ys) = (stepper.x_out(), stepper.y_out());
    match (xs.last(), ys.last()) {
        (Some(&x), Some(y)) if (x - radius).abs() <= 1e-9 * radius.max(1.0) => Ok((y[0], y[1])),
        _ => Err(SpectrumError::Integration("integration stopped before the boundary".into())),
    }
}

/// Which evaluator the boundary functional uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Series,
    Shooting,
}

fn pick_method(geometry: Geometry, param: f64) -> Method {
    if geometry == Geometry::S2 && param > SERIES_MIN_A {
        Method::Series
    } else {
        Method::Shooting
    }
}

/// Boundary functional whose zeros in `λ` are the eigenvalues.
pub fn boundary_functional(
    geometry: Geometry,
    method: Method,
    ell: u32,
    bc: Bc,
    param: f64,
    lambda: f64,
) -> Result<f64, SpectrumError> {
    match method {
        Method::Series => {
            if geometry != Geometry::S2 {
                return Err(SpectrumError::Domain("series is only available on s2".into()));
            }
            let ev = eval_float(ell, lambda, rho_of_a(param))?;
            Ok(match bc {
                Bc::Dirichlet => ev.p_reduced,
                Bc::Neumann => ev.dp_reduced,
            })
        }
        Method::Shooting => {
            let (u, du) = shoot(geometry, ell, lambda, geometry.radius(param)?)?;
            Ok(match bc {
                Bc::Dirichlet => u,
                Bc::Neumann => du,
            })
        }
    }
}

/// Secant steps safeguarded by bisection (Illinois variant).
fn refine_root<F>(f: &F, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> Result<f64, SpectrumError>
where
    F: Fn(f64) -> Result<f64, SpectrumError>,
{
    let mut side = 0i8;
    for _ in 0..200 {
        if (b - a).abs() <= ROOT_RTOL * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

const LAMBDA_FLOOR: f64 = 1e-6;

/// Sign-change scan in `t = √λ` with step adapted to the boundary radius,
/// refined where `|F|` dips without a sign change.
fn roots_up_to<F>(f: &F, radius: f64, lambda_min: f64, lambda_max: f64) -> Result<Vec<f64>, SpectrumError>
where
    F: Fn(f64) -> Result<f64, SpectrumError>,
{
    let dt = 0.2 * PI / radius;
    let t_min = lambda_min.max(LAMBDA_FLOOR).sqrt();
    let t_max = lambda_max.sqrt();
    if t_max <= t_min {
        return Ok(Vec::new());
    }
    let n = ((t_max - t_min) / dt).ceil().max(1.0) as usize;
    let ts: Vec<f64> = (0..=n)
        .map(|i| {
            let t = t_min + (t_max - t_min) * i as f64 / n as f64;
            t * t
        })
        .collect();
    let vals = ts.iter().map(|&l| f(l)).collect::<Result<Vec<_>, _>>()?;
    let mut roots = Vec::new();
    let mut i = 0;
    while i + 1 < ts.len() {
        let (l0, l1, v0, v1) = (ts[i], ts[i + 1], vals[i], vals[i + 1]);
        if v0 == 0.0 {
            roots.push(l0);
        } else if v0.signum() != v1.signum() && v1 != 0.0 {
            roots.push(refine_root(f, l0, v0, l1, v1)?);
        } else if i + 2 < ts.len() {
            let v2 = vals[i + 2];
            let dip = v1.abs() < v0.abs() && v1.abs() < v2.abs() && v1.signum() == v2.signum() && v0.signum() == v1.signum();
            if dip {
                let extra = refine_dip(f, ts[i], ts[i + 2], 6)?;
                if !extra.is_empty() {
                    log::debug!("recovered {} root(s) near λ = {l1}", extra.len());
                    roots.extend(extra);
                    i += 2;
                    continue;
                }
            }
        }
        i += 1;
    }
    if let Some(&last) = vals.last() {
        if last == 0.0 {
            roots.push(*ts.last().expect("nonempty"));
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-10 * b.abs().max(1.0));
    Ok(roots)
}

fn refine_dip<F>(f: &F, lo: f64, hi: f64, depth: u32) -> Result<Vec<f64>, SpectrumError>
where
    F: Fn(f64) -> Result<f64, SpectrumError>,
{
    let mut pts = 4usize;
    for _ in 0..depth {
        pts *= 2;
        let xs: Vec<f64> = (0..=pts).map(|i| lo + (hi - lo) * i as f64 / pts as f64).collect();
        let vs = xs.iter().map(|&x| f(x)).collect::<Result<Vec<_>, _>>()?;
        let mut found = Vec::new();
        for j in 0..pts {
            if vs[j].signum() != vs[j + 1].signum() {
                found.push(refine_root(f, xs[j], vs[j], xs[j + 1], vs[j + 1])?);
            }
        }
        if !found.is_empty() {
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

/// Every mode-`ℓ` eigenvalue on a sphere cap is at least `ℓ(ℓ+n−2)`, since
/// `1/sin²θ ≥ 1` in the Rayleigh quotient.
fn spectral_floor(geometry: Geometry, ell: u32) -> f64 {
    match geometry {
        Geometry::Sphere(n) => {
            let l = ell as f64;
            l * (l + n as f64 - 2.0) * (1.0 - 1e-9)
        }
        Geometry::Hyperbolic2 => 0.0,
    }
}

fn prepend_constant(ell: u32, bc: Bc, mut v: Vec<f64>) -> Vec<f64> {
    if ell == 0 && bc == Bc::Neumann {
        v.insert(0, 0.0);
    }
    v
}

fn eigenvalues_with(
    geometry: Geometry,
    method: Method,
    ell: u32,
    bc: Bc,
    param: f64,
    lambda_max: f64,
) -> Result<Vec<f64>, SpectrumError> {
    let radius = geometry.radius(param)?;
    let f = |l: f64| boundary_functional(geometry, method, ell, bc, param, l);
    let roots = roots_up_to(&f, radius, spectral_floor(geometry, ell), lambda_max)?;
    Ok(prepend_constant(ell, bc, roots))
}

/// Eigenvalues of mode `ℓ` on the cap `{cos θ > a}` of `S²` up to `lambda_max`.
pub fn scan_eigenvalues(a: f64, ell: u32, bc: Bc, lambda_max: f64) -> Result<Vec<f64>, SpectrumError> {
    if !(lambda_max > 0.0 && lambda_max <= 1e4) {
        return Err(SpectrumError::Domain(format!("lambda_max = {lambda_max} not in (0, 1e4]")));
    }
    eigenvalues_with(Geometry::S2, pick_method(Geometry::S2, a), ell, bc, a, lambda_max)
}

/// Eigenvalues by shooting only, for any supported geometry.
pub fn ode_spectrum(
    geometry: Geometry,
    ell: u32,
    bc: Bc,
    param: f64,
    lambda_max: f64,
) -> Result<Vec<f64>, SpectrumError> {
    geometry.validate()?;
    eigenvalues_with(geometry, Method::Shooting, ell, bc, param, lambda_max)
}

/// Eigenvalues with indices `0..count`, growing the scan range as needed.
pub fn lowest_eigenvalues(
    geometry: Geometry,
    ell: u32,
    bc: Bc,
    param: f64,
    count: usize,
) -> Result<Vec<f64>, SpectrumError> {
    geometry.validate()?;
    let radius = geometry.radius(param)?;
    let method = pick_method(geometry, param);
    let t = (count as f64 + ell as f64 / 2.0 + 2.0) * PI / radius;
    let mut lambda_max = t * t;
    for _ in 0..12 {
        let v = eigenvalues_with(geometry, method, ell, bc, param, lambda_max)?;
        if v.len() >= count {
            return Ok(v.into_iter().take(count).collect());
        }
        lambda_max *= 2.0;
    }
    Err(SpectrumError::Degenerate(format!("fewer than {count} eigenvalues found")))
}

/// One eigenvalue branch sampled along the domain parameter.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpectrumCurve {
    pub geometry: Geometry,
    pub ell: u32,
    pub bc: Bc,
    pub branch: usize,
    /// `(a or r, λ)`.
    pub samples: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

impl SpectrumCurve {
    pub fn value_at(&self, param: f64) -> Option<f64> {
        self.samples.iter().find(|s| s.0 == param).map(|s| s.1)
    }
}

fn check_grid(grid: &[f64]) -> Result<(), SpectrumError> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SpectrumError::Domain("grid must be strictly increasing with ≥ 2 points".into()));
    }
    Ok(())
}

fn continuity_warnings(samples: &[(f64, f64)]) -> Vec<String> {
    let mut out = Vec::new();
    for i in 2..samples.len() {
        let (a0, l0) = samples[i - 2];
        let (a1, l1) = samples[i - 1];
        let (a2, l2) = samples[i];
        let pred = l1 + (l1 - l0) / (a1 - a0) * (a2 - a1);
        let step = (pred - l1).abs();
        if (l2 - pred).abs() > 5.0 * step + 1e-6 * l1.abs().max(1.0) && (l2 - l1).abs() > 5.0 * step {
            out.push(format!("possible branch jump at {a2}: λ {l1} → {l2}, predicted {pred}"));
        }
    }
    out
}

/// Traces branches `0..branches` of one `(ℓ, bc)` family across `grid`.
pub fn trace_branches(
    geometry: Geometry,
    ell: u32,
    bc: Bc,
    branches: usize,
    grid: &[f64],
) -> Result<Vec<SpectrumCurve>, SpectrumError> {
    check_grid(grid)?;
    let per_point = grid
        .par_iter()
        .map(|&a| lowest_eigenvalues(geometry, ell, bc, a, branches))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((0..branches)
        .map(|n| {
            let samples: Vec<(f64, f64)> = grid.iter().zip(&per_point).map(|(&a, v)| (a, v[n])).collect();
            let warnings = continuity_warnings(&samples);
            for w in &warnings {
                log::warn!("{geometry} ell={ell} {bc} branch {n}: {w}");
            }
            SpectrumCurve {
                geometry,
                ell,
                bc,
                branch: n,
                samples,
                warnings,
            }
        })
        .collect())
}

/// A single branch; see [`trace_branches`].
pub fn trace_curve(
    geometry: Geometry,
    ell: u32,
    bc: Bc,
    branch: usize,
    grid: &[f64],
) -> Result<SpectrumCurve, SpectrumError> {
    let mut all = trace_branches(geometry, ell, bc, branch + 1, grid)?;
    Ok(all.pop().expect("branch + 1 curves"))
}

/// 400 cap heights over `[−0.95, 0.98]`, denser toward `a = 1`.
pub fn figure_grid() -> Vec<f64> {
    let n = 400;
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            // sin warp clusters points at the upper end
            let w = (s * PI / 2.0).sin();
            -0.95 + (0.98 + 0.95) * w
        })
        .collect()
}

pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Crossing {
    pub geometry: Geometry,
    /// Cap height on spheres, disk radius on `H²`.
    pub a_star: f64,
    pub lambda_star: f64,
    pub rho_star: Option<f64>,
    pub ell: u32,
    pub neumann_branch: usize,
    pub dirichlet_branch: usize,
    /// `μ′ − λ′` by central differences.
    pub slope_gap: f64,
    pub slope_gap_err: f64,
    pub transversal: bool,
    pub residual: f64,
    pub method: String,
}

/// Second `ρ`-derivative of `P₀` from the Legendre equation.
fn zonal_second(ev: &FloatEval, lambda: f64, rho: f64) -> f64 {
    -ev.dp / rho - 4.0 * lambda * ev.p / (1.0 + rho * rho).powi(2)
}

/// Newton on `(P̄_ℓ, P′₀)` in `(ρ, λ)`.
pub fn newton_crossing(ell: u32, rho: f64, lambda: f64) -> Result<(f64, f64, f64), SpectrumError> {
    let (mut r, mut l) = (rho, lambda);
    let resid = |r: f64, l: f64| -> Result<(f64, FloatEval, FloatEval), SpectrumError> {
        let d = eval_float(ell, l, r)?;
        let z = eval_float(0, l, r)?;
        Ok((d.p_reduced.abs().max(z.dp.abs()), d, z))
    };
    for _ in 0..50 {
        let (res, d, z) = resid(r, l)?;
        let rl = r.powi(ell as i32);
        let f1 = d.p_reduced;
        let f2 = z.dp;
        let a11 = (d.dp - ell as f64 * d.p / r) / rl;
        let a12 = d.q / rl;
        let a21 = zonal_second(&z, l, r);
        let a22 = z.dq;
        let det = a11 * a22 - a12 * a21;
        if det == 0.0 || !det.is_finite() {
            return Err(SpectrumError::Degenerate("singular Jacobian".into()));
        }
        let dr = (a22 * f1 - a12 * f2) / det;
        let dl = (a11 * f2 - a21 * f1) / det;
        r -= dr;
        l -= dl;
        if !(r > 0.0 && r * r < 2.0 / 3.0 && l > 0.0) {
            return Err(SpectrumError::Degenerate("Newton left the domain".into()));
        }
        if res < 1e-13 && dr.abs() < 1e-15 * r && dl.abs() < 1e-13 * l {
            break;
        }
    }
    let (res, _, _) = resid(r, l)?;
    Ok((r, l, res))
}

/// Eigenvalue of one family near `guess`, found by expanding a bracket.
pub fn eigenvalue_near(
    geometry: Geometry,
    ell: u32,
    bc: Bc,
    param: f64,
    guess: f64,
    window: f64,
) -> Result<f64, SpectrumError> {
    let method = pick_method(geometry, param);
    let f = |l: f64| boundary_functional(geometry, method, ell, bc, param, l);
    let f0 = f(guess)?;
    if f0 == 0.0 {
        return Ok(guess);
    }
    let mut h = window / 64.0;
    while h <= window {
        for &(a, b) in &[(guess - h, guess), (guess, guess + h)] {
            if a <= 0.0 {
                continue;
            }
            let (fa, fb) = (f(a)?, f(b)?);
            if fa.signum() != fb.signum() {
                return refine_root(&f, a, fa, b, fb);
            }
        }
        h *= 2.0;
    }
    Err(SpectrumError::Degenerate(format!("no eigenvalue within {window} of {guess}")))
}

fn branch_value(curve: &SpectrumCurve, param: f64, guess: f64, window: f64) -> Result<f64, SpectrumError> {
    eigenvalue_near(curve.geometry, curve.ell, curve.bc, param, guess, window)
}

/// Locates sign changes of `λ_A − λ_B` on the common grid and refines them.
pub fn find_crossing(neumann: &SpectrumCurve, dirichlet: &SpectrumCurve) -> Result<Vec<Crossing>, SpectrumError> {
    if neumann.geometry != dirichlet.geometry {
        return Err(SpectrumError::Domain("curves live on different geometries".into()));
    }
    let geometry = neumann.geometry;
    let common: Vec<(f64, f64, f64)> = neumann
        .samples
        .iter()
        .filter_map(|&(a, la)| dirichlet.value_at(a).map(|lb| (a, la, lb)))
        .collect();
    let mut out = Vec::new();
    for w in common.windows(2) {
        let (a0, la0, lb0) = w[0];
        let (a1, la1, lb1) = w[1];
        let (d0, d1) = (la0 - lb0, la1 - lb1);
        if d0.signum() == d1.signum() && d1 != 0.0 {
            continue;
        }
        let s = d0 / (d0 - d1);
        let a_guess = a0 + s * (a1 - a0);
        let l_guess = la0 + s * (la1 - la0);
        let window = (la1 - la0).abs().max((lb1 - lb0).abs()).max(1e-3 * l_guess) * 4.0;

        let newton = (geometry == Geometry::S2 && a_guess > SERIES_MIN_A && neumann.ell == 0)
            .then(|| newton_crossing(dirichlet.ell, rho_of_a(a_guess), l_guess).ok())
            .flatten()
            .filter(|&(r, l, res)| {
                let a = a_of_rho(r);
                res < 1e-10 && a >= a0.min(a1) - (a1 - a0).abs() && a <= a0.max(a1) + (a1 - a0).abs() && (l - l_guess).abs() < window
            });
        let (a_star, lambda_star, rho_star, residual, method) = match newton {
            Some((r, l, res)) => (a_of_rho(r), l, Some(r), res, "newton"),
            None => {
                let (a, l, res) = bisect_difference(neumann, dirichlet, a0, a1, l_guess, window)?;
                let rho = (geometry == Geometry::S2).then(|| rho_of_a(a));
                (a, l, rho, res, "bisection")
            }
        };
        let (gap, err) = slope_gap(neumann, dirichlet, a_star, lambda_star, window)?;
        out.push(Crossing {
            geometry,
            a_star,
            lambda_star,
            rho_star,
            ell: dirichlet.ell,
            neumann_branch: neumann.branch,
            dirichlet_branch: dirichlet.branch,
            slope_gap: gap,
            slope_gap_err: err,
            transversal: gap.abs() > 10.0 * err,
            residual,
            method: method.into(),
        });
    }
    Ok(out)
}

fn bisect_difference(
    a_curve: &SpectrumCurve,
    b_curve: &SpectrumCurve,
    mut lo: f64,
    mut hi: f64,
    guess: f64,
    window: f64,
) -> Result<(f64, f64, f64), SpectrumError> {
    let diff = |a: f64, g: f64| -> Result<(f64, f64), SpectrumError> {
        let la = branch_value(a_curve, a, g, window)?;
        let lb = branch_value(b_curve, a, g, window)?;
        Ok((la - lb, 0.5 * (la + lb)))
    };
    let (mut dlo, _) = diff(lo, guess)?;
    let mut mid_l = guess;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (dm, lm) = diff(mid, mid_l)?;
        mid_l = lm;
        if dm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if dm.signum() == dlo.signum() {
            lo = mid;
            dlo = dm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    let a = 0.5 * (lo + hi);
    let (d, l) = diff(a, mid_l)?;
    Ok((a, l, d.abs() / l.abs().max(1.0)))
}

fn slope_gap(
    a_curve: &SpectrumCurve,
    b_curve: &SpectrumCurve,
    a: f64,
    l: f64,
    window: f64,
) -> Result<(f64, f64), SpectrumError> {
    let w = window.min(0.05 * l.max(1.0));
    let central = |h: f64| -> Result<f64, SpectrumError> {
        let ap = branch_value(a_curve, a + h, l, w)?;
        let am = branch_value(a_curve, a - h, l, w)?;
        let bp = branch_value(b_curve, a + h, l, w)?;
        let bm = branch_value(b_curve, a - h, l, w)?;
        Ok(((ap - am) - (bp - bm)) / (2.0 * h))
    };
    let g1 = central(1e-5)?;
    let g2 = central(2e-5)?;
    let rounding = 4.0 * ROOT_RTOL * l / 1e-5;
    Ok((g1, (g1 - g2).abs() / 3.0 + rounding))
}

/// Crossings of Dirichlet branches `0..dirichlet` of mode `ℓ` with zonal
/// Neumann branches `1..=neumann` on `grid`.
pub fn search_crossings(
    geometry: Geometry,
    ell: u32,
    grid: &[f64],
    dirichlet: usize,
    neumann: usize,
) -> Result<(Vec<Crossing>, Vec<SpectrumCurve>), SpectrumError> {
    let d = trace_branches(geometry, ell, Bc::Dirichlet, dirichlet, grid)?;
    let n = trace_branches(geometry, 0, Bc::Neumann, neumann + 1, grid)?;
    let mut out = Vec::new();
    for nc in n.iter().skip(1) {
        for dc in &d {
            out.extend(find_crossing(nc, dc)?);
        }
    }
    out.sort_by(|x, y| x.a_star.partial_cmp(&y.a_star).expect("finite"));
    let curves = n.into_iter().chain(d).collect();
    Ok((out, curves))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundaryShape {
    pub a_star: f64,
    pub ell: u32,
    pub b_star: f64,
    pub s: f64,
    /// `(φ, θ)`.
    pub samples: Vec<(f64, f64)>,
}

/// Amplitude `b★ = −φ′_ℓ(θ★)/ψ″₀(θ★)` in the series normalization.
///
/// With `ψ′ = 0` on the boundary the equation gives `ψ″ = −4λP₀/(1+ρ²)² · (dρ/dθ)²`,
/// and `dρ/dθ = (1+ρ²)/2`.
pub fn shape_amplitude(ell: u32, rho: f64, lambda: f64) -> Result<(f64, f64), SpectrumError> {
    let d = eval_float(ell, lambda, rho)?;
    let z = eval_float(0, lambda, rho)?;
    let drho = (1.0 + rho * rho) / 2.0;
    let phi_prime = d.dp * drho;
    let psi_second = -4.0 * lambda * z.p / (1.0 + rho * rho).powi(2) * drho * drho;
    Ok((-phi_prime / psi_second, psi_second))
}

/// First-order boundary `θ(φ) = arccos(a★) + s·b★·cos(ℓφ)`.
pub fn boundary_shape(crossing: &Crossing, s: f64, samples: usize) -> Result<BoundaryShape, SpectrumError> {
    if crossing.geometry != Geometry::S2 {
        return Err(SpectrumError::Domain("boundary shapes are implemented on s2".into()));
    }
    if crossing.residual > 1e-8 {
        return Err(SpectrumError::Degenerate(format!("crossing residual {} too large", crossing.residual)));
    }
    if samples == 0 {
        return Err(SpectrumError::Domain("need at least one sample".into()));
    }
    let rho = crossing.rho_star.unwrap_or_else(|| rho_of_a(crossing.a_star));
    let (b_star, psi2) = shape_amplitude(crossing.ell, rho, crossing.lambda_star)?;
    if psi2.abs() < 1e-8 {
        return Err(SpectrumError::Degenerate("second derivative of the Neumann mode vanishes".into()));
    }
    let theta = crossing.a_star.acos();
    if (s * b_star).abs() >= theta / 10.0 {
        return Err(SpectrumError::Domain(format!(
            "|s·b★| = {} must stay below arccos(a★)/10 = {}",
            (s * b_star).abs(),
            theta / 10.0
        )));
    }
    let l = crossing.ell as f64;
    let pts = (0..samples)
        .map(|j| {
            let phi = 2.0 * PI * j as f64 / samples as f64;
            (phi, theta + s * b_star * (l * phi).cos())
        })
        .collect();
    Ok(BoundaryShape {
        a_star: crossing.a_star,
        ell: crossing.ell,
        b_star,
        s,
        samples: pts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_closed_forms() {
        let e = eval_float(0, 2.0, 0.5).unwrap();
        assert!((e.p - 0.6).abs() < 1e-14);
        let e = eval_float(0, 0.0, 0.7).unwrap();
        assert_eq!(e.p, 1.0);
        assert_eq!(e.dp, 0.0);
        assert!(eval_float(0, 2.0, 0.9).is_err());
    }

    #[test]
    fn shooting_matches_series() {
        let a: f64 = 0.5;
        let r = a.acos();
        let (u, _) = shoot(Geometry::S2, 0, 2.0, r).unwrap();
        // P₁(cos θ) = cos θ, normalized to 1 at the pole
        assert!((u - a).abs() < 1e-9, "{u}");
    }

    #[test]
    fn hemisphere_values() {
        let d = scan_eigenvalues(0.0, 0, Bc::Dirichlet, 31.0).unwrap();
        assert_eq!(d.len(), 3);
        for (x, y) in d.iter().zip([2.0, 12.0, 30.0]) {
            assert!((x - y).abs() < 1e-8, "{d:?}");
        }
        let n = scan_eigenvalues(0.0, 0, Bc::Neumann, 21.0).unwrap();
        assert_eq!(n.len(), 3);
        for (x, y) in n.iter().zip([0.0, 6.0, 20.0]) {
            assert!((x - y).abs() < 1e-8, "{n:?}");
        }
    }

    #[test]
    fn geometry_parsing() {
        assert_eq!("S3".parse::<Geometry>().unwrap(), Geometry::Sphere(3));
        assert_eq!(Geometry::Hyperbolic2.to_string(), "h2");
        assert!("r3".parse::<Geometry>().is_err());
        assert_eq!("Neumann".parse::<Bc>().unwrap(), Bc::Neumann);
    }

    #[test]
    fn shape_at_zero_amplitude_is_a_circle() {
        let c = Crossing {
            geometry: Geometry::S2,
            a_star: 0.4774365682415,
            lambda_star: 154.1915744945,
            rho_star: None,
            ell: 8,
            neumann_branch: 4,
            dirichlet_branch: 0,
            slope_gap: 1.0,
            slope_gap_err: 0.0,
            transversal: true,
            residual: 0.0,
            method: "newton".into(),
        };
        let sh = boundary_shape(&c, 0.0, 64).unwrap();
        let t = c.a_star.acos();
        assert!(sh.samples.iter().all(|&(_, th)| th == t));
    }
}
