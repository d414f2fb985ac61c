//! Rigorous enclosures of Legendre functions of the first kind in the
//! stereographic coordinate `ρ = tan(θ/2)` and spectral parameter `λ = ν(ν+1)`.
//!
//! The function is normalized as `P(ρ) = ρ^ℓ (1 + Σ_{k≥1} p_k ρ^{2k} / (k(k+ℓ)))`,
//! where the `p_k` follow a three-term recurrence in `k`. `Q = ∂P/∂λ` has the
//! coefficients `q_k = dp_k/dλ`. The infinite series is truncated after `K`
//! terms and the remainder is enclosed by a geometric tail bound controlled by
//! a ratio `γ > 1`, valid while `ρ²γ < 1`.

use std::fmt;
use std::str::FromStr;

use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalError, Precision, Sign};

pub const DEFAULT_ORDER: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LegendreError {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("tail condition violated: (γ−1)²/γ = {lhs:.6e} < 2λ/((K+1)(K+1+ℓ)) = {rhs:.6e}")]
    TailCondition { lhs: f64, rhs: f64 },
    #[error("outside the convergence region: ρ²γ = {value:.6} ≥ 1")]
    Convergence { value: f64 },
    #[error("ρ must be nonnegative")]
    NegativeRho,
    #[error("λ must be nonnegative")]
    NegativeLambda,
    #[error("λ interval touches 0 while the series coefficients do not vanish; the tail constant is undefined")]
    LambdaTouchesZero,
    #[error("truncation order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("tail ratio must satisfy γ > 1, got {0}")]
    BadTailRatio(TailRatio),
    #[error("cap height must satisfy −1 < a ≤ 1")]
    CapHeight,
}

/// The rational tail ratio `γ = num/den > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailRatio {
    pub num: u32,
    pub den: u32,
}

impl TailRatio {
    pub const THREE_HALVES: TailRatio = TailRatio { num: 3, den: 2 };

    pub fn new(num: u32, den: u32) -> Result<Self, LegendreError> {
        let r = TailRatio { num, den };
        if den == 0 || num <= den {
            return Err(LegendreError::BadTailRatio(r));
        }
        Ok(r)
    }

    pub fn to_interval(self, prec: Precision) -> Interval {
        Interval::from_ratio(self.num as i64, self.den as i64, prec).expect("den > 0")
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for TailRatio {
    fn default() -> Self {
        TailRatio::THREE_HALVES
    }
}

impl fmt::Display for TailRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for TailRatio {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let num = n.trim().parse::<u32>().map_err(|e| e.to_string())?;
        let den = d.trim().parse::<u32>().map_err(|e| e.to_string())?;
        TailRatio::new(num, den).map_err(|e| e.to_string())
    }
}

/// One rigorous evaluation request.
#[derive(Debug, Clone)]
pub struct LegendreQuery {
    pub ell: u32,
    pub lambda: Interval,
    pub rho: Interval,
    pub order: usize,
    pub gamma: TailRatio,
}

impl LegendreQuery {
    pub fn new(ell: u32, lambda: Interval, rho: Interval) -> Self {
        LegendreQuery {
            ell,
            lambda,
            rho,
            order: DEFAULT_ORDER,
            gamma: TailRatio::default(),
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_gamma(mut self, gamma: TailRatio) -> Self {
        self.gamma = gamma;
        self
    }
}

/// Series coefficients `p_k` and `q_k = dp_k/dλ`.
#[derive(Debug, Clone)]
pub struct CoeffPair {
    pub k: usize,
    pub p: Interval,
    pub q: Interval,
}

/// Upper bounds on the four truncation remainders.
#[derive(Debug, Clone, PartialEq)]
pub struct TailRadii {
    pub p: Float,
    pub dp: Float,
    pub q: Float,
    pub dq: Float,
}

#[derive(Debug, Clone)]
pub struct TailBounds {
    /// The constant `C` bounding the last two coefficients, as a degenerate interval.
    pub c: Interval,
    pub radii: TailRadii,
}

/// Enclosures of `P`, `∂P/∂ρ`, `Q = ∂P/∂λ` and `∂Q/∂ρ` over a query box.
#[derive(Debug, Clone)]
pub struct LegendreEval {
    pub p: Interval,
    pub dp: Interval,
    pub q: Interval,
    pub dq: Interval,
    pub tail_c: Interval,
    pub tail_radii: TailRadii,
}

/// Which of the four evaluated functions a check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    P,
    #[serde(rename = "dP")]
    DP,
    Q,
    #[serde(rename = "dQ")]
    DQ,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::P => "P",
            Target::DP => "dP",
            Target::Q => "Q",
            Target::DQ => "dQ",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl LegendreEval {
    pub fn get(&self, target: Target) -> &Interval {
        match target {
            Target::P => &self.p,
            Target::DP => &self.dp,
            Target::Q => &self.q,
            Target::DQ => &self.dq,
        }
    }
}

fn recip_index(k: usize, ell: u32, prec: Precision) -> Interval {
    let d = (k as i64) * (k as i64 + ell as i64);
    Interval::from_ratio(1, d, prec).expect("k >= 1")
}

/// Coefficients `(p_k, q_k)` for `k = 1..=order+1`.
pub fn taylor_coeffs(ell: u32, lambda: &Interval, order: usize) -> Result<Vec<CoeffPair>, LegendreError> {
    if order < 2 {
        return Err(LegendreError::OrderTooSmall(order));
    }
    if lambda.lo() < &0 {
        return Err(LegendreError::NegativeLambda);
    }
    let prec = lambda.precision();
    let one = Interval::from_int(1, prec);
    let two = Interval::from_int(2, prec);
    let r1 = recip_index(1, ell, prec);

    let mut out = Vec::with_capacity(order + 1);
    // p_1 = −λ, p_2 = 2λ + λ²/(1+ℓ); q_1 = −1, q_2 = 2 + 2λ/(1+ℓ)
    let p1 = -lambda;
    let q1 = -&one;
    let p2 = lambda.scale(2) + lambda.sqr() * &r1;
    let q2 = &two + lambda.scale(2) * &r1;
    out.push(CoeffPair { k: 1, p: p1, q: q1 });
    out.push(CoeffPair { k: 2, p: p2, q: q2 });

    for k in 2..=order {
        let r = recip_index(k, ell, prec);
        let t = &two + lambda * &r;
        let (pk, qk) = (&out[k - 1].p, &out[k - 1].q);
        let (pm, qm) = (&out[k - 2].p, &out[k - 2].q);
        let p_next = -(&t * pk + pm);
        let q_next = -(&t * qk + &r * pk + qm);
        out.push(CoeffPair {
            k: k + 1,
            p: p_next.finite()?,
            q: q_next.finite()?,
        });
    }
    Ok(out)
}

fn up(x: &Interval) -> Float {
    x.hi().clone()
}

/// Checks that `γ` controls the coefficient growth beyond index `order`.
///
/// The geometric induction needs `1 + 2λγ/((γ−1) k(k+ℓ)) ≤ γ` for every
/// `k ≥ order + 1`, which is `(γ−1)²/γ ≥ 2λ/((K+1)(K+1+ℓ))`.
pub fn check_tail_condition(ell: u32, lambda_hi: &Float, gamma: TailRatio, order: usize) -> Result<(), LegendreError> {
    let prec = Precision::new(lambda_hi.prec().max(53))?;
    let g = gamma.to_interval(prec);
    let one = Interval::from_int(1, prec);
    let gm1 = &g - &one;
    let lhs = gm1.sqr().div(&g)?;
    let k1 = order as i64 + 1;
    let denom = Interval::from_int(k1 * (k1 + ell as i64), prec);
    let lam = Interval::new(lambda_hi.clone(), lambda_hi.clone())?;
    let rhs = lam.scale(2).div(&denom)?;
    if lhs.lo() < rhs.hi() {
        return Err(LegendreError::TailCondition {
            lhs: lhs.lo_f64(),
            rhs: rhs.hi_f64(),
        });
    }
    Ok(())
}

/// Checks `ρ.hi² γ < 1`.
pub fn check_convergence(rho: &Interval, gamma: TailRatio) -> Result<(), LegendreError> {
    if rho.lo() < &0 {
        return Err(LegendreError::NegativeRho);
    }
    let g = gamma.to_interval(rho.precision());
    let v = rho.upper_point().sqr() * g;
    if !(v.hi() < &1) {
        return Err(LegendreError::Convergence { value: v.hi_f64() });
    }
    Ok(())
}

/// The tail constant `C` and the four remainder radii for a truncation at `order`.
pub fn tail_bounds(
    coeffs: &[CoeffPair],
    lambda: &Interval,
    rho: &Interval,
    gamma: TailRatio,
    order: usize,
    ell: u32,
) -> Result<TailBounds, LegendreError> {
    if order < 2 {
        return Err(LegendreError::OrderTooSmall(order));
    }
    assert!(coeffs.len() > order, "need coefficients up to index order+1");
    check_tail_condition(ell, lambda.hi(), gamma, order)?;
    check_convergence(rho, gamma)?;

    let prec = lambda.precision().max(rho.precision());
    let g = gamma.to_interval(prec);
    let one = Interval::from_int(1, prec);
    let gm1 = &g - &one;

    let pk = &coeffs[order - 1].p;
    let pk1 = &coeffs[order].p;
    let qk = &coeffs[order - 1].q;
    let qk1 = &coeffs[order].q;

    let p_sum = pk1 + pk;
    let p_vanish = p_sum.is_point() && p_sum.lo().is_zero() && pk1.is_point() && pk1.lo().is_zero();
    let c_p = if p_vanish {
        Float::new(prec.bits())
    } else {
        if !(lambda.lo() > &0) {
            return Err(LegendreError::LambdaTouchesZero);
        }
        let lam_lo = lambda.lower_point();
        let a = Interval::new(p_sum.mag(), p_sum.mag())?.div(&lam_lo)?;
        let b = (Interval::new(pk1.mag(), pk1.mag())? * &gm1).div(&lam_lo)?;
        std::cmp::max_by(up(&a), up(&b), |x, y| x.partial_cmp(y).expect("finite"))
    };
    let q_sum = qk1 + qk;
    let c_q1 = q_sum.mag();
    let c_q2 = up(&(Interval::new(qk1.mag(), qk1.mag())? * &gm1));
    let c = [c_p, c_q1, c_q2]
        .into_iter()
        .reduce(|x, y| if y > x { y } else { x })
        .expect("nonempty");
    let c_iv = Interval::new(c.clone(), c)?;

    // worst case endpoints: every radius is increasing in λ and ρ
    let lam = lambda.upper_point();
    let r = rho.upper_point();
    let x = r.sqr();
    let xg = &x * &g;
    let one_minus = &one - &xg;
    let k = order as i64;
    let kk = Interval::from_int(k * (k + ell as i64), prec);
    let kf = Interval::from_int(k, prec);
    let geo = xg.div(&(&gm1 * &one_minus))?;
    let pow_even = r.powi(ell + 2 * order as u32);
    let pow_odd = r.powi(ell + 2 * order as u32 - 1);

    let rq = (&c_iv * &pow_even * &geo).div(&kk)?;
    let rdq = (c_iv.scale(2) * &pow_odd * &geo).div(&kf)?;
    let rp = &rq * &lam;
    let rdp = &rdq * &lam;

    Ok(TailBounds {
        c: c_iv,
        radii: TailRadii {
            p: up(&rp.finite()?),
            dp: up(&rdp.finite()?),
            q: up(&rq.finite()?),
            dq: up(&rdq.finite()?),
        },
    })
}

fn pad(x: Interval, r: &Float) -> Result<Interval, LegendreError> {
    if r.is_zero() {
        return Ok(x);
    }
    let p = x.prec();
    let lo = Float::with_val_round(p, x.lo() - r, Round::Down).0;
    let hi = Float::with_val_round(p, x.hi() + r, Round::Up).0;
    Ok(Interval::new(lo, hi)?)
}

fn horner(coeffs: &[Interval], x: &Interval) -> Interval {
    let mut it = coeffs.iter().rev();
    let mut acc = it.next().expect("nonempty").clone();
    for c in it {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Enclosures of `P, ∂P/∂ρ, Q, ∂Q/∂ρ` over the query's `(λ, ρ)` box.
pub fn eval_all(query: &LegendreQuery) -> Result<LegendreEval, LegendreError> {
    let LegendreQuery {
        ell,
        ref lambda,
        ref rho,
        order,
        gamma,
    } = *query;
    if gamma.num <= gamma.den || gamma.den == 0 {
        return Err(LegendreError::BadTailRatio(gamma));
    }
    if order < 2 {
        return Err(LegendreError::OrderTooSmall(order));
    }
    if lambda.lo() < &0 {
        return Err(LegendreError::NegativeLambda);
    }
    check_convergence(rho, gamma)?;
    check_tail_condition(ell, lambda.hi(), gamma, order)?;

    let coeffs = taylor_coeffs(ell, lambda, order)?;
    let tail = tail_bounds(&coeffs, lambda, rho, gamma, order, ell)?;
    let prec = lambda.precision().max(rho.precision());

    let mut cp = Vec::with_capacity(order);
    let mut cdp = Vec::with_capacity(order);
    let mut cq = Vec::with_capacity(order);
    let mut cdq = Vec::with_capacity(order);
    for pair in &coeffs[..order] {
        let r = recip_index(pair.k, ell, prec);
        let c = &pair.p * &r;
        let d = &pair.q * &r;
        let m = 2 * pair.k as i64 + ell as i64;
        cdp.push(c.scale(m));
        cdq.push(d.scale(m));
        cp.push(c);
        cq.push(d);
    }

    let x = rho.sqr();
    let s_p = horner(&cp, &x);
    let s_dp = horner(&cdp, &x);
    let s_q = horner(&cq, &x);
    let s_dq = horner(&cdq, &x);

    let one = Interval::from_int(1, prec);
    let rho_l = rho.powi(ell);
    let rho_l1 = rho.powi(ell + 1);
    let rho_l2 = rho.powi(ell + 2);

    let p = &rho_l * &(&one + &(&x * &s_p));
    let lead = if ell == 0 {
        Interval::from_int(0, prec)
    } else {
        rho.powi(ell - 1).scale(ell as i64)
    };
    let dp = &lead + &(&rho_l1 * &s_dp);
    let q = &rho_l2 * &s_q;
    let dq = &rho_l1 * &s_dq;

    let TailRadii {
        p: rp,
        dp: rdp,
        q: rq,
        dq: rdq,
    } = &tail.radii;
    Ok(LegendreEval {
        p: pad(p.finite()?, rp)?,
        dp: pad(dp.finite()?, rdp)?,
        q: pad(q.finite()?, rq)?,
        dq: pad(dq.finite()?, rdq)?,
        tail_c: tail.c,
        tail_radii: tail.radii,
    })
}

/// Cap height `a` or stereographic radius `ρ`.
#[derive(Debug, Clone)]
pub enum CapCoord {
    Height(Interval),
    Radius(Interval),
}

/// Legendre degree `ν` or eigenvalue `λ`.
#[derive(Debug, Clone)]
pub enum SpectralCoord {
    Degree(Interval),
    Eigenvalue(Interval),
}

#[derive(Debug, Clone)]
pub struct CoordMapResult {
    pub a: Interval,
    pub rho: Interval,
    pub nu: Interval,
    pub lambda: Interval,
    /// `da/dρ = −4ρ/(1+ρ²)²`.
    pub da_drho: Interval,
}

fn a_of_rho_point(r: &Interval) -> Result<Interval, IntervalError> {
    let one = Interval::from_int(1, r.precision());
    let x = r.sqr();
    (&one - &x).div(&(&one + &x))
}

fn rho_of_a_point(a: &Interval) -> Result<Interval, IntervalError> {
    let one = Interval::from_int(1, a.precision());
    (&one - a).div(&(&one + a))?.sqrt()
}

fn nu_of_lambda_point(l: &Interval) -> Result<Interval, IntervalError> {
    let quarter = Interval::from_ratio(1, 4, l.precision())?;
    let half = Interval::from_ratio(1, 2, l.precision())?;
    Ok(&(&quarter + l).sqrt()? - &half)
}

fn lambda_of_nu_point(n: &Interval) -> Interval {
    let one = Interval::from_int(1, n.precision());
    n * &(n + &one)
}

/// `a = (1−ρ²)/(1+ρ²)`, decreasing in `ρ ≥ 0`.
pub fn a_of_rho(rho: &Interval) -> Result<Interval, LegendreError> {
    if rho.lo() < &0 {
        return Err(LegendreError::NegativeRho);
    }
    let lo = a_of_rho_point(&rho.upper_point())?;
    let hi = a_of_rho_point(&rho.lower_point())?;
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone())?)
}

/// `ρ = √((1−a)/(1+a))`, decreasing in `a`.
pub fn rho_of_a(a: &Interval) -> Result<Interval, LegendreError> {
    if !(a.lo() > &-1) || a.hi() > &1 {
        return Err(LegendreError::CapHeight);
    }
    let lo = rho_of_a_point(&a.upper_point())?;
    let hi = rho_of_a_point(&a.lower_point())?;
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone())?)
}

/// `ν = −½ + √(¼+λ)`, increasing in `λ`.
pub fn nu_of_lambda(lambda: &Interval) -> Result<Interval, LegendreError> {
    if lambda.lo() < &0 {
        return Err(LegendreError::NegativeLambda);
    }
    let lo = nu_of_lambda_point(&lambda.lower_point())?;
    let hi = nu_of_lambda_point(&lambda.upper_point())?;
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone())?)
}

/// `λ = ν(ν+1)`, increasing for `ν ≥ 0`.
pub fn lambda_of_nu(nu: &Interval) -> Result<Interval, LegendreError> {
    if nu.lo() < &0 {
        return Err(LegendreError::NegativeLambda);
    }
    let lo = lambda_of_nu_point(&nu.lower_point());
    let hi = lambda_of_nu_point(&nu.upper_point());
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone())?)
}

pub fn da_drho(rho: &Interval) -> Result<Interval, LegendreError> {
    let one = Interval::from_int(1, rho.precision());
    let den = (&one + &rho.sqr()).sqr();
    Ok(rho.scale(-4).div(&den)?)
}

/// Completes `(a or ρ, ν or λ)` to all four coordinates.
pub fn coord_maps(cap: CapCoord, spectral: SpectralCoord) -> Result<CoordMapResult, LegendreError> {
    let (a, rho) = match cap {
        CapCoord::Height(a) => {
            let rho = rho_of_a(&a)?;
            (a, rho)
        }
        CapCoord::Radius(rho) => {
            let a = a_of_rho(&rho)?;
            (a, rho)
        }
    };
    let (nu, lambda) = match spectral {
        SpectralCoord::Degree(nu) => {
            let lambda = lambda_of_nu(&nu)?;
            (nu, lambda)
        }
        SpectralCoord::Eigenvalue(lambda) => {
            let nu = nu_of_lambda(&lambda)?;
            (nu, lambda)
        }
    };
    let da_drho = da_drho(&rho)?;
    Ok(CoordMapResult {
        a,
        rho,
        nu,
        lambda,
        da_drho,
    })
}

/// Branch slopes at a crossing of a zonal Neumann and a mode-ℓ Dirichlet eigenvalue.
#[derive(Debug, Clone)]
pub struct EigSlopes {
    /// `dμ/da` of the zonal Neumann branch; `None` if `∂Q/∂ρ` at `ℓ = 0` may vanish.
    pub mu_prime: Option<Interval>,
    /// `dλ/da` of the Dirichlet branch; `None` if `Q` at mode `ℓ` may vanish.
    pub lam_prime: Option<Interval>,
    /// `4λ/(1+ρ²)² P₀ Q_ℓ + P′_ℓ Q′₀`; nonzero iff the slopes differ.
    pub transversality_expr: Interval,
}

/// Slopes of the crossing branches from the implicit function theorem.
///
/// On the Neumann branch `P′₀ = 0`, so the ODE reduces `P″₀` to `−4λP₀/(1+ρ²)²`.
pub fn eig_slopes(
    zonal: &LegendreEval,
    mode: &LegendreEval,
    coords: &CoordMapResult,
) -> Result<EigSlopes, LegendreError> {
    let prec = coords.rho.precision();
    let one = Interval::from_int(1, prec);
    let weight = coords
        .lambda
        .scale(4)
        .div(&(&one + &coords.rho.sqr()).sqr())?;
    let inv_da = coords.da_drho.recip()?;

    let mu_prime = if zonal.dq.sign().is_strict() {
        Some(&(&inv_da * &weight) * &zonal.p.div(&zonal.dq)?)
    } else {
        None
    };
    let lam_prime = if mode.q.sign().is_strict() {
        Some(-(&inv_da * &mode.dp.div(&mode.q)?))
    } else {
        None
    };
    let transversality_expr = &(&weight * &zonal.p) * &mode.q + &mode.dp * &zonal.dq;
    Ok(EigSlopes {
        mu_prime,
        lam_prime,
        transversality_expr,
    })
}

/// Sign of one target over a box, or the evaluator error.
pub fn target_sign(query: &LegendreQuery, target: Target) -> Result<(Sign, Interval), LegendreError> {
    let ev = eval_all(query)?;
    let v = ev.get(target).clone();
    Ok((v.sign(), v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    fn pt(s: &str) -> Interval {
        Interval::point_decimal(s, p()).unwrap()
    }

    fn f(x: &Interval) -> f64 {
        x.mid_f64()
    }

    #[test]
    fn initial_coefficients() {
        let c = taylor_coeffs(0, &pt("2"), 3).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c[0].k, 1);
        let vals: Vec<(f64, f64)> = c.iter().map(|c| (f(&c.p), f(&c.q))).collect();
        assert_eq!(vals[0], (-2.0, -1.0));
        assert_eq!(vals[1], (8.0, 6.0));
        // one hand step of each recurrence
        assert_eq!(vals[2], (-18.0, -16.0));
        for pair in &c[..3] {
            assert!(pair.p.is_point() && pair.q.is_point());
        }
        // P̄ = 1 − 2ρ² + 2ρ⁴ − 2ρ⁶ + … for cos θ
        assert_eq!(vals[2].0 / 9.0, -2.0);
    }

    #[test]
    fn zero_lambda_kills_p() {
        let c = taylor_coeffs(8, &pt("0"), 12).unwrap();
        assert!(c.iter().all(|c| c.p.is_point() && c.p.lo().is_zero()));
        assert_eq!(f(&c[0].q), -1.0);
    }

    #[test]
    fn order_and_sign_preconditions() {
        assert_eq!(
            taylor_coeffs(0, &pt("2"), 1).unwrap_err(),
            LegendreError::OrderTooSmall(1)
        );
        assert_eq!(
            taylor_coeffs(0, &pt("-1"), 4).unwrap_err(),
            LegendreError::NegativeLambda
        );
    }

    #[test]
    fn tail_condition_examples() {
        let lam = Float::with_val(256, 155);
        assert!(check_tail_condition(8, &lam, TailRatio::THREE_HALVES, 100).is_ok());
        let err = check_tail_condition(8, &lam, TailRatio::THREE_HALVES, 5).unwrap_err();
        assert!(matches!(err, LegendreError::TailCondition { .. }));
    }

    #[test]
    fn zero_lambda_tail_has_no_p_part() {
        let lam = pt("0");
        let rho = pt("0.5");
        let c = taylor_coeffs(3, &lam, 20).unwrap();
        let t = tail_bounds(&c, &lam, &rho, TailRatio::THREE_HALVES, 20, 3).unwrap();
        assert!(t.radii.p.is_zero());
        assert!(t.radii.dp.is_zero());
        assert!(t.radii.q > 0);
        // C comes from the q coefficients only
        let q_sum = &c[20].q + &c[19].q;
        assert!(t.c.hi() >= &q_sum.mag());
    }

    #[test]
    fn convergence_region_enforced() {
        let q = LegendreQuery::new(0, pt("2"), pt("0.9"));
        assert!(matches!(eval_all(&q), Err(LegendreError::Convergence { .. })));
        let q = LegendreQuery::new(0, pt("2"), Interval::from_decimal("-0.1", "0.2", p()).unwrap());
        assert_eq!(eval_all(&q).unwrap_err(), LegendreError::NegativeRho);
        let q = LegendreQuery::new(0, Interval::from_decimal("0", "1", p()).unwrap(), pt("0.5"));
        assert_eq!(eval_all(&q).unwrap_err(), LegendreError::LambdaTouchesZero);
    }

    #[test]
    fn closed_forms_at_nu_one() {
        let ev = eval_all(&LegendreQuery::new(0, pt("2"), pt("0.5"))).unwrap();
        assert!(ev.p.contains(&pt("0.6")));
        assert!(ev.p.width_f64() < 1e-55, "{}", ev.p.width_f64());
        let ev = eval_all(&LegendreQuery::new(1, pt("2"), pt("0.5"))).unwrap();
        assert!(ev.p.contains(&pt("0.4")));
        // d/dρ of ρ/(1+ρ²) = (1−ρ²)/(1+ρ²)² = 0.48
        assert!(ev.dp.contains(&pt("0.48")));
    }

    #[test]
    fn truncation_orders_overlap() {
        let lam = pt("154.19");
        let rho = pt("0.59");
        let a = eval_all(&LegendreQuery::new(8, lam.clone(), rho.clone()).with_order(50)).unwrap();
        let b = eval_all(&LegendreQuery::new(8, lam, rho)).unwrap();
        for t in [Target::P, Target::DP, Target::Q, Target::DQ] {
            assert!(a.get(t).overlaps(b.get(t)), "{t} disjoint");
        }
    }

    #[test]
    fn coordinate_examples() {
        let r = coord_maps(CapCoord::Height(pt("0")), SpectralCoord::Eigenvalue(pt("2"))).unwrap();
        assert!(r.rho.contains_f64(1.0) && r.rho.is_point());
        assert!(r.nu.contains_f64(1.0));
        let rho = Interval::from_decimal("0.594723480694931", "0.594723480694970", p()).unwrap();
        let lam = Interval::from_decimal("154.191574494505", "154.191574494520", p()).unwrap();
        let r = coord_maps(CapCoord::Radius(rho), SpectralCoord::Eigenvalue(lam)).unwrap();
        let a_box = Interval::from_decimal("0.47743656824152", "0.47743656824159", p()).unwrap();
        let nu_box = Interval::from_decimal("11.9274524539225", "11.9274524539232", p()).unwrap();
        assert!(a_box.contains(&r.a), "a = {}", r.a);
        assert!(nu_box.contains(&r.nu), "nu = {}", r.nu);
        assert!(r.da_drho.sign() == Sign::Negative);
        assert_eq!(
            rho_of_a(&pt("-1")).unwrap_err(),
            LegendreError::CapHeight
        );
    }

    #[test]
    fn slopes_with_zero_numerator() {
        let rho = pt("0.5");
        let lam = pt("2");
        let coords = coord_maps(CapCoord::Radius(rho.clone()), SpectralCoord::Eigenvalue(lam.clone())).unwrap();
        let mut zonal = eval_all(&LegendreQuery::new(0, lam.clone(), rho.clone())).unwrap();
        zonal.p = pt("0");
        let mode = eval_all(&LegendreQuery::new(8, lam, rho)).unwrap();
        let s = eig_slopes(&zonal, &mode, &coords).unwrap();
        let mu = s.mu_prime.expect("dQ nonzero");
        assert!(mu.is_point() && mu.lo().is_zero());
        assert!(s.lam_prime.is_some());
    }

    #[test]
    fn tail_ratio_parsing() {
        assert_eq!("3/2".parse::<TailRatio>().unwrap(), TailRatio::THREE_HALVES);
        assert_eq!("2".parse::<TailRatio>().unwrap(), TailRatio { num: 2, den: 1 });
        assert!("1/1".parse::<TailRatio>().is_err());
        assert!("2/3".parse::<TailRatio>().is_err());
    }
}
