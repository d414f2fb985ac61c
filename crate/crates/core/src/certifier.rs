//! Box sign checks, zero exclusion, and the crossing certificate.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{DecimalInterval, Interval, IntervalError, Precision, Sign};
use crate::spectrum::{
    a_of_rho, linear_grid, scan_eigenvalues, search_crossings, Bc, Crossing, Geometry, SpectrumError, SERIES_MIN_A,
};
use crate::legendre::{
    coord_maps, eig_slopes, eval_all, CapCoord, LegendreError, LegendreEval, LegendreQuery, SpectralCoord,
    TailRatio, Target, DEFAULT_ORDER,
};

pub const SCHEMA: &str = "cert-v1";
pub const DEFAULT_MAX_DEPTH: u32 = 40;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Sub-boxes a single sign check may evaluate before giving up.
pub const BOX_BUDGET: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertError {
    #[error(transparent)]
    Legendre(#[from] LegendreError),
    #[error("prerequisite {id} is {status}")]
    Prerequisite { id: String, status: Status },
    #[error("record {0} carries no sign claim")]
    MissingClaim(String),
    #[error("inconsistent inputs: {0}")]
    Contradiction(String),
    #[error("edge signs do not alternate: {0}")]
    Alternation(String),
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

impl From<IntervalError> for CertError {
    fn from(e: IntervalError) -> Self {
        CertError::Legendre(e.into())
    }
}

/// Evaluator settings shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub order: usize,
    pub gamma: TailRatio,
    pub precision: Precision,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            order: DEFAULT_ORDER,
            gamma: TailRatio::default(),
            precision: Precision::default(),
        }
    }
}

impl EvalConfig {
    pub fn eval(&self, ell: u32, bx: &ParamBox) -> Result<LegendreEval, LegendreError> {
        let q = LegendreQuery::new(ell, bx.lambda.clone(), bx.rho.clone())
            .with_order(self.order)
            .with_gamma(self.gamma);
        eval_all(&q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Rho,
    Lambda,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Rho => Axis::Lambda,
            Axis::Lambda => Axis::Rho,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Lo,
    Hi,
}

/// A rectangle `ρ × λ` in parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    pub rho: Interval,
    pub lambda: Interval,
}

impl ParamBox {
    pub fn new(rho: Interval, lambda: Interval) -> Self {
        ParamBox { rho, lambda }
    }

    pub fn from_decimals(rho: (&str, &str), lambda: (&str, &str), prec: Precision) -> Result<Self, IntervalError> {
        Ok(ParamBox {
            rho: Interval::from_decimal(rho.0, rho.1, prec)?,
            lambda: Interval::from_decimal(lambda.0, lambda.1, prec)?,
        })
    }

    pub fn get(&self, axis: Axis) -> &Interval {
        match axis {
            Axis::Rho => &self.rho,
            Axis::Lambda => &self.lambda,
        }
    }

    fn with(&self, axis: Axis, v: Interval) -> ParamBox {
        let mut b = self.clone();
        match axis {
            Axis::Rho => b.rho = v,
            Axis::Lambda => b.lambda = v,
        }
        b
    }

    /// The face where `axis` is pinned to one endpoint.
    pub fn face(&self, axis: Axis, side: Side) -> ParamBox {
        let iv = self.get(axis);
        let p = match side {
            Side::Lo => iv.lower_point(),
            Side::Hi => iv.upper_point(),
        };
        self.with(axis, p)
    }

    pub fn corner(&self, rho: Side, lambda: Side) -> ParamBox {
        self.face(Axis::Rho, rho).face(Axis::Lambda, lambda)
    }

    pub fn contains(&self, other: &ParamBox) -> bool {
        self.rho.contains(&other.rho) && self.lambda.contains(&other.lambda)
    }

    fn rel_width(iv: &Interval) -> f64 {
        if iv.is_point() {
            return 0.0;
        }
        let m = iv.mid_f64().abs();
        let w = iv.width_f64();
        if m > 0.0 {
            w / m
        } else {
            w
        }
    }

    /// Bisects the coordinate with larger relative width.
    pub fn bisect(&self) -> Option<(ParamBox, ParamBox)> {
        let (wr, wl) = (Self::rel_width(&self.rho), Self::rel_width(&self.lambda));
        let axis = if wr == 0.0 && wl == 0.0 {
            return None;
        } else if wr >= wl {
            Axis::Rho
        } else {
            Axis::Lambda
        };
        let (a, b) = self.get(axis).bisect().ok()?;
        Some((self.with(axis, a), self.with(axis, b)))
    }

    pub fn to_decimal(&self) -> (DecimalInterval, DecimalInterval) {
        ((&self.rho).into(), (&self.lambda).into())
    }
}

impl fmt::Display for ParamBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ρ ∈ {}, λ ∈ {}", self.rho, self.lambda)
    }
}

/// A function of `(ρ, λ)` that can be enclosed over a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BoxFunction {
    Legendre { ell: u32, target: Target },
    /// `∂²P/∂ρ²`, recovered from the Legendre equation.
    SecondDerivative { ell: u32 },
    /// `4λ/(1+ρ²)² P₀ Q_ℓ + P′_ℓ Q′₀`.
    Transversality { ell: u32 },
}

impl BoxFunction {
    pub fn legendre(ell: u32, target: Target) -> Self {
        BoxFunction::Legendre { ell, target }
    }

    pub fn eval(&self, bx: &ParamBox, cfg: &EvalConfig) -> Result<Interval, LegendreError> {
        match *self {
            BoxFunction::Legendre { ell, target } => {
                let ev = cfg.eval(ell, bx)?;
                let natural = ev.get(target).clone();
                let grad = match target {
                    Target::P => Some((ev.dp.clone(), ev.q.clone())),
                    Target::DP => Some((second_derivative(ell, bx, &ev)?, ev.dq.clone())),
                    _ => None,
                };
                match grad {
                    Some((gr, gl)) if !bx.is_point() => {
                        // mean-value form around the midpoint
                        let m = bx.mid_point_box();
                        let fm = cfg.eval(ell, &m)?.get(target).clone();
                        let centered = &(&fm + &(&gr * &(&bx.rho - &m.rho))) + &(&gl * &(&bx.lambda - &m.lambda));
                        Ok(natural.intersect(&centered).unwrap_or(natural))
                    }
                    _ => Ok(natural),
                }
            }
            BoxFunction::SecondDerivative { ell } => {
                let ev = cfg.eval(ell, bx)?;
                second_derivative(ell, bx, &ev)
            }
            BoxFunction::Transversality { ell } => {
                let zonal = cfg.eval(0, bx)?;
                let mode = cfg.eval(ell, bx)?;
                let coords = coord_maps(
                    CapCoord::Radius(bx.rho.clone()),
                    SpectralCoord::Eigenvalue(bx.lambda.clone()),
                )?;
                Ok(eig_slopes(&zonal, &mode, &coords)?.transversality_expr)
            }
        }
    }

    /// The partial derivative along `axis`, when it is available as a box function.
    pub fn derivative(&self, axis: Axis) -> Option<BoxFunction> {
        match (*self, axis) {
            (BoxFunction::Legendre { ell, target }, _) => Some(match (target, axis) {
                (Target::P, Axis::Rho) => BoxFunction::legendre(ell, Target::DP),
                (Target::P, Axis::Lambda) => BoxFunction::legendre(ell, Target::Q),
                (Target::DP, Axis::Rho) => BoxFunction::SecondDerivative { ell },
                (Target::DP, Axis::Lambda) | (Target::Q, Axis::Rho) => BoxFunction::legendre(ell, Target::DQ),
                _ => return None,
            }),
            _ => None,
        }
    }
}

impl fmt::Display for BoxFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoxFunction::Legendre { ell, target } => write!(f, "{target}[ell={ell}]"),
            BoxFunction::SecondDerivative { ell } => write!(f, "ddP[ell={ell}]"),
            BoxFunction::Transversality { ell } => write!(f, "transversality[ell={ell}]"),
        }
    }
}

/// `P″ = −P′/ρ + ℓ²P/ρ² − 4λP/(1+ρ²)²`, for `ρ > 0`.
pub fn second_derivative(ell: u32, bx: &ParamBox, ev: &LegendreEval) -> Result<Interval, LegendreError> {
    let prec = bx.rho.precision();
    let one = Interval::from_int(1, prec);
    let rho = &bx.rho;
    let mut out = -(ev.dp.div(rho)?);
    if ell > 0 {
        let l2 = (ell as i64) * (ell as i64);
        out = &out + &ev.p.scale(l2).div(&rho.sqr())?;
    }
    let w = bx.lambda.scale(4).div(&(&one + &rho.sqr()).sqr())?;
    Ok(&out - &(&w * &ev.p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Verified,
    Failed,
    Inconclusive,
}

impl Status {
    /// `Failed` dominates `Inconclusive`, which dominates `Verified`.
    pub fn worst(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Failed, _) | (_, Failed) => Failed,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Verified,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Verified => "Verified",
            Status::Failed => "Failed",
            Status::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Computed,
    Derived,
    Axiom,
}

/// The expected sign of a box check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expect {
    Positive,
    Negative,
    Nonzero,
}

impl Expect {
    fn accepts(self, s: Sign) -> bool {
        match self {
            Expect::Positive => s == Sign::Positive,
            Expect::Negative => s == Sign::Negative,
            Expect::Nonzero => s.is_strict(),
        }
    }
}

impl From<Sign> for Expect {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => Expect::Positive,
            Sign::Negative => Expect::Negative,
            Sign::ContainsZero => Expect::Nonzero,
        }
    }
}

/// A verified strict sign of a function over a region.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignClaim {
    pub function: BoxFunction,
    pub sign: Sign,
    pub rho: DecimalInterval,
    pub lambda: DecimalInterval,
    #[serde(skip)]
    pub region: Option<ParamBox>,
}

impl SignClaim {
    pub fn new(function: BoxFunction, sign: Sign, region: ParamBox) -> Self {
        let (rho, lambda) = region.to_decimal();
        SignClaim {
            function,
            sign,
            rho,
            lambda,
            region: Some(region),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub reference: String,
    pub kind: CheckKind,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub claim: Option<SignClaim>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub enclosure: Option<DecimalInterval>,
    pub subdivisions: u64,
    pub wall_time_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl CheckRecord {
    fn new(id: &str, reference: &str, kind: CheckKind, status: Status) -> Self {
        CheckRecord {
            id: id.to_string(),
            reference: reference.to_string(),
            kind,
            status,
            claim: None,
            enclosure: None,
            subdivisions: 0,
            wall_time_ms: 0,
            detail: None,
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    fn require(&self) -> Result<&SignClaim, CertError> {
        if !self.is_verified() {
            return Err(CertError::Prerequisite {
                id: self.id.clone(),
                status: self.status,
            });
        }
        let c = self.claim.as_ref().ok_or_else(|| CertError::MissingClaim(self.id.clone()))?;
        if !c.sign.is_strict() || c.region.is_none() {
            return Err(CertError::MissingClaim(self.id.clone()));
        }
        Ok(c)
    }

    pub fn with_id(mut self, id: &str, reference: &str) -> Self {
        self.id = id.to_string();
        self.reference = reference.to_string();
        self
    }

    /// Record standing in for a derivation that could not run.
    pub fn withheld(id: &str, reference: &str, err: &CertError) -> Self {
        let status = match err {
            CertError::Prerequisite { status, .. } => *status,
            _ => Status::Failed,
        };
        let mut r = CheckRecord::new(id, reference, CheckKind::Derived, status);
        r.detail = Some(err.to_string());
        r
    }
}

/// A cited fact recorded without computation.
pub fn axiom(id: &str, statement: &str) -> CheckRecord {
    CheckRecord::new(id, statement, CheckKind::Axiom, Status::Verified)
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

/// Adaptive sign check of `function` on `bx`.
///
/// Depth-first: the first sub-box that is strictly of the wrong sign fails the
/// check, and the first one that still straddles zero at `max_depth` (or
/// cannot be split) makes it inconclusive.
pub fn verify_function_sign(
    id: &str,
    function: BoxFunction,
    bx: &ParamBox,
    expected: Expect,
    max_depth: u32,
    cfg: &EvalConfig,
) -> Result<CheckRecord, LegendreError> {
    let t0 = Instant::now();
    let mut rec = CheckRecord::new(id, &format!("{function} {expected:?} on box"), CheckKind::Computed, Status::Verified);
    let mut stack = vec![(bx.clone(), 0u32)];
    let mut hull: Option<Interval> = None;
    let mut seen: Option<Sign> = None;
    let mut status = Status::Verified;
    let mut evaluated = 0u64;
    while let Some((b, depth)) = stack.pop() {
        if evaluated == BOX_BUDGET {
            status = Status::Inconclusive;
            rec.detail = Some(format!("gave up after {BOX_BUDGET} sub-boxes"));
            break;
        }
        evaluated += 1;
        let v = function.eval(&b, cfg)?;
        hull = Some(match hull {
            Some(h) => h.hull(&v),
            None => v.clone(),
        });
        let s = v.sign();
        if s.is_strict() {
            if !expected.accepts(s) || seen.is_some_and(|o| o != s) {
                status = Status::Failed;
                rec.detail = Some(format!("sign {s} on sub-box {b}"));
                break;
            }
            seen = Some(s);
            continue;
        }
        match (depth < max_depth).then(|| b.bisect()).flatten() {
            Some((l, r)) => {
                rec.subdivisions += 1;
                stack.push((r, depth + 1));
                stack.push((l, depth + 1));
            }
            None => {
                status = Status::Inconclusive;
                rec.detail = Some(format!("enclosure {v} contains 0 at depth {depth}"));
                break;
            }
        }
    }
    rec.status = status;
    rec.enclosure = hull.as_ref().map(DecimalInterval::from);
    if status == Status::Verified {
        rec.claim = Some(SignClaim::new(function, seen.expect("at least one leaf"), bx.clone()));
    }
    rec.wall_time_ms = elapsed_ms(t0);
    Ok(rec)
}

/// Sign check of one Legendre target over a box.
pub fn verify_sign_on_box(
    ell: u32,
    bx: &ParamBox,
    target: Target,
    expected: Sign,
    max_depth: u32,
    cfg: &EvalConfig,
) -> Result<CheckRecord, LegendreError> {
    let id = format!("sign.{target}.ell{ell}");
    verify_function_sign(&id, BoxFunction::legendre(ell, target), bx, expected.into(), max_depth, cfg)
}

/// A strict sign of `function` on the face of `region` where `fixed` is pinned to `side`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSign {
    pub function: BoxFunction,
    pub fixed: Axis,
    pub side: Side,
    pub sign: Sign,
    pub region: ParamBox,
}

fn endpoint_side(iv: &Interval, point: &Interval) -> Option<Side> {
    if !point.is_point() {
        return None;
    }
    if point.lo() == iv.lo() {
        Some(Side::Lo)
    } else if point.lo() == iv.hi() {
        Some(Side::Hi)
    } else {
        None
    }
}

/// Spreads corner signs along two opposite edges using a strict derivative sign.
///
/// A corner at the low end of the edge keeps its sign when the derivative has
/// the same sign; a corner at the high end keeps it when the signs differ.
pub fn edge_signs_from_corners(
    id: &str,
    corners: [&CheckRecord; 2],
    monotone: &CheckRecord,
) -> Result<(CheckRecord, Vec<EdgeSign>), CertError> {
    let m = monotone.require()?;
    let region = m.region.clone().expect("checked");
    let mut edges = Vec::with_capacity(2);
    for c in corners {
        let claim = c.require()?;
        let pt = claim.region.as_ref().expect("checked");
        if !region.contains(pt) {
            return Err(CertError::Contradiction(format!("{} lies outside the monotonicity box", c.id)));
        }
        let along = [Axis::Rho, Axis::Lambda]
            .into_iter()
            .find(|&ax| claim.function.derivative(ax) == Some(m.function))
            .ok_or_else(|| {
                CertError::Contradiction(format!("{} is not a derivative of {}", m.function, claim.function))
            })?;
        let fixed = along.other();
        let fixed_side = endpoint_side(region.get(fixed), pt.get(fixed))
            .ok_or_else(|| CertError::Contradiction(format!("{} is not on a box face", c.id)))?;
        let end = endpoint_side(region.get(along), pt.get(along))
            .ok_or_else(|| CertError::Contradiction(format!("{} is not a box corner", c.id)))?;
        let keeps = match end {
            Side::Lo => claim.sign == m.sign,
            Side::Hi => claim.sign == m.sign.flip(),
        };
        if !keeps {
            return Err(CertError::Contradiction(format!(
                "corner {} has sign {} but {} is {} along the edge",
                c.id, claim.sign, m.function, m.sign
            )));
        }
        edges.push(EdgeSign {
            function: claim.function,
            fixed,
            side: fixed_side,
            sign: claim.sign,
            region: region.clone(),
        });
    }
    let mut rec = CheckRecord::new(
        id,
        "corner sign plus strict monotonicity along the edge",
        CheckKind::Derived,
        Status::Verified,
    );
    rec.detail = Some(
        edges
            .iter()
            .map(|e| format!("{} {} on {:?}={:?} face", e.function, e.sign, e.fixed, e.side))
            .collect::<Vec<_>>()
            .join("; "),
    );
    Ok((rec, edges))
}

/// Two-dimensional Poincaré–Miranda test on four edge signs.
pub fn verify_poincare_miranda(id: &str, edges: &[EdgeSign]) -> Result<(CheckRecord, ParamBox), CertError> {
    if edges.len() != 4 {
        return Err(CertError::Alternation(format!("expected 4 edges, got {}", edges.len())));
    }
    let region = &edges[0].region;
    if edges.iter().any(|e| &e.region != region) {
        return Err(CertError::Alternation("edges refer to different boxes".into()));
    }
    let f1 = edges[0].function;
    let (e1, e2): (Vec<&EdgeSign>, Vec<&EdgeSign>) = edges.iter().partition(|e| e.function == f1);
    if e1.len() != 2 || e2.len() != 2 || e2[0].function != e2[1].function {
        return Err(CertError::Alternation("need two edges for each of two functions".into()));
    }
    let alternates = |pair: &[&EdgeSign]| -> Option<Axis> {
        let (a, b) = (pair[0], pair[1]);
        let ok = a.fixed == b.fixed
            && a.side != b.side
            && a.sign.is_strict()
            && b.sign.is_strict()
            && a.sign == b.sign.flip();
        ok.then_some(a.fixed)
    };
    let ax1 = alternates(&e1).ok_or_else(|| CertError::Alternation(format!("{f1} keeps its sign")))?;
    let ax2 = alternates(&e2).ok_or_else(|| CertError::Alternation(format!("{} keeps its sign", e2[0].function)))?;
    if ax1 == ax2 {
        return Err(CertError::Alternation("both functions alternate across the same axis".into()));
    }
    let mut rec = CheckRecord::new(
        id,
        "common zero of both functions inside the box (Poincaré–Miranda)",
        CheckKind::Derived,
        Status::Verified,
    );
    rec.detail = Some(format!("{f1} alternates across {ax1:?}, {} across {ax2:?}", e2[0].function));
    Ok((rec, region.clone()))
}

fn half_width_up(v: &Interval) -> Interval {
    let p = v.prec();
    let w = v.width();
    let mut h = Float::with_val_round(p, &w / 2u32, Round::Up).0;
    h.next_up();
    let neg = Float::with_val(p, -&h);
    Interval::new(neg, h).expect("ordered")
}

/// Mean-value enclosure `P(λ_m) + [−r, r]·Q(λ^V)` over one λ sub-interval.
fn mean_value_sign(ell: u32, lam: &Interval, rho: &Interval, cfg: &EvalConfig) -> Result<Sign, LegendreError> {
    let alpha = cfg.eval(ell, &ParamBox::new(rho.clone(), lam.mid_point()))?.p;
    if lam.is_point() {
        return Ok(alpha.sign());
    }
    let beta = cfg.eval(ell, &ParamBox::new(rho.clone(), lam.clone()))?.q;
    Ok((&alpha + &(&half_width_up(lam) * &beta)).sign())
}

/// Branch-and-bound proof that `P_ℓ` has no zero on `lambda_range × rho_box`.
///
/// Sub-intervals are processed level by level in parallel; the partition is
/// independent of scheduling.
pub fn exclude_zeros_branch_bound(
    ell: u32,
    lambda_range: &Interval,
    rho_box: &Interval,
    tolerance: f64,
    cfg: &EvalConfig,
) -> Result<CheckRecord, LegendreError> {
    let t0 = Instant::now();
    let function = BoxFunction::legendre(ell, Target::P);
    let mut rec = CheckRecord::new(
        &format!("exclusion.ell{ell}"),
        "no zero of P in λ by mean-value branch and bound",
        CheckKind::Computed,
        Status::Verified,
    );
    let mut level = vec![lambda_range.clone()];
    let mut seen: Option<Sign> = None;
    let mut leaves = 0u64;
    'outer: while !level.is_empty() {
        let signs = level
            .par_iter()
            .map(|v| mean_value_sign(ell, v, rho_box, cfg))
            .collect::<Result<Vec<_>, _>>()?;
        let mut next = Vec::new();
        for (v, s) in level.iter().zip(signs) {
            if s.is_strict() {
                leaves += 1;
                if seen.is_some_and(|o| o != s) {
                    rec.status = Status::Failed;
                    rec.detail = Some(format!("sign change near λ ∈ {v}"));
                    break 'outer;
                }
                seen = Some(s);
                continue;
            }
            if v.width_f64() <= tolerance || v.is_point() {
                rec.status = Status::Inconclusive;
                rec.detail = Some(format!("tolerance reached at λ ∈ {v}"));
                break 'outer;
            }
            let (l, r) = v.bisect().expect("positive width");
            rec.subdivisions += 1;
            next.push(l);
            next.push(r);
        }
        level = next;
    }
    if rec.status == Status::Verified {
        rec.claim = Some(SignClaim::new(
            function,
            seen.expect("nonempty partition"),
            ParamBox::new(rho_box.clone(), lambda_range.clone()),
        ));
        rec.detail = Some(format!("{leaves} sub-intervals"));
    }
    rec.wall_time_ms = elapsed_ms(t0);
    Ok(rec)
}

fn claim_region(c: &SignClaim) -> &ParamBox {
    c.region.as_ref().expect("validated claim")
}

/// The crossing eigenvalue is the lowest Dirichlet eigenvalue of its mode.
///
/// Needs: `P_ℓ` of one strict sign on `[λ₀, λ_aux]` with `λ₀ ≤ 2`, `Q_ℓ` of
/// one strict sign on `[λ_aux, λ^u]`, and the certified crossing box.
pub fn certify_n_star_zero(
    ell: u32,
    exclusion: &CheckRecord,
    monotone: &CheckRecord,
    miranda: &CheckRecord,
    crossing: &ParamBox,
    lowest: &CheckRecord,
) -> Result<CheckRecord, CertError> {
    for r in [miranda, lowest] {
        if !r.is_verified() {
            return Err(CertError::Prerequisite {
                id: r.id.clone(),
                status: r.status,
            });
        }
    }
    let ex = exclusion.require()?;
    let mo = monotone.require()?;
    if ex.function != BoxFunction::legendre(ell, Target::P) || mo.function != BoxFunction::legendre(ell, Target::Q) {
        return Err(CertError::Contradiction("unexpected functions in lowest-eigenvalue chain".into()));
    }
    let (er, mr) = (claim_region(ex), claim_region(mo));
    if er.lambda.lo() > &2 {
        return Err(CertError::Contradiction("exclusion range does not start at or below 2".into()));
    }
    if mr.lambda.lo() > er.lambda.hi() {
        return Err(CertError::Contradiction("gap between exclusion and monotone ranges".into()));
    }
    if mr.lambda.hi() < crossing.lambda.hi() {
        return Err(CertError::Contradiction("monotone range ends below the crossing box".into()));
    }
    if er.lambda.hi() >= crossing.lambda.lo() {
        return Err(CertError::Contradiction("exclusion range overlaps the crossing box".into()));
    }
    if !er.rho.contains(&crossing.rho) || !mr.rho.contains(&crossing.rho) {
        return Err(CertError::Contradiction("ρ ranges do not cover the crossing box".into()));
    }
    let mut rec = CheckRecord::new(
        "lowest.index",
        "crossing eigenvalue is the first Dirichlet eigenvalue of its mode",
        CheckKind::Derived,
        Status::Verified,
    );
    rec.detail = Some(format!(
        "P[ell={ell}] {} on [{}, λ_aux], Q[ell={ell}] {} up to the box: at most one zero above 2",
        ex.sign, ex.lambda.lo, mo.sign
    ));
    Ok(rec)
}

/// Lower bound on the zonal Neumann index of the crossing eigenvalue.
///
/// Each verified bracket with opposite signs of `P′₀` at its ends contains a
/// positive zonal Neumann eigenvalue below the crossing; the constant mode
/// adds one more.
pub fn certify_m_star_bound(brackets: &[(CheckRecord, CheckRecord)], crossing: &ParamBox) -> (CheckRecord, u32) {
    let f = BoxFunction::legendre(0, Target::DP);
    let mut count = 0u32;
    let mut notes = Vec::new();
    let mut prev_hi: Option<Float> = None;
    for (a, b) in brackets {
        let judged = (|| -> Result<(Float, Float), String> {
            let ca = a.require().map_err(|e| e.to_string())?;
            let cb = b.require().map_err(|e| e.to_string())?;
            if ca.function != f || cb.function != f {
                return Err("bracket is not a zonal Neumann sign pair".into());
            }
            let (ra, rb) = (claim_region(ca), claim_region(cb));
            if !ra.rho.contains(&crossing.rho) || !rb.rho.contains(&crossing.rho) {
                return Err("bracket ρ range misses the crossing box".into());
            }
            let (lo, hi) = (ra.lambda.hi().clone(), rb.lambda.lo().clone());
            if !(lo > 0) || lo >= hi || &hi >= crossing.lambda.lo() {
                return Err("bracket not inside (0, λ★)".into());
            }
            if ca.sign != cb.sign.flip() {
                return Err("equal signs at both ends".into());
            }
            Ok((ra.lambda.lo().clone(), hi))
        })();
        match judged {
            Ok((lo, hi)) => {
                if prev_hi.as_ref().is_some_and(|p| &lo <= p) {
                    notes.push(format!("{}: overlaps previous bracket", a.id));
                    continue;
                }
                prev_hi = Some(hi);
                count += 1;
            }
            Err(e) => notes.push(format!("{}: {e}", a.id)),
        }
    }
    let m = count + 1;
    let mut rec = CheckRecord::new(
        "brackets.index",
        "zonal Neumann index lower bound from sign brackets plus the constant mode",
        CheckKind::Derived,
        Status::Verified,
    );
    let mut detail = format!("{count} bracket(s) below the crossing, m★ ≥ {m}");
    if !notes.is_empty() {
        detail.push_str("; ignored: ");
        detail.push_str(&notes.join("; "));
    }
    rec.detail = Some(detail);
    (rec, m)
}

/// Distinct branch slopes at the crossing.
pub fn certify_transversality(expr: &CheckRecord, q_mode: &CheckRecord, dq_zonal: &CheckRecord) -> CheckRecord {
    let status = [expr, q_mode, dq_zonal].iter().fold(Status::Verified, |s, r| s.worst(r.status));
    let mut rec = CheckRecord::new(
        "transversal",
        "slopes of the Neumann and Dirichlet branches differ at the crossing",
        CheckKind::Derived,
        status,
    );
    if status != Status::Verified {
        let bad: Vec<_> = [expr, q_mode, dq_zonal]
            .iter()
            .filter(|r| !r.is_verified())
            .map(|r| format!("{} {}", r.id, r.status))
            .collect();
        rec.detail = Some(bad.join("; "));
    }
    rec
}

/// Nonresonance from `P₀ ≠ 0` on the box plus the ordering axiom.
pub fn certify_nonresonance(nr: &CheckRecord, ordering: &CheckRecord) -> CheckRecord {
    let status = nr.status.worst(ordering.status);
    let mut rec = CheckRecord::new(
        "nonresonance",
        "no other Dirichlet eigenvalue of compatible symmetry equals the crossing value",
        CheckKind::Derived,
        status,
    );
    if status != Status::Verified {
        rec.detail = Some(format!("{} {}", nr.id, nr.status));
    }
    rec
}

/// How the two crossing functions are matched to the box faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// Dirichlet function alternates across the λ faces, Neumann across the ρ faces.
    DirichletAcrossLambda,
    DirichletAcrossRho,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lo: String,
    pub hi: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertConfig {
    pub profile: String,
    pub ell: u32,
    pub order: usize,
    pub gamma: TailRatio,
    pub precision_bits: u32,
    pub tolerance: f64,
    pub max_depth: u32,
    pub rho_box: DecimalInterval,
    pub lambda_box: DecimalInterval,
    pub lambda_aux: String,
    pub exclusion_start: String,
    pub brackets: Vec<Bracket>,
    pub pairing: Pairing,
    pub min_m_star: u32,
}

fn dec(lo: &str, hi: &str) -> DecimalInterval {
    DecimalInterval {
        lo: lo.to_string(),
        hi: hi.to_string(),
    }
}

impl CertConfig {
    /// The published mode-8 boxes.
    pub fn ell8() -> Self {
        CertConfig {
            profile: "ell8".into(),
            ell: 8,
            order: DEFAULT_ORDER,
            gamma: TailRatio::default(),
            precision_bits: Precision::default().bits(),
            tolerance: DEFAULT_TOLERANCE,
            max_depth: DEFAULT_MAX_DEPTH,
            rho_box: dec("0.594723480694931", "0.594723480694970"),
            lambda_box: dec("154.191574494505", "154.191574494520"),
            lambda_aux: "154.1914".into(),
            exclusion_start: "2".into(),
            brackets: [("12", "13"), ("42", "43"), ("89", "90")]
                .iter()
                .map(|(a, b)| Bracket {
                    lo: a.to_string(),
                    hi: b.to_string(),
                })
                .collect(),
            pairing: Pairing::DirichletAcrossLambda,
            min_m_star: 4,
        }
    }

    pub fn eval_config(&self) -> Result<EvalConfig, CertError> {
        Ok(EvalConfig {
            order: self.order,
            gamma: self.gamma,
            precision: Precision::new(self.precision_bits)?,
        })
    }

    /// The crossing box, rounded inward so that a zero found in it also lies in
    /// the decimal box.
    pub fn crossing_box(&self) -> Result<ParamBox, CertError> {
        let p = Precision::new(self.precision_bits)?;
        Ok(ParamBox::new(
            self.rho_box.to_interval_inward(p)?,
            self.lambda_box.to_interval_inward(p)?,
        ))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Conclusion {
    pub exists_crossing: bool,
    pub rho_star: Option<DecimalInterval>,
    pub a_star: Option<DecimalInterval>,
    pub nu_star: Option<DecimalInterval>,
    pub lambda_star: Option<DecimalInterval>,
    pub n_star_is_zero: bool,
    pub m_star_lower_bound: u32,
    pub transversal: bool,
    pub nonresonant: bool,
    pub mu_prime: Option<DecimalInterval>,
    pub lambda_prime: Option<DecimalInterval>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Fingerprint {
    pub package: String,
    pub version: String,
    pub arch: String,
    pub os: String,
    pub backend: String,
}

impl Fingerprint {
    pub fn current() -> Self {
        Fingerprint {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            arch: std::env::consts::ARCH.into(),
            os: std::env::consts::OS.into(),
            backend: "mpfr".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Certified,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub config: CertConfig,
    pub checks: Vec<CheckRecord>,
    pub conclusion: Conclusion,
    pub fingerprint: Fingerprint,
}

impl Certificate {
    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn outcome(&self) -> Outcome {
        let worst = self.checks.iter().fold(Status::Verified, |s, c| s.worst(c.status));
        match worst {
            Status::Failed => Outcome::Failed,
            Status::Inconclusive => Outcome::Inconclusive,
            Status::Verified => {
                let c = &self.conclusion;
                if c.exists_crossing
                    && c.n_star_is_zero
                    && c.transversal
                    && c.nonresonant
                    && c.m_star_lower_bound >= self.config.min_m_star
                {
                    Outcome::Certified
                } else {
                    Outcome::Failed
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// JSON with timing fields zeroed, for reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        for r in &mut c.checks {
            r.wall_time_ms = 0;
        }
        c.to_json()
    }
}

fn lift(id: &str, r: Result<CheckRecord, LegendreError>) -> CheckRecord {
    r.unwrap_or_else(|e| {
        let mut rec = CheckRecord::new(id, "evaluator precondition", CheckKind::Computed, Status::Failed);
        rec.detail = Some(e.to_string());
        rec
    })
}

struct Runner<'a> {
    cfg: &'a CertConfig,
    ev: EvalConfig,
    checks: Vec<CheckRecord>,
}

impl Runner<'_> {
    fn sign(&mut self, id: &str, reference: &str, f: BoxFunction, bx: &ParamBox, expect: Expect) -> CheckRecord {
        log::debug!("check {id}");
        let r = lift(id, verify_function_sign(id, f, bx, expect, self.cfg.max_depth, &self.ev));
        let r = CheckRecord { reference: reference.into(), ..r };
        self.checks.push(r.clone());
        r
    }

    fn push(&mut self, r: CheckRecord) -> CheckRecord {
        self.checks.push(r.clone());
        r
    }

    /// Corner checks and edge propagation for `f` on the faces pinned in `fixed`.
    fn edges(&mut self, tag: &str, f: BoxFunction, fixed: Axis, bx: &ParamBox) -> Option<Vec<EdgeSign>> {
        let along = fixed.other();
        let df = f.derivative(along).expect("pairing uses differentiable functions");
        let mono = self.sign(&format!("{tag}.monotone"), "strict sign of the edge derivative", df, bx, Expect::Nonzero);
        let sigma = mono
            .claim
            .as_ref()
            .map(|c| c.sign)
            .or_else(|| df.eval(&bx.mid_point_box(), &self.ev).ok().map(|v| v.sign()))
            .unwrap_or(Sign::ContainsZero);
        let mut corners = Vec::new();
        for side in [Side::Lo, Side::Hi] {
            let face = bx.face(fixed, side);
            let probe = face.with(along, face.get(along).mid_point());
            let s = f.eval(&probe, &self.ev).map(|v| v.sign()).unwrap_or(Sign::ContainsZero);
            let end = if s == sigma { Side::Lo } else { Side::Hi };
            let corner = face.face(along, end);
            let id = format!("{tag}.corner.{}-{}", axis_name(fixed), side_name(side));
            let r = self.sign(&id, "strict sign at a box corner", f, &corner, Expect::Nonzero);
            corners.push(r);
        }
        let strict: Vec<Sign> = corners.iter().filter_map(|c| c.claim.as_ref().map(|k| k.sign)).collect();
        if strict.len() == 2 && strict[0] == strict[1] {
            let mut rec = CheckRecord::new(
                &format!("{tag}.edges"),
                "edge sign propagation",
                CheckKind::Derived,
                Status::Failed,
            );
            rec.detail = Some(format!(
                "{f} is {} at both opposite corners, so the faces cannot carry opposite signs",
                strict[0]
            ));
            self.push(rec);
            return None;
        }
        match edge_signs_from_corners(&format!("{tag}.edges"), [&corners[0], &corners[1]], &mono) {
            Ok((rec, e)) => {
                self.push(rec);
                Some(e)
            }
            Err(e) => {
                self.push(CheckRecord::withheld(&format!("{tag}.edges"), "edge sign propagation", &e));
                None
            }
        }
    }
}

fn axis_name(a: Axis) -> &'static str {
    match a {
        Axis::Rho => "rho",
        Axis::Lambda => "lambda",
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Lo => "lo",
        Side::Hi => "hi",
    }
}

impl ParamBox {
    fn mid_point_box(&self) -> ParamBox {
        ParamBox::new(self.rho.mid_point(), self.lambda.mid_point())
    }

    fn is_point(&self) -> bool {
        self.rho.is_point() && self.lambda.is_point()
    }
}

/// Runs every check in dependency order and assembles the conclusion.
pub fn run_certificate(cfg: &CertConfig) -> Result<Certificate, CertError> {
    let ev = cfg.eval_config()?;
    let prec = ev.precision;
    let bx = cfg.crossing_box()?;
    let lambda_aux = Interval::point_decimal(&cfg.lambda_aux, prec)?;
    let start = Interval::point_decimal(&cfg.exclusion_start, prec)?;
    if !(lambda_aux.hi() < bx.lambda.lo()) || !(start.hi() < lambda_aux.lo()) {
        return Err(CertError::Config("need exclusion_start < lambda_aux < crossing box".into()));
    }
    let ell = cfg.ell;
    let mut run = Runner {
        cfg,
        ev,
        checks: Vec::new(),
    };

    // existence
    let dirichlet = BoxFunction::legendre(ell, Target::P);
    let neumann = BoxFunction::legendre(0, Target::DP);
    let (d_fixed, n_fixed) = match cfg.pairing {
        Pairing::DirichletAcrossLambda => (Axis::Lambda, Axis::Rho),
        Pairing::DirichletAcrossRho => (Axis::Rho, Axis::Lambda),
    };
    let e1 = run.edges("crossing.dirichlet", dirichlet, d_fixed, &bx);
    let e2 = run.edges("crossing.neumann", neumann, n_fixed, &bx);
    let miranda = match (e1, e2) {
        (Some(mut a), Some(b)) => {
            a.extend(b);
            match verify_poincare_miranda("crossing.miranda", &a) {
                Ok((r, _)) => r,
                Err(e) => CheckRecord::withheld("crossing.miranda", "Poincaré–Miranda", &e),
            }
        }
        _ => {
            let worst = run.checks.iter().fold(Status::Verified, |s, c| s.worst(c.status));
            let e = CertError::Prerequisite {
                id: "crossing edges".into(),
                status: worst,
            };
            CheckRecord::withheld("crossing.miranda", "Poincaré–Miranda", &e)
        }
    };
    let miranda = run.push(miranda);
    let exists = miranda.is_verified();

    // lowest Dirichlet eigenvalue of the mode
    let t0 = Instant::now();
    let excl_range = Interval::new(start.lo().clone(), lambda_aux.hi().clone())?;
    let mut excl = lift(
        "lowest.exclusion",
        exclude_zeros_branch_bound(ell, &excl_range, &bx.rho, cfg.tolerance, &ev),
    )
    .with_id("lowest.exclusion", "P of the mode has no zero between 2 and λ_aux");
    excl.wall_time_ms = elapsed_ms(t0);
    let excl = run.push(excl);
    let mono_box = ParamBox::new(bx.rho.clone(), Interval::new(lambda_aux.lo().clone(), bx.lambda.hi().clone())?);
    let mono = run.sign(
        "lowest.monotone",
        "Q of the mode has a strict sign between λ_aux and the box",
        BoxFunction::legendre(ell, Target::Q),
        &mono_box,
        Expect::Nonzero,
    );
    let hemi = run.push(axiom(
        "axiom.hemisphere",
        "the first Dirichlet eigenvalue of a hemisphere is 2 and caps inside it have larger ones",
    ));
    let n_star = match certify_n_star_zero(ell, &excl, &mono, &miranda, &bx, &hemi) {
        Ok(r) => r,
        Err(e) => CheckRecord::withheld("lowest.index", "first Dirichlet eigenvalue of the mode", &e),
    };
    let n_star = run.push(n_star);

    // zonal Neumann brackets
    let mut pairs = Vec::new();
    for (i, b) in cfg.brackets.iter().enumerate() {
        let mut pair = Vec::new();
        for (end, s) in [("lo", &b.lo), ("hi", &b.hi)] {
            let lam = Interval::point_decimal(s, prec)?;
            let r = run.sign(
                &format!("brackets.{i}.{end}"),
                "strict sign of P' of the zonal mode at a bracket end",
                neumann,
                &ParamBox::new(bx.rho.clone(), lam),
                Expect::Nonzero,
            );
            pair.push(r);
        }
        let hi = pair.pop().expect("two");
        let lo = pair.pop().expect("two");
        pairs.push((lo, hi));
    }
    let (m_rec, m_star) = certify_m_star_bound(&pairs, &bx);
    run.push(m_rec);

    // transversality
    let expr = run.sign(
        "transversal.expr",
        "transversality expression is nonzero on the box",
        BoxFunction::Transversality { ell },
        &bx,
        Expect::Nonzero,
    );
    let q_mode = run.sign(
        "transversal.q-mode",
        "Q of the mode is nonzero on the box",
        BoxFunction::legendre(ell, Target::Q),
        &bx,
        Expect::Nonzero,
    );
    let dq_zonal = run.sign(
        "transversal.dq-zonal",
        "dQ of the zonal mode is nonzero on the box",
        BoxFunction::legendre(0, Target::DQ),
        &bx,
        Expect::Nonzero,
    );
    let trans = run.push(certify_transversality(&expr, &q_mode, &dq_zonal));

    // nonresonance
    let nr = run.sign(
        "nonresonance.zonal",
        "P of the zonal mode is nonzero on the box",
        BoxFunction::legendre(0, Target::P),
        &bx,
        Expect::Nonzero,
    );
    let order = run.push(axiom(
        "axiom.ordering",
        "Dirichlet eigenvalues of a cap increase strictly with the index and with the angular mode",
    ));
    let nonres = run.push(certify_nonresonance(&nr, &order));

    let mut conclusion = Conclusion {
        exists_crossing: exists,
        rho_star: None,
        a_star: None,
        nu_star: None,
        lambda_star: None,
        n_star_is_zero: exists && n_star.is_verified(),
        m_star_lower_bound: if exists { m_star } else { 0 },
        transversal: exists && trans.is_verified(),
        nonresonant: exists && nonres.is_verified(),
        mu_prime: None,
        lambda_prime: None,
    };
    if exists {
        let coords = coord_maps(CapCoord::Radius(bx.rho.clone()), SpectralCoord::Eigenvalue(bx.lambda.clone()))?;
        conclusion.rho_star = Some((&coords.rho).into());
        conclusion.a_star = Some((&coords.a).into());
        conclusion.nu_star = Some((&coords.nu).into());
        conclusion.lambda_star = Some((&coords.lambda).into());
        if let (Ok(z), Ok(m)) = (ev.eval(0, &bx), ev.eval(ell, &bx)) {
            if let Ok(s) = eig_slopes(&z, &m, &coords) {
                conclusion.mu_prime = s.mu_prime.as_ref().map(DecimalInterval::from);
                conclusion.lambda_prime = s.lam_prime.as_ref().map(DecimalInterval::from);
            }
        }
    }
    Ok(Certificate {
        schema: SCHEMA.into(),
        config: cfg.clone(),
        checks: run.checks,
        conclusion,
        fingerprint: Fingerprint::current(),
    })
}

/// High-precision Newton refinement of a crossing `P_ℓ = 0 = P′₀`.
///
/// Uses midpoints of point enclosures, so the result is a good guess and not
/// itself rigorous.
pub fn refine_crossing(
    ell: u32,
    rho: f64,
    lambda: f64,
    cfg: &EvalConfig,
) -> Result<(Interval, Interval), CertError> {
    let prec = cfg.precision;
    let mut r = Interval::from_f64(rho, prec)?;
    let mut l = Interval::from_f64(lambda, prec)?;
    let target = Float::with_val(prec.bits(), 1) >> (prec.bits() as i32 - 16);
    for _ in 0..60 {
        let bx = ParamBox::new(r.clone(), l.clone());
        let d = cfg.eval(ell, &bx)?;
        let z = cfg.eval(0, &bx)?;
        let zz = second_derivative(0, &bx, &z)?;
        let (f1, f2) = (d.p.mid_point(), z.dp.mid_point());
        let (a, b) = (d.dp.mid_point(), d.q.mid_point());
        let (c, e) = (zz.mid_point(), z.dq.mid_point());
        let det = &(&a * &e) - &(&b * &c);
        let det = det.mid_point();
        let dr = (&(&e * &f1) - &(&b * &f2)).div(&det)?.mid_point();
        let dl = (&(&a * &f2) - &(&c * &f1)).div(&det)?.mid_point();
        r = (&r - &dr).mid_point();
        l = (&l - &dl).mid_point();
        if dr.mag() <= &target * r.mag() && dl.mag() <= &target * l.mag() {
            break;
        }
    }
    Ok((r, l))
}

/// A crossing box sized so that the face signs can be certified.
#[derive(Debug, Clone)]
pub struct DerivedBox {
    pub rho: DecimalInterval,
    pub lambda: DecimalInterval,
    pub pairing: Pairing,
    pub center: (f64, f64),
}

fn round_dec(x: &Float, digits: usize, round: Round) -> String {
    crate::interval::positional(&x.to_string_radix_round(10, Some(digits), round))
}

/// Box of relative ρ half-width `2^-45` around a refined crossing.
///
/// The λ half-width uses the geometric mean of the two slope ratios that
/// make each face-sign test robust to first order.
pub fn derive_box(ell: u32, rho: f64, lambda: f64, cfg: &EvalConfig) -> Result<DerivedBox, CertError> {
    let (r, l) = refine_crossing(ell, rho, lambda, cfg)?;
    let bx = ParamBox::new(r.clone(), l.clone());
    let (pairing, r1, r2) = select_pairing(ell, &bx, cfg)?;
    let hr = r.mid_f64() * 2f64.powi(-45);
    let hl = hr * (r1 * r2).sqrt();
    let p = cfg.precision.bits();
    let mk = |c: &Interval, h: f64| -> DecimalInterval {
        let lo = Float::with_val(p, c.lo() - h);
        let hi = Float::with_val(p, c.hi() + h);
        DecimalInterval {
            lo: round_dec(&lo, 22, Round::Down),
            hi: round_dec(&hi, 22, Round::Up),
        }
    };
    Ok(DerivedBox {
        rho: mk(&r, hr),
        lambda: mk(&l, hl),
        pairing,
        center: (r.mid_f64(), l.mid_f64()),
    })
}

/// Slope ratios `|∂ρP_ℓ / ∂λP_ℓ|` and `|∂ρP′₀ / ∂λP′₀|` at the box midpoint; the
/// Dirichlet function alternates across λ when its ratio is the smaller one.
pub fn select_pairing(ell: u32, bx: &ParamBox, cfg: &EvalConfig) -> Result<(Pairing, f64, f64), CertError> {
    let bx = bx.mid_point_box();
    let d = cfg.eval(ell, &bx)?;
    let z = cfg.eval(0, &bx)?;
    let zz = second_derivative(0, &bx, &z)?;
    let r1 = (d.dp.mid_f64() / d.q.mid_f64()).abs();
    let r2 = (zz.mid_f64() / z.dq.mid_f64()).abs();
    let pairing = if r1 < r2 {
        Pairing::DirichletAcrossLambda
    } else {
        Pairing::DirichletAcrossRho
    };
    Ok((pairing, r1, r2))
}

/// `floor(x·10⁴)/10⁴ − 10⁻⁴` as a decimal string.
pub fn aux_below(lambda_lo: f64) -> String {
    let v = (lambda_lo * 1e4).floor() - 1.0;
    format!("{:.4}", v / 1e4)
}

fn bracket_around(v: f64) -> Bracket {
    let lo = v.floor();
    let (lo, hi) = if v - lo > 0.1 && v - lo < 0.9 {
        (format!("{lo}"), format!("{}", lo + 1.0))
    } else {
        let c = v.round();
        (format!("{:.1}", c - 0.5), format!("{:.1}", c + 0.5))
    };
    Bracket { lo, hi }
}

/// Certificate inputs for a user-supplied box on `S²`.
///
/// Lower zonal Neumann eigenvalues at the box center become unit-width
/// brackets, `λ_aux` sits just below the box and the pairing follows
/// [`select_pairing`].
pub fn profile_for_box(
    name: &str,
    ell: u32,
    rho: DecimalInterval,
    lambda: DecimalInterval,
    base: &CertConfig,
) -> Result<CertConfig, CertError> {
    let ecfg = base.eval_config()?;
    let bx = ParamBox::new(rho.to_interval(ecfg.precision)?, lambda.to_interval(ecfg.precision)?);
    let (pairing, _, _) = select_pairing(ell, &bx, &ecfg)?;
    let (r, l) = (bx.rho.mid_f64(), bx.lambda.lo_f64());
    let below = scan_eigenvalues(a_of_rho(r), 0, Bc::Neumann, l - 1.0)?;
    let brackets: Vec<Bracket> = below.iter().filter(|&&v| v > 0.5).map(|&v| bracket_around(v)).collect();
    Ok(CertConfig {
        profile: name.into(),
        ell,
        rho_box: rho,
        lambda_box: lambda,
        lambda_aux: aux_below(l),
        min_m_star: brackets.len() as u32 + 1,
        brackets,
        pairing,
        ..base.clone()
    })
}

/// Certificate inputs around a crossing found by the float explorer.
pub fn profile_from_crossing(name: &str, crossing: &Crossing, base: &CertConfig) -> Result<CertConfig, CertError> {
    let rho = match (crossing.geometry, crossing.rho_star) {
        (Geometry::Sphere(2), Some(r)) => r,
        _ => return Err(CertError::Config("crossing must lie on s2 with a series-range ρ★".into())),
    };
    let derived = derive_box(crossing.ell, rho, crossing.lambda_star, &base.eval_config()?)?;
    profile_for_box(name, crossing.ell, derived.rho, derived.lambda, base)
}

/// Crossing of the `ℓ = 6` Dirichlet ground branch with a zonal Neumann branch
/// in the series range, located on a coarse grid and refined.
pub fn find_series_crossing(ell: u32) -> Result<Crossing, CertError> {
    let grid = linear_grid(0.25, 0.95, 71);
    let (found, _) = search_crossings(Geometry::S2, ell, &grid, 1, 6)?;
    found
        .into_iter()
        .filter(|c| c.rho_star.is_some() && c.a_star > SERIES_MIN_A && c.residual < 1e-10)
        .max_by(|x, y| x.a_star.total_cmp(&y.a_star))
        .ok_or_else(|| CertError::Config(format!("no crossing found for ell = {ell}")))
}

impl CertConfig {
    /// Profile for the mode-6 crossing, derived from a fresh search.
    pub fn ell6() -> Result<Self, CertError> {
        let c = find_series_crossing(6)?;
        let base = CertConfig {
            ell: 6,
            ..CertConfig::ell8()
        };
        profile_from_crossing("ell6", &c, &base)
    }
}
