//! Acceptance checks, one PASS/FAIL line each. Runs without the libtest harness.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use spherecap::certifier::{exclude_zeros_branch_bound, CertConfig, Certificate, Status};
use spherecap::interval::{Interval, Precision};
use spherecap::legendre::{eval_all, LegendreEval, LegendreQuery, TailRatio};
use spherecap::spectrum::{ode_spectrum, scan_eigenvalues, Bc, Geometry};

// published enclosures of the crossing
const A_STAR: (&str, &str) = ("0.47743656824152", "0.47743656824159");
const LAMBDA_STAR: (&str, &str) = ("154.19157449450", "154.19157449452");
// remark values for mode 6
const ELL6_A: f64 = 0.81084;
const ELL6_LAMBDA: f64 = 264.79;
const ELL6_A_TOL: f64 = 1e-3;
const ELL6_LAMBDA_TOL: f64 = 1e-1;
const CLOSED_FORM_WIDTH: f64 = 1e-60;
const TAIL_SAMPLES: usize = 1000;
const FUZZ_CASES: usize = 100_000;
const RICHARDSON_SAMPLES: usize = 100;
const RICHARDSON_RANGE: (f64, f64) = (80.0, 120.0);
const SPECTRUM_CASES: usize = 30;
const SPECTRUM_REL_TOL: f64 = 1e-8;
const NON_SWEEP_BUDGET_S: f64 = 60.0;
const SWEEP_BUDGET_S: f64 = 1800.0;

type Outcome = Result<String, String>;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spherecap"))
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
    secs: f64,
}

fn run(args: &[&str]) -> Run {
    let t = Instant::now();
    let out = bin().args(args).output().expect("spawn spherecap");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        secs: t.elapsed().as_secs_f64(),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prec() -> Precision {
    Precision::default()
}

fn pt(x: f64) -> Interval {
    Interval::from_f64(x, prec()).unwrap()
}

/// Exact comparison of nonnegative positional decimals.
fn cmp_decimal(x: &str, y: &str) -> std::cmp::Ordering {
    let split = |s: &str| {
        let (i, f) = s.split_once('.').unwrap_or((s, ""));
        (i.trim_start_matches('0').to_string(), f.trim_end_matches('0').to_string())
    };
    let ((xi, xf), (yi, yf)) = (split(x), split(y));
    xi.len().cmp(&yi.len()).then(xi.cmp(&yi)).then(xf.cmp(&yf))
}

/// Whether the decimal interval `inner` lies in the closed interval `outer`.
fn decimal_subset(inner: (&str, &str), outer: (&str, &str)) -> bool {
    cmp_decimal(outer.0, inner.0).is_le() && cmp_decimal(inner.1, outer.1).is_le()
}

fn enclosure(v: &Option<spherecap::interval::DecimalInterval>) -> Result<Interval, String> {
    let v = v.as_ref().ok_or("missing enclosure")?;
    Interval::from_decimal(&v.lo, &v.hi, prec()).map_err(|e| e.to_string())
}

fn certify(dir: &Path, name: &str, extra: &[&str]) -> Result<(Run, Option<Certificate>), String> {
    let path = dir.join(name);
    let path_s = path.to_str().unwrap();
    let mut args = vec!["certify", "-o", path_s];
    args.extend_from_slice(extra);
    let r = run(&args);
    let cert = std::fs::read_to_string(&path)
        .ok()
        .and_then(|s| serde_json::from_str::<Certificate>(&s).ok());
    Ok((r, cert))
}

fn full_certificate(cert: &Option<Certificate>, r: &Run) -> Outcome {
    ensure(r.code == 0, || format!("exit {} ({})", r.code, r.stderr.trim()))?;
    let cert = cert.as_ref().ok_or("no certificate")?;
    let bad: Vec<_> = cert.checks.iter().filter(|c| c.status != Status::Verified).map(|c| &c.id).collect();
    ensure(bad.is_empty(), || format!("unverified checks {bad:?}"))?;
    let c = &cert.conclusion;
    ensure(
        c.exists_crossing && c.n_star_is_zero && c.m_star_lower_bound >= 4 && c.transversal && c.nonresonant,
        || format!("conclusion {c:?}"),
    )?;
    for (name, v, bounds) in [("a★", &c.a_star, A_STAR), ("λ★", &c.lambda_star, LAMBDA_STAR)] {
        let v = v.as_ref().ok_or("missing enclosure")?;
        ensure(decimal_subset((&v.lo, &v.hi), bounds), || {
            format!("{name} [{}, {}] not in [{}, {}]", v.lo, v.hi, bounds.0, bounds.1)
        })?;
    }
    let (a, l) = (c.a_star.as_ref().unwrap(), c.lambda_star.as_ref().unwrap());
    let sweep: u64 = cert.checks.iter().filter(|c| c.id == "lowest.exclusion").map(|c| c.wall_time_ms).sum();
    let rest: u64 = cert.checks.iter().filter(|c| c.id != "lowest.exclusion").map(|c| c.wall_time_ms).sum();
    let (sweep, rest) = (sweep as f64 / 1e3, rest as f64 / 1e3);
    ensure(rest < NON_SWEEP_BUDGET_S, || format!("non-sweep checks took {rest:.1} s"))?;
    ensure(sweep < SWEEP_BUDGET_S, || format!("sweep took {sweep:.1} s"))?;
    Ok(format!(
        "a★ ∈ [{}, {}], λ★ ∈ [{}, {}], m★ ≥ {}, sweep {sweep:.1} s, rest {rest:.1} s, total {:.1} s",
        a.lo, a.hi, l.lo, l.hi, c.m_star_lower_bound, r.secs
    ))
}

fn edge_signs(cert: &Option<Certificate>) -> Outcome {
    let cert = cert.as_ref().ok_or("no certificate")?;
    ensure(cert.config.precision_bits == 256, || "not a 256-bit run".into())?;
    let ids = [
        "crossing.dirichlet.monotone",
        "crossing.dirichlet.corner.lambda-lo",
        "crossing.dirichlet.corner.lambda-hi",
        "crossing.neumann.monotone",
        "crossing.neumann.corner.rho-lo",
        "crossing.neumann.corner.rho-hi",
    ];
    for id in ids {
        let c = cert.check(id).ok_or_else(|| format!("missing {id}"))?;
        ensure(c.status == Status::Verified && c.subdivisions == 0, || {
            format!("{id}: {:?} after {} subdivisions", c.status, c.subdivisions)
        })?;
    }
    let pm = cert.check("crossing.miranda").ok_or("missing crossing.miranda")?;
    ensure(pm.status == Status::Verified, || "edge alternation not verified".into())?;
    Ok("6 sign checks verified with 0 subdivisions".into())
}

fn brackets(cert: &Option<Certificate>) -> Outcome {
    let cert = cert.as_ref().ok_or("no certificate")?;
    let c = &cert.conclusion;
    let a = enclosure(&c.a_star)?.mid_f64();
    let lam = enclosure(&c.lambda_star)?.mid_f64();
    let v = scan_eigenvalues(a, 0, Bc::Neumann, 154.2).map_err(|e| e.to_string())?;
    for (i, b) in cert.config.brackets.iter().enumerate() {
        let (lo, hi) = (b.lo.parse::<f64>().unwrap(), b.hi.parse::<f64>().unwrap());
        let inside: Vec<_> = v.iter().filter(|&&x| lo <= x && x <= hi).collect();
        ensure(inside.len() == 1, || format!("[{lo}, {hi}] holds {inside:?}"))?;
        for side in ["lo", "hi"] {
            let id = format!("brackets.{i}.{side}");
            let rec = cert.check(&id).ok_or_else(|| format!("missing {id}"))?;
            ensure(rec.status == Status::Verified, || format!("{id} not verified"))?;
        }
    }
    let positive_below = v.iter().filter(|&&x| x > 0.0 && x < 154.0).count();
    ensure(v.len() >= 4 && v[0] == 0.0, || format!("values {v:?}"))?;
    ensure(v.iter().any(|x| (x - lam).abs() < 1e-6 * lam), || format!("λ★ missing from {v:?}"))?;
    Ok(format!(
        "Neumann values below 154.2: {v:.6?} ({positive_below} positive below 154, the fourth nonzero one is λ★)"
    ))
}

fn ell6(dir: &Path) -> Outcome {
    let r = run(&["crossings", "--ell", "6"]);
    ensure(r.code == 0, || format!("crossings exit {}: {}", r.code, r.stderr.trim()))?;
    let found: Vec<Value> = serde_json::from_str(&r.stdout).map_err(|e| e.to_string())?;
    let hit = found
        .iter()
        .find(|c| {
            (c["a_star"].as_f64().unwrap() - ELL6_A).abs() < ELL6_A_TOL
                && (c["lambda_star"].as_f64().unwrap() - ELL6_LAMBDA).abs() < ELL6_LAMBDA_TOL
        })
        .ok_or_else(|| format!("no crossing near ({ELL6_A}, {ELL6_LAMBDA}) among {}", found.len()))?;
    let (cr, cert) = certify(dir, "ell6.json", &["--profile", "ell6"])?;
    ensure(cr.code == 0, || format!("ell6 certify exit {}", cr.code))?;
    let cert = cert.ok_or("no ell6 certificate")?;
    for rec in cert.checks.iter().filter(|c| c.id.starts_with("brackets") || c.id.starts_with("transversal")) {
        ensure(rec.status == Status::Verified, || format!("{} not verified", rec.id))?;
    }
    Ok(format!(
        "crossing at a = {:.6}, λ = {:.4}; ell6 certificate verified in {:.1} s",
        hit["a_star"].as_f64().unwrap(),
        hit["lambda_star"].as_f64().unwrap(),
        cr.secs
    ))
}

/// `d^ℓ/dx^ℓ P_n(x)` for `n ≤ 3`.
fn poly_deriv(n: u32, ell: u32, x: &Interval) -> Interval {
    let c = |k: i64| Interval::from_int(k, prec());
    let half = Interval::from_ratio(1, 2, prec()).unwrap();
    match (n, ell) {
        (_, l) if l > n => c(0),
        (1, 0) => x.clone(),
        (1, 1) => c(1),
        (2, 0) => &(&x.sqr().scale(3) - &c(1)) * &half,
        (2, 1) => x.scale(3),
        (2, 2) => c(3),
        (3, 0) => &(&x.powi(3).scale(5) - &x.scale(3)) * &half,
        (3, 1) => &(&x.sqr().scale(15) - &c(3)) * &half,
        (3, 2) => x.scale(15),
        (3, 3) => c(15),
        _ => unreachable!(),
    }
}

fn closed_forms() -> Outcome {
    let mut worst = 0f64;
    let one = Interval::from_int(1, prec());
    for n in 1..=3u32 {
        for ell in 0..=n {
            for i in 0..20 {
                let rho = pt(0.45 * (i as f64 + 0.5) / 20.0);
                let r2 = rho.sqr();
                let s = &one + &r2;
                let a = (&one - &r2).div(&s).unwrap();
                let want = &rho.div(&s).unwrap().powi(ell) * &poly_deriv(n, ell, &a).div(&poly_deriv(n, ell, &one)).unwrap();
                let lam = Interval::from_int((n * (n + 1)) as i64, prec());
                let got = eval_all(&LegendreQuery::new(ell, lam, rho.clone())).map_err(|e| e.to_string())?.p;
                ensure(got.intersect(&want).is_ok(), || format!("n={n} ℓ={ell} ρ={rho}: {got} vs {want}"))?;
                worst = worst.max(got.width_f64());
            }
        }
    }
    ensure(worst < CLOSED_FORM_WIDTH, || format!("widest enclosure {worst:e}"))?;
    Ok(format!("180 points, widest enclosure {worst:.1e}"))
}

fn tail_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let gamma = TailRatio::new(2, 1).unwrap();
    let mut violations = 0;
    for _ in 0..TAIL_SAMPLES {
        let ell = rng.gen_range(0..=10u32);
        let lam = rng.gen_range(1e-3..200.0);
        let rho = (rng.gen_range(0.0..0.9) / 2.0f64).sqrt();
        let q = |k: usize| LegendreQuery::new(ell, pt(lam), pt(rho)).with_order(k).with_gamma(gamma);
        let coarse = eval_all(&q(40)).map_err(|e| e.to_string())?;
        let fine = eval_all(&q(100)).map_err(|e| e.to_string())?;
        let pairs = [(&coarse.p, &fine.p), (&coarse.dp, &fine.dp), (&coarse.q, &fine.q), (&coarse.dq, &fine.dq)];
        // the coarse enclosure is the K=40 sum padded by its tail radius
        violations += pairs.iter().filter(|(c, f)| !c.contains(&f.mid_point())).count();
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok(format!("{TAIL_SAMPLES} samples × 4 functions, γ = 2, 0 violations"))
}

fn random_interval(rng: &mut ChaCha8Rng, bits: u32) -> (Interval, f64) {
    let a: f64 = rng.gen_range(-1e3..1e3);
    let w: f64 = if rng.gen_bool(0.2) { 0.0 } else { 10f64.powf(rng.gen_range(-12.0..2.0)) };
    let b = a + w;
    let u = if w == 0.0 { a } else { rng.gen_range(a..=b) };
    let p = Precision::new(bits).unwrap();
    let iv = Interval::from_f64(a, p).unwrap().hull(&Interval::from_f64(b, p).unwrap());
    (iv, u)
}

fn fuzz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let reference = Precision::new(2048).unwrap();
    let mut violations = Vec::new();
    for case in 0..FUZZ_CASES {
        let bits = [53, 64, 113, 256, 512][rng.gen_range(0..5)];
        let (x, u) = random_interval(&mut rng, bits);
        let (y, v) = random_interval(&mut rng, bits);
        let (pu, pv) = (Interval::from_f64(u, reference).unwrap(), Interval::from_f64(v, reference).unwrap());
        let op = rng.gen_range(0..7);
        let (got, want) = match op {
            0 => (&x + &y, &pu + &pv),
            1 => (&x - &y, &pu - &pv),
            2 => (&x * &y, &pu * &pv),
            3 => match x.div(&y) {
                Ok(r) => (r, pu.div(&pv).unwrap()),
                Err(_) => {
                    if !y.contains_zero() {
                        violations.push(format!("case {case}: division by {y} refused"));
                    }
                    continue;
                }
            },
            4 => (x.sqr(), pu.sqr()),
            5 => (x.abs().sqrt().unwrap(), pu.abs().sqrt().unwrap()),
            _ => {
                let k = rng.gen_range(2..6);
                (x.powi(k), pu.powi(k))
            }
        };
        if !got.contains(&want) {
            violations.push(format!("case {case}: op {op} on {x}, {y} gave {got}"));
        }
    }
    ensure(violations.is_empty(), || format!("{} violations, first {}", violations.len(), violations[0]))?;
    Ok(format!("{FUZZ_CASES} cases, 0 violations"))
}

fn richardson() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for _ in 0..RICHARDSON_SAMPLES {
        let ell = rng.gen_range(0..=10u32);
        let lam = rng.gen_range(1.0..200.0);
        let rho = rng.gen_range(0.1..0.6);
        let ev = |l: f64, r: f64| -> LegendreEval { eval_all(&LegendreQuery::new(ell, pt(l), pt(r))).unwrap() };
        let base = ev(lam, rho);
        let slope = |f: &dyn Fn(f64) -> Interval, x: f64, h: f64| {
            let (xp, xm) = (x + h, x - h);
            (&f(xp) - &f(xm)).div(&(&pt(xp) - &pt(xm))).unwrap()
        };
        let err_q = |h: f64| (&slope(&|l| ev(l, rho).p, lam, h) - &base.q).mid_f64().abs();
        let err_dp = |h: f64| (&slope(&|r| ev(lam, r).p, rho, h) - &base.dp).mid_f64().abs();
        for (name, ratio) in [("Q", err_q(1e-3) / err_q(1e-4)), ("dP", err_dp(1e-3) / err_dp(1e-4))] {
            ensure((RICHARDSON_RANGE.0..=RICHARDSON_RANGE.1).contains(&ratio), || {
                format!("{name} ratio {ratio} at ℓ={ell} λ={lam} ρ={rho}")
            })?;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok(format!("{RICHARDSON_SAMPLES} samples, ratios in [{lo:.2}, {hi:.2}]"))
}

fn increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn spectrum_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0f64;
    let mut count = 0;
    for _ in 0..SPECTRUM_CASES {
        let a = rng.gen_range(0.2..0.95);
        let ell = rng.gen_range(0..=8u32);
        let bc = if rng.gen_bool(0.5) { Bc::Dirichlet } else { Bc::Neumann };
        let lmax = 300.0;
        let s = scan_eigenvalues(a, ell, bc, lmax).map_err(|e| e.to_string())?;
        let o = ode_spectrum(Geometry::S2, ell, bc, a, lmax).map_err(|e| e.to_string())?;
        let next = scan_eigenvalues(a, ell + 1, bc, lmax).map_err(|e| e.to_string())?;
        ensure(s.len() == o.len(), || format!("a={a} ℓ={ell} {bc}: {s:?} vs {o:?}"))?;
        for (x, y) in s.iter().zip(&o) {
            let rel = (x - y).abs() / x.abs().max(1.0);
            worst = worst.max(rel);
            ensure(rel <= SPECTRUM_REL_TOL, || format!("a={a} ℓ={ell} {bc}: {x} vs {y}"))?;
        }
        ensure(increasing(&s) && increasing(&o) && increasing(&next), || format!("a={a} ℓ={ell}: not increasing"))?;
        ensure(s.iter().zip(&next).all(|(x, y)| x < y), || format!("a={a} ℓ={ell}: mode ordering"))?;
        count += s.len();
    }
    Ok(format!("{SPECTRUM_CASES} cases, {count} eigenvalues, worst relative gap {worst:.1e}"))
}

fn csv_curve(text: &str) -> Vec<(f64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("a,") && !l.is_empty())
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

fn crossings_json(args: &[&str]) -> Result<Vec<Value>, String> {
    let mut full = vec!["crossings"];
    full.extend_from_slice(args);
    let r = run(&full);
    ensure(r.code == 0, || format!("{args:?}: exit {} {}", r.code, r.stderr.trim()))?;
    serde_json::from_str(&r.stdout).map_err(|e| e.to_string())
}

fn figures() -> Outcome {
    let found = crossings_json(&["--ell", "8", "--grid", "0.4:0.55:61"])?;
    ensure(found.len() == 1, || format!("{} crossings in [0.4, 0.55]", found.len()))?;
    let c = &found[0];
    let gap = c["slope_gap"].as_f64().unwrap();
    ensure(c["transversal"].as_bool() == Some(true) && gap != 0.0, || format!("slope gap {gap}"))?;
    let nb = c["neumann_branch"].as_u64().unwrap().to_string();
    let grid = "0.4:0.55:151";
    let n = run(&["trace", "--ell", "0", "--bc", "neumann", "--branch", &nb, "--grid", grid]);
    let d = run(&["trace", "--ell", "8", "--bc", "dirichlet", "--branch", "0", "--grid", grid]);
    ensure(n.code == 0 && d.code == 0, || "trace failed".into())?;
    let (n, d) = (csv_curve(&n.stdout), csv_curve(&d.stdout));
    let diff: Vec<f64> = n.iter().zip(&d).map(|(x, y)| x.1 - y.1).collect();
    let changes = diff.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    ensure(changes == 1, || format!("{changes} sign changes in the traced CSVs"))?;
    let mut notes = vec![format!(
        "ℓ=8: one crossing at a = {:.10}, slope gap {gap:.3}",
        c["a_star"].as_f64().unwrap()
    )];
    for (geom, ell, grid) in [("s3", "7", "-0.9:0.9:60"), ("s4", "9", "-0.9:0.9:60"), ("h2", "4", "0.2:4.0:60")] {
        let grid = format!("--grid={grid}");
        let found = crossings_json(&["--geometry", geom, "--ell", ell, &grid])?;
        ensure(!found.is_empty(), || format!("no crossing on {geom} for ℓ = {ell}"))?;
        let first = &found[0];
        notes.push(format!(
            "{geom} ℓ={ell}: {} found, first at ({:.6}, {:.4})",
            found.len(),
            first["a_star"].as_f64().unwrap(),
            first["lambda_star"].as_f64().unwrap()
        ));
    }
    Ok(notes.join("; "))
}

fn negative_controls(dir: &Path) -> Outcome {
    let (shifted, _) = certify(
        dir,
        "shifted.json",
        &["--profile", "custom", "--ell", "8", "--rho-box", "0.594723480694931:0.594723480694970", "--lambda-box", "154.192574494505:154.192574494520"],
    )?;
    ensure(shifted.code == 1, || format!("shifted box exit {}", shifted.code))?;
    let (coarse, _) = certify(dir, "coarse.json", &["--precision-bits", "53"])?;
    ensure(coarse.code == 2, || format!("53-bit exit {}", coarse.code))?;
    let cfg = CertConfig::ell8();
    let ecfg = cfg.eval_config().map_err(|e| e.to_string())?;
    let bx = cfg.crossing_box().map_err(|e| e.to_string())?;
    let range = Interval::from_decimal(&cfg.lambda_aux, &cfg.lambda_box.hi, ecfg.precision).unwrap();
    let rec = exclude_zeros_branch_bound(cfg.ell, &range, &bx.rho, cfg.tolerance, &ecfg).map_err(|e| e.to_string())?;
    ensure(rec.status == Status::Inconclusive, || format!("sweep over {range} gave {:?}", rec.status))?;
    Ok(format!(
        "shifted box exit 1 ({:.1} s), 53 bits exit 2 ({:.1} s), sweep to λ^u inconclusive after {} subdivisions",
        shifted.secs, coarse.secs, rec.subdivisions
    ))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("tempdir");
    let mut failed = 0;
    let mut report = |id: &str, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("PASS {id} {name} [{secs:.1} s]: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL {id} {name} [{secs:.1} s]: {d}");
            }
        }
    };
    let (main_run, cert) = certify(dir.path(), "certificate.json", &[]).expect("certify");
    report("A01", "certificate", &mut || full_certificate(&cert, &main_run));
    report("A02", "edge-signs", &mut || edge_signs(&cert));
    report("A03", "zonal-brackets", &mut || brackets(&cert));
    report("A04", "mode-six-crossing", &mut || ell6(dir.path()));
    report("A05", "closed-forms", &mut closed_forms);
    report("A06", "tail-soundness", &mut tail_soundness);
    report("A07", "interval-fuzz", &mut fuzz);
    report("A08", "derivative-identities", &mut richardson);
    report("A09", "spectrum-consistency", &mut spectrum_consistency);
    report("A10", "figure-crossings", &mut figures);
    report("A11", "negative-controls", &mut || negative_controls(dir.path()));
    println!("acceptance: {} of 11 passed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
