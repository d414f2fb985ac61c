use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use spherecap::interval::{Interval, Precision};
use spherecap::legendre::{eval_all, LegendreQuery};
use spherecap::spectrum::{
    boundary_shape, eval_float, find_crossing, newton_crossing, ode_spectrum, scan_eigenvalues, shape_amplitude,
    trace_curve, a_of_rho, linear_grid, rho_of_a, Bc, Crossing, Geometry,
};

const A_STAR: f64 = 0.47743656824155;
const LAMBDA_STAR: f64 = 154.1915744945;

fn ell8_crossing() -> Crossing {
    let (rho, lambda, residual) = newton_crossing(8, rho_of_a(A_STAR), LAMBDA_STAR).unwrap();
    Crossing {
        geometry: Geometry::S2,
        a_star: a_of_rho(rho),
        lambda_star: lambda,
        rho_star: Some(rho),
        ell: 8,
        neumann_branch: 4,
        dirichlet_branch: 0,
        slope_gap: 0.0,
        slope_gap_err: 0.0,
        transversal: true,
        residual,
        method: "newton".into(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn eigenvalues_increase_with_index_and_mode(a in -0.9f64..0.95, ell in 0u32..8, dirichlet: bool) {
        let bc = if dirichlet { Bc::Dirichlet } else { Bc::Neumann };
        let lo = scan_eigenvalues(a, ell, bc, 300.0).unwrap();
        let hi = scan_eigenvalues(a, ell + 1, bc, 300.0).unwrap();
        prop_assert!(lo.windows(2).all(|w| w[0] < w[1]), "{lo:?}");
        prop_assert!(hi.windows(2).all(|w| w[0] < w[1]), "{hi:?}");
        prop_assert!(hi.len() <= lo.len());
        for (x, y) in lo.iter().zip(&hi) {
            prop_assert!(x < y, "ℓ={ell}: {lo:?} vs {hi:?}");
        }
    }
}

fn distance_to_sphere_spectrum(x: f64) -> f64 {
    (0..10).map(|n| (x - (n * (n + 1)) as f64).abs()).fold(f64::MAX, f64::min)
}

#[test]
fn nearly_full_sphere_approaches_integer_spectrum() {
    for ell in 0..3 {
        for bc in [Bc::Dirichlet, Bc::Neumann] {
            let v = ode_spectrum(Geometry::S2, ell, bc, -0.999, 45.0).unwrap();
            assert!(v.len() >= 5);
            if ell == 0 && bc == Bc::Dirichlet {
                continue;
            }
            for x in v {
                assert!(distance_to_sphere_spectrum(x) < 0.5, "ℓ={ell} {bc}: {x}");
            }
        }
    }
}

#[test]
fn zonal_dirichlet_limit_is_slow_but_monotone() {
    // a pinned point has zero capacity, so these only converge like 1/log of the hole size
    let wide = ode_spectrum(Geometry::S2, 0, Bc::Dirichlet, -0.99, 45.0).unwrap();
    let narrow = ode_spectrum(Geometry::S2, 0, Bc::Dirichlet, -0.999, 45.0).unwrap();
    assert!(narrow[0] < wide[0] && narrow[0] < 0.2);
    for (w, n) in wide.iter().zip(&narrow).skip(1) {
        assert!(n < w && distance_to_sphere_spectrum(*n) < distance_to_sphere_spectrum(*w), "{w} → {n}");
    }
}

#[test]
fn shooting_agrees_with_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..6 {
        let a = rng.gen_range(0.25..0.9);
        let ell = rng.gen_range(0..9);
        let bc = if rng.gen_bool(0.5) { Bc::Dirichlet } else { Bc::Neumann };
        let s = scan_eigenvalues(a, ell, bc, 400.0).unwrap();
        let o = ode_spectrum(Geometry::S2, ell, bc, a, 400.0).unwrap();
        assert_eq!(s.len(), o.len(), "a={a} ℓ={ell} {bc}");
        for (x, y) in s.iter().zip(&o) {
            assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "a={a} ℓ={ell} {bc}: {x} vs {y}");
        }
    }
}

#[test]
fn float_values_lie_in_rigorous_enclosures() {
    let p = Precision::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let ell = rng.gen_range(0..10u32);
        let (r0, l0) = (rng.gen_range(0.05..0.75), rng.gen_range(0.0..300.0));
        let (r1, l1) = (r0 + 1e-3, l0 + 1e-2);
        let bx = |lo: f64, hi: f64| Interval::new(Float::with_val(p.bits(), lo), Float::with_val(p.bits(), hi)).unwrap();
        let ev = eval_all(&LegendreQuery::new(ell, bx(l0, l1), bx(r0, r1))).unwrap();
        let (r, l) = (rng.gen_range(r0..r1), rng.gen_range(l0..l1));
        let f = eval_float(ell, l, r).unwrap();
        for (enc, v) in [(&ev.p, f.p), (&ev.dp, f.dp), (&ev.q, f.q), (&ev.dq, f.dq)] {
            let slack = 1e-12 * enc.lo_f64().abs().max(enc.hi_f64().abs());
            assert!(
                enc.lo_f64() - slack <= v && v <= enc.hi_f64() + slack,
                "ℓ={ell} ρ={r} λ={l}: {v} not in {enc}"
            );
        }
    }
}

#[test]
fn separated_branches_do_not_cross() {
    let grid = linear_grid(0.3, 0.6, 16);
    let n = trace_curve(Geometry::S2, 0, Bc::Neumann, 1, &grid).unwrap();
    let d = trace_curve(Geometry::S2, 8, Bc::Dirichlet, 0, &grid).unwrap();
    assert!(find_crossing(&n, &d).unwrap().is_empty());
}

#[test]
fn shape_has_dihedral_symmetry() {
    let c = ell8_crossing();
    assert!(c.residual < 1e-10);
    let n = 8 * 45;
    let sh = boundary_shape(&c, 1e-2, n).unwrap();
    let theta = |j: usize| sh.samples[j % n].1;
    for j in 0..n {
        assert!((theta(j) - theta(j + n / 8)).abs() < 1e-14);
        assert!((theta(j) - theta(n - j)).abs() < 1e-14);
    }
    let flat = boundary_shape(&c, 0.0, 16).unwrap();
    assert!(flat.samples.iter().all(|&(_, t)| t == c.a_star.acos()));
}

#[test]
fn amplitude_matches_finite_differences() {
    // b★ = −φ′/ψ″ in θ, where φ, ψ are the mode-ℓ and zonal functions at λ★
    let c = ell8_crossing();
    let (rho, lam) = (c.rho_star.unwrap(), c.lambda_star);
    let t0 = 2.0 * rho.atan();
    let at = |ell: u32, t: f64| eval_float(ell, lam, (t / 2.0).tan()).unwrap().p;
    let d1 = |h: f64| (at(8, t0 + h) - at(8, t0 - h)) / (2.0 * h);
    let d2 = |h: f64| (at(0, t0 + h) - 2.0 * at(0, t0) + at(0, t0 - h)) / (h * h);
    let (b, _) = shape_amplitude(8, rho, lam).unwrap();
    let fd = |h: f64| -d1(h) / d2(h);
    let (coarse, fine) = (fd(1e-4), fd(1e-5));
    // h² error terms: extrapolate and require the coarse error to dominate
    let rich = (100.0 * fine - coarse) / 99.0;
    assert!((rich - b).abs() <= 1e-6 * b.abs(), "b★ {b} vs {rich}");
    assert!((coarse - b).abs() >= (rich - b).abs());
}
