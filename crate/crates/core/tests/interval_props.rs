use proptest::prelude::*;
use rug::Float;
use spherecap::interval::{Interval, Precision};

const REF_BITS: u32 = 2048;

fn iv(a: f64, b: f64, bits: u32) -> Interval {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Interval::new(Float::with_val(bits, lo), Float::with_val(bits, hi)).unwrap()
}

/// A point of `x` at parameter `t ∈ [0, 1]`, exact at the reference precision.
fn point_in(x: &Interval, t: f64) -> Float {
    let w = Float::with_val(REF_BITS, x.hi() - x.lo());
    Float::with_val(REF_BITS, x.lo() + w * t)
}

fn inside(x: &Interval, v: &Float) -> bool {
    x.lo() <= v && v <= x.hi()
}

fn endpoints() -> impl Strategy<Value = (f64, f64)> {
    (-1e3f64..1e3, -1e3f64..1e3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn binary_ops_contain_point_results(
        (a, b) in endpoints(),
        (c, d) in endpoints(),
        s in 0.0f64..=1.0,
        t in 0.0f64..=1.0,
        bits in prop::sample::select(vec![53u32, 64, 113, 256]),
    ) {
        let x = iv(a, b, bits);
        let y = iv(c, d, bits);
        let (u, v) = (point_in(&x, s), point_in(&y, t));
        prop_assert!(inside(&(&x + &y), &Float::with_val(REF_BITS, &u + &v)));
        prop_assert!(inside(&(&x - &y), &Float::with_val(REF_BITS, &u - &v)));
        prop_assert!(inside(&(&x * &y), &Float::with_val(REF_BITS, &u * &v)));
        prop_assert!(inside(&x.sqr(), &Float::with_val(REF_BITS, u.clone().square())));
        prop_assert!(inside(&x.powi(3), &Float::with_val(REF_BITS, u.clone().square() * &u)));
        if !y.contains_zero() {
            prop_assert!(inside(&x.div(&y).unwrap(), &Float::with_val(REF_BITS, &u / &v)));
        } else {
            prop_assert!(x.div(&y).is_err());
        }
        let ax = x.abs();
        prop_assert!(inside(&ax.sqrt().unwrap(), &Float::with_val(REF_BITS, u.clone().abs().sqrt())));
    }

    #[test]
    fn operations_are_isotone(
        (a, b) in endpoints(),
        (c, d) in endpoints(),
        s in 0.0f64..=1.0,
        t in 0.0f64..=1.0,
    ) {
        // shrinking an operand never widens the result
        let x = iv(a, b, 128);
        let y = iv(c, d, 128);
        let (lo, hi) = (s.min(t), s.max(t));
        // rounding to nearest cannot leave [lo, hi] since both are representable
        let xs = Interval::new(
            Float::with_val(128, point_in(&x, lo)),
            Float::with_val(128, point_in(&x, hi)),
        )
        .unwrap();
        prop_assert!(x.contains(&xs));
        prop_assert!((&x + &y).contains(&(&xs + &y)));
        prop_assert!((&x * &y).contains(&(&xs * &y)));
        prop_assert!(x.sqr().contains(&xs.sqr()));
    }

    #[test]
    fn exact_operations_on_points_stay_points(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let p = Precision::new(256).unwrap();
        let x = Interval::from_f64(a, p).unwrap();
        let y = Interval::from_f64(b, p).unwrap();
        prop_assert!((&x + &y).is_point());
        prop_assert!((&x - &y).is_point());
        prop_assert!((&x * &y).is_point());
        prop_assert!(x.sqr().is_point());
    }

    #[test]
    fn more_bits_never_widen(num in 1i64..1000, den in 1i64..1000) {
        let w = |bits| {
            let p = Precision::new(bits).unwrap();
            let x = Interval::from_ratio(num, den, p).unwrap();
            let y = Interval::from_int(7, p).sqrt().unwrap();
            (&x * &y).width_f64()
        };
        prop_assert!(w(256) <= w(128));
        prop_assert!(w(128) <= w(53));
    }
}

#[test]
fn decimal_parsing_encloses_value() {
    let p = Precision::new(256).unwrap();
    let x = Interval::parse("0.1", p).unwrap();
    let tenth = Float::with_val(REF_BITS, Float::parse("0.1").unwrap());
    assert!(inside(&x, &tenth));
    assert!(!x.is_point());
    let y = Interval::from_decimal_inward("0.1", "0.2", p).unwrap();
    assert!(y.lo() > &tenth);
    assert!(Interval::parse("2:1", p).is_err());
    assert!(Interval::parse("abc", p).is_err());
    assert!(Precision::new(52).is_err());
}
