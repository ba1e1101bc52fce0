use growthfx::certify::{point, CertReport, Num};
use growthfx::euclid::{Dimension, ExponentPair, RadialProfile, SpectralTable};
use growthfx::quad::GridSpec;
use growthfx::specfun::{bessel_j_norm, jacobi_phi, one_minus_j, OrderPair, SpectralPoint};
use proptest::prelude::*;

fn order_strategy() -> impl Strategy<Value = OrderPair> {
    (-0.45f64..4.0, 0.0f64..1.0).prop_map(|(a, frac)| {
        let beta = -0.5 + frac * (a + 0.5);
        OrderPair::new(a, beta).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bessel_is_bounded_and_complemented(alpha in -0.49f64..8.0, x in 0.0f64..200.0) {
        let j = bessel_j_norm(alpha, x).unwrap();
        let d = one_minus_j(alpha, x).unwrap();
        prop_assert!(j.abs() <= 1.0 + 1e-14);
        prop_assert!((-1e-15..=2.0 + 1e-14).contains(&d));
        prop_assert!((j + d - 1.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_real_spectrum_is_bounded(o in order_strategy(), mu in 0.0f64..60.0, t in 0.0f64..15.0) {
        let v = jacobi_phi(&o, SpectralPoint::real(mu), t).unwrap();
        prop_assert!(v.norm() <= 1.0 + 1e-10, "{v}");
        prop_assert!(v.im.abs() < 1e-10);
    }

    #[test]
    fn jacobi_is_even_in_lambda(o in order_strategy(), mu in 0.0f64..30.0, frac in -1.0f64..1.0, t in 0.0f64..8.0) {
        let eta = frac * o.rho();
        let a = jacobi_phi(&o, SpectralPoint::new(mu, eta), t).unwrap();
        let b = jacobi_phi(&o, SpectralPoint::new(-mu, -eta), t).unwrap();
        prop_assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
    }

    #[test]
    fn jacobi_bullet_one(o in order_strategy(), mu in 0.0f64..30.0, frac in -1.0f64..1.0, t in 0.0f64..8.0) {
        let eta = frac * o.rho();
        let a = jacobi_phi(&o, SpectralPoint::new(mu, eta), t).unwrap().norm();
        let b = jacobi_phi(&o, SpectralPoint::imaginary(eta), t).unwrap().re;
        prop_assert!(a <= b + 1e-9 && b <= 1.0 + 1e-9);
    }

    #[test]
    fn grid_text_roundtrip(log in any::<bool>(), lo in 1e-6f64..10.0, width in 1e-3f64..1e3, points in 2usize..5000) {
        let g = if log { GridSpec::log(lo, lo + width, points) } else { GridSpec::linear(lo, lo + width, points) }.unwrap();
        let back: GridSpec = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
        let nodes = g.nodes();
        prop_assert_eq!(nodes.len(), points);
        prop_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn report_json_roundtrip(values in prop::collection::vec(prop_oneof![
        any::<f64>(),
        Just(f64::INFINITY),
        Just(f64::NEG_INFINITY),
        Just(f64::NAN),
    ], 1..20)) {
        let mut rep = CertReport::new("prop", 1e-9);
        for (k, &v) in values.iter().enumerate() {
            rep.metric(&format!("m{k:02}"), v);
            rep.observe_ratio(v);
            rep.violate("prop", point(&[("x", v)]), v, 0.0);
        }
        let back: CertReport = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
        let same = |a: Num, b: Num| a.0 == b.0 || (a.0.is_nan() && b.0.is_nan());
        prop_assert_eq!(back.metrics.len(), rep.metrics.len());
        for (k, v) in &rep.metrics {
            prop_assert!(same(*v, back.metrics[k]));
        }
        prop_assert!(same(back.inf_ratio, rep.inf_ratio) && same(back.sup_ratio, rep.sup_ratio));
        prop_assert_eq!(back.violation_count, values.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tail_below_growth(scale in 0.3f64..3.0, n in 2u32..5, p in 1.0f64..2.0, t in 1e-3f64..50.0) {
        let f = RadialProfile::gaussian(scale).unwrap();
        let dim = Dimension::new(n).unwrap();
        let table = SpectralTable::new(&f, &dim, &GridSpec::log(1e-4, 1e3, 600).unwrap()).unwrap();
        let exps = ExponentPair::new(p).unwrap();
        let tail = table.tail_lhs(&exps, t).unwrap();
        let growth = table.growth_lhs(&exps, t).unwrap();
        prop_assert!(tail <= growth * (1.0 + 1e-12) + f64::MIN_POSITIVE);
        prop_assert!(growth.is_finite() && growth >= 0.0);
    }
}
