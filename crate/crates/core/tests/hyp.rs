use std::f64::consts::PI;

use approx::assert_relative_eq;
use growthfx::euclid::RadialProfile;
use growthfx::hyp::{
    diff_norm_hyp, inverse_jacobi_transform, jacobi_transform, lp_norm_hyp, spherical_mean_hyp, theorem5_lhs,
    theorem6_lhs, HypSpectralTable, INVERSION_CONSTANT,
};
use growthfx::quad::GridSpec;
use growthfx::specfun::{OrderPair, SpectralPoint};

fn h3() -> OrderPair {
    OrderPair::new(0.5, -0.5).unwrap()
}

/// Transform of `e^{-t²/2}` on H³ with `Δ = 4 sinh² t`:
/// `2 sqrt(2π) e^{(1-λ²)/2} sin λ / λ`.
fn gaussian_hat(lam: f64) -> f64 {
    let s = if lam == 0.0 { 1.0 } else { lam.sin() / lam };
    2.0 * (2.0 * PI).sqrt() * (0.5 * (1.0 - lam * lam)).exp() * s
}

#[test]
fn jacobi_transform_of_gaussian_on_h3() {
    let f = RadialProfile::gaussian(1.0).unwrap();
    for mu in [0.0, 0.4, 1.0, 3.0, 7.0] {
        let v = jacobi_transform(&f, &h3(), SpectralPoint::real(mu)).unwrap();
        assert!((v.re - gaussian_hat(mu)).abs() < 1e-10, "mu {mu}: {} vs {}", v.re, gaussian_hat(mu));
        assert!(v.im.abs() < 1e-12);
    }
}

#[test]
fn inverse_recovers_gaussian_on_h3() {
    assert_relative_eq!(INVERSION_CONSTANT, 0.5 / PI);
    for t in [0.0f64, 0.5, 1.5, 3.0] {
        let v = inverse_jacobi_transform(&gaussian_hat, &h3(), t).unwrap();
        assert!((v - (-0.5 * t * t).exp()).abs() < 1e-7, "t {t}: {v}");
    }
}

#[test]
fn plancherel_on_h3() {
    // ∫ e^{-t²} 4 sinh² t dt = sqrt(π) (e - 1)
    let f = RadialProfile::gaussian(1.0).unwrap();
    let table = HypSpectralTable::real_line(&f, &h3()).unwrap();
    let exact = (PI.sqrt() * (1f64.exp() - 1.0)).sqrt();
    assert_relative_eq!(table.l2_norm().unwrap(), exact, max_relative = 1e-8);
    assert_relative_eq!(lp_norm_hyp(&f, &h3(), 2.0).unwrap(), exact, max_relative = 1e-10);
}

#[test]
fn geometric_mean_matches_spectral_mean() {
    let f = RadialProfile::gaussian(1.0).unwrap();
    let table = HypSpectralTable::real_line(&f, &h3()).unwrap();
    let ss = [0.0, 0.3, 1.0, 2.2];
    for t in [0.25, 1.0] {
        let spectral = table.spherical_mean_many(t, &ss).unwrap();
        for (&s, m) in ss.iter().zip(spectral) {
            let g = spherical_mean_hyp(&f, &h3(), t, s).unwrap();
            assert!((g - m).abs() < 1e-7, "t {t} s {s}: {g} vs {m}");
        }
    }
}

#[test]
fn difference_norms_agree() {
    let f = RadialProfile::bump(1.0).unwrap();
    let table = HypSpectralTable::new(&f, &h3(), &GridSpec::log(1e-3, 1e3, 2500).unwrap(), 0.0).unwrap();
    let ts = [0.05, 0.5, 3.0];
    let spectral = table.diff_norm_l2_many(&ts).unwrap();
    for (&t, d) in ts.iter().zip(spectral) {
        assert_relative_eq!(diff_norm_hyp(&f, &h3(), 2.0, t).unwrap(), d, max_relative = 1e-5);
    }
}

#[test]
fn functionals_vanish_at_zero_and_contain_tails() {
    let f = RadialProfile::gaussian(1.0).unwrap();
    assert_eq!(theorem6_lhs(&f, &h3(), 0.0).unwrap(), 0.0);
    let table = HypSpectralTable::real_line(&f, &h3()).unwrap();
    for t in [0.01, 0.3, 2.0, 9.0] {
        assert!(table.tail_l2(t).unwrap() <= table.theorem6_lhs(t).unwrap() * (1.0 + 1e-12));
        assert!(table.tail_sup(t).unwrap() <= table.theorem5_lhs(t).unwrap() * (1.0 + 1e-12));
    }
    let v = theorem5_lhs(&f, &h3(), 1.5, 0.2, 1.0).unwrap();
    assert!(v > 0.0 && v.is_finite());
}

#[test]
fn strip_violations_are_rejected() {
    let f = RadialProfile::gaussian(1.0).unwrap();
    // (2/p - 1) ρ = 1/3 for p = 1.5 on H³
    assert!(theorem5_lhs(&f, &h3(), 1.5, 0.4, 1.0).is_err());
    assert!(theorem5_lhs(&f, &h3(), 2.0, 0.0, 1.0).is_err());
    assert!(jacobi_transform(&f, &h3(), SpectralPoint::new(1.0, 1.5)).is_err());
    let other = OrderPair::new(1.0, 0.0).unwrap();
    assert!(spherical_mean_hyp(&f, &other, 1.0, 0.5).is_err());
}
