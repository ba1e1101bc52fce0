use std::f64::consts::PI;

use approx::assert_relative_eq;
use growthfx::euclid::{
    diff_norm, fourier_radial, lp_norm_radial, modulus_omega, spherical_mean_radial, Dimension, ExponentPair,
    RadialFunction, RadialProfile, SpectralTable,
};
use growthfx::quad::GridSpec;

fn gaussian() -> RadialProfile {
    RadialProfile::gaussian(1.0).unwrap()
}

#[test]
fn gaussian_transform_closed_form() {
    let f = gaussian();
    for n in 2..=5 {
        let dim = Dimension::new(n).unwrap();
        for xi in [0.0f64, 0.3, 1.0, 2.5, 6.0] {
            let exact = (2.0 * PI).powf(n as f64 / 2.0) * (-0.5 * xi * xi).exp();
            let v = fourier_radial(&f, &dim, xi).unwrap();
            assert!((v - exact).abs() < 1e-9 * (2.0 * PI).powf(n as f64 / 2.0), "n {n} xi {xi}");
        }
    }
}

#[test]
fn ball_transform_in_three_dimensions() {
    // 1_{|x| <= 1} on R³: 4π (sin ξ - ξ cos ξ) / ξ³
    let f = RadialProfile::ball(1.0).unwrap();
    let dim = Dimension::new(3).unwrap();
    for xi in [0.5f64, 2.0, 7.0, 30.0] {
        let exact = 4.0 * PI * (xi.sin() - xi * xi.cos()) / xi.powi(3);
        assert!((fourier_radial(&f, &dim, xi).unwrap() - exact).abs() < 1e-9, "xi {xi}");
    }
}

#[test]
fn spherical_mean_of_gaussian_in_r3() {
    // shell average of e^{-|x|²/2}: (e^{-(r-t)²/2} - e^{-(r+t)²/2}) / (2 r t)
    let f = gaussian();
    let dim = Dimension::new(3).unwrap();
    for t in [0.1, 1.0, 4.0] {
        for r in [0.05f64, 0.5, 2.0, 6.0] {
            let exact = ((-0.5 * (r - t) * (r - t)).exp() - (-0.5 * (r + t) * (r + t)).exp()) / (2.0 * r * t);
            let v = spherical_mean_radial(&f, &dim, t, r).unwrap();
            assert!((v - exact).abs() < 1e-12, "t {t} r {r}: {v} vs {exact}");
        }
    }
    assert_eq!(spherical_mean_radial(&f, &dim, 0.0, 0.7).unwrap(), f.eval(0.7));
}

#[test]
fn norms_of_gaussian() {
    let f = gaussian();
    for n in [2, 3, 4] {
        let dim = Dimension::new(n).unwrap();
        // ∫ e^{-p r²/2} dx = (2π/p)^{n/2}
        for p in [1.0, 2.0, 3.0] {
            let exact = (2.0 * PI / p).powf(n as f64 / 2.0).powf(1.0 / p);
            assert_relative_eq!(lp_norm_radial(&f, &dim, p).unwrap(), exact, max_relative = 1e-10);
        }
        assert_relative_eq!(lp_norm_radial(&f, &dim, f64::INFINITY).unwrap(), 1.0);
    }
}

#[test]
fn spatial_and_spectral_l2_difference_agree() {
    let dim = Dimension::new(3).unwrap();
    for f in [gaussian(), RadialProfile::bump(1.0).unwrap()] {
        // the bump transform decays slowly; a short grid undercounts small-t differences
        let table = SpectralTable::new(&f, &dim, &GridSpec::log(1e-4, 3e4, 8000).unwrap()).unwrap();
        for t in [0.01, 0.3, 2.0] {
            let spatial = diff_norm(&f, &dim, 2.0, t).unwrap();
            let spectral = table.diff_norm_l2(t).unwrap();
            assert_relative_eq!(spatial, spectral, max_relative = 1e-6);
        }
    }
}

#[test]
fn difference_norm_limits() {
    let f = gaussian();
    let dim = Dimension::new(3).unwrap();
    assert_eq!(diff_norm(&f, &dim, 1.0, 0.0).unwrap(), 0.0);
    // far apart: M^t f is small and spread out, so D_2 -> ‖f‖_2
    let far = diff_norm(&f, &dim, 2.0, 50.0).unwrap();
    assert_relative_eq!(far, lp_norm_radial(&f, &dim, 2.0).unwrap(), max_relative = 0.05);
    let m = modulus_omega(&f, &dim, 2.0, 1.0).unwrap();
    assert!(m.value >= diff_norm(&f, &dim, 2.0, 0.5).unwrap() - 1e-12);
}

#[test]
fn tail_never_exceeds_growth() {
    let dim = Dimension::new(2).unwrap();
    let table = SpectralTable::new(&gaussian(), &dim, &GridSpec::log(1e-4, 1e3, 1000).unwrap()).unwrap();
    for p in [1.0, 1.5, 2.0] {
        let exps = ExponentPair::new(p).unwrap();
        for t in [1e-3, 0.1, 1.0, 10.0] {
            assert!(table.tail_lhs(&exps, t).unwrap() <= table.growth_lhs(&exps, t).unwrap() * (1.0 + 1e-12));
        }
    }
}

#[test]
fn invalid_inputs() {
    assert!(Dimension::new(1).is_err());
    assert!(ExponentPair::new(2.5).is_err());
    assert!(RadialProfile::by_name("triangle").is_err());
    assert!(RadialProfile::gaussian(-1.0).is_err());
    let f = gaussian();
    assert!(diff_norm(&f, &Dimension::new(3).unwrap(), 2.0, -1.0).is_err());
}
