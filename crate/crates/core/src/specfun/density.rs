//! Radial density `Δ(t)` and the Harish-Chandra c-function.

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use super::order::OrderPair;
use crate::error::{Error, Result};

/// `Δ(t) = (2 sinh t)^{2α+1} (2 cosh t)^{2β+1}`.
pub fn delta_density(order: &OrderPair, t: f64) -> f64 {
    ln_delta_density(order, t).exp()
}

/// `ln Δ(t)`, finite for all `t > 0`.
pub fn ln_delta_density(order: &OrderPair, t: f64) -> f64 {
    let t = t.abs();
    if t == 0.0 {
        return if 2.0 * order.alpha() + 1.0 > 0.0 {
            f64::NEG_INFINITY
        } else {
            0.0
        };
    }
    let e = (-2.0 * t).exp();
    // 2 sinh t = e^t (1 - e^{-2t}), 2 cosh t = e^t (1 + e^{-2t})
    let ln_2sinh = t + (-e).ln_1p();
    let ln_2cosh = t + e.ln_1p();
    (2.0 * order.alpha() + 1.0) * ln_2sinh + (2.0 * order.beta() + 1.0) * ln_2cosh
}

/// `c(λ) = 2^{ρ-iλ} Γ(α+1) Γ(iλ) / (Γ((iλ+ρ)/2) Γ((iλ+α-β+1)/2))`.
pub fn c_function(order: &OrderPair, lambda: Complex64) -> Result<Complex64> {
    if lambda.norm() == 0.0 {
        return Err(Error::invalid(
            "lambda",
            0.0,
            "c-function has a pole at lambda = 0",
        ));
    }
    let i = Complex64::new(0.0, 1.0);
    let il = i * lambda;
    let rho = order.rho();
    let (a, b) = (order.alpha(), order.beta());
    let ln = (rho - il) * std::f64::consts::LN_2
        + ln_gamma_complex(Complex64::new(a + 1.0, 0.0))
        + ln_gamma_complex(il)
        - ln_gamma_complex((il + rho) * 0.5)
        - ln_gamma_complex((il + (a - b + 1.0)) * 0.5);
    Ok(ln.exp())
}

/// Plancherel density `|c(μ)|^{-2}` for real `μ > 0`.
pub fn c_function_density(order: &OrderPair, mu: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::invalid(
            "mu",
            mu,
            "Plancherel density is evaluated at mu > 0",
        ));
    }
    let i = Complex64::new(0.0, 1.0);
    let il = i * mu;
    let (a, b, rho) = (order.alpha(), order.beta(), order.rho());
    // |Γ(iμ)|² = π / (μ sinh πμ), kept in log form
    let ln_abs_gamma_il = ln_gamma_complex(il).re;
    let ln = 2.0
        * (rho * std::f64::consts::LN_2
            + ln_gamma_complex(Complex64::new(a + 1.0, 0.0)).re
            + ln_abs_gamma_il
            - ln_gamma_complex((il + rho) * 0.5).re
            - ln_gamma_complex((il + (a - b + 1.0)) * 0.5).re);
    Ok((-ln).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h3_density_is_mu_squared() {
        let o = OrderPair::new(0.5, -0.5).unwrap();
        for &mu in &[1e-3, 0.5, 1.0, 7.0, 60.0] {
            let d = c_function_density(&o, mu).unwrap();
            assert!((d / (mu * mu) - 1.0).abs() < 1e-12, "mu = {mu}: {d}");
        }
        assert!(c_function_density(&o, 0.0).is_err());
    }

    #[test]
    fn density_is_inverse_modulus_squared() {
        let o = OrderPair::new(0.0, -0.5).unwrap();
        for &mu in &[0.3, 2.0, 9.0] {
            let c = c_function(&o, Complex64::new(mu, 0.0)).unwrap();
            let d = c_function_density(&o, mu).unwrap();
            assert!((d * c.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn delta_matches_direct() {
        let o = OrderPair::new(1.0, 0.0).unwrap();
        for &t in &[0.01_f64, 0.7, 3.0] {
            let direct = (2.0 * t.sinh()).powi(3) * (2.0 * t.cosh());
            assert!((delta_density(&o, t) / direct - 1.0).abs() < 1e-13);
        }
        assert!(ln_delta_density(&o, 500.0).is_finite());
    }

    #[test]
    fn c_at_i_rho_is_one() {
        for &(a, b) in &[(0.5, -0.5), (1.0, 0.0), (3.0, 1.5)] {
            let o = OrderPair::new(a, b).unwrap();
            let c = c_function(&o, Complex64::new(0.0, -o.rho())).unwrap();
            assert!((c - 1.0).norm() < 1e-12, "{c}");
        }
    }
}
