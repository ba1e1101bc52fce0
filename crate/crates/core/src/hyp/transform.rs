use num_complex::Complex64;

use super::{check_strip, hyp_upper, transform_growth, INVERSION_CONSTANT};
use crate::error::{Error, Result};
use crate::euclid::RadialFunction;
use crate::quad::{CompositeRule, GridSpec};
use crate::specfun::{
    c_function_density, delta_density, jacobi_phi_many, OrderPair, SpectralPoint,
};

const T_PANEL_ORDER: usize = 10;

/// Composite rule in `t` for `∫ f φ_λ Δ dt`, with panels short enough to
/// resolve the oscillation of `φ_λ` (`|λ| h <= 4`).
pub(crate) fn forward_rule<F: RadialFunction + ?Sized>(
    f: &F,
    order: &OrderPair,
    lambda_abs: f64,
    eta: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let upper = hyp_upper(f, 2.0 * transform_growth(order, eta))?;
    if upper <= 0.0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let h = (4.0 / lambda_abs.max(1e-300)).min(0.25);
    let panels = (upper / h).ceil() as usize;
    let mut breaks: Vec<f64> = (0..=panels)
        .map(|i| upper * i as f64 / panels as f64)
        .collect();
    breaks.extend(
        f.breakpoints()
            .into_iter()
            .filter(|b| *b > 0.0 && *b < upper),
    );
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let rule = CompositeRule::from_breaks(&breaks, T_PANEL_ORDER);
    let weights = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| w * f.eval(t) * delta_density(order, t))
        .collect();
    Ok((rule.nodes, weights))
}

/// `f̂(λ) = ∫_0^∞ f(t) φ_λ(t) Δ(t) dt` for `|Im λ| <= ρ`.
pub fn jacobi_transform<F: RadialFunction + ?Sized>(
    f: &F,
    order: &OrderPair,
    lambda: SpectralPoint,
) -> Result<Complex64> {
    check_strip(order, lambda.eta)?;
    let (nodes, weights) = forward_rule(f, order, lambda.as_complex().norm(), lambda.eta)?;
    if nodes.is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let phi = jacobi_phi_many(order, lambda, &nodes)?;
    Ok(phi.iter().zip(&weights).map(|(p, w)| p * w).sum())
}

/// Nodes and weights (including `|c(μ)|^{-2}/2π`) of the spectral rule:
/// 4-point Gauss-Legendre panels in `ln μ` between consecutive grid
/// points, plus one panel on `[0, μ_min]`.
pub(crate) fn spectral_rule(order: &OrderPair, grid: &GridSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    grid.validate()?;
    let mu = grid.nodes();
    let (gx, gw) = crate::quad::gauss_legendre(4);
    let mut nodes = Vec::with_capacity(4 * mu.len());
    let mut weights = Vec::with_capacity(4 * mu.len());
    let mut push = |m: f64, w: f64| -> Result<()> {
        nodes.push(m);
        weights.push(w * c_function_density(order, m)? * INVERSION_CONSTANT);
        Ok(())
    };
    let (a, b) = (0.0, mu[0]);
    for (x, w) in gx.iter().zip(&gw) {
        push(0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w)?;
    }
    for p in mu.windows(2) {
        let (ua, ub) = (p[0].ln(), p[1].ln());
        for (x, w) in gx.iter().zip(&gw) {
            let u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * x;
            let m = u.exp();
            push(m, 0.5 * (ub - ua) * w * m)?;
        }
    }
    Ok((nodes, weights))
}

/// `(1/2π) ∫_0^∞ f̂(μ) φ_μ(t) |c(μ)|^{-2} dμ` on the default spectral grid.
pub fn inverse_jacobi_transform(
    fhat: &dyn Fn(f64) -> f64,
    order: &OrderPair,
    t: f64,
) -> Result<f64> {
    Ok(inverse_jacobi_transform_many(fhat, order, &[t], &super::default_mu_grid())?[0])
}

/// Inverse transform at every entry of `ts`, sharing one `φ` sweep per
/// spectral node.
pub fn inverse_jacobi_transform_many(
    fhat: &dyn Fn(f64) -> f64,
    order: &OrderPair,
    ts: &[f64],
    grid: &GridSpec,
) -> Result<Vec<f64>> {
    let (nodes, weights) = spectral_rule(order, grid)?;
    let values: Vec<f64> = nodes.iter().map(|&m| fhat(m)).collect();
    inverse_on_nodes(order, &nodes, &weights, &values, ts)
}

pub(crate) fn inverse_on_nodes(
    order: &OrderPair,
    nodes: &[f64],
    weights: &[f64],
    values: &[f64],
    ts: &[f64],
) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence {
            what: "inverse Jacobi transform (non-finite spectral values)".into(),
            error_estimate: f64::INFINITY,
        });
    }
    let mut out = vec![0.0; ts.len()];
    for ((&m, &w), &v) in nodes.iter().zip(weights).zip(values) {
        if v == 0.0 {
            continue;
        }
        let phi = jacobi_phi_many(order, SpectralPoint::real(m), ts)?;
        for (o, p) in out.iter_mut().zip(&phi) {
            *o += w * v * p.re;
        }
    }
    Ok(out)
}
