//! Radial harmonic analysis on rank-one symmetric spaces through the
//! Jacobi transform
//!
//! `f̂(λ) = ∫_0^∞ f(t) φ_λ(t) Δ(t) dt`, inverted by
//! `f(t) = (1/2π) ∫_0^∞ f̂(μ) φ_μ(t) |c(μ)|^{-2} dμ`.
//!
//! The inversion constant `1/2π` is the one for which the roundtrip holds
//! on `H³`, where `φ_μ(t) = sin μt / (μ sinh t)`, `Δ = 4 sinh² t` and
//! `|c(μ)|^{-2} = μ²` make both transforms elementary sine transforms; it
//! is used unchanged for every order.

mod mean;
mod spectral;
mod transform;

use std::f64::consts::PI;

pub use mean::{diff_norm_hyp, lp_norm_hyp, spherical_mean_hyp, SphericalMeanHyp};
pub use spectral::{theorem5_lhs, theorem6_lhs, HypSpectralTable};
pub use transform::{inverse_jacobi_transform, inverse_jacobi_transform_many, jacobi_transform};

use crate::error::{Error, Result};
use crate::euclid::RadialFunction;
use crate::quad::{DecayHint, GridKind, GridSpec};
use crate::specfun::OrderPair;

/// Constant in front of the inverse Jacobi transform.
pub const INVERSION_CONSTANT: f64 = 0.5 / PI;

/// Human-readable form of [`INVERSION_CONSTANT`] for reports.
pub const INVERSION_CONVENTION: &str =
    "f(t) = (1/2pi) int_0^inf fhat(mu) phi_mu(t) |c(mu)|^-2 dmu, fhat(lambda) = int_0^inf f phi_lambda Delta dt";

/// Default spectral grid: 1500 log-spaced `μ` in `[1e-3, 1e2]`.
pub fn default_mu_grid() -> GridSpec {
    GridSpec {
        kind: GridKind::Log,
        min: 1e-3,
        max: 1e2,
        points: 1500,
    }
}

/// Default radius grid: 25 log-spaced `t` in `[1e-2, 10]`.
pub fn default_t_grid() -> GridSpec {
    GridSpec {
        kind: GridKind::Log,
        min: 1e-2,
        max: 10.0,
        points: 25,
    }
}

/// Upper radius beyond which `|f| e^{c t}` is negligible, where `c`
/// bounds the growth of `Δ |φ_λ|` (and `Δ` alone for norms). Profiles must
/// decay fast enough to beat it.
pub(crate) fn hyp_upper<F: RadialFunction + ?Sized>(f: &F, growth: f64) -> Result<f64> {
    match f.decay() {
        Some(DecayHint::Compact { radius }) => Ok(radius),
        Some(DecayHint::Gaussian { rate: a }) => {
            // a T² - c T >= 40 + c²/(4a): e^{-40} below the peak of e^{-a t² + c t}
            let c = growth;
            let k = 40.0 + c * c / (4.0 * a);
            Ok((c + (c * c + 4.0 * a * k).sqrt()) / (2.0 * a))
        }
        Some(DecayHint::Exponential { rate }) if rate > growth => Ok(40.0 / (rate - growth)),
        _ => Err(Error::Config(
            "profile decay does not beat the exponential volume growth of the space; \
             use a Gaussian, fast exponential or compactly supported profile"
                .into(),
        )),
    }
}

/// Growth rate of `Δ(t) |φ_{μ+iη}(t)|`.
pub(crate) fn transform_growth(order: &OrderPair, eta: f64) -> f64 {
    order.rho() + eta.abs()
}

/// Admissible strip `|η| <= ρ` for the corpus profiles.
pub(crate) fn check_strip(order: &OrderPair, eta: f64) -> Result<()> {
    if eta.abs() > order.rho() {
        return Err(Error::invalid(
            "eta",
            eta,
            format!(
                "spectral parameter must satisfy |eta| <= rho = {}",
                order.rho()
            ),
        ));
    }
    Ok(())
}
