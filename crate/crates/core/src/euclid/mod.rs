//! Radial harmonic analysis on `R^n`: the radial Fourier transform,
//! spherical means, `L^p` norms, moduli of continuity and the growth
//! functionals of the Fourier-growth inequalities.
//!
//! Fourier convention: `f̂(ξ) = ∫ f(x) e^{-i x·ξ} dx`, so Plancherel reads
//! `‖f̂‖₂² = (2π)^n ‖f‖₂²`. The functionals here are raw; the
//! certification layer applies the `(2π)^{-n/q}` factors explicitly.

mod mean;
mod profile;
mod spectral;
mod transform;

use serde::{Deserialize, Serialize};

pub use mean::{
    diff_norm, lp_norm_radial, modulus_omega, spherical_mean_radial, Modulus, SphericalMean,
};
pub use profile::{RadialFunction, RadialProfile, SampledProfile};
pub use spectral::{default_spectral_grid, growth_lhs, tail_lhs, SpectralTable};
pub use transform::{fourier_radial, fourier_radial_with};

use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, truncation_point, DecayHint, QuadConfig, QuadResult};
use crate::specfun::gamma::ln_gamma;

/// Euclidean dimension with its Bessel order and sphere measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension {
    n: u32,
    alpha_eq: f64,
    omega: f64,
}

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(
                "n",
                n as f64,
                "dimension must be at least 2",
            ));
        }
        let nf = n as f64;
        let omega = 2.0 * (0.5 * nf * std::f64::consts::PI.ln() - ln_gamma(0.5 * nf)).exp();
        Ok(Dimension {
            n,
            alpha_eq: (nf - 2.0) / 2.0,
            omega,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Bessel order `(n-2)/2` of the spherical-mean multiplier.
    pub fn alpha_eq(&self) -> f64 {
        self.alpha_eq
    }

    /// Surface measure `2π^{n/2}/Γ(n/2)` of `S^{n-1}`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Normalization of `sin^{n-2}θ dθ` on `[0, π]`.
    pub(crate) fn sphere_weight(&self) -> f64 {
        let nf = self.n as f64;
        (ln_gamma(0.5 * nf) - ln_gamma(0.5 * (nf - 1.0))).exp() / std::f64::consts::PI.sqrt()
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Dimension::new(n)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.n
    }
}

/// `p ∈ [1, 2]` and its conjugate `q` (`∞` for `p = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    pub fn new(p: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&p) {
            return Err(Error::invalid("p", p, "exponent must lie in [1, 2]"));
        }
        let q = if p == 1.0 {
            f64::INFINITY
        } else {
            p / (p - 1.0)
        };
        Ok(ExponentPair { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl TryFrom<f64> for ExponentPair {
    type Error = Error;
    fn try_from(p: f64) -> Result<Self> {
        ExponentPair::new(p)
    }
}

impl From<ExponentPair> for f64 {
    fn from(e: ExponentPair) -> f64 {
        e.p
    }
}

/// Effective upper limit for a radial integrand with the given decay.
pub(crate) fn radial_upper<G: Fn(f64) -> f64 + ?Sized>(
    g: &G,
    decay: DecayHint,
    shift: f64,
    tail_tol: f64,
) -> Result<f64> {
    match decay {
        DecayHint::Compact { radius } => Ok(radius + shift),
        DecayHint::Gaussian { rate } => Ok(shift + (40.0 / rate).sqrt()),
        DecayHint::Exponential { rate } => Ok(shift + 40.0 / rate),
        DecayHint::Polynomial { .. } => Ok(truncation_point(g, shift, decay, tail_tol)?.upper),
    }
}

/// `∫_0^upper g` with forced breaks, failing on non-convergence.
pub(crate) fn radial_integral<G: Fn(f64) -> f64 + ?Sized>(
    g: &G,
    upper: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
    what: &str,
) -> Result<QuadResult> {
    if upper <= 0.0 {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            nodes_used: 0,
            converged: true,
            truncation: None,
        });
    }
    let mut pts = vec![0.0, upper];
    pts.extend(breaks.iter().copied().filter(|b| *b > 0.0 && *b < upper));
    let res = integrate_with_breaks(g, &pts, cfg);
    if !res.value.is_finite() {
        return Err(Error::NonConvergence {
            what: format!("{what} (non-finite integrand)"),
            error_estimate: f64::INFINITY,
        });
    }
    res.ok(what)?;
    Ok(res)
}
