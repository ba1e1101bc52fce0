//! Deterministic quadrature used by every transform and norm computation.
//!
//! * [`integrate_finite`]: globally adaptive Gauss-Kronrod 7/15, bisection
//!   depth capped at [`MAX_DEPTH`].
//! * [`integrate_endpoint_singular`]: tanh-sinh for integrands carrying an
//!   algebraic weight `(b - y)^e`, `e > -1`.
//! * [`integrate_semi_infinite`]: truncation driven by a [`DecayHint`], then
//!   adaptive integration of the finite part.
//!
//! All routines are sequential per call; identical inputs give bit-identical
//! [`QuadResult`]s.

mod grid;
mod kronrod;
mod legendre;
mod tanh_sinh;

use serde::{Deserialize, Serialize};

pub use grid::{GridKind, GridSpec};
pub use legendre::{gauss_legendre, CompositeRule};

use crate::error::{Error, Result};

/// Maximum bisection depth of the adaptive Kronrod rule.
pub const MAX_DEPTH: u32 = 40;
/// Points of the nested rule (Kronrod 15 with embedded Gauss 7).
pub const RULE_POINTS: usize = kronrod::RULE_POINTS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub max_segments: usize,
}

impl QuadConfig {
    pub fn absolute(tol: f64) -> Self {
        QuadConfig {
            abs_tol: tol,
            rel_tol: 0.0,
            ..Default::default()
        }
    }

    pub fn relative(rel_tol: f64, abs_tol: f64) -> Self {
        QuadConfig {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_depth: MAX_DEPTH,
            max_segments: 20_000,
        }
    }
}

/// Where a semi-infinite integral was cut and the tail bound used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub upper: f64,
    pub tail_bound: f64,
    pub formula: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes_used: usize,
    pub converged: bool,
    pub truncation: Option<Truncation>,
}

impl QuadResult {
    /// Turns a non-converged result into an error.
    pub fn ok(self, what: &str) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                what: what.to_string(),
                error_estimate: self.error_estimate,
            })
        }
    }
}

/// Asymptotic decay of an integrand, used to pick a truncation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DecayHint {
    /// `|f(r)| <~ exp(-rate r^2)`
    Gaussian { rate: f64 },
    /// `|f(r)| <~ exp(-rate r)`
    Exponential { rate: f64 },
    /// `|f(r)| <~ r^(-power)`, needs `power > 1`
    Polynomial { power: f64 },
    /// `f(r) = 0` for `r > radius`
    Compact { radius: f64 },
}

fn check_interval(a: f64, b: f64, tol: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::invalid("b - a", b - a, "need finite a < b"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", tol, "tolerance must be positive"));
    }
    Ok(())
}

/// `∫_a^b f` to absolute tolerance `tol`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    check_interval(a, b, tol)?;
    Ok(kronrod::adaptive(&f, &[a, b], &QuadConfig::absolute(tol)))
}

/// Adaptive integration over `[breaks[0], breaks[last]]` with forced
/// subdivision at every interior breakpoint (kinks, discontinuities).
pub fn integrate_with_breaks<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> QuadResult {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    if pts.len() < 2 {
        return QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            nodes_used: 0,
            converged: true,
            truncation: None,
        };
    }
    kronrod::adaptive(f, &pts, cfg)
}

/// `∫_a^b (b - y)^exponent f(y) dy` with `f` smooth on `[a, b]`.
pub fn integrate_endpoint_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    exponent: f64,
    tol: f64,
) -> Result<QuadResult> {
    integrate_endpoint_singular_with(&f, a, b, exponent, &QuadConfig::absolute(tol))
}

pub fn integrate_endpoint_singular_with<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    exponent: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    check_interval(a, b, cfg.abs_tol.max(cfg.rel_tol))?;
    if !(exponent > -1.0) || !exponent.is_finite() {
        return Err(Error::invalid(
            "exponent",
            exponent,
            "endpoint weight must be integrable (exponent > -1)",
        ));
    }
    Ok(tanh_sinh::integrate(f, a, b, exponent, cfg))
}

const TAIL_SAMPLES: usize = 32;
const MAX_UPPER: f64 = 1e7;

/// Upper cut-off `T >= a` and its tail bound for the given decay.
///
/// The bound uses the largest sampled `|f|` on `[T, 2T]` as the envelope
/// amplitude, so it is an estimate rather than a rigorous bound for
/// integrands that are not eventually monotone.
pub fn truncation_point<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    decay: DecayHint,
    tail_tol: f64,
) -> Result<Truncation> {
    let envelope = |t: f64| -> f64 {
        let hi = if t > 0.0 { 2.0 * t } else { t + 1.0 };
        (0..=TAIL_SAMPLES)
            .map(|i| f(t + (hi - t) * i as f64 / TAIL_SAMPLES as f64).abs())
            .fold(0.0, f64::max)
    };
    let (mut t, step, formula): (f64, Box<dyn Fn(f64) -> f64>, &'static str) = match decay {
        DecayHint::Compact { radius } => {
            return Ok(Truncation {
                upper: radius.max(a),
                tail_bound: 0.0,
                formula: "compact support",
            })
        }
        DecayHint::Gaussian { rate } => {
            positive("gaussian decay rate", rate)?;
            let s = 1.0 / rate.sqrt();
            (
                a.max(0.0) + s,
                Box::new(move |t| t + 0.5 * s),
                "sup|f| on [T,2T] / (2 rate T)",
            )
        }
        DecayHint::Exponential { rate } => {
            positive("exponential decay rate", rate)?;
            (
                a + 1.0 / rate,
                Box::new(move |t| t + 1.0 / rate),
                "sup|f| on [T,2T] / rate",
            )
        }
        DecayHint::Polynomial { power } => {
            if !(power > 1.0) {
                return Err(Error::invalid(
                    "power",
                    power,
                    "polynomial decay must beat r^-1 for a finite tail",
                ));
            }
            (
                a.abs().max(1.0) * 2.0,
                Box::new(|t| 2.0 * t),
                "sup|f| on [T,2T] T / (power-1)",
            )
        }
    };
    loop {
        let env = envelope(t);
        let bound = 2.0
            * match decay {
                DecayHint::Gaussian { rate } => env / (2.0 * rate * t.max(1.0 / rate.sqrt())),
                DecayHint::Exponential { rate } => env / rate,
                DecayHint::Polynomial { power } => env * t / (power - 1.0),
                DecayHint::Compact { .. } => 0.0,
            };
        if bound <= tail_tol {
            return Ok(Truncation {
                upper: t,
                tail_bound: bound,
                formula,
            });
        }
        if t > MAX_UPPER {
            return Err(Error::NonConvergence {
                what: format!("tail truncation ({formula})"),
                error_estimate: bound,
            });
        }
        t = step(t);
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be positive"))
    }
}

/// `∫_a^∞ f`: truncate where the hinted tail falls below `tol/2`, then
/// integrate the finite part to `tol/2`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay: DecayHint,
    tol: f64,
) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", tol, "tolerance must be positive"));
    }
    let trunc = truncation_point(&f, a, decay, 0.5 * tol)?;
    let mut res = if trunc.upper > a {
        kronrod::adaptive(&f, &[a, trunc.upper], &QuadConfig::absolute(0.5 * tol))
    } else {
        QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            nodes_used: 0,
            converged: true,
            truncation: None,
        }
    };
    res.error_estimate += trunc.tail_bound;
    res.truncation = Some(trunc);
    Ok(res)
}
