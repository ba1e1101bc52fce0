//! The normalized spherical Bessel function
//! `j_α(x) = 2^α Γ(α+1) x^{-α} J_α(x)` for real `α > -1/2`.
//!
//! Three evaluation regimes:
//! * `x <= SERIES_MAX`: the power series `Σ (-x²/4)^k / (k! (α+1)_k)`;
//! * large `x` relative to `α²`: Hankel's asymptotic expansion, accepted only
//!   when its terms fall below double precision before they start to grow;
//! * otherwise: Miller's backward recurrence normalized by the Neumann sum
//!   `(x/2)^α = Σ_k (α+2k) Γ(α+k)/k! J_{α+2k}(x)`.
//!
//! `1 - j_α` has its own series branch for small `x`, and both `j_α` and
//! `1 - j_α` can be computed independently from the Mehler integral.

use std::f64::consts::{FRAC_1_PI, PI};

use super::gamma::ln_gamma;
use crate::error::{Error, Result};
use crate::quad::{self, QuadConfig};

const SERIES_MAX: f64 = 8.0;
/// Below this `1 - j_α` is summed directly from its series.
pub const ONE_MINUS_SERIES_MAX: f64 = 2.0;
/// Crossover from power series / recurrence to the asymptotic expansion.
pub const ASYMPTOTIC_MIN: f64 = 30.0;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -0.5 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "alpha",
            alpha,
            "Bessel order must exceed -1/2",
        ))
    }
}

fn check_x(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x.abs())
    } else {
        Err(Error::invalid("x", x, "argument must be finite"))
    }
}

/// `Σ_{k>=first} (-x²/4)^k / (k! (α+1)_k)`.
fn series(alpha: f64, x: f64, first: usize) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    for k in 0..first {
        let kf = k as f64 + 1.0;
        term *= q / (kf * (alpha + kf));
    }
    let mut sum = 0.0;
    let mut k = first;
    loop {
        sum += term;
        let kf = k as f64 + 1.0;
        term *= q / (kf * (alpha + kf));
        if term.abs() <= 1e-17 * sum.abs() || k > 500 {
            break;
        }
        k += 1;
    }
    sum
}

/// Hankel expansion for `J_α(x)`; `None` when the asymptotic series cannot
/// reach double precision at this `x`.
fn hankel_j(alpha: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * alpha * alpha;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    let mut done = false;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        let mag = term.abs();
        if mag == 0.0 {
            done = true;
            break;
        }
        if mag > prev && (k as f64) > alpha + 1.0 {
            return None;
        }
        prev = mag;
        // P collects even k, Q odd k, with alternating signs in pairs
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if mag < 1e-17 * p.abs().max(q.abs()).max(1e-300) {
            done = true;
            break;
        }
    }
    if !done {
        return None;
    }
    let phase = (0.5 * alpha + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_w = cx * cp + sx * sp;
    let sin_w = sx * cp - cx * sp;
    Some((2.0 * FRAC_1_PI / x).sqrt() * (p * cos_w - q * sin_w))
}

/// Miller's backward recurrence for `j_α(x)`, any `x > 0`.
fn miller(alpha: f64, x: f64) -> f64 {
    let start = (x + 40.0 + 8.0 * x.cbrt()).ceil() as usize;
    let start = start + (start % 2);
    let mut next = 0.0; // y_{k+1}
    let mut cur = 1e-280; // y_k
    let mut norm = 0.0;
    // g_k = Γ(α+k) / (k! Γ(α+1)) for the even indices 2m = k, accumulated
    // as we walk down; easier to precompute weights.
    let weights: Vec<f64> = {
        let mut w = vec![0.0; start / 2 + 1];
        let mut g = 1.0;
        for m in 1..=start / 2 {
            if m > 1 {
                g *= (alpha + (m - 1) as f64) / m as f64;
            }
            w[m] = (alpha + 2.0 * m as f64) * g;
        }
        w
    };
    let mut k = start;
    loop {
        if k % 2 == 0 && k > 0 {
            norm += weights[k / 2] * cur;
        }
        if k == 0 {
            norm += cur;
            return cur / norm;
        }
        let nu = alpha + k as f64;
        let prev = 2.0 * nu / x * cur - next;
        next = cur;
        cur = prev;
        k -= 1;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
        }
    }
}

fn j_unchecked(alpha: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if x <= SERIES_MAX {
        return series(alpha, x, 0);
    }
    if x >= ASYMPTOTIC_MIN {
        if let Some(j) = hankel_j(alpha, x) {
            let scale =
                (alpha * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) - alpha * x.ln()).exp();
            return scale * j;
        }
    }
    miller(alpha, x)
}

/// `j_α(x)`; even in `x`, equal to 1 at the origin.
pub fn bessel_j_norm(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let x = check_x(x)?;
    Ok(j_unchecked(alpha, x))
}

/// `1 - j_α(x)` without cancellation at small `x`.
pub fn one_minus_j(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let x = check_x(x)?;
    Ok(one_minus_j_unchecked(alpha, x))
}

pub(crate) fn one_minus_j_unchecked(alpha: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x <= ONE_MINUS_SERIES_MAX {
        -series(alpha, x, 1)
    } else {
        1.0 - j_unchecked(alpha, x)
    }
}

pub(crate) fn j_fast(alpha: f64, x: f64) -> f64 {
    j_unchecked(alpha, x.abs())
}

/// `2Γ(α+1) / (√π Γ(α+1/2))`, the Mehler normalization.
pub fn mehler_prefactor(alpha: f64) -> f64 {
    2.0 * (ln_gamma(alpha + 1.0) - ln_gamma(alpha + 0.5)).exp() / PI.sqrt()
}

fn mehler_integral<G: Fn(f64) -> f64>(alpha: f64, g: G, tol: f64) -> Result<f64> {
    let e = alpha - 0.5;
    let cfg = QuadConfig::relative(tol, tol * 1e-3);
    let integrand = |y: f64| (1.0 + y).powf(e) * g(y);
    let res = quad::integrate_endpoint_singular_with(&integrand, 0.0, 1.0, e, &cfg)?;
    if !res.converged && res.error_estimate > tol {
        return Err(Error::NonConvergence {
            what: format!("Mehler integral (alpha = {alpha})"),
            error_estimate: res.error_estimate,
        });
    }
    Ok(res.value)
}

/// `j_α(x)` from the Mehler integral
/// `c_α ∫_0^1 (1-y²)^{α-1/2} cos(xy) dy`, with the endpoint singularity
/// at `y = 1` absorbed by the tanh-sinh weight.
pub fn mehler_j(alpha: f64, x: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let x = check_x(x)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", tol, "tolerance must be positive"));
    }
    let c = mehler_prefactor(alpha);
    Ok(c * mehler_integral(alpha, |y| (x * y).cos(), tol / c.max(1.0))?)
}

/// `1 - j_α(x) = 2 c_α ∫_0^1 (1-y²)^{α-1/2} sin²(xy/2) dy`.
pub fn mehler_one_minus_j(alpha: f64, x: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let x = check_x(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    let c = 2.0 * mehler_prefactor(alpha);
    Ok(c * mehler_integral(
        alpha,
        |y| {
            let s = (0.5 * x * y).sin();
            s * s
        },
        tol,
    )?)
}
