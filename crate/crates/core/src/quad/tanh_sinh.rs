//! Double-exponential (tanh-sinh) rule for `∫_a^b (b-y)^e f(y) dy`.
//!
//! The distance to each endpoint is formed directly from the node parameter
//! so the singular weight is evaluated without cancellation even when the
//! node is within a few ulps of `b`.

use std::f64::consts::FRAC_PI_2;

use super::{QuadConfig, QuadResult};

const MAX_LEVEL: u32 = 12;

struct Node {
    /// distance from a
    left: f64,
    /// distance to b
    right: f64,
    weight: f64,
}

fn node(u: f64, width: f64) -> Node {
    let s = FRAC_PI_2 * u.sinh();
    let ch = s.cosh();
    Node {
        left: width / (1.0 + (-2.0 * s).exp()),
        right: width / (1.0 + (2.0 * s).exp()),
        weight: 0.5 * width * FRAC_PI_2 * u.cosh() / (ch * ch),
    }
}

/// Sum of the integrand over `u = offset + k*step` for k = 0, 1, 2, ... and
/// the mirrored negative side, stopping once terms are negligible.
fn sweep<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    exponent: f64,
    offset: f64,
    step: f64,
    include_zero: bool,
    evals: &mut usize,
) -> f64 {
    let width = b - a;
    let mut term_at = |u: f64| -> Option<f64> {
        let nd = node(u, width);
        if nd.weight == 0.0 || nd.left <= 0.0 || nd.right <= 0.0 {
            return None;
        }
        let y = if nd.left <= nd.right {
            a + nd.left
        } else {
            b - nd.right
        };
        *evals += 1;
        let w = if exponent == 0.0 {
            1.0
        } else {
            nd.right.powf(exponent)
        };
        let v = nd.weight * w * f(y);
        if v.is_finite() {
            Some(v)
        } else {
            None
        }
    };

    let mut sum = 0.0;
    if include_zero {
        sum += term_at(0.0).unwrap_or(0.0);
    }
    for sign in [1.0, -1.0] {
        let mut k = if include_zero { 1u32 } else { 0u32 };
        let mut small_run = 0;
        loop {
            let u = sign * (offset + step * k as f64);
            if u.abs() > 7.0 {
                break;
            }
            match term_at(u) {
                Some(v) => {
                    sum += v;
                    if v.abs() <= 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
                        small_run += 1;
                        if small_run >= 3 {
                            break;
                        }
                    } else {
                        small_run = 0;
                    }
                }
                None => break,
            }
            k += 1;
        }
    }
    sum
}

pub(crate) fn integrate<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    exponent: f64,
    cfg: &QuadConfig,
) -> QuadResult {
    let mut evals = 0;
    let mut step = 1.0;
    let mut raw = sweep(f, a, b, exponent, 0.0, step, true, &mut evals);
    let mut estimate = raw * step;
    let mut error = f64::INFINITY;
    let mut converged = false;
    for level in 1..=MAX_LEVEL {
        // refine: add the midpoints of the previous level
        step *= 0.5;
        raw += sweep(f, a, b, exponent, step, 2.0 * step, false, &mut evals);
        let next = raw * step;
        error = (next - estimate).abs();
        estimate = next;
        if level >= 3 && error <= cfg.abs_tol.max(cfg.rel_tol * estimate.abs()) {
            converged = true;
            break;
        }
    }
    QuadResult {
        value: estimate,
        error_estimate: error,
        nodes_used: evals,
        converged,
        truncation: None,
    }
}
