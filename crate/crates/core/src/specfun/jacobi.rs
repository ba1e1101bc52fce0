//! Jacobi functions of the first kind.
//!
//! The hypergeometric path uses
//!
//! `φ_λ(t) = (cosh t)^{-(ρ+iλ)} ₂F₁(a, c-b; c; tanh² t)`, with
//! `a = (ρ+iλ)/2`, `b = (ρ-iλ)/2`, `c = α+1`,
//!
//! so the argument always lies in `[0, 1)`. Near `z = 0` the Gauss series is
//! summed directly. Further out the solution is carried along the real axis
//! by re-expanding it in Taylor series about successive centres, each
//! series generated from the hypergeometric equation itself; the step is
//! limited by the distance to the singular points and by the local
//! oscillation rate, so the number of steps grows like `|λ| t`. The
//! complement `1 - z = sech² t` is tracked separately and never formed by
//! subtraction.
//!
//! The ODE path integrates `u'' + (Δ'/Δ) u' + (λ² + ρ²) u = 0`,
//! `u(0) = 1`, `u'(0) = 0` with a 4-stage Gauss-Legendre collocation method
//! (order 8), started from the Frobenius expansion at the origin. It shares
//! no code with the hypergeometric path and exists to cross-check it.

use num_complex::Complex64;

use super::order::{OrderPair, SpectralPoint};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre;

/// Largest `t` accepted by [`jacobi_phi`].
pub const JACOBI_T_MAX: f64 = 20.0;

const PHASE_PER_STEP: f64 = 1.5;
const SERIES_PHASE: f64 = 3.0;
const SERIES_Z_MAX: f64 = 0.25;

type C = Complex64;

#[derive(Clone, Copy)]
struct HypParams {
    a: C,
    b: C,
    c: C,
    /// oscillation/growth rate in t used for step control
    rate: f64,
}

/// Value and z-derivative of the Gauss series at `z` (small).
fn gauss_series(p: &HypParams, z: f64) -> (C, C) {
    let mut term = C::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C::new(0.0, 0.0);
    let mut small = 0;
    for k in 0..2000 {
        let kf = k as f64;
        term *= (p.a + kf) * (p.b + kf) / ((p.c + kf) * (kf + 1.0)) * z;
        sum += term;
        dsum += term * ((kf + 1.0) / z);
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    if z == 0.0 {
        dsum = p.a * p.b / p.c;
    }
    (sum, dsum)
}

/// Taylor step of the hypergeometric equation from centre `(z0, w0)` by `h`.
/// The recurrence runs on the scaled terms `g_n = f_n h^n`, whose unscaled
/// coefficients would overflow close to `z = 1`.
fn taylor_step(p: &HypParams, z0: f64, w0: f64, f: C, df: C, h: f64) -> (C, C) {
    let s = z0 * w0;
    let lin = w0 - z0; // 1 - 2 z0
    let abp1 = p.a + p.b + 1.0;
    let mut g_n = f;
    let mut g_n1 = df * h;
    let mut val = g_n + g_n1;
    let mut der = g_n1; // h F'(z0 + h), scaled back at the end
    let mut small = 0;
    for n in 0..400 {
        let nf = n as f64;
        let g_n2 = ((p.a + nf) * (p.b + nf) * g_n * (h * h)
            - (lin * nf + p.c - abp1 * z0) * (nf + 1.0) * g_n1 * h)
            / (s * (nf + 1.0) * (nf + 2.0));
        let dterm = g_n2 * (nf + 2.0);
        val += g_n2;
        der += dterm;
        if g_n2.norm() <= 1e-17 * val.norm() && dterm.norm() <= 1e-17 * der.norm().max(val.norm()) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
        g_n = g_n1;
        g_n1 = g_n2;
    }
    (val, der / h)
}

fn ln_cosh(t: f64) -> f64 {
    let t = t.abs();
    t + (-2.0 * t).exp().ln_1p() - std::f64::consts::LN_2
}

fn params(order: &OrderPair, lambda: SpectralPoint) -> HypParams {
    let rho = order.rho();
    let il = C::new(0.0, 1.0) * lambda.as_complex();
    let a = (rho + il) * 0.5;
    let b = (rho - il) * 0.5;
    let c = C::new(order.alpha() + 1.0, 0.0);
    HypParams {
        a,
        b: c - b,
        c,
        rate: lambda.as_complex().norm().max(1e-3),
    }
}

fn check_t(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::invalid(
            "t",
            t,
            "radius must be finite and non-negative",
        ));
    }
    if t > JACOBI_T_MAX {
        return Err(Error::PrecisionLoss {
            what: "jacobi_phi",
            t,
            reason: "sech^2 t falls below double precision; continuation not trusted beyond t = 20",
        });
    }
    Ok(())
}

/// `φ_λ^{(α,β)}(t)` by the hypergeometric representation.
pub fn jacobi_phi(order: &OrderPair, lambda: SpectralPoint, t: f64) -> Result<Complex64> {
    Ok(jacobi_phi_many(order, lambda, &[t])?[0])
}

/// `φ_λ` at every entry of `ts` (any order), sharing one continuation sweep.
pub fn jacobi_phi_many(
    order: &OrderPair,
    lambda: SpectralPoint,
    ts: &[f64],
) -> Result<Vec<Complex64>> {
    for &t in ts {
        check_t(t)?;
    }
    if !(lambda.mu.is_finite() && lambda.eta.is_finite()) {
        return Err(Error::invalid(
            "lambda",
            lambda.mu,
            "spectral parameter must be finite",
        ));
    }
    let p = params(order, lambda);
    let mut idx: Vec<usize> = (0..ts.len()).collect();
    idx.sort_by(|&i, &j| ts[i].total_cmp(&ts[j]));
    let mut out = vec![C::new(0.0, 0.0); ts.len()];

    let z_series = (SERIES_PHASE / p.rate).powi(2).min(SERIES_Z_MAX);
    // continuation state: centre (z0, w0 = 1 - z0), value, derivative
    let mut state: Option<(f64, f64, C, C)> = None;

    for &i in &idx {
        let t = ts[i];
        let th = t.tanh();
        let z = th * th;
        let w = {
            let sech = 1.0 / t.cosh();
            sech * sech
        };
        let f = if z <= z_series {
            gauss_series(&p, z).0
        } else {
            let (mut z0, mut w0, mut f0, mut d0) = match state {
                Some(s) => s,
                None => {
                    let zs = z_series;
                    let (f0, d0) = gauss_series(&p, zs);
                    (zs, 1.0 - zs, f0, d0)
                }
            };
            loop {
                let remaining = if w < 0.5 { w0 - w } else { z - z0 };
                if remaining <= 0.0 {
                    break;
                }
                let radius = 0.5 * z0.min(w0);
                let phase = PHASE_PER_STEP * 2.0 * z0.sqrt() * w0 / p.rate;
                let hmax = radius.min(phase);
                if remaining <= hmax {
                    let (f1, d1) = taylor_step(&p, z0, w0, f0, d0, remaining);
                    z0 = z;
                    w0 = w;
                    f0 = f1;
                    d0 = d1;
                    break;
                }
                let (f1, d1) = taylor_step(&p, z0, w0, f0, d0, hmax);
                z0 += hmax;
                w0 -= hmax;
                f0 = f1;
                d0 = d1;
            }
            state = Some((z0, w0, f0, d0));
            f0
        };
        let pref = (-(p.a * 2.0) * ln_cosh(t)).exp();
        out[i] = pref * f;
    }
    Ok(out)
}

/// `φ_λ` by direct integration of the radial eigen-equation.
pub fn jacobi_phi_ode(order: &OrderPair, lambda: SpectralPoint, t: f64) -> Result<Complex64> {
    Ok(jacobi_phi_ode_many(order, lambda, &[t])?[0])
}

/// Butcher tableau of the s-stage Gauss-Legendre collocation method.
struct GaussTableau {
    c: Vec<f64>,
    b: Vec<f64>,
    a: Vec<Vec<f64>>,
}

fn gauss_tableau(s: usize) -> GaussTableau {
    let (x, w) = gauss_legendre(s);
    let c: Vec<f64> = x.iter().map(|xi| 0.5 * (1.0 + xi)).collect();
    let b: Vec<f64> = w.iter().map(|wi| 0.5 * wi).collect();
    let lagrange = |j: usize, tau: f64| -> f64 {
        (0..s)
            .filter(|&m| m != j)
            .map(|m| (tau - c[m]) / (c[j] - c[m]))
            .product()
    };
    let (qx, qw) = gauss_legendre(s + 2);
    let a = c
        .iter()
        .map(|&ci| {
            (0..s)
                .map(|j| {
                    qx.iter()
                        .zip(&qw)
                        .map(|(&xq, &wq)| 0.5 * ci * wq * lagrange(j, 0.5 * ci * (1.0 + xq)))
                        .sum()
                })
                .collect()
        })
        .collect();
    GaussTableau { c, b, a }
}

/// Solves the dense complex system `m x = rhs` in place (partial pivoting).
fn solve(mut m: Vec<Vec<C>>, mut rhs: Vec<C>) -> Vec<C> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm()))
            .unwrap_or(col);
        m.swap(col, piv);
        rhs.swap(col, piv);
        let d = m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / d;
            if factor == C::new(0.0, 0.0) {
                continue;
            }
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
            let r = rhs[col];
            rhs[row] -= factor * r;
        }
    }
    let mut x = vec![C::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

struct RadialOde {
    k_sinh: f64,
    k_cosh: f64,
    energy: C,
}

impl RadialOde {
    fn drift(&self, t: f64) -> f64 {
        self.k_sinh / t.tanh() + self.k_cosh * t.tanh()
    }

    /// One collocation step of size h from (u, v) at t.
    fn step(&self, tab: &GaussTableau, t: f64, h: f64, u: C, v: C) -> (C, C) {
        let s = tab.c.len();
        let n = 2 * s;
        let mut m = vec![vec![C::new(0.0, 0.0); n]; n];
        let mut rhs = vec![C::new(0.0, 0.0); n];
        // K_i = (ku_i, kv_i) = A_i (y + h Σ a_ij K_j), A = [[0, 1], [-E, -p]]
        for i in 0..s {
            let p = self.drift(t + tab.c[i] * h);
            let (ru, rv) = (2 * i, 2 * i + 1);
            m[ru][ru] += 1.0;
            m[rv][rv] += 1.0;
            for j in 0..s {
                let ha = h * tab.a[i][j];
                // ku_i - ha * kv_j = v
                m[ru][2 * j + 1] -= ha;
                // kv_i + ha * (E ku_j + p kv_j) = -E u - p v
                m[rv][2 * j] += self.energy * ha;
                m[rv][2 * j + 1] += ha * p;
            }
            rhs[ru] = v;
            rhs[rv] = -self.energy * u - v * p;
        }
        let k = solve(m, rhs);
        let mut un = u;
        let mut vn = v;
        for j in 0..s {
            un += k[2 * j] * (h * tab.b[j]);
            vn += k[2 * j + 1] * (h * tab.b[j]);
        }
        (un, vn)
    }
}

/// ODE-path values of `φ_λ` at every entry of `ts`.
pub fn jacobi_phi_ode_many(
    order: &OrderPair,
    lambda: SpectralPoint,
    ts: &[f64],
) -> Result<Vec<Complex64>> {
    for &t in ts {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::invalid(
                "t",
                t,
                "radius must be finite and non-negative",
            ));
        }
    }
    let (alpha, beta, rho) = (order.alpha(), order.beta(), order.rho());
    let lam = lambda.as_complex();
    let energy = lam * lam + rho * rho;
    let ode = RadialOde {
        k_sinh: 2.0 * alpha + 1.0,
        k_cosh: 2.0 * beta + 1.0,
        energy,
    };
    // Frobenius expansion u = 1 + u2 t^2 + u4 t^4 near the origin
    let k1 = (2.0 * alpha + 1.0) / 3.0 + (2.0 * beta + 1.0);
    let u2 = -energy / (4.0 * (alpha + 1.0));
    let u4 = -u2 * (energy + 2.0 * k1) / (8.0 * (alpha + 2.0));
    let series = |t: f64| -> (C, C) {
        let t2 = t * t;
        (
            1.0 + u2 * t2 + u4 * t2 * t2,
            u2 * (2.0 * t) + u4 * (4.0 * t * t2),
        )
    };
    let scale = energy.norm().sqrt().max(1.0);
    let t_start = (1e-3_f64.sqrt() / scale).min(5e-3);

    let tab = gauss_tableau(4);
    let mut idx: Vec<usize> = (0..ts.len()).collect();
    idx.sort_by(|&i, &j| ts[i].total_cmp(&ts[j]));
    let mut out = vec![C::new(0.0, 0.0); ts.len()];
    let (mut t, (mut u, mut v)) = (t_start, series(t_start));
    let rate = lam.norm().max(rho).max(1.0);
    for &i in &idx {
        let target = ts[i];
        if target <= t_start {
            out[i] = series(target).0;
            continue;
        }
        while t < target {
            let h = (0.2 / rate).min(0.25 * t).min(0.05).min(target - t);
            let (un, vn) = ode.step(&tab, t, h, u, v);
            u = un;
            v = vn;
            t = if target - t <= h { target } else { t + h };
        }
        out[i] = u;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3() -> OrderPair {
        OrderPair::new(0.5, -0.5).unwrap()
    }

    fn elementary(mu: f64, t: f64) -> f64 {
        if t == 0.0 {
            1.0
        } else if mu == 0.0 {
            t / t.sinh()
        } else {
            (mu * t).sin() / (mu * t.sinh())
        }
    }

    #[test]
    fn origin_is_one() {
        for &(a, b) in &[(0.5, -0.5), (1.0, 0.0), (2.5, 0.5)] {
            let o = OrderPair::new(a, b).unwrap();
            for &(mu, eta) in &[(0.0, 0.0), (3.0, 0.2), (40.0, -1.0)] {
                let v = jacobi_phi(&o, SpectralPoint::new(mu, eta), 0.0).unwrap();
                assert!((v - 1.0).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn elementary_h3_values() {
        let o = h3();
        let v = jacobi_phi(&o, SpectralPoint::real(2.0), 1.0).unwrap();
        assert!((v.re - 2.0_f64.sin() / (2.0 * 1.0_f64.sinh())).abs() < 1e-13);
        assert!((v.re - 0.386_869).abs() < 1e-6);
        for &mu in &[0.0, 0.3, 1.0, 7.5, 25.0, 50.0] {
            let ts: Vec<f64> = (0..=50).map(|i| 0.2 * i as f64).collect();
            let vals = jacobi_phi_many(&o, SpectralPoint::real(mu), &ts).unwrap();
            for (t, v) in ts.iter().zip(vals) {
                assert!(
                    (v.re - elementary(mu, *t)).abs() < 1e-11,
                    "mu = {mu}, t = {t}: {v}"
                );
                assert!(v.im.abs() < 1e-11);
            }
        }
    }

    #[test]
    fn i_rho_is_identically_one() {
        for &(a, b) in &[(0.5, -0.5), (1.0, 0.0), (2.5, 0.5)] {
            let o = OrderPair::new(a, b).unwrap();
            let ts = [0.1, 1.0, 5.0, 10.0, 19.0];
            let vals = jacobi_phi_many(&o, SpectralPoint::imaginary(o.rho()), &ts).unwrap();
            for v in vals {
                assert!((v - 1.0).norm() < 1e-12, "{v}");
            }
        }
    }

    #[test]
    fn rejects_large_t() {
        let e = jacobi_phi(&h3(), SpectralPoint::real(1.0), 25.0).unwrap_err();
        assert!(e.is_numerical());
        assert!(jacobi_phi(&h3(), SpectralPoint::real(1.0), -1.0).is_err());
    }

    #[test]
    fn ode_path_matches_elementary() {
        let o = h3();
        for &mu in &[0.0, 2.0, 50.0] {
            let ts = [1e-4, 0.5, 3.0, 10.0];
            let vals = jacobi_phi_ode_many(&o, SpectralPoint::real(mu), &ts).unwrap();
            for (t, v) in ts.iter().zip(vals) {
                assert!(
                    (v.re - elementary(mu, *t)).abs() < 1e-10,
                    "mu = {mu}, t = {t}: {v}"
                );
            }
        }
    }

    #[test]
    fn paths_agree_for_complex_lambda() {
        let o = OrderPair::new(1.0, 0.0).unwrap();
        let ts: Vec<f64> = (1..=20).map(|i| 0.5 * i as f64).collect();
        for &(mu, eta) in &[(0.0, 1.3), (4.0, -2.0), (33.0, 1.0), (0.0, -2.0)] {
            let lam = SpectralPoint::new(mu, eta);
            let a = jacobi_phi_many(&o, lam, &ts).unwrap();
            let b = jacobi_phi_ode_many(&o, lam, &ts).unwrap();
            for ((t, x), y) in ts.iter().zip(a).zip(b) {
                assert!(
                    (x - y).norm() < 1e-9,
                    "λ = {mu}+{eta}i, t = {t}: {x} vs {y}"
                );
            }
        }
    }
}
