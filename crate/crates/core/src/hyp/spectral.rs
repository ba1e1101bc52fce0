use num_complex::Complex64;
use rayon::prelude::*;

use super::transform::{forward_rule, inverse_on_nodes, spectral_rule};
use super::{check_strip, default_mu_grid};
use crate::error::{Error, Result};
use crate::euclid::RadialFunction;
use crate::quad::{GridKind, GridSpec};
use crate::specfun::{dp_half_width, jacobi_phi_many, OrderPair, SpectralPoint};

const CHUNK: usize = 64;
// forward quadrature noise sits near 1e-16 of the peak
const NEGLIGIBLE: f64 = 1e-14;
const MEAN_CHUNK: usize = 32;

/// `f̂(μ + iη)` sampled on a log grid of `μ`, together with the spectral
/// rule used for Plancherel-type integrals (real line only).
#[derive(Debug, Clone)]
pub struct HypSpectralTable {
    order: OrderPair,
    grid: GridSpec,
    eta: f64,
    mu: Vec<f64>,
    fhat: Vec<Complex64>,
    u0: f64,
    du: f64,
    // spectral rule: nodes, weights with |c|^{-2}/2π, interpolated f̂
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl HypSpectralTable {
    pub fn new<F: RadialFunction + ?Sized>(
        f: &F,
        order: &OrderPair,
        grid: &GridSpec,
        eta: f64,
    ) -> Result<Self> {
        grid.validate()?;
        if grid.kind != GridKind::Log || grid.points < 8 {
            return Err(Error::Config(
                "spectral tables need a log grid with at least 8 points".into(),
            ));
        }
        check_strip(order, eta)?;
        let mu = grid.nodes();
        let transform = |m: f64| -> Result<Complex64> {
            let lambda = SpectralPoint::new(m, eta);
            let (ts, ws) = forward_rule(f, order, lambda.as_complex().norm(), eta)?;
            if ts.is_empty() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let phi = jacobi_phi_many(order, lambda, &ts)?;
            Ok(phi.iter().zip(&ws).map(|(p, w)| p * w).sum())
        };
        // chunks in increasing μ; once a whole chunk is negligible the
        // transform has decayed for good and the rest is left at zero
        let mut fhat = Vec::with_capacity(mu.len());
        let mut peak: f64 = 0.0;
        for chunk in mu.chunks(CHUNK) {
            let vals = chunk
                .par_iter()
                .map(|&m| transform(m))
                .collect::<Result<Vec<_>>>()?;
            let chunk_max = vals.iter().fold(0.0, |a: f64, v| a.max(v.norm()));
            peak = peak.max(chunk_max);
            fhat.extend(vals);
            if chunk_max <= NEGLIGIBLE * peak {
                break;
            }
        }
        fhat.resize(mu.len(), Complex64::new(0.0, 0.0));
        let u0 = grid.min.ln();
        let du = (grid.max.ln() - u0) / (grid.points - 1) as f64;
        let mut table = HypSpectralTable {
            order: *order,
            grid: grid.clone(),
            eta,
            mu,
            fhat,
            u0,
            du,
            nodes: Vec::new(),
            weights: Vec::new(),
            values: Vec::new(),
        };
        if eta == 0.0 {
            let (nodes, weights) = spectral_rule(order, grid)?;
            table.values = nodes.iter().map(|&m| table.fhat_at(m).re).collect();
            table.nodes = nodes;
            table.weights = weights;
        }
        Ok(table)
    }

    /// Table on the default `μ` grid and the real line.
    pub fn real_line<F: RadialFunction + ?Sized>(f: &F, order: &OrderPair) -> Result<Self> {
        Self::new(f, order, &default_mu_grid(), 0.0)
    }

    pub fn order(&self) -> &OrderPair {
        &self.order
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn samples(&self) -> (&[f64], &[Complex64]) {
        (&self.mu, &self.fhat)
    }

    /// `f̂(μ + iη)` by 4-point Lagrange interpolation in `ln μ`, frozen at
    /// the first sample below the grid and zero above it.
    pub fn fhat_at(&self, mu: f64) -> Complex64 {
        if mu <= self.mu[0] {
            return self.fhat[0];
        }
        if mu > self.grid.max * (1.0 + 1e-12) {
            return Complex64::new(0.0, 0.0);
        }
        let n = self.fhat.len();
        let x = (mu.ln() - self.u0) / self.du;
        let i = (x.floor() as isize).clamp(1, n as isize - 3) as usize;
        let s = x - i as f64;
        let (a, b, c, d) = (
            self.fhat[i - 1],
            self.fhat[i],
            self.fhat[i + 1],
            self.fhat[i + 2],
        );
        a * (-s * (s - 1.0) * (s - 2.0) / 6.0)
            + b * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0)
            + c * (-(s + 1.0) * s * (s - 2.0) / 2.0)
            + d * ((s + 1.0) * s * (s - 1.0) / 6.0)
    }

    fn require_real_line(&self, what: &str) -> Result<()> {
        if self.eta != 0.0 {
            return Err(Error::Config(format!(
                "{what} needs a table on the real line (eta = 0)"
            )));
        }
        Ok(())
    }

    /// `(1/2π) ∫ w(μ) |f̂(μ)|² |c(μ)|^{-2} dμ`.
    fn plancherel<W: Fn(f64) -> f64>(&self, w: W) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&m, &wt), &v)| wt * w(m) * v * v)
            .sum()
    }

    /// `‖f‖_{L²(Δ dt)}` through the Plancherel identity.
    pub fn l2_norm(&self) -> Result<f64> {
        self.require_real_line("the spectral L² norm")?;
        Ok(self.plancherel(|_| 1.0).sqrt())
    }

    /// `((1/2π) ∫ min{1,(μt)⁴} |f̂(μ)|² |c(μ)|^{-2} dμ)^{1/2}`.
    pub fn theorem6_lhs(&self, t: f64) -> Result<f64> {
        self.require_real_line("the Theorem 6 functional")?;
        check_t(t)?;
        Ok(self.plancherel(|m| (m * t).powi(4).min(1.0)).sqrt())
    }

    /// `sup_μ min{1,(tμ)²} |f̂(μ+iη)|` over the grid.
    pub fn theorem5_lhs(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        Ok(self
            .mu
            .iter()
            .zip(&self.fhat)
            .map(|(m, f)| (t * m).powi(2).min(1.0) * f.norm())
            .fold(0.0, f64::max))
    }

    /// `sup_{μ > 1/t} |f̂(μ+iη)|` over the grid.
    pub fn tail_sup(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            return Err(Error::invalid("t", t, "tail functional needs t > 0"));
        }
        Ok(self
            .mu
            .iter()
            .zip(&self.fhat)
            .filter(|(m, _)| **m > 1.0 / t)
            .map(|(_, f)| f.norm())
            .fold(0.0, f64::max))
    }

    /// `((1/2π) ∫_{μ > 1/t} |f̂(μ)|² |c(μ)|^{-2} dμ)^{1/2}`.
    pub fn tail_l2(&self, t: f64) -> Result<f64> {
        self.require_real_line("the spectral tail norm")?;
        check_t(t)?;
        if t == 0.0 {
            return Err(Error::invalid("t", t, "tail functional needs t > 0"));
        }
        Ok(self
            .plancherel(|m| if m * t > 1.0 { 1.0 } else { 0.0 })
            .sqrt())
    }

    /// `‖M^t f - f‖₂` through Plancherel, for every `t` in `ts`:
    /// `((1/2π) ∫ |1 - φ_μ(t)|² |f̂|² |c|^{-2} dμ)^{1/2}`.
    pub fn diff_norm_l2_many(&self, ts: &[f64]) -> Result<Vec<f64>> {
        self.require_real_line("the spectral difference norm")?;
        for &t in ts {
            check_t(t)?;
        }
        let total = self.plancherel(|_| 1.0);
        let rows = self
            .nodes
            .par_iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((&m, &w), &v)| {
                // |1 - φ|² <= 4
                if 4.0 * w * v * v <= 1e-30 * total {
                    return Ok(vec![0.0; ts.len()]);
                }
                let phi = jacobi_phi_many(&self.order, SpectralPoint::real(m), ts)?;
                Ok(phi
                    .iter()
                    .map(|p| w * v * v * (1.0 - p.re).powi(2))
                    .collect())
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        let mut out = vec![0.0; ts.len()];
        for row in rows {
            for (o, r) in out.iter_mut().zip(row) {
                *o += r;
            }
        }
        Ok(out.into_iter().map(f64::sqrt).collect())
    }

    pub fn diff_norm_l2(&self, t: f64) -> Result<f64> {
        Ok(self.diff_norm_l2_many(&[t])?[0])
    }

    /// Inverse transform of the table at the radii `ss`.
    pub fn inverse_many(&self, ss: &[f64]) -> Result<Vec<f64>> {
        self.require_real_line("the inverse transform")?;
        inverse_on_nodes(&self.order, &self.nodes, &self.weights, &self.values, ss)
    }

    /// `M^t f` at the radii `ss`, as the inverse transform of `φ_μ(t) f̂(μ)`.
    /// Valid for every order.
    pub fn spherical_mean_many(&self, t: f64, ss: &[f64]) -> Result<Vec<f64>> {
        Ok(self.spherical_means(&[t], ss)?.remove(0))
    }

    /// `M^t f(s)` for every `t` in `ts` (outer index) and `s` in `ss`; each
    /// spectral node's `φ_μ` is evaluated once for all radii.
    pub fn spherical_means(&self, ts: &[f64], ss: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.require_real_line("the spectral spherical mean")?;
        for &t in ts {
            check_t(t)?;
        }
        let top = self
            .weights
            .iter()
            .zip(&self.values)
            .fold(0.0, |a: f64, (w, v)| a.max((w * v).abs()));
        let live: Vec<(f64, f64)> = self
            .nodes
            .iter()
            .zip(self.weights.iter().zip(&self.values))
            .map(|(&m, (&w, &v))| (m, w * v))
            .filter(|(_, c)| c.abs() > 1e-17 * top)
            .collect();
        // fixed chunks summed in order keep the result independent of threads
        let partial = live
            .par_chunks(MEAN_CHUNK)
            .map(|chunk| {
                let mut acc = vec![vec![0.0; ss.len()]; ts.len()];
                for &(m, c) in chunk {
                    let lam = SpectralPoint::real(m);
                    let at_t = jacobi_phi_many(&self.order, lam, ts)?;
                    let at_s = jacobi_phi_many(&self.order, lam, ss)?;
                    for (row, pt) in acc.iter_mut().zip(&at_t) {
                        let k = c * pt.re;
                        for (o, ps) in row.iter_mut().zip(&at_s) {
                            *o += k * ps.re;
                        }
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![vec![0.0; ss.len()]; ts.len()];
        for acc in partial {
            for (row, add) in out.iter_mut().zip(acc) {
                for (o, a) in row.iter_mut().zip(add) {
                    *o += a;
                }
            }
        }
        Ok(out)
    }
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "t",
            t,
            "radius must be finite and non-negative",
        ))
    }
}

/// [`HypSpectralTable::theorem6_lhs`] on the default grid.
pub fn theorem6_lhs<F: RadialFunction + ?Sized>(f: &F, order: &OrderPair, t: f64) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    HypSpectralTable::real_line(f, order)?.theorem6_lhs(t)
}

/// [`HypSpectralTable::theorem5_lhs`] on the default grid, after checking
/// `|η| < (2/p - 1) ρ`.
pub fn theorem5_lhs<F: RadialFunction + ?Sized>(
    f: &F,
    order: &OrderPair,
    p: f64,
    eta: f64,
    t: f64,
) -> Result<f64> {
    if !(1.0..2.0).contains(&p) {
        return Err(Error::invalid("p", p, "Theorem 5 needs p in [1, 2)"));
    }
    let width = dp_half_width(p, order.rho());
    if !(eta.abs() < width) {
        return Err(Error::invalid(
            "eta",
            eta,
            format!("must satisfy |eta| < (2/p - 1) rho = {width}"),
        ));
    }
    check_t(t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    HypSpectralTable::new(f, order, &default_mu_grid(), eta)?.theorem5_lhs(t)
}
