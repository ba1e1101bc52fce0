use rayon::prelude::*;

use super::transform::{fourier_radial_with, radial_mass, FOURIER_REL_TOL};
use super::{Dimension, ExponentPair, RadialFunction};
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, GridKind, GridSpec};
use crate::specfun::bessel::one_minus_j_unchecked;

/// Default spectral grid: 2000 log-spaced radii in `[1e-4, 1e3]`.
pub fn default_spectral_grid() -> GridSpec {
    GridSpec {
        kind: GridKind::Log,
        min: 1e-4,
        max: 1e3,
        points: 2000,
    }
}

const PANEL_ORDER: usize = 6;
const CHUNK: usize = 64;
// transforms are computed to 1e-13 of the radial mass; below this they are noise
const NEGLIGIBLE: f64 = 1e-14;

/// `f̂` sampled on a log grid of `|ξ|`, with cubic interpolation in
/// `ln |ξ|` for the spectral integrals.
#[derive(Debug, Clone)]
pub struct SpectralTable {
    dim: Dimension,
    grid: GridSpec,
    rho: Vec<f64>,
    fhat: Vec<f64>,
    u0: f64,
    du: f64,
    rough: bool,
    gl: (Vec<f64>, Vec<f64>),
}

impl SpectralTable {
    pub fn new<F: RadialFunction + ?Sized>(
        f: &F,
        dim: &Dimension,
        grid: &GridSpec,
    ) -> Result<Self> {
        grid.validate()?;
        if grid.kind != GridKind::Log || grid.points < 8 {
            return Err(Error::Config(
                "spectral tables need a log grid with at least 8 points".into(),
            ));
        }
        let mass = radial_mass(f, dim)?;
        let tol = FOURIER_REL_TOL * mass.max(f64::MIN_POSITIVE);
        let rho = grid.nodes();
        let mut fhat = Vec::with_capacity(rho.len());
        let mut peak: f64 = 0.0;
        for chunk in rho.chunks(CHUNK) {
            let vals = chunk
                .par_iter()
                .map(|&r| fourier_radial_with(f, dim, r, tol).map(|q| q.value))
                .collect::<Result<Vec<f64>>>()?;
            let chunk_max = vals.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
            peak = peak.max(chunk_max);
            fhat.extend(vals);
            if chunk_max <= NEGLIGIBLE * peak {
                break;
            }
        }
        fhat.resize(rho.len(), 0.0);
        let u0 = grid.min.ln();
        let du = (grid.max.ln() - u0) / (grid.points - 1) as f64;
        Ok(SpectralTable {
            dim: *dim,
            grid: grid.clone(),
            rho,
            fhat,
            u0,
            du,
            rough: f.rough(),
            gl: gauss_legendre(PANEL_ORDER),
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dim(&self) -> &Dimension {
        &self.dim
    }

    /// Grid radii and `f̂` values.
    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.rho, &self.fhat)
    }

    /// `f̂(ρ)` by 4-point Lagrange interpolation in `ln ρ`.
    pub fn fhat_at(&self, rho: f64) -> f64 {
        let n = self.fhat.len();
        let x = (rho.ln() - self.u0) / self.du;
        let i = (x.floor() as isize).clamp(1, n as isize - 3) as usize;
        let s = x - i as f64;
        let (a, b, c, d) = (
            self.fhat[i - 1],
            self.fhat[i],
            self.fhat[i + 1],
            self.fhat[i + 2],
        );
        // nodes at s = -1, 0, 1, 2
        -a * s * (s - 1.0) * (s - 2.0) / 6.0 + b * (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0
            - c * (s + 1.0) * s * (s - 2.0) / 2.0
            + d * (s + 1.0) * s * (s - 1.0) / 6.0
    }

    /// `(ω ∫_0^∞ (w(ρ) |f̂(ρ)|)^q ρ^{n-1} dρ)^{1/q}`. `kinks` are radii
    /// where `w` is not smooth; `freq` is the oscillation rate of `w` in ρ.
    /// The integrand is divided by its largest grid value first, so that
    /// large `q` neither overflows nor underflows.
    /// Below the grid `f̂` is frozen at its first sample; above it the
    /// integral is extended only for rough profiles, by the power law
    /// `|f̂| ~ ρ^{-(n+1)/2}` fitted on the last octave of the grid.
    fn q_norm<W: Fn(f64) -> f64>(&self, q: f64, w: W, kinks: &[f64], freq: f64) -> Result<f64> {
        let scale = self
            .rho
            .iter()
            .zip(&self.fhat)
            .map(|(&r, f)| w(r) * f.abs())
            .fold(0.0, f64::max);
        if !(scale > 0.0) || !scale.is_finite() {
            return Ok(if scale.is_nan() { f64::NAN } else { scale });
        }
        let n1 = self.dim.n() as i32 - 1;
        let (gx, gw) = (&self.gl.0, &self.gl.1);
        let panel = |a: f64, b: f64, g: &dyn Fn(f64) -> f64| -> f64 {
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            gx.iter()
                .zip(gw)
                .map(|(x, wt)| wt * g(c + h * x))
                .sum::<f64>()
                * h
        };
        let split = |a: f64, b: f64| -> Vec<f64> {
            let mut pts = vec![a, b];
            pts.extend(kinks.iter().copied().filter(|k| *k > a && *k < b));
            pts.sort_by(f64::total_cmp);
            pts
        };
        let level = |r: f64, fhat: f64| (w(r) * fhat.abs() / scale).powf(q);

        // below the grid, in ρ
        let f0 = self.fhat[0];
        let low = |r: f64| level(r, f0) * r.powi(n1);
        let mut total: f64 = split(0.0, self.rho[0])
            .windows(2)
            .map(|p| panel(p[0], p[1], &low))
            .sum();

        // on the grid, in u = ln ρ
        let body = |u: f64| {
            let r = u.exp();
            level(r, self.fhat_at(r)) * (r.powi(n1) * r)
        };
        for i in 0..self.rho.len() - 1 {
            let pts = split(self.rho[i], self.rho[i + 1]);
            for p in pts.windows(2) {
                let (ua, ub) = (p[0].ln(), p[1].ln());
                let m = ((freq * (p[1] - p[0])) / 2.0).ceil().max(1.0) as usize;
                let h = (ub - ua) / m as f64;
                for k in 0..m {
                    total += panel(ua + k as f64 * h, ua + (k + 1) as f64 * h, &body);
                }
            }
        }

        if self.rough {
            let nf = self.dim.n() as f64;
            let k = q * (nf + 1.0) / 2.0 - (nf - 1.0);
            if !(k > 1.0) {
                return Err(Error::Config(format!(
                    "the transform of a profile with a jump decays like |ξ|^-(n+1)/2; \
                     its q = {q} integral diverges in dimension {}",
                    self.dim.n()
                )));
            }
            let rmax = self.grid.max;
            let lo = 0.5 * rmax;
            let mut acc = 0.0;
            let fitted = |u: f64| {
                let r = u.exp();
                (self.fhat_at(r).abs() / scale).powf(q) * r.powi(n1) * r.powf(k) * r
            };
            for i in 0..self.rho.len() - 1 {
                if self.rho[i] >= lo {
                    acc += panel(self.rho[i].ln(), self.rho[i + 1].ln(), &fitted);
                }
            }
            let a = acc / (rmax - lo);
            total += w(2.0 * rmax).powf(q) * a * rmax.powf(1.0 - k) / (k - 1.0);
        }
        Ok(scale * (self.dim.omega() * total).powf(1.0 / q))
    }

    /// Raw growth functional of the Fourier-growth inequality: for finite
    /// `q`, `(ω ∫ min{1,(tρ)^{2q}} |f̂|^q ρ^{n-1} dρ)^{1/q}`; for `p = 1`,
    /// `max_ρ min{1,(tρ)²} |f̂(ρ)|` over the grid.
    pub fn growth_lhs(&self, exps: &ExponentPair, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            return Ok(0.0);
        }
        let q = exps.q();
        if q.is_infinite() {
            return Ok(self
                .rho
                .iter()
                .zip(&self.fhat)
                .map(|(r, f)| (t * r).powi(2).min(1.0) * f.abs())
                .fold(0.0, f64::max));
        }
        self.q_norm(q, |r| (t * r).powi(2).min(1.0), &[1.0 / t], 0.0)
    }

    /// Tail functional over `|ξ| > 1/t` (maximum for `p = 1`).
    pub fn tail_lhs(&self, exps: &ExponentPair, t: f64) -> Result<f64> {
        check_t(t)?;
        if t == 0.0 {
            return Err(Error::invalid("t", t, "tail functional needs t > 0"));
        }
        let q = exps.q();
        let cut = 1.0 / t;
        if q.is_infinite() {
            return Ok(self
                .rho
                .iter()
                .zip(&self.fhat)
                .filter(|(r, _)| **r > cut)
                .map(|(_, f)| f.abs())
                .fold(0.0, f64::max));
        }
        self.q_norm(q, |r| if r > cut { 1.0 } else { 0.0 }, &[cut], 0.0)
    }

    /// `(ω ∫ |f̂|^q ρ^{n-1} dρ)^{1/q}`.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::invalid("q", q, "spectral norm needs finite q >= 1"));
        }
        self.q_norm(q, |_| 1.0, &[], 0.0)
    }

    /// `‖M^t f - f‖₂` through Plancherel:
    /// `((2π)^{-n} ω ∫ (1 - j(tρ))² |f̂|² ρ^{n-1} dρ)^{1/2}`.
    pub fn diff_norm_l2(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let alpha = self.dim.alpha_eq();
        let v = self.q_norm(2.0, |r| one_minus_j_unchecked(alpha, t * r).abs(), &[], t)?;
        Ok(v / (2.0 * std::f64::consts::PI).powf(self.dim.n() as f64 / 2.0))
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

/// [`SpectralTable::growth_lhs`] on the default spectral grid.
pub fn growth_lhs<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    exps: &ExponentPair,
    t: f64,
) -> Result<f64> {
    SpectralTable::new(f, dim, &default_spectral_grid())?.growth_lhs(exps, t)
}

/// [`SpectralTable::tail_lhs`] on the default spectral grid.
pub fn tail_lhs<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    exps: &ExponentPair,
    t: f64,
) -> Result<f64> {
    SpectralTable::new(f, dim, &default_spectral_grid())?.tail_lhs(exps, t)
}
