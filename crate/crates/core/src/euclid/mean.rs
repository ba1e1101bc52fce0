use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use super::{radial_integral, radial_upper, Dimension, RadialFunction};
use crate::error::{Error, Result};
use crate::quad::{integrate_with_breaks, DecayHint, GridSpec, QuadConfig};

/// Points of the `t`-grid used by [`modulus_omega`].
pub const MODULUS_POINTS: usize = 33;

fn check_radius(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            v,
            "radius must be finite and non-negative",
        ))
    }
}

/// Angles in `(0, π)` at which `|x + tω| = b` for `|x| = s`.
fn crossing_angles(s: f64, t: f64, breaks: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0, std::f64::consts::PI];
    for &b in breaks {
        let v = (b * b - (s - t) * (s - t)) / (4.0 * s * t);
        if v > 0.0 && v < 1.0 {
            out.push(2.0 * v.sqrt().acos());
        }
    }
    out
}

/// `M^t f(s) - f(s)`, integrating the difference so that small `t` keeps
/// its relative accuracy.
fn mean_difference<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    t: f64,
    s: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let fs = f.eval(s);
    if s == 0.0 {
        return Ok(f.eval(t) - fs);
    }
    let k = dim.n() as i32 - 2;
    let st4 = 4.0 * s * t;
    let d2 = (s - t) * (s - t);
    // |x + tω|² = (s-t)² + 4st cos²(θ/2)
    let g = |theta: f64| {
        let c = (0.5 * theta).cos();
        let r = (d2 + st4 * c * c).sqrt();
        (f.eval(r) - fs) * theta.sin().powi(k)
    };
    let pts = crossing_angles(s, t, &f.breakpoints());
    let res = integrate_with_breaks(&g, &pts, cfg);
    res.ok("spherical mean")?;
    Ok(dim.sphere_weight() * res.value)
}

/// The angular integrand is `O(t)` while its integral is `O(t²)`; the
/// absolute tolerance sits just above the roundoff floor of the former.
fn inner_config<F: RadialFunction + ?Sized>(f: &F, t: f64) -> QuadConfig {
    QuadConfig {
        abs_tol: 2e-13 * f.magnitude() * t.min(1.0),
        rel_tol: 1e-12,
        ..QuadConfig::default()
    }
}

/// `M^t f(s)`: the average of `f` over the sphere of radius `t` about a
/// point at distance `s` from the origin.
pub fn spherical_mean_radial<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    t: f64,
    s: f64,
) -> Result<f64> {
    check_radius("t", t)?;
    check_radius("s", s)?;
    Ok(f.eval(s) + mean_difference(f, dim, t, s, &inner_config(f, t))?)
}

/// `r ↦ M^t f(r)` as a radial function in its own right.
pub struct SphericalMean<'a, F: RadialFunction + ?Sized> {
    pub f: &'a F,
    pub dim: Dimension,
    pub t: f64,
}

impl<'a, F: RadialFunction + ?Sized> SphericalMean<'a, F> {
    pub fn new(f: &'a F, dim: Dimension, t: f64) -> Result<Self> {
        check_radius("t", t)?;
        Ok(SphericalMean { f, dim, t })
    }
}

impl<F: RadialFunction + ?Sized> RadialFunction for SphericalMean<'_, F> {
    fn eval(&self, r: f64) -> f64 {
        spherical_mean_radial(self.f, &self.dim, self.t, r.abs()).unwrap_or(f64::NAN)
    }

    fn decay(&self) -> Option<DecayHint> {
        match self.f.decay()? {
            DecayHint::Compact { radius } => Some(DecayHint::Compact {
                radius: radius + self.t,
            }),
            other => Some(other),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        shifted_breaks(&self.f.breakpoints(), self.t)
    }

    fn magnitude(&self) -> f64 {
        self.f.magnitude()
    }

    fn rough(&self) -> bool {
        false
    }
}

fn shifted_breaks(breaks: &[f64], t: f64) -> Vec<f64> {
    let mut out = vec![t];
    for &b in breaks {
        out.extend([b, (b - t).abs(), b + t]);
    }
    out
}

/// Upper limit for radial integrals of `f` (or expressions built from
/// `f` and its spherical means at radius `t`).
fn profile_upper<F: RadialFunction + ?Sized>(f: &F, t: f64) -> Result<f64> {
    let decay = f.decay().ok_or_else(|| {
        Error::Config("profile is not integrable: a decay hint is required".into())
    })?;
    radial_upper(&|r| f.eval(r), decay, t, 1e-300)
}

/// `‖f‖_p = (ω_{n-1} ∫ |f|^p r^{n-1} dr)^{1/p}`; `p = ∞` takes the
/// maximum over a 4001-point grid of the support.
pub fn lp_norm_radial<F: RadialFunction + ?Sized>(f: &F, dim: &Dimension, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid("p", p, "L^p norm needs p >= 1"));
    }
    let upper = profile_upper(f, 0.0)?;
    if p.is_infinite() {
        let pts = 4000;
        return Ok((0..=pts)
            .map(|i| f.eval(upper * i as f64 / pts as f64).abs())
            .fold(0.0, f64::max));
    }
    let n1 = dim.n() as i32 - 1;
    let g = |r: f64| f.eval(r).abs().powf(p) * r.powi(n1);
    let cfg = QuadConfig::relative(1e-12, 0.0);
    let v = radial_integral(&g, upper, &f.breakpoints(), &cfg, "L^p norm")?.value;
    Ok((dim.omega() * v).powf(1.0 / p))
}

/// `‖M^t f - f‖_p`, with `M^t f` evaluated pointwise by
/// [`spherical_mean_radial`] along the radial quadrature.
pub fn diff_norm<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    p: f64,
    t: f64,
) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(
            "p",
            p,
            "difference norm needs finite p >= 1",
        ));
    }
    check_radius("t", t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let upper = profile_upper(f, t)?;
    let inner = inner_config(f, t);
    let n1 = dim.n() as i32 - 1;
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |s: f64| match mean_difference(f, dim, t, s, &inner) {
        Ok(d) => d.abs().powf(p) * s.powi(n1),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let cfg = QuadConfig::relative(1e-10, 0.0);
    let res = radial_integral(
        &g,
        upper,
        &shifted_breaks(&f.breakpoints(), t),
        &cfg,
        "difference norm",
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok((dim.omega() * res?.value).powf(1.0 / p))
}

/// `Ω_p[f](r) = sup_{0 <= t <= r} ‖M^t f - f‖_p`, observed on a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Modulus {
    pub value: f64,
    pub argmax_t: f64,
    pub grid: Option<GridSpec>,
}

pub fn modulus_omega<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    p: f64,
    r: f64,
) -> Result<Modulus> {
    check_radius("r", r)?;
    if r == 0.0 {
        return Ok(Modulus {
            value: 0.0,
            argmax_t: 0.0,
            grid: None,
        });
    }
    let grid = GridSpec::linear(0.0, r, MODULUS_POINTS)?;
    let mut best = (0.0, 0.0);
    for t in grid.nodes() {
        let v = diff_norm(f, dim, p, t)?;
        if v > best.0 {
            best = (v, t);
        }
    }
    Ok(Modulus {
        value: best.0,
        argmax_t: best.1,
        grid: Some(grid),
    })
}
