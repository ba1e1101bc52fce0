use super::{radial_integral, radial_upper, Dimension, RadialFunction};
use crate::error::{Error, Result};
use crate::quad::{QuadConfig, QuadResult};
use crate::specfun::bessel::j_fast;

/// Relative accuracy (against `∫|f| r^{n-1} dr`) of [`fourier_radial`].
pub const FOURIER_REL_TOL: f64 = 1e-13;

/// `f̂(ξ) = ω_{n-1} ∫_0^∞ f(r) j_{(n-2)/2}(r|ξ|) r^{n-1} dr`.
pub fn fourier_radial<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    xi_abs: f64,
) -> Result<f64> {
    let mass = radial_mass(f, dim)?;
    Ok(fourier_radial_with(
        f,
        dim,
        xi_abs,
        FOURIER_REL_TOL * mass.max(f64::MIN_POSITIVE),
    )?
    .value)
}

/// `∫_0^∞ |f(r)| r^{n-1} dr`.
pub(crate) fn radial_mass<F: RadialFunction + ?Sized>(f: &F, dim: &Dimension) -> Result<f64> {
    let decay = f.decay().ok_or_else(|| {
        Error::Config("profile is not integrable: a decay hint is required for transforms".into())
    })?;
    let n1 = dim.n() as i32 - 1;
    let g = |r: f64| f.eval(r).abs() * r.powi(n1);
    let upper = radial_upper(&g, decay, 0.0, 1e-300)?;
    let cfg = QuadConfig::relative(1e-10, 0.0);
    Ok(radial_integral(&g, upper, &f.breakpoints(), &cfg, "radial mass")?.value)
}

/// [`fourier_radial`] with an explicit absolute tolerance on the
/// `r`-integral; the returned value includes the factor `ω_{n-1}`.
pub fn fourier_radial_with<F: RadialFunction + ?Sized>(
    f: &F,
    dim: &Dimension,
    xi_abs: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    if !xi_abs.is_finite() || xi_abs < 0.0 {
        return Err(Error::invalid(
            "xi_abs",
            xi_abs,
            "frequency must be finite and non-negative",
        ));
    }
    let decay = f.decay().ok_or_else(|| {
        Error::Config("profile is not integrable: a decay hint is required for transforms".into())
    })?;
    let alpha = dim.alpha_eq();
    let n1 = dim.n() as i32 - 1;
    let g = |r: f64| f.eval(r) * j_fast(alpha, xi_abs * r) * r.powi(n1);
    let upper = radial_upper(&g, decay, 0.0, 0.5 * abs_tol)?;
    let cfg = QuadConfig::absolute(abs_tol);
    let mut res = radial_integral(
        &g,
        upper,
        &f.breakpoints(),
        &cfg,
        "radial Fourier transform",
    )?;
    res.value *= dim.omega();
    res.error_estimate *= dim.omega();
    Ok(res)
}
