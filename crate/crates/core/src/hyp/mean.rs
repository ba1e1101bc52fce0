use std::cell::RefCell;

use super::hyp_upper;
use crate::error::{Error, Result};
use crate::euclid::{radial_integral, RadialFunction};
use crate::quad::{integrate_with_breaks, DecayHint, QuadConfig};
use crate::specfun::bessel::mehler_prefactor;
use crate::specfun::{delta_density, OrderPair};

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

fn check_geometric(order: &OrderPair) -> Result<()> {
    if order.beta() != -0.5 {
        return Err(Error::Config(format!(
            "geometric spherical means need beta = -1/2 (got {}); use the spectral path \
             (HypSpectralTable) for other orders",
            order.beta()
        )));
    }
    Ok(())
}

/// Distances `d` at which the integrand of the mean should be split:
/// breakpoints of `f` and, for Gaussians, a ladder of widths so that a
/// narrow peak near `θ = π` is not missed.
fn distance_ladder<F: RadialFunction + ?Sized>(f: &F) -> Vec<f64> {
    let mut out = f.breakpoints();
    if let Some(DecayHint::Gaussian { rate }) = f.decay() {
        let width = (0.5 / rate).sqrt();
        out.extend((1..=10).map(|k| k as f64 * width));
    }
    out
}

/// `cosh d - 1 = 2 sinh²((s-t)/2) + 2 sinh s sinh t cos²(θ/2)`.
fn crossing_angles(s: f64, t: f64, distances: &[f64]) -> Vec<f64> {
    let base = 2.0 * (0.5 * (s - t)).sinh().powi(2);
    let k = 2.0 * s.sinh() * t.sinh();
    let mut out = vec![0.0, std::f64::consts::PI];
    for &b in distances {
        let v = (2.0 * (0.5 * b).sinh().powi(2) - base) / k;
        if v > 0.0 && v < 1.0 {
            out.push(2.0 * v.sqrt().acos());
        }
    }
    out
}

fn mean_difference<F: RadialFunction + ?Sized>(
    f: &F,
    alpha: f64,
    t: f64,
    s: f64,
    ladder: &[f64],
    cfg: &QuadConfig,
) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let fs = f.eval(s);
    if s == 0.0 {
        return Ok(f.eval(t) - fs);
    }
    let base = 2.0 * (0.5 * (s - t)).sinh().powi(2);
    let k = 2.0 * s.sinh() * t.sinh();
    let w = 2.0 * alpha;
    let g = |theta: f64| {
        let c = (0.5 * theta).cos();
        let half = (0.5 * (base + k * c * c)).sqrt();
        let d = 2.0 * half.asinh();
        (f.eval(d) - fs) * theta.sin().powf(w)
    };
    let pts = crossing_angles(s, t, ladder);
    let res = integrate_with_breaks(&g, &pts, cfg);
    res.ok("hyperbolic spherical mean")?;
    Ok(0.5 * mehler_prefactor(alpha) * res.value)
}

fn inner_config<F: RadialFunction + ?Sized>(f: &F, t: f64) -> QuadConfig {
    QuadConfig {
        abs_tol: 1e-15 * f.magnitude() * t.min(1.0),
        rel_tol: 1e-12,
        ..QuadConfig::default()
    }
}

/// `M^t f(s)` on a space with `β = -1/2` (real hyperbolic spaces and
/// their continuous-`α` analogues), by the product formula
/// `M^t f(s) = c_α ∫_0^π f(d(s,t,θ)) sin^{2α} θ dθ`,
/// `cosh d = cosh s cosh t + sinh s sinh t cos θ`.
pub fn spherical_mean_hyp<F: RadialFunction + ?Sized>(
    f: &F,
    order: &OrderPair,
    t: f64,
    s: f64,
) -> Result<f64> {
    check_geometric(order)?;
    check_radius("t", t)?;
    check_radius("s", s)?;
    let ladder = distance_ladder(f);
    Ok(f.eval(s) + mean_difference(f, order.alpha(), t, s, &ladder, &inner_config(f, t))?)
}

/// `s ↦ M^t f(s)` as a radial function.
pub struct SphericalMeanHyp<'a, F: RadialFunction + ?Sized> {
    pub f: &'a F,
    pub order: OrderPair,
    pub t: f64,
}

impl<'a, F: RadialFunction + ?Sized> SphericalMeanHyp<'a, F> {
    pub fn new(f: &'a F, order: OrderPair, t: f64) -> Result<Self> {
        check_geometric(&order)?;
        check_radius("t", t)?;
        Ok(SphericalMeanHyp { f, order, t })
    }
}

impl<F: RadialFunction + ?Sized> RadialFunction for SphericalMeanHyp<'_, F> {
    fn eval(&self, r: f64) -> f64 {
        spherical_mean_hyp(self.f, &self.order, self.t, r.abs()).unwrap_or(f64::NAN)
    }

    fn decay(&self) -> Option<DecayHint> {
        match self.f.decay()? {
            DecayHint::Compact { radius } => Some(DecayHint::Compact {
                radius: radius + self.t,
            }),
            // a Gaussian spreads to e^{-a (s-t)²}; report a slightly slower rate
            DecayHint::Gaussian { rate } => Some(DecayHint::Gaussian { rate: 0.5 * rate }),
            other => Some(other),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        shifted_breaks(&self.f.breakpoints(), self.t)
    }

    fn magnitude(&self) -> f64 {
        self.f.magnitude()
    }
}

fn shifted_breaks(breaks: &[f64], t: f64) -> Vec<f64> {
    let mut out = vec![t];
    for &b in breaks {
        out.extend([b, (b - t).abs(), b + t]);
    }
    out
}

/// `(∫_0^∞ |f|^p Δ dt)^{1/p}`.
pub fn lp_norm_hyp<F: RadialFunction + ?Sized>(f: &F, order: &OrderPair, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid("p", p, "L^p norm needs finite p >= 1"));
    }
    let upper = hyp_upper(f, 2.0 * order.rho())?;
    let g = |s: f64| f.eval(s).abs().powf(p) * delta_density(order, s);
    let cfg = QuadConfig::relative(1e-12, 0.0);
    let v = radial_integral(&g, upper, &f.breakpoints(), &cfg, "hyperbolic L^p norm")?.value;
    Ok(v.powf(1.0 / p))
}

/// `‖M^t f - f‖_{L^p(Δ dt)}` from geometric spherical means (`β = -1/2`).
pub fn diff_norm_hyp<F: RadialFunction + ?Sized>(
    f: &F,
    order: &OrderPair,
    p: f64,
    t: f64,
) -> Result<f64> {
    check_geometric(order)?;
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
    let upper = t + hyp_upper(f, 2.0 * order.rho())?;
    let ladder = distance_ladder(f);
    let inner = inner_config(f, t);
    let alpha = order.alpha();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let g = |s: f64| match mean_difference(f, alpha, t, s, &ladder, &inner) {
        Ok(d) => d.abs().powf(p) * delta_density(order, s),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let cfg = QuadConfig::relative(1e-10, 0.0);
    let mut breaks = shifted_breaks(&f.breakpoints(), t);
    breaks.extend(ladder.iter().map(|d| d + t));
    let res = radial_integral(&g, upper, &breaks, &cfg, "hyperbolic difference norm");
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(res?.value.powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euclid::RadialProfile;
    use crate::specfun::{jacobi_phi, SpectralPoint};

    struct Spherical {
        order: OrderPair,
        mu: f64,
    }

    impl RadialFunction for Spherical {
        fn eval(&self, r: f64) -> f64 {
            jacobi_phi(&self.order, SpectralPoint::real(self.mu), r)
                .unwrap()
                .re
        }
        fn decay(&self) -> Option<DecayHint> {
            None
        }
        fn magnitude(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn product_formula_for_spherical_functions() {
        for (alpha, mu, t, s) in [
            (0.5, 1.7, 0.6, 1.1),
            (1.0, 0.4, 2.0, 0.3),
            (0.2, 3.0, 1.5, 1.5),
        ] {
            let order = OrderPair::new(alpha, -0.5).unwrap();
            let f = Spherical { order, mu };
            let m = spherical_mean_hyp(&f, &order, t, s).unwrap();
            let expect = f.eval(t) * f.eval(s);
            assert!((m - expect).abs() < 1e-10, "alpha {alpha}: {m} vs {expect}");
        }
    }

    #[test]
    fn h3_shell_average() {
        // on H³: M^t f(s) = (1 / (2 sinh s sinh t)) ∫_{|s-t|}^{s+t} f(d) sinh d dd
        let order = OrderPair::real_hyperbolic(3).unwrap();
        let g = RadialProfile::gaussian(1.0).unwrap();
        for (t, s) in [(0.3, 0.9), (2.0, 2.5), (4.0, 4.0)] {
            let m = spherical_mean_hyp(&g, &order, t, s).unwrap();
            let q = crate::quad::integrate_finite(
                |d: f64| g.eval(d) * d.sinh(),
                (s - t).abs(),
                s + t,
                1e-16,
            )
            .unwrap()
            .value;
            let expect = q / (2.0 * s.sinh() * t.sinh());
            assert!(
                (m - expect).abs() < 1e-12 * expect.abs().max(1e-3),
                "{m} vs {expect}"
            );
        }
    }

    #[test]
    fn rejects_non_geometric_orders() {
        let order = OrderPair::new(1.0, 0.0).unwrap();
        let g = RadialProfile::gaussian(1.0).unwrap();
        assert!(spherical_mean_hyp(&g, &order, 1.0, 1.0).is_err());
    }

    #[test]
    fn means_preserve_integral() {
        let order = OrderPair::real_hyperbolic(3).unwrap();
        let g = RadialProfile::gaussian(1.0).unwrap();
        let m = SphericalMeanHyp::new(&g, order, 1.0).unwrap();
        let a = lp_norm_hyp(&g, &order, 1.0).unwrap();
        let b = lp_norm_hyp(&m, &order, 1.0).unwrap();
        assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
    }
}
