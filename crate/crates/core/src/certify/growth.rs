use std::f64::consts::PI;
use std::time::Instant;

use rayon::prelude::*;

use super::lemmas::{certify_bessel_two_sided, certify_symspace_min, UNDERFLOW_SKIP};
use super::report::{point, CertReport, PointRow};
use crate::error::{Error, Result};
use crate::euclid::{
    diff_norm, Dimension, ExponentPair, RadialFunction, RadialProfile, SpectralTable,
};
use crate::hyp::{diff_norm_hyp, hyp_upper, HypSpectralTable};
use crate::quad::{CompositeRule, GridSpec};
use crate::specfun::{delta_density, dp_half_width, OrderPair, JACOBI_T_MAX};

/// Relative slack for pointwise dominations such as `tail <= growth`.
const DOMINATION_SLACK: f64 = 1e-12;

/// Everything a Euclidean growth verification needs.
#[derive(Debug, Clone)]
pub struct EuclidSetup {
    pub n: u32,
    pub p: f64,
    pub corpus: Vec<String>,
    pub t_grid: GridSpec,
    pub spectral_grid: GridSpec,
    /// Grid for the Bessel ratio certification supplying the constants.
    pub bessel_grid: GridSpec,
    pub slack: f64,
}

/// Everything a hyperbolic growth verification needs.
#[derive(Debug, Clone)]
pub struct HypSetup {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub eta: f64,
    pub corpus: Vec<String>,
    pub t_grid: GridSpec,
    pub mu_grid: GridSpec,
    /// Wider spectral grid for the spatial/spectral norm cross-check.
    pub check_grid: GridSpec,
    /// Required relative agreement of the two `L²` difference norms.
    pub agreement: f64,
    /// Grids of the Lemma 5 sweep supplying the `p = 1` constant.
    pub sym_mu_grid: GridSpec,
    pub sym_t_grid: GridSpec,
}

fn corpus(names: &[String]) -> Result<Vec<(String, RadialProfile)>> {
    if names.is_empty() {
        return Err(Error::Config(
            "corpus must name at least one profile".into(),
        ));
    }
    names
        .iter()
        .map(|n| Ok((n.trim().to_string(), RadialProfile::by_name(n)?)))
        .collect()
}

fn tag(e: Error, name: &str, t: Option<f64>) -> Error {
    let at = match t {
        Some(t) => format!("profile `{name}`, t = {t}"),
        None => format!("profile `{name}`"),
    };
    match e {
        Error::NonConvergence {
            what,
            error_estimate,
        } => Error::NonConvergence {
            what: format!("{what} ({at})"),
            error_estimate,
        },
        Error::Config(m) => Error::Config(format!("{m} ({at})")),
        other => other,
    }
}

/// Variation `max/min - 1` of the finite positive ratios of one series.
fn variation(ratios: &[f64]) -> f64 {
    let (lo, hi) = ratios
        .iter()
        .filter(|r| r.is_finite() && **r > 0.0)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(*r), hi.max(*r))
        });
    if lo.is_finite() {
        hi / lo - 1.0
    } else {
        f64::NAN
    }
}

/// Theorem 2 and Corollary 4 on `ℝⁿ`: the growth functional
/// `G = (2π)^{-n/q} growth_lhs` against `D = ‖M^t f - f‖_p`.
///
/// * `p = 2`: `G/D` must lie in `[1/sup R, 1/inf R]`, `R` the Bessel
///   ratio of [`certify_bessel_two_sided`] at `α = (n-2)/2`, because
///   `D²/G²` is an average of `R²`.
/// * `p = 1`: `G <= D / inf R`, since `|(1 - j(t|ξ|)) f̂(ξ)| <= D`.
/// * every `p`: `tail <= G`.
pub fn verify_euclid(setup: &EuclidSetup) -> Result<CertReport> {
    let started = Instant::now();
    let dim = Dimension::new(setup.n)?;
    let exps = ExponentPair::new(setup.p)?;
    setup.t_grid.validate()?;
    let profiles = corpus(&setup.corpus)?;
    let mut rep = CertReport::new("verify-euclid", setup.slack);
    rep.param("n", setup.n);
    rep.param("p", setup.p);
    rep.param("q", exps.q());
    rep.param("corpus", &setup.corpus);
    rep.grid("t", &setup.t_grid);
    rep.grid("spectral", &setup.spectral_grid);
    rep.grid("bessel_x", &setup.bessel_grid);

    let q = exps.q();
    let nf = setup.n as f64;
    let norm = if q.is_finite() {
        (2.0 * PI).powf(-nf / q)
    } else {
        1.0
    };
    rep.metric("fourier_normalization", norm);
    rep.note(
        "fhat(xi) = int f(x) exp(-i x.xi) dx; spectral functionals carry the factor (2 pi)^(-n/q)",
    );

    let bessel = certify_bessel_two_sided(dim.alpha_eq(), &setup.bessel_grid)?;
    let r_inf = bessel
        .metrics
        .get("inf_ratio_refined")
        .map_or(bessel.inf_ratio.0, |v| v.0);
    let r_sup = bessel
        .metrics
        .get("sup_ratio_refined")
        .map_or(bessel.sup_ratio.0, |v| v.0);
    rep.metric("bessel_inf_ratio", r_inf);
    rep.metric("bessel_sup_ratio", r_sup);
    let (lo, hi) = (1.0 / r_sup, 1.0 / r_inf);
    if setup.p == 2.0 {
        rep.metric("containment_lo", lo);
        rep.metric("containment_hi", hi);
    }
    if setup.p == 1.0 {
        rep.metric("p1_constant", hi);
    }

    let ts = setup.t_grid.nodes();
    let mut literal_inside = 0usize;
    let mut literal_total = 0usize;
    let mut tail_literal_ok = 0usize;
    for (name, f) in &profiles {
        let table =
            SpectralTable::new(f, &dim, &setup.spectral_grid).map_err(|e| tag(e, name, None))?;
        let rows = ts
            .par_iter()
            .map(|&t| {
                let g = norm * table.growth_lhs(&exps, t)?;
                let tail = norm * table.tail_lhs(&exps, t)?;
                let d = diff_norm(f, &dim, setup.p, t)?;
                Ok((t, g, tail, d))
            })
            .collect::<Vec<Result<_>>>();
        let mut ratios = Vec::with_capacity(ts.len());
        for (row, &t) in rows.into_iter().zip(&ts) {
            let (t, g, tail, d) = row.map_err(|e| tag(e, name, Some(t)))?;
            let at = || point(&[("t", t)]);
            if tail > g * (1.0 + DOMINATION_SLACK) + f64::MIN_POSITIVE {
                rep.violate(&format!("{name}: tail <= growth"), at(), tail, g);
            }
            if d < UNDERFLOW_SKIP * f.magnitude() {
                rep.skipped += 1;
                continue;
            }
            let r = g / d;
            rep.observe_ratio(r);
            ratios.push(r);
            if !r.is_finite() {
                rep.violate(&format!("{name}: finite ratio"), at(), r, f64::INFINITY);
            }
            if setup.p == 2.0 {
                if r < lo - setup.slack || r > hi + setup.slack {
                    rep.violate(
                        &format!("{name}: growth/diff in [1/sup R, 1/inf R]"),
                        at(),
                        r,
                        if r < lo { lo } else { hi },
                    );
                }
                literal_total += 1;
                if r >= r_inf.sqrt() - setup.slack && r <= r_sup.sqrt() + setup.slack {
                    literal_inside += 1;
                }
            }
            if setup.p == 1.0 {
                if g > hi * d * (1.0 + setup.slack) {
                    rep.violate(&format!("{name}: growth <= diff / inf R"), at(), g, hi * d);
                }
                if tail <= r_sup * d {
                    tail_literal_ok += 1;
                }
                literal_total += 1;
            }
            rep.points.push(PointRow {
                series: name.clone(),
                x_or_mu: None,
                t: Some(t),
                lhs: g,
                rhs: d,
                ratio: r,
            });
        }
        rep.metric(&format!("ratio_variation.{name}"), variation(&ratios));
    }
    if setup.p == 2.0 {
        rep.metric("literal_sqrt_interval_hits", literal_inside as f64);
        rep.metric("literal_sqrt_interval_total", literal_total as f64);
        rep.note(format!(
            "containment asserted for growth/diff in [1/sup R, 1/inf R] = [{lo}, {hi}]; \
             the interval [sqrt(inf R), sqrt(sup R)] holds at {literal_inside} of {literal_total} points"
        ));
    }
    if setup.p == 1.0 {
        rep.metric("literal_tail_bound_hits", tail_literal_ok as f64);
        rep.metric("literal_tail_bound_total", literal_total as f64);
        rep.note(format!(
            "asserted: growth <= diff / inf R (inf R = {r_inf}); the bound tail <= sup R * diff holds at \
             {tail_literal_ok} of {literal_total} points"
        ));
    }
    rep.finish(started);
    Ok(rep)
}

/// `‖M^t f - f‖_{L^p(Δ dt)}` for every `t` in `ts`, with `M^t f` from the
/// spectral table, for orders without a geometric mean. One radial rule
/// serves all `t`; it stops at [`JACOBI_T_MAX`], where `φ` is still trusted.
fn spectral_diff_lp(table: &HypSpectralTable, f: &RadialProfile, order: &OrderPair, p: f64, ts: &[f64]) -> Result<Vec<f64>> {
    let reach = hyp_upper(f, 2.0 * order.rho())?;
    // per-t cutoffs: beyond them Δ amplifies inversion noise, not signal
    let cutoffs: Vec<f64> = ts.iter().map(|t| (t + reach).min(JACOBI_T_MAX)).collect();
    let upper = cutoffs.iter().copied().fold(0.0, f64::max);
    let mut breaks: Vec<f64> = (0..=((upper / 0.1).ceil() as usize)).map(|i| (i as f64 * 0.1).min(upper)).collect();
    breaks.extend(&cutoffs);
    for b in f.breakpoints() {
        breaks.push(b);
        breaks.extend(ts.iter().flat_map(|&t| [(b - t).abs(), b + t]));
    }
    breaks.retain(|b| *b >= 0.0 && *b <= upper);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let rule = CompositeRule::from_breaks(&breaks, 8);
    let base: Vec<(f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| (f.eval(s), w * delta_density(order, s)))
        .collect();
    let means = table.spherical_means(ts, &rule.nodes)?;
    Ok(means
        .iter()
        .zip(&cutoffs)
        .map(|(mean, &cut)| {
            let v: f64 = mean
                .iter()
                .zip(&base)
                .zip(&rule.nodes)
                .take_while(|(_, s)| **s <= cut)
                .map(|((m, (fs, w)), _)| w * (m - fs).abs().powf(p))
                .sum();
            v.powf(1.0 / p)
        })
        .collect())
}

/// Theorems 5/6 and Corollary 7 in radial reduction.
///
/// * `p = 2`: `theorem6_lhs / ‖M^t f - f‖₂` must be finite; the norm is
///   computed spatially and spectrally and the two must agree to
///   `agreement`; `tail_l2 <= theorem6_lhs`.
/// * `p < 2`: `theorem5_lhs / ‖M^t f - f‖_p` finite, `tail_sup <=
///   theorem5_lhs`; for `p = 1` also `theorem5_lhs <= D / inf_sym` with
///   `inf_sym` the Lemma 5 constant for `|η|`.
pub fn verify_hyp(setup: &HypSetup) -> Result<CertReport> {
    let started = Instant::now();
    let order = OrderPair::new(setup.alpha, setup.beta)?;
    let p = setup.p;
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::invalid("p", p, "must lie in [1, 2]"));
    }
    if p == 2.0 && setup.eta != 0.0 {
        return Err(Error::invalid(
            "eta",
            setup.eta,
            "the p = 2 functional lives on the real line",
        ));
    }
    if p < 2.0 {
        let w = dp_half_width(p, order.rho());
        if !(setup.eta.abs() < w) {
            return Err(Error::invalid(
                "eta",
                setup.eta,
                format!("must satisfy |eta| < (2/p - 1) rho = {w}"),
            ));
        }
    }
    setup.t_grid.validate()?;
    let profiles = corpus(&setup.corpus)?;
    let geometric = order.is_real_hyperbolic();
    let mut rep = CertReport::new("verify-hyp", setup.agreement);
    rep.param("alpha", setup.alpha);
    rep.param("beta", setup.beta);
    rep.param("p", p);
    rep.param("eta", setup.eta);
    rep.param("corpus", &setup.corpus);
    rep.param("inversion", crate::hyp::INVERSION_CONVENTION);
    rep.grid("t", &setup.t_grid);
    rep.grid("mu", &setup.mu_grid);
    if p == 2.0 {
        rep.grid("mu_check", &setup.check_grid);
    }
    rep.note(format!(
        "spatial means: {}",
        if geometric {
            "geometric (hyperbolic cosine rule)"
        } else {
            "spectral (inverse transform of phi_mu(t) fhat)"
        }
    ));
    if !geometric && p < 2.0 {
        rep.note(format!(
            "spectral L^p difference norms integrate over s <= {JACOBI_T_MAX}"
        ));
    }
    if p < 2.0 {
        rep.note("the D_p strip is |eta| < (2/p - 1) rho");
    }

    let sym_constant = if p == 1.0 {
        let sym = certify_symspace_min(
            &order,
            setup.eta.abs(),
            3,
            &setup.sym_mu_grid,
            &setup.sym_t_grid,
        )?;
        rep.grid("sym_mu", &setup.sym_mu_grid);
        rep.grid("sym_t", &setup.sym_t_grid);
        rep.metric("symspace_inf_ratio", sym.inf_ratio.0);
        rep.metric("p1_constant", 1.0 / sym.inf_ratio.0);
        Some(1.0 / sym.inf_ratio.0)
    } else {
        None
    };

    let ts = setup.t_grid.nodes();
    let mut worst_agreement: f64 = 0.0;
    for (name, f) in &profiles {
        let real = HypSpectralTable::new(f, &order, &setup.mu_grid, 0.0)
            .map_err(|e| tag(e, name, None))?;
        let shifted = if p < 2.0 && setup.eta != 0.0 {
            Some(
                HypSpectralTable::new(f, &order, &setup.mu_grid, setup.eta)
                    .map_err(|e| tag(e, name, None))?,
            )
        } else {
            None
        };
        let lhs_table = shifted.as_ref().unwrap_or(&real);
        let spectral_d = if p == 2.0 {
            let check = HypSpectralTable::new(f, &order, &setup.check_grid, 0.0)
                .map_err(|e| tag(e, name, None))?;
            Some(
                check
                    .diff_norm_l2_many(&ts)
                    .map_err(|e| tag(e, name, None))?,
            )
        } else {
            None
        };
        let spectral_lp = if !geometric && p < 2.0 {
            Some(spectral_diff_lp(&real, f, &order, p, &ts).map_err(|e| tag(e, name, None))?)
        } else {
            None
        };
        let rows = ts
            .par_iter()
            .enumerate()
            .map(|(k, &t)| {
                let (lhs, tail) = if p == 2.0 {
                    (real.theorem6_lhs(t)?, real.tail_l2(t)?)
                } else {
                    (lhs_table.theorem5_lhs(t)?, lhs_table.tail_sup(t)?)
                };
                let sup_form = (lhs_table.theorem5_lhs(t)?, lhs_table.tail_sup(t)?);
                let d = if geometric {
                    diff_norm_hyp(f, &order, p, t)?
                } else if p == 2.0 {
                    f64::NAN
                } else {
                    spectral_lp.as_ref().map_or(f64::NAN, |v| v[k])
                };
                Ok((lhs, tail, sup_form, d))
            })
            .collect::<Vec<Result<_>>>();
        let mut ratios = Vec::with_capacity(ts.len());
        for (k, (row, &t)) in rows.into_iter().zip(&ts).enumerate() {
            let (lhs, tail, (s5, s5_tail), d_spatial) = row.map_err(|e| tag(e, name, Some(t)))?;
            let at = || point(&[("t", t)]);
            let d = match &spectral_d {
                Some(sd) => {
                    if d_spatial.is_finite() {
                        let rel =
                            (d_spatial - sd[k]).abs() / d_spatial.abs().max(f64::MIN_POSITIVE);
                        worst_agreement = worst_agreement.max(rel);
                        if !(rel <= setup.agreement) {
                            rep.violate(
                                &format!("{name}: spatial vs spectral L2 difference norm"),
                                at(),
                                rel,
                                setup.agreement,
                            );
                        }
                        d_spatial
                    } else {
                        sd[k]
                    }
                }
                None => d_spatial,
            };
            if tail > lhs * (1.0 + DOMINATION_SLACK) + f64::MIN_POSITIVE {
                rep.violate(&format!("{name}: tail <= growth"), at(), tail, lhs);
            }
            if s5_tail > s5 * (1.0 + DOMINATION_SLACK) + f64::MIN_POSITIVE {
                rep.violate(&format!("{name}: tail sup <= sup form"), at(), s5_tail, s5);
            }
            if d < UNDERFLOW_SKIP * f.magnitude() {
                rep.skipped += 1;
                continue;
            }
            let r = lhs / d;
            rep.observe_ratio(r);
            ratios.push(r);
            if !r.is_finite() {
                rep.violate(&format!("{name}: finite ratio"), at(), r, f64::INFINITY);
            }
            if let Some(c) = sym_constant {
                if lhs > c * d * (1.0 + 1e-9) {
                    rep.violate(
                        &format!("{name}: sup form <= diff / inf_sym"),
                        at(),
                        lhs,
                        c * d,
                    );
                }
            }
            rep.points.push(PointRow {
                series: name.clone(),
                x_or_mu: None,
                t: Some(t),
                lhs,
                rhs: d,
                ratio: r,
            });
        }
        rep.metric(&format!("ratio_variation.{name}"), variation(&ratios));
    }
    if p == 2.0 {
        rep.metric("max_spatial_spectral_rel_diff", worst_agreement);
        rep.note(
            "ratio variation over t is reported, not asserted: as t -> 0 the ratio tends to \
             4(alpha+1) sqrt(int mu^4 |fhat|^2 dm / int (mu^2+rho^2)^2 |fhat|^2 dm), as t -> inf to 1",
        );
    }
    rep.finish(started);
    Ok(rep)
}
