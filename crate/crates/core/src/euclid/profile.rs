use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::DecayHint;

/// A radial function `r ↦ f(r)` on `[0, ∞)`.
pub trait RadialFunction: Sync {
    fn eval(&self, r: f64) -> f64;

    /// Decay used to truncate radial integrals; `None` if not integrable.
    fn decay(&self) -> Option<DecayHint>;

    /// Radii where `f` is not smooth (jumps, kinks, end of support).
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }

    /// An upper bound for `|f|`, used to scale absolute tolerances.
    fn magnitude(&self) -> f64;

    /// Whether `f̂` decays only like a power of `|ξ|` (jump discontinuity).
    fn rough(&self) -> bool {
        false
    }
}

/// Closed-form corpus members plus sampled data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `exp(-r² / (2 scale²))`
    Gaussian {
        scale: f64,
    },
    /// `1` on `r <= radius`
    BallIndicator {
        radius: f64,
    },
    /// `exp(1 - 1 / (1 - (r/radius)²))` on `r < radius`
    Bump {
        radius: f64,
    },
    Sampled(SampledProfile),
    Constant {
        value: f64,
    },
    Zero,
}

impl RadialProfile {
    pub fn gaussian(scale: f64) -> Result<Self> {
        positive("scale", scale)?;
        Ok(RadialProfile::Gaussian { scale })
    }

    pub fn ball(radius: f64) -> Result<Self> {
        positive("radius", radius)?;
        Ok(RadialProfile::BallIndicator { radius })
    }

    pub fn bump(radius: f64) -> Result<Self> {
        positive("radius", radius)?;
        Ok(RadialProfile::Bump { radius })
    }

    pub fn sampled(r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(RadialProfile::Sampled(SampledProfile::new(r, values)?))
    }

    /// Corpus lookup by name: `gaussian` (`e^{-r²/2}`), `gaussian2`
    /// (`e^{-r²}`), `ball`, `bump` (unit radius), `zero`.
    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim() {
            "gaussian" => Self::gaussian(1.0),
            "gaussian2" => Self::gaussian(std::f64::consts::FRAC_1_SQRT_2),
            "ball" => Self::ball(1.0),
            "bump" => Self::bump(1.0),
            "zero" => Ok(RadialProfile::Zero),
            other => Err(Error::Config(format!(
                "unknown profile `{other}` (expected gaussian, gaussian2, ball, bump or zero)"
            ))),
        }
    }

    /// Upper end of the support, if bounded.
    pub fn support(&self) -> Option<f64> {
        match self {
            RadialProfile::Gaussian { .. } | RadialProfile::Constant { .. } => None,
            RadialProfile::BallIndicator { radius } | RadialProfile::Bump { radius } => {
                Some(*radius)
            }
            RadialProfile::Sampled(s) => Some(s.r_max()),
            RadialProfile::Zero => Some(0.0),
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be positive and finite"))
    }
}

impl RadialFunction for RadialProfile {
    fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        match self {
            RadialProfile::Gaussian { scale } => {
                let u = r / scale;
                (-0.5 * u * u).exp()
            }
            RadialProfile::BallIndicator { radius } => {
                if r <= *radius {
                    1.0
                } else {
                    0.0
                }
            }
            RadialProfile::Bump { radius } => {
                let u = r / radius;
                if u < 1.0 {
                    (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
            RadialProfile::Sampled(s) => s.eval(r),
            RadialProfile::Constant { value } => *value,
            RadialProfile::Zero => 0.0,
        }
    }

    fn decay(&self) -> Option<DecayHint> {
        match self {
            RadialProfile::Gaussian { scale } => Some(DecayHint::Gaussian {
                rate: 0.5 / (scale * scale),
            }),
            RadialProfile::Constant { value } if *value != 0.0 => None,
            RadialProfile::Constant { .. } => Some(DecayHint::Compact { radius: 0.0 }),
            _ => Some(DecayHint::Compact {
                radius: self.support().unwrap_or(0.0),
            }),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            RadialProfile::BallIndicator { radius } | RadialProfile::Bump { radius } => {
                vec![*radius]
            }
            RadialProfile::Sampled(s) => vec![s.r_min(), s.r_max()],
            _ => Vec::new(),
        }
    }

    fn magnitude(&self) -> f64 {
        match self {
            RadialProfile::Sampled(s) => s.values.iter().fold(0.0, |m, v| m.max(v.abs())),
            RadialProfile::Constant { value } => value.abs(),
            RadialProfile::Zero => 0.0,
            _ => 1.0,
        }
    }

    fn rough(&self) -> bool {
        match self {
            RadialProfile::BallIndicator { .. } => true,
            RadialProfile::Sampled(s) => {
                s.values.last().is_some_and(|v| *v != 0.0)
                    || (s.r_min() > 0.0 && s.values.first().is_some_and(|v| *v != 0.0))
            }
            _ => false,
        }
    }
}

/// Natural cubic spline through `(r_i, v_i)`, zero outside `[r_0, r_last]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSampled", into = "RawSampled")]
pub struct SampledProfile {
    r: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSampled {
    r: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawSampled> for SampledProfile {
    type Error = Error;
    fn try_from(raw: RawSampled) -> Result<Self> {
        SampledProfile::new(raw.r, raw.values)
    }
}

impl From<SampledProfile> for RawSampled {
    fn from(s: SampledProfile) -> Self {
        RawSampled {
            r: s.r,
            values: s.values,
        }
    }
}

impl SampledProfile {
    pub fn new(r: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if r.len() != values.len() {
            return Err(Error::Config(format!(
                "sampled profile has {} radii but {} values",
                r.len(),
                values.len()
            )));
        }
        if r.len() < 3 {
            return Err(Error::invalid(
                "points",
                r.len() as f64,
                "need at least 3 samples",
            ));
        }
        if r[0] < 0.0 || r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config(
                "sampled radii must be non-negative and strictly increasing".into(),
            ));
        }
        if values.iter().chain(&r).any(|v| !v.is_finite()) {
            return Err(Error::Config(
                "sampled profile contains non-finite entries".into(),
            ));
        }
        let second = natural_spline(&r, &values);
        Ok(SampledProfile { r, values, second })
    }

    pub fn r_min(&self) -> f64 {
        self.r[0]
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < self.r_min() || x > self.r_max() {
            return 0.0;
        }
        let i = match self.r.partition_point(|&ri| ri <= x) {
            0 => 0,
            k => (k - 1).min(self.r.len() - 2),
        };
        let h = self.r[i + 1] - self.r[i];
        let a = (self.r[i + 1] - x) / h;
        let b = (x - self.r[i]) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }
}

/// Second derivatives of the natural cubic spline (tridiagonal solve).
fn natural_spline(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let diag = 2.0 * (h0 + h1);
        let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        let denom = diag - h0 * c[i - 1];
        c[i] = h1 / denom;
        d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    m
}
