use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jacobi order parameters `(α, β)`. `ρ = α + β + 1` is always recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrder", into = "RawOrder")]
pub struct OrderPair {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct RawOrder {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawOrder> for OrderPair {
    type Error = Error;
    fn try_from(r: RawOrder) -> Result<Self> {
        OrderPair::new(r.alpha, r.beta)
    }
}

impl From<OrderPair> for RawOrder {
    fn from(o: OrderPair) -> Self {
        RawOrder {
            alpha: o.alpha,
            beta: o.beta,
        }
    }
}

impl OrderPair {
    /// Accepts `α > -1/2` and `-1/2 <= β <= α`, the range in which the
    /// comparison estimates hold.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -0.5) || !alpha.is_finite() {
            return Err(Error::invalid(
                "alpha",
                alpha,
                "Jacobi order needs alpha > -1/2",
            ));
        }
        if !(beta >= -0.5 && beta <= alpha) {
            return Err(Error::invalid(
                "beta",
                beta,
                "Jacobi order needs -1/2 <= beta <= alpha",
            ));
        }
        Ok(OrderPair { alpha, beta })
    }

    /// The real hyperbolic space `H^n`: `α = (n-2)/2`, `β = -1/2`.
    pub fn real_hyperbolic(n: u32) -> Result<Self> {
        OrderPair::new((n as f64 - 2.0) / 2.0, -0.5)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn rho(&self) -> f64 {
        self.alpha + self.beta + 1.0
    }

    pub fn is_real_hyperbolic(&self) -> bool {
        self.beta == -0.5
    }
}

/// Root-space dimensions of a rank-one symmetric space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityPair {
    pub m_gamma: u32,
    pub m_2gamma: u32,
}

/// `α = (m_γ + m_2γ - 1)/2`, `β = (m_2γ - 1)/2`.
pub fn multiplicities_to_order(m: MultiplicityPair) -> Result<OrderPair> {
    if m.m_gamma == 0 {
        return Err(Error::invalid(
            "m_gamma",
            0.0,
            "root multiplicity m_gamma must be at least 1",
        ));
    }
    let alpha = (m.m_gamma as f64 + m.m_2gamma as f64 - 1.0) / 2.0;
    let beta = (m.m_2gamma as f64 - 1.0) / 2.0;
    let order = OrderPair::new(alpha, beta)?;
    debug_assert_eq!(
        order.rho(),
        (m.m_gamma as f64 + 2.0 * m.m_2gamma as f64) / 2.0
    );
    Ok(order)
}

/// Spectral parameter `λ = μ + iη`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub mu: f64,
    pub eta: f64,
}

impl SpectralPoint {
    pub fn new(mu: f64, eta: f64) -> Self {
        SpectralPoint { mu, eta }
    }

    pub fn real(mu: f64) -> Self {
        SpectralPoint { mu, eta: 0.0 }
    }

    pub fn imaginary(eta: f64) -> Self {
        SpectralPoint { mu: 0.0, eta }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.mu, self.eta)
    }

    pub fn in_strip(&self, eta0: f64) -> bool {
        self.eta.abs() <= eta0
    }

    /// `|η| < (2/p - 1) ρ`, the strip on which `φ_λ ∈ L^q(Δ dt)`.
    pub fn in_dp(&self, p: f64, rho: f64) -> bool {
        self.eta.abs() < dp_half_width(p, rho)
    }
}

/// Half-width `(2/p - 1) ρ` of the `D_p` strip.
pub fn dp_half_width(p: f64, rho: f64) -> f64 {
    (2.0 / p - 1.0) * rho
}
