//! Special functions: Γ, normalized Bessel functions, Jacobi functions and
//! the spectral densities of rank-one symmetric spaces.

pub mod bessel;
pub mod density;
pub mod gamma;
pub mod jacobi;
pub mod order;

pub use bessel::{bessel_j_norm, mehler_j, mehler_one_minus_j, one_minus_j};
pub use density::{c_function, c_function_density, delta_density, ln_delta_density};
pub use gamma::{gamma, ln_gamma, ln_gamma_complex};
pub use jacobi::{jacobi_phi, jacobi_phi_many, jacobi_phi_ode, jacobi_phi_ode_many, JACOBI_T_MAX};
pub use order::{
    dp_half_width, multiplicities_to_order, MultiplicityPair, OrderPair, SpectralPoint,
};
