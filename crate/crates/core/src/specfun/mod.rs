//! Special functions appearing in the transform kernels and spectral
//! densities, with log-scaled variants that stay finite for large imaginary
//! index.

pub(crate) mod cx;
pub(crate) mod cxquad;

mod bessel;
mod gamma;
mod legendre;
mod whittaker;

pub use bessel::{bessel_i, bessel_k_im, bessel_k_im_scaled, bessel_k_real};
pub use gamma::{gamma, gamma_abs2, ln_gamma, ln_gamma_abs2};
pub use legendre::{legendre_p_im, legendre_p_im_scaled, legendre_p_real_deg, legendre_q_olver};
pub use whittaker::{
    whittaker_m_real, whittaker_w_im, whittaker_w_im_scaled, whittaker_w_real,
};

pub(crate) use bessel::bessel_k_im_scaled_row;
pub(crate) use legendre::legendre_p_im_scaled_row;

#[doc(hidden)]
pub use bessel::kl_kernel_integral_signed;
#[doc(hidden)]
pub use legendre::mf_cosine_integral_signed;
#[doc(hidden)]
pub use whittaker::whittaker_w_im_quadrature;

use crate::error::{Error, Result};

/// Parameter bundle for kernel evaluations, with the domain checks the
/// individual routines enforce collected in one place.
#[derive(Debug, Clone, Copy)]
pub struct SpecialFunctionParams {
    /// Spectral index τ ≥ 0.
    pub tau: f64,
    /// Argument; domain is family-dependent ((0,∞) or (1,∞)).
    pub x: f64,
    /// First Whittaker index, α < 1/2.
    pub alpha: f64,
    /// Legendre order, 0 ≤ μ < 1.
    pub mu: f64,
    /// Real Bessel order ν ≥ 0.
    pub nu: f64,
}

impl SpecialFunctionParams {
    pub fn validate(&self) -> Result<()> {
        if self.tau < 0.0 {
            return Err(Error::domain("tau must be >= 0"));
        }
        if self.alpha >= 0.5 {
            return Err(Error::domain("alpha must be < 1/2"));
        }
        if !(0.0..1.0).contains(&self.mu) {
            return Err(Error::domain("mu must lie in [0, 1)"));
        }
        if self.nu < 0.0 {
            return Err(Error::domain("nu must be >= 0"));
        }
        Ok(())
    }
}
