//! Special functions: complex Gamma, K-Bessel of complex order, Hurwitz zeta
//! and Bernoulli numbers.

mod bessel;
mod gamma;
mod zeta;

use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::Result;

pub use bessel::{bessel_k, bessel_k_with_derivative, MAX_IM_NU};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use zeta::{bernoulli, bernoulli_f64, hurwitz_asymptotic, hurwitz_zeta, MAX_BERNOULLI};
pub(crate) use zeta::hurwitz_continued;

/// Spectral parameter ν; the Laplace eigenvalue is 1/4 - ν².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    pub nu: C64,
}

impl SpectralParameter {
    pub fn new(nu: C64) -> Self {
        Self { nu }
    }

    /// ν = iR
    pub fn cusp(r: f64) -> Self {
        Self { nu: C64::new(0.0, r) }
    }

    pub fn s_weight(&self) -> C64 {
        2.0 * self.nu + 1.0
    }

    pub fn is_half_integer_shift(&self) -> bool {
        let x = self.nu.re - 0.5;
        self.nu.im.abs() < 1e-14 && (x - x.round()).abs() < 1e-14
    }

    pub fn eigenvalue(&self) -> C64 {
        0.25 - self.nu * self.nu
    }
}

/// Γ_ν(s) = Γ((s-ν)/2) Γ((s+ν)/2) / (4 π^s)
pub fn gamma_nu(nu: SpectralParameter, s: C64) -> Result<C64> {
    let a = gamma((s - nu.nu) / 2.0)?;
    let b = gamma((s + nu.nu) / 2.0)?;
    Ok(a * b / (4.0 * C64::new(PI, 0.0).powc(s)))
}
