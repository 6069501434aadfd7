//! Source correlation models.
//!
//! The correlator works with the Gaussian Schell-model form
//! `Γ(x1, x2) = exp(−(x1² + x2²)/(4σ_I²)) · exp(−(x1 − x2)²/(2σ_g²))`.
//! [`blackbody`] derives a temperature-dependent `σ_g` from the Planck
//! spectrum.

pub mod blackbody;

pub use blackbody::{
    blackbody_kernel, fit_coherence_width, BlackbodyKernel, BlackbodySpectrumParams, CoherenceFit,
};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Gaussian Schell-model source: intensity width `sigma_i` and transverse
/// coherence width `sigma_g`, both in mm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianSchellSource<T> {
    sigma_i: T,
    sigma_g: T,
}

impl<T: Real> GaussianSchellSource<T> {
    pub fn new(sigma_i: T, sigma_g: T) -> Result<Self> {
        for (name, v) in [("sigma_I", sigma_i), ("sigma_g", sigma_g)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidSource(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(GaussianSchellSource { sigma_i, sigma_g })
    }

    pub fn sigma_i(&self) -> T {
        self.sigma_i
    }

    pub fn sigma_g(&self) -> T {
        self.sigma_g
    }

    /// Coefficient of `x1² + x2²` in the negated exponent, `1/(4σ_I²)`.
    pub(crate) fn envelope_rate(&self) -> T {
        (lit::<T>(4.0) * self.sigma_i * self.sigma_i).recip()
    }

    /// Coefficient of `(x1 − x2)²` in the negated exponent, `1/(2σ_g²)`.
    pub(crate) fn coherence_rate(&self) -> T {
        (lit::<T>(2.0) * self.sigma_g * self.sigma_g).recip()
    }
}

/// Second-order source correlation `⟨E*(x1) E(x2)⟩`; real and in `(0, 1]`.
pub fn gsm_correlation<T: Real>(src: &GaussianSchellSource<T>, x1: T, x2: T) -> T {
    let dx = x1 - x2;
    (-(x1 * x1 + x2 * x2) * src.envelope_rate() - dx * dx * src.coherence_rate()).exp()
}
