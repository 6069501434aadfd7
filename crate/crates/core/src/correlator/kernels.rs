//! Fresnel and Collins diffraction kernels.
//!
//! Both kernels are Gaussian chirps in either argument. [`Chirp`] stores one
//! of them as a function of the source coordinate with the other argument
//! fixed, which is the form the analytic engine needs.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{free_space, RayTransferMatrix, WaveContext};
use crate::scalar::{cis, imag_unit, lit, Real};

/// `pre · exp(i·quad·x² + lin·x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chirp<T> {
    pub pre: Complex<T>,
    pub quad: T,
    pub lin: Complex<T>,
}

impl<T: Real> Chirp<T> {
    pub fn eval(&self, x: T) -> Complex<T> {
        self.pre * (imag_unit::<T>() * (self.quad * x * x) + self.lin * x).exp()
    }
}

/// `(iλL)^{−1/2}` or `(iλb)^{−1/2}` on the principal branch.
fn amplitude<T: Real>(ctx: &WaveContext<T>, length: T) -> Complex<T> {
    (Complex::new(T::zero(), ctx.wavelength() * length))
        .sqrt()
        .inv()
}

/// Collins kernel of `m` as a chirp in the input coordinate `x`, for a fixed
/// output coordinate `u`.
pub fn collins_chirp<T: Real>(
    ctx: &WaveContext<T>,
    m: &RayTransferMatrix<T>,
    u: T,
) -> Result<Chirp<T>> {
    let b = m.b();
    let scale = m.a().abs().max(m.d().abs()).max(T::one());
    if b.abs() <= T::epsilon() * lit(16.0) * scale {
        return Err(Error::DegenerateKernel(format!(
            "b = {b} mm; the detector sits in an image plane of the source, \
             evaluate through effective_image_matrix instead"
        )));
    }
    let k = ctx.wavenumber();
    let two = lit::<T>(2.0);
    Ok(Chirp {
        pre: amplitude(ctx, b) * cis(k * m.length() + k * m.d() * u * u / (two * b)),
        quad: k * m.a() / (two * b),
        lin: Complex::new(T::zero(), -k * u / b),
    })
}

/// Fresnel kernel over `length` as a chirp in `x`, for fixed `y`.
pub fn fresnel_chirp<T: Real>(ctx: &WaveContext<T>, length: T, y: T) -> Result<Chirp<T>> {
    collins_chirp(ctx, &free_space(length)?, y)
}

/// `(iλL)^{−1/2} · exp(ikL) · exp(ik(x − y)²/(2L))`.
pub fn fresnel_kernel<T: Real>(ctx: &WaveContext<T>, length: T, x: T, y: T) -> Result<Complex<T>> {
    if !(length > T::zero()) || !length.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "propagation distance must be positive, got {length}"
        )));
    }
    let k = ctx.wavenumber();
    let dx = x - y;
    Ok(amplitude(ctx, length) * cis(k * length + k * dx * dx / (lit::<T>(2.0) * length)))
}

/// `(iλb)^{−1/2} · exp(ik·len) · exp(ik(a·x² − 2·x·u + d·u²)/(2b))`, where
/// `len` is the axial length carried by `m`.
///
/// With `m = free_space(L)` this is [`fresnel_kernel`] exactly.
pub fn collins_kernel<T: Real>(
    ctx: &WaveContext<T>,
    m: &RayTransferMatrix<T>,
    x: T,
    u: T,
) -> Result<Complex<T>> {
    let b = m.b();
    if b == T::zero() {
        return Err(Error::DegenerateKernel(format!(
            "b = 0 for matrix {:?}; evaluate through effective_image_matrix instead",
            m.elements()
        )));
    }
    let k = ctx.wavenumber();
    let two = lit::<T>(2.0);
    let phase = k * (m.a() * x * x - two * x * u + m.d() * u * u) / (two * b);
    Ok(amplitude(ctx, b) * cis(k * m.length() + phase))
}
