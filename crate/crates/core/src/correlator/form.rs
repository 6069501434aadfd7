//! Closed-form integrals of complex Gaussians,
//! `∫ exp(−xᵀMx + bᵀx + c0) dⁿx` for `n ∈ {1, 2}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Exponent data `−xᵀMx + bᵀx + c0` with `M` complex symmetric and
/// `Re(M)` positive definite. Both properties are checked on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexQuadraticForm<T> {
    n: usize,
    m: [[Complex<T>; 2]; 2],
    b: [Complex<T>; 2],
    c0: Complex<T>,
}

impl<T: Real> ComplexQuadraticForm<T> {
    pub fn one_dim(m: Complex<T>, b: Complex<T>, c0: Complex<T>) -> Result<Self> {
        let z = Complex::new(T::zero(), T::zero());
        if !(m.re > T::zero()) {
            return Err(Error::Domain(format!("Re(M) = {} is not positive", m.re)));
        }
        check_finite(&[m, b, c0])?;
        Ok(ComplexQuadraticForm {
            n: 1,
            m: [[m, z], [z, z]],
            b: [b, z],
            c0,
        })
    }

    pub fn two_dim(m: [[Complex<T>; 2]; 2], b: [Complex<T>; 2], c0: Complex<T>) -> Result<Self> {
        check_finite(&[m[0][0], m[0][1], m[1][0], m[1][1], b[0], b[1], c0])?;
        let scale = m.iter().flatten().map(|z| z.norm()).fold(T::zero(), T::max);
        let asym = (m[0][1] - m[1][0]).norm();
        if asym > lit::<T>(1e-12).max(T::epsilon() * lit(8.0)) * scale {
            return Err(Error::Domain(format!(
                "matrix is not symmetric: off-diagonal entries differ by {asym}"
            )));
        }
        // Sylvester on the real part
        let r00 = m[0][0].re;
        let r01 = (m[0][1].re + m[1][0].re) / lit(2.0);
        let minor = r00 * m[1][1].re - r01 * r01;
        if !(r00 > T::zero()) || !(minor > T::zero()) {
            return Err(Error::Domain(format!(
                "Re(M) is not positive definite (leading minors {r00}, {minor})"
            )));
        }
        Ok(ComplexQuadraticForm { n: 2, m, b, c0 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> [[Complex<T>; 2]; 2] {
        self.m
    }

    pub fn linear(&self) -> [Complex<T>; 2] {
        self.b
    }

    pub fn constant(&self) -> Complex<T> {
        self.c0
    }

    pub fn determinant(&self) -> Complex<T> {
        match self.n {
            1 => self.m[0][0],
            _ => self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0],
        }
    }

    /// Integrand value at `x` (only the first `n` coordinates are used).
    pub fn exponent_at(&self, x: [T; 2]) -> Complex<T> {
        let mut quad = Complex::new(T::zero(), T::zero());
        let mut lin = Complex::new(T::zero(), T::zero());
        for i in 0..self.n {
            lin += self.b[i] * x[i];
            for j in 0..self.n {
                quad += self.m[i][j] * (x[i] * x[j]);
            }
        }
        -quad + lin + self.c0
    }
}

fn check_finite<T: Real>(values: &[Complex<T>]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(
            "non-finite coefficient in quadratic form".into(),
        ))
    }
}

/// `π^{n/2} · det(M)^{−1/2} · exp(¼ bᵀM⁻¹b + c0)`.
///
/// The square root is the principal branch. For `n ≤ 2` this is the analytic
/// continuation from real `M` whenever `Re(M)` is positive definite: both
/// eigenvalues then lie in the open right half plane, so the arguments of
/// `det M` summed along the continuation stay inside `(−π, π)`.
pub fn gaussian_integral<T: Real>(q: &ComplexQuadraticForm<T>) -> Result<Complex<T>> {
    let det = q.determinant();
    if det.norm() == T::zero() || !det.re.is_finite() || !det.im.is_finite() {
        return Err(Error::Branch(format!(
            "determinant {det} has no usable square root"
        )));
    }
    let [b0, b1] = q.b;
    let (quarter, prefactor) = match q.n {
        1 => (b0 * b0 / (det * lit::<T>(4.0)), T::PI().sqrt()),
        _ => {
            let [[m00, m01], [_, m11]] = q.m;
            let num = m11 * b0 * b0 - m01 * b0 * b1 * lit::<T>(2.0) + m00 * b1 * b1;
            (num / (det * lit::<T>(4.0)), T::PI())
        }
    };
    Ok((quarter + q.c0).exp() * prefactor / det.sqrt())
}
