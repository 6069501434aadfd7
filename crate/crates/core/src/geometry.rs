//! Paraxial ray-transfer matrices and the two-path layout.
//!
//! All lengths are millimetres. A [`RayTransferMatrix`] also carries the
//! axial distance it spans so diffraction kernels built from it can include
//! the on-axis propagation phase `exp(ikL)`.

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Default tolerance (mm⁻¹) for classifying a layout as an imaging configuration.
pub const IMAGING_TOLERANCE: f64 = 1e-9;

/// Monochromatic wave parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveContext<T> {
    wavelength: T,
    wavenumber: T,
}

impl<T: Real> WaveContext<T> {
    pub fn new(wavelength: T) -> Result<Self> {
        if !(wavelength > T::zero()) || !wavelength.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        Ok(WaveContext {
            wavelength,
            wavenumber: T::TAU() / wavelength,
        })
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    pub fn wavenumber(&self) -> T {
        self.wavenumber
    }
}

/// 2×2 unit-determinant ABCD matrix acting on (position, angle).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayTransferMatrix<T> {
    a: T,
    b: T,
    c: T,
    d: T,
    length: T,
}

impl<T: Real> RayTransferMatrix<T> {
    pub fn identity() -> Self {
        RayTransferMatrix {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
            length: T::zero(),
        }
    }

    /// General element; rejects matrices whose determinant is not 1.
    pub fn new(a: T, b: T, c: T, d: T, length: T) -> Result<Self> {
        let m = RayTransferMatrix { a, b, c, d, length };
        let scale = (a * d).abs().max((b * c).abs()).max(T::one());
        let tol = lit::<T>(1e-9).max(T::epsilon() * lit(64.0)) * scale;
        if (m.determinant() - T::one()).abs() > tol {
            return Err(Error::InvalidGeometry(format!(
                "ray-transfer determinant {} differs from 1",
                m.determinant()
            )));
        }
        Ok(m)
    }

    pub fn a(&self) -> T {
        self.a
    }
    pub fn b(&self) -> T {
        self.b
    }
    pub fn c(&self) -> T {
        self.c
    }
    pub fn d(&self) -> T {
        self.d
    }

    /// Axial distance spanned by the element (mm).
    pub fn length(&self) -> T {
        self.length
    }

    pub fn determinant(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn elements(&self) -> [[T; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// `self` applied after `earlier`.
    pub fn after(&self, earlier: &Self) -> Self {
        compose(self, earlier)
    }
}

/// Free-space propagation over `length` mm.
pub fn free_space<T: Real>(length: T) -> Result<RayTransferMatrix<T>> {
    if !(length > T::zero()) || !length.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "free-space distance must be positive, got {length}"
        )));
    }
    Ok(RayTransferMatrix {
        a: T::one(),
        b: length,
        c: T::zero(),
        d: T::one(),
        length,
    })
}

/// Thin lens of focal length `f` (negative for a diverging lens).
pub fn thin_lens<T: Real>(f: T) -> Result<RayTransferMatrix<T>> {
    if f == T::zero() || !f.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "focal length must be finite and non-zero, got {f}"
        )));
    }
    Ok(RayTransferMatrix {
        a: T::one(),
        b: T::zero(),
        c: -f.recip(),
        d: T::one(),
        length: T::zero(),
    })
}

/// Matrix product `later · earlier`.
pub fn compose<T: Real>(
    later: &RayTransferMatrix<T>,
    earlier: &RayTransferMatrix<T>,
) -> RayTransferMatrix<T> {
    RayTransferMatrix {
        a: later.a * earlier.a + later.b * earlier.c,
        b: later.a * earlier.b + later.b * earlier.d,
        c: later.c * earlier.a + later.d * earlier.c,
        d: later.c * earlier.b + later.d * earlier.d,
        length: later.length + earlier.length,
    }
}

/// Source → lens (`l1`) → thin lens (`f`) → detector two (`l2`).
pub fn path2_matrix<T: Real>(l1: T, f: T, l2: T) -> Result<RayTransferMatrix<T>> {
    Ok(compose(
        &free_space(l2)?,
        &compose(&thin_lens(f)?, &free_space(l1)?),
    ))
}

fn nonsingular_offset<T: Real>(l1: T, z1: T) -> Result<T> {
    let offset = l1 - z1;
    let scale = l1.abs().max(z1.abs()).max(T::one());
    if offset.abs() <= T::epsilon() * lit(16.0) * scale {
        return Err(Error::SingularConfiguration(format!(
            "l1 = z1 = {l1}: the effective object distance vanishes"
        )));
    }
    Ok(offset)
}

/// Residual of the two-path thin-lens equation `1/(l1 − z1) + 1/l2 − 1/f`.
///
/// Zero identifies a layout in which the correlation forms an image of the
/// object on detector two.
pub fn imaging_residual<T: Real>(l1: T, z1: T, l2: T, f: T) -> Result<T> {
    let offset = nonsingular_offset(l1, z1)?;
    if l2 == T::zero() || f == T::zero() {
        return Err(Error::SingularConfiguration(format!(
            "l2 = {l2} and f = {f} must be non-zero"
        )));
    }
    Ok(offset.recip() + l2.recip() - f.recip())
}

/// The path-two system preceded by a back-propagation over `z1`, i.e.
/// `free(l2) · lens(f) · free(l1 − z1)`.
///
/// Its `b` element vanishes exactly when [`imaging_residual`] does. For
/// `l1 < z1` the first factor is a negative (virtual) distance.
pub fn effective_image_matrix<T: Real>(z1: T, l1: T, f: T, l2: T) -> Result<RayTransferMatrix<T>> {
    let offset = nonsingular_offset(l1, z1)?;
    let back = RayTransferMatrix {
        a: T::one(),
        b: offset,
        c: T::zero(),
        d: T::one(),
        length: offset,
    };
    Ok(compose(&free_space(l2)?, &compose(&thin_lens(f)?, &back)))
}

/// Lateral magnification of the ghost image, `−l2/(l1 − z1)`.
///
/// Negative values mean the image is inverted.
pub fn magnification<T: Real>(z1: T, l1: T, f: T, l2: T, tolerance: T) -> Result<T> {
    let residual = imaging_residual(l1, z1, l2, f)?;
    if residual.abs() > tolerance {
        return Err(Error::NotImaging {
            residual: to_f64(residual),
            tolerance: to_f64(tolerance),
        });
    }
    Ok(effective_image_matrix(z1, l1, f, l2)?.a())
}

/// Residual of the imaging condition when the lens sits in path one:
/// `1/(S1 − S2) + 1/S3 − 1/f`.
///
/// `s1` is the source → lens distance, `s2` the source → detector-two
/// distance and `s3` the lens → object distance. The `−S2` term comes from
/// the conjugated path-one response; correlated photon pairs would give
/// `+S2` instead.
pub fn imaging_residual_lens_in_path1<T: Real>(s1: T, s2: T, s3: T, f: T) -> Result<T> {
    let offset = s1 - s2;
    let scale = s1.abs().max(s2.abs()).max(T::one());
    if offset.abs() <= T::epsilon() * lit(16.0) * scale {
        return Err(Error::SingularConfiguration(format!(
            "S1 = S2 = {s1}: the effective source distance vanishes"
        )));
    }
    if s3 == T::zero() || f == T::zero() {
        return Err(Error::SingularConfiguration(format!(
            "S3 = {s3} and f = {f} must be non-zero"
        )));
    }
    Ok(offset.recip() + s3.recip() - f.recip())
}

/// Distances of the two-path layout.
///
/// Path one runs source → object (`z1`) → detector one (`z2`); path two runs
/// source → lens (`l1`) → detector two (`l2`). With `lens_present == false`
/// path two is plain free space of length `l1 + l2`, which is the
/// ghost-interference layout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathGeometry<T> {
    pub z1: T,
    pub z2: T,
    pub l1: T,
    pub f: T,
    pub l2: T,
    pub lens_present: bool,
}

impl<T: Real> PathGeometry<T> {
    pub fn new(z1: T, z2: T, l1: T, f: T, l2: T) -> Result<Self> {
        let g = PathGeometry {
            z1,
            z2,
            l1,
            f,
            l2,
            lens_present: true,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn without_lens(z1: T, z2: T, l1: T, l2: T) -> Result<Self> {
        let g = PathGeometry {
            z1,
            z2,
            l1,
            f: T::infinity(),
            l2,
            lens_present: false,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("z1", self.z1),
            ("z2", self.z2),
            ("l1", self.l1),
            ("l2", self.l2),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidGeometry(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.lens_present && (self.f == T::zero() || !self.f.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "focal length must be finite and non-zero, got {}",
                self.f
            )));
        }
        Ok(())
    }

    /// ABCD matrix from the source to detector two.
    pub fn path2_matrix(&self) -> Result<RayTransferMatrix<T>> {
        if self.lens_present {
            path2_matrix(self.l1, self.f, self.l2)
        } else {
            free_space(self.l1 + self.l2)
        }
    }

    /// `None` when the lens is absent.
    pub fn imaging_residual(&self) -> Result<Option<T>> {
        if !self.lens_present {
            return Ok(None);
        }
        imaging_residual(self.l1, self.z1, self.l2, self.f).map(Some)
    }

    pub fn magnification(&self, tolerance: T) -> Result<T> {
        if !self.lens_present {
            return Err(Error::NotImaging {
                residual: f64::INFINITY,
                tolerance: to_f64(tolerance),
            });
        }
        magnification(self.z1, self.l1, self.f, self.l2, tolerance)
    }
}
