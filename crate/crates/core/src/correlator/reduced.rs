//! Analytic engine: source integrals in closed form, aperture by quadrature.

use num_complex::Complex;

use super::form::{gaussian_integral, ComplexQuadraticForm};
use super::kernels::{collins_chirp, fresnel_chirp, fresnel_kernel, Chirp};
use super::{aperture_nodes, EngineConfig, Evaluator, GhostSystem};
use crate::error::{Error, Result};
use crate::geometry::RayTransferMatrix;
use crate::scalar::{imag_unit, lit, Real};
use crate::source::GaussianSchellSource;

/// `∫∫ Γs(x1, x2) · conj(p(x1)) · q(x2) dx1 dx2`.
///
/// The exponent is assembled in `s = (x1 + x2)/2`, `t = x1 − x2` (unit
/// Jacobian). There the coherence term only enters the `tt` entry, so a
/// tiny `σ_g` produces one large diagonal element instead of a near-singular
/// matrix in `(x1, x2)`.
pub(crate) fn source_integral<T: Real>(
    src: &GaussianSchellSource<T>,
    p: &Chirp<T>,
    q: &Chirp<T>,
) -> Result<Complex<T>> {
    let i = imag_unit::<T>();
    let two = lit::<T>(2.0);
    let alpha = src.envelope_rate();
    let beta = src.coherence_rate();
    let q1 = -p.quad;
    let q2 = q.quad;
    let sum = q1 + q2;
    let m_ss = Complex::new(two * alpha, -sum);
    let m_st = i * (-(q1 - q2) / two);
    let m_tt = Complex::new(alpha / two + beta, -sum / lit(4.0));
    let l1 = p.lin.conj();
    let l2 = q.lin;
    let form = ComplexQuadraticForm::two_dim(
        [[m_ss, m_st], [m_st, m_tt]],
        [l1 + l2, (l1 - l2) / two],
        Complex::new(T::zero(), T::zero()),
    )?;
    Ok(p.pre.conj() * q.pre * gaussian_integral(&form)?)
}

struct Node<T> {
    /// `F_{z1}(x, v)` as a function of `x`.
    chirp: Chirp<T>,
    /// `w · H(v) · F_{z2}(v, u1)`.
    weight: Complex<T>,
}

pub(crate) struct Reduced<'a, T> {
    sys: &'a GhostSystem<T>,
    nodes: Vec<Node<T>>,
    path2: RayTransferMatrix<T>,
}

impl<'a, T: Real> Reduced<'a, T> {
    pub(crate) fn new(sys: &'a GhostSystem<T>, cfg: &EngineConfig, u1: T) -> Result<Self> {
        let g = &sys.geometry;
        let nodes = aperture_nodes(&sys.object, cfg.n_aperture)
            .into_iter()
            .map(|(v, wh)| {
                Ok(Node {
                    chirp: fresnel_chirp(&sys.wave, g.z1, v)?,
                    weight: wh * fresnel_kernel(&sys.wave, g.z2, v, u1)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Reduced {
            sys,
            nodes,
            path2: g.path2_matrix()?,
        })
    }
}

impl<T: Real> Evaluator<T> for Reduced<'_, T> {
    fn gamma(&self, u2: T) -> Result<Complex<T>> {
        let h2 = collins_chirp(&self.sys.wave, &self.path2, u2)?;
        self.nodes
            .iter()
            .try_fold(Complex::new(T::zero(), T::zero()), |acc, n| {
                Ok(acc + n.weight.conj() * source_integral(&self.sys.source, &n.chirp, &h2)?)
            })
    }

    fn intensity1(&self) -> Result<T> {
        let mut total = Complex::new(T::zero(), T::zero());
        let mut scale = T::zero();
        for a in &self.nodes {
            for b in &self.nodes {
                let term = a.weight.conj()
                    * b.weight
                    * source_integral(&self.sys.source, &a.chirp, &b.chirp)?;
                scale += term.norm();
                total += term;
            }
        }
        let tol = lit::<T>(1e-9).max(T::epsilon() * lit(64.0));
        if total.im.abs() > tol * total.re.abs() + T::epsilon() * lit::<T>(64.0) * scale {
            return Err(Error::Accuracy(format!(
                "path-one intensity has imaginary residue {} against real part {}",
                total.im, total.re
            )));
        }
        Ok(total.re.max(T::zero()))
    }

    fn intensity2(&self, u2: T) -> Result<T> {
        let h2 = collins_chirp(&self.sys.wave, &self.path2, u2)?;
        Ok(source_integral(&self.sys.source, &h2, &h2)?
            .re
            .max(T::zero()))
    }
}
