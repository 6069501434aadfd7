//! Reference engine: trapezoid sums over the source plane.
//!
//! The source plane is sampled in `s = (x1 + x2)/2` over `±source_extent·σ_I`
//! and `t = x1 − x2` over `±diff_extent·σ_t`, where `σ_t` is the width of
//! the source correlation along `t`. The `t` grid is exactly mirror
//! symmetric, so `x2(s_i, t_j) = x1(s_i, t_{N−1−j})` and the path-one
//! response is computed once per sample.

use std::sync::OnceLock;

use num_complex::Complex;
use rayon::prelude::*;

use super::{aperture_nodes, EngineConfig, Evaluator, GhostSystem};
use crate::error::{Error, Result};
use crate::quadrature::SymmetricGrid;
use crate::scalar::{cis, lit, to_f64, Real};
use crate::source::gsm_correlation;

/// Half-widths `(S, T)` of the `s` and `t` grids.
fn extents<T: Real>(sys: &GhostSystem<T>, cfg: &EngineConfig) -> (T, T) {
    let si = sys.source.sigma_i();
    let sg = sys.source.sigma_g();
    let inv_var = (lit::<T>(4.0) * si * si).recip() + (sg * sg).recip();
    let sigma_t = inv_var.sqrt().recip();
    (
        lit::<T>(cfg.source_extent) * si,
        lit::<T>(cfg.diff_extent) * sigma_t,
    )
}

/// Refuses scenarios whose source integrands oscillate faster than the
/// trapezoid grids can sample.
///
/// For each of `Γ`, `⟨I1⟩` and `⟨I2⟩` the integrand phase is bounded as
/// `q1·x1² + q2·x2² + g1·x1 + g2·x2` with `|g1| ≤ G1`, `|g2| ≤ G2`. Its
/// derivative along `s` and `t` is bounded over the grid box, and the bound
/// times the grid step must not exceed `π`. `u2_span` is the largest `|u2|`
/// to be evaluated.
pub fn check_brute_resolvable<T: Real>(
    sys: &GhostSystem<T>,
    cfg: &EngineConfig,
    u2_span: T,
) -> Result<()> {
    cfg.validate()?;
    let (s_half, t_half) = extents(sys, cfg);
    let ds = lit::<T>(2.0) * s_half / lit::<T>((cfg.n_source - 1) as f64);
    let dt = lit::<T>(2.0) * t_half / lit::<T>((cfg.n_diff - 1) as f64);
    let k = sys.wave.wavenumber();
    let two = lit::<T>(2.0);
    let z1 = sys.geometry.z1;
    let m = sys.geometry.path2_matrix()?;
    let v_max = sys
        .object
        .support_intervals()
        .iter()
        .fold(T::zero(), |acc, iv| acc.max(iv.lo.abs()).max(iv.hi.abs()));

    let rates = |q1: T, q2: T, g: T| {
        let (sum, diff) = ((q1 + q2).abs(), (q1 - q2).abs());
        (
            two * sum * s_half + diff * t_half + g,
            diff * s_half + sum * t_half / two + g / two,
        )
    };
    let p1 = -k / (two * z1);
    let g_obj = k * v_max / z1;
    let mut cases = vec![("<I1>", rates(p1, -p1, two * g_obj))];
    if m.b() != T::zero() {
        let p2 = k * m.a() / (two * m.b());
        let g_det = k * u2_span / m.b().abs();
        cases.push(("Gamma", rates(p1, p2, g_obj + g_det)));
        cases.push(("<I2>", rates(-p2, p2, two * g_det)));
    }
    for (name, (rate_s, rate_t)) in cases {
        let phase_s = to_f64(rate_s * ds);
        let phase_t = to_f64(rate_t * dt);
        if phase_s > std::f64::consts::PI || phase_t > std::f64::consts::PI {
            return Err(Error::BruteDomain(format!(
                "the {name} integrand advances up to {phase_s:.3} rad per s-step and \
                 {phase_t:.3} rad per t-step (limit pi); sigma_I = {}, sigma_g = {} mm \
                 need a finer source grid (n_source = {}, n_diff = {}) or the reduced engine",
                sys.source.sigma_i(),
                sys.source.sigma_g(),
                cfg.n_source,
                cfg.n_diff
            )));
        }
    }
    Ok(())
}

/// Path-two Collins kernel evaluated directly from the matrix elements.
struct Path2<T> {
    amp: Complex<T>,
    k: T,
    a: T,
    b: T,
    d: T,
    length: T,
}

impl<T: Real> Path2<T> {
    fn eval(&self, x: T, u: T) -> Complex<T> {
        let two = lit::<T>(2.0);
        let phase = self.k * (self.a * x * x - two * x * u + self.d * u * u) / (two * self.b);
        self.amp * cis(self.k * self.length + phase)
    }
}

pub(crate) struct Brute<'a, T> {
    sys: &'a GhostSystem<T>,
    n_t: usize,
    /// `x1 = s + t/2` per sample, row-major in `(s, t)`.
    x1: Vec<T>,
    /// Trapezoid weight times `Γs(x1, x2)` per sample.
    weight: Vec<T>,
    /// `w·H(v)·F_{z2}(v, u1)` at each aperture node.
    nodes: Vec<(T, Complex<T>)>,
    path2: Result<Path2<T>, String>,
    h1: OnceLock<Vec<Complex<T>>>,
}

impl<'a, T: Real> Brute<'a, T> {
    pub(crate) fn new(
        sys: &'a GhostSystem<T>,
        cfg: &EngineConfig,
        u1: T,
        u2_span: T,
    ) -> Result<Self> {
        check_brute_resolvable(sys, cfg, u2_span)?;
        let (s_half, t_half) = extents(sys, cfg);
        let s = SymmetricGrid::new(s_half, cfg.n_source);
        let t = SymmetricGrid::new(t_half, cfg.n_diff);
        let n_t = t.len();
        let half = lit::<T>(0.5);
        let mut x1 = Vec::with_capacity(s.len() * n_t);
        let mut weight = Vec::with_capacity(s.len() * n_t);
        for (&si, &ws) in s.points().iter().zip(s.weights()) {
            for (&tj, &wt) in t.points().iter().zip(t.weights()) {
                let a = si + tj * half;
                let b = si - tj * half;
                x1.push(a);
                weight.push(ws * wt * gsm_correlation(&sys.source, a, b));
            }
        }

        let wave = &sys.wave;
        let g = &sys.geometry;
        let nodes = aperture_nodes(&sys.object, cfg.n_aperture)
            .into_iter()
            .map(|(v, wh)| {
                let dv = v - u1;
                let amp = Complex::new(T::zero(), wave.wavelength() * g.z2)
                    .sqrt()
                    .inv();
                let f2 = amp * cis(wave.wavenumber() * (g.z2 + dv * dv / (lit::<T>(2.0) * g.z2)));
                (v, wh * f2)
            })
            .collect();

        let m = g.path2_matrix()?;
        let path2 = if m.b() == T::zero() {
            Err(format!(
                "b = 0 for the path-two matrix {:?}; evaluate through effective_image_matrix instead",
                m.elements()
            ))
        } else {
            Ok(Path2 {
                amp: Complex::new(T::zero(), wave.wavelength() * m.b())
                    .sqrt()
                    .inv(),
                k: wave.wavenumber(),
                a: m.a(),
                b: m.b(),
                d: m.d(),
                length: m.length(),
            })
        };

        Ok(Brute {
            sys,
            n_t,
            x1,
            weight,
            nodes,
            path2,
            h1: OnceLock::new(),
        })
    }

    fn path2(&self) -> Result<&Path2<T>> {
        self.path2
            .as_ref()
            .map_err(|msg| Error::DegenerateKernel(msg.clone()))
    }

    /// `x2` of sample `idx`, which is `x1` of its `t`-mirror.
    fn mirror(&self, idx: usize) -> usize {
        let row = idx / self.n_t;
        let col = idx % self.n_t;
        row * self.n_t + (self.n_t - 1 - col)
    }

    /// `h1(x1, u1)` at every sample.
    fn h1(&self) -> &[Complex<T>] {
        self.h1.get_or_init(|| {
            let wave = &self.sys.wave;
            let z1 = self.sys.geometry.z1;
            let k = wave.wavenumber();
            let amp = Complex::new(T::zero(), wave.wavelength() * z1).sqrt().inv();
            let two = lit::<T>(2.0);
            self.x1
                .par_iter()
                .map(|&x| {
                    let sum = self.nodes.iter().fold(
                        Complex::new(T::zero(), T::zero()),
                        |acc, &(v, g)| {
                            let d = x - v;
                            acc + g * cis(k * (z1 + d * d / (two * z1)))
                        },
                    );
                    sum * amp
                })
                .collect()
        })
    }
}

impl<T: Real> Evaluator<T> for Brute<'_, T> {
    fn gamma(&self, u2: T) -> Result<Complex<T>> {
        let p2 = self.path2()?;
        let h1 = self.h1();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (idx, (h, &w)) in h1.iter().zip(&self.weight).enumerate() {
            let x2 = self.x1[self.mirror(idx)];
            acc += h.conj() * p2.eval(x2, u2) * w;
        }
        Ok(acc)
    }

    fn intensity1(&self) -> Result<T> {
        let h1 = self.h1();
        let mut acc = Complex::new(T::zero(), T::zero());
        for idx in 0..self.x1.len() {
            acc += h1[idx].conj() * h1[self.mirror(idx)] * self.weight[idx];
        }
        Ok(acc.re.max(T::zero()))
    }

    fn intensity2(&self, u2: T) -> Result<T> {
        let p2 = self.path2()?;
        let mut acc = Complex::new(T::zero(), T::zero());
        for idx in 0..self.x1.len() {
            let x1 = self.x1[idx];
            let x2 = self.x1[self.mirror(idx)];
            acc += p2.eval(x1, u2).conj() * p2.eval(x2, u2) * self.weight[idx];
        }
        Ok(acc.re.max(T::zero()))
    }
}
