//! Second-order correlations at the two detectors.
//!
//! With the path-one response
//! `h1(x, u1) = ∫ H(v) F_{z1}(x, v) F_{z2}(v, u1) dv` and the path-two Collins
//! kernel `h2(x, u2)`, the detector quantities are
//!
//! ```text
//! Γ(u1, u2)  = ∫∫ Γs(x1, x2) h1*(x1, u1) h2(x2, u2)
//! ⟨I(u1)⟩    = ∫∫ Γs(x1, x2) h1*(x1, u1) h1(x2, u1)
//! ⟨I(u2)⟩    = ∫∫ Γs(x1, x2) h2*(x1, u2) h2(x2, u2)
//! G2(u1, u2) = ⟨I(u1)⟩⟨I(u2)⟩ + |Γ(u1, u2)|²
//! ```
//!
//! Two engines evaluate the source integrals. [`EngineKind::Reduced`] does
//! them in closed form as complex Gaussians and integrates the aperture by
//! Gauss–Legendre. [`EngineKind::Brute`] samples the source plane on a
//! trapezoid grid in the rotated coordinates `s = (x1 + x2)/2`,
//! `t = x1 − x2`, and serves as the reference.

mod brute;
pub mod form;
pub mod kernels;
mod reduced;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{PathGeometry, WaveContext};
use crate::objects::PiecewiseAperture;
use crate::scalar::{lit, Real};
use crate::source::GaussianSchellSource;

pub use brute::check_brute_resolvable;
pub use form::{gaussian_integral, ComplexQuadraticForm};
pub use kernels::{collins_chirp, collins_kernel, fresnel_chirp, fresnel_kernel, Chirp};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    #[default]
    Reduced,
    Brute,
}

impl std::str::FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reduced" => Ok(EngineKind::Reduced),
            "brute" => Ok(EngineKind::Brute),
            other => Err(Error::EngineConfig(format!(
                "unknown engine `{other}` (expected `reduced` or `brute`)"
            ))),
        }
    }
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EngineKind::Reduced => "reduced",
            EngineKind::Brute => "brute",
        })
    }
}

/// Quadrature settings shared by both engines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineConfig {
    pub engine: EngineKind,
    /// Gauss–Legendre nodes per aperture interval.
    pub n_aperture: usize,
    /// Brute engine: trapezoid points along `s = (x1 + x2)/2`.
    pub n_source: usize,
    /// Brute engine: trapezoid points along `t = x1 − x2`.
    pub n_diff: usize,
    /// Half-width of the `s` grid in units of `σ_I`.
    pub source_extent: f64,
    /// Half-width of the `t` grid in units of the source's difference-coordinate
    /// width `σ_t`, where `1/σ_t² = 1/(4σ_I²) + 1/σ_g²`.
    pub diff_extent: f64,
    /// Tolerance for engine cross-checks.
    pub rtol: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            engine: EngineKind::Reduced,
            n_aperture: 64,
            n_source: 257,
            n_diff: 257,
            source_extent: 4.0,
            diff_extent: 6.0,
            rtol: 1e-3,
        }
    }
}

impl EngineConfig {
    pub fn with_engine(mut self, engine: EngineKind) -> Self {
        self.engine = engine;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::EngineConfig(msg));
        if self.n_aperture < 16 {
            return bad(format!("n_aperture = {} is below 16", self.n_aperture));
        }
        if self.n_source < 64 || self.n_diff < 64 {
            return bad(format!(
                "n_source = {} and n_diff = {} must both be at least 64",
                self.n_source, self.n_diff
            ));
        }
        if !(self.source_extent >= 3.0) || !(self.diff_extent >= 3.0) {
            return bad(format!(
                "source_extent = {} and diff_extent = {} must both be at least 3",
                self.source_extent, self.diff_extent
            ));
        }
        if !(self.rtol > 0.0) || !self.rtol.is_finite() {
            return bad(format!("rtol must be positive, got {}", self.rtol));
        }
        Ok(())
    }
}

/// Everything physical about one simulation: layout, wavelength, source and
/// object.
#[derive(Clone, Debug, PartialEq)]
pub struct GhostSystem<T> {
    pub geometry: PathGeometry<T>,
    pub wave: WaveContext<T>,
    pub source: GaussianSchellSource<T>,
    pub object: PiecewiseAperture<T>,
}

impl<T: Real> GhostSystem<T> {
    pub fn new(
        geometry: PathGeometry<T>,
        wave: WaveContext<T>,
        source: GaussianSchellSource<T>,
        object: PiecewiseAperture<T>,
    ) -> Result<Self> {
        geometry.validate()?;
        Ok(GhostSystem {
            geometry,
            wave,
            source,
            object,
        })
    }
}

/// Detector-grid results for a fixed `u1_ref`.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationScan<T> {
    pub u1_ref: T,
    pub u2_grid: Vec<T>,
    /// `Γ(u1_ref, u2)`.
    pub gamma: Vec<Complex<T>>,
    /// `⟨I(u1_ref)⟩`.
    pub i1_ref: T,
    /// `⟨I(u2)⟩`.
    pub i2: Vec<T>,
    /// `G2(u1_ref, u2)`.
    pub g2: Vec<T>,
}

impl<T: Real> CorrelationScan<T> {
    /// Assembles a scan, filling `g2` from the factorization.
    pub fn from_parts(
        u1_ref: T,
        u2_grid: Vec<T>,
        gamma: Vec<Complex<T>>,
        i1_ref: T,
        i2: Vec<T>,
    ) -> Self {
        let g2 = gamma
            .iter()
            .zip(&i2)
            .map(|(g, &i)| i1_ref * i + g.norm_sqr())
            .collect();
        CorrelationScan {
            u1_ref,
            u2_grid,
            gamma,
            i1_ref,
            i2,
            g2,
        }
    }

    pub fn len(&self) -> usize {
        self.u2_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u2_grid.is_empty()
    }

    /// `|Γ(u1_ref, u2)|²`.
    pub fn gamma_sq(&self) -> Vec<T> {
        self.gamma.iter().map(|g| g.norm_sqr()).collect()
    }

    /// `|Γ|²` divided by its maximum; all zeros when `Γ ≡ 0`.
    pub fn normalized_gamma_sq(&self) -> Vec<T> {
        let sq = self.gamma_sq();
        let max = sq.iter().copied().fold(T::zero(), T::max);
        if max > T::zero() {
            sq.into_iter().map(|v| v / max).collect()
        } else {
            sq
        }
    }
}

/// Per-`u1` evaluation state of an engine.
pub(crate) trait Evaluator<T: Real>: Sync {
    fn gamma(&self, u2: T) -> Result<Complex<T>>;
    fn intensity1(&self) -> Result<T>;
    fn intensity2(&self, u2: T) -> Result<T>;
}

/// Builds the configured engine for reference point `u1`. `u2_span` is the
/// largest `|u2|` that will be requested; the brute engine uses it in its
/// sampling check.
pub(crate) fn evaluator<'a, T: Real>(
    sys: &'a GhostSystem<T>,
    cfg: &EngineConfig,
    u1: T,
    u2_span: T,
) -> Result<Box<dyn Evaluator<T> + 'a>> {
    cfg.validate()?;
    Ok(match cfg.engine {
        EngineKind::Reduced => Box::new(reduced::Reduced::new(sys, cfg, u1)?),
        EngineKind::Brute => Box::new(brute::Brute::new(sys, cfg, u1, u2_span)?),
    })
}

/// `Γ(u1, u2)`.
pub fn cross_correlation<T: Real>(
    u1: T,
    u2: T,
    sys: &GhostSystem<T>,
    cfg: &EngineConfig,
) -> Result<Complex<T>> {
    evaluator(sys, cfg, u1, u2.abs())?.gamma(u2)
}

/// `⟨I(u1)⟩` at detector one.
pub fn mean_intensity_path1<T: Real>(u1: T, sys: &GhostSystem<T>, cfg: &EngineConfig) -> Result<T> {
    evaluator(sys, cfg, u1, T::zero())?.intensity1()
}

/// `⟨I(u2)⟩` at detector two.
pub fn mean_intensity_path2<T: Real>(u2: T, sys: &GhostSystem<T>, cfg: &EngineConfig) -> Result<T> {
    evaluator(sys, cfg, T::zero(), u2.abs())?.intensity2(u2)
}

/// `G2(u1, u2) = ⟨I(u1)⟩⟨I(u2)⟩ + |Γ(u1, u2)|²` for a thermal source.
pub fn coincidence_rate<T: Real>(
    u1: T,
    u2: T,
    sys: &GhostSystem<T>,
    cfg: &EngineConfig,
) -> Result<T> {
    let ev = evaluator(sys, cfg, u1, u2.abs())?;
    Ok(ev.intensity1()? * ev.intensity2(u2)? + ev.gamma(u2)?.norm_sqr())
}

/// Evaluates `Γ`, `⟨I(u2)⟩` and `G2` over `u2_grid` with `⟨I(u1_ref)⟩`
/// computed once. Grid points run in parallel; output keeps grid order.
pub fn ghost_image_scan<T: Real>(
    u1_ref: T,
    u2_grid: &[T],
    sys: &GhostSystem<T>,
    cfg: &EngineConfig,
) -> Result<CorrelationScan<T>> {
    let span = u2_grid.iter().fold(T::zero(), |m, u| m.max(u.abs()));
    let ev = evaluator(sys, cfg, u1_ref, span)?;
    let i1 = ev.intensity1()?;
    let points: Vec<(Complex<T>, T)> = u2_grid
        .par_iter()
        .map(|&u2| Ok((ev.gamma(u2)?, ev.intensity2(u2)?)))
        .collect::<Result<_>>()?;
    let (gamma, i2) = points.into_iter().unzip();
    Ok(CorrelationScan::from_parts(
        u1_ref,
        u2_grid.to_vec(),
        gamma,
        i1,
        i2,
    ))
}

/// Gauss–Legendre nodes over every aperture interval, as `(v, w·H(v))`.
pub(crate) fn aperture_nodes<T: Real>(
    object: &PiecewiseAperture<T>,
    n: usize,
) -> Vec<(T, Complex<T>)> {
    let rule = crate::quadrature::GaussLegendre::new(n);
    object
        .support_intervals()
        .iter()
        .flat_map(|iv| {
            rule.on_interval(iv.lo, iv.hi)
                .into_iter()
                .map(move |(v, w)| (v, iv.amplitude * w))
        })
        .collect()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / lit::<T>((n - 1) as f64);
            (0..n)
                .map(|i| {
                    if i + 1 == n {
                        hi
                    } else {
                        lo + step * lit::<T>(i as f64)
                    }
                })
                .collect()
        }
    }
}

/// Symmetric detector grid on `[−half_width, half_width]` whose points
/// satisfy `grid[n − 1 − i] == −grid[i]` exactly.
pub fn symmetric_grid<T: Real>(half_width: T, n: usize) -> Vec<T> {
    if n < 2 {
        return vec![T::zero(); n];
    }
    crate::quadrature::SymmetricGrid::new(half_width, n)
        .points()
        .to_vec()
}
