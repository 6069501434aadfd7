//! Simulation of ghost imaging with thermal light.
//!
//! A spatially partially coherent source (Gaussian Schell model, optionally
//! derived from a blackbody spectrum) feeds two optical paths. Path one holds
//! the object and a point detector, path two a lens and a
//! scanning detector. The correlation of the two detector fields forms an
//! image of the object although no light that reached detector two ever
//! touched it.
//!
//! * [`geometry`]: ABCD matrices and the imaging condition of the two-path layout.
//! * [`source`]: source correlation and the blackbody coherence width.
//! * [`objects`]: piecewise-constant transmission masks.
//! * [`correlator`]: `Γ`, mean intensities and `G2` via an analytic and a
//!   brute-force engine.
//! * [`metrics`]: visibility, quality factor, peaks and fringe period.
//! * [`experiments`]: TOML scenarios, presets, sweeps and CSV output.
//!
//! Geometry, objects, sources and both engines are generic over the float
//! type; the aliases below fix it to `f64` (or `f32` with the `32` suffix).
//!
//! ```
//! use ghostlight::experiments::{preset, run_scenario};
//!
//! let fig = preset("fig2a").unwrap();
//! let result = run_scenario(&fig.runs[0].scenario).unwrap();
//! assert_eq!(result.peaks.len(), 2);
//! ```

// Parameter checks are written `!(x > 0)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlator;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod metrics;
pub mod objects;
pub mod quadrature;
pub mod scalar;
pub mod source;

pub use error::{Error, ErrorKind, Result};

pub type RayTransferMatrix = geometry::RayTransferMatrix<f64>;
pub type PathGeometry = geometry::PathGeometry<f64>;
pub type WaveContext = geometry::WaveContext<f64>;
pub type GaussianSchellSource = source::GaussianSchellSource<f64>;
pub type PiecewiseAperture = objects::PiecewiseAperture<f64>;
pub type ComplexQuadraticForm = correlator::ComplexQuadraticForm<f64>;
pub type GhostSystem = correlator::GhostSystem<f64>;
pub type CorrelationScan = correlator::CorrelationScan<f64>;
pub type QualityReport = metrics::QualityReport<f64>;

pub type RayTransferMatrix32 = geometry::RayTransferMatrix<f32>;
pub type PathGeometry32 = geometry::PathGeometry<f32>;
pub type WaveContext32 = geometry::WaveContext<f32>;
pub type GaussianSchellSource32 = source::GaussianSchellSource<f32>;
pub type PiecewiseAperture32 = objects::PiecewiseAperture<f32>;
pub type GhostSystem32 = correlator::GhostSystem<f32>;
pub type CorrelationScan32 = correlator::CorrelationScan<f32>;

pub use correlator::{EngineConfig, EngineKind};
pub use metrics::{QualityConvention, VisibilityConvention};
