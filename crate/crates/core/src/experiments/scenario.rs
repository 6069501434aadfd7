//! TOML-facing scenario description and its translation into a
//! [`GhostSystem`].

use serde::{Deserialize, Serialize};

use crate::correlator::{linspace, EngineConfig, GhostSystem};
use crate::error::{Error, Result};
use crate::geometry::{PathGeometry, WaveContext, IMAGING_TOLERANCE};
use crate::metrics::{QualityConvention, VisibilityConvention, DEFAULT_PROMINENCE};
use crate::objects::PiecewiseAperture;
use crate::source::{fit_coherence_width, BlackbodySpectrumParams, GaussianSchellSource};

/// 702 nm in millimetres.
pub const DEFAULT_WAVELENGTH: f64 = 7.02e-4;

/// One complete simulation: source, layout, object, detector grid, engine
/// settings and metric conventions. An optional `[sweep]` section turns it
/// into a parameter study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub source: SourceSpec,
    pub geometry: GeometrySpec,
    pub object: ObjectSpec,
    #[serde(default)]
    pub detector: DetectorSpec,
    #[serde(default)]
    pub engine: EngineConfig,
    #[serde(default)]
    pub metrics: MetricSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

/// Exactly one of `sigma_g` and `temperature` must be set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    #[serde(rename = "sigma_I")]
    pub sigma_i: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_g: Option<f64>,
    /// Kelvin; `σ_g` is then the blackbody fit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default = "default_wavelength")]
    pub wavelength: f64,
}

fn default_wavelength() -> f64 {
    DEFAULT_WAVELENGTH
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub z1: f64,
    pub z2: f64,
    pub l1: f64,
    /// Required when `lens_present`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    pub l2: f64,
    #[serde(default = "yes")]
    pub lens_present: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObjectSpec {
    DoubleSlit {
        slit_width: f64,
        separation: f64,
    },
    SingleSlit {
        slit_width: f64,
        #[serde(default)]
        center: f64,
    },
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorSpec {
    pub u1_ref: f64,
    pub u2_min: f64,
    pub u2_max: f64,
    pub points: usize,
}

impl Default for DetectorSpec {
    fn default() -> Self {
        DetectorSpec {
            u1_ref: 0.0,
            u2_min: -0.05,
            u2_max: 0.05,
            points: 201,
        }
    }
}

impl DetectorSpec {
    /// Evenly spaced `u2` values; exactly mirror symmetric when the window is.
    pub fn grid(&self) -> Vec<f64> {
        if self.u2_min == -self.u2_max {
            crate::correlator::symmetric_grid(self.u2_max, self.points)
        } else {
            linspace(self.u2_min, self.u2_max, self.points)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricSpec {
    pub visibility: VisibilityConvention,
    pub quality: QualityConvention,
    pub prominence: f64,
    /// mm⁻¹; layouts with a larger imaging residual get no quality factor.
    pub imaging_tolerance: f64,
}

impl Default for MetricSpec {
    fn default() -> Self {
        MetricSpec {
            visibility: VisibilityConvention::default(),
            quality: QualityConvention::default(),
            prominence: DEFAULT_PROMINENCE,
            imaging_tolerance: IMAGING_TOLERANCE,
        }
    }
}

/// Which metrics a sweep reports per value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepMetrics {
    #[serde(rename = "V")]
    Visibility,
    #[serde(rename = "Q")]
    Quality,
    #[default]
    #[serde(rename = "both")]
    Both,
}

impl SweepMetrics {
    pub fn visibility(self) -> bool {
        self != SweepMetrics::Quality
    }

    pub fn quality(self) -> bool {
        self != SweepMetrics::Visibility
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Dotted scenario path, e.g. `source.sigma_g`.
    pub parameter: String,
    pub values: Vec<f64>,
    #[serde(default)]
    pub metrics: SweepMetrics,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("sweep.values", "the value list is empty"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("sweep.values", "values must be finite"));
        }
        let rising = self.values.windows(2).all(|w| w[1] > w[0]);
        let falling = self.values.windows(2).all(|w| w[1] < w[0]);
        if !(rising || falling) {
            return Err(Error::config(
                "sweep.values",
                "values must be strictly monotone",
            ));
        }
        if !SWEEPABLE.contains(&self.parameter.as_str()) {
            return Err(Error::config(
                "sweep.parameter",
                format!(
                    "`{}` cannot be swept; choose one of {}",
                    self.parameter,
                    SWEEPABLE.join(", ")
                ),
            ));
        }
        Ok(())
    }
}

/// Parameter paths accepted by [`Scenario::with_parameter`].
pub const SWEEPABLE: &[&str] = &[
    "source.sigma_I",
    "source.sigma_g",
    "source.temperature",
    "source.wavelength",
    "geometry.z1",
    "geometry.z2",
    "geometry.l1",
    "geometry.f",
    "geometry.l2",
    "object.slit_width",
    "object.separation",
    "detector.u1_ref",
];

/// `n` values from `lo` to `hi` evenly spaced in `log10`, endpoints exact.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64),
        })
        .collect()
}

/// A scenario translated into library values.
#[derive(Clone, Debug)]
pub struct BuiltScenario {
    pub system: GhostSystem<f64>,
    pub grid: Vec<f64>,
    /// `σ_g` actually used, after any blackbody fit.
    pub sigma_g: f64,
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text)
            .map_err(|e| Error::config("<toml>", e.to_string().trim_end().to_string()))
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| {
            Error::config(
                path.display().to_string(),
                e.to_string().trim_end().to_string(),
            )
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    /// Copy with the dotted `path` set to `value`. Setting `source.sigma_g`
    /// clears `source.temperature` and vice versa.
    pub fn with_parameter(&self, path: &str, value: f64) -> Result<Scenario> {
        let mut s = self.clone();
        match path {
            "source.sigma_I" => s.source.sigma_i = value,
            "source.sigma_g" => {
                s.source.sigma_g = Some(value);
                s.source.temperature = None;
            }
            "source.temperature" => {
                s.source.temperature = Some(value);
                s.source.sigma_g = None;
            }
            "source.wavelength" => s.source.wavelength = value,
            "geometry.z1" => s.geometry.z1 = value,
            "geometry.z2" => s.geometry.z2 = value,
            "geometry.l1" => s.geometry.l1 = value,
            "geometry.f" => s.geometry.f = Some(value),
            "geometry.l2" => s.geometry.l2 = value,
            "object.slit_width" => match &mut s.object {
                ObjectSpec::DoubleSlit { slit_width, .. }
                | ObjectSpec::SingleSlit { slit_width, .. } => *slit_width = value,
                ObjectSpec::Empty => {
                    return Err(Error::config(path, "the empty object has no slit width"))
                }
            },
            "object.separation" => match &mut s.object {
                ObjectSpec::DoubleSlit { separation, .. } => *separation = value,
                _ => return Err(Error::config(path, "only the double slit has a separation")),
            },
            "detector.u1_ref" => s.detector.u1_ref = value,
            other => {
                return Err(Error::config(
                    "sweep.parameter",
                    format!(
                        "`{other}` cannot be swept; choose one of {}",
                        SWEEPABLE.join(", ")
                    ),
                ))
            }
        }
        Ok(s)
    }

    /// `σ_g` from the config, fitting the blackbody kernel when a
    /// temperature is given.
    pub fn resolve_sigma_g(&self) -> Result<f64> {
        match (self.source.sigma_g, self.source.temperature) {
            (Some(_), Some(_)) => Err(Error::config(
                "source",
                "give either sigma_g or temperature, not both",
            )),
            (None, None) => Err(Error::config(
                "source",
                "either sigma_g or temperature is required",
            )),
            (Some(sg), None) => Ok(sg),
            (None, Some(t)) => {
                let params = BlackbodySpectrumParams::new(t)
                    .map_err(|e| Error::config("source.temperature", e.to_string()))?;
                fit_coherence_width(&params)
                    .map(|fit| fit.sigma_g)
                    .map_err(|e| e.context("source.temperature"))
            }
        }
    }

    pub fn object_aperture(&self) -> Result<PiecewiseAperture<f64>> {
        let ap = match self.object {
            ObjectSpec::DoubleSlit {
                slit_width,
                separation,
            } => PiecewiseAperture::double_slit(slit_width, separation),
            ObjectSpec::SingleSlit { slit_width, center } => {
                PiecewiseAperture::slit_at(center, slit_width)
            }
            ObjectSpec::Empty => Ok(PiecewiseAperture::empty()),
        };
        ap.map_err(|e| Error::config("object", e.to_string()))
    }

    pub fn path_geometry(&self) -> Result<PathGeometry<f64>> {
        let g = &self.geometry;
        let built = if g.lens_present {
            let f = g.f.ok_or_else(|| {
                Error::config(
                    "geometry.f",
                    "a focal length is required when lens_present = true",
                )
            })?;
            PathGeometry::new(g.z1, g.z2, g.l1, f, g.l2)
        } else {
            PathGeometry::without_lens(g.z1, g.z2, g.l1, g.l2)
        };
        built.map_err(|e| Error::config("geometry", e.to_string()))
    }

    /// Validates every section and assembles the physical system.
    pub fn build(&self) -> Result<BuiltScenario> {
        let sigma_g = self.resolve_sigma_g()?;
        let source = GaussianSchellSource::new(self.source.sigma_i, sigma_g)
            .map_err(|e| Error::config("source", e.to_string()))?;
        let wave = WaveContext::new(self.source.wavelength)
            .map_err(|e| Error::config("source.wavelength", e.to_string()))?;
        let geometry = self.path_geometry()?;
        let object = self.object_aperture()?;
        self.engine
            .validate()
            .map_err(|e| Error::config("engine", e.to_string()))?;
        let d = &self.detector;
        if d.points < 2 || !(d.u2_min < d.u2_max) || !d.u1_ref.is_finite() {
            return Err(Error::config(
                "detector",
                format!(
                    "need u2_min < u2_max and at least 2 points, got [{}, {}] with {}",
                    d.u2_min, d.u2_max, d.points
                ),
            ));
        }
        let m = &self.metrics;
        if !(m.prominence >= 0.0 && m.prominence < 1.0) {
            return Err(Error::config("metrics.prominence", "must lie in [0, 1)"));
        }
        if !(m.imaging_tolerance >= 0.0) {
            return Err(Error::config(
                "metrics.imaging_tolerance",
                "must be non-negative",
            ));
        }
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        Ok(BuiltScenario {
            system: GhostSystem::new(geometry, wave, source, object)?,
            grid: d.grid(),
            sigma_g,
        })
    }
}
