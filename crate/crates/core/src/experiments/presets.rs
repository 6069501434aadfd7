//! Built-in scenarios for the double-slit ghost-imaging studies.

use super::scenario::{
    log_spaced, DetectorSpec, GeometrySpec, MetricSpec, ObjectSpec, Scenario, SourceSpec,
    SweepMetrics, SweepSpec, DEFAULT_WAVELENGTH,
};
use crate::correlator::EngineConfig;
use crate::error::{Error, Result};

/// Slit width and centre separation of the double-slit object (mm).
pub const SLIT_WIDTH: f64 = 0.01;
pub const SLIT_SEPARATION: f64 = 0.03;

/// Layout distances (mm).
pub const Z1: f64 = 10.0;
pub const Z2: f64 = 40.0;
pub const L1: f64 = 30.0;
pub const FOCAL_LENGTH: f64 = 10.0;
/// Image plane of the object through the lens: `1/(l1 − z1) + 1/l2 = 1/f`.
pub const L2_IMAGING: f64 = 20.0;

/// Endpoints and count of the default `σ_g` sweep (mm).
pub const SIGMA_G_SWEEP: (f64, f64, usize) = (1e-5, 3e-3, 12);

/// One scenario of a preset. `label` is empty for single-scenario presets
/// and distinguishes the series of multi-series sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct PresetRun {
    pub label: String,
    pub scenario: Scenario,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub runs: Vec<PresetRun>,
}

pub const PRESET_NAMES: &[&str] = &[
    "fig2a",
    "fig2b",
    "fig2c",
    "fig3a",
    "fig3b",
    "fig3c",
    "fig4a",
    "fig4b",
    "fig4c",
    "fig5",
    "fig6",
    "ghost-interference",
];

/// Double-slit imaging layout with the given source and lens-to-detector
/// distance.
pub fn double_slit_scenario(sigma_i: f64, sigma_g: f64, l2: f64) -> Scenario {
    Scenario {
        source: SourceSpec {
            sigma_i,
            sigma_g: Some(sigma_g),
            temperature: None,
            wavelength: DEFAULT_WAVELENGTH,
        },
        geometry: GeometrySpec {
            z1: Z1,
            z2: Z2,
            l1: L1,
            f: Some(FOCAL_LENGTH),
            l2,
            lens_present: true,
        },
        object: ObjectSpec::DoubleSlit {
            slit_width: SLIT_WIDTH,
            separation: SLIT_SEPARATION,
        },
        detector: DetectorSpec::default(),
        engine: EngineConfig::default(),
        metrics: MetricSpec::default(),
        sweep: None,
    }
}

/// The imaging layout with the lens taken out of path two; detector two then
/// sits `l1 + l2` from the source.
pub fn ghost_interference_scenario(sigma_i: f64, sigma_g: f64) -> Scenario {
    let mut s = double_slit_scenario(sigma_i, sigma_g, L2_IMAGING);
    s.geometry.f = None;
    s.geometry.lens_present = false;
    s.detector = DetectorSpec {
        u1_ref: 0.0,
        u2_min: -4.0,
        u2_max: 4.0,
        points: 801,
    };
    s
}

fn sigma_g_sweep(metrics: SweepMetrics) -> SweepSpec {
    let (lo, hi, n) = SIGMA_G_SWEEP;
    SweepSpec {
        parameter: "source.sigma_g".into(),
        values: log_spaced(lo, hi, n),
        metrics,
    }
}

fn single(name: &'static str, description: &'static str, scenario: Scenario) -> Preset {
    Preset {
        name,
        description,
        runs: vec![PresetRun {
            label: String::new(),
            scenario,
        }],
    }
}

fn series(
    name: &'static str,
    description: &'static str,
    sigma_is: &[f64],
    metrics: SweepMetrics,
) -> Preset {
    let runs = sigma_is
        .iter()
        .map(|&si| {
            let mut s = double_slit_scenario(si, SIGMA_G_SWEEP.0, L2_IMAGING);
            s.sweep = Some(sigma_g_sweep(metrics));
            PresetRun {
                label: format!("sigma_I={si}"),
                scenario: s,
            }
        })
        .collect();
    Preset {
        name,
        description,
        runs,
    }
}

pub fn preset(name: &str) -> Result<Preset> {
    let p = match name {
        "fig2a" => single(
            "fig2a",
            "imaging layout, l2 = 20 mm",
            double_slit_scenario(5.0, 1e-5, 20.0),
        ),
        "fig2b" => single(
            "fig2b",
            "detector 0.5 mm past the image plane",
            double_slit_scenario(5.0, 1e-5, 20.5),
        ),
        "fig2c" => single(
            "fig2c",
            "detector 1.5 mm past the image plane",
            double_slit_scenario(5.0, 1e-5, 21.5),
        ),
        "fig3a" => single(
            "fig3a",
            "sigma_I = 0.1 mm",
            double_slit_scenario(0.1, 1e-3, L2_IMAGING),
        ),
        "fig3b" => single(
            "fig3b",
            "sigma_I = 1 mm",
            double_slit_scenario(1.0, 1e-3, L2_IMAGING),
        ),
        "fig3c" => single(
            "fig3c",
            "sigma_I = 5 mm",
            double_slit_scenario(5.0, 1e-3, L2_IMAGING),
        ),
        "fig4a" => single(
            "fig4a",
            "sigma_g = 1e-5 mm",
            double_slit_scenario(5.0, 1e-5, L2_IMAGING),
        ),
        "fig4b" => single(
            "fig4b",
            "sigma_g = 5e-4 mm",
            double_slit_scenario(5.0, 5e-4, L2_IMAGING),
        ),
        "fig4c" => single(
            "fig4c",
            "sigma_g = 3e-3 mm",
            double_slit_scenario(5.0, 3e-3, L2_IMAGING),
        ),
        "fig5" => series(
            "fig5",
            "visibility against sigma_g",
            &[1.0, 5.0, 10.0],
            SweepMetrics::Visibility,
        ),
        "fig6" => series(
            "fig6",
            "quality factor against sigma_g",
            &[1.0, 5.0],
            SweepMetrics::Quality,
        ),
        "ghost-interference" => single(
            "ghost-interference",
            "lens removed from path two",
            ghost_interference_scenario(5.0, 1e-5),
        ),
        other => {
            return Err(Error::config(
                "preset",
                format!(
                    "unknown preset `{other}`; available: {}",
                    PRESET_NAMES.join(", ")
                ),
            ))
        }
    };
    Ok(p)
}
