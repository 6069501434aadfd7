//! Config-driven runs: single scenarios, parameter sweeps, engine
//! cross-checks and their CSV/gnuplot output.

mod output;
pub mod presets;
pub mod scenario;

use rayon::prelude::*;

use crate::correlator::{check_brute_resolvable, ghost_image_scan, CorrelationScan, EngineKind};
use crate::error::{Error, Result};
use crate::metrics::{peak_positions, quality_with, visibility, QualityReport};

pub use output::{
    labelled_path, scan_csv, scan_gnuplot, sweep_csv, sweep_gnuplot, write_file, SCAN_HEADER,
    SWEEP_HEADER,
};
pub use presets::{preset, Preset, PresetRun, PRESET_NAMES};
pub use scenario::{
    log_spaced, BuiltScenario, DetectorSpec, GeometrySpec, MetricSpec, ObjectSpec, Scenario,
    SourceSpec, SweepMetrics, SweepSpec, SWEEPABLE,
};

/// Scan plus figures of merit for one scenario.
#[derive(Debug)]
pub struct ScenarioResult {
    pub scan: CorrelationScan<f64>,
    /// `σ_g` used, after any blackbody fit (mm).
    pub sigma_g: f64,
    pub visibility: Result<f64>,
    /// `None` when the layout is not an imaging configuration.
    pub quality: Option<Result<QualityReport<f64>>>,
    pub magnification: Option<f64>,
    pub peaks: Vec<f64>,
}

/// Config section most likely responsible for a numerical failure.
fn section_for(err: &Error) -> &'static str {
    match err.root() {
        Error::DegenerateKernel(_) | Error::SingularConfiguration(_) | Error::NotImaging { .. } => {
            "geometry"
        }
        Error::InvalidSource(_) | Error::FitFailed(_) => "source",
        Error::InvalidAperture(_) => "object",
        _ => "engine",
    }
}

pub fn run_scenario(s: &Scenario) -> Result<ScenarioResult> {
    let built = s.build()?;
    let sys = &built.system;
    let scan = ghost_image_scan(s.detector.u1_ref, &built.grid, sys, &s.engine).map_err(|e| {
        let section = section_for(&e);
        e.context(section)
    })?;
    let metrics = &s.metrics;
    let tol = metrics.imaging_tolerance;
    let magnification = match sys.geometry.imaging_residual() {
        Ok(Some(r)) if r.abs() <= tol => sys.geometry.magnification(tol).ok(),
        _ => None,
    };
    let quality = magnification.map(|mag| quality_with(&scan, &sys.object, mag, metrics.quality));
    Ok(ScenarioResult {
        visibility: visibility(&scan, metrics.visibility),
        peaks: peak_positions(&scan, metrics.prominence),
        sigma_g: built.sigma_g,
        quality,
        magnification,
        scan,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub visibility: Option<f64>,
    pub quality: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub parameter: String,
    pub metrics: SweepMetrics,
    pub rows: Vec<SweepRow>,
}

fn sweep_row(base: &Scenario, sweep: &SweepSpec, value: f64) -> SweepRow {
    let mut row = SweepRow {
        value,
        visibility: None,
        quality: None,
        error: None,
    };
    let result = base
        .with_parameter(&sweep.parameter, value)
        .and_then(|s| run_scenario(&s));
    let r = match result {
        Ok(r) => r,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let mut errors = Vec::new();
    if sweep.metrics.visibility() {
        match r.visibility {
            Ok(v) => row.visibility = Some(v),
            Err(e) => errors.push(e.to_string()),
        }
    }
    if sweep.metrics.quality() {
        match r.quality {
            Some(Ok(q)) => row.quality = Some(q.q),
            Some(Err(e)) => errors.push(e.to_string()),
            None => {}
        }
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

/// One row per sweep value, in the order given. Failures are recorded in
/// the row's `error` field and the sweep continues.
pub fn run_sweep(s: &Scenario, sweep: &SweepSpec) -> Result<SweepTable> {
    sweep.validate()?;
    let rows = sweep
        .values
        .par_iter()
        .map(|&v| sweep_row(s, sweep, v))
        .collect();
    Ok(SweepTable {
        parameter: sweep.parameter.clone(),
        metrics: sweep.metrics,
        rows,
    })
}

/// Largest deviations between two scans of the same grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationReport {
    /// `max |Γa − Γb| / max |Γa|`.
    pub gamma: f64,
    /// `|I1a − I1b| / I1a`.
    pub i1: f64,
    /// `max |I2a − I2b| / max I2a`.
    pub i2: f64,
    pub rtol: f64,
    pub points: usize,
}

impl DeviationReport {
    pub fn max(&self) -> f64 {
        self.gamma.max(self.i1).max(self.i2)
    }

    pub fn passed(&self) -> bool {
        self.max() <= self.rtol
    }
}

fn relative(diff: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        diff / scale
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Compares `b` against the reference `a`, normalizing by the peak of `a`.
pub fn compare_scans(
    a: &CorrelationScan<f64>,
    b: &CorrelationScan<f64>,
    rtol: f64,
) -> Result<DeviationReport> {
    if a.u2_grid != b.u2_grid || a.u1_ref != b.u1_ref {
        return Err(Error::EngineConfig(
            "scans are on different detector grids".into(),
        ));
    }
    let peak = |v: &mut dyn Iterator<Item = f64>| v.fold(0.0, f64::max);
    let gamma = relative(
        peak(&mut a.gamma.iter().zip(&b.gamma).map(|(x, y)| (x - y).norm())),
        peak(&mut a.gamma.iter().map(|x| x.norm())),
    );
    let i2 = relative(
        peak(&mut a.i2.iter().zip(&b.i2).map(|(x, y)| (x - y).abs())),
        peak(&mut a.i2.iter().copied()),
    );
    Ok(DeviationReport {
        gamma,
        i1: relative((a.i1_ref - b.i1_ref).abs(), a.i1_ref.abs()),
        i2,
        rtol,
        points: a.len(),
    })
}

/// Runs the scenario through both engines and reports their deviation.
/// The brute engine's sampling check runs first and refuses scenarios it
/// cannot resolve. `rtol` overrides `engine.rtol`.
pub fn verify(s: &Scenario, rtol: Option<f64>) -> Result<DeviationReport> {
    let built = s.build()?;
    let rtol = rtol.unwrap_or(s.engine.rtol);
    if !(rtol > 0.0) {
        return Err(Error::config(
            "engine.rtol",
            format!("must be positive, got {rtol}"),
        ));
    }
    let span = built.grid.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    check_brute_resolvable(&built.system, &s.engine, span).map_err(|e| e.context("engine"))?;
    let run = |kind: EngineKind| {
        ghost_image_scan(
            s.detector.u1_ref,
            &built.grid,
            &built.system,
            &s.engine.clone().with_engine(kind),
        )
        .map_err(|e| e.context(format!("{kind} engine")))
    };
    let reduced = run(EngineKind::Reduced)?;
    let brute = run(EngineKind::Brute)?;
    compare_scans(&brute, &reduced, rtol)
}
