//! Planck-spectrum correlation kernel and its Gaussian coherence width.
//!
//! The field correlation of thermal radiation is the Fourier transform of the
//! mode occupation over wave vectors. Dropping the polarization tensor and
//! all absolute constants, the isotropic angular integral leaves the radial
//! form
//!
//! ```text
//! K(Δx) = ∫ k³ / (exp(ħck / k_B T) − 1) · sin(k Δx) / (k Δx) dk
//! ```
//!
//! which is peaked at `Δx = 0` and close to a Gaussian in its central lobe.

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Speed of light, m/s.
pub const LIGHT_SPEED: f64 = 299_792_458.0;

/// Maximum of `x³/(eˣ − 1)`, the root of `3(1 − e⁻ˣ) = x`.
const WIEN_X: f64 = 2.821_439_372_122_079;

/// Relative spectral mass allowed outside `[k_min, k_max]`.
const TAIL_TOLERANCE: f64 = 1e-9;

/// Kernel level bounding the Gaussian fit window.
const FIT_FLOOR: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct BlackbodySpectrumParams {
    /// Kelvin.
    pub temperature: f64,
    pub hbar: f64,
    pub boltzmann: f64,
    pub light_speed: f64,
    /// Integration cutoffs in rad/mm.
    pub k_min: f64,
    pub k_max: f64,
    pub n_quad: usize,
}

impl BlackbodySpectrumParams {
    /// SI constants, `k_min = 0`, `k_max = 20·k_peak`, 2048 nodes.
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::InvalidSource(format!(
                "temperature must be positive, got {temperature} K"
            )));
        }
        let mut p = BlackbodySpectrumParams {
            temperature,
            hbar: HBAR,
            boltzmann: BOLTZMANN,
            light_speed: LIGHT_SPEED,
            k_min: 0.0,
            k_max: 0.0,
            n_quad: 2048,
        };
        p.k_max = 20.0 * p.peak_wavenumber();
        Ok(p)
    }

    pub fn with_quadrature(mut self, n_quad: usize) -> Self {
        self.n_quad = n_quad;
        self
    }

    /// `k_B T / (ħ c)` in rad/mm.
    pub fn thermal_wavenumber(&self) -> f64 {
        self.boltzmann * self.temperature / (self.hbar * self.light_speed) * 1e-3
    }

    /// Wavenumber (rad/mm) where `k³/(exp(ħck/k_B T) − 1)` peaks.
    pub fn peak_wavenumber(&self) -> f64 {
        WIEN_X * self.thermal_wavenumber()
    }

    fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0) {
            return Err(Error::InvalidSource(format!(
                "temperature must be positive, got {}",
                self.temperature
            )));
        }
        if self.n_quad < 64 {
            return Err(Error::Accuracy(format!(
                "n_quad = {} is below the 64-node minimum",
                self.n_quad
            )));
        }
        if !(self.k_min >= 0.0 && self.k_min < self.k_max) {
            return Err(Error::Accuracy(format!(
                "cutoffs must satisfy 0 <= k_min < k_max, got [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        let peak = self.peak_wavenumber();
        if self.k_max < 10.0 * peak {
            return Err(Error::Accuracy(format!(
                "k_max = {:.4e} rad/mm is below 10 k_peak = {:.4e}",
                self.k_max,
                10.0 * peak
            )));
        }
        let tail = self.excluded_fraction();
        if tail > TAIL_TOLERANCE {
            return Err(Error::Accuracy(format!(
                "cutoffs exclude {tail:.3e} of the spectral mass (limit {TAIL_TOLERANCE:e})"
            )));
        }
        Ok(())
    }

    /// Upper bound on the fraction of `∫ x³/(eˣ − 1) dx = π⁴/15` lying
    /// outside the cutoffs.
    fn excluded_fraction(&self) -> f64 {
        let kt = self.thermal_wavenumber();
        let lo = self.k_min / kt;
        let hi = self.k_max / kt;
        let total = std::f64::consts::PI.powi(4) / 15.0;
        // x³/(eˣ − 1) < x² below, and < x³e⁻ˣ/(1 − e⁻ᴴ) above H
        let below = lo.powi(3) / 3.0;
        let above = (-hi).exp() * (hi.powi(3) + 3.0 * hi * hi + 6.0 * hi + 6.0) / (-(-hi).exp_m1());
        (below + above) / total
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// The spectral quadrature for one parameter set, reusable across many
/// separations.
#[derive(Clone, Debug)]
pub struct BlackbodyKernel {
    k: Vec<f64>,
    weight: Vec<f64>,
}

impl BlackbodyKernel {
    pub fn new(params: &BlackbodySpectrumParams) -> Result<Self> {
        params.validate()?;
        let kt = params.thermal_wavenumber();
        let rule = GaussLegendre::new(params.n_quad);
        let (k, weight) = rule
            .on_interval(params.k_min, params.k_max)
            .into_iter()
            .map(|(k, w)| {
                let x = k / kt;
                let occupation = if x > 0.0 { x.powi(3) / x.exp_m1() } else { 0.0 };
                (k, w * occupation)
            })
            .unzip();
        Ok(BlackbodyKernel { k, weight })
    }

    /// Unnormalized kernel at separation `dx` (mm).
    pub fn eval(&self, dx: f64) -> f64 {
        self.k
            .iter()
            .zip(&self.weight)
            .map(|(&k, &w)| w * sinc(k * dx))
            .sum()
    }
}

/// Unnormalized blackbody correlation at transverse separation `dx` (mm).
pub fn blackbody_kernel(params: &BlackbodySpectrumParams, dx: f64) -> Result<f64> {
    Ok(BlackbodyKernel::new(params)?.eval(dx))
}

/// Result of fitting `exp(−Δx²/(2σ_g²))` to the peak-normalized kernel.
#[derive(Clone, Debug)]
pub struct CoherenceFit {
    /// mm.
    pub sigma_g: f64,
    /// RMS of (Gaussian − kernel) over the fit window, in units of the peak.
    pub rms_residual: f64,
    /// Separations (mm) and normalized kernel values inside the window.
    pub samples: Vec<(f64, f64)>,
}

/// Transverse coherence width for the given temperature.
///
/// Samples the normalized kernel outward from `Δx = 0` in steps of
/// `0.01/k_peak` until it drops below 0.1, then fits `ln K = −Δx²/(2σ_g²)`
/// by least squares through the origin.
pub fn fit_coherence_width(params: &BlackbodySpectrumParams) -> Result<CoherenceFit> {
    let rule = BlackbodyKernel::new(params)?;
    let peak = rule.eval(0.0);
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::FitFailed(format!("kernel peak is {peak}")));
    }
    let step = 0.01 / params.peak_wavenumber();
    let mut samples = Vec::new();
    for i in 0..100_000 {
        let dx = step * i as f64;
        let y = rule.eval(dx) / peak;
        if y < FIT_FLOOR {
            break;
        }
        samples.push((dx, y));
    }
    if samples.len() < 3 {
        return Err(Error::FitFailed(format!(
            "only {} samples above {FIT_FLOOR} of peak",
            samples.len()
        )));
    }
    if samples.len() == 100_000 {
        return Err(Error::FitFailed(
            "kernel never fell below the fit floor".to_string(),
        ));
    }
    let (num, den) = samples.iter().fold((0.0, 0.0), |(n, d), &(x, y)| {
        let x2 = x * x;
        (n + x2 * y.ln(), d + x2 * x2)
    });
    let slope = num / den;
    if !(slope < 0.0) || !slope.is_finite() {
        return Err(Error::FitFailed(format!(
            "log-quadratic slope {slope:e} is not negative ({} samples, last value {:.4})",
            samples.len(),
            samples.last().map(|s| s.1).unwrap_or(f64::NAN)
        )));
    }
    let sigma_g = (-0.5 / slope).sqrt();
    let ms = samples
        .iter()
        .map(|&(x, y)| {
            let r = (-x * x / (2.0 * sigma_g * sigma_g)).exp() - y;
            r * r
        })
        .sum::<f64>()
        / samples.len() as f64;
    Ok(CoherenceFit {
        sigma_g,
        rms_residual: ms.sqrt(),
        samples,
    })
}
