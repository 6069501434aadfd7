//! Figures of merit for a correlation scan: visibility, image quality,
//! peak positions and fringe period.

use serde::{Deserialize, Serialize};

use crate::correlator::CorrelationScan;
use crate::error::{Error, Result};
use crate::objects::PiecewiseAperture;
use crate::quadrature::trapezoid;
use crate::scalar::{lit, Real};

/// Denominator of the visibility ratio.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VisibilityConvention {
    /// `max |Γ|² / max ⟨I1⟩⟨I2⟩`.
    #[default]
    IntensityProduct,
    /// `max |Γ|² / max (⟨I1⟩⟨I2⟩ + |Γ|²)`.
    IntensityProductPlusCorrelation,
}

/// Which power of the image and object enters the quality integral.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QualityConvention {
    /// Compare `|Γ|²` with `|H|²`, each peak-normalized.
    #[default]
    SquaredMagnitude,
    /// Compare `|Γ|` with `|H|`, each peak-normalized.
    Magnitude,
}

/// Ghost-image visibility along the scan.
pub fn visibility<T: Real>(scan: &CorrelationScan<T>, conv: VisibilityConvention) -> Result<T> {
    if scan.is_empty() {
        return Err(Error::UndefinedVisibility("the scan has no points".into()));
    }
    let signal = scan.gamma_sq().into_iter().fold(T::zero(), T::max);
    let background = scan
        .i2
        .iter()
        .zip(&scan.gamma)
        .map(|(&i2, g)| {
            let base = scan.i1_ref * i2;
            match conv {
                VisibilityConvention::IntensityProduct => base,
                VisibilityConvention::IntensityProductPlusCorrelation => base + g.norm_sqr(),
            }
        })
        .fold(T::zero(), T::max);
    if !(background > T::zero()) {
        return Err(Error::UndefinedVisibility(format!(
            "the intensity background is {background} everywhere on the scan"
        )));
    }
    Ok(signal / background)
}

/// Image quality relative to the magnified object.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport<T> {
    /// Normalized mean-square deviation; 0 for a perfect image.
    pub q: T,
    pub grid: Vec<T>,
    pub normalized_image: Vec<T>,
    pub normalized_ideal: Vec<T>,
}

/// Quality factor with the default [`QualityConvention`].
pub fn quality<T: Real>(
    scan: &CorrelationScan<T>,
    ideal: &PiecewiseAperture<T>,
    mag: T,
) -> Result<QualityReport<T>> {
    quality_with(scan, ideal, mag, QualityConvention::default())
}

/// `Q = ∫ (image − ideal)² du2 / ∫ ideal² du2`, where `image` is the
/// normalized correlation and `ideal(u2)` the normalized object transmission
/// at `u2/mag`. A negative `mag` mirrors the object.
///
/// Both integrals use the trapezoid rule on the scan grid. A node that lands
/// on an edge of the magnified object contributes the mean of the integrand's
/// one-sided limits, which keeps the rule second order across the jump;
/// `normalized_ideal` reports the midpoint there.
pub fn quality_with<T: Real>(
    scan: &CorrelationScan<T>,
    ideal: &PiecewiseAperture<T>,
    mag: T,
    conv: QualityConvention,
) -> Result<QualityReport<T>> {
    if mag == T::zero() || !mag.is_finite() {
        return Err(Error::UndefinedQuality(format!(
            "magnification {mag} is not usable"
        )));
    }
    let n = scan.len();
    if n < 2 {
        return Err(Error::UndefinedQuality(
            "the scan needs at least two points".into(),
        ));
    }
    let power = |x: T| match conv {
        QualityConvention::SquaredMagnitude => x * x,
        QualityConvention::Magnitude => x,
    };
    let grid = &scan.u2_grid;
    let image = normalize(scan.gamma.iter().map(|g| power(g.norm())).collect());
    let snap = lit::<T>(1e-9);
    let limits: Vec<(T, T)> = (0..n)
        .map(|i| {
            let h = if i == 0 {
                grid[1] - grid[0]
            } else if i + 1 == n {
                grid[i] - grid[i - 1]
            } else {
                (grid[i] - grid[i - 1]).min(grid[i + 1] - grid[i])
            };
            let v = grid[i] / mag;
            match ideal.edge_near(v, snap * h.abs() / mag.abs()) {
                Some(edge) => {
                    let (below, above) = ideal.limits(edge);
                    (power(below.norm()), power(above.norm()))
                }
                None => {
                    let t = power(ideal.transmission(v).norm());
                    (t, t)
                }
            }
        })
        .collect();
    let max = limits.iter().fold(T::zero(), |m, &(a, b)| m.max(a).max(b));
    if !(max > T::zero()) {
        return Err(Error::UndefinedQuality(
            "the magnified object has no support on the detector grid".into(),
        ));
    }
    let half = lit::<T>(0.5);
    let mut diff = Vec::with_capacity(n);
    let mut sq = Vec::with_capacity(n);
    let mut object = Vec::with_capacity(n);
    for (&img, &(a, b)) in image.iter().zip(&limits) {
        let (a, b) = (a / max, b / max);
        diff.push(half * ((img - a) * (img - a) + (img - b) * (img - b)));
        sq.push(half * (a * a + b * b));
        object.push(half * (a + b));
    }
    let q = trapezoid(grid, &diff) / trapezoid(grid, &sq);
    Ok(QualityReport {
        q,
        grid: grid.clone(),
        normalized_image: image,
        normalized_ideal: object,
    })
}

fn normalize<T: Real>(values: Vec<T>) -> Vec<T> {
    let max = values.iter().copied().fold(T::zero(), T::max);
    if max > T::zero() {
        values.into_iter().map(|v| v / max).collect()
    } else {
        values
    }
}

/// Default prominence for [`peak_positions`], as a fraction of the maximum.
pub const DEFAULT_PROMINENCE: f64 = 0.1;

/// Points within this fraction of a local maximum count as part of its top.
const PLATEAU_FRACTION: f64 = 1e-3;

/// Peaks of the normalized `|Γ|²` with prominence above `prominence`.
pub fn peak_positions<T: Real>(scan: &CorrelationScan<T>, prominence: T) -> Vec<T> {
    find_peaks(&scan.u2_grid, &scan.gamma_sq(), prominence)
}

/// Local maxima of `y(x)` whose prominence, relative to `max y`, exceeds
/// `prominence`.
///
/// A maximum's top is the run of neighbouring samples within 0.1% of its
/// value. Flat tops report the run midpoint, sharp tops are refined by a
/// parabola through the three samples around the maximum.
pub fn find_peaks<T: Real>(x: &[T], y: &[T], prominence: T) -> Vec<T> {
    assert_eq!(x.len(), y.len(), "abscissa and ordinate lengths differ");
    let n = y.len();
    let max = y.iter().copied().fold(T::zero(), T::max);
    if n == 0 || !(max > T::zero()) {
        return Vec::new();
    }
    let y: Vec<T> = y.iter().map(|&v| v / max).collect();
    let keep = T::one() - lit::<T>(PLATEAU_FRACTION);
    let mut peaks = Vec::new();
    let mut i = 0;
    while i < n {
        let left_ok = i == 0 || y[i] >= y[i - 1];
        let right_ok = i + 1 == n || y[i] >= y[i + 1];
        if !(left_ok && right_ok) || y[i] <= T::zero() {
            i += 1;
            continue;
        }
        let mut lo = i;
        while lo > 0 && y[lo - 1] >= y[i] * keep {
            lo -= 1;
        }
        let mut hi = i;
        while hi + 1 < n && y[hi + 1] >= y[i] * keep {
            hi += 1;
        }
        let top = y[lo..=hi].iter().copied().fold(T::zero(), T::max);
        // a higher sample inside the run means this is a shoulder of another top
        if y[i] < top * keep {
            i = hi + 1;
            continue;
        }
        // an edge top is measured against the side that exists
        let reference = match (lo > 0, hi + 1 < n) {
            (true, true) => base(&y[..lo], top, true).max(base(&y[hi + 1..], top, false)),
            (true, false) => base(&y[..lo], top, true),
            (false, true) => base(&y[hi + 1..], top, false),
            (false, false) => T::zero(),
        };
        if top - reference > prominence {
            peaks.push(if hi > lo {
                (x[lo] + x[hi]) / lit(2.0)
            } else {
                refine(x, &y, i)
            });
        }
        i = hi + 1;
    }
    peaks
}

/// Lowest sample between a top and the nearest higher sample on one side.
fn base<T: Real>(side: &[T], top: T, leftwards: bool) -> T {
    let mut lowest = top;
    let mut step = |v: T| {
        if v > top {
            return false;
        }
        lowest = lowest.min(v);
        true
    };
    if leftwards {
        for &v in side.iter().rev() {
            if !step(v) {
                break;
            }
        }
    } else {
        for &v in side {
            if !step(v) {
                break;
            }
        }
    }
    lowest
}

fn refine<T: Real>(x: &[T], y: &[T], i: usize) -> T {
    if i == 0 || i + 1 == y.len() {
        return x[i];
    }
    let (a, b, c) = (y[i - 1], y[i], y[i + 1]);
    let curvature = a - lit::<T>(2.0) * b + c;
    if curvature >= T::zero() {
        return x[i];
    }
    let offset = (a - c) / (lit::<T>(2.0) * curvature);
    let h = if offset >= T::zero() {
        x[i + 1] - x[i]
    } else {
        x[i] - x[i - 1]
    };
    x[i] + offset * h
}

/// Mean fringe spacing and its spread.
#[derive(Clone, Debug, PartialEq)]
pub struct FringePeriod<T> {
    pub period: T,
    /// Standard deviation of the spacings over their mean.
    pub cv: T,
    pub peaks: Vec<T>,
}

/// Fewest peaks [`fringe_period`] accepts.
pub const MIN_FRINGES: usize = 5;

/// Fringe period of the normalized `|Γ|²` pattern.
pub fn fringe_period<T: Real>(scan: &CorrelationScan<T>) -> Result<FringePeriod<T>> {
    period_from_peaks(peak_positions(scan, lit(DEFAULT_PROMINENCE)))
}

/// Mean spacing of consecutive peak positions.
pub fn period_from_peaks<T: Real>(peaks: Vec<T>) -> Result<FringePeriod<T>> {
    if peaks.len() < MIN_FRINGES {
        return Err(Error::InsufficientFringes {
            found: peaks.len(),
            required: MIN_FRINGES,
        });
    }
    let gaps: Vec<T> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    let count = lit::<T>(gaps.len() as f64);
    let mean = gaps.iter().fold(T::zero(), |a, &g| a + g) / count;
    let var = gaps
        .iter()
        .fold(T::zero(), |a, &g| a + (g - mean) * (g - mean))
        / count;
    Ok(FringePeriod {
        period: mean,
        cv: var.sqrt() / mean.abs(),
        peaks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn scan_from(grid: Vec<f64>, gamma_sq: &[f64], i1: f64, i2: Vec<f64>) -> CorrelationScan<f64> {
        let gamma = gamma_sq
            .iter()
            .map(|v| Complex::new(v.sqrt(), 0.0))
            .collect();
        CorrelationScan::from_parts(0.0, grid, gamma, i1, i2)
    }

    fn grid(n: usize, half: f64) -> Vec<f64> {
        crate::correlator::symmetric_grid(half, n)
    }

    #[test]
    fn zero_correlation_has_zero_visibility() {
        let g = grid(11, 1.0);
        let s = scan_from(g, &[0.0; 11], 2.0, vec![1.0; 11]);
        assert_eq!(
            visibility(&s, VisibilityConvention::IntensityProduct).unwrap(),
            0.0
        );
        let z = scan_from(grid(11, 1.0), &[0.0; 11], 0.0, vec![0.0; 11]);
        assert!(matches!(
            visibility(&z, VisibilityConvention::IntensityProduct),
            Err(Error::UndefinedVisibility(_))
        ));
    }

    #[test]
    fn visibility_conventions() {
        let g = grid(3, 1.0);
        let s = scan_from(g, &[0.5, 1.0, 0.5], 1.0, vec![2.0, 2.0, 2.0]);
        assert!(
            (visibility(&s, VisibilityConvention::IntensityProduct).unwrap() - 0.5).abs() < 1e-15
        );
        let alt = visibility(&s, VisibilityConvention::IntensityProductPlusCorrelation).unwrap();
        assert!((alt - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn visibility_scale_invariant() {
        let g = grid(5, 1.0);
        let s = scan_from(
            g.clone(),
            &[0.1, 0.4, 0.9, 0.4, 0.1],
            1.5,
            vec![1.0, 1.2, 1.3, 1.2, 1.0],
        );
        // Γ scales by c, intensities by c each
        let c = 7.3f64;
        let t = scan_from(
            g,
            &[
                0.1 * c * c,
                0.4 * c * c,
                0.9 * c * c,
                0.4 * c * c,
                0.1 * c * c,
            ],
            1.5 * c,
            vec![c, 1.2 * c, 1.3 * c, 1.2 * c, c],
        );
        for conv in [
            VisibilityConvention::IntensityProduct,
            VisibilityConvention::IntensityProductPlusCorrelation,
        ] {
            let a = visibility(&s, conv).unwrap();
            let b = visibility(&t, conv).unwrap();
            assert!((a - b).abs() < 1e-14 * a);
        }
    }

    #[test]
    fn perfect_image_has_zero_quality_factor() {
        let ap = PiecewiseAperture::double_slit(0.01, 0.03).unwrap();
        // 200 points keep every node off the slit edges
        let g = grid(200, 0.05);
        let ideal: Vec<f64> = g.iter().map(|&u| ap.transmission(-u).norm_sqr()).collect();
        let s = scan_from(g, &ideal, 1.0, vec![1.0; 200]);
        let r = quality(&s, &ap, -1.0).unwrap();
        assert_eq!(r.q, 0.0);
        assert_eq!(r.normalized_image, r.normalized_ideal);
    }

    #[test]
    fn edge_nodes_take_the_midpoint() {
        let ap = PiecewiseAperture::double_slit(0.01, 0.03).unwrap();
        let g = grid(201, 0.05);
        let s = scan_from(g.clone(), &[1.0; 201], 1.0, vec![1.0; 201]);
        let r = quality(&s, &ap, -1.0).unwrap();
        for (u, v) in g.iter().zip(&r.normalized_ideal) {
            let on_edge = [0.01, 0.02].iter().any(|e| (u.abs() - e).abs() < 1e-12);
            let inside = (0.01..0.02).contains(&u.abs());
            let expect = if on_edge {
                0.5
            } else if inside {
                1.0
            } else {
                0.0
            };
            assert_eq!(*v, expect, "u2 = {u}");
        }
        // a flat image is wrong on the 0.08 of the window the object leaves
        // dark, against 0.02 of object
        assert!((r.q - 4.0).abs() < 1e-12, "{}", r.q);
    }

    #[test]
    fn quality_scale_invariant_and_positive() {
        let ap = PiecewiseAperture::double_slit(0.01, 0.03).unwrap();
        let g = grid(201, 0.05);
        let img: Vec<f64> = g.iter().map(|&u| (-(u * u) / 1e-4).exp()).collect();
        let scaled: Vec<f64> = img.iter().map(|v| v * 42.0).collect();
        let a = quality(&scan_from(g.clone(), &img, 1.0, vec![1.0; 201]), &ap, -1.0).unwrap();
        let b = quality(&scan_from(g, &scaled, 1.0, vec![1.0; 201]), &ap, -1.0).unwrap();
        assert!(a.q > 0.0);
        assert!((a.q - b.q).abs() < 1e-14 * a.q);
    }

    #[test]
    fn inversion_matters_for_asymmetric_objects() {
        let ap = PiecewiseAperture::slit_at(0.02, 0.01).unwrap();
        let g = grid(200, 0.05);
        let inverted: Vec<f64> = g.iter().map(|&u| ap.transmission(-u).norm_sqr()).collect();
        let s = scan_from(g, &inverted, 1.0, vec![1.0; 200]);
        assert_eq!(quality(&s, &ap, -1.0).unwrap().q, 0.0);
        assert!(quality(&s, &ap, 1.0).unwrap().q > 1.0);
    }

    #[test]
    fn quality_needs_object_on_grid() {
        let ap = PiecewiseAperture::single_slit(0.01).unwrap();
        let g = grid(11, 0.05);
        let s = scan_from(g, &[1.0; 11], 1.0, vec![1.0; 11]);
        let far = PiecewiseAperture::slit_at(1.0, 0.01).unwrap();
        assert!(matches!(
            quality(&s, &far, 1.0),
            Err(Error::UndefinedQuality(_))
        ));
        assert!(quality(&s, &ap, 0.0).is_err());
    }

    #[test]
    fn peaks_of_simple_shapes() {
        let x = grid(101, 1.0);
        let bump: Vec<f64> = x
            .iter()
            .map(|&u| (-(u - 0.13).powi(2) / 0.02).exp())
            .collect();
        let p = find_peaks(&x, &bump, 0.1);
        assert_eq!(p.len(), 1);
        assert!((p[0] - 0.13).abs() < 0.02 * 0.1);
        assert!(find_peaks(&x, &vec![0.0; 101], 0.1).is_empty());
        // monotone ramp peaks at its edge
        let ramp: Vec<f64> = x.iter().map(|&u| u + 2.0).collect();
        assert_eq!(find_peaks(&x, &ramp, 0.1), vec![1.0]);
    }

    #[test]
    fn flat_top_reports_midpoint() {
        let x = grid(21, 1.0);
        let y: Vec<f64> = (0..21)
            .map(|i| if (12..=16).contains(&i) { 1.0 } else { 0.0 })
            .collect();
        let p = find_peaks(&x, &y, 0.1);
        assert_eq!(p.len(), 1);
        assert!((p[0] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn small_wiggles_are_not_peaks() {
        let x = grid(201, 1.0);
        let y: Vec<f64> = x
            .iter()
            .map(|&u| (-(u * u) * 4.0).exp() + 0.01 * (40.0 * u).cos())
            .collect();
        assert_eq!(find_peaks(&x, &y, 0.1).len(), 1);
    }

    #[test]
    fn synthetic_fringes() {
        let period = 0.37;
        let x = grid(801, 2.0);
        let y: Vec<f64> = x
            .iter()
            .map(|&u| (std::f64::consts::PI * u / period).cos().powi(2))
            .collect();
        let f = period_from_peaks(find_peaks(&x, &y, 0.1)).unwrap();
        assert!((f.period - period).abs() < 0.01 * period, "{}", f.period);
        assert!(f.cv < 0.01);
        let few = period_from_peaks(vec![0.0, 1.0, 2.0]);
        assert!(matches!(
            few,
            Err(Error::InsufficientFringes {
                found: 3,
                required: 5
            })
        ));
    }
}
