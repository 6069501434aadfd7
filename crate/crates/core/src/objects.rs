//! Object transmission functions `H(v)` built from constant-amplitude
//! intervals.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// One half-open interval `[lo, hi)` of constant complex transmission.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApertureInterval<T> {
    pub lo: T,
    pub hi: T,
    pub amplitude: Complex<T>,
}

impl<T: Real> ApertureInterval<T> {
    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo <= v && v < self.hi
    }
}

/// Transmission that is piecewise constant on sorted, disjoint intervals and
/// zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseAperture<T> {
    intervals: Vec<ApertureInterval<T>>,
}

impl<T: Real> PiecewiseAperture<T> {
    /// Fully opaque object.
    pub fn empty() -> Self {
        PiecewiseAperture {
            intervals: Vec::new(),
        }
    }

    /// Validates and stores the intervals. Input may be unsorted; touching
    /// intervals (`hi == next.lo`) are allowed, overlapping ones are not.
    pub fn from_intervals(mut intervals: Vec<ApertureInterval<T>>) -> Result<Self> {
        for iv in &intervals {
            if !(iv.lo < iv.hi) || !iv.lo.is_finite() || !iv.hi.is_finite() {
                return Err(Error::InvalidAperture(format!(
                    "interval [{}, {}) must be finite with lo < hi",
                    iv.lo, iv.hi
                )));
            }
            if !iv.amplitude.re.is_finite() || !iv.amplitude.im.is_finite() {
                return Err(Error::InvalidAperture(format!(
                    "interval [{}, {}) has non-finite amplitude",
                    iv.lo, iv.hi
                )));
            }
        }
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite bounds"));
        if let Some(w) = intervals.windows(2).find(|w| w[1].lo < w[0].hi) {
            return Err(Error::InvalidAperture(format!(
                "intervals [{}, {}) and [{}, {}) overlap",
                w[0].lo, w[0].hi, w[1].lo, w[1].hi
            )));
        }
        Ok(PiecewiseAperture { intervals })
    }

    /// Unit-amplitude slit of width `a` centred on the axis.
    pub fn single_slit(a: T) -> Result<Self> {
        Self::slit_at(T::zero(), a)
    }

    /// Unit-amplitude slit of width `a` centred at `center`.
    pub fn slit_at(center: T, a: T) -> Result<Self> {
        if !(a > T::zero()) {
            return Err(Error::InvalidAperture(format!(
                "slit width must be positive, got {a}"
            )));
        }
        let half = a / lit(2.0);
        Self::from_intervals(vec![ApertureInterval {
            lo: center - half,
            hi: center + half,
            amplitude: Complex::new(T::one(), T::zero()),
        }])
    }

    /// Two unit-amplitude slits of width `a` centred at `±d/2`.
    pub fn double_slit(a: T, d: T) -> Result<Self> {
        if !(a > T::zero()) || !(d > T::zero()) {
            return Err(Error::InvalidAperture(format!(
                "slit width {a} and separation {d} must be positive"
            )));
        }
        if a >= d {
            return Err(Error::InvalidAperture(format!(
                "slit width {a} must be smaller than the separation {d}"
            )));
        }
        let two = lit::<T>(2.0);
        let one = Complex::new(T::one(), T::zero());
        Self::from_intervals(vec![
            ApertureInterval {
                lo: -d / two - a / two,
                hi: -d / two + a / two,
                amplitude: one,
            },
            ApertureInterval {
                lo: d / two - a / two,
                hi: d / two + a / two,
                amplitude: one,
            },
        ])
    }

    pub fn transmission(&self, v: T) -> Complex<T> {
        // intervals are sorted, so the candidate is the last one starting at or before v
        let idx = self.intervals.partition_point(|iv| iv.lo <= v);
        match idx.checked_sub(1).map(|i| &self.intervals[i]) {
            Some(iv) if iv.contains(v) => iv.amplitude,
            _ => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Transmission just below and just above `v`. The two differ only on
    /// an interval edge.
    pub fn limits(&self, v: T) -> (Complex<T>, Complex<T>) {
        let below = self
            .intervals
            .iter()
            .find(|iv| iv.lo < v && v <= iv.hi)
            .map_or(Complex::new(T::zero(), T::zero()), |iv| iv.amplitude);
        (below, self.transmission(v))
    }

    /// An interval endpoint within `tol` of `v`.
    pub fn edge_near(&self, v: T, tol: T) -> Option<T> {
        self.intervals
            .iter()
            .flat_map(|iv| [iv.lo, iv.hi])
            .find(|e| (*e - v).abs() <= tol)
    }

    pub fn support_intervals(&self) -> &[ApertureInterval<T>] {
        &self.intervals
    }

    /// Sum of interval widths.
    pub fn total_measure(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |acc, iv| acc + iv.width())
    }

    /// `∫ |H(v)|² dv`.
    pub fn power(&self) -> T {
        self.intervals.iter().fold(T::zero(), |acc, iv| {
            acc + iv.width() * iv.amplitude.norm_sqr()
        })
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Same intervals with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: Complex<T>) -> Self {
        PiecewiseAperture {
            intervals: self
                .intervals
                .iter()
                .map(|iv| ApertureInterval {
                    amplitude: iv.amplitude * factor,
                    ..*iv
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig2() -> PiecewiseAperture<f64> {
        PiecewiseAperture::double_slit(0.01, 0.03).unwrap()
    }

    #[test]
    fn one_sided_limits_at_edges() {
        let ap = fig2();
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        let right = ap.support_intervals()[1];
        assert_eq!(ap.limits(right.lo), (zero, one));
        assert_eq!(ap.limits(right.hi), (one, zero));
        assert_eq!(ap.limits(0.015), (one, one));
        assert_eq!(ap.edge_near(0.0100000001, 1e-9), Some(right.lo));
        assert_eq!(ap.edge_near(0.0105, 1e-9), None);
    }

    #[test]
    fn double_slit_intervals() {
        let ap = fig2();
        let iv = ap.support_intervals();
        assert_eq!(iv.len(), 2);
        assert!((iv[0].lo + 0.02).abs() < 1e-15 && (iv[0].hi + 0.01).abs() < 1e-15);
        assert!((iv[1].lo - 0.01).abs() < 1e-15 && (iv[1].hi - 0.02).abs() < 1e-15);
        assert!((ap.total_measure() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn double_slit_transmission() {
        let ap = fig2();
        assert_eq!(ap.transmission(0.015).re, 1.0);
        assert_eq!(ap.transmission(-0.015).re, 1.0);
        assert_eq!(ap.transmission(0.0).re, 0.0);
        assert_eq!(ap.transmission(0.021).re, 0.0);
        assert_eq!(ap.transmission(-0.05).re, 0.0);
    }

    #[test]
    fn overlapping_slits_rejected() {
        assert!(matches!(
            PiecewiseAperture::double_slit(0.03, 0.03),
            Err(Error::InvalidAperture(_))
        ));
        assert!(PiecewiseAperture::double_slit(0.04, 0.03).is_err());
        assert!(PiecewiseAperture::<f64>::single_slit(0.0).is_err());
    }

    #[test]
    fn half_open_boundaries() {
        let ap = PiecewiseAperture::single_slit(2.0).unwrap();
        assert_eq!(ap.transmission(-1.0).re, 1.0);
        assert_eq!(ap.transmission(1.0).re, 0.0);
    }

    #[test]
    fn single_and_empty() {
        let ap = PiecewiseAperture::single_slit(0.2f64).unwrap();
        assert_eq!(ap.support_intervals().len(), 1);
        assert!((ap.total_measure() - 0.2).abs() < 1e-15);
        let e = PiecewiseAperture::<f64>::empty();
        assert!(e.support_intervals().is_empty());
        assert_eq!(e.total_measure(), 0.0);
        assert_eq!(e.transmission(0.0).norm(), 0.0);
    }

    #[test]
    fn window_covering_slit_is_identity_inside() {
        let ap = PiecewiseAperture::single_slit(1.0).unwrap();
        for i in 0..100 {
            let v = -0.5 + i as f64 * 0.01;
            assert_eq!(ap.transmission(v), Complex::new(1.0, 0.0));
        }
    }

    #[test]
    fn unsorted_input_sorted_and_touching_allowed() {
        let one = Complex::new(1.0, 0.0);
        let ap = PiecewiseAperture::from_intervals(vec![
            ApertureInterval {
                lo: 1.0,
                hi: 2.0,
                amplitude: one,
            },
            ApertureInterval {
                lo: 0.0,
                hi: 1.0,
                amplitude: Complex::new(0.0, 1.0),
            },
        ])
        .unwrap();
        assert_eq!(ap.support_intervals()[0].lo, 0.0);
        assert_eq!(ap.transmission(1.0), one);
        assert_eq!(ap.transmission(0.5), Complex::new(0.0, 1.0));
        assert!(PiecewiseAperture::from_intervals(vec![
            ApertureInterval {
                lo: 0.0,
                hi: 1.5,
                amplitude: one
            },
            ApertureInterval {
                lo: 1.0,
                hi: 2.0,
                amplitude: one
            },
        ])
        .is_err());
    }

    #[test]
    fn power_matches_measure_for_unit_amplitudes() {
        let ap = fig2();
        assert!((ap.power() - ap.total_measure()).abs() < 1e-15);
        let s = ap.scaled(Complex::new(0.0, 2.0));
        assert!((s.power() - 4.0 * ap.total_measure()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn double_slit_is_even(v in -0.1f64..0.1, a in 0.001f64..0.05, extra in 0.001f64..0.05) {
            let ap = PiecewiseAperture::double_slit(a, a + extra).unwrap();
            // half-open intervals break parity only on the measure-zero edges
            let edges: Vec<f64> = ap.support_intervals().iter().flat_map(|iv| [iv.lo, iv.hi]).collect();
            prop_assume!(edges.iter().all(|e| (e.abs() - v.abs()).abs() > 1e-12));
            prop_assert_eq!(ap.transmission(v), ap.transmission(-v));
        }

        #[test]
        fn zero_outside_support(v in -1.0f64..1.0) {
            let ap = fig2();
            let inside = ap.support_intervals().iter().any(|iv| iv.contains(v));
            if !inside {
                prop_assert_eq!(ap.transmission(v).norm(), 0.0);
            } else {
                prop_assert_eq!(ap.transmission(v).norm(), 1.0);
            }
        }
    }
}
