//! Quadrature rules: Gauss–Legendre for aperture and spectral integrals,
//! uniform trapezoid grids for the brute-force source integrals.

use std::f64::consts::PI;

use crate::scalar::{lit, Real};

/// Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule. Nodes are Newton-refined roots of `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(node, weight)` pairs mapped onto `[lo, hi]`.
    pub fn on_interval<T: Real>(&self, lo: T, hi: T) -> Vec<(T, T)> {
        let half = (hi - lo) / lit(2.0);
        let mid = (hi + lo) / lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (mid + half * lit::<T>(x), half * lit::<T>(w)))
            .collect()
    }

    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Uniform trapezoid grid on `[-half_width, half_width]`, exactly mirror
/// symmetric: `points[n - 1 - j] == -points[j]`.
#[derive(Clone, Debug)]
pub struct SymmetricGrid<T> {
    points: Vec<T>,
    weights: Vec<T>,
    spacing: T,
}

impl<T: Real> SymmetricGrid<T> {
    pub fn new(half_width: T, n: usize) -> Self {
        assert!(n >= 2, "trapezoid grid needs at least two points");
        let spacing = lit::<T>(2.0) * half_width / lit::<T>((n - 1) as f64);
        let mut points = vec![T::zero(); n];
        for j in 0..n / 2 {
            let x = -half_width + spacing * lit::<T>(j as f64);
            points[j] = x;
            points[n - 1 - j] = -x;
        }
        let mut weights = vec![spacing; n];
        weights[0] = spacing / lit(2.0);
        weights[n - 1] = spacing / lit(2.0);
        SymmetricGrid {
            points,
            weights,
            spacing,
        }
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Trapezoid rule over an arbitrary ascending abscissa.
pub fn trapezoid<T: Real>(x: &[T], y: &[T]) -> T {
    x.windows(2)
        .zip(y.windows(2))
        .fold(T::zero(), |acc, (xs, ys)| {
            acc + (xs[1] - xs[0]) * (ys[0] + ys[1]) / lit(2.0)
        })
}
