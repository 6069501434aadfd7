use ghostlight::correlator::{
    check_brute_resolvable, coincidence_rate, cross_correlation, gaussian_integral,
    ghost_image_scan, mean_intensity_path1, mean_intensity_path2, symmetric_grid,
};
use ghostlight::metrics::peak_positions;
use ghostlight::{
    ComplexQuadraticForm, EngineConfig, EngineKind, Error, GaussianSchellSource,
    GaussianSchellSource32, GhostSystem, GhostSystem32, PathGeometry, PathGeometry32,
    PiecewiseAperture, PiecewiseAperture32, WaveContext, WaveContext32,
};
use num_complex::Complex64;

const WAVELENGTH: f64 = 7.02e-4;

fn system(sigma_i: f64, sigma_g: f64, l2: f64) -> GhostSystem {
    GhostSystem::new(
        PathGeometry::new(10.0, 40.0, 30.0, 10.0, l2).unwrap(),
        WaveContext::new(WAVELENGTH).unwrap(),
        GaussianSchellSource::new(sigma_i, sigma_g).unwrap(),
        PiecewiseAperture::double_slit(0.01, 0.03).unwrap(),
    )
    .unwrap()
}

/// Small source with long coherence: narrow enough in angle for the brute
/// engine to sample on its default grids.
fn relaxed() -> GhostSystem {
    system(0.5, 0.01, 20.0)
}

fn rel_max(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

#[test]
fn gaussian_integral_matches_grid_sum() {
    let i = Complex64::i();
    let m = [
        [Complex64::new(1.0, 0.0), 0.3 * i],
        [0.3 * i, Complex64::new(1.5, 0.0)],
    ];
    let b = [Complex64::new(0.2, 0.0), -0.1 * i];
    let form = ComplexQuadraticForm::two_dim(m, b, Complex64::new(0.0, 0.0)).unwrap();
    let exact = gaussian_integral(&form).unwrap();

    let n = 801;
    let h = 16.0 / (n - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let y = -8.0 + h * j as f64;
        for k in 0..n {
            let x = -8.0 + h * k as f64;
            let e =
                -(m[0][0] * x * x + 2.0 * m[0][1] * x * y + m[1][1] * y * y) + b[0] * x + b[1] * y;
            sum += e.exp();
        }
    }
    sum *= h * h;
    assert!(
        (exact - sum).norm() <= 1e-6 * sum.norm(),
        "{exact} vs {sum}"
    );
}

#[test]
fn empty_aperture_gives_zero_scan() {
    let mut sys = system(5.0, 1e-5, 20.0);
    sys.object = PiecewiseAperture::empty();
    let grid = symmetric_grid(0.05, 21);
    let scan = ghost_image_scan(0.0, &grid, &sys, &EngineConfig::default()).unwrap();
    assert!(scan.gamma.iter().all(|g| g.norm() == 0.0));
    assert_eq!(scan.i1_ref, 0.0);
    assert!(scan.g2.iter().all(|&g| g == 0.0));
    assert!(scan.i2.iter().all(|&v| v > 0.0));
}

#[test]
fn imaging_layout_resolves_both_slits() {
    let sys = system(5.0, 1e-5, 20.0);
    let grid = symmetric_grid(0.05, 201);
    let scan = ghost_image_scan(0.0, &grid, &sys, &EngineConfig::default()).unwrap();
    let norm = scan.normalized_gamma_sq();
    assert!(norm[100] < 0.2, "centre {}", norm[100]);

    let peaks = peak_positions(&scan, 0.1);
    assert_eq!(peaks.len(), 2, "{peaks:?}");
    let step = grid[1] - grid[0];
    assert!((peaks[0] + 0.015).abs() <= step && (peaks[1] - 0.015).abs() <= step);

    let scale = scan.gamma.iter().map(|g| g.norm()).fold(0.0, f64::max);
    for k in 0..grid.len() {
        let mirror = grid.len() - 1 - k;
        assert!((scan.gamma[k].norm() - scan.gamma[mirror].norm()).abs() <= 1e-9 * scale);
    }
}

#[test]
fn engines_agree_on_relaxed_layout() {
    let sys = relaxed();
    let grid = symmetric_grid(0.05, 21);
    let reduced = ghost_image_scan(0.0, &grid, &sys, &EngineConfig::default()).unwrap();
    let brute_cfg = EngineConfig::default().with_engine(EngineKind::Brute);
    let brute = ghost_image_scan(0.0, &grid, &sys, &brute_cfg).unwrap();

    assert!(rel_max(&brute.gamma, &reduced.gamma) <= 1e-3);
    assert!((brute.i1_ref - reduced.i1_ref).abs() <= 1e-3 * brute.i1_ref);
    for (b, r) in brute.i2.iter().zip(&reduced.i2) {
        assert!((b - r).abs() <= 1e-6 * b, "{b} vs {r}");
    }
}

#[test]
fn path_two_intensity_is_even_and_falls_off() {
    let sys = system(5.0, 1e-5, 20.0);
    let cfg = EngineConfig::default();
    let grid = symmetric_grid(0.05, 51);
    let i2: Vec<f64> = grid
        .iter()
        .map(|&u| mean_intensity_path2(u, &sys, &cfg).unwrap())
        .collect();
    let n = grid.len();
    for k in 0..n / 2 {
        assert!((i2[k] - i2[n - 1 - k]).abs() <= 1e-12 * i2[k]);
    }
    // walking outward from the centre never increases
    for k in n / 2..n - 1 {
        assert!(
            i2[k + 1] <= i2[k] * (1.0 + 1e-12),
            "{} > {}",
            i2[k + 1],
            i2[k]
        );
    }
}

#[test]
fn path_one_intensity_ignores_global_phase() {
    let mut sys = system(5.0, 1e-3, 20.0);
    let cfg = EngineConfig::default();
    let plain = mean_intensity_path1(0.003, &sys, &cfg).unwrap();
    sys.object = sys.object.scaled(Complex64::from_polar(1.0, 1.234));
    let rotated = mean_intensity_path1(0.003, &sys, &cfg).unwrap();
    assert!((plain - rotated).abs() <= 1e-12 * plain);
}

#[test]
fn aperture_quadrature_has_converged() {
    let sys = system(5.0, 1e-5, 20.0);
    let coarse = EngineConfig::default();
    let fine = EngineConfig {
        n_aperture: 2 * coarse.n_aperture,
        ..coarse.clone()
    };
    let grid = symmetric_grid(0.05, 41);
    let a = ghost_image_scan(0.0, &grid, &sys, &coarse).unwrap();
    let b = ghost_image_scan(0.0, &grid, &sys, &fine).unwrap();
    assert!(rel_max(&b.gamma, &a.gamma) < 1e-6);
}

#[test]
fn coincidences_respect_thermal_bounds() {
    let cfg = EngineConfig::default();
    for (si, sg, l2) in [(5.0, 1e-5, 20.0), (1.0, 1e-3, 20.5), (0.1, 3e-3, 23.0)] {
        let sys = system(si, sg, l2);
        for u2 in [-0.04, -0.015, 0.0, 0.007, 0.03] {
            let g = cross_correlation(0.001, u2, &sys, &cfg).unwrap();
            let i1 = mean_intensity_path1(0.001, &sys, &cfg).unwrap();
            let i2 = mean_intensity_path2(u2, &sys, &cfg).unwrap();
            let g2 = coincidence_rate(0.001, u2, &sys, &cfg).unwrap();
            assert!(g2 >= i1 * i2);
            assert!(g.norm_sqr() <= i1 * i2 * (1.0 + 1e-9));
            assert!((g2 - (i1 * i2 + g.norm_sqr())).abs() <= 1e-12 * g2);
        }
    }
}

#[test]
fn focused_path_two_is_reported() {
    // 1/l1 + 1/l2 = 1/f puts detector two in the Fourier plane of the source
    let sys = system(5.0, 1e-5, 15.0);
    let err = cross_correlation(0.0, 0.01, &sys, &EngineConfig::default()).unwrap_err();
    assert!(matches!(err, Error::DegenerateKernel(_)), "{err}");
}

#[test]
fn brute_engine_refuses_what_it_cannot_sample() {
    let sys = system(5.0, 1e-5, 20.0);
    let cfg = EngineConfig::default().with_engine(EngineKind::Brute);
    let err = check_brute_resolvable(&sys, &cfg, 0.05).unwrap_err();
    assert!(matches!(err, Error::BruteDomain(_)), "{err}");
    let scan = ghost_image_scan(0.0, &symmetric_grid(0.05, 5), &sys, &cfg);
    assert!(matches!(scan, Err(Error::BruteDomain(_))));
    assert!(check_brute_resolvable(&relaxed(), &cfg, 0.05).is_ok());
}

#[test]
fn single_precision_tracks_double() {
    let sys32 = GhostSystem32::new(
        PathGeometry32::new(10.0, 40.0, 30.0, 10.0, 20.0).unwrap(),
        WaveContext32::new(WAVELENGTH as f32).unwrap(),
        GaussianSchellSource32::new(0.5, 0.01).unwrap(),
        PiecewiseAperture32::double_slit(0.01, 0.03).unwrap(),
    )
    .unwrap();
    let cfg = EngineConfig::default();
    let grid: Vec<f32> = symmetric_grid(0.05, 41);
    let s32 = ghost_image_scan(0.0f32, &grid, &sys32, &cfg).unwrap();
    let grid64: Vec<f64> = grid.iter().map(|&u| u as f64).collect();
    let s64 = ghost_image_scan(0.0, &grid64, &relaxed(), &cfg).unwrap();
    for (a, b) in s32
        .normalized_gamma_sq()
        .iter()
        .zip(s64.normalized_gamma_sq())
    {
        assert!((*a as f64 - b).abs() < 1e-3, "{a} vs {b}");
    }
}
