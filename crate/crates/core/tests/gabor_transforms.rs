use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twisted_ring_lab::gabor::tf_cocycle;
use twisted_ring_lab::{stft, tf_translate, AnalyticWindow, Complex64, Grid, SampledSignal, TfPoint};

fn grid() -> Grid {
    Grid::new(1.0 / 64.0, 8.0).unwrap()
}

#[test]
fn stft_is_an_isometry() {
    // Integral of |V_g f|^2 over the plane equals ||f||^2 ||g||^2.
    let grid = grid();
    let g = AnalyticWindow::UnitGaussian.sample(grid);
    let f = SampledSignal::from_fn(grid, |t| {
        Complex64::from_polar((-std::f64::consts::PI * (t - 0.5) * (t - 0.5) / 2.0).exp(), 0.7 * t)
    });
    let step = 0.25;
    let points: Vec<TfPoint> = (-24..=24)
        .flat_map(|i| (-24..=24).map(move |j| TfPoint::new(i as f64 * step, j as f64 * step)))
        .collect();
    let v = stft(&f, &g, &points).unwrap();
    let energy: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>() * step * step;
    let expected = f.norm().powi(2) * g.norm().powi(2);
    assert!((energy - expected).abs() < 1e-8, "{energy} vs {expected}");
}

#[test]
fn covariance_on_random_instances() {
    let grid = grid();
    let g = AnalyticWindow::UnitGaussian.sample(grid);
    let f = SampledSignal::from_fn(grid, |t| Complex64::new((-3.0 * t * t).exp(), t * (-t * t).exp()));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let z = TfPoint::new(rng.random_range(-128..=128) as f64 / 64.0, rng.random_range(-2.0..2.0));
        let w = TfPoint::new(rng.random_range(-128..=128) as f64 / 64.0, rng.random_range(-2.0..2.0));
        let lhs = stft(&tf_translate(&f, z).unwrap(), &g, &[w]).unwrap()[0];
        let rhs = tf_cocycle(z, w - z) * stft(&f, &g, &[w - z]).unwrap()[0];
        assert!((lhs - rhs).norm() < 1e-10);
    }
}

#[test]
fn translates_compose_with_the_cocycle() {
    // pi(z) pi(w) = s(z, w) pi(z + w) on grid points.
    let grid = grid();
    let g = AnalyticWindow::UnitGaussian.sample(grid);
    let z = TfPoint::new(0.5, 1.25);
    let w = TfPoint::new(-0.75, 0.5);
    let lhs = tf_translate(&tf_translate(&g, w).unwrap(), z).unwrap();
    let rhs = tf_translate(&g, z + w).unwrap().scale(tf_cocycle(z, w));
    assert!(lhs.max_distance(&rhs) < 1e-12);
}

#[test]
fn off_grid_shift_is_rejected() {
    let g = AnalyticWindow::UnitGaussian.sample(grid());
    assert!(tf_translate(&g, TfPoint::new(0.001, 0.0)).is_err());
    assert!(tf_translate(&g, TfPoint::new(9.0, 0.0)).is_err());
}
