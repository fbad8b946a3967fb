//! Time-frequency shifts on a sampled line, short-time Fourier coefficients
//! and Gram matrices of finite coherent systems.
//!
//! `pi(x, xi) g(t) = exp(2 pi i xi t) g(t - x)`, and
//! `pi(z) pi(z') = s(z, z') pi(z + z')` with `s(z, z') = exp(-2 pi i x xi')`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::phase::turns_to_unit;

/// A point `(x, xi)` of the time-frequency plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TfPoint {
    pub x: f64,
    pub xi: f64,
}

impl TfPoint {
    pub fn new(x: f64, xi: f64) -> Self {
        Self { x, xi }
    }

}

impl std::ops::Add for TfPoint {
    type Output = TfPoint;

    fn add(self, other: TfPoint) -> TfPoint {
        TfPoint::new(self.x + other.x, self.xi + other.xi)
    }
}

impl std::ops::Sub for TfPoint {
    type Output = TfPoint;

    fn sub(self, other: TfPoint) -> TfPoint {
        TfPoint::new(self.x - other.x, self.xi - other.xi)
    }
}

/// The time-frequency cocycle `exp(-2 pi i x xi')`.
pub fn tf_cocycle(z: TfPoint, w: TfPoint) -> Complex64 {
    turns_to_unit(-z.x * w.xi)
}

/// Uniform grid `t_j = -T + j h` on `[-T, T]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    step: f64,
    half_width: f64,
    len: usize,
}

impl Default for Grid {
    /// `T = 8`, `h = 1/512`.
    fn default() -> Self {
        Grid::new(1.0 / 512.0, 8.0).expect("valid default grid")
    }
}

impl Grid {
    pub fn new(step: f64, half_width: f64) -> Result<Self> {
        if !(step > 0.0 && half_width > 0.0) {
            return Err(LabError::InvalidGrid("step and half-width must be positive".into()));
        }
        let cells = 2.0 * half_width / step;
        if (cells - cells.round()).abs() > 1e-9 * cells.max(1.0) {
            return Err(LabError::InvalidGrid(format!("2T/h = {cells} is not an integer")));
        }
        Ok(Self { step, half_width, len: cells.round() as usize + 1 })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn time(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.step
    }

    /// Trapezoidal weight of sample `j`.
    pub fn weight(&self, j: usize) -> f64 {
        if j == 0 || j + 1 == self.len {
            0.5 * self.step
        } else {
            self.step
        }
    }

    /// Number of grid steps in `x`, if `x` lies on the grid.
    pub fn steps_for(&self, x: f64) -> Result<i64> {
        if x.abs() > self.half_width {
            return Err(LabError::ShiftOutOfRange { x, half_width: self.half_width });
        }
        let k = x / self.step;
        if (k - k.round()).abs() > 1e-9 {
            return Err(LabError::OffGridShift { x, step: self.step });
        }
        Ok(k.round() as i64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(LabError::InvalidGrid(format!("expected {} samples, got {}", grid.len(), samples.len())));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid, f: F) -> Self {
        let samples = (0..grid.len()).map(|j| f(grid.time(j))).collect();
        Self { grid, samples }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// `<self, other> = int self(t) conj(other(t)) dt` by the trapezoidal rule.
    pub fn inner(&self, other: &SampledSignal) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch);
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .enumerate()
            .map(|(j, (a, b))| a * b.conj() * self.grid.weight(j))
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.samples
            .iter()
            .enumerate()
            .map(|(j, a)| a.norm_sqr() * self.grid.weight(j))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_distance(&self, other: &SampledSignal) -> f64 {
        self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> SampledSignal {
        SampledSignal { grid: self.grid, samples: self.samples.iter().map(|a| a * c).collect() }
    }
}

/// Windows with a closed-form ambiguity function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnalyticWindow {
    /// `2^(1/4) exp(-pi t^2)`.
    UnitGaussian,
}

impl AnalyticWindow {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            AnalyticWindow::UnitGaussian => 2f64.powf(0.25) * (-PI * t * t).exp(),
        }
    }

    pub fn sample(&self, grid: Grid) -> SampledSignal {
        SampledSignal::from_fn(grid, |t| Complex64::new(self.eval(t), 0.0))
    }
}

/// `pi(z) g` on the grid; samples shifted in from outside are zero.
pub fn tf_translate(g: &SampledSignal, z: TfPoint) -> Result<SampledSignal> {
    let grid = g.grid;
    let k = grid.steps_for(z.x)?;
    let n = grid.len() as i64;
    let samples = (0..n)
        .map(|j| {
            let src = j - k;
            if src < 0 || src >= n {
                return Complex64::new(0.0, 0.0);
            }
            turns_to_unit(z.xi * grid.time(j as usize)) * g.samples[src as usize]
        })
        .collect();
    Ok(SampledSignal { grid, samples })
}

/// `<g, pi(z) g> = exp(-pi (x^2 + xi^2) / 2) exp(-pi i x xi)` for the unit Gaussian.
pub fn ambiguity_gaussian(z: TfPoint) -> Complex64 {
    let mag = (-PI * (z.x * z.x + z.xi * z.xi) / 2.0).exp();
    Complex64::from_polar(mag, -PI * z.x * z.xi)
}

/// `V_h f(z) = <f, pi(z) h>` at each point.
pub fn stft(f: &SampledSignal, h: &SampledSignal, points: &[TfPoint]) -> Result<Vec<Complex64>> {
    if f.grid != h.grid {
        return Err(LabError::GridMismatch);
    }
    points.iter().map(|&z| f.inner(&tf_translate(h, z)?)).collect()
}

/// Largest difference between the closed-form Gaussian ambiguity function and
/// trapezoidal quadrature on the default grid, over a fixed set of probes.
pub fn gaussian_closed_form_check() -> f64 {
    static CHECK: OnceLock<f64> = OnceLock::new();
    *CHECK.get_or_init(|| {
        let grid = Grid::default();
        let g = AnalyticWindow::UnitGaussian.sample(grid);
        let probes = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.5, -1.25), (-1.5, 0.75), (2.0, 2.0)];
        probes
            .iter()
            .map(|&(x, xi)| {
                let z = TfPoint::new(x, xi);
                let q = g.inner(&tf_translate(&g, z).expect("probe on grid")).expect("same grid");
                (q - ambiguity_gaussian(z)).norm()
            })
            .fold(0.0, f64::max)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GramMethod {
    ClosedForm,
    Quadrature,
}

/// Window for [`gram_matrix`].
#[derive(Clone, Debug)]
pub enum GramWindow<'a> {
    Analytic(AnalyticWindow),
    Sampled(&'a SampledSignal),
}

#[derive(Clone, Debug)]
pub struct GramResult {
    pub points: Vec<TfPoint>,
    /// `G[z][w] = <pi(w) g, pi(z) g>`.
    pub matrix: DMatrix<Complex64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    /// `lambda_max / lambda_min`; infinite when `lambda_min <= 0`.
    pub condition_number: f64,
    pub method: GramMethod,
    /// `max |G - G^H|`.
    pub hermitian_defect: f64,
}

pub fn gram_matrix(window: GramWindow<'_>, points: &[TfPoint]) -> Result<GramResult> {
    if points.is_empty() {
        return Err(LabError::EmptyPointSet);
    }
    for (i, p) in points.iter().enumerate() {
        if points[..i].iter().any(|q| q == p) {
            return Err(LabError::DuplicatePoint { x: p.x, xi: p.xi });
        }
    }
    let n = points.len();
    let (matrix, method) = match window {
        GramWindow::Analytic(AnalyticWindow::UnitGaussian) => {
            let dev = gaussian_closed_form_check();
            if dev > 1e-8 {
                return Err(LabError::Numerical(format!(
                    "closed-form Gaussian ambiguity disagrees with quadrature by {dev:e}"
                )));
            }
            let m = DMatrix::from_fn(n, n, |i, j| {
                let (z, w) = (points[i], points[j]);
                // <pi(w) g, pi(z) g> = s(w, z - w) A(z - w)
                tf_cocycle(w, z - w) * ambiguity_gaussian(z - w)
            });
            (m, GramMethod::ClosedForm)
        }
        GramWindow::Sampled(g) => {
            let shifted = points.iter().map(|&z| tf_translate(g, z)).collect::<Result<Vec<_>>>()?;
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = shifted[j].inner(&shifted[i])?;
                }
            }
            (m, GramMethod::Quadrature)
        }
    };
    let hermitian_defect = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eigenvalues = hermitian_eigenvalues(&matrix)?;
    let min_eigenvalue = eigenvalues[0];
    let max_eigenvalue = *eigenvalues.last().expect("nonempty");
    let condition_number = if min_eigenvalue > 0.0 { max_eigenvalue / min_eigenvalue } else { f64::INFINITY };
    Ok(GramResult {
        points: points.to_vec(),
        matrix,
        eigenvalues,
        min_eigenvalue,
        condition_number,
        method,
        hermitian_defect,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndependenceWitness {
    CertifiedIndependent,
    Inconclusive,
}

/// Positive definiteness above `tol` certifies independence; anything else
/// is inconclusive, never "dependent".
pub fn independence_witness(result: &GramResult, tol: f64) -> IndependenceWitness {
    if result.min_eigenvalue > tol {
        IndependenceWitness::CertifiedIndependent
    } else {
        IndependenceWitness::Inconclusive
    }
}

/// `{B m : m in {-n..n}^2}` for a 2x2 basis `B` (rows: x, xi), ordered
/// lexicographically in `m`.
pub fn lattice_points(basis: [[f64; 2]; 2], range: i64) -> Vec<TfPoint> {
    let mut out = Vec::new();
    for m0 in -range..=range {
        for m1 in -range..=range {
            let (a, b) = (m0 as f64, m1 as f64);
            out.push(TfPoint::new(basis[0][0] * a + basis[0][1] * b, basis[1][0] * a + basis[1][1] * b));
        }
    }
    out
}
