//! Zero-divisor constructions and window searches.
//!
//! [`torsion_zero_divisor`] builds the explicit factor pair attached to an
//! element of finite order. [`kernel_search`] looks for right cofactors `c`
//! with `a * c = 0` supported in the interior of a Følner box by computing the
//! kernel of the truncated left-multiplication operator.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::cocycle::Cocycle;
use crate::error::{LabError, Result};
use crate::exact::ExactElement;
use crate::folner::{interior, FolnerSequence};
use crate::group::{GroupKind, GroupPoint};
use crate::linalg::right_svd;
use crate::phase::Turn;
use crate::ring::{convolve, ensure_same, RingElement, ToleranceConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSpec {
    radius: usize,
}

impl WindowSpec {
    pub fn new(radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(LabError::InvalidParameter("window radius must be at least 1".into()));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

/// Matrix of `c -> a * c` from sequences on `int_K(F)` to sequences on `F`.
#[derive(Clone, Debug)]
pub struct TruncatedOperator {
    matrix: DMatrix<Complex64>,
    rows: Vec<GroupPoint>,
    columns: Vec<GroupPoint>,
    source: RingElement,
}

impl TruncatedOperator {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Row labels: the window `F`.
    pub fn rows(&self) -> &[GroupPoint] {
        &self.rows
    }

    /// Column labels: the interior `int_K(F)`.
    pub fn columns(&self) -> &[GroupPoint] {
        &self.columns
    }

    pub fn source(&self) -> &RingElement {
        &self.source
    }
}

pub fn build_truncated_operator(a: &RingElement, sigma: &Cocycle, window: &WindowSpec) -> Result<TruncatedOperator> {
    ensure_same(a.group(), sigma.group())?;
    if a.is_empty() {
        return Err(LabError::ZeroElement);
    }
    let group = a.group();
    let rows = FolnerSequence::new(group).set(window.radius)?;
    let support = a.support();
    let columns = interior(group, &support, &rows);
    if columns.is_empty() {
        return Err(LabError::EmptyInterior { radius: window.radius, support: support.len() });
    }
    let row_index: HashMap<&GroupPoint, usize> = rows.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut matrix = DMatrix::zeros(rows.len(), columns.len());
    // Column g holds a * delta_g = sum_k a(k) s(k, g) delta_{kg}.
    for (j, g) in columns.iter().enumerate() {
        for (k, coeff) in a.terms() {
            let i = row_index[&group.compose_unchecked(k, g)];
            matrix[(i, j)] += coeff * sigma.eval_unchecked(k, g);
        }
    }
    Ok(TruncatedOperator { matrix, rows, columns, source: a.clone() })
}

/// Kernel of a truncated operator.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub radius: usize,
    pub window_size: usize,
    pub interior_size: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub nullity: usize,
    pub rank_tol_factor: f64,
    /// `rank_tol_factor * sigma_max`.
    pub threshold: f64,
    /// Orthonormal kernel vectors as ring elements supported in the interior.
    pub kernel_basis: Vec<RingElement>,
    /// The same vectors indexed by interior position.
    pub kernel_vectors: Vec<Vec<Complex64>>,
}

impl KernelReport {
    /// An empty basis means no cofactor is supported in this window; it says
    /// nothing about larger supports.
    pub fn has_cofactor(&self) -> bool {
        self.nullity > 0
    }
}

pub fn kernel_search(a: &RingElement, sigma: &Cocycle, window: &WindowSpec, tol: &ToleranceConfig) -> Result<KernelReport> {
    tol.validate()?;
    let op = build_truncated_operator(a, sigma, window)?;
    let svd = right_svd(&op.matrix)?;
    let sigma_max = svd.singular_values.first().copied().unwrap_or(0.0);
    let threshold = tol.rank_tol_factor * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > threshold).count();
    let mut kernel_vectors = Vec::new();
    let mut kernel_basis = Vec::new();
    for v in &svd.right_vectors[rank..] {
        let v = normalize_phase(v.iter().copied().collect());
        kernel_basis.push(RingElement::from_terms(a.group(), op.columns.iter().cloned().zip(v.iter().copied()))?);
        kernel_vectors.push(v);
    }
    Ok(KernelReport {
        radius: window.radius,
        window_size: op.rows.len(),
        interior_size: op.columns.len(),
        singular_values: svd.singular_values,
        rank,
        nullity: kernel_basis.len(),
        rank_tol_factor: tol.rank_tol_factor,
        threshold,
        kernel_basis,
        kernel_vectors,
    })
}

/// Rotates a vector so that its first largest entry is real and positive.
fn normalize_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-9) {
            best = i;
        }
    }
    let pivot = v[best];
    if pivot.norm() > 0.0 {
        let rot = pivot.conj() / pivot.norm();
        for z in &mut v {
            *z *= rot;
        }
    }
    v
}

/// Per-radius record of a zero-divisor search.
#[derive(Clone, Debug)]
pub struct RadiusOutcome {
    pub radius: usize,
    /// `None` when the interior is empty at this radius.
    pub report: Option<KernelReport>,
}

#[derive(Clone, Debug)]
pub struct ZeroDivisorSearch {
    pub radii: Vec<RadiusOutcome>,
    /// First radius whose truncated kernel is nontrivial.
    pub found_at: Option<usize>,
    pub max_radius: usize,
}

impl ZeroDivisorSearch {
    pub fn status(&self) -> &'static str {
        if self.found_at.is_some() {
            "cofactor-found"
        } else {
            "no cofactor within window"
        }
    }

    pub fn cofactor(&self) -> Option<&RingElement> {
        let r = self.found_at?;
        self.radii.iter().find(|o| o.radius == r)?.report.as_ref()?.kernel_basis.first()
    }
}

/// Kernel search over radii `1..=max_radius`, stopping at the first
/// nontrivial kernel. Radii with an empty interior are recorded and skipped.
pub fn search_zero_divisor(
    a: &RingElement,
    sigma: &Cocycle,
    max_radius: usize,
    tol: &ToleranceConfig,
) -> Result<ZeroDivisorSearch> {
    if max_radius == 0 {
        return Err(LabError::InvalidParameter("maximum radius must be at least 1".into()));
    }
    let mut radii = Vec::new();
    let mut found_at = None;
    for radius in 1..=max_radius {
        let report = match kernel_search(a, sigma, &WindowSpec::new(radius)?, tol) {
            Ok(r) => Some(r),
            Err(LabError::EmptyInterior { .. }) => None,
            Err(e) => return Err(e),
        };
        let found = report.as_ref().is_some_and(|r| r.has_cofactor());
        radii.push(RadiusOutcome { radius, report });
        if found {
            found_at = Some(radius);
            break;
        }
    }
    Ok(ZeroDivisorSearch { radii, found_at, max_radius })
}

/// The factor pair `(1 + a + ... + a^(n-1), a - 1)` with `a = alpha^(-1/n) delta_g`.
#[derive(Clone, Debug)]
pub struct TorsionZeroDivisor {
    pub generator: GroupPoint,
    pub order: u64,
    /// `s(g,g) s(g,g^2) ... s(g,g^(n-1))`.
    pub alpha: Complex64,
    pub alpha_turn: Option<Turn>,
    /// Coefficient of `a`, the principal `n`-th root of `1/alpha`.
    pub root: Complex64,
    pub left: RingElement,
    pub right: RingElement,
    /// Largest coefficient modulus of `left * right`: taken from the exact
    /// product when phases are exact, otherwise from `float_residual`.
    pub residual: f64,
    /// Largest coefficient modulus of `left * right` in floating point.
    pub float_residual: f64,
    /// `Some(true)` when the exact-phase product vanishes identically.
    pub exact_zero: Option<bool>,
}

pub fn torsion_zero_divisor(gamma: &GroupPoint, sigma: &Cocycle) -> Result<TorsionZeroDivisor> {
    let group = sigma.group();
    group.check(gamma)?;
    if !matches!(group.kind(), GroupKind::CyclicProduct { .. }) {
        return Err(LabError::InfiniteOrder { coords: gamma.coords().to_vec() });
    }
    let order = group.element_order(gamma)?.expect("finite group");
    if order == 1 {
        return Err(LabError::IdentityElement);
    }
    let powers: Vec<GroupPoint> = (0..order).map(|k| group.pow(gamma, k)).collect::<Result<_>>()?;

    let (alpha_turn, left, right, exact_product) = if sigma.has_exact_phases() {
        let mut t = Turn::ZERO;
        for p in &powers[1..] {
            t = t + sigma.exact_turn(gamma, p).expect("exact family");
        }
        let root = t.principal_inverse_root(order);
        let a = ExactElement::monomial(group, gamma.clone(), root);
        let mut left = ExactElement::unit(group);
        let mut acc = ExactElement::unit(group);
        for _ in 1..order {
            acc = acc.convolve(&a, sigma)?;
            left = left.add(&acc)?;
        }
        let right = a.sub(&ExactElement::unit(group))?;
        let product = left.convolve(&right, sigma)?;
        (Some(t), left.to_ring_element(), right.to_ring_element(), Some(product))
    } else {
        let mut alpha = Complex64::new(1.0, 0.0);
        for p in &powers[1..] {
            alpha *= sigma.eval_unchecked(gamma, p);
        }
        let root = alpha.inv().powf(1.0 / order as f64);
        let a = RingElement::from_terms(group, [(gamma.clone(), root)])?;
        let mut left = RingElement::unit(group);
        let mut acc = RingElement::unit(group);
        for _ in 1..order {
            acc = convolve(&acc, &a, sigma)?;
            left = left.add(&acc)?;
        }
        (None, left, a.sub(&RingElement::unit(group))?, None)
    };

    let alpha = match alpha_turn {
        Some(t) => t.to_complex(),
        None => powers[1..].iter().map(|p| sigma.eval_unchecked(gamma, p)).product(),
    };
    let root = right.coeff(gamma);
    let float_residual = convolve(&left, &right, sigma)?.max_abs();
    let exact_zero = exact_product.as_ref().map(|p| p.is_zero());
    let residual = exact_product.map_or(float_residual, |p| p.to_ring_element().max_abs());
    Ok(TorsionZeroDivisor {
        generator: gamma.clone(),
        order,
        alpha,
        alpha_turn,
        root,
        left,
        right,
        residual,
        float_residual,
        exact_zero,
    })
}
