//! Følner boxes, interior sets and the finite-section estimate of the
//! kernel dimension `||P_N(C_a) delta_e||^2`.

use std::collections::HashSet;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::cocycle::Cocycle;
use crate::error::{LabError, Result};
use crate::group::{box_points, Group, GroupKind, GroupPoint};
use crate::linalg::{orthonormalize, pivoted_qr_rank};
use crate::ring::{RingElement, ToleranceConfig};
use crate::zero_divisor::{build_truncated_operator, kernel_search, WindowSpec};

/// The box rule for each supported group:
/// `{-n..n}^d` on `Z^d`, the whole group for cyclic products, and
/// `{-n..n}^2 x {-n^2..n^2}` on the Heisenberg group.
#[derive(Clone, Debug, PartialEq)]
pub struct FolnerSequence {
    group: Group,
}

impl FolnerSequence {
    pub fn new(group: &Group) -> Self {
        Self { group: group.clone() }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    /// `F_n` in lexicographic order.
    pub fn set(&self, n: usize) -> Result<Vec<GroupPoint>> {
        if n == 0 {
            return Err(LabError::InvalidParameter("Følner radius must be at least 1".into()));
        }
        let n = n as i64;
        Ok(match self.group.kind() {
            GroupKind::FreeAbelian { rank } => box_points(&vec![(-n, n); *rank]),
            GroupKind::CyclicProduct { .. } => self.group.elements().expect("finite"),
            GroupKind::Heisenberg3 => box_points(&[(-n, n), (-n, n), (-n * n, n * n)]),
        })
    }
}

/// `{ g in F : k g in F for every k in K }`, in the order of `f`.
pub fn interior(group: &Group, k: &[GroupPoint], f: &[GroupPoint]) -> Vec<GroupPoint> {
    let members: HashSet<&GroupPoint> = f.iter().collect();
    f.iter()
        .filter(|g| k.iter().all(|kk| members.contains(&group.compose_unchecked(kk, g))))
        .cloned()
        .collect()
}

/// `|F ∆ F g| / |F|`.
pub fn symmetric_difference_ratio(group: &Group, f: &[GroupPoint], g: &GroupPoint) -> f64 {
    let members: HashSet<&GroupPoint> = f.iter().collect();
    let shifted: HashSet<GroupPoint> = f.iter().map(|x| group.compose_unchecked(x, g)).collect();
    let outside = shifted.iter().filter(|p| !members.contains(p)).count();
    // |F ∆ Fg| = 2 |Fg \ F| because |Fg| = |F|.
    2.0 * outside as f64 / f.len() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioPoint {
    pub radius: usize,
    pub folner_size: usize,
    pub interior_size: usize,
    pub ratio: f64,
}

/// `|int_K(F_n)| / |F_n|` with `K = supp(a)` for each radius.
pub fn folner_ratio_diagnostic(a: &RingElement, radii: &[usize]) -> Result<Vec<RatioPoint>> {
    if a.is_empty() {
        return Err(LabError::ZeroElement);
    }
    let seq = FolnerSequence::new(a.group());
    let k = a.support();
    radii
        .iter()
        .map(|&n| {
            let f = seq.set(n)?;
            let int = interior(a.group(), &k, &f);
            Ok(RatioPoint {
                radius: n,
                folner_size: f.len(),
                interior_size: int.len(),
                ratio: int.len() as f64 / f.len() as f64,
            })
        })
        .collect()
}

/// One term of the dimension series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub radius: usize,
    pub folner_size: usize,
    pub interior_size: usize,
    pub interior_ratio: f64,
    pub nullity: usize,
    /// `(1/|F_n|) sum_{g in F_n} ||P_N delta_g||^2`, which equals `nullity / |F_n|`.
    pub value: f64,
    /// The same average accumulated entry by entry from an orthonormalized
    /// kernel basis; differs from `value` only by rounding.
    pub projection_average: f64,
}

pub fn vn_dim_estimate(a: &RingElement, sigma: &Cocycle, n: usize, tol: &ToleranceConfig) -> Result<DimensionEstimate> {
    let report = kernel_search(a, sigma, &WindowSpec::new(n)?, tol)?;
    let vectors: Vec<DVector<Complex64>> = report
        .kernel_vectors
        .iter()
        .map(|v| DVector::from_column_slice(v.as_slice()))
        .collect();
    let basis = orthonormalize(&vectors);
    // Kernel vectors live on int_K(F_n) ⊆ F_n, so summing over their entries
    // is the sum over g in F_n of ||P delta_g||^2.
    let total: f64 = basis.iter().flat_map(|b| b.iter()).map(|z| z.norm_sqr()).sum();
    let folner_size = report.window_size;
    Ok(DimensionEstimate {
        radius: n,
        folner_size,
        interior_size: report.interior_size,
        interior_ratio: report.interior_size as f64 / folner_size as f64,
        nullity: basis.len(),
        value: basis.len() as f64 / folner_size as f64,
        projection_average: total / folner_size as f64,
    })
}

/// Both sides of `(dim N + dim R) / |F_n| = |int_K(F_n)| / |F_n|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankNullityReport {
    pub radius: usize,
    pub folner_size: usize,
    pub interior_size: usize,
    /// Kernel dimension from the SVD.
    pub nullity: usize,
    /// Range dimension from a column-pivoted QR of the same matrix.
    pub rank: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

/// Computes the kernel dimension by SVD and the range dimension by an
/// independent pivoted QR, then compares their sum with `|int_K(F_n)|`.
pub fn rank_nullity_check(a: &RingElement, sigma: &Cocycle, n: usize, tol: &ToleranceConfig) -> Result<RankNullityReport> {
    let window = WindowSpec::new(n)?;
    let op = build_truncated_operator(a, sigma, &window)?;
    let report = kernel_search(a, sigma, &window, tol)?;
    let (rank, _) = pivoted_qr_rank(op.matrix(), tol.rank_tol_factor);
    let f = op.rows().len() as f64;
    let interior_size = op.columns().len();
    Ok(RankNullityReport {
        radius: n,
        folner_size: op.rows().len(),
        interior_size,
        nullity: report.nullity,
        rank,
        lhs: (report.nullity + rank) as f64 / f,
        rhs: interior_size as f64 / f,
        passed: report.nullity + rank == interior_size,
    })
}
