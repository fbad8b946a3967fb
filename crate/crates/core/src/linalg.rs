//! Dense complex linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{LabError, Result};

const MAX_ITER: usize = 10_000;

/// Singular values in descending order with their right singular vectors.
#[derive(Clone, Debug)]
pub struct RightSvd {
    pub singular_values: Vec<f64>,
    pub right_vectors: Vec<DVector<Complex64>>,
}

/// Thin SVD keeping the full set of right singular vectors.
///
/// Wide matrices are padded with zero rows so every column direction gets a
/// singular value.
pub fn right_svd(matrix: &DMatrix<Complex64>) -> Result<RightSvd> {
    let (m, n) = matrix.shape();
    let padded = if m < n { matrix.clone().resize_vertically(n, Complex64::new(0.0, 0.0)) } else { matrix.clone() };
    let svd = SVD::try_new(padded, false, true, f64::EPSILON, MAX_ITER)
        .ok_or_else(|| LabError::Numerical("SVD did not converge".into()))?;
    let v_t = svd.v_t.expect("right vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    // Rows of v_t are conjugated right singular vectors.
    let right_vectors = order.iter().map(|&i| v_t.row(i).transpose().map(|z| z.conj())).collect();
    let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();
    Ok(RightSvd { singular_values, right_vectors })
}

/// Numerical rank from a Householder QR with column-norm pivoting:
/// `#{ |r_kk| > factor * |r_00| }`. Returns the rank and `|r_kk|`.
pub fn pivoted_qr_rank(matrix: &DMatrix<Complex64>, factor: f64) -> (usize, Vec<f64>) {
    let mut a = matrix.clone();
    let (m, n) = a.shape();
    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);
    for k in 0..steps {
        let (piv, _) = (k..n)
            .map(|j| (j, a.view((k, j), (m - k, 1)).norm_squared()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        a.swap_columns(k, piv);
        let x = a.view((k, k), (m - k, 1)).clone_owned();
        let norm = x.norm();
        if norm == 0.0 {
            diag.extend(std::iter::repeat_n(0.0, steps - k));
            break;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v = x;
        v[0] -= alpha;
        let vn = v.norm();
        if vn > 0.0 {
            v /= Complex64::new(vn, 0.0);
            let mut block = a.view_mut((k, k), (m - k, n - k));
            let w = v.adjoint() * &block;
            block -= &v * w * Complex64::new(2.0, 0.0);
        }
        diag.push(alpha.norm());
    }
    let lead = diag.first().copied().unwrap_or(0.0);
    let rank = diag.iter().filter(|&&d| d > factor * lead).count();
    (rank, diag)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(matrix: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::try_new(matrix.clone(), f64::EPSILON, MAX_ITER)
        .ok_or_else(|| LabError::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Vectors that
/// collapse below `1e-12` relative norm are dropped.
pub fn orthonormalize(vectors: &[DVector<Complex64>]) -> Vec<DVector<Complex64>> {
    let mut basis: Vec<DVector<Complex64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let start = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let n = w.norm();
        if n > 1e-12 * start.max(f64::MIN_POSITIVE) {
            basis.push(w / Complex64::new(n, 0.0));
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn svd_kernel_of_rank_one() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(1.0), c(1.0), c(1.0)]);
        let svd = right_svd(&m).unwrap();
        assert!((svd.singular_values[0] - 2.0).abs() < 1e-14);
        assert!(svd.singular_values[1].abs() < 1e-14);
        let k = &svd.right_vectors[1];
        assert!((m * k).norm() < 1e-14);
        assert!((k[0] + k[1]).norm() < 1e-14);
    }

    #[test]
    fn wide_matrices_are_padded() {
        let m = DMatrix::from_row_slice(1, 3, &[c(1.0), c(2.0), c(3.0)]);
        let svd = right_svd(&m).unwrap();
        assert_eq!(svd.singular_values.len(), 3);
        assert_eq!(svd.singular_values.iter().filter(|&&s| s > 1e-12).count(), 1);
    }

    #[test]
    fn qr_rank_matches_svd_rank() {
        let i = Complex64::new(0.0, 1.0);
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[c(1.0), i, c(1.0) + i, c(2.0), c(0.5), c(2.5), i, c(-1.0), i - c(1.0)],
        );
        let (rank, diag) = pivoted_qr_rank(&m, 1e-8);
        assert_eq!(rank, 2);
        assert_eq!(diag.len(), 3);
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        let vs = vec![
            DVector::from_vec(vec![c(1.0), c(1.0), c(0.0)]),
            DVector::from_vec(vec![c(1.0), c(0.0), Complex64::new(0.0, 1.0)]),
            DVector::from_vec(vec![c(2.0), c(2.0), c(0.0)]),
        ];
        let b = orthonormalize(&vs);
        assert_eq!(b.len(), 2);
        assert!((b[0].dotc(&b[1])).norm() < 1e-15);
        assert!((b[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_of_two_by_two() {
        let m = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.5), c(0.5), c(1.0)]);
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!((ev[0] - 0.5).abs() < 1e-14 && (ev[1] - 1.5).abs() < 1e-14);
    }
}
