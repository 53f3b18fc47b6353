//! Dense linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

/// Determinant by LU with partial pivoting; the empty matrix has determinant 1.
pub fn det(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 1.0;
    }
    m.clone().lu().determinant()
}

/// Copy of `m` padded with zero rows or columns to a square matrix.
///
/// The SVD of `nalgebra` can lose accuracy on rectangular input; padding keeps
/// the nonzero singular values and adds zeros only.
fn pad_square(m: &DMatrix<f64>) -> DMatrix<f64> {
    let k = m.nrows().max(m.ncols());
    let mut sq = DMatrix::zeros(k, k);
    sq.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    sq
}

/// Singular values sorted in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = pad_square(m).svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.truncate(m.nrows().min(m.ncols()));
    s
}

/// Numerical rank: singular values above `rel_tol` times the largest one.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&top) if top == 0.0 => 0,
        Some(&top) => s.iter().filter(|&&x| x > rel_tol * top).count(),
    }
}

/// Smallest real eigenvalue of a square matrix.
///
/// Z-matrices are handled by [`z_matrix_min_eigenvalue`]; other matrices go
/// through [`complex_eigenvalues`].
///
/// Eigenvalues whose imaginary part is below `1e-9` (relative to the spectral
/// scale) count as real. Returns `None` when the spectrum has no real point.
pub fn min_real_eigenvalue(m: &DMatrix<f64>) -> Option<f64> {
    let n = m.nrows();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(m[(0, 0)]);
    }
    if is_z_matrix(m) {
        return Some(z_matrix_min_eigenvalue(m));
    }
    let scale = m.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let ev = complex_eigenvalues(m)?;
    ev.iter()
        .filter(|z| z.im.abs() <= 1e-9 * scale)
        .map(|z| z.re)
        .min_by(|a, b| a.total_cmp(b))
}

/// Whether every off-diagonal entry is nonpositive.
pub fn is_z_matrix(m: &DMatrix<f64>) -> bool {
    (0..m.nrows()).all(|i| (0..m.ncols()).all(|j| i == j || m[(i, j)] <= 0.0))
}

/// Whether Gaussian elimination without pivoting meets only positive pivots.
///
/// For a Z-matrix this holds exactly when it is a nonsingular M-matrix.
fn positive_pivots(m: &DMatrix<f64>) -> bool {
    let n = m.nrows();
    let mut a = m.clone();
    for k in 0..n {
        let p = a[(k, k)];
        if !(p > 0.0) {
            return false;
        }
        for i in k + 1..n {
            let f = a[(i, k)] / p;
            if f != 0.0 {
                for j in k + 1..n {
                    a[(i, j)] -= f * a[(k, j)];
                }
            }
        }
    }
    true
}

/// Smallest real eigenvalue of a Z-matrix.
///
/// It is the supremum of the `t` for which `m − t·Id` is a nonsingular
/// M-matrix, located by bisection between Gershgorin bounds.
pub fn z_matrix_min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut lo = (0..n)
        .map(|i| m[(i, i)] - (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
        - 1.0;
    let mut hi = (0..n).map(|i| m[(i, i)]).fold(f64::INFINITY, f64::min);
    let shifted = |t: f64| m - DMatrix::identity(n, n) * t;
    if positive_pivots(&shifted(hi)) {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if positive_pivots(&shifted(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues of a square matrix through a real Schur form with bounded
/// iterations.
///
/// When the QR iteration stalls, it is restarted on Householder conjugates of
/// the matrix, which share its spectrum. Returns `None` if every attempt stalls.
pub fn complex_eigenvalues(m: &DMatrix<f64>) -> Option<Vec<nalgebra::Complex<f64>>> {
    const MAX_ITER: usize = 10_000;
    let n = m.nrows();
    for attempt in 0..4usize {
        let conj = if attempt == 0 {
            m.clone()
        } else {
            let v = DVector::from_fn(n, |i, _| ((i * attempt + 1) as f64).sin() + 1.5);
            let h = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
            &h * m * &h
        };
        if let Some(schur) = nalgebra::Schur::try_new(conj, f64::EPSILON, MAX_ITER) {
            return Some(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    None
}

/// Eigenvalues of a symmetric matrix in increasing order.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Whether a symmetric matrix is positive definite (smallest eigenvalue above `tol`).
pub fn is_positive_definite(m: &DMatrix<f64>, tol: f64) -> bool {
    symmetric_eigenvalues(m).first().is_none_or(|&x| x > tol)
}

/// Principal submatrix on the given index list.
pub fn principal(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Submatrix with the given rows and columns.
pub fn submatrix(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])])
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Largest absolute entry.
pub fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Null vector of a matrix with one more column than its rank should allow.
///
/// Returns the unit right-singular vector of the smallest singular value of the
/// zero-padded square matrix, together with the smallest and the second
/// smallest singular values (the latter certifies a one-dimensional kernel).
pub fn null_vector(m: &DMatrix<f64>) -> (DVector<f64>, f64, f64) {
    // Tall input is reduced to its square triangular factor, which has the
    // same right singular vectors.
    let sq = if m.nrows() > m.ncols() { m.clone().qr().r() } else { pad_square(m) };
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let smallest = svd.singular_values[order[0]];
    let second = order.get(1).map_or(f64::INFINITY, |&k| svd.singular_values[k]);
    let v = v_t.row(order[0]).transpose().into_owned();
    (v, smallest, second)
}

/// Least-squares solution of `a x = b` for a full column rank `a` with at
/// least as many rows as columns, by Householder QR.
pub fn solve_least_squares(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if a.nrows() < a.ncols() || a.nrows() != b.nrows() {
        return None;
    }
    let qr = a.clone().qr();
    qr.r().solve_upper_triangular(&(qr.q().transpose() * b))
}

/// Indices of the first columns that together reach the numerical rank.
///
/// Columns are scanned left to right and kept when they raise the rank.
pub fn independent_columns(m: &DMatrix<f64>, rel_tol: f64) -> Vec<usize> {
    let target = rank(m, rel_tol);
    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    for j in 0..m.ncols() {
        let mut trial = chosen.clone();
        trial.push(j);
        let sub = submatrix(m, &(0..m.nrows()).collect::<Vec<_>>(), &trial);
        if rank(&sub, rel_tol) == trial.len() {
            chosen = trial;
            if chosen.len() == target {
                break;
            }
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_matrix_eigenvalue_matches_symmetric_solver() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, -1.5, -1.0, 2.0, -1.0, -1.5, -1.0, 2.0]);
        let want = symmetric_eigenvalues(&m)[0];
        assert!((z_matrix_min_eigenvalue(&m) - want).abs() < 1e-13);
        let affine = DMatrix::from_row_slice(2, 2, &[2.0, -2.0, -2.0, 2.0]);
        assert!(z_matrix_min_eigenvalue(&affine).abs() < 1e-13);
        let spherical = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        assert!((z_matrix_min_eigenvalue(&spherical) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn determinant_and_rank_of_affine_gram() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, -2.0, -2.0, 2.0]);
        assert!(det(&m).abs() < 1e-15);
        assert_eq!(rank(&m, 1e-9), 1);
    }

    #[test]
    fn min_eigenvalue_of_a2() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        assert!((min_real_eigenvalue(&m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn null_vector_of_plane() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let (v, s0, s1) = null_vector(&m);
        assert!(s0 < 1e-12 && s1 > 0.5);
        assert!((v[2].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_columns_skips_dependent_ones() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 1.0, 2.0, 1.0]);
        assert_eq!(independent_columns(&m, 1e-9), vec![0, 2]);
    }
}
