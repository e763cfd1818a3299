use crate::error::{CoreError, Result};

/// Thomas algorithm for a tridiagonal system.
///
/// `lower` and `upper` have length `n - 1`, `diag` and `rhs` length `n`.
/// Fails on a vanishing pivot; no pivoting is performed, which is adequate
/// for the diagonally dominant systems assembled here.
pub fn tridiag_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(rhs.len(), n);
    assert_eq!(lower.len(), n - 1);
    assert_eq!(upper.len(), n - 1);

    let mut c = vec![0.0; n - 1];
    let mut d = vec![0.0; n];

    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(CoreError::ZeroPivot { row: 0 });
    }
    if n > 1 {
        c[0] = upper[0] / pivot;
    }
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(CoreError::ZeroPivot { row: i });
        }
        if i < n - 1 {
            c[i] = upper[i] / pivot;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Ok(d)
}
