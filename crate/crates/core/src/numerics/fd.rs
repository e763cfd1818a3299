//! Finite-difference stencils shared by the residual checks and the
//! planar gradient of the solved pressure.

/// Second derivative of uniformly sampled data by the central 3-point stencil;
/// endpoints are not populated (set to NaN).
pub fn second_derivative_samples(values: &[f64], dz: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![f64::NAN; n];
    for j in 1..n - 1 {
        out[j] = (values[j - 1] - 2.0 * values[j] + values[j + 1]) / (dz * dz);
    }
    out
}

/// Second-order one-sided first derivative at the left end of a sample row.
#[inline]
pub fn one_sided_first(p0: f64, p1: f64, p2: f64, dz: f64) -> f64 {
    (-3.0 * p0 + 4.0 * p1 - p2) / (2.0 * dz)
}

/// First derivative along a row of cell values: central in the interior,
/// second-order one-sided at the two boundary cells. Two-sample rows fall
/// back to the plain difference.
pub fn derivative_row(values: &[f64], d: f64) -> Vec<f64> {
    let n = values.len();
    if n == 2 {
        let g = (values[1] - values[0]) / d;
        return vec![g, g];
    }
    assert!(n >= 3, "need at least 2 samples");
    let mut out = vec![0.0; n];
    out[0] = one_sided_first(values[0], values[1], values[2], d);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * d);
    }
    out[n - 1] = -one_sided_first(values[n - 1], values[n - 2], values[n - 3], d);
    out
}
