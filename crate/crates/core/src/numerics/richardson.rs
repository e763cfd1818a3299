/// Measured convergence order from errors against an exact reference at
/// resolutions n, 2n, 4n: the mean of log2(e1/e2) and log2(e2/e3).
/// Returns `None` when the sequence is not strictly decreasing.
pub fn order_from_exact_errors(e1: f64, e2: f64, e3: f64) -> Option<f64> {
    if !(e1 > e2 && e2 > e3 && e3 > 0.0) {
        return None;
    }
    Some(0.5 * ((e1 / e2).log2() + (e2 / e3).log2()))
}

/// Measured order without an exact reference, from three values f1, f2, f3
/// computed at resolutions n, 2n, 4n: log2((f1 - f2) / (f2 - f3)).
/// Returns `None` when the differences do not shrink monotonically.
pub fn order_from_nested_differences(f1: f64, f2: f64, f3: f64) -> Option<f64> {
    let d1 = f1 - f2;
    let d2 = f2 - f3;
    let ratio = d1 / d2;
    if !(ratio > 1.0) || !ratio.is_finite() {
        return None;
    }
    Some(ratio.log2())
}
