//! Quadrature kernels used by the verification oracles and by the
//! small-decay-rate evaluation path of the closed-form temperature integrals.

/// Composite trapezoid rule with `n` uniform intervals.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 1);
    let h = (b - a) / n as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for i in 1..n {
        acc += f(a + i as f64 * h);
    }
    acc * h
}

/// Trapezoid rule over already-sampled uniform values.
pub fn trapezoid_samples(values: &[f64], dz: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.5 * (values[0] + values[n - 1]);
    for v in &values[1..n - 1] {
        acc += v;
    }
    acc * dz
}

/// Richardson-extrapolated trapezoid values at n, 2n and 4n intervals
/// (two extrapolation levels), eliminating the h^2 and h^4 error terms.
pub fn trapezoid_romberg<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let t1 = trapezoid(f, a, b, n);
    let t2 = trapezoid(f, a, b, 2 * n);
    let t3 = trapezoid(f, a, b, 4 * n);
    let s1 = (4.0 * t2 - t1) / 3.0;
    let s2 = (4.0 * t3 - t2) / 3.0;
    (16.0 * s2 - s1) / 15.0
}

/// Cumulative double integral of uniformly sampled data by nested trapezoid:
/// returns `F(z_j) = int_0^{z_j} int_0^tau f ds dtau` for all sample points.
pub fn nested_trapezoid_samples(values: &[f64], dz: f64) -> Vec<f64> {
    let n = values.len();
    let mut inner = vec![0.0; n];
    for j in 1..n {
        inner[j] = inner[j - 1] + 0.5 * dz * (values[j - 1] + values[j]);
    }
    let mut outer = vec![0.0; n];
    for j in 1..n {
        outer[j] = outer[j - 1] + 0.5 * dz * (inner[j - 1] + inner[j]);
    }
    outer
}

const GL_POINTS: usize = 64;

fn legendre_nodes() -> &'static ([f64; GL_POINTS], [f64; GL_POINTS]) {
    use std::sync::OnceLock;
    static NODES: OnceLock<([f64; GL_POINTS], [f64; GL_POINTS])> = OnceLock::new();
    NODES.get_or_init(|| {
        // Newton iteration on P_n with the standard initial guess.
        let n = GL_POINTS;
        let mut x = [0.0f64; GL_POINTS];
        let mut w = [0.0f64; GL_POINTS];
        for i in 0..n {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            loop {
                // P_n(t) and P_n'(t) by the three-term recurrence
                let (mut p0, mut p1) = (1.0f64, t);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                let dt = p1 / dp;
                t -= dt;
                if dt.abs() < 1e-15 {
                    let (mut p0, mut p1) = (1.0f64, t);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                    x[i] = t;
                    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
                    break;
                }
            }
        }
        (x, w)
    })
}

/// 64-point Gauss-Legendre quadrature on [a, b]; spectrally accurate for
/// smooth integrands.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = legendre_nodes();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..GL_POINTS {
        acc += weights[i] * f(mid + half * nodes[i]);
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_constants_and_linears() {
        assert_eq!(trapezoid(|_| 1.0, 0.0, 1.0, 7), 1.0);
        let lin = trapezoid(|z| z, 0.0, 1.0, 9);
        assert!((lin - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadratic_within_tolerance_at_1024() {
        let v = trapezoid(|z| z * z, 0.0, 1.0, 1024);
        assert!((v - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn romberg_near_machine_precision_on_smooth() {
        let v = trapezoid_romberg(|z: f64| z.exp(), 0.0, 1.0, 256);
        let exact = std::f64::consts::E - 1.0;
        assert!((v - exact).abs() < 1e-13 * exact);
    }

    #[test]
    fn gauss_legendre_integrates_high_degree_polynomials_exactly() {
        // degree 127 is the exactness limit for 64 points
        let v = gauss_legendre(|z| z.powi(20), 0.0, 1.0);
        assert!((v - 1.0 / 21.0).abs() < 1e-15);
        let w = gauss_legendre(|z: f64| (3.0 * z).exp(), -1.0, 2.0);
        let exact = ((6.0f64).exp() - (-3.0f64).exp()) / 3.0;
        assert!((w - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn nested_trapezoid_matches_closed_form() {
        // f = 1: inner = z, outer = z^2/2
        let n = 257;
        let dz = 1.0 / (n - 1) as f64;
        let values = vec![1.0; n];
        let out = nested_trapezoid_samples(&values, dz);
        for j in 0..n {
            let z = j as f64 * dz;
            assert!((out[j] - 0.5 * z * z).abs() < 1e-12);
        }
    }
}
