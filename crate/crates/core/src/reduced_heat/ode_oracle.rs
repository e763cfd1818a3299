//! Independent per-column verification: a second-order finite-difference
//! two-point boundary-value solve of `-k T'' = Phi(z)` on (0, h) with
//! Dirichlet top (`T(h) = 0`) and Neumann bottom (`-k T'(0) = b`), the
//! Neumann end closed by the symmetric half-cell (ghost-point) row.

use crate::error::{CoreError, Result};
use crate::numerics::tridiag_solve;
use crate::params::PhysicalParams;
use crate::reduced_heat::{dissipation_unchecked, TemperatureProfile};

/// Solves the column two-point BVP on `nz + 1` uniform nodes and returns the
/// sampled temperature (last node is the exact Dirichlet zero).
pub fn column_ode_oracle(
    params: &PhysicalParams,
    h: f64,
    gmag2: f64,
    nz: usize,
) -> Result<Vec<f64>> {
    if nz < 8 {
        return Err(CoreError::InvalidConfig {
            context: format!("ODE oracle needs nz >= 8, got {nz}"),
        });
    }
    let tp = TemperatureProfile::new(*params, h, gmag2)?;
    let phi = |z: f64| dissipation_unchecked(&tp, z);
    column_ode_with_source(params, h, nz, phi)
}

/// Same discretization, arbitrary source; used for manufactured-solution tests.
pub fn column_ode_with_source<F: Fn(f64) -> f64>(
    params: &PhysicalParams,
    h: f64,
    nz: usize,
    phi: F,
) -> Result<Vec<f64>> {
    let k = params.conductivity;
    let b = params.bottom_flux;
    let dz = h / nz as f64;
    let n = nz; // unknowns T_0 .. T_{nz-1}; T_nz = 0 eliminated
    let scale = k / (dz * dz);

    let mut lower = vec![-scale; n - 1];
    let mut upper = vec![-scale; n - 1];
    let mut diag = vec![2.0 * scale; n];
    let mut rhs = vec![0.0; n];

    // half-cell Neumann row at z = 0
    diag[0] = scale;
    upper[0] = -scale;
    rhs[0] = 0.5 * phi(0.0) + b / dz;
    for j in 1..n {
        if j >= 1 {
            lower[j - 1] = -scale;
        }
        rhs[j] = phi(j as f64 * dz);
    }

    let mut t = tridiag_solve(&lower, &diag, &upper, &rhs)?;
    t.push(0.0);
    Ok(t)
}
