//! Verification diagnostics on dilated solves: distance to the reduced model
//! across a sweep of slenderness values, a priori norm scalings, and the
//! vertically averaged pressure.

use crate::error::{CoreError, Result};
use crate::fields::ScalarField2D;
use crate::grid::{GapField, GapSpec};
use crate::reduced_flow::{assemble_reynolds, pressure_gradient, profile_coeffs, solve_pressure};
use crate::reduced_heat::{temperature_profile, TemperatureProfile};

use super::mac::{compute_strain, strain_norm_squared, vertical_strain_norm_squared};
use super::{solve_dilated, DilatedConfig, DilatedSolution};

/// One row of the convergence table: global distances between a dilated
/// solve and the reduced model sampled on the matched grid.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    /// L2 distance of the horizontal velocity to the reduced profile.
    pub velocity_error: f64,
    /// L2 norm of the vertical velocity (the limit is zero).
    pub vertical_velocity_norm: f64,
    /// L2(omega) distance of the vertically averaged scaled pressure.
    pub pressure_error: f64,
    /// L^{4/3} distance of the temperature to the reduced profile.
    pub temperature_error: f64,
}

#[derive(Debug)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    pub solutions: Vec<DilatedSolution>,
    reference: ReducedReference,
}

impl ConvergenceStudy {
    /// Distances recomputed on the interior subdomain, excluding cells less
    /// than `margin` cells from the lateral boundary. The no-slip side walls
    /// induce layers the reduced model ignores; this view measures the
    /// agreement away from them. Pressures are re-centered on the region.
    pub fn interior_rows(&self, margin: usize) -> Result<Vec<ConvergenceRow>> {
        let grid = self
            .solutions
            .first()
            .map(|s| s.config.grid)
            .ok_or_else(|| CoreError::InvalidConfig {
                context: "empty study".into(),
            })?;
        if 2 * margin + 2 > grid.nx || 2 * margin + 2 > grid.ny {
            return Err(CoreError::InvalidConfig {
                context: format!(
                    "interior margin {margin} leaves no cells on a {}x{} grid",
                    grid.nx, grid.ny
                ),
            });
        }
        Ok(self
            .solutions
            .iter()
            .map(|sol| convergence_row_masked(sol, &self.reference, margin))
            .collect())
    }
}

/// A priori scaling diagnostics; each column must stay bounded across the
/// sweep (max/min ratio of order one, not growing like a power of epsilon).
#[derive(Debug, Clone, Copy)]
pub struct ScalingRow {
    pub epsilon: f64,
    pub velocity_l2: f64,
    /// eps * ||D_eps U||_2.
    pub scaled_strain_l2: f64,
    pub temperature_l43: f64,
    /// eps * ||grad_eps T||_{4/3}.
    pub scaled_temperature_gradient_l43: f64,
    /// Share of the squared strain norm carried by the vertical-derivative
    /// block (the entries built from `beta * d/dz`).
    pub vertical_strain_share: f64,
}

/// Reduced-model reference sampled on the matched grids.
#[derive(Debug)]
struct ReducedReference {
    /// Limit pressure on omega (zero mean).
    pressure: ScalarField2D,
    /// Reduced horizontal velocity at 3D cell centers.
    u_star: Vec<f64>,
    v_star: Vec<f64>,
    /// Reduced temperature at 3D cell centers.
    t_star: Vec<f64>,
}

fn reduced_reference(config: &DilatedConfig) -> Result<ReducedReference> {
    let grid = config.grid;
    let gap = GapField::from_spec(&GapSpec::Constant(config.gap_height), grid)?;
    let forcing = config.forcing.sample(grid);
    let system = assemble_reynolds(&gap, &config.params, &forcing)?;
    let (pressure, _) = solve_pressure(&system, 1e-12, 100 * grid.cell_count())?;
    let grad = pressure_gradient(&pressure);

    let g3 = config.mac();
    let coeffs = profile_coeffs(&config.params, config.gap_height)?;
    let profile: Vec<f64> = (0..g3.nz)
        .map(|k| coeffs.eval_unchecked((k as f64 + 0.5) * g3.dz))
        .collect();

    let n3 = g3.cell_count();
    let mut u_star = vec![0.0; n3];
    let mut v_star = vec![0.0; n3];
    let mut t_star = vec![0.0; n3];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let c2 = grid.idx(i, j);
            let gx = forcing.x[c2] - grad.x[c2];
            let gy = forcing.y[c2] - grad.y[c2];
            let tp = TemperatureProfile::new(config.params, config.gap_height, gx * gx + gy * gy)?;
            for k in 0..g3.nz {
                let c3 = g3.ic(i, j, k);
                u_star[c3] = profile[k] * gx;
                v_star[c3] = profile[k] * gy;
                t_star[c3] = temperature_profile(&tp, (k as f64 + 0.5) * g3.dz)?;
            }
        }
    }
    Ok(ReducedReference {
        pressure,
        u_star,
        v_star,
        t_star,
    })
}

fn l43_norm(values: impl Iterator<Item = f64>, vol: f64) -> f64 {
    let p = 4.0 / 3.0;
    (values.map(|v| v.abs().powf(p)).sum::<f64>() * vol).powf(1.0 / p)
}

/// Vertically averaged scaled pressure, re-centered to zero mean.
pub fn vertical_average_pressure(sol: &DilatedSolution) -> ScalarField2D {
    let g = sol.mac();
    let grid = sol.config.grid;
    let mut avg = vec![0.0; grid.cell_count()];
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                avg[grid.idx(i, j)] += sol.q[g.ic(i, j, k)];
            }
        }
    }
    let inv = 1.0 / g.nz as f64;
    for v in avg.iter_mut() {
        *v *= inv;
    }
    let mut field = ScalarField2D::new(grid, avg).expect("matched grid");
    field.subtract_mean();
    field
}

fn convergence_row(sol: &DilatedSolution, reference: &ReducedReference) -> ConvergenceRow {
    convergence_row_masked(sol, reference, 0)
}

fn convergence_row_masked(
    sol: &DilatedSolution,
    reference: &ReducedReference,
    margin: usize,
) -> ConvergenceRow {
    let g = sol.mac();
    let grid = sol.config.grid;
    let vol = g.vol();
    let (uc, vc, wc) = sol.cell_center_velocity();
    let inside =
        |i: usize, j: usize| i >= margin && i + margin < g.nx && j >= margin && j + margin < g.ny;

    let mut err_u = 0.0;
    let mut norm_w = 0.0;
    let mut err_t_acc = 0.0;
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                if !inside(i, j) {
                    continue;
                }
                let c = g.ic(i, j, k);
                let du = uc[c] - reference.u_star[c];
                let dv = vc[c] - reference.v_star[c];
                err_u += (du * du + dv * dv) * vol;
                norm_w += wc[c] * wc[c] * vol;
                err_t_acc += (sol.temperature[c] - reference.t_star[c]).abs().powf(4.0 / 3.0) * vol;
            }
        }
    }

    // pressures are defined up to a constant: re-center both on the region
    let qbar = vertical_average_pressure(sol);
    let area = grid.cell_area();
    let mut count = 0usize;
    let (mut mean_q, mut mean_p) = (0.0f64, 0.0f64);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            if inside(i, j) {
                mean_q += qbar.values[grid.idx(i, j)];
                mean_p += reference.pressure.values[grid.idx(i, j)];
                count += 1;
            }
        }
    }
    mean_q /= count as f64;
    mean_p /= count as f64;
    let mut err_q = 0.0;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            if inside(i, j) {
                let d = (qbar.values[grid.idx(i, j)] - mean_q)
                    - (reference.pressure.values[grid.idx(i, j)] - mean_p);
                err_q += d * d * area;
            }
        }
    }

    ConvergenceRow {
        epsilon: sol.config.epsilon,
        velocity_error: err_u.sqrt(),
        vertical_velocity_norm: norm_w.sqrt(),
        pressure_error: err_q.sqrt(),
        temperature_error: err_t_acc.powf(0.75),
    }
}

/// Solves the dilated system for every value in `eps_list` (strictly
/// decreasing, each in (0, 1]) and tabulates the distances to the reduced
/// model. The reduced reference is epsilon-independent and computed once.
pub fn convergence_study(base: &DilatedConfig, eps_list: &[f64]) -> Result<ConvergenceStudy> {
    if eps_list.is_empty() {
        return Err(CoreError::InvalidConfig {
            context: "empty epsilon list".into(),
        });
    }
    for pair in eps_list.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(CoreError::InvalidConfig {
                context: format!("epsilon list must be strictly decreasing, got {eps_list:?}"),
            });
        }
    }
    for &eps in eps_list {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(CoreError::OutOfRange {
                name: "epsilon",
                value: eps,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }

    let reference = reduced_reference(base)?;
    let mut rows = Vec::with_capacity(eps_list.len());
    let mut solutions = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let config = base.with_epsilon(eps);
        let sol = solve_dilated(&config)?;
        rows.push(convergence_row(&sol, &reference));
        solutions.push(sol);
    }
    Ok(ConvergenceStudy {
        rows,
        solutions,
        reference,
    })
}

/// Norm scalings of solved states across a sweep.
pub fn scaling_diagnostics(solutions: &[DilatedSolution]) -> Vec<ScalingRow> {
    solutions
        .iter()
        .map(|sol| {
            let g = sol.mac();
            let vol = g.vol();
            let eps = sol.config.epsilon;
            let (uc, vc, wc) = sol.cell_center_velocity();
            let velocity_l2 = (0..g.cell_count())
                .map(|c| (uc[c] * uc[c] + vc[c] * vc[c] + wc[c] * wc[c]) * vol)
                .sum::<f64>()
                .sqrt();

            let packed = sol.packed_velocity();
            let total = strain_norm_squared(&g, &compute_strain(&g, &packed));
            let vertical = vertical_strain_norm_squared(&g, &packed);
            let scaled_strain_l2 = eps * total.sqrt();
            let vertical_strain_share = if total > 0.0 { vertical / total } else { 0.0 };

            let temperature_l43 = l43_norm(sol.temperature.iter().copied(), vol);
            let scaled_temperature_gradient_l43 =
                eps * l43_norm(temperature_gradient_magnitude(sol).into_iter(), vol);

            ScalingRow {
                epsilon: eps,
                velocity_l2,
                scaled_strain_l2,
                temperature_l43,
                scaled_temperature_gradient_l43,
                vertical_strain_share,
            }
        })
        .collect()
}

/// |grad_eps T| at cell centers: central differences inside, one-sided at
/// boundary cells (diagnostic accuracy only).
fn temperature_gradient_magnitude(sol: &DilatedSolution) -> Vec<f64> {
    let g = sol.mac();
    let t = &sol.temperature;
    let mut out = vec![0.0; g.cell_count()];
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                let c = g.ic(i, j, k);
                let gx = if i == 0 {
                    (t[g.ic(1, j, k)] - t[c]) / g.dx
                } else if i + 1 == g.nx {
                    (t[c] - t[g.ic(i - 1, j, k)]) / g.dx
                } else {
                    (t[g.ic(i + 1, j, k)] - t[g.ic(i - 1, j, k)]) / (2.0 * g.dx)
                };
                let gy = if j == 0 {
                    (t[g.ic(i, 1, k)] - t[c]) / g.dy
                } else if j + 1 == g.ny {
                    (t[c] - t[g.ic(i, j - 1, k)]) / g.dy
                } else {
                    (t[g.ic(i, j + 1, k)] - t[g.ic(i, j - 1, k)]) / (2.0 * g.dy)
                };
                let gz = if k == 0 {
                    (t[g.ic(i, j, 1)] - t[c]) / g.dz
                } else if k + 1 == g.nz {
                    (t[c] - t[g.ic(i, j, k - 1)]) / g.dz
                } else {
                    (t[g.ic(i, j, k + 1)] - t[g.ic(i, j, k - 1)]) / (2.0 * g.dz)
                };
                let gz = g.beta * gz;
                out[c] = (gx * gx + gy * gy + gz * gz).sqrt();
            }
        }
    }
    out
}
