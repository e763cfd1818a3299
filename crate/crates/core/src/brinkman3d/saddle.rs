//! Pressure-velocity coupling: a Uzawa-type outer iteration on the pressure
//! Schur complement, accelerated by conjugate gradients and preconditioned in
//! Cahouet-Chabard fashion, with inner CG velocity solves.
//!
//! With `A` the scaled momentum operator, `D` the dilation-weighted
//! divergence and `vol` the uniform cell volume, the saddle system
//!
//! ```text
//! A U - vol D^T Q = F,     D U = 0
//! ```
//!
//! reduces to `S Q = -D A^{-1} F` with `S = D A^{-1} (vol D^T)`, symmetric
//! positive definite on zero-mean pressures. Each outer iteration costs one
//! velocity solve; the preconditioner inverts the dilation-weighted Neumann
//! Laplacian, so the outer iteration count stays flat as epsilon shrinks.

use crate::error::{CoreError, Result};
use crate::numerics::cg::{cg_solve, dot, norm};
use crate::numerics::{LinearOperator, NullSpace};

use super::mac::{divergence, divergence_transpose, MacGrid};
use super::momentum::MomentumOperator;

/// `L = vol * D D^T`: the dilation-weighted pure-Neumann pressure Laplacian.
pub struct PressureLaplacian {
    pub grid: MacGrid,
}

impl PressureLaplacian {
    pub fn diagonal(&self) -> Vec<f64> {
        let g = &self.grid;
        let vol = g.vol();
        let mut d = vec![0.0; g.cell_count()];
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let cx = (i > 0) as usize + (i + 1 < g.nx) as usize;
                    let cy = (j > 0) as usize + (j + 1 < g.ny) as usize;
                    let cz = (k > 0) as usize + (k + 1 < g.nz) as usize;
                    d[g.ic(i, j, k)] = vol
                        * (cx as f64 / (g.dx * g.dx)
                            + cy as f64 / (g.dy * g.dy)
                            + cz as f64 * g.beta * g.beta / (g.dz * g.dz));
                }
            }
        }
        d
    }
}

impl LinearOperator for PressureLaplacian {
    fn dim(&self) -> usize {
        self.grid.cell_count()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let g = &self.grid;
        let mut faces = vec![0.0; g.face_count()];
        divergence_transpose(g, x, &mut faces);
        divergence(g, &faces, y);
        let vol = g.vol();
        for v in y.iter_mut() {
            *v *= vol;
        }
    }
}

#[derive(Debug, Clone)]
pub struct SaddleOutcome {
    /// Packed face velocities.
    pub velocity: Vec<f64>,
    /// Cell pressures with zero mean.
    pub pressure: Vec<f64>,
    pub outer_iterations: usize,
    pub outer_residual: f64,
    pub inner_iterations: usize,
    pub trace: Vec<f64>,
}

/// Solves the saddle system for the given volume-weighted face forcing.
pub fn solve_saddle(
    momentum: &MomentumOperator,
    forcing: &[f64],
    tol: f64,
    outer_maxit: usize,
) -> Result<SaddleOutcome> {
    let g = momentum.grid;
    let nf = g.face_count();
    let nc = g.cell_count();
    let vol = g.vol();

    if norm(forcing) == 0.0 {
        return Ok(SaddleOutcome {
            velocity: vec![0.0; nf],
            pressure: vec![0.0; nc],
            outer_iterations: 0,
            outer_residual: 0.0,
            inner_iterations: 0,
            trace: Vec::new(),
        });
    }

    let diag_a = momentum.diagonal();
    let inner_tol = (tol * 1e-3).clamp(1e-14, 1e-10);
    let inner_maxit = nf.max(2_000);
    let mut inner_total = 0usize;

    let mut velocity_solve = |rhs: &[f64]| -> Result<Vec<f64>> {
        let (x, rep) = cg_solve(
            momentum,
            rhs,
            inner_tol,
            inner_maxit,
            Some(&diag_a),
            NullSpace::None,
        );
        inner_total += rep.iterations;
        rep.require_converged(inner_tol)?;
        Ok(x)
    };

    // Schur right-hand side: -D A^{-1} F
    let u0 = velocity_solve(forcing)?;
    let mut rhs_s = vec![0.0; nc];
    divergence(&g, &u0, &mut rhs_s);
    for v in rhs_s.iter_mut() {
        *v = -*v;
    }
    NullSpace::MeanZero.project(&mut rhs_s);
    let rhs_norm = norm(&rhs_s);

    let laplacian = PressureLaplacian { grid: g };
    let diag_l = laplacian.diagonal();
    let mu_over_k = momentum.darcy_vol / vol;
    let visc = momentum.visc;
    let precondition = |r: &[f64], z: &mut [f64]| {
        let (lp, _) = cg_solve(
            &laplacian,
            r,
            1e-12,
            10 * nc,
            Some(&diag_l),
            NullSpace::MeanZero,
        );
        for i in 0..r.len() {
            z[i] = mu_over_k * vol * lp[i] + visc * r[i];
        }
        NullSpace::MeanZero.project(z);
    };

    let mut q = vec![0.0; nc];
    let mut trace = Vec::new();
    let mut outer_iterations = 0;
    let mut rel = 1.0;

    if rhs_norm > 0.0 {
        let mut faces = vec![0.0; nf];
        let mut r = rhs_s.clone();
        let mut z = vec![0.0; nc];
        precondition(&r, &mut z);
        let mut p = z.clone();
        let mut sp = vec![0.0; nc];
        let mut rz = dot(&r, &z);

        loop {
            rel = norm(&r) / rhs_norm;
            trace.push(rel);
            if rel <= tol {
                break;
            }
            if outer_iterations >= outer_maxit {
                let tail: Vec<f64> = trace.iter().rev().take(5).rev().cloned().collect();
                return Err(CoreError::SaddleStagnation {
                    iterations: outer_iterations,
                    residual: rel,
                    tol,
                    trace_tail: tail,
                });
            }
            // S p = D A^{-1} (vol D^T p)
            divergence_transpose(&g, &p, &mut faces);
            for v in faces.iter_mut() {
                *v *= vol;
            }
            let av = velocity_solve(&faces)?;
            divergence(&g, &av, &mut sp);
            NullSpace::MeanZero.project(&mut sp);

            let psp = dot(&p, &sp);
            if !(psp > 0.0) || !psp.is_finite() {
                let tail: Vec<f64> = trace.iter().rev().take(5).rev().cloned().collect();
                return Err(CoreError::SaddleStagnation {
                    iterations: outer_iterations,
                    residual: rel,
                    tol,
                    trace_tail: tail,
                });
            }
            let alpha = rz / psp;
            for i in 0..nc {
                q[i] += alpha * p[i];
                r[i] -= alpha * sp[i];
            }
            NullSpace::MeanZero.project(&mut r);
            precondition(&r, &mut z);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..nc {
                p[i] = z[i] + beta * p[i];
            }
            outer_iterations += 1;
        }
    }
    NullSpace::MeanZero.project(&mut q);

    // final velocity at the converged pressure
    let mut rhs_u = vec![0.0; nf];
    divergence_transpose(&g, &q, &mut rhs_u);
    for i in 0..nf {
        rhs_u[i] = forcing[i] + vol * rhs_u[i];
    }
    let velocity = velocity_solve(&rhs_u)?;

    Ok(SaddleOutcome {
        velocity,
        pressure: q,
        outer_iterations,
        outer_residual: rel,
        inner_iterations: inner_total,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> MacGrid {
        MacGrid {
            nx: 8,
            ny: 8,
            nz: 6,
            dx: 0.125,
            dy: 0.125,
            dz: 1.0 / 6.0,
            beta: 4.0,
        }
    }

    #[test]
    fn laplacian_is_symmetric_and_annihilates_constants() {
        let l = PressureLaplacian { grid: grid() };
        let n = l.dim();
        let ones = vec![1.0; n];
        let mut y = vec![0.0; n];
        l.apply(&ones, &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-12));

        let x: Vec<f64> = (0..n).map(|c| ((c % 13) as f64 - 6.0) / 7.0).collect();
        let z: Vec<f64> = (0..n).map(|c| ((c % 7) as f64 - 3.0) / 5.0).collect();
        let mut lx = vec![0.0; n];
        let mut lz = vec![0.0; n];
        l.apply(&x, &mut lx);
        l.apply(&z, &mut lz);
        let a = dot(&lx, &z);
        let b = dot(&x, &lz);
        assert!((a - b).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn zero_forcing_returns_zeros() {
        let g = grid();
        let op = MomentumOperator::new(g, 1.0, 1.0, 1.0, 0.25);
        let f = vec![0.0; g.face_count()];
        let out = solve_saddle(&op, &f, 1e-10, 100).unwrap();
        assert!(out.velocity.iter().all(|&v| v == 0.0));
        assert!(out.pressure.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn solve_produces_divergence_free_velocity() {
        let g = grid();
        let eps = 0.25;
        let op = MomentumOperator::new(g, 1.0, 1.0, 1.0, eps);
        // forcing f = (sin(pi*y), 0, 0), volume-weighted on interior u-faces
        let mut f = vec![0.0; g.face_count()];
        {
            let (fu, _, _) = g.split_mut(&mut f);
            for k in 0..g.nz {
                for j in 0..g.ny {
                    let y = (j as f64 + 0.5) * g.dy;
                    for i in 1..g.nx {
                        fu[g.iu(i, j, k)] = (std::f64::consts::PI * y).sin() * g.vol();
                    }
                }
            }
        }
        let tol = 1e-9;
        let out = solve_saddle(&op, &f, tol, 300).unwrap();
        let mut div = vec![0.0; g.cell_count()];
        divergence(&g, &out.velocity, &mut div);
        let div_inf = div.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        assert!(div_inf <= 10.0 * tol, "div_inf = {div_inf:.3e}");
        // mean-zero pressure
        let mean = out.pressure.iter().sum::<f64>() / out.pressure.len() as f64;
        assert!(mean.abs() < 1e-12);
        // velocity is nontrivial
        assert!(norm(&out.velocity) > 0.0);
    }
}
