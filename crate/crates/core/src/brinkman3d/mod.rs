//! Coarse 3D solver of the dilated Darcy-Brinkman system on a box, used as
//! the verification oracle for the reduced model.
//!
//! The box is the gap geometry after dividing the vertical coordinate by the
//! slenderness parameter `epsilon`, which moves `epsilon` into the operators:
//! vertical derivatives carry `1/epsilon`, and the momentum equation is
//! scaled by `epsilon^2` so all coefficients stay O(1),
//!
//! ```text
//! -2 mu_eff eps^2 div_eps(D_eps[U]) + (mu/K) U + grad_eps Q = (f', 0),
//! div_eps U = 0,  U = 0 on the whole boundary,
//! ```
//!
//! with `Q = eps^2 p` the scaled pressure (the quantity that stays O(1) as
//! `eps` shrinks). The temperature then solves the scaled heat equation with
//! the dissipation of `U` as source, `T = 0` on top and lateral walls and
//! prescribed flux `-k dT/dz = b` at the bottom.
//!
//! Restrictions: the box has a constant gap. Variable-gap verification is
//! delegated to the closed-form identities of the reduced modules and the
//! per-column ODE oracle.

pub mod diagnostics;
pub mod heat;
pub mod mac;
pub mod momentum;
pub mod saddle;

pub use diagnostics::{
    convergence_study, scaling_diagnostics, vertical_average_pressure, ConvergenceRow,
    ConvergenceStudy, ScalingRow,
};

use crate::error::{CoreError, Result};
use crate::fields::ForcingSpec;
use crate::grid::Grid2D;
use crate::numerics::cg::dot;
use crate::params::PhysicalParams;

use mac::{compute_strain, divergence, strain_norm_squared, MacGrid};
use momentum::MomentumOperator;

/// Configuration of one dilated solve.
#[derive(Debug, Clone, Copy)]
pub struct DilatedConfig {
    pub epsilon: f64,
    /// Base grid on omega; the 3D grid stacks `nz` cells over it.
    pub grid: Grid2D,
    /// Constant gap height of the box.
    pub gap_height: f64,
    pub nz: usize,
    pub params: PhysicalParams,
    pub forcing: ForcingSpec,
    /// Relative tolerance of the pressure (outer) iteration.
    pub tol: f64,
    pub outer_maxit: usize,
}

impl DilatedConfig {
    pub fn new(
        epsilon: f64,
        grid: Grid2D,
        gap_height: f64,
        nz: usize,
        params: PhysicalParams,
        forcing: ForcingSpec,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(CoreError::OutOfRange {
                name: "epsilon",
                value: epsilon,
                lo: 0.0,
                hi: 1.0,
            });
        }
        if !(gap_height > 0.0 && gap_height.is_finite()) {
            return Err(CoreError::NonPositiveParameter {
                name: "gap_height",
                value: gap_height,
            });
        }
        if nz < 2 {
            return Err(CoreError::InvalidConfig {
                context: format!("nz must be >= 2, got {nz}"),
            });
        }
        Ok(Self {
            epsilon,
            grid,
            gap_height,
            nz,
            params,
            forcing,
            tol: 1e-8,
            outer_maxit: 500,
        })
    }

    pub fn with_tolerances(mut self, tol: f64, outer_maxit: usize) -> Self {
        self.tol = tol;
        self.outer_maxit = outer_maxit;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn mac(&self) -> MacGrid {
        MacGrid {
            nx: self.grid.nx,
            ny: self.grid.ny,
            nz: self.nz,
            dx: self.grid.dx,
            dy: self.grid.dy,
            dz: self.gap_height / self.nz as f64,
            beta: 1.0 / self.epsilon,
        }
    }
}

/// Discrete energy balance of a solve: the viscous and Darcy energies must
/// add up to the work of the forcing, up to solver residuals.
#[derive(Debug, Clone, Copy)]
pub struct EnergyReport {
    /// 2 mu_eff eps^2 ||D_eps U||^2.
    pub viscous: f64,
    /// (mu/K) ||U||^2.
    pub darcy: f64,
    /// (f', U').
    pub forcing_work: f64,
    pub relative_error: f64,
}

/// Solved state of the dilated system.
#[derive(Debug, Clone)]
pub struct DilatedSolution {
    pub config: DilatedConfig,
    /// Face velocities (including zero boundary faces).
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    /// Scaled pressure at cell centers, zero mean.
    pub q: Vec<f64>,
    /// Temperature at cell centers.
    pub temperature: Vec<f64>,
    pub div_inf: f64,
    pub outer_iterations: usize,
    pub heat_iterations: usize,
    pub energy: EnergyReport,
}

impl DilatedSolution {
    pub fn mac(&self) -> MacGrid {
        self.config.mac()
    }

    pub(crate) fn packed_velocity(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.u.len() + self.v.len() + self.w.len());
        x.extend_from_slice(&self.u);
        x.extend_from_slice(&self.v);
        x.extend_from_slice(&self.w);
        x
    }

    /// Face velocities averaged to cell centers (midpoint sampling).
    pub fn cell_center_velocity(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let g = self.mac();
        let n = g.cell_count();
        let (mut uc, mut vc, mut wc) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let c = g.ic(i, j, k);
                    uc[c] = 0.5 * (self.u[g.iu(i, j, k)] + self.u[g.iu(i + 1, j, k)]);
                    vc[c] = 0.5 * (self.v[g.iv(i, j, k)] + self.v[g.iv(i, j + 1, k)]);
                    wc[c] = 0.5 * (self.w[g.iw(i, j, k)] + self.w[g.iw(i, j, k + 1)]);
                }
            }
        }
        (uc, vc, wc)
    }
}

/// Volume-weighted forcing on interior faces; the planar forcing is sampled
/// at face centers and is independent of the vertical coordinate.
fn assemble_forcing(g: &MacGrid, grid: &Grid2D, forcing: &ForcingSpec) -> Vec<f64> {
    let mut f = vec![0.0; g.face_count()];
    let vol = g.vol();
    {
        let (fu, fv, _) = g.split_mut(&mut f);
        for j in 0..g.ny {
            let y = grid.y_center(j);
            for i in 1..g.nx {
                let x = i as f64 * g.dx;
                let (fx, _) = forcing.eval(x, y);
                let val = fx * vol;
                for k in 0..g.nz {
                    fu[g.iu(i, j, k)] = val;
                }
            }
        }
        for j in 1..g.ny {
            let y = j as f64 * g.dy;
            for i in 0..g.nx {
                let x = grid.x_center(i);
                let (_, fy) = forcing.eval(x, y);
                let val = fy * vol;
                for k in 0..g.nz {
                    fv[g.iv(i, j, k)] = val;
                }
            }
        }
    }
    f
}

/// Solves the dilated momentum/continuity system and then the heat equation.
pub fn solve_dilated(config: &DilatedConfig) -> Result<DilatedSolution> {
    let g = config.mac();
    let p = &config.params;
    let momentum = MomentumOperator::new(g, p.mu, p.mu_eff, p.permeability, config.epsilon);
    let f = assemble_forcing(&g, &config.grid, &config.forcing);

    let outcome = saddle::solve_saddle(&momentum, &f, config.tol, config.outer_maxit)?;

    let mut div = vec![0.0; g.cell_count()];
    divergence(&g, &outcome.velocity, &mut div);
    let div_inf = div.iter().fold(0.0f64, |a, &v| a.max(v.abs()));

    let strain = compute_strain(&g, &outcome.velocity);
    let viscous = momentum.visc * strain_norm_squared(&g, &strain);
    let darcy = momentum.darcy_vol * dot(&outcome.velocity, &outcome.velocity);
    let forcing_work = dot(&f, &outcome.velocity);
    let scale = viscous + darcy;
    let energy = EnergyReport {
        viscous,
        darcy,
        forcing_work,
        relative_error: if scale > 0.0 {
            (viscous + darcy - forcing_work).abs() / scale
        } else {
            0.0
        },
    };

    let phi = heat::dissipation_at_centers(
        &g,
        &outcome.velocity,
        &strain,
        p.mu,
        p.mu_eff,
        p.permeability,
        config.epsilon,
    );
    let heat_tol = config.tol.min(1e-10);
    let (temperature, heat_report) = heat::solve_heat(
        &g,
        p.conductivity,
        config.epsilon,
        &phi,
        p.bottom_flux,
        heat_tol,
        20 * g.cell_count().max(1_000),
    )?;

    let (u, rest) = outcome.velocity.split_at(g.nu());
    let (v, w) = rest.split_at(g.nv());
    Ok(DilatedSolution {
        config: *config,
        u: u.to_vec(),
        v: v.to_vec(),
        w: w.to_vec(),
        q: outcome.pressure,
        temperature,
        div_inf,
        outer_iterations: outcome.outer_iterations,
        heat_iterations: heat_report.iterations,
        energy,
    })
}
