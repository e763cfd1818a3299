//! Momentum operator of the slenderness-scaled dilated system,
//!
//! ```text
//! A U = -2 mu_eff eps^2 div_eps(D_eps[U]) + (mu/K) U   (volume-weighted rows)
//! ```
//!
//! assembled matrix-free as `G^T W G + (mu/K) vol I` where `G` maps face
//! velocities to the weighted strain entries and `W` holds the quadrature
//! weights of [`super::mac::strain_norm_squared`]. The gather form below is
//! the exact transpose of the strain evaluation, so `(A x, x)` reproduces
//! the viscous energy + Darcy energy identically and the operator is
//! symmetric positive definite on the interior faces.

use super::mac::{compute_strain, MacGrid, Strain};
use crate::numerics::LinearOperator;

pub struct MomentumOperator {
    pub grid: MacGrid,
    /// 2 * mu_eff * eps^2.
    pub visc: f64,
    /// (mu / K) * cell volume.
    pub darcy_vol: f64,
}

#[inline]
fn edge_coeff(at_wall: bool) -> f64 {
    if at_wall {
        2.0
    } else {
        1.0
    }
}

impl MomentumOperator {
    pub fn new(grid: MacGrid, mu: f64, mu_eff: f64, permeability: f64, epsilon: f64) -> Self {
        Self {
            grid,
            visc: 2.0 * mu_eff * epsilon * epsilon,
            darcy_vol: mu / permeability * grid.vol(),
        }
    }

    /// Diagonal of the operator, for Jacobi preconditioning.
    pub fn diagonal(&self) -> Vec<f64> {
        let g = &self.grid;
        let (nx, ny, nz) = (g.nx, g.ny, g.nz);
        let vol = g.vol();
        let (dx, dy, dz) = (g.dx, g.dy, g.dz);
        let beta = g.beta;
        let mut diag = vec![1.0; g.face_count()];

        let w12 = |i: usize, j: usize| {
            2.0 * vol * MacGrid::node_weight(i, nx) * MacGrid::node_weight(j, ny)
        };
        let w13 = |i: usize, k: usize| {
            2.0 * vol * MacGrid::node_weight(i, nx) * MacGrid::node_weight(k, nz)
        };
        let w23 = |j: usize, k: usize| {
            2.0 * vol * MacGrid::node_weight(j, ny) * MacGrid::node_weight(k, nz)
        };

        {
            let (du, dv, dw) = g.split_mut(&mut diag);
            for k in 0..nz {
                for j in 0..ny {
                    for i in 1..nx {
                        let mut a = self.darcy_vol + self.visc * 2.0 * vol / (dx * dx);
                        let clo = 0.5 * edge_coeff(j == 0) / dy;
                        let chi = 0.5 * edge_coeff(j + 1 == ny) / dy;
                        a += self.visc * (w12(i, j) * clo * clo + w12(i, j + 1) * chi * chi);
                        let zlo = 0.5 * beta * edge_coeff(k == 0) / dz;
                        let zhi = 0.5 * beta * edge_coeff(k + 1 == nz) / dz;
                        a += self.visc * (w13(i, k) * zlo * zlo + w13(i, k + 1) * zhi * zhi);
                        du[g.iu(i, j, k)] = a;
                    }
                }
            }
            for k in 0..nz {
                for j in 1..ny {
                    for i in 0..nx {
                        let mut a = self.darcy_vol + self.visc * 2.0 * vol / (dy * dy);
                        let clo = 0.5 * edge_coeff(i == 0) / dx;
                        let chi = 0.5 * edge_coeff(i + 1 == nx) / dx;
                        a += self.visc * (w12(i, j) * clo * clo + w12(i + 1, j) * chi * chi);
                        let zlo = 0.5 * beta * edge_coeff(k == 0) / dz;
                        let zhi = 0.5 * beta * edge_coeff(k + 1 == nz) / dz;
                        a += self.visc * (w23(j, k) * zlo * zlo + w23(j, k + 1) * zhi * zhi);
                        dv[g.iv(i, j, k)] = a;
                    }
                }
            }
            for k in 1..nz {
                for j in 0..ny {
                    for i in 0..nx {
                        let mut a =
                            self.darcy_vol + self.visc * 2.0 * vol * beta * beta / (dz * dz);
                        let clo = 0.5 * edge_coeff(i == 0) / dx;
                        let chi = 0.5 * edge_coeff(i + 1 == nx) / dx;
                        a += self.visc * (w13(i, k) * clo * clo + w13(i + 1, k) * chi * chi);
                        let ylo = 0.5 * edge_coeff(j == 0) / dy;
                        let yhi = 0.5 * edge_coeff(j + 1 == ny) / dy;
                        a += self.visc * (w23(j, k) * ylo * ylo + w23(j + 1, k) * yhi * yhi);
                        dw[g.iw(i, j, k)] = a;
                    }
                }
            }
        }
        diag
    }
}

impl LinearOperator for MomentumOperator {
    fn dim(&self) -> usize {
        self.grid.face_count()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let g = &self.grid;
        let s: Strain = compute_strain(g, x);
        let (nx, ny, nz) = (g.nx, g.ny, g.nz);
        let vol = g.vol();
        let (dx, dy, dz) = (g.dx, g.dy, g.dz);
        let beta = g.beta;
        let visc = self.visc;

        let w12 = |i: usize, j: usize| {
            2.0 * vol * MacGrid::node_weight(i, nx) * MacGrid::node_weight(j, ny)
        };
        let w13 = |i: usize, k: usize| {
            2.0 * vol * MacGrid::node_weight(i, nx) * MacGrid::node_weight(k, nz)
        };
        let w23 = |j: usize, k: usize| {
            2.0 * vol * MacGrid::node_weight(j, ny) * MacGrid::node_weight(k, nz)
        };

        y.fill(0.0);
        let (xu, xv, xw) = g.split(x);
        let (yu, yv, yw) = g.split_mut(y);

        for k in 0..nz {
            for j in 0..ny {
                for i in 1..nx {
                    let mut acc = self.darcy_vol * xu[g.iu(i, j, k)];
                    acc += visc * vol * (s.d11[g.ic(i - 1, j, k)] - s.d11[g.ic(i, j, k)]) / dx;
                    let clo = 0.5 * edge_coeff(j == 0) / dy;
                    let chi = 0.5 * edge_coeff(j + 1 == ny) / dy;
                    acc += visc
                        * (w12(i, j) * s.d12[g.i12(i, j, k)] * clo
                            - w12(i, j + 1) * s.d12[g.i12(i, j + 1, k)] * chi);
                    let zlo = 0.5 * beta * edge_coeff(k == 0) / dz;
                    let zhi = 0.5 * beta * edge_coeff(k + 1 == nz) / dz;
                    acc += visc
                        * (w13(i, k) * s.d13[g.i13(i, j, k)] * zlo
                            - w13(i, k + 1) * s.d13[g.i13(i, j, k + 1)] * zhi);
                    yu[g.iu(i, j, k)] = acc;
                }
            }
        }

        for k in 0..nz {
            for j in 1..ny {
                for i in 0..nx {
                    let mut acc = self.darcy_vol * xv[g.iv(i, j, k)];
                    acc += visc * vol * (s.d22[g.ic(i, j - 1, k)] - s.d22[g.ic(i, j, k)]) / dy;
                    let clo = 0.5 * edge_coeff(i == 0) / dx;
                    let chi = 0.5 * edge_coeff(i + 1 == nx) / dx;
                    acc += visc
                        * (w12(i, j) * s.d12[g.i12(i, j, k)] * clo
                            - w12(i + 1, j) * s.d12[g.i12(i + 1, j, k)] * chi);
                    let zlo = 0.5 * beta * edge_coeff(k == 0) / dz;
                    let zhi = 0.5 * beta * edge_coeff(k + 1 == nz) / dz;
                    acc += visc
                        * (w23(j, k) * s.d23[g.i23(i, j, k)] * zlo
                            - w23(j, k + 1) * s.d23[g.i23(i, j, k + 1)] * zhi);
                    yv[g.iv(i, j, k)] = acc;
                }
            }
        }

        for k in 1..nz {
            for j in 0..ny {
                for i in 0..nx {
                    let mut acc = self.darcy_vol * xw[g.iw(i, j, k)];
                    acc +=
                        visc * vol * beta * (s.d33[g.ic(i, j, k - 1)] - s.d33[g.ic(i, j, k)]) / dz;
                    let clo = 0.5 * edge_coeff(i == 0) / dx;
                    let chi = 0.5 * edge_coeff(i + 1 == nx) / dx;
                    acc += visc
                        * (w13(i, k) * s.d13[g.i13(i, j, k)] * clo
                            - w13(i + 1, k) * s.d13[g.i13(i + 1, j, k)] * chi);
                    let ylo = 0.5 * edge_coeff(j == 0) / dy;
                    let yhi = 0.5 * edge_coeff(j + 1 == ny) / dy;
                    acc += visc
                        * (w23(j, k) * s.d23[g.i23(i, j, k)] * ylo
                            - w23(j + 1, k) * s.d23[g.i23(i, j + 1, k)] * yhi);
                    yw[g.iw(i, j, k)] = acc;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brinkman3d::mac::strain_norm_squared;
    use crate::numerics::cg::dot;

    fn test_grid() -> MacGrid {
        MacGrid {
            nx: 5,
            ny: 4,
            nz: 3,
            dx: 0.2,
            dy: 0.25,
            dz: 1.0 / 3.0,
            beta: 4.0,
        }
    }

    fn random_interior(g: &MacGrid, seed: u64) -> Vec<f64> {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut x: Vec<f64> = (0..g.face_count()).map(|_| next()).collect();
        g.zero_boundary_faces(&mut x);
        x
    }

    #[test]
    fn operator_is_symmetric() {
        let g = test_grid();
        let op = MomentumOperator::new(g, 1.0, 0.7, 0.5, 0.25);
        let x = random_interior(&g, 1);
        let y = random_interior(&g, 2);
        let mut ax = vec![0.0; g.face_count()];
        let mut ay = vec![0.0; g.face_count()];
        op.apply(&x, &mut ax);
        op.apply(&y, &mut ay);
        let lhs = dot(&ax, &y);
        let rhs = dot(&x, &ay);
        assert!(
            (lhs - rhs).abs() < 1e-11 * lhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn quadratic_form_reproduces_the_energy() {
        let g = test_grid();
        let (mu, mu_eff, perm, eps) = (1.3, 0.7, 0.5, 0.25);
        let op = MomentumOperator::new(g, mu, mu_eff, perm, eps);
        let x = random_interior(&g, 9);
        let mut ax = vec![0.0; g.face_count()];
        op.apply(&x, &mut ax);
        let quad_form = dot(&ax, &x);
        let energy = 2.0 * mu_eff * eps * eps * strain_norm_squared(&g, &compute_strain(&g, &x))
            + mu / perm * g.vol() * dot(&x, &x);
        assert!(
            (quad_form - energy).abs() < 1e-11 * energy,
            "{quad_form} vs {energy}"
        );
        assert!(quad_form > 0.0);
    }

    #[test]
    fn diagonal_matches_basis_probes() {
        let g = MacGrid {
            nx: 3,
            ny: 3,
            nz: 2,
            dx: 1.0 / 3.0,
            dy: 1.0 / 3.0,
            dz: 0.5,
            beta: 2.0,
        };
        let op = MomentumOperator::new(g, 1.0, 1.0, 1.0, 0.5);
        let diag = op.diagonal();
        let mut e = vec![0.0; g.face_count()];
        let mut ae = vec![0.0; g.face_count()];
        // probe a few interior basis vectors of each component
        let probes = [
            g.iu(1, 1, 0),
            g.iu(2, 0, 1),
            g.nu() + g.iv(0, 1, 1),
            g.nu() + g.nv() + g.iw(1, 2, 1),
        ];
        for &p in &probes {
            e.fill(0.0);
            e[p] = 1.0;
            op.apply(&e, &mut ae);
            assert!(
                (ae[p] - diag[p]).abs() < 1e-12 * diag[p].abs(),
                "slot {p}: {} vs {}",
                ae[p],
                diag[p]
            );
        }
    }
}
