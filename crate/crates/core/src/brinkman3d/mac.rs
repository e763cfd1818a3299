//! Staggered (MAC) layout on the dilated box: pressure and temperature at
//! cell centers, velocity components on faces. Boundary faces are stored but
//! pinned to zero (no-slip on the whole boundary), and wall-adjacent strain
//! entries use the half-spacing one-sided difference to the wall value.
//!
//! Vertical derivatives carry the dilation weight `beta = 1/epsilon`; the
//! discrete strain, divergence and gradient below are exact adjoints of one
//! another under the uniform cell-volume inner product.

/// Geometry and dilation weight of the staggered box.
#[derive(Debug, Clone, Copy)]
pub struct MacGrid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    /// 1/epsilon.
    pub beta: f64,
}

impl MacGrid {
    pub fn cell_count(&self) -> usize {
        self.nx * self.ny * self.nz
    }
    pub fn nu(&self) -> usize {
        (self.nx + 1) * self.ny * self.nz
    }
    pub fn nv(&self) -> usize {
        self.nx * (self.ny + 1) * self.nz
    }
    pub fn nw(&self) -> usize {
        self.nx * self.ny * (self.nz + 1)
    }
    pub fn face_count(&self) -> usize {
        self.nu() + self.nv() + self.nw()
    }
    #[inline]
    pub fn vol(&self) -> f64 {
        self.dx * self.dy * self.dz
    }

    #[inline]
    pub fn iu(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * (self.nx + 1) + i
    }
    #[inline]
    pub fn iv(&self, i: usize, j: usize, k: usize) -> usize {
        (k * (self.ny + 1) + j) * self.nx + i
    }
    #[inline]
    pub fn iw(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * self.nx + i
    }
    #[inline]
    pub fn ic(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * self.nx + i
    }
    // strain-entry layouts
    #[inline]
    pub fn i12(&self, i: usize, j: usize, k: usize) -> usize {
        (k * (self.ny + 1) + j) * (self.nx + 1) + i
    }
    #[inline]
    pub fn i13(&self, i: usize, j: usize, k: usize) -> usize {
        (k * self.ny + j) * (self.nx + 1) + i
    }
    #[inline]
    pub fn i23(&self, i: usize, j: usize, k: usize) -> usize {
        (k * (self.ny + 1) + j) * self.nx + i
    }

    /// Quadrature weight of a node position along an axis of n cells.
    #[inline]
    pub fn node_weight(pos: usize, n: usize) -> f64 {
        if pos == 0 || pos == n {
            0.5
        } else {
            1.0
        }
    }

    /// Splits a packed face vector into (u, v, w) slices.
    pub fn split<'a>(&self, x: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64]) {
        let (u, rest) = x.split_at(self.nu());
        let (v, w) = rest.split_at(self.nv());
        (u, v, w)
    }

    pub fn split_mut<'a>(&self, x: &'a mut [f64]) -> (&'a mut [f64], &'a mut [f64], &'a mut [f64]) {
        let (u, rest) = x.split_at_mut(self.nu());
        let (v, w) = rest.split_at_mut(self.nv());
        (u, v, w)
    }

    /// Zeroes the no-slip boundary faces of a packed vector.
    pub fn zero_boundary_faces(&self, x: &mut [f64]) {
        let (nx, ny, nz) = (self.nx, self.ny, self.nz);
        let (u, v, w) = self.split_mut(x);
        for k in 0..nz {
            for j in 0..ny {
                u[self.iu(0, j, k)] = 0.0;
                u[self.iu(nx, j, k)] = 0.0;
            }
        }
        for k in 0..nz {
            for i in 0..nx {
                v[self.iv(i, 0, k)] = 0.0;
                v[self.iv(i, ny, k)] = 0.0;
            }
        }
        for j in 0..ny {
            for i in 0..nx {
                w[self.iw(i, j, 0)] = 0.0;
                w[self.iw(i, j, nz)] = 0.0;
            }
        }
    }
}

/// The six independent entries of the dilation-weighted symmetric gradient.
#[derive(Debug, Clone)]
pub struct Strain {
    pub d11: Vec<f64>,
    pub d22: Vec<f64>,
    pub d33: Vec<f64>,
    pub d12: Vec<f64>,
    pub d13: Vec<f64>,
    pub d23: Vec<f64>,
}

/// Evaluates all strain entries of a packed velocity vector.
pub fn compute_strain(g: &MacGrid, x: &[f64]) -> Strain {
    let (u, v, w) = g.split(x);
    let (nx, ny, nz) = (g.nx, g.ny, g.nz);
    let (dx, dy, dz) = (g.dx, g.dy, g.dz);
    let beta = g.beta;

    let mut d11 = vec![0.0; g.cell_count()];
    let mut d22 = vec![0.0; g.cell_count()];
    let mut d33 = vec![0.0; g.cell_count()];
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let c = g.ic(i, j, k);
                d11[c] = (u[g.iu(i + 1, j, k)] - u[g.iu(i, j, k)]) / dx;
                d22[c] = (v[g.iv(i, j + 1, k)] - v[g.iv(i, j, k)]) / dy;
                d33[c] = beta * (w[g.iw(i, j, k + 1)] - w[g.iw(i, j, k)]) / dz;
            }
        }
    }

    // one-sided half-spacing differences at walls (wall value = 0)
    let dtan = |lo: f64, hi: f64, pos: usize, n: usize, d: f64| -> f64 {
        if pos == 0 {
            2.0 * hi / d
        } else if pos == n {
            -2.0 * lo / d
        } else {
            (hi - lo) / d
        }
    };

    let mut d12 = vec![0.0; (nx + 1) * (ny + 1) * nz];
    for k in 0..nz {
        for j in 0..=ny {
            for i in 0..=nx {
                let du_dy = dtan(
                    if j > 0 { u[g.iu(i, j - 1, k)] } else { 0.0 },
                    if j < ny { u[g.iu(i, j, k)] } else { 0.0 },
                    j,
                    ny,
                    dy,
                );
                let dv_dx = dtan(
                    if i > 0 { v[g.iv(i - 1, j, k)] } else { 0.0 },
                    if i < nx { v[g.iv(i, j, k)] } else { 0.0 },
                    i,
                    nx,
                    dx,
                );
                d12[g.i12(i, j, k)] = 0.5 * (du_dy + dv_dx);
            }
        }
    }

    let mut d13 = vec![0.0; (nx + 1) * ny * (nz + 1)];
    for k in 0..=nz {
        for j in 0..ny {
            for i in 0..=nx {
                let du_dz = dtan(
                    if k > 0 { u[g.iu(i, j, k - 1)] } else { 0.0 },
                    if k < nz { u[g.iu(i, j, k)] } else { 0.0 },
                    k,
                    nz,
                    dz,
                );
                let dw_dx = dtan(
                    if i > 0 { w[g.iw(i - 1, j, k)] } else { 0.0 },
                    if i < nx { w[g.iw(i, j, k)] } else { 0.0 },
                    i,
                    nx,
                    dx,
                );
                d13[g.i13(i, j, k)] = 0.5 * (beta * du_dz + dw_dx);
            }
        }
    }

    let mut d23 = vec![0.0; nx * (ny + 1) * (nz + 1)];
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..nx {
                let dv_dz = dtan(
                    if k > 0 { v[g.iv(i, j, k - 1)] } else { 0.0 },
                    if k < nz { v[g.iv(i, j, k)] } else { 0.0 },
                    k,
                    nz,
                    dz,
                );
                let dw_dy = dtan(
                    if j > 0 { w[g.iw(i, j - 1, k)] } else { 0.0 },
                    if j < ny { w[g.iw(i, j, k)] } else { 0.0 },
                    j,
                    ny,
                    dy,
                );
                d23[g.i23(i, j, k)] = 0.5 * (beta * dv_dz + dw_dy);
            }
        }
    }

    Strain {
        d11,
        d22,
        d33,
        d12,
        d13,
        d23,
    }
}

/// Quadrature of the squared Frobenius norm of the dilation-weighted strain;
/// the same weights back the momentum operator, so the discrete energy
/// identity holds to solver accuracy.
pub fn strain_norm_squared(g: &MacGrid, s: &Strain) -> f64 {
    let vol = g.vol();
    let mut acc = 0.0;
    for c in 0..g.cell_count() {
        acc += vol * (s.d11[c] * s.d11[c] + s.d22[c] * s.d22[c] + s.d33[c] * s.d33[c]);
    }
    for k in 0..g.nz {
        for j in 0..=g.ny {
            for i in 0..=g.nx {
                let w = 2.0 * vol * MacGrid::node_weight(i, g.nx) * MacGrid::node_weight(j, g.ny);
                let v = s.d12[g.i12(i, j, k)];
                acc += w * v * v;
            }
        }
    }
    for k in 0..=g.nz {
        for j in 0..g.ny {
            for i in 0..=g.nx {
                let w = 2.0 * vol * MacGrid::node_weight(i, g.nx) * MacGrid::node_weight(k, g.nz);
                let v = s.d13[g.i13(i, j, k)];
                acc += w * v * v;
            }
        }
    }
    for k in 0..=g.nz {
        for j in 0..=g.ny {
            for i in 0..g.nx {
                let w = 2.0 * vol * MacGrid::node_weight(j, g.ny) * MacGrid::node_weight(k, g.nz);
                let v = s.d23[g.i23(i, j, k)];
                acc += w * v * v;
            }
        }
    }
    acc
}

/// Same quadrature restricted to the vertical-derivative block
/// (the entries built from `beta * d/dz`), for the shear-split diagnostic.
pub fn vertical_strain_norm_squared(g: &MacGrid, x: &[f64]) -> f64 {
    let (u, v, w) = g.split(x);
    let vol = g.vol();
    let beta = g.beta;
    let mut acc = 0.0;
    // (1/2) beta du/dz entries at the d13 positions, multiplicity 2
    for k in 0..=g.nz {
        for j in 0..g.ny {
            for i in 0..=g.nx {
                let du_dz = if k == 0 {
                    2.0 * u[g.iu(i, j, 0)] / g.dz
                } else if k == g.nz {
                    -2.0 * u[g.iu(i, j, g.nz - 1)] / g.dz
                } else {
                    (u[g.iu(i, j, k)] - u[g.iu(i, j, k - 1)]) / g.dz
                };
                let wgt = 2.0 * vol * MacGrid::node_weight(i, g.nx) * MacGrid::node_weight(k, g.nz);
                let e = 0.5 * beta * du_dz;
                acc += wgt * e * e;
            }
        }
    }
    for k in 0..=g.nz {
        for j in 0..=g.ny {
            for i in 0..g.nx {
                let dv_dz = if k == 0 {
                    2.0 * v[g.iv(i, j, 0)] / g.dz
                } else if k == g.nz {
                    -2.0 * v[g.iv(i, j, g.nz - 1)] / g.dz
                } else {
                    (v[g.iv(i, j, k)] - v[g.iv(i, j, k - 1)]) / g.dz
                };
                let wgt = 2.0 * vol * MacGrid::node_weight(j, g.ny) * MacGrid::node_weight(k, g.nz);
                let e = 0.5 * beta * dv_dz;
                acc += wgt * e * e;
            }
        }
    }
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                let d33 = beta * (w[g.iw(i, j, k + 1)] - w[g.iw(i, j, k)]) / g.dz;
                acc += vol * d33 * d33;
            }
        }
    }
    acc
}

/// Dilation-weighted divergence at cell centers.
pub fn divergence(g: &MacGrid, x: &[f64], out: &mut [f64]) {
    let (u, v, w) = g.split(x);
    for k in 0..g.nz {
        for j in 0..g.ny {
            for i in 0..g.nx {
                out[g.ic(i, j, k)] = (u[g.iu(i + 1, j, k)] - u[g.iu(i, j, k)]) / g.dx
                    + (v[g.iv(i, j + 1, k)] - v[g.iv(i, j, k)]) / g.dy
                    + g.beta * (w[g.iw(i, j, k + 1)] - w[g.iw(i, j, k)]) / g.dz;
            }
        }
    }
}

/// Exact transpose of [`divergence`]: cell values to interior faces
/// (minus the dilation-weighted gradient). Boundary faces receive zero.
pub fn divergence_transpose(g: &MacGrid, q: &[f64], out: &mut [f64]) {
    out.fill(0.0);
    let (nx, ny, nz) = (g.nx, g.ny, g.nz);
    {
        let (u, v, w) = g.split_mut(out);
        for k in 0..nz {
            for j in 0..ny {
                for i in 1..nx {
                    u[g.iu(i, j, k)] = (q[g.ic(i - 1, j, k)] - q[g.ic(i, j, k)]) / g.dx;
                }
            }
        }
        for k in 0..nz {
            for j in 1..ny {
                for i in 0..nx {
                    v[g.iv(i, j, k)] = (q[g.ic(i, j - 1, k)] - q[g.ic(i, j, k)]) / g.dy;
                }
            }
        }
        for k in 1..nz {
            for j in 0..ny {
                for i in 0..nx {
                    w[g.iw(i, j, k)] = g.beta * (q[g.ic(i, j, k - 1)] - q[g.ic(i, j, k)]) / g.dz;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn test_grid() -> MacGrid {
        MacGrid {
            nx: 5,
            ny: 4,
            nz: 3,
            dx: 1.0 / 5.0,
            dy: 1.0 / 4.0,
            dz: 1.0 / 3.0,
            beta: 4.0,
        }
    }

    pub(crate) fn random_interior(g: &MacGrid, seed: u64) -> Vec<f64> {
        // tiny deterministic LCG; no external RNG needed here
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
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
    fn divergence_and_transpose_are_adjoint() {
        let g = test_grid();
        let x = random_interior(&g, 7);
        let q: Vec<f64> = (0..g.cell_count())
            .map(|c| ((c * 37 + 11) % 17) as f64 / 17.0 - 0.4)
            .collect();
        let mut div = vec![0.0; g.cell_count()];
        divergence(&g, &x, &mut div);
        let lhs: f64 = div.iter().zip(&q).map(|(a, b)| a * b).sum();
        let mut dt = vec![0.0; g.face_count()];
        divergence_transpose(&g, &q, &mut dt);
        let rhs: f64 = dt.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!(
            (lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
    }

    #[test]
    fn strain_vanishes_on_zero_field_and_scales_linearly() {
        let g = test_grid();
        let zero = vec![0.0; g.face_count()];
        let s = compute_strain(&g, &zero);
        assert!(strain_norm_squared(&g, &s) == 0.0);

        let x = random_interior(&g, 3);
        let mut x2 = x.clone();
        for v in &mut x2 {
            *v *= 2.0;
        }
        let e1 = strain_norm_squared(&g, &compute_strain(&g, &x));
        let e2 = strain_norm_squared(&g, &compute_strain(&g, &x2));
        assert!((e2 - 4.0 * e1).abs() < 1e-12 * e2);
    }

    #[test]
    fn vertical_block_is_dominated_by_shear_for_flat_profiles() {
        // u = z-parabola profile, v = w = 0: all strain is (1/2) beta du/dz
        let g = test_grid();
        let mut x = vec![0.0; g.face_count()];
        {
            let (u, _, _) = g.split_mut(&mut x);
            for k in 0..g.nz {
                let z = (k as f64 + 0.5) * g.dz;
                for j in 0..g.ny {
                    for i in 1..g.nx {
                        u[g.iu(i, j, k)] = z * (1.0 - z);
                    }
                }
            }
        }
        let total = strain_norm_squared(&g, &compute_strain(&g, &x));
        let vert = vertical_strain_norm_squared(&g, &x);
        assert!(vert > 0.5 * total, "vert {vert} vs total {total}");
        assert!(vert <= total * (1.0 + 1e-12));
    }
}
