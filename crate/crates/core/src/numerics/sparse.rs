use rayon::prelude::*;

use crate::error::{CoreError, Result};

/// Operators usable by the Krylov solvers; implemented by [`CsrMatrix`] and by
/// the matrix-free operators of the 3D solver.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Compressed sparse row matrix with sorted column indices per row.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub row_offsets: Vec<usize>,
    pub col_indices: Vec<usize>,
    pub values: Vec<f64>,
    pub symmetric: bool,
}

impl CsrMatrix {
    /// Builds from (row, col, value) triplets; duplicate entries are summed.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &mut Vec<(usize, usize, f64)>,
        symmetric: bool,
    ) -> Result<Self> {
        for &(r, c, _) in triplets.iter() {
            if r >= nrows || c >= ncols {
                return Err(CoreError::Assembly {
                    context: format!("triplet ({r}, {c}) out of {nrows}x{ncols}"),
                });
            }
        }
        triplets.sort_unstable_by_key(|t| (t.0, t.1));
        let mut rows = Vec::with_capacity(triplets.len());
        let mut col_indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets.iter() {
            if rows.last() == Some(&r) && col_indices.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                col_indices.push(c);
                values.push(v);
            }
        }
        let mut row_offsets = vec![0usize; nrows + 1];
        for &r in &rows {
            row_offsets[r + 1] += 1;
        }
        for r in 0..nrows {
            row_offsets[r + 1] += row_offsets[r];
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
            symmetric,
        })
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.nrows];
        for r in 0..self.nrows {
            for idx in self.row_offsets[r]..self.row_offsets[r + 1] {
                if self.col_indices[idx] == r {
                    d[r] += self.values[idx];
                }
            }
        }
        d
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        self.values[self.row_offsets[r]..self.row_offsets[r + 1]]
            .iter()
            .sum()
    }

    /// Spot-checks value symmetry `a_ij == a_ji` on up to `samples` entries.
    pub fn verify_symmetry(&self, samples: usize, tol: f64) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        let total = self.col_indices.len();
        if total == 0 {
            return true;
        }
        let step = (total / samples.max(1)).max(1);
        for r in 0..self.nrows {
            let mut idx = self.row_offsets[r];
            while idx < self.row_offsets[r + 1] {
                if idx % step == 0 {
                    let c = self.col_indices[idx];
                    let v = self.values[idx];
                    let vt = self.get(c, r);
                    let scale = v.abs().max(vt.abs()).max(1.0);
                    if (v - vt).abs() > tol * scale {
                        return false;
                    }
                }
                idx += 1;
            }
        }
        true
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let lo = self.row_offsets[r];
        let hi = self.row_offsets[r + 1];
        match self.col_indices[lo..hi].binary_search(&c) {
            Ok(k) => self.values[lo + k],
            Err(_) => 0.0,
        }
    }

    /// Dense copy, for direct-solve test oracles on small systems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.ncols]; self.nrows];
        for r in 0..self.nrows {
            for idx in self.row_offsets[r]..self.row_offsets[r + 1] {
                a[r][self.col_indices[idx]] += self.values[idx];
            }
        }
        a
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.nrows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        // Row-parallel product; each row accumulates sequentially, so the
        // result does not depend on the thread count.
        y.par_iter_mut().enumerate().for_each(|(r, yr)| {
            let mut acc = 0.0;
            for idx in self.row_offsets[r]..self.row_offsets[r + 1] {
                acc += self.values[idx] * x[self.col_indices[idx]];
            }
            *yr = acc;
        });
    }
}
