use crate::error::{CoreError, Result};

/// Uniform cell-centered grid on the rectangle omega = (0, lx) x (0, ly).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(CoreError::InvalidConfig {
                context: format!("cell counts must be >= 2, got nx = {nx}, ny = {ny}"),
            });
        }
        if !(lx > 0.0 && lx.is_finite()) {
            return Err(CoreError::NonPositiveParameter {
                name: "lx",
                value: lx,
            });
        }
        if !(ly > 0.0 && ly.is_finite()) {
            return Err(CoreError::NonPositiveParameter {
                name: "ly",
                value: ly,
            });
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            dx: lx / nx as f64,
            dy: ly / ny as f64,
        })
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    /// Linear index of cell (i, j); x varies fastest.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn y_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dy
    }

    /// Cell area dx * dy.
    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }
}

/// Closed enumeration of gap-function shapes, so geometry is reproducible
/// from configuration text alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapSpec {
    /// h = c.
    Constant(f64),
    /// h = base + amplitude * r^2, r = distance from the domain center.
    Parabolic { amplitude: f64, base: f64 },
    /// h = mean + amplitude * sin(2*pi*(kx*x + ky*y)).
    Sinusoidal {
        mean: f64,
        amplitude: f64,
        kx: f64,
        ky: f64,
    },
}

impl GapSpec {
    pub fn eval(&self, x: f64, y: f64, grid: &Grid2D) -> f64 {
        match *self {
            GapSpec::Constant(c) => c,
            GapSpec::Parabolic { amplitude, base } => {
                let rx = x - 0.5 * grid.lx;
                let ry = y - 0.5 * grid.ly;
                base + amplitude * (rx * rx + ry * ry)
            }
            GapSpec::Sinusoidal {
                mean,
                amplitude,
                kx,
                ky,
            } => mean + amplitude * (2.0 * std::f64::consts::PI * (kx * x + ky * y)).sin(),
        }
    }
}

/// Discretized gap function h(x') sampled at cell centers, with recorded bounds.
#[derive(Debug, Clone)]
pub struct GapField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
    pub h_min: f64,
    pub h_max: f64,
}

impl GapField {
    pub fn from_spec(spec: &GapSpec, grid: Grid2D) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.cell_count());
        let mut h_min = f64::INFINITY;
        let mut h_max = f64::NEG_INFINITY;
        let mut min_at = (0usize, 0usize);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let h = spec.eval(grid.x_center(i), grid.y_center(j), &grid);
                if h < h_min {
                    h_min = h;
                    min_at = (i, j);
                }
                h_max = h_max.max(h);
                values.push(h);
            }
        }
        if !(h_min > 0.0) || !h_min.is_finite() || !h_max.is_finite() {
            return Err(CoreError::NonPositiveGap {
                min: h_min,
                i: min_at.0,
                j: min_at.1,
            });
        }
        Ok(Self {
            grid,
            values,
            h_min,
            h_max,
        })
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(CoreError::GridMismatch {
                context: format!(
                    "gap array length {} does not match {} cells",
                    values.len(),
                    grid.cell_count()
                ),
            });
        }
        let (mut h_min, mut h_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut min_at = (0usize, 0usize);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let h = values[grid.idx(i, j)];
                if h < h_min {
                    h_min = h;
                    min_at = (i, j);
                }
                h_max = h_max.max(h);
            }
        }
        if !(h_min > 0.0) || !h_min.is_finite() || !h_max.is_finite() {
            return Err(CoreError::NonPositiveGap {
                min: h_min,
                i: min_at.0,
                j: min_at.1,
            });
        }
        Ok(Self {
            grid,
            values,
            h_min,
            h_max,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_gap_records_bounds() {
        let grid = Grid2D::new(4, 3, 1.0, 1.0).unwrap();
        let gap = GapField::from_spec(&GapSpec::Constant(1.0), grid).unwrap();
        assert!(gap.values.iter().all(|&h| h == 1.0));
        assert_eq!(gap.h_min, 1.0);
        assert_eq!(gap.h_max, 1.0);
    }

    #[test]
    fn sinusoidal_gap_samples_cell_centers() {
        // 4x1 strip is below the cell-count minimum, so use 4x2 over (0,1)^2;
        // values depend on x only.
        let grid = Grid2D::new(4, 2, 1.0, 1.0).unwrap();
        let spec = GapSpec::Sinusoidal {
            mean: 1.0,
            amplitude: 0.25,
            kx: 1.0,
            ky: 0.0,
        };
        let gap = GapField::from_spec(&spec, grid).unwrap();
        let expected = [0.125f64, 0.375, 0.625, 0.875]
            .map(|x| 1.0 + 0.25 * (2.0 * std::f64::consts::PI * x).sin());
        for j in 0..2 {
            for i in 0..4 {
                let got = gap.values[grid.idx(i, j)];
                assert!(
                    (got - expected[i]).abs() < 1e-15,
                    "{got} vs {}",
                    expected[i]
                );
            }
        }
        assert!((gap.h_min - expected[2]).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_gap_reports_location() {
        let grid = Grid2D::new(8, 8, 1.0, 1.0).unwrap();
        let spec = GapSpec::Sinusoidal {
            mean: 0.1,
            amplitude: 0.5,
            kx: 1.0,
            ky: 0.0,
        };
        match GapField::from_spec(&spec, grid) {
            Err(CoreError::NonPositiveGap { min, .. }) => assert!(min <= 0.0),
            other => panic!("expected NonPositiveGap, got {other:?}"),
        }
    }

    #[test]
    fn recorded_min_equals_min_of_values() {
        let grid = Grid2D::new(16, 16, 2.0, 1.0).unwrap();
        let spec = GapSpec::Parabolic {
            amplitude: 0.3,
            base: 0.5,
        };
        let gap = GapField::from_spec(&spec, grid).unwrap();
        let min = gap.values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(gap.h_min, min);
    }
}
