//! Artifact writers: CSV fields/tables with 17-significant-digit floats
//! (bit-exact round trips), legacy-ASCII VTK structured points for 3D
//! fields, and the run manifest with per-artifact checksums.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use sha2::{Digest, Sha256};

use porolux_core::brinkman3d::DilatedSolution;
use porolux_core::{ColumnScalarField, ColumnVectorField, ScalarField2D};

/// 17 significant decimal digits: enough to reproduce any f64 bit-exactly.
#[inline]
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn check_finite(name: &str, values: impl IntoIterator<Item = f64>) -> Result<()> {
    for (idx, v) in values.into_iter().enumerate() {
        if !v.is_finite() {
            bail!("refusing to export `{name}`: non-finite value at index {idx}");
        }
    }
    Ok(())
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub fn export_scalar2d_csv(field: &ScalarField2D, path: &Path) -> Result<()> {
    check_finite(&path.display().to_string(), field.values.iter().copied())?;
    let g = field.grid;
    let mut out = String::with_capacity(field.values.len() * 40);
    out.push_str("x,y,value\n");
    for j in 0..g.ny {
        for i in 0..g.nx {
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_float(g.x_center(i)),
                fmt_float(g.y_center(j)),
                fmt_float(field.values[g.idx(i, j)])
            );
        }
    }
    write_atomic(path, &out)
}

pub fn export_column_scalar_csv(field: &ColumnScalarField, path: &Path) -> Result<()> {
    check_finite(&path.display().to_string(), field.values.iter().copied())?;
    let g = field.grid;
    let levels = field.nz + 1;
    let mut out = String::with_capacity(field.values.len() * 60);
    out.push_str("x,y,z,value\n");
    for j in 0..g.ny {
        for i in 0..g.nx {
            let cell = g.idx(i, j);
            for s in 0..levels {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_float(g.x_center(i)),
                    fmt_float(g.y_center(j)),
                    fmt_float(field.z[cell * levels + s]),
                    fmt_float(field.values[cell * levels + s])
                );
            }
        }
    }
    write_atomic(path, &out)
}

pub fn export_column_vector_csv(field: &ColumnVectorField, path: &Path) -> Result<()> {
    check_finite(
        &path.display().to_string(),
        field.x.iter().chain(field.y.iter()).copied(),
    )?;
    let g = field.grid;
    let levels = field.nz + 1;
    let mut out = String::with_capacity(field.x.len() * 80);
    out.push_str("x,y,z,value_x,value_y\n");
    for j in 0..g.ny {
        for i in 0..g.nx {
            let cell = g.idx(i, j);
            for s in 0..levels {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    fmt_float(g.x_center(i)),
                    fmt_float(g.y_center(j)),
                    fmt_float(field.z[cell * levels + s]),
                    fmt_float(field.x[cell * levels + s]),
                    fmt_float(field.y[cell * levels + s])
                );
            }
        }
    }
    write_atomic(path, &out)
}

/// Numeric table with a header row; used for the convergence, scaling and
/// energy reports.
pub fn export_table_csv(headers: &[&str], rows: &[Vec<f64>], path: &Path) -> Result<()> {
    for row in rows {
        check_finite(&path.display().to_string(), row.iter().copied())?;
    }
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    write_atomic(path, &out)
}

fn vtk_header(title: &str, nx: usize, ny: usize, nz: usize, spacing: (f64, f64, f64)) -> String {
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    out.push_str(title);
    out.push('\n');
    out.push_str("ASCII\nDATASET STRUCTURED_POINTS\n");
    let _ = writeln!(out, "DIMENSIONS {nx} {ny} {nz}");
    let _ = writeln!(
        out,
        "ORIGIN {} {} {}",
        fmt_float(0.5 * spacing.0),
        fmt_float(0.5 * spacing.1),
        fmt_float(0.5 * spacing.2)
    );
    let _ = writeln!(
        out,
        "SPACING {} {} {}",
        fmt_float(spacing.0),
        fmt_float(spacing.1),
        fmt_float(spacing.2)
    );
    let _ = writeln!(out, "POINT_DATA {}", nx * ny * nz);
    out
}

/// Cell-centered scalar values of the dilated box in legacy STRUCTURED_POINTS
/// layout (points placed at the cell centers).
pub fn export_vtk_scalar(
    name: &str,
    nx: usize,
    ny: usize,
    nz: usize,
    spacing: (f64, f64, f64),
    values: &[f64],
    path: &Path,
) -> Result<()> {
    check_finite(name, values.iter().copied())?;
    let mut out = vtk_header(name, nx, ny, nz, spacing);
    let _ = writeln!(out, "SCALARS {name} double 1");
    out.push_str("LOOKUP_TABLE default\n");
    for &v in values {
        out.push_str(&fmt_float(v));
        out.push('\n');
    }
    write_atomic(path, &out)
}

pub fn export_vtk_vector(
    name: &str,
    nx: usize,
    ny: usize,
    nz: usize,
    spacing: (f64, f64, f64),
    vx: &[f64],
    vy: &[f64],
    vz: &[f64],
    path: &Path,
) -> Result<()> {
    check_finite(name, vx.iter().chain(vy.iter()).chain(vz.iter()).copied())?;
    let mut out = vtk_header(name, nx, ny, nz, spacing);
    let _ = writeln!(out, "VECTORS {name} double");
    for c in 0..vx.len() {
        let _ = writeln!(
            out,
            "{} {} {}",
            fmt_float(vx[c]),
            fmt_float(vy[c]),
            fmt_float(vz[c])
        );
    }
    write_atomic(path, &out)
}

/// Writes the dilated solution's three VTK artifacts.
pub fn export_dilated_vtk(sol: &DilatedSolution, dir: &Path) -> Result<Vec<String>> {
    let g = sol.mac();
    let spacing = (g.dx, g.dy, g.dz);
    let (uc, vc, wc) = sol.cell_center_velocity();
    export_vtk_vector(
        "velocity",
        g.nx,
        g.ny,
        g.nz,
        spacing,
        &uc,
        &vc,
        &wc,
        &dir.join("velocity.vtk"),
    )?;
    export_vtk_scalar(
        "scaled_pressure",
        g.nx,
        g.ny,
        g.nz,
        spacing,
        &sol.q,
        &dir.join("scaled_pressure.vtk"),
    )?;
    export_vtk_scalar(
        "temperature",
        g.nx,
        g.ny,
        g.nz,
        spacing,
        &sol.temperature,
        &dir.join("temperature.vtk"),
    )?;
    Ok(vec![
        "velocity.vtk".into(),
        "scaled_pressure.vtk".into(),
        "temperature.vtk".into(),
    ])
}

pub fn sha256_of_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

/// Formula variants baked into this build, echoed into every manifest so
/// results stay auditable.
pub const FORMULA_NOTES: &[(&str, &str)] = &[
    (
        "reynolds_mobility",
        "(K/mu)*(h - (2/M)*tanh(M*h/2))  [flux numerator e^{Mh}+e^{-Mh}-2]",
    ),
    ("temperature_v1_constant", "K/mu"),
    ("temperature_v2_terms", "+A2^2*(e^{-2Mz}-1) - M^2*A1*A2*z^2"),
];

/// Writes the run manifest: status, formula variants, config echo and
/// artifact checksums. Timestamps live here and nowhere else.
pub fn write_manifest(
    dir: &Path,
    status: &str,
    mode: &str,
    config_echo: &str,
    artifacts: &[String],
    failure: Option<&str>,
) -> Result<()> {
    let mut out = String::new();
    out.push_str("porolux run manifest\n");
    let _ = writeln!(out, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "status = {status}");
    let created = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let _ = writeln!(out, "created_unix = {created}");
    let _ = writeln!(out, "mode = {mode}");
    if let Some(reason) = failure {
        let _ = writeln!(out, "failure = {reason}");
    }
    for (key, value) in FORMULA_NOTES {
        let _ = writeln!(out, "formula.{key} = {value}");
    }
    out.push_str("\n[artifacts]\n");
    for name in artifacts {
        let sha = sha256_of_file(&dir.join(name))?;
        let _ = writeln!(out, "{name} sha256={sha}");
    }
    out.push_str("\n[config]\n");
    out.push_str(config_echo);
    if !config_echo.ends_with('\n') {
        out.push('\n');
    }
    write_atomic(&dir.join("manifest.txt"), &out)
}
