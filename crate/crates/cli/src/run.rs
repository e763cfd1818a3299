//! Run orchestration: executes the configured mode and lays down artifacts
//! plus a manifest. Artifacts are written as they become available, so a
//! failing solve still leaves the earlier outputs on disk next to a manifest
//! carrying the FAILED marker.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use log::{debug, info};

use porolux_core::brinkman3d::{
    convergence_study, scaling_diagnostics, vertical_average_pressure, DilatedConfig,
};
use porolux_core::reduced_flow::{
    assemble_reynolds, mobility_field, solve_pressure, velocity_field,
};
use porolux_core::reduced_heat::temperature_field;
use porolux_core::GapField;

use crate::config::{Mode, RunConfig};
use crate::export;

/// Exit codes of the `solve` subcommand.
pub const EXIT_OK: i32 = 0;
pub const EXIT_SOLVER_FAILURE: i32 = 1;
pub const EXIT_CONFIG_ERROR: i32 = 2;

/// Executes a validated configuration; returns the process exit code.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<i32> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let mut artifacts: Vec<String> = Vec::new();
    let outcome = match config.mode {
        Mode::Reduced => run_reduced(config, out_dir, &mut artifacts),
        Mode::Dilated => run_dilated(config, out_dir, &mut artifacts),
        Mode::Converge => run_converge(config, out_dir, &mut artifacts),
    };

    match outcome {
        Ok(()) => {
            export::write_manifest(
                out_dir,
                "SUCCESS",
                config.mode.as_str(),
                &config.echo,
                &artifacts,
                None,
            )?;
            info!(
                "run complete: {} artifact(s) in {}",
                artifacts.len(),
                out_dir.display()
            );
            Ok(EXIT_OK)
        }
        Err(err) => {
            export::write_manifest(
                out_dir,
                "FAILED",
                config.mode.as_str(),
                &config.echo,
                &artifacts,
                Some(&err.to_string()),
            )?;
            eprintln!("solver failure: {err:#}");
            Ok(EXIT_SOLVER_FAILURE)
        }
    }
}

fn run_reduced(config: &RunConfig, dir: &Path, artifacts: &mut Vec<String>) -> Result<()> {
    let gap = GapField::from_spec(&config.gap, config.grid)?;
    let forcing = config.forcing.sample(config.grid);

    let mobility = mobility_field(&config.params, &gap)?;
    export::export_scalar2d_csv(&mobility, &dir.join("mobility.csv"))?;
    artifacts.push("mobility.csv".into());

    let system = assemble_reynolds(&gap, &config.params, &forcing)?;
    let (pressure, report) = solve_pressure(&system, config.reduced_tol, config.reduced_maxit)?;
    debug!(
        "pressure solve: {} iterations, residual {:.3e}",
        report.iterations, report.relative_residual
    );
    export::export_scalar2d_csv(&pressure, &dir.join("pressure.csv"))?;
    artifacts.push("pressure.csv".into());

    let velocity = velocity_field(&config.params, &gap, &pressure, &forcing, config.nz)?;
    export::export_column_vector_csv(&velocity, &dir.join("velocity.csv"))?;
    artifacts.push("velocity.csv".into());

    let temperature = temperature_field(&config.params, &gap, &pressure, &forcing, config.nz)?;
    export::export_column_scalar_csv(&temperature, &dir.join("temperature.csv"))?;
    artifacts.push("temperature.csv".into());
    Ok(())
}

fn dilated_config(config: &RunConfig) -> Result<DilatedConfig> {
    let gap_height = match config.gap {
        porolux_core::GapSpec::Constant(h) => h,
        other => anyhow::bail!(
            "dilated mode requires a constant gap, got {other:?}; \
             variable gaps are verified through the reduced model"
        ),
    };
    Ok(DilatedConfig::new(
        config.epsilon,
        config.grid,
        gap_height,
        config.nz,
        config.params,
        config.forcing,
    )?
    .with_tolerances(config.dilated_tol, config.outer_maxit))
}

fn run_dilated(config: &RunConfig, dir: &Path, artifacts: &mut Vec<String>) -> Result<()> {
    let dc = dilated_config(config)?;
    let sol = porolux_core::brinkman3d::solve_dilated(&dc)?;
    info!(
        "dilated solve: {} outer iterations, div_inf {:.3e}, energy defect {:.3e}",
        sol.outer_iterations, sol.div_inf, sol.energy.relative_error
    );

    artifacts.extend(export::export_dilated_vtk(&sol, dir)?);

    let qbar = vertical_average_pressure(&sol);
    export::export_scalar2d_csv(&qbar, &dir.join("qbar.csv"))?;
    artifacts.push("qbar.csv".into());

    export::export_table_csv(
        &[
            "viscous",
            "darcy",
            "forcing_work",
            "relative_error",
            "div_inf",
            "outer_iterations",
        ],
        &[vec![
            sol.energy.viscous,
            sol.energy.darcy,
            sol.energy.forcing_work,
            sol.energy.relative_error,
            sol.div_inf,
            sol.outer_iterations as f64,
        ]],
        &dir.join("energy.csv"),
    )?;
    artifacts.push("energy.csv".into());
    Ok(())
}

fn run_converge(config: &RunConfig, dir: &Path, artifacts: &mut Vec<String>) -> Result<()> {
    let dc = dilated_config(config)?;
    let study = convergence_study(&dc, &config.eps_list)?;

    let rows: Vec<Vec<f64>> = study
        .rows
        .iter()
        .map(|r| {
            vec![
                r.epsilon,
                r.velocity_error,
                r.vertical_velocity_norm,
                r.pressure_error,
                r.temperature_error,
            ]
        })
        .collect();
    export::export_table_csv(
        &[
            "epsilon",
            "velocity_error",
            "vertical_velocity_norm",
            "pressure_error",
            "temperature_error",
        ],
        &rows,
        &dir.join("convergence.csv"),
    )?;
    artifacts.push("convergence.csv".into());

    if config.interior_margin > 0 {
        let rows: Vec<Vec<f64>> = study
            .interior_rows(config.interior_margin)?
            .iter()
            .map(|r| {
                vec![
                    r.epsilon,
                    r.velocity_error,
                    r.vertical_velocity_norm,
                    r.pressure_error,
                    r.temperature_error,
                ]
            })
            .collect();
        export::export_table_csv(
            &[
                "epsilon",
                "velocity_error",
                "vertical_velocity_norm",
                "pressure_error",
                "temperature_error",
            ],
            &rows,
            &dir.join("convergence_interior.csv"),
        )?;
        artifacts.push("convergence_interior.csv".into());
    }

    let scaling = scaling_diagnostics(&study.solutions);
    let rows: Vec<Vec<f64>> = scaling
        .iter()
        .map(|r| {
            vec![
                r.epsilon,
                r.velocity_l2,
                r.scaled_strain_l2,
                r.temperature_l43,
                r.scaled_temperature_gradient_l43,
                r.vertical_strain_share,
            ]
        })
        .collect();
    export::export_table_csv(
        &[
            "epsilon",
            "velocity_l2",
            "scaled_strain_l2",
            "temperature_l43",
            "scaled_temperature_gradient_l43",
            "vertical_strain_share",
        ],
        &rows,
        &dir.join("scaling.csv"),
    )?;
    artifacts.push("scaling.csv".into());
    Ok(())
}
