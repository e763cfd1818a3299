use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use porolux_cli::config::{parse_config, Mode};
use porolux_cli::run::{run, EXIT_CONFIG_ERROR};

/// Thin-film Darcy-Brinkman solvers: reduced (closed-form + Reynolds
/// pressure), full dilated 3D, and the slenderness convergence study.
#[derive(Parser)]
#[command(name = "porolux", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Reduced,
    Dilated,
    Converge,
}

#[derive(Clone, Copy, ValueEnum)]
enum LogLevel {
    Info,
    Debug,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solver described by a configuration file.
    Solve {
        /// Path to the `section.key = value` configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `output.dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run mode (overrides `mode`).
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long, value_enum, default_value = "info")]
        log_level: LogLevel,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Solve {
        config,
        out,
        mode,
        log_level,
    } = cli.command;

    env_logger::Builder::new()
        .filter_level(match log_level {
            LogLevel::Info => log::LevelFilter::Info,
            LogLevel::Debug => log::LevelFilter::Debug,
        })
        .init();

    // POROLUX_THREADS caps worker parallelism; default is the hardware count.
    if let Ok(value) = std::env::var("POROLUX_THREADS") {
        match value.parse::<usize>() {
            Ok(n) if n >= 1 => {
                if let Err(err) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("warning: could not apply POROLUX_THREADS={n}: {err}");
                }
            }
            _ => eprintln!("warning: ignoring invalid POROLUX_THREADS=`{value}`"),
        }
    }

    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(err) => {
            eprintln!("cannot read {}: {err}", config.display());
            return ExitCode::from(EXIT_CONFIG_ERROR as u8);
        }
    };

    let mut parsed = match parse_config(&text) {
        Ok(c) => c,
        Err(errors) => {
            eprintln!("invalid configuration ({} error(s)):", errors.len());
            for e in &errors {
                eprintln!("  {e}");
            }
            return ExitCode::from(EXIT_CONFIG_ERROR as u8);
        }
    };

    if let Some(m) = mode {
        parsed.mode = match m {
            ModeArg::Reduced => Mode::Reduced,
            ModeArg::Dilated => Mode::Dilated,
            ModeArg::Converge => Mode::Converge,
        };
    }
    let out_dir = out.unwrap_or_else(|| parsed.out_dir.clone());

    match run(&parsed, &out_dir) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_CONFIG_ERROR as u8)
        }
    }
}
