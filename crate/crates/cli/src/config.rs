//! Run configuration: a flat, diff-friendly `section.key = value` text format
//! with `#` comments and no nesting. Parsing validates everything and
//! reports *all* problems with their line numbers, not just the first.

use std::path::PathBuf;

use porolux_core::{ForcingSpec, GapSpec, Grid2D, PhysicalParams, PotentialSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Reduced,
    Dilated,
    Converge,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Reduced => "reduced",
            Mode::Dilated => "dilated",
            Mode::Converge => "converge",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reduced" => Ok(Mode::Reduced),
            "dilated" => Ok(Mode::Dilated),
            "converge" => Ok(Mode::Converge),
            other => Err(format!(
                "unknown mode `{other}` (expected reduced | dilated | converge)"
            )),
        }
    }
}

/// Fully validated run configuration with documented defaults filled in.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: PhysicalParams,
    pub grid: Grid2D,
    pub nz: usize,
    pub gap: GapSpec,
    pub forcing: ForcingSpec,
    /// Reduced pressure solve tolerance (default 1e-10).
    pub reduced_tol: f64,
    /// Reduced CG iteration cap (default 10 * nx * ny).
    pub reduced_maxit: usize,
    /// Dilated-mode slenderness parameter.
    pub epsilon: f64,
    /// Outer tolerance of the dilated pressure iteration (default 1e-8).
    pub dilated_tol: f64,
    pub outer_maxit: usize,
    /// Converge-mode slenderness sweep, strictly decreasing.
    pub eps_list: Vec<f64>,
    /// Optional interior restriction (cells skipped at the lateral boundary)
    /// for an additional converge-mode diagnostic table; 0 disables it.
    pub interior_margin: usize,
    pub out_dir: PathBuf,
    /// Verbatim configuration text, echoed into the run manifest.
    pub echo: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

struct Entry {
    line: usize,
    value: String,
}

/// Parses and validates configuration text. On failure returns the complete
/// list of problems.
pub fn parse_config(text: &str) -> Result<RunConfig, Vec<ConfigError>> {
    let mut errors: Vec<ConfigError> = Vec::new();
    let mut entries: Vec<(String, Entry)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stripped = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let stripped = stripped.trim();
        if stripped.is_empty() {
            continue;
        }
        let Some((key, value)) = stripped.split_once('=') else {
            errors.push(ConfigError {
                line,
                message: format!("expected `key = value`, got `{stripped}`"),
            });
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if value.is_empty() {
            errors.push(ConfigError {
                line,
                message: format!("empty value for `{key}`"),
            });
            continue;
        }
        if entries.iter().any(|(k, _)| *k == key) {
            errors.push(ConfigError {
                line,
                message: format!("duplicate key `{key}`"),
            });
            continue;
        }
        entries.push((key, Entry { line, value }));
    }

    const KNOWN: &[&str] = &[
        "mode",
        "params.mu",
        "params.mu_eff",
        "params.permeability",
        "params.conductivity",
        "params.bottom_flux",
        "geometry.lx",
        "geometry.ly",
        "geometry.nx",
        "geometry.ny",
        "geometry.nz",
        "geometry.gap",
        "forcing.f",
        "solver.tol",
        "solver.maxit",
        "dilated.epsilon",
        "dilated.tol",
        "dilated.outer_maxit",
        "converge.eps",
        "converge.interior_margin",
        "output.dir",
    ];
    for (key, entry) in &entries {
        if !KNOWN.contains(&key.as_str()) {
            errors.push(ConfigError {
                line: entry.line,
                message: format!("unknown key `{key}`"),
            });
        }
    }

    let find = |key: &str| entries.iter().find(|(k, _)| k == key).map(|(_, e)| e);

    macro_rules! fail {
        ($line:expr, $($arg:tt)*) => {
            errors.push(ConfigError { line: $line, message: format!($($arg)*) })
        };
    }

    macro_rules! scalar {
        ($key:expr, $default:expr, $ty:ty) => {
            match find($key) {
                None => $default,
                Some(e) => match e.value.parse::<$ty>() {
                    Ok(v) => v,
                    Err(_) => {
                        fail!(e.line, "`{}`: cannot parse `{}` as a number", $key, e.value);
                        $default
                    }
                },
            }
        };
    }

    let mode = match find("mode") {
        None => {
            fail!(0, "missing required key `mode`");
            Mode::Reduced
        }
        Some(e) => match e.value.parse::<Mode>() {
            Ok(m) => m,
            Err(msg) => {
                fail!(e.line, "{msg}");
                Mode::Reduced
            }
        },
    };

    let mu = scalar!("params.mu", 1.0, f64);
    let mu_eff = scalar!("params.mu_eff", 1.0, f64);
    let permeability = scalar!("params.permeability", 1.0, f64);
    let conductivity = scalar!("params.conductivity", 1.0, f64);
    let bottom_flux = scalar!("params.bottom_flux", 0.0, f64);
    let params = match PhysicalParams::new(mu, mu_eff, permeability, conductivity, bottom_flux) {
        Ok(p) => Some(p),
        Err(err) => {
            // attribute to the offending key's line where possible
            let key = match &err {
                porolux_core::CoreError::NonPositiveParameter { name, .. } => {
                    format!("params.{name}")
                }
                _ => "params".into(),
            };
            let line = find(&key).map(|e| e.line).unwrap_or(0);
            fail!(line, "`{key}`: {err}");
            None
        }
    };

    let lx = scalar!("geometry.lx", 1.0, f64);
    let ly = scalar!("geometry.ly", 1.0, f64);
    let nx = scalar!("geometry.nx", 32usize, usize);
    let ny = scalar!("geometry.ny", 32usize, usize);
    let nz = scalar!("geometry.nz", 16usize, usize);
    let grid = match Grid2D::new(nx, ny, lx, ly) {
        Ok(g) => Some(g),
        Err(err) => {
            let line = find("geometry.nx").or(find("geometry.lx")).map(|e| e.line);
            fail!(line.unwrap_or(0), "geometry: {err}");
            None
        }
    };
    if nz < 2 {
        let line = find("geometry.nz").map(|e| e.line).unwrap_or(0);
        fail!(line, "`geometry.nz` must be >= 2, got {nz}");
    }

    let gap = match find("geometry.gap") {
        None => GapSpec::Constant(1.0),
        Some(e) => match parse_gap(&e.value) {
            Ok(g) => g,
            Err(msg) => {
                fail!(e.line, "`geometry.gap`: {msg}");
                GapSpec::Constant(1.0)
            }
        },
    };

    let forcing = match find("forcing.f") {
        None => ForcingSpec::Zero,
        Some(e) => match parse_forcing(&e.value) {
            Ok(f) => f,
            Err(msg) => {
                fail!(e.line, "`forcing.f`: {msg}");
                ForcingSpec::Zero
            }
        },
    };

    let reduced_tol = scalar!("solver.tol", 1e-10, f64);
    if !(reduced_tol > 0.0) {
        let line = find("solver.tol").map(|e| e.line).unwrap_or(0);
        fail!(line, "`solver.tol` must be positive, got {reduced_tol}");
    }
    let reduced_maxit_raw = scalar!("solver.maxit", 0usize, usize);
    let reduced_maxit = if reduced_maxit_raw == 0 {
        10 * nx * ny
    } else {
        reduced_maxit_raw
    };

    let epsilon = scalar!("dilated.epsilon", 0.25, f64);
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        let line = find("dilated.epsilon").map(|e| e.line).unwrap_or(0);
        fail!(line, "`dilated.epsilon` must lie in (0, 1], got {epsilon}");
    }
    let dilated_tol = scalar!("dilated.tol", 1e-8, f64);
    if !(dilated_tol > 0.0) {
        let line = find("dilated.tol").map(|e| e.line).unwrap_or(0);
        fail!(line, "`dilated.tol` must be positive, got {dilated_tol}");
    }
    let outer_maxit = scalar!("dilated.outer_maxit", 500usize, usize);

    let eps_list = match find("converge.eps") {
        None => vec![0.25, 0.125, 0.0625],
        Some(e) => {
            let mut list = Vec::new();
            let mut ok = true;
            for part in e.value.split(',') {
                match part.trim().parse::<f64>() {
                    Ok(v) => list.push(v),
                    Err(_) => {
                        fail!(e.line, "`converge.eps`: cannot parse `{}`", part.trim());
                        ok = false;
                    }
                }
            }
            if ok {
                for &v in &list {
                    if !(v > 0.0 && v <= 1.0) {
                        fail!(e.line, "`converge.eps`: value {v} outside (0, 1]");
                        ok = false;
                    }
                }
                if ok && list.windows(2).any(|w| w[1] >= w[0]) {
                    fail!(e.line, "`converge.eps`: values must be strictly decreasing");
                }
            }
            list
        }
    };

    let interior_margin = scalar!("converge.interior_margin", 0usize, usize);

    let out_dir = PathBuf::from(
        find("output.dir")
            .map(|e| e.value.clone())
            .unwrap_or_else(|| "out".to_string()),
    );

    // gap positivity is checked against the actual grid samples
    if let (Some(g), true) = (grid, errors.is_empty()) {
        if let Err(err) = porolux_core::GapField::from_spec(&gap, g) {
            let line = find("geometry.gap").map(|e| e.line).unwrap_or(0);
            fail!(line, "`geometry.gap`: {err}");
        }
    }

    if !errors.is_empty() {
        return Err(errors);
    }

    Ok(RunConfig {
        mode,
        params: params.expect("validated"),
        grid: grid.expect("validated"),
        nz,
        gap,
        forcing,
        reduced_tol,
        reduced_maxit,
        epsilon,
        dilated_tol,
        outer_maxit,
        eps_list,
        interior_margin,
        out_dir,
        echo: text.to_string(),
    })
}

/// Splits `name(a, b, ...)` into the name and its comma-separated arguments.
fn call_syntax(value: &str) -> Result<(&str, Vec<f64>), String> {
    let value = value.trim();
    let Some(open) = value.find('(') else {
        return Ok((value, Vec::new()));
    };
    if !value.ends_with(')') {
        return Err(format!("`{value}`: missing closing parenthesis"));
    }
    let name = value[..open].trim();
    let inner = &value[open + 1..value.len() - 1];
    let mut args = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        args.push(
            part.parse::<f64>()
                .map_err(|_| format!("`{value}`: `{part}` is not a number"))?,
        );
    }
    Ok((name, args))
}

fn expect_args(name: &str, args: &[f64], n: usize) -> Result<(), String> {
    if args.len() == n {
        Ok(())
    } else {
        Err(format!(
            "`{name}` takes {n} argument(s), got {}",
            args.len()
        ))
    }
}

pub fn parse_gap(value: &str) -> Result<GapSpec, String> {
    let (name, args) = call_syntax(value)?;
    match name {
        "constant" => {
            expect_args(name, &args, 1)?;
            Ok(GapSpec::Constant(args[0]))
        }
        "parabolic" => {
            expect_args(name, &args, 2)?;
            Ok(GapSpec::Parabolic {
                amplitude: args[0],
                base: args[1],
            })
        }
        "sinusoidal" => {
            expect_args(name, &args, 4)?;
            Ok(GapSpec::Sinusoidal {
                mean: args[0],
                amplitude: args[1],
                kx: args[2],
                ky: args[3],
            })
        }
        other => Err(format!(
            "unknown gap shape `{other}` (constant | parabolic | sinusoidal)"
        )),
    }
}

pub fn parse_forcing(value: &str) -> Result<ForcingSpec, String> {
    let value = value.trim();
    if value == "zero" {
        return Ok(ForcingSpec::Zero);
    }
    if let Some(rest) = value.strip_prefix("gradient(") {
        let Some(inner) = rest.strip_suffix(')') else {
            return Err(format!("`{value}`: missing closing parenthesis"));
        };
        let (name, args) = call_syntax(inner)?;
        return match name {
            "linear" => {
                expect_args(name, &args, 2)?;
                Ok(ForcingSpec::Gradient(PotentialSpec::Linear {
                    gx: args[0],
                    gy: args[1],
                }))
            }
            "cosine" => {
                expect_args(name, &args, 3)?;
                Ok(ForcingSpec::Gradient(PotentialSpec::Cosine {
                    amp: args[0],
                    kx: args[1],
                    ky: args[2],
                }))
            }
            other => Err(format!("unknown potential `{other}` (linear | cosine)")),
        };
    }
    let (name, args) = call_syntax(value)?;
    match name {
        "constant" => {
            expect_args(name, &args, 2)?;
            Ok(ForcingSpec::Constant {
                fx: args[0],
                fy: args[1],
            })
        }
        "sinusoidal" => {
            expect_args(name, &args, 6)?;
            Ok(ForcingSpec::Sinusoidal {
                ax: args[0],
                nx1: args[1],
                ny1: args[2],
                ay: args[3],
                nx2: args[4],
                ny2: args[5],
            })
        }
        other => Err(format!(
            "unknown forcing `{other}` (zero | constant | sinusoidal | gradient)"
        )),
    }
}
