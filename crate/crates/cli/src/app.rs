//! Subcommand bodies shared by the binary and the tests.

use std::fs;
use std::path::{Path, PathBuf};

use cavdd_core::cavity_modes::ModeTable;
use cavdd_core::CavityGeometry;
use log::{info, warn};

use crate::config::{ConfigError, Prepared, RunConfig};
use crate::run::{render_csv, run};
use crate::selftest::{run_selftest, SelftestOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ALL_GUARDED: i32 = 3;
pub const EXIT_SELFTEST: i32 = 4;

/// Failure of a subcommand with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::config(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Single,
    Sweep,
    /// Presets carry their own sweep, or none.
    Any,
}

/// Worker count: flag, then config, then `CAVDD_WORKERS`, then the number
/// of available cores.
pub fn resolve_workers(flag: Option<usize>, config: Option<usize>) -> Result<usize, Failure> {
    if flag == Some(0) {
        return Err(Failure::config("--workers must be at least 1"));
    }
    if let Some(n) = flag.or(config) {
        return Ok(n);
    }
    if let Ok(env) = std::env::var("CAVDD_WORKERS") {
        match env.trim().parse::<usize>() {
            Ok(n) if n > 0 => return Ok(n),
            _ => return Err(Failure::config(format!("CAVDD_WORKERS={env:?} is not a positive integer"))),
        }
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure {
                code: 1,
                message: format!("{}: {e}", path.display()),
            })?;
            info!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Evaluate `config_text` and write the CSV. Returns the exit code.
pub fn evaluate(config_text: &str, mode: Mode, out: Option<PathBuf>, workers: Option<usize>) -> Result<i32, Failure> {
    let cfg = RunConfig::parse(config_text)?;
    let prepared: Prepared = cfg.prepare()?;
    match (mode, prepared.sweep.is_some()) {
        (Mode::Single, true) => return Err(Failure::config("config has a [sweep] section; use `sweep`")),
        (Mode::Sweep, false) => return Err(Failure::config("config has no [sweep] section; use `single`")),
        _ => {}
    }
    let workers = resolve_workers(workers, cfg.workers)?;
    let output = run(&prepared, workers)?;
    let csv = render_csv(&prepared, &output, config_text);
    let target = out.or_else(|| cfg.output.as_ref().and_then(|o| o.csv.clone()).map(PathBuf::from));
    write_or_print(target.as_deref(), &csv)?;
    if output.all_guarded() {
        warn!("no term evaluated; every sample tripped a guard");
        return Ok(EXIT_ALL_GUARDED);
    }
    Ok(EXIT_OK)
}

pub fn evaluate_file(path: &Path, mode: Mode, out: Option<PathBuf>, workers: Option<usize>) -> Result<i32, Failure> {
    evaluate(&read(path)?, mode, out, workers)
}

/// Geometry from a config file or explicit sides.
pub fn geometry(config: Option<&Path>, sides: [Option<f64>; 3]) -> Result<CavityGeometry, Failure> {
    let g = match (config, sides) {
        (Some(path), [None, None, None]) => {
            let cfg = RunConfig::parse(&read(path)?)?;
            let spec = cfg.geometry.ok_or_else(|| Failure::config("config has no [geometry] section"))?;
            [spec.lx, spec.ly, spec.lz]
        }
        (None, [Some(x), Some(y), Some(z)]) => [x, y, z],
        _ => return Err(Failure::config("give either --config or all of --lx --ly --lz")),
    };
    CavityGeometry::new(g[0], g[1], g[2]).map_err(|e| Failure::config(format!("geometry: {e}")))
}

pub fn mode_table_csv(g: &CavityGeometry, cutoff: f64) -> Result<String, Failure> {
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(Failure::config("--cutoff must be positive and finite"));
    }
    let table = ModeTable::build(g, cutoff);
    let mut s = String::from("m,n,p,k\n");
    for mode in table.modes() {
        let [m, n, p] = mode.index.indices();
        s.push_str(&format!("{m},{n},{p},{:.16e}\n", mode.k));
    }
    Ok(s)
}

pub fn modes(g: &CavityGeometry, cutoff: f64, out: Option<&Path>) -> Result<i32, Failure> {
    write_or_print(out, &mode_table_csv(g, cutoff)?)?;
    Ok(EXIT_OK)
}

pub fn selftest(opts: &SelftestOptions) -> i32 {
    let checks = run_selftest(opts);
    for c in &checks {
        println!("{c}");
    }
    if checks.iter().all(|c| c.passed()) {
        EXIT_OK
    } else {
        EXIT_SELFTEST
    }
}

pub fn preset_text(name: &str) -> Result<&'static str, Failure> {
    crate::presets::preset(name).ok_or_else(|| {
        let known: Vec<&str> = crate::presets::names().collect();
        Failure::config(format!("unknown preset {name:?}; known: {}", known.join(", ")))
    })
}
