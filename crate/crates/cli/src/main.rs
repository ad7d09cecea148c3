use std::path::PathBuf;
use std::process::ExitCode;

use cavdd::app::{self, Failure, Mode};
use cavdd::selftest::SelftestOptions;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cavdd", version, about = "Magnetic dipole-dipole interaction in free space and rectangular cavities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one configuration.
    Single {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Evaluate a configuration with a [sweep] section.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Dump the mode table up to a cutoff wavenumber.
    Modes {
        #[arg(long)]
        cutoff: f64,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        lx: Option<f64>,
        #[arg(long)]
        ly: Option<f64>,
        #[arg(long)]
        lz: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the embedded invariant checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Negative control: flip the spectral sign.
        #[arg(long)]
        flip_spectral_sign: bool,
        /// Scale Kc without re-selecting truncations.
        #[arg(long)]
        kc_scale: Option<f64>,
    },
    /// Run a built-in figure preset.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
        /// Print the preset config instead of running it.
        #[arg(long)]
        dump: bool,
    },
}

fn dispatch(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Single { config, out, workers } => app::evaluate_file(&config, Mode::Single, out, workers),
        Command::Sweep { config, out, workers } => app::evaluate_file(&config, Mode::Sweep, out, workers),
        Command::Modes {
            cutoff,
            config,
            lx,
            ly,
            lz,
            out,
        } => {
            let g = app::geometry(config.as_deref(), [lx, ly, lz])?;
            app::modes(&g, cutoff, out.as_deref())
        }
        Command::Selftest {
            seed,
            flip_spectral_sign,
            kc_scale,
        } => Ok(app::selftest(&SelftestOptions {
            seed,
            flip_spectral_sign,
            kc_scale,
        })),
        Command::Preset { name, out, workers, dump } => {
            let text = app::preset_text(&name)?;
            if dump {
                print!("{text}");
                return Ok(app::EXIT_OK);
            }
            app::evaluate(text, Mode::Any, out, workers)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}
