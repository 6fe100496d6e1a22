//! Command-line driver.
//!
//! Every flag can also come from a `DISKBSP_<FLAG>` environment variable
//! (dashes become underscores) or from a JSON object passed with `--config`.
//! Precedence is command line, then environment, then config file.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::mra::Correction;
use crate::transform::Backend;

pub use commands::run;

#[derive(Debug, Parser)]
#[command(
    name = "diskbsp",
    version,
    about = "Disk harmonic transform and disk bispectrum toolkit"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "DISKBSP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// JSON object of flag defaults.
    #[arg(long, global = true, env = "DISKBSP_CONFIG")]
    pub config: Option<PathBuf>,
    /// Directory for cached plans.
    #[arg(long, global = true, env = "DISKBSP_PLAN_CACHE")]
    pub plan_cache: Option<PathBuf>,
    /// Keep harmonics with `λ <= F·L` instead of one per disk pixel
    /// (`F = 1.5707963...` is the Nyquist rule).
    #[arg(long, global = true, env = "DISKBSP_BANDLIMIT_FACTOR")]
    pub bandlimit_factor: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a plan and print its harmonic table and coefficient counts.
    Plan {
        #[arg(long, env = "DISKBSP_SIZE")]
        size: usize,
        /// Write the plan as JSON.
        #[arg(long, env = "DISKBSP_OUT")]
        out: Option<PathBuf>,
    },
    /// Image to coefficients.
    Dht {
        #[arg(long, env = "DISKBSP_INPUT")]
        input: PathBuf,
        /// Image number inside an IDX file.
        #[arg(long, env = "DISKBSP_INDEX", default_value_t = 0)]
        index: usize,
        #[arg(long, env = "DISKBSP_OUT")]
        out: PathBuf,
        #[arg(long, env = "DISKBSP_BACKEND", default_value_t = Backend::Direct)]
        backend: Backend,
    },
    /// Coefficients to image (`.pgm` or raw `f32` by extension).
    Idht {
        #[arg(long, env = "DISKBSP_INPUT")]
        input: PathBuf,
        #[arg(long, env = "DISKBSP_OUT")]
        out: PathBuf,
    },
    /// Coefficients to a bispectrum.
    Bsp {
        #[arg(long, env = "DISKBSP_INPUT")]
        input: PathBuf,
        #[arg(long, env = "DISKBSP_OUT")]
        out: PathBuf,
        #[arg(long, conflicts_with = "full")]
        selective: bool,
        #[arg(long)]
        full: bool,
    },
    /// Bispectrum back to coefficients, up to a rotation.
    Invert {
        #[arg(long, env = "DISKBSP_INPUT")]
        input: PathBuf,
        #[arg(long, env = "DISKBSP_OUT")]
        out: PathBuf,
        /// Input is a full bispectrum.
        #[arg(long)]
        full: bool,
    },
    /// Time full against selective bispectra.
    Bench {
        #[arg(
            long,
            env = "DISKBSP_SIZES",
            value_delimiter = ',',
            default_value = "16,28,56,112"
        )]
        sizes: Vec<usize>,
        #[arg(long, env = "DISKBSP_REPEATS", default_value_t = 5)]
        repeats: usize,
        #[arg(long, env = "DISKBSP_OUT")]
        out: Option<PathBuf>,
        /// Skip the transform and inversion rows.
        #[arg(long)]
        bispectra_only: bool,
    },
    /// Multi-reference alignment sweep.
    Mra {
        /// Clean image; the built-in 28x28 digit when omitted.
        #[arg(long, env = "DISKBSP_IMAGE")]
        image: Option<PathBuf>,
        #[arg(long, env = "DISKBSP_INDEX", default_value_t = 0)]
        index: usize,
        #[arg(
            long,
            env = "DISKBSP_NX",
            value_delimiter = ',',
            default_value = "10,20,30,40,50,60,100,200,300,400,500"
        )]
        nx: Vec<usize>,
        #[arg(
            long,
            env = "DISKBSP_SIGMA2",
            value_delimiter = ',',
            default_value = "0,0.001,0.005,0.01"
        )]
        sigma2: Vec<f64>,
        /// Number of seeds, counted up from `--seed`.
        #[arg(long, env = "DISKBSP_SEEDS", default_value_t = 10)]
        seeds: u64,
        #[arg(long, env = "DISKBSP_OUT")]
        out: PathBuf,
        #[arg(long, env = "DISKBSP_BACKEND", default_value_t = Backend::Direct)]
        backend: Backend,
        #[arg(long, env = "DISKBSP_CORRECTION", default_value_t = Correction::On)]
        correction: Correction,
        #[arg(long, env = "DISKBSP_MC_TRIALS", default_value_t = 2000)]
        mc_trials: usize,
    },
}

/// Exit status for a library error: 1 for degenerate inputs, 2 otherwise.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Degenerate { .. } => 1,
        _ => 2,
    }
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    std::env::var_os("DISKBSP_CONFIG").map(PathBuf::from)
}

/// Turn the config file into `DISKBSP_*` variables that are not already set.
fn apply_config(args: &[OsString]) -> Result<(), Error> {
    let Some(path) = config_path(args) else {
        return Ok(());
    };
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let value: serde_json::Value = serde_json::from_slice(&bytes)
        .map_err(|e| Error::parse(path.display().to_string(), e.column() as u64, e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| {
        Error::parse(
            path.display().to_string(),
            0,
            "config must be a JSON object",
        )
    })?;
    for (key, v) in obj {
        let var = format!("DISKBSP_{}", key.replace('-', "_").to_uppercase());
        if std::env::var_os(&var).is_some() {
            continue;
        }
        let text = match v {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Array(items) => items
                .iter()
                .map(|i| {
                    i.as_str()
                        .map(str::to_string)
                        .unwrap_or_else(|| i.to_string())
                })
                .collect::<Vec<_>>()
                .join(","),
            other => other.to_string(),
        };
        std::env::set_var(var, text);
    }
    Ok(())
}

/// Parse `args`, run, and map the outcome to an exit code.
pub fn main_with_args(args: Vec<OsString>) -> ExitCode {
    if let Err(e) = apply_config(&args) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let flags = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match run(&cli, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
