//! Command-line front end: configuration, preset listing and result files.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure in more
//! than half of the cells (outputs are still written), 4 I/O error.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::sweep::{preset_catalog, run_sweep, SweepResult};

pub use config::{default_workers, parse_grid, OutputFormat, RunConfig, RunMode, CONFIG_VERSION};
pub use output::{
    csv_path, fmt_f64, provenance, read_csv, read_matrix, summary_lines, write_csv, write_matrices, CsvRow,
    CSV_COLUMNS,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Share of failed cells above which a run reports numerical failure.
pub const FAILURE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mcom", version, about = "Steady-state Gaussian correlations of a double-cavity molecular optomechanical system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a figure preset or a custom sweep from a config file.
    Run(RunArgs),
    /// List the figure presets with their resolved parameters.
    ListPresets {
        /// One `key=value` line per preset.
        #[arg(long)]
        machine: bool,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub preset: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "MCOM_WORKERS")]
    pub workers: Option<usize>,
    /// Grid size `N1xN2` (or `N1` for line cuts).
    #[arg(long)]
    pub grid: Option<String>,
    /// Solve the mean-field steady state in every cell.
    #[arg(long)]
    pub physical: bool,
    /// Comma-separated subset of `csv,matrix`.
    #[arg(long, value_delimiter = ',')]
    pub formats: Option<Vec<String>>,
}

impl RunArgs {
    /// Merges flags over the config file (flags win).
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match (&self.preset, &self.config) {
            (Some(p), None) => RunConfig::from_preset(p),
            (None, Some(path)) => RunConfig::from_file(path)?,
            _ => return Err(CliError::Config("give exactly one of --preset or --config".into())),
        };
        if let Some(out) = &self.out {
            cfg.output_path = out.clone();
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(g) = &self.grid {
            cfg.grid = Some(parse_grid(g)?);
        }
        if self.physical {
            cfg.physical = true;
        }
        if let Some(f) = &self.formats {
            let mut formats = f.iter().map(|s| s.parse()).collect::<Result<Vec<OutputFormat>, _>>()?;
            formats.sort();
            formats.dedup();
            cfg.output_formats = formats;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Outcome of a completed run.
#[derive(Debug)]
pub struct RunOutcome {
    pub result: SweepResult,
    pub files: Vec<PathBuf>,
    pub exit_code: u8,
}

/// Runs the sweep described by `cfg` and writes the requested files.
pub fn execute(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let spec = cfg.spec()?;
    let result = run_sweep(&spec, cfg.workers).map_err(|e| CliError::Config(e.to_string()))?;
    std::fs::create_dir_all(&cfg.output_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", cfg.output_path.display())))?;
    let mut files = Vec::new();
    for format in &cfg.output_formats {
        match format {
            OutputFormat::Csv => files.push(write_csv(&cfg.output_path, &result)?),
            OutputFormat::Matrix => files.extend(write_matrices(&cfg.output_path, &result)?),
        }
    }
    let exit_code = if result.failed_fraction() > FAILURE_THRESHOLD { EXIT_NUMERICAL } else { EXIT_OK };
    Ok(RunOutcome { result, files, exit_code })
}

/// Human-readable preset table.
pub fn list_presets_table() -> String {
    let mut out = format!(
        "{:<7} {:<4} {:<44} {:>7} {:>6} {:>7} {:>7} {:>7} {:>7} {:>6} {:>6}  {}\n",
        "preset", "pair", "axes", "Da_eff", "Dc", "k_a", "k_c", "G_a", "G_c", "gamma", "T[K]", "description"
    );
    for info in preset_catalog() {
        let s = &info.spec;
        let b = &s.base;
        let axis = |a: &crate::sweep::Axis| format!("{}[{},{}]", a.parameter, a.min, a.max);
        let axes = match &s.axis2 {
            Some(a2) => format!("{} x {}", axis(&s.axis1), axis(a2)),
            None => axis(&s.axis1),
        };
        let pair = s.bipartitions.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("+");
        let t = s.temperature.map_or("axis".to_string(), |t| t.to_string());
        out.push_str(&format!(
            "{:<7} {:<4} {:<44} {:>7} {:>6} {:>7} {:>7} {:>7} {:>7} {:>6} {:>6}  {}\n",
            info.name, pair, axes, b.delta_a_eff, b.delta_c, b.kappa_a, b.kappa_c, b.g_a_lin, b.g_c, b.gamma_m, t,
            info.description
        ));
    }
    out
}

/// Same content as [`list_presets_table`], one `key=value` line per preset.
pub fn list_presets_machine() -> String {
    let mut out = String::new();
    for info in preset_catalog() {
        let mut fields: Vec<String> = info.fields().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        fields.push(format!("description=\"{}\"", info.description));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// Entry point shared by the binary.
pub fn main_with(cli: Cli) -> ExitCode {
    let code = match cli.command {
        Command::ListPresets { machine } => {
            let text = if machine { list_presets_machine() } else { list_presets_table() };
            match std::io::stdout().write_all(text.as_bytes()) {
                Ok(()) => EXIT_OK,
                Err(_) => EXIT_IO,
            }
        }
        Command::Run(args) => match args.resolve().and_then(|cfg| execute(&cfg)) {
            Ok(outcome) => {
                for line in summary_lines(&outcome.result) {
                    println!("{line}");
                }
                for f in &outcome.files {
                    println!("wrote {}", f.display());
                }
                if outcome.exit_code == EXIT_NUMERICAL {
                    eprintln!(
                        "error: numerical failure in {:.1}% of cells",
                        100.0 * outcome.result.failed_fraction()
                    );
                }
                outcome.exit_code
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    };
    ExitCode::from(code)
}
