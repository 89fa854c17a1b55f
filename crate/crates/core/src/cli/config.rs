//! Run configuration files.
//!
//! TOML, versioned by a top-level `version = 1`. Sections:
//!
//! ```toml
//! version = 1
//!
//! [run]
//! preset = "fig2a"           # or omit and give a [sweep] section
//! out = "results"
//! formats = ["csv", "matrix"]
//! workers = 4
//! grid = "51x51"              # optional override of the step counts
//! physical = false            # run the mean-field solver per cell
//!
//! [tolerances]                # optional, any subset
//! lyapunov_residual = 1e-10
//! stability_margin = 1e-9
//! steady_state_tol = 1e-12
//!
//! [sweep]
//! name = "custom"
//! bipartitions = ["CA", "BC"]
//! measures = ["entanglement", "discord_both"]
//! temperature = 210.0         # kelvin; or give base.n_th instead
//!
//! [sweep.base]
//! delta_a_eff = 1.0
//! delta_c = -1.0
//! g_a_lin = 0.003
//! g_c = 0.003
//! kappa_a = 0.003
//! kappa_c = 0.003
//! gamma_m = 0.005
//!
//! [sweep.axis1]
//! parameter = "delta_a_eff"
//! min = 0.0
//! max = 2.0
//! steps = 101
//! scale = "linear"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::measures::Bipartition;
use crate::model::{thermal_occupation, EffectiveParams, OMEGA_M_SI};
use crate::sweep::{figure_preset, Axis, MeasureSet, SweepSpec, Tolerances};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Matrix,
}

impl std::str::FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "matrix" => Ok(OutputFormat::Matrix),
            other => Err(CliError::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// Parses `"n1xn2"` or `"n1"`.
pub fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("grid `{s}` is not of the form N1xN2"));
    let mut parts = s.split(['x', 'X']);
    let n1: usize = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let n2: usize = match parts.next() {
        Some(p) => p.trim().parse().map_err(|_| bad())?,
        None => n1,
    };
    if parts.next().is_some() || n1 < 2 || n2 < 2 {
        return Err(bad());
    }
    Ok((n1, n2))
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    version: Option<u32>,
    #[serde(default)]
    run: RunSection,
    #[serde(default)]
    tolerances: ToleranceSection,
    sweep: Option<CustomSweep>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    preset: Option<String>,
    out: Option<PathBuf>,
    formats: Option<Vec<OutputFormat>>,
    workers: Option<usize>,
    grid: Option<String>,
    #[serde(default)]
    physical: bool,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ToleranceSection {
    lyapunov_residual: Option<f64>,
    stability_margin: Option<f64>,
    steady_state_tol: Option<f64>,
}

impl ToleranceSection {
    fn apply(&self, t: &mut Tolerances) {
        if let Some(v) = self.lyapunov_residual {
            t.lyapunov_residual = v;
        }
        if let Some(v) = self.stability_margin {
            t.stability_margin = v;
        }
        if let Some(v) = self.steady_state_tol {
            t.steady_state_tol = v;
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomSweep {
    name: String,
    #[serde(default)]
    description: String,
    base: BaseSection,
    temperature: Option<f64>,
    omega_m_si: Option<f64>,
    axis1: Axis,
    axis2: Option<Axis>,
    bipartitions: Option<Vec<Bipartition>>,
    measures: Option<Vec<MeasureSet>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseSection {
    delta_a_eff: f64,
    delta_c: f64,
    g_a_lin: f64,
    g_c: f64,
    kappa_a: f64,
    kappa_c: f64,
    gamma_m: f64,
    n_th: Option<f64>,
}

/// Where the sweep comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum RunMode {
    Preset(String),
    Custom(Box<SweepSpec>),
}

/// Fully resolved run request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    pub output_path: PathBuf,
    pub output_formats: Vec<OutputFormat>,
    pub workers: usize,
    pub grid: Option<(usize, usize)>,
    pub physical: bool,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_preset(name: &str) -> Self {
        Self {
            mode: RunMode::Preset(name.to_string()),
            output_path: PathBuf::from("."),
            output_formats: vec![OutputFormat::Csv, OutputFormat::Matrix],
            workers: default_workers(),
            grid: None,
            physical: false,
            tolerances: Tolerances::default(),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: FileConfig =
            toml::from_str(text).map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
        match file.version {
            Some(CONFIG_VERSION) => {}
            Some(v) => return Err(CliError::Config(format!("unsupported config version {v}"))),
            None => return Err(CliError::Config("config needs `version = 1`".into())),
        }
        let mode = match (file.run.preset, file.sweep) {
            (Some(p), None) => RunMode::Preset(p),
            (None, Some(s)) => RunMode::Custom(Box::new(s.into_spec()?)),
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either run.preset or [sweep], not both".into()))
            }
            (None, None) => return Err(CliError::Config("config needs run.preset or a [sweep] section".into())),
        };
        let mut tolerances = Tolerances::default();
        file.tolerances.apply(&mut tolerances);
        let cfg = Self {
            mode,
            output_path: file.run.out.unwrap_or_else(|| PathBuf::from(".")),
            output_formats: file.run.formats.unwrap_or_else(|| vec![OutputFormat::Csv, OutputFormat::Matrix]),
            workers: file.run.workers.unwrap_or_else(default_workers),
            grid: file.run.grid.as_deref().map(parse_grid).transpose()?,
            physical: file.run.physical,
            tolerances,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.workers == 0 {
            return Err(CliError::Config("workers must be >= 1".into()));
        }
        if self.output_formats.is_empty() {
            return Err(CliError::Config("no output formats requested".into()));
        }
        Ok(())
    }

    /// Sweep specification with grid, tolerance and mode overrides applied.
    pub fn spec(&self) -> Result<SweepSpec, CliError> {
        let mut spec = match &self.mode {
            RunMode::Preset(name) => figure_preset(name).map_err(|e| CliError::Config(e.to_string()))?,
            RunMode::Custom(s) => (**s).clone(),
        };
        if let Some((n1, n2)) = self.grid {
            spec = spec.with_grid(n1, n2);
        }
        spec.tolerances = self.tolerances;
        if self.physical {
            spec = spec.into_physical();
        }
        spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(spec)
    }
}

impl CustomSweep {
    fn into_spec(self) -> Result<SweepSpec, CliError> {
        let omega_m_si = self.omega_m_si.unwrap_or(OMEGA_M_SI);
        let b = self.base;
        let n_th = match (b.n_th, self.temperature) {
            (Some(n), None) => n,
            (None, Some(t)) => thermal_occupation(omega_m_si, t),
            (None, None) => 0.0,
            (Some(_), Some(_)) => {
                return Err(CliError::Config("give either sweep.temperature or sweep.base.n_th".into()))
            }
        };
        let base = EffectiveParams {
            delta_a_eff: b.delta_a_eff,
            delta_c: b.delta_c,
            g_a_lin: b.g_a_lin,
            g_c: b.g_c,
            kappa_a: b.kappa_a,
            kappa_c: b.kappa_c,
            gamma_m: b.gamma_m,
            omega_m: 1.0,
            n_th,
        };
        let mut spec = SweepSpec::new(&self.name, base, self.axis1);
        spec.description = self.description;
        spec.axis2 = self.axis2;
        spec.temperature = self.temperature;
        spec.omega_m_si = omega_m_si;
        if let Some(b) = self.bipartitions {
            spec.bipartitions = b;
        }
        if let Some(m) = self.measures {
            spec.measures = m;
        }
        if spec.name.is_empty() || spec.name.contains(['/', '\\']) {
            return Err(CliError::Config(format!("invalid sweep name `{}`", spec.name)));
        }
        Ok(spec)
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
