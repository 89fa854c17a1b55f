//! Correlation reports over 1-D and 2-D parameter grids.
//!
//! Every cell is resolved, checked for stability and solved independently.
//! Results are written into storage addressed by cell index, so the grid does
//! not depend on the number of workers or the evaluation order.

mod presets;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindyn::{build_diffusion, build_drift, is_stable_eigen, solve_lyapunov};
use crate::measures::{full_report, Bipartition, CorrelationReport, MeasureKind};
use crate::model::{
    effective_from_physical, solve_steady_state, thermal_occupation, Bath, EffectiveParams,
    PhysicalParams, SolverConfig, OMEGA_M_SI,
};

pub use presets::{figure_preset, preset_catalog, PresetInfo, PRESET_NAMES};

/// Swept parameter. Frequencies are in units of `omega_m`, temperature in kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    DeltaAEff,
    DeltaC,
    /// sets both linearized couplings
    GJoint,
    /// sets both cavity decay rates
    KappaJoint,
    Temperature,
    GALin,
    GC,
    KappaA,
    KappaC,
    NTh,
}

impl AxisParam {
    pub fn name(self) -> &'static str {
        match self {
            AxisParam::DeltaAEff => "delta_a_eff",
            AxisParam::DeltaC => "delta_c",
            AxisParam::GJoint => "g_joint",
            AxisParam::KappaJoint => "kappa_joint",
            AxisParam::Temperature => "temperature",
            AxisParam::GALin => "g_a_lin",
            AxisParam::GC => "g_c",
            AxisParam::KappaA => "kappa_a",
            AxisParam::KappaC => "kappa_c",
            AxisParam::NTh => "n_th",
        }
    }

    /// Smallest admissible value: rates must be positive, couplings,
    /// temperature and occupation non-negative, detunings unrestricted.
    fn domain_ok(self, min: f64) -> bool {
        match self {
            AxisParam::DeltaAEff | AxisParam::DeltaC => true,
            AxisParam::KappaJoint | AxisParam::KappaA | AxisParam::KappaC => min > 0.0,
            _ => min >= 0.0,
        }
    }

    fn touches(self) -> &'static [&'static str] {
        match self {
            AxisParam::GJoint => &["g_a_lin", "g_c"],
            AxisParam::KappaJoint => &["kappa_a", "kappa_c"],
            AxisParam::Temperature | AxisParam::NTh => &["n_th"],
            AxisParam::DeltaAEff => &["delta_a_eff"],
            AxisParam::DeltaC => &["delta_c"],
            AxisParam::GALin => &["g_a_lin"],
            AxisParam::GC => &["g_c"],
            AxisParam::KappaA => &["kappa_a"],
            AxisParam::KappaC => &["kappa_c"],
        }
    }
}

impl FromStr for AxisParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            AxisParam::DeltaAEff,
            AxisParam::DeltaC,
            AxisParam::GJoint,
            AxisParam::KappaJoint,
            AxisParam::Temperature,
            AxisParam::GALin,
            AxisParam::GC,
            AxisParam::KappaA,
            AxisParam::KappaC,
            AxisParam::NTh,
        ];
        all.into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown axis parameter `{s}`")))
    }
}

impl fmt::Display for AxisParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub parameter: AxisParam,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Axis {
    pub fn linear(parameter: AxisParam, min: f64, max: f64, steps: usize) -> Self {
        Self { parameter, min, max, steps, scale: Scale::Linear }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidSpec(format!(
                "axis {}: need finite min < max, got [{}, {}]",
                self.parameter, self.min, self.max
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidSpec(format!("axis {}: steps must be >= 2", self.parameter)));
        }
        if self.scale == Scale::Log && self.min <= 0.0 {
            return Err(Error::InvalidSpec(format!(
                "axis {}: logarithmic scale needs min > 0",
                self.parameter
            )));
        }
        if !self.parameter.domain_ok(self.min) {
            return Err(Error::InvalidSpec(format!(
                "axis {}: minimum {} is outside the parameter domain",
                self.parameter, self.min
            )));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        let t = i as f64 / (self.steps - 1) as f64;
        match self.scale {
            Scale::Linear => self.min + (self.max - self.min) * t,
            Scale::Log => self.min * (self.max / self.min).powf(t),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }
}

/// Groups of measures requested from a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureSet {
    Entanglement,
    SteeringBoth,
    DiscordBoth,
}

impl MeasureSet {
    pub fn kinds(self) -> &'static [MeasureKind] {
        match self {
            MeasureSet::Entanglement => &[MeasureKind::Entanglement],
            MeasureSet::SteeringBoth => &[MeasureKind::Steer12, MeasureKind::Steer21],
            MeasureSet::DiscordBoth => &[MeasureKind::Discord12, MeasureKind::Discord21],
        }
    }

    fn prefix(self) -> &'static str {
        match self {
            MeasureSet::Entanglement => "E",
            MeasureSet::SteeringBoth => "G",
            MeasureSet::DiscordBoth => "D",
        }
    }
}

impl FromStr for MeasureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "entanglement" => Ok(MeasureSet::Entanglement),
            "steering_both" | "steering" => Ok(MeasureSet::SteeringBoth),
            "discord_both" | "discord" => Ok(MeasureSet::DiscordBoth),
            _ => Err(Error::InvalidSpec(format!("unknown measure set `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Cells with max Re λ ≥ -margin are unstable.
    pub stability_margin: f64,
    /// Maximum accepted `‖AV + VAᵀ + D‖_max / ‖D‖_max`.
    pub lyapunov_residual: f64,
    pub steady_state_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { stability_margin: 1e-9, lyapunov_residual: 1e-10, steady_state_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    /// One-line description of the regime the spec reproduces.
    pub description: String,
    pub base: EffectiveParams,
    /// Bath temperature behind `base.n_th`, if it came from one.
    pub temperature: Option<f64>,
    /// Physical vibrational angular frequency (rad/s) for kelvin conversions.
    pub omega_m_si: f64,
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub bipartitions: Vec<Bipartition>,
    pub measures: Vec<MeasureSet>,
    /// When set, every cell runs the mean-field solver on these parameters
    /// (with the axis values substituted) instead of using `base` directly.
    pub physical: Option<PhysicalParams>,
    pub tolerances: Tolerances,
}

impl SweepSpec {
    pub fn new(name: &str, base: EffectiveParams, axis1: Axis) -> Self {
        Self {
            name: name.to_string(),
            description: String::new(),
            base,
            temperature: None,
            omega_m_si: OMEGA_M_SI,
            axis1,
            axis2: None,
            bipartitions: Bipartition::ALL.to_vec(),
            measures: vec![MeasureSet::Entanglement, MeasureSet::SteeringBoth, MeasureSet::DiscordBoth],
            physical: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate().map_err(|e| Error::InvalidSpec(e.to_string()))?;
        self.axis1.validate()?;
        if let Some(ax2) = &self.axis2 {
            ax2.validate()?;
            let overlap = self.axis1.parameter.touches().iter().any(|f| ax2.parameter.touches().contains(f));
            if overlap {
                return Err(Error::InvalidSpec(format!(
                    "axes {} and {} set the same parameter",
                    self.axis1.parameter, ax2.parameter
                )));
            }
        }
        if self.bipartitions.is_empty() {
            return Err(Error::InvalidSpec("no bipartitions requested".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::InvalidSpec("no measures requested".into()));
        }
        let uses_kelvin = self.axis1.parameter == AxisParam::Temperature
            || self.axis2.is_some_and(|a| a.parameter == AxisParam::Temperature);
        if uses_kelvin && !(self.omega_m_si > 0.0) {
            return Err(Error::InvalidSpec("temperature axis needs omega_m_si > 0".into()));
        }
        let t = &self.tolerances;
        if !(t.stability_margin >= 0.0 && t.lyapunov_residual > 0.0 && t.steady_state_tol > 0.0) {
            return Err(Error::InvalidSpec("tolerances must be positive".into()));
        }
        if let Some(p) = &self.physical {
            p.validate().map_err(|e| Error::InvalidSpec(e.to_string()))?;
        }
        Ok(())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.axis1.steps, self.axis2.map_or(1, |a| a.steps))
    }

    /// Replaces the step counts; `steps2` is ignored for 1-D specs.
    pub fn with_grid(mut self, steps1: usize, steps2: usize) -> Self {
        self.axis1.steps = steps1;
        if let Some(ax2) = self.axis2.as_mut() {
            ax2.steps = steps2;
        }
        self
    }

    /// Switches to the mean-field pipeline: the effective base becomes bare
    /// laboratory parameters (drive 16 ω_m on both cavities, 10⁶ molecules).
    pub fn into_physical(mut self) -> Self {
        let w = self.omega_m_si;
        let n = 1_000_000u64;
        let sqrt_n = (n as f64).sqrt();
        let b = &self.base;
        self.physical = Some(PhysicalParams {
            omega_m: w,
            kappa_a: b.kappa_a * w,
            kappa_c: b.kappa_c * w,
            gamma_m: b.gamma_m * w,
            g_a: b.g_a_lin * w / sqrt_n,
            g_c: b.g_c * w / sqrt_n,
            n_molecules: n,
            delta_a: b.delta_a_eff * w,
            delta_c: b.delta_c * w,
            drive_a: 16.0 * w,
            drive_c: 16.0 * w,
            bath: match self.temperature {
                Some(t) => Bath::Temperature(t),
                None => Bath::Occupation(b.n_th),
            },
        });
        self
    }

    /// File-name tag: the headline measure for single-group, single-pair
    /// specs (`E_ca`), the pair suffix for multi-measure specs (`ca`).
    pub fn headline(&self) -> String {
        match (self.measures.as_slice(), self.bipartitions.as_slice()) {
            ([m], [b]) => format!("{}_{}", m.prefix(), b.suffix()),
            (_, [b]) => b.suffix().to_string(),
            _ => "all".to_string(),
        }
    }

    /// Effective parameters of cell `(v1, v2)`; runs the mean-field solver in physical mode.
    pub fn resolve(&self, v1: f64, v2: Option<f64>) -> Result<EffectiveParams> {
        let mut settings = vec![(self.axis1.parameter, v1)];
        if let (Some(ax2), Some(v2)) = (self.axis2, v2) {
            settings.push((ax2.parameter, v2));
        }
        match &self.physical {
            None => {
                let mut e = self.base;
                for (p, v) in settings {
                    self.apply_effective(&mut e, p, v);
                }
                e.validate()?;
                Ok(e)
            }
            Some(phys) => {
                let mut p = phys.clone();
                for (param, v) in settings {
                    apply_physical(&mut p, param, v);
                }
                let cfg = SolverConfig { tol: self.tolerances.steady_state_tol, ..SolverConfig::default() };
                let ss = solve_steady_state(&p, &cfg)?;
                effective_from_physical(&p, &ss)
            }
        }
    }

    fn apply_effective(&self, e: &mut EffectiveParams, p: AxisParam, v: f64) {
        match p {
            AxisParam::DeltaAEff => e.delta_a_eff = v,
            AxisParam::DeltaC => e.delta_c = v,
            AxisParam::GJoint => {
                e.g_a_lin = v;
                e.g_c = v;
            }
            AxisParam::KappaJoint => {
                e.kappa_a = v;
                e.kappa_c = v;
            }
            AxisParam::Temperature => e.n_th = thermal_occupation(self.omega_m_si, v),
            AxisParam::GALin => e.g_a_lin = v,
            AxisParam::GC => e.g_c = v,
            AxisParam::KappaA => e.kappa_a = v,
            AxisParam::KappaC => e.kappa_c = v,
            AxisParam::NTh => e.n_th = v,
        }
    }
}

/// Physical-mode substitution: frequencies are scaled by `omega_m`, couplings
/// set the bare collective couplings, `delta_a_eff` sets the bare detuning.
fn apply_physical(p: &mut PhysicalParams, param: AxisParam, v: f64) {
    let w = p.omega_m;
    let single = |big_g: f64, n: u64| big_g * w / (n as f64).sqrt();
    match param {
        AxisParam::DeltaAEff => p.delta_a = v * w,
        AxisParam::DeltaC => p.delta_c = v * w,
        AxisParam::GJoint => {
            p.g_a = single(v, p.n_molecules);
            p.g_c = single(v, p.n_molecules);
        }
        AxisParam::KappaJoint => {
            p.kappa_a = v * w;
            p.kappa_c = v * w;
        }
        AxisParam::Temperature => p.bath = Bath::Temperature(v),
        AxisParam::GALin => p.g_a = single(v, p.n_molecules),
        AxisParam::GC => p.g_c = single(v, p.n_molecules),
        AxisParam::KappaA => p.kappa_a = v * w,
        AxisParam::KappaC => p.kappa_c = v * w,
        AxisParam::NTh => p.bath = Bath::Occupation(v),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CellStatus {
    Ok,
    Unstable,
    /// Numerical failure (solver, eigen-decomposition, residual or physicality check).
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub status: CellStatus,
    /// Drift matrix passed the stability test (false also when it was never reached).
    pub stable: bool,
    /// One report per requested bipartition, in spec order; empty unless `status` is `Ok`.
    pub reports: Vec<CorrelationReport>,
    /// Absolute Lyapunov residual, when a covariance matrix was computed.
    pub residual: Option<f64>,
    /// `‖D‖_max` of the cell, for relative residuals.
    pub diffusion_scale: Option<f64>,
}

impl Cell {
    pub fn report(&self, idx: usize) -> Option<&CorrelationReport> {
        self.reports.get(idx)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub axis1_values: Vec<f64>,
    pub axis2_values: Option<Vec<f64>>,
    /// Row-major, `axis1` indexes rows.
    pub cells: Vec<Cell>,
    pub code_version: String,
}

impl SweepResult {
    pub fn dims(&self) -> (usize, usize) {
        self.spec.dims()
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        let (_, n2) = self.dims();
        &self.cells[i * n2 + j]
    }

    pub fn bipartition_index(&self, b: Bipartition) -> Option<usize> {
        self.spec.bipartitions.iter().position(|x| *x == b)
    }

    /// `value[i][j]` of one measure; `None` where no report exists.
    pub fn field(&self, b: Bipartition, m: MeasureKind) -> Vec<Vec<Option<f64>>> {
        let idx = self.bipartition_index(b);
        let (n1, n2) = self.dims();
        (0..n1)
            .map(|i| {
                (0..n2)
                    .map(|j| idx.and_then(|k| self.cell(i, j).report(k)).map(|r| r.get(m)))
                    .collect()
            })
            .collect()
    }

    pub fn stable_fraction(&self) -> f64 {
        let stable = self.cells.iter().filter(|c| c.status == CellStatus::Ok).count();
        stable as f64 / self.cells.len() as f64
    }

    pub fn failed_fraction(&self) -> f64 {
        let failed = self.cells.iter().filter(|c| matches!(c.status, CellStatus::Failed(_))).count();
        failed as f64 / self.cells.len() as f64
    }
}

/// Evaluates one cell; errors are captured in the returned status.
pub fn evaluate_cell(spec: &SweepSpec, v1: f64, v2: Option<f64>) -> Cell {
    let mut cell = Cell {
        axis1: v1,
        axis2: v2,
        status: CellStatus::Ok,
        stable: false,
        reports: Vec::new(),
        residual: None,
        diffusion_scale: None,
    };
    let e = match spec.resolve(v1, v2) {
        Ok(e) => e,
        Err(err) => {
            cell.status = CellStatus::Failed(err.to_string());
            return cell;
        }
    };
    let drift = build_drift(&e);
    match is_stable_eigen(&drift, spec.tolerances.stability_margin) {
        Ok(true) => cell.stable = true,
        Ok(false) => {
            cell.status = CellStatus::Unstable;
            return cell;
        }
        Err(err) => {
            cell.status = CellStatus::Failed(err.to_string());
            return cell;
        }
    }
    let diffusion = build_diffusion(&e);
    let sol = match solve_lyapunov(&drift, &diffusion) {
        Ok(sol) => sol,
        Err(err) => {
            cell.status = CellStatus::Failed(err.to_string());
            return cell;
        }
    };
    cell.residual = Some(sol.residual);
    cell.diffusion_scale = Some(diffusion.max_abs());
    if sol.residual > spec.tolerances.lyapunov_residual * diffusion.max_abs() {
        cell.status = CellStatus::Failed(format!("Lyapunov residual {:e} above tolerance", sol.residual));
        return cell;
    }
    let mut reports = Vec::with_capacity(spec.bipartitions.len());
    for &b in &spec.bipartitions {
        match full_report(&sol.covariance, b) {
            Ok(r) => reports.push(r),
            Err(err) => {
                cell.status = CellStatus::Failed(format!("{b}: {err}"));
                return cell;
            }
        }
    }
    cell.reports = reports;
    cell
}

/// Evaluates the full grid on `workers` threads.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    if workers == 0 {
        return Err(Error::InvalidSpec("workers must be >= 1".into()));
    }
    let axis1_values = spec.axis1.values();
    let axis2_values = spec.axis2.map(|a| a.values());
    let (n1, n2) = spec.dims();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start worker pool: {e}")))?;
    let cells: Vec<Cell> = pool.install(|| {
        (0..n1 * n2)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n2, k % n2);
                evaluate_cell(spec, axis1_values[i], axis2_values.as_ref().map(|v| v[j]))
            })
            .collect()
    });

    Ok(SweepResult {
        spec: spec.clone(),
        axis1_values,
        axis2_values,
        cells,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}
