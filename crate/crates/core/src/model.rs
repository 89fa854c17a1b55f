//! Physical parameters, unit conversion and the mean-field steady state.
//!
//! Everything downstream of this module works in units of the molecular
//! vibrational frequency `omega_m` with `hbar = 1`. [`PhysicalParams`] may be
//! given in any consistent frequency unit (rad/s when a bath temperature is
//! used); [`EffectiveParams`] is always normalized to `omega_m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (CODATA 2018, exact).
pub const K_B: f64 = 1.380_649e-23;

/// Molecular vibrational angular frequency used throughout the figure presets, 2π·30 THz.
pub const OMEGA_M_SI: f64 = 2.0 * std::f64::consts::PI * 30.0e12;

/// Thermal environment of the collective molecular mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bath {
    /// Bath temperature in kelvin; requires `omega_m` in rad/s.
    Temperature(f64),
    /// Mean thermal phonon number given directly.
    Occupation(f64),
}

impl Bath {
    pub fn occupation(&self, omega_m: f64) -> f64 {
        match *self {
            Bath::Temperature(t) => thermal_occupation(omega_m, t),
            Bath::Occupation(n) => n,
        }
    }
}

/// Laboratory-frame inputs. All frequencies share the unit of `omega_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub omega_m: f64,
    pub kappa_a: f64,
    pub kappa_c: f64,
    pub gamma_m: f64,
    /// Single-molecule optomechanical couplings.
    pub g_a: f64,
    pub g_c: f64,
    pub n_molecules: u64,
    /// Bare cavity detunings.
    pub delta_a: f64,
    pub delta_c: f64,
    pub drive_a: f64,
    pub drive_c: f64,
    pub bath: Bath,
}

impl PhysicalParams {
    /// Experimental parameter set of the molecular double-cavity device, in rad/s.
    ///
    /// The bare detunings are not part of the device set; they default to
    /// the red (`delta_a = omega_m`) and blue (`delta_c = -omega_m`) sidebands.
    pub fn reference() -> Self {
        let two_pi = 2.0 * std::f64::consts::PI;
        let omega_m = OMEGA_M_SI;
        Self {
            omega_m,
            kappa_a: two_pi * 30.0e12,
            kappa_c: two_pi * 0.5e12,
            gamma_m: two_pi * 0.16e12,
            g_a: two_pi * 0.08e9,
            g_c: two_pi * 0.1e9,
            n_molecules: 1_000_000,
            delta_a: omega_m,
            delta_c: -omega_m,
            drive_a: 16.0 * omega_m,
            drive_c: 16.0 * omega_m,
            bath: Bath::Temperature(210.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_m", self.omega_m),
            ("kappa_a", self.kappa_a),
            ("kappa_c", self.kappa_c),
            ("gamma_m", self.gamma_m),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        let non_negative = [
            ("g_a", self.g_a),
            ("g_c", self.g_c),
            ("drive_a", self.drive_a),
            ("drive_c", self.drive_c),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        for (name, v) in [("delta_a", self.delta_a), ("delta_c", self.delta_c)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        if self.n_molecules == 0 {
            return Err(Error::InvalidParameter("n_molecules must be >= 1".into()));
        }
        match self.bath {
            Bath::Temperature(t) if !(t.is_finite() && t >= 0.0) => {
                Err(Error::InvalidParameter(format!("temperature must be >= 0, got {t}")))
            }
            Bath::Occupation(n) if !(n.is_finite() && n >= 0.0) => {
                Err(Error::InvalidParameter(format!("n_th must be >= 0, got {n}")))
            }
            _ => Ok(()),
        }
    }

    pub fn collective_g_a(&self) -> f64 {
        collective_coupling(self.g_a, self.n_molecules)
    }

    pub fn collective_g_c(&self) -> f64 {
        collective_coupling(self.g_c, self.n_molecules)
    }
}

/// Direct inputs of the six-quadrature linearized model, in units of `omega_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub delta_a_eff: f64,
    pub delta_c: f64,
    pub g_a_lin: f64,
    pub g_c: f64,
    pub kappa_a: f64,
    pub kappa_c: f64,
    pub gamma_m: f64,
    pub omega_m: f64,
    pub n_th: f64,
}

impl EffectiveParams {
    /// Equal couplings and equal cavity decay rates, `omega_m = 1`.
    pub fn joint(
        delta_a_eff: f64,
        delta_c: f64,
        coupling: f64,
        kappa: f64,
        gamma_m: f64,
        n_th: f64,
    ) -> Self {
        Self {
            delta_a_eff,
            delta_c,
            g_a_lin: coupling,
            g_c: coupling,
            kappa_a: kappa,
            kappa_c: kappa,
            gamma_m,
            omega_m: 1.0,
            n_th,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("kappa_a", self.kappa_a),
            ("kappa_c", self.kappa_c),
            ("gamma_m", self.gamma_m),
            ("omega_m", self.omega_m),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        let non_negative = [("g_a_lin", self.g_a_lin), ("g_c", self.g_c), ("n_th", self.n_th)];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        for (name, v) in [("delta_a_eff", self.delta_a_eff), ("delta_c", self.delta_c)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
        }
        Ok(())
    }
}

/// Builds effective parameters verbatim, bypassing the mean-field solver.
pub fn effective_direct(params: EffectiveParams) -> Result<EffectiveParams> {
    params.validate()?;
    Ok(params)
}

/// Collective coupling `g·√N` of the symmetric molecular mode.
pub fn collective_coupling(g: f64, n: u64) -> f64 {
    g * (n as f64).sqrt()
}

/// Bose–Einstein occupation of a mode at angular frequency `omega` (rad/s) and
/// temperature `temperature` (K). Zero at zero temperature.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (K_B * temperature);
    1.0 / x.exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub relaxation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-12, max_iter: 100_000, relaxation: 0.5 }
    }
}

/// Mean amplitudes `(⟨a⟩, ⟨c⟩, ⟨B⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanAmplitudes {
    pub alpha_a: Complex64,
    pub alpha_c: Complex64,
    pub beta: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub alpha_a: Complex64,
    pub alpha_c: Complex64,
    pub beta: Complex64,
    pub converged: bool,
    pub iterations: usize,
    /// Max modulus of the three mean-field equations, in units of `omega_m`.
    pub residual: f64,
    /// Every distinct converged branch found by the multi-start search,
    /// including the reported one.
    pub branches: Vec<MeanAmplitudes>,
    pub multistable: bool,
}

impl SteadyState {
    pub fn amplitudes(&self) -> MeanAmplitudes {
        MeanAmplitudes { alpha_a: self.alpha_a, alpha_c: self.alpha_c, beta: self.beta }
    }
}

/// Mean-field equations with every frequency divided by `omega_m`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MeanField {
    pub delta_a: f64,
    pub delta_c: f64,
    pub kappa_a: f64,
    pub kappa_c: f64,
    pub gamma_m: f64,
    pub big_g_a: f64,
    pub big_g_c: f64,
    pub drive_a: f64,
    pub drive_c: f64,
}

impl MeanField {
    pub(crate) fn from_physical(p: &PhysicalParams) -> Self {
        let w = p.omega_m;
        Self {
            delta_a: p.delta_a / w,
            delta_c: p.delta_c / w,
            kappa_a: p.kappa_a / w,
            kappa_c: p.kappa_c / w,
            gamma_m: p.gamma_m / w,
            big_g_a: p.collective_g_a() / w,
            big_g_c: p.collective_g_c() / w,
            drive_a: p.drive_a / w,
            drive_c: p.drive_c / w,
        }
    }

    fn cavities(&self, beta: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let x = 2.0 * beta.re;
        let alpha_a = Complex64::from(self.drive_a)
            / (i * (self.delta_a + self.big_g_a * x) + self.kappa_a);
        let alpha_c =
            (Complex64::from(self.drive_c) - i * self.big_g_c * x) / (i * self.delta_c + self.kappa_c);
        (alpha_a, alpha_c)
    }

    fn beta_update(&self, alpha_a: Complex64, alpha_c: Complex64) -> Complex64 {
        let i = Complex64::i();
        (i * self.big_g_a * alpha_a.norm_sqr() + self.big_g_c * 2.0 * alpha_c.re)
            / (i + self.gamma_m)
    }

    /// Left-hand sides of the three mean-field equations.
    pub(crate) fn equations(&self, m: &MeanAmplitudes) -> [Complex64; 3] {
        let i = Complex64::i();
        let x = m.beta.conj() + m.beta;
        [
            -(i * self.delta_a + self.kappa_a) * m.alpha_a - i * self.big_g_a * m.alpha_a * x
                + self.drive_a,
            -(i * self.delta_c + self.kappa_c) * m.alpha_c - i * self.big_g_c * x + self.drive_c,
            -(i + self.gamma_m) * m.beta
                + i * self.big_g_a * m.alpha_a.norm_sqr()
                + self.big_g_c * (m.alpha_c.conj() + m.alpha_c),
        ]
    }

    pub(crate) fn residual(&self, m: &MeanAmplitudes) -> f64 {
        self.equations(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn iterate(&self, beta0: Complex64, cfg: &SolverConfig) -> (MeanAmplitudes, usize, f64, bool) {
        let mut beta = beta0;
        let mut best = (self.amplitudes(beta), f64::INFINITY);
        for it in 0..=cfg.max_iter {
            let m = self.amplitudes(beta);
            let r = self.residual(&m);
            if !r.is_finite() {
                return (best.0, it, best.1, false);
            }
            if r < best.1 {
                best = (m, r);
            }
            if r <= cfg.tol {
                return (m, it, r, true);
            }
            let target = self.beta_update(m.alpha_a, m.alpha_c);
            beta += cfg.relaxation * (target - beta);
        }
        (best.0, cfg.max_iter, best.1, false)
    }

    fn amplitudes(&self, beta: Complex64) -> MeanAmplitudes {
        let (alpha_a, alpha_c) = self.cavities(beta);
        MeanAmplitudes { alpha_a, alpha_c, beta }
    }
}

/// Solves the nonlinear mean-field equations by damped fixed-point iteration
/// on `β`, starting from `β = 0` and, when `G_a > 0`, also from the point
/// where the shifted detuning of cavity `a` vanishes.
pub fn solve_steady_state(p: &PhysicalParams, cfg: &SolverConfig) -> Result<SteadyState> {
    p.validate()?;
    if !(cfg.tol > 0.0) || !(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0) {
        return Err(Error::InvalidParameter(
            "solver tolerance must be > 0 and relaxation in (0, 1]".into(),
        ));
    }
    let mf = MeanField::from_physical(p);

    let mut starts = vec![Complex64::new(0.0, 0.0)];
    if mf.big_g_a > 0.0 && mf.delta_a != 0.0 {
        starts.push(Complex64::new(-mf.delta_a / (2.0 * mf.big_g_a), 0.0));
    }

    let mut reported: Option<SteadyState> = None;
    let mut branches: Vec<MeanAmplitudes> = Vec::new();
    let mut worst = (0, f64::INFINITY);
    for beta0 in starts {
        let (m, iterations, residual, converged) = mf.iterate(beta0, cfg);
        if !converged {
            if residual < worst.1 || worst.1.is_infinite() {
                worst = (iterations, residual);
            }
            continue;
        }
        let scale = 1.0 + m.beta.norm();
        if !branches.iter().any(|b| (b.beta - m.beta).norm() <= 1e-6 * scale) {
            branches.push(m);
        }
        if reported.is_none() {
            reported = Some(SteadyState {
                alpha_a: m.alpha_a,
                alpha_c: m.alpha_c,
                beta: m.beta,
                converged: true,
                iterations,
                residual,
                branches: Vec::new(),
                multistable: false,
            });
        }
    }

    match reported {
        Some(mut ss) => {
            ss.multistable = branches.len() > 1;
            ss.branches = branches;
            Ok(ss)
        }
        None => Err(Error::NonConvergence { iterations: worst.0, residual: worst.1 }),
    }
}

/// Linearizes around a converged steady state. The result is normalized to `omega_m`.
pub fn effective_from_physical(p: &PhysicalParams, ss: &SteadyState) -> Result<EffectiveParams> {
    if !ss.converged {
        return Err(Error::NonConvergence { iterations: ss.iterations, residual: ss.residual });
    }
    p.validate()?;
    let mf = MeanField::from_physical(p);
    let e = EffectiveParams {
        delta_a_eff: mf.delta_a + mf.big_g_a * (ss.beta + ss.beta.conj()).re,
        delta_c: mf.delta_c,
        g_a_lin: mf.big_g_a * ss.alpha_a.norm(),
        g_c: mf.big_g_c,
        kappa_a: mf.kappa_a,
        kappa_c: mf.kappa_c,
        gamma_m: mf.gamma_m,
        omega_m: 1.0,
        n_th: p.bath.occupation(p.omega_m),
    };
    e.validate()?;
    Ok(e)
}
