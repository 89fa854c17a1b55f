//! Bipartite Gaussian correlation measures computed from 4×4 sub-blocks of
//! the steady-state covariance matrix.
//!
//! All formulas use the vacuum-variance-1/2 convention and depend on the
//! block only through the local symplectic invariants `I1 = det Ψ1`,
//! `I2 = det Ψ2`, `I3 = det Ψ3` and `I4 = det V`.

mod discord;

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lindyn::CovarianceMatrix;

pub use discord::{entropy_f, gaussian_discord};

/// Values in `(-CLAMP_TOL, 0)` produced by rounding are reported as zero.
pub const CLAMP_TOL: f64 = 1e-9;
/// Smallest symplectic eigenvalue accepted as physical is `1/2 - PHYSICAL_TOL`.
pub const PHYSICAL_TOL: f64 = 1e-6;

const MODE_A: usize = 0;
const MODE_C: usize = 1;
const MODE_B: usize = 2;

/// Ordered pair of modes. The first mode supplies `Ψ1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Bipartition {
    /// cavity c (first) and cavity a (second)
    CA,
    /// molecular mode B (first) and cavity a (second)
    BA,
    /// molecular mode B (first) and cavity c (second)
    BC,
}

impl Bipartition {
    pub const ALL: [Bipartition; 3] = [Bipartition::CA, Bipartition::BA, Bipartition::BC];

    /// Mode indices `(first, second)` into the three-mode ordering `(a, c, B)`.
    pub fn modes(self) -> (usize, usize) {
        match self {
            Bipartition::CA => (MODE_C, MODE_A),
            Bipartition::BA => (MODE_B, MODE_A),
            Bipartition::BC => (MODE_B, MODE_C),
        }
    }

    /// Quadrature index pairs into the 6×6 basis.
    pub fn quadratures(self) -> ([usize; 2], [usize; 2]) {
        let (f, s) = self.modes();
        ([2 * f, 2 * f + 1], [2 * s, 2 * s + 1])
    }

    /// Lower-case suffix used in measure labels, e.g. `ca` in `E_ca`.
    pub fn suffix(self) -> &'static str {
        match self {
            Bipartition::CA => "ca",
            Bipartition::BA => "Ba",
            Bipartition::BC => "Bc",
        }
    }

    pub fn mode_names(self) -> (&'static str, &'static str) {
        match self {
            Bipartition::CA => ("c", "a"),
            Bipartition::BA => ("B", "a"),
            Bipartition::BC => ("B", "c"),
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Bipartition::CA => "CA",
            Bipartition::BA => "BA",
            Bipartition::BC => "BC",
        };
        f.write_str(s)
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CA" | "AC" => Ok(Bipartition::CA),
            "BA" | "AB" => Ok(Bipartition::BA),
            "BC" | "CB" => Ok(Bipartition::BC),
            _ => Err(Error::InvalidSpec(format!("unknown bipartition `{s}`"))),
        }
    }
}

/// Two-mode covariance matrix `[[Ψ1, Ψ3], [Ψ3ᵀ, Ψ2]]` with cached invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCM {
    full: Matrix4<f64>,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
}

impl TwoModeCM {
    pub fn new(full: Matrix4<f64>) -> Result<Self> {
        if full.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonPhysicalCM("non-finite entries".into()));
        }
        let scale = full.amax().max(1.0);
        if (full - full.transpose()).amax() > 1e-12 * scale {
            return Err(Error::NonPhysicalCM("matrix is not symmetric".into()));
        }
        let psi1: Matrix2<f64> = full.fixed_view::<2, 2>(0, 0).into_owned();
        let psi2: Matrix2<f64> = full.fixed_view::<2, 2>(2, 2).into_owned();
        let psi3: Matrix2<f64> = full.fixed_view::<2, 2>(0, 2).into_owned();
        Ok(Self {
            full,
            i1: psi1.determinant(),
            i2: psi2.determinant(),
            i3: psi3.determinant(),
            i4: full.determinant(),
        })
    }

    pub fn from_blocks(psi1: Matrix2<f64>, psi2: Matrix2<f64>, psi3: Matrix2<f64>) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&psi1);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&psi2);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&psi3);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&psi3.transpose());
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.full
    }

    pub fn psi1(&self) -> Matrix2<f64> {
        self.full.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn psi2(&self) -> Matrix2<f64> {
        self.full.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn psi3(&self) -> Matrix2<f64> {
        self.full.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Same state with the roles of the two modes exchanged.
    pub fn swapped(&self) -> Self {
        let p = [2, 3, 0, 1];
        let m = Matrix4::from_fn(|i, j| self.full[(p[i], p[j])]);
        Self { full: m, i1: self.i2, i2: self.i1, i3: self.i3, i4: self.i4 }
    }
}

pub fn extract_two_mode(v: &CovarianceMatrix, b: Bipartition) -> Result<TwoModeCM> {
    let (first, second) = b.quadratures();
    let idx = [first[0], first[1], second[0], second[1]];
    TwoModeCM::new(Matrix4::from_fn(|i, j| v.0[(idx[i], idx[j])]))
}

/// Below this ratio `(ν₊² - ν₋²) / Σ` the closed form loses about `√ε` to
/// cancellation and the pair is taken from the spectrum of `ΩV` instead.
const DEGENERATE_SPLIT: f64 = 1e-3;

/// Symplectic eigenvalues `(ν₋, ν₊)` from the invariants, `Σ = I1 + I2 + 2 I3`.
pub fn symplectic_eigenvalues(t: &TwoModeCM) -> Result<(f64, f64)> {
    let sigma = t.i1 + t.i2 + 2.0 * t.i3;
    let (minus, plus) = resolved_pair(&t.full, sigma, t.i4, false)?;
    if minus < 0.5 - PHYSICAL_TOL {
        return Err(Error::NonPhysicalCM(format!("smallest symplectic eigenvalue {minus} < 1/2")));
    }
    Ok((minus, plus))
}

/// Smallest symplectic eigenvalue of the partially transposed state,
/// `Σ̃ = I1 + I2 - 2 I3`.
pub fn pt_min_symplectic(t: &TwoModeCM) -> Result<f64> {
    let sigma = t.i1 + t.i2 - 2.0 * t.i3;
    Ok(resolved_pair(&t.full, sigma, t.i4, true)?.0)
}

fn resolved_pair(m: &Matrix4<f64>, sigma: f64, det: f64, transpose: bool) -> Result<(f64, f64)> {
    let (minus, plus) = eigen_pair(sigma, det)?;
    if plus * plus - minus * minus > DEGENERATE_SPLIT * sigma {
        return Ok((minus, plus));
    }
    spectrum_pair(m, transpose)
}

fn eigen_pair(sigma: f64, det: f64) -> Result<(f64, f64)> {
    let disc = sigma * sigma - 4.0 * det;
    if disc < -1e-12 || det < 0.0 || sigma < 0.0 {
        return Err(Error::NonPhysicalCM(format!("Σ = {sigma}, det = {det}")));
    }
    let plus_sq = (sigma + disc.max(0.0).sqrt()) / 2.0;
    if plus_sq <= 0.0 {
        return Ok((0.0, 0.0));
    }
    // ν₋² ν₊² = det avoids the cancellation in Σ - √disc
    Ok(((det / plus_sq).sqrt(), plus_sq.sqrt()))
}

/// `(ν₋, ν₊)` as moduli of the eigenvalues of `Ω V` (of `Ω V^PT` when `transpose`).
fn spectrum_pair(m: &Matrix4<f64>, transpose: bool) -> Result<(f64, f64)> {
    let mut v = *m;
    if transpose {
        for k in 0..4 {
            v[(3, k)] = -v[(3, k)];
            v[(k, 3)] = -v[(k, 3)];
        }
    }
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    let schur = (omega * v).try_schur(f64::EPSILON, 10_000).ok_or(Error::EigenFailure)?;
    let mut moduli: Vec<f64> = schur.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    Ok(((moduli[0] + moduli[1]) / 2.0, (moduli[2] + moduli[3]) / 2.0))
}

pub fn log_negativity(t: &TwoModeCM) -> Result<f64> {
    symplectic_eigenvalues(t)?;
    let gamma = pt_min_symplectic(t)?;
    Ok(negativity_from_pt(gamma))
}

fn negativity_from_pt(gamma: f64) -> f64 {
    (-(2.0 * gamma).ln()).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SteeringDirection {
    /// first mode steers the second
    FirstToSecond,
    SecondToFirst,
}

/// Gaussian steerability `max[0, ½ ln(det V_steering / (4 det V))]`, where
/// `V_steering` is the local block of the steering mode.
pub fn steering(t: &TwoModeCM, direction: SteeringDirection) -> Result<f64> {
    symplectic_eigenvalues(t)?;
    if t.i4 <= 1e-30 {
        return Err(Error::DegenerateDeterminant(t.i4));
    }
    let local = match direction {
        SteeringDirection::FirstToSecond => t.i1,
        SteeringDirection::SecondToFirst => t.i2,
    };
    Ok((0.5 * (local / (4.0 * t.i4)).ln()).max(0.0))
}

/// All measures of one bipartition of one steady state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub e_n: f64,
    pub steer_12: f64,
    pub steer_21: f64,
    pub discord_12: f64,
    pub discord_21: f64,
    pub nu_minus_pt: f64,
    pub stable: bool,
}

impl CorrelationReport {
    pub fn get(&self, m: MeasureKind) -> f64 {
        match m {
            MeasureKind::Entanglement => self.e_n,
            MeasureKind::Steer12 => self.steer_12,
            MeasureKind::Steer21 => self.steer_21,
            MeasureKind::Discord12 => self.discord_12,
            MeasureKind::Discord21 => self.discord_21,
            MeasureKind::NuMinusPt => self.nu_minus_pt,
        }
    }
}

/// Individual scalar columns of a [`CorrelationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    Entanglement,
    Steer12,
    Steer21,
    Discord12,
    Discord21,
    NuMinusPt,
}

impl MeasureKind {
    pub fn column(self) -> &'static str {
        match self {
            MeasureKind::Entanglement => "E_n",
            MeasureKind::Steer12 => "steer_12",
            MeasureKind::Steer21 => "steer_21",
            MeasureKind::Discord12 => "discord_12",
            MeasureKind::Discord21 => "discord_21",
            MeasureKind::NuMinusPt => "nu_minus_pt",
        }
    }

    /// Label in the figure notation, e.g. `E_ca`, `G_c->a`, `D_Ba`.
    pub fn label(self, b: Bipartition) -> String {
        let (first, second) = b.mode_names();
        match self {
            MeasureKind::Entanglement => format!("E_{}", b.suffix()),
            MeasureKind::Steer12 => format!("G_{first}->{second}"),
            MeasureKind::Steer21 => format!("G_{second}->{first}"),
            MeasureKind::Discord12 => format!("D_{}", b.suffix()),
            MeasureKind::Discord21 => format!("D_{second}{first}"),
            MeasureKind::NuMinusPt => format!("nu_pt_{}", b.suffix()),
        }
    }
}

pub fn full_report(v: &CovarianceMatrix, b: Bipartition) -> Result<CorrelationReport> {
    report_for(&extract_two_mode(v, b)?)
}

/// Every measure evaluated on one two-mode state.
pub fn report_for(t: &TwoModeCM) -> Result<CorrelationReport> {
    symplectic_eigenvalues(t)?;
    let nu_minus_pt = pt_min_symplectic(t)?;
    let e_n = negativity_from_pt(nu_minus_pt);
    let steer_12 = steering(t, SteeringDirection::FirstToSecond)?;
    let steer_21 = steering(t, SteeringDirection::SecondToFirst)?;
    let discord_12 = gaussian_discord(t)?;
    let discord_21 = gaussian_discord(&t.swapped())?;

    if (steer_12 > CLAMP_TOL || steer_21 > CLAMP_TOL) && e_n <= CLAMP_TOL {
        return Err(Error::NonPhysicalCM(format!(
            "steering ({steer_12}, {steer_21}) without entanglement"
        )));
    }
    Ok(CorrelationReport { e_n, steer_12, steer_21, discord_12, discord_21, nu_minus_pt, stable: true })
}


#[cfg(test)]
mod tests {
    use super::testing::*;
    use super::*;
    use nalgebra::Matrix6;

    fn vacuum() -> TwoModeCM {
        thermal_pair(0.0, 0.0)
    }

    #[test]
    fn extraction_gathers_blocks() {
        let v = CovarianceMatrix::vacuum();
        for b in Bipartition::ALL {
            let t = extract_two_mode(&v, b).unwrap();
            assert_eq!(t.psi1(), Matrix2::identity() * 0.5);
            assert_eq!(t.psi2(), Matrix2::identity() * 0.5);
            assert!((t.i4 - 1.0 / 16.0).abs() < 1e-16);
            assert_eq!(t.i3, 0.0);
        }
        let m = Matrix6::from_fn(|i, j| if i == j { 1.0 + i as f64 } else { 0.0 });
        let t = extract_two_mode(&CovarianceMatrix(m), Bipartition::CA).unwrap();
        assert_eq!(t.psi1(), Matrix2::new(3.0, 0.0, 0.0, 4.0));
        assert_eq!(t.psi2(), Matrix2::new(1.0, 0.0, 0.0, 2.0));
        assert_eq!(t.psi3(), Matrix2::zeros());
    }

    #[test]
    fn invariants_match_direct_determinants() {
        let t = tmsv(0.4);
        let m = t.matrix();
        assert!((t.i4 - m.determinant()).abs() < 1e-14);
        assert!((t.i1 - m.fixed_view::<2, 2>(0, 0).determinant()).abs() < 1e-14);
    }

    #[test]
    fn symplectic_examples() {
        let (m, p) = symplectic_eigenvalues(&vacuum()).unwrap();
        assert!((m - 0.5).abs() < 1e-15 && (p - 0.5).abs() < 1e-15);
        let (m, p) = symplectic_eigenvalues(&thermal_pair(2.0, 0.7)).unwrap();
        assert!((m - 1.2).abs() < 1e-12 && (p - 2.5).abs() < 1e-12);
        for r in [0.1, 0.5, 1.0, 2.0] {
            let (m, p) = symplectic_eigenvalues(&tmsv(r)).unwrap();
            assert!((m - 0.5).abs() < 1e-9 && (p - 0.5).abs() < 1e-9, "r = {r}: {m} {p}");
        }
    }

    #[test]
    fn non_physical_input_is_rejected() {
        let t = thermal_pair(-0.3, 0.0);
        assert!(matches!(symplectic_eigenvalues(&t), Err(Error::NonPhysicalCM(_))));
        assert!(log_negativity(&t).is_err());
        assert!(matches!(
            TwoModeCM::new(Matrix4::from_fn(|i, j| (i * 4 + j) as f64)),
            Err(Error::NonPhysicalCM(_))
        ));
    }

    #[test]
    fn log_negativity_examples() {
        assert_eq!(log_negativity(&vacuum()).unwrap(), 0.0);
        assert_eq!(log_negativity(&thermal_pair(1.0, 3.0)).unwrap(), 0.0);
        let e = log_negativity(&tmsv(1.0)).unwrap();
        assert!((e - 2.0).abs() < 1e-9, "{e}");
        assert!((pt_min_symplectic(&tmsv(1.0)).unwrap() - (-2.0f64).exp() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn steering_examples() {
        for dir in [SteeringDirection::FirstToSecond, SteeringDirection::SecondToFirst] {
            assert_eq!(steering(&vacuum(), dir).unwrap(), 0.0);
            let g = steering(&tmsv(1.0), dir).unwrap();
            assert!((g - 2f64.cosh().ln()).abs() < 1e-9);
        }
        assert!((2f64.cosh().ln() - 1.325).abs() < 1e-3);
    }

    #[test]
    fn lossy_arm_gives_one_way_steering() {
        let t = lossy_second_arm(&tmsv(1.0), 0.3);
        let g12 = steering(&t, SteeringDirection::FirstToSecond).unwrap();
        let g21 = steering(&t, SteeringDirection::SecondToFirst).unwrap();
        // oracle: I4 = det after loss, I_k local determinants
        let i4 = t.matrix().determinant();
        let oracle12 = (0.5 * (t.psi1().determinant() / (4.0 * i4)).ln()).max(0.0);
        let oracle21 = (0.5 * (t.psi2().determinant() / (4.0 * i4)).ln()).max(0.0);
        assert!((g12 - oracle12).abs() < 1e-12 && (g21 - oracle21).abs() < 1e-12);
        // the unattenuated mode can steer the lossy one, not the reverse
        assert!(g12 > 0.1, "{g12}");
        assert_eq!(g21, 0.0);
        assert!(log_negativity(&t).unwrap() > 0.0);
    }

    #[test]
    fn degenerate_determinant_is_reported() {
        let t = TwoModeCM::from_blocks(Matrix2::zeros(), Matrix2::zeros(), Matrix2::zeros()).unwrap();
        assert!(steering(&t, SteeringDirection::FirstToSecond).is_err());
    }

    #[test]
    fn full_report_on_vacuum_is_zero() {
        let r = full_report(&CovarianceMatrix::vacuum(), Bipartition::BC).unwrap();
        assert_eq!(r.e_n, 0.0);
        assert_eq!(r.steer_12, 0.0);
        assert_eq!(r.steer_21, 0.0);
        assert_eq!(r.discord_12, 0.0);
        assert_eq!(r.discord_21, 0.0);
        assert!((r.nu_minus_pt - 0.5).abs() < 1e-15);
        assert!(r.stable);
    }

    #[test]
    fn symmetric_state_steers_symmetrically() {
        let r = report_for(&tmsv(0.73)).unwrap();
        assert_eq!(r.steer_12, r.steer_21);
    }

    #[test]
    fn swapped_exchanges_roles() {
        let t = lossy_second_arm(&tmsv(0.5), 0.6);
        let s = t.swapped();
        assert_eq!(s.psi1(), t.psi2());
        assert_eq!(s.psi3(), t.psi3().transpose());
        assert_eq!(s.i1, t.i2);
    }

    #[test]
    fn labels() {
        assert_eq!(MeasureKind::Entanglement.label(Bipartition::CA), "E_ca");
        assert_eq!(MeasureKind::Steer12.label(Bipartition::CA), "G_c->a");
        assert_eq!(MeasureKind::Steer12.label(Bipartition::BC), "G_B->c");
        assert_eq!(MeasureKind::Discord12.label(Bipartition::BA), "D_Ba");
        assert_eq!("bc".parse::<Bipartition>().unwrap(), Bipartition::BC);
    }
}
