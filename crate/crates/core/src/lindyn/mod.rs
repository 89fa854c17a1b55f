//! Linearized fluctuation dynamics: drift and diffusion matrices, stability
//! and the steady-state covariance matrix.
//!
//! Quadrature ordering is `(δX_a, δY_a, δX_c, δY_c, δQ, δP)` with vacuum
//! variance 1/2.

mod lyapunov;
mod stability;

use nalgebra::{Matrix2, Matrix6};

use crate::error::{Error, Result};
use crate::model::EffectiveParams;

pub use lyapunov::{solve_lyapunov, LyapunovSolution};
pub use stability::{
    characteristic_polynomial, hurwitz_minor_signs, is_stable_eigen, is_stable_rh, max_real_eigenvalue,
};

pub const X_A: usize = 0;
pub const Y_A: usize = 1;
pub const X_C: usize = 2;
pub const Y_C: usize = 3;
pub const Q: usize = 4;
pub const P: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(pub Matrix6<f64>);

impl DriftMatrix {
    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }
}

/// Diagonal of the diffusion matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(pub [f64; 6]);

impl DiffusionMatrix {
    pub fn to_matrix(&self) -> Matrix6<f64> {
        Matrix6::from_diagonal(&self.0.into())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Steady-state covariance matrix of the six quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(pub Matrix6<f64>);

impl CovarianceMatrix {
    pub fn vacuum() -> Self {
        Self(Matrix6::identity() * 0.5)
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.0
    }

    /// 2×2 block between modes `row` and `col` (mode indices 0 = a, 1 = c, 2 = B).
    pub fn block(&self, row: usize, col: usize) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2 * row, 2 * col).into_owned()
    }

    /// The three symplectic eigenvalues in ascending order.
    pub fn symplectic_eigenvalues(&self) -> Result<[f64; 3]> {
        let omega = symplectic_form();
        let schur = (omega * self.0).try_schur(f64::EPSILON, 10_000).ok_or(Error::EigenFailure)?;
        let mut moduli: Vec<f64> = schur.complex_eigenvalues().iter().map(|z| z.norm()).collect();
        moduli.sort_by(f64::total_cmp);
        Ok([moduli[0], moduli[2], moduli[4]])
    }
}

/// `Ω = ⊕ [[0, 1], [-1, 0]]` over the three modes.
pub fn symplectic_form() -> Matrix6<f64> {
    let mut omega = Matrix6::zeros();
    for k in 0..3 {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    omega
}

pub fn build_drift(e: &EffectiveParams) -> DriftMatrix {
    let mut a = Matrix6::zeros();
    a[(X_A, X_A)] = -e.kappa_a;
    a[(X_A, Y_A)] = e.delta_a_eff;
    a[(Y_A, X_A)] = -e.delta_a_eff;
    a[(Y_A, Y_A)] = -e.kappa_a;
    a[(Y_A, Q)] = -2.0 * e.g_a_lin;

    a[(X_C, X_C)] = -e.kappa_c;
    a[(X_C, Y_C)] = e.delta_c;
    a[(Y_C, X_C)] = -e.delta_c;
    a[(Y_C, Y_C)] = -e.kappa_c;
    a[(Y_C, Q)] = -2.0 * e.g_c;

    a[(Q, Q)] = -e.gamma_m;
    a[(Q, P)] = e.omega_m;
    a[(P, X_A)] = -2.0 * e.g_a_lin;
    a[(P, X_C)] = -2.0 * e.g_c;
    a[(P, Q)] = -e.omega_m;
    a[(P, P)] = -e.gamma_m;
    DriftMatrix(a)
}

pub fn build_diffusion(e: &EffectiveParams) -> DiffusionMatrix {
    let thermal = e.gamma_m * (2.0 * e.n_th + 1.0);
    DiffusionMatrix([e.kappa_a, e.kappa_a, e.kappa_c, e.kappa_c, thermal, thermal])
}
