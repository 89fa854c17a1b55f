use nalgebra::{Matrix6, SMatrix, SVector};

use super::{max_real_eigenvalue, CovarianceMatrix, DiffusionMatrix, DriftMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovSolution {
    pub covariance: CovarianceMatrix,
    /// `max |A V + V Aᵀ + D|` for the symmetrized `V`.
    pub residual: f64,
    /// `max |V - Vᵀ|` of the raw linear-solve output.
    pub asymmetry: f64,
}

/// Solves `A V + V Aᵀ + D = 0` through the 36×36 system
/// `(I ⊗ A + A ⊗ I) vec(V) = -vec(D)` (column-major `vec`).
pub fn solve_lyapunov(a: &DriftMatrix, d: &DiffusionMatrix) -> Result<LyapunovSolution> {
    let max_re = max_real_eigenvalue(a)?;
    if max_re >= 0.0 {
        return Err(Error::UnstableSystem { max_real_part: max_re });
    }

    let id = Matrix6::<f64>::identity();
    let system: SMatrix<f64, 36, 36> = id.kronecker(&a.0) + a.0.kronecker(&id);
    let dm = d.to_matrix();
    let rhs = SVector::<f64, 36>::from_iterator(dm.iter().map(|v| -v));

    let vec_v = system.lu().solve(&rhs).ok_or(Error::SingularSolve)?;
    if vec_v.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSolve);
    }
    let raw = Matrix6::from_column_slice(vec_v.as_slice());
    let asymmetry = (raw - raw.transpose()).amax();
    let v = (raw + raw.transpose()) * 0.5;
    let residual = (a.0 * v + v * a.0.transpose() + dm).amax();

    Ok(LyapunovSolution { covariance: CovarianceMatrix(v), residual, asymmetry })
}
