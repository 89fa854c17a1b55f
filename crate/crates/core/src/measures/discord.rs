use super::{symplectic_eigenvalues, TwoModeCM, CLAMP_TOL, PHYSICAL_TOL};
use crate::error::{Error, Result};

/// `f(x) = (x + ½) ln(x + ½) - (x - ½) ln(x - ½)`, with `f(½) = 0`.
pub fn entropy_f(x: f64) -> Result<f64> {
    if !(x >= 0.5 - PHYSICAL_TOL) {
        return Err(Error::DomainError(x));
    }
    let x = x.max(0.5);
    let up = x + 0.5;
    let down = x - 0.5;
    let tail = if down > 0.0 { down * down.ln() } else { 0.0 };
    Ok(up * up.ln() - tail)
}

/// Gaussian discord with the first mode measured:
/// `D = f(√I1) - f(ν₋) - f(ν₊) + f(√W)`.
pub fn gaussian_discord(t: &TwoModeCM) -> Result<f64> {
    let (nu_minus, nu_plus) = symplectic_eigenvalues(t)?;
    let w = min_conditional_det(t);
    let d = entropy_f(t.i1.max(0.0).sqrt())? - entropy_f(nu_minus)? - entropy_f(nu_plus)?
        + entropy_f(w.max(0.0).sqrt())?;
    if d < -CLAMP_TOL {
        return Err(Error::NonPhysicalCM(format!("negative discord {d}")));
    }
    Ok(d.max(0.0))
}

/// Minimal conditional determinant `W` over Gaussian measurements on the first mode.
fn min_conditional_det(t: &TwoModeCM) -> f64 {
    let (i1, i2, i3, i4) = (t.i1, t.i2, t.i3, t.i4);
    let i3_sq = i3 * i3;
    let pure_first = 4.0 * i1 - 1.0 <= 1e-12;
    if i3_sq > 1e-30 && !pure_first {
        let ratio = 4.0 * (i1 * i2 - i4).powi(2) / ((i2 + 4.0 * i4) * (1.0 + 4.0 * i1) * i3_sq);
        if ratio <= 1.0 {
            let root = (4.0 * i3_sq + (4.0 * i1 - 1.0) * (4.0 * i4 - i2)).max(0.0).sqrt();
            return ((2.0 * i3.abs() + root) / (4.0 * i1 - 1.0)).powi(2);
        }
    }
    let b = i1 * i2 + i4 - i3_sq;
    // b² - 4 I1 I2 I4, rearranged so that nearly uncorrelated states do not
    // cancel two O(1) terms
    let gap = i1 * i2 - i4;
    let disc = gap * gap - 2.0 * i3_sq * (i1 * i2 + i4) + i3_sq * i3_sq;
    (b - disc.max(0.0).sqrt()) / (2.0 * i1)
}
