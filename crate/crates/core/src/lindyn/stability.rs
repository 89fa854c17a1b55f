use nalgebra::Matrix6;
use num_bigint::{BigInt, Sign};
use num_traits::{Float, ToPrimitive, Zero};

use super::DriftMatrix;
use crate::error::{Error, Result};

const DIM: usize = 6;

pub fn max_real_eigenvalue(a: &DriftMatrix) -> Result<f64> {
    if a.0.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure);
    }
    let schur = a.0.try_schur(f64::EPSILON, 10_000).ok_or(Error::EigenFailure)?;
    Ok(schur.complex_eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// True iff every eigenvalue of `a` has real part below `-margin`.
pub fn is_stable_eigen(a: &DriftMatrix, margin: f64) -> Result<bool> {
    if !(margin >= 0.0) {
        return Err(Error::InvalidParameter(format!("stability margin must be >= 0, got {margin}")));
    }
    Ok(max_real_eigenvalue(a)? < -margin)
}

/// Routh–Hurwitz verdict on the characteristic polynomial of `a`.
///
/// The f64 entries are rescaled by a common power of two into an integer
/// matrix, which has the same stability as `a`. Leverrier–Faddeev and the
/// Hurwitz minors are then evaluated in exact integer arithmetic, so the
/// verdict is exact for the matrix as given. A vanishing minor means the
/// spectrum touches the imaginary axis and is reported as
/// [`Error::DegeneratePolynomial`].
pub fn is_stable_rh(a: &DriftMatrix) -> Result<bool> {
    for (k, sign) in hurwitz_minor_signs(a)?.into_iter().enumerate() {
        match sign {
            Sign::Plus => {}
            Sign::Minus => return Ok(false),
            Sign::NoSign => return Err(Error::DegeneratePolynomial { index: k + 1, value: 0.0 }),
        }
    }
    Ok(true)
}

/// Signs of the leading principal minors Δ₁..Δ₆ of the Hurwitz matrix.
pub fn hurwitz_minor_signs(a: &DriftMatrix) -> Result<[Sign; DIM]> {
    let (n, _) = integer_matrix(&a.0)?;
    let coeffs = leverrier_faddeev(&n);
    // descending: p(λ) = λ⁶ + a₁λ⁵ + … + a₆, with a_k = coeffs[DIM - k]
    let descending = |k: isize| -> BigInt {
        if k < 0 || k > DIM as isize {
            BigInt::zero()
        } else {
            coeffs[DIM - k as usize].clone()
        }
    };
    let mut h: Vec<Vec<BigInt>> = (0..DIM)
        .map(|i| (0..DIM).map(|j| descending(2 * j as isize - i as isize + 1)).collect())
        .collect();

    // Bareiss elimination without pivoting: the k-th pivot is the k-th leading minor.
    let mut signs = [Sign::NoSign; DIM];
    let mut prev = BigInt::from(1);
    for k in 0..DIM {
        signs[k] = h[k][k].sign();
        if signs[k] == Sign::NoSign {
            // later minors cannot be reached without pivoting; leave them unset
            break;
        }
        for i in k + 1..DIM {
            for j in k + 1..DIM {
                let v = (&h[i][j] * &h[k][k] - &h[i][k] * &h[k][j]) / &prev;
                h[i][j] = v;
            }
        }
        prev = h[k][k].clone();
    }
    Ok(signs)
}

/// Coefficients of `det(λI - a)` in ascending powers of λ.
pub fn characteristic_polynomial(a: &DriftMatrix) -> Result<[f64; DIM + 1]> {
    let (n, exponent) = integer_matrix(&a.0)?;
    let coeffs = leverrier_faddeev(&n);
    let mut out = [0.0; DIM + 1];
    for (k, c) in coeffs.iter().enumerate() {
        // c_k(a) = c_k(n) · 2^(exponent·(DIM - k))
        out[k] = scale_big(c, exponent * (DIM - k) as i64);
    }
    Ok(out)
}

fn scale_big(c: &BigInt, exp2: i64) -> f64 {
    if c.is_zero() {
        return 0.0;
    }
    let bits = c.bits() as i64;
    let shift = (bits - 60).max(0);
    let head = (c >> shift as usize).to_f64().unwrap_or(f64::NAN);
    let total = exp2 + shift;
    head * 2f64.powi(total.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

/// Writes `a = 2^exponent · n` with `n` an integer matrix.
fn integer_matrix(a: &Matrix6<f64>) -> Result<([[BigInt; DIM]; DIM], i64)> {
    let mut parts = [[(0u64, 0i64, 1i8); DIM]; DIM];
    let mut min_exp = i64::MAX;
    for i in 0..DIM {
        for j in 0..DIM {
            let v = a[(i, j)];
            if !v.is_finite() {
                return Err(Error::InvalidParameter("drift matrix has non-finite entries".into()));
            }
            if v != 0.0 {
                let (mantissa, exp, sign) = v.integer_decode();
                parts[i][j] = (mantissa, exp as i64, sign);
                min_exp = min_exp.min(exp as i64);
            }
        }
    }
    if min_exp == i64::MAX {
        min_exp = 0;
    }
    let n = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (mantissa, exp, sign) = parts[i][j];
            if mantissa == 0 {
                BigInt::zero()
            } else {
                let v = BigInt::from(mantissa) << (exp - min_exp) as usize;
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        })
    });
    Ok((n, min_exp))
}

/// Ascending coefficients of the characteristic polynomial of an integer matrix.
fn leverrier_faddeev(n: &[[BigInt; DIM]; DIM]) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); DIM + 1];
    coeffs[DIM] = BigInt::from(1);
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); DIM]; DIM];
    for k in 1..=DIM {
        // M_k = N·M_{k-1} + c_{n-k+1}·I
        let mut next = matmul(n, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[DIM - k + 1];
        }
        m = next;
        let nm = matmul(n, &m);
        let trace: BigInt = (0..DIM).map(|i| nm[i][i].clone()).sum();
        coeffs[DIM - k] = -trace / BigInt::from(k);
    }
    coeffs
}

fn matmul(n: &[[BigInt; DIM]; DIM], m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| {
                    (0..DIM)
                        .filter(|&k| !n[i][k].is_zero() && !m[k][j].is_zero())
                        .map(|k| &n[i][k] * &m[k][j])
                        .sum()
                })
                .collect()
        })
        .collect()
}
