#![allow(dead_code)]

use mcom::measures::TwoModeCM;
use mcom::model::EffectiveParams;
use nalgebra::{Matrix2, Matrix4};
use rand::Rng;

pub fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

/// `R₁(θ₁) ⊕ R₂(θ₂)` acting on `(x₁, p₁, x₂, p₂)`.
pub fn local_rotation(theta1: f64, theta2: f64) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&rotation(theta1));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&rotation(theta2));
    m
}

fn local_squeeze(r1: f64, r2: f64) -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new((-r1).exp(), r1.exp(), (-r2).exp(), r2.exp()))
}

fn beam_splitter(t: f64) -> Matrix4<f64> {
    let (s, c) = t.sin_cos();
    let i = Matrix2::identity();
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(i * c));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(i * s));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(i * -s));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&(i * c));
    m
}

fn two_mode_squeeze(r: f64) -> Matrix4<f64> {
    let i = Matrix2::identity();
    let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(i * r.cosh()));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(z * r.sinh()));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(z * r.sinh()));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&(i * r.cosh()));
    m
}

/// Symplectic `S` built from rotations, squeezers, a beam splitter and a
/// two-mode squeezer with parameters drawn from `rng`.
pub fn random_symplectic(rng: &mut impl Rng) -> Matrix4<f64> {
    let tau = std::f64::consts::TAU;
    let mut ang = || rng.random_range(0.0..tau);
    let (a, b, c, d, e, f) = (ang(), ang(), ang(), ang(), ang(), ang());
    let squeeze1 = rng.random_range(-0.8..0.8);
    let squeeze2 = rng.random_range(-0.8..0.8);
    let tms = rng.random_range(0.0..1.2);
    local_rotation(a, b)
        * local_squeeze(squeeze1, squeeze2)
        * beam_splitter(c)
        * two_mode_squeeze(tms)
        * local_rotation(d, e)
        * beam_splitter(f)
}

/// Physical two-mode state `S diag(ν₁, ν₁, ν₂, ν₂) Sᵀ` with `ν ∈ [1/2, 3]`.
pub fn random_state(rng: &mut impl Rng) -> TwoModeCM {
    let s = random_symplectic(rng);
    let n1 = rng.random_range(0.5..3.0);
    let n2 = rng.random_range(0.5..3.0);
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(n1, n1, n2, n2));
    let v = s * d * s.transpose();
    TwoModeCM::new((v + v.transpose()) * 0.5).expect("symmetric by construction")
}

pub fn tmsv(r: f64) -> TwoModeCM {
    let c = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    TwoModeCM::from_blocks(Matrix2::identity() * c, Matrix2::identity() * c, Matrix2::new(s, 0.0, 0.0, -s))
        .unwrap()
}

/// Effective parameters drawn over a wide window that includes unstable regions.
pub fn random_effective(rng: &mut impl Rng) -> EffectiveParams {
    EffectiveParams {
        delta_a_eff: rng.random_range(-3.0..3.0),
        delta_c: rng.random_range(-3.0..3.0),
        g_a_lin: rng.random_range(0.0..0.6),
        g_c: rng.random_range(0.0..0.6),
        kappa_a: 10f64.powf(rng.random_range(-3.0..0.5)),
        kappa_c: 10f64.powf(rng.random_range(-3.0..0.5)),
        gamma_m: 10f64.powf(rng.random_range(-4.0..-1.0)),
        omega_m: 1.0,
        n_th: rng.random_range(0.0..5.0),
    }
}
