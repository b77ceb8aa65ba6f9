use num_complex::Complex64;

use super::profile::InitialProfile;
use crate::background::{e_matrix, f_branch, CutSide};
use crate::error::{Error, Result};
use crate::numerics::mat2::det_columns;
use crate::numerics::ode::{dopri5, OdeOptions};
use crate::numerics::Mat2;

type C = Complex64;

/// Which Jost solution: `Ψ₁` is normalized at `x → -∞`, `Ψ₂` at `x → +∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JostSide {
    Left,
    Right,
}

/// Spectral functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralValues {
    pub a1: C,
    pub a2: C,
    pub b1: C,
    pub b2: C,
}

impl SpectralValues {
    /// `a₁a₂ + b₁b₂ - 1`.
    pub fn det_residual(&self) -> C {
        self.a1 * self.a2 + self.b1 * self.b2 - 1.0
    }
}

/// Column `col` of `Ψ_j(0, 0, k)`, integrating
/// `ψ' = (-ikσ₃ + U(x))ψ + i s f(k) ψ` from `∓L` to `0`, where `s = ±1` is
/// the `σ₃` entry of the column.
pub fn jost_column(
    profile: &InitialProfile,
    k: C,
    side: JostSide,
    col: usize,
    cut: CutSide,
    opts: &OdeOptions,
) -> Result<[C; 2]> {
    let a = profile.amplitude();
    let e = e_matrix(k, a, cut)?;
    let f = f_branch(k, a, cut)?;
    let s = if col == 0 { 1.0 } else { -1.0 };
    let i = C::i();
    let d0 = i * (f * s - k);
    let d1 = i * (f * s + k);
    let x0 = match side {
        JostSide::Left => -profile.support(),
        JostSide::Right => profile.support(),
    };
    let rhs = |x: f64, y: &[C; 2]| {
        let q = profile.value(x);
        let qm = profile.value(-x).conj();
        [d0 * y[0] + q * y[1], d1 * y[1] - qm * y[0]]
    };
    dopri5(rhs, x0, e.column(col), 0.0, opts).map_err(|err| match err {
        Error::StepUnderflow { x, .. } => Error::StepUnderflow { x, re: k.re, im: k.im },
        other => other,
    })
}

/// `Ψ_j(0, 0, k)`.
pub fn jost_at_origin(profile: &InitialProfile, k: C, side: JostSide, cut: CutSide) -> Result<Mat2> {
    jost_at_origin_with(profile, k, side, cut, &OdeOptions::default())
}

pub fn jost_at_origin_with(
    profile: &InitialProfile,
    k: C,
    side: JostSide,
    cut: CutSide,
    opts: &OdeOptions,
) -> Result<Mat2> {
    let c0 = jost_column(profile, k, side, 0, cut, opts)?;
    let c1 = jost_column(profile, k, side, 1, cut, opts)?;
    Ok(Mat2::from_columns(c0, c1))
}

/// `a₁, a₂, b₁, b₂` from determinants of Jost columns at the origin.
pub fn scattering_data(profile: &InitialProfile, k: C, cut: CutSide) -> Result<SpectralValues> {
    scattering_data_with(profile, k, cut, &OdeOptions::default())
}

pub fn scattering_data_with(profile: &InitialProfile, k: C, cut: CutSide, opts: &OdeOptions) -> Result<SpectralValues> {
    let p1 = jost_at_origin_with(profile, k, JostSide::Left, cut, opts)?;
    let p2 = jost_at_origin_with(profile, k, JostSide::Right, cut, opts)?;
    Ok(SpectralValues {
        a1: det_columns(p1.column(0), p2.column(1)),
        a2: det_columns(p2.column(0), p1.column(1)),
        b1: det_columns(p2.column(0), p1.column(0)),
        b2: det_columns(p2.column(1), p1.column(1)),
    })
}

/// `a₁(k)` alone (two ODE solves), for `k` in the closed upper half-plane.
pub fn a1_value(profile: &InitialProfile, k: C, cut: CutSide, opts: &OdeOptions) -> Result<C> {
    let u = jost_column(profile, k, JostSide::Left, 0, cut, opts)?;
    let v = jost_column(profile, k, JostSide::Right, 1, cut, opts)?;
    Ok(det_columns(u, v))
}

/// `a₂(k)` alone, for `k` in the closed lower half-plane.
pub fn a2_value(profile: &InitialProfile, k: C, cut: CutSide, opts: &OdeOptions) -> Result<C> {
    let u = jost_column(profile, k, JostSide::Right, 0, cut, opts)?;
    let v = jost_column(profile, k, JostSide::Left, 1, cut, opts)?;
    Ok(det_columns(u, v))
}

/// `(r₁, r₂) = (b₁/a₁, b₂/a₂)`. On `B` the `Minus` side is the default.
pub fn reflection(profile: &InitialProfile, k: C, cut: CutSide) -> Result<(C, C)> {
    reflection_with(profile, k, cut, &OdeOptions::default())
}

pub fn reflection_with(profile: &InitialProfile, k: C, cut: CutSide, opts: &OdeOptions) -> Result<(C, C)> {
    let s = scattering_data_with(profile, k, cut, opts)?;
    if s.a1.norm() < 1e-14 {
        return Err(Error::ZeroDenominator { which: "a1", re: k.re, im: k.im });
    }
    if s.a2.norm() < 1e-14 {
        return Err(Error::ZeroDenominator { which: "a2", re: k.re, im: k.im });
    }
    Ok((s.b1 / s.a1, s.b2 / s.a2))
}
