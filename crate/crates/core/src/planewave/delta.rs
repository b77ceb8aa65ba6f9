use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scattering::{Boundary, JumpLog};

type C = Complex64;

/// `ν`, `χ(k₁, k₁)` and `Δ(k₁)` at the end of the jump half-line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalExponents {
    pub nu: C,
    pub chi: C,
    pub delta_arg: f64,
}

/// Fails unless `|arg(1 + r₁r₂)|` accumulated from `-∞` stays below `π`.
pub fn check_winding(log: &JumpLog) -> Result<()> {
    let w = log.max_abs_arg();
    if w >= PI {
        return Err(Error::WindingViolation(w));
    }
    Ok(())
}

/// `ln δ(k, k₁)` for `k` off `(-∞, k₁]`.
pub fn ln_delta(log: &JumpLog, k: C) -> Result<C> {
    log.cauchy(k)
}

pub fn delta_fn(log: &JumpLog, k: C) -> Result<C> {
    Ok(log.cauchy(k)?.exp())
}

/// `δ±(x, k₁)` for `x < k₁`, `Above` giving `δ₊`.
pub fn delta_boundary(log: &JumpLog, x: f64, side: Boundary) -> C {
    log.cauchy_boundary(x, side).exp()
}

pub fn local_exponents(log: &JumpLog) -> Result<LocalExponents> {
    check_winding(log)?;
    let l = log.end_value();
    Ok(LocalExponents { nu: -l / (2.0 * PI), chi: log.regular_part_at_end(), delta_arg: l.im })
}
