//! Constants of the modulated elliptic wave and its leading terms along the
//! rays `x = ±4ξt`.

use core::f64::consts::PI;

use num_complex::Complex64;

use super::gfun::GFunction;
use super::hfun::{h_machinery, HData};
use super::surface::SurfaceData;
use crate::error::{Error, Result};
use crate::numerics::theta3;
use crate::planewave::check_winding;
use crate::scattering::{JumpLog, SpectralData};

type C = Complex64;

/// Theta values below this in modulus count as zeros.
pub const THETA_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticData {
    pub surface: SurfaceData,
    pub h_inf: f64,
    /// `Ω`.
    pub omega_big: f64,
    /// `ω`.
    pub omega: C,
    pub g_inf: C,
    pub v_inf: C,
    pub c: C,
    pub khat0: f64,
    /// Imaginary parts discarded from `H∞` and `Ω`.
    pub h: HData,
}

/// Leading terms at `x = 4ξt` and `x = -4ξt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTerms {
    pub q_plus: C,
    pub q_minus: C,
}

/// `k̂₀ = A Re α/(A + Im α)`.
pub fn khat0(a: f64, alpha: C) -> f64 {
    a * alpha.re / (a + alpha.im)
}

/// `(v∞, c, k̂₀)` with `c = v(k̂₀) + (1 + τ)/2`.
pub fn abel_constants(s: &SurfaceData) -> Result<(C, C, f64)> {
    let v_inf = s.abel_infinity()?;
    let kh = khat0(s.a, s.alpha);
    let c = s.abel(C::new(kh, 0.0))? + (s.tau + 1.0) * 0.5;
    Ok((v_inf, c, kh))
}

pub fn elliptic_params<S: SpectralData + ?Sized>(xi: f64, spectral: &S) -> Result<EllipticData> {
    let surface = SurfaceData::build(xi, spectral.amplitude())?;
    let log = JumpLog::build(spectral, surface.k0)?;
    elliptic_params_with(&surface, spectral, log)
}

/// Constants for a given surface and the jump log of `δ(·, k₀)`.
pub fn elliptic_params_with<S: SpectralData + ?Sized>(surface: &SurfaceData, spectral: &S, log: JumpLog) -> Result<EllipticData> {
    check_winding(&log)?;
    let g = GFunction::build(surface, spectral, log)?;
    elliptic_from_g(&g)
}

/// Constants from a prepared [`GFunction`].
pub fn elliptic_from_g(g: &GFunction) -> Result<EllipticData> {
    let surface = &g.surface;
    let h = h_machinery(surface)?;
    let (v_inf, c, kh) = abel_constants(surface)?;
    for z in [v_inf + c, -v_inf + c] {
        if theta3(z, surface.tau)?.norm() < THETA_FLOOR {
            return Err(Error::ThetaZero(0.0));
        }
    }
    Ok(EllipticData {
        surface: *surface,
        h_inf: h.h_inf,
        omega_big: h.omega,
        omega: g.omega,
        g_inf: g.g_inf,
        v_inf,
        c,
        khat0: kh,
        h,
    })
}

/// Theta argument `Ωt/2π + ω/2π - 1/4` without the `v∞`, `c` shifts.
pub fn theta_phase(ed: &EllipticData, t: f64) -> C {
    C::new(ed.omega_big * t / (2.0 * PI) - 0.25, 0.0) + ed.omega / (2.0 * PI)
}

pub fn elliptic_eval(ed: &EllipticData, t: f64) -> Result<EllipticTerms> {
    let tau = ed.surface.tau;
    let th = |z: C| theta3(z, tau);
    let amp = ed.surface.a + ed.surface.alpha.im;
    let carrier = C::new(0.0, 2.0 * (t * ed.h_inf + ed.g_inf.re)).exp();
    let (v, c) = (ed.v_inf, ed.c);

    let x = theta_phase(ed, t);
    let den = th(x + v + c)? * th(-v + c)?;
    if den.norm() < THETA_FLOOR {
        return Err(Error::ThetaZero(t));
    }
    let q_plus = amp * (-2.0 * ed.g_inf.im).exp() * th(x - v + c)? * th(v + c)? / den * carrier;

    let xb = C::new(ed.omega_big * t / (2.0 * PI) - 0.25, 0.0) + ed.omega.conj() / (2.0 * PI);
    let (vb, cb) = (v.conj(), c.conj());
    let den = th(xb - vb - cb)? * th(vb - cb)?;
    if den.norm() < THETA_FLOOR {
        return Err(Error::ThetaZero(t));
    }
    let q_minus = amp * (2.0 * ed.g_inf.im).exp() * th(xb + vb - cb)? * th(-vb - cb)? / den * carrier;
    Ok(EllipticTerms { q_plus, q_minus })
}
