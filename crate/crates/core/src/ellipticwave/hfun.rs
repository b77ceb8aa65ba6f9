//! The phase `h(k) = ½(∫_{iA}^k + ∫_{-iA}^k) dh` with
//! `dh = 4(k - k₀)(k - α)(k - ᾱ)/γ(k) dk`, and its constants `H∞` and `Ω`.

use alloc::vec;

use num_complex::Complex64;
use num_traits::Float;

use super::surface::{SurfaceData, SURFACE_OPTS};
use crate::background::{f_branch, CutSide};
use crate::error::{Error, Result};
use crate::numerics::{quad_interval, Endpoint};

type C = Complex64;

/// Imaginary parts above this make `H∞` or `Ω` an error.
pub const REALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HData {
    pub h_inf: f64,
    /// `Ω`, the frequency of the theta arguments.
    pub omega: f64,
    /// Residual imaginary parts discarded from `H∞` and `Ω`.
    pub h_inf_im: f64,
    pub omega_im: f64,
}

/// Numerator of `dh/dk·γ`.
pub fn dh_numerator(s: &SurfaceData, k: C) -> C {
    (k - s.k0) * (k - s.alpha) * (k - s.alpha.conj()) * 4.0
}

/// `∫ dh` along a polygon avoiding the cuts.
pub fn dh_integral(s: &SurfaceData, vertices: alloc::vec::Vec<C>, start: Endpoint, end: Endpoint) -> Result<C> {
    s.integrate(|k| dh_numerator(s, k), vertices, start, end)
}

fn endpoint_tag(s: &SurfaceData, k: C) -> Endpoint {
    let top = C::new(0.0, s.a);
    if k == top || k == -top || k == s.alpha || k == s.alpha.conj() {
        Endpoint::InverseSqrt
    } else {
        Endpoint::Regular
    }
}

/// `h(k)` along the straight segments from `±iA`.
pub fn h_value(s: &SurfaceData, k: C) -> Result<C> {
    let top = C::new(0.0, s.a);
    let end = endpoint_tag(s, k);
    let up = if k == top { C::new(0.0, 0.0) } else { dh_integral(s, vec![top, k], Endpoint::InverseSqrt, end)? };
    let down = if k == -top { C::new(0.0, 0.0) } else { dh_integral(s, vec![-top, k], Endpoint::InverseSqrt, end)? };
    Ok((up + down) * 0.5)
}

/// `h(iA) = ½ ∫_{-iA}^{iA} dh`, on a path passing right of `B`.
pub fn h_at_top(s: &SurfaceData) -> Result<C> {
    let top = C::new(0.0, s.a);
    let v = dh_integral(s, vec![-top, C::new(s.a, 0.0), top], Endpoint::InverseSqrt, Endpoint::InverseSqrt)?;
    Ok(v * 0.5)
}

/// `h(α)`, reaching `α` from `-iA` around the left of the band.
pub fn h_at_alpha(s: &SurfaceData) -> Result<C> {
    let top = C::new(0.0, s.a);
    let al = s.alpha;
    let up = dh_integral(s, vec![top, al], Endpoint::InverseSqrt, Endpoint::InverseSqrt)?;
    let x = al.re.min(s.k0) - al.im.max(0.5 * s.a);
    let detour = vec![-top, C::new(x, -s.a), C::new(x, al.im), al];
    let down = dh_integral(s, detour, Endpoint::InverseSqrt, Endpoint::InverseSqrt)?;
    Ok((up + down) * 0.5)
}

/// `(k - k₀)R/f - (k + ξ)`, which is `O(k⁻²)`.
fn subtracted(s: &SurfaceData, k: C, far: bool, fix: C) -> Result<C> {
    let f = f_branch(k, s.a, CutSide::Off)? / fix;
    let r = s.r(k)?;
    if !far {
        return Ok((k - s.k0) * r / f - (k + s.xi));
    }
    // (k-k₀)²(k-α)(k-ᾱ) - (k+ξ)²(k²+A²) is linear in k once α is tied to k₀
    let (k0, xi, a2) = (s.k0, s.xi, s.a * s.a);
    let m1 = -2.0 * s.alpha.re;
    let m0 = s.alpha.norm_sqr();
    let p1 = -2.0 * k0 * m0 + k0 * k0 * m1 - 2.0 * xi * a2;
    let p0 = k0 * k0 * m0 - xi * xi * a2;
    Ok((k * p1 + p0) / (f * ((k - k0) * r + (k + xi) * f)))
}

/// `2∫_{±iA}^{±i∞} [(k - k₀)R/f - (k + ξ)] dk` along the vertical ray.
fn ray_part(s: &SurfaceData, up: bool) -> Result<C> {
    let sign = if up { 1.0 } else { -1.0 };
    let from = C::new(0.0, sign * s.a);
    let dir = C::new(0.0, sign);
    let far_radius = 4.0 * (s.a + s.xi + s.alpha.norm());
    let mut err = None;
    let v = quad_interval(
        |u| {
            let t = u / (1.0 - u);
            let k = from + dir * t;
            // 1/f is singular at the start; undo the rounding of k - from
            let fix = if k == from { C::new(1.0, 0.0) } else { ((k - from) / (dir * t)).sqrt() };
            match subtracted(s, k, k.norm() > far_radius, fix) {
                Ok(d) => d * dir / ((1.0 - u) * (1.0 - u)),
                Err(e) => {
                    err = Some(e);
                    C::new(0.0, 0.0)
                }
            }
        },
        0.0,
        1.0,
        Endpoint::InverseSqrt,
        Endpoint::Regular,
        &SURFACE_OPTS,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(v * 2.0),
    }
}

/// `H∞` as a complex number, before the reality check.
pub fn h_inf_complex(s: &SurfaceData) -> Result<C> {
    Ok(ray_part(s, true)? + ray_part(s, false)? + 2.0 * s.a * s.a)
}

/// `Ω = ∫_{iA}^{α} dh + ∫_{-iA}^{ᾱ} dh` as a complex number.
pub fn omega_complex(s: &SurfaceData) -> Result<C> {
    let top = C::new(0.0, s.a);
    let up = dh_integral(s, vec![top, s.alpha], Endpoint::InverseSqrt, Endpoint::InverseSqrt)?;
    let down = dh_integral(s, vec![-top, s.alpha.conj()], Endpoint::InverseSqrt, Endpoint::InverseSqrt)?;
    Ok(up + down)
}

pub fn h_machinery(s: &SurfaceData) -> Result<HData> {
    let h = h_inf_complex(s)?;
    let o = omega_complex(s)?;
    if h.im.abs() > REALITY_TOL {
        return Err(Error::NotReal { what: "H_inf", im: h.im });
    }
    if o.im.abs() > REALITY_TOL {
        return Err(Error::NotReal { what: "Omega", im: o.im });
    }
    Ok(HData { h_inf: h.re, omega: o.re, h_inf_im: h.im, omega_im: o.im })
}
