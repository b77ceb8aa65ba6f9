//! Constants of the plane-wave asymptotics and their evaluation.
//!
//! Along `x = 4ξt`, `ξ > √2 A`,
//!
//! ```text
//! q(x, t)  = A e^{-2 Im F∞} e^{2i(A²t + Re F∞)} + E₁(x, t)
//! q(-x, t) = A e^{ 2 Im F∞} e^{2i(A²t + Re F∞)} + E₂(x, t)
//! ```
//!
//! where `E₁, E₂` decay like `t^{-1/2 ± Im ν}` with amplitudes `c₁..c₄`.

use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use num_traits::Float;

use super::delta::local_exponents;
use super::ffun::{f_inf, ln_f};
use crate::background::{f_branch, stationary_points, theta_phase, w_branch, CutSide};
use crate::error::{Error, Result};
use crate::numerics::gamma_complex;
use crate::scattering::{JumpLog, JumpOptions, SpectralData};

type C = Complex64;

/// Below this `|r₁(k₁)r₂(k₁)|` the subleading amplitudes are set to zero.
pub const SMALL_REFLECTION: f64 = 1e-14;

/// Which pair of subleading terms is retained, by `Im ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// `Im ν ∈ (-1/2, -1/6]`
    A,
    /// `Im ν ∈ (-1/6, 1/6)`
    B,
    /// `Im ν ∈ [1/6, 1/2)`
    C,
}

pub fn case_tag(im_nu: f64) -> CaseTag {
    if im_nu <= -1.0 / 6.0 {
        CaseTag::A
    } else if im_nu < 1.0 / 6.0 {
        CaseTag::B
    } else {
        CaseTag::C
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveData {
    pub xi: f64,
    pub a: f64,
    pub k1: f64,
    pub nu: C,
    pub chi_at_k1: C,
    pub delta_arg: f64,
    pub f_inf: C,
    pub f_at_k1: C,
    pub r1: C,
    pub r2: C,
    pub w: C,
    pub beta1: f64,
    pub theta2: f64,
    pub theta_at_k1: f64,
    pub c1: C,
    pub c2: C,
    pub c3: C,
    pub c4: C,
    pub case_tag: CaseTag,
}

/// Leading terms at `x = ±4ξt` and the four subleading pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveTerms {
    pub q_plus: C,
    pub q_minus: C,
    pub e1: C,
    pub e2: C,
    /// `t^{-1/2-Im ν} c₁ e^{2it(A²+θ) + i Re ν ln t}`, likewise `c₂..c₄`.
    pub parts: [C; 4],
}

pub fn planewave_params<S: SpectralData + ?Sized>(xi: f64, spectral: &S) -> Result<PlaneWaveData> {
    planewave_params_with(xi, spectral, &JumpOptions::default())
}

pub fn planewave_params_with<S: SpectralData + ?Sized>(
    xi: f64,
    spectral: &S,
    opts: &JumpOptions,
) -> Result<PlaneWaveData> {
    let a = spectral.amplitude();
    if !(xi > SQRT_2 * a) {
        return Err(Error::Region { xi, expected: "xi > sqrt(2) A" });
    }
    let k1 = stationary_points(xi, a).0.re;
    let log = JumpLog::build_with(spectral, k1, opts)?;
    let loc = local_exponents(&log)?;
    let fi = f_inf(&log)?;
    let lf = ln_f(&log, C::new(k1, 0.0))?;
    let kc = C::new(k1, 0.0);
    let fk = f_branch(kc, a, CutSide::Off)?.re;
    let w = w_branch(kc, a, CutSide::Off)?;
    let theta_at_k1 = theta_phase(kc, xi, a, CutSide::Off)?.re;
    let theta2 = (4.0 * k1 + 2.0 * xi) / fk;
    let beta1 = 0.5 * (fk / (4.0 * k1 + 2.0 * xi)).sqrt();
    let (r1, r2) = spectral.reflection(kc, CutSide::Off)?;
    let mut data = PlaneWaveData {
        xi,
        a,
        k1,
        nu: loc.nu,
        chi_at_k1: loc.chi,
        delta_arg: loc.delta_arg,
        f_inf: fi,
        f_at_k1: lf.exp(),
        r1,
        r2,
        w,
        beta1,
        theta2,
        theta_at_k1,
        c1: C::new(0.0, 0.0),
        c2: C::new(0.0, 0.0),
        c3: C::new(0.0, 0.0),
        c4: C::new(0.0, 0.0),
        case_tag: case_tag(loc.nu.im),
    };
    if (r1 * r2).norm() >= SMALL_REFLECTION {
        let [c1, c2, c3, c4] = amplitudes(&data, lf)?;
        data.c1 = c1;
        data.c2 = c2;
        data.c3 = c3;
        data.c4 = c4;
    }
    Ok(data)
}

fn amplitudes(d: &PlaneWaveData, ln_f1: C) -> Result<[C; 4]> {
    let i = C::i();
    let nu = d.nu;
    let nub = nu.conj();
    let chi = d.chi_at_k1;
    let chib = chi.conj();
    let f2 = (ln_f1 * 2.0).exp();
    let f2b = f2.conj();
    let fi = d.f_inf;
    let fib = fi.conj();
    let wm = (d.w - d.w.inv()).powi(2);
    let wp = (d.w + d.w.inv()).powi(2);
    // ln(2√θ₂), real since θ₂ > 0
    let ell = (2.0 * d.theta2.sqrt()).ln();
    let pre = PI.sqrt() / SQRT_2;
    let q1 = i * 0.75 * PI;
    let q3 = i * 0.25 * PI;
    let c1 = pre * wm * f2 / (d.r2 * gamma_complex(i * nu)?)
        * (2.0 * i * fi - 0.5 * PI * nu + q1 - 2.0 * chi - (1.0 - 2.0 * i * nu) * ell).exp();
    let c2 = pre * wp / (d.r1 * gamma_complex(-i * nu)? * f2)
        * (2.0 * i * fi - 0.5 * PI * nu + q3 + 2.0 * chi - (1.0 + 2.0 * i * nu) * ell).exp();
    let c3 = pre * wp * f2b / (d.r2.conj() * gamma_complex(-i * nub)?)
        * (2.0 * i * fib - 0.5 * PI * nub + q3 - 2.0 * chib - (1.0 + 2.0 * i * nub) * ell).exp();
    let c4 = pre * wm / (d.r1.conj() * gamma_complex(i * nub)? * f2b)
        * (2.0 * i * fib - 0.5 * PI * nub + q1 + 2.0 * chib - (1.0 - 2.0 * i * nub) * ell).exp();
    Ok([c1, c2, c3, c4])
}

pub fn planewave_eval(d: &PlaneWaveData, t: f64) -> PlaneWaveTerms {
    let i = C::i();
    let a2 = d.a * d.a;
    let fi = d.f_inf;
    let carrier = (2.0 * i * (a2 * t + fi.re)).exp();
    let q_plus = carrier * d.a * (-2.0 * fi.im).exp();
    let q_minus = carrier * d.a * (2.0 * fi.im).exp();
    let lt = t.ln();
    let down = t.powf(-0.5 - d.nu.im);
    let up = t.powf(-0.5 + d.nu.im);
    let plus = (i * (2.0 * t * (a2 + d.theta_at_k1) + d.nu.re * lt)).exp();
    let minus = (-i * (-2.0 * t * (a2 - d.theta_at_k1) + d.nu.re * lt)).exp();
    let parts = [d.c1 * down * plus, d.c2 * up * minus, d.c3 * down * minus, d.c4 * up * plus];
    let (e1, e2) = match d.case_tag {
        CaseTag::A => (parts[0], parts[2]),
        CaseTag::B => (parts[1] + parts[0], parts[3] + parts[2]),
        CaseTag::C => (parts[1], parts[3]),
    };
    PlaneWaveTerms { q_plus, q_minus, e1, e2, parts }
}
