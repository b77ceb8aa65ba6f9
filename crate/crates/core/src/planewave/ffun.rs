//! `F(k, k₁)`, the solution of `F₊F₋ = δ²` on `B`, and its limit
//! `e^{iF∞}` at infinity.
//!
//! Integrals over `B` use `ζ = iA cos φ`, which turns
//! `∫_B g(ζ)/f₋(ζ) dζ` into `i ∫_0^π g(iA cos φ) dφ` with a smooth integrand.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::background::{f_branch, CutSide};
use crate::error::Result;
use crate::numerics::{gauss_legendre, quad_interval, BranchTracker, Endpoint, QuadOptions};
use crate::scattering::{JumpLog, SpectralData};

type C = Complex64;

const B_OPTS: QuadOptions = QuadOptions { abs_tol: 1e-12, rel_tol: 0.0, max_intervals: 2000 };

fn on_b(log: &JumpLog, phi: f64) -> C {
    C::new(0.0, log.amplitude() * phi.cos())
}

/// `i ∫_{φ0}^{φ1} g(iA cos φ) dφ`.
fn b_integral<G: FnMut(C) -> C>(log: &JumpLog, mut g: G, phi0: f64, phi1: f64) -> Result<C> {
    let v = quad_interval(|p| g(on_b(log, p)), phi0, phi1, Endpoint::Regular, Endpoint::Regular, &B_OPTS)?;
    Ok(v * C::i())
}

pub fn ln_f(log: &JumpLog, k: C) -> Result<C> {
    ln_f_with(log, k, CutSide::Off)
}

/// `ln F(k, k₁)`; `side` selects `F±` for `k` on `B`.
///
/// Where `ln δ(k)` exists the integrand is made regular by subtracting
/// `ln δ(k)` and adding back `ln δ(k) ∫_B dζ/(f₋(ζ)(ζ - k)) = -πi ln δ(k)/f(k)`.
/// On `(-∞, k₁]` the plain form is used.
pub fn ln_f_with(log: &JumpLog, k: C, side: CutSide) -> Result<C> {
    let a = log.amplitude();
    let f = f_branch(k, a, side)?;
    let scale = -f / C::new(0.0, PI);
    if k.im == 0.0 && k.re <= log.k_end() {
        let v = b_integral(log, |z| log.cauchy(z).unwrap_or(C::new(f64::NAN, 0.0)) / (z - k), 0.0, PI)?;
        return Ok(scale * v);
    }
    let lk = log.cauchy(k)?;
    let g = |z: C| {
        let d = z - k;
        if d.norm() < 1e-300 {
            return C::new(0.0, 0.0);
        }
        (log.cauchy(z).unwrap_or(C::new(f64::NAN, 0.0)) - lk) / d
    };
    let v = if side == CutSide::Off {
        b_integral(log, g, 0.0, PI)?
    } else {
        let pk = (k.im / a).clamp(-1.0, 1.0).acos();
        b_integral(log, g, 0.0, pk)? + b_integral(log, g, pk, PI)?
    };
    Ok(lk + scale * v)
}

pub fn f_fn(log: &JumpLog, k: C) -> Result<C> {
    Ok(ln_f(log, k)?.exp())
}

/// `F∞(k₁) = -(1/π) ∫_B ln δ(ζ)/f₋(ζ) dζ`.
pub fn f_inf(log: &JumpLog) -> Result<C> {
    let v = b_integral(log, |z| log.cauchy(z).unwrap_or(C::new(f64::NAN, 0.0)), 0.0, PI)?;
    Ok(-v / PI)
}

/// Resolution of [`f_inf_nested`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NestedOptions {
    /// Panels in `v = ln(1 + (k₁ - s)/S)` covering `[k₁, k₁ - reach]`.
    pub panels: usize,
    pub nodes_per_panel: usize,
    /// Chebyshev points on `B`.
    pub chebyshev: usize,
    pub reach: Option<f64>,
}

impl Default for NestedOptions {
    fn default() -> Self {
        Self { panels: 48, nodes_per_panel: 16, chebyshev: 64, reach: None }
    }
}

/// `F∞` assembled as `Re F∞ + i Im F∞` from the iterated integrals of
/// `ln|1 + r₁r₂|` and `Δ` over `(-∞, k₁]` against `1/(s - ζ)` and then over
/// `B`, on its own sampling of `r₁r₂`.
///
/// The inner integrals are evaluated at Chebyshev points of `B`, where the
/// outer integral becomes a midpoint sum in `φ`.
pub fn f_inf_nested<S: SpectralData + ?Sized>(spectral: &S, k1: f64, opts: &NestedOptions) -> Result<C> {
    let a = spectral.amplitude();
    let scale = a.max(1.0);
    let reach = opts.reach.unwrap_or(60.0 * scale);
    let v_max = (1.0 + (reach + k1).max(scale) / scale).ln();
    let (gx, gw) = gauss_legendre(opts.nodes_per_panel);
    let dv = v_max / opts.panels as f64;
    // nodes from the far end inward, for unwrapping from -∞
    let mut nodes = Vec::new();
    for p in (0..opts.panels).rev() {
        for j in (0..gx.len()).rev() {
            let v = dv * (p as f64 + 0.5 + 0.5 * gx[j]);
            let e = v.exp();
            nodes.push((k1 - scale * (e - 1.0), 0.5 * dv * gw[j] * scale * e));
        }
    }
    let mut tracker = BranchTracker::new();
    let mut logs = Vec::with_capacity(nodes.len());
    for &(s, _) in &nodes {
        let (r1, r2) = if spectral.is_reflectionless() {
            (C::new(0.0, 0.0), C::new(0.0, 0.0))
        } else {
            spectral.reflection(C::new(s, 0.0), CutSide::Off)?
        };
        logs.push(tracker.push(r1 * r2 + 1.0)?);
    }
    // L(s) ≈ L(s_far)(s_far/s)² beyond the last node
    let (s_far, l_far) = (nodes[0].0, logs[0]);
    let (tx, tw) = gauss_legendre(16);
    let m = opts.chebyshev;
    let mut re_sum = 0.0;
    let mut im_sum = 0.0;
    for j in 0..m {
        let phi = PI * (j as f64 + 0.5) / m as f64;
        let z = C::new(0.0, a * phi.cos());
        let mut acc = C::new(0.0, 0.0);
        let mut acc_im = C::new(0.0, 0.0);
        for (&(s, w), l) in nodes.iter().zip(&logs) {
            let kern = (C::new(s, 0.0) - z).inv() * w;
            acc += kern * l.re;
            acc_im += kern * l.im;
        }
        // s = s_far/u, u ∈ (0, 1]
        for (&x, &w) in tx.iter().zip(&tw) {
            let u = 0.5 * (x + 1.0);
            let kern = (C::new(s_far, 0.0) - z * u).inv() * (-s_far * u * 0.5 * w);
            acc += kern * l_far.re;
            acc_im += kern * l_far.im;
        }
        // inner Cauchy integrals divided by 2πi; the outer factor is -(i/π)(π/m)
        let inner_re = acc / C::new(0.0, 2.0 * PI);
        let inner_im = acc_im / C::new(0.0, 2.0 * PI);
        re_sum += (-C::i() * inner_re).re;
        im_sum += (-C::i() * inner_im).re;
    }
    Ok(C::new(re_sum, im_sum) / m as f64)
}
