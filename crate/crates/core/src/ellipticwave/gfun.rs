//! `G(k, k₀, α)`, the solution of `G₊G₋ = δ²` on `B`, `δ²e^{iω}/r₁` on
//! `k₀ → α` and `δ²r₂e^{iω}` on `k₀ → ᾱ`, bounded at the branch points and
//! at infinity, together with `ω` and `G∞`.
//!
//! On each contour `γ₋` is the value on the right side. `B` runs upward and
//! the bands run out of `k₀`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use super::surface::{Band, SurfaceData, SURFACE_OPTS};
use crate::background::CutSide;
use crate::error::{Error, Result};
use crate::numerics::{quad_interval, Barycentric, BranchTracker, Endpoint, QuadOptions};
use crate::scattering::{JumpLog, SpectralData};

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);

/// Reflection moduli below this on a band are treated as zeros.
pub const MIN_BAND_REFLECTION: f64 = 1e-12;

const BAND_NODES: usize = 64;
const MAX_BAND_NODES: usize = 256;
const BAND_INTERP_TOL: f64 = 1e-10;

const BAND_OPTS: QuadOptions = QuadOptions { abs_tol: 0.5 * SURFACE_OPTS.abs_tol, ..SURFACE_OPTS };
/// Looser options for the Cauchy integral, whose integrand peaks near `k`.
const CAUCHY_OPTS: QuadOptions = QuadOptions { abs_tol: 1e-11, rel_tol: 1e-12, max_intervals: SURFACE_OPTS.max_intervals };

/// `ln r₁` on `k₀ → α` or `ln r₂` on `k₀ → ᾱ`, continuous from `k₀`, as a
/// Chebyshev interpolant in the band parameter `s ∈ [0, 1]`.
#[derive(Debug, Clone)]
pub struct BandLog {
    pub band: Band,
    start: C,
    dir: C,
    interp: Barycentric,
    values: Vec<C>,
}

impl BandLog {
    pub fn build<S: SpectralData + ?Sized>(surface: &SurfaceData, spectral: &S, band: Band) -> Result<Self> {
        let start = C::new(surface.k0, 0.0);
        let dir = surface.band_end(band) - start;
        let sample = |s: f64| -> Result<C> {
            let k = start + dir * s;
            let r = match band {
                Band::Upper => spectral.r1(k, CutSide::Off)?,
                Band::Lower => spectral.r2(k, CutSide::Off)?,
            };
            if r.norm() < MIN_BAND_REFLECTION {
                return Err(Error::ZeroReflectionOnBand { re: k.re, im: k.im });
            }
            Ok(r)
        };
        let mut n = BAND_NODES;
        loop {
            let nodes: Vec<f64> = (0..=n).map(|j| 0.5 * (1.0 - (PI * j as f64 / n as f64).cos())).collect();
            let mut tracker = BranchTracker::new();
            let mut values = Vec::with_capacity(n + 1);
            let mut refine = false;
            for &s in &nodes {
                match tracker.push(sample(s)?) {
                    Ok(l) => values.push(l),
                    Err(Error::PhaseJump { .. }) if n < MAX_BAND_NODES => {
                        refine = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !refine {
                let out = Self { band, start, dir, interp: Barycentric::new(&nodes), values };
                let worst = out.midpoint_error(&sample, n)?;
                if worst <= BAND_INTERP_TOL || n >= MAX_BAND_NODES {
                    return Ok(out);
                }
            }
            n *= 2;
        }
    }

    /// Largest interpolation error at a few points between nodes, modulo `2πi`.
    fn midpoint_error<F: Fn(f64) -> Result<C>>(&self, sample: &F, n: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for j in [0, n / 8, n / 4, n / 2, 3 * n / 4, n - 1] {
            let s = 0.25 * (2.0 - (PI * j as f64 / n as f64).cos() - (PI * (j + 1) as f64 / n as f64).cos());
            let d = self.eval(s).exp() - sample(s)?;
            worst = worst.max(d.norm() / sample(s)?.norm());
        }
        Ok(worst)
    }

    /// The same interpolant moved to the branch `ln r + shift`.
    pub fn shifted(mut self, shift: C) -> Self {
        for v in &mut self.values {
            *v += shift;
        }
        self
    }

    /// `ln r` at band parameter `s`.
    pub fn eval(&self, s: f64) -> C {
        self.interp.eval(&self.values, C::new(s, 0.0))
    }

    pub fn point(&self, s: f64) -> C {
        self.start + self.dir * s
    }
}

/// `i ∫_{φ0}^{φ1} g(ζ)/R(ζ) dφ` with `ζ = iA cos φ`, i.e. `∫ g/γ₋ dζ` over the
/// matching upward piece of `B`.
fn b_part<G: FnMut(C) -> C>(s: &SurfaceData, mut g: G, breaks: &[f64], opts: &QuadOptions) -> Result<C> {
    let a = s.a;
    let mut err = None;
    let mut total = ZERO;
    for w in breaks.windows(2) {
        let v = quad_interval(
            |phi| {
                let z = C::new(0.0, a * phi.cos());
                match s.r(z) {
                    Ok(r) => g(z) / r,
                    Err(e) => {
                        err = Some(e);
                        ZERO
                    }
                }
            },
            w[0],
            w[1],
            Endpoint::Regular,
            Endpoint::Regular,
            opts,
        );
        if let Some(e) = err.take() {
            return Err(e);
        }
        total += v?;
    }
    Ok(total * C::i())
}

/// `∫_{band} g(ζ, s)/γ₋(ζ) dζ`; `g` also receives the band parameter. The
/// half next to `k₀` carries the logarithm of `δ`, the far half the square
/// root of `γ`, and the far half is parametrized from its end.
fn band_part<G: FnMut(C, f64) -> C>(s: &SurfaceData, band: Band, mut g: G, split: Option<f64>, opts: &QuadOptions) -> Result<C> {
    let start = C::new(s.k0, 0.0);
    let end = s.band_end(band);
    let d = end - start;
    let mut err = None;
    let mut near = |t: f64| {
        let z = start + d * t;
        match s.gamma_on_band(z, band) {
            Ok(gm) => g(z, t) / gm * d,
            Err(e) => {
                err = Some(e);
                ZERO
            }
        }
    };
    let mid = match split {
        Some(t) if t > 0.0 && t < 0.5 => [0.0, t, 0.5],
        _ => [0.0, 0.25, 0.5],
    };
    let mut total = quad_interval(&mut near, mid[0], mid[1], Endpoint::Log, Endpoint::Regular, opts)?;
    total += quad_interval(&mut near, mid[1], mid[2], Endpoint::Regular, Endpoint::Regular, opts)?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    // far half: ζ = end - d·u, with the exact offset restoring γ's accuracy
    let far_split = match split {
        Some(t) if t > 0.5 && t < 1.0 => 1.0 - t,
        _ => 0.25,
    };
    let mut far = |u: f64| {
        let z = end - d * u;
        let t = 1.0 - u;
        match s.gamma_on_band(z, band) {
            Ok(gm) => {
                let off = z - end;
                let gm = if off != ZERO { gm * (-d * u / off).sqrt() } else { gm };
                g(z, t) / gm * d
            }
            Err(e) => {
                err = Some(e);
                ZERO
            }
        }
    };
    total += quad_interval(&mut far, 0.0, far_split, Endpoint::InverseSqrt, Endpoint::Regular, opts)?;
    total += quad_interval(&mut far, far_split, 0.5, Endpoint::Regular, Endpoint::Regular, opts)?;
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// The function `G` together with its constants.
#[derive(Debug, Clone)]
pub struct GFunction {
    pub surface: SurfaceData,
    pub log: JumpLog,
    pub upper: BandLog,
    pub lower: BandLog,
    pub omega: C,
    pub g_inf: C,
}

impl GFunction {
    pub fn build<S: SpectralData + ?Sized>(surface: &SurfaceData, spectral: &S, log: JumpLog) -> Result<Self> {
        let upper = BandLog::build(surface, spectral, Band::Upper)?;
        let lower = BandLog::build(surface, spectral, Band::Lower)?;
        // only ln r₁(k₀) + ln r₂(k₀) enters q; it is the principal ln(r₁r₂)(k₀)
        let sum = upper.eval(0.0) + lower.eval(0.0);
        let turns = ((sum.exp().ln() - sum).im / (2.0 * PI)).round();
        let lower = lower.shifted(C::new(0.0, 2.0 * PI * turns));
        Self::from_logs(surface, log, upper, lower)
    }

    /// `G` from prepared band logarithms.
    pub fn from_logs(surface: &SurfaceData, log: JumpLog, upper: BandLog, lower: BandLog) -> Result<Self> {
        let mut g = Self { surface: *surface, log, upper, lower, omega: ZERO, g_inf: ZERO };
        let s = &g.surface;
        let n0 = g.integrate(|_| C::new(1.0, 0.0), ZERO, None, &BAND_OPTS)?;
        let den = band_part(s, Band::Upper, |_, _| C::new(1.0, 0.0), None, &BAND_OPTS)?
            + band_part(s, Band::Lower, |_, _| C::new(1.0, 0.0), None, &BAND_OPTS)?;
        g.omega = C::i() * n0 / den;
        g.g_inf = -g.integrate(|z| z, C::i() * g.omega, None, &BAND_OPTS)? / (2.0 * PI);
        Ok(g)
    }

    /// `ln δ(ζ, k₀)`.
    pub fn ln_delta(&self, z: C) -> Result<C> {
        self.log.cauchy(z)
    }

    /// Jump density on `B` at `ζ`.
    pub fn density_b(&self, z: C) -> Result<C> {
        Ok(2.0 * self.ln_delta(z)?)
    }

    /// Jump density on a band at parameter `s`, without `iω`.
    pub fn density_band(&self, band: Band, s: f64) -> Result<C> {
        match band {
            Band::Upper => Ok(2.0 * self.ln_delta(self.upper.point(s))? - self.upper.eval(s)),
            Band::Lower => Ok(2.0 * self.ln_delta(self.lower.point(s))? + self.lower.eval(s)),
        }
    }

    /// `Σ ∫ (φ + shift on the bands)·w(ζ)/γ₋ dζ` over `B` and both bands.
    /// `near` adds breakpoints close to a point.
    fn integrate<W: Fn(C) -> C>(&self, w: W, shift: C, near: Option<C>, opts: &QuadOptions) -> Result<C> {
        let s = &self.surface;
        let mut bad = None;
        let mut b_breaks = Vec::from([0.0, PI]);
        let mut splits = [None, None];
        if let Some(k) = near {
            let pk = (k.im / s.a).clamp(-1.0, 1.0).acos();
            if pk > 0.0 && pk < PI {
                b_breaks = Vec::from([0.0, pk, PI]);
            }
            for (i, band) in [Band::Upper, Band::Lower].into_iter().enumerate() {
                let d = s.band_end(band) - s.k0;
                let t = ((k - s.k0).re * d.re + (k - s.k0).im * d.im) / d.norm_sqr();
                splits[i] = Some(t);
            }
        }
        let vb = b_part(
            s,
            |z| match self.density_b(z) {
                Ok(p) => p * w(z),
                Err(e) => {
                    bad = Some(e);
                    ZERO
                }
            },
            &b_breaks,
            opts,
        )?;
        let mut total = vb;
        for (i, band) in [Band::Upper, Band::Lower].into_iter().enumerate() {
            total += band_part(
                s,
                band,
                |z, t| match self.density_band(band, t) {
                    Ok(p) => (p + shift) * w(z),
                    Err(e) => {
                        bad = Some(e);
                        ZERO
                    }
                },
                splits[i],
                opts,
            )?;
        }
        match bad {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }

    /// `ln G(k)` for `k` off the contours.
    pub fn ln_g(&self, k: C) -> Result<C> {
        let gamma = self.surface.gamma(k)?;
        let v = self.integrate(|z| (z - k).inv(), C::i() * self.omega, Some(k), &CAUCHY_OPTS)?;
        Ok(-gamma / C::new(0.0, 2.0 * PI) * v)
    }

    pub fn g(&self, k: C) -> Result<C> {
        Ok(self.ln_g(k)?.exp())
    }
}
