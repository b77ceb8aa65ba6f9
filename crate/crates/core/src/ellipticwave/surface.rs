//! The genus-1 surface of `γ(k) = ((k² + A²)(k - α)(k - ᾱ))^{1/2}`.
//!
//! `γ = f·R` with `f` cut along `B` and `R = ((k - α)(k - ᾱ))^{1/2}` cut along
//! the band `α → k₀ → ᾱ`. The band cut is obtained from the vertical cut
//! `[ᾱ, α]` by flipping the sign of `R` inside the triangle `(α, k₀, ᾱ)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use num_traits::Float;

use crate::background::{cut_polar, f_branch, CutSide};
use crate::error::{Error, Result};
use crate::numerics::{bracket_root, quad_interval, ComplexPath, Endpoint, QuadOptions};

type C = Complex64;

pub(crate) const SURFACE_OPTS: QuadOptions = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-15, max_intervals: 4000 };

/// One of the two straight band contours leaving `k₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// `k₀ → α`
    Upper,
    /// `k₀ → ᾱ`
    Lower,
}

/// `α` from `k₀`: `Re α = -k₀ - ξ`, `Im α = (A² + 2k₀² + 2k₀ξ)^{1/2}`.
pub fn alpha_of(k0: f64, xi: f64, a: f64) -> C {
    C::new(-k0 - xi, (a * a + 2.0 * k0 * k0 + 2.0 * k0 * xi).sqrt())
}

fn r_vertical(k: C, alpha: C, side: CutSide) -> Result<C> {
    Ok(cut_polar(k, alpha.re, alpha.im, side)?.sqrt())
}

/// `Im ∫_B R(k)(k - k₀)/f₋(k) dk` with `α = α(k₀)`; the real part vanishes
/// by symmetry.
pub fn k0_residual(k0: f64, xi: f64, a: f64) -> Result<f64> {
    k0_integral(k0, xi, a, &SURFACE_OPTS).map(|v| v.im)
}

/// `∫_B R(k)(k - k₀)/f₋(k) dk`, using `k = iA cos φ`.
pub fn k0_integral(k0: f64, xi: f64, a: f64, opts: &QuadOptions) -> Result<C> {
    let alpha = alpha_of(k0, xi, a);
    let mut bad = None;
    let v = quad_interval(
        |phi| {
            let k = C::new(0.0, a * phi.cos());
            match r_vertical(k, alpha, CutSide::Off) {
                Ok(r) => r * (k - k0),
                Err(e) => {
                    bad = Some(e);
                    C::new(0.0, 0.0)
                }
            }
        },
        0.0,
        PI,
        Endpoint::Regular,
        Endpoint::Regular,
        opts,
    )?;
    if let Some(e) = bad {
        return Err(e);
    }
    Ok(v * C::i())
}

/// The root of the `k₀` equation. The residual is positive at `-ξ` and
/// negative at `0`, and the root lies in `(-ξ, -ξ/2)`.
pub fn solve_k0(xi: f64, a: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < SQRT_2 * a) {
        return Err(Error::Region { xi, expected: "0 < xi < sqrt(2) A" });
    }
    let eps = 1e-10 * xi;
    let (lo, hi) = (-xi + eps, -eps);
    let mut err = None;
    let root = bracket_root(
        |k0| match k0_residual(k0, xi, a) {
            Ok(v) => v,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-15,
    );
    if let Some(e) = err {
        return Err(e);
    }
    root.map_err(|e| match e {
        Error::NoSignChange { .. } => Error::Bracket { lo, hi },
        e => e,
    })
}

/// Proper crossing of the open segments `(p, q)` and `(u, v)`.
fn segments_cross(p: C, q: C, u: C, v: C) -> bool {
    let cross = |a: C, b: C, c: C| (b - a).re * (c - a).im - (b - a).im * (c - a).re;
    let scale = (q - p).norm() * (v - u).norm();
    let tol = 1e-14 * scale;
    let d1 = cross(u, v, p);
    let d2 = cross(u, v, q);
    let d3 = cross(p, q, u);
    let d4 = cross(p, q, v);
    ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))
}

fn other_band(band: Band) -> Band {
    match band {
        Band::Upper => Band::Lower,
        Band::Lower => Band::Upper,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceData {
    pub xi: f64,
    pub a: f64,
    pub k0: f64,
    pub alpha: C,
    /// Normalization `C = 1/∮_𝔟 dk/γ`.
    pub c_norm: C,
    pub tau: C,
    /// Whether the 𝔞-cycle was reversed to make `Im τ > 0`.
    pub a_flipped: bool,
}

impl SurfaceData {
    pub fn build(xi: f64, a: f64) -> Result<Self> {
        let k0 = solve_k0(xi, a)?;
        Self::with_k0(xi, a, k0)
    }

    /// Surface for a given `k₀`; the `k₀` equation is not checked.
    pub fn with_k0(xi: f64, a: f64, k0: f64) -> Result<Self> {
        let alpha = alpha_of(k0, xi, a);
        if !(alpha.im > 0.0) || !(alpha.re < 0.0) || !(k0 < 0.0) {
            return Err(Error::CutCollision("band triangle must lie left of B"));
        }
        let mut s = Self { xi, a, k0, alpha, c_norm: C::new(1.0, 0.0), tau: C::new(0.0, 0.0), a_flipped: false };
        let b = s.b_period(|_| C::new(1.0, 0.0))?;
        s.c_norm = b.inv();
        let tau = s.c_norm * s.a_period(|_| C::new(1.0, 0.0))?;
        if tau.im < 0.0 {
            s.tau = -tau;
            s.a_flipped = true;
        } else {
            s.tau = tau;
        }
        Ok(s)
    }

    fn triangle_side(&self, k: C) -> Option<bool> {
        let (p, q, r) = (self.alpha, C::new(self.k0, 0.0), self.alpha.conj());
        // the cross product is measured from the nearer end of each edge, which
        // keeps its sign reliable next to the vertices
        let cross = |a: C, b: C| {
            let (u, w) = if (k - a).norm_sqr() <= (k - b).norm_sqr() { (a, b) } else { (b, a) };
            let s = (w - u).re * (k - u).im - (w - u).im * (k - u).re;
            if (w - u).re * (b - a).re + (w - u).im * (b - a).im < 0.0 {
                -s
            } else {
                s
            }
        };
        let on_edge = |a: C, b: C, c: f64| {
            let e = b - a;
            let t = ((k - a).re * e.re + (k - a).im * e.im) / e.norm_sqr();
            let near = (k - a).norm().min((k - b).norm());
            (0.0..=1.0).contains(&t) && c.abs() <= 1e-13 * e.norm() * near
        };
        // orient so that the interior has all crosses positive
        let o = ((q - p).re * (r - p).im - (q - p).im * (r - p).re).signum();
        let c1 = o * cross(p, q);
        let c2 = o * cross(q, r);
        let c3 = o * cross(r, p);
        if k == p || k == q || k == r || on_edge(p, q, c1) || on_edge(q, r, c2) {
            return None;
        }
        Some(c1 > 0.0 && c2 > 0.0 && c3 >= 0.0)
    }

    /// `R(k)` with the band cut; fails on the band itself.
    pub fn r(&self, k: C) -> Result<C> {
        match self.triangle_side(k) {
            None => Err(Error::OnCut { re: k.re, im: k.im }),
            Some(true) => {
                // on the vertical edge take the value from the triangle side
                let side = match k.re == self.alpha.re {
                    false => CutSide::Off,
                    true if self.k0 > self.alpha.re => CutSide::Minus,
                    true => CutSide::Plus,
                };
                Ok(-r_vertical(k, self.alpha, side)?)
            }
            Some(false) => r_vertical(k, self.alpha, CutSide::Off),
        }
    }

    /// `γ(k)` on the upper sheet, `γ ~ k²`.
    pub fn gamma(&self, k: C) -> Result<C> {
        Ok(f_branch(k, self.a, CutSide::Off)? * self.r(k)?)
    }

    /// `γ₋` on a band (right side of the contour leaving `k₀`).
    pub fn gamma_on_band(&self, k: C, band: Band) -> Result<C> {
        let g = f_branch(k, self.a, CutSide::Off)? * r_vertical(k, self.alpha, CutSide::Off)?;
        let (end, other) = (self.band_end(band), self.band_end(other_band(band)));
        // R flips sign when the right side of the band faces the triangle
        let d = end - self.k0;
        let e = other - self.k0;
        let inside_right = d.re * e.im - d.im * e.re < 0.0;
        Ok(if inside_right { -g } else { g })
    }

    /// `γ₋` on `B` (right side, upward orientation).
    pub fn gamma_on_b(&self, k: C) -> Result<C> {
        Ok(f_branch(k, self.a, CutSide::Minus)? * r_vertical(k, self.alpha, CutSide::Off)?)
    }

    pub fn band_end(&self, band: Band) -> C {
        match band {
            Band::Upper => self.alpha,
            Band::Lower => self.alpha.conj(),
        }
    }

    /// Fails if the straight segment `p → q` crosses `B` or the band.
    pub fn check_segment(&self, p: C, q: C) -> Result<()> {
        let k0 = C::new(self.k0, 0.0);
        let cuts = [
            (C::new(0.0, -self.a), C::new(0.0, self.a)),
            (k0, self.alpha),
            (k0, self.alpha.conj()),
        ];
        if cuts.iter().any(|&(u, v)| segments_cross(p, q, u, v)) {
            return Err(Error::PathCrossesCut("segment crosses a branch cut"));
        }
        Ok(())
    }

    /// `∫ q(k)/γ(k) dk` along a polygon avoiding the cuts.
    pub fn integrate<Q: FnMut(C) -> C>(&self, mut q: Q, vertices: Vec<C>, start: Endpoint, end: Endpoint) -> Result<C> {
        // validates the vertex list
        ComplexPath::new(vertices.clone())?;
        for w in vertices.windows(2) {
            self.check_segment(w[0], w[1])?;
        }
        let n = vertices.len() - 1;
        let mut total = C::new(0.0, 0.0);
        for i in 0..n {
            let (p, r) = (vertices[i], vertices[i + 1]);
            let s = if i == 0 { start } else { Endpoint::Regular };
            let e = if i + 1 == n { end } else { Endpoint::Regular };
            let tol = SURFACE_OPTS.abs_tol / n as f64;
            total += match (s, e) {
                (_, Endpoint::Regular) => self.outward(&mut q, p, r, s, tol)?,
                (Endpoint::Regular, _) => -self.outward(&mut q, r, p, e, tol)?,
                _ => {
                    let m = (p + r) * 0.5;
                    self.outward(&mut q, p, m, s, 0.5 * tol)? - self.outward(&mut q, r, m, e, 0.5 * tol)?
                }
            };
        }
        Ok(total)
    }

    /// `∫_p^r q/γ dk` with the singular end at `p`. The offset `k - p` is
    /// known exactly from the parameter, so `γ` is corrected for the rounding
    /// of `k` next to a branch point.
    fn outward<Q: FnMut(C) -> C>(&self, q: &mut Q, p: C, r: C, tag: Endpoint, tol: f64) -> Result<C> {
        let dz = r - p;
        let branch = tag == Endpoint::InverseSqrt;
        let mut err = None;
        let opts = QuadOptions { abs_tol: tol, ..SURFACE_OPTS };
        let v = quad_interval(
            |t| {
                let k = p + dz * t;
                match self.gamma(k) {
                    Ok(g) => {
                        let off = k - p;
                        let g = if branch && off != C::new(0.0, 0.0) { g * (dz * t / off).sqrt() } else { g };
                        q(k) / g * dz
                    }
                    Err(e) => {
                        err = Some(e);
                        C::new(0.0, 0.0)
                    }
                }
            },
            0.0,
            1.0,
            tag,
            Endpoint::Regular,
            &opts,
        );
        match (err, v) {
            (Some(e), _) => Err(e),
            (None, v) => v,
        }
    }

    /// `∫ q(k)/γ(k) dk` along the ray `from + d·s`, `s ∈ [0, ∞)`; `start`
    /// tags the behaviour at `from`.
    pub fn integrate_ray<Q: FnMut(C) -> C>(&self, mut q: Q, from: C, dir: C, start: Endpoint) -> Result<C> {
        let branch = start == Endpoint::InverseSqrt;
        let mut err = None;
        let v = quad_interval(
            |u| {
                let s = u / (1.0 - u);
                let k = from + dir * s;
                let jac = dir / ((1.0 - u) * (1.0 - u));
                match self.gamma(k) {
                    Ok(g) => {
                        let off = k - from;
                        let g = if branch && off != C::new(0.0, 0.0) { g * (dir * s / off).sqrt() } else { g };
                        q(k) / g * jac
                    }
                    Err(e) => {
                        err = Some(e);
                        C::new(0.0, 0.0)
                    }
                }
            },
            0.0,
            1.0,
            start,
            Endpoint::Regular,
            &SURFACE_OPTS,
        );
        match (err, v) {
            (Some(e), _) => Err(e),
            (None, v) => v,
        }
    }

    /// `∮_𝔟 q/γ dk = 2∫_B q/γ₋ dk`.
    pub fn b_period<Q: FnMut(C) -> C>(&self, mut q: Q) -> Result<C> {
        let a = self.a;
        let alpha = self.alpha;
        let mut err = None;
        // k = iA cos φ turns dk/f₋ into i dφ
        let v = quad_interval(
            |phi| {
                let k = C::new(0.0, a * phi.cos());
                match r_vertical(k, alpha, CutSide::Off) {
                    Ok(r) => q(k) / r,
                    Err(e) => {
                        err = Some(e);
                        C::new(0.0, 0.0)
                    }
                }
            },
            0.0,
            PI,
            Endpoint::Regular,
            Endpoint::Regular,
            &SURFACE_OPTS,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(v * C::new(0.0, 2.0)),
        }
    }

    /// The 𝔟-period on a counterclockwise rectangle at distance `offset`
    /// from `B`.
    pub fn b_period_rectangle<Q: FnMut(C) -> C>(&self, q: Q, offset: f64) -> Result<C> {
        let (d, h) = (offset, self.a + offset);
        if d >= -self.k0.max(self.alpha.re) {
            return Err(Error::CutCollision("rectangle reaches the band"));
        }
        let v = vec![C::new(d, -h), C::new(d, h), C::new(-d, h), C::new(-d, -h), C::new(d, -h)];
        self.integrate(q, v, Endpoint::Regular, Endpoint::Regular)
    }

    /// `∮_𝔞 q/γ dk = ±2∫_{ᾱ}^{-iA} q/γ dk`, the sign fixed by `Im τ > 0`.
    pub fn a_period<Q: FnMut(C) -> C>(&self, q: Q) -> Result<C> {
        let v = self.integrate(q, vec![self.alpha.conj(), C::new(0.0, -self.a)], Endpoint::InverseSqrt, Endpoint::InverseSqrt)?;
        Ok(if self.a_flipped { -2.0 * v } else { 2.0 * v })
    }

    /// Abel map `v(k) = C ∫_{iA}^k dk/γ` along the straight segment.
    pub fn abel(&self, k: C) -> Result<C> {
        let top = C::new(0.0, self.a);
        if k == top {
            return Ok(C::new(0.0, 0.0));
        }
        let end = if k == self.alpha || k == self.alpha.conj() || k == -top { Endpoint::InverseSqrt } else { Endpoint::Regular };
        Ok(self.c_norm * self.integrate(|_| C::new(1.0, 0.0), vec![top, k], Endpoint::InverseSqrt, end)?)
    }

    /// `v∞`, along the vertical ray from `iA`.
    pub fn abel_infinity(&self) -> Result<C> {
        Ok(self.c_norm * self.integrate_ray(|_| C::new(1.0, 0.0), C::new(0.0, self.a), C::i(), Endpoint::InverseSqrt)?)
    }
}
