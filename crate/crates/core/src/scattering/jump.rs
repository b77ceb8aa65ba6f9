//! Continuous logarithm `L(s) = ln(1 + r₁(s) r₂(s))` on a half-line
//! `(-∞, k_end]` and its Cauchy integral.
//!
//! The half-line is covered by Gauss-Legendre panels whose lengths grow
//! geometrically away from `k_end`, clamped to `[min_panel, max_panel]`.
//! Panels are added until `|r₁r₂|` is negligible; beyond `reach` the
//! remainder is modelled as `L(a)(a/s)²`, the decay of `r₁r₂ = O(s⁻²)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use super::table::SpectralData;
use crate::background::CutSide;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, Barycentric, BranchTracker};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpOptions {
    pub nodes_per_panel: usize,
    pub min_panel: f64,
    pub max_panel: f64,
    /// Panels stop once `|r₁r₂|` stays below this on two consecutive panels.
    pub cutoff: f64,
    /// Largest `|s|` covered by panels; `None` means `60·max(1, A)`.
    pub reach: Option<f64>,
}

impl Default for JumpOptions {
    fn default() -> Self {
        Self { nodes_per_panel: 24, min_panel: 0.01, max_panel: 1.0, cutoff: 1e-17, reach: None }
    }
}

/// Side of the real axis for boundary values of the Cauchy integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Above,
    Below,
}

#[derive(Debug, Clone)]
pub struct JumpPanel {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<C>,
    interp: Barycentric,
}

impl JumpPanel {
    fn distance(&self, z: C) -> f64 {
        let x = z.re.clamp(self.a, self.b);
        (z - x).norm()
    }

    fn derivative_at(&self, x: f64) -> C {
        let h = 1e-6 * (self.b - self.a);
        (self.interp.eval(&self.values, C::new(x + h, 0.0)) - self.interp.eval(&self.values, C::new(x - h, 0.0)))
            / (2.0 * h)
    }

    /// `∫_a^b L(s)/(s - z) ds`.
    fn cauchy(&self, z: C, side: Option<Boundary>) -> C {
        let len = self.b - self.a;
        if self.distance(z) > len {
            return self
                .nodes
                .iter()
                .zip(&self.weights)
                .zip(&self.values)
                .map(|((&x, &w), &v)| v * w / (x - z))
                .sum();
        }
        let pz = self.interp.eval(&self.values, z);
        let mut s = C::new(0.0, 0.0);
        for ((&x, &w), &v) in self.nodes.iter().zip(&self.weights).zip(&self.values) {
            let d = x - z;
            if d == C::new(0.0, 0.0) {
                s += self.derivative_at(x) * w;
            } else {
                s += (v - pz) * w / d;
            }
        }
        s + pz * log_ratio(self.a, self.b, z, side)
    }
}

/// `∫_a^b ds/(s - z)` with the boundary value chosen by `side` when `z` lies
/// inside `(a, b)`.
fn log_ratio(a: f64, b: f64, z: C, side: Option<Boundary>) -> C {
    if z.im == 0.0 && z.re > a && z.re < b {
        let re = ((b - z.re) / (z.re - a)).ln();
        let im = match side {
            Some(Boundary::Below) => -PI,
            _ => PI,
        };
        return C::new(re, im);
    }
    (C::new(b, 0.0) - z).ln() - (C::new(a, 0.0) - z).ln()
}

/// Panel representation of `L(s)` on `(-∞, k_end]`.
#[derive(Debug, Clone)]
pub struct JumpLog {
    a: f64,
    k_end: f64,
    end_value: C,
    panels: Vec<JumpPanel>,
    tail: Option<(f64, C)>,
    tail_rule: (Vec<f64>, Vec<f64>),
}

impl JumpLog {
    pub fn build<S: SpectralData + ?Sized>(spectral: &S, k_end: f64) -> Result<Self> {
        Self::build_with(spectral, k_end, &JumpOptions::default())
    }

    pub fn build_with<S: SpectralData + ?Sized>(spectral: &S, k_end: f64, opts: &JumpOptions) -> Result<Self> {
        let a_bg = spectral.amplitude();
        let reach = opts.reach.unwrap_or(60.0 * a_bg.max(1.0));
        let (gx, gw) = gauss_legendre(opts.nodes_per_panel);
        let tail_rule = gauss_legendre(16);
        let zero = C::new(0.0, 0.0);
        // outward from k_end: (a, b, nodes, weights, raw 1 + r1 r2)
        let mut raw: Vec<(f64, f64, Vec<f64>, Vec<f64>, Vec<C>)> = Vec::new();
        let mut b = k_end;
        let mut quiet = 0;
        let mut reached = false;
        loop {
            let len = (0.5 * b.abs()).clamp(opts.min_panel, opts.max_panel);
            let a = b - len;
            let nodes: Vec<f64> = gx.iter().map(|&x| 0.5 * (a + b) + 0.5 * len * x).collect();
            let weights: Vec<f64> = gw.iter().map(|&w| 0.5 * len * w).collect();
            let mut vals = Vec::with_capacity(nodes.len());
            let mut peak = 0.0f64;
            for &s in &nodes {
                let rr = if spectral.is_reflectionless() {
                    zero
                } else {
                    let (r1, r2) = spectral.reflection(C::new(s, 0.0), CutSide::Off)?;
                    r1 * r2
                };
                peak = peak.max(rr.norm());
                vals.push(rr + 1.0);
            }
            raw.push((a, b, nodes, weights, vals));
            quiet = if peak < opts.cutoff { quiet + 1 } else { 0 };
            if quiet >= 2 {
                break;
            }
            if a.abs() >= reach {
                reached = true;
                break;
            }
            b = a;
        }
        let mut tracker = BranchTracker::new();
        let mut panels = Vec::with_capacity(raw.len());
        for (a, b, nodes, weights, vals) in raw.into_iter().rev() {
            let mut values = Vec::with_capacity(vals.len());
            for z in vals {
                values.push(tracker.push(z)?);
            }
            let interp = Barycentric::new(&nodes);
            panels.push(JumpPanel { a, b, nodes, weights, values, interp });
        }
        let end_raw = if spectral.is_reflectionless() {
            C::new(1.0, 0.0)
        } else {
            let (r1, r2) = spectral.reflection(C::new(k_end, 0.0), CutSide::Plus)?;
            r1 * r2 + 1.0
        };
        let end_value = tracker.push(end_raw)?;
        let tail = if reached {
            let p = &panels[0];
            Some((p.a, p.interp.eval(&p.values, C::new(p.a, 0.0))))
        } else {
            None
        };
        Ok(Self { a: a_bg, k_end, end_value, panels, tail, tail_rule })
    }

    /// Background amplitude of the spectral data.
    pub fn amplitude(&self) -> f64 {
        self.a
    }

    pub fn k_end(&self) -> f64 {
        self.k_end
    }

    /// `L(k_end)`.
    pub fn end_value(&self) -> C {
        self.end_value
    }

    /// Panels from the far left up to `k_end`.
    pub fn panels(&self) -> &[JumpPanel] {
        &self.panels
    }

    /// Left end of the panel cover and `L` there, when a tail model is used.
    pub fn tail(&self) -> Option<(f64, C)> {
        self.tail
    }

    /// `sup |Im L(s)|` over the sampled nodes and `k_end`.
    pub fn max_abs_arg(&self) -> f64 {
        self.panels
            .iter()
            .flat_map(|p| p.values.iter())
            .chain(core::iter::once(&self.end_value))
            .fold(0.0, |m, v| m.max(v.im.abs()))
    }

    /// Interpolated `L(s)` for `s` in the panel cover.
    pub fn value(&self, s: f64) -> Option<C> {
        self.panels
            .iter()
            .find(|p| s >= p.a && s <= p.b)
            .map(|p| p.interp.eval(&p.values, C::new(s, 0.0)))
    }

    fn tail_integral(&self, z: C) -> C {
        let Some((a, la)) = self.tail else {
            return C::new(0.0, 0.0);
        };
        let (x, w) = &self.tail_rule;
        let mut s = C::new(0.0, 0.0);
        for (&xi, &wi) in x.iter().zip(w) {
            let u = 0.5 * (xi + 1.0);
            s += (C::new(a, 0.0) - z * u).inv() * (-a * u * 0.5 * wi);
        }
        la * s
    }

    fn integral(&self, z: C, side: Option<Boundary>) -> C {
        let mut z = z;
        if z.im == 0.0 {
            for p in &self.panels {
                if z.re == p.a || z.re == p.b {
                    z.re += 1e-13 * z.re.abs().max(1.0);
                }
            }
        }
        let body: C = self.panels.iter().map(|p| p.cauchy(z, side)).sum();
        body + self.tail_integral(z)
    }

    /// `(1/2πi) ∫_{-∞}^{k_end} L(s)/(s - z) ds`, which is `ln δ(z)`.
    ///
    /// `z` must not lie on `(-∞, k_end]`; use [`JumpLog::cauchy_boundary`]
    /// there.
    pub fn cauchy(&self, z: C) -> Result<C> {
        if z.im == 0.0 && z.re <= self.k_end {
            return Err(Error::OnCut { re: z.re, im: z.im });
        }
        Ok(self.integral(z, None) / C::new(0.0, 2.0 * PI))
    }

    /// Boundary value of the Cauchy integral at `x < k_end` from `side`.
    pub fn cauchy_boundary(&self, x: f64, side: Boundary) -> C {
        self.integral(C::new(x, 0.0), Some(side)) / C::new(0.0, 2.0 * PI)
    }

    /// `lim_{z→k_end} [C(z) - (L(k_end)/2πi) ln(z - k_end)]`, the value
    /// `χ(k_end, k_end)`.
    pub fn regular_part_at_end(&self) -> C {
        let k = self.k_end;
        let le = self.end_value;
        let zk = C::new(k, 0.0);
        let n = self.panels.len();
        let mut acc = C::new(0.0, 0.0);
        for (j, p) in self.panels.iter().enumerate() {
            if j + 1 == n {
                for ((&x, &w), &v) in p.nodes.iter().zip(&p.weights).zip(&p.values) {
                    acc += (v - le) * w / (x - k);
                }
                acc -= le * (k - p.a).ln();
            } else {
                acc += p.cauchy(zk, None);
            }
        }
        acc += self.tail_integral(zk);
        acc / C::new(0.0, 2.0 * PI)
    }
}
