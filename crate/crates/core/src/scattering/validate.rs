use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use num_traits::Float;

use super::jost::{a1_value, a2_value};
use super::jump::JumpLog;
use super::profile::InitialProfile;
use super::table::SpectralTable;
use crate::background::{CutSide, Ray, Region};
use crate::error::{Error, Result};
use crate::numerics::ode::OdeOptions;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroCountOptions {
    /// Half-width of the rectangle; `None` means `10·max(A, 1)`.
    pub k_max: Option<f64>,
    /// Height of the lower edge above the real axis.
    pub epsilon: f64,
    /// Half-width of the sleeve around the cut.
    pub sleeve: f64,
    /// Initial samples per contour edge.
    pub base_points: usize,
    /// Largest phase change allowed between neighbouring samples.
    pub max_phase_step: f64,
    /// Samples with `|a_j|` below this are reported as hitting a zero.
    pub min_abs: f64,
    pub max_samples: usize,
}

impl Default for ZeroCountOptions {
    fn default() -> Self {
        Self {
            k_max: None,
            epsilon: 1e-3,
            sleeve: 1e-3,
            base_points: 12,
            max_phase_step: 0.3,
            min_abs: 1e-6,
            max_samples: 20_000,
        }
    }
}

/// Outcome of the zero-freeness and winding checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionReport {
    pub zero_count_upper: usize,
    pub zero_count_lower: usize,
    /// Smallest `|a_j|` seen on the real axis and on both sides of `B`.
    pub boundary_min_abs: f64,
    pub winding_ok: bool,
    pub max_abs_winding: f64,
    pub region_checked: Ray,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.zero_count_upper == 0 && self.zero_count_lower == 0 && self.boundary_min_abs > 1e-6 && self.winding_ok
    }

    /// Error describing the first failed assumption.
    pub fn ensure(&self) -> Result<()> {
        if self.zero_count_upper > 0 || self.zero_count_lower > 0 {
            return Err(Error::ZerosPresent { upper: self.zero_count_upper, lower: self.zero_count_lower });
        }
        if self.boundary_min_abs <= 1e-6 {
            return Err(Error::ContourNearZero(self.boundary_min_abs));
        }
        if !self.winding_ok {
            return Err(Error::WindingViolation(self.max_abs_winding));
        }
        Ok(())
    }
}

fn contour(a: f64, k: f64, eps: f64, sleeve: f64, upper: bool) -> Vec<C> {
    let up = vec![
        C::new(-k, eps),
        C::new(-sleeve, eps),
        C::new(-sleeve, a + sleeve),
        C::new(sleeve, a + sleeve),
        C::new(sleeve, eps),
        C::new(k, eps),
        C::new(k, k),
        C::new(-k, k),
    ];
    if upper {
        up
    } else {
        up.iter().rev().map(|z| z.conj()).collect()
    }
}

/// Number of zeros of `a₁` in the upper (or `a₂` in the lower) half-plane,
/// by the argument principle on a rectangle with a sleeve cut out around
/// the half of `B` on that side.
pub fn count_zeros(profile: &InitialProfile, upper: bool, opts: &ZeroCountOptions) -> Result<usize> {
    let a = profile.amplitude();
    let kmax = opts.k_max.unwrap_or(10.0 * a.max(1.0));
    let ode = OdeOptions::default();
    let eval = |z: C| -> Result<C> {
        let v = if upper { a1_value(profile, z, CutSide::Off, &ode)? } else { a2_value(profile, z, CutSide::Off, &ode)? };
        if v.norm() < opts.min_abs {
            return Err(Error::ContourNearZero(v.norm()));
        }
        Ok(v)
    };
    let verts = contour(a, kmax, opts.epsilon, opts.sleeve, upper);
    let mut total = 0.0;
    let mut samples = 0usize;
    for i in 0..verts.len() {
        let (p, q) = (verts[i], verts[(i + 1) % verts.len()]);
        let n = opts.base_points;
        let mut pts: Vec<(f64, C)> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let s = j as f64 / n as f64;
            pts.push((s, eval(p + (q - p) * s)?));
        }
        samples += n + 1;
        // refine until neighbouring phases are close
        let mut j = 0;
        while j + 1 < pts.len() {
            let (s0, v0) = pts[j];
            let (s1, v1) = pts[j + 1];
            let step = (v1 / v0).arg();
            if step.abs() > opts.max_phase_step || (v1.norm() / v0.norm()).ln().abs() > 1.0 {
                if s1 - s0 < 1e-9 {
                    return Err(Error::ContourNearZero(v0.norm().min(v1.norm())));
                }
                let sm = 0.5 * (s0 + s1);
                pts.insert(j + 1, (sm, eval(p + (q - p) * sm)?));
                samples += 1;
                if samples > opts.max_samples {
                    return Err(Error::ContourNearZero(v0.norm().min(v1.norm())));
                }
            } else {
                total += step;
                j += 1;
            }
        }
    }
    let winding = total / (2.0 * PI);
    let count = winding.round();
    if (winding - count).abs() > 0.1 || count < 0.0 {
        return Err(Error::ContourNearZero(f64::NAN));
    }
    Ok(count as usize)
}

fn boundary_min(profile: &InitialProfile, kmax: f64) -> Result<f64> {
    let a = profile.amplitude();
    let ode = OdeOptions::default();
    let mut m = f64::INFINITY;
    let n = 40;
    for j in 0..n {
        // real axis, avoiding k = 0
        let x = kmax * (2.0 * (j as f64 + 0.5) / n as f64 - 1.0);
        let k = C::new(x, 0.0);
        m = m.min(a1_value(profile, k, CutSide::Off, &ode)?.norm());
        m = m.min(a2_value(profile, k, CutSide::Off, &ode)?.norm());
        // both sides of B
        let y = a * (2.0 * (j as f64 + 0.5) / n as f64 - 1.0);
        let k = C::new(0.0, y);
        for side in [CutSide::Plus, CutSide::Minus] {
            if y > 0.0 {
                m = m.min(a1_value(profile, k, side, &ode)?.norm());
            } else {
                m = m.min(a2_value(profile, k, side, &ode)?.norm());
            }
        }
    }
    Ok(m)
}

/// Checks that `a₁`, `a₂` have no zeros and that the argument of
/// `1 + r₁r₂` accumulated from `-∞` stays in `(-π, π)` up to the stopping
/// point of the ray's region.
pub fn validate_assumptions(profile: &InitialProfile, ray: Ray) -> Result<AssumptionReport> {
    let opts = ZeroCountOptions::default();
    let a = profile.amplitude();
    let kmax = opts.k_max.unwrap_or(10.0 * a.max(1.0));
    let upper = count_zeros(profile, true, &opts)?;
    let lower = count_zeros(profile, false, &opts)?;
    let boundary_min_abs = boundary_min(profile, kmax)?;
    let k_stop = match ray.region {
        Region::PlaneWave => -a / SQRT_2,
        _ => 0.0,
    };
    let max_abs_winding = if upper == 0 && lower == 0 && boundary_min_abs > opts.min_abs {
        let table = SpectralTable::new(profile.clone());
        JumpLog::build(&table, k_stop)?.max_abs_arg()
    } else {
        f64::NAN
    };
    Ok(AssumptionReport {
        zero_count_upper: upper,
        zero_count_lower: lower,
        boundary_min_abs,
        winding_ok: max_abs_winding < PI,
        max_abs_winding,
        region_checked: ray,
    })
}
