#![allow(dead_code)]

use core::f64::consts::PI;

use nnls_core::scattering::{InitialProfile, Preset};

/// Off-centre Gaussian dip of modulus `m`: zero-free, with nonzero winding.
pub fn dip(a: f64, m: f64) -> InitialProfile {
    InitialProfile::from_preset(a, Preset::GaussianBump { amplitude: m, width: 1.0, chirp: 0.0, center: 0.5, phase: PI })
        .unwrap()
}

pub fn bump(a: f64, amplitude: f64, center: f64, phase: f64) -> InitialProfile {
    InitialProfile::from_preset(a, Preset::GaussianBump { amplitude, width: 1.0, chirp: 0.0, center, phase }).unwrap()
}

/// Deterministic pseudo-random numbers in `[0, 1)`.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }
}

pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

pub const TWO_PI: f64 = 2.0 * PI;
