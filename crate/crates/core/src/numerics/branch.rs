//! Continuous logarithms along ordered samples.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

/// Incremental unwrapping of `ln z` along a path.
///
/// The first sample takes the principal branch; each later sample takes the
/// branch closest to its predecessor. A raw phase step above `max_jump` is
/// treated as under-resolved.
#[derive(Debug, Clone)]
pub struct BranchTracker {
    samples: Vec<Complex64>,
    unwrapped_log: Vec<Complex64>,
    max_jump: f64,
}

impl Default for BranchTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl BranchTracker {
    pub fn new() -> Self {
        Self::with_max_jump(FRAC_PI_2)
    }

    pub fn with_max_jump(max_jump: f64) -> Self {
        Self { samples: Vec::new(), unwrapped_log: Vec::new(), max_jump }
    }

    /// Starts from an explicit log value instead of the principal branch.
    pub fn starting_at(log0: Complex64) -> Self {
        let mut t = Self::new();
        t.samples.push(log0.exp());
        t.unwrapped_log.push(log0);
        t
    }

    pub fn push(&mut self, z: Complex64) -> Result<Complex64> {
        let index = self.samples.len();
        if z == Complex64::new(0.0, 0.0) || !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::ZeroSample(index));
        }
        let principal = z.ln();
        let log = match self.unwrapped_log.last() {
            None => principal,
            Some(prev) => {
                let mut jump = principal.im - prev.im;
                jump -= 2.0 * PI * (jump / (2.0 * PI)).round();
                if jump.abs() > self.max_jump {
                    return Err(Error::PhaseJump { index: index - 1, jump });
                }
                Complex64::new(principal.re, prev.im + jump)
            }
        };
        self.samples.push(z);
        self.unwrapped_log.push(log);
        Ok(log)
    }

    pub fn last(&self) -> Option<Complex64> {
        self.unwrapped_log.last().copied()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn unwrapped_log(&self) -> &[Complex64] {
        &self.unwrapped_log
    }

    pub fn into_logs(self) -> Vec<Complex64> {
        self.unwrapped_log
    }
}

/// Logs of `values` with imaginary parts continuous along the ordering.
pub fn continuous_log(values: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut t = BranchTracker::new();
    for &z in values {
        t.push(z)?;
    }
    Ok(t.into_logs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_ones() {
        let l = continuous_log(&vec![Complex64::new(1.0, 0.0); 10]).unwrap();
        assert!(l.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn two_windings() {
        let v: Vec<Complex64> =
            (0..1000).map(|j| Complex64::from_polar(1.0, 4.0 * PI * j as f64 / 999.0)).collect();
        let l = continuous_log(&v).unwrap();
        assert!((l[999].im - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn crossing_negative_axis() {
        let v: Vec<Complex64> = (0..50).map(|j| Complex64::new(-1.0, 0.5 - 0.02 * j as f64)).collect();
        let l = continuous_log(&v).unwrap();
        assert!(l.windows(2).all(|p| (p[1].im - p[0].im).abs() < 0.1));
        assert!(l[49].im > PI);
    }

    #[test]
    fn errors() {
        assert_eq!(continuous_log(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]), Err(Error::ZeroSample(1)));
        let r = continuous_log(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.1)]);
        assert!(matches!(r, Err(Error::PhaseJump { index: 0, .. })));
    }
}
