use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::interp::uniform_lagrange;

type C = Complex64;

/// Initial datum `q₀(x)`: the background `A` plus a perturbation supported
/// in `[-L, L]`, given by uniform samples and interpolated locally.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialProfile {
    a: f64,
    support: f64,
    dx: f64,
    samples: Vec<C>,
    order: usize,
}

/// Named initial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `A + amplitude·e^{i phase}·exp(-((x - center)/width)²)·e^{i chirp x}`.
    GaussianBump { amplitude: f64, width: f64, chirp: f64, center: f64, phase: f64 },
    /// `A + amplitude` on `|x - center| < width/2`.
    Box { amplitude: f64, width: f64, center: f64 },
}

impl InitialProfile {
    /// Samples must cover `[-L, L]` with spacing `dx` and end at the
    /// background value.
    pub fn new(a: f64, support: f64, dx: f64, samples: Vec<C>, order: usize) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidAmplitude(a));
        }
        if !(support > 0.0 && dx > 0.0) {
            return Err(Error::InvalidProfile("support and spacing must be positive"));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidProfile("at least two samples are needed"));
        }
        let span = dx * (samples.len() - 1) as f64;
        if (span - 2.0 * support).abs() > 1e-9 * support {
            return Err(Error::InvalidProfile("samples do not span [-L, L]"));
        }
        if order == 0 {
            return Err(Error::InvalidProfile("interpolation order must be at least 1"));
        }
        let bg = C::new(a, 0.0);
        if (samples[0] - bg).norm() > 1e-12 || (samples[samples.len() - 1] - bg).norm() > 1e-12 {
            return Err(Error::InvalidProfile("q0(±L) differs from the background"));
        }
        if samples.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidProfile("non-finite sample"));
        }
        Ok(Self { a, support, dx, samples, order })
    }

    /// Samples `q` at `n = 2L/dx + 1` points. Values at `±L` are snapped to
    /// `A` when already within `1e-12`.
    pub fn from_fn<F: Fn(f64) -> C>(a: f64, support: f64, n_intervals: usize, order: usize, q: F) -> Result<Self> {
        if n_intervals < 1 {
            return Err(Error::InvalidProfile("at least one interval is needed"));
        }
        let dx = 2.0 * support / n_intervals as f64;
        let mut samples: Vec<C> = (0..=n_intervals).map(|j| q(-support + dx * j as f64)).collect();
        let bg = C::new(a, 0.0);
        for idx in [0, n_intervals] {
            if (samples[idx] - bg).norm() <= 1e-12 {
                samples[idx] = bg;
            }
        }
        Self::new(a, support, dx, samples, order)
    }

    pub fn background(a: f64, support: f64) -> Result<Self> {
        Self::from_fn(a, support, 16, 1, |_| C::new(a, 0.0))
    }

    pub fn from_preset(a: f64, preset: Preset) -> Result<Self> {
        match preset {
            Preset::GaussianBump { amplitude, width, chirp, center, phase } => {
                if !(width > 0.0) {
                    return Err(Error::InvalidProfile("width must be positive"));
                }
                // tail below 1e-13 relative to the amplitude
                let reach = width * (amplitude.abs().max(1e-300) / 1e-14).ln().max(1.0).sqrt();
                let support = center.abs() + reach;
                let n = ((2.0 * support / (0.02 * width)).ceil() as usize).max(64);
                let amp = C::from_polar(amplitude, phase);
                Self::from_fn(a, support, n, 5, |x| {
                    let u = (x - center) / width;
                    C::new(a, 0.0) + amp * (-u * u).exp() * C::from_polar(1.0, chirp * x)
                })
            }
            Preset::Box { amplitude, width, center } => {
                if !(width > 0.0) {
                    return Err(Error::InvalidProfile("width must be positive"));
                }
                // edges land on grid nodes; linear interpolation keeps the jumps sharp
                let h = width / 64.0;
                let support = ((center.abs() + width) / h).ceil() * h;
                let n = (2.0 * support / h).round() as usize;
                Self::from_fn(a, support, n, 1, |x| {
                    if (x - center).abs() < 0.5 * width - 1e-12 * width {
                        C::new(a + amplitude, 0.0)
                    } else {
                        C::new(a, 0.0)
                    }
                })
            }
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.a
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn samples(&self) -> &[C] {
        &self.samples
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `q₀(x)`; equal to `A` outside `[-L, L]`.
    pub fn value(&self, x: f64) -> C {
        if x.abs() >= self.support {
            return C::new(self.a, 0.0);
        }
        uniform_lagrange(&self.samples, -self.support, self.dx, self.order, x)
    }

    /// `true` when every sample equals the background.
    pub fn is_background(&self) -> bool {
        let bg = C::new(self.a, 0.0);
        self.samples.iter().all(|&z| z == bg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let bg = C::new(1.0, 0.0);
        assert!(InitialProfile::new(1.0, 1.0, 1.0, alloc::vec![bg, bg, bg], 1).is_ok());
        assert!(InitialProfile::new(1.0, 1.0, 0.5, alloc::vec![bg, bg, bg], 1).is_err());
        assert!(InitialProfile::new(1.0, 1.0, 1.0, alloc::vec![bg, C::new(2.0, 0.0), C::new(1.1, 0.0)], 1).is_err());
        assert!(InitialProfile::new(-1.0, 1.0, 1.0, alloc::vec![bg, bg, bg], 1).is_err());
    }

    #[test]
    fn gaussian_interpolation() {
        let p = InitialProfile::from_preset(
            0.5,
            Preset::GaussianBump { amplitude: 0.2, width: 1.0, chirp: 0.7, center: 0.3, phase: 0.0 },
        )
        .unwrap();
        for x in [-2.111, -0.5, 0.0, 0.123_456, 1.9] {
            let u = x - 0.3;
            let exact = C::new(0.5, 0.0) + C::from_polar(0.2 * (-u * u).exp(), 0.7 * x);
            assert!((p.value(x) - exact).norm() < 1e-11);
        }
        assert_eq!(p.value(100.0), C::new(0.5, 0.0));
    }

    #[test]
    fn box_shape() {
        let p = InitialProfile::from_preset(1.0, Preset::Box { amplitude: 2.0, width: 2.0, center: 0.0 }).unwrap();
        assert_eq!(p.value(0.5), C::new(3.0, 0.0));
        assert_eq!(p.value(1.5), C::new(1.0, 0.0));
        assert_eq!(p.value(-1.0 - 1e-3), C::new(1.0, 0.0));
    }
}
