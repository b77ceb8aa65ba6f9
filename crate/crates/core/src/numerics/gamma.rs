//! Euler Gamma function on the complex plane.

use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

// B_{2k} / (2k (2k-1)) for k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const SHIFT: f64 = 16.0;

/// Stirling series for `ln Γ(w)`, accurate for `|w| >= SHIFT` with `Re w > 0`.
fn ln_gamma_stirling(w: Complex64) -> Complex64 {
    let half_ln_2pi = 0.5 * (2.0 * PI).ln();
    let mut s = (w - 0.5) * w.ln() - w + half_ln_2pi;
    let winv = w.inv();
    let winv2 = winv * winv;
    let mut p = winv;
    for c in STIRLING {
        s += p * c;
        p *= winv2;
    }
    s
}

fn gamma_right(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    while w.norm() < SHIFT || w.re < SHIFT * 0.5 {
        prod *= w;
        w += 1.0;
    }
    ln_gamma_stirling(w).exp() / prod
}

/// `Γ(z)` for complex `z`, with the reflection formula for `Re z < 1/2`.
///
/// Returns [`Error::GammaPole`] at `z = 0, -1, -2, ...`.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        Ok(Complex64::new(PI, 0.0) / (s * gamma_right(Complex64::new(1.0, 0.0) - z)))
    } else {
        Ok(gamma_right(z))
    }
}
