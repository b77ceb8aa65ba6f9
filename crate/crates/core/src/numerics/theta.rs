//! Jacobi theta function in the normalization `Θ(v) = θ₃(πv, e^{iπτ})`.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TERMS: i64 = 100_000;

/// `Σ_{l∈ℤ} exp(2πi l v + iπ l² τ)`.
///
/// Terms are summed outward from `l = 0`; the series is cut once both the
/// `±l` terms have passed the peak of `|term|` and fall below `1e-18` of the
/// partial sum.
pub fn theta3(v: Complex64, tau: Complex64) -> Result<Complex64> {
    if !(tau.im > 0.0) {
        return Err(Error::NonconvergentNome(tau.im));
    }
    let i = Complex64::i();
    // |term(l)| = exp(-2π l Im v - π l² Im τ), peaked at l = -Im v / Im τ
    let peak = (v.im / tau.im).abs();
    let term = |l: f64| (i * (2.0 * PI * l * v + PI * l * l * tau)).exp();
    let mut sum = Complex64::new(1.0, 0.0);
    let mut l = 1i64;
    loop {
        let lf = l as f64;
        let tp = term(lf);
        let tm = term(-lf);
        sum += tp + tm;
        let small = tp.norm().max(tm.norm()) <= 1e-18 * sum.norm().max(f64::MIN_POSITIVE);
        if lf > peak && small {
            break;
        }
        l += 1;
        if l > MAX_TERMS {
            return Err(Error::NonconvergentNome(tau.im));
        }
    }
    Ok(sum)
}
