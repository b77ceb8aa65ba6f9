//! Branches of `f(k) = (k² + A²)^{1/2}` and `w(k) = ((k - iA)/(k + iA))^{1/4}`
//! with the single cut `B = [-iA, iA]`, the matrix `𝓔(k)`, the phase
//! `θ(k, ξ)` and the classification of rays `ξ = x / 4t`.

use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::Mat2;

type C = Complex64;

/// Which boundary value to take on a vertical cut.
///
/// `Minus` is the limit from the right (`Re k → 0+` for `B`), `Plus` from
/// the left. Off the cut the side is ignored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutSide {
    #[default]
    Off,
    Minus,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Background {
    a: f64,
}

impl Background {
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(Self { a })
        } else {
            Err(Error::InvalidAmplitude(a))
        }
    }

    pub fn amplitude(&self) -> f64 {
        self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    PlaneWave,
    EllipticWave,
    Transition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub xi: f64,
    pub region: Region,
}

impl Ray {
    pub fn classify(xi: f64, a: f64) -> Self {
        let edge = SQRT_2 * a;
        let region = if xi.abs() > edge {
            Region::PlaneWave
        } else if xi != 0.0 && xi.abs() < edge {
            Region::EllipticWave
        } else {
            Region::Transition
        };
        Self { xi, region }
    }
}

/// Polar data of `k - c - ih` and `k - c + ih` with angles in `(-3π/2, π/2]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CutPolar {
    pub r1: f64,
    pub r2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

fn lift(phi: f64) -> f64 {
    if phi > FRAC_PI_2 {
        phi - 2.0 * PI
    } else {
        phi
    }
}

/// Polar factorization for the vertical cut `[c - ih, c + ih]`.
pub(crate) fn cut_polar(k: C, c: f64, h: f64, side: CutSide) -> Result<CutPolar> {
    let z = C::new(k.re - c, k.im);
    let top = z - C::new(0.0, h);
    let bottom = z + C::new(0.0, h);
    if top == C::new(0.0, 0.0) || bottom == C::new(0.0, 0.0) {
        return Err(Error::BranchPoint { re: k.re, im: k.im });
    }
    if z.re == 0.0 && z.im.abs() < h {
        let (r1, r2) = (h - z.im, h + z.im);
        return match side {
            CutSide::Off => Err(Error::OnCut { re: k.re, im: k.im }),
            CutSide::Minus => Ok(CutPolar { r1, r2, phi1: -FRAC_PI_2, phi2: FRAC_PI_2 }),
            CutSide::Plus => Ok(CutPolar { r1, r2, phi1: -FRAC_PI_2, phi2: -1.5 * PI }),
        };
    }
    Ok(CutPolar { r1: top.norm(), r2: bottom.norm(), phi1: lift(top.arg()), phi2: lift(bottom.arg()) })
}

impl CutPolar {
    /// `((k - c)² + h²)^{1/2}`, asymptotic to `k - c` at infinity.
    pub fn sqrt(&self) -> C {
        C::from_polar((self.r1 * self.r2).sqrt(), 0.5 * (self.phi1 + self.phi2))
    }

    /// `((k - c - ih)/(k - c + ih))^{1/4}`, tending to 1 at infinity.
    pub fn quarter_ratio(&self) -> C {
        C::from_polar((self.r1 / self.r2).sqrt().sqrt(), 0.25 * (self.phi1 - self.phi2))
    }
}

/// `f(k)`, analytic off `B` with `f(k) = k + O(1/k)`.
pub fn f_branch(k: C, a: f64, side: CutSide) -> Result<C> {
    Ok(cut_polar(k, 0.0, a, side)?.sqrt())
}

/// `w(k)`, analytic off `B` with `w(k) → 1` at infinity.
pub fn w_branch(k: C, a: f64, side: CutSide) -> Result<C> {
    Ok(cut_polar(k, 0.0, a, side)?.quarter_ratio())
}

pub fn e_matrix(k: C, a: f64, side: CutSide) -> Result<Mat2> {
    Ok(e_from_w(w_branch(k, a, side)?))
}

pub(crate) fn e_from_w(w: C) -> Mat2 {
    let wi = w.inv();
    let p = (w + wi) * 0.5;
    let m = (w - wi) * 0.5;
    Mat2::new(p, m, m, p)
}

/// `θ(k, ξ) = (2k + 4ξ) f(k)`.
pub fn theta_phase(k: C, xi: f64, a: f64, side: CutSide) -> Result<C> {
    Ok((k * 2.0 + 4.0 * xi) * f_branch(k, a, side)?)
}

/// Zeros of `dθ/dk`: real `(k₁, k₂)` with `k₁ ≤ k₂` when `ξ ≥ √2 A`, otherwise
/// the conjugate pair with `Im k̃₁ > 0` first.
pub fn stationary_points(xi: f64, a: f64) -> (C, C) {
    let disc = xi * xi - 2.0 * a * a;
    if disc >= 0.0 {
        let s = disc.sqrt();
        (C::new(0.5 * (-xi - s), 0.0), C::new(0.5 * (-xi + s), 0.0))
    } else {
        let s = (-disc).sqrt();
        (C::new(-0.5 * xi, 0.5 * s), C::new(-0.5 * xi, -0.5 * s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const OFF: CutSide = CutSide::Off;

    #[test]
    fn f_on_real_axis_and_cut() {
        assert!((f_branch(C::new(1.0, 0.0), 1.0, OFF).unwrap() - SQRT_2).norm() < 1e-15);
        assert!((f_branch(C::new(-1.0, 0.0), 1.0, OFF).unwrap() + SQRT_2).norm() < 1e-15);
        let fm = f_branch(C::new(0.0, 0.5), 1.0, CutSide::Minus).unwrap();
        assert!((fm - 0.75f64.sqrt()).norm() < 1e-15);
        let fp = f_branch(C::new(0.0, 0.5), 1.0, CutSide::Plus).unwrap();
        assert!((fp + fm).norm() < 1e-15);
    }

    #[test]
    fn cut_needs_side() {
        assert!(matches!(f_branch(C::new(0.0, 0.2), 1.0, OFF), Err(Error::OnCut { .. })));
        assert!(matches!(f_branch(C::new(0.0, 1.0), 1.0, CutSide::Minus), Err(Error::BranchPoint { .. })));
        assert!(matches!(w_branch(C::new(0.0, -1.0), 1.0, OFF), Err(Error::BranchPoint { .. })));
    }

    #[test]
    fn sides_are_limits() {
        for y in [-0.9, -0.3, 0.0, 0.4, 0.99] {
            for (side, dx) in [(CutSide::Minus, 1e-13), (CutSide::Plus, -1e-13)] {
                let on = f_branch(C::new(0.0, y), 1.0, side).unwrap();
                let near = f_branch(C::new(dx, y), 1.0, OFF).unwrap();
                assert!((on - near).norm() < 1e-6);
                let on = w_branch(C::new(0.0, y), 1.0, side).unwrap();
                let near = w_branch(C::new(dx, y), 1.0, OFF).unwrap();
                assert!((on - near).norm() < 1e-5);
            }
        }
    }

    #[test]
    fn w_at_one() {
        let w = w_branch(C::new(1.0, 0.0), 1.0, OFF).unwrap();
        assert!((w - C::from_polar(1.0, -PI / 8.0)).norm() < 1e-15);
    }

    #[test]
    fn e_matrix_jump() {
        for y in [-0.7, 0.1, 0.6] {
            let k = C::new(0.0, y);
            let ep = e_matrix(k, 1.0, CutSide::Plus).unwrap();
            let em = e_matrix(k, 1.0, CutSide::Minus).unwrap();
            let sigma1 = Mat2::new(C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0));
            let rhs = (em * sigma1).scale(C::i());
            assert!((ep - rhs).max_abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_point_values() {
        let (k1, k2) = stationary_points(2.0, 1.0);
        assert!((k1.re + 1.0 + 0.5 * SQRT_2).abs() < 1e-15 && k1.im == 0.0);
        assert!((k2.re + 1.0 - 0.5 * SQRT_2).abs() < 1e-15);
        let (k1, k2) = stationary_points(SQRT_2, 1.0);
        assert!((k1 - k2).norm() < 1e-7 && (k1.re + 0.5 * SQRT_2).abs() < 1e-7);
        let (k1, k2) = stationary_points(0.0, 1.0);
        assert!((k1 - C::new(0.0, 0.5 * SQRT_2)).norm() < 1e-15 && (k2 - k1.conj()).norm() < 1e-15);
    }

    #[test]
    fn theta_values() {
        let th = theta_phase(C::new(1.0, 0.0), 2.0, 1.0, OFF).unwrap();
        assert!((th - 10.0 * SQRT_2).norm() < 1e-13);
        let k = C::from_polar(1e4, 0.3);
        let th = theta_phase(k, 0.2, 1.0, OFF).unwrap();
        assert!((th - (k * k * 2.0 + k * 0.8 + 1.0)).norm() < 1e-4);
    }

    #[test]
    fn theta_stationary() {
        for xi in [1.5, 2.0, 3.5] {
            let k1 = stationary_points(xi, 1.0).0.re;
            let h = 1e-5;
            let th = |k: f64| theta_phase(C::new(k, 0.0), xi, 1.0, OFF).unwrap().re;
            let d = (th(k1 + h) - th(k1 - h)) / (2.0 * h);
            assert!(d.abs() < 1e-9, "{d}");
        }
    }

    #[test]
    fn regions() {
        assert_eq!(Ray::classify(SQRT_2, 1.0).region, Region::Transition);
        assert_eq!(Ray::classify(0.0, 1.0).region, Region::Transition);
        assert_eq!(Ray::classify(-1.0, 1.0).region, Region::EllipticWave);
        assert_eq!(Ray::classify(1.5, 1.0).region, Region::PlaneWave);
        assert!(Background::new(0.0).is_err());
    }

    proptest! {
        #[test]
        fn w_fourth_power(re in -5.0f64..5.0, im in -5.0f64..5.0, a in 0.2f64..2.0) {
            prop_assume!(re.abs() > 1e-3);
            let k = C::new(re, im);
            let w = w_branch(k, a, OFF).unwrap();
            let ratio = (k - C::new(0.0, a)) / (k + C::new(0.0, a));
            prop_assert!((w * w * w * w - ratio).norm() < 1e-12 * ratio.norm().max(1.0));
            prop_assert!((e_matrix(k, a, OFF).unwrap().det() - 1.0).norm() < 1e-12 * w.norm_sqr().max(w.norm_sqr().recip()));
        }

        #[test]
        fn f_squared_and_symmetry(re in -5.0f64..5.0, im in -5.0f64..5.0, a in 0.2f64..2.0) {
            prop_assume!(re.abs() > 1e-3);
            let k = C::new(re, im);
            let f = f_branch(k, a, OFF).unwrap();
            prop_assert!((f * f - (k * k + a * a)).norm() < 1e-12 * (k.norm_sqr() + a * a));
            let g = f_branch(-k.conj(), a, OFF).unwrap();
            prop_assert!((g + f.conj()).norm() < 1e-12 * f.norm().max(1.0));
        }

        #[test]
        fn no_cut_on_real_axis(x in -5.0f64..5.0) {
            prop_assume!(x.abs() > 1e-6);
            for fun in [f_branch, w_branch] {
                let up = fun(C::new(x, 1e-14), 1.0, OFF).unwrap();
                let down = fun(C::new(x, -1e-14), 1.0, OFF).unwrap();
                prop_assert!((up - down).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn large_k_limits() {
        for phase in [0.1, 1.0, 2.5, -2.0] {
            let k = C::from_polar(1e6, phase);
            assert!((w_branch(k, 1.0, OFF).unwrap() - 1.0).norm() < 1e-5);
            assert!((e_matrix(k, 1.0, OFF).unwrap() - Mat2::identity()).max_abs() < 1e-5);
        }
    }
}
