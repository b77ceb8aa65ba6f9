use num_complex::Complex64;

use super::jost::{reflection_with, scattering_data_with, SpectralValues};
use super::profile::InitialProfile;
use crate::background::CutSide;
use crate::error::{Error, Result};
use crate::numerics::ode::OdeOptions;

type C = Complex64;

/// Source of reflection coefficients for the asymptotic formulas.
pub trait SpectralData {
    fn amplitude(&self) -> f64;

    /// `(r₁(k), r₂(k))`; on `B` the side must be given.
    fn reflection(&self, k: C, side: CutSide) -> Result<(C, C)>;

    /// `r₁(k)` alone, for points where only `a₁` needs to be nonzero.
    fn r1(&self, k: C, side: CutSide) -> Result<C> {
        Ok(self.reflection(k, side)?.0)
    }

    /// `r₂(k)` alone, for points where only `a₂` needs to be nonzero.
    fn r2(&self, k: C, side: CutSide) -> Result<C> {
        Ok(self.reflection(k, side)?.1)
    }

    /// `true` when `r₁ ≡ r₂ ≡ 0`, which lets callers skip quadrature.
    fn is_reflectionless(&self) -> bool {
        false
    }
}

/// Spectral functions of an [`InitialProfile`], computed on demand.
#[derive(Debug, Clone)]
pub struct SpectralTable {
    profile: InitialProfile,
    ode: OdeOptions,
}

impl SpectralTable {
    pub fn new(profile: InitialProfile) -> Self {
        Self { profile, ode: OdeOptions::default() }
    }

    pub fn with_ode_options(profile: InitialProfile, ode: OdeOptions) -> Self {
        Self { profile, ode }
    }

    pub fn profile(&self) -> &InitialProfile {
        &self.profile
    }

    pub fn ode_options(&self) -> &OdeOptions {
        &self.ode
    }

    pub fn values(&self, k: C, side: CutSide) -> Result<SpectralValues> {
        scattering_data_with(&self.profile, k, side, &self.ode)
    }
}

impl SpectralData for SpectralTable {
    fn amplitude(&self) -> f64 {
        self.profile.amplitude()
    }

    fn reflection(&self, k: C, side: CutSide) -> Result<(C, C)> {
        reflection_with(&self.profile, k, side, &self.ode)
    }

    fn r1(&self, k: C, side: CutSide) -> Result<C> {
        let v = self.values(k, side)?;
        if v.a1.norm() < 1e-14 {
            return Err(Error::ZeroDenominator { which: "a1", re: k.re, im: k.im });
        }
        Ok(v.b1 / v.a1)
    }

    fn r2(&self, k: C, side: CutSide) -> Result<C> {
        let v = self.values(k, side)?;
        if v.a2.norm() < 1e-14 {
            return Err(Error::ZeroDenominator { which: "a2", re: k.re, im: k.im });
        }
        Ok(v.b2 / v.a2)
    }

    fn is_reflectionless(&self) -> bool {
        self.profile.is_background()
    }
}

/// Reflection coefficients given by a closure, for tests and experiments.
pub struct SyntheticReflection<F> {
    a: f64,
    r: F,
}

impl<F: Fn(C) -> (C, C)> SyntheticReflection<F> {
    pub fn new(a: f64, r: F) -> Self {
        Self { a, r }
    }
}

impl<F: Fn(C) -> (C, C)> SpectralData for SyntheticReflection<F> {
    fn amplitude(&self) -> f64 {
        self.a
    }

    fn reflection(&self, k: C, _side: CutSide) -> Result<(C, C)> {
        Ok((self.r)(k))
    }
}

/// `r₁ ≡ r₂ ≡ 0`.
#[derive(Debug, Clone, Copy)]
pub struct Reflectionless {
    pub a: f64,
}

impl SpectralData for Reflectionless {
    fn amplitude(&self) -> f64 {
        self.a
    }

    fn reflection(&self, _k: C, _side: CutSide) -> Result<(C, C)> {
        Ok((C::new(0.0, 0.0), C::new(0.0, 0.0)))
    }

    fn is_reflectionless(&self) -> bool {
        true
    }
}
