//! Elliptic sector `0 < ξ < √2 A`: the genus-1 surface, the phase `h`, the
//! scalar function `G` and the theta-function asymptotics.

mod eval;
mod gfun;
mod hfun;
mod surface;

pub use eval::{abel_constants, elliptic_eval, elliptic_from_g, elliptic_params, elliptic_params_with, khat0, theta_phase, EllipticData, EllipticTerms, THETA_FLOOR};
pub use gfun::{BandLog, GFunction, MIN_BAND_REFLECTION};
pub use hfun::{dh_integral, dh_numerator, h_at_alpha, h_at_top, h_inf_complex, h_machinery, h_value, omega_complex, HData, REALITY_TOL};
pub use surface::{alpha_of, k0_integral, k0_residual, solve_k0, Band, SurfaceData};
