//! Plane-wave sector `|ξ| > √2 A`: the scalar functions `δ` and `F`, the
//! local exponents at the stationary point `k₁`, and the leading and
//! subleading terms of the asymptotics.

mod delta;
mod ffun;
mod params;

pub use delta::{check_winding, delta_boundary, delta_fn, ln_delta, local_exponents, LocalExponents};
pub use ffun::{f_fn, f_inf, f_inf_nested, ln_f, ln_f_with, NestedOptions};
pub use params::{case_tag, planewave_eval, planewave_params, planewave_params_with, CaseTag, PlaneWaveData, PlaneWaveTerms};
