//! Direct scattering at `t = 0`: Jost solutions, spectral functions,
//! reflection coefficients and checks of the standing assumptions.

mod jost;
pub mod jump;
mod profile;
mod table;
mod validate;

pub use jost::{
    a1_value, a2_value, jost_at_origin, jost_at_origin_with, jost_column, reflection, reflection_with,
    scattering_data, scattering_data_with, JostSide, SpectralValues,
};
pub use jump::{Boundary, JumpLog, JumpOptions};
pub use profile::{InitialProfile, Preset};
pub use table::{Reflectionless, SpectralData, SpectralTable, SyntheticReflection};
pub use validate::{count_zeros, validate_assumptions, AssumptionReport, ZeroCountOptions};
