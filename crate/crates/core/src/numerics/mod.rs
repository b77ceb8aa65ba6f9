//! Special functions, quadrature, root finding and branch tracking.

pub mod branch;
pub mod gamma;
pub mod interp;
pub mod mat2;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod theta;

pub use branch::{continuous_log, BranchTracker};
pub use gamma::gamma_complex;
pub use interp::Barycentric;
pub use mat2::Mat2;
pub use quad::{gauss_legendre, quad_interval, quad_path, ComplexPath, Endpoint, QuadOptions};
pub use roots::bracket_root;
pub use theta::theta3;
