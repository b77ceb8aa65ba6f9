use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at nonpositive integer {0}")]
    GammaPole(f64),
    #[error("theta series needs Im tau > 0, got {0}")]
    NonconvergentNome(f64),
    #[error("quadrature did not converge: estimate {estimate:e} above tolerance {tolerance:e}")]
    QuadratureNonconvergence { estimate: f64, tolerance: f64 },
    #[error("integrand is not finite at interior point ({re}, {im})")]
    InteriorSingularity { re: f64, im: f64 },
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("root finder exceeded {0} iterations")]
    MaxIterations(usize),
    #[error("zero sample at index {0}")]
    ZeroSample(usize),
    #[error("phase jump {jump} between samples {index} and {next} needs refinement", next = index + 1)]
    PhaseJump { index: usize, jump: f64 },
    #[error("evaluation at a branch point ({re}, {im})")]
    BranchPoint { re: f64, im: f64 },
    #[error("point ({re}, {im}) lies on a cut and needs a side")]
    OnCut { re: f64, im: f64 },
    #[error("invalid background amplitude {0}")]
    InvalidAmplitude(f64),
    #[error("invalid profile: {0}")]
    InvalidProfile(&'static str),
    #[error("step size underflow at x = {x} for k = ({re}, {im})")]
    StepUnderflow { x: f64, re: f64, im: f64 },
    #[error("zero denominator {which} at k = ({re}, {im})")]
    ZeroDenominator { which: &'static str, re: f64, im: f64 },
    #[error("argument-principle contour passes near a zero (|a| = {0:e})")]
    ContourNearZero(f64),
    #[error("accumulated argument {0} of 1 + r1 r2 leaves (-pi, pi)")]
    WindingViolation(f64),
    #[error("spectral functions have {upper} zeros in the upper and {lower} in the lower half-plane")]
    ZerosPresent { upper: usize, lower: usize },
    #[error("ray xi = {xi} is not in the {expected} region")]
    Region { xi: f64, expected: &'static str },
    #[error("no sign change for the k0 equation on ({lo}, {hi})")]
    Bracket { lo: f64, hi: f64 },
    #[error("cut collision: {0}")]
    CutCollision(&'static str),
    #[error("path crosses a cut: {0}")]
    PathCrossesCut(&'static str),
    #[error("reflection coefficient vanishes on a band contour at ({re}, {im})")]
    ZeroReflectionOnBand { re: f64, im: f64 },
    #[error("theta denominator vanishes at t = {0}")]
    ThetaZero(f64),
    #[error("{what} should be real but has imaginary part {im:e}")]
    NotReal { what: &'static str, im: f64 },
}
