use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] nnls_core::Error),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("time step {dt} exceeds the phase bound for the highest mode (needs dt <= {limit:e})")]
    Cfl { dt: f64, limit: f64 },
    #[error("field blew up at t = {t} (max |q| = {max:e})")]
    BlowUp { t: f64, max: f64 },
    #[error("ray x = {x} leaves the box [-{l_box}, {l_box})")]
    RayExitsBox { x: f64, l_box: f64 },
    #[error("no snapshot at t = {0}")]
    MissingSnapshot(f64),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl LabError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io { path: path.as_ref().display().to_string(), source }
    }
}
