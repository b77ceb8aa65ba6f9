//! Run configuration, read from JSON with `"schema": 1`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use nnls_core::background::{Ray, Region};
use nnls_core::scattering::{InitialProfile, Preset};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::simulator::SimGrid;

type C = Complex64;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawProfile", into = "RawProfile")]
pub enum ProfileSpec {
    /// `q₀ ≡ A`.
    Background,
    Gaussian { amplitude: f64, width: f64, chirp: f64, center: f64, phase: f64 },
    Box { amplitude: f64, width: f64, center: f64 },
    /// CSV with header `x,re_q,im_q` on a uniform grid over `[-L, L]`.
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ProfileKind {
    Background,
    Gaussian,
    Box,
    File,
}

/// Flat JSON form of [`ProfileSpec`]. An internally tagged enum would buffer
/// its fields, which loses numbers under `arbitrary_precision`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    kind: ProfileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    chirp: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    path: Option<PathBuf>,
}

impl From<RawProfile> for ProfileSpec {
    fn from(r: RawProfile) -> Self {
        // missing amplitudes and widths surface as NaN and fail profile checks
        let nan = f64::NAN;
        match r.kind {
            ProfileKind::Background => ProfileSpec::Background,
            ProfileKind::Gaussian => ProfileSpec::Gaussian {
                amplitude: r.amplitude.unwrap_or(nan),
                width: r.width.unwrap_or(1.0),
                chirp: r.chirp.unwrap_or(0.0),
                center: r.center.unwrap_or(0.0),
                phase: r.phase.unwrap_or(0.0),
            },
            ProfileKind::Box => ProfileSpec::Box {
                amplitude: r.amplitude.unwrap_or(nan),
                width: r.width.unwrap_or(nan),
                center: r.center.unwrap_or(0.0),
            },
            ProfileKind::File => ProfileSpec::File { path: r.path.unwrap_or_default() },
        }
    }
}

impl From<ProfileSpec> for RawProfile {
    fn from(p: ProfileSpec) -> Self {
        let empty = RawProfile {
            kind: ProfileKind::Background,
            amplitude: None,
            width: None,
            chirp: None,
            center: None,
            phase: None,
            path: None,
        };
        match p {
            ProfileSpec::Background => empty,
            ProfileSpec::Gaussian { amplitude, width, chirp, center, phase } => RawProfile {
                kind: ProfileKind::Gaussian,
                amplitude: Some(amplitude),
                width: Some(width),
                chirp: Some(chirp),
                center: Some(center),
                phase: Some(phase),
                ..empty
            },
            ProfileSpec::Box { amplitude, width, center } => RawProfile {
                kind: ProfileKind::Box,
                amplitude: Some(amplitude),
                width: Some(width),
                center: Some(center),
                ..empty
            },
            ProfileSpec::File { path } => RawProfile { kind: ProfileKind::File, path: Some(path), ..empty },
        }
    }
}

impl ProfileSpec {
    /// `q₀(x)` in closed form where the preset has one, else the
    /// interpolant of `profile`. The closed form keeps the simulated datum
    /// free of interpolation kinks.
    pub fn datum<'a>(&self, a: f64, profile: &'a InitialProfile) -> Box<dyn Fn(f64) -> C + Sync + 'a> {
        match *self {
            ProfileSpec::Background => Box::new(move |_| C::new(a, 0.0)),
            ProfileSpec::Gaussian { amplitude, width, chirp, center, phase } => {
                let amp = C::from_polar(amplitude, phase);
                Box::new(move |x| {
                    let u = (x - center) / width;
                    C::new(a, 0.0) + amp * (-u * u).exp() * C::from_polar(1.0, chirp * x)
                })
            }
            _ => Box::new(move |x| profile.value(x)),
        }
    }

    pub fn build(&self, a: f64, base: &Path) -> Result<InitialProfile> {
        let p = match *self {
            ProfileSpec::Background => InitialProfile::background(a, 1.0)?,
            ProfileSpec::Gaussian { amplitude, width, chirp, center, phase } => {
                InitialProfile::from_preset(a, Preset::GaussianBump { amplitude, width, chirp, center, phase })?
            }
            ProfileSpec::Box { amplitude, width, center } => {
                InitialProfile::from_preset(a, Preset::Box { amplitude, width, center })?
            }
            ProfileSpec::File { ref path } => read_profile_csv(a, &base.join(path))?,
        };
        Ok(p)
    }
}

/// Reads `x,re_q,im_q` rows; interpolation is cubic.
pub fn read_profile_csv(a: f64, path: &Path) -> Result<InitialProfile> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().unwrap_or_default();
    if header.replace(' ', "") != "x,re_q,im_q" {
        return Err(LabError::Config(format!("{}: expected header x,re_q,im_q", path.display())));
    }
    let mut xs = Vec::new();
    let mut qs = Vec::new();
    for (i, line) in lines.enumerate() {
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| LabError::Config(format!("{}: row {}: {e}", path.display(), i + 2)))?;
        if v.len() != 3 {
            return Err(LabError::Config(format!("{}: row {} needs three fields", path.display(), i + 2)));
        }
        xs.push(v[0]);
        qs.push(C::new(v[1], v[2]));
    }
    if xs.len() < 2 {
        return Err(LabError::Config(format!("{}: at least two rows are needed", path.display())));
    }
    let support = -xs[0];
    let dx = xs[1] - xs[0];
    let uniform = xs.windows(2).all(|w| ((w[1] - w[0]) - dx).abs() <= 1e-9 * dx.abs());
    if !uniform || (xs[xs.len() - 1] - support).abs() > 1e-9 * support.abs() {
        return Err(LabError::Config(format!("{}: x must be uniform and symmetric", path.display())));
    }
    Ok(InitialProfile::new(a, support, dx, qs, 3)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    /// Lower bound for the box half-length, which grows to a power-of-two
    /// grid at spacing `h_max`; chosen from the profile when absent.
    pub l_box: Option<f64>,
    /// Grid size; chosen from `h_max` when absent.
    pub n: Option<usize>,
    pub dt: f64,
    pub h_max: f64,
    pub snapshot_interval: f64,
    /// Final time; the last entry of `t_list` when absent.
    pub t_max: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { l_box: None, n: None, dt: 0.0025, h_max: 0.1, snapshot_interval: 0.05, t_max: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative error below which a comparison row counts as a match.
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rel: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(rename = "A")]
    pub a: f64,
    pub profile: ProfileSpec,
    pub rays: Vec<f64>,
    pub t_list: Vec<f64>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    /// Amplitude of uniform noise added to the simulated initial field
    /// inside the support.
    #[serde(default)]
    pub noise: f64,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    /// Off-centre Gaussian dip at `A = 0.5` with one ray in each sector.
    fn default() -> Self {
        Self {
            schema: SCHEMA,
            a: 0.5,
            profile: ProfileSpec::Gaussian { amplitude: 0.2, width: 1.0, chirp: 0.0, center: 0.5, phase: PI },
            rays: vec![1.2, 0.35],
            t_list: vec![10.0, 20.0, 30.0],
            grid: GridSpec::default(),
            tolerances: Tolerances::default(),
            out_dir: default_out(),
            seed: 0,
            noise: 0.0,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::from_json(&s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(LabError::Config(format!("unsupported schema {} (expected {SCHEMA})", self.schema)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(LabError::Config(format!("A = {} must be positive", self.a)));
        }
        if self.rays.is_empty() || self.rays.iter().any(|x| !x.is_finite()) {
            return Err(LabError::Config("rays must be a nonempty list of finite numbers".into()));
        }
        if self.t_list.is_empty() || !(self.t_list[0] > 0.0) || self.t_list.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(LabError::Config("t_list must be positive and strictly increasing".into()));
        }
        if !(self.noise >= 0.0) {
            return Err(LabError::Config("noise must be nonnegative".into()));
        }
        if !(self.tolerances.rel > 0.0) {
            return Err(LabError::Config("tolerances.rel must be positive".into()));
        }
        Ok(())
    }

    pub fn classified_rays(&self) -> Vec<Ray> {
        self.rays.iter().map(|&xi| Ray::classify(xi, self.a)).collect()
    }

    pub fn t_max(&self) -> f64 {
        self.grid.t_max.unwrap_or(*self.t_list.last().expect("validated"))
    }

    /// Simulation grid for `profile`.
    pub fn sim_grid(&self, profile: &InitialProfile) -> SimGrid {
        let g = &self.grid;
        let t_max = self.t_max();
        let q0 = self.profile.datum(self.a, profile);
        let auto = SimGrid::for_datum(self.a, profile.support(), &*q0, t_max, g.dt, g.h_max);
        let mut grid = SimGrid { snapshot_interval: g.snapshot_interval, ..auto };
        if let Some(l) = g.l_box {
            grid.n = ((2.0 * l / g.h_max).ceil() as usize).max(256).next_power_of_two();
            grid.l_box = 0.5 * g.h_max * grid.n as f64;
        }
        if let Some(n) = g.n {
            grid.n = n;
        }
        grid
    }

    /// Simulated initial field: `q₀` on the grid plus the seeded noise.
    pub fn initial_field(&self, profile: &InitialProfile, grid: &SimGrid) -> Vec<C> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let q0 = self.profile.datum(self.a, profile);
        (0..grid.n)
            .map(|j| {
                let x = grid.x(j);
                let mut q = q0(x);
                if self.noise > 0.0 && x.abs() < profile.support() {
                    q += self.noise * C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
                q
            })
            .collect()
    }
}

/// `true` for rays with an asymptotic formula.
pub fn has_asymptotics(ray: &Ray) -> bool {
    ray.region != Region::Transition
}
