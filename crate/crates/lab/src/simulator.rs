//! Split-step Fourier integrator for
//!
//! ```text
//! i q_t + q_xx + 2 q² conj(q(-x)) = 0,   q -> A e^{2iA²t}
//! ```
//!
//! in the gauge `p = q e^{-2iA²t}`, which tends to the constant `A`. One
//! Strang step is a half linear step `i p_t = -p_xx`, the exact nonlinear
//! flow `p ← p exp(2i dt (p conj p(-x) - A²))` and another half linear step.
//! The grid `x_j = -L + jh` is symmetric, so `-x_j` is the node `(N - j) mod N`.

use std::f64::consts::PI;
use std::sync::Arc;

use nnls_core::scattering::InitialProfile;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{LabError, Result};

type C = Complex64;

/// Largest `dt·κ_max²` accepted: the top mode turns by at most half a period
/// per step.
pub const PHASE_BOUND: f64 = PI;

/// Noise budget for the modulation-instability guard.
pub const MI_TOLERANCE: f64 = 1e-8;

/// Fields larger than this multiple of `A` count as a blow-up.
pub const BLOW_UP_FACTOR: f64 = 1e6;

/// Time beyond which round-off amplified at the largest instability rate
/// `2A²` exceeds [`MI_TOLERANCE`].
pub fn mi_time_cap(a: f64) -> f64 {
    (MI_TOLERANCE / f64::EPSILON).ln() / (2.0 * a * a)
}

/// `ε_mach e^{2A²t}`.
pub fn noise_floor(a: f64, t: f64) -> f64 {
    f64::EPSILON * (2.0 * a * a * t).exp()
}

/// Node of `-x_j`.
pub fn mirror_index(j: usize, n: usize) -> usize {
    (n - j) % n
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimGrid {
    /// Half-length `L` of the periodic box `[-L, L)`.
    pub l_box: f64,
    pub n: usize,
    pub dt: f64,
    pub t_max: f64,
    /// Spacing of the recorded snapshots.
    pub snapshot_interval: f64,
}

impl SimGrid {
    pub fn h(&self) -> f64 {
        2.0 * self.l_box / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.l_box + self.h() * j as f64
    }

    /// Wavenumber of FFT bin `j`.
    pub fn kappa(&self, j: usize) -> f64 {
        let m = if j < self.n / 2 { j as f64 } else { j as f64 - self.n as f64 };
        PI * m / self.l_box
    }

    pub fn kappa_max(&self) -> f64 {
        PI / self.h()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n >= 256 && self.n.is_power_of_two()) {
            return Err(LabError::InvalidGrid(format!("N = {} must be a power of two >= 256", self.n)));
        }
        if !(self.l_box > 0.0 && self.l_box.is_finite()) {
            return Err(LabError::InvalidGrid(format!("box half-length {} must be positive", self.l_box)));
        }
        if !(self.dt > 0.0 && self.t_max > 0.0 && self.snapshot_interval > 0.0) {
            return Err(LabError::InvalidGrid("dt, t_max and the snapshot interval must be positive".into()));
        }
        let limit = PHASE_BOUND / self.kappa_max().powi(2);
        if self.dt > limit {
            return Err(LabError::Cfl { dt: self.dt, limit });
        }
        Ok(())
    }

    /// Grid for the datum `q0` with background `a` and support `[-L, L]`,
    /// up to `t_max`: spacing `h_max`, box at least four supports
    /// plus the dispersive reach `2 t_max κ_eff`, where `κ_eff` is the
    /// largest wavenumber carrying `1e-14` of the peak of the spectrum of
    /// `q0 - A`.
    pub fn for_datum(a: f64, support: f64, q0: &dyn Fn(f64) -> C, t_max: f64, dt: f64, h_max: f64) -> Self {
        let l_probe = (4.0 * support).max(8.0);
        let n_probe = ((2.0 * l_probe / (0.5 * h_max)).ceil() as usize).max(256).next_power_of_two();
        let probe = SimGrid { l_box: l_probe, n: n_probe, dt, t_max, snapshot_interval: t_max };
        let mut buf: Vec<C> = (0..probe.n).map(|j| q0(probe.x(j)) - a).collect();
        FftPlanner::new().plan_fft_forward(probe.n).process(&mut buf);
        let peak = buf.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let k_eff = (0..probe.n)
            .filter(|&j| buf[j].norm() > 1e-14 * peak)
            .map(|j| probe.kappa(j).abs())
            .fold(0.0, f64::max);
        let reach = (4.0 * support + 2.0 * t_max * k_eff).max(16.0);
        // the box grows to the next power of two at spacing exactly h_max
        let n = ((2.0 * reach / h_max).ceil() as usize).max(256).next_power_of_two();
        SimGrid { l_box: 0.5 * h_max * n as f64, n, dt, t_max, snapshot_interval: t_max }
    }

    /// [`SimGrid::for_datum`] with the profile's interpolant.
    pub fn for_profile(profile: &InitialProfile, t_max: f64, dt: f64, h_max: f64) -> Self {
        Self::for_datum(profile.amplitude(), profile.support(), &|x| profile.value(x), t_max, dt, h_max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    /// `q(x_j, t)`.
    pub q: Vec<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldTrajectory {
    pub a: f64,
    pub grid: SimGrid,
    pub snapshots: Vec<Snapshot>,
    /// Last time actually reached, after the instability cap.
    pub t_end: f64,
    /// `ε_mach e^{2A² t_end}`.
    pub noise_floor_estimate: f64,
    /// Largest modulus of the top-band Fourier coefficients of `p - A`
    /// (`|κ| > 0.9 κ_max`), normalized by `N`, over all snapshots.
    pub nyquist_level: f64,
}

impl FieldTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    /// Snapshot recorded at `t`, up to rounding of the time grid.
    pub fn at(&self, t: f64) -> Result<&Snapshot> {
        let tol = 1e-9 * t.abs().max(1.0);
        self.snapshots.iter().find(|s| (s.t - t).abs() <= tol).ok_or(LabError::MissingSnapshot(t))
    }
}

/// Exact nonlinear flow over `dt`; `p(x) conj p(-x)` is invariant under it.
pub fn nonlinear_step(p: &mut [C], a: f64, dt: f64) {
    let n = p.len();
    let a2 = a * a;
    let inv: Vec<C> = (0..n).map(|j| (p[j] * p[mirror_index(j, n)].conj() - a2) * C::new(0.0, 2.0 * dt)).collect();
    for (z, e) in p.iter_mut().zip(inv) {
        *z *= e.exp();
    }
}

/// Strang stepper on a fixed grid.
pub struct SplitStep {
    grid: SimGrid,
    a: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    dt: f64,
    half: Vec<C>,
}

impl SplitStep {
    pub fn new(grid: SimGrid, a: f64) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n);
        let inverse = planner.plan_fft_inverse(grid.n);
        let mut s = Self { grid, a, forward, inverse, dt: 0.0, half: Vec::new() };
        s.set_dt(grid.dt);
        s
    }

    fn set_dt(&mut self, dt: f64) {
        if dt == self.dt {
            return;
        }
        self.dt = dt;
        let scale = 1.0 / self.grid.n as f64;
        self.half = (0..self.grid.n)
            .map(|j| C::from_polar(scale, -0.5 * dt * self.grid.kappa(j).powi(2)))
            .collect();
    }

    fn linear_half(&self, p: &mut [C]) {
        self.forward.process(p);
        for (z, m) in p.iter_mut().zip(&self.half) {
            *z *= m;
        }
        self.inverse.process(p);
    }

    /// One step of length `dt`.
    pub fn step(&mut self, p: &mut [C], dt: f64) {
        self.set_dt(dt);
        self.linear_half(p);
        nonlinear_step(p, self.a, dt);
        self.linear_half(p);
    }

    /// Advance `p` by `span` in equal steps no longer than the grid's `dt`.
    pub fn advance(&mut self, p: &mut [C], span: f64) {
        let steps = ((span / self.grid.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let dt = span / steps as f64;
        for _ in 0..steps {
            self.step(p, dt);
        }
    }
}

/// Top-band spectral level of `p - A`, normalized by `N`.
fn top_band_level(grid: &SimGrid, p: &[C], a: f64, fft: &dyn Fft<f64>) -> f64 {
    let mut buf: Vec<C> = p.iter().map(|z| z - a).collect();
    fft.process(&mut buf);
    let cut = 0.9 * grid.kappa_max();
    (0..grid.n)
        .filter(|&j| grid.kappa(j).abs() > cut)
        .map(|j| buf[j].norm())
        .fold(0.0, f64::max)
        / grid.n as f64
}

pub fn simulate(profile: &InitialProfile, grid: &SimGrid) -> Result<FieldTrajectory> {
    grid.validate()?;
    if grid.l_box < 2.0 * profile.support() {
        return Err(LabError::InvalidGrid(format!(
            "box half-length {} is below twice the support {}",
            grid.l_box,
            profile.support()
        )));
    }
    let q0: Vec<C> = (0..grid.n).map(|j| profile.value(grid.x(j))).collect();
    simulate_field(q0, profile.amplitude(), grid, &[])
}

/// Snapshot times: multiples of the interval and the `extra` times, up to
/// `t_end`.
fn record_times(grid: &SimGrid, t_end: f64, extra: &[f64]) -> Vec<f64> {
    let count = (t_end / grid.snapshot_interval * (1.0 - 1e-12)).floor() as usize;
    let mut ts: Vec<f64> = (1..=count).map(|j| j as f64 * grid.snapshot_interval).collect();
    ts.extend(extra.iter().copied().filter(|&t| t > 0.0 && t <= t_end));
    ts.push(t_end);
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|b, a| (*b - *a).abs() <= 1e-9 * a.abs().max(1.0));
    ts
}

/// Runs from arbitrary samples `q(x_j, 0)` on the grid, recording the
/// regular snapshots and the `extra` times.
pub fn simulate_field(q0: Vec<C>, a: f64, grid: &SimGrid, extra: &[f64]) -> Result<FieldTrajectory> {
    grid.validate()?;
    if q0.len() != grid.n {
        return Err(LabError::InvalidGrid(format!("{} samples for N = {}", q0.len(), grid.n)));
    }
    let t_end = grid.t_max.min(mi_time_cap(a));
    let mut stepper = SplitStep::new(*grid, a);
    let fft = FftPlanner::new().plan_fft_forward(grid.n);
    let gauge = |t: f64| C::from_polar(1.0, 2.0 * a * a * t);
    let mut p = q0;
    let mut snapshots = vec![Snapshot { t: 0.0, q: p.clone() }];
    let mut nyquist_level = top_band_level(grid, &p, a, fft.as_ref());
    let mut t = 0.0;
    for next in record_times(grid, t_end, extra) {
        stepper.advance(&mut p, next - t);
        t = next;
        // non-finite samples count as infinitely large
        let max = p.iter().map(|z| if z.is_finite() { z.norm() } else { f64::INFINITY }).fold(0.0, f64::max);
        if !(max <= BLOW_UP_FACTOR * a) {
            return Err(LabError::BlowUp { t, max });
        }
        nyquist_level = nyquist_level.max(top_band_level(grid, &p, a, fft.as_ref()));
        let g = gauge(t);
        snapshots.push(Snapshot { t, q: p.iter().map(|z| z * g).collect() });
    }
    Ok(FieldTrajectory { a, grid: *grid, snapshots, t_end: t, noise_floor_estimate: noise_floor(a, t), nyquist_level })
}

/// Band-limited interpolant of one periodic snapshot.
pub struct SpectralInterpolant {
    l_box: f64,
    coeffs: Vec<(f64, C)>,
}

impl SpectralInterpolant {
    pub fn new(grid: &SimGrid, q: &[C]) -> Self {
        let mut buf = q.to_vec();
        FftPlanner::new().plan_fft_forward(grid.n).process(&mut buf);
        let scale = 1.0 / grid.n as f64;
        let coeffs = (0..grid.n).map(|j| (grid.kappa(j), buf[j] * scale)).collect();
        Self { l_box: grid.l_box, coeffs }
    }

    /// Value at `x`; the Nyquist bin enters as a cosine so that the
    /// interpolant of real data stays real.
    pub fn eval(&self, x: f64) -> C {
        let n = self.coeffs.len();
        let s = x + self.l_box;
        let mut sum = C::new(0.0, 0.0);
        for (j, &(k, c)) in self.coeffs.iter().enumerate() {
            if j == n / 2 {
                sum += c * (k * s).cos();
            } else {
                sum += c * C::from_polar(1.0, k * s);
            }
        }
        sum
    }
}

/// `q(4ξt, t)` and `q(-4ξt, t)` at one snapshot time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySample {
    pub t: f64,
    pub plus: C,
    pub minus: C,
}

/// Samples along `x = ±4ξt` at every snapshot.
pub fn sample_ray(traj: &FieldTrajectory, xi: f64) -> Result<Vec<RaySample>> {
    sample_ray_at(traj, xi, &traj.times())
}

/// Samples along `x = ±4ξt` at the snapshots nearest to `times`.
pub fn sample_ray_at(traj: &FieldTrajectory, xi: f64, times: &[f64]) -> Result<Vec<RaySample>> {
    let l = traj.grid.l_box;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let snap = traj.at(t)?;
        let x = 4.0 * xi * snap.t;
        if !(x.abs() < l) {
            return Err(LabError::RayExitsBox { x, l_box: l });
        }
        let f = SpectralInterpolant::new(&traj.grid, &snap.q);
        let plus = f.eval(x);
        let minus = if x == 0.0 { plus } else { f.eval(-x) };
        out.push(RaySample { t: snap.t, plus, minus });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> SimGrid {
        SimGrid { l_box: 20.0, n, dt: 0.005, t_max: 1.0, snapshot_interval: 0.5 }
    }

    #[test]
    fn mirror_is_an_involution_on_x() {
        let g = grid(256);
        for j in 0..g.n {
            let m = mirror_index(j, g.n);
            assert_eq!(mirror_index(m, g.n), j);
            if j > 0 {
                assert!((g.x(m) + g.x(j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn grid_checks() {
        assert!(grid(256).validate().is_ok());
        assert!(grid(200).validate().is_err());
        assert!(grid(128).validate().is_err());
        let coarse = SimGrid { dt: 1.0, ..grid(256) };
        assert!(matches!(coarse.validate(), Err(LabError::Cfl { .. })));
    }

    #[test]
    fn interpolant_reproduces_nodes() {
        let g = grid(256);
        let q: Vec<C> = (0..g.n).map(|j| C::new((-g.x(j).powi(2)).exp(), g.x(j).sin() * 0.0)).collect();
        let f = SpectralInterpolant::new(&g, &q);
        for j in [0, 17, 128, 255] {
            assert!((f.eval(g.x(j)) - q[j]).norm() < 1e-13);
        }
    }

    #[test]
    fn mi_cap_value() {
        // ln(1e-8 / 2^-52) / 0.5
        assert!((mi_time_cap(0.5) - 35.246).abs() < 1e-3);
        assert!(noise_floor(0.5, mi_time_cap(0.5)) <= MI_TOLERANCE * (1.0 + 1e-12));
    }
}
