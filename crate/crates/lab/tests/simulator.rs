use std::f64::consts::PI;

use nnls_core::scattering::InitialProfile;
use nnls_lab::simulator::{
    mi_time_cap, mirror_index, nonlinear_step, sample_ray, sample_ray_at, simulate, simulate_field, FieldTrajectory,
    SimGrid, SpectralInterpolant, SplitStep,
};
use nnls_lab::LabError;
use num_complex::Complex64 as C;
use rustfft::FftPlanner;

fn bump(a: f64, x: f64) -> C {
    C::new(a, 0.0) + C::new(0.15, 0.1) * (-(x - 0.4) * (x - 0.4)).exp()
}

fn small_grid(n: usize, dt: f64, t_max: f64) -> SimGrid {
    SimGrid { l_box: 40.0, n, dt, t_max, snapshot_interval: t_max }
}

fn run_bump(a: f64, grid: &SimGrid) -> FieldTrajectory {
    let q0 = (0..grid.n).map(|j| bump(a, grid.x(j))).collect();
    simulate_field(q0, a, grid, &[]).unwrap()
}

fn max_diff(u: &[C], v: &[C]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

#[test]
fn background_is_exact() {
    let a = 1.0;
    let profile = InitialProfile::background(a, 1.0).unwrap();
    let grid = SimGrid { l_box: 32.0, n: 512, dt: 0.004, t_max: 5.0, snapshot_interval: 1.0 };
    let traj = simulate(&profile, &grid).unwrap();
    let last = traj.snapshots.last().unwrap();
    assert_eq!(last.t, 5.0);
    let exact = C::from_polar(a, 2.0 * a * a * 5.0);
    let dev = last.q.iter().map(|q| (q - exact).norm()).fold(0.0, f64::max);
    assert!(dev < 1e-10, "{dev:e}");
}

/// Pointwise RK4 for the pair `u = p(x)`, `v = p(-x)` under the nonlinear flow.
fn substep_oracle(u: C, v: C, a: f64, dt: f64) -> C {
    let rhs = |u: C, v: C| {
        let i2 = C::new(0.0, 2.0);
        (i2 * u * (u * v.conj() - a * a), i2 * v * (v * u.conj() - a * a))
    };
    let n = 2000;
    let h = dt / n as f64;
    let (mut u, mut v) = (u, v);
    for _ in 0..n {
        let (k1u, k1v) = rhs(u, v);
        let (k2u, k2v) = rhs(u + k1u * (h / 2.0), v + k1v * (h / 2.0));
        let (k3u, k3v) = rhs(u + k2u * (h / 2.0), v + k2v * (h / 2.0));
        let (k4u, k4v) = rhs(u + k3u * h, v + k3v * h);
        u += (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (h / 6.0);
        v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
    }
    u
}

#[test]
fn nonlinear_substep_conserves_the_mirror_product() {
    let a = 0.5;
    let n = 256;
    let mut p: Vec<C> = (0..n)
        .map(|j| {
            let x = -8.0 + 16.0 * j as f64 / n as f64;
            C::new(a, 0.0) + C::new(0.3 * (-(x - 1.0).powi(2)).exp(), 0.2 * (-x * x).exp() * x)
        })
        .collect();
    let before: Vec<C> = (0..n).map(|j| p[j] * p[mirror_index(j, n)].conj()).collect();
    let original = p.clone();
    let dt = 0.05;
    nonlinear_step(&mut p, a, dt);
    let after: Vec<C> = (0..n).map(|j| p[j] * p[mirror_index(j, n)].conj()).collect();
    assert!(max_diff(&before, &after) < 1e-13);
    for j in [0, 37, 100, 128, 131, 200] {
        let o = substep_oracle(original[j], original[mirror_index(j, n)], a, dt);
        assert!((o - p[j]).norm() < 1e-11, "{j}: {}", (o - p[j]).norm());
    }
}

#[test]
fn strang_order_two() {
    let a = 0.5;
    let t = 1.0;
    let fields: Vec<Vec<C>> = [0.004, 0.002, 0.001]
        .iter()
        .map(|&dt| run_bump(a, &small_grid(512, dt, t)).snapshots.last().unwrap().q.clone())
        .collect();
    let e1 = max_diff(&fields[0], &fields[1]);
    let e2 = max_diff(&fields[1], &fields[2]);
    let ratio = e1 / e2;
    assert!((ratio - 4.0).abs() < 0.3, "{ratio}");
}

/// Integrating-factor RK4 for `q` itself, with no gauge.
fn direct_reference(a: f64, grid: &SimGrid, t: f64, dt: f64) -> Vec<C> {
    let n = grid.n;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let k2: Vec<f64> = (0..n).map(|j| grid.kappa(j).powi(2)).collect();
    let nonlin = |q: &[C]| -> Vec<C> {
        (0..n).map(|j| C::new(0.0, 2.0) * q[j] * q[j] * q[mirror_index(j, n)].conj()).collect()
    };
    // w = e^{iκ²s} q̂ for s in [0, t]
    let to_q = |w: &[C], s: f64| -> Vec<C> {
        let mut b: Vec<C> = w.iter().zip(&k2).map(|(z, k)| z * C::from_polar(1.0 / n as f64, -k * s)).collect();
        inv.process(&mut b);
        b
    };
    let rhs = |w: &[C], s: f64| -> Vec<C> {
        let mut b = nonlin(&to_q(w, s));
        fwd.process(&mut b);
        b.iter().zip(&k2).map(|(z, k)| z * C::from_polar(1.0, k * s)).collect()
    };
    let mut w: Vec<C> = (0..n).map(|j| bump(a, grid.x(j))).collect();
    fwd.process(&mut w);
    let steps = (t / dt).round() as usize;
    let axpy = |w: &[C], k: &[C], h: f64| -> Vec<C> { w.iter().zip(k).map(|(a, b)| a + b * h).collect() };
    for i in 0..steps {
        let s = i as f64 * dt;
        let k1 = rhs(&w, s);
        let k2_ = rhs(&axpy(&w, &k1, dt / 2.0), s + dt / 2.0);
        let k3 = rhs(&axpy(&w, &k2_, dt / 2.0), s + dt / 2.0);
        let k4 = rhs(&axpy(&w, &k3, dt), s + dt);
        for j in 0..n {
            w[j] += (k1[j] + k2_[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (dt / 6.0);
        }
    }
    to_q(&w, t)
}

#[test]
fn gauge_matches_direct_integration() {
    let a = 0.5;
    let grid = small_grid(512, 0.001, 1.0);
    let gauged = run_bump(a, &grid).snapshots.last().unwrap().q.clone();
    let direct = direct_reference(a, &grid, 1.0, 5e-4);
    let d = max_diff(&gauged, &direct);
    assert!(d < 1e-6, "{d:e}");
}

#[test]
fn step_count_adapts_to_the_interval() {
    let a = 0.5;
    let grid = small_grid(256, 0.01, 0.03);
    let mut p: Vec<C> = (0..grid.n).map(|j| bump(a, grid.x(j))).collect();
    let mut q = p.clone();
    let mut s = SplitStep::new(grid, a);
    s.advance(&mut p, 0.03);
    for _ in 0..3 {
        s.step(&mut q, 0.01);
    }
    assert!(max_diff(&p, &q) < 1e-15);
}

#[test]
fn mi_guard_caps_the_run() {
    let a = 1.0;
    let grid = SimGrid { l_box: 16.0, n: 256, dt: 0.004, t_max: 50.0, snapshot_interval: 1.0 };
    let cap = mi_time_cap(a);
    assert!(cap < 50.0);
    let q0 = vec![C::new(a, 0.0); grid.n];
    let traj = simulate_field(q0, a, &grid, &[]).unwrap();
    assert!((traj.t_end - cap).abs() < 1e-12);
    assert!(traj.noise_floor_estimate <= 1e-8 * (1.0 + 1e-9));
}

#[test]
fn blow_up_is_detected() {
    // an odd imaginary perturbation makes Im p(x) conj p(-x) negative on one
    // side; this one collapses near t = 3.5
    let a = 0.5;
    let grid = SimGrid { l_box: 16.0, n: 1024, dt: 1e-4, t_max: 10.0, snapshot_interval: 0.5 };
    let q0 = (0..grid.n).map(|j| C::new(a, 5.0 * grid.x(j) * (-grid.x(j).powi(2)).exp())).collect();
    match simulate_field(q0, a, &grid, &[]) {
        Err(LabError::BlowUp { t, max }) => {
            assert!(max > 1e6 * a);
            assert!(t > 2.0 && t < 5.0, "{t}");
        }
        other => panic!("expected a blow-up, got {:?}", other.map(|t| t.t_end)),
    }
}

#[test]
fn extra_times_are_recorded() {
    let grid = small_grid(256, 0.01, 1.0);
    let grid = SimGrid { snapshot_interval: 0.25, ..grid };
    let q0 = (0..grid.n).map(|j| bump(0.5, grid.x(j))).collect();
    let traj = simulate_field(q0, 0.5, &grid, &[0.1, 0.6, 3.0]).unwrap();
    assert_eq!(traj.times(), vec![0.0, 0.1, 0.25, 0.5, 0.6, 0.75, 1.0]);
}

#[test]
fn ray_zero_is_the_origin_trace() {
    let traj = run_bump(0.5, &SimGrid { snapshot_interval: 0.5, ..small_grid(256, 0.01, 1.0) });
    let s = sample_ray(&traj, 0.0).unwrap();
    assert_eq!(s.len(), traj.snapshots.len());
    for (r, snap) in s.iter().zip(&traj.snapshots) {
        assert_eq!(r.plus, r.minus);
        assert!((r.plus - snap.q[traj.grid.n / 2]).norm() < 1e-13);
    }
}

#[test]
fn background_ray_has_modulus_a() {
    let a = 0.7;
    let grid = SimGrid { l_box: 32.0, n: 256, dt: 0.01, t_max: 2.0, snapshot_interval: 0.5 };
    let traj = simulate_field(vec![C::new(a, 0.0); grid.n], a, &grid, &[]).unwrap();
    for r in sample_ray(&traj, 1.3).unwrap() {
        assert!((r.plus.norm() - a).abs() < 1e-10);
        assert!((r.minus.norm() - a).abs() < 1e-10);
    }
}

#[test]
fn interpolation_agrees_with_a_doubled_grid() {
    let a = 0.5;
    let coarse = run_bump(a, &small_grid(512, 0.001, 1.0));
    let fine = run_bump(a, &small_grid(1024, 0.001, 1.0));
    let xi = 0.37;
    let u = sample_ray_at(&coarse, xi, &[1.0]).unwrap()[0];
    let v = sample_ray_at(&fine, xi, &[1.0]).unwrap()[0];
    assert!((u.plus - v.plus).norm() < 1e-8, "{:e}", (u.plus - v.plus).norm());
    assert!((u.minus - v.minus).norm() < 1e-8);
}

#[test]
fn interpolant_is_exact_for_trigonometric_data() {
    let grid = small_grid(256, 0.01, 1.0);
    let k = 5.0 * PI / grid.l_box;
    let f = |x: f64| C::from_polar(1.0, k * x) + 0.3 * (3.0 * k * x).cos();
    let q: Vec<C> = (0..grid.n).map(|j| f(grid.x(j))).collect();
    let s = SpectralInterpolant::new(&grid, &q);
    for x in [-39.9, -12.345, 0.0, 0.5, 17.77] {
        assert!((s.eval(x) - f(x)).norm() < 1e-12);
    }
}

#[test]
fn ray_leaving_the_box_is_an_error() {
    let traj = run_bump(0.5, &small_grid(256, 0.01, 1.0));
    assert!(matches!(sample_ray(&traj, 20.0), Err(LabError::RayExitsBox { .. })));
    assert!(matches!(sample_ray_at(&traj, 0.1, &[0.5]), Err(LabError::MissingSnapshot(_))));
}

#[test]
fn resolution_and_box_for_the_gaussian() {
    let profile = InitialProfile::from_preset(
        0.5,
        nnls_core::scattering::Preset::GaussianBump { amplitude: 0.2, width: 1.0, chirp: 0.0, center: 0.0, phase: PI },
    )
    .unwrap();
    let grid = SimGrid::for_profile(&profile, 5.0, 0.0025, 0.1);
    assert!(grid.validate().is_ok());
    assert!((grid.h() - 0.1).abs() < 1e-15);
    assert!(grid.l_box >= 4.0 * profile.support());
    let traj = simulate(&profile, &SimGrid { snapshot_interval: 1.0, ..grid }).unwrap();
    assert!(traj.nyquist_level < 1e-12, "{:e}", traj.nyquist_level);
}

#[test]
fn grid_must_hold_the_profile() {
    let profile = InitialProfile::background(0.5, 30.0).unwrap();
    let grid = SimGrid { l_box: 40.0, n: 256, dt: 0.01, t_max: 1.0, snapshot_interval: 1.0 };
    assert!(matches!(simulate(&profile, &grid), Err(LabError::InvalidGrid(_))));
}
