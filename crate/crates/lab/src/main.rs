use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nnls_core::background::CutSide;
use nnls_core::scattering::{scattering_data, validate_assumptions, SpectralValues};
use nnls_core::Complex64;
use nnls_lab::config::RunConfig;
use nnls_lab::harness::{
    assumption_json, emit_report, ray_constants, ray_dir, run, simulate_config, Asymptotics, ComparisonReport,
    ReportFormat,
};
use nnls_lab::io::{fmt_e12, num, read_json, trajectory_csv, write_json, write_text, write_trajectory_bin};
use nnls_lab::{LabError, Result};
use rayon::prelude::*;
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(name = "nnls-lab", version, about = "Scattering, long-time asymptotics and simulation for the nonlocal NLS equation")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; the built-in Gaussian dip when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance for comparison rows.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Ray ξ = x/4t; repeat to replace the configured rays.
    #[arg(long = "ray", global = true, allow_hyphen_values = true)]
    rays: Vec<f64>,
    /// Final simulation time; later comparison times are dropped.
    #[arg(long, global = true)]
    tmax: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a₁, a₂, b₁, b₂, r₁, r₂ on the real line and both sides of the cut.
    Scatter {
        /// Points on the real line.
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// Check zero-freeness and the winding condition for every ray.
    Validate,
    /// Plane-wave constants for the rays with |ξ| > √2 A.
    Planewave,
    /// Elliptic-wave constants for the rays with 0 < |ξ| < √2 A.
    Elliptic,
    /// Run the split-step simulation and write the trajectory.
    Simulate {
        /// Write every n-th grid node to the CSV.
        #[arg(long, default_value_t = 8)]
        stride: usize,
    },
    /// Full pipeline: constants, simulation and comparison along the rays.
    Compare,
    /// Re-emit comparison.csv from report.json and print a summary.
    Report,
}

fn load(common: &Common) -> Result<(RunConfig, PathBuf)> {
    let (mut config, base) = match &common.config {
        Some(p) => {
            let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
            (RunConfig::load(p)?, base)
        }
        None => (RunConfig::default(), PathBuf::new()),
    };
    if let Some(out) = &common.out {
        config.out_dir = out.clone();
    } else if common.config.is_some() && config.out_dir.is_relative() {
        config.out_dir = base.join(&config.out_dir);
    }
    if let Some(tol) = common.tol {
        config.tolerances.rel = tol;
    }
    if !common.rays.is_empty() {
        config.rays = common.rays.clone();
    }
    if let Some(tmax) = common.tmax {
        config.grid.t_max = Some(tmax);
        config.t_list.retain(|&t| t <= tmax);
        if config.t_list.is_empty() {
            config.t_list.push(tmax);
        }
    }
    config.validate()?;
    Ok((config, base))
}

fn spectral_row(k: Complex64, side: &str, v: &SpectralValues) -> String {
    let mut cols = vec![fmt_e12(k.re), fmt_e12(k.im), side.to_string()];
    for z in [v.a1, v.a2, v.b1, v.b2, v.b1 / v.a1, v.b2 / v.a2] {
        cols.push(fmt_e12(z.re));
        cols.push(fmt_e12(z.im));
    }
    cols.join(",")
}

fn scatter(config: &RunConfig, base: &Path, points: usize) -> Result<()> {
    let profile = config.profile.build(config.a, base)?;
    let a = config.a;
    let kmax = 5.0 * a.max(1.0);
    let n = points.max(2);
    let mut jobs: Vec<(Complex64, CutSide, &str)> = (0..n)
        .map(|j| (Complex64::new(-kmax + 2.0 * kmax * (j as f64 + 0.5) / n as f64, 0.0), CutSide::Off, "off"))
        .collect();
    for j in 0..n {
        let y = a * (2.0 * (j as f64 + 0.5) / n as f64 - 1.0);
        jobs.push((Complex64::new(0.0, y), CutSide::Minus, "minus"));
        jobs.push((Complex64::new(0.0, y), CutSide::Plus, "plus"));
    }
    let rows: Vec<String> = jobs
        .par_iter()
        .map(|&(k, side, name)| Ok(spectral_row(k, name, &scattering_data(&profile, k, side)?)))
        .collect::<Result<_>>()?;
    let header = "k_re,k_im,side,re_a1,im_a1,re_a2,im_a2,re_b1,im_b1,re_b2,im_b2,re_r1,im_r1,re_r2,im_r2";
    let path = config.out_dir.join("scatter.csv");
    write_text(&path, &format!("{header}\n{}\n", rows.join("\n")))?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn validate(config: &RunConfig, base: &Path) -> Result<bool> {
    let profile = config.profile.build(config.a, base)?;
    let reports: Vec<(f64, std::result::Result<Value, String>)> = config
        .classified_rays()
        .into_par_iter()
        .map(|ray| {
            let r = validate_assumptions(&profile, ray).map(|r| assumption_json(&r)).map_err(|e| e.to_string());
            (ray.xi, r)
        })
        .collect();
    let mut out = Map::new();
    let mut ok = true;
    for (xi, r) in reports {
        let v = match r {
            Ok(v) => {
                let passed = v.get("passed").and_then(Value::as_bool).unwrap_or(false);
                ok &= passed;
                println!("xi = {xi}: {}", if passed { "assumptions hold" } else { "assumptions violated" });
                v
            }
            Err(e) => {
                ok = false;
                println!("xi = {xi}: check failed: {e}");
                Value::from(e)
            }
        };
        out.insert(fmt_e12(xi), v);
    }
    write_json(&config.out_dir.join("validate.json"), &Value::Object(out))?;
    Ok(ok)
}

fn constants(config: &RunConfig, base: &Path, want_elliptic: bool) -> Result<bool> {
    let mut ok = true;
    for (ray, result) in ray_constants(config, base)? {
        let matches = match &result {
            Ok(Asymptotics::PlaneWave(_)) => !want_elliptic,
            Ok(Asymptotics::Elliptic(_)) => want_elliptic,
            Ok(Asymptotics::Background { .. }) => true,
            Err(_) => true,
        };
        if !matches {
            println!("xi = {}: skipped (other sector)", ray.xi);
            continue;
        }
        match result {
            Ok(asym) => {
                let path = config.out_dir.join(ray_dir(ray.xi)).join("constants.json");
                write_json(&path, &Value::Object(asym.constants()))?;
                println!("xi = {}: wrote {}", ray.xi, path.display());
            }
            Err(why) => {
                ok = false;
                println!("xi = {}: skipped: {why}", ray.xi);
            }
        }
    }
    Ok(ok)
}

fn simulate(config: &RunConfig, base: &Path, stride: usize) -> Result<()> {
    let traj = simulate_config(config, base)?;
    let dir = &config.out_dir;
    write_text(&dir.join("trajectory.csv"), &trajectory_csv(&traj, stride))?;
    write_trajectory_bin(&dir.join("trajectory.bin"), &traj)?;
    let mut m = Map::new();
    m.insert("A".into(), num(traj.a));
    m.insert("L_box".into(), num(traj.grid.l_box));
    m.insert("N".into(), traj.grid.n.into());
    m.insert("dt".into(), num(traj.grid.dt));
    m.insert("snapshots".into(), traj.snapshots.len().into());
    m.insert("t_end".into(), num(traj.t_end));
    m.insert("noise_floor_estimate".into(), num(traj.noise_floor_estimate));
    m.insert("nyquist_level".into(), num(traj.nyquist_level));
    write_json(&dir.join("simulation.json"), &Value::Object(m))?;
    println!(
        "simulated to t = {} on N = {}, L = {}; noise floor {:.1e}",
        traj.t_end, traj.grid.n, traj.grid.l_box, traj.noise_floor_estimate
    );
    Ok(())
}

fn summarize(report: &ComparisonReport, tol: f64) -> bool {
    println!("{:>10} {:>8} {:>14} {:>14} {:>12}", "xi", "t", "|q_sim|", "|q_asym|", "rel_err");
    let mut ok = true;
    for r in &report.rows {
        let flag = if r.rel_err <= tol { "" } else { "  above tol" };
        ok &= r.rel_err <= tol;
        println!("{:>10.4} {:>8.3} {:>14.6e} {:>14.6e} {:>12.3e}{flag}", r.xi, r.t, r.abs_q_sim, r.abs_q_asym, r.rel_err);
    }
    for ray in &report.rays {
        if let Some(why) = &ray.skipped {
            println!("xi = {}: skipped: {why}", ray.xi);
        }
        if let Some(f) = ray.fit {
            println!("xi = {}: error ~ t^{:.3} (R² = {:.3})", ray.xi, f.exponent, f.r2);
        }
    }
    ok
}

fn compare(config: &RunConfig, base: &Path) -> Result<bool> {
    let report = run(config, base)?;
    emit_report(&report, &config.out_dir, ReportFormat::Csv)?;
    emit_report(&report, &config.out_dir, ReportFormat::Json)?;
    Ok(summarize(&report, config.tolerances.rel))
}

fn report(config: &RunConfig) -> Result<bool> {
    let path = config.out_dir.join("report.json");
    let report = ComparisonReport::from_json(&read_json(&path)?)?;
    emit_report(&report, &config.out_dir, ReportFormat::Csv)?;
    Ok(summarize(&report, config.tolerances.rel))
}

fn dispatch(cli: &Cli) -> Result<bool> {
    let (config, base) = load(&cli.common)?;
    match cli.command {
        Command::Scatter { points } => scatter(&config, &base, points).map(|_| true),
        Command::Validate => validate(&config, &base),
        Command::Planewave => constants(&config, &base, false),
        Command::Elliptic => constants(&config, &base, true),
        Command::Simulate { stride } => simulate(&config, &base, stride).map(|_| true),
        Command::Compare => compare(&config, &base),
        Command::Report => report(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let LabError::Config(_) = e {
                return ExitCode::from(2);
            }
            ExitCode::from(1)
        }
    }
}
