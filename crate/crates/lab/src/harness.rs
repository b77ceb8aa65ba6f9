//! Ray pipelines: classify, compute the asymptotic constants, simulate once,
//! sample the rays and compare.

use std::collections::BTreeMap;
use std::path::Path;

use nnls_core::background::{Ray, Region};
use nnls_core::ellipticwave::{elliptic_eval, elliptic_params, EllipticData};
use nnls_core::planewave::{planewave_eval, planewave_params, CaseTag, PlaneWaveData};
use nnls_core::scattering::{validate_assumptions, AssumptionReport, InitialProfile, SpectralTable};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::error::{LabError, Result};
use crate::io::{cnum, fmt_e12, num, to_json_string, write_json, write_text};
use crate::simulator::{sample_ray_at, simulate_field, FieldTrajectory};

type C = Complex64;

pub const COMPARISON_HEADER: &str = "xi,t,abs_q_sim,abs_q_asym,abs_err,rel_err";

/// Leading-order description of one ray.
#[derive(Debug, Clone, PartialEq)]
pub enum Asymptotics {
    /// Reflectionless data: `q = A e^{2iA²t}` on every ray.
    Background { a: f64 },
    PlaneWave(PlaneWaveData),
    Elliptic(Box<EllipticData>),
}

impl Asymptotics {
    /// Leading term at `x = 4ξt`; rays with `ξ < 0` use the `q(-x, t)`
    /// formula of `|ξ|`.
    pub fn leading(&self, xi: f64, t: f64) -> Result<C> {
        let carrier = |a: f64| C::from_polar(a, 2.0 * a * a * t);
        Ok(match self {
            Asymptotics::Background { a } => carrier(*a),
            Asymptotics::PlaneWave(d) => {
                let e = planewave_eval(d, t);
                if xi >= 0.0 {
                    e.q_plus
                } else {
                    e.q_minus
                }
            }
            Asymptotics::Elliptic(d) => {
                let e = elliptic_eval(d, t)?;
                if xi >= 0.0 {
                    e.q_plus
                } else {
                    e.q_minus
                }
            }
        })
    }

    /// Every named constant, keyed by name.
    pub fn constants(&self) -> Map<String, Value> {
        let mut m = Map::new();
        match self {
            Asymptotics::Background { a } => {
                m.insert("kind".into(), "background".into());
                m.insert("A".into(), num(*a));
            }
            Asymptotics::PlaneWave(d) => {
                m.insert("kind".into(), "plane_wave".into());
                m.insert("A".into(), num(d.a));
                m.insert("xi".into(), num(d.xi));
                m.insert("k1".into(), num(d.k1));
                m.insert("nu".into(), cnum(d.nu));
                m.insert("chi_k1".into(), cnum(d.chi_at_k1));
                m.insert("delta_arg".into(), num(d.delta_arg));
                m.insert("F_inf".into(), cnum(d.f_inf));
                m.insert("F_k1".into(), cnum(d.f_at_k1));
                m.insert("r1_k1".into(), cnum(d.r1));
                m.insert("r2_k1".into(), cnum(d.r2));
                m.insert("w_k1".into(), cnum(d.w));
                m.insert("beta1".into(), num(d.beta1));
                m.insert("theta2".into(), num(d.theta2));
                m.insert("theta_k1".into(), num(d.theta_at_k1));
                m.insert("c1".into(), cnum(d.c1));
                m.insert("c2".into(), cnum(d.c2));
                m.insert("c3".into(), cnum(d.c3));
                m.insert("c4".into(), cnum(d.c4));
                let tag = match d.case_tag {
                    CaseTag::A => "a",
                    CaseTag::B => "b",
                    CaseTag::C => "c",
                };
                m.insert("case".into(), tag.into());
                m.insert("modulus_plus".into(), num(d.a * (-2.0 * d.f_inf.im).exp()));
                m.insert("modulus_minus".into(), num(d.a * (2.0 * d.f_inf.im).exp()));
            }
            Asymptotics::Elliptic(d) => {
                let s = &d.surface;
                m.insert("kind".into(), "elliptic".into());
                m.insert("A".into(), num(s.a));
                m.insert("xi".into(), num(s.xi));
                m.insert("k0".into(), num(s.k0));
                m.insert("alpha".into(), cnum(s.alpha));
                m.insert("tau".into(), cnum(s.tau));
                m.insert("Omega".into(), num(d.omega_big));
                m.insert("Omega_im_residual".into(), num(d.h.omega_im));
                m.insert("omega".into(), cnum(d.omega));
                m.insert("H_inf".into(), num(d.h_inf));
                m.insert("H_inf_im_residual".into(), num(d.h.h_inf_im));
                m.insert("G_inf".into(), cnum(d.g_inf));
                m.insert("v_inf".into(), cnum(d.v_inf));
                m.insert("c".into(), cnum(d.c));
                m.insert("khat0".into(), num(d.khat0));
                m.insert("amplitude".into(), num(s.a + s.alpha.im));
            }
        }
        m
    }
}

/// Constants for one ray; the table is shared.
pub fn asymptotics(table: &SpectralTable, ray: &Ray) -> Result<Asymptotics> {
    let a = table.profile().amplitude();
    if table.profile().is_background() {
        return Ok(Asymptotics::Background { a });
    }
    let xi = ray.xi.abs();
    match ray.region {
        Region::PlaneWave => Ok(Asymptotics::PlaneWave(planewave_params(xi, table)?)),
        Region::EllipticWave => Ok(Asymptotics::Elliptic(Box::new(elliptic_params(xi, table)?))),
        Region::Transition => Err(LabError::Config(format!("ray xi = {} lies in a transition zone", ray.xi))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub xi: f64,
    pub t: f64,
    pub abs_q_sim: f64,
    pub abs_q_asym: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl ComparisonRow {
    pub fn new(xi: f64, t: f64, sim: C, asym: C) -> Self {
        let (s, a) = (sim.norm(), asym.norm());
        let abs_err = (s - a).abs();
        Self { xi, t, abs_q_sim: s, abs_q_asym: a, abs_err, rel_err: abs_err / a }
    }

    pub fn csv(&self) -> String {
        [self.xi, self.t, self.abs_q_sim, self.abs_q_asym, self.abs_err, self.rel_err].map(fmt_e12).join(",")
    }
}

/// Least-squares fit `ln err = p ln t + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub r2: f64,
}

/// Fit over the points with positive error; `None` with fewer than two.
pub fn fit_decay(ts: &[f64], errs: &[f64]) -> Option<DecayFit> {
    let pts: Vec<(f64, f64)> =
        ts.iter().zip(errs).filter(|(t, e)| **t > 0.0 && **e > 0.0).map(|(t, e)| (t.ln(), e.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let exponent = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some(DecayFit { exponent, r2 })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayReport {
    pub xi: f64,
    pub region: Region,
    /// `None` when the ray ran; otherwise why it was skipped.
    pub skipped: Option<String>,
    pub constants: Map<String, Value>,
    pub fit: Option<DecayFit>,
    /// Comparison times dropped because of the instability cap or the box.
    pub dropped_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    pub rays: Vec<RayReport>,
    /// Assumption checks, simulation summary and run settings.
    pub meta: Map<String, Value>,
}

fn region_name(r: Region) -> &'static str {
    match r {
        Region::PlaneWave => "plane_wave",
        Region::EllipticWave => "elliptic_wave",
        Region::Transition => "transition",
    }
}

fn region_from(s: &str) -> Option<Region> {
    match s {
        "plane_wave" => Some(Region::PlaneWave),
        "elliptic_wave" => Some(Region::EllipticWave),
        "transition" => Some(Region::Transition),
        _ => None,
    }
}

pub fn assumption_json(r: &AssumptionReport) -> Value {
    let mut m = Map::new();
    m.insert("zero_count_upper".into(), r.zero_count_upper.into());
    m.insert("zero_count_lower".into(), r.zero_count_lower.into());
    m.insert("boundary_min_abs".into(), num(r.boundary_min_abs));
    m.insert("winding_ok".into(), r.winding_ok.into());
    m.insert("max_abs_winding".into(), num(r.max_abs_winding));
    m.insert("region".into(), region_name(r.region_checked.region).into());
    m.insert("passed".into(), r.passed().into());
    Value::Object(m)
}

impl ComparisonReport {
    pub fn csv(&self) -> String {
        let mut s = String::from(COMPARISON_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv());
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("xi".into(), num(r.xi));
                m.insert("t".into(), num(r.t));
                m.insert("abs_q_sim".into(), num(r.abs_q_sim));
                m.insert("abs_q_asym".into(), num(r.abs_q_asym));
                m.insert("abs_err".into(), num(r.abs_err));
                m.insert("rel_err".into(), num(r.rel_err));
                Value::Object(m)
            })
            .collect();
        let rays: Vec<Value> = self
            .rays
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("xi".into(), num(r.xi));
                m.insert("region".into(), region_name(r.region).into());
                m.insert("skipped".into(), r.skipped.clone().map_or(Value::Null, Value::from));
                m.insert("constants".into(), Value::Object(r.constants.clone()));
                let fit = r.fit.map_or(Value::Null, |f| {
                    let mut m = Map::new();
                    m.insert("exponent".into(), num(f.exponent));
                    m.insert("r2".into(), num(f.r2));
                    Value::Object(m)
                });
                m.insert("fit".into(), fit);
                m.insert("dropped_times".into(), Value::Array(r.dropped_times.iter().map(|&t| num(t)).collect()));
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("rows".into(), Value::Array(rows));
        m.insert("rays".into(), Value::Array(rays));
        m.insert("meta".into(), Value::Object(self.meta.clone()));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| LabError::Config(format!("report: bad or missing {what}"));
        let f = |v: &Value, k: &str| -> Result<f64> {
            match v.get(k) {
                Some(Value::Null) => Ok(f64::NAN),
                Some(x) => x.as_f64().ok_or_else(|| bad(k)),
                None => Err(bad(k)),
            }
        };
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("rows"))?
            .iter()
            .map(|r| {
                Ok(ComparisonRow {
                    xi: f(r, "xi")?,
                    t: f(r, "t")?,
                    abs_q_sim: f(r, "abs_q_sim")?,
                    abs_q_asym: f(r, "abs_q_asym")?,
                    abs_err: f(r, "abs_err")?,
                    rel_err: f(r, "rel_err")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let rays = v
            .get("rays")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("rays"))?
            .iter()
            .map(|r| {
                let region = r.get("region").and_then(Value::as_str).and_then(region_from).ok_or_else(|| bad("region"))?;
                let fit = match r.get("fit") {
                    Some(Value::Null) | None => None,
                    Some(x) => Some(DecayFit { exponent: f(x, "exponent")?, r2: f(x, "r2")? }),
                };
                Ok(RayReport {
                    xi: f(r, "xi")?,
                    region,
                    skipped: r.get("skipped").and_then(Value::as_str).map(String::from),
                    constants: r.get("constants").and_then(Value::as_object).cloned().unwrap_or_default(),
                    fit,
                    dropped_times: r
                        .get("dropped_times")
                        .and_then(Value::as_array)
                        .map(|a| a.iter().filter_map(Value::as_f64).collect())
                        .unwrap_or_default(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let meta = v.get("meta").and_then(Value::as_object).cloned().unwrap_or_default();
        Ok(Self { rows, rays, meta })
    }
}

/// Output format of [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Directory name for the constants of ray `xi`.
pub fn ray_dir(xi: f64) -> String {
    format!("ray_{}", fmt_e12(xi))
}

/// Writes `comparison.csv`, or `report.json` plus one `constants.json` per
/// ray.
pub fn emit_report(report: &ComparisonReport, dir: &Path, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Csv => write_text(&dir.join("comparison.csv"), &report.csv()),
        ReportFormat::Json => {
            write_json(&dir.join("report.json"), &report.to_json())?;
            for r in &report.rays {
                write_json(&dir.join(ray_dir(r.xi)).join("constants.json"), &Value::Object(r.constants.clone()))?;
            }
            Ok(())
        }
    }
}

/// Report text as written by [`emit_report`] in JSON form.
pub fn report_json_string(report: &ComparisonReport) -> Result<String> {
    to_json_string(&report.to_json())
}

/// Per-ray outcome before the comparison.
struct Prepared {
    ray: Ray,
    assumptions: Option<AssumptionReport>,
    result: std::result::Result<Asymptotics, String>,
}

fn prepare(profile: &InitialProfile, table: &SpectralTable, ray: Ray) -> Prepared {
    if ray.region == Region::Transition {
        let why = format!("xi = {} lies in a transition zone", ray.xi);
        return Prepared { ray, assumptions: None, result: Err(why) };
    }
    if profile.is_background() {
        return Prepared { ray, assumptions: None, result: Ok(Asymptotics::Background { a: profile.amplitude() }) };
    }
    let rep = match validate_assumptions(profile, ray) {
        Ok(r) => r,
        Err(e) => return Prepared { ray, assumptions: None, result: Err(format!("assumption check failed: {e}")) },
    };
    if let Err(e) = rep.ensure() {
        return Prepared { ray, assumptions: Some(rep), result: Err(format!("assumptions violated: {e}")) };
    }
    let result = asymptotics(table, &ray).map_err(|e| e.to_string());
    Prepared { ray, assumptions: Some(rep), result }
}

/// Constants for every configured ray, in order.
pub fn ray_constants(config: &RunConfig, base: &Path) -> Result<Vec<(Ray, std::result::Result<Asymptotics, String>)>> {
    let profile = config.profile.build(config.a, base)?;
    let table = SpectralTable::new(profile.clone());
    let rays = config.classified_rays();
    Ok(rays.into_par_iter().map(|ray| prepare(&profile, &table, ray)).map(|p| (p.ray, p.result)).collect())
}

/// Simulates the configured profile, recording the comparison times.
pub fn simulate_config(config: &RunConfig, base: &Path) -> Result<FieldTrajectory> {
    let profile = config.profile.build(config.a, base)?;
    let grid = config.sim_grid(&profile);
    let q0 = config.initial_field(&profile, &grid);
    simulate_field(q0, config.a, &grid, &config.t_list)
}

/// The full pipeline. Failures of single rays are recorded in the report.
pub fn run(config: &RunConfig, base: &Path) -> Result<ComparisonReport> {
    config.validate()?;
    let profile = config.profile.build(config.a, base)?;
    let table = SpectralTable::new(profile.clone());
    let rays = config.classified_rays();
    let (prepared, traj) = rayon::join(
        || rays.into_par_iter().map(|ray| prepare(&profile, &table, ray)).collect::<Vec<_>>(),
        || simulate_config(config, base),
    );
    let traj = traj?;

    let per_ray: Vec<(Vec<ComparisonRow>, RayReport)> = prepared
        .par_iter()
        .map(|p| {
            let xi = p.ray.xi;
            let mut report = RayReport {
                xi,
                region: p.ray.region,
                skipped: None,
                constants: Map::new(),
                fit: None,
                dropped_times: Vec::new(),
            };
            let asym = match &p.result {
                Ok(a) => a,
                Err(why) => {
                    report.skipped = Some(why.clone());
                    return (Vec::new(), report);
                }
            };
            report.constants = asym.constants();
            let mut rows = Vec::new();
            for &t in &config.t_list {
                let sample = match sample_ray_at(&traj, xi, &[t]) {
                    Ok(s) => s[0],
                    Err(_) => {
                        report.dropped_times.push(t);
                        continue;
                    }
                };
                match asym.leading(xi, t) {
                    Ok(q) => rows.push(ComparisonRow::new(xi, t, sample.plus, q)),
                    Err(_) => report.dropped_times.push(t),
                }
            }
            let ts: Vec<f64> = rows.iter().map(|r| r.t).collect();
            let es: Vec<f64> = rows.iter().map(|r| r.abs_err).collect();
            report.fit = fit_decay(&ts, &es);
            (rows, report)
        })
        .collect();

    let mut meta = Map::new();
    let mut checks = BTreeMap::new();
    for p in &prepared {
        if let Some(r) = &p.assumptions {
            checks.insert(fmt_e12(p.ray.xi), assumption_json(r));
        }
    }
    meta.insert("assumptions".into(), Value::Object(checks.into_iter().collect()));
    let mut sim = Map::new();
    sim.insert("L_box".into(), num(traj.grid.l_box));
    sim.insert("N".into(), traj.grid.n.into());
    sim.insert("dt".into(), num(traj.grid.dt));
    sim.insert("t_end".into(), num(traj.t_end));
    sim.insert("noise_floor_estimate".into(), num(traj.noise_floor_estimate));
    sim.insert("nyquist_level".into(), num(traj.nyquist_level));
    meta.insert("simulation".into(), Value::Object(sim));
    meta.insert("A".into(), num(config.a));
    meta.insert("seed".into(), config.seed.into());
    meta.insert("noise".into(), num(config.noise));
    meta.insert("tolerance_rel".into(), num(config.tolerances.rel));

    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (r, rep) in per_ray {
        rows.extend(r);
        reports.push(rep);
    }
    Ok(ComparisonReport { rows, rays: reports, meta })
}
