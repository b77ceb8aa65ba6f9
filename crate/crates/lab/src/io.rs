//! File formats: `%.12e` numbers, trajectory CSV and binary snapshots,
//! sorted-key JSON.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

use crate::error::{LabError, Result};
use crate::simulator::{FieldTrajectory, SimGrid, Snapshot};

type C = Complex64;

/// `x` as C's `%.12e`: twelve mantissa digits and a signed exponent of at
/// least two digits. Non-finite values print as `nan`, `inf`, `-inf`.
pub fn fmt_e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent");
    let e: i32 = exp.parse().expect("exponent digits");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

/// JSON number in `%.12e`; `null` when not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(fmt_e12(x).parse::<Number>().expect("valid number"))
}

/// `{"im": .., "re": ..}`.
pub fn cnum(z: C) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json_string(v: &Value) -> Result<String> {
    // serde_json's Map is a BTreeMap unless `preserve_order` is enabled
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let s = to_json_string(v)?;
    write_text(path, &s)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let s = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    Ok(serde_json::from_str(&s)?)
}

pub fn write_text(path: &Path, s: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        }
    }
    fs::write(path, s).map_err(|e| LabError::io(path, e))
}

/// Rows `t,x,re_q,im_q,abs_q`, every `stride`-th node of every snapshot.
pub fn trajectory_csv(traj: &FieldTrajectory, stride: usize) -> String {
    let stride = stride.max(1);
    let mut out = String::from("t,x,re_q,im_q,abs_q\n");
    for snap in &traj.snapshots {
        for j in (0..traj.grid.n).step_by(stride) {
            let q = snap.q[j];
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_e12(snap.t),
                fmt_e12(traj.grid.x(j)),
                fmt_e12(q.re),
                fmt_e12(q.im),
                fmt_e12(q.norm())
            ));
        }
    }
    out
}

/// One snapshot: a JSON header line `{"A":..,"L_box":..,"N":..,"t":..}`
/// followed by `N` little-endian `f64` pairs `re, im`.
pub fn write_snapshot<W: Write>(w: &mut W, grid: &SimGrid, a: f64, snap: &Snapshot) -> std::io::Result<()> {
    let mut h = Map::new();
    h.insert("A".into(), num(a));
    h.insert("L_box".into(), num(grid.l_box));
    h.insert("N".into(), Value::from(grid.n));
    h.insert("t".into(), num(snap.t));
    writeln!(w, "{}", Value::Object(h))?;
    for z in &snap.q {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

/// Header of a binary snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotHeader {
    pub a: f64,
    pub l_box: f64,
    pub n: usize,
    pub t: f64,
}

/// Reads one snapshot written by [`write_snapshot`]; `None` at end of input.
pub fn read_snapshot<R: BufRead>(r: &mut R) -> Result<Option<(SnapshotHeader, Vec<C>)>> {
    let mut line = String::new();
    let read = r.read_line(&mut line).map_err(|e| LabError::io("<snapshot>", e))?;
    if read == 0 {
        return Ok(None);
    }
    let v: Value = serde_json::from_str(line.trim_end())?;
    let field = |k: &str| -> Result<f64> {
        v.get(k).and_then(Value::as_f64).ok_or_else(|| LabError::Config(format!("snapshot header lacks {k}")))
    };
    let header = SnapshotHeader { a: field("A")?, l_box: field("L_box")?, n: field("N")? as usize, t: field("t")? };
    let mut buf = vec![0u8; 16 * header.n];
    r.read_exact(&mut buf).map_err(|e| LabError::io("<snapshot>", e))?;
    let q = buf
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            C::new(re, im)
        })
        .collect();
    Ok(Some((header, q)))
}

pub fn write_trajectory_bin(path: &Path, traj: &FieldTrajectory) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        }
    }
    let file = fs::File::create(path).map_err(|e| LabError::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    for snap in &traj.snapshots {
        write_snapshot(&mut w, &traj.grid, traj.a, snap).map_err(|e| LabError::io(path, e))?;
    }
    w.flush().map_err(|e| LabError::io(path, e))
}
