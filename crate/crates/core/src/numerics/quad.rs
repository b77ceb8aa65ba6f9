//! Adaptive Gauss-Kronrod quadrature along polygonal complex paths.
//!
//! Endpoint singularities are declared on the path. An `InverseSqrt`
//! endpoint is removed by writing the distance to the endpoint as `s²`; a
//! `Log` endpoint gets a graded initial mesh with ratio 0.25.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_914_950,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const LOG_RATIO: f64 = 0.25;
const LOG_LEVELS: i32 = 20;

/// Kind of integrable singularity at a path endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    Regular,
    /// Behaves like `(k - k_end)^{-1/2}`.
    InverseSqrt,
    /// Behaves like `ln(k - k_end)`.
    Log,
}

/// Polygonal path with tagged endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPath {
    vertices: Vec<Complex64>,
    start: Endpoint,
    end: Endpoint,
}

impl ComplexPath {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two vertices"));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath("consecutive vertices coincide"));
        }
        if vertices.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidPath("vertex is not finite"));
        }
        Ok(Self { vertices, start: Endpoint::Regular, end: Endpoint::Regular })
    }

    pub fn segment(a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn with_endpoints(mut self, start: Endpoint, end: Endpoint) -> Self {
        self.start = start;
        self.end = end;
        self
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn start(&self) -> Endpoint {
        self.start
    }

    pub fn end(&self) -> Endpoint {
        self.end
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 0.0, max_intervals: 2000 }
    }
}

impl QuadOptions {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod<G: FnMut(f64) -> Complex64>(g: &mut G, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = Complex64::new(0.0, 0.0);
    let mut gs = Complex64::new(0.0, 0.0);
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let vals = if x == 0.0 {
            let v = g(c);
            check(v, c)?;
            (v, Complex64::new(0.0, 0.0))
        } else {
            let v1 = g(c - h * x);
            check(v1, c - h * x)?;
            let v2 = g(c + h * x);
            check(v2, c + h * x)?;
            (v1, v2)
        };
        let s = vals.0 + vals.1;
        k += s * wk;
        if j % 2 == 1 {
            gs += s * WG[j / 2];
        }
    }
    let value = k * h;
    let err = ((k - gs) * h).norm();
    Ok(Piece { a, b, value, err })
}

fn check(v: Complex64, x: f64) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InteriorSingularity { re: x, im: 0.0 })
    }
}

fn adaptive<G: FnMut(f64) -> Complex64>(
    g: &mut G,
    breaks: &[f64],
    opts: &QuadOptions,
) -> Result<Complex64> {
    let mut heap = BinaryHeap::new();
    for w in breaks.windows(2) {
        if w[0] != w[1] {
            heap.push(kronrod(g, w[0], w[1])?);
        }
    }
    let mut retired = Complex64::new(0.0, 0.0);
    let mut retired_err = 0.0;
    loop {
        let total: Complex64 = heap.iter().map(|p| p.value).sum::<Complex64>() + retired;
        let err: f64 = heap.iter().map(|p| p.err).sum::<f64>() + retired_err;
        let tol = opts.abs_tol.max(opts.rel_tol * total.norm());
        if err <= tol {
            return Ok(total);
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::QuadratureNonconvergence { estimate: err, tolerance: tol });
        };
        if heap.len() + 2 > opts.max_intervals {
            return Err(Error::QuadratureNonconvergence { estimate: err, tolerance: tol });
        }
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) {
            retired += worst.value;
            retired_err += worst.err;
            continue;
        }
        heap.push(kronrod(g, worst.a, mid)?);
        heap.push(kronrod(g, mid, worst.b)?);
    }
}

/// `∫_a^b g(x) dx` for a complex-valued `g` on a real interval.
pub fn quad_interval<G: FnMut(f64) -> Complex64>(
    mut g: G,
    a: f64,
    b: f64,
    start: Endpoint,
    end: Endpoint,
    opts: &QuadOptions,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if start != Endpoint::Regular && end != Endpoint::Regular {
        let m = 0.5 * (a + b);
        let half = QuadOptions { abs_tol: 0.5 * opts.abs_tol, ..*opts };
        let l = one_sided(&mut g, a, m, start, Endpoint::Regular, &half)?;
        let r = one_sided(&mut g, m, b, Endpoint::Regular, end, &half)?;
        return Ok(l + r);
    }
    one_sided(&mut g, a, b, start, end, opts)
}

fn one_sided<G: FnMut(f64) -> Complex64>(
    g: &mut G,
    a: f64,
    b: f64,
    start: Endpoint,
    end: Endpoint,
    opts: &QuadOptions,
) -> Result<Complex64> {
    let d = b - a;
    match (start, end) {
        (Endpoint::InverseSqrt, _) => {
            let mut h = |s: f64| g(a + d * s * s) * (2.0 * d * s);
            adaptive(&mut h, &[0.0, 1.0], opts)
        }
        (_, Endpoint::InverseSqrt) => {
            let mut h = |s: f64| g(b - d * s * s) * (2.0 * d * s);
            adaptive(&mut h, &[0.0, 1.0], opts)
        }
        (Endpoint::Log, _) => {
            let mut h = |s: f64| g(a + d * s) * d;
            adaptive(&mut h, &graded_breaks(), opts)
        }
        (_, Endpoint::Log) => {
            let mut h = |s: f64| g(b - d * s) * d;
            adaptive(&mut h, &graded_breaks(), opts)
        }
        _ => adaptive(g, &[a, b], opts),
    }
}

fn graded_breaks() -> Vec<f64> {
    let mut v: Vec<f64> = (0..=LOG_LEVELS).rev().map(|j| LOG_RATIO.powi(j)).collect();
    v.insert(0, 0.0);
    v
}

/// `∫_path f(k) dk`.
pub fn quad_path<F: FnMut(Complex64) -> Complex64>(
    mut f: F,
    path: &ComplexPath,
    opts: &QuadOptions,
) -> Result<Complex64> {
    let v = &path.vertices;
    let n = v.len() - 1;
    let seg_opts = QuadOptions { abs_tol: opts.abs_tol / n as f64, ..*opts };
    let bad = Cell::new(None);
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let (p, q) = (v[i], v[i + 1]);
        let dz = q - p;
        let start = if i == 0 { path.start } else { Endpoint::Regular };
        let end = if i + 1 == n { path.end } else { Endpoint::Regular };
        let g = |s: f64| {
            let k = p + dz * s;
            let val = f(k) * dz;
            if !(val.re.is_finite() && val.im.is_finite()) {
                bad.set(Some(k));
            }
            val
        };
        match quad_interval(g, 0.0, 1.0, start, end, &seg_opts) {
            Ok(val) => total += val,
            Err(Error::InteriorSingularity { .. }) => {
                let k = bad.get().unwrap_or(p);
                return Err(Error::InteriorSingularity { re: k.re, im: k.im });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}
