//! Polynomial interpolation.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

/// Barycentric Lagrange interpolation on a fixed set of real nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Barycentric {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Barycentric {
    pub fn new(nodes: &[f64]) -> Self {
        let n = nodes.len();
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut w = 1.0;
            for j in 0..n {
                if i != j {
                    w *= nodes[i] - nodes[j];
                }
            }
            weights.push(1.0 / w);
        }
        let scale = weights.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        for w in &mut weights {
            *w /= scale;
        }
        Self { nodes: nodes.to_vec(), weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Value at `z` of the interpolant through `(nodes[i], values[i])`.
    pub fn eval(&self, values: &[Complex64], z: Complex64) -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for ((&x, &w), &v) in self.nodes.iter().zip(&self.weights).zip(values) {
            let d = z - x;
            if d == Complex64::new(0.0, 0.0) {
                return v;
            }
            let c = d.inv() * w;
            num += c * v;
            den += c;
        }
        num / den
    }
}

/// Lagrange interpolation of order `order` in uniformly spaced samples
/// `values[j] = g(x0 + j h)`, using the stencil centred on `x`.
pub fn uniform_lagrange(values: &[Complex64], x0: f64, h: f64, order: usize, x: f64) -> Complex64 {
    let n = values.len();
    let m = (order + 1).min(n);
    let s = (x - x0) / h;
    let j = s.floor() as isize;
    let first = (j - (m as isize - 1) / 2).clamp(0, (n - m) as isize) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m {
        let xi = (first + i) as f64;
        let mut li = 1.0;
        for l in 0..m {
            if l != i {
                let xl = (first + l) as f64;
                li *= (s - xl) / (xi - xl);
            }
        }
        acc += values[first + i] * li;
    }
    acc
}
