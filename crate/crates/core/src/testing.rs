//! Brute-force oracles for unit tests.

use ndarray::{Array1, ArrayView1};

/// Minimizer of a convex 1-D function on `[lo, hi]`: a grid pass followed by
/// golden-section refinement around the best grid point.
pub fn grid_argmin_1d(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let mut best = lo;
    let mut best_val = f(lo);
    for k in 1..=steps {
        let y = lo + h * k as f64;
        let v = f(y);
        if v < best_val {
            best = y;
            best_val = v;
        }
    }
    let (mut a, mut b) = ((best - h).max(lo), (best + h).min(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if f(c) <= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// Central finite-difference gradient.
pub fn fd_gradient(f: impl Fn(ArrayView1<f64>) -> f64, x: ArrayView1<f64>, h: f64) -> Array1<f64> {
    let mut g = Array1::zeros(x.len());
    let mut xp = x.to_owned();
    for j in 0..x.len() {
        let orig = xp[j];
        xp[j] = orig + h;
        let fp = f(xp.view());
        xp[j] = orig - h;
        let fm = f(xp.view());
        xp[j] = orig;
        g[j] = (fp - fm) / (2.0 * h);
    }
    g
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
