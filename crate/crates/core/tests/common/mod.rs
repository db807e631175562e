//! Independent reference evaluation of integer-order Bessel functions.
//!
//! Small arguments use the ascending series in closed form; larger ones the
//! integral `J_n(x) = (1/π) ∫₀^π cos(nτ - x sin τ) dτ` by the trapezoidal
//! rule, which converges geometrically for this periodic integrand.

#![allow(dead_code)]

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 5.0;
const PANELS: usize = 160;

/// `J_0(x) .. J_{n_max}(x)` for integer orders.
pub struct Oracle {
    n_max: usize,
    cos_n: Vec<Vec<f64>>,
    sin_n: Vec<Vec<f64>>,
    sin_tau: Vec<f64>,
    weight: Vec<f64>,
}

impl Oracle {
    pub fn new(n_max: usize) -> Self {
        let tau: Vec<f64> = (0..=PANELS)
            .map(|j| PI * j as f64 / PANELS as f64)
            .collect();
        let weight = (0..=PANELS)
            .map(|j| if j == 0 || j == PANELS { 0.5 } else { 1.0 } / PANELS as f64)
            .collect();
        let cos_n = (0..=n_max)
            .map(|n| tau.iter().map(|t| (n as f64 * t).cos()).collect())
            .collect();
        let sin_n = (0..=n_max)
            .map(|n| tau.iter().map(|t| (n as f64 * t).sin()).collect())
            .collect();
        Oracle {
            n_max,
            cos_n,
            sin_n,
            sin_tau: tau.iter().map(|t| t.sin()).collect(),
            weight,
        }
    }

    pub fn all(&self, x: f64) -> Vec<f64> {
        if x <= SERIES_LIMIT {
            return (0..=self.n_max).map(|n| series(n, x)).collect();
        }
        let mut out = vec![0.0; self.n_max + 1];
        for j in 0..=PANELS {
            let (s, c) = (x * self.sin_tau[j]).sin_cos();
            let w = self.weight[j];
            for (n, acc) in out.iter_mut().enumerate() {
                // cos(nτ - x sinτ)
                *acc += w * (self.cos_n[n][j] * c + self.sin_n[n][j] * s);
            }
        }
        out
    }

    pub fn j(&self, n: usize, x: f64) -> f64 {
        assert!(n <= self.n_max);
        if x <= SERIES_LIMIT {
            series(n, x)
        } else {
            self.all(x)[n]
        }
    }

    /// `J'_n = (J_{n-1} - J_{n+1}) / 2`, with `J_{-1} = -J_1`.
    pub fn j_prime(&self, n: usize, x: f64) -> f64 {
        assert!(n < self.n_max);
        let v = self.all(x);
        let below = if n == 0 { -v[1] } else { v[n - 1] };
        0.5 * (below - v[n + 1])
    }
}

/// `Σ (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`.
pub fn series(n: usize, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = (1..=n).fold(1.0, |t, i| t * h / i as f64);
    let mut sum = term;
    for k in 1..200 {
        term *= -h * h / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Sign changes of `f` between consecutive samples `samples[i] = f(step·(i+1))`,
/// each refined by bisection on `f`.
pub fn scan_zeros(samples: &[f64], step: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut out = Vec::new();
    for (i, w) in samples.windows(2).enumerate() {
        let a = step * (i + 1) as f64;
        let b = step * (i + 2) as f64;
        let (fa, fb) = (w[0], w[1]);
        if fa == 0.0 {
            out.push(a);
        } else if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm * flo < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
    }
    out
}
