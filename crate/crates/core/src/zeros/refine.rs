//! Root refinement inside a sign-change bracket.
//!
//! Bisection first shrinks the bracket to a thousandth of its width, then
//! inverse quadratic interpolation takes over with bisection fallback. Every
//! evaluated point replaces one endpoint, so the bracket always holds a sign
//! change and shrinks to at most `2·tol`.

use crate::error::{Error, Result};

const MAX_ITER: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Refined {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

pub(crate) fn refine<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
    tol: f64,
) -> Result<Refined> {
    if !(lo < hi) || f_lo.signum() == f_hi.signum() || f_lo == 0.0 || f_hi == 0.0 {
        return Err(Error::ConvergenceFailure(format!(
            "no strict sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})"
        )));
    }
    let tol = tol.max(4.0 * f64::EPSILON * hi.abs());
    let coarse = (1e-3 * (hi - lo)).max(2.0 * tol);

    let mut iter = 0;
    let step = |f: &mut F,
                x: f64,
                lo: &mut f64,
                hi: &mut f64,
                f_lo: &mut f64,
                f_hi: &mut f64|
     -> Option<f64> {
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == f_lo.signum() {
            *lo = x;
            *f_lo = fx;
        } else {
            *hi = x;
            *f_hi = fx;
        }
        None
    };

    while hi - lo > coarse {
        iter += 1;
        let mid = 0.5 * (lo + hi);
        if let Some(x) = step(&mut f, mid, &mut lo, &mut hi, &mut f_lo, &mut f_hi) {
            return Ok(exact(&mut f, x, lo, hi, tol));
        }
    }

    // (x, f(x)) of the endpoint replaced most recently
    let mut prev: Option<(f64, f64)> = None;
    let mut widths = [f64::INFINITY; 2];
    while hi - lo > 2.0 * tol {
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::ConvergenceFailure(format!(
                "root refinement did not reach tol {tol} on [{lo}, {hi}]"
            )));
        }
        let width = hi - lo;
        let mid = 0.5 * (lo + hi);
        let candidate = if width > 0.5 * widths[0] {
            mid
        } else {
            interpolate(lo, f_lo, hi, f_hi, prev)
                .filter(|c| *c > lo && *c < hi)
                .unwrap_or(mid)
        };
        let x = candidate.clamp(lo + tol, hi - tol);
        let (old_lo, old_f_lo, old_hi, old_f_hi) = (lo, f_lo, hi, f_hi);
        if let Some(x) = step(&mut f, x, &mut lo, &mut hi, &mut f_lo, &mut f_hi) {
            return Ok(exact(&mut f, x, lo, hi, tol));
        }
        prev = Some(if lo != old_lo {
            (old_lo, old_f_lo)
        } else {
            (old_hi, old_f_hi)
        });
        widths = [widths[1], width];
    }

    let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    let value = if secant > lo && secant < hi {
        secant
    } else {
        0.5 * (lo + hi)
    };
    Ok(Refined { value, lo, hi })
}

/// Bracket around a point where `f` vanishes exactly, from probes at
/// `x ± d` with `d < tol` and strictly opposite signs.
fn exact<F: FnMut(f64) -> f64>(f: &mut F, x: f64, lo: f64, hi: f64, tol: f64) -> Refined {
    for d in [0.5 * tol, 0.9 * tol] {
        let (a, b) = ((x - d).max(lo), (x + d).min(hi));
        let (fa, fb) = (f(a), f(b));
        if fa != 0.0 && fb != 0.0 && fa.signum() != fb.signum() {
            return Refined {
                value: x,
                lo: a,
                hi: b,
            };
        }
    }
    Refined {
        value: x,
        lo: (x - 0.5 * tol).max(lo),
        hi: (x + 0.5 * tol).min(hi),
    }
}

fn interpolate(lo: f64, f_lo: f64, hi: f64, f_hi: f64, prev: Option<(f64, f64)>) -> Option<f64> {
    if let Some((c, f_c)) = prev {
        if f_c != f_lo && f_c != f_hi && f_lo != f_hi {
            // inverse quadratic through (lo, hi, c)
            let x = lo * f_hi * f_c / ((f_lo - f_hi) * (f_lo - f_c))
                + hi * f_lo * f_c / ((f_hi - f_lo) * (f_hi - f_c))
                + c * f_lo * f_hi / ((f_c - f_lo) * (f_c - f_hi));
            if x.is_finite() {
                return Some(x);
            }
        }
    }
    let x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    x.is_finite().then_some(x)
}
