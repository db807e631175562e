//! Bessel functions of the first kind for real order `ν ≥ 0` and real `x ≥ 0`.
//!
//! Three evaluation regimes are used:
//!
//! * ascending power series when `x ≤ 4` or `x²/4 ≤ ν + 1`, where the terms
//!   decrease from the first one and the alternating sum loses no digits;
//! * the Hankel asymptotic expansion when `x > 40 + ν²/2`, accepted only if
//!   its smallest term drops below `1e-17`;
//! * otherwise Miller's backward recurrence from an order well above
//!   `max(ν, x)`, normalized with the Neumann sum
//!   `(x/2)^α = Σ_k (α+2k) Γ(α+k)/k! · J_{α+2k}(x)`, `α = ν - ⌊ν⌋`.
//!
//! The recurrence yields every order `α, α+1, …` in one pass, so pairs such
//! as `(J_ν, J_{ν+1})` come from a single run and are mutually consistent.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// Target absolute accuracy of a single evaluation.
pub const TOL_ABS: f64 = 1e-13;
/// Target relative accuracy of a single evaluation.
pub const TOL_REL: f64 = 1e-12;

const EPS: f64 = f64::EPSILON;
const RESCALE_AT: f64 = 1e250;

/// Order `ν` of a Bessel function: finite and non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Order(f64);

impl Order {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "order must be finite and non-negative, got {nu}"
            )));
        }
        Ok(Order(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ν - 1`, if still a valid order.
    pub fn lowered(self) -> Option<Order> {
        (self.0 >= 1.0).then_some(Order(self.0 - 1.0))
    }

    pub fn raised(self) -> Order {
        Order(self.0 + 1.0)
    }

    /// The interlacing brackets are only valid for `ν ≥ 1`.
    pub fn require_interlacing_range(self) -> Result<()> {
        if self.0 < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "order must satisfy ν ≥ 1 for J_(ν-1) ± J_ν, got {}",
                self.0
            )));
        }
        Ok(())
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        Order::new(nu)
    }
}

impl From<Order> for f64 {
    fn from(order: Order) -> f64 {
        order.0
    }
}

/// A function value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_error_bound: f64,
}

impl EvalResult {
    fn exact(value: f64) -> Self {
        EvalResult {
            value,
            abs_error_bound: 0.0,
        }
    }
}

/// Sign of the cross-combination `J_{ν-1} ± J_ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// `J_ν(x)` for `x ≥ 0`.
///
/// `J_0(0) = 1` and `J_ν(0) = 0` for `ν > 0` are returned exactly.
pub fn bessel_j(order: Order, x: f64) -> Result<EvalResult> {
    check_argument(x, true)?;
    Ok(eval_j(order.0, x))
}

/// `J'_ν(x)` for `x > 0`, computed as `(ν/x) J_ν(x) - J_{ν+1}(x)`.
pub fn bessel_j_prime(order: Order, x: f64) -> Result<EvalResult> {
    check_argument(x, false)?;
    Ok(eval_j_prime(order.0, x))
}

/// `J_{ν-1}(x) - J_ν(x)` (`Sign::Minus`) or `J_{ν-1}(x) + J_ν(x)`
/// (`Sign::Plus`), for `x > 0` and `ν ≥ 1`.
///
/// Always evaluated as the direct sum of the two Bessel values.
pub fn cross_combination(order: Order, x: f64, sign: Sign) -> Result<EvalResult> {
    check_argument(x, false)?;
    order.require_interlacing_range()?;
    Ok(eval_cross(order.0, x, sign))
}

fn check_argument(x: f64, allow_zero: bool) -> Result<()> {
    if !x.is_finite() || x < 0.0 || (!allow_zero && x == 0.0) {
        let need = if allow_zero { "x ≥ 0" } else { "x > 0" };
        return Err(Error::InvalidArgument(format!(
            "argument must be finite with {need}, got {x}"
        )));
    }
    Ok(())
}

pub(crate) fn eval_j(nu: f64, x: f64) -> EvalResult {
    if x == 0.0 {
        return EvalResult::exact(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if use_series(nu, x) {
        return series(nu, x);
    }
    if x > 40.0 + 0.5 * nu * nu {
        if let Some(r) = hankel(nu, x) {
            return r;
        }
    }
    miller(nu, x, 0)[0]
}

/// `(J_ν(x), J_{ν+1}(x))`.
pub(crate) fn eval_pair(nu: f64, x: f64) -> (EvalResult, EvalResult) {
    if x == 0.0 || use_series(nu, x) || x > 40.0 + 0.5 * (nu + 1.0) * (nu + 1.0) {
        return (eval_j(nu, x), eval_j(nu + 1.0, x));
    }
    let v = miller(nu, x, 1);
    (v[0], v[1])
}

pub(crate) fn eval_j_prime(nu: f64, x: f64) -> EvalResult {
    let (j0, j1) = eval_pair(nu, x);
    let ratio = nu / x;
    EvalResult {
        value: ratio * j0.value - j1.value,
        abs_error_bound: ratio * j0.abs_error_bound
            + j1.abs_error_bound
            + EPS * (ratio * j0.value.abs() + j1.value.abs()),
    }
}

pub(crate) fn eval_cross(nu: f64, x: f64, sign: Sign) -> EvalResult {
    let (lower, upper) = eval_pair(nu - 1.0, x);
    let value = lower.value + sign.factor() * upper.value;
    EvalResult {
        value,
        abs_error_bound: lower.abs_error_bound + upper.abs_error_bound + EPS * value.abs(),
    }
}

fn use_series(nu: f64, x: f64) -> bool {
    x <= 4.0 || 0.25 * x * x <= nu + 1.0
}

/// `(x/2)^ν / Γ(ν+1)`.
fn series_prefactor(nu: f64, half: f64) -> f64 {
    if nu < 100.0 {
        half.powf(nu) / gamma(nu + 1.0)
    } else {
        (nu * half.ln() - ln_gamma(nu + 1.0)).exp()
    }
}

fn series(nu: f64, x: f64) -> EvalResult {
    let half = 0.5 * x;
    let q = half * half;
    let lead = series_prefactor(nu, half);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    let mut abs_sum = 1.0_f64;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -q / (k * (k + nu));
        sum += term;
        abs_sum += term.abs();
        if term.abs() <= 0.5 * EPS * sum.abs() || k > 300.0 {
            break;
        }
    }
    let value = lead * sum;
    // Cancellation in the sum plus the relative error of the prefactor.
    let lead_rel = EPS * (8.0 + (nu * half.ln()).abs().max(ln_gamma(nu + 1.0).abs()));
    EvalResult {
        value,
        abs_error_bound: lead * abs_sum * 4.0 * EPS + value.abs() * lead_rel,
    }
}

fn hankel(nu: f64, x: f64) -> Option<EvalResult> {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0_f64;
    let mut q = 0.0_f64;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    let mut k = 0_u32;
    loop {
        k += 1;
        let odd = f64::from(2 * k - 1);
        term *= (mu - odd * odd) / (8.0 * f64::from(k) * x);
        let t = term.abs();
        if t > last {
            // divergent tail before reaching full precision
            return None;
        }
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        last = t;
        if t < 1e-17 {
            break;
        }
        if k > 200 {
            return None;
        }
    }
    let phase = x - (0.5 * nu + 0.25) * PI;
    let envelope = (2.0 / (PI * x)).sqrt();
    let value = envelope * (p * phase.cos() - q * phase.sin());
    Some(EvalResult {
        value,
        abs_error_bound: envelope * (last + 4.0 * EPS * (x + nu)),
    })
}

/// Miller backward recurrence. Returns `J_{ν+i}(x)` for `i = 0..=extra`.
fn miller(nu: f64, x: f64, extra: usize) -> Vec<EvalResult> {
    let base = nu.floor();
    let alpha = nu - base;
    let lowest = base as usize;
    let top = lowest + extra;
    let reach = (top as f64).max(x);
    let start = (reach + 30.0 + 4.0 * reach.sqrt()).ceil() as usize;

    // f[n] is proportional to J_{α+n}(x).
    let mut f = vec![0.0_f64; start + 2];
    f[start] = 1.0;
    for n in (1..=start).rev() {
        let next = 2.0 * (alpha + n as f64) / x * f[n] - f[n + 1];
        f[n - 1] = next;
        if next.abs() > RESCALE_AT {
            for v in &mut f[n - 1..] {
                *v /= RESCALE_AT;
            }
        }
    }

    // Neumann normalization; Γ(α+1) is factored out of every weight.
    let mut sum = f[0];
    let mut abs_sum = f[0].abs();
    let mut h = 1.0_f64;
    let mut k = 1_usize;
    while 2 * k <= start {
        if k > 1 {
            h *= (alpha + (k - 1) as f64) / k as f64;
        }
        let w = (alpha + 2.0 * k as f64) * h;
        sum += w * f[2 * k];
        abs_sum += (w * f[2 * k]).abs();
        k += 1;
    }
    let gamma_a = if alpha == 0.0 {
        1.0
    } else {
        gamma(alpha + 1.0)
    };
    let target = if alpha == 0.0 {
        1.0
    } else {
        (0.5 * x).powf(alpha)
    };
    let scale = target / (gamma_a * sum);
    let cond = (abs_sum / sum.abs()).max(1.0);
    let envelope = if x > nu {
        (2.0 / (PI * x)).sqrt().min(1.0)
    } else {
        0.0
    };

    (lowest..=top)
        .map(|n| {
            let value = f[n] * scale;
            let steps = (start - n) as f64;
            EvalResult {
                value,
                abs_error_bound: 8.0 * EPS * cond * (value.abs() * steps.sqrt() + envelope),
            }
        })
        .collect()
}
