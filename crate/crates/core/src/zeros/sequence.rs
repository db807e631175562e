//! Lazily extended zero sequences.
//!
//! Zeroes of `J_ν` and `J'_ν` are found by a forward sign scan that starts
//! at a point below the first zero (`x = ν`, since `j'_{ν,1} > ν` and
//! `j_{ν,1} > ν`) and advances in steps shorter than the smallest distance
//! between consecutive zeroes, so that every step contains at most one zero.
//! The k-th sign change is therefore the k-th zero.
//!
//! Zeroes of `J_{ν-1} ± J_ν` are never scanned for: each is refined inside
//! a bracket built from the four neighbouring sequences (see
//! [`OrderPair::interlacing_bracket`]).

use crate::bessel::{eval_cross, eval_j, eval_j_prime, Order, Sign};
use crate::error::{Error, Result};

use super::refine::refine;
use super::{ZeroKind, ZeroRecord};

/// Scan step for `J_ν` and `J'_ν`. Consecutive zeroes of either function
/// are more than 2.9 apart for every `ν ≥ 0`.
const SCAN_STEP: f64 = 1.0;
const MAX_SCAN_STEPS: usize = 1_000_000;
/// Panels used when a interlacing bracket shows no sign change at its ends.
const FALLBACK_PANELS: usize = 64;

/// Positive zeroes of `J_ν` or `J'_ν`, computed on demand and kept.
#[derive(Debug, Clone)]
pub struct ZeroSequence {
    order: Order,
    kind: ZeroKind,
    tol: f64,
    records: Vec<ZeroRecord>,
    cursor: f64,
    f_cursor: f64,
}

impl ZeroSequence {
    /// `kind` must be [`ZeroKind::Bessel`] or [`ZeroKind::BesselPrime`].
    pub fn new(order: Order, kind: ZeroKind, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        let nu = order.value();
        let cursor = match kind {
            ZeroKind::Bessel => nu,
            // J'_0 = -J_1 < 0 on (0, j_{1,1})
            ZeroKind::BesselPrime if nu == 0.0 => 0.5,
            ZeroKind::BesselPrime => nu,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "ZeroSequence holds bessel or bessel_prime zeroes, not {kind}"
                )))
            }
        };
        let mut seq = ZeroSequence {
            order,
            kind,
            tol,
            records: Vec::new(),
            cursor,
            f_cursor: 0.0,
        };
        seq.f_cursor = seq.eval(cursor);
        Ok(seq)
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn kind(&self) -> ZeroKind {
        self.kind
    }

    fn eval(&self, x: f64) -> f64 {
        let nu = self.order.value();
        match self.kind {
            ZeroKind::Bessel => eval_j(nu, x).value,
            _ => eval_j_prime(nu, x).value,
        }
    }

    /// The k-th positive zero (1-based).
    pub fn nth(&mut self, k: usize) -> Result<&ZeroRecord> {
        if k == 0 {
            return Err(Error::InvalidArgument("zero index k is 1-based".into()));
        }
        while self.records.len() < k {
            self.scan_next()?;
        }
        Ok(&self.records[k - 1])
    }

    pub fn value(&mut self, k: usize) -> Result<f64> {
        Ok(self.nth(k)?.value)
    }

    /// The k-th zero with `x = 0` counted as the first zero of `J'_0`.
    ///
    /// The interlacing inequalities are stated in this indexing; for any
    /// other sequence it equals [`ZeroSequence::value`].
    pub fn value_with_origin(&mut self, k: usize) -> Result<f64> {
        if self.kind == ZeroKind::BesselPrime && self.order.value() == 0.0 {
            match k {
                0 => Err(Error::InvalidArgument("zero index k is 1-based".into())),
                1 => Ok(0.0),
                _ => self.value(k - 1),
            }
        } else {
            self.value(k)
        }
    }

    pub fn take(&mut self, count: usize) -> Result<Vec<ZeroRecord>> {
        if count > 0 {
            self.nth(count)?;
        }
        Ok(self.records[..count].to_vec())
    }

    /// All zeroes `≤ limit`.
    pub fn up_to(&mut self, limit: f64) -> Result<Vec<ZeroRecord>> {
        while self.records.last().is_none_or(|r| r.value <= limit) && self.cursor <= limit {
            self.scan_next()?;
        }
        Ok(self
            .records
            .iter()
            .filter(|r| r.value <= limit)
            .cloned()
            .collect())
    }

    fn scan_next(&mut self) -> Result<()> {
        let mut a = self.cursor;
        let mut fa = self.f_cursor;
        for _ in 0..MAX_SCAN_STEPS {
            let mut b = a + SCAN_STEP;
            let mut fb = self.eval(b);
            if fb == 0.0 {
                b += 1e-6 * SCAN_STEP;
                fb = self.eval(b);
            }
            if fa.signum() != fb.signum() && fa != 0.0 {
                let r = refine(|x| self.eval(x), a, b, fa, fb, self.tol)?;
                let k = self.records.len() + 1;
                self.records.push(ZeroRecord {
                    order: self.order,
                    kind: self.kind,
                    k,
                    value: r.value,
                    bracket_lo: r.lo,
                    bracket_hi: r.hi,
                    initial_bracket: (a, b),
                    tol: self.tol,
                });
                self.cursor = r.hi;
                self.f_cursor = self.eval(r.hi);
                if self.f_cursor.signum() == fa.signum() || self.f_cursor == 0.0 {
                    // the upper end of the refined bracket carries the new sign
                    self.f_cursor = fb.signum() * f64::MIN_POSITIVE;
                }
                return Ok(());
            }
            a = b;
            fa = fb;
        }
        Err(Error::ConvergenceFailure(format!(
            "no sign change of {} for order {} found after {MAX_SCAN_STEPS} scan steps",
            self.kind,
            self.order.value()
        )))
    }
}

/// The four sequences `j_{ν-1,k}`, `j'_{ν-1,k}`, `j_{ν,k}`, `j'_{ν,k}` and
/// the two cross-combination sequences they bracket, for one `ν ≥ 1`.
#[derive(Debug, Clone)]
pub struct OrderPair {
    nu: Order,
    tol: f64,
    lower_j: ZeroSequence,
    lower_jp: ZeroSequence,
    upper_j: ZeroSequence,
    upper_jp: ZeroSequence,
    minus: Vec<ZeroRecord>,
    plus: Vec<ZeroRecord>,
}

impl OrderPair {
    pub fn new(nu: Order, tol: f64) -> Result<Self> {
        nu.require_interlacing_range()?;
        check_tol(tol)?;
        let lower = Order::new(nu.value() - 1.0)?;
        Ok(OrderPair {
            nu,
            tol,
            lower_j: ZeroSequence::new(lower, ZeroKind::Bessel, tol)?,
            lower_jp: ZeroSequence::new(lower, ZeroKind::BesselPrime, tol)?,
            upper_j: ZeroSequence::new(nu, ZeroKind::Bessel, tol)?,
            upper_jp: ZeroSequence::new(nu, ZeroKind::BesselPrime, tol)?,
            minus: Vec::new(),
            plus: Vec::new(),
        })
    }

    pub fn nu(&self) -> Order {
        self.nu
    }

    /// `j_{ν-1,k}`.
    pub fn lower_zero(&mut self, k: usize) -> Result<f64> {
        self.lower_j.value(k)
    }

    /// `j'_{ν-1,k}`, with `j'_{0,1} = 0`.
    pub fn lower_prime_zero(&mut self, k: usize) -> Result<f64> {
        self.lower_jp.value_with_origin(k)
    }

    /// `j_{ν,k}`.
    pub fn upper_zero(&mut self, k: usize) -> Result<f64> {
        self.upper_j.value(k)
    }

    /// `j'_{ν,k}`.
    pub fn upper_prime_zero(&mut self, k: usize) -> Result<f64> {
        self.upper_jp.value(k)
    }

    /// Bracket for the k-th zero of `J_{ν-1} ∓ J_ν`, before refinement.
    ///
    /// * minus, `k = 1`: `(max(ν, j'_{ν-1,1}), min(j_{ν-1,1}, j'_{ν,1}))`
    /// * minus, `k ≥ 2`: `(max(j_{ν,k-1}, j'_{ν-1,k}), min(j_{ν-1,k}, j'_{ν,k}))`
    /// * plus, `k = 1`: `(max(j_{ν-1,1}, j'_{ν,1}), j_{ν,1})`
    /// * plus, `k ≥ 2`: `(max(j_{ν-1,k}, j'_{ν,k}), min(j_{ν,k}, j'_{ν-1,k+1}))`
    pub fn interlacing_bracket(&mut self, sign: Sign, k: usize) -> Result<(f64, f64)> {
        if k == 0 {
            return Err(Error::InvalidArgument("zero index k is 1-based".into()));
        }
        let nu = self.nu.value();
        Ok(match (sign, k) {
            (Sign::Minus, 1) => (
                nu.max(self.lower_prime_zero(1)?),
                self.lower_zero(1)?.min(self.upper_prime_zero(1)?),
            ),
            (Sign::Minus, k) => (
                self.upper_zero(k - 1)?.max(self.lower_prime_zero(k)?),
                self.lower_zero(k)?.min(self.upper_prime_zero(k)?),
            ),
            (Sign::Plus, 1) => (
                self.lower_zero(1)?.max(self.upper_prime_zero(1)?),
                self.upper_zero(1)?,
            ),
            (Sign::Plus, k) => (
                self.lower_zero(k)?.max(self.upper_prime_zero(k)?),
                self.upper_zero(k)?.min(self.lower_prime_zero(k + 1)?),
            ),
        })
    }

    /// Lower end of the k-th interlacing bracket; the k-th zero lies above it.
    pub fn lower_bound(&mut self, sign: Sign, k: usize) -> Result<f64> {
        Ok(self.interlacing_bracket(sign, k)?.0)
    }

    /// The k-th positive zero of `J_{ν-1} ∓ J_ν`.
    pub fn cross_zero(&mut self, sign: Sign, k: usize) -> Result<&ZeroRecord> {
        if k == 0 {
            return Err(Error::InvalidArgument("zero index k is 1-based".into()));
        }
        while self.found(sign).len() < k {
            let next = self.found(sign).len() + 1;
            let record = self.solve_cross(sign, next)?;
            match sign {
                Sign::Minus => self.minus.push(record),
                Sign::Plus => self.plus.push(record),
            }
        }
        Ok(&self.found(sign)[k - 1])
    }

    pub fn cross_value(&mut self, sign: Sign, k: usize) -> Result<f64> {
        Ok(self.cross_zero(sign, k)?.value)
    }

    pub fn cross_take(&mut self, sign: Sign, count: usize) -> Result<Vec<ZeroRecord>> {
        if count > 0 {
            self.cross_zero(sign, count)?;
        }
        Ok(self.found(sign)[..count].to_vec())
    }

    /// All zeroes of `J_{ν-1} ∓ J_ν` that are `≤ limit`.
    pub fn cross_up_to(&mut self, sign: Sign, limit: f64) -> Result<Vec<ZeroRecord>> {
        let mut k = 1;
        loop {
            if k > self.found(sign).len() && self.lower_bound(sign, k)? >= limit {
                break;
            }
            if self.cross_zero(sign, k)?.value > limit {
                break;
            }
            k += 1;
        }
        Ok(self
            .found(sign)
            .iter()
            .filter(|r| r.value <= limit)
            .cloned()
            .collect())
    }

    fn found(&self, sign: Sign) -> &[ZeroRecord] {
        match sign {
            Sign::Minus => &self.minus,
            Sign::Plus => &self.plus,
        }
    }

    fn solve_cross(&mut self, sign: Sign, k: usize) -> Result<ZeroRecord> {
        let (lo, hi) = self.interlacing_bracket(sign, k)?;
        let nu = self.nu.value();
        let f = |x: f64| eval_cross(nu, x, sign).value;
        if !(lo < hi) {
            return Err(Error::ConvergenceFailure(format!(
                "empty bracket ({lo}, {hi}) for zero {k} of J_(ν-1) {} J_ν, ν = {nu}",
                if sign == Sign::Minus { "-" } else { "+" }
            )));
        }
        let (mut a, mut b) = (lo, hi);
        let (mut fa, mut fb) = (f(a), f(b));
        if fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
            let panel = sign_change_panel(&f, lo, hi).ok_or_else(|| {
                Error::ConvergenceFailure(format!(
                    "no sign change of the {sign:?} combination inside ({lo}, {hi}), ν = {nu}, k = {k}"
                ))
            })?;
            (a, b, fa, fb) = panel;
        }
        let r = refine(f, a, b, fa, fb, self.tol)?;
        Ok(ZeroRecord {
            order: self.nu,
            kind: ZeroKind::from(sign),
            k,
            value: r.value,
            bracket_lo: r.lo,
            bracket_hi: r.hi,
            initial_bracket: (lo, hi),
            tol: self.tol,
        })
    }
}

fn sign_change_panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Option<(f64, f64, f64, f64)> {
    let h = (hi - lo) / FALLBACK_PANELS as f64;
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=FALLBACK_PANELS {
        let b = if i == FALLBACK_PANELS {
            hi
        } else {
            lo + h * i as f64
        };
        let fb = f(b);
        if fa != 0.0 && fb != 0.0 && fa.signum() != fb.signum() {
            return Some((a, b, fa, fb));
        }
        a = b;
        fa = fb;
    }
    None
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}
