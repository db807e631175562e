//! Positive zeroes of `J_ν`, `J'_ν` and `J_{ν-1} ± J_ν`.
//!
//! Notation used throughout: `j_{ν,k}` and `j'_{ν,k}` are the k-th positive
//! zeroes of `J_ν` and `J'_ν`; `λ⁻_{ν-1,k}` and `λ⁺_{ν-1,k}` are the k-th
//! positive zeroes of `J_{ν-1} - J_ν` and `J_{ν-1} + J_ν`.
//!
//! For `ν ≥ 1` the cross-combination zeroes interlace with the Bessel and
//! derivative zeroes:
//!
//! ```text
//! ν < λ⁻_{ν-1,1} < j'_{ν,1},      j'_{ν-1,1} < λ⁻_{ν-1,1} < j_{ν-1,1}
//! j_{ν,k} < λ⁻_{ν-1,k+1} < j'_{ν,k+1} < λ⁺_{ν-1,k+1} < j_{ν,k+1}
//! j_{ν-1,k} < λ⁺_{ν-1,k} < j'_{ν-1,k+1} < λ⁻_{ν-1,k+1} < j_{ν-1,k+1}
//! ```
//!
//! which is what [`OrderPair::interlacing_bracket`] uses to place exactly one
//! sign change in each bracket. In these chains `j'_{0,1} = 0`.

mod interlace;
mod refine;
mod sequence;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bessel::{Order, Sign};
use crate::error::{Error, Result};

pub use interlace::{verify_interlacing, Check, InterlaceReport, Violation};
pub use sequence::{OrderPair, ZeroSequence};

/// Which function a zero belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    /// `J_ν`
    Bessel,
    /// `J'_ν`
    BesselPrime,
    /// `J_{ν-1} - J_ν`
    CrossMinus,
    /// `J_{ν-1} + J_ν`
    CrossPlus,
}

impl ZeroKind {
    pub const ALL: [ZeroKind; 4] = [
        ZeroKind::Bessel,
        ZeroKind::BesselPrime,
        ZeroKind::CrossMinus,
        ZeroKind::CrossPlus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ZeroKind::Bessel => "bessel",
            ZeroKind::BesselPrime => "bessel-prime",
            ZeroKind::CrossMinus => "cross-minus",
            ZeroKind::CrossPlus => "cross-plus",
        }
    }
}

impl From<Sign> for ZeroKind {
    fn from(sign: Sign) -> Self {
        match sign {
            Sign::Minus => ZeroKind::CrossMinus,
            Sign::Plus => ZeroKind::CrossPlus,
        }
    }
}

impl fmt::Display for ZeroKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ZeroKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "bessel" => Ok(ZeroKind::Bessel),
            "bessel-prime" => Ok(ZeroKind::BesselPrime),
            "cross-minus" => Ok(ZeroKind::CrossMinus),
            "cross-plus" => Ok(ZeroKind::CrossPlus),
            other => Err(Error::InvalidArgument(format!(
                "unknown zero kind '{other}'"
            ))),
        }
    }
}

/// One computed positive zero.
///
/// `bracket_lo < value < bracket_hi` with the target function of opposite
/// signs at the two ends and `bracket_hi - bracket_lo ≤ 2·tol`.
/// `initial_bracket` is the certified bracket refinement started from: the
/// scan step for `J_ν`/`J'_ν`, the interlacing bracket for the
/// cross-combinations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub order: Order,
    pub kind: ZeroKind,
    pub k: usize,
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub initial_bracket: (f64, f64),
    pub tol: f64,
}

/// `j_{ν,1..=count}`.
pub fn bessel_zeros(order: Order, count: usize, tol: f64) -> Result<Vec<ZeroRecord>> {
    check_count(count)?;
    ZeroSequence::new(order, ZeroKind::Bessel, tol)?.take(count)
}

/// `j'_{ν,1..=count}`, positive zeroes only (for `ν = 0` the first is
/// `j_{1,1}`).
pub fn bessel_prime_zeros(order: Order, count: usize, tol: f64) -> Result<Vec<ZeroRecord>> {
    check_count(count)?;
    ZeroSequence::new(order, ZeroKind::BesselPrime, tol)?.take(count)
}

/// `λ^sign_{ν-1,1..=count}` for `ν ≥ 1`.
pub fn cross_zeros(order: Order, sign: Sign, count: usize, tol: f64) -> Result<Vec<ZeroRecord>> {
    check_count(count)?;
    OrderPair::new(order, tol)?.cross_take(sign, count)
}

/// Dispatch on [`ZeroKind`].
pub fn zeros_of_kind(
    order: Order,
    kind: ZeroKind,
    count: usize,
    tol: f64,
) -> Result<Vec<ZeroRecord>> {
    match kind {
        ZeroKind::Bessel => bessel_zeros(order, count, tol),
        ZeroKind::BesselPrime => bessel_prime_zeros(order, count, tol),
        ZeroKind::CrossMinus => cross_zeros(order, Sign::Minus, count, tol),
        ZeroKind::CrossPlus => cross_zeros(order, Sign::Plus, count, tol),
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::{eval_cross, eval_j, eval_j_prime};

    fn order(nu: f64) -> Order {
        Order::new(nu).unwrap()
    }

    #[test]
    fn first_zeros_of_j0_and_j1() {
        let z = bessel_zeros(order(0.0), 1, 1e-12).unwrap();
        assert!((z[0].value - 2.4048256).abs() < 1e-6);
        let z = bessel_zeros(order(1.0), 1, 1e-12).unwrap();
        assert!((z[0].value - 3.8317060).abs() < 1e-6);
    }

    #[test]
    fn zeros_of_j5_increase_above_order() {
        let z = bessel_zeros(order(5.0), 3, 1e-10).unwrap();
        assert!(z.windows(2).all(|w| w[0].value < w[1].value));
        assert!(z.iter().all(|r| r.value > 5.0));
    }

    #[test]
    fn derivative_zeros() {
        let z = bessel_prime_zeros(order(1.0), 1, 1e-12).unwrap();
        assert!((z[0].value - 1.8411838).abs() < 1e-6);
        let z = bessel_prime_zeros(order(0.0), 1, 1e-12).unwrap();
        assert!((z[0].value - 3.8317060).abs() < 1e-6);
        let z = bessel_prime_zeros(order(2.0), 2, 1e-10).unwrap();
        assert!(z[0].value > 2.0 && z[0].value < z[1].value);
    }

    #[test]
    fn first_cross_zeros_of_order_one() {
        let m = cross_zeros(order(1.0), Sign::Minus, 2, 1e-12).unwrap();
        assert!((m[0].value - 1.435).abs() < 1e-3);
        let (lo, hi) = m[0].initial_bracket;
        assert_eq!(lo, 1.0);
        assert!((hi - 1.8411838).abs() < 1e-6);

        // second zero: in (j_{1,1}, j'_{1,2}) and in (j'_{0,2}, j_{0,2})
        let j11 = bessel_zeros(order(1.0), 1, 1e-12).unwrap()[0].value;
        let jp12 = bessel_prime_zeros(order(1.0), 2, 1e-12).unwrap()[1].value;
        let j02 = bessel_zeros(order(0.0), 2, 1e-12).unwrap()[1].value;
        let v = m[1].value;
        assert!(j11 < v && v < jp12);
        assert!(j11 < v && v < j02); // j'_{0,2} = j_{1,1}

        let p = cross_zeros(order(1.0), Sign::Plus, 1, 1e-12).unwrap();
        assert!((p[0].value - 3.11).abs() < 1e-2);
        assert!(1.841 < p[0].value && p[0].value < 3.832);
    }

    #[test]
    fn records_satisfy_bracket_invariants() {
        for kind in ZeroKind::ALL {
            for r in zeros_of_kind(order(2.5), kind, 8, 1e-10).unwrap() {
                assert!(r.bracket_lo < r.value && r.value < r.bracket_hi, "{r:?}");
                assert!(r.bracket_hi - r.bracket_lo <= 2.0 * r.tol);
                assert!(r.value > 2.5 - 1.0);
                let f = |x: f64| match kind {
                    ZeroKind::Bessel => eval_j(2.5, x).value,
                    ZeroKind::BesselPrime => eval_j_prime(2.5, x).value,
                    ZeroKind::CrossMinus => eval_cross(2.5, x, Sign::Minus).value,
                    ZeroKind::CrossPlus => eval_cross(2.5, x, Sign::Plus).value,
                };
                assert!(f(r.bracket_lo) * f(r.bracket_hi) < 0.0, "{r:?}");
            }
        }
        let m = cross_zeros(order(2.5), Sign::Minus, 1, 1e-10).unwrap();
        assert!(m[0].value > 2.5);
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(cross_zeros(order(0.5), Sign::Minus, 1, 1e-10).is_err());
        assert!(bessel_zeros(order(1.0), 0, 1e-10).is_err());
        assert!(bessel_zeros(order(1.0), 1, 0.0).is_err());
        assert!("cross-sideways".parse::<ZeroKind>().is_err());
        assert_eq!(
            "cross_minus".parse::<ZeroKind>().unwrap(),
            ZeroKind::CrossMinus
        );
    }

    #[test]
    fn interlacing_brackets_hold_one_sign_change() {
        for &nu in &[1.0, 1.5, 4.0, 12.0] {
            let mut pair = OrderPair::new(order(nu), 1e-10).unwrap();
            for sign in [Sign::Minus, Sign::Plus] {
                for k in 1..=10 {
                    let (lo, hi) = pair.interlacing_bracket(sign, k).unwrap();
                    let n = 1000;
                    let h = (hi - lo) / n as f64;
                    let changes = (0..n)
                        .filter(|&i| {
                            let a = eval_cross(nu, lo + h * i as f64, sign).value;
                            let b = eval_cross(nu, lo + h * (i + 1) as f64, sign).value;
                            a.signum() != b.signum()
                        })
                        .count();
                    assert_eq!(changes, 1, "nu={nu} {sign:?} k={k}");
                }
            }
        }
    }

    #[test]
    fn up_to_stops_at_limit() {
        let mut pair = OrderPair::new(order(3.0), 1e-10).unwrap();
        let m = pair.cross_up_to(Sign::Minus, 20.0).unwrap();
        assert!(!m.is_empty() && m.iter().all(|r| r.value <= 20.0));
        let next = pair.cross_value(Sign::Minus, m.len() + 1).unwrap();
        assert!(next > 20.0);
        assert!(pair.cross_up_to(Sign::Plus, 3.0).unwrap().is_empty());
    }
}
