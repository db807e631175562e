//! Machine check of every interlacing statement for a set of orders.
//!
//! For each `ν` the sequences are enumerated once and every inequality is
//! tested with a strict margin `> 10·tol`. Counting statements ("exactly one
//! zero of A between consecutive zeroes of B, and vice versa") are checked
//! by counting enumerated zeroes per interval.
//!
//! Check identifiers, with `a = j_{ν-1}`, `a' = j'_{ν-1}`, `b = j_ν`,
//! `b' = j'_ν`, `L⁻ = λ⁻_{ν-1}`, `L⁺ = λ⁺_{ν-1}`:
//!
//! | id | statement |
//! |----|-----------|
//! | `minus1_above_order` | `ν < L⁻_1` |
//! | `minus_per_upper_gap`, `upper_per_minus_gap` | one `L⁻` per `(b_k, b_{k+1})`; one `b` per `(L⁻_k, L⁻_{k+1})` |
//! | `minus_per_lower_gap`, `lower_per_minus_gap` | same with `a` |
//! | `minus_outside_lower_upper` | no `L⁻` in `[a_k, b_k]` |
//! | `minus_single_below_lower1` | one `L⁻` in `(0, a_1)` |
//! | `minus1_lower_bracket` | `a'_1 < L⁻_1 < a_1` |
//! | `minus1_upper_bracket` | `ν < L⁻_1 < b'_1 < b_1` |
//! | `minus_lower_bracket` | `a_k < a'_{k+1} < L⁻_{k+1} < a_{k+1}` |
//! | `minus_upper_bracket` | `b_k < L⁻_{k+1} < b'_{k+1} < b_{k+1}` |
//! | `plus1_above_lower1` | `a_1 < L⁺_1` |
//! | `plus_per_upper_gap`, `upper_per_plus_gap`, `plus_per_lower_gap`, `lower_per_plus_gap` | counting as for `L⁻` |
//! | `plus_single_below_upper1` | one `L⁺` in `(0, b_1)` |
//! | `plus1_upper_bracket` | `b'_1 < L⁺_1 < b_1` |
//! | `plus_outside_upper_lower` | no `L⁺` in `[b_k, a_{k+1}]` |
//! | `plus_upper_bracket` | `b_k < b'_{k+1} < L⁺_{k+1} < b_{k+1}` |
//! | `plus_lower_bracket` | `a_{k+1} < L⁺_{k+1} < a'_{k+2} < a_{k+2}` |
//! | `minus_order_interlacing` | `λ⁻_{ν,k+1} < L⁻_{k+2} < λ⁻_{ν,k+2}` |
//! | `plus_order_interlacing` | `L⁺_{k+1} < λ⁺_{ν-2,k+2} < L⁺_{k+2}` (only `ν ≥ 2`) |
//! | `upper_chain` | `b_k < L⁻_{k+1} < b'_{k+1} < L⁺_{k+1} < b_{k+1}` |
//! | `minus_plus_alternation` | `L⁻_k < L⁺_k < L⁻_{k+1}` |
//! | `lower_chain` | `a_k < L⁺_k < a'_{k+1} < L⁻_{k+1} < a_{k+1}` |
//! | `derivative_order_interlacing` | `b'_{k+1} < a'_{k+2} < b'_{k+2}` |
//!
//! `a'` uses `j'_{0,1} = 0` when `ν = 1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bessel::{Order, Sign};
use crate::error::{Error, Result};

use super::sequence::{check_tol, OrderPair};

/// One evaluated statement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: &'static str,
    pub nu: f64,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs` for inequalities (must exceed `10·tol`); `None` for
    /// counting statements, where `lhs` is the count found and `rhs` the
    /// count expected.
    pub margin: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub id: &'static str,
    pub nu: f64,
    pub k: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InterlaceReport {
    pub checked_inequalities: usize,
    pub violations: Vec<Violation>,
    /// `max(10·tol - margin)` over the inequalities; negative when every
    /// inequality clears the strictness margin.
    pub max_margin_deficit: f64,
    pub tol: f64,
    #[serde(skip)]
    pub checks: Vec<Check>,
}

impl InterlaceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Margin of the first inequality with this id, order and index.
    pub fn margin(&self, id: &str, nu: f64, k: usize) -> Option<f64> {
        self.checks
            .iter()
            .find(|c| c.id == id && c.nu == nu && c.k == k)
            .and_then(|c| c.margin)
    }

    pub fn checks_with_id<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.id == id)
    }
}

/// Checks every interlacing statement for each `ν` in `nu_values` and every
/// `k ≤ k_max`.
pub fn verify_interlacing(nu_values: &[Order], k_max: usize, tol: f64) -> Result<InterlaceReport> {
    check_tol(tol)?;
    if k_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "k_max must be at least 2, got {k_max}"
        )));
    }
    for nu in nu_values {
        nu.require_interlacing_range()?;
    }

    let per_order: Vec<Vec<Check>> = nu_values
        .par_iter()
        .map(|&nu| checks_for_order(nu, k_max, tol))
        .collect();
    let checks: Vec<Check> = per_order.into_iter().flatten().collect();

    let violations = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| Violation {
            id: c.id,
            nu: c.nu,
            k: c.k,
            lhs: c.lhs,
            rhs: c.rhs,
        })
        .collect();
    let max_margin_deficit = checks
        .iter()
        .filter_map(|c| c.margin)
        .map(|m| 10.0 * tol - m)
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(InterlaceReport {
        checked_inequalities: checks.len(),
        violations,
        max_margin_deficit,
        tol,
        checks,
    })
}

fn checks_for_order(nu: Order, k_max: usize, tol: f64) -> Vec<Check> {
    let mut c = Collector {
        nu: nu.value(),
        tol,
        checks: Vec::new(),
    };
    if collect(&mut c, nu, k_max, tol).is_err() {
        // enumeration failures are reported as data
        c.checks.push(Check {
            id: "enumeration",
            nu: nu.value(),
            k: 0,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: None,
            passed: false,
        });
    }
    c.checks
}

struct Sequences {
    a: Vec<f64>,
    ap: Vec<f64>,
    b: Vec<f64>,
    bp: Vec<f64>,
    lm: Vec<f64>,
    lp: Vec<f64>,
}

fn values(n: usize, mut f: impl FnMut(usize) -> Result<f64>) -> Result<Vec<f64>> {
    (1..=n).map(&mut f).collect()
}

fn collect(c: &mut Collector, nu: Order, k_max: usize, tol: f64) -> Result<()> {
    let n = k_max + 3;
    let mut pair = OrderPair::new(nu, tol)?;
    let s = Sequences {
        a: values(n, |k| pair.lower_zero(k))?,
        ap: values(n, |k| pair.lower_prime_zero(k))?,
        b: values(n, |k| pair.upper_zero(k))?,
        bp: values(n, |k| pair.upper_prime_zero(k))?,
        lm: values(n, |k| pair.cross_value(Sign::Minus, k))?,
        lp: values(n, |k| pair.cross_value(Sign::Plus, k))?,
    };
    let mut above = OrderPair::new(nu.raised(), tol)?;
    let lm_above = values(n, |k| above.cross_value(Sign::Minus, k))?;
    let lp_below = match nu.lowered().filter(|o| o.value() >= 1.0) {
        Some(lower) => {
            let mut below = OrderPair::new(lower, tol)?;
            Some(values(n, |k| below.cross_value(Sign::Plus, k))?)
        }
        None => None,
    };

    let at = |v: &[f64], k: usize| v[k - 1];
    let nuv = nu.value();
    let Sequences {
        a,
        ap,
        b,
        bp,
        lm,
        lp,
    } = &s;

    c.chain("minus1_above_order", 1, &[nuv, at(lm, 1)]);
    c.count(
        "minus_single_below_lower1",
        1,
        count_between(lm, 0.0, at(a, 1)),
        1,
    );
    c.chain("minus1_lower_bracket", 1, &[at(ap, 1), at(lm, 1), at(a, 1)]);
    c.chain(
        "minus1_upper_bracket",
        1,
        &[nuv, at(lm, 1), at(bp, 1), at(b, 1)],
    );
    c.chain("plus1_above_lower1", 1, &[at(a, 1), at(lp, 1)]);
    c.count(
        "plus_single_below_upper1",
        1,
        count_between(lp, 0.0, at(b, 1)),
        1,
    );
    c.chain("plus1_upper_bracket", 1, &[at(bp, 1), at(lp, 1), at(b, 1)]);

    for k in 1..=k_max {
        c.count(
            "minus_per_upper_gap",
            k,
            count_between(lm, at(b, k), at(b, k + 1)),
            1,
        );
        c.count(
            "upper_per_minus_gap",
            k,
            count_between(b, at(lm, k), at(lm, k + 1)),
            1,
        );
        c.count(
            "minus_per_lower_gap",
            k,
            count_between(lm, at(a, k), at(a, k + 1)),
            1,
        );
        c.count(
            "lower_per_minus_gap",
            k,
            count_between(a, at(lm, k), at(lm, k + 1)),
            1,
        );
        c.forbidden("minus_outside_lower_upper", k, lm, at(a, k), at(b, k));
        c.chain(
            "minus_lower_bracket",
            k,
            &[at(a, k), at(ap, k + 1), at(lm, k + 1), at(a, k + 1)],
        );
        c.chain(
            "minus_upper_bracket",
            k,
            &[at(b, k), at(lm, k + 1), at(bp, k + 1), at(b, k + 1)],
        );

        c.count(
            "plus_per_upper_gap",
            k,
            count_between(lp, at(b, k), at(b, k + 1)),
            1,
        );
        c.count(
            "upper_per_plus_gap",
            k,
            count_between(b, at(lp, k), at(lp, k + 1)),
            1,
        );
        c.count(
            "plus_per_lower_gap",
            k,
            count_between(lp, at(a, k), at(a, k + 1)),
            1,
        );
        c.count(
            "lower_per_plus_gap",
            k,
            count_between(a, at(lp, k), at(lp, k + 1)),
            1,
        );
        c.forbidden("plus_outside_upper_lower", k, lp, at(b, k), at(a, k + 1));
        c.chain(
            "plus_upper_bracket",
            k,
            &[at(b, k), at(bp, k + 1), at(lp, k + 1), at(b, k + 1)],
        );
        c.chain(
            "plus_lower_bracket",
            k,
            &[at(a, k + 1), at(lp, k + 1), at(ap, k + 2), at(a, k + 2)],
        );

        c.chain(
            "minus_order_interlacing",
            k,
            &[at(&lm_above, k + 1), at(lm, k + 2), at(&lm_above, k + 2)],
        );
        if let Some(lp_below) = &lp_below {
            c.chain(
                "plus_order_interlacing",
                k,
                &[at(lp, k + 1), at(lp_below, k + 2), at(lp, k + 2)],
            );
        }
        c.chain(
            "upper_chain",
            k,
            &[
                at(b, k),
                at(lm, k + 1),
                at(bp, k + 1),
                at(lp, k + 1),
                at(b, k + 1),
            ],
        );
        c.chain(
            "minus_plus_alternation",
            k,
            &[at(lm, k), at(lp, k), at(lm, k + 1)],
        );
        c.chain(
            "lower_chain",
            k,
            &[
                at(a, k),
                at(lp, k),
                at(ap, k + 1),
                at(lm, k + 1),
                at(a, k + 1),
            ],
        );
        c.chain(
            "derivative_order_interlacing",
            k,
            &[at(bp, k + 1), at(ap, k + 2), at(bp, k + 2)],
        );
    }
    Ok(())
}

/// Number of entries of the sorted `zeros` strictly inside `(lo, hi)`.
fn count_between(zeros: &[f64], lo: f64, hi: f64) -> usize {
    let start = zeros.partition_point(|&z| z <= lo);
    let end = zeros.partition_point(|&z| z < hi);
    end.saturating_sub(start)
}

struct Collector {
    nu: f64,
    tol: f64,
    checks: Vec<Check>,
}

impl Collector {
    fn strict(&mut self, id: &'static str, k: usize, lhs: f64, rhs: f64) {
        let margin = rhs - lhs;
        self.checks.push(Check {
            id,
            nu: self.nu,
            k,
            lhs,
            rhs,
            margin: Some(margin),
            passed: margin > 10.0 * self.tol,
        });
    }

    fn chain(&mut self, id: &'static str, k: usize, values: &[f64]) {
        for w in values.windows(2) {
            self.strict(id, k, w[0], w[1]);
        }
    }

    fn count(&mut self, id: &'static str, k: usize, found: usize, expected: usize) {
        self.checks.push(Check {
            id,
            nu: self.nu,
            k,
            lhs: found as f64,
            rhs: expected as f64,
            margin: None,
            passed: found == expected,
        });
    }

    /// No entry of the sorted `zeros` in `[lo, hi]`: the nearest entry must
    /// clear the closed interval by the strictness margin.
    fn forbidden(&mut self, id: &'static str, k: usize, zeros: &[f64], lo: f64, hi: f64) {
        let p = zeros.partition_point(|&z| z < lo);
        if let Some(&inside) = zeros.get(p).filter(|&&z| z <= hi) {
            // witness inside the interval: report it against the nearer end
            let (l, r) = if inside - lo < hi - inside {
                (lo, inside)
            } else {
                (inside, hi)
            };
            self.strict(id, k, r, l);
            return;
        }
        if p > 0 {
            self.strict(id, k, zeros[p - 1], lo);
        }
        if let Some(&z) = zeros.get(p) {
            self.strict(id, k, hi, z);
        }
    }
}
