//! Wiegold's bound `w(t) = t^m`, `m = ½(log_p t − 1)`, and the residual
//! bound `t^k`, `k = ½(log_p t + 1)`, where `p` is the least prime divisor
//! of `t`.
//!
//! When `t = pⁿ` both bounds are integers (`p^{n(n−1)/2}` and
//! `p^{n(n+1)/2}`) and are handled exactly. Otherwise they are irrational
//! and comparisons go through logarithms evaluated at 256 bits.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{least_prime_divisor, prime_power};

const PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

/// Relative width of the band in which a real comparison is reported as
/// marginal instead of decided.
pub const MARGINAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Wiegold,
    #[serde(rename = "theorem-b")]
    TheoremB,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exponent {
    /// `numerator / denominator`, in lowest terms.
    Rational {
        numerator: i64,
        denominator: i64,
    },
    Real(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundNumber {
    #[serde(serialize_with = "serialize_big")]
    Exact(BigUint),
    /// Rounded to `f64` for display; comparisons never use this.
    Real(f64),
}

fn serialize_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl BoundNumber {
    pub fn approx(&self) -> f64 {
        match self {
            BoundNumber::Exact(v) => v.to_f64().unwrap_or(f64::INFINITY),
            BoundNumber::Real(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BoundNumber::Exact(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub t: u64,
    /// Least prime divisor of `t`; absent for `t = 1`.
    pub p: Option<u64>,
    pub exponent: Exponent,
    pub value: BoundNumber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Holds,
    Marginal,
    Violated,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn rational(numerator: i64, denominator: i64) -> Exponent {
    let g = gcd(numerator, denominator).max(1);
    Exponent::Rational {
        numerator: numerator / g,
        denominator: denominator / g,
    }
}

/// Logarithms needed by both the bound value and the comparison.
struct Logs {
    ln_t: BigFloat,
    ln_p: BigFloat,
    cc: Consts,
}

impl Logs {
    fn new(t: u64, p: u64) -> Logs {
        let mut cc = Consts::new().expect("astro-float constant cache");
        let ln_t = BigFloat::from_word(t, PRECISION).ln(PRECISION, RM, &mut cc);
        let ln_p = BigFloat::from_word(p, PRECISION).ln(PRECISION, RM, &mut cc);
        Logs { ln_t, ln_p, cc }
    }

    /// `ln(bound) = ½(ln t / ln p ∓ 1)·ln t`, times `2 ln p` to stay free of
    /// division: `(ln t)² ∓ ln t·ln p`.
    fn scaled_log_bound(&self, kind: BoundKind) -> BigFloat {
        let sq = self.ln_t.mul(&self.ln_t, PRECISION, RM);
        let cross = self.ln_t.mul(&self.ln_p, PRECISION, RM);
        match kind {
            BoundKind::Wiegold => sq.sub(&cross, PRECISION, RM),
            BoundKind::TheoremB => sq.add(&cross, PRECISION, RM),
        }
    }

    fn exponent(&self, kind: BoundKind) -> BigFloat {
        let ratio = self.ln_t.div(&self.ln_p, PRECISION, RM);
        let one = BigFloat::from_word(1, PRECISION);
        let shifted = match kind {
            BoundKind::Wiegold => ratio.sub(&one, PRECISION, RM),
            BoundKind::TheoremB => ratio.add(&one, PRECISION, RM),
        };
        shifted.div(&BigFloat::from_word(2, PRECISION), PRECISION, RM)
    }

    fn approx_f64(&mut self, x: &BigFloat) -> f64 {
        x.format(Radix::Dec, RM, &mut self.cc)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(f64::NAN)
    }
}

fn bound(kind: BoundKind, t: u64) -> Result<BoundValue> {
    if t == 1 {
        return Ok(BoundValue {
            kind,
            t,
            p: None,
            exponent: rational(0, 1),
            value: BoundNumber::Exact(BigUint::from(1u32)),
        });
    }
    let p = least_prime_divisor(t)?;
    if let Some((p, n)) = prime_power(t) {
        let n = i64::from(n);
        let (num, pow) = match kind {
            BoundKind::Wiegold => (n - 1, n * (n - 1) / 2),
            BoundKind::TheoremB => (n + 1, n * (n + 1) / 2),
        };
        return Ok(BoundValue {
            kind,
            t,
            p: Some(p),
            exponent: rational(num, 2),
            value: BoundNumber::Exact(BigUint::from(p).pow(pow as u32)),
        });
    }
    let mut logs = Logs::new(t, p);
    let exponent = logs.exponent(kind);
    let ln_value = exponent.mul(&logs.ln_t, PRECISION, RM);
    let value = ln_value.exp(PRECISION, RM, &mut logs.cc);
    Ok(BoundValue {
        kind,
        t,
        p: Some(p),
        exponent: Exponent::Real(logs.approx_f64(&exponent)),
        value: BoundNumber::Real(logs.approx_f64(&value)),
    })
}

/// `w(t)` for `t >= 2`.
pub fn wiegold_bound(t: u64) -> Result<BoundValue> {
    if t < 2 {
        return Err(Error::input(format!(
            "Wiegold's bound needs t >= 2, got {t}"
        )));
    }
    bound(BoundKind::Wiegold, t)
}

/// `t^k` for `t >= 1`; `t = 1` gives 1.
pub fn theorem_b_bound(t: u64) -> Result<BoundValue> {
    if t == 0 {
        return Err(Error::input("the residual bound needs t >= 1"));
    }
    bound(BoundKind::TheoremB, t)
}

/// Decides `value <= bound`.
///
/// Exact bounds are compared as integers. Real bounds are compared through
/// `2·ln(value)·ln p` against `(ln t)² ± ln t·ln p`; a relative gap within
/// [`MARGINAL_TOLERANCE`] is reported as marginal.
pub fn compare_against_bound(value: u64, bound: &BoundValue) -> Comparison {
    match &bound.value {
        BoundNumber::Exact(b) => {
            if &BigUint::from(value) <= b {
                Comparison::Holds
            } else {
                Comparison::Violated
            }
        }
        BoundNumber::Real(_) => {
            let p = bound.p.expect("real bounds have t >= 2");
            let mut logs = Logs::new(bound.t, p);
            let rhs = logs.scaled_log_bound(bound.kind);
            let ln_v = BigFloat::from_word(value, PRECISION).ln(PRECISION, RM, &mut logs.cc);
            let lhs = ln_v.mul(&logs.ln_p, PRECISION, RM).mul(
                &BigFloat::from_word(2, PRECISION),
                PRECISION,
                RM,
            );
            decide(&lhs, &rhs)
        }
    }
}

/// `lhs <= rhs` with a relative marginal band.
fn decide(lhs: &BigFloat, rhs: &BigFloat) -> Comparison {
    let gap = rhs.sub(lhs, PRECISION, RM);
    let scale = lhs.abs().max(&rhs.abs());
    let band = scale.mul(
        &BigFloat::from_f64(MARGINAL_TOLERANCE, PRECISION),
        PRECISION,
        RM,
    );
    if gap.abs() <= band {
        Comparison::Marginal
    } else if gap.is_positive() {
        Comparison::Holds
    } else {
        Comparison::Violated
    }
}
