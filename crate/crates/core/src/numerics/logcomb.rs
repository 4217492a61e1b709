//! Formal sums `Σ eᵢ·ln(bᵢ)` with rational exponents and positive rational
//! bases, and their exact sign.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::elementary::ln_rational;
use super::expr::{sign_adaptive, Expr};
use super::interval::Interval;
use super::rational::{format_rational, pow_exact, Rational, Sign};
use crate::config::Config;
use crate::error::{Error, Result};

/// `Σ exponent·ln(base)`; terms with equal bases are merged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogCombination {
    terms: BTreeMap<Rational, Rational>,
}

impl LogCombination {
    pub fn new() -> LogCombination {
        LogCombination::default()
    }

    /// Build from `(base, exponent)` pairs. Bases must be positive.
    pub fn from_terms<I>(terms: I) -> Result<LogCombination>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut c = LogCombination::new();
        for (b, e) in terms {
            c.push(b, e)?;
        }
        Ok(c)
    }

    /// `ln(base)`.
    pub fn ln(base: Rational) -> Result<LogCombination> {
        LogCombination::from_terms([(base, Rational::one())])
    }

    pub fn push(&mut self, base: Rational, exponent: Rational) -> Result<()> {
        if !base.is_positive() {
            return Err(Error::domain(format!(
                "log-combination base must be positive, got {}",
                format_rational(&base)
            )));
        }
        if base.is_one() || exponent.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(base).or_insert_with(Rational::zero);
        *slot += exponent;
        if slot.is_zero() {
            self.terms.retain(|_, e| !e.is_zero());
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LogCombination) -> LogCombination {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &LogCombination) -> LogCombination {
        self.add_scaled(other, &-Rational::one())
    }

    /// `self + factor·other`.
    pub fn add_scaled(&self, other: &LogCombination, factor: &Rational) -> LogCombination {
        let mut out = self.clone();
        for (b, e) in &other.terms {
            out.push(b.clone(), e * factor).expect("bases already positive");
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> LogCombination {
        if factor.is_zero() {
            return LogCombination::new();
        }
        LogCombination {
            terms: self
                .terms
                .iter()
                .map(|(b, e)| (b.clone(), e * factor))
                .collect(),
        }
    }

    /// Rewrite over integer bases: `ln(p/q) = ln p − ln q`.
    fn integer_exponents(&self) -> BTreeMap<BigUint, Rational> {
        let mut map: BTreeMap<BigUint, Rational> = BTreeMap::new();
        for (b, e) in &self.terms {
            let p = b.numer().magnitude().clone();
            let q = b.denom().magnitude().clone();
            if !p.is_one() {
                *map.entry(p).or_insert_with(Rational::zero) += e;
            }
            if !q.is_one() {
                *map.entry(q).or_insert_with(Rational::zero) -= e;
            }
        }
        map.retain(|_, e| !e.is_zero());
        map
    }

    /// If the value is `ln` of a rational (all integer exponents after
    /// factoring bases), return that rational.
    pub fn exp_rational(&self) -> Option<Rational> {
        let map = self.integer_exponents();
        let l = map
            .values()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (m, e) in map {
            let k = (e * Rational::from_integer(l.clone())).to_integer();
            let p = num_traits::pow(m, k.magnitude().to_usize()?);
            if k.is_positive() {
                num *= p;
            } else {
                den *= p;
            }
        }
        let q = Rational::new(BigInt::from(num), BigInt::from(den));
        pow_exact(&q, &Rational::new(BigInt::one(), l))
    }

    /// Enclosure of the value.
    pub fn enclose(&self, bits: u32) -> Result<Interval> {
        let wp = bits + 8 + (usize::BITS - self.terms.len().leading_zeros());
        let mut acc = Interval::from_int(0, wp);
        for (b, e) in &self.terms {
            acc = acc.add(&ln_rational(b, wp)?.mul_rational(e));
        }
        Ok(acc.with_bits(bits))
    }

    pub fn to_expr(&self) -> Expr {
        Expr::sum(
            self.terms
                .iter()
                .map(|(b, e)| Expr::rat(e.clone()) * Expr::ln(Expr::rat(b.clone()))),
        )
    }
}

impl Serialize for LogCombination {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (b, e) in &self.terms {
            seq.serialize_element(&[format_rational(b), format_rational(e)])?;
        }
        seq.end()
    }
}

/// Exact sign of `Σ eᵢ ln bᵢ`.
///
/// A cheap magnitude bound (interval enclosure at modest precision) settles
/// almost every case. Otherwise exponents are cleared to integers and the
/// products `∏_{e>0} b^e` and `∏_{e<0} b^{−e}` are compared as integers, first
/// by bit length and then in full. Never returns [`Sign::Undecided`].
pub fn sign_of_log_combination(c: &LogCombination) -> Result<Sign> {
    if c.is_empty() {
        return Ok(Sign::Zero);
    }
    for bits in [96, 512] {
        let s = c.enclose(bits)?.sign();
        if s.is_decided() {
            return Ok(s);
        }
    }
    Ok(sign_by_integer_products(c))
}

/// The pure integer route of [`sign_of_log_combination`], without the
/// interval shortcut.
pub fn sign_by_integer_products(c: &LogCombination) -> Sign {
    let map = c.integer_exponents();
    if map.is_empty() {
        return Sign::Zero;
    }
    // Clear denominators, then divide out the common content.
    let l = map
        .values()
        .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let ints: Vec<(BigUint, BigInt)> = map
        .into_iter()
        .map(|(m, e)| (m, (e * Rational::from_integer(l.clone())).to_integer()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, (_, k)| acc.gcd(k));
    let mut pos: Vec<(BigUint, BigUint)> = Vec::new();
    let mut neg: Vec<(BigUint, BigUint)> = Vec::new();
    for (m, k) in ints {
        let k = k / &g;
        if k.is_positive() {
            pos.push((m, k.magnitude().clone()));
        } else {
            neg.push((m, k.magnitude().clone()));
        }
    }

    // 2^{Σk(bits(m)−1)} ≤ ∏ m^k ≤ 2^{Σk·bits(m)}
    let bounds = |side: &[(BigUint, BigUint)]| -> (BigUint, BigUint) {
        let mut lo = BigUint::zero();
        let mut hi = BigUint::zero();
        for (m, k) in side {
            let b = BigUint::from(m.bits());
            lo += k * (&b - 1u32);
            hi += k * b;
        }
        (lo, hi)
    };
    let (plo, phi) = bounds(&pos);
    let (nlo, nhi) = bounds(&neg);
    if plo > nhi {
        return Sign::Positive;
    }
    if nlo > phi {
        return Sign::Negative;
    }
    let product = |side: &[(BigUint, BigUint)]| -> BigUint {
        side.iter().fold(BigUint::one(), |acc, (m, k)| {
            let k = k.to_usize().expect("exponent fits in memory");
            acc * num_traits::pow(m.clone(), k)
        })
    };
    match product(&pos).cmp(&product(&neg)) {
        std::cmp::Ordering::Greater => Sign::Positive,
        std::cmp::Ordering::Less => Sign::Negative,
        std::cmp::Ordering::Equal => Sign::Zero,
    }
}

/// `constant + Σ eᵢ ln bᵢ`: the exact logarithm of a sequence value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogValue {
    pub constant: Rational,
    pub logs: LogCombination,
}

impl LogValue {
    pub fn zero() -> LogValue {
        LogValue::default()
    }

    pub fn from_logs(logs: LogCombination) -> LogValue {
        LogValue {
            constant: Rational::zero(),
            logs,
        }
    }

    pub fn from_constant(c: Rational) -> LogValue {
        LogValue {
            constant: c,
            logs: LogCombination::new(),
        }
    }

    /// `ln r` for a positive rational.
    pub fn ln_of(r: Rational) -> Result<LogValue> {
        Ok(LogValue::from_logs(LogCombination::ln(r)?))
    }

    pub fn add_scaled(&self, other: &LogValue, factor: &Rational) -> LogValue {
        LogValue {
            constant: &self.constant + &other.constant * factor,
            logs: self.logs.add_scaled(&other.logs, factor),
        }
    }

    pub fn add(&self, other: &LogValue) -> LogValue {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &LogValue) -> LogValue {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn scale(&self, factor: &Rational) -> LogValue {
        LogValue {
            constant: &self.constant * factor,
            logs: self.logs.scale(factor),
        }
    }

    /// `e^self` when it is rational.
    pub fn exp_rational(&self) -> Option<Rational> {
        if !self.constant.is_zero() {
            return None;
        }
        self.logs.exp_rational()
    }

    pub fn to_expr(&self) -> Expr {
        if self.logs.is_empty() {
            return Expr::rat(self.constant.clone());
        }
        if self.constant.is_zero() {
            return self.logs.to_expr();
        }
        Expr::rat(self.constant.clone()) + self.logs.to_expr()
    }

    pub fn enclose(&self, bits: u32) -> Result<Interval> {
        Ok(self
            .logs
            .enclose(bits)?
            .add(&Interval::from_rational(&self.constant, bits)))
    }

    /// Sign of the value. Exact unless both a nonzero constant and
    /// logarithms are present, in which case adaptive intervals are used.
    pub fn sign(&self, cfg: &Config) -> Result<Sign> {
        if self.logs.is_empty() {
            return Ok(Sign::of_rational(&self.constant));
        }
        if self.constant.is_zero() {
            return sign_of_log_combination(&self.logs);
        }
        sign_adaptive(&self.to_expr(), cfg.start_bits, cfg.max_bits)
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LogValue", 2)?;
        st.serialize_field("constant", &format_rational(&self.constant))?;
        st.serialize_field("logs", &self.logs)?;
        st.end()
    }
}
