use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-size rational, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Sign of a real quantity.
///
/// `Undecided` only comes out of interval evaluation; exact paths always
/// decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
    Undecided,
}

impl Sign {
    pub fn of_rational(r: &Rational) -> Sign {
        if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn is_decided(self) -> bool {
        self != Sign::Undecided
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Positive => Sign::Negative,
            s => s,
        }
    }

    /// True when the quantity is certainly ≤ 0.
    pub fn is_nonpositive(self) -> bool {
        matches!(self, Sign::Negative | Sign::Zero)
    }

    /// True when the quantity is certainly ≥ 0.
    pub fn is_nonnegative(self) -> bool {
        matches!(self, Sign::Positive | Sign::Zero)
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Sign::Negative => "negative",
            Sign::Zero => "zero",
            Sign::Positive => "positive",
            Sign::Undecided => "undecided",
        };
        f.write_str(s)
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"`; whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::domain(format!("not a rational number: {s:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::domain(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

/// Format as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter for rationals written as strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

static PASCAL: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();

/// `C(k, i)`, memoized in a shared Pascal triangle.
pub fn binomial(k: usize, i: usize) -> Result<BigInt> {
    if i > k {
        return Err(Error::domain(format!("binomial({k}, {i}) needs i ≤ k")));
    }
    let table = PASCAL.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]));
    {
        let rows = table.read().expect("pascal table poisoned");
        if let Some(row) = rows.get(k) {
            return Ok(row[i].clone());
        }
    }
    let mut rows = table.write().expect("pascal table poisoned");
    while rows.len() <= k {
        let prev = rows.last().expect("row 0 present");
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(BigInt::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigInt::one());
        rows.push(row);
    }
    Ok(rows[k][i].clone())
}

/// `(−1)^i C(k, i)` as a rational, the coefficient of `φ(n+i)` in `∇^k φ(n)`.
pub fn nabla_coefficient(k: usize, i: usize) -> Rational {
    let c = Rational::from_integer(binomial(k, i).expect("i ≤ k"));
    if i % 2 == 1 {
        -c
    } else {
        c
    }
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn harmonic(n: u64) -> Rational {
    (1..=n).fold(Rational::zero(), |acc, i| acc + rat(1, i as i64))
}

/// Integer power with a possibly negative exponent.
pub fn pow_int(base: &Rational, e: i64) -> Result<Rational> {
    if e < 0 && base.is_zero() {
        return Err(Error::domain("zero to a negative power"));
    }
    let mag = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    Ok(if e < 0 { mag.recip() } else { mag })
}

/// Exact `r^p` for rational `p`, when the result is rational.
pub fn pow_exact(base: &Rational, p: &Rational) -> Option<Rational> {
    if p.is_integer() {
        let e: i64 = p.to_integer().try_into().ok()?;
        return pow_int(base, e).ok();
    }
    if base.is_one() || base.is_zero() {
        return (p.is_positive() || base.is_one()).then(|| base.clone());
    }
    if base.is_negative() {
        return None;
    }
    // Perfect roots: (a/b)^(u/v) with a, b perfect v-th powers.
    let v: u32 = p.denom().try_into().ok()?;
    let root = |x: &BigInt| {
        let r = x.nth_root(v);
        (num_traits::pow(r.clone(), v as usize) == *x).then_some(r)
    };
    let r = Rational::new(root(base.numer())?, root(base.denom())?);
    let u: i64 = p.numer().try_into().ok()?;
    pow_int(&r, u).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(3, 1).unwrap(), BigInt::from(3));
        assert_eq!(binomial(9, 4).unwrap(), BigInt::from(126));
        for k in 0..20 {
            assert_eq!(binomial(k, 0).unwrap(), BigInt::one());
        }
        assert!(binomial(2, 3).is_err());
    }

    #[test]
    fn pascal_recurrence_up_to_64() {
        // Oracle: multiplicative formula, independent of the memoized table.
        let direct = |k: usize, i: usize| -> BigInt {
            (0..i).fold(BigInt::one(), |acc, j| acc * BigInt::from(k - j) / BigInt::from(j + 1))
        };
        for k in 0..64 {
            for i in 1..=k {
                let lhs = binomial(k + 1, i).unwrap();
                assert_eq!(lhs, binomial(k, i).unwrap() + binomial(k, i - 1).unwrap());
                assert_eq!(lhs, direct(k + 1, i));
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(3, 2)), "3/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(format_rational(&rat(-1, 12)), "-1/12");
    }

    #[test]
    fn harmonic_numbers() {
        assert_eq!(harmonic(2), rat(3, 2));
        assert_eq!(harmonic(4), rat(25, 12));
    }
}
