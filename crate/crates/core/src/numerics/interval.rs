use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::dyadic::{Dyadic, Round};
use super::rational::{Rational, Sign};
use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` with dyadic endpoints rounded outward to
/// `bits` significant bits.
///
/// Every operation returns an enclosure of all results obtainable from
/// points of its operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    bits: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, bits: u32) -> Interval {
        debug_assert!(lo <= hi, "inverted interval");
        Interval {
            lo: lo.round(bits, Round::Down),
            hi: hi.round(bits, Round::Up),
            bits,
        }
    }

    pub fn point(d: Dyadic, bits: u32) -> Interval {
        Interval::new(d.clone(), d, bits)
    }

    pub fn from_int(n: i64, bits: u32) -> Interval {
        Interval::point(Dyadic::from_int(n), bits)
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Interval {
        Interval {
            lo: Dyadic::from_rational(r, bits, Round::Down),
            hi: Dyadic::from_rational(r, bits, Round::Up),
            bits,
        }
    }

    /// `[-r, r]` for a non-negative dyadic radius.
    pub fn symmetric(r: &Dyadic, bits: u32) -> Interval {
        Interval::new(r.abs().neg(), r.abs(), bits)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn with_bits(&self, bits: u32) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone(), bits)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_rational(&self, r: &Rational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn sign(&self) -> Sign {
        if self.lo.signum() > 0 {
            Sign::Positive
        } else if self.hi.signum() < 0 {
            Sign::Negative
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Sign::Zero
        } else {
            Sign::Undecided
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    fn prec(&self, other: &Interval) -> u32 {
        self.bits.max(other.bits)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.add(&other.lo),
            self.hi.add(&other.hi),
            self.prec(other),
        )
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.sub(&other.hi),
            self.hi.sub(&other.lo),
            self.prec(other),
        )
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let bits = self.prec(other);
        if self.lo.signum() >= 0 && other.lo.signum() >= 0 {
            return Interval::new(self.lo.mul(&other.lo), self.hi.mul(&other.hi), bits);
        }
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Interval::new(lo, hi, bits)
    }

    pub fn mul_rational(&self, r: &Rational) -> Interval {
        self.mul(&Interval::from_rational(r, self.bits))
    }

    pub fn square(&self) -> Interval {
        if self.contains_zero() {
            let m = self.lo.abs().max(self.hi.abs());
            Interval::new(Dyadic::zero(), m.mul(&m), self.bits)
        } else {
            let a = self.lo.mul(&self.lo);
            let b = self.hi.mul(&self.hi);
            Interval::new(a.clone().min(b.clone()), a.max(b), self.bits)
        }
    }

    pub fn recip(&self) -> Result<Interval> {
        if self.contains_zero() {
            return Err(Error::Precision("reciprocal of an interval containing 0".into()));
        }
        let one = Dyadic::one();
        Ok(Interval {
            lo: one.div(&self.hi, self.bits, Round::Down),
            hi: one.div(&self.lo, self.bits, Round::Up),
            bits: self.bits,
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        let bits = self.prec(other);
        if other.contains_zero() {
            return Err(Error::Precision("division by an interval containing 0".into()));
        }
        let q = |a: &Dyadic, b: &Dyadic, dir| a.div(b, bits, dir);
        let lo = [
            q(&self.lo, &other.lo, Round::Down),
            q(&self.lo, &other.hi, Round::Down),
            q(&self.hi, &other.lo, Round::Down),
            q(&self.hi, &other.hi, Round::Down),
        ]
        .into_iter()
        .min()
        .expect("nonempty");
        let hi = [
            q(&self.lo, &other.lo, Round::Up),
            q(&self.lo, &other.hi, Round::Up),
            q(&self.hi, &other.lo, Round::Up),
            q(&self.hi, &other.hi, Round::Up),
        ]
        .into_iter()
        .max()
        .expect("nonempty");
        Ok(Interval::new(lo, hi, bits))
    }

    pub fn div_int(&self, d: i64) -> Interval {
        assert!(d != 0, "division by zero");
        let q = Dyadic::from_int(d.abs());
        let out = Interval {
            lo: self.lo.div(&q, self.bits, Round::Down),
            hi: self.hi.div(&q, self.bits, Round::Up),
            bits: self.bits,
        };
        if d < 0 {
            out.neg()
        } else {
            out
        }
    }

    /// Integer power, exact endpoint arithmetic plus outward rounding.
    pub fn powi(&self, e: u64) -> Interval {
        let mut result = Interval::from_int(1, self.bits);
        let mut base = self.clone();
        let mut e = e;
        if e.is_multiple_of(2) && self.contains_zero() {
            // even power over a sign change: go through the square
            base = self.square();
            e /= 2;
        }
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Convex hull.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec(other),
        )
    }

    /// Widen by `±r`.
    pub fn inflate(&self, r: &Dyadic) -> Interval {
        let r = r.abs();
        Interval::new(self.lo.sub(&r), self.hi.add(&r), self.bits)
    }

    /// Decimal digits that faithfully show `bits` binary digits.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    pub fn lo_decimal(&self) -> String {
        self.lo.to_decimal(self.decimal_digits(), Round::Down)
    }

    pub fn hi_decimal(&self) -> String {
        self.hi.to_decimal(self.decimal_digits(), Round::Up)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits = self.decimal_digits().min(24);
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(digits, Round::Down),
            self.hi.to_decimal(digits, Round::Up)
        )
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Interval", 3)?;
        st.serialize_field("lo", &self.lo_decimal())?;
        st.serialize_field("hi", &self.hi_decimal())?;
        st.serialize_field("bits", &self.bits)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;

    #[test]
    fn arithmetic_encloses_rationals() {
        let a = rat(1, 3);
        let b = rat(-2, 7);
        let ia = Interval::from_rational(&a, 64);
        let ib = Interval::from_rational(&b, 64);
        assert!(ia.add(&ib).contains_rational(&(&a + &b)));
        assert!(ia.sub(&ib).contains_rational(&(&a - &b)));
        assert!(ia.mul(&ib).contains_rational(&(&a * &b)));
        assert!(ia.div(&ib).unwrap().contains_rational(&(&a / &b)));
        assert!(ib.square().contains_rational(&(&b * &b)));
        assert!(ib.powi(3).contains_rational(&(&b * &b * &b)));
        assert!(ib.recip().unwrap().contains_rational(&b.recip()));
    }

    #[test]
    fn sign_and_zero() {
        assert_eq!(Interval::from_int(0, 32).sign(), Sign::Zero);
        assert_eq!(Interval::from_rational(&rat(1, 3), 32).sign(), Sign::Positive);
        let straddle = Interval::from_rational(&rat(1, 3), 32).sub(&Interval::from_rational(&rat(1, 3), 32));
        assert_eq!(straddle.sign(), Sign::Undecided);
        assert!(straddle.recip().is_err());
    }

    #[test]
    fn serializes_decimal_strings() {
        let i = Interval::from_rational(&rat(1, 3), 32);
        let v = serde_json::to_value(&i).unwrap();
        assert_eq!(v["bits"], 32);
        assert!(v["lo"].as_str().unwrap().starts_with("0.33333"));
        assert!(v["hi"].as_str().unwrap().starts_with("0.33333"));
    }
}
