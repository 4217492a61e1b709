//! Binary floating values `mantissa · 2^exponent` with unbounded mantissas and
//! directed rounding. These are the endpoints of [`Interval`](super::Interval).

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;

/// Rounding direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

/// `mant · 2^exp`, normalized so that `mant` is odd (or the value is zero with
/// `exp == 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// `m >> s` rounded toward −∞.
fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if m.sign() == BigSign::Minus {
        let mag = -m;
        let one = BigInt::one() << s;
        -((mag + one - 1u32) >> s)
    } else {
        m >> s
    }
}

fn shr_round(m: &BigInt, s: u64, dir: Round) -> BigInt {
    match dir {
        Round::Down => shr_floor(m, s),
        Round::Up => -shr_floor(&-m, s),
    }
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Dyadic {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Dyadic {
        Dyadic::from_int(1)
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn from_bigint(n: BigInt) -> Dyadic {
        Dyadic::new(n, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            BigSign::Minus => -1,
            BigSign::NoSign => 0,
            BigSign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Position of the most significant bit: `2^(msb-1) ≤ |x| < 2^msb`.
    /// Zero reports `i64::MIN`.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    /// Multiply by `2^e` exactly.
    pub fn shl(&self, e: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + e,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(shr_round(&self.mant, s, dir), self.exp + s as i64)
    }

    /// Round a rational to `prec` significant bits in the given direction.
    pub fn from_rational(r: &Rational, prec: u32, dir: Round) -> Dyadic {
        Dyadic::div_rounded(r.numer(), r.denom(), prec, dir)
    }

    /// `p / q` rounded to `prec` significant bits (q ≠ 0).
    pub fn div_rounded(p: &BigInt, q: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!q.is_zero(), "division by zero");
        if p.is_zero() {
            return Dyadic::zero();
        }
        let (p, q) = if q.is_negative() { (-p, -q) } else { (p.clone(), q.clone()) };
        // Scale so that the integer quotient carries at least prec+1 bits.
        let shift = prec as i64 + 2 + q.bits() as i64 - p.bits() as i64;
        let (num, den) = if shift >= 0 {
            (p << shift as u64, q)
        } else {
            (p, q << (-shift) as u64)
        };
        let (quot, rem) = num.div_mod_floor(&den);
        let quot = if rem.is_zero() || dir == Round::Down {
            quot
        } else {
            quot + 1
        };
        Dyadic::new(quot, -shift).round(prec, dir)
    }

    /// Quotient of two dyadics rounded to `prec` bits.
    pub fn div(&self, other: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        let p = &self.mant;
        let q = &other.mant;
        let d = Dyadic::div_rounded(p, q, prec, dir);
        d.shl(self.exp - other.exp)
    }

    /// Square root of a non-negative dyadic, rounded to `prec` bits.
    pub fn sqrt(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(self.signum() >= 0, "sqrt of a negative value");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Make the exponent even and the mantissa at least 2·prec+2 bits long.
        let mut extra = (2 * prec as i64 + 4 - self.mant.bits() as i64).max(0);
        if (self.exp - extra).rem_euclid(2) != 0 {
            extra += 1;
        }
        let m = &self.mant << extra as u64;
        let e = self.exp - extra;
        let s = m.sqrt();
        let s = if dir == Round::Up && &s * &s != m { s + 1 } else { s };
        Dyadic::new(s, e / 2).round(prec, dir)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as u64)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Nearest `f64`, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let keep = bits.min(60);
        let top = shr_floor(&self.mant, (bits - keep) as u64);
        let top: f64 = num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::NAN);
        let e = self.exp + bits - keep;
        top * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    /// Decimal string with `digits` significant digits rounded in `dir`.
    pub fn to_decimal(&self, digits: usize, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let a = r.abs();
        // Find e10 with 10^(e10) ≤ a < 10^(e10+1).
        let ten = Rational::from_integer(BigInt::from(10));
        let approx = (a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2;
        let mut e10 = approx.floor() as i64;
        let pow10 = |e: i64| -> Rational {
            if e >= 0 {
                num_traits::pow(ten.clone(), e as usize)
            } else {
                num_traits::pow(ten.clone(), (-e) as usize).recip()
            }
        };
        while pow10(e10) > a {
            e10 -= 1;
        }
        while pow10(e10 + 1) <= a {
            e10 += 1;
        }
        // scaled = a · 10^(digits-1-e10), rounded to an integer away from or
        // toward zero according to dir and the sign.
        let scaled = &a * pow10(digits as i64 - 1 - e10);
        let toward_inf = matches!((dir, neg), (Round::Up, false) | (Round::Down, true));
        let m = if toward_inf { scaled.ceil() } else { scaled.floor() }.to_integer();
        let mut s = m.to_string();
        let mut point = e10 + 1; // digits before the decimal point
        if s.len() > digits {
            // rounding carried into a new digit
            point += 1;
            s.truncate(digits);
        }
        let body = if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), s)
        } else if point as usize >= s.len() {
            format!("{}{}", s, "0".repeat(point as usize - s.len()))
        } else {
            format!("{}.{}", &s[..point as usize], &s[point as usize..])
        };
        let body = if body.contains('.') {
            body.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            body
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.signum(), other.signum());
        if a != b || a == 0 {
            return a.cmp(&b);
        }
        let by_magnitude = self
            .magnitude_bits()
            .cmp(&other.magnitude_bits())
            .then_with(|| {
                let e = self.exp.min(other.exp);
                let x = self.mant.abs() << (self.exp - e) as u64;
                let y = other.mant.abs() << (other.exp - e) as u64;
                x.cmp(&y)
            });
        if a > 0 {
            by_magnitude
        } else {
            by_magnitude.reverse()
        }
    }
}
