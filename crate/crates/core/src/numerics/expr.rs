//! Closed-form real expressions, evaluated exactly where possible and as
//! rigorous enclosures otherwise.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::elementary;
use super::interval::Interval;
use super::rational::{format_rational, int, pow_exact, Rational, Sign};
use super::special;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Rat(Rational),
    /// The Euler–Mascheroni constant.
    Euler,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    Pow(Box<Expr>, Rational),
    Gamma(Box<Expr>),
    Digamma(Box<Expr>),
}

impl Expr {
    pub fn rat(r: Rational) -> Expr {
        Expr::Rat(r)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Rat(int(n))
    }

    pub fn euler() -> Expr {
        Expr::Euler
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::Exp(Box::new(e))
    }

    pub fn ln(e: Expr) -> Expr {
        Expr::Ln(Box::new(e))
    }

    pub fn pow(e: Expr, p: Rational) -> Expr {
        Expr::Pow(Box::new(e), p)
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::pow(e, Rational::new(1.into(), 2.into()))
    }

    pub fn gamma(e: Expr) -> Expr {
        Expr::Gamma(Box::new(e))
    }

    pub fn digamma(e: Expr) -> Expr {
        Expr::Digamma(Box::new(e))
    }

    /// Left-folded sum; the empty sum is 0.
    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        items
            .into_iter()
            .reduce(|a, b| a + b)
            .unwrap_or_else(|| Expr::int(0))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Expr::Rat(r) => Some(r),
            _ => None,
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl std::ops::$tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rat(r) if r.is_integer() && !r.is_negative() => write!(f, "{}", format_rational(r)),
            Expr::Rat(r) => write!(f, "({})", format_rational(r)),
            Expr::Euler => write!(f, "euler_gamma"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Ln(a) => write!(f, "ln({a})"),
            Expr::Pow(a, p) => write!(f, "{a}^({})", format_rational(p)),
            Expr::Gamma(a) => write!(f, "Gamma({a})"),
            Expr::Digamma(a) => write!(f, "digamma({a})"),
        }
    }
}

/// Result of evaluating an [`Expr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Enclosed(Interval),
}

impl Value {
    pub fn interval(&self, bits: u32) -> Interval {
        match self {
            Value::Exact(r) => Interval::from_rational(r, bits),
            Value::Enclosed(i) => i.clone(),
        }
    }

    pub fn sign(&self) -> Sign {
        match self {
            Value::Exact(r) => Sign::of_rational(r),
            Value::Enclosed(i) => i.sign(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Enclosed(_) => None,
        }
    }
}

const EXACT_GAMMA_LIMIT: u64 = 2000;

/// Evaluate with interval operations at `bits` working precision, keeping
/// rational subresults exact.
pub fn eval(e: &Expr, bits: u32) -> Result<Value> {
    use Value::{Enclosed, Exact};
    Ok(match e {
        Expr::Rat(r) => Exact(r.clone()),
        Expr::Euler => Enclosed(special::euler_gamma(bits)),
        Expr::Add(a, b) => match (eval(a, bits)?, eval(b, bits)?) {
            (Exact(x), Exact(y)) => Exact(x + y),
            (x, y) => Enclosed(x.interval(bits).add(&y.interval(bits))),
        },
        Expr::Sub(a, b) if a == b => Exact(Rational::zero()),
        Expr::Sub(a, b) => match (eval(a, bits)?, eval(b, bits)?) {
            (Exact(x), Exact(y)) => Exact(x - y),
            (x, y) => Enclosed(x.interval(bits).sub(&y.interval(bits))),
        },
        Expr::Mul(a, b) => match (eval(a, bits)?, eval(b, bits)?) {
            (Exact(x), Exact(y)) => Exact(x * y),
            (Exact(z), _) | (_, Exact(z)) if z.is_zero() => Exact(z),
            (x, y) => Enclosed(x.interval(bits).mul(&y.interval(bits))),
        },
        Expr::Div(a, b) => match (eval(a, bits)?, eval(b, bits)?) {
            (_, Exact(y)) if y.is_zero() => return Err(Error::domain("division by zero")),
            (Exact(x), Exact(y)) => Exact(x / y),
            (Exact(z), _) if z.is_zero() => Exact(z),
            (x, y) => Enclosed(x.interval(bits).div(&y.interval(bits))?),
        },
        Expr::Neg(a) => match eval(a, bits)? {
            Exact(x) => Exact(-x),
            Enclosed(i) => Enclosed(i.neg()),
        },
        Expr::Exp(a) => match eval(a, bits)? {
            Exact(x) if x.is_zero() => Exact(Rational::one()),
            x => Enclosed(elementary::exp(&x.interval(bits), bits)),
        },
        Expr::Ln(a) => match eval(a, bits)? {
            Exact(x) if x.is_one() => Exact(Rational::zero()),
            Exact(x) => Enclosed(elementary::ln_rational(&x, bits)?),
            Enclosed(i) => Enclosed(elementary::ln(&i, bits)?),
        },
        Expr::Pow(a, p) => match eval(a, bits)? {
            Exact(x) => match pow_exact(&x, p) {
                Some(r) => Exact(r),
                None => Enclosed(elementary::pow(&Interval::from_rational(&x, bits), p, bits)?),
            },
            Enclosed(i) => Enclosed(elementary::pow(&i, p, bits)?),
        },
        Expr::Gamma(a) => match eval(a, bits)? {
            Exact(x) if x.is_integer() && x.is_positive() && x.to_integer().to_u64().is_some_and(|m| m <= EXACT_GAMMA_LIMIT) => {
                Exact(special::gamma_exact_integer(x.to_integer().to_u64().expect("checked")))
            }
            Exact(x) => Enclosed(special::gamma_rational(&x, bits)?),
            Enclosed(i) => Enclosed(special::gamma(&i, bits)?),
        },
        Expr::Digamma(a) => match eval(a, bits)? {
            Exact(x) => Enclosed(special::digamma_rational(&x, bits)?),
            Enclosed(i) => Enclosed(special::digamma(&i, bits)?),
        },
    })
}

/// Enclosure at `bits` working precision.
pub fn eval_interval(e: &Expr, bits: u32) -> Result<Interval> {
    Ok(eval(e, bits)?.interval(bits))
}

/// Sign with precision doubled from `start_bits` until decided or past
/// `max_bits`. Zero is reported only when the value is exactly zero.
pub fn sign_adaptive(e: &Expr, start_bits: u32, max_bits: u32) -> Result<Sign> {
    let (sign, _) = sign_adaptive_with_bits(e, start_bits, max_bits)?;
    Ok(sign)
}

/// Like [`sign_adaptive`], also returning the last precision tried.
pub fn sign_adaptive_with_bits(e: &Expr, start_bits: u32, max_bits: u32) -> Result<(Sign, u32)> {
    let mut bits = start_bits.max(16);
    let mut last = bits;
    while bits <= max_bits {
        last = bits;
        match eval(e, bits) {
            Ok(v) => {
                let s = v.sign();
                if s.is_decided() {
                    return Ok((s, bits));
                }
            }
            Err(Error::Precision(_)) => {}
            Err(err) => return Err(err),
        }
        bits = bits.saturating_mul(2);
    }
    Ok((Sign::Undecided, last))
}
