use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    eval_interval, format_rational, rat, sign_adaptive, Expr, Interval, LogValue, Rational,
    Sign,
};
use crate::numerics::rational::pow_exact;
use crate::config::Config;

/// Largest exponent denominator for which an exact rational value is
/// recovered from a logarithm.
const MAX_ROOT_DEGREE: i64 = 64;

/// One evaluated term of a positive sequence, kept in every exact form that
/// is available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    /// The value, when rational.
    pub rational: Option<Rational>,
    /// `ln` of the value, when expressible as a rational constant plus a
    /// rational log-combination.
    pub log: Option<LogValue>,
    /// Closed form, always present.
    pub expr: Expr,
}

impl Term {
    pub fn rational(r: Rational) -> Result<Term> {
        if !r.is_positive() {
            return Err(Error::domain(format!(
                "sequence term must be positive, got {}",
                format_rational(&r)
            )));
        }
        Ok(Term {
            log: Some(LogValue::ln_of(r.clone())?),
            expr: Expr::Rat(r.clone()),
            rational: Some(r),
        })
    }

    pub fn one() -> Term {
        Term::rational(Rational::one()).expect("1 > 0")
    }

    /// `√sq` for a positive rational square.
    pub fn from_square(sq: Rational) -> Result<Term> {
        Ok(Term::rational(sq)?.pow(&rat(1, 2)))
    }

    /// `e^lv`.
    pub fn from_log(lv: LogValue) -> Term {
        let small_roots = lv
            .logs
            .terms()
            .all(|(_, e)| e.denom() <= &BigInt::from(MAX_ROOT_DEGREE));
        let rational = if small_roots { lv.exp_rational() } else { None };
        let expr = match &rational {
            Some(r) => Expr::Rat(r.clone()),
            None => {
                let mut factors: Vec<Expr> = lv
                    .logs
                    .terms()
                    .map(|(b, e)| {
                        if e.is_one() {
                            Expr::Rat(b.clone())
                        } else {
                            Expr::pow(Expr::Rat(b.clone()), e.clone())
                        }
                    })
                    .collect();
                if !lv.constant.is_zero() {
                    factors.push(Expr::exp(Expr::Rat(lv.constant.clone())));
                }
                factors
                    .into_iter()
                    .reduce(|a, b| a * b)
                    .unwrap_or_else(|| Expr::int(1))
            }
        };
        Term {
            rational,
            log: Some(lv),
            expr,
        }
    }

    /// A term known only through its closed form.
    pub fn transcendental(expr: Expr) -> Term {
        Term {
            rational: None,
            log: None,
            expr,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.rational.is_some()
    }

    /// `self^p`.
    pub fn pow(&self, p: &Rational) -> Term {
        if p.is_one() {
            return self.clone();
        }
        if let Some(r) = &self.rational {
            if let Some(v) = pow_exact(r, p) {
                if let Ok(t) = Term::rational(v) {
                    return t;
                }
            }
        }
        match &self.log {
            Some(lv) => Term::from_log(lv.scale(p)),
            None => Term::transcendental(Expr::pow(self.expr.clone(), p.clone())),
        }
    }

    pub fn recip(&self) -> Term {
        self.pow(&-Rational::one())
    }

    pub fn mul(&self, other: &Term) -> Term {
        if let (Some(a), Some(b)) = (&self.rational, &other.rational) {
            if let Ok(t) = Term::rational(a * b) {
                return t;
            }
        }
        match (&self.log, &other.log) {
            (Some(a), Some(b)) => Term::from_log(a.add(b)),
            _ => Term::transcendental(self.expr.clone() * other.expr.clone()),
        }
    }

    pub fn add(&self, other: &Term) -> Term {
        if let (Some(a), Some(b)) = (&self.rational, &other.rational) {
            if let Ok(t) = Term::rational(a + b) {
                return t;
            }
        }
        Term::transcendental(self.expr.clone() + other.expr.clone())
    }

    /// `self · c` for a positive rational `c`.
    pub fn scale(&self, c: &Rational) -> Result<Term> {
        Ok(self.mul(&Term::rational(c.clone())?))
    }

    /// `e^x` for a sequence value `x` (not necessarily a log-exact term).
    pub fn exp_of(x: &Term) -> Term {
        match &x.rational {
            Some(r) => Term::from_log(LogValue::from_constant(r.clone())),
            None => Term::transcendental(Expr::exp(x.expr.clone())),
        }
    }

    pub fn interval(&self, bits: u32) -> Result<Interval> {
        eval_interval(&self.expr, bits)
    }

    /// Enclosure of `ln` of the value.
    pub fn ln_interval(&self, bits: u32) -> Result<Interval> {
        match &self.log {
            Some(lv) => lv.enclose(bits),
            None => crate::numerics::elementary::ln(&self.interval(bits + 8)?, bits),
        }
    }

    /// Closed form of `ln` of the value.
    pub fn ln_expr(&self) -> Expr {
        match &self.log {
            Some(lv) => lv.to_expr(),
            None => Expr::ln(self.expr.clone()),
        }
    }
}

/// Sign of `b − a`, exact when both terms allow it.
pub fn compare_terms(a: &Term, b: &Term, cfg: &Config) -> Result<Sign> {
    if let (Some(x), Some(y)) = (&a.rational, &b.rational) {
        return Ok(Sign::of_rational(&(y - x)));
    }
    if let (Some(x), Some(y)) = (&a.log, &b.log) {
        return y.sub(x).sign(cfg);
    }
    if a.expr == b.expr {
        return Ok(Sign::Zero);
    }
    sign_adaptive(&(b.expr.clone() - a.expr.clone()), cfg.start_bits, cfg.max_bits)
}

/// `1 − p^e`.
pub(crate) fn one_minus_power(p: &Rational, e: u64) -> Rational {
    Rational::one() - num_traits::pow(p.clone(), e as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::int;

    #[test]
    fn square_roots_stay_exact_when_perfect() {
        let t = Term::from_square(rat(4, 9)).unwrap();
        assert_eq!(t.rational, Some(rat(2, 3)));
        let t = Term::from_square(rat(1, 2)).unwrap();
        assert_eq!(t.rational, None);
        assert_eq!(t.pow(&int(2)).rational, Some(rat(1, 2)));
    }

    #[test]
    fn exp_terms_keep_exact_logs() {
        let t = Term::exp_of(&Term::rational(rat(1, 3)).unwrap());
        assert_eq!(t.rational, None);
        assert_eq!(t.log.as_ref().unwrap().constant, rat(1, 3));
        let one = Term::exp_of(&Term::rational(int(0)).unwrap_or(Term::one()));
        assert!(one.interval(64).is_ok());
    }

    #[test]
    fn comparisons() {
        let cfg = Config::default();
        let a = Term::from_square(rat(1, 2)).unwrap();
        let b = Term::from_square(rat(2, 3)).unwrap();
        assert_eq!(compare_terms(&a, &b, &cfg).unwrap(), Sign::Positive);
        assert_eq!(compare_terms(&b, &a, &cfg).unwrap(), Sign::Negative);
        assert_eq!(compare_terms(&a, &a, &cfg).unwrap(), Sign::Zero);
    }
}
