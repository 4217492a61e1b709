//! Monotone shapes and supremum certificates, used to honor contractivity
//! hypotheses and to normalize by `sup`.

use serde::Serialize;

use super::{compare_terms, Family, Sequence, SequenceDef, Term};
use crate::config::Config;
use crate::error::Result;
use crate::numerics::{format_rational, Expr, Sign};
use crate::transforms::TransformTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Constant,
    Nondecreasing,
    Nonincreasing,
}

impl Trend {
    fn flip(self) -> Trend {
        match self {
            Trend::Constant => Trend::Constant,
            Trend::Nondecreasing => Trend::Nonincreasing,
            Trend::Nonincreasing => Trend::Nondecreasing,
        }
    }
}

/// A monotone sequence with its limit.
#[derive(Debug, Clone)]
pub struct Shape {
    pub trend: Trend,
    pub limit: Term,
}

/// `sup_{n ≥ n0} s(n) ≤ bound`, with equality when `exact`.
#[derive(Debug, Clone)]
pub struct SupCertificate {
    pub bound: Term,
    pub exact: bool,
    pub reason: String,
}

impl SupCertificate {
    fn new(bound: Term, exact: bool, reason: impl Into<String>) -> Self {
        SupCertificate {
            bound,
            exact,
            reason: reason.into(),
        }
    }

    /// Sign of `1 − bound`.
    pub fn compare_to_one(&self, cfg: &Config) -> Result<Sign> {
        compare_terms(&self.bound, &Term::one(), cfg)
    }

    fn max(self, other: SupCertificate, cfg: &Config) -> Result<SupCertificate> {
        let exact = self.exact && other.exact;
        let reason = format!("max of [{}] and [{}]", self.reason, other.reason);
        let pick = match compare_terms(&self.bound, &other.bound, cfg)? {
            Sign::Positive => other.bound,
            Sign::Negative | Sign::Zero => self.bound,
            Sign::Undecided => {
                // Numerically equal; either bound is valid.
                return Ok(SupCertificate::new(self.bound, false, reason));
            }
        };
        Ok(SupCertificate::new(pick, exact, reason))
    }
}

fn describe(t: &Term) -> String {
    match &t.rational {
        Some(r) => format_rational(r),
        None => t.expr.to_string(),
    }
}

/// Certificates are computed with the default precision ladder so that a
/// sequence's meaning does not depend on the caller's configuration.
fn cert_config() -> Config {
    Config::default()
}

impl SequenceDef {
    /// Monotonicity and limit, when certified.
    pub fn shape(&self) -> Option<Shape> {
        let cfg = cert_config();
        let inc = |limit: Term| Some(Shape { trend: Trend::Nondecreasing, limit });
        match self {
            SequenceDef::Family(f) => match f {
                Family::Agler { j: 1 } | Family::Unilateral => Some(Shape {
                    trend: Trend::Constant,
                    limit: Term::one(),
                }),
                Family::Agler { .. } | Family::GeometricGap { .. } => inc(Term::one()),
                Family::Sabcd { a, c, .. } => inc(Term::from_square(a / c).ok()?),
                Family::Euler => inc(Term::transcendental(Expr::Euler)),
                Family::Dirichlet => Some(Shape {
                    trend: Trend::Nonincreasing,
                    limit: Term::one(),
                }),
                Family::Constant { c } => Some(Shape {
                    trend: Trend::Constant,
                    limit: Term::rational(c.clone()).ok()?,
                }),
                Family::PowerOf { base, m } => {
                    let s = base.shape()?;
                    Some(Shape {
                        trend: s.trend,
                        limit: s.limit.pow(m),
                    })
                }
            },
            SequenceDef::Explicit(e) => {
                let tail = e.tail.shape()?;
                let len = e.prefix_len();
                let mut ts = self.terms(len + 1).ok()?;
                ts.truncate(len + 1);
                let mut up = true;
                let mut down = true;
                for w in ts.windows(2) {
                    match compare_terms(&w[0], &w[1], &cfg).ok()? {
                        Sign::Zero => {}
                        Sign::Positive => down = false,
                        Sign::Negative => up = false,
                        Sign::Undecided => return None,
                    }
                }
                let trend = match (tail.trend, up, down) {
                    (Trend::Constant, true, true) => Trend::Constant,
                    (Trend::Constant | Trend::Nondecreasing, true, _) => Trend::Nondecreasing,
                    (Trend::Constant | Trend::Nonincreasing, _, true) => Trend::Nonincreasing,
                    _ => return None,
                };
                Some(Shape {
                    trend,
                    limit: tail.limit,
                })
            }
            SequenceDef::Transformed(t) => {
                let inner = t.of.shape();
                match &t.tag {
                    TransformTag::SchurPower { p } => {
                        let s = inner?;
                        Some(Shape {
                            trend: s.trend,
                            limit: s.limit.pow(p),
                        })
                    }
                    TransformTag::Aluthge
                    | TransformTag::AluthgeIter { .. }
                    | TransformTag::GeneralizedMean { .. }
                    | TransformTag::Cesaro
                    | TransformTag::GeometricCesaro
                    | TransformTag::CesaroWindow { .. }
                    | TransformTag::GeometricCesaroWindow { .. }
                    | TransformTag::Restriction { .. } => inner,
                    TransformTag::Reciprocal => {
                        let s = inner?;
                        Some(Shape {
                            trend: s.trend.flip(),
                            limit: s.limit.recip(),
                        })
                    }
                    TransformTag::PerturbZeroth { alpha0, .. } => {
                        let s = inner?;
                        let a0 = Term::rational(alpha0.clone()).ok()?;
                        let x1 = t.of.term(1).ok()?;
                        let trend = match (s.trend, compare_terms(&a0, &x1, &cfg).ok()?) {
                            (_, Sign::Undecided) => return None,
                            (Trend::Constant, Sign::Zero) => Trend::Constant,
                            (Trend::Constant | Trend::Nondecreasing, Sign::Zero | Sign::Positive) => {
                                Trend::Nondecreasing
                            }
                            (Trend::Constant | Trend::Nonincreasing, Sign::Zero | Sign::Negative) => {
                                Trend::Nonincreasing
                            }
                            _ => return None,
                        };
                        Some(Shape {
                            trend,
                            limit: s.limit,
                        })
                    }
                    TransformTag::ExpNormalized => {
                        let s = inner?;
                        let m = t.of.sup().ok()??;
                        if !m.exact {
                            return None;
                        }
                        let limit = if s.limit == m.bound {
                            Term::one()
                        } else {
                            Term::transcendental(Expr::exp(s.limit.expr.clone() - m.bound.expr))
                        };
                        Some(Shape {
                            trend: s.trend,
                            limit,
                        })
                    }
                    TransformTag::ExpMoment => None,
                }
            }
        }
    }

    /// Certificate for `sup_{n ≥ 0}`.
    pub fn sup(&self) -> Result<Option<SupCertificate>> {
        self.sup_from(0)
    }

    /// Certificate for `sup_{n ≥ n0}`.
    pub fn sup_from(&self, n0: usize) -> Result<Option<SupCertificate>> {
        let cfg = cert_config();
        if let Some(s) = self.shape() {
            return Ok(Some(match s.trend {
                Trend::Constant | Trend::Nondecreasing => {
                    let why = format!("{:?} with limit {}", s.trend, describe(&s.limit));
                    SupCertificate::new(s.limit, true, why.to_lowercase())
                }
                Trend::Nonincreasing => {
                    let v = self.term(n0)?;
                    let why = format!("nonincreasing, maximum at n = {n0} is {}", describe(&v));
                    SupCertificate::new(v, true, why)
                }
            }));
        }
        match self {
            SequenceDef::Family(Family::PowerOf { base, m }) => Ok(base.sup_from(n0)?.map(|c| {
                SupCertificate::new(c.bound.pow(m), c.exact, format!("power of [{}]", c.reason))
            })),
            SequenceDef::Family(_) => Ok(None),
            SequenceDef::Explicit(e) => {
                let len = e.prefix_len();
                let Some(mut best) = e.tail.sup_from(n0.max(len))? else {
                    return Ok(None);
                };
                best.reason = format!("tail: {}", best.reason);
                if n0 < len {
                    let ts = self.terms(len)?;
                    for (i, t) in ts.into_iter().enumerate().skip(n0) {
                        let c = SupCertificate::new(t, true, format!("prefix entry {i}"));
                        best = best.max(c, &cfg)?;
                    }
                }
                Ok(Some(best))
            }
            SequenceDef::Transformed(t) => {
                let inexact = |c: Option<SupCertificate>, what: &str| {
                    c.map(|c| {
                        SupCertificate::new(c.bound, false, format!("{what} of values below [{}]", c.reason))
                    })
                };
                Ok(match &t.tag {
                    TransformTag::SchurPower { p } => t.of.sup_from(n0)?.map(|c| {
                        SupCertificate::new(c.bound.pow(p), c.exact, format!("power of [{}]", c.reason))
                    }),
                    TransformTag::Restriction { r } => t.of.sup_from(n0 + r)?,
                    TransformTag::PerturbZeroth { alpha0, .. } => {
                        let rest = t.of.sup_from(n0.max(1))?;
                        match rest {
                            None => None,
                            Some(rest) if n0 == 0 => {
                                let a0 = SupCertificate::new(
                                    Term::rational(alpha0.clone())?,
                                    true,
                                    "perturbed zeroth weight",
                                );
                                Some(a0.max(rest, &cfg)?)
                            }
                            Some(rest) => Some(rest),
                        }
                    }
                    TransformTag::Aluthge
                    | TransformTag::AluthgeIter { .. }
                    | TransformTag::GeneralizedMean { .. }
                    | TransformTag::CesaroWindow { .. }
                    | TransformTag::GeometricCesaroWindow { .. } => {
                        inexact(t.of.sup_from(n0)?, "mean")
                    }
                    TransformTag::Cesaro | TransformTag::GeometricCesaro => {
                        inexact(t.of.sup_from(0)?, "running mean")
                    }
                    TransformTag::Reciprocal => None,
                    TransformTag::ExpNormalized => match t.of.sup()? {
                        Some(c) if c.exact => Some(SupCertificate::new(
                            Term::one(),
                            n0 == 0,
                            "normalized by the exact supremum",
                        )),
                        _ => None,
                    },
                    TransformTag::ExpMoment => match t.of.sup()? {
                        Some(c) if c.compare_to_one(&cfg)?.is_nonnegative() => {
                            Some(SupCertificate::new(
                                Term::one(),
                                false,
                                "moments of a contraction are nonincreasing",
                            ))
                        }
                        _ => None,
                    },
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};
    use crate::sequences::PrefixKind;

    #[test]
    fn family_sups() {
        let c = SequenceDef::bergman().sup().unwrap().unwrap();
        assert!(c.exact);
        assert_eq!(c.bound.rational, Some(int(1)));
        let c = SequenceDef::dirichlet().sup().unwrap().unwrap();
        assert_eq!(c.bound.pow(&int(2)).rational, Some(int(2)));
        let s = SequenceDef::sabcd(int(1), int(1), int(4), int(8)).unwrap();
        assert_eq!(s.sup().unwrap().unwrap().bound.rational, Some(rat(1, 2)));
    }

    #[test]
    fn explicit_sup_uses_prefix_and_tail() {
        let s = SequenceDef::explicit_weights(vec![rat(1, 2), rat(9, 10), rat(8, 10)]).unwrap();
        let c = s.sup().unwrap().unwrap();
        assert_eq!(c.bound.rational, Some(rat(9, 10)));
        assert!(s.shape().is_none());
        let s = SequenceDef::explicit(
            PrefixKind::Weights,
            vec![rat(1, 3)],
            Some(SequenceDef::bergman().squared()),
        )
        .unwrap();
        let sh = s.shape().unwrap();
        assert_eq!(sh.trend, Trend::Nondecreasing);
        assert_eq!(sh.limit.rational, Some(int(1)));
    }
}
