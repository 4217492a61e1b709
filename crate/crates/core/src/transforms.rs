//! Sequence transforms. Each wraps a [`SequenceDef`] lazily; evaluation
//! recurses through the wrapper so exact logarithms survive composition.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::rational::{factorial, harmonic};
use crate::numerics::{
    eval_interval, format_rational, int, rat, Expr, Interval, LogValue, Rational, Sign,
};
use crate::sequences::{
    compare_terms, difference_exact, MomentSequence, Sequence, SequenceDef, Term,
};
use crate::config::Config;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformTag {
    /// Termwise `x^p`.
    SchurPower { p: Rational },
    /// `√(x_n x_{n+1})`.
    Aluthge,
    AluthgeIter { m: u32 },
    /// `(x_n^{1−t} x_{n+1}^t + x_n^t x_{n+1}^{1−t}) / 2`.
    GeneralizedMean { t: Rational },
    /// `(x_0 + … + x_n) / (n+1)`.
    Cesaro,
    /// `(x_0 ⋯ x_n)^{1/(n+1)}`.
    GeometricCesaro,
    /// `(x_n + … + x_{n+k}) / (k+1)`.
    CesaroWindow { k: usize },
    /// `(x_n ⋯ x_{n+k})^{1/(k+1)}`.
    GeometricCesaroWindow { k: usize },
    Reciprocal,
    /// `x_{n+r}`.
    Restriction { r: usize },
    /// Replace `x_0`.
    PerturbZeroth { alpha0: Rational, allow_increase: bool },
    /// `e^{x_n} / e^{sup x}`.
    ExpNormalized,
    /// The weights whose moments are `e^{γ_n − 1}`, `γ` the moments of `x`.
    ExpMoment,
}

impl TransformTag {
    /// Parameter domains that do not depend on the input sequence.
    pub fn validate(&self) -> Result<()> {
        match self {
            TransformTag::SchurPower { p } if !p.is_positive() => Err(Error::domain(format!(
                "schur_power needs p > 0, got {}",
                format_rational(p)
            ))),
            TransformTag::GeneralizedMean { t } if t.is_negative() || *t > rat(1, 2) => {
                Err(Error::domain(format!(
                    "generalized_mean needs 0 <= t <= 1/2, got {}",
                    format_rational(t)
                )))
            }
            TransformTag::CesaroWindow { k: 0 } | TransformTag::GeometricCesaroWindow { k: 0 } => {
                Err(Error::domain("window length k must be at least 1"))
            }
            TransformTag::PerturbZeroth { alpha0, .. } if !alpha0.is_positive() => {
                Err(Error::domain("perturbed zeroth weight must be positive"))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TransformTag::SchurPower { .. } => "schur_power",
            TransformTag::Aluthge => "aluthge",
            TransformTag::AluthgeIter { .. } => "aluthge_iter",
            TransformTag::GeneralizedMean { .. } => "generalized_mean",
            TransformTag::Cesaro => "cesaro",
            TransformTag::GeometricCesaro => "geometric_cesaro",
            TransformTag::CesaroWindow { .. } => "cesaro_window",
            TransformTag::GeometricCesaroWindow { .. } => "geometric_cesaro_window",
            TransformTag::Reciprocal => "reciprocal",
            TransformTag::Restriction { .. } => "restriction",
            TransformTag::PerturbZeroth { .. } => "perturb_zeroth",
            TransformTag::ExpNormalized => "exp_normalized",
            TransformTag::ExpMoment => "exp_moment",
        }
    }

    pub fn label(&self) -> String {
        let name = self.name();
        match self {
            TransformTag::SchurPower { p } => format!("{name}[{}]", format_rational(p)),
            TransformTag::AluthgeIter { m } => format!("{name}[{m}]"),
            TransformTag::GeneralizedMean { t } => format!("{name}[{}]", format_rational(t)),
            TransformTag::CesaroWindow { k } | TransformTag::GeometricCesaroWindow { k } => {
                format!("{name}[{k}]")
            }
            TransformTag::Restriction { r } => format!("{name}[{r}]"),
            TransformTag::PerturbZeroth { alpha0, .. } => {
                format!("{name}[{}]", format_rational(alpha0))
            }
            _ => name.to_string(),
        }
    }

    /// Extra inner terms needed to produce `len` outer terms.
    fn lookahead(&self) -> usize {
        match self {
            TransformTag::Aluthge | TransformTag::GeneralizedMean { .. } => 1,
            TransformTag::AluthgeIter { m } => *m as usize,
            TransformTag::CesaroWindow { k } | TransformTag::GeometricCesaroWindow { k } => *k,
            TransformTag::Restriction { r } => *r,
            TransformTag::ExpMoment => 1,
            _ => 0,
        }
    }

    pub(crate) fn root_degree(&self, of: &SequenceDef) -> Option<u64> {
        let d = of.root_degree();
        match self {
            TransformTag::SchurPower { p } => {
                let q = p / Rational::from_integer(d?.into());
                num_traits::ToPrimitive::to_u64(q.denom())
            }
            TransformTag::Aluthge => Some(2 * d?),
            TransformTag::AluthgeIter { m } => Some(d? << m),
            TransformTag::GeneralizedMean { t } if *t == rat(1, 2) => Some(2 * d?),
            TransformTag::GeneralizedMean { t } if t.is_zero() && d == Some(1) => Some(1),
            TransformTag::Cesaro | TransformTag::CesaroWindow { .. } if d == Some(1) => Some(1),
            TransformTag::Reciprocal | TransformTag::Restriction { .. } => d,
            TransformTag::PerturbZeroth { .. } => d,
            _ => None,
        }
    }

    pub(crate) fn logs_exact(&self, of: &SequenceDef) -> bool {
        match self {
            TransformTag::SchurPower { .. }
            | TransformTag::Aluthge
            | TransformTag::AluthgeIter { .. }
            | TransformTag::GeometricCesaro
            | TransformTag::GeometricCesaroWindow { .. }
            | TransformTag::Reciprocal
            | TransformTag::Restriction { .. }
            | TransformTag::PerturbZeroth { .. } => of.logs_exact(),
            TransformTag::GeneralizedMean { t } if *t == rat(1, 2) => of.logs_exact(),
            _ => self.root_degree(of).is_some(),
        }
    }

    /// Terms `0..len` of the transformed sequence.
    pub fn terms(&self, of: &SequenceDef, len: usize) -> Result<Vec<Term>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        if let TransformTag::ExpMoment = self {
            return exp_moment_terms(of, len);
        }
        let x = of.terms(len + self.lookahead())?;
        let half = rat(1, 2);
        Ok(match self {
            TransformTag::SchurPower { p } => x.iter().map(|t| t.pow(p)).collect(),
            TransformTag::Aluthge => aluthge_step(&x, len),
            TransformTag::AluthgeIter { m } => {
                let mut v = x;
                for i in 0..*m as usize {
                    let keep = v.len() - 1;
                    v = aluthge_step(&v, keep);
                    debug_assert!(v.len() >= len + *m as usize - i - 1);
                }
                v.truncate(len);
                v
            }
            TransformTag::GeneralizedMean { t } => {
                if *t == half {
                    aluthge_step(&x, len)
                } else {
                    let one_t = Rational::one() - t;
                    (0..len)
                        .map(|n| {
                            let a = x[n].pow(&one_t).mul(&x[n + 1].pow(t));
                            let b = x[n].pow(t).mul(&x[n + 1].pow(&one_t));
                            a.add(&b).scale(&half)
                        })
                        .collect::<Result<_>>()?
                }
            }
            TransformTag::Cesaro => {
                let mut acc: Option<Term> = None;
                let mut out = Vec::with_capacity(len);
                for (n, t) in x.iter().enumerate() {
                    let s = match &acc {
                        None => t.clone(),
                        Some(a) => a.add(t),
                    };
                    out.push(s.scale(&rat(1, n as i64 + 1))?);
                    acc = Some(s);
                }
                out
            }
            TransformTag::GeometricCesaro => geometric_means(&x, len, |n| (0, n + 1)),
            TransformTag::CesaroWindow { k } => (0..len)
                .map(|n| {
                    let s = x[n + 1..=n + k].iter().fold(x[n].clone(), |a, t| a.add(t));
                    s.scale(&rat(1, *k as i64 + 1))
                })
                .collect::<Result<_>>()?,
            TransformTag::GeometricCesaroWindow { k } => geometric_means(&x, len, |n| (n, k + 1)),
            TransformTag::Reciprocal => x.iter().map(Term::recip).collect(),
            TransformTag::Restriction { r } => x[*r..].to_vec(),
            TransformTag::PerturbZeroth {
                alpha0,
                allow_increase,
            } => {
                let new0 = Term::rational(alpha0.clone())?;
                if !allow_increase
                    && compare_terms(&x[0], &new0, &Config::default())? == Sign::Positive
                {
                    return Err(Error::domain(format!(
                        "perturb_zeroth would increase the zeroth weight to {}; pass allow_increase",
                        format_rational(alpha0)
                    )));
                }
                let mut v = x;
                v[0] = new0;
                v
            }
            TransformTag::ExpNormalized => {
                let sup = of.sup()?.filter(|c| c.exact).ok_or_else(|| {
                    Error::domain(format!(
                        "exp_normalized needs an exact supremum certificate for {}",
                        of.label()
                    ))
                })?;
                x.iter().map(|t| exp_minus(t, &sup.bound)).collect::<Result<_>>()?
            }
            TransformTag::ExpMoment => unreachable!("handled above"),
        })
    }
}

fn aluthge_step(x: &[Term], len: usize) -> Vec<Term> {
    let half = rat(1, 2);
    (0..len).map(|n| x[n].mul(&x[n + 1]).pow(&half)).collect()
}

/// Geometric means over windows `(start, count)` chosen per output index.
fn geometric_means(x: &[Term], len: usize, window: impl Fn(usize) -> (usize, usize)) -> Vec<Term> {
    (0..len)
        .map(|n| {
            let (start, count) = window(n);
            let w = &x[start..start + count];
            let e = rat(1, count as i64);
            let logs: Option<Vec<&LogValue>> = w.iter().map(|t| t.log.as_ref()).collect();
            match logs {
                Some(ls) => {
                    let sum = ls.iter().fold(LogValue::zero(), |a, l| a.add(l));
                    Term::from_log(sum.scale(&e))
                }
                None => {
                    let s = Expr::sum(w.iter().map(Term::ln_expr));
                    Term::transcendental(Expr::exp(Expr::Rat(e) * s))
                }
            }
        })
        .collect()
}

/// `e^{x − m}`.
fn exp_minus(x: &Term, m: &Term) -> Result<Term> {
    if x == m {
        return Ok(Term::one());
    }
    Ok(match (&x.rational, &m.rational) {
        (Some(a), Some(b)) => Term::from_log(LogValue::from_constant(a - b)),
        _ => Term::transcendental(Expr::exp(x.expr.clone() - m.expr.clone())),
    })
}

fn exp_moment_terms(of: &SequenceDef, len: usize) -> Result<Vec<Term>> {
    let g = MomentSequence::new(of).terms(len + 1)?;
    let half = rat(1, 2);
    Ok(g.windows(2)
        .map(|w| match (&w[0].rational, &w[1].rational) {
            (Some(a), Some(b)) => Term::from_log(LogValue::from_constant((b - a) * &half)),
            _ => Term::transcendental(Expr::exp(
                (w[1].expr.clone() - w[0].expr.clone()) * Expr::Rat(half.clone()),
            )),
        })
        .collect())
}

/// Wrap `s` in `tag`, checking parameter domains against `s`.
pub fn apply(tag: TransformTag, s: SequenceDef) -> Result<SequenceDef> {
    if tag == (TransformTag::Restriction { r: 0 }) {
        return Ok(s);
    }
    let out = SequenceDef::transformed(tag, s)?;
    // Surface per-sequence domain errors (perturbation direction, missing
    // supremum certificates) at construction time.
    out.terms(1)?;
    Ok(out)
}

/// Generalized mean transform weight at `n`.
pub fn mean_transform_weights(s: &SequenceDef, t: &Rational, n: usize) -> Result<Term> {
    let tag = TransformTag::GeneralizedMean { t: t.clone() };
    tag.validate()?;
    Ok(tag.terms(s, n + 1)?.pop().expect("n + 1 terms"))
}

/// Checks `C(m,j) = m! j!/(m+j+1)! · Σ_{k=0}^{j} binom(m+k, m) D(m,k)` exactly,
/// where `D` are the differences of `x` and `C` those of its Cesàro transform.
pub fn cesaro_difference_identity_check<S: Sequence + ?Sized>(
    x: &S,
    m: usize,
    j: usize,
) -> Result<bool> {
    let (lhs, rhs) = cesaro_difference_identity_sides(x, m, j)?;
    Ok(lhs == rhs)
}

/// Both sides of the identity checked by [`cesaro_difference_identity_check`].
pub fn cesaro_difference_identity_sides<S: Sequence + ?Sized>(
    x: &S,
    m: usize,
    j: usize,
) -> Result<(Rational, Rational)> {
    let xs = x
        .rationals(m + j + 1)?
        .ok_or_else(|| Error::Unsupported("identity check needs rational terms".into()))?;
    let mut acc = Rational::zero();
    let mut cesaro = Vec::with_capacity(xs.len());
    for (n, v) in xs.iter().enumerate() {
        acc += v;
        cesaro.push(&acc / Rational::from_integer((n as i64 + 1).into()));
    }
    let lhs = difference_exact(&cesaro, m, j);
    let mut sum = Rational::zero();
    for k in 0..=j {
        let c = crate::numerics::rational::binomial(m + k, m)?;
        sum += Rational::from_integer(c) * difference_exact(&xs, m, k);
    }
    let f = |n: usize| Rational::from_integer(factorial(n as u64).into());
    let rhs = f(m) * f(j) / f(m + j + 1) * sum;
    Ok((lhs, rhs))
}

/// The Cesàro transform of the Bergman weights squared at `n`, exactly as
/// `(n + 2 − H_{n+2})/(n+1)` and as an enclosure of
/// `(2 − γ + n − ψ(3+n))/(n+1)`.
pub fn gamma_cesaro_weights(n: usize, bits: u32) -> Result<(Rational, Interval)> {
    let n = n as i64;
    let exact = (int(n + 2) - harmonic(n as u64 + 2)) / int(n + 1);
    let e = (Expr::int(2) - Expr::euler() + Expr::int(n) - Expr::digamma(Expr::int(n + 3)))
        / Expr::int(n + 1);
    Ok((exact, eval_interval(&e, bits)?))
}
