//! Positive sequences: closed-form weight families, explicit prefixes with a
//! tail rule, and lazily composed transforms.

mod bounds;
mod difference;
mod json;
mod moments;
mod term;

pub use bounds::{SupCertificate, Shape, Trend};
pub use difference::{
    difference, difference_exact, difference_table, log_difference, DifferenceTable,
    LogDifference, TableEntry,
};
pub use json::{from_value, parse_sequence_file, parse_sequence_json, parse_transform_tag};
pub(crate) use json::rational_value;
pub use moments::{moments_from_weights, weights_from_moments, MomentSequence};
pub use term::{compare_terms, Term};

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::numerics::rational::harmonic;
use crate::numerics::{format_rational, int, rat, Expr, Rational};
use crate::transforms::TransformTag;
use term::one_minus_power;

/// How terms of a sequence can be represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueClass {
    /// Every term is rational.
    Rational,
    /// Every term is a product of rational powers of positive rationals, so
    /// logarithms are exact log-combinations.
    Radical,
    /// Terms are evaluated through interval enclosures.
    Transcendental,
}

/// Anything that yields positive terms by index.
pub trait Sequence: Sync {
    /// Terms `0..len`.
    fn terms(&self, len: usize) -> Result<Vec<Term>>;

    /// Short human-readable name.
    fn label(&self) -> String;

    fn term(&self, n: usize) -> Result<Term> {
        Ok(self.terms(n + 1)?.pop().expect("n + 1 terms"))
    }

    /// Terms `0..len` as rationals, if all of them are rational.
    fn rationals(&self, len: usize) -> Result<Option<Vec<Rational>>> {
        Ok(self.terms(len)?.into_iter().map(|t| t.rational).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Weights `√((n+1)/(n+j))`; `j = 2` is the Bergman shift.
    Agler { j: u64 },
    /// Weights `√((an+b)/(cn+d))`.
    Sabcd {
        a: Rational,
        b: Rational,
        c: Rational,
        d: Rational,
    },
    /// Weights `∏ᵢ √(1 − pᵢ^{2n+2})`.
    GeometricGap { ps: Vec<Rational> },
    /// `H_{n+1} − ln(n+2)`.
    Euler,
    /// Weights `√((n+2)/(n+1))`, moments `n + 1`.
    Dirichlet,
    Unilateral,
    Constant { c: Rational },
    /// Termwise `base^m`.
    PowerOf { base: Box<SequenceDef>, m: Rational },
}

/// What the numbers of an explicit prefix are.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixKind {
    Weights,
    WeightsSquared,
    Moments,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explicit {
    pub kind: PrefixKind,
    pub given: Vec<Rational>,
    /// Supplies every index past the prefix, indexed absolutely.
    pub tail: Box<SequenceDef>,
}

impl Explicit {
    /// Squares of the prefix terms, or the terms themselves for `Weights`.
    fn prefix_terms(&self) -> Result<Vec<Term>> {
        match self.kind {
            PrefixKind::Weights => self.given.iter().cloned().map(Term::rational).collect(),
            PrefixKind::WeightsSquared => {
                self.given.iter().cloned().map(Term::from_square).collect()
            }
            PrefixKind::Moments => weights_from_moments(&self.given)?
                .into_iter()
                .map(Term::from_square)
                .collect(),
        }
    }

    pub fn prefix_len(&self) -> usize {
        match self.kind {
            PrefixKind::Moments => self.given.len() - 1,
            _ => self.given.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transformed {
    pub tag: TransformTag,
    pub of: SequenceDef,
}

/// Immutable description of a positive sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceDef {
    Family(Family),
    Explicit(Explicit),
    Transformed(Box<Transformed>),
}

fn positive(name: &str, r: &Rational) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be positive, got {}",
            format_rational(r)
        )))
    }
}

impl SequenceDef {
    pub fn agler(j: u64) -> Result<SequenceDef> {
        if j < 1 {
            return Err(Error::domain("agler requires j >= 1"));
        }
        Ok(SequenceDef::Family(Family::Agler { j }))
    }

    /// The Bergman shift, `agler(2)`.
    pub fn bergman() -> SequenceDef {
        SequenceDef::Family(Family::Agler { j: 2 })
    }

    pub fn sabcd(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<SequenceDef> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            positive(&format!("sabcd parameter {name}"), v)?;
        }
        if &a * &d <= &b * &c {
            return Err(Error::domain("sabcd requires ad > bc"));
        }
        Ok(SequenceDef::Family(Family::Sabcd { a, b, c, d }))
    }

    pub fn geometric_gap(ps: Vec<Rational>) -> Result<SequenceDef> {
        if ps.is_empty() {
            return Err(Error::domain("geometric_gap needs at least one p"));
        }
        for p in &ps {
            if !p.is_positive() || *p >= Rational::one() {
                return Err(Error::domain(format!(
                    "geometric_gap requires 0 < p < 1, got {}",
                    format_rational(p)
                )));
            }
        }
        Ok(SequenceDef::Family(Family::GeometricGap { ps }))
    }

    pub fn euler() -> SequenceDef {
        SequenceDef::Family(Family::Euler)
    }

    pub fn dirichlet() -> SequenceDef {
        SequenceDef::Family(Family::Dirichlet)
    }

    pub fn unilateral() -> SequenceDef {
        SequenceDef::Family(Family::Unilateral)
    }

    pub fn constant(c: Rational) -> Result<SequenceDef> {
        positive("constant", &c)?;
        Ok(SequenceDef::Family(Family::Constant { c }))
    }

    pub fn power_of(base: SequenceDef, m: Rational) -> Result<SequenceDef> {
        positive("power_of exponent", &m)?;
        Ok(SequenceDef::Family(Family::PowerOf {
            base: Box::new(base),
            m,
        }))
    }

    /// Termwise square: weights to weights squared.
    pub fn squared(&self) -> SequenceDef {
        SequenceDef::power_of(self.clone(), int(2)).expect("2 > 0")
    }

    /// An explicit prefix followed by `tail`, or by the last prefix entry
    /// repeated.
    pub fn explicit(
        kind: PrefixKind,
        given: Vec<Rational>,
        tail: Option<SequenceDef>,
    ) -> Result<SequenceDef> {
        let min = if kind == PrefixKind::Moments { 2 } else { 1 };
        if given.len() < min {
            return Err(Error::domain(format!(
                "explicit prefix needs at least {min} entries"
            )));
        }
        let probe = Explicit {
            kind,
            given,
            tail: Box::new(SequenceDef::unilateral()),
        };
        let prefix = probe.prefix_terms()?;
        let tail = match tail {
            Some(t) => t,
            None => {
                let last = prefix.last().expect("nonempty prefix");
                match (&last.rational, kind) {
                    (Some(r), _) => SequenceDef::constant(r.clone())?,
                    (None, PrefixKind::Weights) => unreachable!("weights are rational"),
                    (None, _) => {
                        let sq = last.pow(&int(2)).rational.expect("square of a radical");
                        SequenceDef::power_of(SequenceDef::constant(sq)?, rat(1, 2))?
                    }
                }
            }
        };
        Ok(SequenceDef::Explicit(Explicit {
            tail: Box::new(tail),
            ..probe
        }))
    }

    /// Explicit rational weights with the default tail.
    pub fn explicit_weights(weights: Vec<Rational>) -> Result<SequenceDef> {
        SequenceDef::explicit(PrefixKind::Weights, weights, None)
    }

    pub fn transformed(tag: TransformTag, of: SequenceDef) -> Result<SequenceDef> {
        tag.validate()?;
        Ok(SequenceDef::Transformed(Box::new(Transformed { tag, of })))
    }

    pub fn value_class(&self) -> ValueClass {
        match self.root_degree() {
            Some(1) => ValueClass::Rational,
            Some(_) => ValueClass::Radical,
            None if self.logs_exact() => ValueClass::Radical,
            None => ValueClass::Transcendental,
        }
    }

    /// Some `d` with every term's `d`-th power rational, if known.
    pub(crate) fn root_degree(&self) -> Option<u64> {
        use num_integer::Integer;
        match self {
            SequenceDef::Family(f) => match f {
                Family::Agler { j: 1 } | Family::Unilateral | Family::Constant { .. } => Some(1),
                Family::Agler { .. }
                | Family::Sabcd { .. }
                | Family::GeometricGap { .. }
                | Family::Dirichlet => Some(2),
                Family::Euler => None,
                Family::PowerOf { base, m } => power_degree(base.root_degree()?, m),
            },
            SequenceDef::Explicit(e) => {
                let prefix = match e.kind {
                    PrefixKind::Weights => 1,
                    _ => {
                        let all_square = e
                            .prefix_terms()
                            .map(|ts| ts.iter().all(Term::is_rational))
                            .unwrap_or(false);
                        if all_square {
                            1
                        } else {
                            2
                        }
                    }
                };
                Some(prefix.lcm(&e.tail.root_degree()?))
            }
            SequenceDef::Transformed(t) => t.tag.root_degree(&t.of),
        }
    }

    /// Whether every term carries an exact logarithm with no constant part.
    pub(crate) fn logs_exact(&self) -> bool {
        match self {
            SequenceDef::Family(Family::Euler) => false,
            SequenceDef::Family(Family::PowerOf { base, .. }) => base.logs_exact(),
            SequenceDef::Family(_) => true,
            SequenceDef::Explicit(e) => e.tail.logs_exact(),
            SequenceDef::Transformed(t) => t.tag.logs_exact(&t.of),
        }
    }
}

fn power_degree(d: u64, m: &Rational) -> Option<u64> {
    let q = m / Rational::from_integer(d.into());
    num_traits::ToPrimitive::to_u64(q.denom())
}

fn family_terms(f: &Family, len: usize) -> Result<Vec<Term>> {
    match f {
        Family::Agler { j } => (0..len)
            .map(|n| Term::from_square(rat(n as i64 + 1, n as i64 + *j as i64)))
            .collect(),
        Family::Sabcd { a, b, c, d } => (0..len)
            .map(|n| {
                let n = int(n as i64);
                Term::from_square((a * &n + b) / (c * &n + d))
            })
            .collect(),
        Family::GeometricGap { ps } => (0..len)
            .map(|n| {
                let e = 2 * n as u64 + 2;
                Term::from_square(ps.iter().map(|p| one_minus_power(p, e)).product())
            })
            .collect(),
        Family::Euler => Ok((0..len)
            .map(|n| {
                let h = harmonic(n as u64 + 1);
                Term::transcendental(Expr::Rat(h) - Expr::ln(Expr::int(n as i64 + 2)))
            })
            .collect()),
        Family::Dirichlet => (0..len)
            .map(|n| Term::from_square(rat(n as i64 + 2, n as i64 + 1)))
            .collect(),
        Family::Unilateral => Ok(vec![Term::one(); len]),
        Family::Constant { c } => Ok(vec![Term::rational(c.clone())?; len]),
        Family::PowerOf { base, m } => {
            Ok(base.terms(len)?.iter().map(|t| t.pow(m)).collect())
        }
    }
}

impl Sequence for SequenceDef {
    fn terms(&self, len: usize) -> Result<Vec<Term>> {
        match self {
            SequenceDef::Family(f) => family_terms(f, len),
            SequenceDef::Explicit(e) => {
                let mut out = e.prefix_terms()?;
                out.truncate(len);
                if len > out.len() {
                    let tail = e.tail.terms(len)?;
                    let start = out.len();
                    out.extend(tail.into_iter().skip(start));
                }
                Ok(out)
            }
            SequenceDef::Transformed(t) => t.tag.terms(&t.of, len),
        }
    }

    fn label(&self) -> String {
        match self {
            SequenceDef::Family(f) => match f {
                Family::Agler { j: 2 } => "bergman".into(),
                Family::Agler { j } => format!("agler({j})"),
                Family::Sabcd { a, b, c, d } => format!(
                    "sabcd({}, {}, {}, {})",
                    format_rational(a),
                    format_rational(b),
                    format_rational(c),
                    format_rational(d)
                ),
                Family::GeometricGap { ps } => format!(
                    "geometric_gap({})",
                    ps.iter().map(format_rational).collect::<Vec<_>>().join(", ")
                ),
                Family::Euler => "euler".into(),
                Family::Dirichlet => "dirichlet".into(),
                Family::Unilateral => "unilateral".into(),
                Family::Constant { c } => format!("constant({})", format_rational(c)),
                Family::PowerOf { base, m } => {
                    format!("({})^{}", base.label(), format_rational(m))
                }
            },
            SequenceDef::Explicit(e) => format!(
                "explicit[{}; tail {}]",
                e.given
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", "),
                e.tail.label()
            ),
            SequenceDef::Transformed(t) => format!("{}({})", t.tag.label(), t.of.label()),
        }
    }
}

impl<S: Sequence + ?Sized> Sequence for &S {
    fn terms(&self, len: usize) -> Result<Vec<Term>> {
        (*self).terms(len)
    }

    fn label(&self) -> String {
        (*self).label()
    }
}

/// A sequence given by a closure over exact rational terms.
pub struct RationalFn<F> {
    name: String,
    f: F,
}

impl<F: Fn(usize) -> Rational + Sync> RationalFn<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        RationalFn {
            name: name.into(),
            f,
        }
    }
}

impl<F: Fn(usize) -> Rational + Sync> Sequence for RationalFn<F> {
    fn terms(&self, len: usize) -> Result<Vec<Term>> {
        (0..len).map(|n| Term::rational((self.f)(n))).collect()
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// A sequence given by an already evaluated list of terms.
#[derive(Debug, Clone)]
pub struct TermList {
    pub name: String,
    pub terms: Vec<Term>,
}

impl Sequence for TermList {
    fn terms(&self, len: usize) -> Result<Vec<Term>> {
        if len > self.terms.len() {
            return Err(Error::domain(format!(
                "{} has only {} terms, {len} requested",
                self.name,
                self.terms.len()
            )));
        }
        Ok(self.terms[..len].to_vec())
    }

    fn label(&self) -> String {
        self.name.clone()
    }
}

/// Value of a sequence at `n` (spec-level convenience).
pub fn value<S: Sequence + ?Sized>(s: &S, n: usize) -> Result<Term> {
    s.term(n)
}
