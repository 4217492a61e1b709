use std::fmt::Write as _;

use serde::Serialize;

use super::{Sequence, Term};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::rational::nabla_coefficient;
use crate::numerics::{
    format_rational, sign_adaptive, Expr, Interval, LogValue, Rational, Sign,
};

/// A difference value: exact, or an enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableEntry {
    Exact(Rational),
    Enclosed(Interval),
}

impl TableEntry {
    pub fn sign(&self) -> Sign {
        match self {
            TableEntry::Exact(r) => Sign::of_rational(r),
            TableEntry::Enclosed(i) => i.sign(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            TableEntry::Exact(r) => Some(r),
            TableEntry::Enclosed(_) => None,
        }
    }

    fn sub(&self, other: &TableEntry, bits: u32) -> TableEntry {
        match (self, other) {
            (TableEntry::Exact(a), TableEntry::Exact(b)) => TableEntry::Exact(a - b),
            _ => TableEntry::Enclosed(self.interval(bits).sub(&other.interval(bits))),
        }
    }

    pub fn interval(&self, bits: u32) -> Interval {
        match self {
            TableEntry::Exact(r) => Interval::from_rational(r, bits),
            TableEntry::Enclosed(i) => i.clone(),
        }
    }

    /// Rational string, or `[lo, hi]` with full decimal endpoints.
    pub fn render(&self) -> String {
        match self {
            TableEntry::Exact(r) => format_rational(r),
            TableEntry::Enclosed(i) => format!("[{}, {}]", i.lo_decimal(), i.hi_decimal()),
        }
    }
}

impl Serialize for TableEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TableEntry::Exact(r) => s.serialize_str(&format_rational(r)),
            TableEntry::Enclosed(i) => i.serialize(s),
        }
    }
}

/// `∇^k x(n) = Σ (−1)^i C(k,i) x(n+i)` over exact values.
pub fn difference_exact(xs: &[Rational], k: usize, n: usize) -> Rational {
    (0..=k)
        .map(|i| nabla_coefficient(k, i) * &xs[n + i])
        .sum()
}

fn difference_interval(xs: &[Interval], k: usize, n: usize, bits: u32) -> Interval {
    (0..=k).fold(Interval::from_int(0, bits), |acc, i| {
        acc.add(&xs[n + i].mul_rational(&nabla_coefficient(k, i)))
    })
}

/// `∇^k s(n)` by direct expansion; exact when the terms are rational,
/// otherwise an enclosure at `bits`.
pub fn difference<S: Sequence + ?Sized>(s: &S, k: usize, n: usize, bits: u32) -> Result<TableEntry> {
    let ts = s.terms(n + k + 1)?;
    if let Some(xs) = ts.iter().map(|t| t.rational.clone()).collect::<Option<Vec<_>>>() {
        return Ok(TableEntry::Exact(difference_exact(&xs, k, n)));
    }
    let wp = bits + 2 * k as u32 + 8;
    let xs = ts.iter().map(|t| t.interval(wp)).collect::<Result<Vec<_>>>()?;
    Ok(TableEntry::Enclosed(difference_interval(&xs, k, n, wp).with_bits(bits)))
}

/// Rows `k = 0..=K`, columns `n = 0..=N`.
#[derive(Debug, Clone, Serialize)]
pub struct DifferenceTable {
    pub source: String,
    #[serde(rename = "K")]
    pub k_max: usize,
    #[serde(rename = "N")]
    pub n_max: usize,
    pub rows: Vec<Vec<TableEntry>>,
}

impl DifferenceTable {
    pub fn entry(&self, k: usize, n: usize) -> &TableEntry {
        &self.rows[k][n]
    }

    /// CSV with header `k,n,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,n,value\n");
        for (k, row) in self.rows.iter().enumerate() {
            for (n, e) in row.iter().enumerate() {
                let v = e.render();
                if v.contains(',') {
                    writeln!(out, "{k},{n},\"{v}\"").expect("write to string");
                } else {
                    writeln!(out, "{k},{n},{v}").expect("write to string");
                }
            }
        }
        out
    }
}

/// The table of `∇^k s(n)`, filled by the recurrence
/// `∇^{k+1} s(n) = ∇^k s(n) − ∇^k s(n+1)` and spot-checked against the
/// direct expansion.
pub fn difference_table<S: Sequence + ?Sized>(
    s: &S,
    k_max: usize,
    n_max: usize,
    bits: u32,
) -> Result<DifferenceTable> {
    let len = n_max + k_max + 1;
    let ts = s.terms(len)?;
    let wp = bits + 2 * k_max as u32 + 8;
    let mut row: Vec<TableEntry> = ts
        .iter()
        .map(|t| match &t.rational {
            Some(r) => Ok(TableEntry::Exact(r.clone())),
            None => Ok(TableEntry::Enclosed(t.interval(wp)?)),
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(k_max + 1);
    for _ in 0..=k_max {
        let next: Vec<TableEntry> = row.windows(2).map(|w| w[0].sub(&w[1], wp)).collect();
        rows.push(row[..=n_max].to_vec());
        row = next;
    }
    // Spot check: the deepest row against the direct expansion.
    if let Some(xs) = ts.iter().map(|t| t.rational.clone()).collect::<Option<Vec<_>>>() {
        for n in [0, n_max] {
            if rows[k_max][n].exact() != Some(&difference_exact(&xs, k_max, n)) {
                return Err(Error::Precision(format!(
                    "difference table disagrees with direct expansion at ({k_max}, {n})"
                )));
            }
        }
    }
    for row in &mut rows {
        for e in row.iter_mut() {
            if let TableEntry::Enclosed(i) = e {
                *i = i.with_bits(bits);
            }
        }
    }
    Ok(DifferenceTable {
        source: s.label(),
        k_max,
        n_max,
        rows,
    })
}

/// `∇^k ln s(n)`, exact when the terms carry exact logarithms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogDifference {
    Exact(LogValue),
    /// Only a closed form is available; signs come from intervals.
    Enclosed(Expr),
}

impl LogDifference {
    pub fn from_terms(ts: &[Term], k: usize, n: usize) -> LogDifference {
        let logs: Option<Vec<&LogValue>> = ts[n..=n + k].iter().map(|t| t.log.as_ref()).collect();
        match logs {
            Some(ls) => LogDifference::Exact(ls.iter().enumerate().fold(
                LogValue::zero(),
                |acc, (i, l)| acc.add_scaled(l, &nabla_coefficient(k, i)),
            )),
            None => LogDifference::Enclosed(Expr::sum((0..=k).map(|i| {
                Expr::Rat(nabla_coefficient(k, i)) * ts[n + i].ln_expr()
            }))),
        }
    }

    pub fn sign(&self, cfg: &Config) -> Result<Sign> {
        match self {
            LogDifference::Exact(v) => v.sign(cfg),
            LogDifference::Enclosed(e) => sign_adaptive(e, cfg.start_bits, cfg.max_bits),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, LogDifference::Exact(_))
    }
}

/// `∇^k ln s(n)`.
pub fn log_difference<S: Sequence + ?Sized>(s: &S, k: usize, n: usize) -> Result<LogDifference> {
    let ts = s.terms(n + k + 1)?;
    Ok(LogDifference::from_terms(&ts, k, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat, LogCombination};
    use crate::sequences::SequenceDef;

    fn bergman_sq() -> SequenceDef {
        SequenceDef::bergman().squared()
    }

    #[test]
    fn spec_examples() {
        let b = bergman_sq();
        assert_eq!(difference(&b, 1, 0, 64).unwrap(), TableEntry::Exact(rat(-1, 6)));
        assert_eq!(difference(&b, 2, 0, 64).unwrap(), TableEntry::Exact(rat(-1, 12)));
        let c = SequenceDef::constant(rat(5, 3)).unwrap();
        assert_eq!(difference(&c, 1, 7, 64).unwrap(), TableEntry::Exact(int(0)));

        let t = difference_table(&b, 2, 1, 64).unwrap();
        assert_eq!(t.entry(1, 0), &TableEntry::Exact(rat(-1, 6)));
        assert_eq!(t.entry(1, 1), &TableEntry::Exact(rat(-1, 12)));
        assert_eq!(t.entry(2, 0), &TableEntry::Exact(rat(-1, 12)));
        assert!(t.to_csv().starts_with("k,n,value\n0,0,1/2\n"));
    }

    #[test]
    fn log_differences() {
        let b = bergman_sq();
        let d = log_difference(&b, 1, 0).unwrap();
        let expected = LogCombination::from_terms([(rat(1, 2), int(1)), (rat(2, 3), int(-1))]).unwrap();
        assert_eq!(d, LogDifference::Exact(LogValue::from_logs(expected)));
        assert_eq!(d.sign(&Config::default()).unwrap(), Sign::Negative);
        let u = log_difference(&SequenceDef::unilateral(), 3, 2).unwrap();
        assert_eq!(u.sign(&Config::default()).unwrap(), Sign::Zero);
    }

    #[test]
    fn euler_table_is_enclosed() {
        let t = difference_table(&SequenceDef::euler(), 2, 2, 128).unwrap();
        assert!(matches!(t.entry(1, 0), TableEntry::Enclosed(_)));
        assert_eq!(t.entry(1, 0).sign(), Sign::Negative);
        assert!(t.to_csv().contains("\"["));
    }
}
