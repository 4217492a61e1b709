//! Finite-order verdicts for the sequence classes of interest: alternating,
//! monotone, log-alternating, moment infinite divisibility, contractivity
//! and hyperexpansivity.
//!
//! Every verdict carries its scope `(K, N)`. A failure carries the
//! lexicographically smallest witness cell `(k, n)`; cells whose sign stays
//! undecided at the precision cap are listed, and never hide a decided
//! failure elsewhere in the grid.

mod grid;
mod order;

use serde::{Serialize, Serializer};

pub use order::{alternating_order, expansivity_power_profile, OrderReport, OrderStatus, PowerProfileEntry};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::{format_rational, Interval, LogValue, Rational, Sign};
use crate::sequences::{compare_terms, MomentSequence, Sequence, SequenceDef, Term};
use grid::{sweep, Grid, Outcome, Source, Want};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Undecided => "UNDECIDED",
        })
    }
}

/// How cell signs were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Path {
    /// Rational arithmetic or exact logarithm combinations.
    Exact,
    /// Outward-rounded intervals.
    Interval,
}

fn opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// A cell violating the tested inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub k: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "opt_rational")]
    pub value: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<Interval>,
    /// Exact logarithmic form of the value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log: Option<LogValue>,
    pub sign: Sign,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Witness {
    pub fn exact(k: usize, n: usize, value: Rational) -> Witness {
        let sign = Sign::of_rational(&value);
        Witness {
            k,
            n,
            value: Some(value),
            interval: None,
            log: None,
            sign,
            detail: None,
        }
    }

    pub fn enclosed(k: usize, n: usize, interval: Interval, sign: Sign) -> Witness {
        Witness {
            k,
            n,
            value: None,
            interval: Some(interval),
            log: None,
            sign,
            detail: None,
        }
    }

    pub fn log(k: usize, n: usize, log: LogValue, approx: Interval, sign: Sign) -> Witness {
        Witness {
            k,
            n,
            value: None,
            interval: Some(approx),
            log: Some(log),
            sign,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Witness {
        self.detail = Some(detail.into());
        self
    }

    pub fn cell(&self) -> (usize, usize) {
        (self.k, self.n)
    }
}

/// A hypothesis checked alongside the main test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideCondition {
    pub name: String,
    /// `None` when the check could not be decided.
    pub holds: Option<bool>,
    pub detail: String,
}

/// PASS / FAIL / UNDECIDED with its scope and evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub test: String,
    pub sequence: String,
    pub status: Status,
    #[serde(rename = "K")]
    pub k_max: usize,
    #[serde(rename = "N")]
    pub n_max: usize,
    pub witness: Option<Witness>,
    pub undecided_cells: Vec<(usize, usize)>,
    pub path: Path,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits_used: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub side_conditions: Vec<SideCondition>,
}

impl Verdict {
    pub(crate) fn new(
        test: impl Into<String>,
        sequence: impl Into<String>,
        k_max: usize,
        n_max: usize,
        witness: Option<Witness>,
        undecided_cells: Vec<(usize, usize)>,
        path: Path,
        bits_used: Option<u32>,
    ) -> Verdict {
        let status = if witness.is_some() {
            Status::Fail
        } else if !undecided_cells.is_empty() {
            Status::Undecided
        } else {
            Status::Pass
        };
        Verdict {
            test: test.into(),
            sequence: sequence.into(),
            status,
            k_max,
            n_max,
            witness,
            undecided_cells,
            path,
            bits_used,
            side_conditions: Vec::new(),
        }
    }

    fn from_outcome(test: &str, sequence: String, k_max: usize, n_max: usize, o: Outcome) -> Verdict {
        Verdict::new(test, sequence, k_max, n_max, o.witness, o.undecided, o.path, o.bits_used)
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn witness_cell(&self) -> Option<(usize, usize)> {
        self.witness.as_ref().map(Witness::cell)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdicts serialize")
    }
}

fn run<S: Sequence + ?Sized>(
    test: &str,
    s: &S,
    source: Source,
    grid: Grid,
    want: Want,
    cfg: &Config,
) -> Result<Verdict> {
    let ts = s.terms(grid.len())?;
    let o = sweep(&ts, source, grid, want, cfg)?;
    Ok(Verdict::from_outcome(test, s.label(), grid.k_hi, grid.n_max, o))
}

/// `∇^k s(n) ≤ 0` for `0 ≤ n ≤ N`.
pub fn k_alternating_verdict<S: Sequence + ?Sized>(s: &S, k: usize, n_max: usize, cfg: &Config) -> Result<Verdict> {
    if k == 0 {
        return Err(Error::domain("alternation order must be at least 1"));
    }
    let grid = Grid { k_lo: k, k_hi: k, n_max };
    run(&format!("{k}-alternating"), s, Source::Values, grid, Want::NonPositive, cfg)
}

/// `∇^k s(n) ≤ 0` for `1 ≤ k ≤ K`, `0 ≤ n ≤ N`.
pub fn completely_alternating_verdict<S: Sequence + ?Sized>(
    s: &S,
    k_max: usize,
    n_max: usize,
    cfg: &Config,
) -> Result<Verdict> {
    if k_max == 0 {
        return Err(Error::domain("K must be at least 1"));
    }
    let grid = Grid { k_lo: 1, k_hi: k_max, n_max };
    run("completely alternating", s, Source::Values, grid, Want::NonPositive, cfg)
}

/// `∇^k s(n) ≥ 0` for `0 ≤ k ≤ K`, `0 ≤ n ≤ N`.
pub fn completely_monotone_verdict<S: Sequence + ?Sized>(
    s: &S,
    k_max: usize,
    n_max: usize,
    cfg: &Config,
) -> Result<Verdict> {
    let grid = Grid { k_lo: 0, k_hi: k_max, n_max };
    run("completely monotone", s, Source::Values, grid, Want::NonNegative, cfg)
}

/// `∇^k ln s(n) ≤ 0` for `1 ≤ k ≤ K`, `0 ≤ n ≤ N`.
pub fn log_completely_alternating_verdict<S: Sequence + ?Sized>(
    s: &S,
    k_max: usize,
    n_max: usize,
    cfg: &Config,
) -> Result<Verdict> {
    if k_max == 0 {
        return Err(Error::domain("K must be at least 1"));
    }
    let grid = Grid { k_lo: 1, k_hi: k_max, n_max };
    run("log completely alternating", s, Source::Logs, grid, Want::NonPositive, cfg)
}

/// Moment infinite divisibility of a contractive shift: the weights squared
/// are log completely alternating.
///
/// Fails with [`Error::NotContractive`] unless `sup α ≤ 1` is certified.
pub fn mid_verdict(weights: &SequenceDef, k_max: usize, n_max: usize, cfg: &Config) -> Result<Verdict> {
    let label = weights.label();
    let Some(cert) = weights.sup()? else {
        return Err(Error::NotContractive(format!("no supremum certificate for {label}")));
    };
    let contractive = match cert.compare_to_one(cfg)? {
        Sign::Zero | Sign::Positive => true,
        Sign::Negative => false,
        Sign::Undecided => {
            return Err(Error::NotContractive(format!(
                "cannot decide sup ≤ 1 for {label} ({})",
                cert.reason
            )))
        }
    };
    if !contractive {
        return Err(Error::NotContractive(format!(
            "sup of {label} exceeds 1 ({})",
            cert.reason
        )));
    }
    let mut v = log_completely_alternating_verdict(&weights.squared(), k_max, n_max, cfg)?;
    v.test = "mid".into();
    v.sequence = label;
    v.side_conditions.push(SideCondition {
        name: "contractive".into(),
        holds: Some(true),
        detail: format!("sup α ≤ 1: {}", cert.reason),
    });
    Ok(v)
}

/// `∇^n γ(m) ≥ 0` for `0 ≤ m ≤ M` on the moments of `weights`.
pub fn n_contractive_verdict<S: Sequence + ?Sized>(
    weights: &S,
    order: usize,
    m_max: usize,
    cfg: &Config,
) -> Result<Verdict> {
    if order == 0 {
        return Err(Error::domain("contractivity order must be at least 1"));
    }
    let gamma = MomentSequence::new(weights);
    let grid = Grid { k_lo: order, k_hi: order, n_max: m_max };
    run(&format!("{order}-contractive"), &gamma, Source::Values, grid, Want::NonNegative, cfg)
}

/// Complete hyperexpansivity: the moments are completely alternating. A
/// passing verdict also reports whether every weight on the window is ≥ 1.
pub fn hyperexpansive_verdict<S: Sequence + ?Sized>(
    weights: &S,
    k_max: usize,
    n_max: usize,
    cfg: &Config,
) -> Result<Verdict> {
    let gamma = MomentSequence::new(weights);
    let mut v = completely_alternating_verdict(&gamma, k_max, n_max, cfg)?;
    v.test = "hyperexpansive".into();
    v.sequence = weights.label();
    if v.is_pass() {
        let ws = weights.terms(n_max + k_max)?;
        let mut holds = Some(true);
        let mut detail = format!("α_n ≥ 1 for n < {}", ws.len());
        for (n, w) in ws.iter().enumerate() {
            match compare_terms(&Term::one(), w, cfg)? {
                Sign::Zero | Sign::Positive => {}
                Sign::Negative => {
                    holds = Some(false);
                    detail = format!("α_{n} < 1");
                    break;
                }
                Sign::Undecided => {
                    holds = None;
                    detail = format!("cannot decide α_{n} ≥ 1");
                }
            }
        }
        v.side_conditions.push(SideCondition {
            name: "weights at least 1".into(),
            holds,
            detail,
        });
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};
    use crate::sequences::{difference_exact, PrefixKind};

    fn cfg() -> Config {
        Config::default()
    }

    fn bergman_sq() -> SequenceDef {
        SequenceDef::bergman().squared()
    }

    fn power(m: i64) -> SequenceDef {
        SequenceDef::power_of(bergman_sq(), int(m)).unwrap()
    }

    #[test]
    fn k_alternating_examples() {
        let v = k_alternating_verdict(&bergman_sq(), 1, 50, &cfg()).unwrap();
        assert!(v.is_pass());
        let v = k_alternating_verdict(&power(5), 2, 10, &cfg()).unwrap();
        let w = v.witness.unwrap();
        assert_eq!((w.k, w.n), (2, 0));
        let expected = rat(1, 32) - rat(2 * 32, 243) + rat(243, 1024);
        assert_eq!(w.value, Some(expected));
        let c = SequenceDef::constant(rat(7, 3)).unwrap();
        assert!(k_alternating_verdict(&c, 4, 20, &cfg()).unwrap().is_pass());
    }

    #[test]
    fn completely_alternating_examples() {
        let a2 = SequenceDef::agler(2).unwrap().squared();
        assert!(completely_alternating_verdict(&a2, 16, 64, &cfg()).unwrap().is_pass());
        let v = completely_alternating_verdict(&power(3), 16, 64, &cfg()).unwrap();
        assert!(v.witness.unwrap().k <= 4);
        let u = SequenceDef::unilateral();
        assert!(completely_alternating_verdict(&u, 16, 64, &cfg()).unwrap().is_pass());
    }

    #[test]
    fn completely_monotone_examples() {
        let g = MomentSequence::new(SequenceDef::bergman());
        assert!(completely_monotone_verdict(&g, 12, 40, &cfg()).unwrap().is_pass());
        let v = completely_monotone_verdict(&bergman_sq(), 1, 5, &cfg()).unwrap();
        let w = v.witness.unwrap();
        assert_eq!((w.k, w.n, w.value), (1, 0, Some(rat(-1, 6))));
    }

    #[test]
    fn log_ca_examples() {
        assert!(log_completely_alternating_verdict(&power(3), 16, 64, &cfg()).unwrap().is_pass());
        let a3 = SequenceDef::agler(3).unwrap().squared();
        assert!(log_completely_alternating_verdict(&a3, 16, 64, &cfg()).unwrap().is_pass());
        let u = SequenceDef::unilateral();
        assert!(log_completely_alternating_verdict(&u, 8, 8, &cfg()).unwrap().is_pass());
    }

    #[test]
    fn mid_examples() {
        for j in 2..=6 {
            let v = mid_verdict(&SequenceDef::agler(j).unwrap(), 16, 64, &cfg()).unwrap();
            assert!(v.is_pass(), "agler({j})");
        }
        let g = SequenceDef::geometric_gap(vec![rat(1, 2)]).unwrap();
        assert!(mid_verdict(&g, 16, 64, &cfg()).unwrap().is_pass());
    }

    #[test]
    fn mid_requires_contractivity() {
        let d = SequenceDef::dirichlet();
        assert!(matches!(mid_verdict(&d, 4, 4, &cfg()), Err(Error::NotContractive(_))));
        // Decreasing weights: contractive, but not even hyponormal.
        let s = SequenceDef::explicit_weights(vec![rat(1, 2), rat(9, 10), rat(8, 10)]).unwrap();
        let v = mid_verdict(&s, 4, 8, &cfg()).unwrap();
        assert_eq!(v.witness_cell(), Some((1, 1)));
    }

    #[test]
    fn n_contractive_examples() {
        let b = SequenceDef::bergman();
        assert!(n_contractive_verdict(&b, 2, 20, &cfg()).unwrap().is_pass());
        assert!(n_contractive_verdict(&SequenceDef::unilateral(), 3, 10, &cfg()).unwrap().is_pass());
        let s = SequenceDef::explicit(PrefixKind::Weights, vec![int(2)], Some(SequenceDef::unilateral())).unwrap();
        let v = n_contractive_verdict(&s, 1, 4, &cfg()).unwrap();
        assert_eq!(v.witness.unwrap().value, Some(int(-3)));
    }

    #[test]
    fn hyperexpansive_examples() {
        let v = hyperexpansive_verdict(&SequenceDef::dirichlet(), 16, 64, &cfg()).unwrap();
        assert!(v.is_pass());
        assert_eq!(v.side_conditions[0].holds, Some(true));
        assert!(hyperexpansive_verdict(&SequenceDef::unilateral(), 6, 6, &cfg()).unwrap().is_pass());
        let v = hyperexpansive_verdict(&SequenceDef::bergman(), 1, 0, &cfg()).unwrap();
        assert_eq!(v.witness.unwrap().value, Some(rat(1, 2)));
    }

    #[test]
    fn euler_takes_interval_path() {
        let v = completely_alternating_verdict(&SequenceDef::euler(), 4, 8, &cfg()).unwrap();
        assert_eq!(v.path, Path::Interval);
        assert!(v.is_pass());
    }

    #[test]
    fn structural_zeros_on_transcendental_constants() {
        let t = Term::transcendental(crate::numerics::Expr::Euler);
        let ts = vec![t; 10];
        let o = sweep(&ts, Source::Values, Grid { k_lo: 1, k_hi: 3, n_max: 5 }, Want::NonPositive, &cfg()).unwrap();
        assert!(o.witness.is_none() && o.undecided.is_empty());
    }

    #[test]
    fn witness_matches_direct_expansion() {
        let v = completely_alternating_verdict(&power(2), 16, 20, &cfg()).unwrap();
        let w = v.witness.unwrap();
        let xs: Vec<Rational> = power(2).rationals(40).unwrap().unwrap();
        assert_eq!(w.value.unwrap(), difference_exact(&xs, w.k, w.n));
        assert_eq!((w.k, w.n), (9, 0));
    }

    #[test]
    fn verdict_json_shape() {
        let v = k_alternating_verdict(&power(5), 2, 10, &cfg()).unwrap();
        let j = v.to_json();
        assert_eq!(j["status"], "fail");
        assert_eq!(j["K"], 2);
        assert_eq!(j["N"], 10);
        assert_eq!(j["witness"]["k"], 2);
        assert!(j["witness"]["value"].is_string());
        assert!(j["undecided_cells"].as_array().unwrap().is_empty());
    }
}
