//! Lévy–Khintchin triples and Berger measures on `[0, 1]`.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::classifiers::{Path, Verdict, Witness};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::rational::{binomial, pow_int};
use crate::numerics::{eval_interval, format_rational, int, Dyadic, Expr, Interval, Rational};
use crate::sequences::{moments_from_weights, rational_value, Sequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure {
    /// `Σ mass · δ_location`.
    Atomic(Vec<(Rational, Rational)>),
    /// Density `Σ c_j t^j` on `[0, 1]`. Nonnegativity is not checked.
    PolyDensity(Vec<Rational>),
    /// Density `(−ln u)^{q−1} / Γ(q)` on `(0, 1)`.
    LogPower { q: Rational },
}

impl Measure {
    pub fn atomic(atoms: Vec<(Rational, Rational)>) -> Result<Measure> {
        if atoms.is_empty() {
            return Err(Error::domain("atomic measure needs at least one atom"));
        }
        for (loc, mass) in &atoms {
            if loc.is_negative() || *loc > int(1) {
                return Err(Error::domain(format!("atom location {} outside [0, 1]", format_rational(loc))));
            }
            if !mass.is_positive() {
                return Err(Error::domain(format!("atom mass {} must be positive", format_rational(mass))));
            }
        }
        Ok(Measure::Atomic(atoms))
    }

    pub fn dirac(loc: Rational) -> Result<Measure> {
        Measure::atomic(vec![(loc, int(1))])
    }

    pub fn poly_density(coeffs: Vec<Rational>) -> Result<Measure> {
        if coeffs.is_empty() {
            return Err(Error::domain("polynomial density needs at least one coefficient"));
        }
        Ok(Measure::PolyDensity(coeffs))
    }

    pub fn log_power(q: Rational) -> Result<Measure> {
        if !q.is_positive() {
            return Err(Error::domain("log-power exponent q must be positive"));
        }
        Ok(Measure::LogPower { q })
    }

    /// Berger measure `(j−1)(1−t)^{j−2} dt` of the Agler shift `A_j`,
    /// expanded by the binomial theorem.
    pub fn agler_berger(j: u64) -> Result<Measure> {
        if j < 2 {
            return Err(Error::domain("Agler index j must be at least 2"));
        }
        let d = (j - 2) as usize;
        let coeffs = (0..=d)
            .map(|i| {
                let c = Rational::from_integer(binomial(d, i)?) * int(j as i64 - 1);
                Ok(if i % 2 == 1 { -c } else { c })
            })
            .collect::<Result<_>>()?;
        Measure::poly_density(coeffs)
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Measure> {
        let obj = v
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| Error::parse(path, "expected an object with exactly one of atomic, poly_density, log_power"))?;
        let (kind, body) = obj.iter().next().expect("one entry");
        let at = format!("{path}.{kind}");
        let list = |v: &Value, p: &str| -> Result<Vec<Value>> {
            v.as_array().cloned().ok_or_else(|| Error::parse(p, "expected a list"))
        };
        let m = match kind.as_str() {
            "atomic" => {
                let atoms = list(body, &at)?
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        let p = format!("{at}[{i}]");
                        match a.as_array().map(Vec::as_slice) {
                            Some([loc, mass]) => Ok((
                                rational_value(loc, &format!("{p}[0]"))?,
                                rational_value(mass, &format!("{p}[1]"))?,
                            )),
                            _ => Err(Error::parse(&p, "expected [location, mass]")),
                        }
                    })
                    .collect::<Result<_>>()?;
                Measure::atomic(atoms)
            }
            "poly_density" => {
                let cs = list(body, &at)?
                    .iter()
                    .enumerate()
                    .map(|(i, c)| rational_value(c, &format!("{at}[{i}]")))
                    .collect::<Result<_>>()?;
                Measure::poly_density(cs)
            }
            "log_power" => {
                let q = body
                    .as_object()
                    .filter(|o| o.len() == 1)
                    .and_then(|o| o.get("q"))
                    .ok_or_else(|| Error::parse(&at, "expected {\"q\": ...}"))?;
                Measure::log_power(rational_value(q, &format!("{at}.q"))?)
            }
            other => return Err(Error::parse(path, format!("unknown measure kind `{other}`"))),
        };
        m.map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::parse(&at, other.to_string()),
        })
    }

    pub fn parse_json(text: &str) -> Result<Measure> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        Measure::from_json(&v, "$")
    }

    pub fn to_json(&self) -> Value {
        match self {
            Measure::Atomic(atoms) => json!({
                "atomic": atoms
                    .iter()
                    .map(|(l, m)| json!([format_rational(l), format_rational(m)]))
                    .collect::<Vec<_>>()
            }),
            Measure::PolyDensity(cs) => json!({
                "poly_density": cs.iter().map(format_rational).collect::<Vec<_>>()
            }),
            Measure::LogPower { q } => json!({ "log_power": { "q": format_rational(q) } }),
        }
    }
}

/// `ψ(n) = a + bn + ∫ (1 − t^n) dμ(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevyKhintchinTriple {
    pub a: Rational,
    pub b: Rational,
    pub mu: Measure,
}

/// `ψ(n + offset)` with `t^0 = 1` for every `t`, including `t = 0`.
pub fn lk_sequence_at(t: &LevyKhintchinTriple, n: usize, offset: usize) -> Result<Rational> {
    let m = n + offset;
    let integral = match &t.mu {
        Measure::Atomic(atoms) => atoms
            .iter()
            .map(|(loc, mass)| Ok(mass * (Rational::one() - pow_int(loc, m as i64)?)))
            .sum::<Result<Rational>>()?,
        Measure::PolyDensity(cs) => cs
            .iter()
            .enumerate()
            .map(|(j, c)| c * (rational_recip(j + 1) - rational_recip(m + j + 1)))
            .sum(),
        Measure::LogPower { .. } => {
            return Err(Error::Unsupported(
                "log-power measures are only used as Berger measures".into(),
            ))
        }
    };
    Ok(&t.a + &t.b * int(m as i64) + integral)
}

/// `ψ(n)`.
pub fn lk_sequence(t: &LevyKhintchinTriple, n: usize) -> Result<Rational> {
    lk_sequence_at(t, n, 0)
}

fn rational_recip(m: usize) -> Rational {
    Rational::new(1.into(), (m as i64).into())
}

/// `(1/j, 0, (j−1)t^{j−1} dt)`, whose sequence is `(n+1)/(n+j)`.
pub fn agler_lk_triple(j: u64) -> Result<LevyKhintchinTriple> {
    if j < 2 {
        return Err(Error::domain("Agler index j must be at least 2"));
    }
    let mut cs = vec![Rational::zero(); j as usize];
    cs[j as usize - 1] = int(j as i64 - 1);
    Ok(LevyKhintchinTriple {
        a: Rational::new(1.into(), (j as i64).into()),
        b: Rational::zero(),
        mu: Measure::poly_density(cs)?,
    })
}

/// A moment of a measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MomentValue {
    Exact(Rational),
    /// A closed form evaluated through intervals.
    Closed(Expr),
}

impl MomentValue {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            MomentValue::Exact(r) => Some(r),
            MomentValue::Closed(_) => None,
        }
    }

    pub fn enclose(&self, bits: u32) -> Result<Interval> {
        match self {
            MomentValue::Exact(r) => Ok(Interval::from_rational(r, bits)),
            MomentValue::Closed(e) => eval_interval(e, bits),
        }
    }
}

/// `∫ t^n dμ(t)`.
///
/// For the log-power density this is the Gamma integral
/// `∫₀¹ u^n (−ln u)^{q−1} du = Γ(q) (n+1)^{−q}`, divided by `Γ(q)`.
pub fn berger_moment(m: &Measure, n: usize) -> Result<MomentValue> {
    Ok(match m {
        Measure::Atomic(atoms) => MomentValue::Exact(
            atoms
                .iter()
                .map(|(loc, mass)| Ok(mass * pow_int(loc, n as i64)?))
                .sum::<Result<Rational>>()?,
        ),
        Measure::PolyDensity(cs) => MomentValue::Exact(
            cs.iter()
                .enumerate()
                .map(|(j, c)| c * rational_recip(n + j + 1))
                .sum(),
        ),
        Measure::LogPower { q } => {
            let base = int(n as i64 + 1);
            if q.is_integer() {
                let e: i64 = q.to_integer().try_into().map_err(|_| Error::domain("exponent too large"))?;
                MomentValue::Exact(pow_int(&base, -e)?)
            } else {
                let g = Expr::gamma(Expr::rat(q.clone()));
                let integral = g.clone() * Expr::pow(Expr::rat(base), -q);
                MomentValue::Closed(integral / g)
            }
        }
    })
}

/// The moments of `weights` agree with those of `m` for `0 ≤ n ≤ N`:
/// exactly on rational paths, otherwise by overlapping enclosures narrower
/// than `2^{−tolerance_bits}`.
pub fn moment_match_verdict<S: Sequence>(
    weights: S,
    m: &Measure,
    n_max: usize,
    tolerance_bits: u32,
    cfg: &Config,
) -> Result<Verdict> {
    let label = format!("{} vs {}", weights.label(), m.to_json());
    let gammas = moments_from_weights(weights, n_max)?;
    let tol = Dyadic::pow2(-(tolerance_bits as i64));
    let mut undecided = Vec::new();
    let mut witness = None;
    let mut bits_used = None;
    let mut path = Path::Exact;
    for (n, g) in gammas.iter().enumerate() {
        let b = berger_moment(m, n)?;
        if let (Some(x), Some(y)) = (&g.rational, b.exact()) {
            if x != y {
                let detail = format!("γ_{n} = {}, measure moment = {}", format_rational(x), format_rational(y));
                witness = Some(Witness::exact(0, n, x - y).with_detail(detail));
                break;
            }
            continue;
        }
        path = Path::Interval;
        let mut decided = false;
        for bits in cfg.precision_ladder().filter(|&b| b >= tolerance_bits) {
            bits_used = Some(bits);
            let (x, y) = (g.interval(bits + 16)?, b.enclose(bits + 16)?);
            if x.hi() < y.lo() || y.hi() < x.lo() {
                let diff = x.sub(&y);
                let detail = format!("γ_{n} = {x}, measure moment = {y}");
                witness = Some(Witness::enclosed(0, n, diff.clone(), diff.sign()).with_detail(detail));
                decided = true;
                break;
            }
            if x.width() < tol && y.width() < tol {
                decided = true;
                break;
            }
        }
        if witness.is_some() {
            break;
        }
        if !decided {
            undecided.push((0, n));
        }
    }
    Ok(Verdict::new("moment-match", label, 0, n_max, witness, undecided, path, bits_used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use crate::sequences::SequenceDef;

    #[test]
    fn lk_examples() {
        let t = agler_lk_triple(2).unwrap();
        assert_eq!(lk_sequence(&t, 1).unwrap(), rat(2, 3));
        assert_eq!(lk_sequence(&t, 3).unwrap(), rat(4, 5));
        assert_eq!(lk_sequence(&t, 0).unwrap(), rat(1, 2));
        assert_eq!(lk_sequence(&agler_lk_triple(3).unwrap(), 0).unwrap(), rat(1, 3));
        let atom = LevyKhintchinTriple {
            a: int(0),
            b: int(0),
            mu: Measure::dirac(rat(1, 4)).unwrap(),
        };
        assert_eq!(lk_sequence(&atom, 1).unwrap(), rat(3, 4));
        assert_eq!(lk_sequence_at(&atom, 0, 1).unwrap(), rat(3, 4));
        let lp = LevyKhintchinTriple {
            a: int(0),
            b: int(0),
            mu: Measure::log_power(int(2)).unwrap(),
        };
        assert!(matches!(lk_sequence(&lp, 1), Err(Error::Unsupported(_))));
        assert!(agler_lk_triple(1).is_err());
    }

    #[test]
    fn berger_examples() {
        let m = Measure::agler_berger(2).unwrap();
        assert_eq!(m, Measure::PolyDensity(vec![int(1)]));
        assert_eq!(berger_moment(&m, 3).unwrap(), MomentValue::Exact(rat(1, 4)));
        let d = Measure::dirac(int(1)).unwrap();
        assert_eq!(berger_moment(&d, 9).unwrap(), MomentValue::Exact(int(1)));
        let lp = Measure::log_power(int(2)).unwrap();
        assert_eq!(berger_moment(&lp, 1).unwrap(), MomentValue::Exact(rat(1, 4)));
        let lp = Measure::log_power(rat(3, 2)).unwrap();
        let i = berger_moment(&lp, 0).unwrap().enclose(128).unwrap();
        assert!(i.contains_rational(&int(1)));
    }

    #[test]
    fn moment_matching() {
        let cfg = Config::default();
        let m = Measure::poly_density(vec![int(2), int(-2)]).unwrap();
        let v = moment_match_verdict(SequenceDef::agler(3).unwrap(), &m, 20, 96, &cfg).unwrap();
        assert!(v.is_pass());
        let d = Measure::dirac(int(1)).unwrap();
        assert!(moment_match_verdict(SequenceDef::unilateral(), &d, 10, 96, &cfg).unwrap().is_pass());
        let v = moment_match_verdict(SequenceDef::bergman(), &d, 1, 96, &cfg).unwrap();
        assert_eq!(v.witness_cell(), Some((0, 1)));
    }

    #[test]
    fn json_round_trip() {
        for text in [r#"{"atomic":[["1/4","1"]]}"#, r#"{"poly_density":["2","-2"]}"#, r#"{"log_power":{"q":"2"}}"#] {
            let m = Measure::parse_json(text).unwrap();
            assert_eq!(m.to_json(), serde_json::from_str::<Value>(text).unwrap());
        }
        let e = Measure::parse_json(r#"{"atomic":[["2","1"]]}"#).unwrap_err();
        assert!(e.to_string().contains("$.atomic"));
        let e = Measure::parse_json(r#"{"atomic":[["1/2"]]}"#).unwrap_err();
        assert!(e.to_string().contains("$.atomic[0]"));
    }
}
