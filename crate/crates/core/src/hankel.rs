//! Moment Hankel matrices `H(n,k) = (γ_{n+i+j})_{i,j=0..k}` and exact
//! positive semidefiniteness.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classifiers::{Path, Verdict, Witness};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::rational::pow_exact;
use crate::numerics::{elementary, format_rational, Interval, Rational, Sign};
use crate::sequences::{MomentSequence, Sequence};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HankelMatrix {
    pub base_index: usize,
    entries: Vec<Vec<Rational>>,
}

impl HankelMatrix {
    /// From moments `γ_0, γ_1, …` (at least `n + 2k + 1` of them).
    pub fn from_moments(gamma: &[Rational], n: usize, k: usize) -> Result<HankelMatrix> {
        if gamma.len() < n + 2 * k + 1 {
            return Err(Error::domain(format!(
                "H({n},{k}) needs {} moments, got {}",
                n + 2 * k + 1,
                gamma.len()
            )));
        }
        let entries = (0..=k)
            .map(|i| (0..=k).map(|j| gamma[n + i + j].clone()).collect())
            .collect();
        Ok(HankelMatrix {
            base_index: n,
            entries,
        })
    }

    /// Number of rows, `k + 1`.
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn is_psd(&self) -> bool {
        ldlt(&self.entries).is_none()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(out, "{}", cells.join(",")).expect("write to string");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        serde_json::json!({ "n": self.base_index, "k": self.size() - 1, "entries": rows })
    }
}

/// `H(n,k)` of a moment sequence with rational terms.
pub fn hankel_matrix<S: Sequence + ?Sized>(gamma: &S, n: usize, k: usize) -> Result<HankelMatrix> {
    if k == 0 {
        return Err(Error::domain("Hankel order k must be at least 1"));
    }
    let gs = gamma.rationals(n + 2 * k + 1)?.ok_or_else(|| {
        Error::Unsupported(format!("Hankel matrices need rational moments; {} is not", gamma.label()))
    })?;
    HankelMatrix::from_moments(&gs, n, k)
}

/// Why elimination stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Obstruction {
    value: Rational,
    detail: String,
}

/// Symmetric LDLᵀ, pivoting on the largest remaining diagonal entry.
/// Returns the obstruction to semidefiniteness, if any.
fn ldlt(m: &[Vec<Rational>]) -> Option<Obstruction> {
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut live: Vec<usize> = (0..a.len()).collect();
    while !live.is_empty() {
        if let Some(&i) = live.iter().find(|&&i| a[i][i].is_negative()) {
            return Some(Obstruction {
                value: a[i][i].clone(),
                detail: format!("negative diagonal entry at index {i} after elimination"),
            });
        }
        let p = *live
            .iter()
            .max_by(|&&x, &&y| a[x][x].cmp(&a[y][y]).then(y.cmp(&x)))
            .expect("nonempty");
        if a[p][p].is_zero() {
            // All remaining diagonals vanish: PSD iff the block is zero.
            for &i in &live {
                for &j in &live {
                    if !a[i][j].is_zero() {
                        return Some(Obstruction {
                            value: a[i][j].clone(),
                            detail: format!("zero diagonal at {i} with nonzero entry at ({i}, {j})"),
                        });
                    }
                }
            }
            return None;
        }
        live.retain(|&i| i != p);
        let d = a[p][p].clone();
        for &i in &live {
            let f = &a[i][p] / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &live {
                let delta = &f * &a[p][j];
                a[i][j] -= delta;
            }
        }
    }
    None
}

fn check_square_symmetric(m: &[Vec<Rational>]) -> Result<()> {
    for (i, row) in m.iter().enumerate() {
        if row.len() != m.len() {
            return Err(Error::domain(format!("row {i} has length {}, expected {}", row.len(), m.len())));
        }
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return Err(Error::domain(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

/// Exact positive semidefiniteness of a symmetric rational matrix.
pub fn is_psd_exact(m: &[Vec<Rational>]) -> Result<bool> {
    check_square_symmetric(m)?;
    Ok(ldlt(m).is_none())
}

/// `H(n,k) ⪰ 0` for `0 ≤ n ≤ N`, `1 ≤ k ≤ K`. A failure carries the
/// smallest `(n, k)`.
pub fn bram_halmos_verdict<S: Sequence + ?Sized>(
    weights: &S,
    n_max: usize,
    k_max: usize,
    cfg: &Config,
) -> Result<Verdict> {
    if k_max == 0 {
        return Err(Error::domain("K must be at least 1"));
    }
    if k_max > cfg.hankel_cap {
        return Err(Error::domain(format!(
            "Hankel order {k_max} exceeds the configured cap {}",
            cfg.hankel_cap
        )));
    }
    let gamma = MomentSequence::new(weights);
    let gs = gamma.rationals(n_max + 2 * k_max + 1)?.ok_or_else(|| {
        Error::Unsupported(format!("Hankel matrices need rational moments; {} is not", gamma.label()))
    })?;
    let cells: Vec<(usize, usize)> = (0..=n_max)
        .flat_map(|n| (1..=k_max).map(move |k| (n, k)))
        .collect();
    let first = cells
        .par_iter()
        .map(|&(n, k)| {
            let h = HankelMatrix::from_moments(&gs, n, k).expect("enough moments");
            ldlt(&h.entries).map(|o| (n, k, o))
        })
        .find_first(Option::is_some)
        .flatten();
    let witness = first.map(|(n, k, o)| Witness::exact(k, n, o.value).with_detail(o.detail));
    Ok(Verdict::new(
        "bram-halmos",
        weights.label(),
        k_max,
        n_max,
        witness,
        Vec::new(),
        Path::Exact,
        None,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsdOutcome {
    Psd,
    NotPsd,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeEntry {
    #[serde(with = "crate::numerics::rational::serde_rational")]
    pub p: Rational,
    pub outcome: PsdOutcome,
    pub path: Path,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits_used: Option<u32>,
}

/// Interval LDLᵀ with the same pivot rule. Certifies positive
/// definiteness, or a certainly negative diagonal.
fn ldlt_interval(m: Vec<Vec<Interval>>) -> Result<PsdOutcome> {
    let mut a = m;
    let mut live: Vec<usize> = (0..a.len()).collect();
    while !live.is_empty() {
        if live.iter().any(|&i| a[i][i].sign() == Sign::Negative) {
            return Ok(PsdOutcome::NotPsd);
        }
        let p = *live
            .iter()
            .max_by(|&&x, &&y| a[x][x].lo().cmp(a[y][y].lo()).then(y.cmp(&x)))
            .expect("nonempty");
        if a[p][p].sign() != Sign::Positive {
            return Ok(PsdOutcome::Undecided);
        }
        live.retain(|&i| i != p);
        let d = a[p][p].clone();
        for &i in &live {
            let f = a[i][p].div(&d)?;
            for &j in &live {
                a[i][j] = a[i][j].sub(&f.mul(&a[p][j]));
            }
        }
    }
    Ok(PsdOutcome::Psd)
}

/// Positive semidefiniteness of the entrywise `p`-th powers of `H(n,k)`
/// for each `p`. Exact when every power is rational; otherwise interval
/// elimination with escalating precision.
pub fn schur_power_psd_probe<S: Sequence + ?Sized>(
    gamma: &S,
    ps: &[Rational],
    n: usize,
    k: usize,
    cfg: &Config,
) -> Result<Vec<ProbeEntry>> {
    if k > cfg.hankel_cap {
        return Err(Error::domain(format!("Hankel order {k} exceeds the configured cap {}", cfg.hankel_cap)));
    }
    let h = hankel_matrix(gamma, n, k)?;
    if h.entries.iter().flatten().any(|g| !g.is_positive()) {
        return Err(Error::domain("Schur powers need positive entries"));
    }
    ps.par_iter()
        .map(|p| {
            if p.is_negative() {
                return Err(Error::domain("Schur power must be nonnegative"));
            }
            let exact: Option<Vec<Vec<Rational>>> = h
                .entries
                .iter()
                .map(|r| r.iter().map(|g| pow_exact(g, p)).collect())
                .collect();
            if let Some(m) = exact {
                let outcome = if ldlt(&m).is_none() { PsdOutcome::Psd } else { PsdOutcome::NotPsd };
                return Ok(ProbeEntry {
                    p: p.clone(),
                    outcome,
                    path: Path::Exact,
                    bits_used: None,
                });
            }
            let mut last = (PsdOutcome::Undecided, cfg.start_bits);
            for bits in cfg.precision_ladder() {
                let wp = bits + 16;
                let m = h
                    .entries
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|g| elementary::pow(&Interval::from_rational(g, wp), p, wp))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                last = (ldlt_interval(m)?, bits);
                if last.0 != PsdOutcome::Undecided {
                    break;
                }
            }
            Ok(ProbeEntry {
                p: p.clone(),
                outcome: last.0,
                path: Path::Interval,
                bits_used: Some(last.1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};
    use crate::sequences::SequenceDef;

    fn moments(s: SequenceDef) -> MomentSequence {
        MomentSequence::new(s)
    }

    #[test]
    fn matrices() {
        let h = hankel_matrix(&moments(SequenceDef::bergman()), 0, 1).unwrap();
        assert_eq!(h.rows(), &[vec![int(1), rat(1, 2)], vec![rat(1, 2), rat(1, 3)]]);
        assert!(h.is_psd());
        let h = hankel_matrix(&moments(SequenceDef::unilateral()), 3, 2).unwrap();
        assert!(h.rows().iter().flatten().all(|e| *e == int(1)));
        let h = hankel_matrix(&moments(SequenceDef::dirichlet()), 0, 1).unwrap();
        assert_eq!(h.rows(), &[vec![int(1), int(2)], vec![int(2), int(3)]]);
        assert!(!h.is_psd());
        assert_eq!(h.to_csv(), "1,2\n2,3\n");
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd_exact(&[vec![int(1), rat(1, 2)], vec![rat(1, 2), rat(1, 3)]]).unwrap());
        assert!(!is_psd_exact(&[vec![int(1), int(2)], vec![int(2), int(3)]]).unwrap());
        assert!(is_psd_exact(&[vec![int(0); 3], vec![int(0); 3], vec![int(0); 3]]).unwrap());
        assert!(!is_psd_exact(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap());
        assert!(is_psd_exact(&[vec![int(1), int(2)], vec![int(3), int(4)]]).is_err());
    }

    #[test]
    fn bram_halmos_examples() {
        let cfg = Config::default();
        assert!(bram_halmos_verdict(&SequenceDef::bergman(), 6, 5, &cfg).unwrap().is_pass());
        let v = bram_halmos_verdict(&SequenceDef::dirichlet(), 0, 1, &cfg).unwrap();
        assert_eq!(v.witness_cell(), Some((1, 0)));
        assert!(bram_halmos_verdict(&SequenceDef::unilateral(), 4, 4, &cfg).unwrap().is_pass());
    }

    #[test]
    fn schur_probe_examples() {
        let cfg = Config::default();
        let g = moments(SequenceDef::bergman());
        let out = schur_power_psd_probe(&g, &[int(2), rat(1, 2), int(0)], 0, 2, &cfg).unwrap();
        assert!(out.iter().all(|e| e.outcome == PsdOutcome::Psd));
        assert_eq!(out[0].path, Path::Exact);
        assert_eq!(out[1].path, Path::Interval);
        // Dirichlet moments are not PSD, and neither is their square.
        let d = moments(SequenceDef::dirichlet());
        let out = schur_power_psd_probe(&d, &[int(1), rat(1, 2)], 0, 1, &cfg).unwrap();
        assert_eq!(out[0].outcome, PsdOutcome::NotPsd);
        assert_eq!(out[1].outcome, PsdOutcome::NotPsd);
    }
}
