//! Sign sweeps over `(k, n)` grids of differences.

use rayon::prelude::*;

use super::{Path, Witness};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::{Interval, LogValue, Rational, Sign};
use crate::numerics::rational::nabla_coefficient;
use crate::sequences::Term;

/// The inequality every cell must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Want {
    NonPositive,
    NonNegative,
}

impl Want {
    fn violated(self, s: Sign) -> bool {
        match self {
            Want::NonPositive => s == Sign::Positive,
            Want::NonNegative => s == Sign::Negative,
        }
    }
}

/// Whether differences are taken of the terms or of their logarithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Source {
    Values,
    Logs,
}

/// Orders `k_lo..=k_hi`, start indices `0..=n_max`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Grid {
    pub k_lo: usize,
    pub k_hi: usize,
    pub n_max: usize,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.n_max + self.k_hi + 1
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        (self.k_lo..=self.k_hi)
            .flat_map(|k| (0..=self.n_max).map(move |n| (k, n)))
            .collect()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Outcome {
    pub witness: Option<Witness>,
    pub undecided: Vec<(usize, usize)>,
    pub path: Path,
    pub bits_used: Option<u32>,
}

/// Sweeps the grid and returns the lexicographically smallest violation
/// together with every undecided cell that precedes it.
pub(crate) fn sweep(ts: &[Term], source: Source, grid: Grid, want: Want, cfg: &Config) -> Result<Outcome> {
    debug_assert!(ts.len() >= grid.len());
    let ts = &ts[..grid.len()];
    match source {
        Source::Values => {
            if let Some(xs) = ts.iter().map(|t| t.rational.clone()).collect::<Option<Vec<_>>>() {
                return Ok(exact_values(xs, grid, want));
            }
        }
        Source::Logs => {
            if let Some(ls) = ts.iter().map(|t| t.log.clone()).collect::<Option<Vec<_>>>() {
                return exact_logs(ts, ls, grid, want, cfg);
            }
        }
    }
    enclosed(ts, source, grid, want, cfg)
}

fn next_row<T: Send + Sync>(row: &[T], sub: impl Fn(&T, &T) -> T + Sync) -> Vec<T> {
    row.par_windows(2).map(|w| sub(&w[0], &w[1])).collect()
}

fn exact_values(xs: Vec<Rational>, grid: Grid, want: Want) -> Outcome {
    let mut row = xs;
    for k in 0..=grid.k_hi {
        if k >= grid.k_lo {
            let hit = row[..=grid.n_max]
                .par_iter()
                .position_first(|v| want.violated(Sign::of_rational(v)));
            if let Some(n) = hit {
                let v = row[n].clone();
                return Outcome {
                    witness: Some(Witness::exact(k, n, v)),
                    undecided: Vec::new(),
                    path: Path::Exact,
                    bits_used: None,
                };
            }
        }
        if k < grid.k_hi {
            row = next_row(&row, |a, b| a - b);
        }
    }
    Outcome {
        witness: None,
        undecided: Vec::new(),
        path: Path::Exact,
        bits_used: None,
    }
}

fn exact_logs(ts: &[Term], logs: Vec<LogValue>, grid: Grid, want: Want, cfg: &Config) -> Result<Outcome> {
    // A cheap enclosure settles almost every cell; the rest go to the exact
    // sign procedure.
    let wp = 128 + 2 * grid.k_hi as u32;
    let mut irow: Vec<Interval> = ts.par_iter().map(|t| t.ln_interval(wp)).collect::<Result<_>>()?;
    // Exact combinations are built per cell, only when the enclosure cannot
    // decide it; a full row recurrence over log combinations is far costlier.
    let cell = |k: usize, n: usize| -> LogValue {
        logs[n..=n + k]
            .iter()
            .enumerate()
            .fold(LogValue::zero(), |acc, (i, l)| acc.add_scaled(l, &nabla_coefficient(k, i)))
    };
    let mut undecided = Vec::new();
    for k in 0..=grid.k_hi {
        if k >= grid.k_lo {
            let signs: Vec<Sign> = (0..=grid.n_max)
                .into_par_iter()
                .map(|n| {
                    let s = irow[n].sign();
                    if s.is_decided() {
                        Ok(s)
                    } else {
                        cell(k, n).sign(cfg)
                    }
                })
                .collect::<Result<_>>()?;
            for (n, s) in signs.iter().enumerate() {
                if want.violated(*s) {
                    let w = Witness::log(k, n, cell(k, n), irow[n].with_bits(64), *s);
                    return Ok(Outcome {
                        witness: Some(w),
                        undecided,
                        path: Path::Exact,
                        bits_used: None,
                    });
                }
                if !s.is_decided() {
                    undecided.push((k, n));
                }
            }
        }
        if k < grid.k_hi {
            irow = next_row(&irow, |a, b| a.sub(b));
        }
    }
    Ok(Outcome {
        witness: None,
        undecided,
        path: Path::Exact,
        bits_used: None,
    })
}

/// `run[n]`: length of the run of structurally equal closed forms starting
/// at `n`. A difference of order `k ≥ 1` over such a run is exactly zero.
fn equal_runs(ts: &[Term]) -> Vec<usize> {
    let mut run = vec![1; ts.len()];
    for n in (0..ts.len().saturating_sub(1)).rev() {
        if ts[n].expr == ts[n + 1].expr {
            run[n] = run[n + 1] + 1;
        }
    }
    run
}

fn enclosed(ts: &[Term], source: Source, grid: Grid, want: Want, cfg: &Config) -> Result<Outcome> {
    let runs = equal_runs(ts);
    let mut pending = grid.cells();
    let mut witness: Option<Witness> = None;
    let mut bits_used = cfg.start_bits;
    for bits in cfg.precision_ladder() {
        bits_used = bits;
        let wp = bits + 2 * grid.k_hi as u32 + 16;
        let row0: Result<Vec<Interval>> = ts
            .par_iter()
            .map(|t| match source {
                Source::Values => t.interval(wp),
                Source::Logs => t.ln_interval(wp),
            })
            .collect();
        let mut row = match row0 {
            Ok(r) => r,
            Err(Error::Precision(_)) => continue,
            Err(e) => return Err(e),
        };
        let mut rows = Vec::with_capacity(grid.k_hi + 1);
        for k in 0..=grid.k_hi {
            let next = if k < grid.k_hi {
                next_row(&row, |a, b| a.sub(b))
            } else {
                Vec::new()
            };
            rows.push(row);
            row = next;
        }
        let mut still = Vec::new();
        for &(k, n) in &pending {
            let s = if k >= 1 && runs[n] > k {
                Sign::Zero
            } else {
                rows[k][n].sign()
            };
            if want.violated(s) {
                witness = Some(Witness::enclosed(k, n, rows[k][n].with_bits(bits), s));
                break;
            }
            if !s.is_decided() {
                still.push((k, n));
            }
        }
        pending = still;
        if pending.is_empty() {
            break;
        }
    }
    Ok(Outcome {
        witness,
        undecided: pending,
        path: Path::Interval,
        bits_used: Some(bits_used),
    })
}
