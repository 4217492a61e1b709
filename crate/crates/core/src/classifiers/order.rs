use serde::Serialize;

use super::{completely_alternating_verdict, Witness};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::numerics::rational::pow_exact;
use crate::numerics::{eval_interval, int, sign_adaptive_with_bits, Expr, Rational, Sign};
use crate::sequences::{Sequence, TableEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderStatus {
    /// A violation at order `k̂ + 1` was found and every lower order held.
    Decided,
    /// No violation within the window cap, or undecided cells block it.
    Undecided,
}

/// Largest alternation order supported by the searched window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub sequence: String,
    pub max_alternating_order: usize,
    pub failure_witness: Option<Witness>,
    pub window_used: usize,
    pub status: OrderStatus,
    pub undecided_cells: Vec<(usize, usize)>,
}

/// Finds the largest `k̂ ≤ K_max` such that `s` is `k̂`-hyperalternating on
/// the window, with a witness at order `k̂ + 1`. The window doubles from
/// `n_start` until a witness appears or `witness_window_cap` is reached.
pub fn alternating_order<S: Sequence + ?Sized>(
    s: &S,
    k_max: usize,
    n_start: usize,
    cfg: &Config,
) -> Result<OrderReport> {
    if k_max == 0 {
        return Err(Error::domain("K_max must be at least 1"));
    }
    let cap = cfg.witness_window_cap.max(n_start);
    let mut n = n_start.max(1);
    loop {
        // One order beyond K_max so that k̂ = K_max can be decided.
        let v = completely_alternating_verdict(s, k_max + 1, n, cfg)?;
        if let Some(w) = v.witness {
            let status = if v.undecided_cells.is_empty() {
                OrderStatus::Decided
            } else {
                OrderStatus::Undecided
            };
            return Ok(OrderReport {
                sequence: s.label(),
                max_alternating_order: w.k - 1,
                failure_witness: Some(w),
                window_used: n,
                status,
                undecided_cells: v.undecided_cells,
            });
        }
        if n >= cap {
            let lowest_undecided = v.undecided_cells.iter().map(|c| c.0).min();
            return Ok(OrderReport {
                sequence: s.label(),
                max_alternating_order: lowest_undecided.map_or(k_max, |k| (k - 1).min(k_max)),
                failure_witness: None,
                window_used: n,
                status: OrderStatus::Undecided,
                undecided_cells: v.undecided_cells,
            });
        }
        n = (n * 2).min(cap);
    }
}

/// One evaluation of `f(p) = 1 − 2a^p + (ab)^p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerProfileEntry {
    #[serde(with = "crate::numerics::rational::serde_rational")]
    pub p: Rational,
    pub value: TableEntry,
    /// Whether `f(p) ≤ 0`; `None` if the sign could not be decided.
    pub satisfied: Option<bool>,
}

/// The 2-expansivity expression `1 − 2α₀^{2p} + (α₀α₁)^{2p}` for each `p`,
/// given `a = α₀²` and `b = α₁²`.
pub fn expansivity_power_profile(
    a: &Rational,
    b: &Rational,
    ps: &[Rational],
    cfg: &Config,
) -> Result<Vec<PowerProfileEntry>> {
    if *a <= int(0) || *b <= int(0) {
        return Err(Error::domain("weights squared must be positive"));
    }
    let ab = a * b;
    ps.iter()
        .map(|p| {
            if let (Some(ap), Some(abp)) = (pow_exact(a, p), pow_exact(&ab, p)) {
                let v = int(1) - ap * int(2) + abp;
                let satisfied = Some(Sign::of_rational(&v).is_nonpositive());
                return Ok(PowerProfileEntry {
                    p: p.clone(),
                    value: TableEntry::Exact(v),
                    satisfied,
                });
            }
            let e = Expr::int(1) - Expr::int(2) * Expr::pow(Expr::rat(a.clone()), p.clone())
                + Expr::pow(Expr::rat(ab.clone()), p.clone());
            let (sign, bits) = sign_adaptive_with_bits(&e, cfg.start_bits, cfg.max_bits)?;
            let satisfied = sign.is_decided().then(|| sign.is_nonpositive());
            Ok(PowerProfileEntry {
                p: p.clone(),
                value: TableEntry::Enclosed(eval_interval(&e, bits)?),
                satisfied,
            })
        })
        .collect()
}
