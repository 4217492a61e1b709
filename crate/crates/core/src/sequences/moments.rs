use num_traits::{One, Signed};

use super::{Sequence, SequenceDef, Term};
use crate::error::{Error, Result};
use crate::numerics::{format_rational, Rational};

/// Moments `γ_0 = 1`, `γ_n = ∏_{i<n} α_i²` of a weight sequence.
#[derive(Debug, Clone)]
pub struct MomentSequence<S = SequenceDef> {
    pub weights: S,
}

impl<S: Sequence> MomentSequence<S> {
    pub fn new(weights: S) -> Self {
        MomentSequence { weights }
    }
}

impl<S: Sequence> Sequence for MomentSequence<S> {
    fn terms(&self, len: usize) -> Result<Vec<Term>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        let w = self.weights.terms(len - 1)?;
        let mut out = Vec::with_capacity(len);
        let mut acc = Term::one();
        out.push(acc.clone());
        for t in &w {
            acc = acc.mul(&t.mul(t));
            out.push(acc.clone());
        }
        Ok(out)
    }

    fn label(&self) -> String {
        format!("moments({})", self.weights.label())
    }
}

/// `γ_0..γ_N`.
pub fn moments_from_weights<S: Sequence>(s: S, n_max: usize) -> Result<Vec<Term>> {
    MomentSequence::new(s).terms(n_max + 1)
}

/// Weights squared `α_n² = γ_{n+1}/γ_n`.
pub fn weights_from_moments(gamma: &[Rational]) -> Result<Vec<Rational>> {
    match gamma.first() {
        None => return Err(Error::domain("empty moment list")),
        Some(g) if !g.is_one() => {
            return Err(Error::domain(format!(
                "moment list must start with 1, got {}",
                format_rational(g)
            )))
        }
        _ => {}
    }
    if let Some((i, g)) = gamma.iter().enumerate().find(|(_, g)| !g.is_positive()) {
        return Err(Error::domain(format!(
            "moment {i} must be positive, got {}",
            format_rational(g)
        )));
    }
    Ok(gamma.windows(2).map(|w| &w[1] / &w[0]).collect())
}
