//! Γ, ψ = Γ'/Γ and Euler's constant as interval enclosures.
//!
//! Both use the Stirling-type asymptotic expansions after shifting the
//! argument upward with the recurrences `ψ(x+1) = ψ(x) + 1/x` and
//! `Γ(x+1) = xΓ(x)`. For real arguments these expansions are enveloping: the
//! truncation error is bounded by the first omitted term, which is added to
//! the enclosure.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dyadic::{Dyadic, Round};
use super::elementary::{exp, ln, ln_rational, pi};
use super::interval::Interval;
use super::rational::{binomial, factorial, rat, Rational};
use crate::error::{Error, Result};

/// Largest Bernoulli index `B_{2N}` the expansions will use.
const MAX_TERMS: usize = 200;

static BERNOULLI: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();

/// Bernoulli number `B_m` (convention `B_1 = −1/2`).
pub fn bernoulli(m: usize) -> Rational {
    let cell = BERNOULLI.get_or_init(|| Mutex::new(vec![Rational::one()]));
    let mut table = cell.lock().expect("bernoulli cache poisoned");
    while table.len() <= m {
        let n = table.len();
        // Σ_{k=0}^{n} C(n+1, k) B_k = 0
        let mut acc = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let c = Rational::from_integer(binomial(n + 1, k).expect("k ≤ n+1"));
            acc += c * b;
        }
        let next = -acc / Rational::from_integer(BigInt::from(n + 1));
        table.push(next);
    }
    table[m].clone()
}

/// Rough `log2 |B_{2k}|` from `|B_{2k}| ≈ 2 (2k)! / (2π)^{2k}`.
fn log2_bernoulli_estimate(k: usize) -> f64 {
    let n = 2.0 * k as f64;
    let ln_fact = (1..=2 * k).map(|i| (i as f64).ln()).sum::<f64>();
    (2f64.ln() + ln_fact - n * (2.0 * std::f64::consts::PI).ln()) / 2f64.ln()
}

/// Choose `(shift_target, terms)` so that the first omitted term of an
/// expansion in powers of `1/y` is below `2^-(bits+16)` for all `y ≥ target`,
/// minimizing the shift work plus the series work.
fn plan(bits: u32, power_offset: i32) -> (u64, usize) {
    let target = bits as f64 + 16.0;
    let mut best: Option<(f64, u64, usize)> = None;
    for n in (4..=MAX_TERMS).step_by(4) {
        // |B_2n| / (2n · y^(2n - offset)) < 2^-target
        let e = (2 * n) as f64 - power_offset as f64;
        let log2_y = (log2_bernoulli_estimate(n) + target) / e;
        if log2_y > 40.0 {
            continue;
        }
        let y = 2f64.powf(log2_y).ceil() as u64 + 2;
        let cost = y as f64 + 3.0 * n as f64;
        if best.is_none_or(|(c, _, _)| cost < c) {
            best = Some((cost, y, n));
        }
    }
    let (_, y, n) = best.expect("some term count converges");
    (y, n)
}

fn rational_pow_recip(y: &Rational, e: usize) -> Rational {
    num_traits::pow(y.clone(), e).recip()
}

/// `ψ(x)` for rational `x > 0`.
pub fn digamma_rational(x: &Rational, bits: u32) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::domain(format!("digamma needs a positive argument, got {x}")));
    }
    let wp = bits + 24;
    let (target, terms) = plan(wp, 0);
    let target = Rational::from_integer(BigInt::from(target));
    // Shift: ψ(x) = ψ(x + s) − Σ_{i<s} 1/(x+i)
    let mut shift_sum = Rational::zero();
    let mut y = x.clone();
    let s = if y < target {
        (&target - &y).ceil().to_integer().to_u64().unwrap_or(0)
    } else {
        0
    };
    // Summing exact rationals would blow up for large s; sum enclosures instead.
    let mut shift_iv = Interval::from_int(0, wp);
    if s <= 64 {
        for _ in 0..s {
            shift_sum += y.recip();
            y += Rational::one();
        }
        shift_iv = Interval::from_rational(&shift_sum, wp);
    } else {
        for _ in 0..s {
            shift_iv = shift_iv.add(&Interval::from_rational(&y.recip(), wp));
            y += Rational::one();
        }
    }
    // ψ(y) ≈ ln y − 1/(2y) − Σ_{k=1}^{terms-1} B_2k / (2k y^2k)
    let mut series = Rational::zero();
    for k in 1..terms {
        series += bernoulli(2 * k) / Rational::from_integer(BigInt::from(2 * k))
            * rational_pow_recip(&y, 2 * k);
    }
    let tail = (bernoulli(2 * terms) / Rational::from_integer(BigInt::from(2 * terms))
        * rational_pow_recip(&y, 2 * terms))
    .abs();
    let head = ln_rational(&y, wp)?;
    let poly = -(y.recip() / Rational::from_integer(BigInt::from(2))) - series;
    let out = head
        .add(&Interval::from_rational(&poly, wp))
        .inflate(&Dyadic::from_rational(&tail, wp, Round::Up))
        .sub(&shift_iv);
    Ok(out.with_bits(bits))
}

/// `ψ` over a positive interval (ψ is increasing on `(0, ∞)`).
pub fn digamma(x: &Interval, bits: u32) -> Result<Interval> {
    if x.lo().signum() <= 0 {
        return Err(if x.hi().signum() <= 0 {
            Error::domain("digamma of a non-positive interval")
        } else {
            Error::Precision("digamma argument interval reaches 0".into())
        });
    }
    let lo = digamma_rational(&x.lo().to_rational(), bits)?;
    if x.is_point() {
        return Ok(lo);
    }
    let hi = digamma_rational(&x.hi().to_rational(), bits)?;
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone(), bits))
}

static EULER: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();

/// Euler's constant `γ = −ψ(1)`.
pub fn euler_gamma(bits: u32) -> Interval {
    let cell = EULER.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cell.lock().expect("euler cache poisoned").get(&bits) {
        return v.clone();
    }
    let v = digamma_rational(&Rational::one(), bits)
        .expect("ψ(1) is defined")
        .neg();
    cell.lock()
        .expect("euler cache poisoned")
        .insert(bits, v.clone());
    v
}

/// `ln Γ(x)` for rational `x > 0`.
pub fn ln_gamma_rational(x: &Rational, bits: u32) -> Result<Interval> {
    if !x.is_positive() {
        return Err(Error::domain(format!("ln Γ needs a positive argument, got {x}")));
    }
    let wp = bits + 24;
    let (target, terms) = plan(wp, 1);
    let target = Rational::from_integer(BigInt::from(target));
    // ln Γ(x) = ln Γ(x+s) − ln(x (x+1) ⋯ (x+s−1))
    let mut y = x.clone();
    let mut prod = Rational::one();
    while y < target {
        prod *= &y;
        y += Rational::one();
    }
    // (y − 1/2) ln y − y + ln(2π)/2 + Σ_{k=1}^{terms-1} B_2k / (2k(2k−1) y^(2k−1))
    let mut series = Rational::zero();
    for k in 1..terms {
        let d = Rational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        series += bernoulli(2 * k) / d * rational_pow_recip(&y, 2 * k - 1);
    }
    let d = Rational::from_integer(BigInt::from(2 * terms * (2 * terms - 1)));
    let tail = (bernoulli(2 * terms) / d * rational_pow_recip(&y, 2 * terms - 1)).abs();
    let ln_y = ln_rational(&y, wp)?;
    let two_pi = pi(wp).mul(&Interval::from_int(2, wp));
    let half_ln_2pi = ln(&two_pi, wp)?.div_int(2);
    let mut out = ln_y
        .mul_rational(&(&y - rat(1, 2)))
        .add(&Interval::from_rational(&(series - &y), wp))
        .add(&half_ln_2pi)
        .inflate(&Dyadic::from_rational(&tail, wp, Round::Up));
    if !prod.is_one() {
        out = out.sub(&ln_rational(&prod, wp)?);
    }
    Ok(out.with_bits(bits))
}

/// Exact `Γ(m) = (m−1)!` for a positive integer argument.
pub fn gamma_exact_integer(m: u64) -> Rational {
    Rational::from_integer(BigInt::from(factorial(m - 1)))
}

/// `Γ(x)` for rational `x > 0`.
pub fn gamma_rational(x: &Rational, bits: u32) -> Result<Interval> {
    if x.is_integer() && x.is_positive() {
        if let Some(m) = x.to_integer().to_u64().filter(|&m| m <= 2000) {
            return Ok(Interval::from_rational(&gamma_exact_integer(m), bits));
        }
    }
    let l = ln_gamma_rational(x, bits + 16)?;
    Ok(exp(&l, bits + 16).with_bits(bits))
}

/// Γ over a positive interval. Γ decreases on `(0, x₀]` and increases on
/// `[x₀, ∞)` with `x₀ ≈ 1.4616` and `Γ(x₀) ≈ 0.8856`.
pub fn gamma(x: &Interval, bits: u32) -> Result<Interval> {
    if x.lo().signum() <= 0 {
        return Err(if x.hi().signum() <= 0 {
            Error::domain("Γ of a non-positive interval")
        } else {
            Error::Precision("Γ argument interval reaches 0".into())
        });
    }
    let lo = gamma_rational(&x.lo().to_rational(), bits)?;
    if x.is_point() {
        return Ok(lo);
    }
    let hi = gamma_rational(&x.hi().to_rational(), bits)?;
    let x0_lo = rat(146, 100);
    let x0_hi = rat(147, 100);
    let a = x.lo().to_rational();
    let b = x.hi().to_rational();
    let upper = lo.hi().clone().max(hi.hi().clone());
    let lower = if a >= x0_hi {
        lo.lo().clone()
    } else if b <= x0_lo {
        hi.lo().clone()
    } else {
        // interval may contain the minimum; 0.885 < min Γ
        Dyadic::from_rational(&rat(885, 1000), bits, Round::Down)
    };
    Ok(Interval::new(lower, upper, bits))
}
