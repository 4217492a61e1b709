//! Rigorous `ln`, `exp`, `sqrt`, rational powers and the constants `ln 2`, `π`.
//!
//! All series carry an explicit truncation bound that is added to the
//! enclosure, so results are valid intervals at any precision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};
use super::interval::Interval;
use super::rational::{rat, Rational};
use crate::error::{Error, Result};

/// Extra working bits used inside series evaluations.
const GUARD: u32 = 24;

fn cached(
    cell: &'static OnceLock<Mutex<HashMap<u32, Interval>>>,
    bits: u32,
    compute: impl FnOnce(u32) -> Interval,
) -> Interval {
    let map = cell.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("constant cache poisoned").get(&bits) {
        return v.clone();
    }
    let v = compute(bits);
    map.lock()
        .expect("constant cache poisoned")
        .insert(bits, v.clone());
    v
}

/// `atanh(z) = Σ z^(2i+1)/(2i+1)` for a rational `|z| ≤ 1/3`, summed in
/// fixed point with scale `2^wp`.
///
/// Each truncated power `T_i ≈ z^(2i+1) 2^wp` is off by at most `i + 1`
/// units (earlier errors shrink by `z² < 1`), so each summand is off by at
/// most 2 units.
fn atanh_small(z: &Rational, bits: u32) -> Interval {
    debug_assert!(z.abs() <= rat(1, 3));
    if z.is_zero() {
        return Interval::from_int(0, bits);
    }
    let p = z.numer().abs();
    let q = z.denom().clone();
    // Relative precision: widen the scale by the leading zero bits of z.
    let wp = (bits + GUARD) as u64 + q.bits().saturating_sub(p.bits());
    let (p2, q2) = (&p * &p, &q * &q);
    let mut t = (&p << wp) / &q;
    let mut sum = BigInt::zero();
    let mut i: u64 = 0;
    while !t.is_zero() {
        sum += &t / BigInt::from(2 * i + 1);
        t = t * &p2 / &q2;
        i += 1;
    }
    // Remaining terms are each below i + 1 units; the geometric tail with
    // ratio z² ≤ 1/9 adds at most (i + 1)·9/8 units.
    let err = BigInt::from(2 * i + 2 * (i + 1) + 2);
    let lo = Dyadic::new(&sum - &err, -(wp as i64));
    let hi = Dyadic::new(&sum + &err, -(wp as i64));
    let out = Interval::new(lo, hi, bits);
    if z.is_negative() {
        out.neg()
    } else {
        out
    }
}

/// `atan(z)` for a rational `|z| ≤ 1/2`; alternating series.
fn atan_small(z: &Rational, bits: u32) -> Interval {
    let wp = bits + GUARD;
    let zi = Interval::from_rational(z, wp);
    let z2 = Interval::from_rational(&(z * z), wp);
    let stop = -(wp as i64) - 8;
    let mut sum = Interval::from_int(0, wp);
    let mut pow = zi;
    let mut i: i64 = 0;
    loop {
        let term = pow.div_int(2 * i + 1);
        sum = if i % 2 == 0 { sum.add(&term) } else { sum.sub(&term) };
        pow = pow.mul(&z2);
        i += 1;
        let mag = pow.lo().abs().max(pow.hi().abs());
        if mag.magnitude_bits() < stop {
            return sum.inflate(&mag).with_bits(bits);
        }
    }
}

static LN2: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();
static PI: OnceLock<Mutex<HashMap<u32, Interval>>> = OnceLock::new();

/// `ln 2 = 18 atanh(1/26) − 2 atanh(1/4801) + 8 atanh(1/8749)`.
pub fn ln2(bits: u32) -> Interval {
    cached(&LN2, bits, |bits| {
        let wp = bits + 8;
        let a = atanh_small(&rat(1, 26), wp).mul(&Interval::from_int(18, wp));
        let b = atanh_small(&rat(1, 4801), wp).mul(&Interval::from_int(2, wp));
        let c = atanh_small(&rat(1, 8749), wp).mul(&Interval::from_int(8, wp));
        a.sub(&b).add(&c).with_bits(bits)
    })
}

/// `π = 16 atan(1/5) − 4 atan(1/239)`.
pub fn pi(bits: u32) -> Interval {
    cached(&PI, bits, |bits| {
        let wp = bits + 8;
        let a = atan_small(&rat(1, 5), wp).mul(&Interval::from_int(16, wp));
        let b = atan_small(&rat(1, 239), wp).mul(&Interval::from_int(4, wp));
        a.sub(&b).with_bits(bits)
    })
}

/// Keyed by the reduced numerator and denominator: hashing a `Ratio` runs a
/// continued-fraction expansion.
type LnCache = Mutex<HashMap<(BigInt, BigInt, u32), Interval>>;

static LN_CACHE: OnceLock<LnCache> = OnceLock::new();
const LN_CACHE_CAP: usize = 1 << 16;

/// Enclosure of `ln r` for a positive rational.
pub fn ln_rational(r: &Rational, bits: u32) -> Result<Interval> {
    if !r.is_positive() {
        return Err(Error::domain(format!("ln of non-positive value {r}")));
    }
    if r.is_one() {
        return Ok(Interval::from_int(0, bits));
    }
    let cache = LN_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (r.numer().clone(), r.denom().clone(), bits);
    if let Some(v) = cache.lock().expect("ln cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = ln_rational_uncached(r, bits);
    let mut map = cache.lock().expect("ln cache poisoned");
    if map.len() >= LN_CACHE_CAP {
        map.clear();
    }
    map.insert(key, v.clone());
    Ok(v)
}

fn ln_rational_uncached(r: &Rational, bits: u32) -> Interval {
    let mut e = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scale = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as u64)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as u64)
        }
    };
    let mut m = r / scale(e);
    if m < rat(2, 3) {
        e -= 1;
        m *= Rational::from_integer(BigInt::from(2));
    } else if m > rat(4, 3) {
        e += 1;
        m /= Rational::from_integer(BigInt::from(2));
    }
    let z = (&m - Rational::one()) / (&m + Rational::one());
    let wp = bits + 8 + (64 - (e.unsigned_abs()).leading_zeros());
    let mut out = atanh_small(&z, wp).mul(&Interval::from_int(2, wp));
    if e != 0 {
        out = out.add(&ln2(wp).mul(&Interval::from_int(e, wp)));
    }
    out.with_bits(bits)
}

/// Enclosure of `ln x` over a positive interval.
pub fn ln(x: &Interval, bits: u32) -> Result<Interval> {
    if x.hi().signum() <= 0 {
        return Err(Error::domain("ln of a non-positive interval"));
    }
    if x.lo().signum() <= 0 {
        return Err(Error::Precision("ln argument interval reaches 0".into()));
    }
    let lo = ln_rational(&x.lo().to_rational(), bits)?;
    if x.is_point() {
        return Ok(lo);
    }
    let hi = ln_rational(&x.hi().to_rational(), bits)?;
    Ok(Interval::new(lo.lo().clone(), hi.hi().clone(), bits))
}

/// Enclosure of `e^d` for a dyadic point.
fn exp_point(d: &Dyadic, bits: u32) -> Interval {
    if d.is_zero() {
        return Interval::from_int(1, bits);
    }
    let r = ((bits as f64).sqrt() / 2.0).ceil() as i64 + 2;
    let j = (d.magnitude_bits() + r).max(0);
    let x = d.shl(-j);
    let wp = bits + GUARD + j as u32;
    let xi = Interval::point(x.clone(), wp);
    let stop = -(wp as i64) - 8;
    let mut sum = Interval::from_int(1, wp);
    let mut term = Interval::from_int(1, wp);
    let mut i = 1;
    loop {
        term = term.mul(&xi).div_int(i);
        sum = sum.add(&term);
        i += 1;
        let mag = term.lo().abs().max(term.hi().abs());
        if mag.magnitude_bits() < stop {
            // |x| ≤ 1/2, so the tail is at most twice the last term.
            sum = sum.inflate(&mag.shl(1));
            break;
        }
    }
    for _ in 0..j {
        sum = sum.square();
    }
    sum.with_bits(bits)
}

/// Enclosure of `e^x`.
pub fn exp(x: &Interval, bits: u32) -> Interval {
    let lo = exp_point(x.lo(), bits);
    if x.is_point() {
        return lo;
    }
    let hi = exp_point(x.hi(), bits);
    Interval::new(lo.lo().clone(), hi.hi().clone(), bits)
}

pub fn sqrt(x: &Interval, bits: u32) -> Result<Interval> {
    if x.hi().signum() < 0 {
        return Err(Error::domain("sqrt of a negative interval"));
    }
    if x.lo().signum() < 0 {
        return Err(Error::Precision("sqrt argument interval reaches below 0".into()));
    }
    Ok(Interval::new(
        x.lo().sqrt(bits, Round::Down),
        x.hi().sqrt(bits, Round::Up),
        bits,
    ))
}

/// `x^p` for rational `p`; non-integer powers need `x > 0`.
pub fn pow(x: &Interval, p: &Rational, bits: u32) -> Result<Interval> {
    if p.is_integer() {
        let e: i64 = p
            .to_integer()
            .try_into()
            .map_err(|_| Error::domain("integer exponent out of range"))?;
        let m = x.with_bits(bits).powi(e.unsigned_abs());
        return if e < 0 { m.recip() } else { Ok(m) };
    }
    if *p == rat(1, 2) {
        return sqrt(x, bits);
    }
    if x.hi().signum() <= 0 {
        return Err(Error::domain("fractional power of a non-positive value"));
    }
    let wp = bits + 16;
    let l = ln(x, wp)?;
    Ok(exp(&l.mul_rational(p), wp).with_bits(bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    // 60 decimal digits of reference constants.
    const LN2_DIGITS: &str = "0.693147180559945309417232121458176568075500134360255254120680";
    const PI_DIGITS: &str = "3.14159265358979323846264338327950288419716939937510582097494";
    const E_DIGITS: &str = "2.71828182845904523536028747135266249775724709369995957496696";

    fn dec(s: &str) -> Rational {
        let (int, frac) = s.split_once('.').unwrap();
        let den = BigInt::from(10).pow(frac.len() as u32);
        let num: BigInt = format!("{int}{frac}").parse().unwrap();
        Rational::new(num, den)
    }

    fn assert_near(iv: &Interval, digits: &str) {
        let r = dec(digits);
        let tol = rat(1, 1) / Rational::from_integer(BigInt::from(10).pow(58));
        let lo = iv.lo().to_rational();
        let hi = iv.hi().to_rational();
        assert!(lo <= &r + &tol && &r - &tol <= hi, "{iv} vs {digits}");
    }

    #[test]
    fn constants_match_reference_digits() {
        let l = ln2(256);
        assert_near(&l, LN2_DIGITS);
        assert!(l.width().magnitude_bits() < -240);
        assert_near(&pi(256), PI_DIGITS);
        assert_near(&exp(&Interval::from_int(1, 256), 256), E_DIGITS);
        assert_near(&ln_rational(&rat(2, 1), 256).unwrap(), LN2_DIGITS);
    }

    #[test]
    fn exp_of_zero_is_exact_one() {
        let one = exp(&Interval::from_int(0, 64), 64);
        assert!(one.is_point());
        assert_eq!(one.lo().to_rational(), rat(1, 1));
    }

    #[test]
    fn ln_exp_roundtrip_encloses() {
        for (p, q) in [(1, 7), (3, 2), (1000, 3), (1, 1_000_000), (999_999, 1_000_000)] {
            let r = rat(p, q);
            let l = ln_rational(&r, 128).unwrap();
            let back = exp(&l, 128);
            assert!(back.contains_rational(&r), "{p}/{q}");
            assert!(l.width().magnitude_bits() < -100);
        }
    }

    #[test]
    fn near_one_keeps_relative_precision() {
        // ln(1 − 2^-200) ≈ −2^-200 must still have a decided sign at 64 bits.
        let two200 = BigInt::one() << 200u32;
        let r = Rational::new(&two200 - 1, two200);
        let l = ln_rational(&r, 64).unwrap();
        assert_eq!(l.sign(), super::super::rational::Sign::Negative);
    }

    #[test]
    fn powers() {
        let x = Interval::from_rational(&rat(2, 3), 128);
        let sq = pow(&x, &rat(1, 2), 128).unwrap();
        assert!(sq.square().contains_rational(&rat(2, 3)));
        let cube_root = pow(&x, &rat(1, 3), 128).unwrap();
        assert!(cube_root.powi(3).contains_rational(&rat(2, 3)));
        let inv = pow(&x, &rat(-2, 1), 128).unwrap();
        assert!(inv.contains_rational(&rat(9, 4)));
    }
}
