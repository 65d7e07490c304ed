//! Dyadic rationals and outward-rounded intervals.
//!
//! Additions, subtractions and integer scalings are exact. Products, quotients,
//! square roots and logarithms round the lower endpoint down and the upper
//! endpoint up to the interval's precision, counted in significant bits.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;
/// Ceiling for automatic precision escalation.
pub const MAX_PRECISION: u32 = 1024;

/// A number `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Self::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Self::new(v.into(), 0)
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(mant) * sign, exp))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// `self * 2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Self::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::new(&self.mant * k, self.exp)
    }

    /// floor(log2 |x|); `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    fn round_bits(&self, prec: u32, up: bool) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let div = BigInt::one() << shift;
        let q = if up {
            ceil_div(&self.mant, &div)
        } else {
            self.mant.div_floor(&div)
        };
        Self::new(q, self.exp + shift as i64)
    }

    /// Largest value with at most `prec` significant bits that is `<= self`.
    pub fn round_down(&self, prec: u32) -> Self {
        self.round_bits(prec, false)
    }

    /// Smallest value with at most `prec` significant bits that is `>= self`.
    pub fn round_up(&self, prec: u32) -> Self {
        self.round_bits(prec, true)
    }

    /// floor(self * 2^p) / 2^p.
    pub fn floor_to_grid(&self, p: i64) -> Self {
        let shift = self.exp + p;
        if shift >= 0 {
            return self.clone();
        }
        let div = BigInt::one() << (-shift) as u64;
        Self::new(self.mant.div_floor(&div), -p)
    }

    /// ceil(self * 2^p) / 2^p.
    pub fn ceil_to_grid(&self, p: i64) -> Self {
        let shift = self.exp + p;
        if shift >= 0 {
            return self.clone();
        }
        let div = BigInt::one() << (-shift) as u64;
        Self::new(ceil_div(&self.mant, &div), -p)
    }

    /// Quotient `a / b` rounded to `prec` significant bits, downward or upward.
    fn div_rounded(a: &Dyadic, b: &Dyadic, prec: u32, up: bool) -> Dyadic {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Self::zero();
        }
        // Scale the numerator so that the integer quotient carries at least prec + 2 bits.
        let extra = (prec as i64 + 2 + b.mant.bits() as i64 - a.mant.bits() as i64).max(0);
        let num = &a.mant << extra as u64;
        let (q, r) = num.div_mod_floor(&b.mant);
        let q = if up && !r.is_zero() { q + 1 } else { q };
        Self::new(q, a.exp - b.exp - extra).round_bits(prec, up)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi((self.exp + shift).clamp(-2000, 2000) as i32)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    /// Decimal string with `digits` fractional digits, rounded down (or up).
    pub fn to_decimal(&self, digits: usize, up: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = if self.exp >= 0 {
            (&self.mant << self.exp as u64) * &scale
        } else {
            let num = &self.mant * &scale;
            let den = BigInt::one() << (-self.exp) as u64;
            if up {
                ceil_div(&num, &den)
            } else {
                num.div_floor(&den)
            }
        };
        let neg = scaled.is_negative();
        let s = scaled.abs().to_string();
        let s = if s.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
        } else {
            s
        };
        let (int, frac) = s.split_at(s.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, other: &Dyadic) -> Dyadic {
        self + &(-other)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20, false))
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    precision_bits: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: {lo} > {hi}");
        Interval {
            lo,
            hi,
            precision_bits,
        }
    }

    pub fn point(x: Dyadic, precision_bits: u32) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            precision_bits,
        }
    }

    pub fn zero(precision_bits: u32) -> Self {
        Self::point(Dyadic::zero(), precision_bits)
    }

    pub fn from_int<T: Into<BigInt>>(v: T, precision_bits: u32) -> Self {
        Self::point(Dyadic::from_int(v), precision_bits)
    }

    /// Outward enclosure of a rational number.
    pub fn from_rational(q: &BigRational, precision_bits: u32) -> Self {
        let num = Dyadic::from_int(q.numer().clone());
        let den = Dyadic::from_int(q.denom().clone());
        Interval {
            lo: Dyadic::div_rounded(&num, &den, precision_bits, false),
            hi: Dyadic::div_rounded(&num, &den, precision_bits, true),
            precision_bits,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn with_precision(mut self, precision_bits: u32) -> Self {
        self.precision_bits = precision_bits;
        self
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).shl(-1)
    }

    pub fn mid_f64(&self) -> f64 {
        self.midpoint().to_f64()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        Dyadic::from_f64(x).is_some_and(|d| self.contains(&d))
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Every point of `self` is `>=` every point of `other`.
    pub fn certainly_ge(&self, other: &Interval) -> bool {
        self.lo >= other.hi
    }

    /// Every point of `self` is `>` every point of `other`.
    pub fn certainly_gt(&self, other: &Interval) -> bool {
        self.lo > other.hi
    }

    /// Sign of the enclosed value when it is determined, `None` when the interval straddles 0.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.is_exact_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Interval {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            let m = std::cmp::max(self.lo.abs(), self.hi.abs());
            Interval {
                lo: Dyadic::zero(),
                hi: m,
                precision_bits: self.precision_bits,
            }
        }
    }

    /// Pointwise maximum.
    pub fn max(&self, other: &Interval) -> Interval {
        Interval {
            lo: std::cmp::max(&self.lo, &other.lo).clone(),
            hi: std::cmp::max(&self.hi, &other.hi).clone(),
            precision_bits: self.precision_bits.max(other.precision_bits),
        }
    }

    /// Exact multiplication by an integer.
    pub fn mul_int<T: Into<BigInt>>(&self, k: T) -> Interval {
        let k: BigInt = k.into();
        let a = self.lo.mul_int(&k);
        let b = self.hi.mul_int(&k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        Interval {
            lo,
            hi,
            precision_bits: self.precision_bits,
        }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Interval {
        Interval {
            lo: self.lo.shl(k),
            hi: self.hi.shl(k),
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let prec = self.precision_bits.max(other.precision_bits);
        let cands = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = cands.iter().min().expect("nonempty").round_down(prec);
        let hi = cands.iter().max().expect("nonempty").round_up(prec);
        Interval {
            lo,
            hi,
            precision_bits: prec,
        }
    }

    /// Quotient, or `None` when the divisor contains zero.
    pub fn checked_div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let prec = self.precision_bits.max(other.precision_bits);
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs
            .iter()
            .map(|(a, b)| Dyadic::div_rounded(a, b, prec, false))
            .min()
            .expect("nonempty");
        let hi = pairs
            .iter()
            .map(|(a, b)| Dyadic::div_rounded(a, b, prec, true))
            .max()
            .expect("nonempty");
        Some(Interval {
            lo,
            hi,
            precision_bits: prec,
        })
    }

    pub fn pow(&self, e: u32) -> Interval {
        let mut acc = Interval::from_int(1, self.precision_bits);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Enclosure of `sqrt(m)` carrying about `precision_bits` significant bits.
    pub fn sqrt_int(m: &BigUint, precision_bits: u32) -> Interval {
        let frac = precision_bits as i64 + 2 - (m.bits() as i64) / 2;
        let frac = frac.max(0) as u64;
        let scaled = m << (2 * frac);
        let s = scaled.sqrt();
        let exact = &s * &s == scaled;
        let lo = Dyadic::new(BigInt::from(s.clone()), -(frac as i64));
        let hi = if exact {
            lo.clone()
        } else {
            Dyadic::new(BigInt::from(s + 1u32), -(frac as i64))
        };
        Interval {
            lo,
            hi,
            precision_bits,
        }
    }

    /// Enclosure of the natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Interval> {
        if self.lo.signum() <= 0 {
            return None;
        }
        let prec = self.precision_bits;
        let lo = ln_point(&self.lo, prec).lo;
        let hi = ln_point(&self.hi, prec).hi;
        Some(Interval {
            lo,
            hi,
            precision_bits: prec,
        })
    }

    /// Round outward onto the grid `2^-p`.
    pub fn to_grid(&self, p: i64) -> Interval {
        Interval {
            lo: self.lo.floor_to_grid(p),
            hi: self.hi.ceil_to_grid(p),
            precision_bits: self.precision_bits,
        }
    }

    /// Number of fractional decimal digits used when printing at this precision.
    pub fn display_digits(&self) -> usize {
        (self.precision_bits as usize * 30103).div_ceil(100000) + 2
    }

    pub fn to_decimal(&self) -> DecimalInterval {
        let digits = self.display_digits();
        DecimalInterval {
            lo: self.lo.to_decimal(digits, false),
            hi: self.hi.to_decimal(digits, true),
        }
    }
}

/// Interval enclosure of `atanh(t)` for `0 <= t <= 1/2`.
fn atanh_enclosure(t: &Interval, wp: u32) -> Interval {
    let t2 = t.mul(t);
    let eps = Dyadic::new(BigInt::one(), -(wp as i64) - 4);
    let mut power = t.clone();
    let mut sum = Interval::zero(wp);
    let mut j: u64 = 0;
    loop {
        let term = power
            .checked_div(&Interval::from_int(2 * j + 1, wp))
            .expect("odd divisor");
        sum = &sum + &term;
        power = power.mul(&t2);
        j += 1;
        if power.hi < eps {
            break;
        }
    }
    // Tail is at most t^(2j+1) / (1 - t^2) <= 2 t^(2j+1) for t <= 1/2.
    let tail = power.hi.shl(1);
    Interval {
        hi: &sum.hi + &tail,
        lo: sum.lo,
        precision_bits: wp,
    }
}

/// `ln 2` enclosure at working precision `wp`.
pub fn ln2(wp: u32) -> Interval {
    let third = Interval::from_int(1, wp)
        .checked_div(&Interval::from_int(3, wp))
        .expect("nonzero");
    atanh_enclosure(&third, wp).shl(1)
}

fn ln_point(v: &Dyadic, prec: u32) -> Interval {
    let wp = prec + 16;
    let k = v.log2_floor().expect("positive");
    let y = Interval::point(v.shl(-k), wp);
    let one = Interval::from_int(1, wp);
    let t = (&y - &one)
        .checked_div(&(&y + &one))
        .expect("positive denominator");
    let ln_y = atanh_enclosure(&t, wp).shl(1);
    let r = &ln2(wp).mul_int(k) + &ln_y;
    Interval {
        lo: r.lo.round_down(prec + 8),
        hi: r.hi.round_up(prec + 8),
        precision_bits: prec,
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            precision_bits: self.precision_bits.max(other.precision_bits),
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            precision_bits: self.precision_bits.max(other.precision_bits),
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            precision_bits: self.precision_bits,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.to_decimal();
        write!(f, "[{}, {}]", d.lo, d.hi)
    }
}

/// JSON form of an interval: endpoints as directed-rounded decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalInterval {
    pub lo: String,
    pub hi: String,
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_decimal().serialize(serializer)
    }
}
