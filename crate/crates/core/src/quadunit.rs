//! Fundamental units of real quadratic fields.
//!
//! `u_m = (a + b√m)/k > 1` generates the units of the maximal order of Q(√m)
//! modulo ±1. It is found from the continued fraction of `√m` when
//! `m ≡ 2, 3 (mod 4)` and of `(1 + √m)/2` when `m ≡ 1 (mod 4)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadUnit {
    pub m: u64,
    pub a: BigUint,
    pub b: BigUint,
    /// Denominator, 1 or 2.
    pub k: u8,
    /// Sign of the field norm `(a² - m b²)/k²`.
    pub norm_sign: i8,
}

#[derive(Serialize, Deserialize)]
struct QuadUnitJson {
    m: u64,
    a: String,
    b: String,
    k: u8,
    norm_sign: i8,
}

impl Serialize for QuadUnit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadUnitJson {
            m: self.m,
            a: self.a.to_string(),
            b: self.b.to_string(),
            k: self.k,
            norm_sign: self.norm_sign,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadUnit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = QuadUnitJson::deserialize(d)?;
        let parse = |s: &str| s.parse::<BigUint>().map_err(serde::de::Error::custom);
        Ok(QuadUnit {
            m: j.m,
            a: parse(&j.a)?,
            b: parse(&j.b)?,
            k: j.k,
            norm_sign: j.norm_sign,
        })
    }
}

impl QuadUnit {
    /// `a² - m b²`, which equals `norm_sign · k²` for a valid unit.
    pub fn norm_times_k2(&self) -> BigInt {
        let a = BigInt::from(self.a.clone());
        let b = BigInt::from(self.b.clone());
        &a * &a - BigInt::from(self.m) * &b * &b
    }

    pub fn is_valid_unit(&self) -> bool {
        let k2 = BigInt::from(self.k as u32 * self.k as u32);
        self.norm_times_k2() == k2 * BigInt::from(self.norm_sign)
    }

    pub fn value_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::INFINITY);
        let b = self.b.to_f64().unwrap_or(f64::INFINITY);
        (a + b * (self.m as f64).sqrt()) / self.k as f64
    }

    /// Enclosure of `(a + b√m)/k` with about `precision_bits` relative bits.
    pub fn value_interval(&self, precision_bits: u32) -> Interval {
        let root = Interval::sqrt_int(&BigUint::from(self.m), precision_bits);
        let x = &root.mul_int(BigInt::from(self.b.clone()))
            + &Interval::from_int(BigInt::from(self.a.clone()), precision_bits);
        if self.k == 2 {
            x.shl(-1)
        } else {
            x
        }
    }
}

impl fmt::Display for QuadUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{} + {}√{}", self.a, self.b, self.m)
        } else {
            write!(f, "({} + {}√{})/{}", self.a, self.b, self.m, self.k)
        }
    }
}

pub fn is_square_free(m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let mut x = m;
    let mut p = 2u64;
    while p.saturating_mul(p) <= x {
        if x % p == 0 {
            x /= p;
            if x % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Product of the primes dividing `x` to an odd power.
pub fn square_free_part(x: u128) -> u128 {
    let mut x = x;
    let mut out = 1u128;
    let mut p = 2u128;
    while p * p <= x {
        let mut e = 0;
        while x % p == 0 {
            x /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out * x
}

pub fn validate_radicand(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::RadicandTooSmall(m));
    }
    if !is_square_free(m) {
        return Err(Error::NotSquareFree(m));
    }
    Ok(())
}

/// Fundamental unit of the ring of integers of Q(√m).
pub fn fundamental_unit(m: u64) -> Result<QuadUnit> {
    validate_radicand(m)?;
    let half_integral = m % 4 == 1;
    let d = m as i128;
    let s = (m as u128).sqrt() as i128;
    // Complete quotient (p + √m)/q.
    let (mut p, mut q): (i128, i128) = if half_integral { (1, 2) } else { (0, 1) };
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut g_prev, mut g) = (BigInt::one(), BigInt::zero());
    let k: u8 = if half_integral { 2 } else { 1 };
    let target = BigInt::from(k as u32 * k as u32);
    let mb = BigInt::from(m);
    let cap = 16 * (s as u64 + 4) * (64 - m.leading_zeros() as u64 + 2);
    for _ in 0..cap {
        debug_assert!(q > 0 && (d - p * p) % q == 0);
        let digit = (p + s).div_euclid(q);
        let next_h = BigInt::from(digit) * &h + &h_prev;
        let next_g = BigInt::from(digit) * &g + &g_prev;
        h_prev = std::mem::replace(&mut h, next_h);
        g_prev = std::mem::replace(&mut g, next_g);
        p = digit * q - p;
        q = (d - p * p) / q;

        // Convergent h/g; the unit candidate is h + g√m or h - g·(1-√m)/2.
        let (a, b) = if half_integral {
            (BigInt::from(2) * &h - &g, g.clone())
        } else {
            (h.clone(), g.clone())
        };
        let norm = &a * &a - &mb * &b * &b;
        if norm.abs() == target && a.is_positive() {
            return Ok(QuadUnit {
                m,
                a: a.to_biguint().expect("positive"),
                b: b.to_biguint().expect("positive"),
                k,
                norm_sign: if norm.is_positive() { 1 } else { -1 },
            });
        }
    }
    unreachable!("continued fraction of a quadratic irrational is periodic")
}

/// Certified enclosure of `log u` on the grid `2^-precision_bits`: the result
/// is `[floor, ceil]` of the true value on that grid, so it has width exactly
/// `2^-precision_bits` and refining the precision always nests.
pub fn log_unit(u: &QuadUnit, precision_bits: u32) -> Result<Interval> {
    if precision_bits < 32 {
        return Err(Error::PrecisionTooLow {
            got: precision_bits,
            min: 32,
        });
    }
    let p = precision_bits as i64;
    let mut wp = precision_bits + 40 + 64 - (u.a.bits().max(1)).leading_zeros();
    for _ in 0..12 {
        let ln = u
            .value_interval(wp)
            .ln()
            .expect("unit exceeds one");
        let lo = ln.lo().floor_to_grid(p);
        let hi = ln.hi().ceil_to_grid(p);
        if lo == ln.hi().floor_to_grid(p) && hi == ln.lo().ceil_to_grid(p) {
            return Ok(Interval::new(lo, hi, precision_bits));
        }
        wp *= 2;
    }
    // Practically unreachable: log of a unit is not a dyadic rational.
    let ln = u.value_interval(wp).ln().expect("unit exceeds one");
    Ok(ln.to_grid(p).with_precision(precision_bits))
}

/// Exact comparison of `(a1 + b1√m1)/k1` with `(a2 + b2√m2)/k2` for nonnegative integers.
pub fn cmp_surds(
    (a1, b1, m1, k1): (&BigInt, &BigInt, u64, u32),
    (a2, b2, m2, k2): (&BigInt, &BigInt, u64, u32),
) -> Ordering {
    // k2(a1 + b1√m1) vs k1(a2 + b2√m2), i.e. sign of u + B√m1 - D√m2.
    let u = a1 * BigInt::from(k2) - a2 * BigInt::from(k1);
    let bb = b1 * BigInt::from(k2);
    let dd = b2 * BigInt::from(k1);
    let x = &bb * &bb * BigInt::from(m1);
    let y = &dd * &dd * BigInt::from(m2);
    // v = √x - √y
    let v_sign = x.cmp(&y);
    let u_sign = u.cmp(&BigInt::zero());
    if v_sign == Ordering::Equal {
        return u_sign;
    }
    if u_sign == Ordering::Equal || u_sign == v_sign {
        return v_sign;
    }
    // Signs differ: compare |u| against |v|, where v² = x + y - 2√(xy).
    let w = &x + &y - &u * &u;
    let v_vs_u = if w.is_negative() {
        Ordering::Less
    } else {
        // w vs 2√(xy)
        (&w * &w).cmp(&(BigInt::from(4) * &x * &y))
    };
    match v_vs_u {
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => v_sign,
        Ordering::Less => u_sign,
    }
}

fn cmp_unit(u: &QuadUnit, a: i64, b: i64, m: u64, k: u32) -> Ordering {
    cmp_surds(
        (
            &BigInt::from(u.a.clone()),
            &BigInt::from(u.b.clone()),
            u.m,
            u.k as u32,
        ),
        (&BigInt::from(a), &BigInt::from(b), m, k),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadUnitLemmaReport {
    pub m_max: u64,
    pub checked: usize,
    /// Radicands with `u_m = (1+√5)/2`.
    pub golden_equalities: Vec<u64>,
    /// Radicands other than 5 with `u_m = 1+√2`.
    pub silver_equalities: Vec<u64>,
    /// Radicands violating either inequality.
    pub violations: Vec<u64>,
}

impl QuadUnitLemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.golden_equalities == [5] && self.silver_equalities == [2]
    }
}

/// For every square-free `2 <= m <= m_max`: `u_m >= (1+√5)/2` with equality only
/// at `m = 5`, and `u_m >= 1+√2` for `m != 5` with equality only at `m = 2`.
pub fn verify_quadunit_lemma(m_max: u64) -> Result<QuadUnitLemmaReport> {
    if m_max < 13 {
        return Err(Error::InvalidArgument(format!("m_max must be at least 13, got {m_max}")));
    }
    let mut report = QuadUnitLemmaReport {
        m_max,
        checked: 0,
        golden_equalities: vec![],
        silver_equalities: vec![],
        violations: vec![],
    };
    for m in (2..=m_max).filter(|&m| is_square_free(m)) {
        let u = fundamental_unit(m)?;
        report.checked += 1;
        match cmp_unit(&u, 1, 1, 5, 2) {
            Ordering::Less => report.violations.push(m),
            Ordering::Equal => report.golden_equalities.push(m),
            Ordering::Greater => {}
        }
        if m != 5 {
            match cmp_unit(&u, 1, 1, 2, 1) {
                Ordering::Less => report.violations.push(m),
                Ordering::Equal => report.silver_equalities.push(m),
                Ordering::Greater => {}
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Dyadic;

    /// Iterate b = 1, 2, ... and test whether m b² ∓ k² is a perfect square.
    fn brute_force(m: u64) -> (u64, u64, u8) {
        let k: u64 = if m % 4 == 1 { 2 } else { 1 };
        for b in 1u64.. {
            let mb2 = m * b * b;
            for cand in [mb2.checked_sub(k * k), Some(mb2 + k * k)].into_iter().flatten() {
                let a = cand.sqrt();
                if a > 0 && a * a == cand {
                    return (a, b, k as u8);
                }
            }
        }
        unreachable!()
    }

    fn abk(u: &QuadUnit) -> (u64, u64, u8) {
        (u.a.to_u64().unwrap(), u.b.to_u64().unwrap(), u.k)
    }

    #[test]
    fn known_units() {
        assert_eq!(abk(&fundamental_unit(2).unwrap()), (1, 1, 1));
        assert_eq!(abk(&fundamental_unit(5).unwrap()), (1, 1, 2));
        assert_eq!(abk(&fundamental_unit(13).unwrap()), (3, 1, 2));
        assert_eq!(abk(&fundamental_unit(3).unwrap()), (2, 1, 1));
        assert_eq!(abk(&fundamental_unit(10).unwrap()), (3, 1, 1));
        assert_eq!(fundamental_unit(2).unwrap().norm_sign, -1);
        assert_eq!(fundamental_unit(3).unwrap().norm_sign, 1);
    }

    #[test]
    fn rejects_bad_radicands() {
        assert_eq!(fundamental_unit(1), Err(Error::RadicandTooSmall(1)));
        assert_eq!(fundamental_unit(0), Err(Error::RadicandTooSmall(0)));
        assert_eq!(fundamental_unit(12), Err(Error::NotSquareFree(12)));
        assert_eq!(fundamental_unit(49), Err(Error::NotSquareFree(49)));
    }

    #[test]
    fn matches_brute_force_small() {
        for m in (2..=60).filter(|&m| is_square_free(m)) {
            let u = fundamental_unit(m).unwrap();
            assert!(u.is_valid_unit(), "m = {m}");
            // 46 and a few others have huge units; the brute force still finishes quickly.
            assert_eq!(abk(&u), brute_force(m), "m = {m}");
        }
    }

    #[test]
    fn large_unit_is_valid() {
        // 94: u = 2143295 + 221064√94
        let u = fundamental_unit(94).unwrap();
        assert_eq!(u.a, BigUint::from(2143295u64));
        assert_eq!(u.b, BigUint::from(221064u64));
        assert!(fundamental_unit(999_999).is_err());
        assert!(fundamental_unit(1_000_003).unwrap().is_valid_unit());
    }

    #[test]
    fn log_values() {
        let l2 = log_unit(&fundamental_unit(2).unwrap(), 128).unwrap();
        assert!((l2.mid_f64() - 0.881_373_587_019_543).abs() < 1e-15);
        assert_eq!(l2.width(), Dyadic::new(BigInt::one(), -128));
        let l5 = log_unit(&fundamental_unit(5).unwrap(), 128).unwrap();
        assert!((l5.mid_f64() - 0.481_211_825_059_603_4).abs() < 1e-15);
        assert!(log_unit(&fundamental_unit(5).unwrap(), 16).is_err());
    }

    #[test]
    fn log_refinement_nests() {
        for m in [2u64, 3, 5, 6, 7, 13, 94, 151] {
            let u = fundamental_unit(m).unwrap();
            let coarse = log_unit(&u, 64).unwrap();
            let fine = log_unit(&u, 128).unwrap();
            let finer = log_unit(&u, 256).unwrap();
            assert!(fine.is_subset_of(&coarse), "m = {m}");
            assert!(finer.is_subset_of(&fine), "m = {m}");
            let rel = (fine.mid_f64().exp() - u.value_f64()).abs() / u.value_f64();
            assert!(rel < 1e-12, "m = {m}: {rel}");
        }
    }

    #[test]
    fn surd_comparison() {
        let one = BigInt::one();
        let three = BigInt::from(3);
        assert_eq!(cmp_surds((&one, &one, 5, 2), (&one, &one, 5, 2)), Ordering::Equal);
        assert_eq!(cmp_surds((&one, &one, 5, 2), (&one, &one, 2, 1)), Ordering::Less);
        assert_eq!(cmp_surds((&three, &one, 13, 2), (&one, &one, 2, 1)), Ordering::Greater);
        // 3 + √2 vs 2 + √5: 4.414 vs 4.236
        let two = BigInt::from(2);
        assert_eq!(cmp_surds((&three, &one, 2, 1), (&two, &one, 5, 1)), Ordering::Greater);
        // 2√2 vs √8 (0 + 2√2 vs 0 + 1√8)
        let zero = BigInt::zero();
        assert_eq!(cmp_surds((&zero, &two, 2, 1), (&zero, &one, 8, 1)), Ordering::Equal);
    }

    #[test]
    fn lemma_small_range() {
        let r = verify_quadunit_lemma(13).unwrap();
        assert!(r.holds());
        assert_eq!(r.golden_equalities, vec![5]);
        assert_eq!(r.silver_equalities, vec![2]);
        assert!(verify_quadunit_lemma(100).unwrap().holds());
        assert!(verify_quadunit_lemma(12).is_err());
    }

    #[test]
    fn json_schema() {
        let u = fundamental_unit(13).unwrap();
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"{"m":13,"a":"3","b":"1","k":2,"norm_sign":-1}"#);
        let back: QuadUnit = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
    }

    #[test]
    fn square_free_parts() {
        assert_eq!(square_free_part(2 * 3 * 6), 1);
        assert_eq!(square_free_part(10 * 15), 6);
        assert_eq!(square_free_part(1), 1);
        assert!(is_square_free(30) && !is_square_free(18));
    }
}
