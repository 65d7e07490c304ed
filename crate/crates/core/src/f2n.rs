//! The group (Z/2Z)^n: elements, the F2 inner product, index-2 subgroups
//! `p^⊥`, and exact checks of the counting facts used downstream.
//!
//! Elements are bit vectors with component `a_i` stored at bit `i - 1`. The
//! canonical order is the order of the encoded integers, so `0` is the minimum.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElt {
    n: u8,
    bits: u32,
}

impl GroupElt {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n, 1, MAX_DIM));
        }
        if (bits as u64) >> n != 0 {
            return Err(Error::InvalidArgument(format!(
                "encoding {bits} does not fit in {n} bits"
            )));
        }
        Ok(GroupElt { n: n as u8, bits })
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, 0).expect("dimension in range")
    }

    /// The standard basis vector `e_i`, `1 <= i <= n`.
    pub fn basis(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i), "basis index {i} out of 1..={n}");
        Self::new(n, 1 << (i - 1)).expect("dimension in range")
    }

    pub fn from_bits_slice(bits: &[u8]) -> Result<Self> {
        let mut v = 0u32;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v |= 1 << i,
                _ => return Err(Error::Parse(format!("bit value {b} is not 0 or 1"))),
            }
        }
        Self::new(bits.len(), v)
    }

    pub fn to_bits_vec(&self) -> Vec<u8> {
        (0..self.n).map(|i| ((self.bits >> i) & 1) as u8).collect()
    }

    pub fn dim(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// All `2^n` elements in canonical order.
    pub fn all(n: usize) -> impl Iterator<Item = GroupElt> + Clone {
        assert!((1..=MAX_DIM).contains(&n));
        (0..1u32 << n).map(move |bits| GroupElt { n: n as u8, bits })
    }

    /// The nonzero elements (the set `A`) in canonical order.
    pub fn nonzero(n: usize) -> impl Iterator<Item = GroupElt> + Clone {
        Self::all(n).skip(1)
    }

    /// `⟨self, other⟩` over F2.
    ///
    /// Panics if the dimensions differ.
    pub fn inner(&self, other: &GroupElt) -> bool {
        assert_eq!(self.n, other.n, "inner product of mismatched dimensions");
        inner_bits(self.bits, other.bits)
    }

    /// `(-1)^⟨self, other⟩`.
    pub fn sign(&self, other: &GroupElt) -> i64 {
        if self.inner(other) {
            -1
        } else {
            1
        }
    }
}

/// Parity of the popcount of `a & b`.
#[inline]
pub fn inner_bits(a: u32, b: u32) -> bool {
    (a & b).count_ones() & 1 == 1
}

/// `(-1)^⟨a, b⟩` on raw encodings.
#[inline]
pub fn sign_bits(a: u32, b: u32) -> i64 {
    if inner_bits(a, b) {
        -1
    } else {
        1
    }
}

impl Ord for GroupElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.bits, self.n).cmp(&(other.bits, other.n))
    }
}

impl PartialOrd for GroupElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for GroupElt {
    type Output = GroupElt;
    fn add(self, other: GroupElt) -> GroupElt {
        assert_eq!(self.n, other.n, "sum of mismatched dimensions");
        GroupElt {
            n: self.n,
            bits: self.bits ^ other.bits,
        }
    }
}

impl fmt::Display for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.to_bits_vec().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for GroupElt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_bits_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupElt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(deserializer)?;
        GroupElt::from_bits_slice(&bits).map_err(serde::de::Error::custom)
    }
}

/// Dimension check for operations that need `2 <= n <= 16`.
pub fn check_dim(n: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(n, 2, MAX_DIM))
    }
}

/// `p^⊥ = { z : ⟨p, z⟩ = 0 }` in canonical order.
pub fn perp(p: &GroupElt) -> Result<Vec<GroupElt>> {
    if p.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(GroupElt::all(p.dim()).filter(|z| !p.inner(z)).collect())
}

fn perp_bitset(n: usize, p: u32) -> Vec<u64> {
    let mut words = vec![0u64; (1usize << n).div_ceil(64)];
    for z in 0..1u32 << n {
        if !inner_bits(p, z) {
            words[z as usize / 64] |= 1 << (z % 64);
        }
    }
    words
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupReport {
    pub n: usize,
    /// Number of distinct subgroups `x^⊥`, `x ∈ A`.
    pub b_count: usize,
    /// For each `x ∈ A`, how many of the subgroups contain it.
    pub membership_counts: BTreeMap<u32, usize>,
    /// All pairwise intersections have size `2^(n-2)`.
    pub intersection_ok: bool,
    /// Every subgroup has `2^(n-1)` elements and contains 0.
    pub index_two_ok: bool,
}

impl SubgroupReport {
    pub fn is_valid(&self) -> bool {
        let expected = (1usize << (self.n - 1)) - 1;
        self.b_count == (1 << self.n) - 1
            && self.intersection_ok
            && self.index_two_ok
            && self.membership_counts.len() == (1 << self.n) - 1
            && self.membership_counts.values().all(|&c| c == expected)
    }
}

/// Checks that `x ↦ x^⊥` is injective on `A`, that each `x ∈ A` lies in
/// `2^(n-1) - 1` of the subgroups, and that distinct subgroups meet in
/// `2^(n-2)` elements. Everything is counted, nothing is assumed.
pub fn verify_subgroup_lemma(n: usize) -> Result<SubgroupReport> {
    check_dim(n)?;
    let sets: Vec<Vec<u64>> = (1..1u32 << n).map(|x| perp_bitset(n, x)).collect();
    let half = 1u32 << (n - 1);
    let index_two_ok = sets.iter().all(|s| {
        s[0] & 1 == 1 && s.iter().map(|w| w.count_ones()).sum::<u32>() == half
    });
    let distinct: HashSet<&Vec<u64>> = sets.iter().collect();
    let mut membership_counts = BTreeMap::new();
    for x in 1..1u32 << n {
        let c = sets
            .iter()
            .filter(|s| s[x as usize / 64] >> (x % 64) & 1 == 1)
            .count();
        membership_counts.insert(x, c);
    }
    let quarter = 1u32 << (n - 2);
    let intersection_ok = sets.iter().enumerate().all(|(i, s)| {
        sets[i + 1..].iter().all(|t| {
            s.iter()
                .zip(t)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                == quarter
        })
    });
    Ok(SubgroupReport {
        n,
        b_count: distinct.len(),
        membership_counts,
        intersection_ok,
        index_two_ok,
    })
}

/// Multiplicities of each element in the multiset union of all `x^⊥`, `x ∈ A`,
/// indexed by encoding.
pub fn union_multiplicities(n: usize) -> Result<Vec<usize>> {
    check_dim(n)?;
    let mut counts = vec![0usize; 1 << n];
    for a in 1..1u32 << n {
        for x in 0..1u32 << n {
            if !inner_bits(a, x) {
                counts[x as usize] += 1;
            }
        }
    }
    Ok(counts)
}

/// `0` appears `2^n - 1` times in the union of all index-2 subgroups and every
/// other element `2^(n-1) - 1` times.
pub fn multiplicity_check(n: usize) -> Result<bool> {
    let counts = union_multiplicities(n)?;
    let full = (1usize << n) - 1;
    let half = (1usize << (n - 1)) - 1;
    Ok(counts[0] == full && counts[1..].iter().all(|&c| c == half))
}

/// Left-hand side `Σ_{a∈A} Σ_{x∈a^⊥} (x·v)` where `(x·v)_y = v_{y+x}`, with
/// the double sum grouped by the translate `x`.
pub fn norm_operator_lhs(n: usize, v: &[BigRational]) -> Result<Vec<BigRational>> {
    check_dim(n)?;
    if v.len() != 1 << n {
        return Err(Error::DimensionMismatch(v.len(), 1 << n));
    }
    let counts = union_multiplicities(n)?;
    // Clear denominators so the translate sums run over integers.
    let den = v
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let out = (0..1usize << n)
        .map(|y| {
            let mut acc = BigInt::zero();
            for (x, &c) in counts.iter().enumerate() {
                if c != 0 {
                    acc += &scaled[y ^ x] * BigInt::from(c);
                }
            }
            BigRational::new(acc, den.clone())
        })
        .collect();
    Ok(out)
}

/// Exact check of `Σ_{a∈A} Σ_{x∈a^⊥} (x·v) = 2^(n-1) v + (2^(n-1) - 1)(Σ_y v_y) 𝟙`,
/// the LOG-level form of `N(u) = u^(2^(n-1)) · N_{L/Q}(u)^(2^(n-1)-1)`.
pub fn norm_operator_identity(n: usize, v: &[BigRational]) -> Result<bool> {
    let lhs = norm_operator_lhs(n, v)?;
    let half = BigInt::from(1u64 << (n - 1));
    let total: BigRational = v.iter().cloned().sum();
    let trace = &total * BigRational::from_integer(&half - 1);
    let rhs = v
        .iter()
        .map(|vy| vy * BigRational::from_integer(half.clone()) + &trace);
    Ok(lhs.iter().zip(rhs).all(|(l, r)| *l == r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, bits: u32) -> GroupElt {
        GroupElt::new(n, bits).unwrap()
    }

    #[test]
    fn inner_examples() {
        // p=(1,0,1), q=(1,1,1)
        assert!(!g(3, 0b101).inner(&g(3, 0b111)));
        // p=(1,1), q=(0,1)
        assert!(g(2, 0b11).inner(&g(2, 0b10)));
        for q in GroupElt::all(4) {
            assert!(!GroupElt::zero(4).inner(&q));
        }
    }

    #[test]
    #[should_panic]
    fn inner_dimension_mismatch_panics() {
        g(2, 1).inner(&g(3, 1));
    }

    #[test]
    fn inner_matches_defining_sum() {
        for n in 1..=8 {
            for p in GroupElt::all(n) {
                for q in GroupElt::all(n) {
                    let (pb, qb) = (p.to_bits_vec(), q.to_bits_vec());
                    let s: u32 = pb.iter().zip(&qb).map(|(a, b)| (a * b) as u32).sum();
                    assert_eq!(p.inner(&q), s % 2 == 1);
                }
            }
        }
    }

    #[test]
    fn perp_examples() {
        assert_eq!(perp(&g(2, 0b11)).unwrap(), vec![g(2, 0), g(2, 0b11)]);
        assert_eq!(perp(&g(2, 0b01)).unwrap(), vec![g(2, 0), g(2, 0b10)]);
        let e1 = perp(&GroupElt::basis(3, 1)).unwrap();
        assert_eq!(e1.len(), 4);
        assert!(e1.iter().all(|z| z.bits() & 1 == 0));
        assert_eq!(perp(&GroupElt::zero(3)), Err(Error::ZeroElement));
    }

    #[test]
    fn perp_is_subgroup() {
        for n in 1..=8 {
            for p in GroupElt::nonzero(n) {
                let s = perp(&p).unwrap();
                assert_eq!(s.len(), 1 << (n - 1));
                assert!(s.contains(&GroupElt::zero(n)));
                let set: HashSet<_> = s.iter().copied().collect();
                for &a in &s {
                    for &b in &s {
                        assert!(set.contains(&(a + b)));
                    }
                }
            }
        }
    }

    #[test]
    fn bilinear() {
        for n in 1..=6 {
            for p in GroupElt::all(n) {
                for q in GroupElt::all(n) {
                    for r in GroupElt::all(n) {
                        assert_eq!((p + q).inner(&r), p.inner(&r) ^ q.inner(&r));
                    }
                    assert_eq!(p.inner(&q), q.inner(&p));
                }
            }
        }
    }

    #[test]
    fn ordering_argument() {
        // x < x+z and y < y+z for distinct x, y force x + y ∉ {0, z}.
        for n in 2..=8 {
            for z in GroupElt::nonzero(n) {
                let xs: Vec<_> = GroupElt::all(n).filter(|&x| x < x + z).collect();
                assert_eq!(xs.len(), 1 << (n - 1));
                for (i, &x) in xs.iter().enumerate() {
                    for &y in &xs[i + 1..] {
                        assert!(!(x + y).is_zero());
                        assert_ne!(x + y, z);
                    }
                }
            }
        }
    }

    #[test]
    fn subgroup_lemma_examples() {
        let r2 = verify_subgroup_lemma(2).unwrap();
        assert_eq!(r2.b_count, 3);
        assert!(r2.membership_counts.values().all(|&c| c == 1));
        assert!(r2.is_valid());
        let r3 = verify_subgroup_lemma(3).unwrap();
        assert_eq!(r3.b_count, 7);
        assert!(r3.membership_counts.values().all(|&c| c == 3));
        assert!(r3.intersection_ok);
        let r5 = verify_subgroup_lemma(5).unwrap();
        assert_eq!(r5.b_count, 31);
        assert!(r5.membership_counts.values().all(|&c| c == 15));
        assert!(r5.is_valid());
        assert!(verify_subgroup_lemma(1).is_err());
        assert!(verify_subgroup_lemma(17).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(union_multiplicities(2).unwrap(), vec![3, 1, 1, 1]);
        let m3 = union_multiplicities(3).unwrap();
        assert_eq!(m3[0], 7);
        assert!(m3[1..].iter().all(|&c| c == 3));
        let m4 = union_multiplicities(4).unwrap();
        assert_eq!((m4[0], m4[5]), (15, 7));
        for n in 2..=6 {
            assert!(multiplicity_check(n).unwrap());
        }
    }

    fn literal_lhs(n: usize, v: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); 1 << n];
        for a in GroupElt::nonzero(n) {
            for x in perp(&a).unwrap() {
                for y in 0..1usize << n {
                    out[y] += &v[y ^ x.index()];
                }
            }
        }
        out
    }

    #[test]
    fn norm_identity_constant_and_trace_free() {
        for n in 2..=5 {
            let ones = vec![BigRational::one(); 1 << n];
            let lhs = norm_operator_lhs(n, &ones).unwrap();
            let expect = BigRational::from_integer(BigInt::from(((1u64 << n) - 1) << (n - 1)));
            assert!(lhs.iter().all(|x| *x == expect));
            assert!(norm_operator_identity(n, &ones).unwrap());

            let mut v: Vec<BigRational> = (0..1i64 << n)
                .map(|i| BigRational::new(BigInt::from(i * 3 - 7), BigInt::from(i % 5 + 1)))
                .collect();
            let s: BigRational = v.iter().cloned().sum();
            v[0] -= s;
            let lhs = norm_operator_lhs(n, &v).unwrap();
            let scale = BigRational::from_integer(BigInt::from(1u64 << (n - 1)));
            assert!(lhs.iter().zip(&v).all(|(l, x)| *l == x * &scale));
            assert_eq!(lhs, literal_lhs(n, &v));
        }
    }

    #[test]
    fn norm_identity_rejects_wrong_length() {
        assert!(norm_operator_identity(3, &[BigRational::one()]).is_err());
    }

    #[test]
    fn json_bits_little_endian() {
        let e1 = GroupElt::basis(3, 1);
        assert_eq!(serde_json::to_string(&e1).unwrap(), "[1,0,0]");
        let back: GroupElt = serde_json::from_str("[0,1,1]").unwrap();
        assert_eq!(back.bits(), 0b110);
    }
}
