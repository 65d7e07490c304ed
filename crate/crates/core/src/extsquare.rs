//! Elements of `⋀²LOG(E)` and their 1-norms.
//!
//! An element is stored by its integer coefficients `n_{b,c}` against the
//! generators `LOG(u_b) ∧ LOG(u_c)`, `b < c` in canonical order. Two norm
//! evaluators are provided: [`norm1_direct`] sums the absolute values of the
//! expanded coefficients in the basis `δ^x ∧ δ^y`, and [`norm1_closed`]
//! evaluates the regrouped double sum over `z = x + y` and `d = b + c`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2n::{inner_bits, sign_bits, GroupElt};
use crate::interval::Interval;
use crate::multiquad::{LogVector, MultiQuadField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtSqElement {
    n: usize,
    coeffs: BTreeMap<(GroupElt, GroupElt), i64>,
}

impl ExtSqElement {
    pub fn zero(n: usize) -> Self {
        ExtSqElement {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    /// Single generator `LOG(u_b) ∧ LOG(u_c)` with coefficient `value`.
    pub fn single(b: GroupElt, c: GroupElt, value: i64) -> Result<Self> {
        let mut w = Self::zero(b.dim());
        w.set(b, c, value)?;
        Ok(w)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Sets `n_{b,c}`. A key with `b > c` is stored as `n_{c,b} = -value`.
    pub fn set(&mut self, b: GroupElt, c: GroupElt, value: i64) -> Result<()> {
        if b.dim() != self.n || c.dim() != self.n {
            return Err(Error::DimensionMismatch(b.dim().max(c.dim()), self.n));
        }
        if b.is_zero() || c.is_zero() || b == c {
            return Err(Error::BadCoefficientKey(b.bits(), c.bits()));
        }
        let (key, value) = if b < c { ((b, c), value) } else { ((c, b), -value) };
        if value == 0 {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
        Ok(())
    }

    /// `n_{b,c}` for any pair; antisymmetric, zero on the diagonal.
    pub fn get(&self, b: GroupElt, c: GroupElt) -> i64 {
        match b.cmp(&c) {
            std::cmp::Ordering::Less => self.coeffs.get(&(b, c)).copied().unwrap_or(0),
            std::cmp::Ordering::Greater => -self.coeffs.get(&(c, b)).copied().unwrap_or(0),
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (GroupElt, GroupElt, i64)> + '_ {
        self.coeffs.iter().map(|(&(b, c), &v)| (b, c, v))
    }

    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs_coefficient(&self) -> i64 {
        self.coeffs.values().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn scaled(&self, t: i64) -> Self {
        let mut out = Self::zero(self.n);
        if t != 0 {
            for (&k, &v) in &self.coeffs {
                out.coeffs.insert(k, v * t);
            }
        }
        out
    }

    pub fn add(&self, other: &ExtSqElement) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (&(b, c), &v) in &other.coeffs {
            let cur = out.get(b, c);
            out.set(b, c, cur + v)?;
        }
        Ok(out)
    }

    /// Coefficients as a dense antisymmetric `2^n × 2^n` table.
    pub(crate) fn dense(&self) -> Vec<i64> {
        let size = 1usize << self.n;
        let mut t = vec![0i64; size * size];
        for (&(b, c), &v) in &self.coeffs {
            t[b.index() * size + c.index()] = v;
            t[c.index() * size + b.index()] = -v;
        }
        t
    }

    pub(crate) fn from_sorted_entries(n: usize, entries: impl IntoIterator<Item = ((GroupElt, GroupElt), i64)>) -> Self {
        ExtSqElement {
            n,
            coeffs: entries.into_iter().filter(|&(_, v)| v != 0).collect(),
        }
    }

    pub fn to_file(&self, generators: &[u64]) -> CoefficientFile {
        CoefficientFile {
            generators: generators.to_vec(),
            coefficients: self
                .coefficients()
                .map(|(b, c, n)| CoefficientEntry { b, c, n })
                .collect(),
        }
    }
}

/// Canonical generator slots `(b, c)`, `b < c`, `b, c ∈ A`, in lexicographic order.
pub fn slots(n: usize) -> Vec<(GroupElt, GroupElt)> {
    let a: Vec<GroupElt> = GroupElt::nonzero(n).collect();
    let mut out = Vec::with_capacity(a.len() * (a.len() - 1) / 2);
    for (i, &b) in a.iter().enumerate() {
        for &c in &a[i + 1..] {
            out.push((b, c));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub b: GroupElt,
    pub c: GroupElt,
    pub n: i64,
}

/// `{"generators":[2,5], "coefficients":[{"b":[1,0],"c":[0,1],"n":1}]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientFile {
    #[serde(default)]
    pub generators: Vec<u64>,
    #[serde(default)]
    pub coefficients: Vec<CoefficientEntry>,
}

impl CoefficientFile {
    pub fn element(&self) -> Result<ExtSqElement> {
        let n = self.generators.len();
        let mut w = ExtSqElement::zero(n);
        for e in &self.coefficients {
            if e.b.dim() != n || e.c.dim() != n {
                return Err(Error::Parse(format!(
                    "coefficient key has {} bits, expected {n}",
                    e.b.dim().max(e.c.dim())
                )));
            }
            if w.get(e.b, e.c) != 0 {
                return Err(Error::Parse(format!("duplicate coefficient key ({}, {})", e.b, e.c)));
            }
            w.set(e.b, e.c, e.n)?;
        }
        Ok(w)
    }
}

/// Integer combination `Σ coef · log(u_b) log(u_c)` over canonical pairs `b < c`
/// (raw encodings).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairForm {
    pub terms: Vec<(u32, u32, i64)>,
}

impl PairForm {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, field: &MultiQuadField) -> Interval {
        self.terms.iter().fold(Interval::zero(field.precision_bits()), |acc, &(b, c, k)| {
            &acc + &field.log_product_bits(b, c).mul_int(k)
        })
    }
}

/// The summands of the regrouped norm formula, one per `(z, x)` with `z ∈ A`
/// and `x < z + x`:
///
/// `Σ_{d : ⟨d,z⟩ = 1} Σ_{b < b+d} 2 n_{b,d+b} log(u_b) log(u_{d+b}) (-1)^{⟨b,z⟩ + ⟨d,x⟩}`.
///
/// `‖w‖₁` is the sum of their absolute values.
pub fn closed_forms(w: &ExtSqElement) -> Vec<PairForm> {
    let n = w.n;
    let size = 1u32 << n;
    let dense = w.dense();
    let mut out = Vec::with_capacity(((size - 1) * size / 2) as usize);
    for z in 1..size {
        // v_d for d ∈ D_z, as (b, c, 2 n_{b,c} (-1)^⟨b,z⟩) terms.
        let mut v: Vec<(u32, Vec<(u32, u32, i64)>)> = Vec::new();
        for d in (1..size).filter(|&d| inner_bits(d, z)) {
            let mut terms = Vec::new();
            for b in 1..size {
                let c = b ^ d;
                if b < c {
                    let coef = dense[(b * size + c) as usize];
                    if coef != 0 {
                        terms.push((b, c, 2 * coef * sign_bits(b, z)));
                    }
                }
            }
            if !terms.is_empty() {
                v.push((d, terms));
            }
        }
        for x in (0..size).filter(|&x| x < (z ^ x)) {
            let mut terms: Vec<(u32, u32, i64)> = v
                .iter()
                .flat_map(|(d, ts)| {
                    let s = sign_bits(*d, x);
                    ts.iter().map(move |&(b, c, k)| (b, c, k * s))
                })
                .collect();
            terms.sort_unstable();
            out.push(PairForm { terms });
        }
    }
    out
}

/// `‖w‖₁` from the regrouped sum over `z`, `x`, `d`, `b`.
pub fn norm1_closed(field: &MultiQuadField, w: &ExtSqElement) -> Result<Interval> {
    check_dims(field, w)?;
    Ok(closed_forms(w)
        .iter()
        .fold(Interval::zero(field.precision_bits()), |acc, f| {
            &acc + &f.eval(field).abs()
        }))
}

fn check_dims(field: &MultiQuadField, w: &ExtSqElement) -> Result<()> {
    if field.dim() != w.n {
        Err(Error::DimensionMismatch(w.n, field.dim()))
    } else {
        Ok(())
    }
}

/// Coordinates of an element of `⋀²R^{A_L}` in the basis `δ^x ∧ δ^y`, `x < y`.
#[derive(Clone, Debug)]
pub struct ExpandedWedge<'f> {
    field: &'f MultiQuadField,
    coefficients: Vec<Interval>,
}

/// Position of the pair `(x, y)`, `x < y < size`, in row-major upper-triangular order.
pub fn pair_index(size: usize, x: usize, y: usize) -> usize {
    debug_assert!(x < y && y < size);
    x * size - x * (x + 1) / 2 + (y - x - 1)
}

impl<'f> ExpandedWedge<'f> {
    pub fn field(&self) -> &'f MultiQuadField {
        self.field
    }

    pub fn coefficients(&self) -> &[Interval] {
        &self.coefficients
    }

    /// Coefficient of `δ^x ∧ δ^y`; antisymmetric in `(x, y)`.
    pub fn coefficient(&self, x: &GroupElt, y: &GroupElt) -> Interval {
        let size = self.field.degree();
        match x.cmp(y) {
            std::cmp::Ordering::Less => self.coefficients[pair_index(size, x.index(), y.index())].clone(),
            std::cmp::Ordering::Greater => -&self.coefficients[pair_index(size, y.index(), x.index())],
            std::cmp::Ordering::Equal => Interval::zero(self.field.precision_bits()),
        }
    }
}

/// Expansion of `w` in the basis `δ^x ∧ δ^y`: the coefficient at `(x, y)` is
/// `Σ_{b<c} n_{b,c} log(u_b) log(u_c) [(-1)^{⟨b,x⟩+⟨c,y⟩} - (-1)^{⟨b,y⟩+⟨c,x⟩}]`.
pub fn expand<'f>(field: &'f MultiQuadField, w: &ExtSqElement) -> Result<ExpandedWedge<'f>> {
    check_dims(field, w)?;
    let size = field.degree() as u32;
    let terms: Vec<(u32, u32, i64, Interval)> = w
        .coefficients()
        .map(|(b, c, k)| (b.bits(), c.bits(), k, field.log_product_bits(b.bits(), c.bits())))
        .collect();
    let mut coefficients = Vec::with_capacity((size * (size - 1) / 2) as usize);
    for x in 0..size {
        for y in x + 1..size {
            let mut acc = Interval::zero(field.precision_bits());
            for (b, c, k, prod) in &terms {
                let bracket = sign_bits(*b, x) * sign_bits(*c, y) - sign_bits(*b, y) * sign_bits(*c, x);
                if bracket != 0 {
                    acc = &acc + &prod.mul_int(k * bracket);
                }
            }
            coefficients.push(acc);
        }
    }
    Ok(ExpandedWedge {
        field,
        coefficients,
    })
}

/// `‖e‖₁ = Σ |c_I|`.
pub fn norm1_direct(e: &ExpandedWedge<'_>) -> Interval {
    e.coefficients
        .iter()
        .fold(Interval::zero(e.field.precision_bits()), |acc, c| &acc + &c.abs())
}

/// `v ∧ v'`: coefficient at `(x, y)` is `v_x v'_y - v_y v'_x`.
pub fn wedge_pure<'f>(v: &LogVector<'f>, w: &LogVector<'f>) -> Result<ExpandedWedge<'f>> {
    if !v.field().same_field(w.field()) {
        return Err(Error::FieldMismatch);
    }
    let field = v.field();
    let (a, b) = (v.entries(), w.entries());
    let size = a.len();
    let mut coefficients = Vec::with_capacity(size * (size - 1) / 2);
    for x in 0..size {
        for y in x + 1..size {
            coefficients.push(&a[x].mul(&b[y]) - &a[y].mul(&b[x]));
        }
    }
    Ok(ExpandedWedge {
        field,
        coefficients,
    })
}
