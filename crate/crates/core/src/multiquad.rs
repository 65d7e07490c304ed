//! Real multi-quadratic fields `L = Q(√g_1, …, √g_n)` and LOG vectors of the
//! subfield units.
//!
//! `λ(e_i)` negates `√g_i` and fixes the other generators, so the quadratic
//! subfield attached to `a ∈ A` is `Q(√d_a)` with `d_a` the square-free part of
//! `∏ g_i^{a_i}`. Places are indexed by `x ∈ (Z/2Z)^n`; every place is real.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2n::{sign_bits, GroupElt, MAX_DIM};
use crate::interval::{Interval, DEFAULT_PRECISION};
use crate::quadunit::{fundamental_unit, log_unit, square_free_part, validate_radicand, QuadUnit};

/// Largest `n` for which the table of pairwise log products is cached.
const PRODUCT_TABLE_MAX_DIM: usize = 10;

#[derive(Clone, Debug)]
pub struct MultiQuadField {
    n: usize,
    generators: Vec<u64>,
    precision_bits: u32,
    /// `radicands[a]` for `a` encoded as an integer; index 0 holds 1.
    radicands: Vec<u64>,
    units: Vec<Option<QuadUnit>>,
    logs: Vec<Option<Interval>>,
    products: OnceLock<Vec<Interval>>,
}

/// `{"generators":[2,5], "precision_bits":128}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub generators: Vec<u64>,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
}

fn default_precision() -> u32 {
    DEFAULT_PRECISION
}

impl MultiQuadField {
    pub fn new(generators: &[u64], precision_bits: u32) -> Result<Self> {
        let n = generators.len();
        if n < 2 {
            return Err(Error::TooFewGenerators(n));
        }
        if n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n, 2, MAX_DIM));
        }
        if precision_bits < 32 {
            return Err(Error::PrecisionTooLow {
                got: precision_bits,
                min: 32,
            });
        }
        for &g in generators {
            validate_radicand(g)?;
        }
        let size = 1usize << n;
        let mut radicands = vec![1u64; size];
        for a in 1..size {
            let low = a & a.wrapping_neg();
            let prod = radicands[a ^ low] as u128 * generators[low.trailing_zeros() as usize] as u128;
            radicands[a] = u64::try_from(square_free_part(prod)).map_err(|_| Error::RadicandOverflow)?;
        }
        let mut seen: HashMap<u64, usize> = HashMap::from([(1, 0)]);
        for (a, &d) in radicands.iter().enumerate().skip(1) {
            if let Some(&prev) = seen.get(&d) {
                return Err(Error::DependentGenerators {
                    first: subset_indices(prev),
                    second: subset_indices(a),
                    radicand: d,
                });
            }
            seen.insert(d, a);
        }
        let computed: Vec<(QuadUnit, Interval)> = radicands[1..]
            .par_iter()
            .map(|&d| {
                let u = fundamental_unit(d)?;
                let l = log_unit(&u, precision_bits)?;
                Ok((u, l))
            })
            .collect::<Result<_>>()?;
        let mut units = vec![None];
        let mut logs = vec![None];
        for (u, l) in computed {
            units.push(Some(u));
            logs.push(Some(l));
        }
        Ok(MultiQuadField {
            n,
            generators: generators.to_vec(),
            precision_bits,
            radicands,
            units,
            logs,
            products: OnceLock::new(),
        })
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Self> {
        Self::new(&desc.generators, desc.precision_bits)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `[L : Q] = 2^n`, also the number of places.
    pub fn degree(&self) -> usize {
        1 << self.n
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Radicands by encoding; entry 0 is 1.
    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    fn check_nonzero(&self, a: &GroupElt) -> Result<usize> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch(a.dim(), self.n));
        }
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(a.index())
    }

    pub fn radicand(&self, a: &GroupElt) -> Result<u64> {
        Ok(self.radicands[self.check_nonzero(a)?])
    }

    pub fn unit(&self, a: &GroupElt) -> Result<&QuadUnit> {
        Ok(self.units[self.check_nonzero(a)?].as_ref().expect("nonzero index"))
    }

    pub fn log(&self, a: &GroupElt) -> Result<&Interval> {
        Ok(self.logs[self.check_nonzero(a)?].as_ref().expect("nonzero index"))
    }

    pub(crate) fn log_bits(&self, bits: u32) -> &Interval {
        self.logs[bits as usize].as_ref().expect("nonzero index")
    }

    /// `log(u_b) · log(u_c)` for nonzero `b`, `c` given by encoding.
    pub fn log_product_bits(&self, b: u32, c: u32) -> Interval {
        if self.n <= PRODUCT_TABLE_MAX_DIM {
            let size = self.degree();
            let table = self.products.get_or_init(|| {
                let mut t = Vec::with_capacity(size * size);
                for i in 0..size {
                    for j in 0..size {
                        if i == 0 || j == 0 {
                            t.push(Interval::zero(self.precision_bits));
                        } else {
                            t.push(self.logs[i].as_ref().unwrap().mul(self.logs[j].as_ref().unwrap()));
                        }
                    }
                }
                t
            });
            table[b as usize * size + c as usize].clone()
        } else {
            self.log_bits(b).mul(self.log_bits(c))
        }
    }

    /// Subfield radicands paired with their index `a`, in canonical order.
    pub fn subfields(&self) -> impl Iterator<Item = (GroupElt, u64)> + '_ {
        GroupElt::nonzero(self.n).map(|a| (a, self.radicands[a.index()]))
    }

    /// Index `a` whose subfield is `Q(√d)`, if any.
    pub fn index_of_radicand(&self, d: u64) -> Option<GroupElt> {
        self.subfields().find(|&(_, r)| r == d).map(|(a, _)| a)
    }

    pub fn same_field(&self, other: &MultiQuadField) -> bool {
        std::ptr::eq(self, other) || self.generators == other.generators
    }

    pub fn report(&self) -> FieldReport {
        FieldReport {
            schema: 1,
            n: self.n,
            generators: self.generators.clone(),
            precision_bits: self.precision_bits,
            subfields: GroupElt::nonzero(self.n)
                .map(|a| SubfieldReport {
                    a,
                    radicand: self.radicands[a.index()],
                    unit: self.unit(&a).expect("nonzero").clone(),
                    log: self.log(&a).expect("nonzero").clone(),
                })
                .collect(),
        }
    }
}

fn subset_indices(a: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|i| a >> i & 1 == 1).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SubfieldReport {
    pub a: GroupElt,
    pub radicand: u64,
    pub unit: QuadUnit,
    pub log: Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub schema: u32,
    pub n: usize,
    pub generators: Vec<u64>,
    pub precision_bits: u32,
    pub subfields: Vec<SubfieldReport>,
}

/// A vector in `R^{A_L}`, indexed by places `x ∈ (Z/2Z)^n`.
#[derive(Clone, Debug)]
pub struct LogVector<'f> {
    field: &'f MultiQuadField,
    /// `Some(a)` for `LOG(u_a)`, `None` for a general combination.
    source: Option<GroupElt>,
    entries: Vec<Interval>,
}

impl<'f> LogVector<'f> {
    pub fn field(&self) -> &'f MultiQuadField {
        self.field
    }

    pub fn source(&self) -> Option<GroupElt> {
        self.source
    }

    pub fn entries(&self) -> &[Interval] {
        &self.entries
    }

    pub fn entry(&self, x: &GroupElt) -> &Interval {
        &self.entries[x.index()]
    }

    pub fn coordinate_sum(&self) -> Interval {
        self.entries
            .iter()
            .fold(Interval::zero(self.field.precision_bits), |acc, e| &acc + e)
    }
}

/// `LOG(u_a)`: the entry at place `x` is `(-1)^⟨a,x⟩ log(u_a)`.
pub fn log_vector<'f>(field: &'f MultiQuadField, a: &GroupElt) -> Result<LogVector<'f>> {
    let log = field.log(a)?;
    let entries = GroupElt::all(field.n)
        .map(|x| if a.inner(&x) { -log } else { log.clone() })
        .collect();
    Ok(LogVector {
        field,
        source: Some(*a),
        entries,
    })
}

/// `LOG(∏ u_a^{m_a}) = Σ m_a LOG(u_a)`.
pub fn combination_log<'f>(
    field: &'f MultiQuadField,
    exponents: &BTreeMap<GroupElt, i64>,
) -> Result<LogVector<'f>> {
    let mut entries = vec![Interval::zero(field.precision_bits); field.degree()];
    for (a, &m) in exponents {
        if m == 0 {
            continue;
        }
        let scaled = field.log(a)?.mul_int(m);
        let neg = -&scaled;
        for (x, e) in entries.iter_mut().enumerate() {
            let term = if sign_bits(a.bits(), x as u32) < 0 { &neg } else { &scaled };
            *e = &*e + term;
        }
    }
    Ok(LogVector {
        field,
        source: None,
        entries,
    })
}
