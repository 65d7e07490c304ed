//! Exhaustive search for small-norm elements of `⋀²LOG(E)`.
//!
//! Elements are enumerated by support (a set of at most `s` slots) and then by
//! nonzero coefficients in `[-K, K]`, keeping only the representative whose
//! first coefficient is positive. Supports are the unit of parallel work and
//! the per-support results are folded in support order, so the result does not
//! depend on the thread count.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::bound::proto_bound_at;
use crate::certify::{compare_forms, compare_norm, norm_form, proto_bound_form, Comparison, NormForm, RadicandForm};
use crate::error::{Error, Result};
use crate::extsquare::{norm1_closed, slots, CoefficientFile, ExtSqElement};
use crate::f2n::GroupElt;
use crate::interval::Interval;
use crate::multiquad::MultiQuadField;

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Search parameters. Norms are evaluated at the field's precision and
/// escalated only where a comparison needs it.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub field: MultiQuadField,
    pub max_coeff: i64,
    pub max_support: usize,
    /// `None` uses every core.
    pub thread_count: Option<usize>,
    pub budget: u128,
}

impl SearchSpec {
    pub fn new(field: MultiQuadField, max_coeff: i64, max_support: usize) -> Self {
        SearchSpec {
            field,
            max_coeff,
            max_support,
            thread_count: None,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn precision_bits(&self) -> u32 {
        self.field.precision_bits()
    }

    /// Number of elements visited: `Σ_k C(slots, k) (2K)^k / 2` for `k ≤ s`.
    pub fn search_size(&self) -> u128 {
        let n = self.field.dim();
        let m = ((1u128 << n) - 1) * ((1u128 << n) - 2) / 2;
        let per = 2 * self.max_coeff.max(0) as u128;
        let mut total: u128 = 0;
        let mut binom: u128 = 1;
        let mut pow: u128 = 1;
        for k in 1..=(self.max_support as u128).min(m) {
            let step = binom
                .checked_mul(m - k + 1)
                .map(|v| v / k)
                .zip(pow.checked_mul(per));
            let Some((b, p)) = step else { return u128::MAX };
            binom = b;
            pow = p;
            match binom.checked_mul(pow).and_then(|t| total.checked_add(t / 2)) {
                Some(t) => total = t,
                None => return u128::MAX,
            }
        }
        total
    }

    fn validate(&self) -> Result<()> {
        if self.max_coeff < 1 {
            return Err(Error::InvalidArgument(format!("max_coeff must be at least 1, got {}", self.max_coeff)));
        }
        if self.max_support < 1 {
            return Err(Error::InvalidArgument("max_support must be at least 1".into()));
        }
        if self.thread_count == Some(0) {
            return Err(Error::InvalidArgument("thread count must be positive".into()));
        }
        let required = self.search_size();
        if required > self.budget {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UndecidedAgainst {
    Floor,
    Minimum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undecided {
    pub element: ExtSqElement,
    pub against: UndecidedAgainst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub generators: Vec<u64>,
    pub precision_bits: u32,
    pub max_coeff: i64,
    pub max_support: usize,
    pub slot_count: usize,
    pub minimum_norm: Interval,
    /// Sorted by coefficient vector in slot order.
    pub minimizers: Vec<ExtSqElement>,
    /// `proto_bound(n)`
    pub certified_floor: Interval,
    pub all_above_floor: bool,
    pub below_floor: Vec<ExtSqElement>,
    pub undecided: Vec<Undecided>,
    pub visited_count: u128,
}

impl SearchResult {
    /// The support cap covers every slot.
    pub fn is_complete(&self) -> bool {
        self.max_support >= self.slot_count
    }

    pub fn is_decided(&self) -> bool {
        self.undecided.is_empty()
    }

    /// `minimum_norm - certified_floor`.
    pub fn margin(&self) -> Interval {
        &self.minimum_norm - &self.certified_floor
    }

    /// One row per minimizer coefficient: `index,b,c,n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("minimizer,b,c,n\n");
        for (i, w) in self.minimizers.iter().enumerate() {
            for (b, c, k) in w.coefficients() {
                out.push_str(&format!("{i},{},{},{k}\n", b.bits(), c.bits()));
            }
        }
        out
    }
}

#[derive(Serialize)]
struct UndecidedView {
    element: CoefficientFile,
    against: UndecidedAgainst,
}

#[derive(Serialize)]
struct SearchResultView<'a> {
    schema: u32,
    generators: &'a [u64],
    precision_bits: u32,
    max_coeff: i64,
    max_support: usize,
    slot_count: usize,
    complete: bool,
    visited_count: String,
    minimum_norm: &'a Interval,
    minimizers: Vec<CoefficientFile>,
    certified_floor: &'a Interval,
    margin: Interval,
    all_above_floor: bool,
    below_floor: Vec<CoefficientFile>,
    undecided: Vec<UndecidedView>,
}

impl Serialize for SearchResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let g = &self.generators;
        SearchResultView {
            schema: 1,
            generators: g,
            precision_bits: self.precision_bits,
            max_coeff: self.max_coeff,
            max_support: self.max_support,
            slot_count: self.slot_count,
            complete: self.is_complete(),
            visited_count: self.visited_count.to_string(),
            minimum_norm: &self.minimum_norm,
            minimizers: self.minimizers.iter().map(|w| w.to_file(g)).collect(),
            certified_floor: &self.certified_floor,
            margin: self.margin(),
            all_above_floor: self.all_above_floor,
            below_floor: self.below_floor.iter().map(|w| w.to_file(g)).collect(),
            undecided: self
                .undecided
                .iter()
                .map(|u| UndecidedView {
                    element: u.element.to_file(g),
                    against: u.against,
                })
                .collect(),
        }
        .serialize(s)
    }
}

struct Best {
    norm: Interval,
    form: Option<NormForm>,
    elems: Vec<ExtSqElement>,
}

impl Best {
    fn form(&mut self, field: &MultiQuadField) -> Result<&NormForm> {
        if self.form.is_none() {
            self.form = Some(norm_form(field, &self.elems[0])?);
        }
        Ok(self.form.as_ref().unwrap())
    }
}

#[derive(Default)]
struct Partial {
    best: Option<Best>,
    below: Vec<ExtSqElement>,
    undecided: Vec<Undecided>,
    visited: u128,
}

impl Partial {
    fn offer(&mut self, field: &MultiQuadField, mut cand: Best) -> Result<()> {
        let Some(best) = self.best.as_mut() else {
            self.best = Some(cand);
            return Ok(());
        };
        let cmp = if cand.norm.certainly_gt(&best.norm) {
            Comparison::Greater
        } else if best.norm.certainly_gt(&cand.norm) {
            Comparison::Less
        } else {
            let a = cand.form(field)?.clone();
            let b = best.form(field)?;
            if a.is_decided() && b.is_decided() {
                compare_forms(&a.form, &b.form)?
            } else {
                Comparison::Undecided
            }
        };
        match cmp {
            Comparison::Greater => {}
            Comparison::Less => *best = cand,
            Comparison::Equal => best.elems.append(&mut cand.elems),
            Comparison::Undecided => {
                self.undecided.extend(cand.elems.iter().map(|w| Undecided {
                    element: w.clone(),
                    against: UndecidedAgainst::Minimum,
                }));
                best.elems.append(&mut cand.elems);
            }
        }
        Ok(())
    }

    fn merge(&mut self, field: &MultiQuadField, other: Partial) -> Result<()> {
        self.below.extend(other.below);
        self.undecided.extend(other.undecided);
        self.visited += other.visited;
        if let Some(b) = other.best {
            self.offer(field, b)?;
        }
        Ok(())
    }
}

/// All supports of size `1..=s`, as ascending slot-index lists, in lexicographic order by size.
fn supports(slot_count: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=s.min(slot_count) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.clone());
            let Some(i) = (0..k).rev().find(|&i| idx[i] < slot_count - k + i) else { break };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

fn search_support(
    field: &MultiQuadField,
    all_slots: &[(GroupElt, GroupElt)],
    support: &[usize],
    k_max: i64,
    floor: &Interval,
    floor_form: &RadicandForm,
) -> Result<Partial> {
    let n = field.dim();
    let k = support.len();
    // Coefficient values: first in 1..=K, the rest in ±1..=K.
    let nonzero: Vec<i64> = (-k_max..=k_max).filter(|&v| v != 0).collect();
    let mut digits = vec![0usize; k];
    let mut part = Partial::default();
    loop {
        let entries = support.iter().enumerate().map(|(i, &slot)| {
            let v = if i == 0 { digits[0] as i64 + 1 } else { nonzero[digits[i]] };
            (all_slots[slot], v)
        });
        let w = ExtSqElement::from_sorted_entries(n, entries);
        let norm = norm1_closed(field, &w)?;
        part.visited += 1;
        if !norm.certainly_ge(floor) {
            match compare_norm(field, &w, &norm, floor_form)? {
                Comparison::Greater | Comparison::Equal => {}
                Comparison::Less => part.below.push(w.clone()),
                Comparison::Undecided => part.undecided.push(Undecided {
                    element: w.clone(),
                    against: UndecidedAgainst::Floor,
                }),
            }
        }
        part.offer(
            field,
            Best {
                norm,
                form: None,
                elems: vec![w],
            },
        )?;
        // Odometer step.
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(part);
            }
            i -= 1;
            let radix = if i == 0 { k_max as usize } else { nonzero.len() };
            digits[i] += 1;
            if digits[i] < radix {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn coefficient_vector(w: &ExtSqElement, all_slots: &[(GroupElt, GroupElt)]) -> Vec<i64> {
    all_slots.iter().map(|&(b, c)| w.get(b, c)).collect()
}

/// Visits every element with support at most `s` and coefficients in `[-K, K]`
/// up to sign, returning the minimum norm and its comparison with the floor.
pub fn enumerate_min(spec: &SearchSpec) -> Result<SearchResult> {
    spec.validate()?;
    let field = &spec.field;
    let n = field.dim();
    let all_slots = slots(n);
    let floor = proto_bound_at(n, field.precision_bits())?;
    let floor_form = proto_bound_form(n);
    let sups = supports(all_slots.len(), spec.max_support);

    let run = || -> Result<Vec<Partial>> {
        sups.par_iter()
            .map(|s| search_support(field, &all_slots, s, spec.max_coeff, &floor, &floor_form))
            .collect()
    };
    let parts = match spec.thread_count {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run)?,
        None => run()?,
    };

    let mut total = Partial::default();
    for p in parts {
        total.merge(field, p)?;
    }
    let best = total.best.expect("at least one element is visited");
    let mut minimizers = best.elems;
    minimizers.sort_by_cached_key(|w| coefficient_vector(w, &all_slots));
    minimizers.dedup();
    let minimum_norm = norm1_closed(field, &minimizers[0])?;
    Ok(SearchResult {
        generators: field.generators().to_vec(),
        precision_bits: field.precision_bits(),
        max_coeff: spec.max_coeff,
        max_support: spec.max_support,
        slot_count: all_slots.len(),
        minimum_norm,
        minimizers,
        all_above_floor: total.below.is_empty() && !total.undecided.iter().any(|u| u.against == UndecidedAgainst::Floor),
        certified_floor: floor,
        below_floor: total.below,
        undecided: total.undecided,
        visited_count: total.visited,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub schema: u32,
    pub certified: bool,
    pub all_above_floor: bool,
    pub undecided_count: usize,
    pub proto_floor: Interval,
    /// `proto_floor / 2^(2n-2)`, the constant for `⋀²LOG(O_L*)`.
    pub theorem_floor: Interval,
    pub minimum_norm: Interval,
    /// The minimum scaled back by `2^(2n-2)`.
    pub implied_minimum: Interval,
    pub margin: Interval,
    pub visited_count: String,
    pub complete: bool,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.certified
    }
}

/// Certifies `‖w‖₁ ≥ proto_bound(n)` for every visited `w`. Any undecided
/// comparison with the floor makes the result uncertified.
pub fn verify_theorem(spec: &SearchSpec) -> Result<TheoremReport> {
    let r = enumerate_min(spec)?;
    Ok(theorem_report(&r))
}

pub fn theorem_report(r: &SearchResult) -> TheoremReport {
    let shift = -(2 * r.generators.len() as i64 - 2);
    let floor_undecided = r.undecided.iter().filter(|u| u.against == UndecidedAgainst::Floor).count();
    TheoremReport {
        schema: 1,
        certified: r.all_above_floor && floor_undecided == 0,
        all_above_floor: r.all_above_floor,
        undecided_count: r.undecided.len(),
        theorem_floor: r.certified_floor.shl(shift),
        proto_floor: r.certified_floor.clone(),
        implied_minimum: r.minimum_norm.shl(shift),
        minimum_norm: r.minimum_norm.clone(),
        margin: r.margin(),
        visited_count: r.visited_count.to_string(),
        complete: r.is_complete(),
    }
}

/// Orders two search results' minima exactly; used to compare fields.
pub fn compare_minima(field_a: &MultiQuadField, a: &SearchResult, field_b: &MultiQuadField, b: &SearchResult) -> Result<Ordering> {
    let fa = norm_form(field_a, &a.minimizers[0])?;
    let fb = norm_form(field_b, &b.minimizers[0])?;
    match compare_forms(&fa.form, &fb.form)? {
        Comparison::Less => Ok(Ordering::Less),
        Comparison::Equal => Ok(Ordering::Equal),
        Comparison::Greater => Ok(Ordering::Greater),
        Comparison::Undecided => Err(Error::InvalidArgument("comparison undecided at maximum precision".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::log_at;

    fn spec(gens: &[u64], k: i64, s: usize) -> SearchSpec {
        SearchSpec::new(MultiQuadField::new(gens, 128).unwrap(), k, s)
    }

    #[test]
    fn support_enumeration() {
        assert_eq!(supports(3, 2), vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(supports(4, 9).len(), 15);
    }

    #[test]
    fn counts() {
        let sp = spec(&[2, 5], 1, 3);
        assert_eq!(sp.search_size(), (27 - 1) / 2);
        let r = enumerate_min(&sp).unwrap();
        assert_eq!(r.visited_count, 13);
        let sp = spec(&[2, 5], 3, 3);
        assert_eq!(sp.search_size(), (343 - 1) / 2);
        assert_eq!(spec(&[2, 3, 5], 2, 1).search_size(), 21 * 2);
    }

    #[test]
    fn single_slots() {
        let r = enumerate_min(&spec(&[2, 5], 1, 1)).unwrap();
        assert_eq!(r.visited_count, 3);
        assert_eq!(r.minimizers.len(), 1);
        let w = &r.minimizers[0];
        assert_eq!(w.get(GroupElt::basis(2, 1), GroupElt::basis(2, 2)), 1);
        assert!(r.all_above_floor);
        assert!(r.margin().contains_zero());
        assert!(log_at(10, 128).unwrap().certainly_gt(&log_at(5, 128).unwrap()));
    }

    #[test]
    fn minimum_over_2_5() {
        let r = enumerate_min(&spec(&[2, 5], 3, 3)).unwrap();
        assert_eq!(r.minimizers.len(), 1);
        assert!(r.minimum_norm.intersects(&r.certified_floor));
        assert!((r.minimum_norm.mid_f64() - 3.393_019_138_952_028).abs() < 1e-15);
        assert!(r.all_above_floor && r.is_decided() && r.is_complete());
    }

    #[test]
    fn determinism_across_threads() {
        let mut a = spec(&[2, 3, 5], 1, 2);
        a.thread_count = Some(1);
        let mut b = a.clone();
        b.thread_count = Some(4);
        let ra = serde_json::to_string(&enumerate_min(&a).unwrap()).unwrap();
        let rb = serde_json::to_string(&enumerate_min(&b).unwrap()).unwrap();
        assert_eq!(ra, rb);
    }

    #[test]
    fn refusals() {
        let mut sp = spec(&[2, 3, 5], 5, 21);
        assert!(matches!(enumerate_min(&sp), Err(Error::BudgetExceeded { .. })));
        sp.max_coeff = 0;
        assert!(matches!(enumerate_min(&sp), Err(Error::InvalidArgument(_))));
        let mut sp = spec(&[2, 5], 1, 1);
        sp.thread_count = Some(0);
        assert!(enumerate_min(&sp).is_err());
    }

    #[test]
    fn theorem_for_3_7_is_strict() {
        let rep = verify_theorem(&spec(&[3, 7], 3, 3)).unwrap();
        assert!(rep.holds());
        assert!(rep.margin.sign() == Some(1));
        assert!((rep.theorem_floor.mid_f64() - 0.848_254_784_738_007).abs() < 1e-15);
    }

    #[test]
    fn doubled_precision_nests() {
        let r1 = enumerate_min(&spec(&[2, 5], 2, 2)).unwrap();
        let r2 = enumerate_min(&SearchSpec::new(MultiQuadField::new(&[2, 5], 256).unwrap(), 2, 2)).unwrap();
        assert!(r2.minimum_norm.is_subset_of(&r1.minimum_norm));
    }

    #[test]
    fn csv_and_json() {
        let r = enumerate_min(&spec(&[2, 5], 1, 1)).unwrap();
        assert_eq!(r.to_csv(), "minimizer,b,c,n\n0,1,2,1\n");
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["visited_count"], "3");
        assert_eq!(j["minimizers"][0]["coefficients"][0]["n"], 1);
    }
}
