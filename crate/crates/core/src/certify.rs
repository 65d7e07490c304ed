//! Exact decisions about norms.
//!
//! Every quantity here is an integer combination of products
//! `log u_{d1} · log u_{d2}`, keyed by the radicand pair. A form that is zero
//! as a combination is zero as a number, whatever the transcendence status of
//! the logs; a nonzero form has its sign read off from intervals at increasing
//! precision. Ties such as the norm of `e_1 ∧ e_2` in Q(√2, √5) against the
//! floor are therefore settled exactly rather than by overlapping intervals.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::error::Result;
use crate::extsquare::{closed_forms, norm1_closed, ExtSqElement, PairForm};
use crate::interval::{Interval, MAX_PRECISION};
use crate::multiquad::MultiQuadField;
use crate::quadunit::{fundamental_unit, log_unit};

/// Precisions tried, in order, when a sign is not visible.
pub const ESCALATION: [u32; 4] = [128, 256, 512, MAX_PRECISION];

static LOG_CACHE: Mutex<Option<HashMap<(u64, u32), Interval>>> = Mutex::new(None);

/// `log u_d` for a square-free `d > 1`, memoized per precision.
pub fn log_at(d: u64, precision_bits: u32) -> Result<Interval> {
    if let Some(v) = LOG_CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .get(&(d, precision_bits))
    {
        return Ok(v.clone());
    }
    let v = log_unit(&fundamental_unit(d)?, precision_bits)?;
    LOG_CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert((d, precision_bits), v.clone());
    Ok(v)
}

/// `Σ k · log u_{d1} log u_{d2}` over sorted radicand pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RadicandForm {
    terms: BTreeMap<(u64, u64), i128>,
}

impl RadicandForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(d1: u64, d2: u64, k: i128) -> Self {
        let mut f = Self::zero();
        f.add_term(d1, d2, k);
        f
    }

    pub fn add_term(&mut self, d1: u64, d2: u64, k: i128) {
        let key = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let e = self.terms.entry(key).or_insert(0);
        *e += k;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    /// `self + k · other`.
    pub fn add_scaled(&mut self, other: &RadicandForm, k: i128) {
        for (&(a, b), &v) in &other.terms {
            self.add_term(a, b, k * v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u64, u64), i128)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn from_pair_form(field: &MultiQuadField, f: &PairForm) -> Self {
        let r = field.radicands();
        let mut out = Self::zero();
        for &(b, c, k) in &f.terms {
            out.add_term(r[b as usize], r[c as usize], k as i128);
        }
        out
    }

    pub fn eval(&self, precision_bits: u32) -> Result<Interval> {
        let mut acc = Interval::zero(precision_bits);
        for (&(a, b), &k) in &self.terms {
            let p = log_at(a, precision_bits)?.mul(&log_at(b, precision_bits)?);
            acc = &acc + &p.mul_int(k);
        }
        Ok(acc)
    }

    /// `Some(0)` for the zero form, `Some(±1)` once an enclosure excludes zero,
    /// `None` if it still straddles zero at the top precision.
    pub fn sign(&self) -> Result<Option<i32>> {
        if self.is_zero() {
            return Ok(Some(0));
        }
        for p in ESCALATION {
            if let Some(s) = self.eval(p)?.sign() {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

/// `‖w‖₁` as a form, with the number of summands whose sign stayed unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormForm {
    pub form: RadicandForm,
    pub undecided_terms: usize,
}

impl NormForm {
    pub fn is_decided(&self) -> bool {
        self.undecided_terms == 0
    }
}

/// `‖w‖₁ = Σ |F|` over the closed-formula summands, with each `|F|` resolved
/// to `±F` (or dropped if `F` vanishes identically).
pub fn norm_form(field: &MultiQuadField, w: &ExtSqElement) -> Result<NormForm> {
    norm1_closed(field, w)?;
    let r = field.radicands();
    let mut form = RadicandForm::zero();
    let mut undecided_terms = 0;
    for pf in closed_forms(w) {
        if pf.is_zero() {
            continue;
        }
        let s = match pf.eval(field).sign() {
            Some(s) => Some(s),
            None => RadicandForm::from_pair_form(field, &pf).sign()?,
        };
        match s {
            Some(s) => {
                for &(b, c, k) in &pf.terms {
                    form.add_term(r[b as usize], r[c as usize], (s as i128) * (k as i128));
                }
            }
            None => undecided_terms += 1,
        }
    }
    Ok(NormForm {
        form,
        undecided_terms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Undecided,
}

/// Exact comparison of two forms.
pub fn compare_forms(a: &RadicandForm, b: &RadicandForm) -> Result<Comparison> {
    let mut diff = a.clone();
    diff.add_scaled(b, -1);
    Ok(match diff.sign()? {
        Some(0) => Comparison::Equal,
        Some(s) if s > 0 => Comparison::Greater,
        Some(_) => Comparison::Less,
        None => Comparison::Undecided,
    })
}

/// Compare `‖w‖₁` with a form, trying the plain intervals first.
pub fn compare_norm(field: &MultiQuadField, w: &ExtSqElement, norm: &Interval, other: &RadicandForm) -> Result<Comparison> {
    let o = other.eval(field.precision_bits().max(ESCALATION[0]))?;
    if norm.certainly_gt(&o) {
        return Ok(Comparison::Greater);
    }
    if o.certainly_gt(norm) {
        return Ok(Comparison::Less);
    }
    let nf = norm_form(field, w)?;
    if !nf.is_decided() {
        return Ok(Comparison::Undecided);
    }
    compare_forms(&nf.form, other)
}

/// `2^(2n-1) log u_5 log u_2`.
pub fn proto_bound_form(n: usize) -> RadicandForm {
    RadicandForm::monomial(2, 5, 1i128 << (2 * n - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::proto_bound;
    use crate::f2n::GroupElt;

    #[test]
    fn forms_cancel_and_evaluate() {
        let mut f = RadicandForm::monomial(5, 2, 3);
        assert_eq!(f.terms().collect::<Vec<_>>(), vec![((2, 5), 3)]);
        f.add_scaled(&RadicandForm::monomial(2, 5, 1), -3);
        assert!(f.is_zero());
        assert_eq!(f.sign().unwrap(), Some(0));
        let g = proto_bound_form(2);
        assert_eq!(g.eval(128).unwrap(), proto_bound(2).unwrap());
        assert_eq!(g.sign().unwrap(), Some(1));
    }

    #[test]
    fn close_forms_get_signs() {
        // Large cancelling coefficients still leave a visible sign.
        let mut f = RadicandForm::monomial(2, 3, 1000);
        f.add_term(2, 5, -1000);
        f.add_term(3, 5, 1);
        let v = f.eval(256).unwrap().mid_f64();
        assert_eq!(f.sign().unwrap(), Some(if v > 0.0 { 1 } else { -1 }));
    }

    #[test]
    fn e12_norm_equals_floor_exactly() {
        let field = MultiQuadField::new(&[2, 5], 128).unwrap();
        let w = ExtSqElement::single(GroupElt::basis(2, 1), GroupElt::basis(2, 2), 1).unwrap();
        let nf = norm_form(&field, &w).unwrap();
        assert!(nf.is_decided());
        assert_eq!(nf.form, proto_bound_form(2));
        let norm = norm1_closed(&field, &w).unwrap();
        assert_eq!(compare_norm(&field, &w, &norm, &proto_bound_form(2)).unwrap(), Comparison::Equal);
        let w2 = w.scaled(2);
        let norm2 = norm1_closed(&field, &w2).unwrap();
        assert_eq!(compare_norm(&field, &w2, &norm2, &proto_bound_form(2)).unwrap(), Comparison::Greater);
    }

    #[test]
    fn norm_form_matches_interval() {
        let field = MultiQuadField::new(&[2, 3, 5], 128).unwrap();
        let mut w = ExtSqElement::zero(3);
        w.set(GroupElt::new(3, 1).unwrap(), GroupElt::new(3, 6).unwrap(), 2).unwrap();
        w.set(GroupElt::new(3, 3).unwrap(), GroupElt::new(3, 4).unwrap(), -1).unwrap();
        w.set(GroupElt::new(3, 2).unwrap(), GroupElt::new(3, 5).unwrap(), 1).unwrap();
        let nf = norm_form(&field, &w).unwrap();
        let norm = norm1_closed(&field, &w).unwrap();
        assert!(nf.form.eval(128).unwrap().intersects(&norm));
    }
}
