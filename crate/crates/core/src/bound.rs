//! The lower-bound chain for `‖w‖₁` on `⋀²LOG(E)`.
//!
//! `P_z` and `Q_d` are `±1` matrices with pairwise orthogonal rows, so
//! `‖MX‖₁ ≥ 2^m ‖X‖_∞` applies to them. Chaining the two gives
//!
//! ```text
//! ‖w‖₁ ≥ 2^n max_d Σ_{z : ⟨d,z⟩=1} |Σ_{b<b+d} n_{b,d+b} log u_b log u_{d+b} (-1)^⟨b,z⟩|
//!      ≥ 2^(2n-1) max_{b<c} |n_{b,c}| log u_b log u_c
//!      ≥ 2^(2n-1) log((1+√5)/2) log(1+√2)
//! ```
//!
//! and dividing by `2^(2n-2)` gives the degree-free constant for the full unit lattice.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extsquare::{norm1_closed, ExtSqElement};
use crate::f2n::{check_dim, sign_bits, GroupElt};
use crate::interval::{Interval, DEFAULT_PRECISION};
use crate::multiquad::MultiQuadField;
use crate::quadunit::{fundamental_unit, log_unit};

/// Square `±1` matrix of size `2^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignMatrix {
    pub rows_index: Vec<GroupElt>,
    pub cols_index: Vec<GroupElt>,
    pub rows: Vec<Vec<i8>>,
}

impl SignMatrix {
    /// A bare matrix without group-element labels.
    pub fn from_rows(rows: Vec<Vec<i8>>) -> Result<Self> {
        let size = rows.len();
        if !size.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("size {size} is not a power of two")));
        }
        for r in &rows {
            if r.len() != size {
                return Err(Error::DimensionMismatch(r.len(), size));
            }
            if r.iter().any(|&e| e != 1 && e != -1) {
                return Err(Error::InvalidArgument("entries must be +1 or -1".into()));
            }
        }
        Ok(SignMatrix {
            rows_index: vec![],
            cols_index: vec![],
            rows,
        })
    }

    fn labelled(rows_index: Vec<GroupElt>, cols_index: Vec<GroupElt>) -> Self {
        let rows = rows_index
            .iter()
            .map(|x| cols_index.iter().map(|d| sign_bits(x.bits(), d.bits()) as i8).collect())
            .collect();
        SignMatrix {
            rows_index,
            cols_index,
            rows,
        }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// `log2` of the size.
    pub fn order(&self) -> u32 {
        self.size().trailing_zeros()
    }

    /// `M Mᵀ` in exact integer arithmetic.
    pub fn gram(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                self.rows
                    .iter()
                    .map(|s| r.iter().zip(s).map(|(&a, &b)| (a as i64) * (b as i64)).sum())
                    .collect()
            })
            .collect()
    }

    /// `M Mᵀ = size · I`.
    pub fn has_orthogonal_rows(&self) -> bool {
        let size = self.size() as i64;
        self.gram()
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == if i == j { size } else { 0 }))
    }

    pub fn transpose(&self) -> SignMatrix {
        let size = self.size();
        SignMatrix {
            rows_index: self.cols_index.clone(),
            cols_index: self.rows_index.clone(),
            rows: (0..size).map(|j| (0..size).map(|i| self.rows[i][j]).collect()).collect(),
        }
    }
}

/// `P_z`: rows `X_z = {x : x < z + x}`, columns `D_z = {d ∈ A : ⟨d,z⟩ = 1}`,
/// entries `(-1)^⟨x,d⟩`.
pub fn build_pz(n: usize, z: &GroupElt) -> Result<SignMatrix> {
    check_dim(n)?;
    if z.dim() != n {
        return Err(Error::DimensionMismatch(z.dim(), n));
    }
    if z.is_zero() {
        return Err(Error::ZeroElement);
    }
    let rows: Vec<GroupElt> = GroupElt::all(n).filter(|&x| x < *z + x).collect();
    let cols: Vec<GroupElt> = GroupElt::nonzero(n).filter(|d| d.inner(z)).collect();
    Ok(SignMatrix::labelled(rows, cols))
}

/// `Q_d`: rows `Z_d = {z ∈ A : ⟨d,z⟩ = 1}`, columns `B_d = {b : b < d + b}`
/// (so `b_1 = 0`), entries `(-1)^⟨z,b⟩`.
pub fn build_qd(n: usize, d: &GroupElt) -> Result<SignMatrix> {
    check_dim(n)?;
    if d.dim() != n {
        return Err(Error::DimensionMismatch(d.dim(), n));
    }
    if d.is_zero() {
        return Err(Error::ZeroElement);
    }
    let rows: Vec<GroupElt> = GroupElt::nonzero(n).filter(|z| z.inner(d)).collect();
    let cols: Vec<GroupElt> = GroupElt::all(n).filter(|&b| b < *d + b).collect();
    Ok(SignMatrix::labelled(rows, cols))
}

/// Every `P_z` and `Q_d` for this `n` has orthogonal rows of the right size.
pub fn all_matrices_orthogonal(n: usize) -> Result<bool> {
    check_dim(n)?;
    let half = 1usize << (n - 1);
    let ok = GroupElt::nonzero(n).collect::<Vec<_>>().par_iter().all(|a| {
        [build_pz(n, a), build_qd(n, a)]
            .into_iter()
            .all(|m| m.is_ok_and(|m| m.size() == half && m.has_orthogonal_rows()))
    });
    Ok(ok)
}

/// Both sides `(‖MX‖₁, 2^m ‖X‖_∞)` in exact rational arithmetic.
pub fn lemma_lin_sides(m: &SignMatrix, x: &[BigRational]) -> Result<(BigRational, BigRational)> {
    let size = m.size();
    if x.len() != size {
        return Err(Error::DimensionMismatch(x.len(), size));
    }
    let den = x.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let y: Vec<BigInt> = x.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let mut lhs = BigInt::zero();
    for row in &m.rows {
        let mut acc = BigInt::zero();
        for (&s, v) in row.iter().zip(&y) {
            if s > 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        lhs += acc.abs();
    }
    let sup = y.iter().map(|v| v.abs()).max().unwrap_or_default();
    Ok((
        BigRational::new(lhs, den.clone()),
        BigRational::new(sup * BigInt::from(size), den),
    ))
}

/// `‖MX‖₁ ≥ 2^m ‖X‖_∞`, both sides evaluated exactly.
pub fn lemma_lin_check(m: &SignMatrix, x: &[BigRational]) -> Result<bool> {
    let (lhs, rhs) = lemma_lin_sides(m, x)?;
    Ok(lhs >= rhs)
}

fn base_product(precision_bits: u32) -> Interval {
    let l5 = log_unit(&fundamental_unit(5).expect("5 is square-free"), precision_bits).expect("precision");
    let l2 = log_unit(&fundamental_unit(2).expect("2 is square-free"), precision_bits).expect("precision");
    l5.mul(&l2)
}

/// `log((1+√5)/2) · log(1+√2)` from the exact units of Q(√5) and Q(√2).
pub fn golden_silver_product(precision_bits: u32) -> Interval {
    if precision_bits == DEFAULT_PRECISION {
        static CACHE: OnceLock<Interval> = OnceLock::new();
        CACHE.get_or_init(|| base_product(DEFAULT_PRECISION)).clone()
    } else {
        base_product(precision_bits)
    }
}

/// `2^(2n-1) log((1+√5)/2) log(1+√2)` at the given precision.
pub fn proto_bound_at(n: usize, precision_bits: u32) -> Result<Interval> {
    if n < 2 {
        return Err(Error::DimensionOutOfRange(n, 2, usize::MAX));
    }
    if precision_bits < 32 {
        return Err(Error::PrecisionTooLow {
            got: precision_bits,
            min: 32,
        });
    }
    Ok(golden_silver_product(precision_bits).shl(2 * n as i64 - 1))
}

/// `2^(2n-1) log((1+√5)/2) log(1+√2)`.
pub fn proto_bound(n: usize) -> Result<Interval> {
    proto_bound_at(n, DEFAULT_PRECISION)
}

/// `2 log((1+√5)/2) log(1+√2) ≈ 0.8483`.
pub fn theorem_bound() -> Interval {
    golden_silver_product(DEFAULT_PRECISION).shl(1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CostaFriedman {
    pub j: u32,
    pub degree: u64,
    /// `(j+2)^-1 j^-1/2 (degree/j)^(j/2) 1.406^j`
    pub rhs: Interval,
    /// `0.001 · 1.4^j`
    pub floor: Interval,
}

/// Right-hand side of the Costa–Friedman 2-norm inequality, plus its uniform floor.
pub fn costa_friedman_rhs(j: u32, degree: u64) -> Result<CostaFriedman> {
    costa_friedman_rhs_at(j, degree, DEFAULT_PRECISION)
}

pub fn costa_friedman_rhs_at(j: u32, degree: u64, precision_bits: u32) -> Result<CostaFriedman> {
    if j < 1 || j as u64 >= degree {
        return Err(Error::InvalidArgument(format!("need 1 <= j < degree, got j = {j}, degree = {degree}")));
    }
    let p = precision_bits;
    let big = |v: u64| BigInt::from(v);
    let ratio = BigRational::new(big(703), big(500));
    let c = num_traits::pow(ratio, j as usize);
    let jj = j as u64;
    // degree^(j/2) / ((j+2) j^((j+1)/2)), splitting off one square root.
    let (rational, root) = if jj % 2 == 1 {
        (
            c * BigRational::new(
                num_traits::pow(big(degree), ((jj - 1) / 2) as usize),
                big(jj + 2) * num_traits::pow(big(jj), jj.div_ceil(2) as usize),
            ),
            Interval::sqrt_int(&degree.into(), p),
        )
    } else {
        (
            c * BigRational::new(
                num_traits::pow(big(degree), (jj / 2) as usize),
                big(jj + 2) * num_traits::pow(big(jj), (jj / 2) as usize),
            ),
            Interval::from_int(1, p)
                .checked_div(&Interval::sqrt_int(&jj.into(), p))
                .expect("positive"),
        )
    };
    let rhs = Interval::from_rational(&rational, p).mul(&root);
    let floor = Interval::from_rational(
        &(num_traits::pow(BigRational::new(big(7), big(5)), j as usize) / BigRational::from_integer(big(1000))),
        p,
    );
    Ok(CostaFriedman {
        j,
        degree,
        rhs,
        floor,
    })
}

/// `‖w‖₁ - c0 · c1^j`; a positive lower end certifies `‖w‖₁ ≥ c0 c1^j`.
pub fn conjecture_margin(norm: &Interval, j: u32, c0: &BigRational, c1: &BigRational) -> Result<Interval> {
    if !c0.is_positive() {
        return Err(Error::InvalidArgument(format!("c0 must be positive, got {c0}")));
    }
    if *c1 <= BigRational::one() {
        return Err(Error::InvalidArgument(format!("c1 must exceed 1, got {c1}")));
    }
    let target = c0 * num_traits::pow(c1.clone(), j as usize);
    Ok(norm - &Interval::from_rational(&target, norm.precision_bits()))
}

/// `2^n max_d Σ_{z : ⟨d,z⟩=1} |Σ_{b<b+d} n_{b,d+b} log u_b log u_{d+b} (-1)^⟨b,z⟩|`.
pub fn fstlm_middle(field: &MultiQuadField, w: &ExtSqElement) -> Result<Interval> {
    let n = field.dim();
    if w.dim() != n {
        return Err(Error::DimensionMismatch(w.dim(), n));
    }
    let size = 1u32 << n;
    let prec = field.precision_bits();
    let mut best = Interval::zero(prec);
    for d in 1..size {
        let terms: Vec<(u32, Interval)> = (1..size)
            .filter_map(|b| {
                let c = b ^ d;
                let coef = w.get(GroupElt::new(n, b).ok()?, GroupElt::new(n, c).ok()?);
                (b < c && coef != 0).then(|| (b, field.log_product_bits(b, c).mul_int(coef)))
            })
            .collect();
        let mut total = Interval::zero(prec);
        for z in (1..size).filter(|&z| (z & d).count_ones() % 2 == 1) {
            let inner = terms.iter().fold(Interval::zero(prec), |acc, (b, t)| {
                if sign_bits(*b, z) < 0 {
                    &acc - t
                } else {
                    &acc + t
                }
            });
            total = &total + &inner.abs();
        }
        best = best.max(&total);
    }
    Ok(best.shl(n as i64))
}

/// `2^(2n-1) max_{b<c} |n_{b,c}| log u_b log u_c`.
pub fn coefficient_floor(field: &MultiQuadField, w: &ExtSqElement) -> Result<Interval> {
    let n = field.dim();
    if w.dim() != n {
        return Err(Error::DimensionMismatch(w.dim(), n));
    }
    Ok(w
        .coefficients()
        .map(|(b, c, k)| field.log_product_bits(b.bits(), c.bits()).mul_int(k.abs()))
        .fold(Interval::zero(field.precision_bits()), |acc, t| acc.max(&t))
        .shl(2 * n as i64 - 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginEntry {
    pub generators: Vec<u64>,
    pub element: crate::extsquare::CoefficientFile,
    pub norm: Interval,
    /// `norm - proto_bound(n)`
    pub margin: Interval,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub schema: u32,
    pub n: usize,
    pub proto_bound: Interval,
    pub theorem_bound: Interval,
    /// Costa–Friedman right-hand side for `j = 2`, degree `2^n`.
    pub cf_bound: Option<CostaFriedman>,
    pub margins: Vec<MarginEntry>,
}

impl BoundReport {
    pub fn new(n: usize) -> Result<Self> {
        let proto = proto_bound(n)?;
        Ok(BoundReport {
            schema: 1,
            n,
            theorem_bound: proto.shl(-(2 * n as i64 - 2)),
            proto_bound: proto,
            cf_bound: costa_friedman_rhs(2, 1u64 << n).ok(),
            margins: vec![],
        })
    }

    pub fn add_margin(&mut self, field: &MultiQuadField, w: &ExtSqElement) -> Result<()> {
        if field.dim() != self.n {
            return Err(Error::DimensionMismatch(field.dim(), self.n));
        }
        let norm = norm1_closed(field, w)?;
        self.margins.push(MarginEntry {
            generators: field.generators().to_vec(),
            element: w.to_file(field.generators()),
            margin: &norm - &self.proto_bound,
            norm,
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extsquare::slots;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn pz_examples() {
        let z = GroupElt::new(2, 3).unwrap();
        let m = build_pz(2, &z).unwrap();
        assert_eq!(m.rows_index.iter().map(|g| g.bits()).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(m.cols_index.iter().map(|g| g.bits()).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(m.rows, vec![vec![1, 1], vec![-1, 1]]);
        assert!(m.has_orthogonal_rows());
        assert!(build_pz(2, &GroupElt::basis(2, 1)).unwrap().has_orthogonal_rows());
        assert_eq!(build_pz(2, &GroupElt::zero(2)), Err(Error::ZeroElement));
        for z in GroupElt::nonzero(4) {
            let m = build_pz(4, &z).unwrap();
            let g = m.gram();
            for (i, row) in g.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    assert_eq!(v, if i == j { 8 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn qd_examples() {
        let m = build_qd(2, &GroupElt::basis(2, 1)).unwrap();
        assert_eq!(m.size(), 2);
        assert!(m.has_orthogonal_rows());
        for d in GroupElt::nonzero(3) {
            let m = build_qd(3, &d).unwrap();
            assert_eq!(m.cols_index[0], GroupElt::zero(3));
            assert!(m.rows.iter().all(|r| r[0] == 1));
            assert!(m.has_orthogonal_rows());
            assert!(m.transpose().has_orthogonal_rows());
        }
        assert_eq!(build_qd(3, &GroupElt::zero(3)), Err(Error::ZeroElement));
    }

    #[test]
    fn all_small_sizes_orthogonal() {
        for n in 2..=6 {
            assert!(all_matrices_orthogonal(n).unwrap());
        }
    }

    #[test]
    fn lemma_lin_examples() {
        let one = SignMatrix::from_rows(vec![vec![1]]).unwrap();
        let (l, r) = lemma_lin_sides(&one, &[q(-3, 7)]).unwrap();
        assert_eq!(l, r);
        let h = SignMatrix::from_rows(vec![vec![1, 1], vec![1, -1]]).unwrap();
        let (l, r) = lemma_lin_sides(&h, &[q(1, 1), q(0, 1)]).unwrap();
        assert_eq!((l.clone(), r), (q(2, 1), q(2, 1)));
        assert!(lemma_lin_check(&h, &[q(1, 1)]).is_err());
        assert!(SignMatrix::from_rows(vec![vec![1, 0], vec![1, 1]]).is_err());
        assert!(SignMatrix::from_rows(vec![vec![1; 3]; 3]).is_err());
    }

    #[test]
    fn lemma_lin_random_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=5 {
            let mats: Vec<SignMatrix> = GroupElt::nonzero(n)
                .flat_map(|a| [build_pz(n, &a).unwrap(), build_qd(n, &a).unwrap()])
                .collect();
            for m in &mats {
                let x: Vec<BigRational> = (0..m.size())
                    .map(|_| q(rng.gen_range(-50..=50), rng.gen_range(1..=20)))
                    .collect();
                assert!(lemma_lin_check(m, &x).unwrap());
                // X = Mᵀ e_1 is an equality case.
                let eq: Vec<BigRational> = (0..m.size()).map(|i| q(m.rows[0][i] as i64, 3)).collect();
                let (l, r) = lemma_lin_sides(m, &eq).unwrap();
                assert_eq!(l, r);
            }
        }
    }

    #[test]
    fn headline_constants() {
        let t = theorem_bound();
        assert!(t.width() <= crate::interval::Dyadic::new(BigInt::one(), -100));
        assert_eq!(t.to_decimal().lo[..6], *"0.8482");
        assert!((t.mid_f64() - 0.8483).abs() < 5e-5);
        assert!(t.lo().signum() > 0);
        let p2 = proto_bound(2).unwrap();
        assert!((p2.mid_f64() - 3.3930).abs() < 5e-5);
        let p3 = proto_bound(3).unwrap();
        assert!((p3.mid_f64() - 13.572).abs() < 5e-4);
        for n in 3..=6 {
            assert_eq!(proto_bound(n).unwrap(), proto_bound(n - 1).unwrap().mul_int(4));
        }
        for n in 2..=4 {
            assert_eq!(proto_bound(n).unwrap().shl(-(2 * n as i64 - 2)), t);
        }
        assert!(proto_bound(1).is_err());
    }

    #[test]
    fn costa_friedman_values() {
        let cf = costa_friedman_rhs(1, 4).unwrap();
        assert!((cf.rhs.mid_f64() - 2.0 * 1.406 / 3.0).abs() < 1e-12);
        let cf2 = costa_friedman_rhs(2, 4).unwrap();
        assert!((cf2.rhs.mid_f64() - 2.0 * 1.406f64.powi(2) / (4.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!((cf2.floor.mid_f64() - 0.00196).abs() < 1e-15);
        let cf3 = costa_friedman_rhs(3, 8).unwrap();
        let expect = (8f64 / 3.0).powf(1.5) * 1.406f64.powi(3) / (5.0 * 3f64.sqrt());
        assert!((cf3.rhs.mid_f64() - expect).abs() < 1e-12);
        assert!(costa_friedman_rhs(0, 4).is_err());
        assert!(costa_friedman_rhs(4, 4).is_err());
    }

    #[test]
    fn conjecture_margins() {
        let norm = Interval::from_rational(&q(33930, 10000), 128);
        assert!(conjecture_margin(&norm, 2, &q(4, 5), &q(1, 1)).is_err());
        assert!(conjecture_margin(&norm, 2, &q(0, 1), &q(2, 1)).is_err());
        let m = conjecture_margin(&norm, 2, &q(1, 5), &q(2, 1)).unwrap();
        assert!((m.mid_f64() - 2.593).abs() < 1e-12);
        let m2 = conjecture_margin(&norm, 2, &q(2, 5), &q(2, 1)).unwrap();
        assert!(m2.hi() < m.lo());
    }

    #[test]
    fn chain_is_ordered() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for gens in [&[2u64, 5][..], &[2, 3, 5], &[3, 7]] {
            let f = MultiQuadField::new(gens, 128).unwrap();
            let n = f.dim();
            for _ in 0..30 {
                let mut w = ExtSqElement::zero(n);
                for (b, c) in slots(n) {
                    if rng.gen_bool(0.4) {
                        w.set(b, c, rng.gen_range(-4..=4)).unwrap();
                    }
                }
                if w.is_zero() {
                    continue;
                }
                let norm = norm1_closed(&f, &w).unwrap();
                let mid = fstlm_middle(&f, &w).unwrap();
                let floor = coefficient_floor(&f, &w).unwrap();
                assert!(norm.hi() >= mid.lo(), "{w:?}");
                assert!(mid.hi() >= floor.lo(), "{w:?}");
                assert!(floor.hi() >= proto_bound(n).unwrap().lo());
            }
        }
    }

    #[test]
    fn report_json() {
        let mut r = BoundReport::new(2).unwrap();
        let f = MultiQuadField::new(&[2, 5], 128).unwrap();
        let w = ExtSqElement::single(GroupElt::basis(2, 1), GroupElt::basis(2, 2), 1).unwrap();
        r.add_margin(&f, &w).unwrap();
        assert!(r.margins[0].margin.contains_zero());
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["schema"], 1);
        assert!(j["theorem_bound"]["lo"].as_str().unwrap().starts_with("0.84825"));
    }
}
