//! Seeded invariant suites for the group, unit and matrix lemmas.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bound::{build_pz, build_qd, lemma_lin_sides, SignMatrix};
use crate::error::{Error, Result};
use crate::f2n::{check_dim, multiplicity_check, norm_operator_identity, verify_subgroup_lemma, GroupElt};
use crate::quadunit::verify_quadunit_lemma;

/// Largest `n` for the sampled suites, whose matrices have `2^(n-1)` rows.
pub const SAMPLED_MAX_DIM: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n_max: usize,
    pub m_max: u64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_max: 8,
            m_max: 1000,
            samples: 100,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub suite: String,
    pub n: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub n_max: usize,
    pub m_max: u64,
    pub samples: usize,
    pub seed: u64,
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// A rational with numerator in `[-100, 100]` and denominator in `[1, 30]`.
pub fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-100i64..=100)), BigInt::from(rng.gen_range(1i64..=30)))
}

pub fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<BigRational> {
    (0..len).map(|_| random_rational(rng)).collect()
}

fn entry(suite: &str, n: Option<usize>, passed: bool, detail: String) -> SuiteEntry {
    SuiteEntry {
        suite: suite.into(),
        n,
        passed,
        detail,
    }
}

/// `P_z` and `Q_d` for every nonzero `z`, `d`.
pub fn all_matrices(n: usize) -> Result<Vec<SignMatrix>> {
    check_dim(n)?;
    let mut out = Vec::with_capacity(2 * ((1 << n) - 1));
    for a in GroupElt::nonzero(n) {
        out.push(build_pz(n, &a)?);
        out.push(build_qd(n, &a)?);
    }
    Ok(out)
}

/// Runs `samples` random vectors through the linear-norm inequality, cycling
/// over the matrices, plus one equality case `X = (row 0 of M)`. Returns the
/// number of failures.
pub fn lemma_lin_suite(n: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<usize> {
    let mats = all_matrices(n)?;
    let mut failures = 0;
    for i in 0..samples {
        let m = &mats[i % mats.len()];
        let (lhs, rhs) = lemma_lin_sides(m, &random_vector(rng, m.size()))?;
        if lhs < rhs {
            failures += 1;
        }
    }
    let m = &mats[0];
    let eq: Vec<BigRational> = m.rows[0].iter().map(|&s| BigRational::from_integer(BigInt::from(s))).collect();
    let (lhs, rhs) = lemma_lin_sides(m, &eq)?;
    if lhs != rhs {
        failures += 1;
    }
    Ok(failures)
}

pub fn run_suites(cfg: &SuiteConfig) -> Result<SuiteReport> {
    check_dim(cfg.n_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut entries = Vec::new();
    for n in 2..=cfg.n_max {
        let sub = verify_subgroup_lemma(n)?;
        let mult = multiplicity_check(n)?;
        entries.push(entry(
            "subgroups",
            Some(n),
            sub.is_valid() && mult,
            format!("{} distinct index-2 subgroups, multiplicities {}", sub.b_count, if mult { "ok" } else { "wrong" }),
        ));
    }
    for n in 2..=cfg.n_max.min(SAMPLED_MAX_DIM) {
        let mut bad = 0;
        for _ in 0..cfg.samples {
            if !norm_operator_identity(n, &random_vector(&mut rng, 1 << n))? {
                bad += 1;
            }
        }
        entries.push(entry(
            "norm-identity",
            Some(n),
            bad == 0,
            format!("{bad} of {} vectors fail", cfg.samples),
        ));
    }
    for n in 2..=cfg.n_max.min(SAMPLED_MAX_DIM) {
        let mats = all_matrices(n)?;
        let orth = mats.iter().all(|m| m.size() == 1 << (n - 1) && m.has_orthogonal_rows());
        let bad = lemma_lin_suite(n, cfg.samples, &mut rng)?;
        entries.push(entry(
            "sign-matrices",
            Some(n),
            orth && bad == 0,
            format!(
                "{} matrices {}, {bad} of {} vectors fail",
                mats.len(),
                if orth { "orthogonal" } else { "NOT orthogonal" },
                cfg.samples + 1
            ),
        ));
    }
    let q = verify_quadunit_lemma(cfg.m_max)?;
    entries.push(entry(
        "quadratic-units",
        None,
        q.holds(),
        format!(
            "{} radicands, equality at {:?} and {:?}, {} violations",
            q.checked,
            q.golden_equalities,
            q.silver_equalities,
            q.violations.len()
        ),
    ));
    Ok(SuiteReport {
        schema: 1,
        n_max: cfg.n_max,
        m_max: cfg.m_max,
        samples: cfg.samples,
        seed: cfg.seed,
        entries,
    })
}

/// Parses `all` or a comma list of suite names.
pub fn parse_lemmas(s: &str) -> Result<()> {
    if s == "all" {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("unknown lemma selection '{s}', expected 'all'")))
    }
}
