//! Relations by random evaluation.
//!
//! Evaluate the `k` degree-`d` invariants on `m = k + s` random integer
//! matrices and take the exact null space of the resulting `m × k` matrix.
//! Every true relation lies in that null space. A spurious vector is a
//! nonzero polynomial of degree `d` in the matrix entries, so a fresh sample
//! from the box `[−B, B]` kills it with probability at most `d / (2B + 1)`;
//! each vector is therefore checked on `verify_trials` fresh nonzero samples
//! before it is accepted, and a failed round resamples with a doubled bound.
//!
//! Randomness comes from ChaCha8 streams keyed by the seed and indexed by
//! (purpose, round, row), so results do not depend on thread scheduling.

use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_invariant_basis, InvariantMonomial};
use crate::dimensions::{stable_range, DimRecord};
use crate::error::{invalid, Error, Result};
use crate::evaluation::{basis_values, evaluate_basis_row, Matrix, MatrixSample, ScalarMode, ScalarValue};
use crate::limits::Limits;
use crate::linalg;

/// Escalation rounds after the first attempt.
pub const MAX_ESCALATIONS: usize = 3;

/// Largest accepted entry bound, leaving room for three doublings in `i64`.
pub const MAX_ENTRY_BOUND: u64 = 1 << 40;

/// Denominator cap when rationalizing a float-mode kernel.
const FLOAT_MAX_DENOMINATOR: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub entry_bound: u64,
    pub oversample: usize,
    pub verify_trials: usize,
    pub mode: ScalarMode,
    /// Relative singular-value cutoff in complex mode.
    pub float_tolerance: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            entry_bound: 10,
            oversample: 10,
            verify_trials: 20,
            mode: ScalarMode::Rational,
            float_tolerance: 1e-9,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..SamplerConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.entry_bound == 0 || self.entry_bound > MAX_ENTRY_BOUND {
            return Err(invalid(format!(
                "entry bound must be in 1..={MAX_ENTRY_BOUND}, got {}",
                self.entry_bound
            )));
        }
        if self.verify_trials == 0 {
            return Err(invalid("verify_trials must be positive"));
        }
        if !(self.float_tolerance >= 0.0 && self.float_tolerance.is_finite()) {
            return Err(invalid("float tolerance must be a finite non-negative number"));
        }
        Ok(())
    }
}

/// Purpose of a random stream; part of the stream id.
#[derive(Clone, Copy, Debug)]
#[repr(u8)]
pub enum StreamPurpose {
    Evaluation = 1,
    Verification = 2,
}

/// The random stream for one row of one round.
pub fn stream(seed: u64, purpose: StreamPurpose, round: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | ((round as u64 & 0xff) << 48) | (index as u64 & 0xffff_ffff_ffff));
    rng
}

fn integer_matrix<R: Rng>(n: usize, bound: u64, rng: &mut R) -> Matrix<BigInt> {
    let b = bound as i64;
    Matrix::from_fn(n, |_, _| BigInt::from(rng.gen_range(-b..=b)))
}

fn nonzero_integer_matrix<R: Rng>(n: usize, bound: u64, rng: &mut R) -> Matrix<BigInt> {
    loop {
        let x = integer_matrix(n, bound, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn gaussian_matrix<R: Rng>(n: usize, rng: &mut R) -> Matrix<Complex64> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    })
}

/// Integer entries uniform on `[−B, B]` in rational mode; standard complex
/// Gaussian entries in complex mode.
pub fn sample_matrix<R: Rng>(n: usize, rng: &mut R, config: &SamplerConfig) -> Result<MatrixSample> {
    if n == 0 {
        return Err(invalid("matrix size must be positive"));
    }
    config.validate()?;
    Ok(match config.mode {
        ScalarMode::Rational => MatrixSample::Rational(
            integer_matrix(n, config.entry_bound, rng).map(|v| BigRational::from_integer(v.clone())),
        ),
        ScalarMode::Complex => MatrixSample::Complex(gaussian_matrix(n, rng)),
    })
}

/// `enumerate_invariant_basis(d)`, refused when larger than `limits.basis_size`.
pub fn basis_for(d: usize, limits: &Limits) -> Result<Vec<InvariantMonomial>> {
    if d == 0 {
        return Err(invalid("degree must be positive"));
    }
    // There are at least 2^d / (2d) words of length d; refuse before enumerating.
    let lower = if d >= 100 {
        u128::MAX
    } else {
        (1u128 << d) / (2 * d as u128)
    };
    Limits::check("invariant basis size", lower, limits.basis_size as u128)?;
    let basis = enumerate_invariant_basis(d)?;
    Limits::check("invariant basis size", basis.len() as u128, limits.basis_size as u128)?;
    Ok(basis)
}

fn exact_rows(
    basis: &[InvariantMonomial],
    n: usize,
    m: usize,
    seed: u64,
    round: usize,
    bound: u64,
) -> Vec<Vec<BigInt>> {
    (0..m)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream(seed, StreamPurpose::Evaluation, round, j);
            basis_values(basis, &integer_matrix(n, bound, &mut rng))
        })
        .collect()
}

fn complex_rows(basis: &[InvariantMonomial], n: usize, m: usize, seed: u64, round: usize) -> Vec<Vec<Complex64>> {
    (0..m)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream(seed, StreamPurpose::Evaluation, round, j);
            basis_values(basis, &gaussian_matrix(n, &mut rng))
        })
        .collect()
}

/// The `m × k` evaluation matrix of the first sampling round.
pub fn build_evaluation_matrix(n: usize, d: usize, m: usize, config: &SamplerConfig) -> Result<Vec<Vec<ScalarValue>>> {
    if n == 0 || m == 0 {
        return Err(invalid("n and m must be positive"));
    }
    config.validate()?;
    let basis = basis_for(d, &Limits::from_env()?)?;
    (0..m)
        .into_par_iter()
        .map(|j| {
            let mut rng = stream(config.seed, StreamPurpose::Evaluation, 0, j);
            let x = sample_matrix(n, &mut rng, config)?;
            evaluate_basis_row(&basis, &x)
        })
        .collect()
}

/// A primitive integer relation with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationVector {
    coeffs: Vec<BigInt>,
}

impl RelationVector {
    /// Normalizes `coeffs`; rejects the zero vector.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(invalid("a relation vector must be nonzero"));
        }
        linalg::normalize_primitive(&mut coeffs);
        Ok(RelationVector { coeffs })
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Result<Self> {
        RelationVector::new(linalg::clear_denominators(coeffs))
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        RelationVector::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Human-readable form such as `x*x*x - 3 xx*x + 2 xxx`.
    pub fn render(&self, basis: &[InvariantMonomial]) -> String {
        let mut out = String::new();
        for (c, m) in self.coeffs.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let a = c.abs();
            if a != BigInt::from(1) {
                out.push_str(&format!("{a} "));
            }
            out.push_str(m.class_id().as_str());
        }
        out
    }
}

/// Exact null space of a rational matrix with `k` columns, normalized.
pub fn nullspace(rows: &[Vec<BigRational>], k: usize) -> Vec<RelationVector> {
    linalg::rational_nullspace(rows, k)
        .into_iter()
        .map(|coeffs| RelationVector { coeffs })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    MonteCarlo,
    Symmetrizer,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::MonteCarlo => "montecarlo",
            Method::Symmetrizer => "symmetrizer",
        })
    }
}

/// A relation basis over the ordered degree-`d` invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationSet {
    pub n: usize,
    pub d: usize,
    pub basis: Vec<InvariantMonomial>,
    pub relations: Vec<RelationVector>,
    pub method: Method,
    /// Sampler settings that produced the set; `None` for the symmetrizer engine.
    pub config: Option<SamplerConfig>,
    /// Entry bound of the round that was accepted (after escalation).
    pub final_entry_bound: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct RelationSetFile {
    n: usize,
    d: usize,
    basis: Vec<String>,
    relations: Vec<Vec<String>>,
    method: Method,
    seed: Option<u64>,
    entry_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    final_entry_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    oversample: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verify_trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<ScalarMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    float_tolerance: Option<f64>,
}

impl RelationSet {
    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.k() - self.relations.len()
    }

    pub fn to_json(&self) -> String {
        let cfg = self.config.as_ref();
        let file = RelationSetFile {
            n: self.n,
            d: self.d,
            basis: self.basis.iter().map(|m| m.class_id().as_str().to_owned()).collect(),
            relations: self
                .relations
                .iter()
                .map(|r| r.coeffs.iter().map(|c| c.to_string()).collect())
                .collect(),
            method: self.method,
            seed: cfg.map(|c| c.seed),
            entry_bound: cfg.map(|c| c.entry_bound),
            final_entry_bound: self.final_entry_bound,
            oversample: cfg.map(|c| c.oversample),
            verify_trials: cfg.map(|c| c.verify_trials),
            mode: cfg.map(|c| c.mode),
            float_tolerance: cfg.filter(|c| c.mode == ScalarMode::Complex).map(|c| c.float_tolerance),
        };
        let mut text = serde_json::to_string_pretty(&file).expect("relation set serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: RelationSetFile = serde_json::from_str(text)?;
        let basis = file
            .basis
            .iter()
            .map(|s| s.parse::<InvariantMonomial>())
            .collect::<Result<Vec<_>>>()?;
        if let Some(m) = basis.iter().find(|m| m.degree() != file.d) {
            return Err(invalid(format!("basis element {m} does not have degree {}", file.d)));
        }
        let relations = file
            .relations
            .iter()
            .map(|row| {
                if row.len() != basis.len() {
                    return Err(invalid(format!(
                        "relation has {} coefficients, basis has {}",
                        row.len(),
                        basis.len()
                    )));
                }
                let coeffs = row
                    .iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigInt>()
                            .map_err(|_| invalid(format!("bad integer {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if coeffs.iter().all(Zero::is_zero) {
                    return Err(invalid("zero relation vector"));
                }
                // kept as written so that a corrupted file is reported, not repaired
                Ok(RelationVector { coeffs })
            })
            .collect::<Result<Vec<_>>>()?;
        let config = match (file.seed, file.entry_bound) {
            (Some(seed), Some(entry_bound)) => {
                let defaults = SamplerConfig::default();
                Some(SamplerConfig {
                    seed,
                    entry_bound,
                    oversample: file.oversample.unwrap_or(defaults.oversample),
                    verify_trials: file.verify_trials.unwrap_or(defaults.verify_trials),
                    mode: file.mode.unwrap_or(defaults.mode),
                    float_tolerance: file.float_tolerance.unwrap_or(defaults.float_tolerance),
                })
            }
            _ => None,
        };
        Ok(RelationSet {
            n: file.n,
            d: file.d,
            basis,
            relations,
            method: file.method,
            config,
            final_entry_bound: file.final_entry_bound,
        })
    }
}

/// Values of the basis on `trials` fresh nonzero integer samples.
fn verification_rows(
    basis: &[InvariantMonomial],
    n: usize,
    trials: usize,
    bound: u64,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<BigInt>> {
    let samples: Vec<Matrix<BigInt>> = (0..trials).map(|_| nonzero_integer_matrix(n, bound, rng)).collect();
    samples.par_iter().map(|x| basis_values(basis, x)).collect()
}

fn annihilates(rows: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    rows.iter()
        .all(|row| row.iter().zip(v).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
}

/// Checks each vector on the same `trials` fresh nonzero samples from `rng`.
pub fn verify_against_basis(
    basis: &[InvariantMonomial],
    vectors: &[RelationVector],
    n: usize,
    trials: usize,
    bound: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<bool>> {
    if n == 0 || bound == 0 {
        return Err(invalid("n and the entry bound must be positive"));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != basis.len()) {
        return Err(invalid(format!(
            "vector of length {} over a basis of {}",
            v.len(),
            basis.len()
        )));
    }
    let rows = verification_rows(basis, n, trials, bound, rng);
    Ok(vectors.iter().map(|v| annihilates(&rows, &v.coeffs)).collect())
}

/// True iff `v` vanishes on `trials` fresh nonzero samples with entries in `[−10, 10]`.
pub fn verify_relation(v: &RelationVector, n: usize, d: usize, trials: usize, rng: &mut ChaCha8Rng) -> Result<bool> {
    let basis = enumerate_invariant_basis(d)?;
    let bound = SamplerConfig::default().entry_bound;
    Ok(verify_against_basis(&basis, std::slice::from_ref(v), n, trials, bound, rng)?[0])
}

/// Kernel candidates of one sampling round.
fn round_kernel(
    basis: &[InvariantMonomial],
    n: usize,
    config: &SamplerConfig,
    round: usize,
    bound: u64,
) -> Vec<Vec<BigInt>> {
    let k = basis.len();
    let m = k + config.oversample;
    match config.mode {
        ScalarMode::Rational => {
            let rows = exact_rows(basis, n, m, config.seed, round, bound);
            linalg::integer_nullspace(&rows, k)
        }
        ScalarMode::Complex => {
            let rows = complex_rows(basis, n, m, config.seed, round);
            let kernel = linalg::float_nullspace(&rows, k, config.float_tolerance);
            let slack = config.float_tolerance.max(1e-12).sqrt();
            let mut out = Vec::new();
            for v in kernel {
                let rational: Option<Vec<BigRational>> = v
                    .iter()
                    .map(|c| {
                        if c.im.abs() > slack {
                            None
                        } else {
                            linalg::rationalize(c.re, FLOAT_MAX_DENOMINATOR, slack)
                        }
                    })
                    .collect();
                match rational {
                    Some(r) if r.iter().any(|x| !x.is_zero()) => {
                        let mut ints = linalg::clear_denominators(&r);
                        linalg::normalize_primitive(&mut ints);
                        out.push(ints);
                    }
                    // an unrecognizable vector is kept as a certain verification failure
                    _ => out.push(Vec::new()),
                }
            }
            out
        }
    }
}

/// The certified relation space of degree `d` on `n × n` matrices.
pub fn find_relations(n: usize, d: usize, config: &SamplerConfig, limits: &Limits) -> Result<RelationSet> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    config.validate()?;
    let basis = basis_for(d, limits)?;
    let mut failures = Vec::new();
    for round in 0..=MAX_ESCALATIONS {
        let bound = config.entry_bound << round;
        let kernel = round_kernel(&basis, n, config, round, bound);
        let candidates: Vec<RelationVector> = kernel
            .iter()
            .filter(|v| v.len() == basis.len())
            .map(|v| RelationVector { coeffs: v.clone() })
            .collect();
        let malformed = kernel.len() - candidates.len();
        let mut rng = stream(config.seed, StreamPurpose::Verification, round, 0);
        let passed = verify_against_basis(&basis, &candidates, n, config.verify_trials, bound, &mut rng)?;
        let rejected = passed.iter().filter(|ok| !**ok).count() + malformed;
        if rejected == 0 {
            return Ok(RelationSet {
                n,
                d,
                basis,
                relations: candidates,
                method: Method::MonteCarlo,
                config: Some(config.clone()),
                final_entry_bound: (round > 0).then_some(bound),
            });
        }
        failures.push(format!(
            "round {round} (B={bound}): {rejected} of {} rejected",
            kernel.len()
        ));
    }
    Err(Error::NonReproducibleKernel {
        attempts: MAX_ESCALATIONS + 1,
        detail: failures.join("; "),
    })
}

/// Exact rank of a list of integer vectors of common length.
pub fn rank_of(vectors: &[&RelationVector]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.coeffs.clone()).collect();
    linalg::integer_rank(&rows, first.len())
}

/// Whether `v` lies in the rational span of `relations`.
pub fn span_contains(relations: &[RelationVector], v: &[BigInt]) -> bool {
    let mut rows: Vec<Vec<BigInt>> = relations.iter().map(|r| r.coeffs.clone()).collect();
    let base = linalg::integer_rank(&rows, v.len());
    rows.push(v.to_vec());
    linalg::integer_rank(&rows, v.len()) == base
}

/// Relation dimension table over `1 ≤ d ≤ max_d`, `1 ≤ n ≤ max_n`.
///
/// A cell counts the relations that hold on `n × n` matrices but not on
/// `(n+1) × (n+1)` matrices: `nullity(n, d) − nullity(n + 1, d)`. On the
/// diagonal `d = n + 1` this is the full relation count, since degree-`d`
/// relations vanish once `n ≥ d`. Stable-range cells (`d ≤ n`) are reported
/// as 0 without sampling unless `compute_stable` is set.
pub fn rel_dimension_table(
    max_d: usize,
    max_n: usize,
    config: &SamplerConfig,
    limits: &Limits,
    compute_stable: bool,
) -> Result<Vec<DimRecord>> {
    if max_d == 0 || max_n == 0 {
        return Err(invalid("table bounds must be positive"));
    }
    let mut records = Vec::new();
    for d in 1..=max_d {
        let k = basis_for(d, limits)?.len();
        // nullity[n] for n in 1..=d; nullity(d, d) = 0
        let top = d.min(max_n + 1);
        let mut nullity = vec![0usize; top + 1];
        for (n, slot) in nullity.iter_mut().enumerate().take(top).skip(1) {
            if !stable_range(d, n) {
                *slot = find_relations(n, d, config, limits)?.relations.len();
            }
        }
        for n in 1..=max_n {
            let rel_dim = if stable_range(d, n) {
                if compute_stable {
                    find_relations(n, d, config, limits)?.relations.len()
                } else {
                    0
                }
            } else {
                nullity[n] - nullity.get(n + 1).copied().unwrap_or(0)
            };
            records.push(DimRecord { n, d, k, rel_dim });
        }
    }
    Ok(records)
}
