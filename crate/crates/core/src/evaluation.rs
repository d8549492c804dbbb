//! Numerical evaluation of trace invariants on concrete matrices.
//!
//! Two scalar modes share one interface: exact rationals (the certified
//! mode) and complex `f64` (the fast, uncertified mode). A brute-force
//! tensor contraction over index assignments serves as an independent check
//! of the matching-to-monomial correspondence.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{FpfInvolution, InvariantMonomial, Letter, TraceWord};
use crate::error::{invalid, Result};
use crate::limits::Limits;
use crate::perm::Permutation;

/// Ring operations needed to evaluate traces.
pub trait Scalar: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> + Send + Sync {}

impl<T> Scalar for T where T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + Send + Sync {}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(invalid("matrix must be at least 1×1"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(invalid(format!("matrix is not square ({n} rows)")));
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let mut acc = T::zero();
            for k in 0..n {
                acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `gᵀ · self · g`.
    pub fn orthogonal_conjugate(&self, g: &Self) -> Self {
        g.transpose().mul(self).mul(g)
    }
}

impl<T: Scalar> Matrix<T>
where
    T: std::ops::Neg<Output = T>,
{
    /// The signed permutation matrix with `g[perm(j), j] = ±1`.
    pub fn signed_permutation(perm: &Permutation, negate: &[bool]) -> Self {
        let n = perm.degree();
        assert_eq!(negate.len(), n);
        let mut m = Matrix::zeros(n);
        for j in 0..n {
            let i = perm.apply(j);
            m.data[i * n + j] = if negate[j] { -T::one() } else { T::one() };
        }
        m
    }
}

/// Scalar mode of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarMode {
    Rational,
    Complex,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Complex => "complex",
        })
    }
}

/// A concrete `n × n` matrix in one scalar mode.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSample {
    Rational(Matrix<BigRational>),
    Complex(Matrix<Complex64>),
}

/// The value of an invariant on a sample, in the sample's mode.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarValue {
    Rational(BigRational),
    Complex(Complex64),
}

impl ScalarValue {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ScalarValue::Rational(r) => Some(r),
            ScalarValue::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            ScalarValue::Rational(_) => None,
            ScalarValue::Complex(c) => Some(*c),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ScalarValue::Rational(r) => r.is_zero(),
            ScalarValue::Complex(c) => c.is_zero(),
        }
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Rational(r) => write!(f, "{r}"),
            ScalarValue::Complex(c) => write!(f, "{c}"),
        }
    }
}

impl MatrixSample {
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect())
            .collect();
        Ok(MatrixSample::Rational(Matrix::from_rows(rows)?))
    }

    pub fn from_complex(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        if rows.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid("complex entries must be finite"));
        }
        Ok(MatrixSample::Complex(Matrix::from_rows(rows)?))
    }

    pub fn dim(&self) -> usize {
        match self {
            MatrixSample::Rational(m) => m.dim(),
            MatrixSample::Complex(m) => m.dim(),
        }
    }

    pub fn mode(&self) -> ScalarMode {
        match self {
            MatrixSample::Rational(_) => ScalarMode::Rational,
            MatrixSample::Complex(_) => ScalarMode::Complex,
        }
    }

    pub fn transpose(&self) -> MatrixSample {
        match self {
            MatrixSample::Rational(m) => MatrixSample::Rational(m.transpose()),
            MatrixSample::Complex(m) => MatrixSample::Complex(m.transpose()),
        }
    }

    /// Parses the matrix file format
    /// `{"n": 2, "mode": "rational", "entries": [["1/2", "0"], ["-3", "4"]]}`;
    /// complex entries are `[re, im]` pairs.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(text)?;
        if file.entries.len() != file.n {
            return Err(invalid(format!(
                "expected {} rows, found {}",
                file.n,
                file.entries.len()
            )));
        }
        match file.mode {
            ScalarMode::Rational => {
                let rows = file
                    .entries
                    .into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|e| match e {
                                MatrixEntry::Numeral(s) => parse_rational(&s),
                                MatrixEntry::Pair(_) => Err(invalid("rational mode expects string numerals")),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(MatrixSample::Rational(Matrix::from_rows(rows)?))
            }
            ScalarMode::Complex => {
                let rows = file
                    .entries
                    .into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|e| match e {
                                MatrixEntry::Pair([re, im]) => Ok(Complex64::new(re, im)),
                                MatrixEntry::Numeral(_) => Err(invalid("complex mode expects [re, im] pairs")),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                MatrixSample::from_complex(rows)
            }
        }
    }

    pub fn to_json(&self) -> String {
        let entries = match self {
            MatrixSample::Rational(m) => m
                .rows()
                .map(|r| r.iter().map(|v| MatrixEntry::Numeral(v.to_string())).collect())
                .collect(),
            MatrixSample::Complex(m) => m
                .rows()
                .map(|r| r.iter().map(|c| MatrixEntry::Pair([c.re, c.im])).collect())
                .collect(),
        };
        let file = MatrixFile {
            n: self.dim(),
            mode: self.mode(),
            entries,
        };
        serde_json::to_string(&file).expect("matrix serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    n: usize,
    mode: ScalarMode,
    entries: Vec<Vec<MatrixEntry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MatrixEntry {
    Numeral(String),
    Pair([f64; 2]),
}

/// Parses `"p"` or `"p/q"` with a nonzero denominator.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || invalid(format!("bad rational numeral {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// `Tr` of the product of the letters of `letters`, left to right.
pub fn trace_of_word<T: Scalar>(letters: &[Letter], x: &Matrix<T>, xt: &Matrix<T>) -> T {
    let pick = |l: &Letter| match l {
        Letter::X => x,
        Letter::XT => xt,
    };
    let mut iter = letters.iter();
    let first = iter.next().expect("nonempty word");
    let mut acc = pick(first).clone();
    for l in iter {
        acc = acc.mul(pick(l));
    }
    acc.trace()
}

pub fn monomial_value<T: Scalar>(m: &InvariantMonomial, x: &Matrix<T>, xt: &Matrix<T>) -> T {
    m.words()
        .iter()
        .fold(T::one(), |acc, w| acc * trace_of_word(w.letters(), x, xt))
}

/// Values of every basis monomial on `x`, evaluating each distinct word once.
pub fn basis_values<T: Scalar>(basis: &[InvariantMonomial], x: &Matrix<T>) -> Vec<T> {
    let xt = x.transpose();
    let mut words: HashMap<&TraceWord, T> = HashMap::new();
    for m in basis {
        for w in m.words() {
            words.entry(w).or_insert_with(|| trace_of_word(w.letters(), x, &xt));
        }
    }
    basis
        .iter()
        .map(|m| m.words().iter().fold(T::one(), |acc, w| acc * words[w].clone()))
        .collect()
}

/// Full contraction of `x ⊗ ⋯ ⊗ x` along the matching: the sum over index
/// assignments constant on matched slot pairs of `Π_f x[left_f, right_f]`.
pub fn contraction_value<T: Scalar>(inv: &FpfInvolution, x: &Matrix<T>) -> T {
    let n = x.dim();
    let d = inv.degree();
    // pair_of[slot] indexes the matched pair the slot belongs to
    let mut pair_of = vec![usize::MAX; 2 * d];
    let mut pairs = 0;
    for a in 0..2 * d {
        if pair_of[a] == usize::MAX {
            pair_of[a] = pairs;
            pair_of[inv.partner(a)] = pairs;
            pairs += 1;
        }
    }
    let mut assignment = vec![0usize; pairs];
    let mut total = T::zero();
    loop {
        let mut term = T::one();
        for f in 0..d {
            let i = assignment[pair_of[2 * f]];
            let j = assignment[pair_of[2 * f + 1]];
            term = term * x.get(i, j).clone();
        }
        total = total + term;
        // odometer
        let mut k = 0;
        loop {
            if k == pairs {
                return total;
            }
            assignment[k] += 1;
            if assignment[k] < n {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

fn check_complex(v: Complex64) -> Result<ScalarValue> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(ScalarValue::Complex(v))
    } else {
        Err(invalid("complex evaluation overflowed to a non-finite value"))
    }
}

pub fn evaluate_word(w: &TraceWord, x: &MatrixSample) -> Result<ScalarValue> {
    match x {
        MatrixSample::Rational(m) => Ok(ScalarValue::Rational(trace_of_word(w.letters(), m, &m.transpose()))),
        MatrixSample::Complex(m) => check_complex(trace_of_word(w.letters(), m, &m.transpose())),
    }
}

pub fn evaluate_monomial(m: &InvariantMonomial, x: &MatrixSample) -> Result<ScalarValue> {
    match x {
        MatrixSample::Rational(a) => Ok(ScalarValue::Rational(monomial_value(m, a, &a.transpose()))),
        MatrixSample::Complex(a) => check_complex(monomial_value(m, a, &a.transpose())),
    }
}

/// One row of the evaluation system: `basis[i]` evaluated on `x`, for each `i`.
pub fn evaluate_basis_row(basis: &[InvariantMonomial], x: &MatrixSample) -> Result<Vec<ScalarValue>> {
    match x {
        MatrixSample::Rational(a) => Ok(basis_values(basis, a).into_iter().map(ScalarValue::Rational).collect()),
        MatrixSample::Complex(a) => basis_values(basis, a).into_iter().map(check_complex).collect(),
    }
}

pub fn contract_matching(inv: &FpfInvolution, x: &MatrixSample, limits: &Limits) -> Result<ScalarValue> {
    let work = (x.dim() as u128).checked_pow(inv.degree() as u32).unwrap_or(u128::MAX);
    Limits::check("contraction index assignments", work, limits.contraction_terms)?;
    match x {
        MatrixSample::Rational(a) => Ok(ScalarValue::Rational(contraction_value(inv, a))),
        MatrixSample::Complex(a) => check_complex(contraction_value(inv, a)),
    }
}

/// True when every entry of an exact sample is an integer.
pub fn is_integral(x: &MatrixSample) -> bool {
    match x {
        MatrixSample::Rational(m) => m.entries().iter().all(|v| v.is_integer()),
        MatrixSample::Complex(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{enumerate_invariant_basis, tau};

    fn int(v: i64) -> ScalarValue {
        ScalarValue::Rational(BigRational::from_integer(v.into()))
    }

    fn diag12() -> MatrixSample {
        MatrixSample::from_integers(&[vec![1, 0], vec![0, 2]]).unwrap()
    }

    fn nilpotent() -> MatrixSample {
        MatrixSample::from_integers(&[vec![0, 1], vec![0, 0]]).unwrap()
    }

    #[test]
    fn word_examples() {
        let id = MatrixSample::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(evaluate_word(&"x".parse().unwrap(), &id).unwrap(), int(2));
        assert_eq!(evaluate_word(&"xt".parse().unwrap(), &nilpotent()).unwrap(), int(1));
        assert_eq!(evaluate_word(&"xxx".parse().unwrap(), &diag12()).unwrap(), int(9));
    }

    #[test]
    fn monomial_examples() {
        let m = |s: &str| s.parse::<InvariantMonomial>().unwrap();
        assert_eq!(evaluate_monomial(&m("x*x*x"), &diag12()).unwrap(), int(27));
        assert_eq!(evaluate_monomial(&m("xx*x"), &diag12()).unwrap(), int(15));
        assert_eq!(evaluate_monomial(&m("xt*x"), &nilpotent()).unwrap(), int(0));
    }

    #[test]
    fn basis_row_examples() {
        let b3 = enumerate_invariant_basis(3).unwrap();
        let id = MatrixSample::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        let row = evaluate_basis_row(&b3, &id).unwrap();
        assert_eq!(row, vec![int(2), int(2), int(4), int(4), int(8)]);
        let zero = MatrixSample::from_integers(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(evaluate_basis_row(&b3, &zero).unwrap().iter().all(ScalarValue::is_zero));
        let b1 = enumerate_invariant_basis(1).unwrap();
        let x = MatrixSample::from_integers(&[vec![3, 7], vec![-2, 5]]).unwrap();
        assert_eq!(evaluate_basis_row(&b1, &x).unwrap(), vec![int(8)]);
    }

    #[test]
    fn contraction_examples() {
        let x = MatrixSample::from_integers(&[vec![3, 7], vec![-2, 5]]).unwrap();
        let l = Limits::default();
        assert_eq!(contract_matching(&tau(1).unwrap(), &x, &l).unwrap(), int(8));
        assert_eq!(contract_matching(&tau(2).unwrap(), &x, &l).unwrap(), int(64));
        let tight = Limits {
            contraction_terms: 3,
            ..Limits::default()
        };
        assert!(contract_matching(&tau(2).unwrap(), &x, &tight).is_err());
    }

    #[test]
    fn complex_mode_evaluates() {
        let x = MatrixSample::from_complex(vec![
            vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(2.0, 0.0)],
        ])
        .unwrap();
        let v = evaluate_word(&"xx".parse().unwrap(), &x).unwrap();
        // i² + 2² = 3
        assert!((v.as_complex().unwrap() - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        assert!(MatrixSample::from_complex(vec![vec![Complex64::new(f64::NAN, 0.0)]]).is_err());
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let text = r#"{"n": 2, "mode": "rational", "entries": [["1/2", "0"], ["-3", "4/6"]]}"#;
        let x = MatrixSample::from_json(text).unwrap();
        assert_eq!(MatrixSample::from_json(&x.to_json()).unwrap(), x);
        assert_eq!(evaluate_word(&"x".parse().unwrap(), &x).unwrap().to_string(), "7/6");
        let c = r#"{"n": 1, "mode": "complex", "entries": [[[1.5, -2.0]]]}"#;
        let x = MatrixSample::from_json(c).unwrap();
        assert_eq!(MatrixSample::from_json(&x.to_json()).unwrap(), x);
        assert!(MatrixSample::from_json(r#"{"n": 2, "mode": "rational", "entries": [["1"]]}"#).is_err());
        assert!(MatrixSample::from_json(r#"{"n": 1, "mode": "rational", "entries": [["1/0"]]}"#).is_err());
        assert!(MatrixSample::from_json(r#"{"n": 1, "mode": "complex", "entries": [["1"]]}"#).is_err());
    }
}
