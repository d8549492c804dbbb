//! Exact and floating-point null spaces.
//!
//! The exact path is fraction-free Gauss–Jordan elimination on integer
//! matrices: every update is `(p·a − b·c) / p_prev`, and the division is
//! exact because each entry stays a minor of the input. After elimination all
//! pivots equal the same integer `D`, so kernel vectors come out integral.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::integer::Integer;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Result of fraction-free Gauss–Jordan elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced rows; only the first `pivots.len()` rows are nonzero.
    pub rows: Vec<Vec<BigInt>>,
    /// Pivot column of each nonzero row, increasing.
    pub pivots: Vec<usize>,
    /// Common value of every pivot entry.
    pub pivot_value: BigInt,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// One kernel vector per free column `f`: `D` at `f`, `−row_i[f]` at pivot `i`,
    /// then reduced to a primitive vector with positive leading entry.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![BigInt::zero(); self.cols];
                v[f] = self.pivot_value.clone();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                normalize_primitive(&mut v);
                v
            })
            .collect()
    }
}

/// Fraction-free Gauss–Jordan elimination of an integer matrix with `cols` columns.
pub fn fraction_free_rref(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
    let m = rows.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(found) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let pivot_row = rows[r].clone();
        let p = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let updated = &p * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&updated % &prev).is_zero(), "inexact fraction-free division");
                row[j] = updated / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    Echelon {
        rows,
        pivots,
        pivot_value: prev,
        cols,
    }
}

/// Basis of `{v : M v = 0}` for an integer matrix, as primitive integer vectors.
pub fn integer_nullspace(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    fraction_free_rref(rows.to_vec(), cols).kernel()
}

pub fn integer_rank(rows: &[Vec<BigInt>], cols: usize) -> usize {
    fraction_free_rref(rows.to_vec(), cols).rank()
}

/// Scales a rational row by the lcm of its denominators.
pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
}

pub fn rational_nullspace(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigInt>> {
    let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    integer_nullspace(&ints, cols)
}

/// Divides by the gcd and makes the first nonzero entry positive. Zero stays zero.
pub fn normalize_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let negate = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x = &*x / &g;
        if negate {
            *x = -&*x;
        }
    }
}

/// Numerical null space through the SVD: right singular vectors whose
/// singular value is at most `tolerance · σ_max`. Returned in reduced row
/// echelon form (one row per kernel dimension).
pub fn float_nullspace(rows: &[Vec<Complex64>], cols: usize, tolerance: f64) -> Vec<Vec<Complex64>> {
    if cols == 0 {
        return Vec::new();
    }
    let m = rows.len();
    if m == 0 {
        return (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| if i == j { Complex64::one() } else { Complex64::zero() })
                    .collect()
            })
            .collect();
    }
    // Pad to at least `cols` rows so the thin SVD exposes every right singular vector.
    let height = m.max(cols);
    let a = DMatrix::from_fn(height, cols, |i, j| if i < m { rows[i][j] } else { Complex64::zero() });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = tolerance * sigma_max.max(f64::MIN_POSITIVE);
    let mut kernel: Vec<Vec<Complex64>> = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= cutoff {
            // rows of V^T are conjugated right singular vectors
            kernel.push(v_t.row(i).iter().map(|c| c.conj()).collect());
        }
    }
    complex_rref(kernel, cols)
}

fn complex_rref(mut rows: Vec<Vec<Complex64>>, cols: usize) -> Vec<Vec<Complex64>> {
    let m = rows.len();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let (best, mag) = (r..m)
            .map(|i| (i, rows[i][c].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag < 1e-12 {
            continue;
        }
        rows.swap(r, best);
        let p = rows[r][c];
        for x in rows[r].iter_mut() {
            *x /= p;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions. `None` if the approximation misses by more than `slack`.
pub fn rationalize(x: f64, max_den: u64, slack: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut frac = x;
    for _ in 0..64 {
        let a = frac.floor();
        let ai = a.to_i128()?;
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let rem = frac - a;
        if rem.abs() < 1e-15 {
            break;
        }
        frac = 1.0 / rem;
    }
    if k1 == 0 {
        return None;
    }
    let approx = h1 as f64 / k1 as f64;
    if (approx - x).abs() > slack {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}
