//! Relations from Young symmetrizers of the two-column shape.
//!
//! For a standard tableau `T` with row group `P` and column group `Q`, the
//! symmetrizer is `y_T = (Σ_p p)(Σ_q sgn(q) q)` in the group algebra of
//! `S_N`, with products read as composition of functions. Each term `σ` is
//! sent to the matching `σ⁻¹ τ σ`, whose necklace class is a basis
//! invariant of degree `N / 2`; summing the coefficients by class gives a
//! relation. Over the `C_{n+1}` tableaux of shape `(2, …, 2)` with `n + 1`
//! rows these vectors span the degree-`(n+1)` relations of `n × n` matrices.

use std::collections::HashMap;
use std::fmt;

use num::{BigInt, BigRational, BigUint, One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::combinatorics::{
    enumerate_fpf_involutions, enumerate_invariant_basis, involution_to_monomial, InvariantMonomial,
};
use crate::dimensions::{factorial, Partition};
use crate::error::{invalid, Result};
use crate::limits::Limits;
use crate::linalg;
use crate::montecarlo::{Method, RelationSet, RelationVector};
use crate::perm::Permutation;

/// `(2, …, 2)` with `n + 1` rows.
pub fn two_column_shape(n: usize) -> Partition {
    assert!(n >= 1, "n must be positive");
    Partition::new(vec![2; n + 1]).expect("constant parts")
}

/// Number of standard tableaux of `shape`, by the hook length formula.
pub fn hook_length_count(shape: &Partition) -> BigUint {
    let cols = shape.conjugate();
    let mut hooks = BigUint::one();
    for (i, &row) in shape.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = cols.parts()[j] - i - 1;
            hooks *= BigUint::from(arm + leg + 1);
        }
    }
    factorial(shape.size()) / hooks
}

/// A filling of a Young diagram by `1..=N`, rows and columns increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(Vec::len).collect())?;
        let size = shape.size();
        let mut seen = vec![false; size + 1];
        for &e in rows.iter().flatten() {
            if e == 0 || e > size || std::mem::replace(&mut seen[e], true) {
                return Err(invalid(format!("tableau entries must be 1..={size}, each once")));
            }
        }
        let rows_ok = rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let cols_ok = rows
            .windows(2)
            .all(|pair| pair[1].iter().zip(&pair[0]).all(|(lo, hi)| hi < lo));
        if !rows_ok || !cols_ok {
            return Err(invalid("tableau rows and columns must increase"));
        }
        Ok(StandardTableau { shape, rows })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.shape.size()
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width)
            .map(|c| self.rows.iter().filter_map(|r| r.get(c).copied()).collect())
            .collect()
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "[{}]", cells.join(","))?;
        }
        Ok(())
    }
}

/// All standard tableaux of `shape`. Entries are placed in increasing order,
/// trying rows from the top, so `[[1,2],[3,4]]` precedes `[[1,3],[2,4]]`.
pub fn enumerate_standard_tableaux(shape: &Partition, limits: &Limits) -> Result<Vec<StandardTableau>> {
    let count = hook_length_count(shape);
    Limits::check(
        "standard tableaux",
        count.to_u128().unwrap_or(u128::MAX),
        limits.tableaux as u128,
    )?;
    fn fill(shape: &[usize], next: usize, size: usize, rows: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if next > size {
            out.push(rows.clone());
            return;
        }
        for i in 0..shape.len() {
            let len = rows[i].len();
            if len < shape[i] && (i == 0 || rows[i - 1].len() > len) {
                rows[i].push(next);
                fill(shape, next + 1, size, rows, out);
                rows[i].pop();
            }
        }
    }
    let mut raw = Vec::new();
    let mut rows = vec![Vec::new(); shape.parts().len()];
    fill(shape.parts(), 1, shape.size(), &mut rows, &mut raw);
    Ok(raw
        .into_iter()
        .map(|rows| StandardTableau {
            shape: shape.clone(),
            rows,
        })
        .collect())
}

/// Every permutation of `N` points preserving each block setwise, with its sign.
fn block_group(size: usize, blocks: &[Vec<usize>]) -> Vec<(Permutation, i8)> {
    let mut group = vec![Permutation::identity(size)];
    for block in blocks.iter().filter(|b| b.len() > 1) {
        let points: Vec<usize> = block.iter().map(|e| e - 1).collect();
        let local = Permutation::all_on(size, &points);
        group = group
            .iter()
            .flat_map(|g| local.iter().map(move |h| g.compose(h)))
            .collect();
    }
    group
        .into_iter()
        .map(|p| {
            let s = p.sign();
            (p, s)
        })
        .collect()
}

/// Permutations preserving each row, acting on points `0..N` (entry `e` is point `e − 1`).
pub fn row_group(t: &StandardTableau) -> Vec<Permutation> {
    block_group(t.size(), t.rows()).into_iter().map(|(p, _)| p).collect()
}

/// Permutations preserving each column, with their signs.
pub fn column_group(t: &StandardTableau) -> Vec<(Permutation, i8)> {
    block_group(t.size(), &t.columns())
}

/// Number of products `p ∘ q` before like terms are combined: `|P| · |Q|`.
pub fn expansion_term_count(t: &StandardTableau) -> u128 {
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    let p: u128 = t.rows().iter().map(|r| fact(r.len())).product();
    let q: u128 = t.columns().iter().map(|c| fact(c.len())).product();
    p * q
}

/// A finite sum of permutations of `N` points with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    degree: usize,
    terms: HashMap<Permutation, BigRational>,
}

impl GroupAlgebraElement {
    pub fn zero(degree: usize) -> Self {
        GroupAlgebraElement {
            degree,
            terms: HashMap::new(),
        }
    }

    pub fn basis_element(p: Permutation) -> Self {
        let mut e = GroupAlgebraElement::zero(p.degree());
        e.add_term(p, BigRational::one());
        e
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Permutation, BigRational)>) -> Result<Self> {
        let mut e = GroupAlgebraElement::zero(degree);
        for (p, c) in terms {
            if p.degree() != degree {
                return Err(invalid(format!(
                    "permutation on {} points in an element on {degree}",
                    p.degree()
                )));
            }
            e.add_term(p, c);
        }
        Ok(e)
    }

    fn add_term(&mut self, p: Permutation, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::hash_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: &Permutation) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Terms sorted by permutation.
    pub fn terms(&self) -> Vec<(&Permutation, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut e = GroupAlgebraElement::zero(self.degree);
        for (p, v) in &self.terms {
            e.add_term(p.clone(), v * c);
        }
        e
    }

    /// Product with `(a·b)(i) = a(b(i))` on basis permutations.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        let right: Vec<(&Permutation, &BigRational)> = other.terms.iter().collect();
        let partials: Vec<HashMap<Permutation, BigRational>> = self
            .terms
            .par_iter()
            .map(|(a, ca)| {
                let mut acc = GroupAlgebraElement::zero(self.degree);
                for (b, cb) in &right {
                    acc.add_term(a.compose(b), ca * *cb);
                }
                acc.terms
            })
            .collect();
        let mut out = GroupAlgebraElement::zero(self.degree);
        for part in partials {
            for (p, c) in part {
                out.add_term(p, c);
            }
        }
        out
    }

    /// `c` with `self = c · other`, if one exists. `other` must be nonzero.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        let (p, c0) = other.terms.iter().next()?;
        let c = self.coefficient(p) / c0;
        (self.terms.len() == other.terms.len() && other.terms.iter().all(|(q, v)| self.coefficient(q) == v * &c))
            .then_some(c)
    }
}

/// `y_T = (Σ_{p∈P} p)(Σ_{q∈Q} sgn(q) q)`.
///
/// `P ∩ Q` is trivial, so the `|P|·|Q|` products are distinct and the result
/// has exactly that many terms, each with coefficient ±1.
pub fn young_symmetrizer(t: &StandardTableau, limits: &Limits) -> Result<GroupAlgebraElement> {
    Limits::check("symmetrizer terms", expansion_term_count(t), limits.symmetrizer_terms)?;
    let rows = row_group(t);
    let cols = column_group(t);
    let products: Vec<(Permutation, i8)> = rows
        .par_iter()
        .flat_map_iter(|p| cols.iter().map(move |(q, s)| (p.compose(q), *s)))
        .collect();
    let mut y = GroupAlgebraElement::zero(t.size());
    for (p, s) in products {
        y.add_term(p, BigRational::from_integer(BigInt::from(s)));
    }
    Ok(y)
}

/// Lookup from the pairing of a fixed-point-free involution to its basis index.
struct ClassIndex {
    basis: Vec<InvariantMonomial>,
    index: HashMap<Vec<usize>, usize>,
}

impl ClassIndex {
    fn new(d: usize) -> Result<Self> {
        let basis = enumerate_invariant_basis(d)?;
        let position: HashMap<&InvariantMonomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let limits = Limits {
            involution_degree: d,
            ..Limits::default()
        };
        let mut index = HashMap::new();
        for inv in enumerate_fpf_involutions(d, &limits)? {
            let i = position[&involution_to_monomial(&inv)];
            index.insert(inv.pairing().to_vec(), i);
        }
        Ok(ClassIndex { basis, index })
    }

    /// Basis index of the class of `σ⁻¹ τ σ`.
    fn pulled_back_tau(&self, sigma: &Permutation) -> usize {
        let images: Vec<usize> = sigma.images().collect();
        let mut inverse = vec![0; images.len()];
        for (a, &b) in images.iter().enumerate() {
            inverse[b] = a;
        }
        // τ swaps the two slots of each factor
        let pairing: Vec<usize> = images.iter().map(|&b| inverse[b ^ 1]).collect();
        self.index[&pairing]
    }
}

fn project_with(y: &GroupAlgebraElement, classes: &ClassIndex) -> Vec<BigRational> {
    let k = classes.basis.len();
    y.terms
        .par_iter()
        .fold(
            || vec![BigRational::zero(); k],
            |mut acc, (sigma, c)| {
                acc[classes.pulled_back_tau(sigma)] += c;
                acc
            },
        )
        .reduce(
            || vec![BigRational::zero(); k],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

fn check_even(y: &GroupAlgebraElement) -> Result<usize> {
    if y.degree() == 0 || !y.degree().is_multiple_of(2) {
        return Err(invalid(format!(
            "expected an element on an even number of points, got {}",
            y.degree()
        )));
    }
    Ok(y.degree() / 2)
}

/// Coordinates of `Σ c_σ [σ⁻¹ τ σ]` over the degree-`N/2` basis, before normalization.
pub fn project_raw(y: &GroupAlgebraElement) -> Result<Vec<BigRational>> {
    let d = check_even(y)?;
    Ok(project_with(y, &ClassIndex::new(d)?))
}

/// The projection of `y` as a primitive integer vector with positive leading
/// coordinate; the zero vector is returned unchanged.
pub fn project_to_invariants(y: &GroupAlgebraElement) -> Result<Vec<BigInt>> {
    let mut v = linalg::clear_denominators(&project_raw(y)?);
    linalg::normalize_primitive(&mut v);
    Ok(v)
}

/// A nonzero projected symmetrizer and the tableau it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetrizerRelation {
    pub tableau: StandardTableau,
    pub vector: RelationVector,
}

/// Projections of the symmetrizers of every standard tableau of the
/// two-column shape, in tableau order, with zero projections dropped.
/// `progress(done, total)` is called after each tableau.
pub fn symmetrizer_relations(
    n: usize,
    limits: &Limits,
    progress: &mut dyn FnMut(usize, usize),
) -> Result<Vec<SymmetrizerRelation>> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let shape = two_column_shape(n);
    let tableaux = enumerate_standard_tableaux(&shape, limits)?;
    if let Some(t) = tableaux.first() {
        Limits::check("symmetrizer terms", expansion_term_count(t), limits.symmetrizer_terms)?;
    }
    let classes = ClassIndex::new(n + 1)?;
    let total = tableaux.len();
    let mut out = Vec::new();
    for (i, t) in tableaux.into_iter().enumerate() {
        let y = young_symmetrizer(&t, limits)?;
        let raw = project_with(&y, &classes);
        drop(y);
        if raw.iter().any(|c| !c.is_zero()) {
            out.push(SymmetrizerRelation {
                tableau: t,
                vector: RelationVector::from_rationals(&raw)?,
            });
        }
        progress(i + 1, total);
    }
    Ok(out)
}

/// Degree-`(n+1)` relations on `n × n` matrices from the symmetrizer engine:
/// a maximal independent subset of the projected symmetrizers, chosen greedily
/// in tableau order.
pub fn symmetrizer_relation_space(n: usize, limits: &Limits) -> Result<RelationSet> {
    symmetrizer_relation_space_with_progress(n, limits, &mut |_, _| {})
}

pub fn symmetrizer_relation_space_with_progress(
    n: usize,
    limits: &Limits,
    progress: &mut dyn FnMut(usize, usize),
) -> Result<RelationSet> {
    let all = symmetrizer_relations(n, limits, progress)?;
    let basis = enumerate_invariant_basis(n + 1)?;
    let k = basis.len();
    let mut chosen: Vec<RelationVector> = Vec::new();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for rel in all {
        rows.push(rel.vector.coeffs().to_vec());
        if linalg::integer_rank(&rows, k) > chosen.len() {
            chosen.push(rel.vector);
        } else {
            rows.pop();
        }
    }
    Ok(RelationSet {
        n,
        d: n + 1,
        basis,
        relations: chosen,
        method: Method::Symmetrizer,
        config: None,
        final_entry_bound: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::tau;

    fn parts(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn tableau(rows: &[&[usize]]) -> StandardTableau {
        StandardTableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn shapes() {
        assert_eq!(two_column_shape(1), parts(&[2, 2]));
        assert_eq!(two_column_shape(2), parts(&[2, 2, 2]));
        assert_eq!(two_column_shape(4), parts(&[2, 2, 2, 2, 2]));
    }

    #[test]
    fn tableau_counts() {
        let l = Limits::default();
        assert_eq!(enumerate_standard_tableaux(&parts(&[2, 2]), &l).unwrap().len(), 2);
        assert_eq!(enumerate_standard_tableaux(&parts(&[2, 2, 2]), &l).unwrap().len(), 5);
        assert_eq!(
            enumerate_standard_tableaux(&parts(&[2, 2, 2, 2, 2]), &l).unwrap().len(),
            42
        );
        let first = &enumerate_standard_tableaux(&parts(&[2, 2]), &l).unwrap()[0];
        assert_eq!(first.rows(), &[vec![1, 2], vec![3, 4]]);
        let tight = Limits { tableaux: 4, ..l };
        assert!(enumerate_standard_tableaux(&parts(&[2, 2, 2]), &tight).is_err());
    }

    #[test]
    fn tableau_validation() {
        assert!(StandardTableau::new(vec![vec![2, 1]]).is_err());
        assert!(StandardTableau::new(vec![vec![1, 3], vec![2, 2]]).is_err());
        assert!(StandardTableau::new(vec![vec![1, 4], vec![2, 3]]).is_err());
        assert!(StandardTableau::new(vec![vec![1, 3], vec![2, 4]]).is_ok());
    }

    #[test]
    fn group_sizes() {
        let t = tableau(&[&[1, 2], &[3, 4]]);
        assert_eq!(row_group(&t).len(), 4);
        assert_eq!(column_group(&t).len(), 4);
        let t = tableau(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(row_group(&t).len(), 8);
        assert_eq!(column_group(&t).len(), 36);
        let t = &enumerate_standard_tableaux(&parts(&[2; 5]), &Limits::default()).unwrap()[0];
        assert_eq!(expansion_term_count(t), 460_800);
        // the column group of [[1,2],[3,4]] is generated by (1 3) and (2 4)
        let signs: i32 = column_group(&tableau(&[&[1, 2], &[3, 4]]))
            .iter()
            .map(|(_, s)| *s as i32)
            .sum();
        assert_eq!(signs, 0);
    }

    #[test]
    fn small_symmetrizers() {
        let l = Limits::default();
        let y = young_symmetrizer(&tableau(&[&[1]]), &l).unwrap();
        assert_eq!(y, GroupAlgebraElement::basis_element(Permutation::identity(1)));
        let y = young_symmetrizer(&tableau(&[&[1, 2]]), &l).unwrap();
        let swap = Permutation::from_images(&[1, 0]).unwrap();
        assert_eq!(y.len(), 2);
        assert_eq!(y.coefficient(&Permutation::identity(2)), r(1));
        assert_eq!(y.coefficient(&swap), r(1));
    }

    #[test]
    fn square_shape_quasi_idempotent() {
        // 4!/f = 24/2 = 12, checked against brute-force multiplication
        let y = young_symmetrizer(&tableau(&[&[1, 2], &[3, 4]]), &Limits::default()).unwrap();
        assert_eq!(y.mul(&y).ratio_to(&y), Some(r(12)));
    }

    #[test]
    fn symmetrizer_cap() {
        let t = tableau(&[&[1, 2], &[3, 4], &[5, 6]]);
        let tight = Limits {
            symmetrizer_terms: 100,
            ..Limits::default()
        };
        assert!(young_symmetrizer(&t, &tight).is_err());
    }

    #[test]
    fn projection_examples() {
        for n in 1..=3 {
            let d = n + 1;
            let basis = enumerate_invariant_basis(d).unwrap();
            let tau_class = basis
                .iter()
                .position(|m| m == &involution_to_monomial(&tau(d).unwrap()))
                .unwrap();
            let e = GroupAlgebraElement::basis_element(Permutation::identity(2 * d));
            let v = project_raw(&e).unwrap();
            assert!(v
                .iter()
                .enumerate()
                .all(|(i, c)| *c == if i == tau_class { r(1) } else { r(0) }));
            let mut both = e.clone();
            both.add_term(tau(d).unwrap().to_permutation(), r(1));
            let v = project_raw(&both).unwrap();
            assert_eq!(v[tau_class], r(2));
            assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 1);
        }
    }

    #[test]
    fn relation_space_sizes() {
        let l = Limits::default();
        assert_eq!(symmetrizer_relation_space(1, &l).unwrap().relations.len(), 2);
        assert_eq!(symmetrizer_relation_space(2, &l).unwrap().relations.len(), 2);
        assert!(symmetrizer_relation_space(4, &l).is_err());
    }

    #[test]
    fn hook_lengths() {
        assert_eq!(hook_length_count(&parts(&[3, 2])), BigUint::from(5u8));
        assert_eq!(hook_length_count(&parts(&[2, 2, 2])), BigUint::from(5u8));
        assert_eq!(hook_length_count(&parts(&[1])), BigUint::from(1u8));
    }
}
