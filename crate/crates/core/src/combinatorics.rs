//! Trace words, invariant monomials and their matching (involution) encodings.
//!
//! A degree-`d` spanning invariant is a product of traces of words in `x` and
//! `xᵀ`. Each word is a cyclic necklace taken up to rotation and up to the
//! reversal that exchanges `x` and `xᵀ` (`Tr(W) = Tr(Wᵀ)`). The same object
//! appears as a perfect matching on `2d` tensor slots: factor `i` owns the
//! left (row) slot `2i` and the right (column) slot `2i + 1`, 0-based.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::limits::Limits;
use crate::perm::Permutation;

/// A letter of a trace word. `X < XT`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    XT,
}

impl Letter {
    pub fn swapped(self) -> Letter {
        match self {
            Letter::X => Letter::XT,
            Letter::XT => Letter::X,
        }
    }

    fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::XT => 't',
        }
    }
}

/// One cyclic trace word in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TraceWord {
    letters: Vec<Letter>,
}

impl TraceWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word read backwards with `x ↔ xᵀ`; its trace is the same polynomial.
    pub fn reverse_swapped(&self) -> Vec<Letter> {
        reverse_swap(&self.letters)
    }
}

fn reverse_swap(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.swapped()).collect()
}

/// Longer words first, then lexicographic with `X < XT`.
impl Ord for TraceWord {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .len()
            .cmp(&self.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for TraceWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for TraceWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c {
                'x' => Ok(Letter::X),
                't' => Ok(Letter::XT),
                other => Err(invalid(format!("unknown letter {other:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        canonicalize_word(&letters)
    }
}

/// Minimal representative over all rotations of `letters` and of its
/// reversed, letter-swapped form.
pub fn canonicalize_word(letters: &[Letter]) -> Result<TraceWord> {
    if letters.is_empty() {
        return Err(invalid("trace word must have at least one letter"));
    }
    let n = letters.len();
    let mirrored = reverse_swap(letters);
    let mut best: Option<Vec<Letter>> = None;
    for source in [letters, mirrored.as_slice()] {
        for r in 0..n {
            let candidate = source[r..].iter().chain(&source[..r]);
            let better = match &best {
                None => true,
                Some(b) => candidate.clone().cmp(b.iter()) == Ordering::Less,
            };
            if better {
                best = Some(candidate.copied().collect());
            }
        }
    }
    Ok(TraceWord {
        letters: best.expect("nonempty word"),
    })
}

/// A product of trace words: one spanning invariant of degree `Σ |word|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantMonomial {
    words: Vec<TraceWord>,
}

impl InvariantMonomial {
    /// Canonicalizes the words and sorts the multiset.
    pub fn new(words: Vec<TraceWord>) -> Result<Self> {
        if words.is_empty() {
            return Err(invalid("invariant monomial needs at least one word"));
        }
        let mut words = words
            .into_iter()
            .map(|w| canonicalize_word(&w.letters))
            .collect::<Result<Vec<_>>>()?;
        words.sort();
        Ok(InvariantMonomial { words })
    }

    fn from_sorted(words: Vec<TraceWord>) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0] <= w[1]));
        InvariantMonomial { words }
    }

    pub fn words(&self) -> &[TraceWord] {
        &self.words
    }

    pub fn degree(&self) -> usize {
        self.words.iter().map(TraceWord::len).sum()
    }

    pub fn class_id(&self) -> NecklaceClassId {
        NecklaceClassId(self.to_string())
    }
}

/// Fewer words first, then the sorted word sequences lexicographically.
impl Ord for InvariantMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for InvariantMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for InvariantMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

impl FromStr for InvariantMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let words = s.split('*').map(str::parse).collect::<Result<Vec<TraceWord>>>()?;
        InvariantMonomial::new(words)
    }
}

/// Serialized canonical monomial, e.g. `"xx*x"`. Equal ids ⇔ same necklace class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NecklaceClassId(String);

impl NecklaceClassId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for NecklaceClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A perfect matching of `{0, …, 2d−1}` written as an involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpfInvolution {
    pairing: Vec<usize>,
}

impl FpfInvolution {
    pub fn new(pairing: Vec<usize>) -> Result<Self> {
        let n = pairing.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(invalid(format!(
                "involution must act on an even, positive number of points, got {n}"
            )));
        }
        for (a, &b) in pairing.iter().enumerate() {
            if b >= n || b == a || pairing[b] != a {
                return Err(invalid(format!(
                    "pairing is not a fixed-point-free involution at point {}",
                    a + 1
                )));
            }
        }
        Ok(FpfInvolution { pairing })
    }

    /// From 1-based transpositions, e.g. `[(1, 3), (2, 4)]`.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let n = 2 * pairs.len();
        let mut pairing = vec![usize::MAX; n];
        for &(a, b) in pairs {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(invalid(format!("pair ({a} {b}) out of range 1..={n}")));
            }
            pairing[a - 1] = b - 1;
            pairing[b - 1] = a - 1;
        }
        if pairing.contains(&usize::MAX) {
            return Err(invalid("pairs do not cover every point"));
        }
        FpfInvolution::new(pairing)
    }

    pub fn from_permutation(p: &Permutation) -> Result<Self> {
        FpfInvolution::new(p.images().collect())
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_images(&self.pairing).expect("involution is a bijection")
    }

    #[inline]
    pub fn partner(&self, slot: usize) -> usize {
        self.pairing[slot]
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn points(&self) -> usize {
        self.pairing.len()
    }

    /// Number of tensor factors `d` (half the number of points).
    pub fn degree(&self) -> usize {
        self.pairing.len() / 2
    }

    /// `g ∘ self ∘ g⁻¹`, matching `{g(a), g(b)}` whenever `self` matches `{a, b}`.
    pub fn conjugate_by(&self, g: &Permutation) -> FpfInvolution {
        assert_eq!(g.degree(), self.points());
        let mut pairing = vec![0; self.points()];
        for (a, &b) in self.pairing.iter().enumerate() {
            pairing[g.apply(a)] = g.apply(b);
        }
        FpfInvolution { pairing }
    }

    /// The matching `{σ⁻¹(a), σ⁻¹(b)}` for every pair `{a, b}`, i.e. `σ⁻¹ ∘ self ∘ σ`.
    pub fn pulled_back_by(&self, sigma: &Permutation) -> FpfInvolution {
        assert_eq!(sigma.degree(), self.points());
        let back = sigma.inverse();
        let pairing = (0..self.points())
            .map(|a| back.apply(self.pairing[sigma.apply(a)]))
            .collect();
        FpfInvolution { pairing }
    }
}

/// 1-based disjoint transpositions, e.g. `(1 2)(3 4)`.
impl fmt::Display for FpfInvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, &b) in self.pairing.iter().enumerate() {
            if a < b {
                write!(f, "({} {})", a + 1, b + 1)?;
            }
        }
        Ok(())
    }
}

/// `(1 2)(3 4)⋯(2d−1 2d)`: every factor contracted with itself.
pub fn tau(d: usize) -> Result<FpfInvolution> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    Ok(FpfInvolution {
        pairing: (0..2 * d).map(|i| i ^ 1).collect(),
    })
}

/// All `(2d)!/(2^d d!)` perfect matchings of `2d` points. The lowest unmatched
/// point is paired with each higher free point in increasing order.
pub fn enumerate_fpf_involutions(d: usize, limits: &Limits) -> Result<Vec<FpfInvolution>> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    Limits::check(
        "involution enumeration degree",
        d as u128,
        limits.involution_degree as u128,
    )?;
    let mut out = Vec::new();
    let mut pairing = vec![usize::MAX; 2 * d];
    fill_matchings(&mut pairing, &mut out);
    Ok(out)
}

fn fill_matchings(pairing: &mut [usize], out: &mut Vec<FpfInvolution>) {
    let Some(a) = pairing.iter().position(|&p| p == usize::MAX) else {
        out.push(FpfInvolution {
            pairing: pairing.to_vec(),
        });
        return;
    };
    for b in a + 1..pairing.len() {
        if pairing[b] == usize::MAX {
            pairing[a] = b;
            pairing[b] = a;
            fill_matchings(pairing, out);
            pairing[a] = usize::MAX;
            pairing[b] = usize::MAX;
        }
    }
}

/// Reads off the trace monomial contracted by `inv`.
///
/// Each cycle is walked starting from its lowest factor, leaving through that
/// factor's right slot. Entering a factor at its left slot contributes `x` and
/// leaves through its right slot; entering at its right slot contributes `xᵀ`
/// and leaves through its left slot.
pub fn involution_to_monomial(inv: &FpfInvolution) -> InvariantMonomial {
    let d = inv.degree();
    let mut visited = vec![false; d];
    let mut words = Vec::new();
    for start in 0..d {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        let mut letters = vec![Letter::X];
        let mut exit = 2 * start + 1;
        loop {
            let entry = inv.partner(exit);
            if entry == 2 * start {
                break;
            }
            let factor = entry / 2;
            visited[factor] = true;
            if entry.is_multiple_of(2) {
                letters.push(Letter::X);
                exit = entry + 1;
            } else {
                letters.push(Letter::XT);
                exit = entry - 1;
            }
        }
        words.push(canonicalize_word(&letters).expect("nonempty"));
    }
    words.sort();
    InvariantMonomial::from_sorted(words)
}

pub fn class_of_involution(inv: &FpfInvolution) -> NecklaceClassId {
    involution_to_monomial(inv).class_id()
}

/// Embeds a permutation of the `d` factors into `S_{2d}`, moving both slots of
/// each factor together (the diagonal copy of `S_d`).
pub fn pair_permutation(g: &Permutation) -> Permutation {
    let images: Vec<usize> = (0..2 * g.degree())
        .map(|slot| 2 * g.apply(slot / 2) + slot % 2)
        .collect();
    Permutation::from_images(&images).expect("pair permutation is a bijection")
}

/// All canonical words of length `len`, sorted.
pub fn canonical_words(len: usize) -> Result<Vec<TraceWord>> {
    if len == 0 {
        return Err(invalid("word length must be positive"));
    }
    Limits::check("trace word length", len as u128, 24)?;
    let mut set = BTreeSet::new();
    for bits in 0u32..(1u32 << len) {
        let letters: Vec<Letter> = (0..len)
            .map(|i| {
                if bits >> (len - 1 - i) & 1 == 1 {
                    Letter::XT
                } else {
                    Letter::X
                }
            })
            .collect();
        let w = canonicalize_word(&letters)?;
        if w.letters == letters {
            set.insert(w);
        }
    }
    Ok(set.into_iter().collect())
}

/// The ordered degree-`d` spanning set: every multiset of canonical words of
/// total length `d`, sorted. This order fixes the coordinates of relation vectors.
pub fn enumerate_invariant_basis(d: usize) -> Result<Vec<InvariantMonomial>> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    // Candidate words in increasing order: longer first.
    let mut pool: Vec<TraceWord> = Vec::new();
    for len in (1..=d).rev() {
        pool.extend(canonical_words(len)?);
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    extend_multisets(&pool, 0, d, &mut current, &mut out);
    out.sort();
    Ok(out)
}

fn extend_multisets(
    pool: &[TraceWord],
    from: usize,
    remaining: usize,
    current: &mut Vec<TraceWord>,
    out: &mut Vec<InvariantMonomial>,
) {
    if remaining == 0 {
        out.push(InvariantMonomial::from_sorted(current.clone()));
        return;
    }
    for (i, w) in pool.iter().enumerate().skip(from) {
        if w.len() <= remaining {
            current.push(w.clone());
            extend_multisets(pool, i, remaining - w.len(), current, out);
            current.pop();
        }
    }
}

/// Same set as [`enumerate_invariant_basis`], obtained as the image of every
/// matching on `2d` points.
pub fn involution_basis(d: usize, limits: &Limits) -> Result<Vec<InvariantMonomial>> {
    let set: BTreeSet<InvariantMonomial> = enumerate_fpf_involutions(d, limits)?
        .iter()
        .map(involution_to_monomial)
        .collect();
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::{X, XT};

    fn word(s: &str) -> TraceWord {
        s.parse().unwrap()
    }

    fn brute_canonical(letters: &[Letter]) -> Vec<Letter> {
        let n = letters.len();
        let mut all = Vec::new();
        let swapped: Vec<Letter> = letters.iter().rev().map(|l| l.swapped()).collect();
        for src in [letters.to_vec(), swapped] {
            for r in 0..n {
                let mut v = src.clone();
                v.rotate_left(r);
                all.push(v);
            }
        }
        all.into_iter().min().unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize_word(&[XT]).unwrap().letters(), &[X]);
        assert_eq!(canonicalize_word(&[XT, X]).unwrap().letters(), &[X, XT]);
        let w = [X, XT, X, X];
        assert_eq!(canonicalize_word(&w).unwrap().letters(), brute_canonical(&w).as_slice());
        assert_eq!(canonicalize_word(&w).unwrap().letters(), &[X, X, X, XT]);
        assert!(matches!(canonicalize_word(&[]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn word_counts_small() {
        let counts: Vec<usize> = (1..=5).map(|l| canonical_words(l).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 2, 4, 4]);
    }

    #[test]
    fn fpf_small_cases() {
        let l = Limits::default();
        let one = enumerate_fpf_involutions(1, &l).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "(1 2)");
        assert_eq!(enumerate_fpf_involutions(2, &l).unwrap().len(), 3);
        assert_eq!(enumerate_fpf_involutions(3, &l).unwrap().len(), 15);
        assert!(matches!(
            enumerate_fpf_involutions(9, &l),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(1).unwrap().to_string(), "(1 2)");
        assert_eq!(tau(2).unwrap().to_string(), "(1 2)(3 4)");
        assert_eq!(tau(3).unwrap().to_string(), "(1 2)(3 4)(5 6)");
    }

    #[test]
    fn involution_validation() {
        assert!(FpfInvolution::new(vec![0, 1]).is_err());
        assert!(FpfInvolution::new(vec![1, 2, 0]).is_err());
        assert!(FpfInvolution::new(vec![1, 0, 3, 3]).is_err());
        assert!(FpfInvolution::from_pairs(&[(1, 3), (2, 4)]).is_ok());
        assert!(FpfInvolution::from_pairs(&[(1, 2), (1, 3)]).is_err());
    }

    #[test]
    fn degree_two_classes() {
        let a = FpfInvolution::from_pairs(&[(1, 3), (2, 4)]).unwrap();
        let b = FpfInvolution::from_pairs(&[(1, 4), (2, 3)]).unwrap();
        assert_eq!(class_of_involution(&a).as_str(), "xt");
        assert_eq!(class_of_involution(&b).as_str(), "xx");
        assert_eq!(class_of_involution(&tau(2).unwrap()).as_str(), "x*x");
        let images: BTreeSet<_> = enumerate_fpf_involutions(2, &Limits::default())
            .unwrap()
            .iter()
            .map(class_of_involution)
            .map(|c| c.to_string())
            .collect();
        assert_eq!(images, ["x*x", "xt", "xx"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn tau_is_power_of_trace() {
        for d in 1..=5 {
            let id = class_of_involution(&tau(d).unwrap());
            assert_eq!(id.as_str(), vec!["x"; d].join("*"));
        }
    }

    #[test]
    fn degree_three_basis_order() {
        let ids: Vec<String> = enumerate_invariant_basis(3)
            .unwrap()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(ids, vec!["xxx", "xxt", "xx*x", "xt*x", "x*x*x"]);
    }

    #[test]
    fn monomial_parse_roundtrip_canonicalizes() {
        let m: InvariantMonomial = "x*tt".parse().unwrap();
        assert_eq!(m.to_string(), "xx*x");
        assert_eq!(m.degree(), 3);
        assert_eq!(m.words()[0], word("xx"));
        assert!("x*y".parse::<InvariantMonomial>().is_err());
        assert!("".parse::<InvariantMonomial>().is_err());
    }

    #[test]
    fn pulled_back_matches_permutation_formula() {
        let inv = tau(3).unwrap();
        let sigma = Permutation::from_images(&[3, 0, 5, 1, 2, 4]).unwrap();
        let expected = sigma.inverse().compose(&inv.to_permutation()).compose(&sigma);
        assert_eq!(inv.pulled_back_by(&sigma).to_permutation(), expected);
        let conj = sigma.compose(&inv.to_permutation()).compose(&sigma.inverse());
        assert_eq!(inv.conjugate_by(&sigma).to_permutation(), conj);
    }
}
