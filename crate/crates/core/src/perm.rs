//! Permutations of `{0, …, N−1}` stored as image arrays.

use std::fmt;

/// A permutation `σ` stored as `images[i] = σ(i)`.
///
/// Products use functional composition: `a.compose(&b)` is `i ↦ a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n <= u8::MAX as usize + 1, "permutation degree {n} too large");
        Permutation {
            images: (0..n).map(|i| i as u8).collect(),
        }
    }

    /// Builds a permutation from its image array, checking bijectivity.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let n = images.len();
        if n > u8::MAX as usize + 1 {
            return None;
        }
        let mut seen = vec![false; n];
        for &x in images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Permutation {
            images: images.iter().map(|&x| x as u8).collect(),
        })
    }

    /// Product of disjoint or overlapping cycles (0-based), applied right to left.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut acc = Permutation::identity(n);
        for cycle in cycles.iter().rev() {
            let mut images: Vec<usize> = (0..n).collect();
            for (k, &a) in cycle.iter().enumerate() {
                let b = *cycle.get((k + 1) % cycle.len())?;
                if a >= n || b >= n {
                    return None;
                }
                images[a] = b;
            }
            acc = Permutation::from_images(&images)?.compose(&acc);
        }
        Some(acc)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// +1 for even permutations, −1 for odd ones.
    pub fn sign(&self) -> i8 {
        let mut seen = vec![false; self.degree()];
        let mut sign = 1i8;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.apply(j);
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// All permutations of the given points (the remaining points fixed), in
    /// lexicographic order of the image tuple restricted to `points`.
    pub fn all_on(n: usize, points: &[usize]) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut arrangement: Vec<usize> = points.to_vec();
        arrangement.sort_unstable();
        let sorted = arrangement.clone();
        loop {
            let mut images: Vec<usize> = (0..n).collect();
            for (&from, &to) in sorted.iter().zip(&arrangement) {
                images[from] = to;
            }
            out.push(Permutation::from_images(&images).expect("valid rearrangement"));
            if !next_permutation(&mut arrangement) {
                break;
            }
        }
        out
    }
}

/// Advances `v` to the next lexicographic permutation; false when wrapped.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Disjoint cycle notation, 1-based, fixed points omitted; `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut j = start;
            let mut first = true;
            while !seen[j] {
                seen[j] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", j + 1)?;
                first = false;
                j = self.apply(j);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_is_functional() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // (a∘b)(1) = a(2) = 2, (a∘b)(2) = a(1) = 0
        let ab = a.compose(&b);
        assert_eq!(ab.images().collect::<Vec<_>>(), vec![1, 2, 0]);
        assert_eq!(ab.to_string(), "(1 2 3)");
    }

    #[test]
    fn inverse_and_sign() {
        let p = Permutation::from_images(&[2, 0, 1, 4, 3]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.sign(), -1);
        assert_eq!(Permutation::identity(4).sign(), 1);
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Permutation::from_images(&[0, 0]).is_none());
        assert!(Permutation::from_images(&[0, 2]).is_none());
    }

    #[test]
    fn all_on_counts() {
        assert_eq!(Permutation::all_on(5, &[1, 3, 4]).len(), 6);
        assert_eq!(Permutation::all_on(3, &[]).len(), 1);
        let all = Permutation::all_on(4, &[0, 1, 2, 3]);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
