//! Closed-form counts: the relation dimension at `d = n + 1`, the stable
//! range, matchings, Catalan numbers and partitions with parts at most 2.

use num::{BigUint, One};
use serde::{Deserialize, Serialize};

/// One cell of the relation dimension table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRecord {
    pub n: usize,
    pub d: usize,
    /// Size of the spanning set of degree-`d` invariants.
    pub k: usize,
    pub rel_dim: usize,
}

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> crate::Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(crate::error::invalid(format!(
                "partition parts must be positive and weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Column lengths of the diagram.
    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        let parts = (0..width)
            .map(|c| self.parts.iter().filter(|&&p| p > c).count())
            .collect();
        Partition { parts }
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inner: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

/// Dimension of the relation space in degree `n + 1` for `n × n` matrices.
pub fn rel_dim_formula(n: usize) -> usize {
    assert!(n >= 1, "n must be positive");
    if n.is_multiple_of(2) {
        n / 2 + 1
    } else {
        (n + 3) / 2
    }
}

pub fn stable_range(d: usize, n: usize) -> bool {
    d <= n
}

pub fn factorial(m: usize) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Number of fixed-point-free involutions on `2d` points: `(2d)! / (2^d d!)`.
pub fn fpf_count(d: usize) -> BigUint {
    factorial(2 * d) / ((BigUint::one() << d) * factorial(d))
}

/// `C_m = (2m)! / ((m+1)! m!)`.
pub fn catalan(m: usize) -> BigUint {
    factorial(2 * m) / (factorial(m + 1) * factorial(m))
}

/// Partitions of `m` with every part at most 2, most 2s first.
pub fn two_part_partitions(m: usize) -> Vec<Partition> {
    (0..=m / 2)
        .rev()
        .map(|twos| {
            let mut parts = vec![2; twos];
            parts.resize(m - twos, 1);
            Partition { parts }
        })
        .collect()
}

/// All partitions of `m` in reverse lexicographic order.
pub fn partitions(m: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, m, &mut Vec::new(), &mut out);
    out
}
