//! Strictly increasing index sequences Q_{k,n} and their lexicographic
//! enumeration, which fixes the row/column order of every compound matrix.

use std::fmt;

use crate::error::{Error, Result};

/// Hard limit on how many index sequences a single enumeration may produce.
/// Compound sizes are capped by the same bound (see [`crate::compound`]).
pub const DEFAULT_SIZE_CAP: usize = 200_000;

/// A strictly increasing sequence of 1-based indices drawn from {1, ..., ambient}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSequence {
    indices: Vec<usize>,
    ambient: usize,
}

impl IndexSequence {
    pub fn new(indices: Vec<usize>, ambient: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Dimension("index sequence must be nonempty".into()));
        }
        if indices[0] < 1 || *indices.last().unwrap() > ambient {
            return Err(Error::Dimension(format!(
                "indices must lie in 1..={ambient}, got {indices:?}"
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Dimension(format!(
                "indices must be strictly increasing, got {indices:?}"
            )));
        }
        Ok(Self { indices, ambient })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// 1-based indices, as in the mathematical notation.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// 0-based positions for slicing into row-major storage.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().map(|&i| i - 1)
    }
}

impl fmt::Display for IndexSequence {
    /// Compact digit form "134" while every index fits one digit, else "1,3,14".
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ambient <= 9 {
            for i in &self.indices {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Binomial coefficient C(n, k) computed in u128 to dodge intermediate
/// overflow; saturates at usize::MAX.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// All C(n,k) strictly increasing k-sequences from {1,...,n} in lexicographic
/// order. This ordering is canonical throughout the crate.
pub fn enumerate_sequences(k: usize, n: usize) -> Result<Vec<IndexSequence>> {
    enumerate_sequences_capped(k, n, DEFAULT_SIZE_CAP)
}

pub fn enumerate_sequences_capped(k: usize, n: usize, cap: usize) -> Result<Vec<IndexSequence>> {
    if k < 1 || k > n {
        return Err(Error::Dimension(format!(
            "order k must satisfy 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    let count = binomial(n, k);
    if count > cap {
        return Err(Error::Capacity(format!(
            "C({n},{k}) = {count} exceeds the size cap {cap}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(IndexSequence {
            indices: current.clone(),
            ambient: n,
        });
        // advance to the next combination in lexicographic order
        let mut i = k;
        while i > 0 {
            i -= 1;
            if current[i] < n - (k - 1 - i) {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return Ok(out);
            }
        }
    }
}
