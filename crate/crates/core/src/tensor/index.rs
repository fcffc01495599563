use std::fmt;

use crate::error::{Error, Result};

/// Maximum supported tensor order.
pub const MAX_ORDER: usize = 8;

/// Canonical multi-index: m entity indices in [0, n), stored non-decreasing.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    len: u8,
    idx: [u16; MAX_ORDER],
}

impl MultiIndex {
    /// Canonicalize (sort) and validate a tuple of indices.
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        if indices.is_empty() || indices.len() > MAX_ORDER {
            return Err(Error::InvalidShape(format!(
                "multi-index order {} outside [1, {MAX_ORDER}]",
                indices.len()
            )));
        }
        if n > u16::MAX as usize {
            return Err(Error::InvalidShape(format!("dimension n={n} too large")));
        }
        let mut idx = [0u16; MAX_ORDER];
        for (j, &i) in indices.iter().enumerate() {
            if i >= n {
                return Err(Error::OutOfRange(format!(
                    "index {i} out of range for dimension n={n}"
                )));
            }
            idx[j] = i as u16;
        }
        idx[..indices.len()].sort_unstable();
        Ok(MultiIndex {
            len: indices.len() as u8,
            idx,
        })
    }

    pub(crate) fn from_sorted(sorted: &[u16]) -> Self {
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        let mut idx = [0u16; MAX_ORDER];
        idx[..sorted.len()].copy_from_slice(sorted);
        MultiIndex {
            len: sorted.len() as u8,
            idx,
        }
    }

    /// Tensor order m.
    pub fn order(&self) -> usize {
        self.len as usize
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.idx[..self.len as usize]
    }

    pub fn max_index(&self) -> usize {
        // Sorted, so the last position is the maximum.
        self.idx[self.len as usize - 1] as usize
    }

    pub fn contains(&self, i: usize) -> bool {
        self.as_slice().binary_search(&(i as u16)).is_ok()
    }

    /// (distinct index, multiplicity) pairs in increasing index order.
    pub fn multiplicities(&self) -> Multiplicities<'_> {
        Multiplicities {
            slice: self.as_slice(),
            pos: 0,
        }
    }

    /// Number of distinct permutations of the tuple: m! / ∏ μ_j!.
    pub fn permutation_count(&self) -> u128 {
        let mut acc = FACTORIALS[self.len as usize];
        for (_, mu) in self.multiplicities() {
            acc /= FACTORIALS[mu];
        }
        acc
    }

    /// All positions equal (an entry on the pure diagonal).
    pub fn is_diagonal(&self) -> bool {
        self.idx[0] == self.idx[self.len as usize - 1]
    }

    /// Some index appears more than once.
    pub fn has_repeats(&self) -> bool {
        self.as_slice().windows(2).any(|w| w[0] == w[1])
    }

    /// True iff every distinct index has even multiplicity. Requires even
    /// order.
    pub fn is_sigma2(&self) -> Result<bool> {
        if self.order() % 2 != 0 {
            return Err(Error::OddOrder(self.order()));
        }
        Ok(self.multiplicities().all(|(_, mu)| mu % 2 == 0))
    }
}

const FACTORIALS: [u128; MAX_ORDER + 1] = {
    let mut f = [1u128; MAX_ORDER + 1];
    let mut i = 1;
    while i <= MAX_ORDER {
        f[i] = f[i - 1] * i as u128;
        i += 1;
    }
    f
};

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_slice().cmp(other.as_slice())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, i) in self.as_slice().iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiIndex({self})")
    }
}

pub struct Multiplicities<'a> {
    slice: &'a [u16],
    pos: usize,
}

impl Iterator for Multiplicities<'_> {
    type Item = (usize, usize);

    fn next(&mut self) -> Option<(usize, usize)> {
        if self.pos >= self.slice.len() {
            return None;
        }
        let value = self.slice[self.pos];
        let start = self.pos;
        while self.pos < self.slice.len() && self.slice[self.pos] == value {
            self.pos += 1;
        }
        Some((value as usize, self.pos - start))
    }
}

/// Iterate all canonical indices of shape (n, m) in lexicographic order.
pub fn canonical_indices(n: usize, m: usize) -> Result<CanonicalIndices> {
    if n < 1 || m < 1 || m > MAX_ORDER || n > u16::MAX as usize {
        return Err(Error::InvalidShape(format!(
            "canonical index iteration unsupported for n={n}, m={m}"
        )));
    }
    Ok(CanonicalIndices {
        n: n as u16,
        current: Some([0u16; MAX_ORDER]),
        m,
    })
}

pub struct CanonicalIndices {
    n: u16,
    m: usize,
    current: Option<[u16; MAX_ORDER]>,
}

impl Iterator for CanonicalIndices {
    type Item = MultiIndex;

    fn next(&mut self) -> Option<MultiIndex> {
        let cur = self.current?;
        let item = MultiIndex::from_sorted(&cur[..self.m]);
        // Odometer with the non-decreasing constraint: bump the rightmost
        // position below n-1, then level everything to its right.
        let mut next = cur;
        let mut j = self.m;
        loop {
            if j == 0 {
                self.current = None;
                return Some(item);
            }
            j -= 1;
            if next[j] + 1 < self.n {
                let v = next[j] + 1;
                for slot in next.iter_mut().take(self.m).skip(j) {
                    *slot = v;
                }
                self.current = Some(next);
                return Some(item);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_sorts_and_validates() {
        let i = MultiIndex::new(&[3, 0, 2, 0], 4).unwrap();
        assert_eq!(i.to_string(), "0 0 2 3");
        assert!(MultiIndex::new(&[4], 4).is_err());
        assert!(MultiIndex::new(&[], 4).is_err());
    }

    #[test]
    fn multiplicities_and_permutation_count() {
        let i = MultiIndex::new(&[1, 1, 2, 2], 3).unwrap();
        let mus: Vec<(usize, usize)> = i.multiplicities().collect();
        assert_eq!(mus, vec![(1, 2), (2, 2)]);
        assert_eq!(i.permutation_count(), 6); // 4!/(2!2!)
        let d = MultiIndex::new(&[0, 0, 0, 0], 1).unwrap();
        assert_eq!(d.permutation_count(), 1);
        let all = MultiIndex::new(&[0, 1, 2, 3], 4).unwrap();
        assert_eq!(all.permutation_count(), 24);
    }

    #[test]
    fn canonical_iteration_counts() {
        assert_eq!(canonical_indices(2, 4).unwrap().count(), 5);
        assert_eq!(canonical_indices(20, 4).unwrap().count(), 8855);
        assert_eq!(canonical_indices(1, 6).unwrap().count(), 1);
    }

    #[test]
    fn canonical_iteration_is_sorted_and_unique() {
        let all: Vec<MultiIndex> = canonical_indices(4, 3).unwrap().collect();
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}
