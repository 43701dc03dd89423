use std::fmt;

use serde::{Deserialize, Serialize};

/// A set of edge indices stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSubset(pub u64);

impl EdgeSubset {
    pub const MAX_EDGES: usize = 64;
    pub const EMPTY: EdgeSubset = EdgeSubset(0);

    pub fn full(edge_count: usize) -> Self {
        if edge_count >= 64 {
            EdgeSubset(u64::MAX)
        } else {
            EdgeSubset((1u64 << edge_count) - 1)
        }
    }

    pub fn from_edges(edges: impl IntoIterator<Item = usize>) -> Self {
        edges.into_iter().fold(Self::EMPTY, |s, e| s.with(e))
    }

    pub fn with(self, e: usize) -> Self {
        EdgeSubset(self.0 | (1 << e))
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: EdgeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: EdgeSubset) -> Self {
        EdgeSubset(self.0 & other.0)
    }

    pub fn union(self, other: EdgeSubset) -> Self {
        EdgeSubset(self.0 | other.0)
    }

    /// True when no bit at or above `edge_count` is set.
    pub fn fits(self, edge_count: usize) -> bool {
        self.is_subset_of(Self::full(edge_count))
    }

    /// Edge indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(e)
        })
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "e{}", e + 1)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let s = EdgeSubset::from_edges([0, 3, 4]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 4]);
        assert!(s.fits(5) && !s.fits(4));
        assert_eq!(s.to_string(), "{e1,e4,e5}");
        assert_eq!(EdgeSubset::full(64).len(), 64);
    }
}
