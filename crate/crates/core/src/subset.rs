//! Subsets of a small ground set `{0, .., n-1}` stored as bitmasks.
//!
//! Everything user-facing is 1-based; the conversion happens at the edges
//! ([`Subset::from_one_based`], [`Subset::to_one_based`]).

use std::fmt;

use crate::{Error, Result};

/// Largest ground set a [`Subset`] can index.
pub const MAX_GROUND: u32 = 32;

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: u32) -> Subset {
        debug_assert!(n <= MAX_GROUND);
        if n == 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(e: u32) -> Subset {
        Subset(1 << e)
    }

    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Subset {
        Subset(elements.into_iter().fold(0, |acc, e| acc | (1 << e)))
    }

    /// Builds a subset of `[n]` from 1-based element labels.
    pub fn from_one_based(n: u32, elements: &[u32]) -> Result<Subset> {
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::Invalid(format!(
                    "element {e} is outside the ground set [1, {n}]"
                )));
            }
            let bit = 1 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::Invalid(format!("element {e} is repeated")));
            }
            bits |= bit;
        }
        Ok(Subset(bits))
    }

    pub fn to_one_based(self) -> Vec<u32> {
        self.iter().map(|e| e + 1).collect()
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, e: u32) -> bool {
        self.0 >> e & 1 == 1
    }

    #[inline]
    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    #[inline]
    pub fn symmetric_difference(self, other: Subset) -> Subset {
        Subset(self.0 ^ other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn with(self, e: u32) -> Subset {
        Subset(self.0 | 1 << e)
    }

    #[inline]
    pub fn without(self, e: u32) -> Subset {
        Subset(self.0 & !(1 << e))
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros();
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    /// Packs the bits of `self` that lie in `mask` into the low bits,
    /// preserving order. This is the order-preserving relabeling of a
    /// minor's ground set onto an initial segment.
    pub fn compress(self, mask: Subset) -> Subset {
        let mut out = 0u32;
        for (k, e) in mask.iter().enumerate() {
            if self.contains(e) {
                out |= 1 << k;
            }
        }
        Subset(out)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Displays 1-based labels, e.g. `{1,2,3}`.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", e + 1)?;
        }
        f.write_str("}")
    }
}

/// All `k`-subsets of `{0, .., n-1}` in increasing bitmask order.
pub fn k_subsets(n: u32, k: u32) -> Vec<Subset> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Subset::EMPTY];
    }
    let limit: u64 = 1u64 << n;
    let mut out = Vec::new();
    // Gosper's hack
    let mut v: u64 = (1u64 << k) - 1;
    while v < limit {
        out.push(Subset(v as u32));
        let c = v & v.wrapping_neg();
        let r = v + c;
        v = (((r ^ v) >> 2) / c) | r;
    }
    out
}
