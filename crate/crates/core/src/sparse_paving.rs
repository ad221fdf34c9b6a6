//! Sparse paving matroids `S_{m,d}(CH)`: rank `d` on the ground set
//! `[m+d]`, whose non-bases `CH` are exactly the circuit-hyperplanes.
//!
//! The Kazhdan-Lusztig coefficients depend on `CH` only through `|CH|`:
//!
//! ```text
//! [t^i] P(t) = skyt(m+1, i, d-2i+1) - |CH| * bar_skyt(i, d-2i+1)
//! ```
//!
//! so the free functions here take `c = |CH|` directly, and the methods on
//! [`SparsePavingMatroid`] read it off a validated family.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bounds::best_bound;
use crate::exactmath::{choose, IntPolynomial};
use crate::subset::{k_subsets, Subset, MAX_GROUND};
use crate::tableaux::{count_bar_skyt, count_skyt};
use crate::{Error, Result};

/// Default cap on `m + d` for flat enumeration.
pub const DEFAULT_GROUND_CAP: u32 = 16;

/// A validated sparse paving matroid. `ch` is kept sorted and free of
/// duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePavingMatroid {
    m: u32,
    d: u32,
    ch: Vec<Subset>,
}

/// Isomorphism type of a localization or contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorDescriptor {
    /// `U_{m,d}`: every `d`-subset of `[m+d]` is a basis.
    Uniform { m: u32, d: u32 },
    /// A sparse paving matroid with a nonempty circuit-hyperplane family,
    /// relabeled onto an initial segment preserving order.
    SparsePaving(SparsePavingMatroid),
    /// `U_{0,k}`, the free matroid on `k` elements.
    Boolean { k: u32 },
}

impl MinorDescriptor {
    fn of(matroid: SparsePavingMatroid) -> Self {
        if matroid.ch.is_empty() {
            MinorDescriptor::Uniform { m: matroid.m, d: matroid.d }
        } else {
            MinorDescriptor::SparsePaving(matroid)
        }
    }

    pub fn ground_size(&self) -> u32 {
        match self {
            MinorDescriptor::Uniform { m, d } => m + d,
            MinorDescriptor::SparsePaving(s) => s.ground_size(),
            MinorDescriptor::Boolean { k } => *k,
        }
    }

    pub fn rank(&self) -> u32 {
        match self {
            MinorDescriptor::Uniform { d, .. } => *d,
            MinorDescriptor::SparsePaving(s) => s.d,
            MinorDescriptor::Boolean { k } => *k,
        }
    }

    /// Bases on the relabeled ground set, sorted.
    pub fn bases(&self) -> Vec<Subset> {
        match self {
            MinorDescriptor::Uniform { m, d } => k_subsets(m + d, *d),
            MinorDescriptor::SparsePaving(s) => s.bases(),
            MinorDescriptor::Boolean { k } => vec![Subset::full(*k)],
        }
    }
}

impl SparsePavingMatroid {
    /// Validates `(m, d, ch)`: members are `d`-subsets of `[m+d]`, pairwise
    /// symmetric differences are at least 4, and `ch` is empty when `m = 0`
    /// or `d = 0`.
    pub fn new<I: IntoIterator<Item = Subset>>(m: u32, d: u32, ch: I) -> Result<Self> {
        let n = m + d;
        if n > MAX_GROUND {
            return Err(Error::Invalid(format!("ground set size {n} exceeds {MAX_GROUND}")));
        }
        let mut ch: Vec<Subset> = ch.into_iter().collect();
        ch.sort();
        if let Some(w) = ch.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("circuit-hyperplane {} is repeated", w[0])));
        }
        let ground = Subset::full(n);
        for &c in &ch {
            if !c.is_subset_of(ground) {
                return Err(Error::Invalid(format!("{c} is not a subset of [{n}]")));
            }
            if c.len() != d {
                return Err(Error::Invalid(format!("{c} has size {}, expected d = {d}", c.len())));
            }
        }
        if m == 0 && !ch.is_empty() {
            return Err(Error::Invalid("m = 0 forces an empty circuit-hyperplane family".into()));
        }
        if d == 0 && !ch.is_empty() {
            return Err(Error::Invalid("d = 0 forces an empty circuit-hyperplane family".into()));
        }
        for (k, &a) in ch.iter().enumerate() {
            for &b in &ch[k + 1..] {
                let distance = a.symmetric_difference(b).len();
                if distance < 4 {
                    return Err(Error::SymmetricDifference {
                        first: a.to_string(),
                        second: b.to_string(),
                        distance,
                    });
                }
            }
        }
        Ok(Self { m, d, ch })
    }

    /// Same as [`new`](Self::new) with 1-based element lists.
    pub fn from_one_based(m: u32, d: u32, ch: &[Vec<u32>]) -> Result<Self> {
        let n = m + d;
        if n > MAX_GROUND {
            return Err(Error::Invalid(format!("ground set size {n} exceeds {MAX_GROUND}")));
        }
        let sets = ch
            .iter()
            .map(|c| Subset::from_one_based(n, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, d, sets)
    }

    pub fn uniform(m: u32, d: u32) -> Result<Self> {
        Self::new(m, d, [])
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn ch(&self) -> &[Subset] {
        &self.ch
    }

    pub fn ground_size(&self) -> u32 {
        self.m + self.d
    }

    pub fn ground(&self) -> Subset {
        Subset::full(self.ground_size())
    }

    /// All `d`-subsets except the circuit-hyperplanes.
    pub fn bases(&self) -> Vec<Subset> {
        k_subsets(self.ground_size(), self.d)
            .into_iter()
            .filter(|b| self.ch.binary_search(b).is_err())
            .collect()
    }

    pub fn rank_of(&self, s: Subset) -> u32 {
        if self.ch.binary_search(&s).is_ok() {
            self.d - 1
        } else {
            s.len().min(self.d)
        }
    }

    pub fn is_flat(&self, f: Subset) -> bool {
        if !f.is_subset_of(self.ground()) {
            return false;
        }
        if f == self.ground() {
            return true;
        }
        let size = f.len();
        if size + 2 <= self.d {
            true
        } else if size + 1 == self.d {
            !self.ch.iter().any(|&c| f.is_subset_of(c))
        } else if size == self.d {
            self.ch.binary_search(&f).is_ok()
        } else {
            false
        }
    }

    /// Flats grouped by rank (index = rank): every set of size at most
    /// `d-2`, the `(d-1)`-sets inside no circuit-hyperplane, the
    /// circuit-hyperplanes themselves (rank `d-1`), and the ground set.
    pub fn flats(&self) -> Result<Vec<Vec<Subset>>> {
        self.flats_with_cap(DEFAULT_GROUND_CAP)
    }

    pub fn flats_with_cap(&self, cap: u32) -> Result<Vec<Vec<Subset>>> {
        let n = self.ground_size();
        if n > cap {
            return Err(Error::TooLarge(format!("ground set of size {n} exceeds the cap of {cap}")));
        }
        let d = self.d;
        let mut by_rank = vec![Vec::new(); d as usize + 1];
        for k in 0..d.saturating_sub(1) {
            by_rank[k as usize] = k_subsets(n, k);
        }
        if d >= 1 {
            let mut hyperplanes: Vec<Subset> = k_subsets(n, d - 1)
                .into_iter()
                .filter(|s| !self.ch.iter().any(|&c| s.is_subset_of(c)))
                .collect();
            hyperplanes.extend(&self.ch);
            hyperplanes.sort();
            by_rank[d as usize - 1] = hyperplanes;
        }
        by_rank[d as usize].push(self.ground());
        Ok(by_rank)
    }

    /// `CH(F) = { C \ F : F ⊆ C ∈ CH }`, relabeled onto `[m+d-|F|]`.
    pub fn ch_restricted_to(&self, f: Subset) -> Vec<Subset> {
        let rest = self.ground().difference(f);
        let mut out: Vec<Subset> = self
            .ch
            .iter()
            .filter(|&&c| f.is_subset_of(c))
            .map(|&c| c.difference(f).compress(rest))
            .collect();
        out.sort();
        out
    }

    fn require_flat(&self, f: Subset) -> Result<()> {
        if self.is_flat(f) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{f} is not a flat")))
        }
    }

    /// Localization `M^F` (restriction to the flat `F`).
    pub fn localize(&self, f: Subset) -> Result<MinorDescriptor> {
        self.require_flat(f)?;
        Ok(if f == self.ground() {
            MinorDescriptor::of(self.clone())
        } else if self.ch.binary_search(&f).is_ok() {
            MinorDescriptor::Uniform { m: 1, d: self.d - 1 }
        } else {
            MinorDescriptor::Boolean { k: f.len() }
        })
    }

    /// Contraction `M_F` at the flat `F`.
    pub fn contract(&self, f: Subset) -> Result<MinorDescriptor> {
        self.require_flat(f)?;
        if f.is_empty() {
            return Ok(MinorDescriptor::of(self.clone()));
        }
        if f == self.ground() {
            return Ok(MinorDescriptor::Uniform { m: 0, d: 0 });
        }
        if self.ch.binary_search(&f).is_ok() {
            return Ok(MinorDescriptor::Uniform { m: self.m - 1, d: 1 });
        }
        let ch = self.ch_restricted_to(f);
        if ch.is_empty() {
            Ok(MinorDescriptor::Uniform { m: self.m, d: self.d - f.len() })
        } else {
            let minor = SparsePavingMatroid::new(self.m, self.d - f.len(), ch)
                .map_err(|e| Error::Invariant(format!("CH(F) is not sparse paving: {e}")))?;
            Ok(MinorDescriptor::SparsePaving(minor))
        }
    }

    pub fn kl_coefficient(&self, i: u32) -> Result<BigInt> {
        kl_coefficient(self.m, self.d, self.ch.len() as u64, i)
    }

    pub fn kl_polynomial(&self) -> Result<IntPolynomial> {
        kl_polynomial(self.m, self.d, self.ch.len() as u64)
    }

    pub fn characteristic_polynomial(&self) -> Result<IntPolynomial> {
        characteristic_polynomial_unchecked(self.m, self.d, self.ch.len() as u64)
    }
}

fn check_bound(m: u32, d: u32, c: u64) -> Result<()> {
    let bound = best_bound(m, d);
    if BigInt::from(c) > bound {
        return Err(Error::BoundExceeded {
            m,
            d,
            requested: c.to_string(),
            bound: bound.to_string(),
        });
    }
    Ok(())
}

/// `[t^i] P(t)` for any sparse paving matroid with corank `m`, rank `d` and
/// `c` circuit-hyperplanes. Rejects `c` above [`best_bound`].
pub fn kl_coefficient(m: u32, d: u32, c: u64, i: u32) -> Result<BigInt> {
    check_bound(m, d, c)?;
    kl_coefficient_unchecked(m, d, c, i)
}

/// [`kl_coefficient`] without the bound check; the formula is a polynomial
/// in `c` and stays evaluable past realizable sizes.
pub fn kl_coefficient_unchecked(m: u32, d: u32, c: u64, i: u32) -> Result<BigInt> {
    if i > 0 && 2 * i > d + 1 {
        // right column height d-2i+1 would be negative; both counts vanish
        return Ok(BigInt::zero());
    }
    let b = d + 1 - 2 * i;
    Ok(count_skyt(m + 1, i, b)? - count_bar_skyt(i, b)? * c)
}

/// `P(t)` with coefficients `0 <= i < d/2` (just `1` when `d = 0`).
pub fn kl_polynomial(m: u32, d: u32, c: u64) -> Result<IntPolynomial> {
    check_bound(m, d, c)?;
    kl_polynomial_unchecked(m, d, c)
}

pub fn kl_polynomial_unchecked(m: u32, d: u32, c: u64) -> Result<IntPolynomial> {
    let coeffs = (0..=d / 2)
        .filter(|&i| i == 0 || 2 * i < d)
        .map(|i| kl_coefficient_unchecked(m, d, c, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPolynomial::from_coeffs(coeffs))
}

fn sign(k: u32) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Characteristic polynomial with `c` circuit-hyperplanes: the uniform
/// coefficients in degrees `>= 2`, and the two lowest coefficients reduced
/// by `c`. Defined as `1` for `d = 0`.
pub fn characteristic_polynomial(m: u32, d: u32, c: u64) -> Result<IntPolynomial> {
    check_bound(m, d, c)?;
    characteristic_polynomial_unchecked(m, d, c)
}

pub fn characteristic_polynomial_unchecked(m: u32, d: u32, c: u64) -> Result<IntPolynomial> {
    if d == 0 {
        return Ok(IntPolynomial::one());
    }
    let n = (m + d) as u64;
    let c = BigInt::from(c);
    let mut coeffs = vec![BigInt::zero(); d as usize + 1];
    for i in 0..=d.saturating_sub(2) {
        if i + 2 > d {
            break;
        }
        coeffs[(d - i) as usize] = sign(i) * choose(n, i as u64);
    }
    coeffs[1] = sign(d - 1) * (choose(n, (d - 1) as u64) - &c);
    coeffs[0] = sign(d) * (choose(n - 1, (d - 1) as u64) - &c);
    Ok(IntPolynomial::from_coeffs(coeffs))
}

/// `chi_{U_{m,d}}(t) = (-1)^d C(m+d-1, d-1) + sum_{i<d} (-1)^i C(m+d, i) t^(d-i)`.
pub fn uniform_characteristic_polynomial(m: u32, d: u32) -> Result<IntPolynomial> {
    if d == 0 {
        return Err(Error::Domain("uniform characteristic polynomial needs d >= 1".into()));
    }
    let n = (m + d) as u64;
    let mut coeffs = vec![BigInt::zero(); d as usize + 1];
    coeffs[0] = sign(d) * choose(n - 1, (d - 1) as u64);
    for i in 0..d {
        coeffs[(d - i) as usize] += sign(i) * choose(n, i as u64);
    }
    Ok(IntPolynomial::from_coeffs(coeffs))
}
