//! Brute-force matroid oracle: arbitrary matroids given by their bases,
//! the lattice of flats with its Möbius function, and Kazhdan-Lusztig
//! polynomials from the defining recurrence
//!
//! ```text
//! t^rk(M) P_M(1/t) = sum over flats F of chi_{M^F}(t) P_{M_F}(t).
//! ```
//!
//! Nothing here knows about tableaux; it is the independent check for
//! the closed formula.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::One;

use crate::exactmath::IntPolynomial;
use crate::sparse_paving::SparsePavingMatroid;
use crate::subset::{k_subsets, Subset};
use crate::{Error, Result};

/// Largest ground set for the KL recurrence.
pub const DEFAULT_KL_CAP: u32 = 12;
/// Largest ground set for rank tables and flat lattices.
pub const DEFAULT_LATTICE_CAP: u32 = 16;
/// Basis exchange is checked on construction up to this ground size.
pub const EXCHANGE_CHECK_CAP: u32 = 12;

/// A matroid on `{0, .., n-1}` stored as its sorted list of bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralMatroid {
    n: u32,
    rank: u32,
    bases: Vec<Subset>,
}

impl GeneralMatroid {
    /// Checks the bases are nonempty, equicardinal subsets of `[n]` and,
    /// for `n <= 12`, that they satisfy basis exchange.
    pub fn from_bases(n: u32, bases: Vec<Subset>) -> Result<Self> {
        if n > DEFAULT_LATTICE_CAP {
            return Err(Error::TooLarge(format!("oracle ground set {n} exceeds {DEFAULT_LATTICE_CAP}")));
        }
        let matroid = Self::from_bases_unchecked(n, bases)?;
        if n <= EXCHANGE_CHECK_CAP {
            matroid.check_exchange()?;
        }
        Ok(matroid)
    }

    fn from_bases_unchecked(n: u32, mut bases: Vec<Subset>) -> Result<Self> {
        bases.sort();
        bases.dedup();
        let Some(first) = bases.first() else {
            return Err(Error::Invalid("a matroid needs at least one basis".into()));
        };
        let rank = first.len();
        let ground = Subset::full(n);
        if let Some(b) = bases.iter().find(|b| b.len() != rank || !b.is_subset_of(ground)) {
            return Err(Error::Invalid(format!("{b} is not a {rank}-subset of [{n}]")));
        }
        Ok(Self { n, rank, bases })
    }

    fn check_exchange(&self) -> Result<()> {
        for &a in &self.bases {
            for &b in &self.bases {
                for x in a.difference(b).iter() {
                    let ok = b
                        .difference(a)
                        .iter()
                        .any(|y| self.bases.binary_search(&a.without(x).with(y)).is_ok());
                    if !ok {
                        return Err(Error::Invalid(format!("bases {a} and {b} violate exchange at {}", x + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn from_sparse_paving(matroid: &SparsePavingMatroid) -> Result<Self> {
        let n = matroid.ground_size();
        if n > DEFAULT_LATTICE_CAP {
            return Err(Error::TooLarge(format!("oracle ground set {n} exceeds {DEFAULT_LATTICE_CAP}")));
        }
        Self::from_bases_unchecked(n, matroid.bases())
    }

    pub fn uniform(m: u32, d: u32) -> Result<Self> {
        Self::from_bases_unchecked(m + d, k_subsets(m + d, d))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn ground(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn rank_of(&self, s: Subset) -> u32 {
        self.bases.iter().map(|b| b.intersection(s).len()).max().unwrap_or(0)
    }

    pub fn closure(&self, s: Subset) -> Subset {
        let r = self.rank_of(s);
        let mut closed = s;
        for e in self.ground().difference(s).iter() {
            if self.rank_of(s.with(e)) == r {
                closed = closed.with(e);
            }
        }
        closed
    }

    pub fn loops(&self) -> Subset {
        self.closure(Subset::EMPTY)
    }

    pub fn has_loops(&self) -> bool {
        !self.loops().is_empty()
    }

    pub fn is_flat(&self, s: Subset) -> bool {
        s.is_subset_of(self.ground()) && self.closure(s) == s
    }

    /// Rank of every subset of the ground set, indexed by bitmask.
    pub fn rank_table(&self) -> Result<Vec<u8>> {
        if self.n > DEFAULT_LATTICE_CAP {
            return Err(Error::TooLarge(format!("rank table over {} elements", self.n)));
        }
        let size = 1usize << self.n;
        let mut independent = vec![false; size];
        for b in &self.bases {
            independent[b.0 as usize] = true;
        }
        // a set is independent iff it is a basis or one element short of a
        // larger independent set; sweep from the top down
        for s in (0..size).rev() {
            if independent[s] {
                continue;
            }
            let complement = Subset(!(s as u32)).intersection(self.ground());
            independent[s] = complement.iter().any(|e| independent[s | 1 << e]);
        }
        let mut rank = vec![0u8; size];
        for s in 1..size {
            rank[s] = if independent[s] {
                s.count_ones() as u8
            } else {
                Subset(s as u32).iter().map(|e| rank[s & !(1 << e)]).max().unwrap_or(0)
            };
        }
        Ok(rank)
    }

    pub fn flat_lattice(&self) -> Result<FlatLattice> {
        let rank = self.rank_table()?;
        let ground = self.ground();
        let mut flats: Vec<(u32, Subset)> = (0..rank.len())
            .filter(|&s| {
                let complement = ground.difference(Subset(s as u32));
                complement.iter().all(|e| rank[s | 1 << e] > rank[s])
            })
            .map(|s| (rank[s] as u32, Subset(s as u32)))
            .collect();
        flats.sort();
        let (ranks, flats): (Vec<u32>, Vec<Subset>) = flats.into_iter().unzip();
        let mut mobius = vec![0i64; flats.len()];
        mobius[0] = 1;
        for k in 1..flats.len() {
            let mut sum = 0i64;
            for j in 0..k {
                if ranks[j] < ranks[k] && flats[j].is_subset_of(flats[k]) {
                    sum += mobius[j];
                }
            }
            mobius[k] = -sum;
        }
        Ok(FlatLattice { rank: self.rank, flats, ranks, mobius })
    }

    /// `chi_M(t) = sum_F mu(0, F) t^(r - rk F)`, and `0` when `M` has a loop.
    pub fn characteristic_polynomial(&self) -> Result<IntPolynomial> {
        if self.has_loops() {
            return Ok(IntPolynomial::zero());
        }
        Ok(self.flat_lattice()?.characteristic_polynomial())
    }

    /// `M|F`, relabeled onto `[|F|]`.
    pub fn restrict(&self, f: Subset) -> Result<GeneralMatroid> {
        self.require_flat(f)?;
        Ok(self.restrict_unchecked(f))
    }

    fn restrict_unchecked(&self, f: Subset) -> GeneralMatroid {
        let r = self.rank_of(f);
        let bases = self
            .bases
            .iter()
            .map(|b| b.intersection(f))
            .filter(|b| b.len() == r)
            .map(|b| b.compress(f))
            .collect();
        GeneralMatroid::from_bases_unchecked(f.len(), bases).expect("restriction has a basis")
    }

    /// `M/F`: with `B_F` a fixed basis of `F`, the bases are the `X ⊆ E \ F`
    /// such that `X ∪ B_F` is a basis of `M`. Relabeled onto `[n - |F|]`.
    pub fn contract(&self, f: Subset) -> Result<GeneralMatroid> {
        self.require_flat(f)?;
        Ok(self.contract_unchecked(f))
    }

    fn contract_unchecked(&self, f: Subset) -> GeneralMatroid {
        let r = self.rank_of(f);
        let basis_of_f = self
            .bases
            .iter()
            .map(|b| b.intersection(f))
            .find(|b| b.len() == r)
            .expect("some basis meets F in rk F elements");
        let rest = self.ground().difference(f);
        let bases = self
            .bases
            .iter()
            .filter(|b| basis_of_f.is_subset_of(**b))
            .map(|b| b.difference(basis_of_f))
            .filter(|x| x.is_subset_of(rest))
            .map(|x| x.compress(rest))
            .collect();
        GeneralMatroid::from_bases_unchecked(rest.len(), bases).expect("contraction has a basis")
    }

    fn require_flat(&self, f: Subset) -> Result<()> {
        if self.is_flat(f) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{f} is not a flat")))
        }
    }
}

/// Flats sorted by `(rank, bitmask)`, so index 0 is the bottom (the loops)
/// and the last index is the ground set. `mobius[k] = mu(bottom, flats[k])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    rank: u32,
    flats: Vec<Subset>,
    ranks: Vec<u32>,
    mobius: Vec<i64>,
}

impl FlatLattice {
    pub fn flats(&self) -> &[Subset] {
        &self.flats
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    pub fn mobius(&self) -> &[i64] {
        &self.mobius
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn by_rank(&self) -> Vec<Vec<Subset>> {
        let mut out = vec![Vec::new(); self.rank as usize + 1];
        for (f, &r) in self.flats.iter().zip(&self.ranks) {
            out[r as usize].push(*f);
        }
        out
    }

    /// Characteristic polynomial of the whole lattice.
    pub fn characteristic_polynomial(&self) -> IntPolynomial {
        self.interval_characteristic(self.flats.len() - 1)
    }

    /// Characteristic polynomial of the interval `[bottom, flats[k]]`,
    /// i.e. of the localization at that flat with its loops removed.
    pub fn interval_characteristic(&self, k: usize) -> IntPolynomial {
        let top = self.flats[k];
        let r = self.ranks[k] as usize;
        let mut coeffs = vec![0i64; r + 1];
        for j in 0..=k {
            if self.flats[j].is_subset_of(top) {
                coeffs[r - self.ranks[j] as usize] += self.mobius[j];
            }
        }
        IntPolynomial::from_i64s(&coeffs)
    }
}

/// KL polynomials by recursion over contractions, memoized on the
/// relabeled basis list.
pub struct KlOracle {
    cap: u32,
    cache: RwLock<HashMap<GeneralMatroid, IntPolynomial>>,
}

impl Default for KlOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl KlOracle {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_KL_CAP)
    }

    pub fn with_cap(cap: u32) -> Self {
        Self { cap, cache: RwLock::new(HashMap::new()) }
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    pub fn kl_polynomial(&self, matroid: &GeneralMatroid) -> Result<IntPolynomial> {
        if matroid.n > self.cap {
            return Err(Error::TooLarge(format!(
                "KL oracle ground set {} exceeds the cap of {}",
                matroid.n, self.cap
            )));
        }
        self.compute(matroid)
    }

    fn compute(&self, matroid: &GeneralMatroid) -> Result<IntPolynomial> {
        let r = matroid.rank as usize;
        if r == 0 {
            return Ok(IntPolynomial::one());
        }
        if let Some(p) = self.cache.read().expect("cache lock").get(matroid) {
            return Ok(p.clone());
        }
        let lattice = matroid.flat_lattice()?;
        // everything except the bottom term
        let mut rest = IntPolynomial::zero();
        for k in 1..lattice.len() {
            let minor = matroid.contract_unchecked(lattice.flats[k]);
            let p = self.compute(&minor)?;
            rest = rest + lattice.interval_characteristic(k) * p;
        }
        // t^r P(1/t) - P = rest, and P has degree < r/2, so the top half of
        // `rest` is the reversed P
        let coeffs: Vec<BigInt> = (0..r).take_while(|i| 2 * i < r).map(|i| rest.coeff(r - i)).collect();
        let p = IntPolynomial::from_coeffs(coeffs);
        if !p.coeff(0).is_one() {
            return Err(Error::Invariant(format!("KL constant term {} for {:?}", p.coeff(0), matroid)));
        }
        if p.reciprocal_shift(r)? != &p + &rest {
            return Err(Error::Invariant(format!("KL recurrence does not close for {matroid:?}")));
        }
        self.cache.write().expect("cache lock").insert(matroid.clone(), p.clone());
        Ok(p)
    }

    /// Checks a candidate `P_M` against the recurrence, with `P_M` itself
    /// used for the bottom term. Also requires `P(0) = 1` and
    /// `deg P < rk/2` when the rank is positive.
    pub fn satisfies_recurrence(&self, matroid: &GeneralMatroid, p: &IntPolynomial) -> Result<bool> {
        if matroid.n > self.cap {
            return Err(Error::TooLarge(format!(
                "KL oracle ground set {} exceeds the cap of {}",
                matroid.n, self.cap
            )));
        }
        let r = matroid.rank as usize;
        if !p.coeff(0).is_one() {
            return Ok(false);
        }
        if r == 0 {
            return Ok(*p == IntPolynomial::one());
        }
        if p.degree().is_some_and(|deg| 2 * deg >= r) {
            return Ok(false);
        }
        let lattice = matroid.flat_lattice()?;
        let mut rhs = lattice.interval_characteristic(0) * p.clone();
        for k in 1..lattice.len() {
            let minor = matroid.contract_unchecked(lattice.flats[k]);
            rhs = rhs + lattice.interval_characteristic(k) * self.compute(&minor)?;
        }
        Ok(p.reciprocal_shift(r)? == rhs)
    }
}

/// One-shot KL polynomial with a fresh cache.
pub fn kl_polynomial(matroid: &GeneralMatroid) -> Result<IntPolynomial> {
    KlOracle::new().kl_polynomial(matroid)
}
