//! Upper bounds on the number of circuit-hyperplanes, the Johnson graph
//! `J(n, d)` whose independent sets are exactly the circuit-hyperplane
//! families, an exact branch-and-bound solver for small `J(n, d)`, and a
//! seeded generator of valid families.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmath::choose;
use crate::subset::{k_subsets, Subset, MAX_GROUND};
use crate::{Error, Result};

/// Largest `J(n, d)` the exact solver accepts.
pub const EXACT_VERTEX_CAP: usize = 256;

/// Largest `J(n, d)` whose independent sets [`independent_sets`] will list.
pub const ENUMERATION_VERTEX_CAP: usize = 64;

pub const DEFAULT_RESTARTS: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub m: u32,
    pub d: u32,
    pub coding_bound: BigInt,
    pub johnson_bound: BigInt,
    pub best: BigInt,
    /// Independence number of `J(m+d, d)`, when it was solved.
    pub exact: Option<usize>,
    pub witness: Option<Vec<Subset>>,
}

/// `C(m+d, d) / (m+1)` as an exact rational.
pub fn coding_bound_exact(m: u32, d: u32) -> BigRational {
    BigRational::new(choose((m + d) as u64, d as u64), BigInt::from(m + 1))
}

/// `2 C(m+d, d) / (m+d+2)` as an exact rational.
pub fn johnson_bound_exact(m: u32, d: u32) -> BigRational {
    BigRational::new(choose((m + d) as u64, d as u64) * 2u32, BigInt::from(m + d + 2))
}

pub fn coding_bound(m: u32, d: u32) -> BigInt {
    coding_bound_exact(m, d).floor().to_integer()
}

pub fn johnson_bound(m: u32, d: u32) -> BigInt {
    johnson_bound_exact(m, d).floor().to_integer()
}

pub fn best_bound(m: u32, d: u32) -> BigInt {
    coding_bound(m, d).min(johnson_bound(m, d))
}

/// Whether the un-floored coding bound is strictly larger than the
/// un-floored Johnson bound.
pub fn coding_exceeds_johnson(m: u32, d: u32) -> bool {
    coding_bound_exact(m, d) > johnson_bound_exact(m, d)
}

/// The tightest upper bound on `|CH|` available here. It improves on
/// [`best_bound`] where the maximum is known exactly:
///
/// * `m = 0` or `d = 0`: no circuit-hyperplanes at all;
/// * `m = 1` or `d = 1`: any two candidates are adjacent, so at most 1;
/// * `m = 2` (resp. `d = 2`): complements (resp. members) must be disjoint
///   pairs, so at most `(d+2)/2` (resp. `(m+2)/2`);
/// * `m = d = 3`: the independence number of `J(6, 3)` is 4.
pub fn known_family_bound(m: u32, d: u32) -> BigInt {
    let known = match (m, d) {
        (0, _) | (_, 0) => Some(0),
        (1, _) | (_, 1) => Some(1),
        (2, _) => Some((d + 2) / 2),
        (_, 2) => Some((m + 2) / 2),
        (3, 3) => Some(4),
        _ => None,
    };
    let best = best_bound(m, d);
    match known {
        Some(k) => best.min(BigInt::from(k)),
        None => best,
    }
}

pub fn report(m: u32, d: u32, solve_exact: bool) -> Result<BoundReport> {
    let (exact, witness) = if solve_exact {
        let (size, family) = max_independent_set_exact(m + d, d)?;
        (Some(size), Some(family))
    } else {
        (None, None)
    };
    Ok(BoundReport {
        m,
        d,
        coding_bound: coding_bound(m, d),
        johnson_bound: johnson_bound(m, d),
        best: best_bound(m, d),
        exact,
        witness,
    })
}

/// Adjacency in the Johnson graph: symmetric difference exactly 2.
pub fn johnson_graph_adjacent(a: Subset, b: Subset) -> bool {
    a.symmetric_difference(b).len() == 2
}

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Bits([u64; 4]);

impl Bits {
    fn set(&mut self, v: usize) {
        self.0[v >> 6] |= 1 << (v & 63);
    }

    fn clear(&mut self, v: usize) {
        self.0[v >> 6] &= !(1 << (v & 63));
    }

    fn and(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|k| self.0[k] & o.0[k]))
    }

    fn and_not(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|k| self.0[k] & !o.0[k]))
    }

    fn is_empty(self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }
}

/// `J(n, d)` with vertices in increasing bitmask order.
pub struct JohnsonGraph {
    pub n: u32,
    pub d: u32,
    pub vertices: Vec<Subset>,
}

impl JohnsonGraph {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if d > n || n > MAX_GROUND {
            return Err(Error::Domain(format!("J({n}, {d}) needs d <= n <= {MAX_GROUND}")));
        }
        let size = choose(n as u64, d as u64);
        if size > BigInt::from(1u32 << 20) {
            return Err(Error::TooLarge(format!("J({n}, {d}) has {size} vertices")));
        }
        Ok(Self { n, d, vertices: k_subsets(n, d) })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degree(&self) -> usize {
        (self.d * (self.n - self.d)) as usize
    }
}

/// Exact independence number of `J(n, d)` and one maximum family.
///
/// Branch and bound over vertex bitsets; each node bounds the best
/// completion by a greedy partition of the candidates into cliques, since
/// an independent set meets every clique at most once.
pub fn max_independent_set_exact(n: u32, d: u32) -> Result<(usize, Vec<Subset>)> {
    let graph = JohnsonGraph::new(n, d)?;
    let len = graph.len();
    if len > EXACT_VERTEX_CAP {
        return Err(Error::TooLarge(format!(
            "J({n}, {d}) has {len} vertices, above the exact-solver cap of {EXACT_VERTEX_CAP}; use greedy_family instead"
        )));
    }
    // vertex order by degree (descending, stable); J(n, d) is regular so
    // this is the bitmask order
    let degree = |v: &Subset| {
        graph.vertices.iter().filter(|&&w| johnson_graph_adjacent(*v, w)).count()
    };
    let mut order: Vec<Subset> = graph.vertices.clone();
    order.sort_by_key(|v| std::cmp::Reverse(degree(v)));

    let mut adj = vec![Bits::default(); len];
    for (x, &vx) in order.iter().enumerate() {
        for (y, &vy) in order.iter().enumerate() {
            if johnson_graph_adjacent(vx, vy) {
                adj[x].set(y);
            }
        }
    }
    let mut all = Bits::default();
    (0..len).for_each(|v| all.set(v));

    let mut solver = MisSolver { adj: &adj, current: Vec::new(), best: Vec::new() };
    solver.expand(all);
    let mut family: Vec<Subset> = solver.best.iter().map(|&v| order[v]).collect();
    family.sort();
    Ok((family.len(), family))
}

struct MisSolver<'a> {
    adj: &'a [Bits],
    current: Vec<usize>,
    best: Vec<usize>,
}

impl MisSolver<'_> {
    fn expand(&mut self, mut candidates: Bits) {
        if candidates.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        }
        // greedy clique partition; cover[k] = (vertex, cliques used so far)
        let mut cover = Vec::new();
        let mut uncovered = candidates;
        let mut cliques = 0;
        while !uncovered.is_empty() {
            cliques += 1;
            let mut open = uncovered;
            while let Some(v) = open.first() {
                cover.push((v, cliques));
                uncovered.clear(v);
                open.clear(v);
                open = open.and(self.adj[v]);
            }
        }
        for &(v, bound) in cover.iter().rev() {
            if self.current.len() + bound <= self.best.len() {
                return;
            }
            self.current.push(v);
            let mut next = candidates.and_not(self.adj[v]);
            next.clear(v);
            self.expand(next);
            self.current.pop();
            candidates.clear(v);
        }
    }
}

/// Every independent set of `J(n, d)`, including the empty one, as sorted
/// families in lexicographic order of vertex index.
pub fn independent_sets(n: u32, d: u32) -> Result<Vec<Vec<Subset>>> {
    let graph = JohnsonGraph::new(n, d)?;
    let len = graph.len();
    if len > ENUMERATION_VERTEX_CAP {
        return Err(Error::TooLarge(format!(
            "J({n}, {d}) has {len} vertices, above the enumeration cap of {ENUMERATION_VERTEX_CAP}"
        )));
    }
    let vertices = &graph.vertices;
    let blocked: Vec<u64> = vertices
        .iter()
        .enumerate()
        .map(|(x, &vx)| {
            vertices
                .iter()
                .enumerate()
                .filter(|&(_, &vy)| johnson_graph_adjacent(vx, vy))
                .fold(1u64 << x, |acc, (y, _)| acc | 1 << y)
        })
        .collect();

    fn walk(
        start: usize,
        forbidden: u64,
        chosen: &mut Vec<Subset>,
        vertices: &[Subset],
        blocked: &[u64],
        out: &mut Vec<Vec<Subset>>,
    ) {
        out.push(chosen.clone());
        for v in start..vertices.len() {
            if forbidden >> v & 1 == 0 {
                chosen.push(vertices[v]);
                walk(v + 1, forbidden | blocked[v], chosen, vertices, blocked, out);
                chosen.pop();
            }
        }
    }

    let mut out = Vec::new();
    walk(0, 0, &mut Vec::new(), vertices, &blocked, &mut out);
    Ok(out)
}

/// Randomized greedy construction of a valid circuit-hyperplane family of
/// exactly `target` members, deterministic in `seed`.
///
/// Gives up with [`Error::SearchExhausted`] after `restarts` attempts; that
/// does not prove no such family exists.
pub fn greedy_family(m: u32, d: u32, target: u64, seed: u64) -> Result<Vec<Subset>> {
    greedy_family_with_restarts(m, d, target, seed, DEFAULT_RESTARTS)
}

pub fn greedy_family_with_restarts(
    m: u32,
    d: u32,
    target: u64,
    seed: u64,
    restarts: usize,
) -> Result<Vec<Subset>> {
    let n = m + d;
    if n > MAX_GROUND {
        return Err(Error::Domain(format!("ground set of size {n} exceeds {MAX_GROUND}")));
    }
    let bound = best_bound(m, d);
    if BigInt::from(target) > bound {
        return Err(Error::BoundExceeded {
            m,
            d,
            requested: target.to_string(),
            bound: bound.to_string(),
        });
    }
    if target == 0 {
        return Ok(Vec::new());
    }
    if m == 0 || d == 0 {
        return Err(Error::Invalid(format!(
            "m = {m}, d = {d} admits no circuit-hyperplanes"
        )));
    }
    let target = target as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let compatible =
        |family: &[Subset], v: Subset| family.iter().all(|&w| v.symmetric_difference(w).len() >= 4);

    let universe = choose(n as u64, d as u64).to_u64().unwrap_or(u64::MAX);
    if universe <= 1 << 16 {
        let mut vertices = k_subsets(n, d);
        for _ in 0..restarts {
            vertices.shuffle(&mut rng);
            let mut family = Vec::with_capacity(target);
            for &v in &vertices {
                if compatible(&family, v) {
                    family.push(v);
                    if family.len() == target {
                        family.sort();
                        return Ok(family);
                    }
                }
            }
        }
    } else {
        let mut ground: Vec<u32> = (0..n).collect();
        for _ in 0..restarts {
            let mut family = Vec::with_capacity(target);
            for _ in 0..(50 * target + 1000) {
                // partial Fisher-Yates picks a uniform d-subset
                for k in 0..d as usize {
                    let j = rng.random_range(k..n as usize);
                    ground.swap(k, j);
                }
                let v = Subset::from_elements(ground[..d as usize].iter().copied());
                if compatible(&family, v) {
                    family.push(v);
                    if family.len() == target {
                        family.sort();
                        return Ok(family);
                    }
                }
            }
        }
    }
    Err(Error::SearchExhausted { attempts: restarts })
}

/// A uniformly shuffled greedy maximal family, truncated to a length drawn
/// uniformly from `0..=len`. Every size it returns is realizable, which is
/// what seeded verification needs. Limited to `C(m+d, d) <= 2^16`.
pub fn random_family(m: u32, d: u32, seed: u64) -> Result<Vec<Subset>> {
    let n = m + d;
    let universe = choose(n as u64, d as u64).to_u64().unwrap_or(u64::MAX);
    if n > MAX_GROUND || universe > 1 << 16 {
        return Err(Error::TooLarge(format!("J({n}, {d}) has too many vertices to shuffle")));
    }
    if m == 0 || d == 0 {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vertices = k_subsets(n, d);
    vertices.shuffle(&mut rng);
    let mut family: Vec<Subset> = Vec::new();
    for v in vertices {
        if family.iter().all(|&w| v.symmetric_difference(w).len() >= 4) {
            family.push(v);
        }
    }
    let keep = rng.random_range(0..=family.len());
    family.truncate(keep);
    family.sort();
    Ok(family)
}

/// `true` when no two members of `family` are adjacent in `J(n, d)` and
/// all members are distinct.
pub fn is_independent(family: &[Subset]) -> bool {
    family.iter().enumerate().all(|(k, &a)| {
        family[k + 1..]
            .iter()
            .all(|&b| a != b && !johnson_graph_adjacent(a, b))
    })
}

/// The Catalan number `C(2n, n) / (n+1)`.
pub fn catalan(n: u32) -> BigInt {
    let c = choose(2 * n as u64, n as u64);
    debug_assert!((&c % (n + 1)).is_zero());
    c / (n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse_paving::SparsePavingMatroid;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn set(elements: &[u32]) -> Subset {
        Subset::from_one_based(32, elements).unwrap()
    }

    /// Exhaustive oracle for tiny graphs: try every subset of vertices.
    fn brute_force_alpha(n: u32, d: u32) -> usize {
        let vertices = k_subsets(n, d);
        assert!(vertices.len() <= 20);
        (0u32..1 << vertices.len())
            .filter_map(|mask| {
                let family: Vec<Subset> =
                    (0..vertices.len()).filter(|&k| mask >> k & 1 == 1).map(|k| vertices[k]).collect();
                is_independent(&family).then_some(family.len())
            })
            .max()
            .unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(coding_bound(3, 3), big(5));
        assert_eq!(johnson_bound(3, 3), big(5));
        assert_eq!(best_bound(3, 3), big(5));
        assert_eq!(coding_bound(1, 4), big(2));
        assert_eq!(johnson_bound(4, 4), big(14));
        assert_eq!(johnson_bound(2, 5), big(4));
        assert_eq!(coding_bound(2, 5), big(7));
        assert_eq!(best_bound(2, 5), big(4));
        assert_eq!(coding_bound(3, 5), big(14));
        assert_eq!(johnson_bound(3, 5), big(11));
        assert_eq!(best_bound(3, 5), big(11));
    }

    #[test]
    fn bounds_equal_catalan_on_diagonal() {
        for m in 1..=8 {
            assert_eq!(coding_bound(m, m), catalan(m));
            assert_eq!(johnson_bound(m, m), catalan(m));
        }
        assert_eq!(catalan(4), big(14));
    }

    #[test]
    fn comparison_flips_at_diagonal() {
        for m in 1..=10 {
            for d in 1..=10 {
                assert_eq!(coding_exceeds_johnson(m, d), d > m, "m={m} d={d}");
            }
        }
    }

    #[test]
    fn adjacency() {
        assert!(johnson_graph_adjacent(set(&[1, 2, 3]), set(&[1, 2, 4])));
        assert!(!johnson_graph_adjacent(set(&[1, 2, 3]), set(&[4, 5, 6])));
        assert!(!johnson_graph_adjacent(set(&[1, 2, 3]), set(&[1, 2, 3])));
    }

    #[test]
    fn exact_solver_small_cases() {
        let (alpha, family) = max_independent_set_exact(6, 3).unwrap();
        assert_eq!(alpha, 4);
        assert!(SparsePavingMatroid::new(3, 3, family).is_ok());
        // frozen from the exhaustive oracle
        assert_eq!(brute_force_alpha(4, 2), 2);
        assert_eq!(max_independent_set_exact(4, 2).unwrap().0, 2);
        for (n, d) in [(5, 2), (6, 3), (6, 2), (5, 3)] {
            assert_eq!(max_independent_set_exact(n, d).unwrap().0, brute_force_alpha(n, d));
        }
        for d in 1..=6 {
            assert_eq!(max_independent_set_exact(d + 1, d).unwrap().0, 1);
        }
        assert_eq!(max_independent_set_exact(7, 3).unwrap().0, 7);
        assert_eq!(max_independent_set_exact(8, 4).unwrap().0, 14);
    }

    #[test]
    fn exact_solver_cap() {
        assert!(matches!(max_independent_set_exact(11, 4), Err(Error::TooLarge(_))));
    }

    #[test]
    fn exact_never_exceeds_best_bound() {
        for n in 2..=8 {
            for d in 1..n {
                let (alpha, family) = max_independent_set_exact(n, d).unwrap();
                assert!(BigInt::from(alpha) <= best_bound(n - d, d));
                assert!(BigInt::from(alpha) <= known_family_bound(n - d, d), "n={n} d={d}");
                assert!(SparsePavingMatroid::new(n - d, d, family).is_ok());
            }
        }
    }

    #[test]
    fn independent_set_counts() {
        // frozen from an independent enumeration
        assert_eq!(independent_sets(6, 3).unwrap().len(), 271);
        assert_eq!(independent_sets(7, 3).unwrap().len(), 5596);
        assert_eq!(independent_sets(5, 2).unwrap().len(), 26);
        let all = independent_sets(6, 3).unwrap();
        assert!(all.iter().all(|f| is_independent(f)));
        assert_eq!(all.iter().map(Vec::len).max(), Some(4));
        assert!(matches!(independent_sets(8, 4), Err(Error::TooLarge(_))));
    }

    #[test]
    fn greedy_examples() {
        let family = greedy_family(3, 3, 4, 11).unwrap();
        assert_eq!(family.len(), 4);
        assert!(SparsePavingMatroid::new(3, 3, family.clone()).is_ok());
        assert_eq!(greedy_family(3, 3, 4, 11).unwrap(), family);
        assert!(greedy_family(5, 4, 0, 1).unwrap().is_empty());
        assert_eq!(greedy_family(1, 4, 1, 3).unwrap().len(), 1);
        assert!(matches!(greedy_family(3, 3, 6, 0), Err(Error::BoundExceeded { .. })));
        // large ground set goes through the sampling path
        let big_family = greedy_family(12, 12, 40, 5).unwrap();
        assert!(SparsePavingMatroid::new(12, 12, big_family).is_ok());
    }

    #[test]
    fn greedy_may_give_up() {
        // 5 is within best_bound(3, 3) but no such family exists
        assert!(matches!(
            greedy_family_with_restarts(3, 3, 5, 0, 20),
            Err(Error::SearchExhausted { attempts: 20 })
        ));
    }

    #[test]
    fn random_families_are_valid_and_seeded() {
        for seed in 0..30 {
            let family = random_family(4, 4, seed).unwrap();
            assert!(is_independent(&family));
            assert_eq!(random_family(4, 4, seed).unwrap(), family);
        }
        let sizes: std::collections::BTreeSet<usize> =
            (0..60).map(|s| random_family(3, 5, s).unwrap().len()).collect();
        assert!(sizes.len() > 2);
        assert!(random_family(0, 6, 1).unwrap().is_empty());
        assert!(matches!(random_family(10, 10, 1), Err(Error::TooLarge(_))));
    }

    #[test]
    fn known_bound_refines_best() {
        assert_eq!(known_family_bound(3, 3), big(4));
        assert_eq!(known_family_bound(2, 9), big(5));
        assert_eq!(known_family_bound(0, 5), big(0));
        assert_eq!(known_family_bound(4, 4), big(14));
        for m in 0..=10 {
            for d in 0..=10 {
                assert!(known_family_bound(m, d) <= best_bound(m, d));
            }
        }
    }

    #[test]
    fn report_fields() {
        let r = report(3, 3, true).unwrap();
        assert_eq!((r.coding_bound, r.johnson_bound, r.best, r.exact), (big(5), big(5), big(5), Some(4)));
        let r = report(2, 5, false).unwrap();
        assert_eq!((r.coding_bound, r.johnson_bound, r.best, r.exact), (big(7), big(4), big(4), None));
    }
}
