//! Symbolic flats and minors from `sparse_paving` against the oracle's
//! explicit ones.

use spkl_core::bounds::{independent_sets, random_family};
use spkl_core::oracle::{GeneralMatroid, KlOracle};
use spkl_core::sparse_paving::{MinorDescriptor, SparsePavingMatroid};
use spkl_core::subset::k_subsets;
use spkl_core::{IntPolynomial, Subset};

fn set(elements: &[u32]) -> Subset {
    Subset::from_one_based(16, elements).unwrap()
}

fn instances_up_to_eight() -> Vec<SparsePavingMatroid> {
    let mut out = Vec::new();
    for n in 1..=7 {
        for d in 1..n {
            for family in independent_sets(n, d).unwrap() {
                out.push(SparsePavingMatroid::new(n - d, d, family).unwrap());
            }
        }
    }
    for d in 1..8 {
        for seed in 0..20 {
            out.push(SparsePavingMatroid::new(8 - d, d, random_family(8 - d, d, seed).unwrap()).unwrap());
        }
    }
    out
}

fn same(descriptor: &MinorDescriptor, minor: &GeneralMatroid) -> bool {
    descriptor.ground_size() == minor.n() && descriptor.rank() == minor.rank() && descriptor.bases() == minor.bases()
}

#[test]
fn minors_match_oracle_on_every_flat() {
    let mut flats_checked = 0;
    for s in instances_up_to_eight() {
        let g = GeneralMatroid::from_sparse_paving(&s).unwrap();
        let flats = s.flats().unwrap();
        assert_eq!(g.flat_lattice().unwrap().by_rank(), flats, "{s:?}");
        for f in flats.into_iter().flatten() {
            let local = s.localize(f).unwrap();
            assert!(same(&local, &g.restrict(f).unwrap()), "localize {s:?} at {f}");
            let quotient = s.contract(f).unwrap();
            assert!(same(&quotient, &g.contract(f).unwrap()), "contract {s:?} at {f}");
            flats_checked += 1;
        }
    }
    assert!(flats_checked > 100_000);
}

#[test]
fn exchange_holds_for_every_small_sparse_paving_matroid() {
    for n in 2..=6 {
        for d in 1..n {
            for family in independent_sets(n, d).unwrap() {
                let s = SparsePavingMatroid::new(n - d, d, family).unwrap();
                assert!(GeneralMatroid::from_bases(n, s.bases()).is_ok(), "{s:?}");
            }
        }
    }
}

#[test]
fn from_bases_examples() {
    let u12 = GeneralMatroid::from_bases(3, vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]).unwrap();
    assert_eq!(u12, GeneralMatroid::uniform(1, 2).unwrap());
    let looped = GeneralMatroid::from_bases(4, vec![set(&[1, 2])]).unwrap();
    assert_eq!(looped.rank(), 2);
    assert_eq!(looped.loops(), set(&[3, 4]));
    assert!(GeneralMatroid::from_bases(3, vec![set(&[1, 2]), set(&[3])]).is_err());

    let s = SparsePavingMatroid::new(3, 3, [set(&[1, 2, 3]), set(&[4, 5, 6])]).unwrap();
    assert_eq!(GeneralMatroid::from_sparse_paving(&s).unwrap().bases().len(), 18);
    let s = SparsePavingMatroid::new(1, 2, [set(&[1, 2])]).unwrap();
    assert_eq!(GeneralMatroid::from_sparse_paving(&s).unwrap().bases(), &[set(&[1, 3]), set(&[2, 3])]);
}

#[test]
fn rank_and_closure_examples() {
    let u12 = GeneralMatroid::uniform(1, 2).unwrap();
    assert_eq!(u12.rank_of(u12.ground()), 2);
    assert_eq!(u12.rank_of(Subset::EMPTY), 0);
    let s = SparsePavingMatroid::new(3, 3, [set(&[1, 2, 3])]).unwrap();
    let g = GeneralMatroid::from_sparse_paving(&s).unwrap();
    assert_eq!(g.closure(g.ground()), g.ground());
    assert_eq!(g.closure(set(&[1, 2])), set(&[1, 2, 3]));
    assert_eq!(g.closure(set(&[1, 4])), set(&[1, 4]));
    let u = GeneralMatroid::uniform(3, 4).unwrap();
    for s in k_subsets(7, 3) {
        assert_eq!(u.closure(s), s);
    }
}

#[test]
fn mobius_examples() {
    let lattice = GeneralMatroid::uniform(1, 2).unwrap().flat_lattice().unwrap();
    assert_eq!(lattice.flats(), &[Subset::EMPTY, set(&[1]), set(&[2]), set(&[3]), set(&[1, 2, 3])]);
    assert_eq!(lattice.mobius(), &[1, -1, -1, -1, 2]);

    let boolean = GeneralMatroid::uniform(0, 5).unwrap().flat_lattice().unwrap();
    for (f, &mu) in boolean.flats().iter().zip(boolean.mobius()) {
        assert_eq!(mu, if f.len() % 2 == 0 { 1 } else { -1 });
    }

    let family = [set(&[1, 2, 3]), set(&[1, 4, 5]), set(&[2, 4, 6]), set(&[3, 5, 6])];
    let s = SparsePavingMatroid::new(3, 3, family).unwrap();
    let lattice = GeneralMatroid::from_sparse_paving(&s).unwrap().flat_lattice().unwrap();
    for c in family {
        let k = lattice.flats().iter().position(|&f| f == c).unwrap();
        assert_eq!(lattice.mobius()[k], 2);
    }
    assert_eq!(lattice.characteristic_polynomial(), IntPolynomial::from_i64s(&[-6, 11, -6, 1]));
}

#[test]
fn kl_examples() {
    let oracle = KlOracle::new();
    let rank_zero = GeneralMatroid::from_bases(3, vec![Subset::EMPTY]).unwrap();
    assert_eq!(oracle.kl_polynomial(&rank_zero).unwrap(), IntPolynomial::one());
    assert_eq!(oracle.kl_polynomial(&GeneralMatroid::uniform(2, 2).unwrap()).unwrap(), IntPolynomial::one());
    assert_eq!(
        oracle.kl_polynomial(&GeneralMatroid::uniform(1, 3).unwrap()).unwrap(),
        IntPolynomial::from_i64s(&[1, 2])
    );
}

#[test]
fn direct_sums_multiply() {
    // U_{1,2} ⊕ U_{1,2} on six elements: bases are unions of one basis from
    // each summand
    let left = [set(&[1, 2]), set(&[1, 3]), set(&[2, 3])];
    let right = [set(&[4, 5]), set(&[4, 6]), set(&[5, 6])];
    let bases: Vec<Subset> = left.iter().flat_map(|a| right.iter().map(move |b| a.union(*b))).collect();
    let sum = GeneralMatroid::from_bases(6, bases).unwrap();
    let oracle = KlOracle::new();
    let p = oracle.kl_polynomial(&GeneralMatroid::uniform(1, 2).unwrap()).unwrap();
    assert_eq!(oracle.kl_polynomial(&sum).unwrap(), &p * &p);

    // Boolean matroids are sums of U_{0,1}
    for k in 0..=8 {
        assert_eq!(oracle.kl_polynomial(&GeneralMatroid::uniform(0, k).unwrap()).unwrap(), IntPolynomial::one());
    }
    // U_{1,3} ⊕ U_{0,2}
    let bases: Vec<Subset> = k_subsets(4, 3).into_iter().map(|b| b.union(set(&[5, 6]))).collect();
    let sum = GeneralMatroid::from_bases(6, bases).unwrap();
    assert_eq!(oracle.kl_polynomial(&sum).unwrap(), IntPolynomial::from_i64s(&[1, 2]));
}
