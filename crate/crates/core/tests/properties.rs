use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use spkl_core::bounds::{best_bound, greedy_family, is_independent, known_family_bound, random_family};
use spkl_core::exec::Execution;
use spkl_core::oracle::{GeneralMatroid, KlOracle};
use spkl_core::sparse_paving::{self, SparsePavingMatroid};
use spkl_core::sweep::{self, CPolicy};
use spkl_core::tableaux::{count_bar_skyt, count_skyt, count_skyt_positive};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_families_match_oracle(n in 2u32..=8, d_off in 0u32..8, seed in any::<u64>()) {
        let d = 1 + d_off % (n - 1);
        let family = random_family(n - d, d, seed).unwrap();
        prop_assert!(is_independent(&family));
        let s = SparsePavingMatroid::new(n - d, d, family).unwrap();
        let g = GeneralMatroid::from_sparse_paving(&s).unwrap();
        prop_assert_eq!(s.kl_polynomial().unwrap(), KlOracle::new().kl_polynomial(&g).unwrap());
        prop_assert_eq!(s.characteristic_polynomial().unwrap(), g.characteristic_polynomial().unwrap());
    }

    #[test]
    fn characteristic_polynomial_vanishes_at_one(m in 0u32..20, d in 1u32..20, frac in 0.0f64..=1.0) {
        let bound: u64 = best_bound(m, d).try_into().unwrap();
        let c = (bound as f64 * frac) as u64;
        let chi = sparse_paving::characteristic_polynomial(m, d, c).unwrap();
        prop_assert!(chi.eval(&BigInt::from(1)).is_zero());
        prop_assert_eq!(chi.degree(), Some(d as usize));
    }

    #[test]
    fn coefficients_are_affine_in_c(m in 0u32..15, d in 0u32..15, i in 0u32..8, c in 0u64..50) {
        let at = |c| sparse_paving::kl_coefficient_unchecked(m, d, c, i).unwrap();
        let slope = at(0) - at(1);
        prop_assert!(!slope.is_negative());
        prop_assert_eq!(at(c), at(0) - slope * c);
    }

    #[test]
    fn positive_form_agrees_with_alternating(a in 2u32..12, i in 1u32..8, b in 2u32..12) {
        prop_assert_eq!(count_skyt(a, i, b).unwrap(), count_skyt_positive(a, i, b).unwrap());
    }

    #[test]
    fn degree_is_below_half_rank(m in 0u32..12, d in 0u32..20) {
        let c: u64 = known_family_bound(m, d).try_into().unwrap();
        let p = sparse_paving::kl_polynomial(m, d, c).unwrap();
        prop_assert_eq!(p.coeff(0), BigInt::from(1));
        if d > 0 {
            let degree = p.degree().unwrap();
            prop_assert!(degree == 0 || 2 * degree < d as usize);
        }
        prop_assert!(p.coeffs().iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn greedy_families_hit_their_target(m in 2u32..8, d in 2u32..8, seed in any::<u64>()) {
        let target = known_family_bound(m, d).min(BigInt::from(3));
        let target: u64 = target.try_into().unwrap();
        let family = greedy_family(m, d, target, seed).unwrap();
        prop_assert_eq!(family.len() as u64, target);
        prop_assert!(SparsePavingMatroid::new(m, d, family).is_ok());
    }
}

#[test]
fn bar_counts_are_nonnegative() {
    for i in 1..=10 {
        for b in 2..=20 {
            assert!(!count_bar_skyt(i, b).unwrap().is_negative());
        }
    }
}

#[test]
fn table_modes_agree() {
    for policy in [CPolicy::Zero, CPolicy::MaxBound] {
        let a = sweep::table(0..=10, 0..=10, policy, false, Execution::Parallel).unwrap();
        let b = sweep::table(0..=10, 0..=10, policy, false, Execution::Sequential).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn verification_modes_agree() {
    let mut config = sweep::VerifyConfig { max_ground: 8, samples: 5, seed: 3, execution: Execution::Parallel };
    let a = sweep::verify(&config).unwrap();
    config.execution = Execution::Sequential;
    let b = sweep::verify(&config).unwrap();
    assert_eq!(a, b);
    assert!(a.passed());
}
