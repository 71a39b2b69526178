mod common;

use std::sync::Arc;

use bredon::group::{Family, FiniteGroup, Subgroup};
use bredon::linalg::{hermite_normal_form, smith_normal_form_with, IntMatrix, SmithTransforms};
use bredon::module::{free_cover_with, resolve_with, BredonModule, BredonMorphism, CoverStrategy, Variance};
use bredon::orbit::OrbitCategory;
use bredon::tensor::{tensor_over_family, tor, yoneda_tensor_map};
use bredon::Budget;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::subconjugate_by_hand;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            IntMatrix::from_rows(&rows)
        })
    })
}

fn small_groups() -> Vec<Arc<FiniteGroup>> {
    vec![
        Arc::new(FiniteGroup::cyclic(4)),
        Arc::new(FiniteGroup::cyclic(6)),
        Arc::new(FiniteGroup::symmetric(3).0),
        Arc::new(FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2))),
    ]
}

/// A random family of a random small group, given by seed subgroups.
fn family() -> impl Strategy<Value = (Arc<FiniteGroup>, Vec<Subgroup>)> {
    (0..4usize, proptest::collection::vec(any::<prop::sample::Index>(), 1..4)).prop_map(|(gi, picks)| {
        let g = small_groups()[gi].clone();
        let subs = g.all_subgroups();
        let seeds = picks.iter().map(|i| subs[i.index(subs.len())].clone()).collect();
        (g, seeds)
    })
}

fn category() -> impl Strategy<Value = Arc<OrbitCategory>> {
    family().prop_map(|(g, seeds)| {
        let fam = Family::close(&g, &seeds).unwrap();
        Arc::new(OrbitCategory::build(g, fam))
    })
}

/// Cokernel of a random map between free modules, with a little torsion.
fn module(variance: Variance) -> impl Strategy<Value = BredonModule> {
    (category(), any::<u64>()).prop_map(move |(cat, seed)| random_cokernel(&cat, variance, seed))
}

fn random_cokernel(cat: &Arc<OrbitCategory>, variance: Variance, seed: u64) -> BredonModule {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let free = |rng: &mut rand_chacha::ChaCha8Rng| {
        let len = rng.gen_range(1..=2);
        BredonModule::free(cat, variance, (0..len).map(|_| rng.gen_range(0..cat.object_count())).collect())
    };
    let p = free(&mut rng);
    let q = free(&mut rng);
    let images: Vec<Vec<BigInt>> = p
        .free_basis()
        .unwrap()
        .iter()
        .map(|&o| (0..q.value(o).generators).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect())
        .collect();
    BredonMorphism::from_free(&p, &q, &images).unwrap().cokernel().0
}

fn is_unimodular(u: &IntMatrix) -> bool {
    u.determinant().abs().is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_diagonal_divisible_and_invertible(a in matrix(6, 50)) {
        let s = smith_normal_form_with(&a, SmithTransforms::ALL);
        prop_assert_eq!(s.u().mul(&a).mul(s.v()), s.d());
        prop_assert!(s.u().mul(s.u_inv()).is_identity());
        prop_assert!(s.v().mul(s.v_inv()).is_identity());
        for w in s.diagonal.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        prop_assert_eq!(s.rank, a.rank());
    }

    #[test]
    fn hermite_form_is_reduced_echelon_and_idempotent(a in matrix(6, 30)) {
        let h = hermite_normal_form(&a);
        prop_assert!(is_unimodular(&h.u));
        prop_assert_eq!(h.u.mul(&a), h.h.clone());
        for (i, &p) in h.pivots.iter().enumerate() {
            prop_assert!(h.h[(i, p)].is_positive());
            for j in 0..p {
                prop_assert!(h.h[(i, j)].is_zero());
            }
            for k in 0..i {
                prop_assert!(!h.h[(k, p)].is_negative() && h.h[(k, p)] < h.h[(i, p)]);
            }
        }
        for i in h.rank()..a.rows() {
            prop_assert!(h.h.row(i).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(hermite_normal_form(&h.h).h, h.h);
    }

    #[test]
    fn subconjugacy_is_a_preorder_matching_brute_force(gi in 0..4usize) {
        let g = &small_groups()[gi];
        let subs = g.all_subgroups();
        for a in &subs {
            prop_assert!(g.is_subconjugate(a, a).is_some());
            for b in &subs {
                let lib = g.is_subconjugate(a, b);
                prop_assert_eq!(lib.is_some(), subconjugate_by_hand(g, a, b));
                if let Some(x) = lib {
                    prop_assert!(g.conjugate(a, x).is_subgroup_of(b) || g.conjugate(a, g.inv(x)).is_subgroup_of(b));
                }
                for c in &subs {
                    if lib.is_some() && g.is_subconjugate(b, c).is_some() {
                        prop_assert!(g.is_subconjugate(a, c).is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn family_closure_is_idempotent_and_conjugation_closed((g, seeds) in family()) {
        let fam = Family::close(&g, &seeds).unwrap();
        let again = Family::close(&g, fam.members()).unwrap();
        prop_assert_eq!(fam.members(), again.members());
        for h in fam.members() {
            for x in g.elements() {
                prop_assert!(fam.contains(&g.conjugate(h, x)));
            }
        }
        for s in &seeds {
            prop_assert!(fam.contains(s));
        }
    }

    #[test]
    fn fp0_witness_is_a_smallest_cover((g, seeds) in family()) {
        let fam = Family::close(&g, &seeds).unwrap();
        let w = fam.fp0_witness(&g);
        let members = fam.members();
        let covers = |cover: &[Subgroup]| {
            members.iter().all(|l| cover.iter().any(|x| subconjugate_by_hand(&g, l, x)))
        };
        prop_assert!(covers(&w));
        prop_assert!(w.iter().all(|h| fam.contains(h)));
        for mask in 0u32..1 << members.len() {
            if (mask.count_ones() as usize) < w.len() {
                let sub: Vec<Subgroup> = (0..members.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| members[i].clone())
                    .collect();
                prop_assert!(!covers(&sub));
            }
        }
    }

    #[test]
    fn resolutions_are_exact_for_both_strategies(m in module(Variance::Right)) {
        for (strategy, length) in [(CoverStrategy::AllGenerators, 2), (CoverStrategy::Greedy, 3)] {
            // Running out of budget is an allowed outcome; a returned resolution must be exact.
            let Ok(r) = resolve_with(&m, length, strategy, Budget::new(2000)) else { continue };
            prop_assert!(r.verify_exact().is_ok());
            prop_assert!(r.augmentation().is_epi());
        }
    }

    #[test]
    fn greedy_cover_is_an_epimorphism(m in module(Variance::Left)) {
        let (_, eps) = free_cover_with(&m, CoverStrategy::Greedy);
        prop_assert!(eps.is_epi());
    }

    #[test]
    fn tor_zero_is_the_tensor_product(seed in any::<u64>(), cat in category()) {
        let n = random_cokernel(&cat, Variance::Right, seed);
        let m = random_cokernel(&cat, Variance::Left, seed.wrapping_add(1));
        let t = tor(&n, &m, 1).unwrap();
        let coend = tensor_over_family(&n, &m).unwrap();
        prop_assert_eq!(&t.degrees[0], coend.invariants());
    }

    #[test]
    fn yoneda_map_is_an_isomorphism(n in module(Variance::Right)) {
        for o in n.category().objects() {
            let (t, map) = yoneda_tensor_map(&n, o).unwrap();
            prop_assert!(bredon::linalg::map_is_isomorphism(&map, n.value(o), &t.presentation()));
        }
    }
}
