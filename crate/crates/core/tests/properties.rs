use std::sync::Arc;

use proptest::prelude::*;

use modcat::alcove::{fold_counting, Alcove};
use modcat::currents::{find_invertibles, tannakian_subgroups};
use modcat::localmods::build_local_category;
use modcat::modular::{residuals, ModularData};
use modcat::{RootSystem, Series, Weight};

const TYPES: &[(Series, usize)] = &[
    (Series::A, 1),
    (Series::A, 2),
    (Series::A, 3),
    (Series::B, 2),
    (Series::B, 3),
    (Series::C, 3),
    (Series::D, 4),
    (Series::G, 2),
    (Series::F, 4),
];

fn lie_type() -> impl Strategy<Value = (Series, usize)> {
    prop::sample::select(TYPES)
}

fn weight_for(rank: usize, lo: i32, hi: i32) -> impl Strategy<Value = Weight> {
    prop::collection::vec(lo..hi, rank).prop_map(|v| Weight::new(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fold_lands_in_alcove_and_is_idempotent(
        (series, rank, mu) in lie_type().prop_flat_map(|(s, n)| (Just(s), Just(n), weight_for(n, -15, 25))),
        k in 1u32..8,
    ) {
        let rs = Arc::new(RootSystem::new(series, rank).unwrap());
        let alcove = Alcove::new(rs.clone(), k).unwrap();
        let (f, steps) = fold_counting(&rs, k, &mu);
        if f.sign != 0 {
            prop_assert!(alcove.contains(&f.weight), "{} -> {}", mu, f.weight);
            // parity of the number of reflections gives the sign
            prop_assert_eq!(f.sign, if steps % 2 == 0 { 1 } else { -1 });
            let (again, n) = fold_counting(&rs, k, &f.weight);
            prop_assert_eq!(again.sign, 1);
            prop_assert_eq!(n, 0);
            prop_assert_eq!(again.weight, f.weight);
        }
    }

    #[test]
    fn weight_systems_are_weyl_invariant(
        (series, rank, lambda) in lie_type().prop_flat_map(|(s, n)| (Just(s), Just(n), weight_for(n, 0, 3))),
    ) {
        let rs = RootSystem::new(series, rank).unwrap();
        prop_assume!(rs.weyl_dimension(&lambda).is_ok_and(|d| d <= 5000));
        let ws = rs.weight_system(&lambda).unwrap();
        let total: u64 = ws.values().sum();
        prop_assert_eq!(total, rs.weyl_dimension(&lambda).unwrap());
        for (w, &m) in &ws {
            for i in 0..rank {
                prop_assert_eq!(ws.get(&rs.reflect(w, i)).copied(), Some(m));
            }
        }
        prop_assert_eq!(ws.get(&lambda).copied(), Some(1));
    }

    #[test]
    fn local_orbits_are_stable_and_dimensions_close(
        (series, rank) in prop::sample::select(&[(Series::A, 1), (Series::A, 2), (Series::A, 3), (Series::B, 2), (Series::C, 3), (Series::D, 4)][..]),
        k in 2u32..9,
    ) {
        let md = Arc::new(ModularData::new(series, rank, k).unwrap());
        prop_assume!(md.rank() <= 120);
        let group = find_invertibles(&md).unwrap();
        for h in tannakian_subgroups(&group).iter().filter(|h| !h.is_trivial()) {
            let lc = build_local_category(md.clone(), &group, h).unwrap();
            for o in &lc.orbits {
                for &x in &o.members {
                    for &g in &h.members {
                        let y = group.act(g, x);
                        prop_assert!(o.members.contains(&y));
                        if o.local {
                            prop_assert_eq!(md.twists[y], md.twists[x]);
                        }
                    }
                }
            }
            let want = lc.expected_global_dim();
            prop_assert!((lc.global_dim_r - want).abs() < 1e-6 * want);
        }
    }

    #[test]
    fn fusion_is_associative(
        (series, rank) in prop::sample::select(&[(Series::A, 2), (Series::B, 2), (Series::G, 2), (Series::C, 3)][..]),
        k in 1u32..5,
        seed in any::<[usize; 4]>(),
    ) {
        let md = ModularData::new(series, rank, k).unwrap();
        let t = md.fusion().unwrap();
        let n = md.rank();
        let (i, j, l, m) = (seed[0] % n, seed[1] % n, seed[2] % n, seed[3] % n);
        // (i⊗j)⊗l and i⊗(j⊗l), coefficient of m
        let left: u32 = (0..n).map(|x| t.get(i, j, x) * t.get(x, l, m)).sum();
        let right: u32 = (0..n).map(|x| t.get(j, l, x) * t.get(i, x, m)).sum();
        prop_assert_eq!(left, right);
        prop_assert_eq!(t.get(i, j, m), t.get(j, i, m));
        prop_assert_eq!(t.get(i, md.dual[i], 0), 1);
    }
}

#[test]
fn unitarity_and_balancing_everywhere_small() {
    for &(s, n) in TYPES {
        for k in 1..=4 {
            let md = ModularData::new(s, n, k).unwrap();
            if md.rank() > 60 {
                continue;
            }
            let r = residuals(&md).unwrap();
            assert!(r.unitarity < 1e-9, "{} {:?}", md.label(), r);
            assert!(r.balancing < 1e-8, "{} {:?}", md.label(), r);
        }
    }
}
