use nullscri_core::indexsets::{expansion_apply_euler, ode_integrate_expansion, Expansion, IndexSet, Pair, Power, Term};
use proptest::prelude::*;

fn power() -> impl Strategy<Value = Power> {
    (1i64..=2).prop_flat_map(|den| (-2 * den..5 * den).prop_map(move |num| Power::ratio(num, den)))
}

fn raw_pairs() -> impl Strategy<Value = Vec<Pair>> {
    prop::collection::vec((power(), 0u32..=2).prop_map(|(z, k)| Pair { z, k }), 1..4)
}

fn index_set(trunc: i64) -> impl Strategy<Value = IndexSet> {
    raw_pairs().prop_map(move |raw| IndexSet::closure(&raw, trunc).unwrap())
}

fn expansion() -> impl Strategy<Value = Expansion> {
    let term = (power(), 0u32..=3, -1.0f64..1.0).prop_map(|(z, k, coeff)| Term { z, k, coeff });
    prop::collection::vec(term, 1..7).prop_map(|t| Expansion::new(t, 6).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_seed: proptest::test_runner::RngSeed::Fixed(11), ..ProptestConfig::default() })]

    #[test]
    fn extended_union_is_commutative_and_associative(a in index_set(6), b in index_set(6), c in index_set(6)) {
        let ab = a.ebar_union(&b).unwrap();
        prop_assert_eq!(&ab, &b.ebar_union(&a).unwrap());
        let left = ab.ebar_union(&c).unwrap();
        let right = a.ebar_union(&b.ebar_union(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn closure_is_idempotent(raw in raw_pairs(), t in 3i64..=6) {
        let e = IndexSet::closure(&raw, t).unwrap();
        prop_assert!(e.is_index_set());
        prop_assert_eq!(&IndexSet::closure(&e.elements(), t).unwrap(), &e);
    }

    #[test]
    fn sum_commutes(a in index_set(6), b in index_set(6)) {
        prop_assert_eq!(a.sum(&b).unwrap(), b.sum(&a).unwrap());
    }

    #[test]
    fn union_minimum(a in index_set(6), b in index_set(6)) {
        let u = a.ebar_union(&b).unwrap();
        let (ma, mb) = (a.min_element().unwrap().z, b.min_element().unwrap().z);
        prop_assert_eq!(u.min_element().unwrap().z, ma.min(mb));
    }

    #[test]
    fn euler_round_trip(g in expansion(), c in power(), resonant in any::<bool>(), pick in 0usize..8, free in -1.0f64..1.0) {
        let c = if resonant { g.terms()[pick % g.terms().len()].z } else { c };
        let big = ode_integrate_expansion(&g, c, free).unwrap();
        let back = expansion_apply_euler(&big, c);
        let scale = g.terms().iter().fold(1.0f64, |m, t| m.max(t.coeff.abs()));
        prop_assert!(back.max_abs_diff(&g) <= 1e-12 * scale, "defect {}", back.max_abs_diff(&g));
    }

    #[test]
    fn integrated_index_set_is_contained(g in expansion(), c in power(), free in -1.0f64..1.0) {
        let big = ode_integrate_expansion(&g, c, free).unwrap();
        let bound = g.index_set().unwrap().ebar_union(&IndexSet::closure(&[Pair { z: c, k: 0 }], 6).unwrap()).unwrap();
        prop_assert!(big.index_set().unwrap().is_subset(&bound));
    }
}
