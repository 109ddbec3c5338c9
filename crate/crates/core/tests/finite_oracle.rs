use absinv::finite_oracle::random::{
    random_family, random_gi, random_lattice, random_monotone, random_ts, random_union_closed_family, rng_for,
};
use absinv::finite_oracle::{
    check_adjunctions, check_duality, check_lemma6, gfp_sets, greatest_invariant, inductive_members, lfp_sets,
    run_algorithm1, run_algorithm2, run_algorithm4, Choice, ClosureFamily, OracleError, MAX_STATES,
};
use absinv::lattice_core::finite::{is_subset, members};
use proptest::prelude::*;

fn order(size: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..size).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closures_are_closures(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let ts = random_ts(&mut rng, 8);
        let l = random_family(&mut rng, ts.size);
        let full = ts.full();
        for x in 0..=full {
            let up = l.upper(x);
            prop_assert!(is_subset(x, up) && l.contains(up) && l.upper(up) == up);
            if l.is_union_closed() {
                let down = l.lower(x);
                prop_assert!(is_subset(down, x) && l.contains(down) && l.lower(down) == down);
            }
        }
    }

    #[test]
    fn transformer_adjunctions(seed in any::<u64>()) {
        let ts = random_ts(&mut rng_for(seed), 8);
        prop_assert!(check_adjunctions(&ts));
        prop_assert!(check_duality(&ts));
    }

    #[test]
    fn reach_is_least_fixpoint(seed in any::<u64>()) {
        let ts = random_ts(&mut rng_for(seed), 8);
        prop_assert_eq!(ts.reach(), lfp_sets(|x| ts.init | ts.post(x)));
        prop_assert!(ts.is_inductive(ts.reach()) || !is_subset(ts.reach(), ts.prop));
        let safe = gfp_sets(ts.full(), |x| ts.pret(x) & ts.prop);
        prop_assert_eq!(is_subset(ts.reach(), ts.prop), is_subset(ts.init, safe));
    }

    #[test]
    fn algorithm2_ignores_choice_order(seed in any::<u64>(), perm in order(8)) {
        let mut rng = rng_for(seed);
        let ts = random_ts(&mut rng, 8);
        let l = random_union_closed_family(&mut rng, ts.size);
        let perm: Vec<usize> = perm.into_iter().filter(|&s| s < ts.size).collect();
        let a = run_algorithm2(&ts, &l, &Choice::MinIndex).unwrap();
        let b = run_algorithm2(&ts, &l, &Choice::Order(perm)).unwrap();
        prop_assert_eq!(a.invariant, b.invariant);
        prop_assert_eq!(run_algorithm1(&ts, &l).unwrap().invariant, a.invariant);
    }

    #[test]
    fn algorithm1_result_is_greatest(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let ts = random_ts(&mut rng, 8);
        let l = random_union_closed_family(&mut rng, ts.size);
        let run = run_algorithm1(&ts, &l).unwrap();
        let safe: Vec<u64> = inductive_members(&ts, &l)
            .into_iter()
            .filter(|&i| is_subset(i, ts.prop))
            .collect();
        let union = safe.iter().fold(0, |acc, &i| acc | i);
        prop_assert_eq!(run.invariant, greatest_invariant(&ts, &l));
        match run.invariant {
            Some(inv) => {
                prop_assert!(ts.is_inductive(inv) && is_subset(inv, ts.prop) && l.contains(inv));
                prop_assert_eq!(inv, union);
            }
            None => prop_assert!(safe.is_empty()),
        }
        for w in run.trace.windows(2) {
            prop_assert!(is_subset(w[1], w[0]), "iterates must descend");
        }
    }

    #[test]
    fn algorithm4_complement_is_invariant(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let ts = random_ts(&mut rng, 8);
        let l = random_union_closed_family(&mut rng, ts.size);
        let run = run_algorithm4(&ts, &l).unwrap();
        if let Some(inv) = run.invariant {
            prop_assert!(ts.is_inductive(inv));
            prop_assert_eq!(Some(ts.complement(inv)), run.coinvariant);
        }
    }

    #[test]
    fn lemma6_is_consistent(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let ts = random_ts(&mut rng, 8);
        let l = random_family(&mut rng, ts.size);
        let r = check_lemma6(&ts, &l);
        prop_assert!(r.consistent(), "{:?}", r);
        prop_assert_eq!(r.a2, l.is_union_closed());
    }

    #[test]
    fn bca_is_monotone_and_reductive_in_the_insertion(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let lattice = random_lattice(&mut rng, 12);
        let gi = random_gi(&mut rng, lattice);
        let f = random_monotone(&mut rng, &gi.concrete);
        prop_assert!(f.is_monotone(&gi.concrete));
        prop_assert!(gi.bca(&f).is_monotone(&gi.abstract_domain));
        for a in gi.abstract_domain.elements() {
            prop_assert_eq!(gi.alpha.apply(gi.gamma.apply(a)), a);
        }
    }
}

#[test]
fn family_rejects_non_closed_sets() {
    assert!(matches!(ClosureFamily::new(2, &[0b01, 0b10, 0b11]), Err(OracleError::FamilyNotClosed(_))));
    let l = ClosureFamily::new(2, &[0b11, 0b01]).unwrap();
    assert!(!l.is_union_closed());
    let ts = random_ts(&mut rng_for(1), 2);
    if ts.size == 2 {
        assert_eq!(run_algorithm1(&ts, &l), Err(OracleError::NotUnionClosed));
    }
}

#[test]
fn state_spaces_are_bounded() {
    for seed in 0..200 {
        let ts = random_ts(&mut rng_for(seed), MAX_STATES);
        assert!(ts.size >= 1 && ts.size <= MAX_STATES);
        assert!(members(ts.init).all(|s| s < ts.size));
    }
}
