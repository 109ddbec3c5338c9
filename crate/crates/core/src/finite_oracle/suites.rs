//! Named collections of randomized checks. Trial `t` of a run with base
//! seed `s` draws its instance from seed `s + t`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::lattice_core::finite::is_subset;
use crate::lattice_core::FiniteGi;

use super::algorithms::{
    greatest_coinvariant, greatest_invariant, run_algorithm1, run_algorithm2, run_algorithm3, run_algorithm4,
    Choice,
};
use super::checks::{
    check_closure_adjunction, check_corollary9, check_fixpoint_completeness_char, check_lemma1,
    check_lemma1_abstract, check_lemma6, check_safe_inv,
};
use super::random::{
    random_family, random_gi, random_lattice, random_monotone, random_order, random_ts,
    random_union_closed_family, rng_for, InstanceParams,
};
use super::ts::{check_adjunctions, check_duality, lfp_sets};
use super::OracleError;

pub const SUITES: &[&str] = &["lemma1", "completeness", "lemma6", "algorithms", "corollary9", "adjunctions", "all"];

/// Outcome of one checker over all trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: u64,
    pub failures: u64,
    pub first_failure_seed: Option<u64>,
}

type Check = fn(u64) -> bool;

fn params() -> InstanceParams {
    InstanceParams::default()
}

fn gi_instance(rng: &mut ChaCha8Rng) -> FiniteGi {
    let lattice = random_lattice(rng, params().max_lattice);
    random_gi(rng, lattice)
}

fn lemma1(seed: u64) -> bool {
    let mut rng = rng_for(seed);
    let gi = gi_instance(&mut rng);
    let f = random_monotone(&mut rng, &gi.concrete);
    gi.concrete.elements().all(|c| check_lemma1(&gi, &f, c) == Ok(true))
        && gi.abstract_domain.elements().all(|a| check_lemma1_abstract(&gi, &f, a) == Ok(true))
}

fn completeness_instance(seed: u64) -> Option<super::checks::CompletenessReport> {
    let mut rng = rng_for(seed);
    let gi = gi_instance(&mut rng);
    let f = random_monotone(&mut rng, &gi.concrete);
    check_fixpoint_completeness_char(&gi, &f).ok()
}

fn theorem4(seed: u64) -> bool {
    completeness_instance(seed).is_some_and(|r| r.theorem4a() && r.theorem4b())
}

fn lemma5(seed: u64) -> bool {
    completeness_instance(seed).is_some_and(|r| r.lemma5())
}

fn corollary6(seed: u64) -> bool {
    let mut rng = rng_for(seed);
    let gi = gi_instance(&mut rng);
    let count = rng.gen_range(1..=3);
    let family: Vec<_> = (0..count).map(|_| random_monotone(&mut rng, &gi.concrete)).collect();
    let image: Vec<usize> = gi.abstract_domain.elements().map(|a| gi.gamma.apply(a)).collect();
    let all: Vec<usize> = gi.concrete.elements().collect();
    let safety: Vec<usize> = match rng.gen_range(0..4) {
        0 => image,
        1 => all,
        2 => image.into_iter().filter(|_| rng.gen_bool(0.5)).collect(),
        _ => all.into_iter().filter(|_| rng.gen_bool(0.5)).collect(),
    };
    check_safe_inv(&gi, &family, &safety).is_ok_and(|r| r.consistent())
}

fn lemma6(seed: u64) -> bool {
    let mut rng = rng_for(seed);
    let ts = random_ts(&mut rng, params().max_states);
    let l = random_family(&mut rng, ts.size);
    check_lemma6(&ts, &l).consistent()
}

fn algorithms(seed: u64) -> bool {
    let mut rng = rng_for(seed);
    let ts = random_ts(&mut rng, params().max_states);
    let l = random_union_closed_family(&mut rng, ts.size);
    let expected = greatest_invariant(&ts, &l);
    let Ok(first) = run_algorithm1(&ts, &l) else {
        return false;
    };
    let mut choices = vec![Choice::MinIndex];
    choices.extend((0..5).map(|_| Choice::Order(random_order(&mut rng, ts.size))));
    first.invariant == expected
        && choices.iter().all(|choice| {
            run_algorithm2(&ts, &l, choice).is_ok_and(|r| r.invariant == expected)
                && run_algorithm3(&ts, &l, choice).is_ok_and(|r| r.invariant == expected)
        })
}

fn algorithm4(seed: u64) -> bool {
    let mut rng = rng_for(seed);
    let ts = random_ts(&mut rng, params().max_states);
    let l = random_union_closed_family(&mut rng, ts.size);
    let Ok(run) = run_algorithm4(&ts, &l) else {
        return false;
    };
    let greatest = greatest_coinvariant(&ts, &l);
    let sound = run.invariant.is_none_or(|inv| ts.is_inductive(inv));
    // with every subset available the verdict is the concrete one
    let powerset = super::family::ClosureFamily::powerset(ts.size);
    let concrete = run_algorithm4(&ts, &powerset).is_ok_and(|r| {
        let not_p = ts.complement(ts.prop);
        r.found() == is_subset(lfp_sets(|x| not_p | ts.pre(x)), ts.complement(ts.init))
    });
    run.coinvariant == greatest && sound && concrete
}

fn corollary9(seed: u64) -> bool {
    let mut rng = rng_for(seed);
    let ts = random_ts(&mut rng, params().max_states);
    let l = random_family(&mut rng, ts.size);
    check_corollary9(&ts, &l)
}

fn duality(seed: u64) -> bool {
    check_duality(&random_ts(&mut rng_for(seed), params().max_states))
}

fn adjunctions(seed: u64) -> bool {
    let mut rng = rng_for(seed);
    let ts = random_ts(&mut rng, params().max_states);
    let l = random_union_closed_family(&mut rng, ts.size);
    check_adjunctions(&ts) && check_closure_adjunction(&l)
}

fn checks_for(suite: &str) -> Option<Vec<(&'static str, Check)>> {
    let lemma1_checks: Vec<(&'static str, Check)> = vec![("lemma1", lemma1)];
    let completeness: Vec<(&'static str, Check)> =
        vec![("theorem4", theorem4), ("lemma5", lemma5), ("corollary6", corollary6)];
    let lemma6_checks: Vec<(&'static str, Check)> = vec![("lemma6", lemma6)];
    let algorithm_checks: Vec<(&'static str, Check)> =
        vec![("algorithm1_eq_algorithm2", algorithms), ("algorithm4", algorithm4)];
    let corollary9_checks: Vec<(&'static str, Check)> = vec![("corollary9", corollary9), ("duality", duality)];
    let adjunction_checks: Vec<(&'static str, Check)> = vec![("adjunctions", adjunctions)];
    Some(match suite {
        "lemma1" => lemma1_checks,
        "completeness" => completeness,
        "lemma6" => lemma6_checks,
        "algorithms" => algorithm_checks,
        "corollary9" => corollary9_checks,
        "adjunctions" => adjunction_checks,
        "all" => [
            lemma1_checks,
            completeness,
            lemma6_checks,
            algorithm_checks,
            corollary9_checks,
            adjunction_checks,
        ]
        .concat(),
        _ => return None,
    })
}

fn run_check(name: &str, check: Check, seed: u64, trials: u64) -> CheckReport {
    let outcomes: Vec<(u64, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = seed.wrapping_add(t);
            (s, check(s))
        })
        .collect();
    let failed: Vec<u64> = outcomes.iter().filter(|(_, ok)| !ok).map(|(s, _)| *s).collect();
    CheckReport {
        name: name.to_string(),
        trials,
        failures: failed.len() as u64,
        first_failure_seed: failed.first().copied(),
    }
}

/// Runs every checker of `suite`; reports come back in a fixed order.
pub fn run_suite(suite: &str, seed: u64, trials: u64) -> Result<Vec<CheckReport>, OracleError> {
    let checks = checks_for(suite).ok_or_else(|| OracleError::UnknownSuite(suite.to_string()))?;
    if trials == 0 {
        return Ok(Vec::new());
    }
    Ok(checks
        .into_iter()
        .map(|(name, check)| run_check(name, check, seed, trials))
        .collect())
}
