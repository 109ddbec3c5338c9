mod common;

use std::collections::BTreeSet;
use std::fmt::Display;

use absinv::affine_domain::AffDomain;
use absinv::const_domain::ConstDomain;
use absinv::lattice_core::{AbstractDomain, ProductDomain};
use absinv::linalg::int;
use absinv::program_model::{apply_transfer_concrete, Literal, PointSet, Program, Sort};
use absinv::synthesis::{
    abstract_post_step, ainv_forward, backward_gfp, verify_invariant, AnalysisProblem, ProgramDomain,
    SynthesisResult,
};
use absinv::Rational;
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const ROUNDS: usize = 6;
const CAP: usize = 60;

fn random_problem<D: ProgramDomain>(seed: u64, sort: Sort) -> AnalysisProblem<D>
where
    D::Elem: Display,
{
    let mut rng = common::rng(seed);
    let program = common::random_program(&mut rng, sort, 3, 5);
    let mut props: Vec<(usize, Literal)> = Vec::new();
    for q in 0..program.nodes.len() {
        if rng.gen_bool(0.3) {
            props.push((q, common::random_literal(&mut rng, program.vars)));
        }
    }
    AnalysisProblem::new(program, &props).unwrap()
}

fn sample_literal(rng: &mut ChaCha8Rng, lit: &Literal, n: usize) -> PointSet {
    let slots: Vec<Option<Rational>> = match lit {
        Literal::Top => vec![None; n],
        Literal::Tuple(v) => v.clone(),
        _ => return PointSet::new(),
    };
    (0..8)
        .map(|_| {
            slots
                .iter()
                .map(|s| s.clone().unwrap_or_else(|| int(rng.gen_range(-4..=4))))
                .collect()
        })
        .collect()
}

/// Bounded concrete simulation from sampled initial states.
fn simulate(program: &Program, rng: &mut ChaCha8Rng) -> Vec<PointSet> {
    let witnesses: Vec<Rational> = [-2, 0, 3].map(int).to_vec();
    let mut reached: Vec<PointSet> = program
        .inits
        .iter()
        .map(|lit| lit.as_ref().map_or_else(PointSet::new, |l| sample_literal(rng, l, program.vars)))
        .collect();
    for _ in 0..ROUNDS {
        let mut next = reached.clone();
        for e in &program.edges {
            let image = apply_transfer_concrete(&e.transfer, &reached[e.from], &witnesses);
            next[e.to].extend(image.into_iter().take(CAP));
        }
        for set in &mut next {
            while set.len() > CAP {
                set.pop_last();
            }
        }
        reached = next;
    }
    reached
}

fn check_forward<D: ProgramDomain>(problem: &AnalysisProblem<D>) -> Result<(), TestCaseError>
where
    D::Elem: Display,
{
    let result = ainv_forward(problem).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let product = ProductDomain::new(problem.program.nodes.len(), D::for_program(&problem.program));
    let trace = result.trace();
    prop_assert_eq!(&trace[0], &problem.init);
    for w in trace.windows(2) {
        prop_assert!(product.leq(&w[0], &w[1]) && w[0] != w[1], "trace is not strictly ascending");
        prop_assert_eq!(&w[1], &abstract_post_step(problem, &w[0]));
    }
    match &result {
        SynthesisResult::Found { invariant, .. } => {
            prop_assert!(verify_invariant(problem, invariant));
        }
        SynthesisResult::NotFound { iterate, step, .. } => {
            prop_assert_eq!(*step + 1, trace.len());
            prop_assert!(!product.leq(iterate, &problem.property));
        }
    }
    Ok(())
}

fn check_backward(problem: &AnalysisProblem<ConstDomain>) -> Result<(), TestCaseError> {
    let backward = backward_gfp(problem).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let forward = ainv_forward(problem).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let product = ProductDomain::new(problem.program.nodes.len(), problem.domain);
    for w in backward.trace().windows(2) {
        prop_assert!(product.leq(&w[1], &w[0]) && w[0] != w[1], "trace is not strictly descending");
    }
    if let Some(inv) = backward.invariant() {
        prop_assert!(verify_invariant(problem, inv));
        let least = forward.invariant();
        prop_assert!(least.is_some(), "backward found an invariant the forward search missed");
        prop_assert!(product.leq(&least.unwrap().to_vec(), &inv.to_vec()));
    }
    Ok(())
}

fn check_simulation<D: ProgramDomain>(
    problem: &AnalysisProblem<D>,
    seed: u64,
    contains: impl Fn(&D::Elem, &[Rational]) -> bool,
) -> Result<(), TestCaseError>
where
    D::Elem: Display,
{
    let top = vec![problem.domain.top(); problem.program.nodes.len()];
    let unrestricted = AnalysisProblem::<D>::with_states(problem.program.clone(), problem.init.clone(), top)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let result = ainv_forward(&unrestricted).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let inv = result.invariant().expect("top property always holds");
    let reached = simulate(&problem.program, &mut common::rng(seed ^ 0x5eed));
    for (q, points) in reached.iter().enumerate() {
        for p in points {
            prop_assert!(contains(&inv[q], p), "{:?} at node {} escapes {}", p, q, inv[q]);
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn const_forward_is_sound(seed in any::<u64>()) {
        check_forward(&random_problem::<ConstDomain>(seed, Sort::Int))?;
    }

    #[test]
    fn aff_forward_is_sound(seed in any::<u64>()) {
        check_forward(&random_problem::<AffDomain>(seed, Sort::Rat))?;
    }

    #[test]
    fn const_backward_is_sound(seed in any::<u64>()) {
        check_backward(&random_problem::<ConstDomain>(seed, Sort::Int))?;
    }

    #[test]
    fn const_invariant_covers_simulation(seed in any::<u64>()) {
        let problem = random_problem::<ConstDomain>(seed, Sort::Int);
        check_simulation(&problem, seed, |a, p| {
            let p: BTreeSet<Vec<Rational>> = [p.to_vec()].into();
            common::to_i64(&p).iter().all(|q| a.contains(q))
        })?;
    }

    #[test]
    fn aff_invariant_covers_simulation(seed in any::<u64>()) {
        let problem = random_problem::<AffDomain>(seed, Sort::Rat);
        check_simulation(&problem, seed, |a, p| a.contains(p))?;
    }
}
