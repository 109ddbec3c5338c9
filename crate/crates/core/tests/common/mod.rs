#![allow(dead_code)]

use std::collections::BTreeSet;

use absinv::linalg::int;
use absinv::program_model::{
    Atom, Guard, GuardMode, LinExpr, Literal, ParallelAssign, Program, Rel, Rhs, Sort, TransferFunction,
};
use absinv::Rational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random affine expression over `n` variables with small integer
/// coefficients; each coefficient is zero with probability `sparsity`.
pub fn random_expr(rng: &mut ChaCha8Rng, n: usize, sparsity: f64) -> LinExpr {
    let coeffs: Vec<i64> = (0..n)
        .map(|_| if rng.gen_bool(sparsity) { 0 } else { rng.gen_range(-3..=3) })
        .collect();
    LinExpr::from_ints(&coeffs, rng.gen_range(-5..=5))
}

pub fn random_assign(rng: &mut ChaCha8Rng, n: usize, havoc: bool) -> ParallelAssign {
    let rows = (0..n)
        .map(|j| match rng.gen_range(0..6) {
            0 if havoc => Rhs::Havoc,
            0 | 1 => Rhs::Affine(LinExpr::var(n, j)),
            _ => Rhs::Affine(random_expr(rng, n, 0.5)),
        })
        .collect();
    ParallelAssign { rows }
}

pub fn random_guard(rng: &mut ChaCha8Rng, n: usize, sort: Sort) -> Guard {
    let rels: &[Rel] = match sort {
        Sort::Int => &Rel::ALL,
        Sort::Rat => &[Rel::Eq, Rel::Ne],
    };
    let count = rng.gen_range(1..=2);
    let atoms = (0..count)
        .map(|_| Atom::new(random_expr(rng, n, 0.5), *rels.choose(rng).unwrap()))
        .collect();
    let mode = if count > 1 && rng.gen_bool(0.5) { GuardMode::Disj } else { GuardMode::Conj };
    Guard { atoms, mode }
}

pub fn random_transfer(rng: &mut ChaCha8Rng, n: usize, sort: Sort) -> TransferFunction {
    match rng.gen_range(0..10) {
        0 => TransferFunction::Identity,
        1..=3 => TransferFunction::Guard(random_guard(rng, n, sort)),
        _ => TransferFunction::Assign(random_assign(rng, n, true)),
    }
}

pub fn random_literal(rng: &mut ChaCha8Rng, n: usize) -> Literal {
    match rng.gen_range(0..3) {
        0 => Literal::Top,
        _ => Literal::Tuple(
            (0..n)
                .map(|_| rng.gen_bool(0.6).then(|| int(rng.gen_range(-5..=5))))
                .collect(),
        ),
    }
}

/// A random CFG with `1..=max_vars` variables and `1..=max_nodes` nodes.
/// Node 0 always carries an initial literal.
pub fn random_program(rng: &mut ChaCha8Rng, sort: Sort, max_vars: usize, max_nodes: usize) -> Program {
    let n = rng.gen_range(1..=max_vars);
    let q = rng.gen_range(1..=max_nodes);
    let nodes = (1..=q).map(|i| format!("q{i}")).collect();
    let mut p = Program::new(n, sort, nodes);
    p.inits[0] = Some(random_literal(rng, n));
    for k in 1..q {
        if rng.gen_bool(0.15) {
            p.inits[k] = Some(random_literal(rng, n));
        }
    }
    let edges = rng.gen_range(q.saturating_sub(1)..=2 * q);
    for _ in 0..edges {
        let from = rng.gen_range(0..q);
        let to = rng.gen_range(0..q);
        let t = random_transfer(rng, n, sort);
        p.add_edge(from, t, to);
    }
    p
}

pub fn random_points_i64(rng: &mut ChaCha8Rng, n: usize, max_points: usize) -> BTreeSet<Vec<i64>> {
    let count = rng.gen_range(1..=max_points);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-10..=10)).collect())
        .collect()
}

pub fn to_rational(points: &BTreeSet<Vec<i64>>) -> BTreeSet<Vec<Rational>> {
    points.iter().map(|p| p.iter().map(|&v| int(v)).collect()).collect()
}

pub fn to_i64(points: &BTreeSet<Vec<Rational>>) -> BTreeSet<Vec<i64>> {
    points
        .iter()
        .map(|p| {
            p.iter()
                .map(|v| {
                    assert!(v.is_integer());
                    i64::try_from(v.to_integer()).expect("small coordinates")
                })
                .collect()
        })
        .collect()
}
