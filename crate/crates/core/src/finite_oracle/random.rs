//! Seeded generators of small oracle instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice_core::finite::BitSet;
use crate::lattice_core::{AbstractDomain, FiniteGi, FiniteLattice, FnTable};

use super::family::ClosureFamily;
use super::ts::{FiniteTs, MAX_STATES};
use super::OracleError;

/// Largest concrete lattice accepted by the generators.
pub const MAX_LATTICE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceParams {
    pub max_states: usize,
    pub max_lattice: usize,
}

impl Default for InstanceParams {
    fn default() -> Self {
        Self {
            max_states: 8,
            max_lattice: MAX_LATTICE,
        }
    }
}

impl InstanceParams {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.max_states == 0 || self.max_states > MAX_STATES {
            return Err(OracleError::SizeBound {
                what: "states",
                size: self.max_states,
                bound: MAX_STATES,
            });
        }
        if self.max_lattice < 2 || self.max_lattice > MAX_LATTICE {
            return Err(OracleError::SizeBound {
                what: "lattice elements",
                size: self.max_lattice,
                bound: MAX_LATTICE,
            });
        }
        Ok(())
    }
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_subset(rng: &mut ChaCha8Rng, size: usize, p: f64) -> BitSet {
    (0..size).filter(|_| rng.gen_bool(p)).fold(0, |acc, s| acc | 1 << s)
}

/// A transition system with `1..=max_states` states. Half of the
/// properties are supersets of the reachable states, so both verdicts
/// occur often.
pub fn random_ts(rng: &mut ChaCha8Rng, max_states: usize) -> FiniteTs {
    let size = rng.gen_range(1..=max_states);
    let density = rng.gen_range(0.1..0.45);
    let edges: Vec<(usize, usize)> = (0..size)
        .flat_map(|s| (0..size).map(move |t| (s, t)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    let init = random_subset(rng, size, 0.3);
    let mut ts = FiniteTs::new(size, &edges, init, 0).expect("generated within bounds");
    ts.prop = if rng.gen_bool(0.5) {
        ts.reach() | random_subset(rng, size, 0.5)
    } else {
        random_subset(rng, size, 0.75)
    };
    ts
}

/// Down-sets of a random preorder: closed under unions and intersections.
pub fn random_union_closed_family(rng: &mut ChaCha8Rng, size: usize) -> ClosureFamily {
    let density = rng.gen_range(0.0..0.35);
    let below: Vec<BitSet> = (0..size).map(|_| random_subset(rng, size, density)).collect();
    ClosureFamily::down_sets(size, &below).expect("down-sets are closed")
}

/// The intersection closure of a few random subsets.
pub fn random_intersection_closed_family(rng: &mut ChaCha8Rng, size: usize) -> ClosureFamily {
    let count = rng.gen_range(0..=5);
    let sets: Vec<BitSet> = (0..count).map(|_| random_subset(rng, size, 0.5)).collect();
    ClosureFamily::intersection_closure(size, &sets).expect("closure is closed")
}

/// Either kind of family, union-closed with probability 1/2.
pub fn random_family(rng: &mut ChaCha8Rng, size: usize) -> ClosureFamily {
    if rng.gen_bool(0.5) {
        random_union_closed_family(rng, size)
    } else {
        random_intersection_closed_family(rng, size)
    }
}

/// A chain, a small powerset, or an intersection-closed family of subsets
/// of a 4-element set, with at most `max` elements.
pub fn random_lattice(rng: &mut ChaCha8Rng, max: usize) -> FiniteLattice {
    loop {
        let lattice = match rng.gen_range(0..4) {
            0 => FiniteLattice::chain(rng.gen_range(2..=max.min(6))),
            1 => FiniteLattice::powerset(rng.gen_range(1..=3)),
            _ => {
                let count = rng.gen_range(1..=5);
                let sets: Vec<BitSet> = (0..count).map(|_| random_subset(rng, 4, 0.5)).collect();
                let family = ClosureFamily::intersection_closure(4, &sets).expect("closure is closed");
                FiniteLattice::from_sets(family.members()).expect("meet-closed with top")
            }
        };
        if lattice.size() <= max {
            return lattice;
        }
    }
}

/// Closes `subset ∪ {⊤}` under binary meets.
pub fn meet_closure(lattice: &FiniteLattice, subset: &[usize]) -> Vec<usize> {
    let mut all: Vec<usize> = subset.to_vec();
    all.push(lattice.top());
    let mut i = 0;
    while i < all.len() {
        for j in 0..i {
            let m = lattice.meet(&all[i], &all[j]);
            if !all.contains(&m) {
                all.push(m);
            }
        }
        i += 1;
    }
    all.sort_unstable();
    all.dedup();
    all
}

/// The insertion induced by a random meet-closed subset.
pub fn random_gi(rng: &mut ChaCha8Rng, concrete: FiniteLattice) -> FiniteGi {
    let picks: Vec<usize> = concrete.elements().filter(|_| rng.gen_bool(0.35)).collect();
    let subset = meet_closure(&concrete, &picks);
    FiniteGi::from_meet_closed(concrete, &subset).expect("meet-closed subsets induce insertions")
}

/// A random monotone map, built along a linear extension: each value is
/// drawn above the join of the values already fixed below it.
pub fn random_monotone(rng: &mut ChaCha8Rng, lattice: &FiniteLattice) -> FnTable {
    let n = lattice.size();
    let mut order: Vec<usize> = lattice.elements().collect();
    order.sort_by_key(|&x| lattice.elements().filter(|y| lattice.leq(y, &x)).count());
    let mut values = vec![usize::MAX; n];
    for x in order {
        let floor = lattice
            .elements()
            .filter(|&y| y != x && lattice.leq(&y, &x))
            .fold(lattice.bottom(), |acc, y| lattice.join(&acc, &values[y]));
        let above: Vec<usize> = lattice.elements().filter(|z| lattice.leq(&floor, z)).collect();
        values[x] = *above.choose(rng).expect("⊤ is above everything");
    }
    FnTable::new(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    TransitionSystem,
    Insertion,
    Family,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Ts(FiniteTs),
    Gi(FiniteGi),
    Family(ClosureFamily),
}

/// Deterministic from `seed`.
pub fn random_instance(seed: u64, kind: InstanceKind, params: InstanceParams) -> Result<Instance, OracleError> {
    params.validate()?;
    let mut rng = rng_for(seed);
    Ok(match kind {
        InstanceKind::TransitionSystem => Instance::Ts(random_ts(&mut rng, params.max_states)),
        InstanceKind::Insertion => {
            let lattice = random_lattice(&mut rng, params.max_lattice);
            Instance::Gi(random_gi(&mut rng, lattice))
        }
        InstanceKind::Family => {
            let size = rng.gen_range(1..=params.max_states);
            Instance::Family(random_family(&mut rng, size))
        }
    })
}

pub(crate) fn random_order(rng: &mut ChaCha8Rng, size: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(rng);
    order
}
