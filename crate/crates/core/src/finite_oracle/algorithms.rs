use crate::lattice_core::finite::{is_subset, members, BitSet};

use super::checks::inductive_members;
use super::family::ClosureFamily;
use super::ts::FiniteTs;
use super::OracleError;

/// Outcome of one of the co-inductive synthesis loops: the invariant when
/// one exists, plus every candidate visited, the initial `Σ` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteRun {
    pub invariant: Option<BitSet>,
    pub trace: Vec<BitSet>,
}

/// How a counterexample to inductiveness is picked: the first state of
/// `order` that is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Choice {
    MinIndex,
    Order(Vec<usize>),
}

impl Choice {
    fn pick(&self, candidates: BitSet) -> Option<usize> {
        match self {
            Choice::MinIndex => members(candidates).next(),
            Choice::Order(order) => order.iter().copied().find(|&s| candidates & (1 << s) != 0),
        }
    }
}

fn check_sizes(ts: &FiniteTs, l: &ClosureFamily) -> Result<(), OracleError> {
    if ts.size != l.size {
        return Err(OracleError::SizeMismatch {
            system: ts.size,
            family: l.size,
        });
    }
    l.require_union_closed()
}

/// `I := Σ; while Σ0 ⊆ I { if I = μ̂(p̃re(I) ∩ I ∩ P) return I; I := I ∩ μ̂(p̃re(I) ∩ I ∩ P) }`
pub fn run_algorithm1(ts: &FiniteTs, l: &ClosureFamily) -> Result<FiniteRun, OracleError> {
    check_sizes(ts, l)?;
    let mut i = ts.full();
    let mut trace = vec![i];
    while is_subset(ts.init, i) {
        let next = l.lower(ts.pret(i) & i & ts.prop);
        if next == i {
            return Ok(FiniteRun { invariant: Some(i), trace });
        }
        i &= next;
        trace.push(i);
    }
    Ok(FiniteRun { invariant: None, trace })
}

/// Counterexamples to inductiveness of `I`: `I ∖ (p̃re(I) ∩ P)`.
pub fn counterexamples(ts: &FiniteTs, i: BitSet) -> BitSet {
    i & !(ts.pret(i) & ts.prop)
}

/// Counterexample-driven weakening: remove `Av_L(s)` for a counterexample
/// `s` until the candidate is inductive or misses an initial state.
pub fn run_algorithm2(ts: &FiniteTs, l: &ClosureFamily, choice: &Choice) -> Result<FiniteRun, OracleError> {
    check_sizes(ts, l)?;
    let mut i = ts.full();
    let mut trace = vec![i];
    while !ts.is_inductive(i) {
        if !is_subset(ts.init, i) {
            return Ok(FiniteRun { invariant: None, trace });
        }
        let s = choice
            .pick(counterexamples(ts, i))
            .expect("a non-inductive candidate covering Σ0 has a counterexample");
        i &= l.avoid(1 << s);
        trace.push(i);
    }
    Ok(FiniteRun { invariant: Some(i), trace })
}

/// The intermediate variant: loop on `Σ0 ⊆ I`, stop when there is no
/// counterexample, otherwise intersect with `μ̂_L(¬{s})`.
pub fn run_algorithm3(ts: &FiniteTs, l: &ClosureFamily, choice: &Choice) -> Result<FiniteRun, OracleError> {
    check_sizes(ts, l)?;
    let mut i = ts.full();
    let mut trace = vec![i];
    while is_subset(ts.init, i) {
        let Some(s) = choice.pick(counterexamples(ts, i)) else {
            return Ok(FiniteRun { invariant: Some(i), trace });
        };
        i &= l.lower(ts.complement(1 << s));
        trace.push(i);
    }
    Ok(FiniteRun { invariant: None, trace })
}

/// Result of the co-inductive forward loop. `coinvariant` is the stable
/// iterate `G` with `¬P ⊆ G`, `pre(G) ⊆ G`, `G ∩ Σ0 = ∅`; its complement
/// is an inductive invariant for `⟨Σ0, P⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algorithm4Result {
    pub coinvariant: Option<BitSet>,
    pub invariant: Option<BitSet>,
    pub trace: Vec<BitSet>,
}

impl Algorithm4Result {
    pub fn found(&self) -> bool {
        self.coinvariant.is_some()
    }
}

/// `I := Σ; while ¬P ⊆ I { if I = μ̂(p̃ost(I) ∩ I ∩ ¬Σ0) return I; I := I ∩ μ̂(p̃ost(I) ∩ I ∩ ¬Σ0) }`
pub fn run_algorithm4(ts: &FiniteTs, l: &ClosureFamily) -> Result<Algorithm4Result, OracleError> {
    check_sizes(ts, l)?;
    let not_p = ts.complement(ts.prop);
    let not_init = ts.complement(ts.init);
    let mut i = ts.full();
    let mut trace = vec![i];
    while is_subset(not_p, i) {
        let next = l.lower(ts.postt(i) & i & not_init);
        if next == i {
            return Ok(Algorithm4Result {
                coinvariant: Some(i),
                invariant: Some(ts.complement(i)),
                trace,
            });
        }
        i &= next;
        trace.push(i);
    }
    Ok(Algorithm4Result {
        coinvariant: None,
        invariant: None,
        trace,
    })
}

/// The union of all inductive invariants in `L`, by enumeration; under
/// (A2) it is itself the greatest one.
pub fn greatest_invariant(ts: &FiniteTs, l: &ClosureFamily) -> Option<BitSet> {
    let found = inductive_members(ts, l);
    (!found.is_empty()).then(|| found.iter().fold(0, |acc, &phi| acc | phi))
}

/// The union of all `φ ∈ L` with `¬P ⊆ φ`, `pre(φ) ⊆ φ` and `φ ∩ Σ0 = ∅`.
pub fn greatest_coinvariant(ts: &FiniteTs, l: &ClosureFamily) -> Option<BitSet> {
    let not_p = ts.complement(ts.prop);
    let found: Vec<BitSet> = l
        .members()
        .iter()
        .copied()
        .filter(|&phi| is_subset(not_p, phi) && is_subset(ts.pre(phi), phi) && phi & ts.init == 0)
        .collect();
    (!found.is_empty()).then(|| found.iter().fold(0, |acc, &phi| acc | phi))
}
