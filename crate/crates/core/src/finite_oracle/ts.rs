use crate::lattice_core::finite::{full_set, is_subset, members, BitSet};

use super::OracleError;

/// Largest state space accepted by the oracle.
pub const MAX_STATES: usize = 10;

/// A finite transition system `⟨Σ, τ⟩` with initial states and a safety
/// property. States are `0..size`; `succ[s]` is the successor set of `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTs {
    pub size: usize,
    pub succ: Vec<BitSet>,
    pub init: BitSet,
    pub prop: BitSet,
}

impl FiniteTs {
    pub fn new(
        size: usize,
        edges: &[(usize, usize)],
        init: BitSet,
        prop: BitSet,
    ) -> Result<Self, OracleError> {
        if size > MAX_STATES {
            return Err(OracleError::SizeBound {
                what: "states",
                size,
                bound: MAX_STATES,
            });
        }
        let full = full_set(size);
        let mut succ = vec![0; size];
        for &(s, t) in edges {
            if s >= size || t >= size {
                return Err(OracleError::StateOutOfRange { state: s.max(t), size });
            }
            succ[s] |= 1 << t;
        }
        if init & !full != 0 || prop & !full != 0 {
            return Err(OracleError::StateOutOfRange { state: size, size });
        }
        Ok(Self { size, succ, init, prop })
    }

    pub fn full(&self) -> BitSet {
        full_set(self.size)
    }

    pub fn complement(&self, x: BitSet) -> BitSet {
        !x & self.full()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|s| members(self.succ[s]).map(move |t| (s, t)))
            .collect()
    }

    /// Predecessor sets, `pred[t] = {s | (s,t) ∈ τ}`.
    pub fn pred(&self) -> Vec<BitSet> {
        let mut pred = vec![0; self.size];
        for (s, t) in self.edges() {
            pred[t] |= 1 << s;
        }
        pred
    }

    /// `post(X) = {t | ∃s ∈ X. (s,t) ∈ τ}`
    pub fn post(&self, x: BitSet) -> BitSet {
        members(x).fold(0, |acc, s| acc | self.succ[s])
    }

    /// `pre(X) = {s | ∃t ∈ X. (s,t) ∈ τ}`
    pub fn pre(&self, x: BitSet) -> BitSet {
        (0..self.size)
            .filter(|&s| self.succ[s] & x != 0)
            .fold(0, |acc, s| acc | 1 << s)
    }

    /// `p̃re(X) = {s | ∀t. (s,t) ∈ τ ⇒ t ∈ X}`
    pub fn pret(&self, x: BitSet) -> BitSet {
        (0..self.size)
            .filter(|&s| is_subset(self.succ[s], x))
            .fold(0, |acc, s| acc | 1 << s)
    }

    /// `p̃ost(X) = {t | ∀s. (s,t) ∈ τ ⇒ s ∈ X}`
    pub fn postt(&self, x: BitSet) -> BitSet {
        let pred = self.pred();
        (0..self.size)
            .filter(|&t| is_subset(pred[t], x))
            .fold(0, |acc, t| acc | 1 << t)
    }

    /// The reachable states `lfp(λX. Σ0 ∪ post(X))`, by worklist.
    pub fn reach(&self) -> BitSet {
        let mut seen = self.init;
        let mut work: Vec<usize> = members(self.init).collect();
        while let Some(s) = work.pop() {
            let fresh = self.succ[s] & !seen;
            seen |= fresh;
            work.extend(members(fresh));
        }
        seen
    }

    pub fn is_inductive(&self, x: BitSet) -> bool {
        is_subset(self.init, x) && is_subset(self.post(x), x) && is_subset(x, self.prop)
    }
}

/// `lfp` of a monotone set function by Kleene iteration from `∅`.
pub fn lfp_sets(f: impl Fn(BitSet) -> BitSet) -> BitSet {
    let mut x = 0;
    loop {
        let next = f(x);
        if next == x {
            return x;
        }
        x = next;
    }
}

/// `gfp` of a monotone set function by Kleene iteration from `top`.
pub fn gfp_sets(top: BitSet, f: impl Fn(BitSet) -> BitSet) -> BitSet {
    let mut x = top;
    loop {
        let next = f(x);
        if next == x {
            return x;
        }
        x = next;
    }
}

/// `post ⊣ p̃re` and `pre ⊣ p̃ost` on every pair of subsets.
pub fn check_adjunctions(ts: &FiniteTs) -> bool {
    let full = ts.full();
    let pret: Vec<BitSet> = (0..=full).map(|y| ts.pret(y)).collect();
    let postt: Vec<BitSet> = (0..=full).map(|y| ts.postt(y)).collect();
    (0..=full).all(|x| {
        let (post, pre) = (ts.post(x), ts.pre(x));
        (0..=full).all(|y| {
            is_subset(post, y) == is_subset(x, pret[y as usize])
                && is_subset(pre, y) == is_subset(x, postt[y as usize])
        })
    })
}

/// `lfp(λX. Σ0 ∪ post(X)) ⊆ P ⇔ Σ0 ⊆ gfp(λX. p̃re(X) ∩ P)`
pub fn check_duality(ts: &FiniteTs) -> bool {
    let forward = is_subset(ts.reach(), ts.prop);
    let backward = is_subset(ts.init, gfp_sets(ts.full(), |x| ts.pret(x) & ts.prop));
    forward == backward
}
