use crate::lattice_core::finite::{full_set, is_subset, members, BitSet};

use super::OracleError;

/// A family `L ⊆ ℘(Σ)` closed under intersections (the empty intersection
/// `Σ` included), i.e. the image of the upper closure `μ̌_L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureFamily {
    pub size: usize,
    members: Vec<BitSet>,
}

impl ClosureFamily {
    pub fn new(size: usize, sets: &[BitSet]) -> Result<Self, OracleError> {
        if size > super::MAX_STATES {
            return Err(OracleError::SizeBound {
                what: "states",
                size,
                bound: super::MAX_STATES,
            });
        }
        let full = full_set(size);
        let mut members: Vec<BitSet> = sets.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&m| m & !full != 0) {
            return Err(OracleError::FamilyNotClosed("member outside the state space".into()));
        }
        if members.binary_search(&full).is_err() {
            return Err(OracleError::FamilyNotClosed("the full state set is missing".into()));
        }
        for &a in &members {
            for &b in &members {
                if members.binary_search(&(a & b)).is_err() {
                    return Err(OracleError::FamilyNotClosed(format!(
                        "{a:#b} ∩ {b:#b} is missing"
                    )));
                }
            }
        }
        Ok(Self { size, members })
    }

    /// The smallest intersection-closed family containing `sets`.
    pub fn intersection_closure(size: usize, sets: &[BitSet]) -> Result<Self, OracleError> {
        let mut all: Vec<BitSet> = sets.to_vec();
        all.push(full_set(size));
        let mut i = 0;
        while i < all.len() {
            for j in 0..i {
                let m = all[i] & all[j];
                if !all.contains(&m) {
                    all.push(m);
                }
            }
            i += 1;
        }
        Self::new(size, &all)
    }

    pub fn powerset(size: usize) -> Self {
        let sets: Vec<BitSet> = (0..=full_set(size)).collect();
        Self::new(size, &sets).expect("the powerset is closed")
    }

    /// The down-sets of the preorder `below`, where `below[s]` holds the
    /// states `t` with `t ⊑ s`. The relation is closed reflexively and
    /// transitively first.
    pub fn down_sets(size: usize, below: &[BitSet]) -> Result<Self, OracleError> {
        let mut rel: Vec<BitSet> = (0..size).map(|s| below.get(s).copied().unwrap_or(0) | 1 << s).collect();
        loop {
            let next: Vec<BitSet> = rel
                .iter()
                .map(|&r| members(r).fold(r, |acc, t| acc | rel[t]))
                .collect();
            if next == rel {
                break;
            }
            rel = next;
        }
        let sets: Vec<BitSet> = (0..=full_set(size))
            .filter(|&x| members(x).all(|s| is_subset(rel[s], x)))
            .collect();
        Self::new(size, &sets)
    }

    pub fn members(&self) -> &[BitSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: BitSet) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn full(&self) -> BitSet {
        full_set(self.size)
    }

    /// Assumption (A2) in its union-closure form: `∅ ∈ L` and `L` is closed
    /// under binary unions.
    pub fn is_union_closed(&self) -> bool {
        self.contains(0)
            && self
                .members
                .iter()
                .all(|&a| self.members.iter().all(|&b| self.contains(a | b)))
    }

    pub fn require_union_closed(&self) -> Result<(), OracleError> {
        if self.is_union_closed() {
            Ok(())
        } else {
            Err(OracleError::NotUnionClosed)
        }
    }

    /// `μ̌_L(X) = ∩{φ ∈ L | X ⊆ φ}`
    pub fn upper(&self, x: BitSet) -> BitSet {
        self.members
            .iter()
            .filter(|&&phi| is_subset(x, phi))
            .fold(self.full(), |acc, &phi| acc & phi)
    }

    /// `μ̂_L(X) = ∪{φ ∈ L | φ ⊆ X}`
    pub fn lower(&self, x: BitSet) -> BitSet {
        self.members
            .iter()
            .filter(|&&phi| is_subset(phi, x))
            .fold(0, |acc, &phi| acc | phi)
    }

    /// `s ⊑_L s'` iff every member containing `s'` contains `s`.
    pub fn state_leq(&self, s: usize, t: usize) -> bool {
        self.members
            .iter()
            .all(|&phi| phi & (1 << t) == 0 || phi & (1 << s) != 0)
    }

    /// `δ_L(X) = {s | ∃s' ∈ X. s ⊑_L s'}`
    pub fn delta(&self, x: BitSet) -> BitSet {
        (0..self.size)
            .filter(|&s| members(x).any(|t| self.state_leq(s, t)))
            .fold(0, |acc, s| acc | 1 << s)
    }

    /// `Av_L(X) = ∪{φ ∈ L | φ ⊆ ¬X}`
    pub fn avoid(&self, x: BitSet) -> BitSet {
        self.lower(!x & self.full())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_down_sets() -> ClosureFamily {
        // s0 ⊑ s1 ⊑ s2
        ClosureFamily::down_sets(3, &[0b000, 0b001, 0b010]).unwrap()
    }

    #[test]
    fn chain_down_sets_are_prefixes() {
        let l = chain_down_sets();
        assert_eq!(l.members(), &[0b000, 0b001, 0b011, 0b111]);
        assert!(l.is_union_closed());
    }

    #[test]
    fn avoid_examples() {
        let l = chain_down_sets();
        assert_eq!(l.avoid(0), 0b111);
        assert_eq!(l.avoid(0b010), 0b001);
        let p = ClosureFamily::powerset(3);
        assert_eq!(p.avoid(0b010), 0b101);
    }

    #[test]
    fn closures() {
        let l = chain_down_sets();
        assert_eq!(l.upper(0b010), 0b011);
        assert_eq!(l.lower(0b110), 0b000);
        assert_eq!(l.lower(0b011), 0b011);
        assert_eq!(l.delta(0b010), 0b011);
        assert!(l.state_leq(0, 2));
        assert!(!l.state_leq(2, 0));
    }

    #[test]
    fn not_union_closed() {
        let l = ClosureFamily::new(2, &[0b00, 0b01, 0b10, 0b11]).unwrap();
        assert!(l.is_union_closed());
        let l = ClosureFamily::new(3, &[0b000, 0b001, 0b010, 0b111]).unwrap();
        assert!(!l.is_union_closed());
        assert_eq!(l.require_union_closed(), Err(OracleError::NotUnionClosed));
    }

    #[test]
    fn validation() {
        assert!(ClosureFamily::new(2, &[0b01]).is_err());
        assert!(ClosureFamily::new(2, &[0b01, 0b10, 0b11]).is_err());
        let l = ClosureFamily::intersection_closure(3, &[0b011, 0b110]).unwrap();
        assert_eq!(l.members(), &[0b010, 0b011, 0b110, 0b111]);
    }
}
