//! Explicit finite lattices, monotone function tables and finite Galois
//! insertions. These back the exhaustive checkers in `finite_oracle`.

use super::{AbstractDomain, ClosureKind, GaloisInsertion, LatticeError};

/// A subset of a carrier of at most 64 elements.
pub type BitSet = u64;

/// Mask with the lowest `size` bits set.
pub fn full_set(size: usize) -> BitSet {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

pub fn is_subset(a: BitSet, b: BitSet) -> bool {
    a & !b == 0
}

/// Iterates the members of a bit set in increasing order.
pub fn members(set: BitSet) -> impl Iterator<Item = usize> {
    let mut rest = set;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// The powerset lattice of a carrier `{0, .., size-1}` ordered by inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Powerset {
    pub size: usize,
}

impl Powerset {
    pub fn new(size: usize) -> Self {
        assert!(size <= 64, "bit sets hold at most 64 elements");
        Self { size }
    }
}

impl AbstractDomain for Powerset {
    type Elem = BitSet;

    fn leq(&self, a: &BitSet, b: &BitSet) -> bool {
        is_subset(*a, *b)
    }
    fn join(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a | b
    }
    fn meet(&self, a: &BitSet, b: &BitSet) -> BitSet {
        a & b
    }
    fn bottom(&self) -> BitSet {
        0
    }
    fn top(&self) -> BitSet {
        full_set(self.size)
    }
    fn height(&self) -> Option<usize> {
        Some(self.size)
    }
}

/// A finite lattice given by an explicit order table over elements
/// `0..size`. Binary lubs and glbs are tabulated at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    order: Vec<Vec<bool>>,
    joins: Vec<Vec<usize>>,
    meets: Vec<Vec<usize>>,
    bottom: usize,
    top: usize,
    height: usize,
}

impl FiniteLattice {
    /// Validates a partial order table and tabulates lubs and glbs.
    pub fn from_leq(order: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = order.len();
        if n == 0 {
            return Err(LatticeError::InvalidLattice("empty carrier".into()));
        }
        if order.iter().any(|row| row.len() != n) {
            return Err(LatticeError::InvalidLattice("order table is not square".into()));
        }
        for i in 0..n {
            if !order[i][i] {
                return Err(LatticeError::InvalidLattice(format!("{i} ≰ {i}")));
            }
            for j in 0..n {
                if i != j && order[i][j] && order[j][i] {
                    return Err(LatticeError::InvalidLattice(format!(
                        "{i} and {j} violate antisymmetry"
                    )));
                }
                for k in 0..n {
                    if order[i][j] && order[j][k] && !order[i][k] {
                        return Err(LatticeError::InvalidLattice(format!(
                            "{i} ≤ {j} ≤ {k} but {i} ≰ {k}"
                        )));
                    }
                }
            }
        }
        let least = |cands: &[usize]| cands.iter().copied().find(|&x| cands.iter().all(|&y| order[x][y]));
        let greatest = |cands: &[usize]| cands.iter().copied().find(|&x| cands.iter().all(|&y| order[y][x]));

        let mut joins = vec![vec![0; n]; n];
        let mut meets = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let uppers: Vec<usize> = (0..n).filter(|&x| order[a][x] && order[b][x]).collect();
                let lowers: Vec<usize> = (0..n).filter(|&x| order[x][a] && order[x][b]).collect();
                joins[a][b] = least(&uppers).ok_or_else(|| {
                    LatticeError::InvalidLattice(format!("{a} and {b} have no least upper bound"))
                })?;
                meets[a][b] = greatest(&lowers).ok_or_else(|| {
                    LatticeError::InvalidLattice(format!("{a} and {b} have no greatest lower bound"))
                })?;
            }
        }
        let all: Vec<usize> = (0..n).collect();
        let bottom = least(&all).expect("finite lattice has a bottom");
        let top = greatest(&all).expect("finite lattice has a top");

        // longest strict chain ending at each element, elements sorted by
        // the size of their down-set
        let mut by_rank = all.clone();
        by_rank.sort_by_key(|&x| (0..n).filter(|&y| order[y][x]).count());
        let mut depth = vec![0usize; n];
        for &x in &by_rank {
            depth[x] = by_rank
                .iter()
                .filter(|&&y| y != x && order[y][x])
                .map(|&y| depth[y] + 1)
                .max()
                .unwrap_or(0);
        }
        let height = depth.into_iter().max().unwrap_or(0);

        Ok(Self {
            order,
            joins,
            meets,
            bottom,
            top,
            height,
        })
    }

    /// The chain `0 < 1 < ... < len-1`.
    pub fn chain(len: usize) -> Self {
        let order = (0..len).map(|i| (0..len).map(|j| i <= j).collect()).collect();
        Self::from_leq(order).expect("a chain is a lattice")
    }

    /// The powerset of an `m`-element set; element `i` is the subset with bit
    /// mask `i`.
    pub fn powerset(m: usize) -> Self {
        let size = 1usize << m;
        let order = (0..size)
            .map(|i| (0..size).map(|j| i & !j == 0).collect())
            .collect();
        Self::from_leq(order).expect("a powerset is a lattice")
    }

    /// A family of sets ordered by inclusion; fails unless it forms a lattice.
    pub fn from_sets(sets: &[BitSet]) -> Result<Self, LatticeError> {
        let order = sets
            .iter()
            .map(|&a| sets.iter().map(|&b| is_subset(a, b)).collect())
            .collect();
        Self::from_leq(order)
    }

    pub fn size(&self) -> usize {
        self.order.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    /// The sub-poset on `carrier` with the inherited order.
    pub fn restrict(&self, carrier: &[usize]) -> Result<Self, LatticeError> {
        let order = carrier
            .iter()
            .map(|&a| carrier.iter().map(|&b| self.order[a][b]).collect())
            .collect();
        Self::from_leq(order)
    }
}

impl AbstractDomain for FiniteLattice {
    type Elem = usize;

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.order[*a][*b]
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        self.joins[*a][*b]
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.meets[*a][*b]
    }
    fn bottom(&self) -> usize {
        self.bottom
    }
    fn top(&self) -> usize {
        self.top
    }
    fn height(&self) -> Option<usize> {
        Some(self.height)
    }
}

/// A function on a finite carrier given by its table of values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FnTable(pub Vec<usize>);

impl FnTable {
    pub fn new(values: Vec<usize>) -> Self {
        Self(values)
    }

    pub fn identity(size: usize) -> Self {
        Self((0..size).collect())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FnTable) -> FnTable {
        FnTable(inner.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_total_on(&self, lattice: &FiniteLattice) -> bool {
        self.0.len() == lattice.size() && self.0.iter().all(|&v| v < lattice.size())
    }

    pub fn is_monotone(&self, lattice: &FiniteLattice) -> bool {
        self.is_total_on(lattice)
            && lattice.elements().all(|x| {
                lattice
                    .elements()
                    .all(|y| !lattice.leq(&x, &y) || lattice.leq(&self.0[x], &self.0[y]))
            })
    }

    pub fn is_closure(&self, lattice: &FiniteLattice, kind: ClosureKind) -> bool {
        self.is_monotone(lattice)
            && lattice.elements().all(|x| {
                let mx = self.0[x];
                self.0[mx] == mx
                    && match kind {
                        ClosureKind::Upper => lattice.leq(&x, &mx),
                        ClosureKind::Lower => lattice.leq(&mx, &x),
                    }
            })
    }
}

/// A Galois insertion between two finite lattices given by tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGi {
    pub concrete: FiniteLattice,
    pub abstract_domain: FiniteLattice,
    pub alpha: FnTable,
    pub gamma: FnTable,
}

impl FiniteGi {
    /// Validates monotonicity, the adjunction on every pair and surjectivity
    /// of `α`.
    pub fn new(
        concrete: FiniteLattice,
        abstract_domain: FiniteLattice,
        alpha: FnTable,
        gamma: FnTable,
    ) -> Result<Self, LatticeError> {
        let bad = |m: String| Err(LatticeError::NotInsertion(m));
        if alpha.0.len() != concrete.size() || alpha.0.iter().any(|&a| a >= abstract_domain.size()) {
            return bad("α is not a total map C → A".into());
        }
        if gamma.0.len() != abstract_domain.size() || gamma.0.iter().any(|&c| c >= concrete.size()) {
            return bad("γ is not a total map A → C".into());
        }
        for c in concrete.elements() {
            for a in abstract_domain.elements() {
                if abstract_domain.leq(&alpha.apply(c), &a) != concrete.leq(&c, &gamma.apply(a)) {
                    return bad(format!("adjunction fails on ({c}, {a})"));
                }
            }
        }
        if abstract_domain.elements().any(|a| alpha.apply(gamma.apply(a)) != a) {
            return bad("α is not surjective (α∘γ ≠ id)".into());
        }
        Ok(Self {
            concrete,
            abstract_domain,
            alpha,
            gamma,
        })
    }

    /// `G_μ = (C, μ, id, μ(C))` for an upper closure `μ` on `C`. Abstract
    /// element `i` stands for the `i`-th fixpoint of `μ` in increasing index
    /// order.
    pub fn from_closure(concrete: FiniteLattice, mu: &FnTable) -> Result<Self, LatticeError> {
        if !mu.is_closure(&concrete, ClosureKind::Upper) {
            return Err(LatticeError::NotClosure(
                "table is not an upper closure on the lattice".into(),
            ));
        }
        let image: Vec<usize> = concrete.elements().filter(|&c| mu.apply(c) == c).collect();
        let abstract_domain = concrete.restrict(&image)?;
        let alpha = FnTable(
            concrete
                .elements()
                .map(|c| image.binary_search(&mu.apply(c)).expect("μ(c) is a fixpoint"))
                .collect(),
        );
        let gamma = FnTable(image);
        Self::new(concrete, abstract_domain, alpha, gamma)
    }

    /// The insertion induced by a meet-closed subset containing the top:
    /// `μ(c) = ⋀{x ∈ X | c ≤ x}`.
    pub fn from_meet_closed(concrete: FiniteLattice, subset: &[usize]) -> Result<Self, LatticeError> {
        if !subset.contains(&concrete.top()) {
            return Err(LatticeError::NotClosure("subset does not contain ⊤".into()));
        }
        for &a in subset {
            for &b in subset {
                if !subset.contains(&concrete.meet(&a, &b)) {
                    return Err(LatticeError::NotClosure(format!(
                        "subset is not closed under the meet of {a} and {b}"
                    )));
                }
            }
        }
        let mu = FnTable(
            concrete
                .elements()
                .map(|c| {
                    subset
                        .iter()
                        .filter(|&&x| concrete.leq(&c, &x))
                        .fold(concrete.top(), |acc, x| concrete.meet(&acc, x))
                })
                .collect(),
        );
        Self::from_closure(concrete, &mu)
    }

    /// The upper closure `γ ∘ α` on the concrete lattice.
    pub fn closure(&self) -> FnTable {
        self.gamma.compose(&self.alpha)
    }

    /// The best correct approximation `α ∘ f ∘ γ`.
    pub fn bca(&self, f: &FnTable) -> FnTable {
        self.alpha.compose(&f.compose(&self.gamma))
    }
}

impl GaloisInsertion for FiniteGi {
    type Concrete = usize;
    type Abstract = usize;

    fn alpha(&self, c: &usize) -> usize {
        self.alpha.apply(*c)
    }
    fn gamma(&self, a: &usize) -> usize {
        self.gamma.apply(*a)
    }
    fn concrete_leq(&self, c: &usize, d: &usize) -> bool {
        self.concrete.leq(c, d)
    }
    fn abstract_leq(&self, a: &usize, b: &usize) -> bool {
        self.abstract_domain.leq(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_core::{adjunction_holds, gi_to_closure, insertion_holds};
    use std::sync::Arc;

    #[test]
    fn rejects_non_lattices() {
        // two incomparable maximal elements
        let order = vec![
            vec![true, true, true],
            vec![false, true, false],
            vec![false, false, true],
        ];
        assert!(FiniteLattice::from_leq(order).is_err());
        assert!(FiniteLattice::from_sets(&[0b01, 0b10]).is_err());
    }

    #[test]
    fn heights() {
        assert_eq!(FiniteLattice::chain(4).height(), Some(3));
        assert_eq!(FiniteLattice::powerset(3).height(), Some(3));
        let diamond = FiniteLattice::from_sets(&[0b00, 0b01, 0b10, 0b11]).unwrap();
        assert_eq!(diamond.height(), Some(2));
        assert_eq!(diamond.join(&1, &2), 3);
        assert_eq!(diamond.meet(&1, &2), 0);
    }

    #[test]
    fn closure_to_gi_on_three_chain() {
        // μ = {1↦2, 2↦2, 3↦3} as indices {0↦1, 1↦1, 2↦2}
        let c = FiniteLattice::chain(3);
        let mu = FnTable::new(vec![1, 1, 2]);
        let gi = FiniteGi::from_closure(c, &mu).unwrap();
        assert_eq!(gi.gamma.0, vec![1, 2]);
        assert_eq!(gi.alpha.0, vec![0, 0, 1]);
        assert_eq!(gi.closure(), mu);
    }

    #[test]
    fn identity_gi_gives_identity_closure() {
        let c = FiniteLattice::powerset(2);
        let id = FnTable::identity(4);
        let gi = FiniteGi::new(c.clone(), c, id.clone(), id.clone()).unwrap();
        assert_eq!(gi.closure(), id);
        let closure = gi_to_closure(Arc::new(gi.clone()));
        assert!((0..4).all(|x| closure.apply(&x) == x));
        assert!((0..4).all(|x| closure.laws_hold_on(&[x], |a, b| gi.concrete.leq(a, b))));
    }

    #[test]
    fn non_insertion_is_rejected() {
        // α constant ⊥ on a 2-chain is not surjective onto the 2-chain
        let c = FiniteLattice::chain(2);
        let err = FiniteGi::new(c.clone(), c, FnTable::new(vec![0, 0]), FnTable::new(vec![1, 1]));
        assert!(err.is_err());
        let not_closure = FnTable::new(vec![0, 0]);
        assert!(FiniteGi::from_closure(FiniteLattice::chain(2), &not_closure).is_err());
    }

    #[test]
    fn meet_closed_subset_round_trips() {
        let c = FiniteLattice::powerset(3);
        let gi = FiniteGi::from_meet_closed(c.clone(), &[0b111, 0b011, 0b001, 0b101]).unwrap();
        for x in c.elements() {
            for a in gi.abstract_domain.elements() {
                assert!(adjunction_holds(&gi, &x, &a));
            }
        }
        assert!(gi.abstract_domain.elements().all(|a| insertion_holds(&gi, &a)));
        let again = FiniteGi::from_closure(c, &gi.closure()).unwrap();
        assert_eq!(again, gi);
    }

    #[test]
    fn members_in_order() {
        assert_eq!(members(0b10110).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(full_set(3), 0b111);
        assert_eq!(full_set(64), u64::MAX);
    }
}
