//! Order-theoretic machinery shared by every abstract domain: the domain
//! contract, Q-indexed products, Kleene iteration, the inductive invariant
//! check, Galois insertions and closure operators.

use std::fmt::Debug;
use std::sync::Arc;

use thiserror::Error;

pub mod finite;

pub use finite::{BitSet, FiniteGi, FiniteLattice, FnTable, Powerset};

/// Default cap on the number of Kleene steps taken by [`lfp_iterate`] and
/// [`gfp_iterate`].
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("iteration budget of {budget} steps exceeded; the iteration may diverge")]
    BudgetExceeded { budget: usize },
    #[error("start element is not a post-fixpoint of the function (start ≰ f(start))")]
    StartNotPostFixpoint,
    #[error("start element is not a pre-fixpoint of the function (f(start) ≰ start)")]
    StartNotPreFixpoint,
    #[error("iterates are not monotone at step {step}; the function is not monotone")]
    NotMonotone { step: usize },
    #[error("invalid finite lattice: {0}")]
    InvalidLattice(String),
    #[error("not a Galois insertion: {0}")]
    NotInsertion(String),
    #[error("not a closure operator: {0}")]
    NotClosure(String),
}

/// A complete lattice of abstract values together with its operations.
///
/// The domain value carries whatever context its elements need (e.g. the
/// number of program variables), so the elements themselves stay plain data.
/// `Elem` equality must coincide with semantic equality: every operation
/// returns canonical forms.
pub trait AbstractDomain {
    type Elem: Clone + PartialEq + Debug;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;

    /// Upper bound on the length of strictly increasing chains, when the
    /// domain has finite height.
    fn height(&self) -> Option<usize>;

    fn is_finite_height(&self) -> bool {
        self.height().is_some()
    }

    fn canonicalize(&self, a: Self::Elem) -> Self::Elem {
        a
    }

    fn join_all<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.bottom(), |acc, x| self.join(&acc, x))
    }

    fn meet_all<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.top(), |acc, x| self.meet(&acc, x))
    }
}

/// The Q-indexed product of a component domain: elements are vectors with one
/// component per control node, and every operation is componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductDomain<D> {
    pub nodes: usize,
    pub component: D,
}

impl<D: AbstractDomain> ProductDomain<D> {
    pub fn new(nodes: usize, component: D) -> Self {
        Self { nodes, component }
    }
}

impl<D: AbstractDomain> AbstractDomain for ProductDomain<D> {
    type Elem = Vec<D::Elem>;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a.iter().zip(b).all(|(x, y)| self.component.leq(x, y))
    }

    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.component.join(x, y))
            .collect()
    }

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter()
            .zip(b)
            .map(|(x, y)| self.component.meet(x, y))
            .collect()
    }

    fn bottom(&self) -> Self::Elem {
        vec![self.component.bottom(); self.nodes]
    }

    fn top(&self) -> Self::Elem {
        vec![self.component.top(); self.nodes]
    }

    fn height(&self) -> Option<usize> {
        self.component.height().map(|h| h * self.nodes)
    }

    fn canonicalize(&self, a: Self::Elem) -> Self::Elem {
        a.into_iter()
            .map(|x| self.component.canonicalize(x))
            .collect()
    }
}

/// Outcome of a Kleene iteration: the fixpoint, the number of strict steps
/// taken and every iterate visited (the start element first).
#[derive(Debug, Clone, PartialEq)]
pub struct Iterates<E> {
    pub value: E,
    pub steps: usize,
    pub trace: Vec<E>,
}

/// Least fixpoint of `f` above `start` by Kleene iteration, with the default
/// budget.
pub fn lfp_iterate<D, F>(
    domain: &D,
    f: F,
    start: D::Elem,
) -> Result<Iterates<D::Elem>, LatticeError>
where
    D: AbstractDomain,
    F: Fn(&D::Elem) -> D::Elem,
{
    lfp_iterate_with_budget(domain, f, start, DEFAULT_BUDGET)
}

pub fn lfp_iterate_with_budget<D, F>(
    domain: &D,
    f: F,
    start: D::Elem,
    budget: usize,
) -> Result<Iterates<D::Elem>, LatticeError>
where
    D: AbstractDomain,
    F: Fn(&D::Elem) -> D::Elem,
{
    let mut current = start;
    let mut trace = vec![current.clone()];
    let mut steps = 0;
    loop {
        let next = f(&current);
        if !domain.leq(&current, &next) {
            return Err(if steps == 0 {
                LatticeError::StartNotPostFixpoint
            } else {
                LatticeError::NotMonotone { step: steps }
            });
        }
        if domain.leq(&next, &current) {
            return Ok(Iterates {
                value: current,
                steps,
                trace,
            });
        }
        steps += 1;
        if steps > budget {
            return Err(LatticeError::BudgetExceeded { budget });
        }
        trace.push(next.clone());
        current = next;
    }
}

/// Greatest fixpoint of `f` below `start` by dual Kleene iteration, with the
/// default budget.
pub fn gfp_iterate<D, F>(
    domain: &D,
    f: F,
    start: D::Elem,
) -> Result<Iterates<D::Elem>, LatticeError>
where
    D: AbstractDomain,
    F: Fn(&D::Elem) -> D::Elem,
{
    gfp_iterate_with_budget(domain, f, start, DEFAULT_BUDGET)
}

pub fn gfp_iterate_with_budget<D, F>(
    domain: &D,
    f: F,
    start: D::Elem,
    budget: usize,
) -> Result<Iterates<D::Elem>, LatticeError>
where
    D: AbstractDomain,
    F: Fn(&D::Elem) -> D::Elem,
{
    let mut current = start;
    let mut trace = vec![current.clone()];
    let mut steps = 0;
    loop {
        let next = f(&current);
        if !domain.leq(&next, &current) {
            return Err(if steps == 0 {
                LatticeError::StartNotPreFixpoint
            } else {
                LatticeError::NotMonotone { step: steps }
            });
        }
        if domain.leq(&current, &next) {
            return Ok(Iterates {
                value: current,
                steps,
                trace,
            });
        }
        steps += 1;
        if steps > budget {
            return Err(LatticeError::BudgetExceeded { budget });
        }
        trace.push(next.clone());
        current = next;
    }
}

/// `c ≤ i ∧ f(i) ≤ i ∧ i ≤ c'`: `i` is an inductive invariant of `f` for the
/// pair `(c, c')`.
pub fn check_inductive_invariant<D, F>(
    domain: &D,
    f: F,
    c: &D::Elem,
    c_prime: &D::Elem,
    i: &D::Elem,
) -> bool
where
    D: AbstractDomain,
    F: Fn(&D::Elem) -> D::Elem,
{
    domain.leq(c, i) && domain.leq(&f(i), i) && domain.leq(i, c_prime)
}

/// A Galois insertion between a concrete and an abstract domain.
///
/// Implementations must satisfy `α(c) ≤ a ⇔ c ≤ γ(a)` and `α(γ(a)) = a`.
pub trait GaloisInsertion {
    type Concrete: Clone + Debug;
    type Abstract: Clone + PartialEq + Debug;

    fn alpha(&self, c: &Self::Concrete) -> Self::Abstract;
    fn gamma(&self, a: &Self::Abstract) -> Self::Concrete;
    fn concrete_leq(&self, c: &Self::Concrete, d: &Self::Concrete) -> bool;
    fn abstract_leq(&self, a: &Self::Abstract, b: &Self::Abstract) -> bool;

    /// Extensional equality on concrete elements.
    fn concrete_eq(&self, c: &Self::Concrete, d: &Self::Concrete) -> bool {
        self.concrete_leq(c, d) && self.concrete_leq(d, c)
    }
}

/// The adjunction law `α(c) ≤ a ⇔ c ≤ γ(a)` on one pair.
pub fn adjunction_holds<G: GaloisInsertion>(gi: &G, c: &G::Concrete, a: &G::Abstract) -> bool {
    gi.abstract_leq(&gi.alpha(c), a) == gi.concrete_leq(c, &gi.gamma(a))
}

/// `α(γ(a)) = a`.
pub fn insertion_holds<G: GaloisInsertion>(gi: &G, a: &G::Abstract) -> bool {
    gi.alpha(&gi.gamma(a)) == *a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    Upper,
    Lower,
}

type ClosureFn<C> = Arc<dyn Fn(&C) -> C + Send + Sync>;

/// A closure operator on a concrete domain: monotone, idempotent, and
/// extensive (upper) or reductive (lower).
#[derive(Clone)]
pub struct ClosureOperator<C> {
    pub kind: ClosureKind,
    f: ClosureFn<C>,
}

impl<C> ClosureOperator<C> {
    pub fn new(kind: ClosureKind, f: impl Fn(&C) -> C + Send + Sync + 'static) -> Self {
        Self {
            kind,
            f: Arc::new(f),
        }
    }

    pub fn apply(&self, c: &C) -> C {
        (self.f)(c)
    }

    /// Checks monotonicity, idempotence and extensiveness (or reductiveness)
    /// on every sample and pair of samples.
    pub fn laws_hold_on(&self, samples: &[C], leq: impl Fn(&C, &C) -> bool) -> bool {
        let eq = |a: &C, b: &C| leq(a, b) && leq(b, a);
        samples.iter().all(|x| {
            let mx = self.apply(x);
            let bounded = match self.kind {
                ClosureKind::Upper => leq(x, &mx),
                ClosureKind::Lower => leq(&mx, x),
            };
            bounded
                && eq(&self.apply(&mx), &mx)
                && samples
                    .iter()
                    .all(|y| !leq(x, y) || leq(&mx, &self.apply(y)))
        })
    }
}

impl<C> Debug for ClosureOperator<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClosureOperator")
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

/// The upper closure `γ ∘ α` induced by a Galois insertion.
pub fn gi_to_closure<G>(gi: Arc<G>) -> ClosureOperator<G::Concrete>
where
    G: GaloisInsertion + Send + Sync + 'static,
{
    ClosureOperator::new(ClosureKind::Upper, move |c| gi.gamma(&gi.alpha(c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain4_f() -> FnTable {
        // 0..3 stand for the chain 1 < 2 < 3 < 4
        FnTable::new(vec![0, 1, 3, 3])
    }

    #[test]
    fn lfp_of_identity_from_bottom_is_bottom() {
        let c = FiniteLattice::chain(4);
        let r = lfp_iterate(&c, |x| *x, c.bottom()).unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn lfp_on_four_chain() {
        let c = FiniteLattice::chain(4);
        let f = chain4_f();
        let r = lfp_iterate(&c, |x| f.apply(*x), 0).unwrap();
        assert_eq!(r.value, 0);
    }

    #[test]
    fn lfp_of_closed_function_on_three_chain() {
        // μ = {1↦2, 2↦2, 3↦3}, f = {1↦1, 2↦3, 3↦3}; μf from 2 reaches 3
        let c = FiniteLattice::chain(3);
        let mu = FnTable::new(vec![1, 1, 2]);
        let f = FnTable::new(vec![0, 2, 2]);
        let mf = mu.compose(&f);
        let r = lfp_iterate(&c, |x| mf.apply(*x), 1).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.steps <= c.height().unwrap());
    }

    #[test]
    fn gfp_examples() {
        let c = FiniteLattice::chain(3);
        assert_eq!(gfp_iterate(&c, |x| *x, 2).unwrap().value, 2);
        assert_eq!(gfp_iterate(&c, |_| 0, 2).unwrap().value, 0);

        let p = Powerset::new(2);
        let r = gfp_iterate(&p, |x| x & 0b01, p.top()).unwrap();
        assert_eq!(r.value, 0b01);
    }

    #[test]
    fn lfp_rejects_bad_start() {
        let c = FiniteLattice::chain(3);
        assert_eq!(
            lfp_iterate(&c, |_| 0, 2).unwrap_err(),
            LatticeError::StartNotPostFixpoint
        );
    }

    #[test]
    fn budget_is_enforced() {
        let c = FiniteLattice::chain(5);
        let err = lfp_iterate_with_budget(&c, |x| (*x + 1).min(4), 0, 2).unwrap_err();
        assert_eq!(err, LatticeError::BudgetExceeded { budget: 2 });
    }

    #[test]
    fn inductive_invariant_examples() {
        let c = FiniteLattice::chain(4);
        assert!(check_inductive_invariant(&c, |x| *x, &0, &3, &0));
        let f = chain4_f();
        // c = 1, i = 2, c' = 3
        assert!(check_inductive_invariant(&c, |x| f.apply(*x), &0, &2, &1));
        // i = 3: f(3) = 4 ≰ 3
        assert!(!check_inductive_invariant(&c, |x| f.apply(*x), &0, &2, &2));
    }

    #[test]
    fn product_is_componentwise() {
        let p = ProductDomain::new(3, FiniteLattice::chain(3));
        assert_eq!(p.height(), Some(6));
        let a = vec![0, 2, 1];
        let b = vec![1, 1, 1];
        assert_eq!(p.join(&a, &b), vec![1, 2, 1]);
        assert_eq!(p.meet(&a, &b), vec![0, 1, 1]);
        assert!(p.leq(&p.bottom(), &a) && p.leq(&a, &p.top()));
    }
}
