//! Brute-force checkers. Each one decides both sides of a stated
//! equivalence by enumeration and reports whether they agree.

use crate::lattice_core::finite::{is_subset, BitSet};
use crate::lattice_core::{AbstractDomain, FiniteGi, FiniteLattice, FnTable};

use super::family::ClosureFamily;
use super::ts::{lfp_sets, FiniteTs};
use super::OracleError;

/// Least fixpoint of a monotone table, iterated from `⊥`.
pub fn lfp_table(lattice: &FiniteLattice, f: &FnTable) -> usize {
    let mut x = lattice.bottom();
    loop {
        let next = f.apply(x);
        if next == x {
            return x;
        }
        x = next;
    }
}

fn require_monotone(gi: &FiniteGi, f: &FnTable) -> Result<(), OracleError> {
    if f.is_monotone(&gi.concrete) {
        Ok(())
    } else {
        Err(OracleError::NotMonotone)
    }
}

/// `∃a ∈ A. fγ(a) ≤ γ(a) ∧ γ(a) ≤ bound`
pub fn abstract_witness(gi: &FiniteGi, f: &FnTable, bound: usize) -> Option<usize> {
    let c = &gi.concrete;
    gi.abstract_domain.elements().find(|&a| {
        let g = gi.gamma.apply(a);
        c.leq(&f.apply(g), &g) && c.leq(&g, &bound)
    })
}

/// `γ(lfp(αfγ))`
pub fn abstract_lfp_concretized(gi: &FiniteGi, f: &FnTable) -> usize {
    gi.gamma.apply(lfp_table(&gi.abstract_domain, &gi.bca(f)))
}

/// Abstract inductive invariant principle, concrete form: the abstract
/// lfp entails `c'` iff some abstract inductive invariant entails `c'`.
pub fn check_lemma1(gi: &FiniteGi, f: &FnTable, c_prime: usize) -> Result<bool, OracleError> {
    require_monotone(gi, f)?;
    let lhs = gi.concrete.leq(&abstract_lfp_concretized(gi, f), &c_prime);
    let rhs = abstract_witness(gi, f, c_prime).is_some();
    Ok(lhs == rhs)
}

/// Abstract form: `lfp(αfγ) ≤ a'` iff some abstract inductive invariant
/// entails `γ(a')`.
pub fn check_lemma1_abstract(gi: &FiniteGi, f: &FnTable, a_prime: usize) -> Result<bool, OracleError> {
    require_monotone(gi, f)?;
    let lhs = gi
        .abstract_domain
        .leq(&lfp_table(&gi.abstract_domain, &gi.bca(f)), &a_prime);
    let rhs = abstract_witness(gi, f, gi.gamma.apply(a_prime)).is_some();
    Ok(lhs == rhs)
}

/// The five statements relating fixpoint completeness to abstract
/// inductive invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletenessReport {
    /// `lfp(f) = γ(lfp(αfγ))`
    pub strong: bool,
    /// `α(lfp(f)) = lfp(αfγ)`
    pub plain: bool,
    /// `∀c'. lfp(f) ≤ c' ⇔ ∃a. fγ(a) ≤ γ(a) ≤ c'`
    pub every_concrete: bool,
    /// `∀a'. lfp(f) ≤ γ(a') ⇔ ∃a. fγ(a) ≤ γ(a) ≤ γ(a')`
    pub every_abstract: bool,
    /// `∃a. fγ(a) ≤ γ(a) ≤ γα(lfp(f))`
    pub single_witness: bool,
}

impl CompletenessReport {
    pub fn theorem4a(&self) -> bool {
        self.every_concrete == self.strong
    }

    pub fn theorem4b(&self) -> bool {
        self.every_abstract == self.plain
    }

    pub fn lemma5(&self) -> bool {
        self.single_witness == self.plain
    }

    pub fn consistent(&self) -> bool {
        self.theorem4a() && self.theorem4b() && self.lemma5()
    }
}

pub fn check_fixpoint_completeness_char(gi: &FiniteGi, f: &FnTable) -> Result<CompletenessReport, OracleError> {
    require_monotone(gi, f)?;
    let c = &gi.concrete;
    let concrete_lfp = lfp_table(c, f);
    let abstract_lfp = lfp_table(&gi.abstract_domain, &gi.bca(f));
    let provable = |bound: usize| abstract_witness(gi, f, bound).is_some();
    Ok(CompletenessReport {
        strong: concrete_lfp == gi.gamma.apply(abstract_lfp),
        plain: gi.alpha.apply(concrete_lfp) == abstract_lfp,
        every_concrete: c.elements().all(|cp| c.leq(&concrete_lfp, &cp) == provable(cp)),
        every_abstract: gi.abstract_domain.elements().all(|ap| {
            let g = gi.gamma.apply(ap);
            c.leq(&concrete_lfp, &g) == provable(g)
        }),
        single_witness: provable(gi.closure().apply(concrete_lfp)),
    })
}

/// `SAFE[F,S]` against `INV[F,S,A]` together with the completeness of
/// every member of `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeInvReport {
    pub safe: Vec<(usize, usize)>,
    pub inv: Vec<(usize, usize)>,
    pub all_strong: bool,
    pub all_plain: bool,
    /// `S ⊆ γ(A)`
    pub within_abstract: bool,
    /// `γ(A) ⊆ S`
    pub covers_abstract: bool,
    /// `S = C`
    pub covers_concrete: bool,
}

impl SafeInvReport {
    pub fn equal(&self) -> bool {
        self.safe == self.inv
    }

    /// The characterization in the form that holds for every `S`:
    /// `INV ⊆ SAFE`; strong completeness forces equality, and so does
    /// plain completeness when `S ⊆ γ(A)`; conversely equality forces
    /// strong completeness when `S = C` and plain completeness when
    /// `S = γ(A)`.
    pub fn consistent(&self) -> bool {
        let inv_in_safe = self.inv.iter().all(|p| self.safe.binary_search(p).is_ok());
        let strong_ok = !self.all_strong || self.equal();
        let strong_conv = !(self.covers_concrete && self.equal()) || self.all_strong;
        let plain_ok = !(self.within_abstract && self.all_plain) || self.equal();
        let plain_conv =
            !(self.within_abstract && self.covers_abstract && self.equal()) || self.all_plain;
        inv_in_safe && strong_ok && strong_conv && plain_ok && plain_conv
    }
}

pub fn check_safe_inv(gi: &FiniteGi, family: &[FnTable], safety: &[usize]) -> Result<SafeInvReport, OracleError> {
    let c = &gi.concrete;
    let mut safety: Vec<usize> = safety.to_vec();
    safety.sort_unstable();
    safety.dedup();
    let image: Vec<usize> = gi.abstract_domain.elements().map(|a| gi.gamma.apply(a)).collect();
    let mut report = SafeInvReport {
        safe: Vec::new(),
        inv: Vec::new(),
        all_strong: true,
        all_plain: true,
        within_abstract: safety.iter().all(|s| image.contains(s)),
        covers_abstract: image.iter().all(|g| safety.contains(g)),
        covers_concrete: c.elements().all(|x| safety.contains(&x)),
    };
    for (i, f) in family.iter().enumerate() {
        let comp = check_fixpoint_completeness_char(gi, f)?;
        report.all_strong &= comp.strong;
        report.all_plain &= comp.plain;
        let concrete_lfp = lfp_table(c, f);
        for &s in &safety {
            if c.leq(&concrete_lfp, &s) {
                report.safe.push((i, s));
            }
            if abstract_witness(gi, f, s).is_some() {
                report.inv.push((i, s));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma6Report {
    /// `s ⊑_L s' ⇔ μ̌_L({s}) ⊆ μ̌_L({s'})` on all pairs.
    pub preorder: bool,
    /// `Av_L(s) ∈ L` for every state.
    pub a2: bool,
    pub union_closed: bool,
    /// `δ_L = μ̌_L`, both additive, fixpoints exactly `L`; checked under (A2).
    pub delta_is_upper: Option<bool>,
    /// Equality of the reachable sets of `T^L` and of the best abstraction;
    /// checked under (A2).
    pub abstract_reach: Option<bool>,
}

impl Lemma6Report {
    pub fn consistent(&self) -> bool {
        self.preorder
            && self.a2 == self.union_closed
            && self.delta_is_upper != Some(false)
            && self.abstract_reach != Some(false)
    }
}

pub fn check_lemma6(ts: &FiniteTs, l: &ClosureFamily) -> Lemma6Report {
    let n = ts.size.min(l.size);
    let preorder = (0..n).all(|s| {
        (0..n).all(|t| l.state_leq(s, t) == is_subset(l.upper(1 << s), l.upper(1 << t)))
    });
    let a2 = (0..l.size).all(|s| l.contains(l.avoid(1 << s)));
    let union_closed = l.is_union_closed();
    let full = l.full();
    let (delta_is_upper, abstract_reach) = if union_closed {
        let delta_ok = (0..=full).all(|x| {
            let d = l.delta(x);
            d == l.upper(x) && (d == x) == l.contains(x)
        }) && (0..=full).all(|x| (0..=full).all(|y| l.upper(x | y) == l.upper(x) | l.upper(y)));
        let post_l = lfp_sets(|x| ts.init | ts.post(x) | l.delta(x));
        let best = lfp_sets(|x| l.upper(ts.init | ts.post(x)));
        (Some(delta_ok), Some(post_l == best))
    } else {
        (None, None)
    };
    Lemma6Report {
        preorder,
        a2,
        union_closed,
        delta_is_upper,
        abstract_reach,
    }
}

/// Members of `L` that are inductive invariants for `⟨Σ0, P⟩`.
pub fn inductive_members(ts: &FiniteTs, l: &ClosureFamily) -> Vec<BitSet> {
    l.members().iter().copied().filter(|&phi| ts.is_inductive(phi)).collect()
}

/// Some member of `L` is an inductive invariant iff the reachable states
/// of the best abstraction `⟨Σ, μ̌_L ∘ post⟩` satisfy `P`.
pub fn check_corollary9(ts: &FiniteTs, l: &ClosureFamily) -> bool {
    let exists = !inductive_members(ts, l).is_empty();
    let abstract_reach = lfp_sets(|x| l.upper(ts.init | ts.post(x)));
    exists == is_subset(abstract_reach, ts.prop)
}

/// `μ̌_L ⊣ μ̂_L` on every pair of subsets; only meaningful under (A2).
pub fn check_closure_adjunction(l: &ClosureFamily) -> bool {
    let full = l.full();
    let upper: Vec<BitSet> = (0..=full).map(|x| l.upper(x)).collect();
    let lower: Vec<BitSet> = (0..=full).map(|y| l.lower(y)).collect();
    (0..=full).all(|x| (0..=full).all(|y| is_subset(upper[x as usize], y) == is_subset(x, lower[y as usize])))
}
