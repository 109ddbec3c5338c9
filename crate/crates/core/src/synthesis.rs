//! Invariant synthesis on programs: the forward least-fixpoint procedure and
//! the co-inductive backward greatest-fixpoint procedure over a Q-indexed
//! product of a program domain.

use std::fmt::{self, Display};

use thiserror::Error;

use crate::affine_domain::{self, AffDomain, AffSubspace};
use crate::const_domain::{self, ConstDomain, ConstVec};
use crate::finite_oracle::{self, ClosureFamily, FiniteTs};
use crate::lattice_core::AbstractDomain;
use crate::program_model::{Literal, Program, Sort, TransferFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("the {domain} domain requires sort {expected}, found sort {found}")]
    SortMismatch {
        domain: &'static str,
        expected: &'static str,
        found: &'static str,
    },
    #[error("backward synthesis not supported for {0}")]
    Unsupported(&'static str),
    #[error("iteration did not stabilize within {budget} steps")]
    BudgetExceeded { budget: usize },
    #[error("state vector has {found} components but the program has {expected} nodes")]
    ArityMismatch { expected: usize, found: usize },
}

/// A domain that can interpret program edge labels.
pub trait ProgramDomain: AbstractDomain
where
    Self::Elem: Display,
{
    const NAME: &'static str;
    const SORT: Sort;

    fn post(&self, t: &TransferFunction, a: &Self::Elem) -> Self::Elem;

    /// Abstraction of `p̃re_t(γ(a))`.
    fn pret(&self, t: &TransferFunction, a: &Self::Elem) -> Result<Self::Elem, SynthesisError>;

    fn alpha_literal(&self, lit: &Literal) -> Self::Elem;

    fn for_program(program: &Program) -> Self;
}

impl ProgramDomain for ConstDomain {
    const NAME: &'static str = "const";
    const SORT: Sort = Sort::Int;

    fn post(&self, t: &TransferFunction, a: &ConstVec) -> ConstVec {
        const_domain::post(t, a)
    }

    fn pret(&self, t: &TransferFunction, a: &ConstVec) -> Result<ConstVec, SynthesisError> {
        Ok(const_domain::pret(t, a, self.n))
    }

    fn alpha_literal(&self, lit: &Literal) -> ConstVec {
        const_domain::from_literal(lit, self.n)
    }

    fn for_program(program: &Program) -> Self {
        ConstDomain::new(program.vars)
    }
}

impl ProgramDomain for AffDomain {
    const NAME: &'static str = "affine";
    const SORT: Sort = Sort::Rat;

    fn post(&self, t: &TransferFunction, a: &AffSubspace) -> AffSubspace {
        affine_domain::post(t, a)
    }

    fn pret(&self, _: &TransferFunction, _: &AffSubspace) -> Result<AffSubspace, SynthesisError> {
        Err(SynthesisError::Unsupported("affine"))
    }

    fn alpha_literal(&self, lit: &Literal) -> AffSubspace {
        affine_domain::from_literal(lit, self.n)
    }

    fn for_program(program: &Program) -> Self {
        AffDomain::new(program.vars)
    }
}

fn sort_name(s: Sort) -> &'static str {
    match s {
        Sort::Int => "int",
        Sort::Rat => "rat",
    }
}

/// A program, a domain, the abstract initial states `Σ0♯` and the abstract
/// safety property `P♯`.
#[derive(Debug, Clone)]
pub struct AnalysisProblem<D: ProgramDomain>
where
    D::Elem: Display,
{
    pub program: Program,
    pub domain: D,
    pub init: Vec<D::Elem>,
    pub property: Vec<D::Elem>,
}

impl<D: ProgramDomain> AnalysisProblem<D>
where
    D::Elem: Display,
{
    /// `Σ0♯` is the abstraction of the declared inits; nodes missing from
    /// `property` default to `⊤`.
    pub fn new(program: Program, property: &[(usize, Literal)]) -> Result<Self, SynthesisError> {
        if program.sort != D::SORT {
            return Err(SynthesisError::SortMismatch {
                domain: D::NAME,
                expected: sort_name(D::SORT),
                found: sort_name(program.sort),
            });
        }
        let domain = D::for_program(&program);
        let init = program
            .inits
            .iter()
            .map(|lit| lit.as_ref().map_or_else(|| domain.bottom(), |l| domain.alpha_literal(l)))
            .collect();
        let mut prop = vec![domain.top(); program.nodes.len()];
        for (q, lit) in property {
            prop[*q] = domain.meet(&prop[*q], &domain.alpha_literal(lit));
        }
        Ok(Self {
            program,
            domain,
            init,
            property: prop,
        })
    }

    pub fn with_states(
        program: Program,
        init: Vec<D::Elem>,
        property: Vec<D::Elem>,
    ) -> Result<Self, SynthesisError> {
        let q = program.nodes.len();
        for v in [&init, &property] {
            if v.len() != q {
                return Err(SynthesisError::ArityMismatch { expected: q, found: v.len() });
            }
        }
        let domain = D::for_program(&program);
        Ok(Self {
            program,
            domain,
            init,
            property,
        })
    }

    fn product_leq(&self, a: &[D::Elem], b: &[D::Elem]) -> bool {
        a.iter().zip(b).all(|(x, y)| self.domain.leq(x, y))
    }

    /// Upper bound on strictly monotone chains in the product lattice.
    pub fn height(&self) -> Option<usize> {
        self.domain.height().map(|h| h * self.program.nodes.len())
    }

    fn budget(&self) -> usize {
        self.height().map_or(crate::lattice_core::DEFAULT_BUDGET, |h| h + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    Least,
    Greatest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NotFoundReason {
    /// A forward iterate is not below `P♯`.
    PropertyViolated,
    /// A backward iterate no longer covers `Σ0♯`.
    InitNotCovered,
    /// The backward limit failed the forward inductiveness check.
    VerificationFailed,
}

impl Display for NotFoundReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NotFoundReason::PropertyViolated => "iterate violates the property",
            NotFoundReason::InitNotCovered => "iterate does not contain the initial states",
            NotFoundReason::VerificationFailed => "limit is not inductive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthesisResult<E> {
    Found {
        invariant: Vec<E>,
        kind: InvariantKind,
        trace: Vec<Vec<E>>,
    },
    NotFound {
        iterate: Vec<E>,
        step: usize,
        reason: NotFoundReason,
        trace: Vec<Vec<E>>,
    },
}

impl<E> SynthesisResult<E> {
    pub fn trace(&self) -> &[Vec<E>] {
        match self {
            SynthesisResult::Found { trace, .. } | SynthesisResult::NotFound { trace, .. } => trace,
        }
    }

    /// Number of strict iteration steps: the trace length minus one.
    pub fn steps(&self) -> usize {
        self.trace().len().saturating_sub(1)
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SynthesisResult::Found { .. })
    }

    pub fn invariant(&self) -> Option<&[E]> {
        match self {
            SynthesisResult::Found { invariant, .. } => Some(invariant),
            SynthesisResult::NotFound { .. } => None,
        }
    }
}

/// `⨆ { post♯_t(v_q) : (q, t, q') }` at every node `q'`, without `Σ0♯`.
pub fn abstract_post<D: ProgramDomain>(problem: &AnalysisProblem<D>, v: &[D::Elem]) -> Vec<D::Elem>
where
    D::Elem: Display,
{
    let d = &problem.domain;
    let mut out = vec![d.bottom(); v.len()];
    for e in &problem.program.edges {
        let image = d.post(&e.transfer, &v[e.from]);
        out[e.to] = d.join(&out[e.to], &image);
    }
    out
}

/// `Σ0♯ ⊔ post♯(v)`.
pub fn abstract_post_step<D: ProgramDomain>(problem: &AnalysisProblem<D>, v: &[D::Elem]) -> Vec<D::Elem>
where
    D::Elem: Display,
{
    let d = &problem.domain;
    abstract_post(problem, v)
        .iter()
        .zip(&problem.init)
        .map(|(p, i)| d.join(i, p))
        .collect()
}

/// Forward synthesis: iterate `Σ0♯ ⊔ post♯` from `Σ0♯` and stop at the
/// first iterate that is not below `P♯`. A stable iterate is the least
/// abstract inductive invariant.
pub fn ainv_forward<D: ProgramDomain>(
    problem: &AnalysisProblem<D>,
) -> Result<SynthesisResult<D::Elem>, SynthesisError>
where
    D::Elem: Display,
{
    let budget = problem.budget();
    let mut current = problem.init.clone();
    let mut trace = vec![current.clone()];
    loop {
        let step = trace.len() - 1;
        if !problem.product_leq(&current, &problem.property) {
            return Ok(SynthesisResult::NotFound {
                iterate: current,
                step,
                reason: NotFoundReason::PropertyViolated,
                trace,
            });
        }
        let next = abstract_post_step(problem, &current);
        if problem.product_leq(&next, &current) {
            return Ok(SynthesisResult::Found {
                invariant: current,
                kind: InvariantKind::Least,
                trace,
            });
        }
        if step + 1 > budget {
            return Err(SynthesisError::BudgetExceeded { budget });
        }
        trace.push(next.clone());
        current = next;
    }
}

/// `α(p̃re(γ(v))) ⊓ v ⊓ P♯`, where the precondition at `q` is the meet over
/// the outgoing edges of `q` (`⊤` when there are none).
pub fn abstract_pret_step<D: ProgramDomain>(
    problem: &AnalysisProblem<D>,
    v: &[D::Elem],
) -> Result<Vec<D::Elem>, SynthesisError>
where
    D::Elem: Display,
{
    let d = &problem.domain;
    let mut pre = vec![d.top(); v.len()];
    for e in &problem.program.edges {
        let wp = d.pret(&e.transfer, &v[e.to])?;
        pre[e.from] = d.meet(&pre[e.from], &wp);
    }
    Ok(pre
        .iter()
        .zip(v)
        .zip(&problem.property)
        .map(|((w, x), p)| d.meet(&d.meet(w, x), p))
        .collect())
}

/// Backward synthesis from `⊤` by `abstract_pret_step` while `Σ0♯` stays
/// below the iterate. The limit is re-checked for inductiveness with the
/// forward transfer functions before it is reported.
pub fn backward_gfp<D: ProgramDomain>(
    problem: &AnalysisProblem<D>,
) -> Result<SynthesisResult<D::Elem>, SynthesisError>
where
    D::Elem: Display,
{
    let budget = problem.budget();
    let mut current = vec![problem.domain.top(); problem.program.nodes.len()];
    let mut trace = vec![current.clone()];
    loop {
        let step = trace.len() - 1;
        if !problem.product_leq(&problem.init, &current) {
            return Ok(SynthesisResult::NotFound {
                iterate: current,
                step,
                reason: NotFoundReason::InitNotCovered,
                trace,
            });
        }
        let next = abstract_pret_step(problem, &current)?;
        if problem.product_leq(&current, &next) {
            if verify_invariant(problem, &current) {
                return Ok(SynthesisResult::Found {
                    invariant: current,
                    kind: InvariantKind::Greatest,
                    trace,
                });
            }
            return Ok(SynthesisResult::NotFound {
                iterate: current,
                step,
                reason: NotFoundReason::VerificationFailed,
                trace,
            });
        }
        if step + 1 > budget {
            return Err(SynthesisError::BudgetExceeded { budget });
        }
        trace.push(next.clone());
        current = next;
    }
}

/// `Σ0♯ ≤ I ∧ post♯(I) ≤ I ∧ I ≤ P♯`.
pub fn verify_invariant<D: ProgramDomain>(problem: &AnalysisProblem<D>, inv: &[D::Elem]) -> bool
where
    D::Elem: Display,
{
    inv.len() == problem.program.nodes.len()
        && problem.product_leq(&problem.init, inv)
        && problem.product_leq(&abstract_post(problem, inv), inv)
        && problem.product_leq(inv, &problem.property)
}

/// One line of trace output: `q1=<elem> q2=<elem> ...`.
pub fn render_state<E: Display>(program: &Program, v: &[E]) -> String {
    program
        .nodes
        .iter()
        .zip(v)
        .map(|(q, a)| format!("{q}={a}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Co-inductive forward synthesis on an explicit finite system: the greatest
/// fixpoint of `λX. μ̂_L(p̃ost(X) ∩ X ∩ ¬Σ0)` below `⊤`, iterated while
/// `¬P ⊆ X`. Returns the limit when `¬P` stays inside it, in which case its
/// complement is an inductive invariant in the dual family proving `P`.
pub fn forward_gfp_finite(
    ts: &FiniteTs,
    family: &ClosureFamily,
) -> Result<finite_oracle::Algorithm4Result, finite_oracle::OracleError> {
    finite_oracle::run_algorithm4(ts, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::const_domain::ConstVal;
    use crate::program_model::parse_program;

    const FIG2: &str = "\
vars 2;
sort int;
nodes q1 q2 q3 q4;
init q1: top;
edge q1 -> q2 : x1 := 0, x2 := 2;
edge q2 -> q3 : x1 := x1 + 2*x2, x2 := x2 - 1;
edge q3 -> q2 : x1 := x1 - x2, x2 := x2 + 1;
edge q2 -> q4 : assume x1 - 9 >= 0;
";

    const T: ConstVal = ConstVal::Top;

    fn cv(slots: &[Option<i64>]) -> ConstVec {
        ConstVec::from_options(slots)
    }

    fn fig2(prop: Literal) -> AnalysisProblem<ConstDomain> {
        AnalysisProblem::new(parse_program(FIG2).unwrap(), &[(1, prop)]).unwrap()
    }

    fn x2_is_2() -> Literal {
        Literal::Tuple(vec![None, Some(crate::linalg::int(2))])
    }

    #[test]
    fn forward_fig2() {
        let p = fig2(x2_is_2());
        let r = ainv_forward(&p).unwrap();
        let bot = ConstVec::Bot;
        let top = ConstVec::top(2);
        let expected = vec![
            vec![top.clone(), bot.clone(), bot.clone(), bot.clone()],
            vec![top.clone(), cv(&[Some(0), Some(2)]), bot.clone(), bot.clone()],
            vec![top.clone(), cv(&[Some(0), Some(2)]), cv(&[Some(4), Some(1)]), bot.clone()],
            vec![top.clone(), cv(&[None, Some(2)]), cv(&[Some(4), Some(1)]), bot.clone()],
            vec![top.clone(), cv(&[None, Some(2)]), cv(&[None, Some(1)]), cv(&[None, Some(2)])],
        ];
        assert_eq!(r.trace(), expected.as_slice());
        assert_eq!(r.steps(), 4);
        assert!(verify_invariant(&p, r.invariant().unwrap()));
    }

    #[test]
    fn forward_fig2_not_found() {
        let p = fig2(Literal::Tuple(vec![Some(crate::linalg::int(0)), None]));
        match ainv_forward(&p).unwrap() {
            SynthesisResult::NotFound { step, iterate, reason, .. } => {
                assert_eq!(step, 3);
                assert_eq!(iterate[1], ConstVec::Val(vec![T, ConstVal::Int(2)]));
                assert_eq!(reason, NotFoundReason::PropertyViolated);
            }
            r => panic!("unexpected {r:?}"),
        }
    }

    #[test]
    fn backward_fig2() {
        let p = fig2(x2_is_2());
        let r = backward_gfp(&p).unwrap();
        let top = ConstVec::top(2);
        let i2 = vec![top.clone(), cv(&[None, Some(2)]), cv(&[None, Some(1)]), top.clone()];
        assert_eq!(r.trace().len(), 3);
        assert_eq!(r.trace()[1], vec![top.clone(), cv(&[None, Some(2)]), top.clone(), top.clone()]);
        assert_eq!(r.invariant().unwrap(), i2.as_slice());
        assert!(verify_invariant(&p, &i2));
    }

    #[test]
    fn backward_bottom_property_at_init() {
        let p = fig2(x2_is_2());
        let mut prop = p.property.clone();
        prop[0] = ConstVec::Bot;
        let p = AnalysisProblem::<ConstDomain>::with_states(p.program.clone(), p.init.clone(), prop).unwrap();
        match backward_gfp(&p).unwrap() {
            SynthesisResult::NotFound { step, reason, .. } => {
                assert_eq!(step, 1);
                assert_eq!(reason, NotFoundReason::InitNotCovered);
            }
            r => panic!("unexpected {r:?}"),
        }
    }

    #[test]
    fn pret_step_all_bottom() {
        let p = fig2(x2_is_2());
        let bot = vec![ConstVec::Bot; 4];
        assert_eq!(abstract_pret_step(&p, &bot).unwrap(), bot);
    }

    #[test]
    fn empty_program_returns_init() {
        let prog = parse_program("vars 1; nodes q; init q: (3);").unwrap();
        let p = AnalysisProblem::<ConstDomain>::new(prog, &[]).unwrap();
        let r = ainv_forward(&p).unwrap();
        assert_eq!(r.invariant().unwrap(), &[ConstVec::point(&[3])]);
    }

    #[test]
    fn verify_rejects_bottom() {
        let p = fig2(x2_is_2());
        assert!(!verify_invariant(&p, &vec![ConstVec::Bot; 4]));
    }

    #[test]
    fn sort_mismatch() {
        let prog = parse_program(FIG2).unwrap();
        assert!(matches!(
            AnalysisProblem::<AffDomain>::new(prog, &[]),
            Err(SynthesisError::SortMismatch { .. })
        ));
    }

    #[test]
    fn affine_backward_unsupported() {
        let prog = parse_program("vars 1; sort rat; nodes a b; init a: top; edge a -> b : x1 := 0;").unwrap();
        let p = AnalysisProblem::<AffDomain>::new(prog, &[]).unwrap();
        assert_eq!(backward_gfp(&p), Err(SynthesisError::Unsupported("affine")));
    }
}
