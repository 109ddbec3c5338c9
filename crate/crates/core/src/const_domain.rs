//! Kildall's constant-propagation domain `Const_n` over the integers.
//!
//! An element is either `⊥` (the empty set) or a vector whose slots are an
//! integer constant or `⊤`. Constants are stored as `i64`; arithmetic is done
//! on big integers and any result that does not fit in an `i64` is widened to
//! `⊤`, which keeps every operation sound.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::lattice_core::{AbstractDomain, GaloisInsertion};
use crate::program_model::{Atom, Guard, GuardMode, LinExpr, Literal, ParallelAssign, Rel, Rhs, TransferFunction};
use crate::Rational;

/// A slot of a `Const_n` vector: an integer constant or `⊤`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstVal {
    Int(i64),
    Top,
}

impl ConstVal {
    pub fn leq(self, other: ConstVal) -> bool {
        self == other || other == ConstVal::Top
    }

    pub fn as_int(self) -> Option<i64> {
        match self {
            ConstVal::Int(k) => Some(k),
            ConstVal::Top => None,
        }
    }

    fn from_big(v: &BigInt) -> ConstVal {
        v.to_i64().map_or(ConstVal::Top, ConstVal::Int)
    }
}

impl fmt::Display for ConstVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstVal::Int(k) => write!(f, "{k}"),
            ConstVal::Top => f.write_str("top"),
        }
    }
}

/// An element of `Const_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstVec {
    Bot,
    Val(Vec<ConstVal>),
}

impl ConstVec {
    pub fn top(n: usize) -> Self {
        ConstVec::Val(vec![ConstVal::Top; n])
    }

    pub fn point(values: &[i64]) -> Self {
        ConstVec::Val(values.iter().map(|&k| ConstVal::Int(k)).collect())
    }

    /// Builds a vector from optional constants, `None` meaning `⊤`.
    pub fn from_options(values: &[Option<i64>]) -> Self {
        ConstVec::Val(values.iter().map(|v| v.map_or(ConstVal::Top, ConstVal::Int)).collect())
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, ConstVec::Bot)
    }

    pub fn slots(&self) -> Option<&[ConstVal]> {
        match self {
            ConstVec::Bot => None,
            ConstVec::Val(v) => Some(v),
        }
    }

    /// Whether the integer point lies in `γ(self)`.
    pub fn contains(&self, point: &[i64]) -> bool {
        match self {
            ConstVec::Bot => false,
            ConstVec::Val(v) => v.iter().zip(point).all(|(s, &p)| ConstVal::Int(p).leq(*s)),
        }
    }

    /// The single point of `γ(self)` when every slot is constant.
    pub fn as_point(&self) -> Option<Vec<i64>> {
        self.slots()?.iter().map(|s| s.as_int()).collect()
    }
}

impl fmt::Display for ConstVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstVec::Bot => f.write_str("bot"),
            ConstVec::Val(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// `Const_n` for a fixed number of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstDomain {
    pub n: usize,
}

impl ConstDomain {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl AbstractDomain for ConstDomain {
    type Elem = ConstVec;

    fn leq(&self, a: &ConstVec, b: &ConstVec) -> bool {
        match (a, b) {
            (ConstVec::Bot, _) => true,
            (_, ConstVec::Bot) => false,
            (ConstVec::Val(x), ConstVec::Val(y)) => x.iter().zip(y).all(|(p, q)| p.leq(*q)),
        }
    }

    fn join(&self, a: &ConstVec, b: &ConstVec) -> ConstVec {
        match (a, b) {
            (ConstVec::Bot, x) | (x, ConstVec::Bot) => x.clone(),
            (ConstVec::Val(x), ConstVec::Val(y)) => ConstVec::Val(
                x.iter()
                    .zip(y)
                    .map(|(p, q)| if p == q { *p } else { ConstVal::Top })
                    .collect(),
            ),
        }
    }

    fn meet(&self, a: &ConstVec, b: &ConstVec) -> ConstVec {
        let (ConstVec::Val(x), ConstVec::Val(y)) = (a, b) else {
            return ConstVec::Bot;
        };
        let mut out = Vec::with_capacity(x.len());
        for (p, q) in x.iter().zip(y) {
            match (p, q) {
                (ConstVal::Top, v) | (v, ConstVal::Top) => out.push(*v),
                (ConstVal::Int(i), ConstVal::Int(j)) if i == j => out.push(*p),
                _ => return ConstVec::Bot,
            }
        }
        ConstVec::Val(out)
    }

    fn bottom(&self) -> ConstVec {
        ConstVec::Bot
    }

    fn top(&self) -> ConstVec {
        ConstVec::top(self.n)
    }

    fn height(&self) -> Option<usize> {
        Some((2 * self.n).max(1))
    }
}

/// `α_Const` of a finite set of integer points.
pub fn alpha_points<'a, I>(n: usize, points: I) -> ConstVec
where
    I: IntoIterator<Item = &'a Vec<i64>>,
{
    let mut acc: Option<Vec<ConstVal>> = None;
    for p in points {
        debug_assert_eq!(p.len(), n);
        acc = Some(match acc {
            None => p.iter().map(|&k| ConstVal::Int(k)).collect(),
            Some(v) => v
                .into_iter()
                .zip(p)
                .map(|(s, &k)| if s == ConstVal::Int(k) { s } else { ConstVal::Top })
                .collect(),
        });
    }
    acc.map_or(ConstVec::Bot, ConstVec::Val)
}

fn big(r: &Rational) -> BigInt {
    debug_assert!(r.is_integer(), "Const expressions must have integer coefficients");
    r.to_integer()
}

/// Splits `Σ m_i x_i + b` at `a` into the constant part `Σ_{a_i ∈ ℤ} m_i a_i + b`
/// and the nonzero coefficients on `⊤` slots.
fn split(e: &LinExpr, slots: &[ConstVal]) -> (BigInt, Vec<(usize, BigInt)>) {
    let mut k = big(&e.constant);
    let mut free = Vec::new();
    for (i, (m, s)) in e.coeffs.iter().zip(slots).enumerate() {
        if m.is_zero() {
            continue;
        }
        match s {
            ConstVal::Int(v) => k += big(m) * BigInt::from(*v),
            ConstVal::Top => free.push((i, big(m))),
        }
    }
    (k, free)
}

/// Abstract value of an affine expression: `None` for `⊥`.
pub fn eval_linexpr_abstract(e: &LinExpr, a: &ConstVec) -> Option<ConstVal> {
    let slots = a.slots()?;
    let (k, free) = split(e, slots);
    Some(if free.is_empty() { ConstVal::from_big(&k) } else { ConstVal::Top })
}

/// Best correct approximation of `x_j := e` (0-based `j`).
pub fn bca_assign(j: usize, e: &LinExpr, a: &ConstVec) -> ConstVec {
    match (a, eval_linexpr_abstract(e, a)) {
        (ConstVec::Val(v), Some(val)) => {
            let mut out = v.clone();
            out[j] = val;
            ConstVec::Val(out)
        }
        _ => ConstVec::Bot,
    }
}

/// Parallel assignment: every row is evaluated on the old `a`; havoc rows
/// become `⊤`.
pub fn bca_parallel_assign(t: &ParallelAssign, a: &ConstVec) -> ConstVec {
    if a.is_bot() {
        return ConstVec::Bot;
    }
    ConstVec::Val(
        t.rows
            .iter()
            .map(|r| match r {
                Rhs::Affine(e) => eval_linexpr_abstract(e, a).expect("non-bottom input"),
                Rhs::Havoc => ConstVal::Top,
            })
            .collect(),
    )
}

/// Best correct approximation of the guard `e ⋈ 0`.
pub fn bca_rel_guard(e: &LinExpr, rel: Rel, a: &ConstVec) -> ConstVec {
    if rel == Rel::Eq {
        return bca_eq_guard(e, a);
    }
    let Some(slots) = a.slots() else {
        return ConstVec::Bot;
    };
    let (k, free) = split(e, slots);
    if free.is_empty() && !rel.holds(&k) {
        ConstVec::Bot
    } else {
        a.clone()
    }
}

/// Best correct approximation of the guard `e = 0`.
///
/// With a single `⊤` slot `j` the residual constraint `m_j x_j + k = 0` pins
/// `x_j` to `-k/m_j`, or is unsatisfiable when `m_j ∤ k`. With several `⊤`
/// slots the equation has integer solutions iff `gcd(m) | k`, and then every
/// involved slot ranges over infinitely many values.
pub fn bca_eq_guard(e: &LinExpr, a: &ConstVec) -> ConstVec {
    let Some(slots) = a.slots() else {
        return ConstVec::Bot;
    };
    let (k, free) = split(e, slots);
    match free.as_slice() {
        [] => {
            if k.is_zero() {
                a.clone()
            } else {
                ConstVec::Bot
            }
        }
        [(j, m)] => {
            if !k.is_multiple_of(m) {
                return ConstVec::Bot;
            }
            let mut out = slots.to_vec();
            out[*j] = ConstVal::from_big(&(-k / m));
            ConstVec::Val(out)
        }
        _ => {
            let g = free.iter().fold(BigInt::zero(), |g, (_, m)| g.gcd(m));
            if k.is_multiple_of(&g) {
                a.clone()
            } else {
                ConstVec::Bot
            }
        }
    }
}

fn bca_atom(atom: &Atom, a: &ConstVec) -> ConstVec {
    bca_rel_guard(&atom.expr, atom.rel, a)
}

/// Applies the atoms of a conjunction one after the other, repeating the
/// pass until nothing changes.
fn conj_atoms<'a>(atoms: impl Iterator<Item = &'a Atom> + Clone, a: &ConstVec) -> ConstVec {
    let mut current = a.clone();
    loop {
        let next = atoms.clone().fold(current.clone(), |acc, atom| bca_atom(atom, &acc));
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Conjunctive guards compose the per-row bcas; disjunctive guards join them.
pub fn bca_guard(g: &Guard, a: &ConstVec) -> ConstVec {
    let domain = ConstDomain::new(a.slots().map_or(0, <[ConstVal]>::len));
    match g.mode {
        GuardMode::Conj => conj_atoms(g.atoms.iter(), a),
        GuardMode::Disj => g
            .atoms
            .iter()
            .fold(ConstVec::Bot, |acc, atom| domain.join(&acc, &bca_atom(atom, a))),
    }
}

/// Abstract post of one edge label.
pub fn post(t: &TransferFunction, a: &ConstVec) -> ConstVec {
    match t {
        TransferFunction::Assign(p) => bca_parallel_assign(p, a),
        TransferFunction::Guard(g) => bca_guard(g, a),
        TransferFunction::Identity => a.clone(),
    }
}

/// Abstraction of the weakest precondition `p̃re_t(γ(target))`: the states
/// all of whose `t`-successors lie in `γ(target)`.
///
/// For an assignment, each constant slot `a'_j = k` contributes the
/// constraint `e_j(x) - k = 0` (a havoc row makes it unsatisfiable), and the
/// conjunction is abstracted with the equality-guard bca. For a guard `g`
/// the precondition is `¬g ∪ γ(target)`, abstracted as `α(¬g) ⊔ target`.
pub fn pret(t: &TransferFunction, target: &ConstVec, n: usize) -> ConstVec {
    let domain = ConstDomain::new(n);
    match t {
        TransferFunction::Identity => target.clone(),
        TransferFunction::Assign(p) => {
            let Some(slots) = target.slots() else {
                return ConstVec::Bot;
            };
            let mut atoms = Vec::new();
            for (row, slot) in p.rows.iter().zip(slots) {
                let ConstVal::Int(k) = slot else { continue };
                match row {
                    Rhs::Havoc => return ConstVec::Bot,
                    Rhs::Affine(e) => {
                        let mut c = e.clone();
                        c.constant -= Rational::from_integer((*k).into());
                        atoms.push(Atom::new(c, Rel::Eq));
                    }
                }
            }
            conj_atoms(atoms.iter(), &domain.top())
        }
        TransferFunction::Guard(g) => {
            let negated: Vec<Atom> = g.atoms.iter().map(Atom::negate).collect();
            let not_g = match g.mode {
                GuardMode::Conj => negated
                    .iter()
                    .fold(ConstVec::Bot, |acc, atom| domain.join(&acc, &bca_atom(atom, &domain.top()))),
                GuardMode::Disj => conj_atoms(negated.iter(), &domain.top()),
            };
            domain.join(&not_g, target)
        }
    }
}

/// Abstraction of a literal. Equality constraints are abstracted by running
/// the equality-guard bca on `⊤`, which may over-approximate when several
/// constraints interact.
pub fn from_literal(lit: &Literal, n: usize) -> ConstVec {
    match lit {
        Literal::Top => ConstVec::top(n),
        Literal::Bot => ConstVec::Bot,
        Literal::Tuple(items) => ConstVec::Val(
            items
                .iter()
                .map(|v| v.as_ref().map_or(ConstVal::Top, |r| ConstVal::from_big(&big(r))))
                .collect(),
        ),
        Literal::Points(points) => {
            let ints: Vec<Vec<i64>> = points
                .iter()
                .map(|p| p.iter().map(|r| big(r).to_i64().expect("parser checks range")).collect())
                .collect();
            alpha_points(n, &ints)
        }
        Literal::Constraints(rows) => {
            let atoms: Vec<Atom> = rows.iter().map(|e| Atom::new(e.clone(), Rel::Eq)).collect();
            conj_atoms(atoms.iter(), &ConstVec::top(n))
        }
    }
}

/// Concrete values of the Const Galois insertion: finite point sets and the
/// (possibly infinite) cylinders `γ(a)`. Finite cylinders are stored as point
/// sets so equality is extensional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstConcrete {
    Points(BTreeSet<Vec<i64>>),
    Cylinder(ConstVec),
}

impl ConstConcrete {
    pub fn canonical(self) -> Self {
        match self {
            ConstConcrete::Cylinder(ConstVec::Bot) => ConstConcrete::Points(BTreeSet::new()),
            ConstConcrete::Cylinder(a) => match a.as_point() {
                Some(p) => ConstConcrete::Points([p].into()),
                None => ConstConcrete::Cylinder(a),
            },
            c => c,
        }
    }
}

/// `(℘(ℤⁿ), α_Const, γ_Const, Const_n)`.
#[derive(Debug, Clone, Copy)]
pub struct ConstGi {
    pub domain: ConstDomain,
}

impl GaloisInsertion for ConstGi {
    type Concrete = ConstConcrete;
    type Abstract = ConstVec;

    fn alpha(&self, c: &ConstConcrete) -> ConstVec {
        match c {
            ConstConcrete::Points(ps) => alpha_points(self.domain.n, ps),
            ConstConcrete::Cylinder(a) => a.clone(),
        }
    }

    fn gamma(&self, a: &ConstVec) -> ConstConcrete {
        ConstConcrete::Cylinder(a.clone()).canonical()
    }

    fn concrete_leq(&self, c: &ConstConcrete, d: &ConstConcrete) -> bool {
        match (c.clone().canonical(), d.clone().canonical()) {
            (ConstConcrete::Points(x), ConstConcrete::Points(y)) => x.is_subset(&y),
            (ConstConcrete::Points(x), ConstConcrete::Cylinder(b)) => x.iter().all(|p| b.contains(p)),
            // An infinite cylinder is never inside a finite set.
            (ConstConcrete::Cylinder(_), ConstConcrete::Points(_)) => false,
            (ConstConcrete::Cylinder(a), ConstConcrete::Cylinder(b)) => self.domain.leq(&a, &b),
        }
    }

    fn abstract_leq(&self, a: &ConstVec, b: &ConstVec) -> bool {
        self.domain.leq(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_core::{adjunction_holds, insertion_holds};
    use crate::program_model::{apply_transfer_concrete, PointSet};
    use crate::linalg::int;

    const T: ConstVal = ConstVal::Top;
    const fn k(v: i64) -> ConstVal {
        ConstVal::Int(v)
    }

    fn e(c: &[i64], b: i64) -> LinExpr {
        LinExpr::from_ints(c, b)
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_points(2, &Vec::<Vec<i64>>::new()), ConstVec::Bot);
        assert_eq!(alpha_points(2, &vec![vec![1, 0], vec![-1, 0]]), ConstVec::Val(vec![T, k(0)]));
        assert_eq!(alpha_points(2, &vec![vec![4, 1]]), ConstVec::point(&[4, 1]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_linexpr_abstract(&e(&[1, 2], 0), &ConstVec::point(&[0, 2])), Some(k(4)));
        assert_eq!(eval_linexpr_abstract(&e(&[1, 2], 0), &ConstVec::Val(vec![T, k(2)])), Some(T));
        assert_eq!(eval_linexpr_abstract(&e(&[1, 2], 0), &ConstVec::Bot), None);
        assert_eq!(eval_linexpr_abstract(&e(&[0, 2], 1), &ConstVec::Val(vec![T, k(2)])), Some(k(5)));
    }

    #[test]
    fn assign_examples() {
        assert_eq!(bca_assign(0, &e(&[1, 2], 0), &ConstVec::point(&[0, 2])), ConstVec::point(&[4, 2]));
        assert_eq!(bca_assign(1, &e(&[0, 0], 2), &ConstVec::top(2)), ConstVec::Val(vec![T, k(2)]));
        assert_eq!(bca_assign(1, &e(&[0, 0], 2), &ConstVec::Bot), ConstVec::Bot);
    }

    #[test]
    fn parallel_examples() {
        let a = ParallelAssign::from_matrix(&[vec![int(1), int(2)], vec![int(0), int(1)]], &[int(0), int(-1)]);
        assert_eq!(bca_parallel_assign(&a, &ConstVec::point(&[0, 2])), ConstVec::point(&[4, 1]));
        let b = ParallelAssign::from_matrix(&[vec![int(1), int(-1)], vec![int(0), int(1)]], &[int(0), int(1)]);
        assert_eq!(bca_parallel_assign(&b, &ConstVec::point(&[4, 1])), ConstVec::point(&[3, 2]));
        let id = ParallelAssign::identity(2);
        let x = ConstVec::Val(vec![T, k(7)]);
        assert_eq!(bca_parallel_assign(&id, &x), x);
    }

    #[test]
    fn rel_guard_examples() {
        let g = e(&[1, 0], -9);
        assert_eq!(bca_rel_guard(&g, Rel::Ge, &ConstVec::point(&[0, 2])), ConstVec::Bot);
        let a = ConstVec::Val(vec![T, k(2)]);
        assert_eq!(bca_rel_guard(&g, Rel::Ge, &a), a);
        assert_eq!(bca_rel_guard(&g, Rel::Lt, &ConstVec::Bot), ConstVec::Bot);
    }

    #[test]
    fn eq_guard_examples() {
        assert_eq!(bca_eq_guard(&e(&[1, 0], 0), &ConstVec::Val(vec![T, k(0)])), ConstVec::point(&[0, 0]));
        assert_eq!(bca_eq_guard(&e(&[1, 0], 1), &ConstVec::Val(vec![k(5), T])), ConstVec::Bot);
        assert_eq!(bca_eq_guard(&e(&[2, 0], 1), &ConstVec::top(2)), ConstVec::Bot);
        assert_eq!(bca_eq_guard(&e(&[3, 0], -6), &ConstVec::top(2)), ConstVec::Val(vec![k(2), T]));
        assert_eq!(bca_eq_guard(&e(&[2, 4], 1), &ConstVec::top(2)), ConstVec::Bot);
        assert_eq!(bca_eq_guard(&e(&[2, 3], 1), &ConstVec::top(2)), ConstVec::top(2));
    }

    #[test]
    fn guard_incompleteness_witness() {
        let x: Vec<Vec<i64>> = vec![vec![1, 0], vec![-1, 0]];
        let abs = bca_eq_guard(&e(&[1, 0], 0), &alpha_points(2, &x));
        assert_eq!(abs, ConstVec::point(&[0, 0]));
        let pts: PointSet = x.iter().map(|p| p.iter().map(|&v| int(v)).collect()).collect();
        let image = apply_transfer_concrete(&TransferFunction::guard(e(&[1, 0], 0), Rel::Eq), &pts, &[]);
        assert!(image.is_empty());
    }

    #[test]
    fn relational_assignment_is_not_pointwise_complete() {
        // α(t(X)) = (1, ⊤) while the bca applied to α(X) = (⊤, ⊤) yields (⊤, ⊤).
        let x: Vec<Vec<i64>> = vec![vec![0, 1], vec![1, 0]];
        let t = ParallelAssign::single(0, e(&[1, 1], 0));
        let image: Vec<Vec<i64>> = x.iter().map(|p| vec![p[0] + p[1], p[1]]).collect();
        assert_eq!(alpha_points(2, &image), ConstVec::Val(vec![k(1), T]));
        assert_eq!(bca_parallel_assign(&t, &alpha_points(2, &x)), ConstVec::top(2));
    }

    #[test]
    fn pret_examples() {
        let n = 2;
        let back = ParallelAssign::from_matrix(&[vec![int(1), int(-1)], vec![int(0), int(1)]], &[int(0), int(1)]);
        let t = TransferFunction::Assign(back);
        assert_eq!(pret(&t, &ConstVec::Val(vec![T, k(2)]), n), ConstVec::Val(vec![T, k(1)]));
        assert_eq!(pret(&t, &ConstVec::top(2), n), ConstVec::top(2));
        assert_eq!(pret(&t, &ConstVec::Bot, n), ConstVec::Bot);
        let init = TransferFunction::Assign(ParallelAssign::from_matrix(
            &[vec![int(0), int(0)], vec![int(0), int(0)]],
            &[int(0), int(2)],
        ));
        assert_eq!(pret(&init, &ConstVec::Val(vec![T, k(2)]), n), ConstVec::top(2));
        assert_eq!(pret(&init, &ConstVec::Val(vec![T, k(3)]), n), ConstVec::Bot);
        assert_eq!(pret(&TransferFunction::havoc(2, 1), &ConstVec::Val(vec![T, k(3)]), n), ConstVec::Bot);
        let guard = TransferFunction::guard(e(&[1, 0], -9), Rel::Ge);
        assert_eq!(pret(&guard, &ConstVec::Bot, n), ConstVec::top(2));
        let eq = TransferFunction::guard(e(&[1, 0], 0), Rel::Ne);
        assert_eq!(pret(&eq, &ConstVec::Bot, n), ConstVec::Val(vec![k(0), T]));
    }

    #[test]
    fn lattice_ops() {
        let d = ConstDomain::new(2);
        let a = ConstVec::point(&[1, 2]);
        let b = ConstVec::point(&[1, 3]);
        assert_eq!(d.join(&a, &b), ConstVec::Val(vec![k(1), T]));
        assert_eq!(d.meet(&a, &b), ConstVec::Bot);
        assert_eq!(d.meet(&ConstVec::Val(vec![T, k(2)]), &ConstVec::Val(vec![k(1), T])), a);
        assert!(d.leq(&ConstVec::Bot, &a) && d.leq(&a, &d.top()) && !d.leq(&a, &b));
        assert_eq!(d.height(), Some(4));
    }

    #[test]
    fn closure_examples() {
        let gi = ConstGi { domain: ConstDomain::new(1) };
        let five = ConstConcrete::Points([vec![5]].into());
        assert_eq!(gi.gamma(&gi.alpha(&five)), five);
        let two = ConstConcrete::Points([vec![1], vec![2]].into());
        assert_eq!(gi.gamma(&gi.alpha(&two)), ConstConcrete::Cylinder(ConstVec::top(1)));
        for a in [ConstVec::Bot, ConstVec::point(&[3]), ConstVec::top(1)] {
            assert!(insertion_holds(&gi, &a));
            for c in [&five, &two] {
                assert!(adjunction_holds(&gi, c, &a));
            }
        }
    }

    #[test]
    fn rendering() {
        assert_eq!(ConstVec::Bot.to_string(), "bot");
        assert_eq!(ConstVec::Val(vec![T, k(-2)]).to_string(), "(top, -2)");
    }

    #[test]
    fn overflow_widens_to_top() {
        let a = ConstVec::point(&[i64::MAX, 0]);
        assert_eq!(bca_assign(1, &e(&[2, 0], 0), &a), ConstVec::Val(vec![k(i64::MAX), T]));
    }
}
