//! Karr's affine-equalities domain over exact rationals.
//!
//! A non-empty subspace is kept in generator form: a base point plus a
//! basis of directions in reduced row-echelon form, with the point zeroed on
//! the pivot columns. That form is unique, so structural equality coincides
//! with equality of point sets.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::lattice_core::{AbstractDomain, GaloisInsertion};
use crate::linalg::{dot, int, null_space, rref, solve, sub, zeros, Echelon, Vector};
use crate::program_model::{
    print_expr, Atom, Guard, GuardMode, LinExpr, Literal, ParallelAssign, Rel, Rhs, TransferFunction,
};
use crate::Rational;

/// An element of `Aff` over `ℚⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AffSubspace {
    Empty,
    Space { point: Vector, basis: Vec<Vector> },
}

/// `{x | M x + c = 0}` with `[M | c]` in reduced row-echelon form. The empty
/// subspace is the single row `0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintForm {
    pub matrix: Vec<Vector>,
    pub constants: Vector,
}

impl ConstraintForm {
    /// The rows as expressions `e(x) = 0`.
    pub fn rows(&self) -> Vec<LinExpr> {
        self.matrix
            .iter()
            .zip(&self.constants)
            .map(|(m, c)| LinExpr::new(m.clone(), c.clone()))
            .collect()
    }

    pub fn from_rows(rows: &[LinExpr], n: usize) -> Self {
        let augmented: Vec<Vector> = rows
            .iter()
            .map(|e| {
                let mut r = e.coeffs.clone();
                r.push(e.constant.clone());
                r
            })
            .collect();
        let e = rref(augmented, n + 1);
        let (matrix, constants) = e
            .rows
            .into_iter()
            .map(|mut r| {
                let c = r.pop().expect("augmented row");
                (r, c)
            })
            .unzip();
        Self { matrix, constants }
    }
}

impl AffSubspace {
    /// Canonical subspace `point + span(directions)`.
    pub fn new(point: Vector, directions: Vec<Vector>) -> Self {
        let n = point.len();
        let e = rref(directions, n);
        let point = e.reduce(&point);
        AffSubspace::Space { point, basis: e.rows }
    }

    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|j| {
                let mut v = zeros(n);
                v[j] = Rational::one();
                v
            })
            .collect();
        AffSubspace::Space { point: zeros(n), basis }
    }

    pub fn point(p: Vector) -> Self {
        AffSubspace::Space { point: p, basis: Vec::new() }
    }

    pub fn point_ints(p: &[i64]) -> Self {
        Self::point(p.iter().map(|&v| int(v)).collect())
    }

    /// Affine hull of a finite set of points in `ℚⁿ`.
    pub fn hull<'a, I>(n: usize, points: I) -> Self
    where
        I: IntoIterator<Item = &'a Vector>,
    {
        let mut iter = points.into_iter();
        let Some(first) = iter.next() else {
            return AffSubspace::Empty;
        };
        debug_assert_eq!(first.len(), n);
        let directions = iter.map(|p| sub(p, first)).collect();
        Self::new(first.clone(), directions)
    }

    /// `-1` for the empty subspace.
    pub fn dim(&self) -> isize {
        match self {
            AffSubspace::Empty => -1,
            AffSubspace::Space { basis, .. } => basis.len() as isize,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, AffSubspace::Empty)
    }

    /// The canonical basis viewed as an echelon form.
    fn echelon(basis: &[Vector]) -> Echelon {
        Echelon {
            rows: basis.to_vec(),
            pivots: basis
                .iter()
                .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero basis row"))
                .collect(),
        }
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        match self {
            AffSubspace::Empty => false,
            AffSubspace::Space { point, basis } => {
                Self::echelon(basis).spans(&sub(p, point))
            }
        }
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &AffSubspace) -> bool {
        match (self, other) {
            (_, AffSubspace::Empty) => true,
            (AffSubspace::Empty, _) => false,
            (AffSubspace::Space { point, basis }, AffSubspace::Space { point: q, basis: dirs }) => {
                let e = Self::echelon(basis);
                e.spans(&sub(q, point)) && dirs.iter().all(|d| e.spans(d))
            }
        }
    }

    /// Affine hull of the union.
    pub fn join(&self, other: &AffSubspace) -> AffSubspace {
        match (self, other) {
            (AffSubspace::Empty, x) | (x, AffSubspace::Empty) => x.clone(),
            (AffSubspace::Space { point, basis }, AffSubspace::Space { point: q, basis: dirs }) => {
                let mut directions = basis.clone();
                directions.extend(dirs.iter().cloned());
                directions.push(sub(q, point));
                Self::new(point.clone(), directions)
            }
        }
    }

    /// `self ∩ {x | e(x) = 0}`.
    pub fn meet_hyperplane(&self, e: &LinExpr) -> AffSubspace {
        let AffSubspace::Space { point, basis } = self else {
            return AffSubspace::Empty;
        };
        let value = e.eval(point);
        let d: Vec<Rational> = basis.iter().map(|b| dot(&e.coeffs, b)).collect();
        let Some(i) = d.iter().position(|x| !x.is_zero()) else {
            return if value.is_zero() { self.clone() } else { AffSubspace::Empty };
        };
        let bi = &basis[i];
        let shift = &value / &d[i];
        let new_point: Vector = point.iter().zip(bi).map(|(p, b)| p - &shift * b).collect();
        let directions = basis
            .iter()
            .zip(&d)
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, (b, dk))| {
                let f = dk / &d[i];
                b.iter().zip(bi).map(|(x, y)| x - &f * y).collect()
            })
            .collect();
        Self::new(new_point, directions)
    }

    pub fn meet(&self, other: &AffSubspace) -> AffSubspace {
        match other {
            AffSubspace::Empty => AffSubspace::Empty,
            AffSubspace::Space { .. } => other
                .to_constraints()
                .rows()
                .iter()
                .fold(self.clone(), |acc, e| acc.meet_hyperplane(e)),
        }
    }

    pub fn to_constraints(&self) -> ConstraintForm {
        match self {
            AffSubspace::Empty => ConstraintForm {
                matrix: vec![Vec::new()],
                constants: vec![Rational::one()],
            },
            AffSubspace::Space { point, basis } => {
                let n = point.len();
                let normals = null_space(basis.clone(), n);
                let rows: Vec<LinExpr> = normals
                    .into_iter()
                    .map(|w| {
                        let c = -dot(&w, point);
                        LinExpr::new(w, c)
                    })
                    .collect();
                ConstraintForm::from_rows(&rows, n)
            }
        }
    }

    /// The solution set of a constraint system over `ℚⁿ`.
    pub fn from_constraints(cf: &ConstraintForm, n: usize) -> AffSubspace {
        let matrix: Vec<Vector> = cf
            .matrix
            .iter()
            .map(|r| if r.is_empty() { zeros(n) } else { r.clone() })
            .collect();
        let rhs: Vector = cf.constants.iter().map(|c| -c.clone()).collect();
        match solve(&matrix, &rhs, n) {
            Some((p, kernel)) => Self::new(p, kernel),
            None => AffSubspace::Empty,
        }
    }

    /// Exact image under a parallel assignment. Havoc rows contribute the
    /// direction `e_j`.
    pub fn image(&self, t: &ParallelAssign) -> AffSubspace {
        let AffSubspace::Space { point, basis } = self else {
            return AffSubspace::Empty;
        };
        let n = point.len();
        let apply_linear = |v: &Vector| -> Vector {
            t.rows
                .iter()
                .map(|r| match r {
                    Rhs::Affine(e) => dot(&e.coeffs, v),
                    Rhs::Havoc => Rational::zero(),
                })
                .collect()
        };
        let new_point: Vector = t
            .rows
            .iter()
            .map(|r| match r {
                Rhs::Affine(e) => e.eval(point),
                Rhs::Havoc => Rational::zero(),
            })
            .collect();
        let mut directions: Vec<Vector> = basis.iter().map(apply_linear).collect();
        for (j, r) in t.rows.iter().enumerate() {
            if matches!(r, Rhs::Havoc) {
                let mut v = zeros(n);
                v[j] = Rational::one();
                directions.push(v);
            }
        }
        Self::new(new_point, directions)
    }
}

/// Best correct approximation of `x⃗ := M x⃗ + b⃗`.
pub fn bca_parallel_assign(t: &ParallelAssign, a: &AffSubspace) -> AffSubspace {
    a.image(t)
}

/// `x_j := ?` as the join of the `x_j := 0` and `x_j := 1` images.
pub fn bca_nondet_assign(j: usize, a: &AffSubspace) -> AffSubspace {
    let AffSubspace::Space { point, .. } = a else {
        return AffSubspace::Empty;
    };
    let n = point.len();
    let to = |v: i64| {
        let mut e = LinExpr::zero(n);
        e.constant = int(v);
        a.image(&ParallelAssign::single(j, e))
    };
    to(0).join(&to(1))
}

/// `x ≠ 0` guards are approximated by the identity.
pub fn guard_neq_identity(a: &AffSubspace) -> AffSubspace {
    a.clone()
}

fn guard_atom(atom: &Atom, a: &AffSubspace) -> AffSubspace {
    match atom.rel {
        Rel::Eq => a.meet_hyperplane(&atom.expr),
        _ => guard_neq_identity(a),
    }
}

/// Conjunctions fold the hyperplane meets, disjunctions join them.
pub fn bca_guard(g: &Guard, a: &AffSubspace) -> AffSubspace {
    match g.mode {
        GuardMode::Conj => g.atoms.iter().fold(a.clone(), |acc, atom| guard_atom(atom, &acc)),
        GuardMode::Disj => g
            .atoms
            .iter()
            .fold(AffSubspace::Empty, |acc, atom| acc.join(&guard_atom(atom, a))),
    }
}

/// Abstract post of one edge label.
pub fn post(t: &TransferFunction, a: &AffSubspace) -> AffSubspace {
    match t {
        TransferFunction::Assign(p) => bca_parallel_assign(p, a),
        TransferFunction::Guard(g) => bca_guard(g, a),
        TransferFunction::Identity => a.clone(),
    }
}

/// Abstraction of a literal. A tuple with `top` slots denotes the subspace
/// where those coordinates are free.
pub fn from_literal(lit: &Literal, n: usize) -> AffSubspace {
    match lit {
        Literal::Top => AffSubspace::full(n),
        Literal::Bot => AffSubspace::Empty,
        Literal::Tuple(items) => {
            let point = items.iter().map(|v| v.clone().unwrap_or_else(Rational::zero)).collect();
            let directions = items
                .iter()
                .enumerate()
                .filter(|(_, v)| v.is_none())
                .map(|(j, _)| {
                    let mut d = zeros(n);
                    d[j] = Rational::one();
                    d
                })
                .collect();
            AffSubspace::new(point, directions)
        }
        Literal::Points(points) => AffSubspace::hull(n, points),
        Literal::Constraints(rows) => {
            AffSubspace::from_constraints(&ConstraintForm::from_rows(rows, n), n)
        }
    }
}

/// Scales a row to coprime integers with a positive leading coefficient.
fn integer_row(e: &LinExpr) -> LinExpr {
    let all: Vec<&Rational> = e.coeffs.iter().chain([&e.constant]).collect();
    let lcm = all.iter().fold(num_bigint::BigInt::one(), |l, c| l.lcm(c.denom()));
    let scaled: Vec<num_bigint::BigInt> = all.iter().map(|c| (*c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut g = scaled.iter().fold(num_bigint::BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        g = num_bigint::BigInt::one();
    }
    if scaled.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
        g = -g;
    }
    let mut out: Vec<Rational> = scaled.into_iter().map(|v| Rational::from_integer(v / &g)).collect();
    let constant = out.pop().expect("constant column");
    LinExpr::new(out, constant)
}

impl fmt::Display for AffSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffSubspace::Empty => f.write_str("bot"),
            AffSubspace::Space { .. } => {
                let rows = self.to_constraints().rows();
                if rows.is_empty() {
                    return f.write_str("top");
                }
                let parts: Vec<String> = rows
                    .iter()
                    .map(|e| format!("{} = 0", print_expr(&integer_row(e))))
                    .collect();
                f.write_str(&parts.join(" /\\ "))
            }
        }
    }
}

/// `Aff` for a fixed number of variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffDomain {
    pub n: usize,
}

impl AffDomain {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl AbstractDomain for AffDomain {
    type Elem = AffSubspace;

    fn leq(&self, a: &AffSubspace, b: &AffSubspace) -> bool {
        b.includes(a)
    }

    fn join(&self, a: &AffSubspace, b: &AffSubspace) -> AffSubspace {
        a.join(b)
    }

    fn meet(&self, a: &AffSubspace, b: &AffSubspace) -> AffSubspace {
        a.meet(b)
    }

    fn bottom(&self) -> AffSubspace {
        AffSubspace::Empty
    }

    fn top(&self) -> AffSubspace {
        AffSubspace::full(self.n)
    }

    fn height(&self) -> Option<usize> {
        Some(self.n + 1)
    }

    fn canonicalize(&self, a: AffSubspace) -> AffSubspace {
        match a {
            AffSubspace::Empty => a,
            AffSubspace::Space { point, basis } => AffSubspace::new(point, basis),
        }
    }
}

/// Concrete values of the Aff Galois insertion: finite point sets and
/// subspaces. Zero-dimensional subspaces are stored as point sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffConcrete {
    Points(BTreeSet<Vector>),
    Space(AffSubspace),
}

impl AffConcrete {
    pub fn canonical(self) -> Self {
        match self {
            AffConcrete::Space(AffSubspace::Empty) => AffConcrete::Points(BTreeSet::new()),
            AffConcrete::Space(AffSubspace::Space { point, basis }) if basis.is_empty() => {
                AffConcrete::Points([point].into())
            }
            c => c,
        }
    }
}

/// `(℘(ℚⁿ), aff, id, Aff)`.
#[derive(Debug, Clone, Copy)]
pub struct AffGi {
    pub domain: AffDomain,
}

impl GaloisInsertion for AffGi {
    type Concrete = AffConcrete;
    type Abstract = AffSubspace;

    fn alpha(&self, c: &AffConcrete) -> AffSubspace {
        match c {
            AffConcrete::Points(ps) => AffSubspace::hull(self.domain.n, ps),
            AffConcrete::Space(a) => a.clone(),
        }
    }

    fn gamma(&self, a: &AffSubspace) -> AffConcrete {
        AffConcrete::Space(a.clone()).canonical()
    }

    fn concrete_leq(&self, c: &AffConcrete, d: &AffConcrete) -> bool {
        match (c.clone().canonical(), d.clone().canonical()) {
            (AffConcrete::Points(x), AffConcrete::Points(y)) => x.is_subset(&y),
            (AffConcrete::Points(x), AffConcrete::Space(b)) => x.iter().all(|p| b.contains(p)),
            // A subspace of positive dimension is infinite.
            (AffConcrete::Space(_), AffConcrete::Points(_)) => false,
            (AffConcrete::Space(a), AffConcrete::Space(b)) => b.includes(&a),
        }
    }

    fn abstract_leq(&self, a: &AffSubspace, b: &AffSubspace) -> bool {
        b.includes(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_core::{adjunction_holds, insertion_holds};

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn e(c: &[i64], b: i64) -> LinExpr {
        LinExpr::from_ints(c, b)
    }

    fn line() -> AffSubspace {
        from_literal(&Literal::Constraints(vec![e(&[1, 2, 0], 0), e(&[0, 0, 1], -1)]), 3)
    }

    #[test]
    fn includes_examples() {
        let p = AffSubspace::point_ints(&[-2, 1, 1]);
        assert!(p.includes(&AffSubspace::Empty));
        assert!(line().includes(&p));
        assert!(!p.includes(&line()));
    }

    #[test]
    fn join_examples() {
        let a = AffSubspace::point_ints(&[0, 0]);
        assert_eq!(a.join(&AffSubspace::Empty), a);
        let l = a.join(&AffSubspace::point_ints(&[2, 2]));
        assert_eq!(l, AffSubspace::Space { point: v(&[0, 0]), basis: vec![v(&[1, 1])] });
        assert_eq!(AffSubspace::point_ints(&[-2, 1, 1]).join(&line()), line());
    }

    #[test]
    fn meet_examples() {
        assert_eq!(line().meet_hyperplane(&e(&[1, 0, 2], 0)), AffSubspace::point_ints(&[-2, 1, 1]));
        assert_eq!(AffSubspace::Empty.meet_hyperplane(&e(&[1, 0], 0)), AffSubspace::Empty);
        let h = AffSubspace::full(2).meet_hyperplane(&e(&[1, 0], 0));
        assert_eq!(h.dim(), 1);
        assert!(h.contains(&v(&[0, 5])) && !h.contains(&v(&[1, 0])));
        assert_eq!(line().meet(&AffSubspace::full(3)), line());
        assert_eq!(AffSubspace::point_ints(&[1]).meet(&AffSubspace::point_ints(&[2])), AffSubspace::Empty);
    }

    #[test]
    fn constraint_round_trip() {
        let p = AffSubspace::point_ints(&[-2, 1, 1]);
        assert_eq!(p.to_string(), "x1 + 2 = 0 /\\ x2 - 1 = 0 /\\ x3 - 1 = 0");
        assert!(AffSubspace::full(3).to_constraints().rows().is_empty());
        assert_eq!(AffSubspace::full(3).to_string(), "top");
        assert_eq!(line(), AffSubspace::Space { point: v(&[0, 0, 1]), basis: vec![vec![int(1), Rational::new((-1).into(), 2.into()), int(0)]] });
        assert_eq!(line().to_string(), "x1 + 2*x2 = 0 /\\ x3 - 1 = 0");
        for s in [p, line(), AffSubspace::full(2), AffSubspace::Empty] {
            let n = match &s { AffSubspace::Space { point, .. } => point.len(), AffSubspace::Empty => 2 };
            assert_eq!(AffSubspace::from_constraints(&s.to_constraints(), n), s);
        }
        assert_eq!(AffSubspace::Empty.to_string(), "bot");
    }

    #[test]
    fn assignment_examples() {
        let init = ParallelAssign::from_matrix(&vec![zeros(3); 3], &v(&[-2, 1, 1]));
        assert_eq!(AffSubspace::full(3).image(&init), AffSubspace::point_ints(&[-2, 1, 1]));
        let left = ParallelAssign::from_matrix(&[v(&[0, -2, 0]), v(&[0, 1, 1]), v(&[0, 0, 1])], &v(&[-2, 0, 0]));
        assert_eq!(line().image(&left), line());
        assert_eq!(line().image(&ParallelAssign::identity(3)), line());
    }

    #[test]
    fn nondet_examples() {
        let r = bca_nondet_assign(0, &AffSubspace::point_ints(&[5, 7]));
        assert_eq!(r, AffSubspace::Space { point: v(&[0, 7]), basis: vec![v(&[1, 0])] });
        assert_eq!(bca_nondet_assign(0, &AffSubspace::Empty), AffSubspace::Empty);
        assert_eq!(r, AffSubspace::point_ints(&[5, 7]).image(&ParallelAssign::havoc(2, 0)));
    }

    #[test]
    fn neq_guard_is_identity() {
        let p = AffSubspace::point_ints(&[0, 0]);
        let t = TransferFunction::guard(e(&[1, 0], 0), Rel::Ne);
        assert_eq!(post(&t, &p), p);
        assert_eq!(post(&t, &AffSubspace::Empty), AffSubspace::Empty);
    }

    #[test]
    fn guard_incompleteness_witness() {
        let hull = AffSubspace::hull(2, &[v(&[1, 0]), v(&[-1, 0])]);
        assert_eq!(hull.meet_hyperplane(&e(&[1, 0], 0)), AffSubspace::point_ints(&[0, 0]));
    }

    #[test]
    fn galois_insertion_laws() {
        let gi = AffGi { domain: AffDomain::new(2) };
        let sets = [
            AffConcrete::Points(BTreeSet::new()),
            AffConcrete::Points([v(&[1, 0]), v(&[-1, 0])].into()),
            AffConcrete::Points([v(&[3, 3])].into()),
        ];
        let elems = [
            AffSubspace::Empty,
            AffSubspace::point_ints(&[3, 3]),
            AffSubspace::full(2).meet_hyperplane(&e(&[0, 1], 0)),
            AffSubspace::full(2),
        ];
        for a in &elems {
            assert!(insertion_holds(&gi, a));
            for c in &sets {
                assert!(adjunction_holds(&gi, c, a));
            }
        }
    }

    #[test]
    fn rendering_clears_denominators() {
        let s = AffSubspace::full(2).meet_hyperplane(&LinExpr::new(
            vec![Rational::new(1.into(), 2.into()), Rational::new(1.into(), 3.into())],
            Rational::new((-1).into(), 6.into()),
        ));
        assert_eq!(s.to_string(), "3*x1 + 2*x2 - 1 = 0");
    }
}
