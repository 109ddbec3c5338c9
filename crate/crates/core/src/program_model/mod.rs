//! Control-flow-graph programs `⟨Q, n, V, T, →⟩`: nodes, affine transfer
//! functions on edges, declared initial states, and a line-oriented text
//! format.
//!
//! Multi-assignment edge labels such as `x1 := x1 + 2*x2, x2 := x2 - 1` are
//! *parallel*: every right-hand side reads the values from before the edge.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{dot, int, zeros};
use crate::Rational;

mod parser;
mod text;

pub use parser::{parse_affine_literal_expr, parse_literal, parse_program, ParseError, ParseErrorKind};
pub use text::{print_expr, print_literal, print_transfer};

/// The value sort of the program variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Int,
    Rat,
}

/// `Σ m_i x_i + b` over `n` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinExpr {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl LinExpr {
    pub fn new(coeffs: Vec<Rational>, constant: Rational) -> Self {
        Self { coeffs, constant }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(zeros(n), Rational::zero())
    }

    /// The expression `x_j` (0-based `j`).
    pub fn var(n: usize, j: usize) -> Self {
        let mut e = Self::zero(n);
        e.coeffs[j] = Rational::one();
        e
    }

    pub fn from_ints(coeffs: &[i64], constant: i64) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect(), int(constant))
    }

    pub fn dims(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        dot(&self.coeffs, point) + &self.constant
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().chain([&self.constant]).all(|c| c.is_integer())
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        LinExpr::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
            &self.constant - &other.constant,
        )
    }

    pub fn is_var(&self, j: usize) -> bool {
        self.constant.is_zero()
            && self
                .coeffs
                .iter()
                .enumerate()
                .all(|(i, c)| if i == j { c.is_one() } else { c.is_zero() })
    }
}

/// Comparison of an expression against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub const ALL: [Rel; 6] = [Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Rel> {
        Rel::ALL.into_iter().find(|r| r.symbol() == s)
    }

    /// Whether `value ⋈ 0`.
    pub fn holds<T: Signed>(self, value: &T) -> bool {
        match self {
            Rel::Eq => value.is_zero(),
            Rel::Ne => !value.is_zero(),
            Rel::Lt => value.is_negative(),
            Rel::Le => !value.is_positive(),
            Rel::Gt => value.is_positive(),
            Rel::Ge => !value.is_negative(),
        }
    }

    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    pub fn is_inequality(self) -> bool {
        !matches!(self, Rel::Eq | Rel::Ne)
    }
}

/// One guard row `e ⋈ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub expr: LinExpr,
    pub rel: Rel,
}

impl Atom {
    pub fn new(expr: LinExpr, rel: Rel) -> Self {
        Self { expr, rel }
    }

    pub fn holds(&self, point: &[Rational]) -> bool {
        self.rel.holds(&self.expr.eval(point))
    }

    pub fn negate(&self) -> Atom {
        Atom::new(self.expr.clone(), self.rel.negate())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuardMode {
    Conj,
    Disj,
}

/// A conjunction or disjunction of guard rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Guard {
    pub atoms: Vec<Atom>,
    pub mode: GuardMode,
}

impl Guard {
    pub fn single(atom: Atom) -> Self {
        Self {
            atoms: vec![atom],
            mode: GuardMode::Conj,
        }
    }

    pub fn holds(&self, point: &[Rational]) -> bool {
        match self.mode {
            GuardMode::Conj => self.atoms.iter().all(|a| a.holds(point)),
            GuardMode::Disj => self.atoms.iter().any(|a| a.holds(point)),
        }
    }

    /// Equality-only guards (the `t_b^=` family).
    pub fn is_equality(&self) -> bool {
        self.atoms.iter().all(|a| a.rel == Rel::Eq)
    }
}

/// Right-hand side of one row of a parallel assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rhs {
    Affine(LinExpr),
    /// `x_j := ?`
    Havoc,
}

/// `x⃗ := M x⃗ + b⃗`, possibly with nondeterministic rows. Row `j` is the new
/// value of `x_{j+1}`; all rows read the old values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParallelAssign {
    pub rows: Vec<Rhs>,
}

impl ParallelAssign {
    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|j| Rhs::Affine(LinExpr::var(n, j))).collect(),
        }
    }

    /// `x_j := e` with every other variable unchanged.
    pub fn single(j: usize, expr: LinExpr) -> Self {
        let mut a = Self::identity(expr.dims());
        a.rows[j] = Rhs::Affine(expr);
        a
    }

    /// `x_j := ?`.
    pub fn havoc(n: usize, j: usize) -> Self {
        let mut a = Self::identity(n);
        a.rows[j] = Rhs::Havoc;
        a
    }

    /// From a matrix `M` (row-major) and vector `b`.
    pub fn from_matrix(matrix: &[Vec<Rational>], b: &[Rational]) -> Self {
        Self {
            rows: matrix
                .iter()
                .zip(b)
                .map(|(row, c)| Rhs::Affine(LinExpr::new(row.clone(), c.clone())))
                .collect(),
        }
    }

    pub fn dims(&self) -> usize {
        self.rows.len()
    }

    pub fn has_havoc(&self) -> bool {
        self.rows.iter().any(|r| matches!(r, Rhs::Havoc))
    }

    /// Whether row `j` leaves `x_j` unchanged.
    pub fn is_identity_row(&self, j: usize) -> bool {
        matches!(&self.rows[j], Rhs::Affine(e) if e.is_var(j))
    }
}

/// The label of a CFG edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TransferFunction {
    Assign(ParallelAssign),
    Guard(Guard),
    Identity,
}

impl TransferFunction {
    pub fn assign(j: usize, expr: LinExpr) -> Self {
        TransferFunction::Assign(ParallelAssign::single(j, expr))
    }

    pub fn havoc(n: usize, j: usize) -> Self {
        TransferFunction::Assign(ParallelAssign::havoc(n, j))
    }

    pub fn guard(expr: LinExpr, rel: Rel) -> Self {
        TransferFunction::Guard(Guard::single(Atom::new(expr, rel)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub transfer: TransferFunction,
}

/// A literal describing a set of states at one node: `top`, `bot`, a tuple
/// of constants (with `top` slots), a finite point set, or a conjunction of
/// affine equalities `e = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Top,
    Bot,
    Tuple(Vec<Option<Rational>>),
    Points(Vec<Vec<Rational>>),
    Constraints(Vec<LinExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub vars: usize,
    pub sort: Sort,
    pub nodes: Vec<String>,
    /// Declared initial states per node; `None` means `bot`.
    pub inits: Vec<Option<Literal>>,
    pub edges: Vec<Edge>,
}

impl Program {
    pub fn new(vars: usize, sort: Sort, nodes: Vec<String>) -> Self {
        let inits = vec![None; nodes.len()];
        Self {
            vars,
            sort,
            nodes,
            inits,
            edges: Vec::new(),
        }
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn add_edge(&mut self, from: usize, transfer: TransferFunction, to: usize) {
        self.edges.push(Edge { from, to, transfer });
    }

    /// All edges `(q, t)` with target `target`, in declaration order.
    pub fn post_edges_into(&self, target: usize) -> Vec<(usize, &TransferFunction)> {
        self.edges
            .iter()
            .filter(|e| e.to == target)
            .map(|e| (e.from, &e.transfer))
            .collect()
    }

    /// All edges `(t, q')` leaving `source`, in declaration order.
    pub fn edges_from(&self, source: usize) -> Vec<(&TransferFunction, usize)> {
        self.edges
            .iter()
            .filter(|e| e.from == source)
            .map(|e| (&e.transfer, e.to))
            .collect()
    }

    /// Canonical text in the program file format.
    pub fn to_text(&self) -> String {
        text::print_program(self)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub type PointSet = BTreeSet<Vec<Rational>>;

/// Collecting semantics of `t` on a finite set of points. Havoc rows range
/// over `witnesses` only, a finite stand-in for the infinite branching.
pub fn apply_transfer_concrete(
    t: &TransferFunction,
    points: &PointSet,
    witnesses: &[Rational],
) -> PointSet {
    match t {
        TransferFunction::Identity => points.clone(),
        TransferFunction::Guard(g) => points.iter().filter(|p| g.holds(p)).cloned().collect(),
        TransferFunction::Assign(a) => {
            let mut out = PointSet::new();
            for p in points {
                let base: Vec<Option<Rational>> = a
                    .rows
                    .iter()
                    .map(|r| match r {
                        Rhs::Affine(e) => Some(e.eval(p)),
                        Rhs::Havoc => None,
                    })
                    .collect();
                expand_havoc(&base, 0, &mut Vec::with_capacity(base.len()), witnesses, &mut out);
            }
            out
        }
    }
}

fn expand_havoc(
    base: &[Option<Rational>],
    i: usize,
    acc: &mut Vec<Rational>,
    witnesses: &[Rational],
    out: &mut PointSet,
) {
    if i == base.len() {
        out.insert(acc.clone());
        return;
    }
    match &base[i] {
        Some(v) => {
            acc.push(v.clone());
            expand_havoc(base, i + 1, acc, witnesses, out);
            acc.pop();
        }
        None => {
            for w in witnesses {
                acc.push(w.clone());
                expand_havoc(base, i + 1, acc, witnesses, out);
                acc.pop();
            }
        }
    }
}
