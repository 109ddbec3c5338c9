use std::fmt::Write;

use num_traits::{One, Signed, Zero};

use super::{Atom, Guard, GuardMode, LinExpr, Literal, ParallelAssign, Program, Rhs, Sort, TransferFunction};
use crate::Rational;

pub(crate) fn rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// `2*x1 - x2 + 3`, or `0` for the zero expression.
pub fn print_expr(e: &LinExpr) -> String {
    let mut out = String::new();
    for (j, c) in e.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            write!(out, " {sign} ").unwrap();
        }
        let abs = c.abs();
        if !abs.is_one() {
            write!(out, "{}*", rational(&abs)).unwrap();
        }
        write!(out, "x{}", j + 1).unwrap();
    }
    if out.is_empty() {
        return rational(&e.constant);
    }
    if !e.constant.is_zero() {
        let sign = if e.constant.is_negative() { "-" } else { "+" };
        write!(out, " {sign} {}", rational(&e.constant.abs())).unwrap();
    }
    out
}

pub fn print_literal(lit: &Literal) -> String {
    match lit {
        Literal::Top => "top".into(),
        Literal::Bot => "bot".into(),
        Literal::Tuple(items) => {
            let parts: Vec<String> = items
                .iter()
                .map(|v| v.as_ref().map_or_else(|| "top".into(), rational))
                .collect();
            format!("({})", parts.join(", "))
        }
        Literal::Points(points) => {
            let parts: Vec<String> = points
                .iter()
                .map(|p| format!("({})", p.iter().map(rational).collect::<Vec<_>>().join(", ")))
                .collect();
            format!("{{{}}}", parts.join("; "))
        }
        Literal::Constraints(rows) if rows.is_empty() => "0 = 0".into(),
        Literal::Constraints(rows) => rows
            .iter()
            .map(|e| format!("{} = 0", print_expr(e)))
            .collect::<Vec<_>>()
            .join(" /\\ "),
    }
}

fn print_atom(a: &Atom) -> String {
    format!("{} {} 0", print_expr(&a.expr), a.rel.symbol())
}

fn print_guard(g: &Guard) -> String {
    let sep = match g.mode {
        GuardMode::Conj => " and ",
        GuardMode::Disj => " or ",
    };
    let atoms: Vec<String> = g.atoms.iter().map(print_atom).collect();
    format!("assume {}", atoms.join(sep))
}

fn print_assign(a: &ParallelAssign) -> String {
    let stmts: Vec<String> = (0..a.dims())
        .filter(|&j| !a.is_identity_row(j))
        .map(|j| match &a.rows[j] {
            Rhs::Affine(e) => format!("x{} := {}", j + 1, print_expr(e)),
            Rhs::Havoc => format!("x{} := ?", j + 1),
        })
        .collect();
    if stmts.is_empty() && a.dims() > 0 {
        return "x1 := x1".into();
    }
    stmts.join(", ")
}

pub fn print_transfer(t: &TransferFunction) -> String {
    match t {
        TransferFunction::Assign(a) => print_assign(a),
        TransferFunction::Guard(g) => print_guard(g),
        TransferFunction::Identity => "skip".into(),
    }
}

pub(super) fn print_program(p: &Program) -> String {
    let mut out = String::new();
    writeln!(out, "vars {};", p.vars).unwrap();
    let sort = match p.sort {
        Sort::Int => "int",
        Sort::Rat => "rat",
    };
    writeln!(out, "sort {sort};").unwrap();
    if p.nodes.is_empty() {
        writeln!(out, "nodes;").unwrap();
    } else {
        writeln!(out, "nodes {};", p.nodes.join(" ")).unwrap();
    }
    for (q, init) in p.inits.iter().enumerate() {
        if let Some(lit) = init {
            writeln!(out, "init {}: {};", p.nodes[q], print_literal(lit)).unwrap();
        }
    }
    for e in &p.edges {
        let (from, to) = (&p.nodes[e.from], &p.nodes[e.to]);
        match &e.transfer {
            TransferFunction::Identity => writeln!(out, "edge {from} -> {to};").unwrap(),
            t => writeln!(out, "edge {from} -> {to} : {};", print_transfer(t)).unwrap(),
        }
    }
    out
}
