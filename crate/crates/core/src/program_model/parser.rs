use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{
    Atom, Edge, Guard, GuardMode, LinExpr, Literal, ParallelAssign, Program, Rel, Rhs, Sort,
    TransferFunction,
};
use crate::linalg::zeros;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    ArityMismatch { expected: usize, found: usize },
    UnknownNode(String),
    UnknownRelation(String),
    UnknownVariable(String),
    DuplicateNode(String),
    DuplicateInit(String),
    DuplicateAssignment(String),
    /// A construct not allowed for the program's sort.
    Sort(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {expected} components, found {found}")
            }
            ParseErrorKind::UnknownNode(n) => write!(f, "unknown node {n}"),
            ParseErrorKind::UnknownRelation(r) => write!(f, "unknown relation symbol {r}"),
            ParseErrorKind::UnknownVariable(v) => write!(f, "unknown variable {v}"),
            ParseErrorKind::DuplicateNode(n) => write!(f, "duplicate node {n}"),
            ParseErrorKind::DuplicateInit(n) => write!(f, "duplicate init for node {n}"),
            ParseErrorKind::DuplicateAssignment(v) => write!(f, "variable {v} assigned twice"),
            ParseErrorKind::Sort(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(BigInt),
    /// Punctuation: `; : , ( ) { } + - * / ? := -> /\`
    Punct(&'static str),
    /// A run of `=!<>` characters.
    Rel(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Rel(r) => write!(f, "`{r}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn err<T>(line: usize, column: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { line, column, kind })
}

fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (lno, col) = (li + 1, i + 1);
            let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: lno, column: col });
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                push(&mut out, Tok::Num(digits.parse().expect("digit run")));
            } else if c == ':' && chars.get(i + 1) == Some(&'=') {
                push(&mut out, Tok::Punct(":="));
                i += 2;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                push(&mut out, Tok::Punct("->"));
                i += 2;
            } else if c == '/' && chars.get(i + 1) == Some(&'\\') {
                push(&mut out, Tok::Punct("/\\"));
                i += 2;
            } else if "=!<>".contains(c) {
                let start = i;
                while i < chars.len() && "=!<>".contains(chars[i]) {
                    i += 1;
                }
                push(&mut out, Tok::Rel(chars[start..i].iter().collect()));
            } else {
                let p = match c {
                    ';' => ";",
                    ':' => ":",
                    ',' => ",",
                    '(' => "(",
                    ')' => ")",
                    '{' => "{",
                    '}' => "}",
                    '+' => "+",
                    '-' => "-",
                    '*' => "*",
                    '/' => "/",
                    '?' => "?",
                    _ => {
                        return err(lno, col, ParseErrorKind::Syntax(format!("unexpected character `{c}`")))
                    }
                };
                push(&mut out, Tok::Punct(p));
                i += 1;
            }
        }
    }
    let line = src.lines().count().max(1);
    let column = src.lines().last().map_or(0, |l| l.chars().count()) + 1;
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    vars: Option<usize>,
    sort: Sort,
}

impl Parser {
    fn new(src: &str, vars: Option<usize>, sort: Sort) -> Result<Self, ParseError> {
        Ok(Self {
            toks: tokenize(src)?,
            pos: 0,
            vars,
            sort,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        let (l, c) = self.here();
        err(l, c, kind)
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.fail(ParseErrorKind::Syntax(format!("expected {wanted}, found {}", self.peek())))
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_ident(&mut self, word: &str) -> bool {
        if self.is_ident(word) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            self.unexpected(&format!("`{p}`"))
        }
    }

    fn ident(&mut self, wanted: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.unexpected(wanted),
        }
    }

    fn nvars(&self) -> Result<usize, ParseError> {
        match self.vars {
            Some(n) => Ok(n),
            None => self.fail(ParseErrorKind::Syntax("`vars` must be declared first".into())),
        }
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    /// `xj` with `1 ≤ j ≤ n`, returned 0-based.
    fn variable(&mut self) -> Result<usize, ParseError> {
        let n = self.nvars()?;
        let (l, c) = self.here();
        let name = self.ident("a variable")?;
        match var_index(&name) {
            Some(j) if j >= 1 && j <= n => Ok(j - 1),
            _ => err(l, c, ParseErrorKind::UnknownVariable(name)),
        }
    }

    fn is_variable(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if var_index(s).is_some())
    }

    /// Unsigned `p` or `p/q`.
    fn number(&mut self) -> Result<Rational, ParseError> {
        let Tok::Num(p) = self.peek().clone() else {
            return self.unexpected("a number");
        };
        self.bump();
        if matches!(self.peek(), Tok::Punct("/")) && matches!(self.peek_at(1), Tok::Num(_)) {
            self.bump();
            let (l, c) = self.here();
            let Tok::Num(q) = self.bump() else { unreachable!() };
            if q.is_zero() {
                return err(l, c, ParseErrorKind::Syntax("zero denominator".into()));
            }
            return Ok(Rational::new(p, q));
        }
        Ok(Rational::from_integer(p))
    }

    fn signed_number(&mut self) -> Result<Rational, ParseError> {
        let neg = if self.eat_punct("-") {
            true
        } else {
            self.eat_punct("+");
            false
        };
        let v = self.number()?;
        Ok(if neg { -v } else { v })
    }

    fn expr(&mut self) -> Result<LinExpr, ParseError> {
        let n = self.nvars()?;
        let mut e = LinExpr::new(zeros(n), Rational::zero());
        let mut first = true;
        loop {
            let neg = if self.eat_punct("-") {
                true
            } else if self.eat_punct("+") || first {
                false
            } else {
                break;
            };
            first = false;
            let mut coeff = Rational::from_integer(1.into());
            let mut has_coeff = false;
            let mut star = false;
            if matches!(self.peek(), Tok::Num(_)) {
                coeff = self.number()?;
                has_coeff = true;
                star = self.eat_punct("*");
            }
            if neg {
                coeff = -coeff;
            }
            if self.is_variable() || star {
                let j = self.variable()?;
                e.coeffs[j] += coeff;
            } else if has_coeff {
                e.constant += coeff;
            } else {
                return self.unexpected("a number or variable");
            }
        }
        Ok(e)
    }

    fn relation(&mut self) -> Result<Rel, ParseError> {
        match self.peek().clone() {
            Tok::Rel(s) => match Rel::from_symbol(&s) {
                Some(r) => {
                    self.bump();
                    Ok(r)
                }
                None => self.fail(ParseErrorKind::UnknownRelation(s)),
            },
            _ => self.unexpected("a relation"),
        }
    }

    fn check_expr_sort(&self, e: &LinExpr, at: (usize, usize)) -> Result<(), ParseError> {
        if self.sort == Sort::Int && !e.is_integral() {
            return err(at.0, at.1, ParseErrorKind::Sort("non-integer coefficient in an int program".into()));
        }
        if self.sort == Sort::Int
            && e.coeffs.iter().chain([&e.constant]).any(|c| c.to_integer().to_i64().is_none())
        {
            return err(at.0, at.1, ParseErrorKind::Sort("integer coefficient out of range".into()));
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let at = self.here();
        let lhs = self.expr()?;
        let rel_at = self.here();
        let rel = self.relation()?;
        let rhs = self.expr()?;
        let e = lhs.sub(&rhs);
        self.check_expr_sort(&e, at)?;
        if self.sort == Sort::Rat && rel.is_inequality() {
            return err(
                rel_at.0,
                rel_at.1,
                ParseErrorKind::Sort("inequality guards are not supported in rat programs".into()),
            );
        }
        Ok(Atom::new(e, rel))
    }

    /// `assume A (and|or) [assume] B ...` after the leading `assume`.
    fn guard(&mut self) -> Result<Guard, ParseError> {
        let mut atoms = vec![self.atom()?];
        let mut mode = None;
        loop {
            let m = if self.is_ident("and") || self.is_punct("/\\") {
                GuardMode::Conj
            } else if self.is_ident("or") {
                GuardMode::Disj
            } else {
                break;
            };
            if mode.is_some_and(|prev| prev != m) {
                return self.fail(ParseErrorKind::Syntax("cannot mix `and` and `or` in one guard".into()));
            }
            mode = Some(m);
            self.bump();
            self.eat_ident("assume");
            atoms.push(self.atom()?);
        }
        Ok(Guard {
            atoms,
            mode: mode.unwrap_or(GuardMode::Conj),
        })
    }

    fn transfer(&mut self) -> Result<TransferFunction, ParseError> {
        let n = self.nvars()?;
        if self.eat_ident("skip") {
            return Ok(TransferFunction::Identity);
        }
        if self.eat_ident("assume") {
            let g = self.guard()?;
            if self.is_punct(",") {
                return self.fail(ParseErrorKind::Syntax(
                    "a guard cannot be combined with other statements on one edge".into(),
                ));
            }
            return Ok(TransferFunction::Guard(g));
        }
        let mut assign = ParallelAssign::identity(n);
        let mut seen = vec![false; n];
        loop {
            if self.is_ident("assume") {
                return self.fail(ParseErrorKind::Syntax(
                    "a guard cannot be combined with assignments on one edge".into(),
                ));
            }
            let at = self.here();
            let j = self.variable()?;
            if seen[j] {
                return err(at.0, at.1, ParseErrorKind::DuplicateAssignment(format!("x{}", j + 1)));
            }
            seen[j] = true;
            self.expect_punct(":=")?;
            if self.eat_punct("?") {
                assign.rows[j] = Rhs::Havoc;
            } else {
                let at = self.here();
                let e = self.expr()?;
                self.check_expr_sort(&e, at)?;
                assign.rows[j] = Rhs::Affine(e);
            }
            if !self.eat_punct(",") {
                break;
            }
        }
        Ok(TransferFunction::Assign(assign))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let n = self.nvars()?;
        if self.eat_ident("top") {
            return Ok(Literal::Top);
        }
        if self.eat_ident("bot") {
            return Ok(Literal::Bot);
        }
        if self.is_punct("(") {
            let at = self.here();
            self.bump();
            let mut items = Vec::new();
            loop {
                if self.eat_ident("top") {
                    items.push(None);
                } else {
                    let v = self.signed_number()?;
                    self.check_value_sort(&v)?;
                    items.push(Some(v));
                }
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct(")")?;
            if items.len() != n {
                return err(at.0, at.1, ParseErrorKind::ArityMismatch { expected: n, found: items.len() });
            }
            return Ok(Literal::Tuple(items));
        }
        if self.eat_punct("{") {
            let mut points = Vec::new();
            if self.eat_punct("}") {
                return Ok(Literal::Points(points));
            }
            loop {
                let at = self.here();
                self.expect_punct("(")?;
                let mut p = Vec::new();
                loop {
                    let v = self.signed_number()?;
                    self.check_value_sort(&v)?;
                    p.push(v);
                    if !self.eat_punct(",") {
                        break;
                    }
                }
                self.expect_punct(")")?;
                if p.len() != n {
                    return err(at.0, at.1, ParseErrorKind::ArityMismatch { expected: n, found: p.len() });
                }
                points.push(p);
                if !self.eat_punct(";") {
                    break;
                }
            }
            self.expect_punct("}")?;
            return Ok(Literal::Points(points));
        }
        let mut rows = Vec::new();
        loop {
            let at = self.here();
            let lhs = self.expr()?;
            let rel_at = self.here();
            let rel = self.relation()?;
            if rel != Rel::Eq {
                return err(
                    rel_at.0,
                    rel_at.1,
                    ParseErrorKind::Syntax("only `=` constraints are allowed in a literal".into()),
                );
            }
            let e = lhs.sub(&self.expr()?);
            self.check_expr_sort(&e, at)?;
            rows.push(e);
            if !(self.eat_punct("/\\") || self.eat_ident("and")) {
                break;
            }
        }
        Ok(Literal::Constraints(rows))
    }

    fn check_value_sort(&self, v: &Rational) -> Result<(), ParseError> {
        if self.sort == Sort::Int && (!v.is_integer() || v.to_integer().to_i64().is_none()) {
            return self.fail(ParseErrorKind::Sort("value is not a 64-bit integer in an int program".into()));
        }
        Ok(())
    }

    fn node_ref(&mut self, nodes: &[String]) -> Result<usize, ParseError> {
        let at = self.here();
        let name = self.ident("a node name")?;
        match nodes.iter().position(|n| *n == name) {
            Some(i) => Ok(i),
            None => err(at.0, at.1, ParseErrorKind::UnknownNode(name)),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut sort = None;
        let mut nodes: Option<Vec<String>> = None;
        let mut inits: Vec<Option<Literal>> = Vec::new();
        let mut edges = Vec::new();
        while !self.at_eof() {
            let at = self.here();
            let kw = self.ident("a declaration keyword")?;
            match kw.as_str() {
                "vars" => {
                    if self.vars.is_some() {
                        return err(at.0, at.1, ParseErrorKind::Syntax("duplicate `vars` declaration".into()));
                    }
                    let nat = self.here();
                    let Tok::Num(v) = self.bump() else {
                        return err(nat.0, nat.1, ParseErrorKind::Syntax("expected a variable count".into()));
                    };
                    match v.to_usize() {
                        Some(v) if v <= 64 => self.vars = Some(v),
                        _ => return err(nat.0, nat.1, ParseErrorKind::Syntax("variable count must be at most 64".into())),
                    }
                }
                "sort" => {
                    if sort.is_some() {
                        return err(at.0, at.1, ParseErrorKind::Syntax("duplicate `sort` declaration".into()));
                    }
                    if edges.len() + inits.iter().flatten().count() > 0 {
                        return err(at.0, at.1, ParseErrorKind::Syntax("`sort` must precede inits and edges".into()));
                    }
                    let s = if self.eat_ident("int") {
                        Sort::Int
                    } else if self.eat_ident("rat") {
                        Sort::Rat
                    } else {
                        return self.unexpected("`int` or `rat`");
                    };
                    self.sort = s;
                    sort = Some(s);
                }
                "nodes" => {
                    if nodes.is_some() {
                        return err(at.0, at.1, ParseErrorKind::Syntax("duplicate `nodes` declaration".into()));
                    }
                    let mut list: Vec<String> = Vec::new();
                    while let Tok::Ident(name) = self.peek().clone() {
                        if list.contains(&name) {
                            return self.fail(ParseErrorKind::DuplicateNode(name));
                        }
                        self.bump();
                        list.push(name);
                    }
                    inits = vec![None; list.len()];
                    nodes = Some(list);
                }
                "init" => {
                    let Some(list) = nodes.as_ref() else {
                        return err(at.0, at.1, ParseErrorKind::Syntax("`nodes` must be declared before `init`".into()));
                    };
                    let nat = self.here();
                    let q = self.node_ref(list)?;
                    self.expect_punct(":")?;
                    let lit = self.literal()?;
                    if inits[q].is_some() {
                        return err(nat.0, nat.1, ParseErrorKind::DuplicateInit(list[q].clone()));
                    }
                    inits[q] = Some(lit);
                }
                "edge" => {
                    let Some(list) = nodes.as_ref() else {
                        return err(at.0, at.1, ParseErrorKind::Syntax("`nodes` must be declared before `edge`".into()));
                    };
                    let from = self.node_ref(list)?;
                    self.expect_punct("->")?;
                    let to = self.node_ref(list)?;
                    let transfer = if self.eat_punct(":") {
                        self.transfer()?
                    } else {
                        TransferFunction::Identity
                    };
                    edges.push(Edge { from, to, transfer });
                }
                other => {
                    return err(at.0, at.1, ParseErrorKind::Syntax(format!("unknown declaration `{other}`")));
                }
            }
            self.expect_punct(";")?;
        }
        let Some(vars) = self.vars else {
            return self.fail(ParseErrorKind::Syntax("missing `vars` declaration".into()));
        };
        let nodes = nodes.unwrap_or_default();
        Ok(Program {
            vars,
            sort: self.sort,
            nodes,
            inits,
            edges,
        })
    }
}

fn var_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

/// Parses a program in the line-oriented file format. The sort defaults to
/// `int` when no `sort` line is present.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    Parser::new(src, None, Sort::Int)?.program()
}

/// Parses a standalone literal (`top`, `bot`, a tuple, a point set, or an
/// equality conjunction) over `n` variables.
pub fn parse_literal(src: &str, n: usize, sort: Sort) -> Result<Literal, ParseError> {
    let mut p = Parser::new(src, Some(n), sort)?;
    let lit = p.literal()?;
    p.expect_eof()?;
    Ok(lit)
}

/// Parses a single affine expression over `n` variables.
pub fn parse_affine_literal_expr(src: &str, n: usize) -> Result<LinExpr, ParseError> {
    let mut p = Parser::new(src, Some(n), Sort::Rat)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}
