use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cgs::Cgs;
use crate::syntax::{BinOp, Formula, Grammar, ParseError, ParseErrorKind, Parser, Term, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quant {
    Forall,
    Exists,
}

/// Propositional matrix over variables `p1, p2, ..`, referred to by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Matrix {
    Const(bool),
    Var(usize),
    Not(Box<Matrix>),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
    Imp(Box<Matrix>, Box<Matrix>),
    Iff(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    pub fn not(m: Matrix) -> Self {
        Matrix::Not(Box::new(m))
    }

    pub fn and(a: Matrix, b: Matrix) -> Self {
        Matrix::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Matrix, b: Matrix) -> Self {
        Matrix::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Matrix, b: Matrix) -> Self {
        Matrix::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Matrix, b: Matrix) -> Self {
        Matrix::Iff(Box::new(a), Box::new(b))
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut BTreeSet<usize>) {
        match self {
            Matrix::Const(_) => {}
            Matrix::Var(i) => {
                out.insert(*i);
            }
            Matrix::Not(a) => a.collect(out),
            Matrix::And(a, b) | Matrix::Or(a, b) | Matrix::Imp(a, b) | Matrix::Iff(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Truth under `value`, which must cover every variable.
    pub fn eval(&self, value: &impl Fn(usize) -> bool) -> bool {
        match self {
            Matrix::Const(b) => *b,
            Matrix::Var(i) => value(*i),
            Matrix::Not(a) => !a.eval(value),
            Matrix::And(a, b) => a.eval(value) && b.eval(value),
            Matrix::Or(a, b) => a.eval(value) || b.eval(value),
            Matrix::Imp(a, b) => !a.eval(value) || b.eval(value),
            Matrix::Iff(a, b) => a.eval(value) == b.eval(value),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Matrix::Const(true) => f.write_str("true"),
            Matrix::Const(false) => f.write_str("false"),
            Matrix::Var(i) => write!(f, "p{i}"),
            Matrix::Not(a) => write!(f, "~{a}"),
            Matrix::And(a, b) => write!(f, "({a} & {b})"),
            Matrix::Or(a, b) => write!(f, "({a} | {b})"),
            Matrix::Imp(a, b) => write!(f, "({a} -> {b})"),
            Matrix::Iff(a, b) => write!(f, "({a} <-> {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QbfError {
    #[error("the prefix quantifies no variable")]
    Empty,
    #[error("variable index 0 is not allowed")]
    ZeroIndex,
    #[error("variable p{0} is quantified twice")]
    Duplicate(usize),
    #[error("variable p{0} occurs in the matrix but is not quantified")]
    Unbound(usize),
}

/// A closed prenex QBF; every variable is quantified exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Qbf {
    prefix: Vec<(Quant, usize)>,
    matrix: Matrix,
}

impl Qbf {
    pub fn new(prefix: Vec<(Quant, usize)>, matrix: Matrix) -> Result<Self, QbfError> {
        if prefix.is_empty() {
            return Err(QbfError::Empty);
        }
        let mut seen = BTreeSet::new();
        for &(_, i) in &prefix {
            if i == 0 {
                return Err(QbfError::ZeroIndex);
            }
            if !seen.insert(i) {
                return Err(QbfError::Duplicate(i));
            }
        }
        if let Some(&free) = matrix.vars().difference(&seen).next() {
            return Err(QbfError::Unbound(free));
        }
        Ok(Qbf { prefix, matrix })
    }

    pub fn prefix(&self) -> &[(Quant, usize)] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Quantified variable indices in increasing order.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.prefix.iter().map(|&(_, i)| i).collect();
        v.sort_unstable();
        v
    }
}

impl fmt::Display for Qbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, i) in &self.prefix {
            match q {
                Quant::Forall => write!(f, "forall p{i} ")?,
                Quant::Exists => write!(f, "exists p{i} ")?,
            }
        }
        write!(f, "{}", self.matrix)
    }
}

/// Truth value by expanding the prefix.
pub fn qbf_eval(q: &Qbf) -> bool {
    fn go(prefix: &[(Quant, usize)], matrix: &Matrix, assignment: &mut Vec<(usize, bool)>) -> bool {
        let Some((&(quant, var), rest)) = prefix.split_first() else {
            let lookup = |i: usize| assignment.iter().rev().find(|(v, _)| *v == i).map(|(_, b)| *b).unwrap_or(false);
            return matrix.eval(&lookup);
        };
        let branch = |b: bool, assignment: &mut Vec<(usize, bool)>| {
            assignment.push((var, b));
            let v = go(rest, matrix, assignment);
            assignment.pop();
            v
        };
        match quant {
            Quant::Forall => branch(false, assignment) && branch(true, assignment),
            Quant::Exists => branch(false, assignment) || branch(true, assignment),
        }
    }
    go(&q.prefix, &q.matrix, &mut Vec::new())
}

/// One agent; action `a_i` leads from `s` to `s_i`, where only `p_i`
/// holds, and every `s_i` loops.
///
/// With a single variable there would be no action falsifying `<x1> p1`,
/// so an idle action `a0` that stays at `s` is added in that case.
pub fn qbf_to_cgs(q: &Qbf) -> Cgs {
    let vars = q.variables();
    let idle = vars.len() == 1;
    let mut actions: Vec<String> = Vec::new();
    if idle {
        actions.push(String::from("a0"));
    }
    actions.extend(vars.iter().map(|i| format!("a{i}")));
    let mut states = alloc::vec![String::from("s")];
    states.extend(vars.iter().map(|i| format!("s{i}")));
    let valuation = vars.iter().enumerate().map(|(k, i)| (format!("p{i}"), alloc::vec![k + 1])).collect();
    let offset = usize::from(!idle);
    Cgs::from_fn(1, actions, states, valuation, |s, d| if s == 0 { d[0] + offset } else { s })
        .expect("reduction structure is well formed")
}

fn matrix_to_csl(m: &Matrix) -> Formula {
    match m {
        Matrix::Const(true) => Formula::Top,
        Matrix::Const(false) => Formula::Bottom,
        Matrix::Var(i) => Formula::strat(alloc::vec![Term::var(format!("x{i}"))], Formula::atom(format!("p{i}"))),
        Matrix::Not(a) => Formula::not(matrix_to_csl(a)),
        Matrix::And(a, b) => Formula::and(matrix_to_csl(a), matrix_to_csl(b)),
        Matrix::Or(a, b) => Formula::or(matrix_to_csl(a), matrix_to_csl(b)),
        Matrix::Imp(a, b) => Formula::imp(matrix_to_csl(a), matrix_to_csl(b)),
        Matrix::Iff(a, b) => Formula::iff(matrix_to_csl(a), matrix_to_csl(b)),
    }
}

/// Replaces every `p_i` by `<x_i> p_i` and each quantifier over `p_i` by
/// the same quantifier over `x_i`.
pub fn qbf_to_csl(q: &Qbf) -> Formula {
    q.prefix.iter().rev().fold(matrix_to_csl(&q.matrix), |body, &(quant, i)| {
        let x = format!("x{i}");
        match quant {
            Quant::Forall => Formula::forall(x, body),
            Quant::Exists => Formula::exists(x, body),
        }
    })
}

fn var_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('p')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

struct MatrixGrammar;

impl Grammar for MatrixGrammar {
    type Out = Matrix;

    fn atom(&self, name: &str, pos: usize) -> Result<Matrix, ParseError> {
        var_index(name)
            .map(Matrix::Var)
            .ok_or_else(|| ParseError::new(pos, ParseErrorKind::Other(format!("`{name}` is not a variable p1, p2, .."))))
    }

    fn top(&self) -> Matrix {
        Matrix::Const(true)
    }

    fn bottom(&self) -> Matrix {
        Matrix::Const(false)
    }

    fn negate(&self, f: Matrix) -> Matrix {
        Matrix::not(f)
    }

    fn binary(&self, op: BinOp, a: Matrix, b: Matrix) -> Matrix {
        match op {
            BinOp::And => Matrix::and(a, b),
            BinOp::Or => Matrix::or(a, b),
            BinOp::Imp => Matrix::imp(a, b),
            BinOp::Iff => Matrix::iff(a, b),
        }
    }

    fn prefix(&self, _: &mut Parser) -> Result<Option<Matrix>, ParseError> {
        Ok(None)
    }
}

/// Parses `forall p2 exists p1 exists p3 ((p1 -> p2) & p3)`: a quantifier
/// prefix followed by a propositional matrix in the formula syntax.
pub fn parse_qbf(text: &str) -> Result<Qbf, ParseError> {
    let mut p = Parser::new(text)?;
    let mut prefix = Vec::new();
    loop {
        let quant = match p.peek() {
            TokenKind::Forall => Quant::Forall,
            TokenKind::Exists => Quant::Exists,
            _ => break,
        };
        p.bump();
        let (name, pos) = p.ident("a variable p1, p2, ..")?;
        let i = var_index(&name)
            .ok_or_else(|| ParseError::new(pos, ParseErrorKind::Other(format!("`{name}` is not a variable p1, p2, .."))))?;
        prefix.push((quant, i));
    }
    let matrix = p.finish(&MatrixGrammar)?;
    Qbf::new(prefix, matrix).map_err(|e| ParseError::new(0, ParseErrorKind::Other(format!("{e}"))))
}
