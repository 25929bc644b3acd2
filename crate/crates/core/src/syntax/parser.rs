//! Recursive-descent parser for the formula grammar.
//!
//! ```text
//! formula := unary [ binop unary ]
//! unary   := '~' unary | 'forall' ID unary | 'exists' ID unary
//!          | '<' term (',' term)* '>' unary
//!          | ID | 'true' | 'false' | '(' formula ')'
//! binop   := '&' | '|' | '->' | '<->'
//! ```
//!
//! Chains of binary connectives need explicit parentheses.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use super::lexer::{Lexer, Token, TokenKind};
use super::{Formula, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("modality lists {found} terms but the signature has {expected} agents")]
    Arity { expected: usize, found: usize },
    #[error("`{0}` is a constant or atom and cannot be used as a variable")]
    Clash(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at offset {pos}: {kind}")]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn new(pos: usize, kind: ParseErrorKind) -> Self {
        ParseError { pos, kind }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum BinOp {
    And,
    Or,
    Imp,
    Iff,
}

/// Logic-specific pieces plugged into the shared propositional parser.
pub(crate) trait Grammar {
    type Out;
    fn atom(&self, name: &str, pos: usize) -> Result<Self::Out, ParseError>;
    fn top(&self) -> Self::Out;
    fn bottom(&self) -> Self::Out;
    fn negate(&self, f: Self::Out) -> Self::Out;
    fn binary(&self, op: BinOp, a: Self::Out, b: Self::Out) -> Self::Out;
    /// Parses a prefix operator at the current token, or returns `None`
    /// without consuming anything.
    fn prefix(&self, p: &mut Parser) -> Result<Option<Self::Out>, ParseError>;
}

pub(crate) struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { tokens: Lexer::new(src).tokenize()?, at: 0 })
    }

    pub(crate) fn peek(&self) -> &TokenKind {
        &self.tokens[self.at].kind
    }

    pub(crate) fn pos(&self) -> usize {
        self.tokens[self.at].pos
    }

    pub(crate) fn bump(&mut self) -> Token {
        let tok = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        tok
    }

    pub(crate) fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError::new(
            self.pos(),
            ParseErrorKind::Unexpected { expected, found: self.peek().describe() },
        )
    }

    pub(crate) fn expect(&mut self, kind: TokenKind, expected: &'static str) -> Result<(), ParseError> {
        if *self.peek() == kind {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    pub(crate) fn ident(&mut self, expected: &'static str) -> Result<(String, usize), ParseError> {
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                let pos = self.pos();
                self.bump();
                Ok((name, pos))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    /// Parses a complete input.
    pub(crate) fn finish<G: Grammar>(&mut self, g: &G) -> Result<G::Out, ParseError> {
        let f = self.formula(g)?;
        if *self.peek() != TokenKind::Eof {
            return Err(self.unexpected("a binary connective or end of input"));
        }
        Ok(f)
    }

    pub(crate) fn formula<G: Grammar>(&mut self, g: &G) -> Result<G::Out, ParseError> {
        let lhs = self.unary(g)?;
        let op = match self.peek() {
            TokenKind::Amp => BinOp::And,
            TokenKind::Bar => BinOp::Or,
            TokenKind::Arrow => BinOp::Imp,
            TokenKind::DoubleArrow => BinOp::Iff,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.unary(g)?;
        Ok(g.binary(op, lhs, rhs))
    }

    pub(crate) fn unary<G: Grammar>(&mut self, g: &G) -> Result<G::Out, ParseError> {
        if let Some(f) = g.prefix(self)? {
            return Ok(f);
        }
        match self.peek().clone() {
            TokenKind::Tilde => {
                self.bump();
                Ok(g.negate(self.unary(g)?))
            }
            TokenKind::True => {
                self.bump();
                Ok(g.top())
            }
            TokenKind::False => {
                self.bump();
                Ok(g.bottom())
            }
            TokenKind::LParen => {
                self.bump();
                let f = self.formula(g)?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(f)
            }
            TokenKind::Ident(name) => {
                let pos = self.pos();
                self.bump();
                g.atom(&name, pos)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    /// Parses a comma-separated list between `open` and `close`.
    pub(crate) fn list<T>(
        &mut self,
        close: TokenKind,
        what: &'static str,
        mut item: impl FnMut(&mut Parser) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if *self.peek() == close {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                TokenKind::Comma => {
                    self.bump();
                }
                k if *k == close => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.unexpected(what)),
            }
        }
    }
}

struct CslGrammar<'s> {
    sig: &'s Signature,
}

impl CslGrammar<'_> {
    fn binder(&self, p: &mut Parser) -> Result<String, ParseError> {
        let (name, pos) = p.ident("a variable name")?;
        if !self.sig.is_variable_name(&name) {
            return Err(ParseError::new(pos, ParseErrorKind::Clash(name)));
        }
        Ok(name)
    }
}

impl Grammar for CslGrammar<'_> {
    type Out = Formula;

    fn atom(&self, name: &str, pos: usize) -> Result<Formula, ParseError> {
        if self.sig.is_atom(name) {
            Ok(Formula::atom(name))
        } else {
            Err(ParseError::new(pos, ParseErrorKind::UnknownAtom(name.into())))
        }
    }

    fn top(&self) -> Formula {
        Formula::Top
    }

    fn bottom(&self) -> Formula {
        Formula::Bottom
    }

    fn negate(&self, f: Formula) -> Formula {
        Formula::not(f)
    }

    fn binary(&self, op: BinOp, a: Formula, b: Formula) -> Formula {
        let (a, b) = (Box::new(a), Box::new(b));
        match op {
            BinOp::And => Formula::And(a, b),
            BinOp::Or => Formula::Or(a, b),
            BinOp::Imp => Formula::Imp(a, b),
            BinOp::Iff => Formula::Iff(a, b),
        }
    }

    fn prefix(&self, p: &mut Parser) -> Result<Option<Formula>, ParseError> {
        match p.peek() {
            TokenKind::Forall => {
                p.bump();
                let x = self.binder(p)?;
                Ok(Some(Formula::forall(x, p.unary(self)?)))
            }
            TokenKind::Exists => {
                p.bump();
                let x = self.binder(p)?;
                Ok(Some(Formula::exists(x, p.unary(self)?)))
            }
            TokenKind::Lt => {
                let open = p.pos();
                p.bump();
                let terms = p.list(TokenKind::Gt, "`,` or `>`", |p| {
                    let (name, pos) = p.ident("a term")?;
                    if self.sig.is_constant(&name) {
                        Ok(Term::Const(name))
                    } else if self.sig.is_atom(&name) {
                        Err(ParseError::new(pos, ParseErrorKind::Clash(name)))
                    } else {
                        Ok(Term::Var(name))
                    }
                })?;
                if terms.len() != self.sig.agents() {
                    return Err(ParseError::new(
                        open,
                        ParseErrorKind::Arity { expected: self.sig.agents(), found: terms.len() },
                    ));
                }
                Ok(Some(Formula::strat(terms, p.unary(self)?)))
            }
            _ => Ok(None),
        }
    }
}

/// Parses formula text against a signature. Identifiers in term position
/// that are not constants of the signature become variables.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    Parser::new(text)?.finish(&CslGrammar { sig })
}
