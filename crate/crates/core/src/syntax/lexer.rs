use alloc::string::String;
use alloc::vec::Vec;

use super::parser::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Forall,
    Exists,
    True,
    False,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Lt,
    Gt,
    Comma,
    Semi,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        use alloc::string::ToString;
        match self {
            TokenKind::Ident(s) => alloc::format!("identifier `{s}`"),
            TokenKind::Forall => "`forall`".to_string(),
            TokenKind::Exists => "`exists`".to_string(),
            TokenKind::True => "`true`".to_string(),
            TokenKind::False => "`false`".to_string(),
            TokenKind::Tilde => "`~`".to_string(),
            TokenKind::Amp => "`&`".to_string(),
            TokenKind::Bar => "`|`".to_string(),
            TokenKind::Arrow => "`->`".to_string(),
            TokenKind::DoubleArrow => "`<->`".to_string(),
            TokenKind::Lt => "`<`".to_string(),
            TokenKind::Gt => "`>`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Semi => "`;`".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::LBracket => "`[`".to_string(),
            TokenKind::RBracket => "`]`".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Byte offset of the first character.
    pub pos: usize,
}

pub struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    /// Tokenizes the whole input; the last token is always `Eof`.
    pub fn tokenize(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        loop {
            let tok = self.next_token()?;
            let done = tok.kind == TokenKind::Eof;
            out.push(tok);
            if done {
                return Ok(out);
            }
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok(Token { kind: TokenKind::Eof, pos: start });
        };
        let rest = &self.src[start..];
        let (kind, len) = match c {
            b'~' => (TokenKind::Tilde, 1),
            b'&' => (TokenKind::Amp, 1),
            b'|' => (TokenKind::Bar, 1),
            b',' => (TokenKind::Comma, 1),
            b';' => (TokenKind::Semi, 1),
            b'(' => (TokenKind::LParen, 1),
            b')' => (TokenKind::RParen, 1),
            b'[' => (TokenKind::LBracket, 1),
            b']' => (TokenKind::RBracket, 1),
            b'>' => (TokenKind::Gt, 1),
            b'-' if rest.starts_with("->") => (TokenKind::Arrow, 2),
            b'<' if rest.starts_with("<->") => (TokenKind::DoubleArrow, 3),
            b'<' => (TokenKind::Lt, 1),
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let len = rest
                    .bytes()
                    .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                    .count();
                let word = &rest[..len];
                let kind = match word {
                    "forall" => TokenKind::Forall,
                    "exists" => TokenKind::Exists,
                    "true" => TokenKind::True,
                    "false" => TokenKind::False,
                    _ => TokenKind::Ident(word.into()),
                };
                (kind, len)
            }
            _ => {
                let ch = rest.chars().next().unwrap_or('?');
                return Err(ParseError::new(start, ParseErrorKind::UnexpectedChar(ch)));
            }
        };
        self.pos += len;
        Ok(Token { kind, pos: start })
    }
}
