use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::{Derivation, Justification, Step};
use crate::syntax::{parse, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DerivationParseError {
    /// 1-based.
    pub line: usize,
    pub message: String,
}

fn term(name: &str, sig: &Signature) -> Result<Term, String> {
    if sig.is_constant(name) {
        Ok(Term::constant(name))
    } else if sig.is_variable_name(name) {
        Ok(Term::var(name))
    } else {
        Err(format!("`{name}` is not a term"))
    }
}

fn var(name: &str, sig: &Signature) -> Result<String, String> {
    if sig.is_variable_name(name) {
        Ok(name.to_string())
    } else {
        Err(format!("`{name}` is not a variable"))
    }
}

fn index(s: Option<&str>) -> Result<usize, String> {
    let s = s.ok_or("missing step number")?;
    s.parse().map_err(|_| format!("`{s}` is not a step number"))
}

fn keyed<'a>(s: Option<&'a str>, key: &str) -> Result<&'a str, String> {
    s.and_then(|s| s.strip_prefix(key))
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| format!("expected `{key}=...`"))
}

fn justification(text: &str, sig: &Signature) -> Result<Justification, String> {
    let mut words = text.split_whitespace();
    let rule = words.next().ok_or("missing justification")?;
    let j = match rule {
        "PC" => Justification::Pc,
        "K" => Justification::K,
        "N" => Justification::N,
        "E" => {
            let t = term(keyed(words.next(), "t")?, sig)?;
            Justification::E { t, x: var(keyed(words.next(), "x")?, sig)? }
        }
        "B" => Justification::B { x: var(keyed(words.next(), "x")?, sig)? },
        "MP" => Justification::Mp(index(words.next())?, index(words.next())?),
        "Nec" => {
            let i = index(words.next())?;
            let rest: String = words.by_ref().collect();
            let inner = rest
                .strip_prefix('<')
                .and_then(|r| r.strip_suffix('>'))
                .ok_or("expected a term list `<t1,..,tn>`")?;
            let ts = inner.split(',').map(|t| term(t, sig)).collect::<Result<Vec<_>, _>>()?;
            if ts.len() != sig.agents() {
                return Err(format!("expected {} terms, got {}", sig.agents(), ts.len()));
            }
            Justification::Nec(i, ts)
        }
        "Gen" => {
            let step = index(words.next())?;
            let t = term(keyed(words.next(), "t")?, sig)?;
            Justification::Gen { step, t, x: var(keyed(words.next(), "x")?, sig)? }
        }
        other => return Err(format!("unknown rule `{other}`")),
    };
    match words.next() {
        Some(extra) => Err(format!("unexpected `{extra}`")),
        None => Ok(j),
    }
}

/// The path on the `sig` line, if any.
pub fn header_sig(text: &str) -> Option<&str> {
    text.lines().map(str::trim).find_map(|l| l.strip_prefix("sig ")).map(str::trim)
}

/// Reads the line format: `sig <file>`, `premise <formula>`,
/// `goal <formula>`, then `k. <formula> ; <justification>` with steps
/// numbered from 1. Blank lines and lines starting with `#` are skipped.
pub fn parse_derivation(text: &str, sig: &Signature) -> Result<Derivation, DerivationParseError> {
    let mut d = Derivation::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let fail = |message: String| DerivationParseError { line: n + 1, message };
        let formula = |s: &str| parse(s.trim(), sig).map_err(|e| fail(e.to_string()));
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("sig ") {
            if d.sig.is_some() || !d.steps.is_empty() {
                return Err(fail("misplaced `sig` line".into()));
            }
            d.sig = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("premise ") {
            d.premises.push(formula(rest)?);
        } else if let Some(rest) = line.strip_prefix("goal ") {
            if d.goal.is_some() {
                return Err(fail("second `goal` line".into()));
            }
            d.goal = Some(formula(rest)?);
        } else {
            let (num, rest) = line.split_once('.').ok_or_else(|| fail("expected `k. <formula> ; <rule>`".into()))?;
            if num.trim().parse::<usize>().ok() != Some(d.steps.len() + 1) {
                return Err(fail(format!("expected step {}", d.steps.len() + 1)));
            }
            let (f, j) = rest.rsplit_once(';').ok_or_else(|| fail("missing `;` before the justification".into()))?;
            let by = justification(j, sig).map_err(fail)?;
            d.steps.push(Step { formula: formula(f)?, by });
        }
    }
    Ok(d)
}
