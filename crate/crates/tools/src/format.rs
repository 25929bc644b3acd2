//! JSON signature and game-structure files, QBF input, and derivation
//! loading.
//!
//! Written files are deterministic: object keys come out sorted and every
//! list keeps the structure's own order, so regenerating a file reproduces
//! it byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use csl_core::cgs::{Cgs, RelationalCgs, Violation};
use csl_core::proof::{header_sig, parse_derivation, Derivation, DerivationParseError};
use csl_core::reduce::{parse_qbf, Matrix, Qbf, QbfError, Quant};
use csl_core::syntax::{ParseError, Signature, SignatureError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{context}: {source}")]
    Json { context: String, source: serde_json::Error },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("invalid game structure:\n  {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  "))]
    Model(Vec<Violation>),
    #[error("qdimacs line {line}: {message}")]
    Qdimacs { line: usize, message: String },
    #[error(transparent)]
    Qbf(#[from] QbfError),
    #[error("qbf: {0}")]
    QbfSyntax(ParseError),
    #[error("{path}: {source}")]
    Derivation { path: PathBuf, source: DerivationParseError },
    #[error("{0}: no `sig` line")]
    NoSig(PathBuf),
}

pub fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

fn json<T: for<'de> Deserialize<'de>>(text: &str, context: &str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|source| FormatError::Json { context: context.to_string(), source })
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    // Value's map is ordered, which sorts the keys.
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigFile {
    pub n: usize,
    pub constants: Vec<String>,
    pub atoms: Vec<String>,
}

impl SigFile {
    pub fn of(sig: &Signature) -> Self {
        SigFile { n: sig.agents(), constants: sig.constants().to_vec(), atoms: sig.atoms().to_vec() }
    }

    pub fn signature(&self) -> Result<Signature, SignatureError> {
        Signature::new(self.n, self.constants.iter().cloned(), self.atoms.iter().cloned())
    }
}

pub fn parse_signature(text: &str) -> Result<Signature, FormatError> {
    Ok(json::<SigFile>(text, "signature")?.signature()?)
}

pub fn load_signature(path: &Path) -> Result<Signature, FormatError> {
    let text = read(path)?;
    json::<SigFile>(&text, &path.display().to_string())?.signature().map_err(Into::into)
}

pub fn signature_json(sig: &Signature) -> String {
    to_json(&SigFile::of(sig))
}

/// The model file: transitions are listed relationally and checked on
/// load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CgsFile {
    pub n: usize,
    pub actions: Vec<String>,
    pub states: Vec<String>,
    pub transitions: Vec<(String, Vec<String>, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl CgsFile {
    pub fn of(g: &Cgs) -> Self {
        let r = g.to_relational();
        CgsFile {
            n: r.agents,
            actions: r.actions,
            states: r.states,
            transitions: r.transitions,
            valuation: r.valuation.into_iter().collect(),
        }
    }

    pub fn model(self) -> Result<Cgs, FormatError> {
        let r = RelationalCgs {
            agents: self.n,
            actions: self.actions,
            states: self.states,
            transitions: self.transitions,
            valuation: self.valuation.into_iter().collect(),
        };
        r.validate().map_err(FormatError::Model)
    }
}

pub fn parse_model(text: &str) -> Result<Cgs, FormatError> {
    json::<CgsFile>(text, "model")?.model()
}

pub fn load_model(path: &Path) -> Result<Cgs, FormatError> {
    let text = read(path)?;
    json::<CgsFile>(&text, &path.display().to_string())?.model()
}

pub fn model_json(g: &Cgs) -> String {
    to_json(&CgsFile::of(g))
}

/// Reads QDIMACS (`p cnf`, `a`/`e` blocks, clauses ending in `0`) or,
/// failing the `p`/`c` markers, the infix form `forall p1 exists p2 ...`.
pub fn parse_qbf_text(text: &str) -> Result<Qbf, FormatError> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first.starts_with("p ") || first.starts_with("c ") || first == "c" {
        parse_qdimacs(text)
    } else {
        parse_qbf(text).map_err(FormatError::QbfSyntax)
    }
}

/// Variables occurring in clauses but in no quantifier block are
/// existential and outermost.
pub fn parse_qdimacs(text: &str) -> Result<Qbf, FormatError> {
    let err = |line: usize, message: String| FormatError::Qdimacs { line, message };
    let mut declared: Option<(usize, usize)> = None;
    let mut prefix: Vec<(Quant, usize)> = Vec::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l == "c" || l.starts_with("c ") {
            continue;
        }
        let mut words = l.split_whitespace();
        let head = words.next().unwrap_or("");
        if head == "p" {
            if declared.is_some() {
                return Err(err(line, "second problem line".into()));
            }
            let rest: Vec<&str> = words.collect();
            match rest.as_slice() {
                ["cnf", v, c] => {
                    let v = v.parse().map_err(|_| err(line, format!("bad variable count `{v}`")))?;
                    let c = c.parse().map_err(|_| err(line, format!("bad clause count `{c}`")))?;
                    declared = Some((v, c));
                }
                _ => return Err(err(line, "expected `p cnf <vars> <clauses>`".into())),
            }
            continue;
        }
        let Some((vars, _)) = declared else { return Err(err(line, "missing problem line".into())) };
        let number = |w: &str| -> Result<i64, FormatError> {
            let n: i64 = w.parse().map_err(|_| err(line, format!("`{w}` is not a literal")))?;
            if n.unsigned_abs() as usize > vars {
                return Err(err(line, format!("variable {} exceeds the declared {vars}", n.abs())));
            }
            Ok(n)
        };
        if head == "a" || head == "e" {
            if !clauses.is_empty() || !current.is_empty() {
                return Err(err(line, "quantifier block after clauses".into()));
            }
            let q = if head == "a" { Quant::Forall } else { Quant::Exists };
            let mut closed = false;
            for w in words {
                if closed {
                    return Err(err(line, "text after the closing 0".into()));
                }
                match number(w)? {
                    0 => closed = true,
                    n if n < 0 => return Err(err(line, "negative variable in a quantifier block".into())),
                    n => prefix.push((q, n as usize)),
                }
            }
            if !closed {
                return Err(err(line, "quantifier block must end with 0".into()));
            }
            continue;
        }
        for w in l.split_whitespace() {
            match number(w)? {
                0 => clauses.push(std::mem::take(&mut current)),
                n => current.push(n),
            }
        }
    }
    let Some((_, count)) = declared else { return Err(err(0, "missing problem line".into())) };
    if !current.is_empty() {
        return Err(err(text.lines().count(), "last clause is not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(err(0, format!("{} clauses found, {count} declared", clauses.len())));
    }
    let literal = |n: i64| {
        let v = Matrix::Var(n.unsigned_abs() as usize);
        if n < 0 {
            Matrix::not(v)
        } else {
            v
        }
    };
    let clause = |c: &[i64]| c.iter().map(|&n| literal(n)).reduce(Matrix::or).unwrap_or(Matrix::Const(false));
    let matrix = clauses.iter().map(|c| clause(c)).reduce(Matrix::and).unwrap_or(Matrix::Const(true));
    let bound: Vec<usize> = prefix.iter().map(|&(_, v)| v).collect();
    let free: Vec<(Quant, usize)> =
        matrix.vars().into_iter().filter(|v| !bound.contains(v)).map(|v| (Quant::Exists, v)).collect();
    Ok(Qbf::new(free.into_iter().chain(prefix).collect(), matrix)?)
}

/// Loads a derivation, resolving its `sig` line against the file's
/// directory.
pub fn load_derivation(path: &Path) -> Result<(Derivation, Signature), FormatError> {
    let text = read(path)?;
    let rel = header_sig(&text).ok_or_else(|| FormatError::NoSig(path.to_path_buf()))?;
    let sig = load_signature(&path.parent().unwrap_or(Path::new(".")).join(rel))?;
    let d = parse_derivation(&text, &sig).map_err(|source| FormatError::Derivation { path: path.to_path_buf(), source })?;
    Ok((d, sig))
}

/// A domino system file: `{"tiles": [..], "h": [[a, b], ..], "v": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilesFile {
    pub tiles: Vec<String>,
    #[serde(default)]
    pub h: Vec<(String, String)>,
    #[serde(default)]
    pub v: Vec<(String, String)>,
}

pub fn parse_tiles(text: &str) -> Result<TilesFile, FormatError> {
    json(text, "domino system")
}
