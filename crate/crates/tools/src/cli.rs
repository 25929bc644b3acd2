//! The `csl` command line.
//!
//! Exit status: 0 for success or a true verdict, 1 when a check was carried
//! out and came back false, 2 for usage and input errors. With `--json`
//! every invocation prints exactly one JSON object carrying a `result`
//! field, errors included.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use csl_core::cgs::{g1, g2, gstar_truncated, qbf_fig3, Cgs};
use csl_core::enumerate::{find_countermodel, find_model, Bounds, EnumError, Outcome};
use csl_core::mc::{mc, mc_with_stats, valid_in, McError};
use csl_core::proof::{check_with, CheckOptions, GenCondition};
use csl_core::reduce::{qbf_eval, qbf_to_cgs, qbf_to_csl, tiling_formula, DominoSystem, TilingError};
use csl_core::syntax::{core_normalize, free_vars_ordered, is_sentence, nnf, parse, Formula, ParseError, Signature};
use csl_core::translate::{
    al_mc, cl_mc, parse_al, parse_cl, parse_sfcl, sfcl_mc, tr_al, tr_cl_avoiding, tr_sfcl, TranslateError,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::format::{self, CgsFile, FormatError};

#[derive(Debug, Parser)]
#[command(name = "csl", version, about = "First-order coalition logic toolkit")]
pub struct Cli {
    /// Print one JSON object instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FormulaArg {
    #[arg(long, conflicts_with = "formula_file", required_unless_present = "formula_file")]
    pub formula: Option<String>,
    #[arg(long)]
    pub formula_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Largest state and action counts, as `S,A`.
    #[arg(long, default_value = "2,2")]
    pub bounds: String,
    /// Stop after this many search nodes.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogicArg {
    Csl,
    Cl,
    Al,
    Sfcl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenArg {
    Strict,
    Literal,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    G1,
    G2,
    QbfFig3,
    GstarK,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a formula and print it back.
    Parse {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Negation normal form.
    Nnf {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Model check a formula at a state; open formulas are closed universally.
    Mc {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: String,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, value_enum, default_value = "csl")]
        logic: LogicArg,
        /// Report evaluation counters (csl only).
        #[arg(long)]
        stats: bool,
    },
    /// Validity in a model, or bounded validity over all small structures.
    Valid {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long, required_unless_present = "model")]
        sig: Option<PathBuf>,
        #[arg(long, conflicts_with = "sig")]
        model: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Translate a CL, AL or SFCL formula into the first-order language.
    Translate {
        #[arg(long, value_enum)]
        logic: LogicArg,
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Model check an SFCL formula.
    SfclMc {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        state: String,
        #[command(flatten)]
        formula: FormulaArg,
    },
    /// Check a derivation file.
    ProofCheck {
        #[arg(long)]
        file: PathBuf,
        /// Freshness check applied by generalization.
        #[arg(long, value_enum, default_value = "strict")]
        gen: GenArg,
    },
    /// Evaluate a QBF, optionally against its game-structure encoding.
    Qbf {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        check_agreement: bool,
        /// Also write the encoding structure here.
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Emit the tiling sentence for a domino system.
    TilingEmit {
        #[arg(long)]
        file: PathBuf,
        /// Action names for the emitted signature, comma separated.
        #[arg(long, default_value = "a0")]
        constants: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sig_out: Option<PathBuf>,
    },
    /// Search small structures for a countermodel (or, with --satisfy, a model).
    Countermodel {
        #[command(flatten)]
        formula: FormulaArg,
        #[arg(long)]
        sig: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        satisfy: bool,
    },
    /// Write one of the built-in structures.
    Fixtures {
        #[arg(value_enum)]
        name: Fixture,
        #[arg(long, required_if_eq("name", "gstar-k"))]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Mc(#[from] McError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("{0}")]
    Usage(String),
}

/// What a command produced: exit status, text, and the JSON object.
#[derive(Debug, Clone, PartialEq)]
pub struct Reply {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Reply {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Reply { code: 0, text: text.into(), json }
    }

    fn verdict(v: bool, text: impl Into<String>, json: Value) -> Self {
        Reply { code: if v { 0 } else { 1 }, text: text.into(), json }
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => return fail(json, &e.to_string(), out, err),
    };
    match execute(&cli.command) {
        Ok(reply) => {
            let _ = if cli.json {
                writeln!(out, "{}", reply.json)
            } else {
                write!(out, "{}", with_newline(&reply.text))
            };
            reply.code
        }
        Err(e) => fail(cli.json, &e.to_string(), out, err),
    }
}

fn with_newline(s: &str) -> String {
    if s.is_empty() || s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}

fn fail(json: bool, message: &str, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let message = message.trim_end();
    if json {
        let _ = writeln!(out, "{}", json!({ "result": "error", "error": message }));
    }
    let _ = writeln!(err, "error: {}", message.strip_prefix("error: ").unwrap_or(message));
    2
}

fn formula_text(a: &FormulaArg) -> Result<String, CliError> {
    match (&a.formula, &a.formula_file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(p)) => Ok(format::read(p)?.trim().to_string()),
        (None, None) => Err(CliError::Usage("give --formula or --formula-file".into())),
    }
}

fn model_signature(g: &Cgs) -> Result<Signature, CliError> {
    g.signature().map_err(|e| CliError::Format(e.into()))
}

fn parse_bounds(agents: usize, s: &SearchArgs) -> Result<Bounds, CliError> {
    let bad = || CliError::Usage(format!("--bounds expects `S,A` with positive counts, got `{}`", s.bounds));
    let (st, ac) = s.bounds.split_once(',').ok_or_else(bad)?;
    let st: usize = st.trim().parse().map_err(|_| bad())?;
    let ac: usize = ac.trim().parse().map_err(|_| bad())?;
    if st == 0 || ac == 0 {
        return Err(bad());
    }
    let mut b = Bounds::new(agents, ac, st);
    if let Some(n) = s.budget {
        b.node_budget = n;
    }
    Ok(b)
}

/// Counts can exceed what JSON numbers carry portably.
fn count(n: u128) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn model_value(g: &Cgs) -> Value {
    serde_json::to_value(CgsFile::of(g)).expect("serializable")
}

fn report_value(o: &Outcome) -> Value {
    let r = o.report();
    let cells: Vec<Value> = r
        .cells
        .iter()
        .map(|c| {
            json!({
                "states": c.states,
                "actions": c.actions,
                "closed_form": count(c.closed_form),
                "covered": c.covered.iter().map(|&n| count(n)).collect::<Vec<_>>(),
                "nodes": c.nodes,
                "skipped": c.skipped,
            })
        })
        .collect();
    json!({
        "candidates": count(r.candidates()),
        "pointed_candidates": count(r.pointed_candidates()),
        "nodes": r.nodes(),
        "complete": r.is_complete(),
        "cells": cells,
    })
}

/// Refuses searches in which no cell can interpret the formula's
/// constants, which would otherwise pass vacuously.
fn searched_something(f: &Formula, o: &Outcome) -> Result<(), CliError> {
    if o.report().cells.iter().all(|c| c.skipped) {
        return Err(CliError::Usage(format!(
            "no structure within the bounds has actions named {}; enumerated structures use a0, a1, ..",
            f.constants().join(", ")
        )));
    }
    Ok(())
}

pub fn execute(cmd: &Command) -> Result<Reply, CliError> {
    match cmd {
        Command::Parse { formula, sig } => {
            let sig = format::load_signature(sig)?;
            let f = parse(&formula_text(formula)?, &sig)?;
            let free = free_vars_ordered(&f);
            Ok(Reply::ok(
                f.to_string(),
                json!({
                    "result": f.to_string(),
                    "core": core_normalize(&f).to_string(),
                    "size": f.size(),
                    "sentence": is_sentence(&f),
                    "free": free,
                }),
            ))
        }
        Command::Nnf { formula, sig } => {
            let sig = format::load_signature(sig)?;
            let f = parse(&formula_text(formula)?, &sig)?;
            let g = nnf(&f);
            Ok(Reply::ok(g.to_string(), json!({ "result": g.to_string(), "size_in": f.size(), "size_out": g.size() })))
        }
        Command::Mc { model, state, formula, logic, stats } => {
            let g = format::load_model(model)?;
            let sig = model_signature(&g)?;
            let text = formula_text(formula)?;
            if *stats && *logic != LogicArg::Csl {
                return Err(CliError::Usage("--stats is only available for csl formulas".into()));
            }
            let (v, extra) = match logic {
                LogicArg::Csl => {
                    let f = parse(&text, &sig)?;
                    if *stats {
                        let (v, s) = mc_with_stats(&g, state, &f)?;
                        let extra = json!({
                            "calls": s.calls,
                            "max_depth": s.max_depth,
                            "quantifier_expansions": s.quantifier_expansions,
                        });
                        (v, Some(extra))
                    } else {
                        (mc(&g, state, &f)?, None)
                    }
                }
                LogicArg::Cl => (cl_mc(&g, state, &parse_cl(&text, &sig)?)?, None),
                LogicArg::Al => (al_mc(&g, state, &parse_al(&text, &sig)?)?, None),
                LogicArg::Sfcl => (sfcl_mc(&g, state, &parse_sfcl(&text, &sig)?)?, None),
            };
            let mut text = v.to_string();
            let mut j = json!({ "result": v, "state": state });
            if let Some(extra) = extra {
                text = format!("{v}\n{}", serde_json::to_string(&extra).expect("serializable"));
                j["stats"] = extra;
            }
            Ok(Reply::verdict(v, text, j))
        }
        Command::Valid { formula, sig, model, search } => {
            if let Some(path) = model {
                let g = format::load_model(path)?;
                let f = parse(&formula_text(formula)?, &model_signature(&g)?)?;
                let v = valid_in(&g, &f)?;
                return Ok(Reply::verdict(v, v.to_string(), json!({ "result": v, "scope": "model" })));
            }
            let sig = format::load_signature(sig.as_deref().expect("clap requires --sig"))?;
            let f = parse(&formula_text(formula)?, &sig)?;
            let o = find_countermodel(&f, &parse_bounds(sig.agents(), search)?)?;
            searched_something(&f, &o)?;
            let v = o.witness().is_none();
            let mut j = json!({ "result": v, "scope": "bounded", "report": report_value(&o) });
            let mut text = v.to_string();
            if let Some(w) = o.witness() {
                let state = &w.model.states()[w.state.expect("pointed search").0];
                j["countermodel"] = model_value(&w.model);
                j["state"] = json!(state);
                text = format!("false\ncountermodel at state {state}:\n{}", format::model_json(&w.model));
            }
            Ok(Reply::verdict(v, text, j))
        }
        Command::Translate { logic, formula, sig } => {
            let sig = format::load_signature(sig)?;
            let text = formula_text(formula)?;
            let f = match logic {
                LogicArg::Cl => {
                    let reserved: Vec<String> = sig.constants().iter().chain(sig.atoms()).cloned().collect();
                    tr_cl_avoiding(&parse_cl(&text, &sig)?, sig.agents(), &reserved)
                }
                LogicArg::Al => tr_al(&parse_al(&text, &sig)?),
                LogicArg::Sfcl => tr_sfcl(&parse_sfcl(&text, &sig)?, sig.agents()),
                LogicArg::Csl => return Err(CliError::Usage("translate takes --logic cl, al or sfcl".into())),
            };
            Ok(Reply::ok(f.to_string(), json!({ "result": f.to_string(), "size": f.size() })))
        }
        Command::SfclMc { model, state, formula } => {
            let g = format::load_model(model)?;
            let f = parse_sfcl(&formula_text(formula)?, &model_signature(&g)?)?;
            let v = sfcl_mc(&g, state, &f)?;
            Ok(Reply::verdict(v, v.to_string(), json!({ "result": v, "state": state })))
        }
        Command::ProofCheck { file, gen } => {
            let (d, _) = format::load_derivation(file)?;
            let gen = match gen {
                GenArg::Strict => GenCondition::Strict,
                GenArg::Literal => GenCondition::Literal,
                GenArg::Off => GenCondition::Off,
            };
            let opts = CheckOptions { gen, ..CheckOptions::default() };
            match check_with(&d, &opts) {
                Ok(()) => {
                    let n = d.steps.len();
                    Ok(Reply::ok(format!("ok: {n} steps"), json!({ "result": true, "steps": n })))
                }
                Err(e) => {
                    let text = if e.step == 0 { format!("rejected: {}", e.reason) } else { format!("rejected: {e}") };
                    Ok(Reply::verdict(
                        false,
                        text,
                        json!({ "result": false, "step": e.step, "reason": e.reason.to_string() }),
                    ))
                }
            }
        }
        Command::Qbf { file, check_agreement, model_out } => {
            let q = format::parse_qbf_text(&format::read(file)?)?;
            let oracle = qbf_eval(&q);
            let g = qbf_to_cgs(&q);
            let f = qbf_to_csl(&q);
            if let Some(p) = model_out {
                format::write(p, &format::model_json(&g))?;
            }
            if *check_agreement {
                let via = mc(&g, "s", &f)?;
                let agree = via == oracle;
                let word = if agree { "agree" } else { "disagree" };
                return Ok(Reply::verdict(
                    agree,
                    format!("oracle={oracle} mc={via} {word}"),
                    json!({ "result": word, "oracle": oracle, "mc": via, "formula": f.to_string() }),
                ));
            }
            Ok(Reply::verdict(oracle, oracle.to_string(), json!({ "result": oracle, "formula": f.to_string() })))
        }
        Command::TilingEmit { file, constants, out, sig_out } => {
            let tf = format::parse_tiles(&format::read(file)?)?;
            let ds = DominoSystem::new(tf.tiles, tf.h, tf.v)?;
            let f = tiling_formula(&ds);
            let sig = Signature::new(2, constants.split(',').map(str::trim), ds.atoms())
                .map_err(|e| CliError::Format(e.into()))?;
            let text = format!("{f}\n");
            if let Some(p) = out {
                format::write(p, &text)?;
            }
            if let Some(p) = sig_out {
                format::write(p, &format::signature_json(&sig))?;
            }
            let shown = if out.is_some() { String::new() } else { text };
            Ok(Reply::ok(
                shown,
                json!({
                    "result": f.to_string(),
                    "size": f.size(),
                    "signature": serde_json::to_value(format::SigFile::of(&sig)).expect("serializable"),
                }),
            ))
        }
        Command::Countermodel { formula, sig, search, satisfy } => {
            let sig = format::load_signature(sig)?;
            let f = parse(&formula_text(formula)?, &sig)?;
            let b = parse_bounds(sig.agents(), search)?;
            let o = if *satisfy { find_model(&f, &b)? } else { find_countermodel(&f, &b)? };
            searched_something(&f, &o)?;
            let kind = if *satisfy { "model" } else { "countermodel" };
            match o.witness() {
                Some(w) => {
                    let state = w.model.states()[w.state.expect("pointed search").0].clone();
                    let mut witness = model_value(&w.model);
                    witness["state"] = json!(state);
                    let text = format!("{kind} at state {state}:\n{}", format::model_json(&w.model));
                    let j = json!({ "result": kind, "witness": witness, "report": report_value(&o) });
                    Ok(Reply::verdict(*satisfy, text, j))
                }
                None => {
                    let r = o.report();
                    let text = format!(
                        "no {kind} within bounds: {} structures ({} pointed), search {}",
                        r.candidates(),
                        r.pointed_candidates(),
                        if r.is_complete() { "exhaustive" } else { "INCOMPLETE" }
                    );
                    let mut j = report_value(&o);
                    j["result"] = json!("exhausted");
                    Ok(Reply::verdict(!*satisfy, text, j))
                }
            }
        }
        Command::Fixtures { name, k, out } => {
            let (label, g) = match name {
                Fixture::G1 => ("g1".to_string(), g1()),
                Fixture::G2 => ("g2".to_string(), g2()),
                Fixture::QbfFig3 => ("qbf-fig3".to_string(), qbf_fig3()),
                Fixture::GstarK => {
                    let k = k.unwrap_or(0);
                    if k == 0 {
                        return Err(CliError::Usage("gstar-k needs --k with k >= 1".into()));
                    }
                    (format!("gstar-{k}"), gstar_truncated(k))
                }
            };
            let text = format::model_json(&g);
            if let Some(p) = out {
                format::write(p, &text)?;
            }
            let shown = if out.is_some() { String::new() } else { text };
            Ok(Reply::ok(shown, json!({ "result": label, "model": model_value(&g) })))
        }
    }
}
