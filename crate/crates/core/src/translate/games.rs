use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::TranslateError;
use crate::syntax::{fresh_name, Formula, Term};

/// Defender, attacker, environment: whatever the defender does, the
/// attacker has a reply that wins against every environment move.
pub fn stackelberg_formula() -> Formula {
    let terms = ["x_d", "x_a", "x_e"].map(Term::var).to_vec();
    Formula::forall(
        "x_d",
        Formula::exists("x_a", Formula::forall("x_e", Formula::strat(terms, Formula::atom("win_a")))),
    )
}

/// Some profile from which no agent `i` gains `goals[i]` by deviating
/// alone. One goal per agent.
pub fn nash_formula(goals: &[Formula], agents: usize) -> Result<Formula, TranslateError> {
    if goals.len() != agents {
        return Err(TranslateError::GoalCount { expected: agents, found: goals.len() });
    }
    let taken: Vec<String> = goals.iter().flat_map(|g| g.variable_names().into_iter().chain(g.constants())).collect();
    let mut avoid = taken;
    let mut fresh = |base: String| {
        let name = fresh_name(&base, |n| avoid.iter().any(|t| t == n));
        avoid.push(name.clone());
        name
    };
    let xs: Vec<String> = (1..=agents).map(|i| fresh(format!("x{i}"))).collect();
    let ys: Vec<String> = (1..=agents).map(|i| fresh(format!("y{i}"))).collect();
    let profile = |dev: Option<usize>| -> Vec<Term> {
        (0..agents).map(|j| Term::var(if dev == Some(j) { &ys[j] } else { &xs[j] }.clone())).collect()
    };
    let stable = goals.iter().enumerate().map(|(i, psi)| {
        let deviate = Formula::exists(ys[i].clone(), Formula::strat(profile(Some(i)), psi.clone()));
        Formula::imp(deviate, Formula::strat(profile(None), psi.clone()))
    });
    let body = Formula::conj(stable);
    Ok(xs.iter().rev().fold(body, |f, x| Formula::exists(x.clone(), f)))
}
