use core::fmt;

use super::Formula;

fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[super::Term]) -> fmt::Result {
    f.write_str("<")?;
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{t}")?;
    }
    f.write_str(">")
}

/// Prints in the concrete grammar; binary connectives are always
/// parenthesized so the output reparses to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Bottom => f.write_str("false"),
            Formula::Atom(p) => f.write_str(p),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Imp(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Strat(ts, a) => {
                write_terms(f, ts)?;
                write!(f, " {a}")
            }
            Formula::Forall(x, a) => write!(f, "forall {x} {a}"),
            Formula::Exists(x, a) => write!(f, "exists {x} {a}"),
        }
    }
}
