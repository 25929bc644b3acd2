use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::Cgs;

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Two agents, actions `a`,`b`, states `s`,`t`; `p` holds at `s`.
/// Synchronised decisions (`aa`,`bb`) switch state, the others stay.
pub fn g1() -> Cgs {
    Cgs::from_fn(2, names(&["a", "b"]), names(&["s", "t"]), vec![("p", vec![0])], |s, d| {
        if d[0] == d[1] {
            1 - s
        } else {
            s
        }
    })
    .expect("g1 is well formed")
}

/// Same frame shape as [`g1`] with the roles of synchronised and
/// unsynchronised decisions swapped.
pub fn g2() -> Cgs {
    Cgs::from_fn(2, names(&["a", "b"]), names(&["s", "t"]), vec![("p", vec![0])], |s, d| {
        if d[0] == d[1] {
            s
        } else {
            1 - s
        }
    })
    .expect("g2 is well formed")
}

/// The single-agent structure for the three-variable QBF example:
/// action `a_i` leads from `s` to `s_i`, every `s_i` loops, `p_i` holds at `s_i`.
pub fn qbf_fig3() -> Cgs {
    Cgs::from_fn(
        1,
        names(&["a1", "a2", "a3"]),
        names(&["s", "s1", "s2", "s3"]),
        vec![("p1", vec![1]), ("p2", vec![2]), ("p3", vec![3])],
        |s, d| if s == 0 { d[0] + 1 } else { s },
    )
    .expect("qbf example structure is well formed")
}

/// Finite truncation of the two-agent order structure: actions `0..=k`,
/// states `s0,s1,s2`; from `s0` the decision `(i,j)` goes to `s1` iff
/// `i < j` and to `s2` otherwise; `s1`,`s2` loop; `p` holds exactly at `s1`.
///
/// # Panics
/// If `k == 0`.
pub fn gstar_truncated(k: usize) -> Cgs {
    assert!(k >= 1, "truncation bound must be positive");
    let actions = (0..=k).map(|i| i.to_string()).collect();
    Cgs::from_fn(2, actions, names(&["s0", "s1", "s2"]), vec![("p", vec![1])], |s, d| match s {
        0 if d[0] < d[1] => 1,
        0 => 2,
        other => other,
    })
    .expect("truncated order structure is well formed")
}
