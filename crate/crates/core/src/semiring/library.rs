//! Small built-in semirings, mostly used as random-seat carriers.

use super::{Semiring, Table};
use crate::error::{Error, Result};

/// `𝒫(names)` as a table; elements are indexed by bitmask. The lattice
/// variant is `⟨∪, ∩, ∅, R⟩`, the union variant `⟨∪, ∪, ∅, ∅⟩` with lax zero.
pub(super) fn powerset_table(names: &[String], union: bool) -> Result<Table> {
    if names.len() > 6 {
        return Err(Error::structural(format!(
            "powerset over {} names exceeds the 64-element carrier limit",
            names.len()
        )));
    }
    let mut sorted = names.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != names.len() {
        return Err(Error::structural("duplicate names in powerset semiring"));
    }
    let n = 1usize << names.len();
    let label = |m: usize| {
        let parts: Vec<&str> = (0..names.len())
            .filter(|i| m & (1 << i) != 0)
            .map(|i| names[i].as_str())
            .collect();
        format!("{{{}}}", parts.join(","))
    };
    let full = n - 1;
    let grid = |op: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<u8>> {
        (0..n)
            .map(|a| (0..n).map(|b| op(a, b) as u8).collect())
            .collect()
    };
    let times = if union {
        grid(&|a, b| a | b)
    } else {
        grid(&|a, b| a & b)
    };
    let mut t = Table {
        names: (0..n).map(label).collect(),
        plus: grid(&|a, b| a | b),
        times,
        zero: 0,
        one: if union { 0 } else { full as u8 },
        lax_zero: union,
        mult_reach: Vec::new(),
    };
    t.mult_reach = (0..n)
        .map(|a| (0..n).fold(0u64, |m, b| m | (1 << t.times[a][b]) | (1 << t.times[b][a])))
        .collect();
    Ok(t)
}

fn names(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

/// `⟨{0,1}, ∨, ∧, 0, 1⟩`
pub fn boolean() -> Semiring {
    Semiring::from_fn(&names(&["0", "1"]), |a, b| a | b, |a, b| a & b, 0, 1, false)
        .expect("boolean table")
}

/// The chain `0 < 1 < … < n-1` with `⊕ = max`, `⊙ = min`.
pub fn chain(n: usize) -> Semiring {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    Semiring::from_fn(&labels, usize::max, usize::min, 0, n - 1, false).expect("chain table")
}

pub fn powerset_lattice(roles: &[&str]) -> Semiring {
    Semiring::from_spec(super::SemiringSpec::PowersetLattice {
        roles: names(roles),
    })
    .expect("powerset table")
}

/// `{0, …, cap-1, inf}` with `⊕ = min`, `⊙ = max`.
pub fn truncated_tropical(cap: usize) -> Semiring {
    let labels = capped_labels(cap);
    Semiring::from_fn(&labels, usize::min, usize::max, cap, 0, false).expect("tropical table")
}

/// `{0, …, cap-1, inf}` with `⊕ = min` and `⊙` saturating addition.
pub fn truncated_min_plus(cap: usize) -> Semiring {
    let labels = capped_labels(cap);
    Semiring::from_fn(&labels, usize::min, |a, b| (a + b).min(cap), cap, 0, false)
        .expect("min-plus table")
}

/// `{0, …, cap}` with `+` and `×` saturating at `cap`. `⊕` is not idempotent.
pub fn saturating_nat(cap: usize) -> Semiring {
    let labels: Vec<String> = (0..=cap).map(|i| i.to_string()).collect();
    Semiring::from_fn(
        &labels,
        |a, b| (a + b).min(cap),
        |a, b| (a * b).min(cap),
        0,
        1,
        false,
    )
    .expect("saturating table")
}

fn capped_labels(cap: usize) -> Vec<String> {
    (0..cap)
        .map(|i| i.to_string())
        .chain(std::iter::once("inf".to_string()))
        .collect()
}

/// Every library semiring with at most `max_size` elements, by name.
pub fn small_semirings(max_size: usize) -> Vec<(&'static str, Semiring)> {
    let all = vec![
        ("boolean", boolean()),
        ("chain3", chain(3)),
        ("chain4", chain(4)),
        ("lattice2", powerset_lattice(&["r1", "r2"])),
        ("tropical3", truncated_tropical(2)),
        ("tropical4", truncated_tropical(3)),
        ("min-plus4", truncated_min_plus(3)),
        ("saturating3", saturating_nat(2)),
        ("saturating4", saturating_nat(3)),
    ];
    all.into_iter()
        .filter(|(_, s)| s.size().unwrap_or(usize::MAX) <= max_size)
        .collect()
}
