//! Finite topological spaces with extensionally stored opens.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard ceiling imposed by the `u64` state-set representation.
pub const HARD_MAX_STATES: usize = 64;
pub const DEFAULT_MAX_STATES: usize = 12;
pub const DEFAULT_MAX_OPENS: usize = 4096;

/// A subset of the carrier, as a bitmask over state indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(pub u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn full(n: usize) -> StateSet {
        StateSet(crate::semiring::full_mask(n))
    }

    pub fn singleton(i: usize) -> StateSet {
        StateSet(1 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: StateSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn intersect(self, other: StateSet) -> StateSet {
        StateSet(self.0 & other.0)
    }

    pub fn minus(self, other: StateSet) -> StateSet {
        StateSet(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> StateSet {
        StateSet::full(n).minus(self)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        crate::semiring::bits(self.0)
    }

    /// Every subset of `{0, …, n-1}`.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = StateSet> {
        (0..=crate::semiring::full_mask(n)).map(StateSet)
    }

    fn canonical_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.iter().collect())
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = StateSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

/// Size limits for carriers and open families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_states: usize,
    pub max_opens: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: DEFAULT_MAX_STATES,
            max_opens: DEFAULT_MAX_OPENS,
        }
    }
}

impl Limits {
    /// Defaults, with `SEATCHECK_MAX_STATES` overriding the state cap.
    pub fn from_env() -> Limits {
        let mut l = Limits::default();
        if let Some(n) = std::env::var("SEATCHECK_MAX_STATES")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            l.max_states = n.min(HARD_MAX_STATES);
        }
        l
    }

    pub fn check_states(&self, n: usize) -> Result<()> {
        if n > self.max_states.min(HARD_MAX_STATES) {
            return Err(Error::structural(format!(
                "{n} states exceed the carrier cap of {} (set SEATCHECK_MAX_STATES to raise it)",
                self.max_states.min(HARD_MAX_STATES)
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTopology {
    states: Vec<String>,
    opens: Vec<StateSet>,
    basis: Vec<StateSet>,
    index: HashMap<StateSet, usize>,
}

impl FiniteTopology {
    /// Topology generated by `subbasis` (members given as state-index sets).
    pub fn generate(states: Vec<String>, subbasis: &[StateSet], limits: &Limits) -> Result<Self> {
        check_names(&states)?;
        limits.check_states(states.len())?;
        let full = StateSet::full(states.len());
        for s in subbasis {
            if !s.is_subset(full) {
                return Err(Error::structural(
                    "subbasis member is not a subset of the states",
                ));
            }
        }
        let mut basis: Vec<StateSet> = vec![full];
        for &s in subbasis {
            let mut fresh = vec![s];
            for &b in &basis {
                fresh.push(b.intersect(s));
            }
            for f in fresh {
                if !basis.contains(&f) {
                    basis.push(f);
                }
            }
            if basis.len() > limits.max_opens {
                return Err(Error::Budget {
                    message: "basis exceeds the open-set cap".into(),
                    partial: basis.len(),
                });
            }
        }
        let mut opens = vec![StateSet::EMPTY];
        let mut seen: std::collections::HashSet<StateSet> = opens.iter().copied().collect();
        for &b in &basis {
            let snapshot = opens.clone();
            for o in snapshot {
                let u = o.union(b);
                if seen.insert(u) {
                    opens.push(u);
                    if opens.len() > limits.max_opens {
                        return Err(Error::Budget {
                            message: "topology exceeds the open-set cap".into(),
                            partial: opens.len(),
                        });
                    }
                }
            }
        }
        Ok(Self::assemble(states, opens, basis))
    }

    /// Topology from an explicit open family, which must contain `∅` and
    /// `X` and be closed under binary unions and intersections.
    pub fn from_opens(states: Vec<String>, opens: &[StateSet], limits: &Limits) -> Result<Self> {
        check_names(&states)?;
        limits.check_states(states.len())?;
        let full = StateSet::full(states.len());
        if opens.len() > limits.max_opens {
            return Err(Error::Budget {
                message: "open family exceeds the open-set cap".into(),
                partial: opens.len(),
            });
        }
        let set: std::collections::HashSet<StateSet> = opens.iter().copied().collect();
        for o in opens {
            if !o.is_subset(full) {
                return Err(Error::structural("open set is not a subset of the states"));
            }
        }
        if !set.contains(&StateSet::EMPTY) || !set.contains(&full) {
            return Err(Error::structural(
                "open family must contain the empty set and X",
            ));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&a.union(b)) || !set.contains(&a.intersect(b)) {
                    return Err(Error::structural(
                        "open family is not closed under union and intersection",
                    ));
                }
            }
        }
        let opens: Vec<StateSet> = set.into_iter().collect();
        Ok(Self::assemble(states, opens.clone(), opens))
    }

    /// The discrete topology on `states`.
    pub fn discrete(states: Vec<String>, limits: &Limits) -> Result<Self> {
        let singles: Vec<StateSet> = (0..states.len()).map(StateSet::singleton).collect();
        Self::generate(states, &singles, limits)
    }

    fn assemble(states: Vec<String>, mut opens: Vec<StateSet>, mut basis: Vec<StateSet>) -> Self {
        opens.sort_by_cached_key(|o| o.canonical_key());
        opens.dedup();
        basis.sort_by_cached_key(|o| o.canonical_key());
        basis.dedup();
        let index = opens.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        FiniteTopology {
            states,
            opens,
            basis,
            index,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn full(&self) -> StateSet {
        StateSet::full(self.states.len())
    }

    /// Opens in canonical order: by size, then lexicographically by index.
    pub fn opens(&self) -> &[StateSet] {
        &self.opens
    }

    pub fn basis(&self) -> &[StateSet] {
        &self.basis
    }

    pub fn open_index(&self, u: StateSet) -> Option<usize> {
        self.index.get(&u).copied()
    }

    pub fn is_open(&self, u: StateSet) -> bool {
        self.index.contains_key(&u)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn require_state(&self, name: &str) -> Result<usize> {
        self.state_index(name)
            .ok_or_else(|| Error::structural(format!("unknown state {name:?}")))
    }

    pub fn set_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<StateSet> {
        names
            .iter()
            .map(|n| self.require_state(n.as_ref()))
            .collect::<Result<StateSet>>()
    }

    pub fn names_of(&self, s: StateSet) -> Vec<String> {
        s.iter().map(|i| self.states[i].clone()).collect()
    }

    /// `{x, y}` rendering in state order.
    pub fn format_set(&self, s: StateSet) -> String {
        format!("{{{}}}", self.names_of(s).join(", "))
    }

    pub fn interior(&self, p: StateSet) -> StateSet {
        self.opens
            .iter()
            .filter(|o| o.is_subset(p))
            .fold(StateSet::EMPTY, |acc, &o| acc.union(o))
    }

    pub fn closure(&self, p: StateSet) -> StateSet {
        let n = self.len();
        self.interior(p.complement(n)).complement(n)
    }

    pub fn is_dense(&self, s: StateSet) -> bool {
        self.opens.iter().all(|o| o.is_empty() || o.meets(s))
    }
}

impl fmt::Display for FiniteTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.opens.iter().map(|&o| self.format_set(o)).collect();
        write!(f, "{{{}}}", opens.join(", "))
    }
}

fn check_names(states: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for s in states {
        if s.is_empty() {
            return Err(Error::structural("state names must be nonempty"));
        }
        if !seen.insert(s.as_str()) {
            return Err(Error::structural(format!("duplicate state {s:?}")));
        }
    }
    Ok(())
}
