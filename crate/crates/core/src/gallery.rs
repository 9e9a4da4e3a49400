//! Small, deterministic instances of the motivating examples and the
//! fixtures used to exhibit counterexamples and bisimulations.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bisim::Relation;
use crate::error::{Error, Result};
use crate::seat::{Model, RawEntry, Seat};
use crate::semiring::{Bound, Element, Ext, Ideal, Rat, Semiring};
use crate::topology::{FiniteTopology, Limits, StateSet};

/// Longest word length accepted by [`streams`].
pub const STREAM_DEPTH_CAP: usize = 3;

fn up(at: Ext) -> Ideal {
    Ideal::Up(Some(Bound::closed(at)))
}

fn up_int(n: i64) -> Ideal {
    up(Ext::int(n))
}

fn valuation(pairs: &[(&str, StateSet)]) -> BTreeMap<String, StateSet> {
    pairs.iter().map(|(p, s)| (p.to_string(), *s)).collect()
}

fn limits_for(n: usize) -> Limits {
    Limits {
        max_states: n.max(Limits::default().max_states),
        ..Limits::default()
    }
}

/// Binary words of length exactly `depth`, observed through prefixes.
///
/// `O(w)` holds every prefix of `w` plus, when given, the extra words in
/// `noise[w]`. Opens are generated by the sets `↑u` of words extending an
/// observable `u`; the annotation at `(U, w)` is generated by the length of
/// the shortest `u ∈ O(w)` with `↑u ⊆ U`, over `⟨ℕ∪{∞}, min, max⟩`.
pub fn streams(depth: usize, noise: Option<&BTreeMap<String, Vec<String>>>) -> Result<Model> {
    if depth > STREAM_DEPTH_CAP {
        return Err(Error::structural(format!(
            "stream depth {depth} exceeds the cap of {STREAM_DEPTH_CAP}"
        )));
    }
    let words: Vec<String> = (0..1usize << depth)
        .map(|i| {
            (0..depth)
                .map(|b| {
                    if i >> (depth - 1 - b) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect()
        })
        .collect();
    let names: Vec<String> = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.clone()
            }
        })
        .collect();
    let upset = |u: &str| -> StateSet {
        words
            .iter()
            .enumerate()
            .filter(|(_, w)| w.starts_with(u))
            .map(|(i, _)| i)
            .collect()
    };
    let mut obs: Vec<BTreeSet<String>> = words
        .iter()
        .map(|w| (0..=w.len()).map(|k| w[..k].to_string()).collect())
        .collect();
    if let Some(noise) = noise {
        for (w, extra) in noise {
            let i = names
                .iter()
                .position(|n| n == w)
                .ok_or_else(|| Error::structural(format!("unknown stream state {w:?}")))?;
            for u in extra {
                if u.len() > depth || !u.chars().all(|c| c == '0' || c == '1') {
                    return Err(Error::structural(format!(
                        "observation {u:?} is not a binary word of length at most {depth}"
                    )));
                }
                obs[i].insert(u.clone());
            }
        }
    }
    let mut subbasis: Vec<StateSet> = obs.iter().flatten().map(|u| upset(u)).collect();
    subbasis.sort();
    subbasis.dedup();
    let topology = FiniteTopology::generate(names, &subbasis, &limits_for(words.len()))?;
    let mut raw = Vec::new();
    for &u in topology.opens() {
        for (x, o) in obs.iter().enumerate() {
            let best = o
                .iter()
                .filter(|v| upset(v).is_subset(u))
                .map(|v| v.len())
                .min();
            if let Some(len) = best {
                raw.push(RawEntry::ideal(u, Some(x), up_int(len as i64)));
            }
        }
    }
    let seat = Seat::close(topology, Semiring::tropical_nat(), &raw)?;
    let all = seat.topology().full();
    Model::new(seat, valuation(&[("p", all)]))
}

/// Role-based access control over a finite state space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RbacParams {
    pub states: Vec<String>,
    pub roles: Vec<String>,
    /// Databases each role may read.
    pub access: BTreeMap<String, Vec<String>>,
    /// States consistent with the content of each database.
    pub consistent: BTreeMap<String, Vec<String>>,
    /// Qualifications, as sets of roles.
    pub qualifications: Vec<Vec<String>>,
}

impl RbacParams {
    /// Two roles over three databases and four states.
    pub fn example() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        RbacParams {
            states: s(&["w1", "w2", "w3", "w4"]),
            roles: s(&["admin", "analyst"]),
            access: BTreeMap::from([
                ("admin".into(), s(&["hr", "sales"])),
                ("analyst".into(), s(&["sales"])),
            ]),
            consistent: BTreeMap::from([
                ("hr".into(), s(&["w1", "w2"])),
                ("sales".into(), s(&["w1", "w2", "w3"])),
                ("ops".into(), s(&["w3", "w4"])),
            ]),
            qualifications: vec![s(&["admin"]), s(&["admin", "analyst"])],
        }
    }
}

/// The uniform seat of role-based access: a qualification `a` obtains `U`
/// when every role in `a` sees only states inside `U`. The empty
/// qualification and the set of all roles are always qualifications;
/// opens are generated by the least observable set of each qualification.
pub fn rbac(p: &RbacParams) -> Result<Model> {
    let n = p.states.len();
    let role_ix: HashMap<&str, usize> = p
        .roles
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_str(), i))
        .collect();
    if role_ix.len() != p.roles.len() || p.roles.len() > 6 {
        return Err(Error::structural("roles must be distinct and at most six"));
    }
    let state_set = |names: &[String]| -> Result<StateSet> {
        names
            .iter()
            .map(|s| {
                p.states
                    .iter()
                    .position(|t| t == s)
                    .ok_or_else(|| Error::structural(format!("unknown state {s:?}")))
            })
            .collect()
    };
    let full = StateSet::full(n);
    let mut pd = vec![full; p.roles.len()];
    for (r, dbs) in &p.access {
        let &i = role_ix
            .get(r.as_str())
            .ok_or_else(|| Error::structural(format!("unknown role {r:?}")))?;
        for db in dbs {
            let cons = p
                .consistent
                .get(db)
                .ok_or_else(|| Error::structural(format!("unknown database {db:?}")))?;
            pd[i] = pd[i].intersect(state_set(cons)?);
        }
    }
    let mut ql: BTreeSet<u64> = BTreeSet::from([0, crate::semiring::full_mask(p.roles.len())]);
    for q in &p.qualifications {
        let mut m = 0u64;
        for r in q {
            let &i = role_ix
                .get(r.as_str())
                .ok_or_else(|| Error::structural(format!("unknown role {r:?}")))?;
            m |= 1 << i;
        }
        ql.insert(m);
    }
    for &a in &ql {
        for &b in &ql {
            if !ql.contains(&(a | b)) || !ql.contains(&(a & b)) {
                return Err(Error::structural(
                    "qualifications must be closed under union and intersection",
                ));
            }
        }
    }
    let elems: Vec<u64> = ql.into_iter().collect();
    let label = |m: u64| {
        let parts: Vec<&str> = (0..p.roles.len())
            .filter(|i| m >> i & 1 == 1)
            .map(|i| p.roles[i].as_str())
            .collect();
        format!("{{{}}}", parts.join(","))
    };
    let names: Vec<String> = elems.iter().map(|&m| label(m)).collect();
    let at = |m: u64| elems.iter().position(|&e| e == m).expect("closed family");
    let semiring = Semiring::from_fn(
        &names,
        |a, b| at(elems[a] | elems[b]),
        |a, b| at(elems[a] & elems[b]),
        at(0),
        at(*elems.last().expect("nonempty")),
        false,
    )?;
    let sees = |m: u64| {
        (0..p.roles.len())
            .filter(|i| m >> i & 1 == 1)
            .fold(StateSet::EMPTY, |acc, i| acc.union(pd[i]))
    };
    let basis: Vec<StateSet> = elems.iter().map(|&m| sees(m)).collect();
    let topology = FiniteTopology::generate(p.states.clone(), &basis, &limits_for(n))?;
    let seat = Seat::from_table(topology, semiring, |u, _| {
        let mask = elems
            .iter()
            .enumerate()
            .filter(|(_, &m)| sees(m).is_subset(u))
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        Ideal::Set(mask)
    })?;
    Model::new(
        seat,
        valuation(&[("p", pd.first().copied().unwrap_or(full))]),
    )
}

/// An undirected weighted graph explored from the start vertex of each
/// state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphParams {
    pub vertices: Vec<String>,
    /// `(v, w, weight)`; weights are nonnegative rationals such as `"3/2"`.
    pub edges: Vec<(String, String, String)>,
    /// Global states with their designated start vertex.
    pub states: Vec<(String, String)>,
    /// States consistent with what each vertex shows.
    pub info: BTreeMap<String, Vec<String>>,
    /// Maximum number of vertices on one path.
    pub path_cap: usize,
    /// Maximum number of paths in one exploration.
    pub exploration_cap: usize,
}

impl GraphParams {
    /// A three-vertex path graph seen from two different start vertices.
    pub fn example() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        GraphParams {
            vertices: s(&["v0", "v1", "v2"]),
            edges: vec![
                ("v0".into(), "v1".into(), "1".into()),
                ("v1".into(), "v2".into(), "2".into()),
            ],
            states: vec![
                ("g1".into(), "v0".into()),
                ("g2".into(), "v0".into()),
                ("g3".into(), "v2".into()),
            ],
            info: BTreeMap::from([
                ("v0".into(), s(&["g1", "g2", "g3"])),
                ("v1".into(), s(&["g1", "g2"])),
                ("v2".into(), s(&["g1", "g3"])),
            ]),
            path_cap: 3,
            exploration_cap: 2,
        }
    }
}

/// Upper bound on enumerated paths in [`graph_exploration`].
pub const MAX_PATHS: usize = 10_000;

/// Weighted graph exploration over `⟨ℚ≥0∪{∞}, min, +⟩`. The annotation at
/// `(U, x)` is the up-set of the cheapest exploration from the start vertex
/// of `x` whose combined information lies inside `U`, always containing `∞`.
pub fn graph_exploration(p: &GraphParams) -> Result<Model> {
    let vix: HashMap<&str, usize> = p
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let vertex = |v: &str| {
        vix.get(v)
            .copied()
            .ok_or_else(|| Error::structural(format!("unknown vertex {v:?}")))
    };
    let names: Vec<String> = p.states.iter().map(|(s, _)| s.clone()).collect();
    let n = names.len();
    let full = StateSet::full(n);
    let mut adj: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); p.vertices.len()];
    for (a, b, w) in &p.edges {
        let w: Ext = w
            .parse()
            .map_err(|_| Error::structural(format!("bad edge weight {w:?}")))?;
        let w = match w {
            Ext::Fin(q) if q >= Rat::from_integer(0) => q,
            _ => {
                return Err(Error::structural(
                    "edge weights must be finite and nonnegative",
                ))
            }
        };
        let (a, b) = (vertex(a)?, vertex(b)?);
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut info = vec![full; p.vertices.len()];
    for (v, sts) in &p.info {
        let i = vertex(v)?;
        info[i] = sts
            .iter()
            .map(|s| {
                names
                    .iter()
                    .position(|t| t == s)
                    .ok_or_else(|| Error::structural(format!("unknown state {s:?}")))
            })
            .collect::<Result<StateSet>>()?;
    }
    // paths from each start vertex: (information, weight)
    let mut paths: Vec<Vec<(StateSet, Rat)>> = vec![Vec::new(); p.vertices.len()];
    for (v0, out) in paths.iter_mut().enumerate() {
        let mut frontier = vec![(v0, info[v0], Rat::from_integer(0))];
        for len in 1..=p.path_cap {
            out.extend(frontier.iter().map(|&(_, s, w)| (s, w)));
            if out.len() > MAX_PATHS {
                return Err(Error::Budget {
                    message: "too many paths within the path cap".into(),
                    partial: out.len(),
                });
            }
            if len == p.path_cap {
                break;
            }
            frontier = frontier
                .iter()
                .flat_map(|&(v, s, w)| adj[v].iter().map(move |&(u, e)| (u, s, w + e)))
                .map(|(u, s, w)| (u, s.intersect(info[u]), w))
                .collect();
        }
    }
    // cheapest exploration reaching each information set, per start vertex
    let mut best: Vec<HashMap<StateSet, Rat>> = Vec::new();
    for out in &paths {
        let mut reach = HashMap::from([(full, Rat::from_integer(0))]);
        for _ in 0..p.exploration_cap {
            let mut next = reach.clone();
            for (&s, &c) in &reach {
                for &(t, w) in out {
                    let k = s.intersect(t);
                    let cand = c + w;
                    next.entry(k)
                        .and_modify(|old| {
                            if cand < *old {
                                *old = cand
                            }
                        })
                        .or_insert(cand);
                }
            }
            reach = next;
        }
        best.push(reach);
    }
    let subbasis: Vec<StateSet> = paths.iter().flatten().map(|&(s, _)| s).collect();
    let topology = FiniteTopology::generate(names, &subbasis, &limits_for(n))?;
    let mut raw = Vec::new();
    for (x, (_, v)) in p.states.iter().enumerate() {
        let b = &best[vertex(v)?];
        for &u in topology.opens() {
            let cost = b
                .iter()
                .filter(|(s, _)| s.is_subset(u))
                .map(|(_, &c)| c)
                .min();
            let ideal = match cost {
                Some(c) => up(Ext::Fin(c)),
                None => up(Ext::Inf),
            };
            raw.push(RawEntry::ideal(u, Some(x), ideal));
        }
    }
    let seat = Seat::close(topology, Semiring::min_plus_rat(), &raw)?;
    let first = seat.topology().full();
    Model::new(seat, valuation(&[("p", first)]))
}

/// Agents with indistinguishability partitions of a finite state space.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AgentsParams {
    pub states: Vec<String>,
    /// Cells of each agent's partition.
    pub partitions: BTreeMap<String, Vec<Vec<String>>>,
}

impl AgentsParams {
    /// Two agents with crossing partitions of four states.
    pub fn example() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        AgentsParams {
            states: s(&["s1", "s2", "s3", "s4"]),
            partitions: BTreeMap::from([
                ("n1".into(), vec![s(&["s1", "s2"]), s(&["s3", "s4"])]),
                ("n2".into(), vec![s(&["s1", "s3"]), s(&["s2", "s4"])]),
            ]),
        }
    }
}

/// Groups of agents as resources over `⟨𝒫(A), ∪, ∪, ∅⟩` (lax zero): a
/// group obtains `U` at `s` when its distributed knowledge at `s` lies in
/// `U`. Opens are generated by the distributed-knowledge cells.
pub fn agents(p: &AgentsParams) -> Result<Model> {
    let n = p.states.len();
    let agents: Vec<String> = p.partitions.keys().cloned().collect();
    let refs: Vec<&str> = agents.iter().map(String::as_str).collect();
    if agents.len() > 6 {
        return Err(Error::structural("at most six agents are supported"));
    }
    let semiring = Semiring::from_spec(crate::semiring::SemiringSpec::PowersetUnion {
        agents: agents.clone(),
    })?;
    let full = StateSet::full(n);
    // cell[i][s]: the cell of agent i containing s
    let mut cell = vec![vec![StateSet::EMPTY; n]; agents.len()];
    for (i, a) in refs.iter().enumerate() {
        let mut covered = StateSet::EMPTY;
        for c in &p.partitions[*a] {
            let set: StateSet = c
                .iter()
                .map(|s| {
                    p.states
                        .iter()
                        .position(|t| t == s)
                        .ok_or_else(|| Error::structural(format!("unknown state {s:?}")))
                })
                .collect::<Result<_>>()?;
            if set.is_empty() || set.meets(covered) {
                return Err(Error::structural(format!(
                    "cells of {a:?} must be nonempty and disjoint"
                )));
            }
            covered = covered.union(set);
            for s in set.iter() {
                cell[i][s] = set;
            }
        }
        if covered != full {
            return Err(Error::structural(format!(
                "cells of {a:?} must cover every state"
            )));
        }
    }
    let groups = 1u64 << agents.len();
    let knows = |g: u64, s: usize| {
        (0..agents.len())
            .filter(|i| g >> i & 1 == 1)
            .fold(full, |acc, i| acc.intersect(cell[i][s]))
    };
    let subbasis: Vec<StateSet> = (0..groups)
        .flat_map(|g| (0..n).map(move |s| (g, s)))
        .map(|(g, s)| knows(g, s))
        .collect();
    let topology = FiniteTopology::generate(p.states.clone(), &subbasis, &limits_for(n))?;
    // element index = agent bitmask in the powerset table
    let seat = Seat::from_table(topology, semiring, |u, s| {
        Ideal::Set(
            (0..groups)
                .filter(|&g| knows(g, s).is_subset(u))
                .fold(0, |acc, g| acc | 1 << g),
        )
    })?;
    Model::new(seat, valuation(&[("p", full)]))
}

/// Per-state point masses on a finite space with a generated topology.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BorelParams {
    pub states: Vec<String>,
    pub subbasis: Vec<Vec<String>>,
    /// `weights[x][y] = μ_x({y})`, as rationals.
    pub weights: BTreeMap<String, BTreeMap<String, String>>,
}

impl BorelParams {
    /// Four states, a chain of opens, and state-dependent measures.
    pub fn example() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let row = |w: [&str; 4]| -> BTreeMap<String, String> {
            ["a", "b", "c", "d"]
                .iter()
                .zip(w)
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect()
        };
        BorelParams {
            states: s(&["a", "b", "c", "d"]),
            subbasis: vec![
                s(&["a"]),
                s(&["a", "b"]),
                s(&["a", "b", "c"]),
                s(&["b", "d"]),
            ],
            weights: BTreeMap::from([
                ("a".into(), row(["1/2", "1/4", "1/8", "1/8"])),
                ("b".into(), row(["0", "1", "0", "0"])),
                ("c".into(), row(["1", "1", "1", "1"])),
                ("d".into(), row(["0", "0", "3/2", "1/2"])),
            ]),
        }
    }

    fn mu(&self) -> Result<Vec<Vec<Rat>>> {
        let n = self.states.len();
        let mut mu = vec![vec![Rat::from_integer(0); n]; n];
        for (x, row) in &self.weights {
            let xi = self.index(x)?;
            for (y, w) in row {
                let q = match w.parse::<Ext>() {
                    Ok(Ext::Fin(q)) if q >= Rat::from_integer(0) => q,
                    _ => {
                        return Err(Error::structural(format!(
                            "weight {w:?} must be a finite nonnegative rational"
                        )))
                    }
                };
                mu[xi][self.index(y)?] = q;
            }
        }
        Ok(mu)
    }

    fn index(&self, s: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|t| t == s)
            .ok_or_else(|| Error::structural(format!("unknown state {s:?}")))
    }

    /// `μ_x(X∖U)`.
    pub fn cost(&self, u: StateSet, x: usize) -> Result<Rat> {
        let mu = self.mu()?;
        Ok(u.complement(self.states.len())
            .iter()
            .map(|y| mu[x][y])
            .sum())
    }
}

/// Cost seat over `⟨ℚ≥0∪{∞}, min, +⟩` with `𝒜(U, x) = {a | μ_x(X∖U) ≤ a}`.
pub fn borel_cost(p: &BorelParams) -> Result<Model> {
    let mu = p.mu()?;
    let n = p.states.len();
    let subbasis = p
        .subbasis
        .iter()
        .map(|c| c.iter().map(|s| p.index(s)).collect::<Result<StateSet>>())
        .collect::<Result<Vec<_>>>()?;
    let topology = FiniteTopology::generate(p.states.clone(), &subbasis, &limits_for(n))?;
    let seat = Seat::from_table(topology, Semiring::min_plus_rat(), |u, x| {
        up(Ext::Fin(u.complement(n).iter().map(|y| mu[x][y]).sum()))
    })?;
    let full = seat.topology().full();
    Model::new(seat, valuation(&[("p", full)]))
}

fn states(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Three states where weighted interior fails the interior laws at 42,
/// over `⟨ℕ∪{∞}, min, +⟩`.
pub fn inta_counterexample() -> Model {
    let t = FiniteTopology::generate(
        states(&["x", "y", "z"]),
        &[StateSet(0b011), StateSet(0b101)],
        &Limits::default(),
    )
    .expect("fixture topology");
    let special = [StateSet(0b111), StateSet(0b011), StateSet(0b101)];
    let seat = Seat::from_table(t, Semiring::min_plus_nat(), |u, x| {
        if x == 0 && special.contains(&u) {
            up_int(42)
        } else {
            up_int(43)
        }
    })
    .expect("fixture seat");
    Model::new(seat, valuation(&[("p", StateSet(0b111))])).expect("fixture model")
}

/// One point where everything is available, `p` true.
pub fn a12_m1() -> Model {
    let t = FiniteTopology::generate(states(&["x1"]), &[], &Limits::default()).expect("topology");
    let s = Semiring::min_plus_rat();
    let full = s.full_ideal();
    let seat = Seat::from_table(t, s, |_, _| full).expect("fixture seat");
    Model::new(seat, valuation(&[("p", StateSet(0b1))])).expect("fixture model")
}

/// Two points with `{x2}` open, everything available, `p` true at `x2`.
pub fn a12_m2() -> Model {
    let t = FiniteTopology::generate(states(&["x2", "y2"]), &[StateSet(0b01)], &Limits::default())
        .expect("topology");
    let s = Semiring::min_plus_rat();
    let full = s.full_ideal();
    let seat = Seat::from_table(t, s, |_, _| full).expect("fixture seat");
    Model::new(seat, valuation(&[("p", StateSet(0b01))])).expect("fixture model")
}

fn a13_m1_with(empty: Ideal) -> Model {
    let t = FiniteTopology::generate(
        states(&["x1", "y1", "z1"]),
        &[StateSet(0b011)],
        &Limits::default(),
    )
    .expect("topology");
    let s = Semiring::min_plus_rat();
    let seat = Seat::from_table(t, s, |u, _| match u.0 {
        0b111 => up_int(0),
        0b011 => Ideal::Up(Some(Bound {
            at: Ext::int(0),
            open: true,
        })),
        _ => empty,
    })
    .expect("fixture seat");
    Model::new(seat, valuation(&[("p", StateSet(0b111))])).expect("fixture model")
}

/// Three points with `{x1,y1}` open, annotated `[0,∞]`, `(0,∞]` and, on
/// `∅`, the ideal generated by `1`. The join on `{x1,y1}` is not attained.
pub fn a13_m1() -> Model {
    a13_m1_with(up_int(1))
}

/// [`a13_m1`] with `𝒜(∅) = {∞}`, matching the empty-set annotation of
/// [`a13_m2`]. With the ideal generated by `1` on `∅`, the printed relation
/// fails the evidence clause for resource `1` at `∅`; this variant is the
/// least change under which it is a global bisimulation.
pub fn a13_m1_amended() -> Model {
    a13_m1_with(up(Ext::Inf))
}

/// Two indiscrete points annotated `[0,∞]` on `X` and `{∞}` on `∅`.
pub fn a13_m2() -> Model {
    let t =
        FiniteTopology::generate(states(&["x2", "y2"]), &[], &Limits::default()).expect("topology");
    let seat = Seat::from_table(t, Semiring::min_plus_rat(), |u, _| {
        if u.is_empty() {
            up(Ext::Inf)
        } else {
            up_int(0)
        }
    })
    .expect("fixture seat");
    Model::new(seat, valuation(&[("p", StateSet(0b11))])).expect("fixture model")
}

/// `{(x1, x2)}` between [`a12_m1`] and [`a12_m2`].
pub fn z12() -> Relation {
    Relation::new(vec![(0, 0)], false)
}

/// `{(x1,x2), (y1,y2), (z1,y2)}`, global, between [`a13_m1`] and [`a13_m2`].
pub fn z13() -> Relation {
    Relation::new(vec![(0, 0), (1, 1), (2, 1)], true)
}

/// Names accepted by [`fixture`].
pub const FIXTURES: [&str; 6] = [
    "inta_counterexample",
    "a12_m1",
    "a12_m2",
    "a13_m1",
    "a13_m1_amended",
    "a13_m2",
];

/// Every fixture model by name.
pub fn fixtures() -> BTreeMap<&'static str, Model> {
    FIXTURES
        .iter()
        .map(|&n| (n, fixture(n).expect("known fixture")))
        .collect()
}

pub fn fixture(name: &str) -> Option<Model> {
    Some(match name {
        "inta_counterexample" => inta_counterexample(),
        "a12_m1" => a12_m1(),
        "a12_m2" => a12_m2(),
        "a13_m1" => a13_m1(),
        "a13_m1_amended" => a13_m1_amended(),
        "a13_m2" => a13_m2(),
        _ => return None,
    })
}

/// Resources `0`, `1` and `∞` as literals, for threshold fixtures.
pub fn probe_literals() -> Vec<String> {
    ["0", "1", "inf"].map(String::from).to_vec()
}

/// An element parsed against a gallery semiring; panics on bad input.
pub fn element(s: &Semiring, lit: &str) -> Element {
    s.parse_element(lit).expect("literal of the semiring")
}
