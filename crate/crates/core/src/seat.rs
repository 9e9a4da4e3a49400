//! Seats: a finite topology whose open/state pairs are annotated with
//! ideals of a semiring, and models built on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::{Element, Ext, Ideal, Join, Semiring};
use crate::topology::{FiniteTopology, Limits, StateSet};

/// Fixpoint rounds allowed in [`Seat::close`]; finite carriers and
/// threshold sums settle long before this.
const CLOSE_ROUNDS: usize = 10_000;

/// Input annotation for one open, either at a single state or, when
/// `state` is `None`, at every state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawEntry {
    pub open: StateSet,
    pub state: Option<usize>,
    pub value: RawIdeal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawIdeal {
    Generators(Vec<Element>),
    Ideal(Ideal),
}

impl RawEntry {
    pub fn generators(open: StateSet, state: Option<usize>, gens: Vec<Element>) -> Self {
        RawEntry {
            open,
            state,
            value: RawIdeal::Generators(gens),
        }
    }

    pub fn ideal(open: StateSet, state: Option<usize>, ideal: Ideal) -> Self {
        RawEntry {
            open,
            state,
            value: RawIdeal::Ideal(ideal),
        }
    }
}

/// A failed seat condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Which of the five conditions fails.
    pub condition: u8,
    pub state: usize,
    pub opens: Vec<StateSet>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seat {
    topology: FiniteTopology,
    semiring: Semiring,
    /// `annotation[u * n + x]` is `𝒜(opens[u], x)`.
    annotation: Vec<Ideal>,
}

impl Seat {
    /// Least annotation satisfying the seat conditions that contains every
    /// raw entry. Pairs never mentioned stay empty, except `(X, x)` which
    /// always receives the ideal generated by `𝟘`.
    pub fn close(topology: FiniteTopology, semiring: Semiring, raw: &[RawEntry]) -> Result<Seat> {
        let mut seat = Seat::literal(topology, semiring, raw)?;
        let n = seat.len();
        let top = seat.top_index();
        let zero = seat.semiring.ideal_close(&[seat.semiring.zero()]);
        for x in 0..n {
            seat.merge(top, x, &zero);
        }
        seat.saturate()?;
        Ok(seat)
    }

    /// The seat conditions failed by the raw entries taken literally: each
    /// pair gets the ideal generated by its own entries, nothing propagated.
    pub fn raw_violations(
        topology: FiniteTopology,
        semiring: Semiring,
        raw: &[RawEntry],
    ) -> Result<Vec<Violation>> {
        Ok(Seat::literal(topology, semiring, raw)?.validate())
    }

    fn literal(topology: FiniteTopology, semiring: Semiring, raw: &[RawEntry]) -> Result<Seat> {
        let n = topology.len();
        let mut seat = Seat {
            annotation: vec![semiring.empty_ideal(); topology.opens().len() * n],
            topology,
            semiring,
        };
        for e in raw {
            let u = seat.require_open(e.open)?;
            let ideal = match &e.value {
                RawIdeal::Generators(g) => {
                    if let Some(bad) = g.iter().find(|&&a| !seat.semiring.contains(a)) {
                        return Err(Error::structural(format!(
                            "generator {bad:?} is not an element of the semiring"
                        )));
                    }
                    seat.semiring.ideal_close(g)
                }
                RawIdeal::Ideal(i) => seat.normalize_ideal(i)?,
            };
            let states: Vec<usize> = match e.state {
                Some(x) if x < n => vec![x],
                Some(x) => return Err(Error::structural(format!("state index {x} out of range"))),
                None => (0..n).collect(),
            };
            for x in states {
                seat.merge(u, x, &ideal);
            }
        }
        Ok(seat)
    }

    /// A seat from a complete annotation table, rejected unless it already
    /// satisfies every condition.
    pub fn from_table(
        topology: FiniteTopology,
        semiring: Semiring,
        mut annotation: impl FnMut(StateSet, usize) -> Ideal,
    ) -> Result<Seat> {
        let n = topology.len();
        let mut table = Vec::with_capacity(topology.opens().len() * n);
        for &u in topology.opens() {
            for x in 0..n {
                table.push(annotation(u, x));
            }
        }
        let seat = Seat {
            topology,
            semiring,
            annotation: table,
        };
        if let Some(v) = seat.validate().into_iter().next() {
            return Err(Error::structural(format!(
                "annotation violates condition ({}): {}",
                v.condition, v.detail
            )));
        }
        Ok(seat)
    }

    pub(crate) fn from_parts_unchecked(
        topology: FiniteTopology,
        semiring: Semiring,
        annotation: Vec<Ideal>,
    ) -> Seat {
        debug_assert_eq!(annotation.len(), topology.opens().len() * topology.len());
        Seat {
            topology,
            semiring,
            annotation,
        }
    }

    fn normalize_ideal(&self, i: &Ideal) -> Result<Ideal> {
        match i {
            Ideal::Set(m) if self.semiring.is_finite() => {
                let members: Vec<Element> = crate::semiring::bits(*m)
                    .map(|k| Element::Idx(k as u8))
                    .collect();
                if members.iter().any(|&a| !self.semiring.contains(a)) {
                    return Err(Error::structural("ideal member outside the semiring"));
                }
                Ok(self.semiring.ideal_close(&members))
            }
            Ideal::Up(b) if !self.semiring.is_finite() => {
                Ok(Ideal::Up(self.semiring.normalize(*b)))
            }
            _ => Err(Error::structural(
                "ideal does not match the semiring backend",
            )),
        }
    }

    fn merge(&mut self, u: usize, x: usize, ideal: &Ideal) -> bool {
        let k = u * self.topology.len() + x;
        if ideal.is_subset(&self.annotation[k]) {
            return false;
        }
        self.annotation[k] = self.semiring.ideal_union(&self.annotation[k], ideal);
        true
    }

    /// Propagates monotonicity and the combination condition to a fixpoint.
    fn saturate(&mut self) -> Result<()> {
        let n = self.topology.len();
        let opens: Vec<StateSet> = self.topology.opens().to_vec();
        let meets: Vec<Vec<usize>> = opens
            .iter()
            .map(|&u| {
                opens
                    .iter()
                    .map(|&v| {
                        self.topology
                            .open_index(u.intersect(v))
                            .expect("closed family")
                    })
                    .collect()
            })
            .collect();
        for _ in 0..CLOSE_ROUNDS {
            let mut changed = false;
            for (i, &u) in opens.iter().enumerate() {
                for (j, &v) in opens.iter().enumerate() {
                    if i == j || !u.is_subset(v) {
                        continue;
                    }
                    for x in 0..n {
                        let src = self.annotation[i * n + x];
                        changed |= self.merge(j, x, &src);
                    }
                }
            }
            for i in 0..opens.len() {
                for j in i..opens.len() {
                    let w = meets[i][j];
                    for x in 0..n {
                        let (a, b) = (self.annotation[i * n + x], self.annotation[j * n + x]);
                        if a.is_empty() || b.is_empty() {
                            continue;
                        }
                        let p = self.semiring.ideal_product(&a, &b);
                        changed |= self.merge(w, x, &p);
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
        Err(Error::Internal(
            "seat closure did not reach a fixpoint".into(),
        ))
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn semiring(&self) -> &Semiring {
        &self.semiring
    }

    pub fn len(&self) -> usize {
        self.topology.len()
    }

    pub fn is_empty(&self) -> bool {
        self.topology.is_empty()
    }

    fn top_index(&self) -> usize {
        self.topology.opens().len() - 1
    }

    fn require_open(&self, u: StateSet) -> Result<usize> {
        self.topology.open_index(u).ok_or_else(|| {
            Error::structural(format!("{} is not open", self.topology.format_set(u)))
        })
    }

    /// `𝒜(U, x)` by open index.
    pub fn ideal_at(&self, u: usize, x: usize) -> &Ideal {
        &self.annotation[u * self.topology.len() + x]
    }

    /// `𝒜(U, x)`.
    pub fn ideal(&self, u: StateSet, x: usize) -> Result<&Ideal> {
        let i = self.require_open(u)?;
        if x >= self.len() {
            return Err(Error::structural(format!("state index {x} out of range")));
        }
        Ok(self.ideal_at(i, x))
    }

    /// `ℰ_a(x)`, in canonical open order.
    pub fn evidence_at(&self, a: Element, x: usize) -> Result<Vec<StateSet>> {
        if x >= self.len() {
            return Err(Error::structural(format!("state index {x} out of range")));
        }
        Ok(self.evidence(a, x))
    }

    pub(crate) fn evidence(&self, a: Element, x: usize) -> Vec<StateSet> {
        self.topology
            .opens()
            .iter()
            .enumerate()
            .filter(|(u, _)| self.ideal_at(*u, x).contains(a))
            .map(|(_, &o)| o)
            .collect()
    }

    /// `ℬ(x)`: opens with a nonempty annotation at `x`.
    pub fn accessible_basis(&self, x: usize) -> Vec<StateSet> {
        self.topology
            .opens()
            .iter()
            .enumerate()
            .filter(|(u, _)| !self.ideal_at(*u, x).is_empty())
            .map(|(_, &o)| o)
            .collect()
    }

    /// `𝒯(x)`, generated by `ℬ(x)`.
    pub fn derived_topology(&self, x: usize) -> Result<FiniteTopology> {
        let limits = Limits {
            max_states: self.len().max(1),
            max_opens: self.topology.opens().len().max(2),
        };
        FiniteTopology::generate(
            self.topology.states().to_vec(),
            &self.accessible_basis(x),
            &limits,
        )
    }

    /// Cost of `U` at `x`: the join of `𝒜(U, x)` and whether it is attained.
    pub fn cost(&self, u: StateSet, x: usize) -> Result<Join> {
        let i = self.ideal(u, x)?;
        self.semiring.ideal_join(i)
    }

    /// Every threshold value used by the annotation.
    pub fn breakpoints(&self) -> Vec<Ext> {
        let mut v: Vec<Ext> = self
            .annotation
            .iter()
            .filter_map(|i| i.breakpoint())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Elements on which every `ℰ_a` family of this seat is realised: the
    /// whole carrier when finite, otherwise one probe per threshold region.
    pub fn probes(&self, extra: &[Element]) -> Vec<Element> {
        if self.semiring.is_finite() {
            return self.semiring.elements().expect("finite");
        }
        let mut pts = self.breakpoints();
        pts.extend(extra.iter().filter_map(|e| match e {
            Element::Num(x) => Some(*x),
            Element::Idx(_) => None,
        }));
        self.semiring.region_probes(pts)
    }

    /// Checks the five seat conditions; empty when all hold.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.len();
        let s = &self.semiring;
        let opens = self.topology.opens();
        let mut out = Vec::new();
        for (u, &uo) in opens.iter().enumerate() {
            for x in 0..n {
                if let Some((c, a, b)) = s.ideal_defect(self.ideal_at(u, x)) {
                    let what = if c == 1 { "a product" } else { "a sum" };
                    out.push(Violation {
                        condition: c,
                        state: x,
                        opens: vec![uo],
                        detail: format!(
                            "𝒜({}, {}) misses {what} of {} and {}",
                            self.topology.format_set(uo),
                            self.topology.states()[x],
                            s.name(a),
                            s.name(b)
                        ),
                    });
                }
            }
        }
        for (u, &uo) in opens.iter().enumerate() {
            for (v, &vo) in opens.iter().enumerate() {
                for x in 0..n {
                    let (iu, iv) = (self.ideal_at(u, x), self.ideal_at(v, x));
                    if uo.is_subset(vo) && !iu.is_subset(iv) {
                        out.push(Violation {
                            condition: 2,
                            state: x,
                            opens: vec![uo, vo],
                            detail: format!(
                                "𝒜({}, {}) ⊄ 𝒜({}, {})",
                                self.topology.format_set(uo),
                                self.topology.states()[x],
                                self.topology.format_set(vo),
                                self.topology.states()[x]
                            ),
                        });
                    }
                    if u <= v && !iu.is_empty() && !iv.is_empty() {
                        let w = self
                            .topology
                            .open_index(uo.intersect(vo))
                            .expect("closed family");
                        let prod = s.ideal_product(iu, iv);
                        if !prod.is_subset(self.ideal_at(w, x)) {
                            out.push(Violation {
                                condition: 4,
                                state: x,
                                opens: vec![uo, vo],
                                detail: format!(
                                    "products from {} and {} are missing at their meet for {}",
                                    self.topology.format_set(uo),
                                    self.topology.format_set(vo),
                                    self.topology.states()[x]
                                ),
                            });
                        }
                    }
                }
            }
        }
        let top = self.top_index();
        for x in 0..n {
            if !self.ideal_at(top, x).contains(s.zero()) {
                out.push(Violation {
                    condition: 5,
                    state: x,
                    opens: vec![self.topology.full()],
                    detail: format!("𝟘 ∉ 𝒜(X, {})", self.topology.states()[x]),
                });
            }
        }
        out
    }

    /// Row-per-pair rendering of the annotation.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (u, &o) in self.topology.opens().iter().enumerate() {
            for (x, name) in self.topology.states().iter().enumerate() {
                s.push_str(&format!(
                    "A({}, {name}) = {}\n",
                    self.topology.format_set(o),
                    self.semiring.format_ideal(self.ideal_at(u, x))
                ));
            }
        }
        s
    }
}

/// A seat with a valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub seat: Seat,
    pub valuation: BTreeMap<String, StateSet>,
}

impl Model {
    pub fn new(seat: Seat, valuation: BTreeMap<String, StateSet>) -> Result<Model> {
        let full = seat.topology().full();
        for (p, v) in &valuation {
            if !v.is_subset(full) {
                return Err(Error::structural(format!(
                    "valuation of {p:?} mentions unknown states"
                )));
            }
        }
        Ok(Model { seat, valuation })
    }

    pub fn len(&self) -> usize {
        self.seat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seat.is_empty()
    }

    pub fn topology(&self) -> &FiniteTopology {
        self.seat.topology()
    }

    pub fn semiring(&self) -> &Semiring {
        self.seat.semiring()
    }

    pub fn prop(&self, name: &str) -> Result<StateSet> {
        self.valuation
            .get(name)
            .copied()
            .ok_or_else(|| Error::evaluation(format!("unknown proposition {name:?}")))
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}
