//! Satisfaction and the resource-indexed epistemic operators.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::seat::{Model, Seat};
use crate::semiring::Element;
use crate::topology::StateSet;

/// A formula compiled against one seat: literals resolved to evidence rows
/// and propositions to valuation slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Core {
    Prop(usize),
    Top,
    Bot,
    Not(Box<Core>),
    And(Box<Core>, Box<Core>),
    F(usize, Box<Core>),
    Box(Box<Core>),
    All(Box<Core>),
}

#[derive(Clone, Debug)]
struct Row {
    /// ⊆-minimal members of `ℰ_a(x)`, per state.
    minimal: Vec<Vec<StateSet>>,
}

/// Precomputed per-seat lookup tables for fast evaluation.
#[derive(Clone, Debug)]
pub struct SeatIndex<'s> {
    seat: &'s Seat,
    /// Least open neighbourhood of each state.
    nbhd: Vec<StateSet>,
    rows: Vec<Row>,
    row_of: HashMap<Element, usize>,
    lits: HashMap<String, Element>,
}

fn minimal(sets: impl IntoIterator<Item = StateSet>) -> Vec<StateSet> {
    let all: Vec<StateSet> = sets.into_iter().collect();
    all.iter()
        .copied()
        .filter(|&u| !all.iter().any(|&v| v != u && v.is_subset(u)))
        .collect()
}

impl<'s> SeatIndex<'s> {
    pub fn new(seat: &'s Seat) -> Self {
        let t = seat.topology();
        let nbhd = (0..t.len())
            .map(|x| {
                t.opens()
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(t.full(), |acc, &o| acc.intersect(o))
            })
            .collect();
        SeatIndex {
            seat,
            nbhd,
            rows: Vec::new(),
            row_of: HashMap::new(),
            lits: HashMap::new(),
        }
    }

    pub fn seat(&self) -> &'s Seat {
        self.seat
    }

    pub fn resolve(&mut self, lit: &str) -> Result<Element> {
        if let Some(&e) = self.lits.get(lit) {
            return Ok(e);
        }
        let e = self.seat.semiring().parse_element(lit)?;
        self.lits.insert(lit.to_string(), e);
        Ok(e)
    }

    /// Makes `lit` denote `e` in later compilations.
    pub fn bind(&mut self, lit: &str, e: Element) {
        self.lits.insert(lit.to_string(), e);
    }

    /// Row index for `ℰ_a`, built on first use.
    pub fn row(&mut self, a: Element) -> usize {
        if let Some(&r) = self.row_of.get(&a) {
            return r;
        }
        let minimal_rows = (0..self.seat.len())
            .map(|x| minimal(self.seat.evidence(a, x)))
            .collect();
        self.rows.push(Row {
            minimal: minimal_rows,
        });
        self.row_of.insert(a, self.rows.len() - 1);
        self.rows.len() - 1
    }

    /// Compiles an arbitrary formula; `props` fixes the valuation slot order.
    pub fn compile(&mut self, f: &Formula, props: &[&str]) -> Result<Core> {
        self.compile_core(&f.expand(), props)
    }

    fn compile_core(&mut self, f: &Formula, props: &[&str]) -> Result<Core> {
        let mut c = |g: &Formula| self.compile_core(g, props).map(Box::new);
        Ok(match f {
            Formula::Prop(p) => Core::Prop(
                props
                    .iter()
                    .position(|q| *q == &**p)
                    .ok_or_else(|| Error::evaluation(format!("unknown proposition {p:?}")))?,
            ),
            Formula::Top => Core::Top,
            Formula::Bot => Core::Bot,
            Formula::Not(a) => Core::Not(c(a)?),
            Formula::And(a, b) => {
                let ca = c(a)?;
                Core::And(ca, c(b)?)
            }
            Formula::Box(a) => Core::Box(c(a)?),
            Formula::All(a) => Core::All(c(a)?),
            Formula::F(l, a) => {
                let inner = c(a)?;
                let e = self.resolve(l)?;
                Core::F(self.row(e), inner)
            }
            _ => return Err(Error::Internal("formula not expanded".into())),
        })
    }

    pub fn eval(&self, c: &Core, val: &[StateSet]) -> StateSet {
        let n = self.seat.len();
        match c {
            Core::Prop(i) => val[*i],
            Core::Top => StateSet::full(n),
            Core::Bot => StateSet::EMPTY,
            Core::Not(a) => self.eval(a, val).complement(n),
            Core::And(a, b) => self.eval(a, val).intersect(self.eval(b, val)),
            Core::Box(a) => self.interior(self.eval(a, val)),
            Core::F(r, a) => self.forward(*r, self.eval(a, val)),
            Core::All(a) => {
                if self.eval(a, val) == StateSet::full(n) {
                    StateSet::full(n)
                } else {
                    StateSet::EMPTY
                }
            }
        }
    }

    pub fn interior(&self, p: StateSet) -> StateSet {
        (0..self.seat.len())
            .filter(|&x| self.nbhd[x].is_subset(p))
            .collect()
    }

    /// `For_a(P)` for a prepared row.
    pub fn forward(&self, row: usize, p: StateSet) -> StateSet {
        let r = &self.rows[row];
        (0..self.seat.len())
            .filter(|&x| r.minimal[x].iter().any(|u| u.is_subset(p)))
            .collect()
    }
}

/// `⟦φ⟧` in a model.
pub fn evaluate(m: &Model, f: &Formula) -> Result<StateSet> {
    Evaluator::new(m).extent(f)
}

/// Truth of `φ` at a named state.
pub fn holds_at(m: &Model, f: &Formula, state: &str) -> Result<bool> {
    let x = m.topology().require_state(state)?;
    Ok(evaluate(m, f)?.contains(x))
}

/// Evaluates formulas against one model, caching extents by expanded
/// formula. Not shared between threads; each worker builds its own.
pub struct Evaluator<'m> {
    index: SeatIndex<'m>,
    props: Vec<&'m str>,
    val: Vec<StateSet>,
    cache: HashMap<Formula, StateSet>,
}

impl<'m> Evaluator<'m> {
    pub fn new(m: &'m Model) -> Self {
        Evaluator {
            index: SeatIndex::new(&m.seat),
            props: m.valuation.keys().map(String::as_str).collect(),
            val: m.valuation.values().copied().collect(),
            cache: HashMap::new(),
        }
    }

    pub fn extent(&mut self, f: &Formula) -> Result<StateSet> {
        let core = f.expand();
        if let Some(&s) = self.cache.get(&core) {
            return Ok(s);
        }
        let compiled = self.index.compile_core(&core, &self.props)?;
        let s = self.index.eval(&compiled, &self.val);
        self.cache.insert(core, s);
        Ok(s)
    }
}

/// `For_a(P)`: states with some `a`-evidence inside `P`.
pub fn for_op(seat: &Seat, a: Element, p: StateSet) -> StateSet {
    (0..seat.len())
        .filter(|&x| seat.evidence(a, x).iter().any(|u| u.is_subset(p)))
        .collect()
}

/// `Int_a(P)`: states with some factive `a`-evidence inside `P`.
pub fn int_op(seat: &Seat, a: Element, p: StateSet) -> StateSet {
    (0..seat.len())
        .filter(|&x| {
            seat.evidence(a, x)
                .iter()
                .any(|u| u.contains(x) && u.is_subset(p))
        })
        .collect()
}

/// Whether `S` meets every nonempty member of `ℰ_a(x)`.
pub fn a_dense(seat: &Seat, a: Element, x: usize, s: StateSet) -> bool {
    seat.evidence(a, x)
        .iter()
        .all(|u| u.is_empty() || u.meets(s))
}

/// `Bel^a_b(P)`: some `a`-evidence inside `P` that is `b`-dense.
pub fn bel(seat: &Seat, a: Element, b: Element, p: StateSet) -> StateSet {
    (0..seat.len())
        .filter(|&x| {
            seat.evidence(a, x)
                .iter()
                .any(|&u| u.is_subset(p) && a_dense(seat, b, x, u))
        })
        .collect()
}

/// `Kn^a_b(P)`: as [`bel`], with the evidence also true at `x`.
pub fn kn(seat: &Seat, a: Element, b: Element, p: StateSet) -> StateSet {
    (0..seat.len())
        .filter(|&x| {
            seat.evidence(a, x)
                .iter()
                .any(|&u| u.contains(x) && u.is_subset(p) && a_dense(seat, b, x, u))
        })
        .collect()
}
