//! Disjoint unions, bisimulations between models, and modal equivalence.

use std::collections::BTreeMap;
use std::fmt;

use crate::corpus::{Corpus, DEFAULT_CLASS_CAP};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::seat::{Model, Seat};
use crate::semiring::{Element, Ext};
use crate::topology::{FiniteTopology, Limits, StateSet, HARD_MAX_STATES};

/// Disjoint union of models over one semiring and one proposition set.
/// States are tagged `left:`/`right:` for two models and `i:` otherwise;
/// component `i` occupies the block of indices after components `0..i`.
pub fn disjoint_union(models: &[&Model]) -> Result<Model> {
    let first = models
        .first()
        .ok_or_else(|| Error::structural("a union needs at least one model"))?;
    for m in models {
        if m.semiring() != first.semiring() {
            return Err(Error::structural(
                "models in a union must share their semiring",
            ));
        }
        if !m.valuation.keys().eq(first.valuation.keys()) {
            return Err(Error::structural(
                "models in a union must share their propositions",
            ));
        }
    }
    let tag = |i: usize| match (models.len(), i) {
        (2, 0) => "left".to_string(),
        (2, _) => "right".to_string(),
        _ => i.to_string(),
    };
    let mut states = Vec::new();
    let mut offsets = Vec::new();
    for (i, m) in models.iter().enumerate() {
        offsets.push(states.len());
        states.extend(
            m.topology()
                .states()
                .iter()
                .map(|s| format!("{}:{s}", tag(i))),
        );
    }
    let limits = Limits {
        max_states: HARD_MAX_STATES,
        ..Limits::default()
    };
    limits.check_states(states.len())?;
    let shift = |s: StateSet, off: usize| StateSet(s.0 << off);

    // product of the component open families
    let mut opens = vec![StateSet::EMPTY];
    for (m, &off) in models.iter().zip(&offsets) {
        let comp = m.topology().opens();
        if opens.len().saturating_mul(comp.len()) > limits.max_opens {
            return Err(Error::Budget {
                message: "union has too many open sets".into(),
                partial: opens.len(),
            });
        }
        opens = opens
            .iter()
            .flat_map(|&u| comp.iter().map(move |&v| u.union(shift(v, off))))
            .collect();
    }
    let topology = FiniteTopology::from_opens(states, &opens, &limits)?;
    let n = topology.len();
    let mut table = Vec::with_capacity(topology.opens().len() * n);
    for &u in topology.opens() {
        for (m, &off) in models.iter().zip(&offsets) {
            let local = StateSet((u.0 >> off) & StateSet::full(m.len()).0);
            let ui = m
                .topology()
                .open_index(local)
                .expect("component of a union open");
            for x in 0..m.len() {
                table.push(*m.seat.ideal_at(ui, x));
            }
        }
    }
    let seat = Seat::from_parts_unchecked(topology, first.semiring().clone(), table);
    let valuation: BTreeMap<String, StateSet> = first
        .valuation
        .keys()
        .map(|p| {
            let v = models
                .iter()
                .zip(&offsets)
                .fold(StateSet::EMPTY, |acc, (m, &off)| {
                    acc.union(shift(m.valuation[p], off))
                });
            (p.clone(), v)
        })
        .collect();
    Model::new(seat, valuation)
}

/// Start index of each component in a union of `models`.
pub fn union_offsets(models: &[&Model]) -> Vec<usize> {
    models
        .iter()
        .scan(0, |acc, m| {
            let o = *acc;
            *acc += m.len();
            Some(o)
        })
        .collect()
}

/// A relation between the states of two models.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Relation {
    pub pairs: Vec<(usize, usize)>,
    pub global: bool,
}

impl Relation {
    pub fn new(mut pairs: Vec<(usize, usize)>, global: bool) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Relation { pairs, global }
    }

    /// Builds a relation from state names, checking both sides.
    pub fn from_names<S: AsRef<str>>(
        m1: &Model,
        m2: &Model,
        pairs: &[(S, S)],
        global: bool,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in pairs {
            out.push((
                m1.topology().require_state(a.as_ref())?,
                m2.topology().require_state(b.as_ref())?,
            ));
        }
        Ok(Relation::new(out, global))
    }

    pub fn names(&self, m1: &Model, m2: &Model) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(a, b)| {
                (
                    m1.topology().states()[a].clone(),
                    m2.topology().states()[b].clone(),
                )
            })
            .collect()
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.binary_search(&pair).is_ok()
    }

    /// Pointwise union; global only if both are.
    pub fn union(&self, other: &Relation) -> Relation {
        let mut pairs = self.pairs.clone();
        pairs.extend(&other.pairs);
        Relation::new(pairs, self.global && other.global)
    }
}

/// The clauses of the bisimulation conditions, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    Atoms,
    Forth,
    Back,
    EvidenceForth,
    EvidenceBack,
    Total,
    Surjective,
}

impl Clause {
    pub fn roman(self) -> &'static str {
        match self {
            Clause::Atoms => "i",
            Clause::Forth => "ii",
            Clause::Back => "iii",
            Clause::EvidenceForth => "iv",
            Clause::EvidenceBack => "v",
            Clause::Total => "vi",
            Clause::Surjective => "vii",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.roman())
    }
}

/// First failing clause with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseViolation {
    pub clause: Clause,
    pub pair: Option<(usize, usize)>,
    /// Left state for (vi), right state for (vii).
    pub state: Option<usize>,
    /// The open that cannot be matched, on the side the clause quantifies.
    pub open: Option<StateSet>,
    pub element: Option<Element>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimReport {
    pub violation: Option<ClauseViolation>,
    /// Resources tried for clauses (iv) and (v).
    pub probes: Vec<Element>,
}

impl BisimReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Resources on which every `ℰ_a` family of both seats is realised.
/// Exact for finite semirings and for threshold annotations, where the
/// families only change at annotation breakpoints.
pub fn shared_probes(m1: &Model, m2: &Model, extra: &[Element]) -> Vec<Element> {
    let s = m1.semiring();
    if s.is_finite() {
        return s.elements().expect("finite");
    }
    let mut pts: Vec<Ext> = m1.seat.breakpoints();
    pts.extend(m2.seat.breakpoints());
    pts.extend(extra.iter().filter_map(|e| match e {
        Element::Num(x) => Some(*x),
        Element::Idx(_) => None,
    }));
    s.region_probes(pts)
}

struct Sides<'a> {
    m1: &'a Model,
    m2: &'a Model,
    probes: Vec<Element>,
    /// `ℰ_a(x)` per probe and state.
    ev1: Vec<Vec<Vec<StateSet>>>,
    ev2: Vec<Vec<Vec<StateSet>>>,
    props: Vec<String>,
}

fn minimal(v: Vec<StateSet>) -> Vec<StateSet> {
    v.iter()
        .copied()
        .filter(|&u| !v.iter().any(|&w| w != u && w.is_subset(u)))
        .collect()
}

impl<'a> Sides<'a> {
    fn new(m1: &'a Model, m2: &'a Model, extra: &[Element]) -> Result<Self> {
        if m1.semiring() != m2.semiring() {
            return Err(Error::structural("bisimulation needs a shared semiring"));
        }
        let probes = shared_probes(m1, m2, extra);
        let table = |m: &Model| {
            probes
                .iter()
                .map(|&a| (0..m.len()).map(|x| m.seat.evidence(a, x)).collect())
                .collect()
        };
        let mut props: Vec<String> = m1.valuation.keys().cloned().collect();
        props.extend(m2.valuation.keys().cloned());
        props.sort();
        props.dedup();
        Ok(Sides {
            m1,
            m2,
            ev1: table(m1),
            ev2: table(m2),
            probes,
            props,
        })
    }

    fn val(m: &Model, p: &str) -> StateSet {
        m.valuation.get(p).copied().unwrap_or(StateSet::EMPTY)
    }

    fn atoms_agree(&self, x1: usize, x2: usize) -> Option<String> {
        self.props
            .iter()
            .find(|p| Self::val(self.m1, p).contains(x1) != Self::val(self.m2, p).contains(x2))
            .cloned()
    }

    /// First violation of clauses (ii)–(v) at a pair, given the image
    /// `img[x1] = Z[{x1}]` and preimage `pre[x2]`.
    fn check_pair(
        &self,
        x1: usize,
        x2: usize,
        img: &[StateSet],
        pre: &[StateSet],
    ) -> Option<ClauseViolation> {
        let image = |u: StateSet| u.iter().fold(StateSet::EMPTY, |acc, y| acc.union(img[y]));
        let preimage = |u: StateSet| u.iter().fold(StateSet::EMPTY, |acc, y| acc.union(pre[y]));
        let (t1, t2) = (self.m1.topology(), self.m2.topology());
        let fail = |clause, open, element, detail: String| {
            Some(ClauseViolation {
                clause,
                pair: Some((x1, x2)),
                state: None,
                open: Some(open),
                element,
                detail,
            })
        };
        for &u1 in t1.opens().iter().filter(|u| u.contains(x1)) {
            if !t2.interior(image(u1)).contains(x2) {
                return fail(
                    Clause::Forth,
                    u1,
                    None,
                    format!(
                        "no open around the right state inside the image of {}",
                        t1.format_set(u1)
                    ),
                );
            }
        }
        for &u2 in t2.opens().iter().filter(|u| u.contains(x2)) {
            if !t1.interior(preimage(u2)).contains(x1) {
                return fail(
                    Clause::Back,
                    u2,
                    None,
                    format!(
                        "no open around the left state inside the preimage of {}",
                        t2.format_set(u2)
                    ),
                );
            }
        }
        let s = self.m1.semiring();
        for (k, &a) in self.probes.iter().enumerate() {
            for &u1 in &minimal(self.ev1[k][x1].clone()) {
                let target = image(u1);
                if !self.ev2[k][x2].iter().any(|u2| u2.is_subset(target)) {
                    return fail(
                        Clause::EvidenceForth,
                        u1,
                        Some(a),
                        format!(
                            "{}-evidence {} has no counterpart on the right",
                            s.name(a),
                            t1.format_set(u1)
                        ),
                    );
                }
            }
            for &u2 in &minimal(self.ev2[k][x2].clone()) {
                let target = preimage(u2);
                if !self.ev1[k][x1].iter().any(|u1| u1.is_subset(target)) {
                    return fail(
                        Clause::EvidenceBack,
                        u2,
                        Some(a),
                        format!(
                            "{}-evidence {} has no counterpart on the left",
                            s.name(a),
                            t2.format_set(u2)
                        ),
                    );
                }
            }
        }
        None
    }

    fn images(&self, pairs: &[(usize, usize)]) -> (Vec<StateSet>, Vec<StateSet>) {
        let mut img = vec![StateSet::EMPTY; self.m1.len()];
        let mut pre = vec![StateSet::EMPTY; self.m2.len()];
        for &(a, b) in pairs {
            img[a].insert(b);
            pre[b].insert(a);
        }
        (img, pre)
    }

    fn totality(&self, img: &[StateSet], pre: &[StateSet]) -> Option<ClauseViolation> {
        let missing = |clause, state: usize, side: &str| ClauseViolation {
            clause,
            pair: None,
            state: Some(state),
            open: None,
            element: None,
            detail: format!("{side} state is unrelated"),
        };
        if let Some(x) = img.iter().position(|s| s.is_empty()) {
            return Some(missing(Clause::Total, x, "left"));
        }
        if let Some(y) = pre.iter().position(|s| s.is_empty()) {
            return Some(missing(Clause::Surjective, y, "right"));
        }
        None
    }
}

/// Checks every clause for every pair, reporting the first failure in
/// pair order, clause order. Totality and surjectivity are checked only for
/// global relations, after all pairs pass.
pub fn check_bisim(m1: &Model, m2: &Model, z: &Relation, extra: &[Element]) -> Result<BisimReport> {
    let sides = Sides::new(m1, m2, extra)?;
    for &(a, b) in &z.pairs {
        if a >= m1.len() || b >= m2.len() {
            return Err(Error::structural("relation mentions states out of range"));
        }
    }
    let (img, pre) = sides.images(&z.pairs);
    let mut violation = None;
    for &(x1, x2) in &z.pairs {
        if let Some(p) = sides.atoms_agree(x1, x2) {
            violation = Some(ClauseViolation {
                clause: Clause::Atoms,
                pair: Some((x1, x2)),
                state: None,
                open: None,
                element: None,
                detail: format!("valuations of {p} differ"),
            });
            break;
        }
        if let Some(v) = sides.check_pair(x1, x2, &img, &pre) {
            violation = Some(v);
            break;
        }
    }
    if violation.is_none() && z.global {
        violation = sides.totality(&img, &pre);
    }
    Ok(BisimReport {
        violation,
        probes: sides.probes,
    })
}

/// The greatest bisimulation, found by deleting violating pairs from the
/// atom-respecting relation until nothing changes. The result is flagged
/// global when `global` was asked for and it is total and surjective;
/// otherwise no global bisimulation exists.
pub fn largest_bisim(m1: &Model, m2: &Model, global: bool, extra: &[Element]) -> Result<Relation> {
    let sides = Sides::new(m1, m2, extra)?;
    let mut pairs: Vec<(usize, usize)> = (0..m1.len())
        .flat_map(|a| (0..m2.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| sides.atoms_agree(a, b).is_none())
        .collect();
    loop {
        let (img, pre) = sides.images(&pairs);
        let before = pairs.len();
        pairs.retain(|&(a, b)| sides.check_pair(a, b, &img, &pre).is_none());
        if pairs.len() == before {
            let total = global && sides.totality(&img, &pre).is_none();
            return Ok(Relation::new(pairs, total));
        }
    }
}

/// A formula separating a related pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub pair: (usize, usize),
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub pairs_checked: usize,
    pub depth: usize,
    pub global_fragment: bool,
    /// False when the corpus hit its size cap before `depth`.
    pub complete: bool,
    pub disagreements: Vec<Disagreement>,
}

/// Compares related states on every formula of modal depth `≤ depth`, with
/// `F` ranging over `lits`; the global modality is included when
/// `global_fragment` is set.
pub fn modal_equiv_test(
    m1: &Model,
    m2: &Model,
    z: &Relation,
    depth: usize,
    lits: &[String],
    global_fragment: bool,
) -> Result<EquivReport> {
    let (m1p, m2p) = aligned(m1, m2);
    let corpus = Corpus::build(
        &[&m1p, &m2p],
        lits,
        depth,
        global_fragment,
        DEFAULT_CLASS_CAP,
    )?;
    let disagreements = z
        .pairs
        .iter()
        .filter_map(|&(a, b)| {
            corpus.distinguish((0, a), (1, b)).map(|f| Disagreement {
                pair: (a, b),
                formula: f.clone(),
            })
        })
        .collect();
    Ok(EquivReport {
        pairs_checked: z.pairs.len(),
        depth: corpus.depth(),
        global_fragment,
        complete: corpus.complete(),
        disagreements,
    })
}

/// Copies of both models over the union of their propositions, missing
/// ones being false everywhere.
fn aligned(m1: &Model, m2: &Model) -> (Model, Model) {
    let fill = |m: &Model, other: &Model| {
        let mut v = m.valuation.clone();
        for p in other.valuation.keys() {
            v.entry(p.clone()).or_insert(StateSet::EMPTY);
        }
        Model {
            seat: m.seat.clone(),
            valuation: v,
        }
    };
    (fill(m1, m2), fill(m2, m1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seat::RawEntry;
    use crate::semiring::library;

    fn point(prop: bool) -> Model {
        let s = library::boolean();
        let t = FiniteTopology::generate(vec!["x".into()], &[], &Limits::default()).unwrap();
        let seat = Seat::close(t, s, &[]).unwrap();
        let v = if prop { StateSet(1) } else { StateSet::EMPTY };
        Model::new(seat, BTreeMap::from([("p".to_string(), v)])).unwrap()
    }

    #[test]
    fn union_of_two_points() {
        let (a, b) = (point(true), point(false));
        let u = disjoint_union(&[&a, &b]).unwrap();
        assert_eq!(
            u.topology().states(),
            &["left:x".to_string(), "right:x".to_string()]
        );
        assert_eq!(u.topology().opens().len(), 4);
        assert!(u.seat.validate().is_empty());
        assert_eq!(u.valuation["p"], StateSet(0b01));
        assert_eq!(union_offsets(&[&a, &b, &a]), vec![0, 1, 2]);
        let three = disjoint_union(&[&a, &b, &a]).unwrap();
        assert_eq!(three.topology().states()[2], "2:x");
    }

    #[test]
    fn identity_is_largest_on_a_point() {
        let a = point(true);
        let z = largest_bisim(&a, &a, true, &[]).unwrap();
        assert_eq!(z.pairs, vec![(0, 0)]);
        assert!(z.global);
        assert!(check_bisim(&a, &a, &z, &[]).unwrap().ok());
    }

    #[test]
    fn disjoint_valuations_give_empty_relation() {
        let z = largest_bisim(&point(true), &point(false), false, &[]).unwrap();
        assert!(z.pairs.is_empty());
    }

    #[test]
    fn empty_global_relation_fails_totality() {
        let a = point(true);
        let r = check_bisim(&a, &a, &Relation::new(vec![], true), &[]).unwrap();
        assert_eq!(r.violation.unwrap().clause, Clause::Total);
    }

    #[test]
    fn evidence_clause_detects_missing_counterpart() {
        let s = library::boolean();
        let t = FiniteTopology::generate(vec!["x".into()], &[], &Limits::default()).unwrap();
        let rich = Seat::close(
            t.clone(),
            s.clone(),
            &[RawEntry::generators(StateSet(1), None, vec![s.one()])],
        )
        .unwrap();
        let poor = Seat::close(t, s, &[]).unwrap();
        let v = BTreeMap::from([("p".to_string(), StateSet(1))]);
        let m1 = Model::new(rich, v.clone()).unwrap();
        let m2 = Model::new(poor, v).unwrap();
        let r = check_bisim(&m1, &m2, &Relation::new(vec![(0, 0)], false), &[]).unwrap();
        assert_eq!(r.violation.unwrap().clause, Clause::EvidenceForth);
        let eq = modal_equiv_test(
            &m1,
            &m2,
            &Relation::new(vec![(0, 0)], false),
            1,
            &["1".into()],
            false,
        )
        .unwrap();
        assert_eq!(eq.disagreements.len(), 1);
    }
}
