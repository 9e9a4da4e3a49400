//! Axiom-scheme registry and validity checking on a fixed seat.
//!
//! Templates use the propositions `phi`, `psi` and the literal placeholders
//! `a`, `b`, `a*b`, `b*a`, `a+b`, `one`, `zero`. An instance fixes a literal
//! pair and a valuation of `phi`/`psi`; validity means the instance holds at
//! every state for every valuation. Rules are checked per valuation: when
//! the premise holds everywhere, so must the conclusion.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{classify, Flag};
use crate::error::{Error, Result};
use crate::formula::{parse, Formula};
use crate::seat::Seat;
use crate::semantics::{Core, SeatIndex};
use crate::semiring::{Element, Semiring};
use crate::topology::StateSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeClass {
    S4K,
    Sb,
    Sub,
    SbForall,
    SubForall,
}

impl SchemeClass {
    pub fn tag(self) -> &'static str {
        match self {
            SchemeClass::S4K => "S4K",
            SchemeClass::Sb => "sb",
            SchemeClass::Sub => "sub",
            SchemeClass::SbForall => "sb-forall",
            SchemeClass::SubForall => "sub-forall",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    Axiom(Formula),
    Rule {
        premise: Formula,
        conclusion: Formula,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scheme {
    pub name: &'static str,
    pub class: SchemeClass,
    pub kind: SchemeKind,
}

impl Scheme {
    fn formulas(&self) -> Vec<&Formula> {
        match &self.kind {
            SchemeKind::Axiom(f) => vec![f],
            SchemeKind::Rule {
                premise,
                conclusion,
            } => vec![premise, conclusion],
        }
    }

    fn uses(&self, needle: &str) -> bool {
        self.formulas()
            .iter()
            .any(|f| f.props().contains(needle) || f.literals().contains(needle))
    }

    fn uses_b(&self) -> bool {
        self.formulas().iter().any(|f| {
            f.literals()
                .iter()
                .any(|l| matches!(l.as_str(), "b" | "a*b" | "b*a" | "a+b"))
        })
    }

    fn uses_a(&self) -> bool {
        self.formulas().iter().any(|f| {
            f.literals()
                .iter()
                .any(|l| matches!(l.as_str(), "a" | "a*b" | "b*a" | "a+b"))
        })
    }

    /// The template as text.
    pub fn display(&self) -> String {
        match &self.kind {
            SchemeKind::Axiom(f) => f.to_string(),
            SchemeKind::Rule {
                premise,
                conclusion,
            } => format!("{premise}  /  {conclusion}"),
        }
    }
}

const TABLE: &[(&str, SchemeClass, &str)] = &[
    (
        "box-conj",
        SchemeClass::S4K,
        "box (phi & psi) <-> box phi & box psi",
    ),
    ("box-refl", SchemeClass::S4K, "box phi -> phi"),
    ("box-trans", SchemeClass::S4K, "box phi -> box box phi"),
    ("box-nec", SchemeClass::S4K, "phi / box phi"),
    (
        "f-mult",
        SchemeClass::S4K,
        "F[a] phi -> F[a*b] phi & F[b*a] phi",
    ),
    (
        "f-plus",
        SchemeClass::S4K,
        "F[a] phi & F[b] psi -> F[a+b] (box phi | box psi)",
    ),
    (
        "f-prod",
        SchemeClass::S4K,
        "F[a] phi & F[b] psi -> F[a*b] (phi & psi)",
    ),
    ("f-zero-top", SchemeClass::S4K, "F[zero] true"),
    ("f-box", SchemeClass::S4K, "F[a] phi -> F[a] box phi"),
    (
        "f-mono",
        SchemeClass::S4K,
        "phi -> psi / F[a] phi -> F[a] psi",
    ),
    (
        "f-split",
        SchemeClass::Sb,
        "F[a+b] phi -> F[a] phi & F[b] phi",
    ),
    ("f-one-top", SchemeClass::Sb, "F[one] true"),
    ("f-zero-bot", SchemeClass::Sb, "F[zero] false"),
    (
        "f-one-persist",
        SchemeClass::Sub,
        "F[a] phi -> F[one] F[a] phi",
    ),
    (
        "f-one-persist-neg",
        SchemeClass::Sub,
        "~F[a] phi -> F[one] ~F[a] phi",
    ),
    ("box-persist", SchemeClass::Sub, "F[a] phi -> box F[a] phi"),
    (
        "box-persist-neg",
        SchemeClass::Sub,
        "~F[a] phi -> box ~F[a] phi",
    ),
    ("all-refl", SchemeClass::SbForall, "A phi -> phi"),
    ("all-trans", SchemeClass::SbForall, "A phi -> A A phi"),
    ("all-symm", SchemeClass::SbForall, "phi -> A E phi"),
    (
        "all-conj",
        SchemeClass::SbForall,
        "A phi & A psi -> A (phi & psi)",
    ),
    (
        "all-box",
        SchemeClass::SbForall,
        "A phi -> box phi & F[one] phi",
    ),
    ("all-nec", SchemeClass::SbForall, "phi / A phi"),
    (
        "all-uniform",
        SchemeClass::SubForall,
        "F[a] phi -> A F[a] phi",
    ),
    (
        "all-uniform-neg",
        SchemeClass::SubForall,
        "~F[a] phi -> A ~F[a] phi",
    ),
];

fn build(name: &'static str, class: SchemeClass, text: &str) -> Scheme {
    let kind = if let Some((p, c)) = text.split_once(" / ") {
        SchemeKind::Rule {
            premise: parse(p).expect("scheme template"),
            conclusion: parse(c).expect("scheme template"),
        }
    } else if let Some((l, r)) = text.split_once(" <-> ") {
        SchemeKind::Axiom(Formula::iff(
            parse(l).expect("scheme template"),
            parse(r).expect("scheme template"),
        ))
    } else {
        SchemeKind::Axiom(parse(text).expect("scheme template"))
    };
    Scheme { name, class, kind }
}

/// Every registered scheme, in registry order.
pub fn schemes() -> &'static [Scheme] {
    static REG: OnceLock<Vec<Scheme>> = OnceLock::new();
    REG.get_or_init(|| TABLE.iter().map(|&(n, c, t)| build(n, c, t)).collect())
}

pub fn scheme(name: &str) -> Option<&'static Scheme> {
    schemes().iter().find(|s| s.name == name)
}

/// Schemes of a named logic: `s4k`, `s4sb`, `s4sub`, `s4sb-forall`, `s4sub-forall`.
pub fn suite(name: &str) -> Result<Vec<&'static Scheme>> {
    use SchemeClass::*;
    let classes: &[SchemeClass] = match name {
        "s4k" => &[S4K],
        "s4sb" => &[S4K, Sb],
        "s4sub" => &[S4K, Sb, Sub],
        "s4sb-forall" => &[S4K, Sb, SbForall],
        "s4sub-forall" => &[S4K, Sb, SbForall, SubForall],
        other => {
            return Err(Error::structural(format!(
                "unknown suite {other:?} (expected s4k, s4sb, s4sub, s4sb-forall or s4sub-forall)"
            )))
        }
    };
    Ok(schemes()
        .iter()
        .filter(|s| classes.contains(&s.class))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exhaustive,
    Random { samples: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeOptions {
    pub mode: CheckMode,
    /// Maximum number of instances examined in exhaustive mode.
    pub budget: usize,
    pub seed: u64,
    /// Extra literals probed on threshold backends, besides `𝟘`, `𝟙` and
    /// one element per threshold region of the seat.
    pub lits: Vec<Element>,
    /// Proposition names standing for `phi` and `psi` in counterexamples.
    pub vars: [String; 2],
}

impl Default for SchemeOptions {
    fn default() -> Self {
        SchemeOptions {
            mode: CheckMode::Exhaustive,
            budget: 1 << 22,
            seed: 0,
            lits: Vec::new(),
            vars: ["p".to_string(), "q".to_string()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// Every instance was checked and holds.
    Valid,
    /// No counterexample among the instances tried, which do not cover
    /// everything (random mode, or literals probed from an infinite carrier).
    NotRefuted,
    Counterexample,
    /// The budget ran out before exhaustive coverage.
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Valid => "valid",
            Status::NotRefuted => "not-refuted",
            Status::Counterexample => "counterexample",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// Combines statuses of several schemes checked together.
    pub fn merge(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Counterexample, _) | (_, Counterexample) => Counterexample,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            (NotRefuted, _) | (_, NotRefuted) => NotRefuted,
            _ => Valid,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub a: Option<Element>,
    pub b: Option<Element>,
    pub valuation: Vec<(String, StateSet)>,
    pub state: usize,
    /// The failing instance with `p`, `q` for `phi`, `psi`.
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeReport {
    pub scheme: &'static str,
    pub class: SchemeClass,
    pub instances: usize,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
}

fn literal_pool(seat: &Seat, extra: &[Element]) -> Vec<Element> {
    let s = seat.semiring();
    if s.is_finite() {
        return s.elements().expect("finite");
    }
    let mut pool = vec![s.zero(), s.one()];
    pool.extend(extra.iter().copied());
    pool.extend(seat.probes(extra));
    pool.sort();
    pool.dedup();
    pool
}

struct Compiled {
    a: Option<Element>,
    b: Option<Element>,
    parts: Vec<Core>,
}

fn bind_and_compile(
    index: &mut SeatIndex<'_>,
    s: &Semiring,
    sch: &Scheme,
    a: Element,
    b: Element,
) -> Result<Compiled> {
    let one = s.one();
    let zero = s.zero();
    let bindings = [
        ("a", a),
        ("b", b),
        ("a*b", s.times(a, b)),
        ("b*a", s.times(b, a)),
        ("a+b", s.plus(a, b)),
        ("one", one),
        ("zero", zero),
    ];
    let mut parts = Vec::new();
    for f in sch.formulas() {
        let bound = f.substitute(&|_| None, &|l| {
            bindings
                .iter()
                .find(|(k, _)| *k == l)
                .map(|(_, e)| format!("\u{0}{}", element_key(*e)))
                .unwrap_or_else(|| l.to_string())
        });
        for (_, e) in &bindings {
            index.bind(&format!("\u{0}{}", element_key(*e)), *e);
        }
        parts.push(index.compile(&bound, &["phi", "psi"])?);
    }
    Ok(Compiled {
        a: sch.uses_a().then_some(a),
        b: sch.uses_b().then_some(b),
        parts,
    })
}

fn element_key(e: Element) -> String {
    format!("{e:?}")
}

fn instance_text(s: &Semiring, sch: &Scheme, a: Element, b: Element, vars: &[String; 2]) -> String {
    let name = |l: &str| -> String {
        let e = match l {
            "a" => a,
            "b" => b,
            "a*b" => s.times(a, b),
            "b*a" => s.times(b, a),
            "a+b" => s.plus(a, b),
            "one" => s.one(),
            "zero" => s.zero(),
            other => return other.to_string(),
        };
        s.name(e)
    };
    let props = |p: &str| match p {
        "phi" => Some(Formula::prop(&vars[0])),
        "psi" => Some(Formula::prop(&vars[1])),
        _ => None,
    };
    let inst = |f: &Formula| f.substitute(&props, &name);
    match &sch.kind {
        SchemeKind::Axiom(f) => inst(f).to_string(),
        SchemeKind::Rule {
            premise,
            conclusion,
        } => format!("{}  /  {}", inst(premise), inst(conclusion)),
    }
}

/// First state where the instance fails under `val`, if any.
fn failure(index: &SeatIndex<'_>, c: &Compiled, val: &[StateSet], full: StateSet) -> Option<usize> {
    let miss = match c.parts.as_slice() {
        [axiom] => full.minus(index.eval(axiom, val)),
        [premise, conclusion] => {
            if index.eval(premise, val) != full {
                return None;
            }
            full.minus(index.eval(conclusion, val))
        }
        _ => unreachable!(),
    };
    miss.iter().next()
}

pub fn check_scheme(seat: &Seat, sch: &Scheme, opts: &SchemeOptions) -> Result<SchemeReport> {
    let s = seat.semiring();
    let n = seat.len();
    let full = StateSet::full(n);
    let pool = literal_pool(seat, &opts.lits);
    let (ua, ub) = (sch.uses_a(), sch.uses_b());
    let lit_pairs: Vec<(Element, Element)> = {
        let avals: Vec<Element> = if ua { pool.clone() } else { vec![s.one()] };
        let bvals: Vec<Element> = if ub { pool.clone() } else { vec![s.one()] };
        avals
            .iter()
            .flat_map(|&a| bvals.iter().map(move |&b| (a, b)))
            .collect()
    };
    let vars: Vec<&str> = ["phi", "psi"].into_iter().filter(|v| sch.uses(v)).collect();
    let mut index = SeatIndex::new(seat);
    let mut checked = 0usize;
    let names = |val: &[StateSet]| -> Vec<(String, StateSet)> {
        vars.iter()
            .enumerate()
            .map(|(i, v)| (opts.vars[usize::from(*v != "phi")].clone(), val[i]))
            .collect()
    };
    let report = |status, checked, cx| SchemeReport {
        scheme: sch.name,
        class: sch.class,
        instances: checked,
        status,
        counterexample: cx,
    };
    let make_cx = |c: &Compiled, a, b, val: &[StateSet], x| Counterexample {
        a: c.a,
        b: c.b,
        valuation: names(val),
        state: x,
        instance: instance_text(s, sch, a, b, &opts.vars),
    };
    // valuation slots are always [phi, psi]; unused ones stay empty
    let slot = |val: &[StateSet]| -> [StateSet; 2] {
        let mut out = [StateSet::EMPTY; 2];
        for (i, v) in vars.iter().enumerate() {
            out[if *v == "phi" { 0 } else { 1 }] = val[i];
        }
        out
    };
    match opts.mode {
        CheckMode::Exhaustive => {
            let per_pair = 1usize
                .checked_shl((n * vars.len()) as u32)
                .unwrap_or(usize::MAX);
            let total = per_pair.saturating_mul(lit_pairs.len());
            for &(a, b) in &lit_pairs {
                let c = bind_and_compile(&mut index, s, sch, a, b)?;
                let mut val = vec![StateSet::EMPTY; vars.len()];
                for code in 0..per_pair as u64 {
                    if checked >= opts.budget {
                        return Ok(report(Status::Inconclusive, checked, None));
                    }
                    for (i, v) in val.iter_mut().enumerate() {
                        *v = StateSet((code >> (i * n)) & crate::semiring::full_mask(n));
                    }
                    checked += 1;
                    if let Some(x) = failure(&index, &c, &slot(&val), full) {
                        let cx = make_cx(&c, a, b, &val, x);
                        return Ok(report(Status::Counterexample, checked, Some(cx)));
                    }
                }
            }
            debug_assert_eq!(checked, total);
            let status = if s.is_finite() {
                Status::Valid
            } else {
                Status::NotRefuted
            };
            Ok(report(status, checked, None))
        }
        CheckMode::Random { samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..samples {
                let (a, b) = lit_pairs[rng.gen_range(0..lit_pairs.len())];
                let c = bind_and_compile(&mut index, s, sch, a, b)?;
                let val: Vec<StateSet> = vars
                    .iter()
                    .map(|_| StateSet(rng.gen::<u64>() & crate::semiring::full_mask(n)))
                    .collect();
                checked += 1;
                if let Some(x) = failure(&index, &c, &slot(&val), full) {
                    let cx = make_cx(&c, a, b, &val, x);
                    return Ok(report(Status::Counterexample, checked, Some(cx)));
                }
            }
            Ok(report(Status::NotRefuted, checked, None))
        }
    }
}

/// Checks several schemes in parallel; reports keep the input order.
pub fn check_suite(
    seat: &Seat,
    list: &[&Scheme],
    opts: &SchemeOptions,
) -> Result<Vec<SchemeReport>> {
    list.par_iter()
        .map(|sch| check_scheme(seat, sch, opts))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub strong_bounded: Option<bool>,
    /// Combined status of `f-split`, `f-one-top`, `f-zero-bot`.
    pub sb_schemes: Status,
    pub uniform: Option<bool>,
    /// `all-uniform` and `all-uniform-neg`; absent unless strong and bounded.
    pub uniform_schemes: Option<(Status, Status)>,
    /// `Some(true)` when both characterizations agree, `None` if a check
    /// was inconclusive.
    pub consistent: Option<bool>,
}

fn certified(st: Status) -> Option<bool> {
    match st {
        Status::Valid => Some(true),
        Status::Counterexample => Some(false),
        Status::NotRefuted | Status::Inconclusive => None,
    }
}

/// Compares the class flags with validity of the characterizing schemes:
/// strong and bounded iff `f-split`, `f-one-top`, `f-zero-bot` are valid,
/// and for strong bounded seats, uniform iff `all-uniform` is valid iff
/// `all-uniform-neg` is valid.
pub fn characterization_crosscheck(seat: &Seat, budget: usize) -> Result<CrosscheckReport> {
    let rep = classify(seat);
    let strong_bounded = match (rep.strong.as_option(), rep.bounded()) {
        (Some(a), Some(b)) => Some(a && b),
        _ => None,
    };
    let opts = SchemeOptions {
        budget,
        ..SchemeOptions::default()
    };
    let mut sb = Status::Valid;
    for name in ["f-split", "f-one-top", "f-zero-bot"] {
        let r = check_scheme(seat, scheme(name).expect("registered"), &opts)?;
        sb = sb.merge(r.status);
    }
    let uniform = rep.uniform.as_option();
    let mut consistent = match (strong_bounded, certified(sb)) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    };
    let mut uniform_schemes = None;
    if strong_bounded == Some(true) {
        let s28 = check_scheme(seat, scheme("all-uniform").expect("registered"), &opts)?.status;
        let s29 = check_scheme(seat, scheme("all-uniform-neg").expect("registered"), &opts)?.status;
        uniform_schemes = Some((s28, s29));
        let agree = match (uniform, certified(s28), certified(s29)) {
            (Some(u), Some(a), Some(b)) => Some(u == a && a == b),
            _ => None,
        };
        consistent = match (consistent, agree) {
            (Some(x), Some(y)) => Some(x && y),
            _ => None,
        };
    }
    if matches!(rep.strong, Flag::Unknown(_)) {
        consistent = None;
    }
    Ok(CrosscheckReport {
        strong_bounded,
        sb_schemes: sb,
        uniform,
        uniform_schemes,
        consistent,
    })
}
