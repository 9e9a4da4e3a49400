//! Resource algebras `⟨K, ⊕, ⊙, 𝟘, 𝟙⟩`.
//!
//! Two backends exist. Finite semirings carry explicit operation tables and
//! at most [`MAX_FINITE`] elements; their ideals are bitmasks. The threshold
//! backends (`tropical-nat`, `min-plus-nat`, `min-plus-rat`) have `⊕ = min`
//! over a totally ordered carrier, so every ideal is an up-set `{a : a ⪰ t}`
//! and is stored as a single bound.

mod ext;
mod ideal;
pub mod library;
mod spec;

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use ext::{Ext, Rat};
pub use ideal::{Bound, Ideal, Join};
pub use spec::{ElemName, SemiringSpec};

use crate::error::{Error, Result};

/// Largest supported finite carrier (element sets are `u64` bitmasks).
pub const MAX_FINITE: usize = 64;

/// An element of some semiring: an index into a finite carrier, or an
/// extended number for the threshold backends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Idx(u8),
    Num(Ext),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThresholdKind {
    /// `⊙ = max` over `ℕ ∪ {∞}`.
    TropicalNat,
    /// `⊙ = +` over `ℕ ∪ {∞}`.
    MinPlusNat,
    /// `⊙ = +` over `ℚ≥0 ∪ {∞}`.
    MinPlusRat,
}

impl ThresholdKind {
    fn integral(self) -> bool {
        !matches!(self, ThresholdKind::MinPlusRat)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Table {
    names: Vec<String>,
    plus: Vec<Vec<u8>>,
    times: Vec<Vec<u8>>,
    zero: u8,
    one: u8,
    lax_zero: bool,
    /// `mult_reach[a]` = every `a⊙b` and `b⊙a`, as a bitmask.
    mult_reach: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Backend {
    Table(Table),
    Threshold(ThresholdKind),
}

/// A semiring together with the descriptor it was loaded from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Semiring {
    spec: SemiringSpec,
    backend: Backend,
    lookup: HashMap<String, u8>,
}

/// The algebraic laws checked by [`Semiring::verify_laws`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    PlusAssociative,
    PlusCommutative,
    PlusIdentity,
    TimesAssociative,
    TimesLeftIdentity,
    TimesRightIdentity,
    LeftDistributive,
    RightDistributive,
    LeftAnnihilator,
    RightAnnihilator,
}

impl Law {
    /// Laws that mention `𝟘` and are skipped under lax zero.
    fn involves_zero(self) -> bool {
        matches!(
            self,
            Law::PlusIdentity | Law::LeftAnnihilator | Law::RightAnnihilator
        )
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::PlusAssociative => "plus-associative",
            Law::PlusCommutative => "plus-commutative",
            Law::PlusIdentity => "plus-identity",
            Law::TimesAssociative => "times-associative",
            Law::TimesLeftIdentity => "times-left-identity",
            Law::TimesRightIdentity => "times-right-identity",
            Law::LeftDistributive => "left-distributive",
            Law::RightDistributive => "right-distributive",
            Law::LeftAnnihilator => "left-annihilator",
            Law::RightAnnihilator => "right-annihilator",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: Law,
    pub witness: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    /// First violation found for each failing law.
    pub violations: Vec<LawViolation>,
    /// Number of element triples examined.
    pub checked: usize,
    /// True when every triple of a finite carrier was examined.
    pub exhaustive: bool,
    pub skipped_zero_laws: bool,
}

impl LawReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Semiring {
    pub fn from_spec(spec: SemiringSpec) -> Result<Semiring> {
        let backend = match &spec {
            SemiringSpec::TropicalNat => Backend::Threshold(ThresholdKind::TropicalNat),
            SemiringSpec::MinPlusNat => Backend::Threshold(ThresholdKind::MinPlusNat),
            SemiringSpec::MinPlusRat => Backend::Threshold(ThresholdKind::MinPlusRat),
            SemiringSpec::Finite {
                elements,
                plus,
                times,
                zero,
                one,
                lax_zero,
            } => Backend::Table(Table::from_names(
                elements, plus, times, zero, one, *lax_zero,
            )?),
            SemiringSpec::PowersetLattice { roles } => {
                Backend::Table(library::powerset_table(roles, false)?)
            }
            SemiringSpec::PowersetUnion { agents } => {
                Backend::Table(library::powerset_table(agents, true)?)
            }
        };
        let lookup = match &backend {
            Backend::Table(t) => t
                .names
                .iter()
                .enumerate()
                .flat_map(|(i, n)| {
                    let mut keys = vec![(n.clone(), i as u8)];
                    if let Some(norm) = normalize_brace(n) {
                        keys.push((norm, i as u8));
                    }
                    keys
                })
                .collect(),
            Backend::Threshold(_) => HashMap::new(),
        };
        Ok(Semiring {
            spec,
            backend,
            lookup,
        })
    }

    pub fn tropical_nat() -> Semiring {
        Semiring::from_spec(SemiringSpec::TropicalNat).expect("built-in backend")
    }

    pub fn min_plus_nat() -> Semiring {
        Semiring::from_spec(SemiringSpec::MinPlusNat).expect("built-in backend")
    }

    pub fn min_plus_rat() -> Semiring {
        Semiring::from_spec(SemiringSpec::MinPlusRat).expect("built-in backend")
    }

    /// Builds a finite semiring from element names and operation closures
    /// over element indices.
    pub fn from_fn(
        names: &[String],
        plus: impl Fn(usize, usize) -> usize,
        times: impl Fn(usize, usize) -> usize,
        zero: usize,
        one: usize,
        lax_zero: bool,
    ) -> Result<Semiring> {
        let n = names.len();
        let table = |op: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<ElemName>> {
            (0..n)
                .map(|a| (0..n).map(|b| ElemName(names[op(a, b)].clone())).collect())
                .collect()
        };
        Semiring::from_spec(SemiringSpec::Finite {
            elements: names.iter().cloned().map(ElemName).collect(),
            plus: table(&plus),
            times: table(&times),
            zero: ElemName(names[zero].clone()),
            one: ElemName(names[one].clone()),
            lax_zero,
        })
    }

    pub fn spec(&self) -> &SemiringSpec {
        &self.spec
    }

    pub fn threshold_kind(&self) -> Option<ThresholdKind> {
        match self.backend {
            Backend::Threshold(k) => Some(k),
            Backend::Table(_) => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.backend, Backend::Table(_))
    }

    /// Carrier size for finite semirings.
    pub fn size(&self) -> Option<usize> {
        match &self.backend {
            Backend::Table(t) => Some(t.names.len()),
            Backend::Threshold(_) => None,
        }
    }

    /// All elements of a finite carrier, in table order.
    pub fn elements(&self) -> Option<Vec<Element>> {
        self.size()
            .map(|n| (0..n).map(|i| Element::Idx(i as u8)).collect())
    }

    pub fn lax_zero(&self) -> bool {
        match &self.backend {
            Backend::Table(t) => t.lax_zero,
            Backend::Threshold(_) => false,
        }
    }

    pub fn zero(&self) -> Element {
        match &self.backend {
            Backend::Table(t) => Element::Idx(t.zero),
            Backend::Threshold(_) => Element::Num(Ext::Inf),
        }
    }

    pub fn one(&self) -> Element {
        match &self.backend {
            Backend::Table(t) => Element::Idx(t.one),
            Backend::Threshold(_) => Element::Num(Ext::zero()),
        }
    }

    pub fn plus(&self, a: Element, b: Element) -> Element {
        match (&self.backend, a, b) {
            (Backend::Table(t), Element::Idx(x), Element::Idx(y)) => {
                Element::Idx(t.plus[x as usize][y as usize])
            }
            (Backend::Threshold(_), Element::Num(x), Element::Num(y)) => Element::Num(x.min(y)),
            _ => panic!("element {a:?} or {b:?} does not belong to this semiring"),
        }
    }

    pub fn times(&self, a: Element, b: Element) -> Element {
        match (&self.backend, a, b) {
            (Backend::Table(t), Element::Idx(x), Element::Idx(y)) => {
                Element::Idx(t.times[x as usize][y as usize])
            }
            (Backend::Threshold(k), Element::Num(x), Element::Num(y)) => match k {
                ThresholdKind::TropicalNat => Element::Num(x.max(y)),
                ThresholdKind::MinPlusNat | ThresholdKind::MinPlusRat => Element::Num(x.plus(y)),
            },
            _ => panic!("element {a:?} or {b:?} does not belong to this semiring"),
        }
    }

    pub fn is_idempotent(&self) -> bool {
        match &self.backend {
            Backend::Table(t) => (0..t.names.len()).all(|a| t.plus[a][a] as usize == a),
            Backend::Threshold(_) => true,
        }
    }

    pub fn contains(&self, e: Element) -> bool {
        match (&self.backend, e) {
            (Backend::Table(t), Element::Idx(i)) => (i as usize) < t.names.len(),
            (Backend::Threshold(k), Element::Num(x)) => !k.integral() || x.is_integral(),
            _ => false,
        }
    }

    /// Canonical literal for an element; [`Semiring::parse_element`] reads it back.
    pub fn name(&self, e: Element) -> String {
        match (&self.backend, e) {
            (Backend::Table(t), Element::Idx(i)) => t.names[i as usize].clone(),
            (_, Element::Num(x)) => x.to_string(),
            (_, Element::Idx(i)) => format!("#{i}"),
        }
    }

    /// Resolves an element literal. `zero`/`𝟘` and `one`/`𝟙` name the
    /// distinguished constants of any semiring.
    pub fn parse_element(&self, lit: &str) -> Result<Element> {
        let t = lit.trim();
        match t {
            "zero" | "𝟘" => return Ok(self.zero()),
            "one" | "𝟙" => return Ok(self.one()),
            _ => {}
        }
        match &self.backend {
            Backend::Table(_) => {
                if let Some(&i) = self.lookup.get(t) {
                    return Ok(Element::Idx(i));
                }
                if let Some(i) = normalize_brace(t).and_then(|n| self.lookup.get(&n)) {
                    return Ok(Element::Idx(*i));
                }
                Err(Error::evaluation(format!("unknown semiring element {t:?}")))
            }
            Backend::Threshold(k) => {
                let x: Ext = t.parse()?;
                if k.integral() && !x.is_integral() {
                    return Err(Error::evaluation(format!(
                        "{t:?} is not a natural number or inf"
                    )));
                }
                Ok(Element::Num(x))
            }
        }
    }

    /// Checks the semiring laws: exhaustively over a finite carrier, or on
    /// `samples` random triples (seeded) for threshold backends.
    pub fn verify_laws(&self, samples: usize, seed: u64) -> LawReport {
        let lax = self.lax_zero();
        let mut found: Vec<LawViolation> = Vec::new();
        let mut note = |law: Law, witness: Vec<Element>| {
            if lax && law.involves_zero() {
                return;
            }
            if !found.iter().any(|v| v.law == law) {
                found.push(LawViolation { law, witness });
            }
        };
        let (zero, one) = (self.zero(), self.one());
        let mut check = |a: Element, b: Element, c: Element| {
            let (p, m) = (|x, y| self.plus(x, y), |x, y| self.times(x, y));
            if p(p(a, b), c) != p(a, p(b, c)) {
                note(Law::PlusAssociative, vec![a, b, c]);
            }
            if p(a, b) != p(b, a) {
                note(Law::PlusCommutative, vec![a, b]);
            }
            if p(a, zero) != a || p(zero, a) != a {
                note(Law::PlusIdentity, vec![a]);
            }
            if m(m(a, b), c) != m(a, m(b, c)) {
                note(Law::TimesAssociative, vec![a, b, c]);
            }
            if m(one, a) != a {
                note(Law::TimesLeftIdentity, vec![a]);
            }
            if m(a, one) != a {
                note(Law::TimesRightIdentity, vec![a]);
            }
            if m(a, p(b, c)) != p(m(a, b), m(a, c)) {
                note(Law::LeftDistributive, vec![a, b, c]);
            }
            if m(p(a, b), c) != p(m(a, c), m(b, c)) {
                note(Law::RightDistributive, vec![a, b, c]);
            }
            if m(zero, a) != zero {
                note(Law::LeftAnnihilator, vec![a]);
            }
            if m(a, zero) != zero {
                note(Law::RightAnnihilator, vec![a]);
            }
        };
        let (checked, exhaustive) = match self.elements() {
            Some(all) => {
                for &a in &all {
                    for &b in &all {
                        for &c in &all {
                            check(a, b, c);
                        }
                    }
                }
                (all.len().pow(3), true)
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..samples {
                    let (a, b, c) = (
                        self.sample(&mut rng),
                        self.sample(&mut rng),
                        self.sample(&mut rng),
                    );
                    check(a, b, c);
                }
                (samples, false)
            }
        };
        LawReport {
            violations: found,
            checked,
            exhaustive,
            skipped_zero_laws: lax,
        }
    }

    /// A random element; threshold backends draw small numbers and `∞`.
    pub fn sample(&self, rng: &mut impl Rng) -> Element {
        match &self.backend {
            Backend::Table(t) => Element::Idx(rng.gen_range(0..t.names.len()) as u8),
            Backend::Threshold(k) => {
                if rng.gen_bool(0.1) {
                    return Element::Num(Ext::Inf);
                }
                let p = rng.gen_range(0..=20i64);
                let q = if k.integral() {
                    1
                } else {
                    rng.gen_range(1..=4i64)
                };
                Element::Num(Ext::Fin(Rat::new(p, q)))
            }
        }
    }

    /// `a ≤_R b` iff `∃c: b = a⊙c`.
    pub fn leq_right(&self, a: Element, b: Element) -> Result<bool> {
        match &self.backend {
            Backend::Table(_) => Ok(self.exists(|c| self.times(a, c) == b)),
            Backend::Threshold(_) => Ok(num(b) >= num(a)),
        }
    }

    /// `a ≤_L b` iff `∃c: b = c⊙a`.
    pub fn leq_left(&self, a: Element, b: Element) -> Result<bool> {
        match &self.backend {
            Backend::Table(_) => Ok(self.exists(|c| self.times(c, a) == b)),
            Backend::Threshold(_) => Ok(num(b) >= num(a)),
        }
    }

    /// Additive preorder: `a ⊑ b` iff `∃c: b = a⊕c`.
    pub fn leq_add(&self, a: Element, b: Element) -> Result<bool> {
        match &self.backend {
            Backend::Table(_) => Ok(self.exists(|c| self.plus(a, c) == b)),
            // b = min(a, c) is solvable exactly when b ≤ a
            Backend::Threshold(_) => Ok(num(b) <= num(a)),
        }
    }

    fn exists(&self, pred: impl Fn(Element) -> bool) -> bool {
        self.elements()
            .expect("finite backend")
            .into_iter()
            .any(pred)
    }

    pub fn empty_ideal(&self) -> Ideal {
        match self.backend {
            Backend::Table(_) => Ideal::Set(0),
            Backend::Threshold(_) => Ideal::Up(None),
        }
    }

    /// The improper ideal `K`.
    pub fn full_ideal(&self) -> Ideal {
        match &self.backend {
            Backend::Table(t) => Ideal::Set(full_mask(t.names.len())),
            Backend::Threshold(_) => Ideal::Up(Some(Bound::closed(Ext::zero()))),
        }
    }

    /// Least ideal containing `generators`.
    pub fn ideal_close(&self, generators: &[Element]) -> Ideal {
        match &self.backend {
            Backend::Table(t) => {
                let mut mask = 0u64;
                for g in generators {
                    if let Element::Idx(i) = g {
                        mask |= 1 << i;
                    }
                }
                Ideal::Set(t.close(mask))
            }
            Backend::Threshold(_) => {
                let least = generators.iter().filter_map(|g| match g {
                    Element::Num(x) => Some(*x),
                    Element::Idx(_) => None,
                });
                Ideal::Up(least.min().map(Bound::closed))
            }
        }
    }

    /// Least ideal containing both arguments.
    pub fn ideal_union(&self, i: &Ideal, j: &Ideal) -> Ideal {
        match (&self.backend, i, j) {
            (Backend::Table(t), Ideal::Set(a), Ideal::Set(b)) => Ideal::Set(t.close(a | b)),
            (Backend::Threshold(_), Ideal::Up(a), Ideal::Up(b)) => Ideal::Up(match (a, b) {
                (None, x) | (x, None) => *x,
                (Some(x), Some(y)) => Some(if x.key() <= y.key() { *x } else { *y }),
            }),
            _ => panic!("ideal backend mismatch"),
        }
    }

    /// Least ideal containing every `a⊙b` with `a ∈ i`, `b ∈ j`.
    pub fn ideal_product(&self, i: &Ideal, j: &Ideal) -> Ideal {
        match (&self.backend, i, j) {
            (Backend::Table(t), Ideal::Set(a), Ideal::Set(b)) => {
                let mut mask = 0u64;
                for x in bits(*a) {
                    for y in bits(*b) {
                        mask |= 1 << t.times[x][y];
                    }
                }
                Ideal::Set(t.close(mask))
            }
            (Backend::Threshold(k), Ideal::Up(a), Ideal::Up(b)) => {
                let (Some(s), Some(u)) = (a, b) else {
                    return Ideal::Up(None);
                };
                let bound = match k {
                    ThresholdKind::TropicalNat => match s.at.cmp(&u.at) {
                        std::cmp::Ordering::Greater => *s,
                        std::cmp::Ordering::Less => *u,
                        std::cmp::Ordering::Equal => Bound {
                            at: s.at,
                            open: s.open || u.open,
                        },
                    },
                    _ => Bound {
                        at: s.at.plus(u.at),
                        open: s.open || u.open,
                    },
                };
                Ideal::Up(self.normalize(Some(bound)))
            }
            _ => panic!("ideal backend mismatch"),
        }
    }

    /// Canonical form of a threshold: open bounds over `ℕ` become closed at
    /// the successor, and `(∞, ∞]` is empty.
    pub(crate) fn normalize(&self, b: Option<Bound>) -> Option<Bound> {
        let b = b?;
        if !b.open {
            return Some(b);
        }
        if b.at == Ext::Inf {
            return None;
        }
        match self.backend {
            Backend::Threshold(k) if k.integral() => Some(Bound::closed(b.at.succ_int())),
            _ => Some(b),
        }
    }

    pub fn ideal_contains(&self, i: &Ideal, e: Element) -> bool {
        i.contains(e)
    }

    /// `⊔I`, defined when `⊕` is idempotent. The empty ideal joins to `𝟘`.
    pub fn ideal_join(&self, i: &Ideal) -> Result<Join> {
        if !self.is_idempotent() {
            return Err(Error::unsupported(
                "join of an ideal requires an idempotent ⊕",
            ));
        }
        let value = match (&self.backend, i) {
            (Backend::Table(_), Ideal::Set(m)) => bits(*m)
                .map(|x| Element::Idx(x as u8))
                .fold(self.zero(), |acc, x| self.plus(acc, x)),
            (Backend::Threshold(_), Ideal::Up(b)) => match b {
                Some(b) => Element::Num(b.at),
                None => self.zero(),
            },
            _ => panic!("ideal backend mismatch"),
        };
        Ok(Join {
            value,
            attained: i.contains(value),
        })
    }

    /// Tests `a⊕b ∈ I ⇒ a, b ∈ I`; returns a violating pair if any.
    pub fn strong_witness(&self, i: &Ideal) -> Option<(Element, Element)> {
        match (&self.backend, i) {
            (Backend::Table(t), Ideal::Set(m)) => {
                let n = t.names.len();
                for a in 0..n {
                    for b in 0..n {
                        let s = t.plus[a][b];
                        if m & (1 << s) != 0 && (m & (1 << a) == 0 || m & (1 << b) == 0) {
                            return Some((Element::Idx(a as u8), Element::Idx(b as u8)));
                        }
                    }
                }
                None
            }
            // up-sets under min are always strong
            (Backend::Threshold(_), Ideal::Up(_)) => None,
            _ => panic!("ideal backend mismatch"),
        }
    }

    pub fn is_strong(&self, i: &Ideal) -> bool {
        self.strong_witness(i).is_none()
    }

    /// Whether a stored ideal really is closed under two-sided `⊙` and `⊕`.
    /// Threshold ideals are closed by construction.
    pub fn ideal_is_closed(&self, i: &Ideal) -> bool {
        match (&self.backend, i) {
            (Backend::Table(t), Ideal::Set(m)) => t.close(*m) == *m,
            _ => true,
        }
    }

    /// First failure of ideal closure: `(1, a, b)` when `a ∈ I` but `a⊙b` or
    /// `b⊙a` is missing, `(3, a, b)` when `a, b ∈ I` but `a⊕b` is missing.
    pub fn ideal_defect(&self, i: &Ideal) -> Option<(u8, Element, Element)> {
        let (Backend::Table(t), Ideal::Set(m)) = (&self.backend, i) else {
            return None;
        };
        let n = t.names.len();
        for a in bits(*m) {
            for b in 0..n {
                if m & (1 << t.times[a][b]) == 0 || m & (1 << t.times[b][a]) == 0 {
                    return Some((1, Element::Idx(a as u8), Element::Idx(b as u8)));
                }
            }
        }
        for a in bits(*m) {
            for b in bits(*m) {
                if m & (1 << t.plus[a][b]) == 0 {
                    return Some((3, Element::Idx(a as u8), Element::Idx(b as u8)));
                }
            }
        }
        None
    }

    /// Every ideal of a finite semiring, in bitmask order.
    pub fn all_ideals(&self) -> Option<Vec<Ideal>> {
        let Backend::Table(t) = &self.backend else {
            return None;
        };
        let n = t.names.len();
        if n > 16 {
            return None;
        }
        Some(
            (0..(1u64 << n))
                .filter(|&m| t.close(m) == m)
                .map(Ideal::Set)
                .collect(),
        )
    }

    /// Members of a finite ideal, in table order.
    pub fn ideal_members(&self, i: &Ideal) -> Option<Vec<Element>> {
        match i {
            Ideal::Set(m) => Some(bits(*m).map(|x| Element::Idx(x as u8)).collect()),
            Ideal::Up(_) => None,
        }
    }

    /// An element lying in exactly one of the two ideals, if they differ.
    pub fn ideal_difference_witness(&self, i: &Ideal, j: &Ideal) -> Option<Element> {
        if i == j {
            return None;
        }
        match (i, j) {
            (Ideal::Set(a), Ideal::Set(b)) => bits(a ^ b).next().map(|x| Element::Idx(x as u8)),
            (Ideal::Up(_), Ideal::Up(_)) => self
                .region_probes(i.breakpoint().into_iter().chain(j.breakpoint()))
                .into_iter()
                .find(|&e| i.contains(e) != j.contains(e)),
            _ => None,
        }
    }

    /// Human-readable rendering: `{a, b}` for finite ideals, `[t,inf]` or
    /// `(t,inf]` for thresholds, `{}` when empty.
    pub fn format_ideal(&self, i: &Ideal) -> String {
        match i {
            Ideal::Set(m) => {
                let names: Vec<String> =
                    bits(*m).map(|x| self.name(Element::Idx(x as u8))).collect();
                format!("{{{}}}", names.join(", "))
            }
            Ideal::Up(None) => "{}".to_string(),
            Ideal::Up(Some(b)) if b.at == Ext::Inf => "{inf}".to_string(),
            Ideal::Up(Some(b)) => {
                format!("{}{},inf]", if b.open { "(" } else { "[" }, b.at)
            }
        }
    }

    /// Parses a threshold interval `[t,inf]`, `(t,inf]`, `{inf}` or `{}`.
    pub fn parse_threshold_ideal(&self, text: &str) -> Result<Ideal> {
        if self.is_finite() {
            return Err(Error::unsupported(
                "interval ideals are only available for threshold backends",
            ));
        }
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::structural(format!("malformed interval ideal {text:?}"));
        match t.as_str() {
            "{}" | "empty" => return Ok(Ideal::Up(None)),
            "{inf}" => return Ok(Ideal::Up(Some(Bound::closed(Ext::Inf)))),
            _ => {}
        }
        let open = match t.chars().next() {
            Some('[') => false,
            Some('(') => true,
            _ => return Err(bad()),
        };
        let body = t[1..]
            .strip_suffix(",inf]")
            .or_else(|| t[1..].strip_suffix(",∞]"))
            .ok_or_else(bad)?;
        let at = match self.parse_element(body)? {
            Element::Num(x) => x,
            Element::Idx(_) => return Err(bad()),
        };
        Ok(Ideal::Up(self.normalize(Some(Bound { at, open }))))
    }

    /// Elements witnessing every membership pattern of up-set ideals whose
    /// bounds lie among `breakpoints`: each breakpoint, one point strictly
    /// between consecutive breakpoints, one above the largest finite one,
    /// plus `0` and `∞`.
    pub fn region_probes(&self, breakpoints: impl IntoIterator<Item = Ext>) -> Vec<Element> {
        let Backend::Threshold(kind) = self.backend else {
            return self.elements().unwrap_or_default();
        };
        let mut pts: Vec<Ext> = breakpoints.into_iter().collect();
        pts.push(Ext::zero());
        pts.push(Ext::Inf);
        pts.sort();
        pts.dedup();
        let mut out = Vec::new();
        for w in pts.windows(2) {
            out.push(w[0]);
            if let (Ext::Fin(lo), hi) = (w[0], w[1]) {
                let mid = match hi {
                    Ext::Fin(h) if kind.integral() => {
                        let next = lo.floor() + Rat::from_integer(1);
                        (next < h).then_some(Ext::Fin(next))
                    }
                    Ext::Fin(h) => Some(Ext::Fin((lo + h) / Rat::from_integer(2))),
                    Ext::Inf => Some(Ext::Fin(lo.floor() + Rat::from_integer(1))),
                };
                out.extend(mid);
            }
        }
        out.push(Ext::Inf);
        out.dedup();
        out.into_iter().map(Element::Num).collect()
    }
}

impl Table {
    fn from_names(
        elements: &[ElemName],
        plus: &[Vec<ElemName>],
        times: &[Vec<ElemName>],
        zero: &ElemName,
        one: &ElemName,
        lax_zero: bool,
    ) -> Result<Table> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::structural(
                "finite semiring needs at least one element",
            ));
        }
        if n > MAX_FINITE {
            return Err(Error::structural(format!(
                "finite semiring has {n} elements; at most {MAX_FINITE} are supported"
            )));
        }
        let names: Vec<String> = elements.iter().map(|e| e.0.clone()).collect();
        let index: HashMap<&str, u8> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i as u8))
            .collect();
        if index.len() != n {
            return Err(Error::structural("duplicate element names in semiring"));
        }
        let find = |e: &ElemName| {
            index
                .get(e.0.as_str())
                .copied()
                .ok_or_else(|| Error::structural(format!("unknown element {:?} in table", e.0)))
        };
        let grid = |rows: &[Vec<ElemName>], op: &str| -> Result<Vec<Vec<u8>>> {
            if rows.len() != n {
                return Err(Error::structural(format!(
                    "{op} table has {} rows, expected {n}",
                    rows.len()
                )));
            }
            rows.iter()
                .enumerate()
                .map(|(r, row)| {
                    if row.len() != n {
                        return Err(Error::structural(format!(
                            "{op} table row {r} has {} cells, expected {n}",
                            row.len()
                        )));
                    }
                    row.iter().map(find).collect()
                })
                .collect()
        };
        let plus = grid(plus, "plus")?;
        let times = grid(times, "times")?;
        let (zero, one) = (find(zero)?, find(one)?);
        let mut t = Table {
            names,
            plus,
            times,
            zero,
            one,
            lax_zero,
            mult_reach: Vec::new(),
        };
        t.mult_reach = (0..n)
            .map(|a| (0..n).fold(0u64, |m, b| m | (1 << t.times[a][b]) | (1 << t.times[b][a])))
            .collect();
        Ok(t)
    }

    fn close(&self, mut mask: u64) -> u64 {
        loop {
            let mut next = mask;
            for a in bits(mask) {
                next |= self.mult_reach[a];
            }
            for a in bits(next) {
                for b in bits(next) {
                    next |= 1 << self.plus[a][b];
                }
            }
            if next == mask {
                return mask;
            }
            mask = next;
        }
    }
}

fn num(e: Element) -> Ext {
    match e {
        Element::Num(x) => x,
        Element::Idx(_) => panic!("finite element passed to a threshold backend"),
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// `{b, a}` → `{a,b}` so brace-set literals match regardless of order.
fn normalize_brace(s: &str) -> Option<String> {
    let inner = s.trim().strip_prefix('{')?.strip_suffix('}')?;
    let mut parts: Vec<&str> = inner
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .collect();
    parts.sort_unstable();
    parts.dedup();
    Some(format!("{{{}}}", parts.join(",")))
}
