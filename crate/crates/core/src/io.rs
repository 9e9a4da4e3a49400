//! JSON model and relation files.
//!
//! A model file holds a semiring descriptor, state names, either `opens`
//! (checked for closure) or `subbasis` (generated), annotation entries and
//! a valuation. Annotation entries name an open and optionally a state;
//! entries without a state apply at every state. Each gives `generators`
//! or an explicit `ideal`: member names for finite semirings, an interval
//! such as `"(0,inf]"` for threshold ones. The seat is the least one
//! containing every entry.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bisim::Relation;
use crate::error::{Error, Result};
use crate::seat::{Model, RawEntry, Seat, Violation};
use crate::semiring::{ElemName, Ideal, Semiring, SemiringSpec};
use crate::topology::{FiniteTopology, Limits, StateSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub semiring: SemiringSpec,
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subbasis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub annotation: Vec<AnnotationEntry>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnotationEntry {
    pub open: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<ElemName>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealText>,
}

/// An explicit ideal: member names, or an interval for threshold backends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealText {
    Members(Vec<ElemName>),
    Interval(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    #[serde(default)]
    pub global: bool,
    pub pairs: Vec<(String, String)>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Structural(format!("invalid JSON: {e}"))
}

impl ModelFile {
    pub fn build(&self, limits: &Limits) -> Result<Model> {
        let (topology, s, raw) = self.parts(limits)?;
        let seat = Seat::close(topology, s, &raw)?;
        let mut valuation = BTreeMap::new();
        for (p, v) in &self.valuation {
            if !crate::formula::is_prop_name(p) {
                return Err(Error::structural(format!(
                    "{p:?} is not a proposition name"
                )));
            }
            valuation.insert(p.clone(), seat.topology().set_from_names(v)?);
        }
        Model::new(seat, valuation)
    }

    /// Seat conditions failed by the annotation as written, before closure.
    pub fn violations(&self, limits: &Limits) -> Result<Vec<Violation>> {
        let (topology, s, raw) = self.parts(limits)?;
        Seat::raw_violations(topology, s, &raw)
    }

    fn parts(&self, limits: &Limits) -> Result<(FiniteTopology, Semiring, Vec<RawEntry>)> {
        let s = Semiring::from_spec(self.semiring.clone())?;
        let index = |name: &str| {
            self.states
                .iter()
                .position(|t| t == name)
                .ok_or_else(|| Error::structural(format!("unknown state {name:?}")))
        };
        let set =
            |names: &[String]| -> Result<StateSet> { names.iter().map(|n| index(n)).collect() };
        let sets = |v: &[Vec<String>]| v.iter().map(|x| set(x)).collect::<Result<Vec<_>>>();
        let topology = match (&self.opens, &self.subbasis) {
            (Some(_), Some(_)) => {
                return Err(Error::structural("give either opens or subbasis, not both"))
            }
            (Some(o), None) => FiniteTopology::from_opens(self.states.clone(), &sets(o)?, limits)?,
            (None, Some(b)) => FiniteTopology::generate(self.states.clone(), &sets(b)?, limits)?,
            (None, None) => FiniteTopology::generate(self.states.clone(), &[], limits)?,
        };
        let mut raw = Vec::new();
        for e in &self.annotation {
            let open = set(&e.open)?;
            let state = e.state.as_deref().map(index).transpose()?;
            let entry = match (&e.generators, &e.ideal) {
                (Some(g), None) => {
                    let gens = g
                        .iter()
                        .map(|x| s.parse_element(&x.0))
                        .collect::<Result<_>>()?;
                    RawEntry::generators(open, state, gens)
                }
                (None, Some(IdealText::Members(m))) => {
                    let mut mask = 0u64;
                    for x in m {
                        match s.parse_element(&x.0)? {
                            crate::semiring::Element::Idx(i) => mask |= 1 << i,
                            _ => {
                                return Err(Error::structural(
                                    "member lists need a finite semiring; use an interval",
                                ))
                            }
                        }
                    }
                    let i = Ideal::Set(mask);
                    if !s.ideal_is_closed(&i) {
                        return Err(Error::structural(format!(
                            "{} is not an ideal",
                            s.format_ideal(&i)
                        )));
                    }
                    RawEntry::ideal(open, state, i)
                }
                (None, Some(IdealText::Interval(t))) => {
                    RawEntry::ideal(open, state, s.parse_threshold_ideal(t)?)
                }
                _ => {
                    return Err(Error::structural(
                        "annotation entries need exactly one of generators or ideal",
                    ))
                }
            };
            raw.push(entry);
        }
        Ok((topology, s, raw))
    }

    /// The file describing `m` exactly: every open, one entry per open
    /// (or per open and state when the annotation varies), explicit ideals.
    pub fn from_model(m: &Model) -> ModelFile {
        let t = m.topology();
        let s = m.semiring();
        let text = |i: &Ideal| match s.ideal_members(i) {
            Some(v) => IdealText::Members(v.into_iter().map(|e| ElemName(s.name(e))).collect()),
            None => IdealText::Interval(s.format_ideal(i)),
        };
        let mut annotation = Vec::new();
        for (u, &o) in t.opens().iter().enumerate().filter(|_| !m.is_empty()) {
            let first = m.seat.ideal_at(u, 0);
            let uniform = (0..m.len()).all(|x| m.seat.ideal_at(u, x) == first);
            if uniform {
                annotation.push(AnnotationEntry {
                    open: t.names_of(o),
                    state: None,
                    generators: None,
                    ideal: Some(text(first)),
                });
            } else {
                for x in 0..m.len() {
                    annotation.push(AnnotationEntry {
                        open: t.names_of(o),
                        state: Some(t.states()[x].clone()),
                        generators: None,
                        ideal: Some(text(m.seat.ideal_at(u, x))),
                    });
                }
            }
        }
        ModelFile {
            semiring: s.spec().clone(),
            states: t.states().to_vec(),
            opens: Some(t.opens().iter().map(|&o| t.names_of(o)).collect()),
            subbasis: None,
            annotation,
            valuation: m
                .valuation
                .iter()
                .map(|(p, &v)| (p.clone(), t.names_of(v)))
                .collect(),
        }
    }
}

pub fn model_from_json(text: &str, limits: &Limits) -> Result<Model> {
    let f: ModelFile = serde_json::from_str(text).map_err(json_error)?;
    f.build(limits)
}

pub fn model_to_json(m: &Model) -> String {
    serde_json::to_string_pretty(&ModelFile::from_model(m)).expect("serialisable model")
}

pub fn read_model(path: &Path, limits: &Limits) -> Result<Model> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Structural(format!("cannot read {}: {e}", path.display())))?;
    model_from_json(&text, limits)
}

pub fn relation_from_json(text: &str, m1: &Model, m2: &Model) -> Result<Relation> {
    let f: RelationFile = serde_json::from_str(text).map_err(json_error)?;
    Relation::from_names(m1, m2, &f.pairs, f.global)
}

pub fn relation_to_json(z: &Relation, m1: &Model, m2: &Model) -> String {
    let f = RelationFile {
        global: z.global,
        pairs: z.names(m1, m2),
    };
    serde_json::to_string_pretty(&f).expect("serialisable relation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn fixtures_round_trip() {
        for (name, m) in gallery::fixtures() {
            let text = model_to_json(&m);
            let back = model_from_json(&text, &Limits::default()).unwrap();
            assert_eq!(back.topology().opens(), m.topology().opens(), "{name}");
            assert_eq!(back.valuation, m.valuation, "{name}");
            assert_eq!(model_to_json(&back), text, "{name}");
        }
        let r = gallery::rbac(&gallery::RbacParams::example()).unwrap();
        let back = model_from_json(&model_to_json(&r), &Limits::default()).unwrap();
        assert_eq!(model_to_json(&back), model_to_json(&r));
    }

    #[test]
    fn generators_and_uniform_shorthand() {
        let text = r#"{
            "semiring": {"kind": "tropical-nat"},
            "states": ["x", "y"],
            "subbasis": [["x"]],
            "annotation": [{"open": ["x"], "generators": [3]},
                           {"open": ["x", "y"], "state": "y", "generators": ["1"]}],
            "valuation": {"p": ["x"]}
        }"#;
        let m = model_from_json(text, &Limits::default()).unwrap();
        let s = m.semiring();
        assert!(m
            .seat
            .ideal(StateSet(0b01), 1)
            .unwrap()
            .contains(s.parse_element("3").unwrap()));
        assert!(m
            .seat
            .ideal(StateSet(0b11), 1)
            .unwrap()
            .contains(s.parse_element("1").unwrap()));
        assert!(!m
            .seat
            .ideal(StateSet(0b11), 0)
            .unwrap()
            .contains(s.parse_element("1").unwrap()));
    }

    #[test]
    fn malformed_files_are_structural() {
        let lim = Limits::default();
        assert!(matches!(
            model_from_json("{", &lim),
            Err(Error::Structural(_))
        ));
        let bad_open = r#"{"semiring":{"kind":"min-plus-rat"},"states":["x","y"],
            "annotation":[{"open":["x"],"generators":["1"]}]}"#;
        assert!(matches!(
            model_from_json(bad_open, &lim),
            Err(Error::Structural(_))
        ));
        let not_closed = r#"{"semiring":{"kind":"min-plus-rat"},"states":["x","y","z"],
            "opens":[[],["x"],["y"],["x","y","z"]]}"#;
        assert!(matches!(
            model_from_json(not_closed, &lim),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn literal_annotations_can_be_invalid() {
        let lim = Limits::default();
        let text = r#"{"semiring":{"kind":"min-plus-nat"},"states":["x","y"],
            "subbasis":[["x"]],
            "annotation":[{"open":["x"],"generators":["3"]}]}"#;
        let f: ModelFile = serde_json::from_str(text).unwrap();
        let v = f.violations(&lim).unwrap();
        // monotonicity into X and the zero at X are both missing
        assert!(v.iter().any(|v| v.condition == 2));
        assert!(v.iter().any(|v| v.condition == 5));
        assert!(f.build(&lim).unwrap().seat.validate().is_empty());
        let fixed = ModelFile::from_model(&f.build(&lim).unwrap());
        assert!(fixed.violations(&lim).unwrap().is_empty());
    }

    #[test]
    fn relation_round_trip() {
        let (a, b) = (gallery::a13_m1(), gallery::a13_m2());
        let z = gallery::z13();
        let text = relation_to_json(&z, &a, &b);
        assert_eq!(relation_from_json(&text, &a, &b).unwrap(), z);
    }
}
