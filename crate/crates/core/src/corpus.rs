//! Exhaustive formula corpora up to a modal depth, represented by extent.
//!
//! Two formulas that have the same extent in every model of a family are
//! interchangeable under every operator, so a depth-`d` corpus is built from
//! the extents of depth `d-1` instead of from syntax. Level 0 is generated by
//! the propositions; level `k+1` adds `□c`, `F_a c` (one per literal) and,
//! for global corpora, `A c` for every Boolean combination `c` of level `k`.
//! Every formula of modal depth at most `d` then agrees, on every state of
//! every model, with a Boolean combination of the level-`d` generators.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::seat::Model;
use crate::semantics::SeatIndex;
use crate::topology::StateSet;

/// Extents of one formula across the family, with a formula realising them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub extents: Vec<StateSet>,
    pub witness: Formula,
}

/// Default bound on the number of Boolean combinations expanded per level.
pub const DEFAULT_CLASS_CAP: usize = 1 << 16;

pub struct Corpus<'m> {
    models: Vec<&'m Model>,
    props: Vec<String>,
    gens: Vec<Class>,
    atoms: Vec<Class>,
    depth: usize,
    complete: bool,
}

struct Ops<'m> {
    index: SeatIndex<'m>,
    rows: Vec<usize>,
}

impl<'m> Corpus<'m> {
    /// Builds the corpus of all formulas of modal depth `≤ depth` over the
    /// shared propositions, with `F` ranging over `lits` and `A` included
    /// when `global`. Stops early, with [`Corpus::complete`] false, when a
    /// level has more than `cap` Boolean combinations.
    pub fn build(
        models: &[&'m Model],
        lits: &[String],
        depth: usize,
        global: bool,
        cap: usize,
    ) -> Result<Self> {
        let first = models
            .first()
            .ok_or_else(|| Error::structural("a corpus needs at least one model"))?;
        let props: Vec<String> = first.valuation.keys().cloned().collect();
        for m in models {
            if !m.valuation.keys().eq(props.iter()) {
                return Err(Error::structural(
                    "models in a corpus must share their propositions",
                ));
            }
        }
        let mut ops = Vec::new();
        for m in models {
            let mut index = SeatIndex::new(&m.seat);
            let mut rows = Vec::new();
            for l in lits {
                let e = index.resolve(l)?;
                rows.push(index.row(e));
            }
            ops.push(Ops { index, rows });
        }
        let mut corpus = Corpus {
            models: models.to_vec(),
            props,
            gens: Vec::new(),
            atoms: Vec::new(),
            depth: 0,
            complete: true,
        };
        let mut seen = HashSet::new();
        for p in corpus.props.clone() {
            let extents = corpus.models.iter().map(|m| m.valuation[&p]).collect();
            corpus.push_gen(&mut seen, extents, Formula::prop(&p));
        }
        corpus.refine();
        for _ in 0..depth {
            let Some(classes) = corpus.classes(cap) else {
                corpus.complete = false;
                break;
            };
            for c in classes {
                let images = corpus.modal_images(&ops, &c, lits, global);
                for (extents, f) in images {
                    corpus.push_gen(&mut seen, extents, f);
                }
            }
            corpus.refine();
            corpus.depth += 1;
        }
        Ok(corpus)
    }

    fn push_gen(&mut self, seen: &mut HashSet<Vec<StateSet>>, extents: Vec<StateSet>, f: Formula) {
        if seen.insert(extents.clone()) {
            self.gens.push(Class {
                extents,
                witness: f,
            });
        }
    }

    fn modal_images(
        &self,
        ops: &[Ops<'m>],
        c: &Class,
        lits: &[String],
        global: bool,
    ) -> Vec<(Vec<StateSet>, Formula)> {
        let mut out = Vec::new();
        let boxed = ops
            .iter()
            .zip(&c.extents)
            .map(|(o, &p)| o.index.interior(p))
            .collect();
        out.push((boxed, Formula::boxed(c.witness.clone())));
        for (k, l) in lits.iter().enumerate() {
            let ext = ops
                .iter()
                .zip(&c.extents)
                .map(|(o, &p)| o.index.forward(o.rows[k], p))
                .collect();
            out.push((ext, Formula::f(l, c.witness.clone())));
        }
        if global {
            let ext = self
                .models
                .iter()
                .zip(&c.extents)
                .map(|(m, &p)| {
                    let full = StateSet::full(m.len());
                    if p == full {
                        full
                    } else {
                        StateSet::EMPTY
                    }
                })
                .collect();
            out.push((ext, Formula::all(c.witness.clone())));
        }
        out
    }

    /// Recomputes the atoms of the Boolean algebra generated by `gens`.
    fn refine(&mut self) {
        let mut atoms = vec![Class {
            extents: self
                .models
                .iter()
                .map(|m| StateSet::full(m.len()))
                .collect(),
            witness: Formula::Top,
        }];
        for g in &self.gens {
            let mut next = Vec::with_capacity(atoms.len() * 2);
            for a in atoms {
                let inside: Vec<StateSet> = a
                    .extents
                    .iter()
                    .zip(&g.extents)
                    .map(|(&x, &y)| x.intersect(y))
                    .collect();
                let outside: Vec<StateSet> = a
                    .extents
                    .iter()
                    .zip(&g.extents)
                    .map(|(&x, &y)| x.minus(y))
                    .collect();
                let nonempty = |v: &[StateSet]| v.iter().any(|s| !s.is_empty());
                match (nonempty(&inside), nonempty(&outside)) {
                    (true, true) => {
                        next.push(Class {
                            extents: inside,
                            witness: Formula::and(a.witness.clone(), g.witness.clone()),
                        });
                        next.push(Class {
                            extents: outside,
                            witness: Formula::and(a.witness, Formula::not(g.witness.clone())),
                        });
                    }
                    _ => next.push(a),
                }
            }
            atoms = next;
        }
        self.atoms = atoms;
    }

    pub fn models(&self) -> &[&'m Model] {
        &self.models
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    /// Depth actually reached; equals the requested depth when complete.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    /// The generators of the top level: propositions and modal images.
    pub fn generators(&self) -> &[Class] {
        &self.gens
    }

    /// The atoms of the top level; two points satisfy the same corpus
    /// formulas iff they lie in the same atom.
    pub fn atoms(&self) -> &[Class] {
        &self.atoms
    }

    /// Every distinct extent tuple of the top level, i.e. all unions of
    /// atoms, or `None` if there are more than `cap`.
    pub fn classes(&self, cap: usize) -> Option<Vec<Class>> {
        let k = self.atoms.len();
        if k >= usize::BITS as usize - 1 || (1usize << k) > cap {
            return None;
        }
        let empty: Vec<StateSet> = vec![StateSet::EMPTY; self.models.len()];
        let mut out = Vec::with_capacity(1 << k);
        for mask in 0usize..(1 << k) {
            let mut ext = empty.clone();
            let mut witness: Option<Formula> = None;
            for (i, a) in self.atoms.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (e, &s) in ext.iter_mut().zip(&a.extents) {
                        *e = e.union(s);
                    }
                    witness = Some(match witness {
                        None => a.witness.clone(),
                        Some(w) => Formula::or(w, a.witness.clone()),
                    });
                }
            }
            let witness = match (mask == (1 << k) - 1, witness) {
                (true, _) => Formula::Top,
                (_, Some(w)) => w,
                (_, None) => Formula::Bot,
            };
            out.push(Class {
                extents: ext,
                witness,
            });
        }
        Some(out)
    }

    /// A generator separating state `x` of model `i` from state `y` of
    /// model `j`, if any.
    pub fn distinguish(&self, (i, x): (usize, usize), (j, y): (usize, usize)) -> Option<&Formula> {
        self.gens
            .iter()
            .find(|g| g.extents[i].contains(x) != g.extents[j].contains(y))
            .map(|g| &g.witness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seat::{RawEntry, Seat};
    use crate::semantics::evaluate;
    use crate::semiring::library;
    use crate::topology::{FiniteTopology, Limits};
    use std::collections::BTreeMap;

    fn model() -> Model {
        let s = library::chain(3);
        let t = FiniteTopology::generate(
            vec!["x".into(), "y".into(), "z".into()],
            &[StateSet(0b011), StateSet(0b110)],
            &Limits::default(),
        )
        .unwrap();
        let raw = vec![
            RawEntry::generators(StateSet(0b111), None, vec![s.one()]),
            RawEntry::generators(
                StateSet(0b011),
                Some(0),
                vec![s.parse_element("1").unwrap()],
            ),
        ];
        let seat = Seat::close(t, s, &raw).unwrap();
        let val = BTreeMap::from([
            ("p".to_string(), StateSet(0b001)),
            ("q".to_string(), StateSet(0b100)),
        ]);
        Model::new(seat, val).unwrap()
    }

    #[test]
    fn witnesses_realise_their_extents() {
        let m = model();
        let lits: Vec<String> = ["0", "1", "2"].map(String::from).to_vec();
        let c = Corpus::build(&[&m], &lits, 2, true, DEFAULT_CLASS_CAP).unwrap();
        assert!(c.complete());
        assert_eq!(c.depth(), 2);
        for g in c.generators().iter().chain(c.atoms()) {
            assert_eq!(evaluate(&m, &g.witness).unwrap(), g.extents[0]);
            assert!(g.witness.modal_depth() <= 2);
        }
        for cl in c.classes(DEFAULT_CLASS_CAP).unwrap() {
            assert_eq!(evaluate(&m, &cl.witness).unwrap(), cl.extents[0]);
        }
    }

    #[test]
    fn depth_zero_is_propositional() {
        let m = model();
        let c = Corpus::build(&[&m], &[], 0, false, DEFAULT_CLASS_CAP).unwrap();
        // atoms p, q, neither
        assert_eq!(c.atoms().len(), 3);
        assert_eq!(c.classes(DEFAULT_CLASS_CAP).unwrap().len(), 8);
        assert!(c.distinguish((0, 0), (0, 1)).is_some());
    }

    #[test]
    fn cap_marks_incomplete() {
        let m = model();
        let c = Corpus::build(&[&m], &[], 2, false, 2).unwrap();
        assert!(!c.complete());
        assert_eq!(c.depth(), 0);
    }
}
