use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classify;
use crate::error::{Error, Result};
use crate::seat::{Model, RawEntry, Seat};
use crate::semiring::{Element, Ideal, Semiring};
use crate::topology::{FiniteTopology, Limits, StateSet};

/// Required class membership; `None` leaves a property unconstrained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassConstraints {
    pub strong: Option<bool>,
    pub bounded: Option<bool>,
    pub uniform: Option<bool>,
}

impl ClassConstraints {
    pub fn strong_bounded() -> Self {
        ClassConstraints {
            strong: Some(true),
            bounded: Some(true),
            uniform: None,
        }
    }

    pub fn strong_uniform_bounded() -> Self {
        ClassConstraints {
            uniform: Some(true),
            ..Self::strong_bounded()
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomSeatParams {
    pub states: usize,
    pub semiring: Semiring,
    pub constraints: ClassConstraints,
    pub max_tries: usize,
}

impl RandomSeatParams {
    pub fn new(states: usize, semiring: Semiring, constraints: ClassConstraints) -> Self {
        RandomSeatParams {
            states,
            semiring,
            constraints,
            max_tries: 2000,
        }
    }
}

/// Samples a seat: random subbasis, generated topology, random generator
/// annotations, closure, then rejection until the constraints hold.
/// Deterministic per seed.
pub fn random_seat(params: &RandomSeatParams, seed: u64) -> Result<Seat> {
    let n = params.states;
    let c = params.constraints;
    if n == 0 {
        return Err(Error::Generation("a seat needs at least one state".into()));
    }
    if c.uniform == Some(false) && n == 1 {
        return Err(Error::Generation(
            "a one-state seat is always uniform".into(),
        ));
    }
    let s = &params.semiring;
    let elements = s
        .elements()
        .ok_or_else(|| Error::unsupported("random seats need a finite semiring"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let limits = Limits {
        max_states: n,
        ..Limits::default()
    };
    let full = crate::semiring::full_mask(n);
    for _ in 0..params.max_tries {
        let k = rng.gen_range(0..=n + 1);
        let subbasis: Vec<StateSet> = (0..k).map(|_| StateSet(rng.gen::<u64>() & full)).collect();
        let topology = FiniteTopology::generate(names.clone(), &subbasis, &limits)?;
        let uniform = c.uniform == Some(true) || (c.uniform.is_none() && rng.gen_bool(0.3));
        let density = rng.gen_range(0.15..0.6);
        let mut raw = Vec::new();
        for &u in topology.opens() {
            let targets: Vec<Option<usize>> = if uniform {
                vec![None]
            } else {
                (0..n).map(Some).collect()
            };
            for x in targets {
                if rng.gen_bool(density) {
                    let g = elements[rng.gen_range(0..elements.len())];
                    raw.push(RawEntry::generators(u, x, vec![g]));
                }
            }
        }
        if c.bounded == Some(true) || (c.bounded.is_none() && rng.gen_bool(0.5)) {
            raw.push(RawEntry::generators(StateSet(full), None, vec![s.one()]));
            raw.push(RawEntry::generators(StateSet::EMPTY, None, vec![s.zero()]));
        }
        let seat = Seat::close(topology, s.clone(), &raw)?;
        let rep = classify(&seat);
        let ok = |want: Option<bool>, got: Option<bool>| want.is_none() || want == got;
        if ok(c.strong, rep.strong.as_option())
            && ok(c.bounded, rep.bounded())
            && ok(c.uniform, rep.uniform.as_option())
        {
            return Ok(seat);
        }
    }
    Err(Error::Generation(format!(
        "no seat satisfying the constraints within {} tries",
        params.max_tries
    )))
}

/// A random seat with a uniformly random valuation of `props`.
pub fn random_model(params: &RandomSeatParams, props: &[&str], seed: u64) -> Result<Model> {
    let seat = random_seat(params, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let full = crate::semiring::full_mask(seat.len());
    let valuation: BTreeMap<String, StateSet> = props
        .iter()
        .map(|p| (p.to_string(), StateSet(rng.gen::<u64>() & full)))
        .collect();
    Model::new(seat, valuation)
}

/// Every uniform seat on `topology` over a finite semiring, by assigning
/// one ideal to each open and keeping the valid assignments.
pub fn all_uniform_seats(topology: &FiniteTopology, s: &Semiring) -> Result<Vec<Seat>> {
    let ideals = s
        .all_ideals()
        .ok_or_else(|| Error::unsupported("ideal enumeration needs a finite semiring"))?;
    let opens = topology.opens().len();
    let total = ideals.len().checked_pow(opens as u32).unwrap_or(usize::MAX);
    if total > 1 << 22 {
        return Err(Error::Budget {
            message: "too many uniform annotations to enumerate".into(),
            partial: 0,
        });
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; opens];
    'outer: loop {
        let pick: Vec<Ideal> = choice.iter().map(|&i| ideals[i]).collect();
        // cheap monotonicity pre-filter before the full validator
        let monotone = topology.opens().iter().enumerate().all(|(i, &u)| {
            topology
                .opens()
                .iter()
                .enumerate()
                .all(|(j, &v)| !u.is_subset(v) || pick[i].is_subset(&pick[j]))
        });
        if monotone {
            let table: Vec<Ideal> = pick
                .iter()
                .flat_map(|&i| std::iter::repeat_n(i, topology.len()))
                .collect();
            let seat = Seat::from_parts_unchecked(topology.clone(), s.clone(), table);
            if seat.validate().is_empty() {
                out.push(seat);
            }
        }
        for c in choice.iter_mut() {
            *c += 1;
            if *c < ideals.len() {
                continue 'outer;
            }
            *c = 0;
        }
        break;
    }
    Ok(out)
}

/// Picks a uniformly random element of a finite semiring.
pub fn random_element(s: &Semiring, rng: &mut impl Rng) -> Option<Element> {
    let all = s.elements()?;
    Some(all[rng.gen_range(0..all.len())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::library;

    #[test]
    fn deterministic_per_seed() {
        let p = RandomSeatParams::new(3, library::chain(4), ClassConstraints::default());
        assert_eq!(random_seat(&p, 11).unwrap(), random_seat(&p, 11).unwrap());
    }

    #[test]
    fn constraints_are_met() {
        let p = RandomSeatParams::new(
            3,
            library::powerset_lattice(&["r1", "r2"]),
            ClassConstraints::strong_bounded(),
        );
        for seed in 0..10 {
            let seat = random_seat(&p, seed).unwrap();
            let rep = classify(&seat);
            assert!(rep.strong.holds() && rep.bounded() == Some(true));
        }
        let nu = ClassConstraints {
            uniform: Some(false),
            ..ClassConstraints::default()
        };
        let seat = random_seat(&RandomSeatParams::new(3, library::boolean(), nu), 4).unwrap();
        assert!(classify(&seat).uniform.fails());
    }

    #[test]
    fn single_state_cannot_be_non_uniform() {
        let nu = ClassConstraints {
            uniform: Some(false),
            ..ClassConstraints::default()
        };
        let p = RandomSeatParams::new(1, library::boolean(), nu);
        assert!(matches!(random_seat(&p, 0), Err(Error::Generation(_))));
    }

    #[test]
    fn uniform_enumeration_on_a_point() {
        let t = FiniteTopology::generate(vec!["x".into()], &[], &Limits::default()).unwrap();
        let seats = all_uniform_seats(&t, &library::boolean()).unwrap();
        // ideals of the booleans: {}, {0}, {0,1}; A(X) must contain 0
        // and include A(∅)
        assert_eq!(seats.len(), 5);
    }
}
