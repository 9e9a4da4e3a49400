//! Seat classes, axiom schemes and the characterization cross-checks.

mod random;
mod schemes;

pub use random::{
    all_uniform_seats, random_element, random_model, random_seat, ClassConstraints,
    RandomSeatParams,
};
pub use schemes::{
    characterization_crosscheck, check_scheme, check_suite, scheme, schemes, suite, CheckMode,
    Counterexample, CrosscheckReport, Scheme, SchemeClass, SchemeKind, SchemeOptions, SchemeReport,
    Status,
};

use crate::seat::Seat;
use crate::semiring::Element;
use crate::topology::StateSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassProperty {
    Strong,
    ZeroBounded,
    OneBounded,
    Uniform,
    CostSeat,
}

impl ClassProperty {
    pub const ALL: [ClassProperty; 5] = [
        ClassProperty::Strong,
        ClassProperty::ZeroBounded,
        ClassProperty::OneBounded,
        ClassProperty::Uniform,
        ClassProperty::CostSeat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassProperty::Strong => "strong",
            ClassProperty::ZeroBounded => "zero_bounded",
            ClassProperty::OneBounded => "one_bounded",
            ClassProperty::Uniform => "uniform",
            ClassProperty::CostSeat => "cost_seat",
        }
    }
}

/// A counterexample to a class property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub opens: Vec<StateSet>,
    pub states: Vec<usize>,
    pub elements: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Flag {
    Holds,
    Fails(Witness),
    Unknown(String),
}

impl Flag {
    pub fn holds(&self) -> bool {
        matches!(self, Flag::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Flag::Fails(_))
    }

    pub fn as_option(&self) -> Option<bool> {
        match self {
            Flag::Holds => Some(true),
            Flag::Fails(_) => Some(false),
            Flag::Unknown(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeatClassReport {
    pub strong: Flag,
    pub zero_bounded: Flag,
    pub one_bounded: Flag,
    pub uniform: Flag,
    pub cost_seat: Flag,
}

impl SeatClassReport {
    pub fn get(&self, p: ClassProperty) -> &Flag {
        match p {
            ClassProperty::Strong => &self.strong,
            ClassProperty::ZeroBounded => &self.zero_bounded,
            ClassProperty::OneBounded => &self.one_bounded,
            ClassProperty::Uniform => &self.uniform,
            ClassProperty::CostSeat => &self.cost_seat,
        }
    }

    pub fn bounded(&self) -> Option<bool> {
        Some(self.zero_bounded.as_option()? && self.one_bounded.as_option()?)
    }
}

pub fn classify(seat: &Seat) -> SeatClassReport {
    SeatClassReport {
        strong: strong(seat),
        zero_bounded: zero_bounded(seat),
        one_bounded: one_bounded(seat),
        uniform: uniform(seat),
        cost_seat: cost_seat(seat),
    }
}

fn pairs(seat: &Seat) -> impl Iterator<Item = (usize, StateSet, usize)> + '_ {
    let n = seat.len();
    seat.topology()
        .opens()
        .iter()
        .enumerate()
        .flat_map(move |(u, &o)| (0..n).map(move |x| (u, o, x)))
}

fn strong(seat: &Seat) -> Flag {
    let s = seat.semiring();
    for (u, o, x) in pairs(seat) {
        if let Some((a, b)) = s.strong_witness(seat.ideal_at(u, x)) {
            return Flag::Fails(Witness {
                opens: vec![o],
                states: vec![x],
                elements: vec![a, b],
            });
        }
    }
    Flag::Holds
}

fn zero_bounded(seat: &Seat) -> Flag {
    let zero = seat.semiring().zero();
    for x in 0..seat.len() {
        if !seat.ideal_at(0, x).contains(zero) {
            return Flag::Fails(Witness {
                opens: vec![StateSet::EMPTY],
                states: vec![x],
                elements: vec![zero],
            });
        }
    }
    Flag::Holds
}

fn one_bounded(seat: &Seat) -> Flag {
    let one = seat.semiring().one();
    let top = seat.topology().opens().len() - 1;
    for x in 0..seat.len() {
        if !seat.ideal_at(top, x).contains(one) {
            return Flag::Fails(Witness {
                opens: vec![seat.topology().full()],
                states: vec![x],
                elements: vec![one],
            });
        }
    }
    Flag::Holds
}

fn uniform(seat: &Seat) -> Flag {
    let s = seat.semiring();
    for (u, &o) in seat.topology().opens().iter().enumerate() {
        for y in 1..seat.len() {
            let (i, j) = (seat.ideal_at(u, 0), seat.ideal_at(u, y));
            if let Some(a) = s.ideal_difference_witness(i, j) {
                return Flag::Fails(Witness {
                    opens: vec![o],
                    states: vec![0, y],
                    elements: vec![a],
                });
            }
        }
    }
    Flag::Holds
}

fn cost_seat(seat: &Seat) -> Flag {
    let s = seat.semiring();
    if let Some(all) = s.elements() {
        if let Some(&a) = all.iter().find(|&&a| s.plus(a, a) != a) {
            return Flag::Fails(Witness {
                opens: vec![],
                states: vec![],
                elements: vec![a],
            });
        }
    }
    for (_, o, x) in pairs(seat) {
        match seat.cost(o, x) {
            Ok(j) if !j.attained => {
                return Flag::Fails(Witness {
                    opens: vec![o],
                    states: vec![x],
                    elements: vec![j.value],
                })
            }
            Ok(_) => {}
            Err(e) => return Flag::Unknown(e.to_string()),
        }
    }
    Flag::Holds
}

/// Re-checks a failure witness against the seat.
pub fn verify_witness(seat: &Seat, p: ClassProperty, w: &Witness) -> bool {
    let s = seat.semiring();
    let ideal = |i: usize| seat.ideal(w.opens[i], w.states[0]).ok();
    match p {
        ClassProperty::Strong => {
            let (Some(i), [a, b]) = (ideal(0), w.elements.as_slice()) else {
                return false;
            };
            i.contains(s.plus(*a, *b)) && !(i.contains(*a) && i.contains(*b))
        }
        ClassProperty::ZeroBounded => {
            ideal(0).is_some_and(|i| w.opens[0].is_empty() && !i.contains(s.zero()))
        }
        ClassProperty::OneBounded => {
            ideal(0).is_some_and(|i| w.opens[0] == seat.topology().full() && !i.contains(s.one()))
        }
        ClassProperty::Uniform => {
            let (Ok(i), Ok(j)) = (
                seat.ideal(w.opens[0], w.states[0]),
                seat.ideal(w.opens[0], w.states[1]),
            ) else {
                return false;
            };
            i.contains(w.elements[0]) != j.contains(w.elements[0])
        }
        ClassProperty::CostSeat => {
            if w.opens.is_empty() {
                let a = w.elements[0];
                return s.plus(a, a) != a;
            }
            seat.cost(w.opens[0], w.states[0])
                .is_ok_and(|j| !j.attained && j.value == w.elements[0])
        }
    }
}
