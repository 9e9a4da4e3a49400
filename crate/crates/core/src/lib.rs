//! Semiring-annotated topological spaces and their resource-aware
//! epistemic logics, at finite scale.

pub mod bisim;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod formula;
pub mod gallery;
pub mod io;
pub mod seat;
pub mod semantics;
pub mod semiring;
pub mod topology;

pub use bisim::{check_bisim, disjoint_union, largest_bisim, modal_equiv_test, Relation};
pub use classify::{classify, SeatClassReport};
pub use corpus::Corpus;
pub use error::{Error, Result};
pub use formula::{parse, Formula};
pub use seat::{Model, RawEntry, RawIdeal, Seat};
pub use semantics::{evaluate, holds_at};
pub use semiring::{Element, Ext, Ideal, Semiring};
pub use topology::{FiniteTopology, Limits, StateSet};
