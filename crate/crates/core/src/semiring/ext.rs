use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;

use crate::error::{Error, Result};

pub type Rat = Rational64;

/// A non-negative rational extended with `∞`.
///
/// Variant order gives `Fin(_) < Inf`, which is the numeric order the
/// threshold backends rely on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ext {
    Fin(Rat),
    Inf,
}

impl Ext {
    pub fn int(n: i64) -> Ext {
        Ext::Fin(Rat::from_integer(n))
    }

    pub fn zero() -> Ext {
        Ext::int(0)
    }

    pub fn is_integral(&self) -> bool {
        match self {
            Ext::Fin(r) => r.is_integer(),
            Ext::Inf => true,
        }
    }

    /// Addition where `∞` absorbs.
    pub fn plus(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }

    /// Next integer above a finite integral value; used to close open
    /// thresholds over the naturals.
    pub(crate) fn succ_int(self) -> Ext {
        match self {
            Ext::Fin(r) => Ext::Fin(r.floor() + Rat::from_integer(1)),
            Ext::Inf => Ext::Inf,
        }
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Inf => write!(f, "inf"),
            Ext::Fin(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Ext::Fin(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Ext {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ext> {
        let t = s.trim();
        if matches!(t, "inf" | "∞" | "+inf" | "infinity") {
            return Ok(Ext::Inf);
        }
        let bad = || Error::evaluation(format!("not a non-negative number: {s:?}"));
        let r = if let Some((p, q)) = t.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Rat::new(p, q)
        } else {
            Rat::from_integer(t.parse::<i64>().map_err(|_| bad())?)
        };
        if r < Rat::from_integer(0) {
            return Err(bad());
        }
        Ok(Ext::Fin(r))
    }
}
