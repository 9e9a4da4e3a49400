use super::{Element, Ext};

/// Least element of a threshold ideal, possibly excluded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bound {
    pub at: Ext,
    pub open: bool,
}

impl Bound {
    pub fn closed(at: Ext) -> Bound {
        Bound { at, open: false }
    }

    /// Sort key: a smaller key is a larger ideal.
    pub(crate) fn key(&self) -> (Ext, bool) {
        (self.at, self.open)
    }

    fn admits(&self, x: Ext) -> bool {
        if self.open {
            x > self.at
        } else {
            x >= self.at
        }
    }
}

/// An ideal of a semiring in one of two representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ideal {
    /// Members of a finite carrier, as a bitmask over element indices.
    Set(u64),
    /// `{a : a ⪰ t}` (or `≻` when open) for a threshold backend; `None` is empty.
    Up(Option<Bound>),
}

impl Ideal {
    pub fn contains(&self, e: Element) -> bool {
        match (self, e) {
            (Ideal::Set(m), Element::Idx(i)) => m & (1u64 << i) != 0,
            (Ideal::Up(Some(b)), Element::Num(x)) => b.admits(x),
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Ideal::Set(0) | Ideal::Up(None))
    }

    /// `self ⊆ other`, assuming both come from the same semiring.
    pub fn is_subset(&self, other: &Ideal) -> bool {
        match (self, other) {
            (Ideal::Set(a), Ideal::Set(b)) => a & !b == 0,
            (Ideal::Up(None), _) => true,
            (Ideal::Up(Some(_)), Ideal::Up(None)) => false,
            (Ideal::Up(Some(a)), Ideal::Up(Some(b))) => b.key() <= a.key(),
            _ => false,
        }
    }

    /// The threshold value of an up-set ideal.
    pub fn breakpoint(&self) -> Option<Ext> {
        match self {
            Ideal::Up(Some(b)) => Some(b.at),
            _ => None,
        }
    }
}

/// `⊔I` together with whether it lies in `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Join {
    pub value: Element,
    pub attained: bool,
}
