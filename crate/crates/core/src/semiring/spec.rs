use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// JSON descriptor of a semiring, as stored in model files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SemiringSpec {
    Finite {
        elements: Vec<ElemName>,
        plus: Vec<Vec<ElemName>>,
        times: Vec<Vec<ElemName>>,
        zero: ElemName,
        one: ElemName,
        #[serde(default)]
        lax_zero: bool,
    },
    /// `⟨ℕ ∪ {∞}, min, max, ∞, 0⟩`
    TropicalNat,
    /// `⟨ℕ ∪ {∞}, min, +, ∞, 0⟩`
    MinPlusNat,
    /// `⟨ℚ≥0 ∪ {∞}, min, +, ∞, 0⟩`
    MinPlusRat,
    /// `⟨𝒫(R), ∪, ∩, ∅, R⟩`
    PowersetLattice { roles: Vec<String> },
    /// `⟨𝒫(A), ∪, ∪, ∅, ∅⟩`, loaded with lax zero.
    PowersetUnion { agents: Vec<String> },
}

/// An element literal inside a descriptor. Accepts JSON strings or integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElemName(pub String);

impl From<&str> for ElemName {
    fn from(s: &str) -> Self {
        ElemName(s.to_string())
    }
}

impl From<String> for ElemName {
    fn from(s: String) -> Self {
        ElemName(s)
    }
}

impl Serialize for ElemName {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for ElemName {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ElemName;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an element literal (string or integer)")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<ElemName, E> {
                Ok(ElemName(v.to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ElemName, E> {
                Ok(ElemName(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ElemName, E> {
                Ok(ElemName(v.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}
