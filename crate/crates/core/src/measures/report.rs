use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::numopt::Rational;

/// How a reported value was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "note", rename_all = "kebab-case")]
pub enum Provenance {
    ExactEnumeration,
    ExactLp,
    SdpCertified,
    /// A computable stand-in for a measure that is only related up to constants.
    Proxy(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExactEnumeration => write!(f, "exact-enumeration"),
            Self::ExactLp => write!(f, "exact-LP"),
            Self::SdpCertified => write!(f, "SDP-certified"),
            Self::Proxy(note) => write!(f, "proxy({note})"),
        }
    }
}

/// A measure value with certified bounds `lower <= value <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub name: String,
    pub value: f64,
    /// Exact value when the computation is exact.
    pub exact: Option<Rational>,
    pub lower: f64,
    pub upper: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
}

impl MeasureReport {
    /// An exact integer value.
    pub fn exact_int(name: &str, value: u64, provenance: Provenance) -> Self {
        Self::exact_rational(name, Rational::from_integer(value.into()), provenance)
    }

    pub fn exact_rational(name: &str, value: Rational, provenance: Provenance) -> Self {
        let v = value.to_f64().unwrap_or(f64::NAN);
        Self {
            name: name.into(),
            value: v,
            exact: Some(value),
            lower: v,
            upper: v,
            tolerance: 0.0,
            provenance,
        }
    }

    /// A floating value certified to lie in `[lower, upper]`; reports the midpoint.
    pub fn bracketed(name: &str, lower: f64, upper: f64, tolerance: f64, provenance: Provenance) -> Self {
        Self {
            name: name.into(),
            value: 0.5 * (lower + upper),
            exact: None,
            lower,
            upper,
            tolerance,
            provenance,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }
}

impl fmt::Display for MeasureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{} = {} [{}]", self.name, r, self.provenance),
            None => write!(
                f,
                "{} = {:.6} in [{:.6}, {:.6}] [{}]",
                self.name, self.value, self.lower, self.upper, self.provenance
            ),
        }
    }
}
