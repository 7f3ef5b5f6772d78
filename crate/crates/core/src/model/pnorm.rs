use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Finite(f64),
    Infinity,
}

/// Exponent of the L_p aggregation, `p >= 1` or infinity.
///
/// Infinity is its own case; it is never stored as a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PNorm(Kind);

impl PNorm {
    pub const ONE: PNorm = PNorm(Kind::Finite(1.0));
    pub const TWO: PNorm = PNorm(Kind::Finite(2.0));
    pub const INFINITY: PNorm = PNorm(Kind::Infinity);

    /// Finite exponent. Values below 1, NaN and infinities are rejected.
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(PNorm(Kind::Finite(p)))
        } else {
            Err(Error::InvalidNorm(p.to_string()))
        }
    }

    /// `Some(p)` for finite norms, `None` for infinity.
    pub fn exponent(self) -> Option<f64> {
        match self.0 {
            Kind::Finite(p) => Some(p),
            Kind::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self.0, Kind::Infinity)
    }

    /// The exponent as an integer, when it is one.
    pub fn as_integer(self) -> Option<u32> {
        match self.0 {
            Kind::Finite(p) if p.fract() == 0.0 && p <= u32::MAX as f64 => Some(p as u32),
            _ => None,
        }
    }

    /// Worst-case ratio of the median mechanism: `2^(1-1/p)`, or 2 at infinity.
    pub fn median_ratio_bound(self) -> f64 {
        match self.0 {
            Kind::Finite(p) => 2f64.powf(1.0 - 1.0 / p),
            Kind::Infinity => 2.0,
        }
    }

    /// Ratio of LRM on any two-agent profile: `(2^(1-1/p) + 1) / 2`.
    pub fn lrm_ratio(self) -> f64 {
        0.5 * (self.median_ratio_bound() + 1.0)
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Finite(p) => write!(f, "{p}"),
            Kind::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "+inf" => Ok(PNorm::INFINITY),
            _ => {
                let p: f64 = t.parse().map_err(|_| Error::InvalidNorm(t.to_string()))?;
                PNorm::finite(p)
            }
        }
    }
}

impl Serialize for PNorm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
