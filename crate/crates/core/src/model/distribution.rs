use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::format::Sig17;

const MASS_TOLERANCE: f64 = 1e-12;

/// Finite distribution over facility locations.
///
/// Atoms are kept sorted by location; atoms at the same location are merged
/// by exact equality and atoms with zero mass are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct FacilityDistribution {
    atoms: Vec<(f64, f64)>,
}

impl FacilityDistribution {
    /// Builds a distribution from `(location, probability)` pairs.
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut atoms: Vec<(f64, f64)> = atoms.into_iter().collect();
        for &(loc, prob) in &atoms {
            if !loc.is_finite() {
                return Err(Error::InvalidDistribution(format!(
                    "non-finite location {loc}"
                )));
            }
            if !prob.is_finite() || prob < 0.0 {
                return Err(Error::InvalidDistribution(format!(
                    "bad probability {prob}"
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (loc, prob) in atoms {
            if prob == 0.0 {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.0 == loc => last.1 += prob,
                _ => merged.push((loc, prob)),
            }
        }
        Ok(FacilityDistribution { atoms: merged })
    }

    /// All mass at `location`.
    pub fn point(location: f64) -> Result<Self> {
        Self::new([(location, 1.0)])
    }

    /// `(location, probability)` pairs in ascending location order.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass at exactly `location`.
    pub fn probability_at(&self, location: f64) -> f64 {
        self.atoms
            .iter()
            .find(|a| a.0 == location)
            .map_or(0.0, |a| a.1)
    }

    /// The single location of a point mass.
    pub fn as_point(&self) -> Option<f64> {
        match self.atoms.as_slice() {
            [(loc, _)] => Some(*loc),
            _ => None,
        }
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|(l, p)| l * p).sum()
    }

    /// Applies `map` to every location and re-merges.
    pub fn map_locations(&self, map: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.atoms.iter().map(|&(l, p)| (map(l), p)))
    }
}

impl Serialize for FacilityDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Atom(f64, f64);
        impl Serialize for Atom {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut st = s.serialize_struct("Atom", 2)?;
                st.serialize_field("location", &Sig17(self.0))?;
                st.serialize_field("probability", &Sig17(self.1))?;
                st.end()
            }
        }
        serializer.collect_seq(self.atoms.iter().map(|&(l, p)| Atom(l, p)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_equal_locations() {
        let d = FacilityDistribution::new([(1.0, 0.25), (0.0, 0.5), (1.0, 0.25)]).unwrap();
        assert_eq!(d.atoms(), &[(0.0, 0.5), (1.0, 0.5)]);
    }

    #[test]
    fn drops_zero_mass() {
        let d = FacilityDistribution::new([(0.0, 0.5), (0.5, 0.0), (1.0, 0.5)]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.probability_at(0.5), 0.0);
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(FacilityDistribution::new([(0.0, 0.5)]).is_err());
        assert!(FacilityDistribution::new([(0.0, 1.5), (1.0, -0.5)]).is_err());
        assert!(FacilityDistribution::new([(f64::NAN, 1.0)]).is_err());
        assert!(FacilityDistribution::new([(0.0, f64::NAN)]).is_err());
        // within the 1e-12 tolerance
        assert!(FacilityDistribution::new([(0.0, 0.5), (1.0, 0.5 + 5e-13)]).is_ok());
    }

    #[test]
    fn point_mass() {
        let d = FacilityDistribution::point(3.0).unwrap();
        assert_eq!(d.as_point(), Some(3.0));
        assert_eq!(d.mean(), 3.0);
    }
}
