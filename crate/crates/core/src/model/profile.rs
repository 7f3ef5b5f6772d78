use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::format::Sig17;

/// Reported (or true) locations of `n >= 2` agents on the real line.
///
/// Keeps the input order, so agent `i` is recoverable, alongside an
/// ascending view used by the order-based mechanisms. Agent and rank
/// indices in the public API are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct LocationProfile {
    raw: Vec<f64>,
    sorted: Vec<f64>,
    // rank (0-based) -> agent (0-based)
    order: Vec<usize>,
}

impl LocationProfile {
    pub fn new(locations: Vec<f64>) -> Result<Self> {
        if locations.len() < 2 {
            return Err(Error::InvalidProfile(format!(
                "need at least 2 agents, got {}",
                locations.len()
            )));
        }
        if let Some(bad) = locations.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidProfile(format!("non-finite location {bad}")));
        }
        let mut order: Vec<usize> = (0..locations.len()).collect();
        order.sort_by(|&a, &b| locations[a].total_cmp(&locations[b]).then(a.cmp(&b)));
        let sorted = order.iter().map(|&i| locations[i]).collect();
        Ok(LocationProfile {
            raw: locations,
            sorted,
            order,
        })
    }

    /// Builds a profile from `(location, multiplicity)` clusters, in order.
    pub fn from_clusters(clusters: &[(f64, usize)]) -> Result<Self> {
        let locations = clusters
            .iter()
            .flat_map(|&(x, m)| std::iter::repeat_n(x, m))
            .collect();
        Self::new(locations)
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Locations in agent order.
    pub fn locations(&self) -> &[f64] {
        &self.raw
    }

    /// Locations in ascending order.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Location of agent `agent` (1-based).
    pub fn location(&self, agent: usize) -> Result<f64> {
        self.check_index(agent)?;
        Ok(self.raw[agent - 1])
    }

    /// Agent (1-based) holding rank `rank` (1-based) in the ascending view.
    pub fn agent_at_rank(&self, rank: usize) -> Result<usize> {
        self.check_index(rank)?;
        Ok(self.order[rank - 1] + 1)
    }

    /// The `j`-th smallest location, 1-based, ties kept by multiplicity.
    pub fn order_statistic(&self, j: usize) -> Result<f64> {
        self.check_index(j)?;
        Ok(self.sorted[j - 1])
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    pub fn span(&self) -> f64 {
        self.max() - self.min()
    }

    /// Copy of the profile with agent `agent` (1-based) moved to `location`.
    pub fn with_report(&self, agent: usize, location: f64) -> Result<Self> {
        self.check_index(agent)?;
        let mut raw = self.raw.clone();
        raw[agent - 1] = location;
        Self::new(raw)
    }

    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(self.raw.iter().map(|x| x + c).collect())
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.raw.iter().map(|x| x * c).collect())
    }

    /// Point reflection `x -> -x`, agent identities kept.
    pub fn reflected(&self) -> Self {
        Self::new(self.raw.iter().map(|x| -x).collect()).expect("negation keeps a valid profile")
    }

    /// Runs of equal sorted locations as `(location, multiplicity)`.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &x in &self.sorted {
            match out.last_mut() {
                Some((loc, m)) if *loc == x => *m += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.len() {
            Err(Error::IndexOutOfRange {
                index,
                n: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl FromStr for LocationProfile {
    type Err = Error;

    /// Comma- or whitespace-separated decimal locations.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad location `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

impl Serialize for LocationProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.raw.len()))?;
        for &x in &self.raw {
            seq.serialize_element(&Sig17(x))?;
        }
        seq.end()
    }
}
