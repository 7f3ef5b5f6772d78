//! Strategyproof single-facility location on the real line under L_p
//! social cost.
//!
//! The crate evaluates deterministic and randomized mechanisms exactly (as
//! finite outcome distributions), solves for optimal locations, searches for
//! profitable misreports, measures approximation ratios, and rebuilds the
//! lower-bound constructions for deterministic, mixture and two-agent
//! mechanisms as checkable numerical certificates.
//!
//! ```
//! use facloc::{ratio, LocationProfile, MechanismSpec, PNorm};
//!
//! let x: LocationProfile = "0,1".parse().unwrap();
//! let r = ratio(&MechanismSpec::Lrm, &x, PNorm::TWO).unwrap();
//! assert!((r.ratio - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
//! ```

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod format;
pub mod mechanisms;
pub mod model;
pub mod optimizer;
pub mod verification;

pub use error::{Error, Result};
pub use mechanisms::{run, MechanismSpec, Mixture};
pub use model::{
    agent_cost, expected_agent_cost, expected_social_cost, social_cost, Cost, FacilityDistribution,
    LocationProfile, PNorm,
};
pub use optimizer::{optimal_cost, optimal_location, OptMethod, OptResult};
pub use verification::{
    best_deviation, ratio, refute_deterministic, sp_scan, worst_ratio_search, AdversarialVerdict,
    DeviationReport, MixtureLowerBound, RatioReport, RatioSearchConfig, SearchConfig,
};
