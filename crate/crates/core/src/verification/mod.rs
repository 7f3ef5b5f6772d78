//! Strategyproofness checks, approximation ratios and the numerical
//! certificates for the lower-bound constructions.

mod adversary;
mod certificate;
mod deviation;
mod families;
mod ratio;
mod two_agent;

pub use adversary::{deterministic_oracle, refute_deterministic, AdversarialVerdict};
pub use certificate::{CertificateTolerances, MixtureLowerBound};
pub use deviation::{best_deviation, sp_scan, DeviationReport, SearchConfig};
pub use families::{
    half_half, mixture_adversarial_profiles, random_profile, structured_profiles, two_point,
};
pub use ratio::{ratio, ratio_of_distribution, worst_ratio_search, RatioReport, RatioSearchConfig};
pub use two_agent::{collapse_to_midpoint, symmetric_sp_margin, three_point_frontier, FrontierRow};
