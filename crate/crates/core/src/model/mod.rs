//! Location profiles, facility distributions and L_p costs.

mod cost;
mod distribution;
mod pnorm;
mod profile;

pub use cost::{agent_cost, expected_agent_cost, expected_social_cost, social_cost, Cost};
pub use distribution::FacilityDistribution;
pub use pnorm::PNorm;
pub use profile::LocationProfile;

pub(crate) use cost::{lp_cost_of_points, sum_powers_scaled};
