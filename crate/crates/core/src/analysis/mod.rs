//! Closed-form quantities and exact combinatorial checkers.

mod bounds;
mod coverage;
mod exponents;

pub use bounds::{error_prob_upper_bound, expected_reads_upper_bound, race_dp};
pub use coverage::{expected_z, expected_z1, s_membership, z_stats, SPartition, ZStats};
pub use exponents::{
    achievable_exponent, converse_valid, coverage_for_exponent, rate_region, rprime_window, strong_converse_factor,
    weak_converse_factor,
};
