//! Exact error probabilities and Monte Carlo verifiers.

pub mod exact;
pub mod montecarlo;
pub mod pinching;
pub mod result;

pub use exact::{
    end_to_end_function_error, exact_mac_sum_error, exact_ptp_error, mac_sum_success_table, EvalMode,
};
pub use montecarlo::{coset_coverage_probability, km_error_monte_carlo, ParityPolicy};
pub use pinching::{pinching_check, PinchingReport, PinchingSetup};
pub use result::{wilson_interval, SimResult};
