//! Closed-form risks, bounds, reference oracles and Monte Carlo estimators.

pub mod chernoff;
pub mod divergence;
pub mod estimate;
pub mod normal;
pub mod oracle;
pub mod quadrature;

pub use chernoff::{chernoff_reference, ChernoffBound};
pub use divergence::{kl_gauss, pinsker_bound, psi_bound_check, psi_polya, tv_gauss};
pub use estimate::{
    estimate_message_risk, estimate_output_risk, estimate_success, wilson_interval, Estimate, RiskReport,
    TrialRecord,
};
pub use normal::{normal_cdf, normal_quantile, normal_tail};
