//! Confidence radii for location estimates.
//!
//! [`confidence`] turns a sliding window of location fixes into a circle
//! that should contain the true position with a requested probability.
//! [`baselines`] holds the grid-candidate comparison estimator, [`metrics`]
//! scores estimators, [`sim`] is a synthetic BLE testbed, and [`harness`]
//! ties them into reproducible experiments.

pub mod baselines;
pub mod confidence;
pub mod error;
pub mod harness;
pub mod location;
pub mod metrics;
pub mod sim;
pub mod special_math;

pub use baselines::{gp_tailored_radius, CandidateSet};
pub use confidence::{
    center_of_mass, confidence_radius, distance_errors, estimate, fit_error_model,
    ConfidenceEstimate, ErrorModel, LocationWindow,
};
pub use error::{Error, Result};
pub use location::Location2D;
pub use metrics::{aed, sed, summarize, EmpiricalCdf, EvalRecord, SummaryRow};
pub use special_math::{erf, erf_inv, std_normal_quantile, Probability};
