//! Sliding-window confidence radius estimation.
//!
//! The last `w` location fixes of a device are kept in a [`LocationWindow`].
//! Their distances to the window's center of mass are treated as draws of a
//! normally distributed distance error, and the radius at confidence `alpha`
//! is the `alpha` quantile of that fitted distribution:
//!
//! ```text
//! r = mu_e + sigma_e * sqrt(2) * erf_inv(2 alpha - 1)
//! ```
//!
//! where `mu_e` is the mean distance and `sigma_e` the sample standard
//! deviation (divisor `n - 1`).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::location::Location2D;
use crate::special_math::{std_normal_quantile, Probability};

pub const DEFAULT_WINDOW: usize = 8;
pub const MIN_WINDOW: usize = 2;

/// Ring buffer of the most recent location fixes, oldest first.
#[derive(Debug, Clone)]
pub struct LocationWindow {
    capacity: usize,
    entries: VecDeque<Location2D>,
}

impl LocationWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity < MIN_WINDOW {
            return Err(Error::Config(format!(
                "window capacity must be at least {MIN_WINDOW}, got {capacity}"
            )));
        }
        Ok(LocationWindow {
            capacity,
            entries: VecDeque::with_capacity(capacity),
        })
    }

    /// Appends `loc`, evicting the oldest fix when the window is full.
    pub fn push(&mut self, loc: Location2D) {
        debug_assert!(loc.is_finite());
        if self.entries.len() == self.capacity {
            self.entries.pop_front();
        }
        self.entries.push_back(loc);
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether the window holds a full `capacity` fixes.
    pub fn is_primed(&self) -> bool {
        self.entries.len() == self.capacity
    }

    pub fn clear(&mut self) {
        self.entries.clear();
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Location2D> {
        self.entries.iter()
    }

    pub fn to_vec(&self) -> Vec<Location2D> {
        self.entries.iter().copied().collect()
    }

    /// Confidence circle for the current contents. Needs at least two fixes;
    /// until the window is full the estimate uses whatever is available and
    /// is flagged as not primed.
    pub fn estimate(&self, alpha: Probability) -> Result<ConfidenceEstimate> {
        if self.entries.len() < MIN_WINDOW {
            return Err(Error::InsufficientSamples {
                required: MIN_WINDOW,
                got: self.entries.len(),
            });
        }
        let mut estimate = estimate(&self.to_vec(), alpha)?;
        estimate.primed = self.is_primed();
        Ok(estimate)
    }
}

/// Fitted parameters of the distance-error distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    pub mu_e: f64,
    pub sigma_e: f64,
    pub sample_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceEstimate {
    pub center: Location2D,
    pub radius: f64,
    pub alpha: Probability,
    pub model: ErrorModel,
    /// False while the source window was still filling up.
    pub primed: bool,
}

pub fn center_of_mass(locations: &[Location2D]) -> Result<Location2D> {
    if locations.is_empty() {
        return Err(Error::Empty("center_of_mass"));
    }
    // Incremental mean: identical inputs reproduce themselves exactly.
    let mut mean = locations[0];
    for (i, l) in locations.iter().enumerate().skip(1) {
        let k = (i + 1) as f64;
        mean.x += (l.x - mean.x) / k;
        mean.y += (l.y - mean.y) / k;
    }
    Ok(mean)
}

pub fn distance_errors(locations: &[Location2D], center: Location2D) -> Result<Vec<f64>> {
    if locations.is_empty() {
        return Err(Error::Empty("distance_errors"));
    }
    Ok(locations.iter().map(|l| l.distance(center)).collect())
}

pub fn fit_error_model(distances: &[f64]) -> Result<ErrorModel> {
    if distances.len() < MIN_WINDOW {
        return Err(Error::InsufficientSamples {
            required: MIN_WINDOW,
            got: distances.len(),
        });
    }
    let n = distances.len() as f64;
    let mu_e = distances.iter().sum::<f64>() / n;
    let sum_sq: f64 = distances.iter().map(|d| (d - mu_e) * (d - mu_e)).sum();
    let sigma_e = (sum_sq / (n - 1.0)).sqrt();
    Ok(ErrorModel {
        mu_e,
        sigma_e,
        sample_count: distances.len(),
    })
}

/// Radius at confidence `alpha`, clamped at zero for small `alpha`.
pub fn confidence_radius(model: &ErrorModel, alpha: Probability) -> Result<f64> {
    let z = std_normal_quantile(alpha)?;
    Ok((model.mu_e + model.sigma_e * z).max(0.0))
}

/// Runs the full estimator over a window of fixes.
pub fn estimate(locations: &[Location2D], alpha: Probability) -> Result<ConfidenceEstimate> {
    if locations.len() < MIN_WINDOW {
        return Err(Error::InsufficientSamples {
            required: MIN_WINDOW,
            got: locations.len(),
        });
    }
    let center = center_of_mass(locations)?;
    let distances = distance_errors(locations, center)?;
    let model = fit_error_model(&distances)?;
    let radius = confidence_radius(&model, alpha)?;
    Ok(ConfidenceEstimate {
        center,
        radius,
        alpha,
        model,
        primed: true,
    })
}
