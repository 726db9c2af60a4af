//! Grid-candidate baseline: the radius is a fixed fraction of the distance
//! from the estimate to the furthest of the localizer's top-k grid points.

use crate::error::{Error, Result};
use crate::location::Location2D;

pub const DEFAULT_GP_FACTOR: f64 = 0.5;

/// A localizer's estimate together with the top-k grid points behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    estimate: Location2D,
    candidates: Vec<Location2D>,
}

impl CandidateSet {
    pub fn new(estimate: Location2D, candidates: Vec<Location2D>) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::Empty("candidate set"));
        }
        Ok(CandidateSet {
            estimate,
            candidates,
        })
    }

    pub fn estimate(&self) -> Location2D {
        self.estimate
    }

    pub fn candidates(&self) -> &[Location2D] {
        &self.candidates
    }

    pub fn k(&self) -> usize {
        self.candidates.len()
    }
}

pub fn gp_tailored_radius(cands: &CandidateSet, factor: f64) -> Result<f64> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::Domain {
            value: factor,
            domain: "(0, inf)",
        });
    }
    let furthest = cands
        .candidates
        .iter()
        .map(|c| c.distance(cands.estimate))
        .fold(0.0, f64::max);
    Ok(factor * furthest)
}
