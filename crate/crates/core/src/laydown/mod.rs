//! Laydown post-processing: backtracking, tail cut, the descriptors
//! sigma1/sigma2/A, and the stochastic web surrogate.
//!
//! Axis convention: machine direction (MD) is `x`, cross machine direction
//! (CD) is `y`; the belt plane is `z = 0`.

pub mod io;
mod stats;
mod web;

pub use stats::{backtrack, characterize, cut_tail, estimate_a, estimate_sigmas};
pub use web::{generate_virtual_web, WebPoint};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LaydownError {
    #[error("invalid {field}: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },
    #[error("tail cut removed every deposition event")]
    EmptyAfterCut,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("zero variance in the {axis} coordinate; stochasticity is undefined")]
    ZeroVariance { axis: &'static str },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed record file {path}: {message}")]
    Format { path: String, message: String },
}

/// One node's first belt contact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepositionEvent {
    /// Material arc-length coordinate of the node [m].
    pub s: f64,
    /// Deposition time [s].
    pub time: f64,
    /// Landing position in the simulation frame [m].
    pub position: Vector3<f64>,
}

/// Ordered deposition events of one simulated fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaydownSample {
    /// Events with strictly increasing arc length.
    pub events: Vec<DepositionEvent>,
    /// Belt speed used for backtracking [m/s].
    pub belt_speed: f64,
}

impl LaydownSample {
    pub fn new(mut events: Vec<DepositionEvent>, belt_speed: f64) -> Self {
        events.sort_by(|a, b| a.s.total_cmp(&b.s));
        Self { events, belt_speed }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Check the ordering and on-belt invariants.
    pub fn validate(&self, contact_tolerance: f64) -> Result<(), LaydownError> {
        for pair in self.events.windows(2) {
            if pair[1].s <= pair[0].s {
                return Err(LaydownError::Validation {
                    field: "events",
                    message: format!(
                        "arc lengths not strictly increasing at s={}",
                        pair[1].s
                    ),
                });
            }
        }
        for e in &self.events {
            if e.position.z.abs() > contact_tolerance {
                return Err(LaydownError::Validation {
                    field: "events",
                    message: format!("event at s={} is off the belt plane", e.s),
                });
            }
        }
        Ok(())
    }
}

/// A deposition event mapped into the nozzle frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BacktrackedPoint {
    pub s: f64,
    pub md: f64,
    pub cd: f64,
}

/// Policy for discarding the spin-up transient at the start of the laydown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CutPolicy {
    /// Drop the leading fraction of the deposited arc length.
    ArcLengthFraction(f64),
    /// Drop events deposited before the burn-in time [s].
    BurnInTime(f64),
}

impl Default for CutPolicy {
    fn default() -> Self {
        CutPolicy::ArcLengthFraction(0.1)
    }
}

/// The three laydown descriptors of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaydownStats {
    /// Throwing-range standard deviation in MD [m].
    pub sigma1: f64,
    /// Throwing-range standard deviation in CD [m].
    pub sigma2: f64,
    /// Stochasticity parameter: 0 is a deterministic deposition, large
    /// values approach uncorrelated noise. Units 1/m (inverse correlation
    /// length along the fiber).
    pub a_param: f64,
    /// Points entering the estimates after the tail cut.
    pub n_points: usize,
    /// Points removed by the tail cut.
    pub tail_cut: usize,
}
