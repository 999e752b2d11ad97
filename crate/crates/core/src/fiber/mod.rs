//! Discretized inextensible string-model solver.
//!
//! The fiber is a chain of nodes spaced one arc-length step apart. Each
//! implicit-Euler step solves the momentum balance together with the
//! inextensibility constraints (edge tensions as Lagrange multipliers) and
//! the belt non-penetration constraints (contact multipliers with
//! complementarity) using Newton's method on a banded KKT system.
//!
//! The simulation runs in the belt frame: the belt is the static plane
//! `z = 0` and the nozzle drifts in machine direction with the belt speed,
//! which is the same relative motion as a fixed nozzle over a moving belt.

mod material;
mod simulate;
mod state;
mod stepper;

pub use material::{derive_material, MaterialInput, MaterialParams, KG_PER_M_PER_DTEX};
pub use simulate::{simulate, write_deposition_records, FiberTrajectory, SimulationResult};
pub use state::{init_fiber, spin_in, FiberState, NodeKind};
pub use stepper::{assemble_forces, step, BeltContact, StepDiagnostics, StepError, StepOutcome};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::airflow::{AirProperties, AirflowError, DragCoefficients};

#[derive(Debug, Error)]
pub enum FiberError {
    #[error("invalid {field}: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Airflow(#[from] AirflowError),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("state invariant violated: {0}")]
    InvariantViolated(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Numerical settings of one fiber simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulationConfig {
    /// Time step [s].
    pub dt: f64,
    /// Arc-length step [m].
    pub ds: f64,
    /// Total simulated time [s].
    pub total_time: f64,
    /// Spin-in speed of the filament at the nozzle [m/s].
    pub spin_speed: f64,
    /// Newton convergence tolerance on the position-scaled residual [m].
    pub newton_tol: f64,
    pub max_newton_iterations: usize,
    /// Viscous belt friction coefficient [N*s/m^2].
    pub friction: f64,
    /// Internal stretch-rate damping coefficient [N*s]; numerical
    /// regularization that sums to zero over the fiber.
    pub regularization: f64,
    /// Seed for the turbulence fluctuation streams.
    pub seed: u64,
    /// Node count of the initial short fiber.
    pub initial_nodes: usize,
    /// Gravitational acceleration [m/s^2].
    pub gravity: [f64; 3],
    /// Turbulence intensity (fluctuation std over local mean speed).
    pub turbulence_intensity: f64,
    /// Turbulence correlation time [s].
    pub turbulence_correlation_time: f64,
    pub air: AirProperties,
    pub drag: DragCoefficients,
    /// Maximum tolerated edge strain.
    pub strain_tolerance: f64,
    /// Contact gap tolerance [m].
    pub contact_tolerance: f64,
    /// Time-step halvings attempted after a failed step before aborting.
    pub max_step_retries: u32,
}

impl SimulationConfig {
    /// Coarse settings for tests and quick studies: 10 microsecond steps,
    /// 2 mm segments, 50 ms of process time.
    pub fn desk_scale() -> Self {
        Self {
            dt: 1.0e-5,
            ds: 2.0e-3,
            total_time: 0.05,
            spin_speed: 80.0,
            newton_tol: 1.0e-10,
            max_newton_iterations: 50,
            friction: 0.01,
            regularization: 1.0e-7,
            seed: 0,
            initial_nodes: 10,
            gravity: [0.0, 0.0, -9.81],
            turbulence_intensity: 0.1,
            turbulence_correlation_time: 1.0e-3,
            air: AirProperties::default(),
            drag: DragCoefficients::default(),
            strain_tolerance: 1.0e-3,
            contact_tolerance: 1.0e-9,
            max_step_retries: 5,
        }
    }

    /// Full-resolution settings: 1 microsecond steps, 1 mm segments, 2 s of
    /// process time (160 m of spun fiber at 80 m/s).
    pub fn production_scale() -> Self {
        Self {
            dt: 1.0e-6,
            ds: 1.0e-3,
            total_time: 2.0,
            ..Self::desk_scale()
        }
    }

    pub fn gravity(&self) -> Vector3<f64> {
        Vector3::new(self.gravity[0], self.gravity[1], self.gravity[2])
    }

    pub fn validate(&self) -> Result<(), FiberError> {
        let positives = [
            ("dt", self.dt),
            ("ds", self.ds),
            ("total_time", self.total_time),
            ("spin_speed", self.spin_speed),
            ("newton_tol", self.newton_tol),
            ("strain_tolerance", self.strain_tolerance),
            ("contact_tolerance", self.contact_tolerance),
        ];
        for (field, value) in positives {
            if !(value > 0.0) || !value.is_finite() {
                return Err(FiberError::Validation {
                    field,
                    message: format!("must be finite and > 0, got {value}"),
                });
            }
        }
        for (field, value) in [
            ("friction", self.friction),
            ("regularization", self.regularization),
            ("turbulence_intensity", self.turbulence_intensity),
        ] {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(FiberError::Validation {
                    field,
                    message: format!("must be finite and >= 0, got {value}"),
                });
            }
        }
        if self.initial_nodes < 2 {
            return Err(FiberError::Validation {
                field: "initial_nodes",
                message: format!("need at least 2 nodes, got {}", self.initial_nodes),
            });
        }
        if self.max_newton_iterations == 0 {
            return Err(FiberError::Validation {
                field: "max_newton_iterations",
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self::desk_scale()
    }
}
