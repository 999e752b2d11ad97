//! Virtual spunbond laboratory.
//!
//! The crate simulates turbulent-air-driven laydown of an elastic,
//! inextensible fiber on a suctioned conveyor belt, extracts the laydown
//! descriptors sigma1 (machine direction), sigma2 (cross direction) and the
//! stochasticity parameter A, drives designed experiments over process and
//! material parameters, and analyzes the resulting cause-and-effect
//! relations with blocked neural networks.
//!
//! Module map:
//! - [`airflow`]: parametric jet/suction surrogate for the air field and the
//!   aerodynamic line force on the fiber.
//! - [`fiber`]: the discretized string-model solver (implicit Euler +
//!   Newton) with belt contact and spin-in.
//! - [`laydown`]: laydown post-processing (backtracking, tail cut, sigma and
//!   A estimation) and the stochastic web surrogate.
//! - [`doe`]: Latin hypercube designs, plan construction, and the resumable
//!   batch runner.
//! - [`bnn`]: blocked neural networks, Levenberg-Marquardt training,
//!   analytic input effects, average elasticity, confidence intervals.
//! - [`report`]: effect curves, elasticity ranking tables, and comparison
//!   commentary emitted by the command-line front end.

pub mod airflow;
pub mod bnn;
pub mod doe;
pub mod fiber;
pub mod laydown;
pub mod linalg;
pub mod report;
