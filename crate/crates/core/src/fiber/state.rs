//! Discretized fiber state and the spin-in boundary condition.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{FiberError, SimulationConfig};

/// Role of a node in the constrained dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NodeKind {
    /// Ordinary dynamic node.
    Free,
    /// Held fixed at its current position (test boundary condition).
    Clamped,
    /// The newest node, driven away from the nozzle with the spin velocity
    /// until the next node is inserted.
    Nozzle {
        created_at: f64,
        origin: Vector3<f64>,
    },
    /// Landed on the belt at `time`; static in the belt frame from then on.
    Deposited { time: f64 },
}

impl NodeKind {
    pub fn is_free(&self) -> bool {
        matches!(self, NodeKind::Free)
    }

    pub fn is_deposited(&self) -> bool {
        matches!(self, NodeKind::Deposited { .. })
    }
}

/// Discretized fiber centerline with per-node velocities, per-edge tension
/// multipliers and per-node contact multipliers.
///
/// Node `k` carries the material arc-length coordinate `k * ds`; nodes are
/// appended at the nozzle as the filament is spun in, so indices grow from
/// the free tip (node 0) towards the nozzle.
///
/// All coordinates live in the belt frame: the belt surface is the static
/// plane `z = 0` and the nozzle drifts in machine direction with the belt
/// speed. Viewed from the machine frame this is exactly a fixed nozzle over
/// a moving belt that advects the deposited fiber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberState {
    pub positions: Vec<Vector3<f64>>,
    pub velocities: Vec<Vector3<f64>>,
    /// Tension multiplier of edge `(k, k+1)` [N]; length `n - 1`.
    pub tensions: Vec<f64>,
    /// Contact multiplier per node [N/m]; nonzero only at and after contact.
    pub lambdas: Vec<f64>,
    pub kinds: Vec<NodeKind>,
    /// Simulation time [s].
    pub time: f64,
    /// Arc-length step [m].
    pub ds: f64,
}

impl FiberState {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Arc-length coordinate of node `k`.
    pub fn arc_length(&self, k: usize) -> f64 {
        k as f64 * self.ds
    }

    /// Total created fiber length.
    pub fn created_length(&self) -> f64 {
        (self.len().saturating_sub(1)) as f64 * self.ds
    }

    /// Strain of edge `k`: `||r_{k+1} - r_k|| / ds - 1`.
    pub fn edge_strain(&self, k: usize) -> f64 {
        (self.positions[k + 1] - self.positions[k]).norm() / self.ds - 1.0
    }

    pub fn max_abs_strain(&self) -> f64 {
        (0..self.len().saturating_sub(1))
            .map(|k| self.edge_strain(k).abs())
            .fold(0.0, f64::max)
    }

    /// Largest complementarity defect `lambda_k * gap_k` over all nodes.
    pub fn max_complementarity_defect(&self) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.positions)
            .map(|(l, r)| l * r.z.max(0.0))
            .fold(0.0, f64::max)
    }

    /// Check the state invariants: edge strains within `strain_tol`,
    /// contact multipliers non-negative, deposited nodes on the belt plane
    /// within `contact_tol`.
    pub fn check_invariants(&self, strain_tol: f64, contact_tol: f64) -> Result<(), FiberError> {
        let strain = self.max_abs_strain();
        if strain > strain_tol {
            return Err(FiberError::InvariantViolated(format!(
                "max edge strain {strain:.3e} exceeds {strain_tol:.3e}"
            )));
        }
        for (k, lambda) in self.lambdas.iter().enumerate() {
            if *lambda < 0.0 {
                return Err(FiberError::InvariantViolated(format!(
                    "negative contact multiplier {lambda:.3e} at node {k}"
                )));
            }
        }
        for (k, (kind, r)) in self.kinds.iter().zip(&self.positions).enumerate() {
            if kind.is_deposited() && r.z.abs() > contact_tol {
                return Err(FiberError::InvariantViolated(format!(
                    "deposited node {k} off the belt plane by {:.3e}",
                    r.z
                )));
            }
        }
        Ok(())
    }
}

/// Create the initial short fiber hanging straight below the nozzle.
///
/// The newest (highest-index) node sits at the nozzle and is driven with
/// the spin velocity; all nodes start with velocity `(0, 0, -u)`.
pub fn init_fiber(config: &SimulationConfig, nozzle_position: Vector3<f64>) -> FiberState {
    let n = config.initial_nodes.max(2);
    let u = config.spin_speed;
    let mut positions = Vec::with_capacity(n);
    let mut kinds = Vec::with_capacity(n);
    for k in 0..n {
        let below = (n - 1 - k) as f64 * config.ds;
        positions.push(nozzle_position - Vector3::new(0.0, 0.0, below));
        kinds.push(NodeKind::Free);
    }
    kinds[n - 1] = NodeKind::Nozzle {
        created_at: 0.0,
        origin: nozzle_position,
    };
    FiberState {
        positions,
        velocities: vec![Vector3::new(0.0, 0.0, -u); n],
        tensions: vec![0.0; n - 1],
        lambdas: vec![0.0; n],
        kinds,
        time: 0.0,
        ds: config.ds,
    }
}

/// Insert a new node at the nozzle, releasing the previous nozzle node.
///
/// Called whenever the previous nozzle node has been driven one arc-length
/// step away from the nozzle, so total fiber length grows at the spin
/// speed.
pub fn spin_in(state: &mut FiberState, config: &SimulationConfig, nozzle_position: Vector3<f64>) {
    let n = state.len();
    if let NodeKind::Nozzle { .. } = state.kinds[n - 1] {
        state.kinds[n - 1] = NodeKind::Free;
    }
    state.positions.push(nozzle_position);
    state
        .velocities
        .push(Vector3::new(0.0, 0.0, -config.spin_speed));
    state.tensions.push(0.0);
    state.lambdas.push(0.0);
    state.kinds.push(NodeKind::Nozzle {
        created_at: state.time,
        origin: nozzle_position,
    });
}
