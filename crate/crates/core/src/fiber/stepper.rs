//! One implicit-Euler step of the constrained string model.
//!
//! Unknowns per step are the node positions, the edge tensions enforcing
//! inextensibility, and the contact multipliers of nodes touching the belt.
//! The nonlinear system is solved with Newton's method on a banded KKT
//! matrix; belt contact is resolved with a primal active set around the
//! Newton solve. Nodes that end a step in sustained contact are flagged as
//! deposited and treated as prescribed from then on.

use nalgebra::Vector3;
use thiserror::Error;

use crate::airflow::{drag_force_jacobian, drag_line_force_unchecked, AirField};
use crate::linalg::BandedMatrix;

use super::material::MaterialParams;
use super::state::{FiberState, NodeKind};
use super::SimulationConfig;

/// Belt contact settings. The belt is the static plane `z = 0` with normal
/// `+z` in the simulation frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeltContact {
    /// Viscous friction coefficient opposing tangential slip of contacting
    /// nodes [N*s/m^2].
    pub friction: f64,
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("Newton stalled after {iterations} iterations (residual {residual:.3e})")]
    NewtonDiverged { residual: f64, iterations: usize },
    #[error("contact active set did not settle within {sweeps} sweeps")]
    ActiveSetCycling { sweeps: usize },
    #[error("KKT system singular: {0}")]
    Singular(String),
}

/// External forcing inputs frozen over one step.
pub(crate) struct Forcing<'a> {
    /// Air velocity (mean plus fluctuation) per node, evaluated at the
    /// start-of-step positions. `None` disables aerodynamic forces.
    pub air_velocity: Option<&'a [Vector3<f64>]>,
    pub gravity: Vector3<f64>,
}

#[derive(Debug, Clone)]
pub struct StepDiagnostics {
    pub newton_iterations: usize,
    pub active_set_sweeps: usize,
    pub max_strain: f64,
    pub min_lambda: f64,
    pub max_complementarity: f64,
    /// `dt` times the sum of all nodal forces on nodes that were free at
    /// the start of the step.
    pub applied_impulse: Vector3<f64>,
    /// Momentum change of the same nodes.
    pub momentum_change: Vector3<f64>,
    /// Nodes newly deposited by this step.
    pub deposited: Vec<usize>,
}

pub struct StepOutcome {
    pub state: FiberState,
    pub diagnostics: StepDiagnostics,
}

/// Advance the fiber by one step of size `dt`.
///
/// This public entry point evaluates the mean air field only; the full
/// simulation loop in [`super::simulate`] additionally superposes the
/// turbulent fluctuation streams before delegating to the same solver.
pub fn step(
    state: &FiberState,
    field: Option<&AirField>,
    material: &MaterialParams,
    config: &SimulationConfig,
    belt: Option<&BeltContact>,
    dt: f64,
) -> Result<StepOutcome, StepError> {
    let air: Option<Vec<Vector3<f64>>> = field.map(|f| {
        let drift = Vector3::new(f.process.belt_speed * state.time, 0.0, 0.0);
        state
            .positions
            .iter()
            .map(|r| f.mean_velocity(r - drift))
            .collect()
    });
    let forcing = Forcing {
        air_velocity: air.as_deref(),
        gravity: config.gravity(),
    };
    let nozzle_velocity = Vector3::new(
        field.map_or(0.0, |f| f.process.belt_speed),
        0.0,
        -config.spin_speed,
    );
    step_with_forcing(state, &forcing, material, config, belt, nozzle_velocity, dt)
}

/// External line forces [N/m] per node for the current state: aerodynamic
/// drag against the mean field, gravity, the contact force `lambda * n_b`,
/// and belt friction on contacting nodes. Internal tension and bending
/// forces are not part of this sum.
pub fn assemble_forces(
    state: &FiberState,
    field: Option<&AirField>,
    material: &MaterialParams,
    config: &SimulationConfig,
    belt: Option<&BeltContact>,
) -> Vec<Vector3<f64>> {
    let n = state.len();
    let tangents = node_tangents(&state.positions);
    let drift = field
        .map(|f| Vector3::new(f.process.belt_speed * state.time, 0.0, 0.0))
        .unwrap_or_else(Vector3::zeros);
    let mut forces = vec![Vector3::zeros(); n];
    for k in 0..n {
        let mut f = material.line_density * config.gravity();
        if let Some(air) = field {
            let w = state.velocities[k] - air.mean_velocity(state.positions[k] - drift);
            f += drag_line_force_unchecked(
                w,
                tangents[k],
                material.radius,
                &config.air,
                &config.drag,
            );
        }
        let in_contact = state.lambdas[k] > 0.0 || state.kinds[k].is_deposited();
        if in_contact {
            f += state.lambdas[k] * Vector3::z();
            if let Some(belt) = belt {
                let v = state.velocities[k];
                f -= belt.friction * Vector3::new(v.x, v.y, 0.0);
            }
        }
        forces[k] = f;
    }
    forces
}

/// Unit tangents per node: central differences inside, one-sided at the
/// ends.
pub(crate) fn node_tangents(positions: &[Vector3<f64>]) -> Vec<Vector3<f64>> {
    let n = positions.len();
    let mut tangents = Vec::with_capacity(n);
    for k in 0..n {
        let d = if k == 0 {
            positions[1] - positions[0]
        } else if k == n - 1 {
            positions[n - 1] - positions[n - 2]
        } else {
            positions[k + 1] - positions[k - 1]
        };
        let norm = d.norm();
        tangents.push(if norm > 1e-14 { d / norm } else { Vector3::z() });
    }
    tangents
}

/// Degree-of-freedom layout over the active window `[base, n)`.
///
/// Per window node: three position dofs, one tension dof if the node owns
/// an edge to its successor, and one contact dof while the node is in the
/// trial active set. Deposited and otherwise prescribed nodes keep their
/// position dofs (bound by identity rows) so the matrix stays banded.
struct Layout {
    base: usize,
    n: usize,
    offsets: Vec<usize>,
    lambda_slot: Vec<Option<usize>>,
    total: usize,
}

impl Layout {
    fn new(base: usize, n: usize, active: &[bool]) -> Self {
        let mut offsets = Vec::with_capacity(n - base);
        let mut lambda_slot = vec![None; n];
        let mut next = 0usize;
        for k in base..n {
            offsets.push(next);
            next += 3;
            if k + 1 < n {
                next += 1;
            }
            if active[k] {
                lambda_slot[k] = Some(next);
                next += 1;
            }
        }
        Self {
            base,
            n,
            offsets,
            lambda_slot,
            total: next,
        }
    }

    #[inline]
    fn pos(&self, k: usize) -> usize {
        self.offsets[k - self.base]
    }

    /// Tension dof of edge `(j, j+1)`; valid for `base <= j < n - 1`.
    #[inline]
    fn tension(&self, j: usize) -> usize {
        self.offsets[j - self.base] + 3
    }

    #[inline]
    fn lambda(&self, k: usize) -> usize {
        self.lambda_slot[k].expect("lambda dof requested for inactive node")
    }

    #[inline]
    fn contains(&self, k: usize) -> bool {
        k >= self.base && k < self.n
    }
}

/// Work buffers and frozen per-step data for the Newton solve.
struct Solver<'a> {
    state: &'a FiberState,
    forcing: &'a Forcing<'a>,
    material: &'a MaterialParams,
    config: &'a SimulationConfig,
    belt: Option<&'a BeltContact>,
    dt: f64,
    t_new: f64,
    /// Scaled by `dt^2 / (rhoA * ds)`: converts nodal forces to position
    /// units so every residual row is in meters.
    force_scale: f64,
    /// Frozen unit tangents at the start-of-step positions.
    tangents: Vec<Vector3<f64>>,
    /// Prescribed end-of-step positions for non-free nodes.
    prescribed: Vec<Option<Vector3<f64>>>,
    /// Prescribed velocities for non-free nodes (zero except the nozzle).
    prescribed_velocity: Vec<Option<Vector3<f64>>>,
}

impl<'a> Solver<'a> {
    fn nodal_mass(&self) -> f64 {
        self.material.line_density * self.state.ds
    }

    /// Velocities consistent with candidate end-of-step positions.
    fn velocities(&self, pos: &[Vector3<f64>], out: &mut Vec<Vector3<f64>>) {
        out.clear();
        for k in 0..self.state.len() {
            let v = match self.prescribed_velocity[k] {
                Some(v) => v,
                None => (pos[k] - self.state.positions[k]) / self.dt,
            };
            out.push(v);
        }
    }

    /// Total nodal force on free node `k` at the candidate state.
    #[allow(clippy::too_many_arguments)]
    fn nodal_force(
        &self,
        k: usize,
        pos: &[Vector3<f64>],
        vel: &[Vector3<f64>],
        tensions: &[f64],
        lambda_nodal: &[f64],
        active: &[bool],
        bend: &[Vector3<f64>],
    ) -> Vector3<f64> {
        let ds = self.state.ds;
        let n = self.state.len();
        let mut f = bend[k];
        // Tension: T_k d_k / ds - T_{k-1} d_{k-1} / ds.
        if k + 1 < n {
            f += tensions[k] * (pos[k + 1] - pos[k]) / ds;
        }
        if k > 0 {
            f -= tensions[k - 1] * (pos[k] - pos[k - 1]) / ds;
        }
        // Stretch-rate regularization damping, edge-wise so it stays an
        // internal force with zero sum.
        let reg = self.config.regularization / ds;
        if reg > 0.0 {
            if k + 1 < n {
                f += reg * (vel[k + 1] - vel[k]);
            }
            if k > 0 {
                f -= reg * (vel[k] - vel[k - 1]);
            }
        }
        // External line forces, scaled by ds to nodal forces.
        f += ds * self.material.line_density * self.forcing.gravity;
        if let Some(air) = self.forcing.air_velocity {
            let w = vel[k] - air[k];
            f += ds
                * drag_line_force_unchecked(
                    w,
                    self.tangents[k],
                    self.material.radius,
                    &self.config.air,
                    &self.config.drag,
                );
        }
        if active[k] {
            f += lambda_nodal[k] * Vector3::z();
            if let Some(belt) = self.belt {
                let v = vel[k];
                f -= belt.friction * ds * Vector3::new(v.x, v.y, 0.0);
            }
        }
        f
    }

    /// Variational bending forces for all nodes: the gradient of the
    /// discrete bending energy, which realizes zero-moment/zero-shear
    /// boundary conditions at free ends.
    fn bending_forces(&self, pos: &[Vector3<f64>], out: &mut Vec<Vector3<f64>>) {
        let n = self.state.len();
        out.clear();
        out.resize(n, Vector3::zeros());
        let c = self.material.bending_stiffness / self.state.ds.powi(3);
        if n < 3 || c == 0.0 {
            return;
        }
        for j in 1..n - 1 {
            let kappa = pos[j + 1] - 2.0 * pos[j] + pos[j - 1];
            out[j - 1] -= c * kappa;
            out[j] += 2.0 * c * kappa;
            out[j + 1] -= c * kappa;
        }
    }

    fn residual(
        &self,
        layout: &Layout,
        pos: &[Vector3<f64>],
        tensions: &[f64],
        lambda_nodal: &[f64],
        active: &[bool],
        vel: &mut Vec<Vector3<f64>>,
        bend: &mut Vec<Vector3<f64>>,
        out: &mut Vec<f64>,
    ) {
        let n = self.state.len();
        let ds = self.state.ds;
        let h = self.dt;
        let s = self.force_scale;
        self.velocities(pos, vel);
        self.bending_forces(pos, bend);
        out.clear();
        out.resize(layout.total, 0.0);
        for k in layout.base..n {
            let row = layout.pos(k);
            match self.prescribed[k] {
                Some(target) => {
                    let d = pos[k] - target;
                    out[row] = d.x;
                    out[row + 1] = d.y;
                    out[row + 2] = d.z;
                }
                None => {
                    let f = self.nodal_force(k, pos, vel, tensions, lambda_nodal, active, bend);
                    let r = pos[k]
                        - self.state.positions[k]
                        - h * self.state.velocities[k]
                        - s * f;
                    out[row] = r.x;
                    out[row + 1] = r.y;
                    out[row + 2] = r.z;
                }
            }
            if k + 1 < n {
                let row = layout.tension(k);
                if self.prescribed[k].is_some() && self.prescribed[k + 1].is_some() {
                    // Edge between two prescribed nodes: park the tension.
                    out[row] = tensions[k];
                } else {
                    let d = pos[k + 1] - pos[k];
                    out[row] = (d.norm_squared() - ds * ds) / (2.0 * ds);
                }
            }
            if active[k] {
                out[layout.lambda(k)] = pos[k].z;
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn jacobian(
        &self,
        layout: &Layout,
        pos: &[Vector3<f64>],
        vel: &[Vector3<f64>],
        tensions: &[f64],
        active: &[bool],
        jac: &mut BandedMatrix,
    ) {
        let n = self.state.len();
        let ds = self.state.ds;
        let h = self.dt;
        let s = self.force_scale;
        jac.clear();

        let add_block_identity = |jac: &mut BandedMatrix, row: usize, col: usize, v: f64| {
            for c in 0..3 {
                jac.add(row + c, col + c, v);
            }
        };

        for k in layout.base..n {
            let row = layout.pos(k);
            if self.prescribed[k].is_some() {
                add_block_identity(jac, row, row, 1.0);
            } else {
                // d/dr of (r - r_old - h v_old): identity.
                add_block_identity(jac, row, row, 1.0);
                // Tension force derivatives.
                if k + 1 < n {
                    let t = tensions[k];
                    add_block_identity(jac, row, row, s * t / ds);
                    if layout.contains(k + 1) {
                        add_block_identity(jac, row, layout.pos(k + 1), -s * t / ds);
                    }
                    let d = pos[k + 1] - pos[k];
                    let col = layout.tension(k);
                    for c in 0..3 {
                        jac.add(row + c, col, -s * d[c] / ds);
                    }
                }
                if k > 0 {
                    let t = tensions[k - 1];
                    add_block_identity(jac, row, row, s * t / ds);
                    if layout.contains(k - 1) {
                        add_block_identity(jac, row, layout.pos(k - 1), -s * t / ds);
                        let d = pos[k] - pos[k - 1];
                        let col = layout.tension(k - 1);
                        for c in 0..3 {
                            jac.add(row + c, col, s * d[c] / ds);
                        }
                    }
                }
                // Regularization damping (depends on velocities of both
                // edge endpoints; prescribed velocities are constants).
                let reg = self.config.regularization / ds;
                if reg > 0.0 {
                    for other in [k.wrapping_sub(1), k + 1] {
                        if other < n {
                            add_block_identity(jac, row, row, s * reg / h);
                            if layout.contains(other) && self.prescribed[other].is_none() {
                                add_block_identity(jac, row, layout.pos(other), -s * reg / h);
                            }
                        }
                    }
                }
                // Drag: block derivative with respect to the node velocity.
                if let Some(air) = self.forcing.air_velocity {
                    let w = vel[k] - air[k];
                    let block = drag_force_jacobian(
                        w,
                        self.tangents[k],
                        self.material.radius,
                        &self.config.air,
                        &self.config.drag,
                    );
                    let factor = -s * ds / h;
                    for r in 0..3 {
                        for c in 0..3 {
                            jac.add(row + r, row + c, factor * block[(r, c)]);
                        }
                    }
                }
                if active[k] {
                    if self.belt.is_some() {
                        let fric = self.belt.unwrap().friction * ds;
                        jac.add(row, row, s * fric / h);
                        jac.add(row + 1, row + 1, s * fric / h);
                    }
                    jac.add(row + 2, layout.lambda(k), -s);
                }
            }
            // Edge constraint row.
            if k + 1 < n {
                let trow = layout.tension(k);
                if self.prescribed[k].is_some() && self.prescribed[k + 1].is_some() {
                    jac.add(trow, trow, 1.0);
                } else {
                    let d = pos[k + 1] - pos[k];
                    for c in 0..3 {
                        jac.add(trow, layout.pos(k) + c, -d[c] / ds);
                        jac.add(trow, layout.pos(k + 1) + c, d[c] / ds);
                    }
                }
            }
            // Contact constraint row.
            if active[k] {
                jac.add(layout.lambda(k), layout.pos(k) + 2, 1.0);
            }
        }

        // Bending stiffness: constant, assembled from the energy Hessian.
        let c = self.material.bending_stiffness / ds.powi(3);
        if n >= 3 && c > 0.0 {
            let lo = layout.base.saturating_sub(1).max(1);
            for j in lo..n - 1 {
                let stencil = [(j - 1, 1.0), (j, -2.0), (j + 1, 1.0)];
                for &(m, cm) in &stencil {
                    if !layout.contains(m) || self.prescribed[m].is_some() {
                        continue;
                    }
                    for &(l, cl) in &stencil {
                        if !layout.contains(l) {
                            continue;
                        }
                        add_block_identity(
                            jac,
                            layout.pos(m),
                            layout.pos(l),
                            s * c * cm * cl,
                        );
                    }
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn step_with_forcing(
    state: &FiberState,
    forcing: &Forcing,
    material: &MaterialParams,
    config: &SimulationConfig,
    belt: Option<&BeltContact>,
    nozzle_velocity: Vector3<f64>,
    dt: f64,
) -> Result<StepOutcome, StepError> {
    let n = state.len();
    assert!(n >= 2, "fiber needs at least two nodes");
    let t_new = state.time + dt;

    // Prescribed end-of-step kinematics.
    let mut prescribed = vec![None; n];
    let mut prescribed_velocity = vec![None; n];
    for k in 0..n {
        match state.kinds[k] {
            NodeKind::Free => {}
            NodeKind::Clamped | NodeKind::Deposited { .. } => {
                prescribed[k] = Some(state.positions[k]);
                prescribed_velocity[k] = Some(Vector3::zeros());
            }
            NodeKind::Nozzle { created_at, origin } => {
                prescribed[k] = Some(origin + (t_new - created_at) * nozzle_velocity);
                prescribed_velocity[k] = Some(nozzle_velocity);
            }
        }
    }

    let first_free = state.kinds.iter().position(NodeKind::is_free);
    let solver = Solver {
        state,
        forcing,
        material,
        config,
        belt,
        dt,
        t_new,
        force_scale: dt * dt / (material.line_density * state.ds),
        tangents: node_tangents(&state.positions),
        prescribed,
        prescribed_velocity,
    };

    let Some(first_free) = first_free else {
        // Everything prescribed: advance kinematically.
        let mut next = state.clone();
        for k in 0..n {
            if let Some(p) = solver.prescribed[k] {
                next.positions[k] = p;
                next.velocities[k] = solver.prescribed_velocity[k].unwrap();
            }
        }
        next.time = t_new;
        let max_strain = next.max_abs_strain();
        return Ok(StepOutcome {
            diagnostics: StepDiagnostics {
                newton_iterations: 0,
                active_set_sweeps: 0,
                max_strain,
                min_lambda: 0.0,
                max_complementarity: next.max_complementarity_defect(),
                applied_impulse: Vector3::zeros(),
                momentum_change: Vector3::zeros(),
                deposited: Vec::new(),
            },
            state: next,
        });
    };
    let base = first_free.saturating_sub(1);

    // Candidate state, shared across active-set sweeps for warm starting.
    let mut pos: Vec<Vector3<f64>> = state.positions.clone();
    let mut tensions = state.tensions.clone();
    let mut lambda_nodal = vec![0.0; n];
    for k in base..n {
        match solver.prescribed[k] {
            Some(target) => pos[k] = target,
            None => pos[k] = state.positions[k] + dt * state.velocities[k],
        }
    }

    let mut active = vec![false; n];
    let mut blocked = vec![false; n]; // released this step; do not re-add
    let mut vel = Vec::new();
    let mut bend = Vec::new();
    let mut residual = Vec::new();
    let mut trial_pos = pos.clone();
    let mut trial_tensions = tensions.clone();
    let mut trial_lambda = lambda_nodal.clone();
    let mut total_newton = 0usize;

    const BAND: usize = 12;
    const MAX_SWEEPS: usize = 30;
    let penetration_eps = 1e-12;

    let mut sweeps = 0usize;
    loop {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(StepError::ActiveSetCycling { sweeps: MAX_SWEEPS });
        }
        let layout = Layout::new(base, n, &active);
        let mut jac = BandedMatrix::zeros(layout.total, BAND, BAND);

        // Newton iterations for the current active set.
        solver.residual(
            &layout,
            &pos,
            &tensions,
            &lambda_nodal,
            &active,
            &mut vel,
            &mut bend,
            &mut residual,
        );
        let mut res_norm = inf_norm(&residual);
        let mut converged = res_norm <= config.newton_tol;
        let mut iterations = 0usize;
        while !converged {
            if iterations >= config.max_newton_iterations {
                return Err(StepError::NewtonDiverged {
                    residual: res_norm,
                    iterations,
                });
            }
            iterations += 1;
            total_newton += 1;
            solver.jacobian(&layout, &pos, &vel, &tensions, &active, &mut jac);
            let mut delta: Vec<f64> = residual.iter().map(|r| -r).collect();
            jac.solve_in_place(&mut delta)
                .map_err(|e| StepError::Singular(e.to_string()))?;

            // Backtracking line search on the residual norm.
            let mut alpha = 1.0f64;
            let mut accepted = false;
            for _ in 0..8 {
                apply_update(
                    &layout, &pos, &tensions, &lambda_nodal, &delta, alpha, &mut trial_pos,
                    &mut trial_tensions, &mut trial_lambda,
                );
                solver.residual(
                    &layout,
                    &trial_pos,
                    &trial_tensions,
                    &trial_lambda,
                    &active,
                    &mut vel,
                    &mut bend,
                    &mut residual,
                );
                let trial_norm = inf_norm(&residual);
                if trial_norm <= config.newton_tol || trial_norm < res_norm * (1.0 - 1e-4) {
                    std::mem::swap(&mut pos, &mut trial_pos);
                    std::mem::swap(&mut tensions, &mut trial_tensions);
                    std::mem::swap(&mut lambda_nodal, &mut trial_lambda);
                    res_norm = trial_norm;
                    converged = trial_norm <= config.newton_tol;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                return Err(StepError::NewtonDiverged {
                    residual: res_norm,
                    iterations,
                });
            }
        }

        // Active-set update.
        if belt.is_some() {
            let mut changed = false;
            for k in base..n {
                if active[k] && lambda_nodal[k] < 0.0 {
                    active[k] = false;
                    blocked[k] = true;
                    lambda_nodal[k] = 0.0;
                    changed = true;
                }
            }
            if !changed {
                for k in base..n {
                    if !active[k]
                        && !blocked[k]
                        && state.kinds[k].is_free()
                        && pos[k].z < -penetration_eps
                    {
                        active[k] = true;
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
        }
        break;
    }

    // Build the new state.
    let ds = state.ds;
    let mut next = state.clone();
    next.time = t_new;
    solver.velocities(&pos, &mut vel);
    solver.bending_forces(&pos, &mut bend);
    let mass = solver.nodal_mass();
    let mut applied_impulse = Vector3::zeros();
    let mut momentum_change = Vector3::zeros();
    let mut deposited = Vec::new();
    let mut min_lambda = 0.0f64;

    for k in 0..n {
        if state.kinds[k].is_free() {
            let f = solver.nodal_force(k, &pos, &vel, &tensions, &lambda_nodal, &active, &bend);
            applied_impulse += dt * f;
            momentum_change += mass * (vel[k] - state.velocities[k]);
        }
    }
    for k in base..n {
        next.positions[k] = pos[k];
        next.velocities[k] = vel[k];
    }
    next.tensions = tensions;
    for k in 0..n {
        if active[k] {
            let lambda = lambda_nodal[k] / ds;
            min_lambda = min_lambda.min(lambda);
            next.lambdas[k] = lambda.max(0.0);
            // Sustained contact: the node is deposited. Suction holds it,
            // so contact is permanent; snap exactly onto the plane.
            next.kinds[k] = NodeKind::Deposited { time: t_new };
            next.positions[k].z = 0.0;
            next.velocities[k] = Vector3::zeros();
            deposited.push(k);
        } else if state.kinds[k].is_free() {
            next.lambdas[k] = 0.0;
        }
    }

    let diagnostics = StepDiagnostics {
        newton_iterations: total_newton,
        active_set_sweeps: sweeps,
        max_strain: next.max_abs_strain(),
        min_lambda,
        max_complementarity: next.max_complementarity_defect(),
        applied_impulse,
        momentum_change,
        deposited,
    };
    Ok(StepOutcome {
        state: next,
        diagnostics,
    })
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[allow(clippy::too_many_arguments)]
fn apply_update(
    layout: &Layout,
    pos: &[Vector3<f64>],
    tensions: &[f64],
    lambda_nodal: &[f64],
    delta: &[f64],
    alpha: f64,
    out_pos: &mut [Vector3<f64>],
    out_tensions: &mut [f64],
    out_lambda: &mut [f64],
) {
    out_pos.copy_from_slice(pos);
    out_tensions.copy_from_slice(tensions);
    out_lambda.copy_from_slice(lambda_nodal);
    for k in layout.base..layout.n {
        let off = layout.pos(k);
        out_pos[k].x += alpha * delta[off];
        out_pos[k].y += alpha * delta[off + 1];
        out_pos[k].z += alpha * delta[off + 2];
        if k + 1 < layout.n {
            out_tensions[k] += alpha * delta[layout.tension(k)];
        }
        if let Some(slot) = layout.lambda_slot[k] {
            out_lambda[k] += alpha * delta[slot];
        }
    }
}
