//! Parametric surrogate for the air flow between the drawing-unit exit and
//! the suctioned conveyor belt.
//!
//! The mean field is a closed-form planar free jet: a Gaussian cross-stream
//! profile whose half-width grows linearly with distance from the channel
//! exit and whose centerline speed decays with the planar-jet similarity law
//! (proportional to 1/sqrt(distance)), superposed with a Darcy suction
//! component that reaches magnitude `kappa * p` at the belt face. Turbulent
//! fluctuations are modeled as per-node Ornstein-Uhlenbeck processes in time
//! whose stationary standard deviation is proportional to the local mean
//! speed.
//!
//! Coordinate convention: the belt is the plane `z = 0` with normal `+z`,
//! the channel exit is the line `x = 0, z = H`. `x` is the machine
//! direction (MD), `y` the cross machine direction (CD). The field is
//! uniform in CD.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Jet half-width growth per unit distance from the exit.
const JET_SPREAD_RATE: f64 = 0.11;
/// Virtual-origin distance of the jet in units of the exit half-width; the
/// centerline speed is `v * sqrt(L0 / (L0 + d))` so it equals `v` at the
/// exit and follows the similarity decay downstream.
const JET_DEVELOPMENT_FACTOR: f64 = 10.0;
const LN_2: f64 = core::f64::consts::LN_2;

#[derive(Debug, Error)]
pub enum AirflowError {
    #[error("invalid {field}: {message}")]
    Validation {
        field: &'static str,
        message: String,
    },
}

fn require_positive(field: &'static str, value: f64) -> Result<(), AirflowError> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(AirflowError::Validation {
            field,
            message: format!("must be finite and > 0, got {value}"),
        });
    }
    Ok(())
}

fn require_non_negative(field: &'static str, value: f64) -> Result<(), AirflowError> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(AirflowError::Validation {
            field,
            message: format!("must be finite and >= 0, got {value}"),
        });
    }
    Ok(())
}

/// Geometry of the entangling zone between drawing channel and belt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainGeometry {
    /// Half-width of the drawing-channel exit slot [m].
    pub channel_exit_half_width: f64,
    /// Height of the channel exit above the belt [m].
    pub exit_to_belt_height: f64,
    /// Half-width of the simulated domain in MD [m].
    pub domain_half_width: f64,
    /// Darcy permeability of the belt: through-flow speed per unit suction
    /// pressure [m/(s*Pa)].
    pub belt_permeability: f64,
}

impl Default for DomainGeometry {
    fn default() -> Self {
        // The exit width and fall height are assumptions of this virtual
        // rig; they are configuration, not measured machine data.
        Self {
            channel_exit_half_width: 5.0e-3,
            exit_to_belt_height: 0.20,
            domain_half_width: 0.25,
            belt_permeability: 0.02,
        }
    }
}

impl DomainGeometry {
    pub fn validate(&self) -> Result<(), AirflowError> {
        require_positive("channel_exit_half_width", self.channel_exit_half_width)?;
        require_positive("exit_to_belt_height", self.exit_to_belt_height)?;
        require_positive("domain_half_width", self.domain_half_width)?;
        require_non_negative("belt_permeability", self.belt_permeability)?;
        Ok(())
    }
}

/// Process-side operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProcessParams {
    /// Air speed at the drawing-channel exit [m/s].
    pub inlet_air_speed: f64,
    /// Suction pressure under the belt [Pa].
    pub suction_pressure: f64,
    /// Belt speed in MD [m/s].
    pub belt_speed: f64,
    /// Filament spin-in speed at the nozzle [m/s].
    pub spin_speed: f64,
}

impl Default for ProcessParams {
    fn default() -> Self {
        Self {
            inlet_air_speed: 100.0,
            suction_pressure: 100.0,
            belt_speed: 0.05,
            spin_speed: 80.0,
        }
    }
}

impl ProcessParams {
    pub fn validate(&self) -> Result<(), AirflowError> {
        require_positive("inlet_air_speed", self.inlet_air_speed)?;
        require_non_negative("suction_pressure", self.suction_pressure)?;
        require_non_negative("belt_speed", self.belt_speed)?;
        require_positive("spin_speed", self.spin_speed)?;
        Ok(())
    }
}

/// Turbulence surrogate settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbulenceConfig {
    /// Stationary fluctuation standard deviation as a fraction of the local
    /// mean speed (per velocity component).
    pub intensity_scale: f64,
    /// Correlation time of the fluctuation process [s].
    pub correlation_time: f64,
    /// Seed for all fluctuation streams of this field.
    pub seed: u64,
}

impl Default for TurbulenceConfig {
    fn default() -> Self {
        Self {
            intensity_scale: 0.1,
            correlation_time: 1.0e-3,
            seed: 0,
        }
    }
}

/// Immutable air-field descriptor. Cheap to copy, safe to share between
/// concurrently running fiber simulations; fluctuation state lives in
/// per-simulation [`FluctuationStream`] values instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirField {
    pub geometry: DomainGeometry,
    pub process: ProcessParams,
    pub turbulence_intensity_scale: f64,
    pub fluctuation_correlation_time: f64,
    pub seed: u64,
}

/// Build a validated air field.
///
/// Identical inputs and seed give bit-identical downstream fluctuation
/// streams; the mean field does not depend on the seed at all.
pub fn build_field(
    process: ProcessParams,
    geometry: DomainGeometry,
    turbulence: TurbulenceConfig,
) -> Result<AirField, AirflowError> {
    geometry.validate()?;
    process.validate()?;
    require_non_negative("turbulence_intensity_scale", turbulence.intensity_scale)?;
    require_positive("fluctuation_correlation_time", turbulence.correlation_time)?;
    Ok(AirField {
        geometry,
        process,
        turbulence_intensity_scale: turbulence.intensity_scale,
        fluctuation_correlation_time: turbulence.correlation_time,
        seed: turbulence.seed,
    })
}

impl AirField {
    /// Clamp a position into the covered domain.
    fn clamp_position(&self, position: Vector3<f64>) -> (f64, f64) {
        let w = self.geometry.domain_half_width;
        let h = self.geometry.exit_to_belt_height;
        (position.x.clamp(-w, w), position.z.clamp(0.0, h))
    }

    /// Deterministic mean air velocity at a position [m/s].
    ///
    /// Positions outside the domain are clamped. On the exit-plane
    /// centerline this returns exactly `(0, 0, -inlet_air_speed)`.
    pub fn mean_velocity(&self, position: Vector3<f64>) -> Vector3<f64> {
        let (x, z) = self.clamp_position(position);
        let h = self.geometry.exit_to_belt_height;
        let a = self.geometry.channel_exit_half_width;
        let d = h - z; // distance below the exit plane

        let l0 = JET_DEVELOPMENT_FACTOR * a;
        let centerline = self.process.inlet_air_speed * (l0 / (l0 + d)).sqrt();
        let half_width = a + JET_SPREAD_RATE * d;
        let jet = centerline * (-LN_2 * (x / half_width).powi(2)).exp();

        // Darcy through-flow: zero at the exit plane, kappa*p at the belt.
        let suction = self.geometry.belt_permeability * self.process.suction_pressure * (1.0 - z / h);

        Vector3::new(0.0, 0.0, -(jet + suction))
    }

    /// Create the fluctuation stream for one fiber node.
    ///
    /// Streams are keyed by `stream_id` (the node creation index); the same
    /// `(field seed, stream_id)` pair always yields the same realization.
    /// The process starts in its stationary distribution at `start_time`.
    pub fn fluctuation_stream(&self, stream_id: u64, start_time: f64) -> FluctuationStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream_id);
        let xi = Vector3::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        FluctuationStream {
            rng,
            xi,
            time: start_time,
        }
    }
}

/// State of one node's Ornstein-Uhlenbeck fluctuation process.
///
/// `xi` is the normalized (unit-variance) OU state; the physical
/// fluctuation is `intensity * |mean velocity| * xi`.
#[derive(Debug, Clone)]
pub struct FluctuationStream {
    rng: ChaCha8Rng,
    xi: Vector3<f64>,
    time: f64,
}

impl FluctuationStream {
    pub fn time(&self) -> f64 {
        self.time
    }
}

/// Sample the turbulent velocity fluctuation for one node at `time`.
///
/// Advances the stream with the exact OU transition density, so any
/// (positive) time increment is unbiased. Calls with `time` equal to the
/// stream time re-return the current state without consuming randomness.
pub fn sample_fluctuation(
    field: &AirField,
    position: Vector3<f64>,
    time: f64,
    stream: &mut FluctuationStream,
) -> Vector3<f64> {
    let dt = time - stream.time;
    if dt > 0.0 {
        let alpha = (-dt / field.fluctuation_correlation_time).exp();
        let noise_scale = (1.0 - alpha * alpha).sqrt();
        let n = Vector3::new(
            stream.rng.sample(StandardNormal),
            stream.rng.sample(StandardNormal),
            stream.rng.sample(StandardNormal),
        );
        stream.xi = alpha * stream.xi + noise_scale * n;
        stream.time = time;
    }
    let local_std = field.turbulence_intensity_scale * field.mean_velocity(position).norm();
    local_std * stream.xi
}

/// Bulk properties of the process air.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirProperties {
    /// Density [kg/m^3].
    pub density: f64,
    /// Dynamic viscosity [Pa*s]. Carried for configurability; the default
    /// drag law below is the high-Reynolds quadratic form and does not
    /// consume it.
    pub viscosity: f64,
}

impl Default for AirProperties {
    fn default() -> Self {
        // Air at room temperature.
        Self {
            density: 1.2,
            viscosity: 1.8e-5,
        }
    }
}

/// Drag coefficients of the tangent/normal-resolved line force.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragCoefficients {
    /// Tangential coefficient `c_t`.
    pub tangential: f64,
    /// Normal coefficient `c_n`.
    pub normal: f64,
}

impl Default for DragCoefficients {
    fn default() -> Self {
        // c_n matches the drag coefficient of a circular cylinder in the
        // transitional Reynolds range; skin friction along the fiber is an
        // order of magnitude weaker.
        Self {
            tangential: 0.12,
            normal: 1.2,
        }
    }
}

/// Aerodynamic line force [N/m] on a fiber element.
///
/// `relative_velocity` is the fiber velocity minus the air velocity; the
/// force opposes it. The slip is resolved into components along and normal
/// to `tangent` with independent quadratic drag laws:
/// `f = -(c_t * rho * R * |w_t| * w_t + c_n * rho * R * |w_n| * w_n)`.
pub fn aerodynamic_line_force(
    relative_velocity: Vector3<f64>,
    tangent: Vector3<f64>,
    fiber_radius: f64,
    air: &AirProperties,
    coefficients: &DragCoefficients,
) -> Result<Vector3<f64>, AirflowError> {
    if (tangent.norm() - 1.0).abs() > 1.0e-9 {
        return Err(AirflowError::Validation {
            field: "tangent",
            message: format!("must be a unit vector, norm is {}", tangent.norm()),
        });
    }
    Ok(drag_line_force_unchecked(
        relative_velocity,
        tangent,
        fiber_radius,
        air,
        coefficients,
    ))
}

/// Same as [`aerodynamic_line_force`] without the unit-tangent check; the
/// time stepper normalizes tangents itself and calls this in the hot loop.
pub(crate) fn drag_line_force_unchecked(
    w: Vector3<f64>,
    tangent: Vector3<f64>,
    fiber_radius: f64,
    air: &AirProperties,
    coefficients: &DragCoefficients,
) -> Vector3<f64> {
    let scale = air.density * fiber_radius;
    let axial = tangent.dot(&w);
    let w_t = axial * tangent;
    let w_n = w - w_t;
    -(coefficients.tangential * scale * axial.abs() * w_t
        + coefficients.normal * scale * w_n.norm() * w_n)
}

/// Analytic derivative of the drag line force with respect to the relative
/// velocity, used in the Newton Jacobian of the time stepper.
pub(crate) fn drag_force_jacobian(
    w: Vector3<f64>,
    tangent: Vector3<f64>,
    fiber_radius: f64,
    air: &AirProperties,
    coefficients: &DragCoefficients,
) -> Matrix3<f64> {
    let scale = air.density * fiber_radius;
    let axial = tangent.dot(&w);
    let w_n = w - axial * tangent;
    let wn_norm = w_n.norm();

    let tt = tangent * tangent.transpose();
    let mut jac = -2.0 * coefficients.tangential * scale * axial.abs() * tt;
    if wn_norm > 0.0 {
        let projector = Matrix3::identity() - tt;
        let unit_n = w_n / wn_norm;
        jac -= coefficients.normal * scale * (wn_norm * projector + unit_n * w_n.transpose());
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn default_field(seed: u64) -> AirField {
        build_field(
            ProcessParams::default(),
            DomainGeometry::default(),
            TurbulenceConfig {
                seed,
                ..TurbulenceConfig::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn build_rejects_invalid_values_naming_the_field() {
        let bad_process = ProcessParams {
            inlet_air_speed: -5.0,
            ..ProcessParams::default()
        };
        let err = build_field(
            bad_process,
            DomainGeometry::default(),
            TurbulenceConfig::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("inlet_air_speed"), "{err}");

        let bad_geometry = DomainGeometry {
            exit_to_belt_height: 0.0,
            ..DomainGeometry::default()
        };
        let err = build_field(
            ProcessParams::default(),
            bad_geometry,
            TurbulenceConfig::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("exit_to_belt_height"), "{err}");
    }

    #[test]
    fn exit_plane_centerline_returns_inlet_speed() {
        let field = default_field(0);
        let h = field.geometry.exit_to_belt_height;
        let v = field.mean_velocity(Vector3::new(0.0, 0.0, h));
        assert_relative_eq!(v.z, -100.0, max_relative = 1e-14);
        assert_eq!(v.x, 0.0);
        assert_eq!(v.y, 0.0);
    }

    #[test]
    fn mean_speed_scales_monotonically_with_inlet_speed() {
        let geometry = DomainGeometry::default();
        let probe = Vector3::new(0.01, 0.0, 0.05);
        let mut last = 0.0;
        for v in [70.0, 100.0, 130.0] {
            let field = build_field(
                ProcessParams {
                    inlet_air_speed: v,
                    ..ProcessParams::default()
                },
                geometry,
                TurbulenceConfig::default(),
            )
            .unwrap();
            let speed = field.mean_velocity(probe).norm();
            assert!(speed > last, "speed {speed} not monotone at v={v}");
            last = speed;
        }
    }

    #[test]
    fn zero_pressure_means_zero_belt_through_flow() {
        let field = build_field(
            ProcessParams {
                suction_pressure: 0.0,
                ..ProcessParams::default()
            },
            DomainGeometry::default(),
            TurbulenceConfig::default(),
        )
        .unwrap();
        // Far outside the jet cone at the belt face only the Darcy term
        // could contribute; with p = 0 it must vanish.
        let v = field.mean_velocity(Vector3::new(0.2, 0.0, 0.0));
        let jet_only = 100.0 * 1e-2; // generous bound, actual value far smaller
        assert!(v.norm() < jet_only, "residual speed {}", v.norm());
    }

    #[test]
    fn speed_far_outside_jet_cone_is_below_one_percent() {
        // Five half-widths off axis: the Gaussian factor is 2^-25.
        let field = build_field(
            ProcessParams {
                suction_pressure: 0.0,
                ..ProcessParams::default()
            },
            DomainGeometry::default(),
            TurbulenceConfig::default(),
        )
        .unwrap();
        let a = field.geometry.channel_exit_half_width;
        let h = field.geometry.exit_to_belt_height;
        let d = 0.1;
        let half_width = a + JET_SPREAD_RATE * d;
        let probe = Vector3::new(5.0 * half_width, 0.0, h - d);
        let expected_centerline =
            100.0 * (JET_DEVELOPMENT_FACTOR * a / (JET_DEVELOPMENT_FACTOR * a + d)).sqrt();
        let oracle = expected_centerline * (-LN_2 * 25.0).exp();
        let got = field.mean_velocity(probe).norm();
        assert_relative_eq!(got, oracle, max_relative = 1e-12);
        assert!(got < 0.01 * 100.0);
    }

    #[test]
    fn mean_field_is_seed_independent() {
        let a = default_field(1);
        let b = default_field(999);
        let probe = Vector3::new(0.01, 0.3, 0.07);
        assert_eq!(a.mean_velocity(probe), b.mean_velocity(probe));
    }

    #[test]
    fn positions_outside_domain_are_clamped() {
        let field = default_field(0);
        let below = field.mean_velocity(Vector3::new(0.0, 0.0, -1.0));
        let at_belt = field.mean_velocity(Vector3::new(0.0, 0.0, 0.0));
        assert_eq!(below, at_belt);
    }

    #[test]
    fn zero_intensity_gives_zero_fluctuation() {
        let field = build_field(
            ProcessParams::default(),
            DomainGeometry::default(),
            TurbulenceConfig {
                intensity_scale: 0.0,
                ..TurbulenceConfig::default()
            },
        )
        .unwrap();
        let mut stream = field.fluctuation_stream(0, 0.0);
        let probe = Vector3::new(0.0, 0.0, 0.1);
        for step in 1..100 {
            let f = sample_fluctuation(&field, probe, step as f64 * 1e-4, &mut stream);
            assert_eq!(f, Vector3::zeros());
        }
    }

    #[test]
    fn fluctuations_are_deterministic_given_seed() {
        let field = default_field(42);
        let probe = Vector3::new(0.002, 0.0, 0.12);
        let run = |field: &AirField| {
            let mut stream = field.fluctuation_stream(7, 0.0);
            (1..50)
                .map(|k| sample_fluctuation(field, probe, k as f64 * 1e-4, &mut stream))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(&field), run(&default_field(42)));
        assert_ne!(run(&field), run(&default_field(43)));
    }

    #[test]
    fn fluctuation_std_matches_configuration() {
        // Monte-Carlo oracle: sample the stationary process at lag = tau and
        // compare the sample standard deviation against the configured one.
        let field = default_field(3);
        let tau = field.fluctuation_correlation_time;
        let probe = Vector3::new(0.0, 0.0, 0.1);
        let configured = field.turbulence_intensity_scale * field.mean_velocity(probe).norm();

        let mut stream = field.fluctuation_stream(11, 0.0);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for k in 1..=n {
            let f = sample_fluctuation(&field, probe, k as f64 * tau, &mut stream);
            sum += f.x;
            sum_sq += f.x * f.x;
        }
        let mean = sum / n as f64;
        let std = (sum_sq / n as f64 - mean * mean).sqrt();
        assert_relative_eq!(std, configured, max_relative = 0.01);
    }

    #[test]
    fn fluctuation_autocorrelation_decays_like_ou() {
        // OU oracle: autocorrelation at lag tau is e^-1.
        let field = default_field(5);
        let tau = field.fluctuation_correlation_time;
        let probe = Vector3::new(0.0, 0.0, 0.1);
        let mut stream = field.fluctuation_stream(2, 0.0);
        let n = 200_000usize;
        let series: Vec<f64> = (1..=n)
            .map(|k| sample_fluctuation(&field, probe, k as f64 * tau, &mut stream).y)
            .collect();
        let mean = series.iter().sum::<f64>() / n as f64;
        let var: f64 = series.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let cov: f64 = series
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>()
            / (n - 1) as f64;
        let rho = cov / var;
        assert_abs_diff_eq!(rho, (-1.0f64).exp(), epsilon = 0.05);
    }

    #[test]
    fn fluctuation_process_is_stationary_around_zero() {
        let field = default_field(17);
        let tau = field.fluctuation_correlation_time;
        let probe = Vector3::new(0.0, 0.0, 0.1);
        let std = field.turbulence_intensity_scale * field.mean_velocity(probe).norm();
        let mut stream = field.fluctuation_stream(4, 0.0);
        let n = 100_000usize;
        let mut sum = Vector3::zeros();
        for k in 1..=n {
            sum += sample_fluctuation(&field, probe, k as f64 * tau, &mut stream);
        }
        let mean = sum / n as f64;
        // Samples at lag tau have autocorrelation e^-1; the effective sample
        // count shrinks by (1 - rho) / (1 + rho).
        let rho = (-1.0f64).exp();
        let n_eff = n as f64 * (1.0 - rho) / (1.0 + rho);
        let standard_error = std / n_eff.sqrt();
        for c in 0..3 {
            assert!(
                mean[c].abs() < 3.0 * standard_error,
                "component {c}: mean {} vs SE {standard_error}",
                mean[c]
            );
        }
    }

    #[test]
    fn drag_is_zero_at_zero_slip() {
        let f = aerodynamic_line_force(
            Vector3::zeros(),
            Vector3::z(),
            1e-5,
            &AirProperties::default(),
            &DragCoefficients::default(),
        )
        .unwrap();
        assert_eq!(f, Vector3::zeros());
    }

    #[test]
    fn tangential_slip_gives_tangential_force() {
        let t = Vector3::new(1.0, 2.0, -0.5).normalize();
        let w = 3.0 * t;
        let f = aerodynamic_line_force(
            w,
            t,
            1e-5,
            &AirProperties::default(),
            &DragCoefficients::default(),
        )
        .unwrap();
        let off_axis = (f - f.dot(&t) * t).norm();
        assert!(off_axis < 1e-15 * f.norm().max(1.0));
        assert!(f.dot(&t) < 0.0, "force must oppose the slip");
    }

    #[test]
    fn non_unit_tangent_is_rejected() {
        let err = aerodynamic_line_force(
            Vector3::x(),
            Vector3::new(0.0, 0.0, 2.0),
            1e-5,
            &AirProperties::default(),
            &DragCoefficients::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("tangent"));
    }

    #[test]
    fn drag_jacobian_matches_finite_differences() {
        let air = AirProperties::default();
        let coeffs = DragCoefficients::default();
        let radius = 1.2e-5;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let t = Vector3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
            .normalize();
            let w = Vector3::new(
                rng.random_range(-30.0..30.0),
                rng.random_range(-30.0..30.0),
                rng.random_range(-30.0..30.0),
            );
            let jac = drag_force_jacobian(w, t, radius, &air, &coeffs);
            let h = 1e-6 * w.norm().max(1.0);
            for c in 0..3 {
                let mut dw = Vector3::zeros();
                dw[c] = h;
                let fp = drag_line_force_unchecked(w + dw, t, radius, &air, &coeffs);
                let fm = drag_line_force_unchecked(w - dw, t, radius, &air, &coeffs);
                let fd = (fp - fm) / (2.0 * h);
                for r in 0..3 {
                    assert_abs_diff_eq!(jac[(r, c)], fd[r], epsilon = 1e-5 * jac.norm().max(1e-6));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn drag_is_odd_in_relative_velocity(
            wx in -50.0f64..50.0, wy in -50.0f64..50.0, wz in -50.0f64..50.0,
            tx in -1.0f64..1.0, ty in -1.0f64..1.0, tz in 0.1f64..1.0,
        ) {
            let t = Vector3::new(tx, ty, tz).normalize();
            let w = Vector3::new(wx, wy, wz);
            let air = AirProperties::default();
            let coeffs = DragCoefficients::default();
            let f_pos = drag_line_force_unchecked(w, t, 1e-5, &air, &coeffs);
            let f_neg = drag_line_force_unchecked(-w, t, 1e-5, &air, &coeffs);
            prop_assert!((f_pos + f_neg).norm() <= 1e-12 * f_pos.norm().max(1e-300));
        }
    }
}
