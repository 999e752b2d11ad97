//! Filament material inputs and derived section parameters.

use serde::{Deserialize, Serialize};

use super::FiberError;

/// Line density of one dtex (gram per 10 km) in kg/m.
pub const KG_PER_M_PER_DTEX: f64 = 1.0e-7;

/// Raw material inputs as varied by the experiment design.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialInput {
    /// Elastic modulus [Pa].
    pub e_modulus: f64,
    /// Bulk density of the polymer [kg/m^3].
    pub density: f64,
    /// Line density (titer) [kg/m].
    pub titer: f64,
}

impl MaterialInput {
    pub fn new(e_modulus: f64, density: f64, titer: f64) -> Self {
        Self {
            e_modulus,
            density,
            titer,
        }
    }

    /// Convenience constructor taking the titer in dtex.
    pub fn from_dtex(e_modulus: f64, density: f64, titer_dtex: f64) -> Self {
        Self::new(e_modulus, density, titer_dtex * KG_PER_M_PER_DTEX)
    }

    pub fn titer_dtex(&self) -> f64 {
        self.titer / KG_PER_M_PER_DTEX
    }

    pub fn validate(&self) -> Result<(), FiberError> {
        for (field, value) in [
            ("e_modulus", self.e_modulus),
            ("density", self.density),
            ("titer", self.titer),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(FiberError::Validation {
                    field,
                    message: format!("must be finite and > 0, got {value}"),
                });
            }
        }
        Ok(())
    }
}

impl Default for MaterialInput {
    fn default() -> Self {
        Self::from_dtex(20.0e9, 1050.0, 3.68)
    }
}

/// Section parameters of the string model, derived from a circular
/// cross-section of constant radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Line density rho*A [kg/m]; equals the titer.
    pub line_density: f64,
    /// Bending stiffness E*I [N*m^2].
    pub bending_stiffness: f64,
    /// Fiber radius [m].
    pub radius: f64,
}

/// Derive the section parameters from the raw inputs:
/// `A = titer / density`, `R = sqrt(A / pi)`, `EI = E * pi * R^4 / 4`.
pub fn derive_material(input: &MaterialInput) -> Result<MaterialParams, FiberError> {
    input.validate()?;
    let area = input.titer / input.density;
    let radius = (area / std::f64::consts::PI).sqrt();
    let second_moment = std::f64::consts::PI * radius.powi(4) / 4.0;
    Ok(MaterialParams {
        line_density: input.titer,
        bending_stiffness: input.e_modulus * second_moment,
        radius,
    })
}
