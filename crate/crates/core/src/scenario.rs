//! Declarative scenario parameters: the JSON-facing presets that configure
//! verification runs.
//!
//! Bivector planes are given as six coefficients in blade-bitmask order:
//! `[g01, g02, g12, g03, g13, g23]`.

use serde::{Deserialize, Serialize};

use crate::algebra::Multivector;
use crate::connection::{levi_civita_connection, ConnectionField, TetradField};
use crate::dirac::SpinorField;
use crate::error::FieldError;
use crate::field::{Differentiation, EventGrid, MultivectorField};
use crate::gauge::{AffinePhase, RotorField};

pub const BIVECTOR_MASKS: [usize; 6] = [0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100];

pub fn bivector_from_coeffs(coeffs: &[f64; 6]) -> Multivector {
    let mut out = Multivector::ZERO;
    for (c, mask) in coeffs.iter().zip(BIVECTOR_MASKS) {
        out += Multivector::from_blade(mask, *c);
    }
    out
}

/// Uniform grid specification.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GridSpec {
    pub origin: [f64; 4],
    pub spacing: f64,
    pub extents: [usize; 4],
}

impl GridSpec {
    pub fn build(&self) -> Result<EventGrid, FieldError> {
        EventGrid::new(self.origin, self.spacing, self.extents)
    }
}

/// Named tetrad presets.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum TetradSpec {
    Cartesian,
    Rotating { omega: f64 },
}

impl Default for TetradSpec {
    fn default() -> Self {
        TetradSpec::Cartesian
    }
}

impl TetradSpec {
    pub fn build(&self) -> TetradField {
        match self {
            TetradSpec::Cartesian => TetradField::cartesian(),
            TetradSpec::Rotating { omega } => TetradField::rotating(*omega),
        }
    }
}

/// Named connection presets or an explicit constant coefficient table
/// omega_a^{bc}.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum ConnectionSpec {
    Zero,
    /// The deterministic constant bivector table used by the shipped
    /// covariance scenarios.
    Sample,
    /// Torsion-free connection computed from the tetrad's structure
    /// coefficients.
    LeviCivita,
    /// Constant coefficients, antisymmetric in the last two indices.
    Coefficients { table: Vec<Vec<Vec<f64>>> },
}

impl Default for ConnectionSpec {
    fn default() -> Self {
        ConnectionSpec::Zero
    }
}

impl ConnectionSpec {
    pub fn build(&self, tetrad: &TetradField) -> Result<ConnectionField, String> {
        match self {
            ConnectionSpec::Zero => Ok(ConnectionField::zero()),
            ConnectionSpec::Sample => {
                let mut coeffs = [[[0.0; 4]; 4]; 4];
                coeffs[0][1][2] = 0.4;
                coeffs[0][2][1] = -0.4;
                coeffs[1][1][0] = 0.3;
                coeffs[1][0][1] = -0.3;
                Ok(ConnectionField::from_constant_coefficients(tetrad, coeffs))
            }
            ConnectionSpec::LeviCivita => {
                Ok(levi_civita_connection(tetrad, Differentiation::Analytic))
            }
            ConnectionSpec::Coefficients { table } => {
                let mut coeffs = [[[0.0; 4]; 4]; 4];
                for a in 0..4 {
                    for b in 0..4 {
                        for c in 0..4 {
                            coeffs[a][b][c] = *table
                                .get(a)
                                .and_then(|x| x.get(b))
                                .and_then(|x| x.get(c))
                                .ok_or("connection table must be 4x4x4")?;
                            if coeffs[a][b][c] != -*table
                                .get(a)
                                .and_then(|x| x.get(c))
                                .and_then(|x| x.get(b))
                                .ok_or("connection table must be 4x4x4")?
                            {
                                return Err(format!(
                                    "connection coefficients must satisfy omega_a^bc = -omega_a^cb (violated at [{a}][{b}][{c}])"
                                ));
                            }
                        }
                    }
                }
                Ok(ConnectionField::from_constant_coefficients(tetrad, coeffs))
            }
        }
    }
}

/// Rotor field: a fixed bivector plane with an affine phase,
/// R(x) = exp(phi(x) plane / 2).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RotorSpec {
    pub plane: [f64; 6],
    pub phase: AffinePhase,
}

impl Default for RotorSpec {
    fn default() -> Self {
        // the shipped local rotation: R = exp(0.3 x1 g2 g1 / 2)
        RotorSpec {
            plane: [0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
            phase: AffinePhase {
                linear: [0.0, 0.3, 0.0, 0.0],
                constant: 0.0,
            },
        }
    }
}

impl RotorSpec {
    pub fn build(&self) -> Result<RotorField, String> {
        RotorField::exp_plane(bivector_from_coeffs(&self.plane), self.phase)
            .map_err(|e| e.to_string())
    }
}

/// Spinor presets.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum SpinorSpec {
    RestPlaneWave,
    /// Constant even multivector, 16 blade coefficients.
    Constant { coeffs: Vec<f64> },
}

impl Default for SpinorSpec {
    fn default() -> Self {
        SpinorSpec::RestPlaneWave
    }
}

impl SpinorSpec {
    pub fn build(&self, mass: f64) -> Result<SpinorField, String> {
        match self {
            SpinorSpec::RestPlaneWave => Ok(SpinorField::rest_plane_wave(mass)),
            SpinorSpec::Constant { coeffs } => {
                if coeffs.len() != 16 {
                    return Err(format!(
                        "constant spinor needs 16 blade coefficients, got {}",
                        coeffs.len()
                    ));
                }
                let mut c = [0.0; 16];
                c.copy_from_slice(coeffs);
                SpinorField::constant(Multivector(c)).map_err(|e| e.to_string())
            }
        }
    }
}

/// Electromagnetic field presets for dumps and residual runs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum FieldSpec {
    Zero,
    Coulomb { q: f64 },
    BoostedCoulomb { q: f64, v: f64 },
    LienardWiechert { q: f64, velocity: [f64; 3] },
    /// Constant multivector, 16 blade coefficients.
    Constant { coeffs: Vec<f64> },
}

impl FieldSpec {
    pub fn build(&self) -> Result<MultivectorField, String> {
        match self {
            FieldSpec::Zero => Ok(MultivectorField::zero()),
            FieldSpec::Coulomb { q } => Ok(crate::em::coulomb_field(*q)),
            FieldSpec::BoostedCoulomb { q, v } => {
                crate::em::boosted_coulomb_closed_form(*q, *v).map_err(|e| e.to_string())
            }
            FieldSpec::LienardWiechert { q, velocity } => {
                crate::em::lienard_wiechert_uniform(*q, *velocity).map_err(|e| e.to_string())
            }
            FieldSpec::Constant { coeffs } => {
                if coeffs.len() != 16 {
                    return Err(format!(
                        "constant field needs 16 blade coefficients, got {}",
                        coeffs.len()
                    ));
                }
                let mut c = [0.0; 16];
                c.copy_from_slice(coeffs);
                Ok(MultivectorField::constant(Multivector(c)))
            }
        }
    }
}
