//! Error types shared across the toolkit.

use thiserror::Error;

/// Contract violations in the algebra kernel.
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("multivector has odd-grade content (norm {odd_norm:.3e}) where an even element is required")]
    NotEven { odd_norm: f64 },
    #[error("rotor unit constraint R R~ = 1 violated by {defect:.3e}")]
    NotUnitRotor { defect: f64 },
    #[error("expected a pure bivector, got extra content (input norm {input_norm:.3e})")]
    NotBivector { input_norm: f64 },
}

/// Errors from frame and boost construction.
#[derive(Debug, Error)]
pub enum FrameError {
    #[error("boost velocity |v| = {v} must be < 1 (units of c)")]
    SuperluminalVelocity { v: f64 },
    #[error("matrix is not a proper orthochronous Lorentz transformation: {reason}")]
    NotLorentz { reason: String },
}

/// Errors from field evaluation and grid operations.
#[derive(Debug, Error)]
pub enum FieldError {
    #[error("field is singular at event {event:?}")]
    Singular { event: [f64; 4] },
    #[error("analytic partial derivatives requested but the field does not provide them")]
    MissingAnalyticDerivatives,
    #[error("grid of {points} points exceeds the configured budget of {budget}")]
    GridBudgetExceeded { points: usize, budget: usize },
    #[error("grid spacing must be positive, got {h}")]
    NonPositiveSpacing { h: f64 },
    #[error("expected a field of grade {expected}, found other grades (norm {off_grade_norm:.3e})")]
    WrongGrade { expected: usize, off_grade_norm: f64 },
    #[error("worldline integration aborted after {steps} steps: {reason}")]
    IntegrationAborted { steps: usize, reason: String },
}

/// Errors from tetrad/connection machinery.
#[derive(Debug, Error)]
pub enum ConnectionError {
    #[error("tetrad matrix is not invertible at event {event:?}")]
    SingularTetrad { event: [f64; 4] },
    #[error("tetrad is not orthonormal: max |h eta h^T - eta| = {defect:.3e}")]
    NotOrthonormal { defect: f64 },
    #[error("connection value must be a pure bivector (off-grade norm {off_grade_norm:.3e})")]
    NotBivectorValued { off_grade_norm: f64 },
    #[error("spinor field must be even-graded (odd norm {odd_norm:.3e})")]
    OddSpinor { odd_norm: f64 },
    #[error("input connection must be torsion free, found |T| = {torsion_norm:.3e}")]
    NotTorsionFree { torsion_norm: f64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}
