//! Active local Lorentz rotations of fields, the non-commutation defect of
//! the flat Dirac operator with local rotors, the gauge-model Maxwell
//! identity, and the affine-space transformed vector derivative check.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{exp_bivector, Multivector, Rotor};
use crate::connection::{active_gauge_transform, ConnectionField, TetradField};
use crate::error::{AlgebraError, FieldError};
use crate::field::{AnalyticField, Differentiation, Event, FieldResult, MultivectorField};

type RotorFn = Arc<dyn Fn(&Event) -> Rotor + Send + Sync>;
type RotorPartialFn = Arc<dyn Fn(usize, &Event) -> Multivector + Send + Sync>;

/// Affine phase function phi(x) = linear . x + constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffinePhase {
    pub linear: [f64; 4],
    pub constant: f64,
}

impl AffinePhase {
    pub fn constant(value: f64) -> AffinePhase {
        AffinePhase {
            linear: [0.0; 4],
            constant: value,
        }
    }

    pub fn eval(&self, e: &Event) -> f64 {
        self.constant + (0..4).map(|mu| self.linear[mu] * e[mu]).sum::<f64>()
    }
}

/// Rotor-valued field R(x), pointwise in Spin+(1,3), with analytic
/// coordinate derivatives for the shipped presets.
#[derive(Clone)]
pub struct RotorField {
    value: RotorFn,
    partial: Option<RotorPartialFn>,
    /// Bivector generator G with R = exp(G), when known; enables the
    /// formula routes that need the exponent explicitly.
    generator: Option<AnalyticField>,
}

impl std::fmt::Debug for RotorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RotorField")
            .field("has_analytic_derivatives", &self.partial.is_some())
            .field("has_generator", &self.generator.is_some())
            .finish()
    }
}

impl RotorField {
    pub fn identity() -> RotorField {
        RotorField::exp_plane(
            Multivector::gamma(2) * Multivector::gamma(1),
            AffinePhase::constant(0.0),
        )
        .expect("zero phase exponentiates")
    }

    pub fn constant(r: Rotor) -> RotorField {
        RotorField {
            value: Arc::new(move |_| r),
            partial: Some(Arc::new(|_, _| Multivector::ZERO)),
            generator: None,
        }
    }

    /// R(x) = exp(phi(x) plane / 2) for a fixed bivector plane and affine
    /// phase. Since the plane commutes with itself,
    /// d_mu R = (a_mu / 2) plane R exactly.
    pub fn exp_plane(plane: Multivector, phase: AffinePhase) -> Result<RotorField, AlgebraError> {
        if !plane.is_grade(2, 1e-12) {
            return Err(AlgebraError::NotBivector {
                input_norm: plane.norm(),
            });
        }
        let value = {
            move |e: &Event| -> Rotor {
                exp_bivector(&plane.scale(phase.eval(e) / 2.0))
                    .expect("fixed-plane exponent stays a rotor")
            }
        };
        let partial = {
            move |mu: usize, e: &Event| -> Multivector {
                let r = exp_bivector(&plane.scale(phase.eval(e) / 2.0))
                    .expect("fixed-plane exponent stays a rotor");
                plane
                    .scale(phase.linear[mu] / 2.0)
                    .geometric(r.as_multivector())
            }
        };
        let generator = AnalyticField::new(move |e: &Event| Ok(plane.scale(phase.eval(e) / 2.0)))
            .with_partials(move |mu, _e| Ok(plane.scale(phase.linear[mu] / 2.0)));
        Ok(RotorField {
            value: Arc::new(value),
            partial: Some(Arc::new(partial)),
            generator: Some(generator),
        })
    }

    /// Constant boost rotor along g1 with velocity v.
    pub fn boost(v: f64) -> Result<RotorField, crate::error::FrameError> {
        if !(v.abs() < 1.0) {
            return Err(crate::error::FrameError::SuperluminalVelocity { v });
        }
        let plane = Multivector::gamma(1) * Multivector::gamma(0);
        Ok(RotorField::exp_plane(plane, AffinePhase::constant(v.atanh()))
            .expect("boost plane is a bivector"))
    }

    pub fn eval(&self, e: &Event) -> Rotor {
        (self.value)(e)
    }

    pub fn partial(&self, mu: usize, e: &Event) -> Option<Multivector> {
        self.partial.as_ref().map(|p| p(mu, e))
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.partial.is_some()
    }

    pub fn generator(&self) -> Option<&AnalyticField> {
        self.generator.as_ref()
    }

    /// The rotor as a plain differentiable multivector field.
    pub fn to_analytic_field(&self) -> AnalyticField {
        let value = self.value.clone();
        let base = AnalyticField::new(move |e: &Event| Ok(value(e).into_multivector()));
        match &self.partial {
            Some(p) => {
                let p = p.clone();
                base.with_partials(move |mu, e| Ok(p(mu, e)))
            }
            None => base,
        }
    }

    /// Pointwise unit-constraint defect over probe events.
    pub fn unit_defect(&self, events: &[Event]) -> f64 {
        events
            .iter()
            .map(|e| {
                let r = self.eval(e).into_multivector();
                (r.geometric(&r.reverse()) - Multivector::ONE).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Pointwise active rotation F -> R F R~ as a field transform; composes
/// analytic derivatives by the product rule when both sides have them.
pub fn active_rotate_field(rotor: &RotorField, field: &MultivectorField) -> MultivectorField {
    let value = {
        let rotor = rotor.clone();
        let field = field.clone();
        move |e: &Event| -> FieldResult {
            let r = rotor.eval(e);
            Ok(r.sandwich(&field.eval(e)?))
        }
    };
    let mut out = AnalyticField::new(value);
    if let Some(src) = field.as_analytic() {
        if src.has_partials() && rotor.has_analytic_derivatives() {
            let rotor = rotor.clone();
            let src = src.clone();
            out = out.with_partials(move |mu, e| {
                let r = rotor.eval(e).into_multivector();
                let dr = rotor.partial(mu, e).expect("checked analytic");
                let f = src.eval(e)?;
                let df = src.partial(mu, e, Differentiation::Analytic)?;
                Ok(dr.geometric(&f).geometric(&r.reverse())
                    + r.geometric(&df).geometric(&r.reverse())
                    + r.geometric(&f).geometric(&dr.reverse()))
            });
        }
        if src.singular_distance(&[0.0; 4]).is_some() {
            let src = src.clone();
            out = out.with_singular_distance(move |e| src.singular_distance(e).unwrap());
        }
    }
    MultivectorField::Analytic(out)
}

/// Pointwise norm of d(R F R~) - R (dF) R~: zero for constant rotors,
/// generically nonzero for local rotor fields.
pub fn noncommutation_defect_at(
    rotor: &RotorField,
    field: &MultivectorField,
    e: &Event,
    diff: Differentiation,
) -> Result<f64, FieldError> {
    let rotated = active_rotate_field(rotor, field);
    let lhs = crate::em::dirac_flat_at(&rotated, e, diff)?;
    let rhs = rotor.eval(e).sandwich(&crate::em::dirac_flat_at(field, e, diff)?);
    Ok((lhs - rhs).norm())
}

/// Both routes of the gauge-model Maxwell identity at one event.
#[derive(Clone, Debug)]
pub struct GaugeDiracResidual {
    /// The transported operator applied to the transported field, minus the
    /// transported source.
    pub direct: Multivector,
    /// The fiducial residual, sandwiched.
    pub sandwiched: Multivector,
}

impl GaugeDiracResidual {
    pub fn identity_error(&self) -> f64 {
        (self.direct - self.sandwiched).norm()
    }
}

/// Evaluates the transported Maxwell residual two ways in the fiducial
/// (flat Cartesian, zero-connection) gauge:
///
/// direct:     sum_a theta'^a [ d_{e_a} (R F R~) + 1/2 [omega'_{e_a}, R F R~] ] - R J R~
/// sandwiched: R (dF - J) R~
///
/// with theta'^a = R g^a R~ and omega' the actively transformed (zero)
/// connection. The two agree identically; the defect measures how far the
/// numerics drift.
pub fn gauge_dirac_residual_at(
    rotor: &RotorField,
    field: &MultivectorField,
    current: &MultivectorField,
    e: &Event,
    diff: Differentiation,
) -> Result<GaugeDiracResidual, FieldError> {
    let tetrad = TetradField::cartesian();
    let omega_primed = active_gauge_transform(rotor, &ConnectionField::zero(), &tetrad, diff);
    let rotated = active_rotate_field(rotor, field);
    let rotated_analytic = rotated
        .as_analytic()
        .expect("active rotation yields an analytic field");

    let r = rotor.eval(e);
    let rf = rotated_analytic.eval(e)?;
    let mut direct = Multivector::ZERO;
    for a in 0..4 {
        let theta_primed = r.sandwich(&Multivector::gamma_upper(a));
        let pfaff = rotated_analytic.partial(a, e, diff)?;
        let w = omega_primed.bivector(a, e);
        let nabla = pfaff + crate::connection::commutator_half(&w, &rf);
        direct += theta_primed.geometric(&nabla);
    }
    direct = direct - r.sandwich(&current.eval(e)?);

    let fiducial = crate::em::dirac_flat_at(field, e, diff)? - current.eval(e)?;
    Ok(GaugeDiracResidual {
        direct,
        sandwiched: r.sandwich(&fiducial),
    })
}

/// Report of the affine-space check: a constant rotor acting as the
/// diffeomorphism x' = R x R~ with F'(x') = R F(x) R~ and the primed vector
/// derivative taken along the primed directions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AffineCheckReport {
    /// max |d'F'(x') - J'(x')| over the probe events
    pub max_deviation: f64,
    /// max |e'^mu . e'_nu - delta| (duality of the primed basis)
    pub duality_defect: f64,
    /// max |coords of x' in the primed basis - coords of x| (exact identity)
    pub coordinate_defect: f64,
}

/// Verifies that with x' = R x R~, F'(x') = R F(x) R~, the primed vector
/// derivative (finite differences along the primed directions e'_mu,
/// contracted with e'^mu) satisfies d'F' = J' wherever dF = J.
pub fn affine_vector_derivative_check(
    rotor: &Rotor,
    field: &MultivectorField,
    current: &MultivectorField,
    events: &[Event],
    fd_step: f64,
) -> Result<AffineCheckReport, FieldError> {
    let r = *rotor;
    let rrev = r.reverse();

    // primed frame vectors and duals
    let primed_lower: [Multivector; 4] = std::array::from_fn(|mu| r.sandwich(&Multivector::gamma(mu)));
    let primed_upper: [Multivector; 4] =
        std::array::from_fn(|mu| r.sandwich(&Multivector::gamma_upper(mu)));

    let mut duality_defect = 0.0f64;
    for mu in 0..4 {
        for nu in 0..4 {
            let delta = if mu == nu { 1.0 } else { 0.0 };
            duality_defect = duality_defect
                .max((primed_upper[mu].scalar_product(&primed_lower[nu]) - delta).abs());
        }
    }

    // F' as a field of the primed position: F'(y) = R F(R~ y R) R~
    let f_primed = |y: &Event| -> FieldResult {
        let y_vec = Multivector::vector(*y);
        let x_vec = rrev.sandwich(&y_vec);
        let x = x_vec.vector_part();
        Ok(r.sandwich(&field.eval(&x)?))
    };

    let mut max_deviation = 0.0f64;
    let mut coordinate_defect = 0.0f64;
    for e in events {
        // x' = R x R~, then d'F'(x') vs J'(x')
        let x_vec = Multivector::vector(*e);
        let xp = r.sandwich(&x_vec).vector_part();

        // Eq-level sanity: coordinates of x' in the primed basis equal x
        for mu in 0..4 {
            let coord = primed_upper[mu].scalar_product(&Multivector::vector(xp));
            coordinate_defect = coordinate_defect.max((coord - e[mu]).abs());
        }

        let mut derivative = Multivector::ZERO;
        for mu in 0..4 {
            let dir = primed_lower[mu].vector_part();
            let fwd: Event = std::array::from_fn(|i| xp[i] + fd_step * dir[i]);
            let bwd: Event = std::array::from_fn(|i| xp[i] - fd_step * dir[i]);
            let diff_mv = (f_primed(&fwd)? - f_primed(&bwd)?).scale(0.5 / fd_step);
            derivative += primed_upper[mu].geometric(&diff_mv);
        }
        let j_primed = r.sandwich(&current.eval(e)?);
        max_deviation = max_deviation.max((derivative - j_primed).norm());
    }

    Ok(AffineCheckReport {
        max_deviation,
        duality_defect,
        coordinate_defect,
    })
}

/// Summary report for the rotor-gauge checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaugeReport {
    pub defect_linf: f64,
    pub defect_l2: f64,
    pub gauge_identity_err: f64,
    pub appendix_deviation: f64,
}
