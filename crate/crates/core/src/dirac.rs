//! Dirac-Hestenes spinor fields, the spin-Dirac operator, the DH equation
//! with torsion covector, the DH Lagrangian, and the gauge-covariance
//! machinery of the active rotation checks.

use serde::{Deserialize, Serialize};

use crate::algebra::Multivector;
use crate::connection::{
    active_gauge_transform, pfaff_derivative, spinor_derivative, torsion_at, ConnectionField,
    Direction, TetradField,
};
use crate::error::ConnectionError;
use crate::field::{AnalyticField, Differentiation, Event};
use crate::gauge::RotorField;

/// Even-grade multivector field representing a Dirac-Hestenes spinor in a
/// chosen spin coframe.
#[derive(Clone, Debug)]
pub struct SpinorField {
    field: AnalyticField,
}

impl SpinorField {
    pub fn new(field: AnalyticField) -> SpinorField {
        SpinorField { field }
    }

    /// Rest-frame plane wave psi(x) = exp(-g2 g1 m x0).
    pub fn rest_plane_wave(mass: f64) -> SpinorField {
        let plane = Multivector::gamma(2) * Multivector::gamma(1);
        let value = move |e: &Event| {
            Ok(crate::algebra::exp_bivector(&plane.scale(-mass * e[0]))
                .expect("fixed-plane exponent is a rotor")
                .into_multivector())
        };
        let partial = move |mu: usize, e: &Event| {
            if mu != 0 {
                return Ok(Multivector::ZERO);
            }
            let psi = crate::algebra::exp_bivector(&plane.scale(-mass * e[0]))
                .expect("fixed-plane exponent is a rotor")
                .into_multivector();
            Ok(plane.scale(-mass).geometric(&psi))
        };
        SpinorField {
            field: AnalyticField::new(value).with_partials(partial),
        }
    }

    /// Constant even multivector.
    pub fn constant(psi: Multivector) -> Result<SpinorField, ConnectionError> {
        if !psi.is_even(1e-12) {
            let odd = psi - even_part(&psi);
            return Err(ConnectionError::OddSpinor { odd_norm: odd.norm() });
        }
        Ok(SpinorField {
            field: AnalyticField::constant(psi),
        })
    }

    /// Left action psi' = R psi (active transform of the representative).
    pub fn left_multiplied(rotor: &RotorField, psi: &SpinorField) -> SpinorField {
        let value = {
            let rotor = rotor.clone();
            let psi = psi.field.clone();
            move |e: &Event| Ok(rotor.eval(e).into_multivector().geometric(&psi.eval(e)?))
        };
        let partial = {
            let rotor = rotor.clone();
            let psi = psi.field.clone();
            move |mu: usize, e: &Event| {
                let r = rotor.eval(e).into_multivector();
                let dr = rotor
                    .partial(mu, e)
                    .ok_or(crate::error::FieldError::MissingAnalyticDerivatives)?;
                let p = psi.eval(e)?;
                let dp = psi.partial(mu, e, Differentiation::Analytic)?;
                Ok(dr.geometric(&p) + r.geometric(&dp))
            }
        };
        SpinorField {
            field: AnalyticField::new(value).with_partials(partial),
        }
    }

    /// Right action psi' = psi R~ (passive change of spin coframe).
    pub fn right_multiplied_reverse(rotor: &RotorField, psi: &SpinorField) -> SpinorField {
        let value = {
            let rotor = rotor.clone();
            let psi = psi.field.clone();
            move |e: &Event| {
                Ok(psi
                    .eval(e)?
                    .geometric(&rotor.eval(e).into_multivector().reverse()))
            }
        };
        let partial = {
            let rotor = rotor.clone();
            let psi = psi.field.clone();
            move |mu: usize, e: &Event| {
                let r = rotor.eval(e).into_multivector();
                let dr = rotor
                    .partial(mu, e)
                    .ok_or(crate::error::FieldError::MissingAnalyticDerivatives)?;
                let p = psi.eval(e)?;
                let dp = psi.partial(mu, e, Differentiation::Analytic)?;
                Ok(dp.geometric(&r.reverse()) + p.geometric(&dr.reverse()))
            }
        };
        SpinorField {
            field: AnalyticField::new(value).with_partials(partial),
        }
    }

    pub fn field(&self) -> &AnalyticField {
        &self.field
    }

    pub fn eval(&self, e: &Event) -> Result<Multivector, ConnectionError> {
        Ok(self.field.eval(e)?)
    }
}

fn even_part(m: &Multivector) -> Multivector {
    m.grade_project(0) + m.grade_project(2) + m.grade_project(4)
}

/// Spin-Dirac operator: d^(s) psi = theta^a (pfaff_{e_a} psi + 1/2 omega_{e_a} psi),
/// contracted over the tetrad's own frame.
pub fn spin_dirac_operator(
    psi: &SpinorField,
    tetrad: &TetradField,
    omega: &ConnectionField,
    e: &Event,
    diff: Differentiation,
) -> Result<Multivector, ConnectionError> {
    let mut out = Multivector::ZERO;
    for a in 0..4 {
        let nabla = spinor_derivative(&Direction::Frame(a), &psi.field, tetrad, omega, e, diff)?;
        out += tetrad.coframe_upper(a, e).geometric(&nabla);
    }
    Ok(out)
}

/// The actively transported spin-Dirac operator: the rotated coframe
/// contracts derivatives taken along the original frame directions with the
/// transformed connection,
///
///   D' chi = sum_a (R theta^a R~) [ pfaff_{e_a} chi + 1/2 omega'_{e_a} chi ].
///
/// With omega' from `active_gauge_transform`, D'(R psi) = R d^(s) psi.
pub fn gauge_spin_dirac(
    rotor: &RotorField,
    chi: &SpinorField,
    tetrad: &TetradField,
    omega_transformed: &ConnectionField,
    e: &Event,
    diff: Differentiation,
) -> Result<Multivector, ConnectionError> {
    let r = rotor.eval(e);
    let chi_value = chi.eval(e)?;
    let mut out = Multivector::ZERO;
    for a in 0..4 {
        let theta_primed = r.sandwich(&tetrad.coframe_upper(a, e));
        let pfaff = pfaff_derivative(&Direction::Frame(a), &chi.field, tetrad, e, diff)?;
        let nabla = pfaff + omega_transformed.bivector(a, e).geometric(&chi_value).scale(0.5);
        out += theta_primed.geometric(&nabla);
    }
    Ok(out)
}

/// Left-hand side of the Dirac-Hestenes equation with torsion covector:
///
///   d^(s) psi theta^2 theta^1 + 1/2 T psi theta^0 theta^2 theta^1 - m psi theta^0
///
/// with T = T^b_{ab} theta^a computed from the connection and the tetrad's
/// structure coefficients. `include_torsion` switches the middle term off,
/// giving the minimal-coupling form.
pub fn dh_residual(
    psi: &SpinorField,
    mass: f64,
    tetrad: &TetradField,
    omega: &ConnectionField,
    e: &Event,
    diff: Differentiation,
    include_torsion: bool,
) -> Result<Multivector, ConnectionError> {
    let p = spin_dirac_operator(psi, tetrad, omega, e, diff)?;
    let psi_value = psi.eval(e)?;
    let t0 = tetrad.coframe_upper(0, e);
    let t21 = tetrad.coframe_upper(2, e).geometric(&tetrad.coframe_upper(1, e));
    let t021 = t0.geometric(&t21);
    let mut residual = p.geometric(&t21) - psi_value.geometric(&t0).scale(mass);
    if include_torsion {
        let torsion = torsion_at(omega, tetrad, e, diff)?;
        residual += torsion
            .covector
            .geometric(&psi_value)
            .geometric(&t021)
            .scale(0.5);
    }
    Ok(residual)
}

/// Scalar DH Lagrangian density:
///
///   [ (d^(s) psi theta^0 theta^2 theta^1) . psi - m psi . psi ] |det h|
pub fn dh_lagrangian(
    psi: &SpinorField,
    mass: f64,
    tetrad: &TetradField,
    omega: &ConnectionField,
    e: &Event,
    diff: Differentiation,
) -> Result<f64, ConnectionError> {
    let p = spin_dirac_operator(psi, tetrad, omega, e, diff)?;
    let psi_value = psi.eval(e)?;
    let t021 = tetrad
        .coframe_upper(0, e)
        .geometric(&tetrad.coframe_upper(2, e))
        .geometric(&tetrad.coframe_upper(1, e));
    let kinetic = p.geometric(&t021).scalar_product(&psi_value);
    let mass_term = mass * psi_value.scalar_product(&psi_value);
    Ok((kinetic - mass_term) * tetrad.det_h(e).abs())
}

/// Transformed Lagrangian density under the active rotation
/// psi -> R psi, theta^a -> R theta^a R~, omega -> omega' (optionally left
/// untransformed to demonstrate the non-invariance):
///
///   [ (D' psi' theta^0 theta^2 theta^1) . psi' - m psi' . psi' ] |det h|
pub fn active_lagrangian_transformed(
    rotor: &RotorField,
    psi: &SpinorField,
    mass: f64,
    tetrad: &TetradField,
    omega: &ConnectionField,
    e: &Event,
    diff: Differentiation,
    transform_connection: bool,
) -> Result<f64, ConnectionError> {
    let psi_primed = SpinorField::left_multiplied(rotor, psi);
    let omega_used = if transform_connection {
        active_gauge_transform(rotor, omega, tetrad, diff)
    } else {
        omega.clone()
    };
    let d_primed = gauge_spin_dirac(rotor, &psi_primed, tetrad, &omega_used, e, diff)?;
    let psi_value = psi_primed.eval(e)?;
    let t021 = tetrad
        .coframe_upper(0, e)
        .geometric(&tetrad.coframe_upper(2, e))
        .geometric(&tetrad.coframe_upper(1, e));
    let kinetic = d_primed.geometric(&t021).scalar_product(&psi_value);
    let mass_term = mass * psi_value.scalar_product(&psi_value);
    Ok((kinetic - mass_term) * tetrad.det_h(e).abs())
}

/// Report of the active-invariance check over a set of probe events.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LagrangianInvariance {
    /// max |L' - L| with the transformed connection
    pub deviation_transformed: f64,
    /// max |L' - L| when the connection transform is deliberately omitted
    pub deviation_untransformed: f64,
}

pub fn active_gauge_lagrangian_check(
    rotor: &RotorField,
    psi: &SpinorField,
    mass: f64,
    tetrad: &TetradField,
    omega: &ConnectionField,
    events: &[Event],
    diff: Differentiation,
) -> Result<LagrangianInvariance, ConnectionError> {
    let mut dev_transformed = 0.0f64;
    let mut dev_untransformed = 0.0f64;
    for e in events {
        let original = dh_lagrangian(psi, mass, tetrad, omega, e, diff)?;
        let transformed =
            active_lagrangian_transformed(rotor, psi, mass, tetrad, omega, e, diff, true)?;
        let untransformed =
            active_lagrangian_transformed(rotor, psi, mass, tetrad, omega, e, diff, false)?;
        dev_transformed = dev_transformed.max((transformed - original).abs());
        dev_untransformed = dev_untransformed.max((untransformed - original).abs());
    }
    Ok(LagrangianInvariance {
        deviation_transformed: dev_transformed,
        deviation_untransformed: dev_untransformed,
    })
}

/// DH residual of actively transformed data in the transported bookkeeping:
/// the transported operator acts on psi' = R psi, the torsion covector is
/// that of the transformed connection (read in the rotated frame), and the
/// explicit blade factors stay those of the representative gauge.
pub fn dh_residual_gauged(
    rotor: &RotorField,
    psi: &SpinorField,
    mass: f64,
    tetrad: &TetradField,
    omega: &ConnectionField,
    e: &Event,
    diff: Differentiation,
) -> Result<Multivector, ConnectionError> {
    let psi_primed = SpinorField::left_multiplied(rotor, psi);
    let omega_primed = active_gauge_transform(rotor, omega, tetrad, diff);
    let rotated_tetrad = TetradField::rotated(rotor, tetrad);
    let p = gauge_spin_dirac(rotor, &psi_primed, tetrad, &omega_primed, e, diff)?;
    let psi_value = psi_primed.eval(e)?;
    let torsion = torsion_at(&omega_primed, &rotated_tetrad, e, diff)?;
    let t0 = tetrad.coframe_upper(0, e);
    let t21 = tetrad.coframe_upper(2, e).geometric(&tetrad.coframe_upper(1, e));
    let t021 = t0.geometric(&t21);
    let mut residual = p.geometric(&t21) - psi_value.geometric(&t0).scale(mass);
    residual += torsion
        .covector
        .geometric(&psi_value)
        .geometric(&t021)
        .scale(0.5);
    Ok(residual)
}
