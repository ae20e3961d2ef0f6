//! Rotors: even unit multivectors acting by the sandwich `R a R~`.

use serde::{Deserialize, Serialize};

use super::multivector::Multivector;
use crate::error::AlgebraError;

/// Tolerance on the unit constraint `R R~ = 1`.
pub const ROTOR_UNIT_TOL: f64 = 1e-10;

/// Element of Spin+(1,3): even multivector with `R R~ = 1`.
///
/// The inverse of a unit rotor is its reverse; the implementation assumes
/// unit rotors throughout and enforces it at construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rotor(Multivector);

impl Rotor {
    pub const IDENTITY: Rotor = Rotor(Multivector::ONE);

    /// Validates the even-grade and unit constraints.
    pub fn try_new(value: Multivector) -> Result<Rotor, AlgebraError> {
        if !value.is_even(1e-12) {
            return Err(AlgebraError::NotEven {
                odd_norm: (value - even_part(&value)).norm(),
            });
        }
        let unit_defect = (value.geometric(&value.reverse()) - Multivector::ONE).norm();
        if unit_defect > ROTOR_UNIT_TOL {
            return Err(AlgebraError::NotUnitRotor { defect: unit_defect });
        }
        Ok(Rotor(value))
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    pub fn into_multivector(self) -> Multivector {
        self.0
    }

    pub fn reverse(&self) -> Rotor {
        Rotor(self.0.reverse())
    }

    /// Sandwich action `R a R~`; preserves grades and the scalar product.
    pub fn sandwich(&self, a: &Multivector) -> Multivector {
        self.0.geometric(a).geometric(&self.0.reverse())
    }

    pub fn compose(&self, other: &Rotor) -> Rotor {
        Rotor(self.0.geometric(&other.0))
    }
}

impl std::ops::Neg for Rotor {
    type Output = Rotor;
    fn neg(self) -> Rotor {
        Rotor(-self.0)
    }
}

fn even_part(m: &Multivector) -> Multivector {
    m.grade_project(0) + m.grade_project(2) + m.grade_project(4)
}

/// Exponential of a bivector, always a rotor.
///
/// When `B^2` is a pure scalar (every boost/rotation plane used here), the
/// closed form applies:
///   B^2 = l > 0:  cosh(sqrt l) + sinh(sqrt l)/sqrt l * B
///   B^2 = l < 0:  cos(sqrt -l) + sin(sqrt -l)/sqrt -l * B
///   B^2 = 0:      1 + B
/// Otherwise falls back to a scaled-and-squared 24-term power series.
pub fn exp_bivector(b: &Multivector) -> Result<Rotor, AlgebraError> {
    if !b.is_grade(2, 1e-12) {
        return Err(AlgebraError::NotBivector { input_norm: b.norm() });
    }
    let b2 = b.geometric(b);
    let quartic = b2.grade_project(4).norm();
    let value = if quartic <= 1e-14 * (1.0 + b2.norm()) {
        let l = b2.scalar_part();
        if l > 0.0 {
            let r = l.sqrt();
            Multivector::scalar(r.cosh()) + b.scale(r.sinh() / r)
        } else if l < 0.0 {
            let r = (-l).sqrt();
            Multivector::scalar(r.cos()) + b.scale(r.sin() / r)
        } else {
            Multivector::ONE + *b
        }
    } else {
        exp_series(b)
    };
    Rotor::try_new(value)
}

/// Power series with scaling and squaring; 24 terms at norm <= 1/2 is far
/// below f64 resolution.
fn exp_series(b: &Multivector) -> Multivector {
    let mut halvings = 0u32;
    let mut scaled = *b;
    while scaled.norm() > 0.5 {
        scaled = scaled.scale(0.5);
        halvings += 1;
    }
    let mut sum = Multivector::ONE;
    let mut term = Multivector::ONE;
    for k in 1..=24 {
        term = term.geometric(&scaled).scale(1.0 / k as f64);
        sum += term;
    }
    for _ in 0..halvings {
        sum = sum.geometric(&sum);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Multivector, b: &Multivector, tol: f64) -> bool {
        (*a - *b).max_abs_coeff() <= tol
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let r = exp_bivector(&Multivector::ZERO).unwrap();
        assert_eq!(r, Rotor::IDENTITY);
    }

    #[test]
    fn exp_rejects_non_bivector() {
        assert!(exp_bivector(&Multivector::gamma(0)).is_err());
    }

    #[test]
    fn boost_rotor_closed_form() {
        // chi = atanh(0.6): R = cosh(chi/2) + sinh(chi/2) g1 g0
        let chi = 0.6f64.atanh();
        let plane = Multivector::gamma(1) * Multivector::gamma(0);
        let r = exp_bivector(&plane.scale(chi / 2.0)).unwrap();
        let expected =
            Multivector::scalar((chi / 2.0).cosh()) + plane.scale((chi / 2.0).sinh());
        assert!(close(r.as_multivector(), &expected, 1e-14));

        // sandwiching g0 yields 1.25 g0 + 0.75 g1
        let boosted = r.sandwich(&Multivector::gamma(0));
        let expected = Multivector::gamma(0).scale(1.25) + Multivector::gamma(1).scale(0.75);
        assert!(close(&boosted, &expected, 1e-12));
    }

    #[test]
    fn rotation_rotor_action() {
        // exp((pi/4) g2g1) rotates g1 by pi/2 in the (1,2) plane: g1 -> -g2
        let plane = Multivector::gamma(2) * Multivector::gamma(1);
        let quarter = exp_bivector(&plane.scale(std::f64::consts::FRAC_PI_4)).unwrap();
        let rotated = quarter.sandwich(&Multivector::gamma(1));
        assert!(close(&rotated, &-Multivector::gamma(2), 1e-14));

        // exp((pi/2) g2g1) is a half-turn of the plane: g1 -> -g1
        let half = exp_bivector(&plane.scale(std::f64::consts::FRAC_PI_2)).unwrap();
        let turned = half.sandwich(&Multivector::gamma(1));
        assert!(close(&turned, &-Multivector::gamma(1), 1e-14));
    }

    #[test]
    fn series_path_matches_closed_form() {
        let plane = (Multivector::gamma(1) * Multivector::gamma(0)).scale(0.37);
        let closed = exp_bivector(&plane).unwrap();
        let series = exp_series(&plane);
        assert!(close(closed.as_multivector(), &series, 1e-13));
    }

    #[test]
    fn sandwich_identity_and_sign_cover() {
        let a = Multivector::gamma(0) + (Multivector::gamma(1) * Multivector::gamma(2)).scale(0.5);
        assert!(close(&Rotor::IDENTITY.sandwich(&a), &a, 0.0));
        // R and -R induce the same sandwich
        let r = exp_bivector(&(Multivector::gamma(2) * Multivector::gamma(1)).scale(0.4)).unwrap();
        assert!(close(&r.sandwich(&a), &(-r).sandwich(&a), 1e-14));
    }

    #[test]
    fn rotor_rejects_bad_inputs() {
        assert!(Rotor::try_new(Multivector::gamma(0)).is_err());
        assert!(Rotor::try_new(Multivector::scalar(2.0)).is_err());
    }
}
