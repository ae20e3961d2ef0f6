//! Independent matrix-representation oracle.
//!
//! Cl(1,3) complexifies to the Dirac algebra C(4); mapping each basis blade
//! to the corresponding product of Dirac gamma matrices gives an algebra
//! homomorphism that checks the blade-bitmask product tables from outside.

use num_complex::Complex64;

use super::multivector::Multivector;

/// Dense 4x4 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4(pub [[Complex64; 4]; 4]);

impl CMat4 {
    pub const fn zero() -> CMat4 {
        CMat4([[Complex64::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> CMat4 {
        let mut m = CMat4::zero();
        for i in 0..4 {
            m.0[i][i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn mul(&self, rhs: &CMat4) -> CMat4 {
        let mut out = CMat4::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMat4) -> CMat4 {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> CMat4 {
        let mut out = *self;
        for row in &mut out.0 {
            for c in row {
                *c *= s;
            }
        }
        out
    }

    /// Max absolute entry difference.
    pub fn distance(&self, rhs: &CMat4) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - rhs.0[i][j]).norm());
            }
        }
        d
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dirac representation: g0 = diag(1,1,-1,-1), g_i off-diagonal with Pauli
/// blocks. Satisfies g_mu g_nu + g_nu g_mu = 2 eta_mu_nu.
fn dirac_gamma(mu: usize) -> CMat4 {
    let o = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match mu {
        0 => CMat4([
            [one, o, o, o],
            [o, one, o, o],
            [o, o, -one, o],
            [o, o, o, -one],
        ]),
        1 => CMat4([
            [o, o, o, one],
            [o, o, one, o],
            [o, -one, o, o],
            [-one, o, o, o],
        ]),
        2 => CMat4([
            [o, o, o, -i],
            [o, o, i, o],
            [o, i, o, o],
            [-i, o, o, o],
        ]),
        3 => CMat4([
            [o, o, one, o],
            [o, o, o, -one],
            [-one, o, o, o],
            [o, one, o, o],
        ]),
        _ => panic!("gamma index out of range: {mu}"),
    }
}

/// Matrix image of a basis blade: the product of Dirac gammas for each set
/// bit, ascending.
fn blade_matrix(mask: usize) -> CMat4 {
    let mut m = CMat4::identity();
    for mu in 0..4 {
        if mask & (1 << mu) != 0 {
            m = m.mul(&dirac_gamma(mu));
        }
    }
    m
}

/// Algebra homomorphism `Cl(1,3) -> C(4)`: matrix_rep(ab) = matrix_rep(a) * matrix_rep(b).
pub fn matrix_rep(m: &Multivector) -> CMat4 {
    let mut out = CMat4::zero();
    for (mask, &coeff) in m.0.iter().enumerate() {
        if coeff != 0.0 {
            out = out.add(&blade_matrix(mask).scale(coeff));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_signature() {
        assert_eq!(matrix_rep(&Multivector::ONE), CMat4::identity());
        let g0 = matrix_rep(&Multivector::gamma(0));
        assert!(g0.mul(&g0).distance(&CMat4::identity()) <= 1e-15);
        for mu in 1..4 {
            let g = matrix_rep(&Multivector::gamma(mu));
            assert!(g.mul(&g).distance(&CMat4::identity().scale(-1.0)) <= 1e-15);
        }
    }

    #[test]
    fn dirac_anticommutators() {
        for mu in 0..4 {
            for nu in 0..4 {
                let a = dirac_gamma(mu).mul(&dirac_gamma(nu));
                let b = dirac_gamma(nu).mul(&dirac_gamma(mu));
                let expected = if mu == nu {
                    CMat4::identity().scale(2.0 * super::super::multivector::METRIC[mu])
                } else {
                    CMat4::zero()
                };
                assert!(a.add(&b).distance(&expected) <= 1e-15);
            }
        }
    }

    #[test]
    fn confirms_boost_plane_annihilator() {
        // (1 + g0g1)(1 - g0g1) = 0, checked through the oracle
        let b = Multivector::gamma(0) * Multivector::gamma(1);
        let lhs = matrix_rep(&(Multivector::ONE + b)).mul(&matrix_rep(&(Multivector::ONE - b)));
        assert!(lhs.distance(&CMat4::zero()) <= 1e-15);
    }
}
