//! Multivectors of the spacetime algebra Cl(1,3).
//!
//! A multivector is stored as 16 coefficients indexed by blade bitmask:
//! bit `mu` set means the factor `g_mu` is present, factors ordered by
//! ascending index (g0 before g1 before g2 before g3). Blade 0 is the
//! scalar, blade 0b1111 is the volume element `g0 g1 g2 g3`.
//!
//! The metric is fixed to diag(+1, -1, -1, -1).

use serde::{Deserialize, Serialize};

/// Metric diagonal of Cl(1,3).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Number of basis blades.
pub const BLADE_COUNT: usize = 16;

/// Canonical blade names in bitmask order, used by CSV dumps and docs.
pub const BLADE_NAMES: [&str; BLADE_COUNT] = [
    "s", "g0", "g1", "g01", "g2", "g02", "g12", "g012", "g3", "g03", "g13", "g013", "g23", "g023",
    "g123", "g0123",
];

/// Sign of the geometric product of basis blades `a * b` under the (+,-,-,-)
/// metric. Result blade is always `a ^ b`; the sign counts transpositions
/// needed to sort the factors plus metric signs from contracted pairs.
const fn product_sign(a: u8, b: u8) -> i8 {
    let mut sign: i8 = 1;
    let mut acc = a;
    let mut nu = 0;
    while nu < 4 {
        if b & (1 << nu) != 0 {
            // factors of `acc` above index nu must be crossed
            let swaps = (acc >> (nu + 1)).count_ones();
            if swaps % 2 == 1 {
                sign = -sign;
            }
            if acc & (1 << nu) != 0 {
                // g_nu g_nu = eta_nunu
                if nu != 0 {
                    sign = -sign;
                }
                acc &= !(1 << nu);
            } else {
                acc |= 1 << nu;
            }
        }
        nu += 1;
    }
    sign
}

const fn build_cayley() -> [[i8; BLADE_COUNT]; BLADE_COUNT] {
    let mut table = [[0i8; BLADE_COUNT]; BLADE_COUNT];
    let mut i = 0;
    while i < BLADE_COUNT {
        let mut j = 0;
        while j < BLADE_COUNT {
            table[i][j] = product_sign(i as u8, j as u8);
            j += 1;
        }
        i += 1;
    }
    table
}

/// Cayley sign table: `blade_i * blade_j = CAYLEY[i][j] * blade_(i^j)`.
pub(crate) const CAYLEY: [[i8; BLADE_COUNT]; BLADE_COUNT] = build_cayley();

/// Sign of `blade * blade` (always a scalar) for the basis blade `mask`.
pub const fn blade_square_sign(mask: usize) -> i8 {
    CAYLEY[mask][mask]
}

/// Reversion sign per grade: (-1)^(k(k-1)/2).
const REVERSE_SIGN: [f64; 5] = [1.0, 1.0, -1.0, -1.0, 1.0];

/// General element of Cl(1,3): 16 real coefficients in blade-bitmask order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multivector(pub [f64; 16]);

impl Multivector {
    pub const ZERO: Multivector = Multivector([0.0; 16]);
    pub const ONE: Multivector = Multivector::from_blade(0, 1.0);

    /// Volume element `tau_g = g0 g1 g2 g3`, identified with gamma-5.
    pub const TAU_G: Multivector = Multivector::from_blade(0b1111, 1.0);

    pub const fn from_blade(mask: usize, coeff: f64) -> Multivector {
        let mut c = [0.0; 16];
        c[mask] = coeff;
        Multivector(c)
    }

    pub fn scalar(value: f64) -> Multivector {
        Multivector::from_blade(0, value)
    }

    /// Basis covector `g_mu` (lower index).
    pub fn gamma(mu: usize) -> Multivector {
        assert!(mu < 4, "gamma index out of range: {mu}");
        Multivector::from_blade(1 << mu, 1.0)
    }

    /// Reciprocal basis covector `g^mu = eta^{mu mu} g_mu`.
    pub fn gamma_upper(mu: usize) -> Multivector {
        assert!(mu < 4, "gamma index out of range: {mu}");
        Multivector::from_blade(1 << mu, METRIC[mu])
    }

    /// Relative vector `sigma_i = g_i g_0`, i in 1..=3.
    pub fn sigma(i: usize) -> Multivector {
        assert!((1..=4).contains(&i), "sigma index out of range: {i}");
        Multivector::gamma(i) * Multivector::gamma(0)
    }

    /// Grade-1 covector with the given blade coefficients on `g_mu`.
    pub fn vector(components: [f64; 4]) -> Multivector {
        let mut c = [0.0; 16];
        for mu in 0..4 {
            c[1 << mu] = components[mu];
        }
        Multivector(c)
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.0[mask]
    }

    pub fn scalar_part(&self) -> f64 {
        self.0[0]
    }

    /// Grade-1 blade coefficients `(c_g0, c_g1, c_g2, c_g3)`.
    pub fn vector_part(&self) -> [f64; 4] {
        [self.0[1], self.0[2], self.0[4], self.0[8]]
    }

    pub const fn grade_of(mask: usize) -> usize {
        (mask as u32).count_ones() as usize
    }

    /// Projection onto grade k.
    pub fn grade_project(&self, k: usize) -> Multivector {
        assert!(k <= 4, "grade out of range: {k}");
        let mut out = [0.0; 16];
        for (mask, &c) in self.0.iter().enumerate() {
            if Self::grade_of(mask) == k {
                out[mask] = c;
            }
        }
        Multivector(out)
    }

    pub fn is_grade(&self, k: usize, tol: f64) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(mask, &c)| Self::grade_of(mask) == k || c.abs() <= tol)
    }

    pub fn is_even(&self, tol: f64) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(mask, &c)| Self::grade_of(mask) % 2 == 0 || c.abs() <= tol)
    }

    /// Reversion: flips blade sign by (-1)^(k(k-1)/2) per grade k.
    pub fn reverse(&self) -> Multivector {
        let mut out = [0.0; 16];
        for (mask, &c) in self.0.iter().enumerate() {
            out[mask] = REVERSE_SIGN[Self::grade_of(mask)] * c;
        }
        Multivector(out)
    }

    /// Geometric product.
    pub fn geometric(&self, rhs: &Multivector) -> Multivector {
        let mut out = [0.0; 16];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                out[i ^ j] += f64::from(CAYLEY[i][j]) * a * b;
            }
        }
        Multivector(out)
    }

    /// Exterior (wedge) product: grade-raising part of the geometric product.
    pub fn wedge(&self, rhs: &Multivector) -> Multivector {
        let mut out = [0.0; 16];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                // disjoint blades only: grade(i^j) = grade(i)+grade(j)
                if i & j == 0 {
                    out[i ^ j] += f64::from(CAYLEY[i][j]) * a * b;
                }
            }
        }
        Multivector(out)
    }

    /// Left contraction: for blades of grades r and s, the grade (s-r) part
    /// of the geometric product, extended bilinearly.
    pub fn left_contraction(&self, rhs: &Multivector) -> Multivector {
        let mut out = [0.0; 16];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let gi = Self::grade_of(i);
            for (j, &b) in rhs.0.iter().enumerate() {
                if b == 0.0 {
                    continue;
                }
                let gj = Self::grade_of(j);
                if gj >= gi && Self::grade_of(i ^ j) == gj - gi {
                    out[i ^ j] += f64::from(CAYLEY[i][j]) * a * b;
                }
            }
        }
        Multivector(out)
    }

    /// Scalar product `<reverse(a) b>_0`. This fixes the `A . B` convention
    /// used throughout: blades of equal grade pair up, everything else drops.
    pub fn scalar_product(&self, rhs: &Multivector) -> f64 {
        let mut acc = 0.0;
        for (mask, &a) in self.0.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let b = rhs.0[mask];
            if b == 0.0 {
                continue;
            }
            // <blade~ blade>_0 = rev_sign * self-product sign
            let s = REVERSE_SIGN[Self::grade_of(mask)] * f64::from(CAYLEY[mask][mask]);
            acc += s * a * b;
        }
        acc
    }

    /// Hodge star, fixed by the contract `A ^ star(B) = (A . B) tau_g` for
    /// equal-grade A, B. Closed form: `star(A) = reverse(A) * tau_g`.
    pub fn hodge_star(&self) -> Multivector {
        self.reverse().geometric(&Multivector::TAU_G)
    }

    /// Euclidean norm of the 16 coefficients.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Multivector {
        let mut out = self.0;
        for c in &mut out {
            *c *= s;
        }
        Multivector(out)
    }
}

impl Default for Multivector {
    fn default() -> Self {
        Multivector::ZERO
    }
}

impl std::ops::Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o += r;
        }
        Multivector(out)
    }
}

impl std::ops::Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0.iter()) {
            *o -= r;
        }
        Multivector(out)
    }
}

impl std::ops::Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        self.geometric(&rhs)
    }
}

impl std::ops::Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl std::ops::AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        for (o, r) in self.0.iter_mut().zip(rhs.0.iter()) {
            *o += r;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-14;

    fn assert_mv_eq(a: &Multivector, b: &Multivector, tol: f64) {
        assert!(
            (*a - *b).max_abs_coeff() <= tol,
            "multivectors differ:\n  {a:?}\n  {b:?}"
        );
    }

    #[test]
    fn generator_squares_match_metric() {
        for mu in 0..4 {
            let g = Multivector::gamma(mu);
            let sq = g * g;
            assert_mv_eq(&sq, &Multivector::scalar(METRIC[mu]), TOL);
        }
    }

    #[test]
    fn anticommutator_is_two_eta() {
        for mu in 0..4 {
            for nu in 0..4 {
                let a = Multivector::gamma(mu) * Multivector::gamma(nu)
                    + Multivector::gamma(nu) * Multivector::gamma(mu);
                let expected = if mu == nu { 2.0 * METRIC[mu] } else { 0.0 };
                assert_mv_eq(&a, &Multivector::scalar(expected), TOL);
            }
        }
    }

    #[test]
    fn distinct_generators_anticommute() {
        let g1 = Multivector::gamma(1);
        let g2 = Multivector::gamma(2);
        let g12 = g1.wedge(&g2);
        assert_mv_eq(&(g1 * g2), &g12, TOL);
        assert_mv_eq(&(g2 * g1), &-g12, TOL);
    }

    #[test]
    fn boost_plane_squares_to_plus_one() {
        // (g0 g1)^2 = +1, so (1 + g0g1)(1 - g0g1) = 0
        let b = Multivector::gamma(0) * Multivector::gamma(1);
        let p = (Multivector::ONE + b) * (Multivector::ONE - b);
        assert_mv_eq(&p, &Multivector::ZERO, TOL);
    }

    #[test]
    fn wedge_with_self_vanishes() {
        let g0 = Multivector::gamma(0);
        assert_mv_eq(&g0.wedge(&g0), &Multivector::ZERO, TOL);
        assert_mv_eq(
            &Multivector::gamma(0).wedge(&Multivector::gamma(1)),
            &(Multivector::gamma(0) * Multivector::gamma(1)),
            TOL,
        );
    }

    #[test]
    fn left_contraction_lowers_grade() {
        // g1 . (g1 ^ g2) = (g1.g1) g2 = -g2 under (+,-,-,-)
        let g1 = Multivector::gamma(1);
        let g12 = Multivector::gamma(1).wedge(&Multivector::gamma(2));
        assert_mv_eq(&g1.left_contraction(&g12), &-Multivector::gamma(2), TOL);
    }

    #[test]
    fn reversion_signs() {
        let g01 = Multivector::gamma(0) * Multivector::gamma(1);
        assert_mv_eq(&g01.reverse(), &-g01, TOL);
        let g012 = g01 * Multivector::gamma(2);
        assert_mv_eq(&g012.reverse(), &-g012, TOL);
        assert_mv_eq(&Multivector::TAU_G.reverse(), &Multivector::TAU_G, TOL);
    }

    #[test]
    fn grade_projection_picks_blades() {
        let m = Multivector::ONE
            + Multivector::gamma(0)
            + Multivector::gamma(0) * Multivector::gamma(1);
        assert_mv_eq(&m.grade_project(1), &Multivector::gamma(0), TOL);
        assert_mv_eq(&m.grade_project(0), &Multivector::ONE, TOL);
    }

    #[test]
    #[should_panic(expected = "grade out of range")]
    fn grade_projection_rejects_bad_grade() {
        let _ = Multivector::ONE.grade_project(5);
    }

    #[test]
    fn scalar_product_convention() {
        // <(g0g1)~ g0g1>_0 = -1
        let g01 = Multivector::gamma(0) * Multivector::gamma(1);
        assert!((g01.scalar_product(&g01) + 1.0).abs() <= TOL);
        // mixed grades drop out
        let m = Multivector::gamma(0) + Multivector::TAU_G;
        assert!((m.scalar_product(&Multivector::ONE)).abs() <= TOL);
    }

    #[test]
    fn hodge_star_defining_contract_on_blades() {
        // A ^ star(B) = (A . B) tau_g for every pair of equal-grade blades
        for a_mask in 0..BLADE_COUNT {
            for b_mask in 0..BLADE_COUNT {
                if Multivector::grade_of(a_mask) != Multivector::grade_of(b_mask) {
                    continue;
                }
                let a = Multivector::from_blade(a_mask, 1.0);
                let b = Multivector::from_blade(b_mask, 1.0);
                let lhs = a.wedge(&b.hodge_star());
                let rhs = Multivector::TAU_G.scale(a.scalar_product(&b));
                assert_mv_eq(&lhs, &rhs, TOL);
            }
        }
    }

    #[test]
    fn hodge_star_of_scalar_is_volume() {
        assert_mv_eq(&Multivector::ONE.hodge_star(), &Multivector::TAU_G, TOL);
    }

    #[test]
    fn hodge_star_squares_to_minus_one_on_bivectors() {
        for mask in 0..BLADE_COUNT {
            if Multivector::grade_of(mask) != 2 {
                continue;
            }
            let b = Multivector::from_blade(mask, 1.0);
            assert_mv_eq(&b.hodge_star().hodge_star(), &-b, TOL);
        }
    }

    #[test]
    fn volume_element_commutes_with_even_blades() {
        for mask in 0..BLADE_COUNT {
            if Multivector::grade_of(mask) % 2 != 0 {
                continue;
            }
            let b = Multivector::from_blade(mask, 1.0);
            let lhs = Multivector::TAU_G * b;
            let rhs = b * Multivector::TAU_G;
            assert_mv_eq(&lhs, &rhs, TOL);
        }
    }

    #[test]
    fn serialization_is_a_sixteen_array() {
        let m = Multivector::gamma(0) + Multivector::TAU_G.scale(2.0);
        let json = serde_json::to_string(&m).unwrap();
        let v: Vec<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(v.len(), 16);
        assert_eq!(v[1], 1.0);
        assert_eq!(v[15], 2.0);
        let back: Multivector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }
}
