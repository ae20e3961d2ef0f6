//! Lorentz boost matrices, their rotor counterparts, frame triples, and the
//! active coordinate point map.

use serde::{Deserialize, Serialize};

use crate::algebra::{exp_bivector, Multivector, Rotor, METRIC};
use crate::error::FrameError;

/// Proper orthochronous Lorentz matrix L^mu_nu (row = upper index).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LorentzMatrix(pub [[f64; 4]; 4]);

pub const LORENTZ_TOL: f64 = 1e-12;

impl LorentzMatrix {
    pub const IDENTITY: LorentzMatrix = LorentzMatrix([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    /// Validates L^T eta L = eta, det L = +1, L^0_0 >= 1.
    pub fn try_new(entries: [[f64; 4]; 4]) -> Result<LorentzMatrix, FrameError> {
        let m = LorentzMatrix(entries);
        let defect = m.isometry_defect();
        if defect > LORENTZ_TOL {
            return Err(FrameError::NotLorentz {
                reason: format!("max |L^T eta L - eta| = {defect:.3e}"),
            });
        }
        let det = m.det();
        if (det - 1.0).abs() > 1e-9 {
            return Err(FrameError::NotLorentz {
                reason: format!("det L = {det}, expected +1"),
            });
        }
        if entries[0][0] < 1.0 - 1e-12 {
            return Err(FrameError::NotLorentz {
                reason: format!("L^0_0 = {} < 1, not orthochronous", entries[0][0]),
            });
        }
        Ok(m)
    }

    pub fn isometry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                let mut s = 0.0;
                for a in 0..4 {
                    s += self.0[a][mu] * METRIC[a] * self.0[a][nu];
                }
                let eta = if mu == nu { METRIC[mu] } else { 0.0 };
                worst = worst.max((s - eta).abs());
            }
        }
        worst
    }

    pub fn det(&self) -> f64 {
        det4(&self.0)
    }

    /// Exact inverse for Lorentz matrices: L^-1 = eta L^T eta.
    pub fn inverse(&self) -> LorentzMatrix {
        let mut inv = [[0.0; 4]; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                inv[mu][nu] = METRIC[mu] * self.0[nu][mu] * METRIC[nu];
            }
        }
        LorentzMatrix(inv)
    }

    /// Matrix action on coordinates: (L x)^mu = L^mu_nu x^nu.
    pub fn apply(&self, x: [f64; 4]) -> [f64; 4] {
        let mut y = [0.0; 4];
        for mu in 0..4 {
            for nu in 0..4 {
                y[mu] += self.0[mu][nu] * x[nu];
            }
        }
        y
    }

    pub fn compose(&self, rhs: &LorentzMatrix) -> LorentzMatrix {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    out[i][j] += self.0[i][k] * rhs.0[k][j];
                }
            }
        }
        LorentzMatrix(out)
    }

    pub fn max_abs_diff(&self, rhs: &LorentzMatrix) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - rhs.0[i][j]).abs());
            }
        }
        d
    }
}

pub fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut det = 0.0;
    for j in 0..4 {
        det += m[0][j] * cofactor(m, 0, j);
    }
    det
}

fn cofactor(m: &[[f64; 4]; 4], row: usize, col: usize) -> f64 {
    let mut sub = [[0.0; 3]; 3];
    let (mut r, mut c);
    r = 0;
    for i in 0..4 {
        if i == row {
            continue;
        }
        c = 0;
        for j in 0..4 {
            if j == col {
                continue;
            }
            sub[r][c] = m[i][j];
            c += 1;
        }
        r += 1;
    }
    let det3 = sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
        - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
        + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]);
    if (row + col) % 2 == 0 {
        det3
    } else {
        -det3
    }
}

/// Velocity boost along the g1 direction, returned as the pair (L, L^-1):
///
/// ```text
/// L = [  gamma  -v gamma  0  0 ]      L^-1 = [  gamma  v gamma  0  0 ]
///     [ -v gamma  gamma   0  0 ]             [ v gamma  gamma   0  0 ]
///     [    0        0     1  0 ]             [    0       0     1  0 ]
///     [    0        0     0  1 ]             [    0       0     0  1 ]
/// ```
///
/// with gamma = (1 - v^2)^(-1/2); v is in units of c.
pub fn boost_matrix(v: f64) -> Result<(LorentzMatrix, LorentzMatrix), FrameError> {
    if !(v.abs() < 1.0) {
        return Err(FrameError::SuperluminalVelocity { v });
    }
    let g = 1.0 / (1.0 - v * v).sqrt();
    let l = LorentzMatrix([
        [g, -v * g, 0.0, 0.0],
        [-v * g, g, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    let l_inv = LorentzMatrix([
        [g, v * g, 0.0, 0.0],
        [v * g, g, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);
    Ok((l, l_inv))
}

/// Boost rotor R = exp((chi/2) g1 g0) with tanh(chi) = v. Its sandwich on
/// the frame matches the matrix action of `boost_matrix(v)`.
pub fn rotor_from_velocity(v: f64) -> Result<Rotor, FrameError> {
    if !(v.abs() < 1.0) {
        return Err(FrameError::SuperluminalVelocity { v });
    }
    let chi = v.atanh();
    let plane = Multivector::gamma(1) * Multivector::gamma(0);
    Ok(exp_bivector(&plane.scale(chi / 2.0)).expect("boost plane exponentiates to a unit rotor"))
}

/// The three coframes of the worked boost: fiducial {g_mu}, primed
/// g'_mu = R g_mu R~, and double-primed g''_mu = R~ g_mu R.
#[derive(Clone, Debug)]
pub struct FrameTriple {
    pub fiducial: [Multivector; 4],
    pub primed: [Multivector; 4],
    pub double_primed: [Multivector; 4],
}

pub fn frame_triple(v: f64) -> Result<FrameTriple, FrameError> {
    let r = rotor_from_velocity(v)?;
    let fiducial = std::array::from_fn(Multivector::gamma);
    let primed = std::array::from_fn(|mu| r.sandwich(&Multivector::gamma(mu)));
    let rrev = r.reverse();
    let double_primed = std::array::from_fn(|mu| rrev.sandwich(&Multivector::gamma(mu)));
    Ok(FrameTriple {
        fiducial,
        primed,
        double_primed,
    })
}

impl FrameTriple {
    pub fn orthonormality_defect(frame: &[Multivector; 4]) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                let eta = if mu == nu { METRIC[mu] } else { 0.0 };
                worst = worst.max((frame[mu].scalar_product(&frame[nu]) - eta).abs());
            }
        }
        worst
    }
}

/// Active point map e -> le in coordinates: x^mu(le) = (L^-1)^mu_nu x^nu(e).
pub fn lorentz_point_map(l: &LorentzMatrix, x: [f64; 4]) -> [f64; 4] {
    l.inverse().apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_velocity_is_identity() {
        let (l, li) = boost_matrix(0.0).unwrap();
        assert_eq!(l, LorentzMatrix::IDENTITY);
        assert_eq!(li, LorentzMatrix::IDENTITY);
        assert_eq!(
            rotor_from_velocity(0.0).unwrap().as_multivector(),
            &Multivector::ONE
        );
    }

    #[test]
    fn superluminal_rejected() {
        assert!(boost_matrix(1.0).is_err());
        assert!(rotor_from_velocity(-1.2).is_err());
    }

    #[test]
    fn boost_entries_at_v06() {
        let (l, li) = boost_matrix(0.6).unwrap();
        assert!((l.0[0][0] - 1.25).abs() <= 1e-14);
        assert!((l.0[0][1] + 0.75).abs() <= 1e-14);
        assert!((l.0[1][0] + 0.75).abs() <= 1e-14);
        assert!((l.0[1][1] - 1.25).abs() <= 1e-14);
        assert!(l.compose(&li).max_abs_diff(&LorentzMatrix::IDENTITY) <= 1e-14);
        LorentzMatrix::try_new(l.0).unwrap();
    }

    #[test]
    fn exact_inverse_matches_closed_form() {
        let (l, li) = boost_matrix(0.37).unwrap();
        assert!(l.inverse().max_abs_diff(&li) <= 1e-14);
    }

    #[test]
    fn rotor_matches_matrix_action() {
        // g'_mu = R g_mu R~ = (L^-1)^alpha_mu g_alpha, for a sweep of velocities
        for &v in &[0.1, 0.5, 0.9, -0.6, -0.99] {
            let (l, _) = boost_matrix(v).unwrap();
            let li = l.inverse();
            let r = rotor_from_velocity(v).unwrap();
            for mu in 0..4 {
                let lhs = r.sandwich(&Multivector::gamma(mu));
                let mut rhs = Multivector::ZERO;
                for alpha in 0..4 {
                    rhs += Multivector::gamma(alpha).scale(li.0[alpha][mu]);
                }
                assert!(
                    (lhs - rhs).max_abs_coeff() <= 1e-12,
                    "mismatch at v={v}, mu={mu}"
                );
            }
        }
    }

    #[test]
    fn frame_triple_values_at_v06() {
        let t = frame_triple(0.6).unwrap();
        // g'_2 = g_2 and g'_3 = g_3
        assert!((t.primed[2] - Multivector::gamma(2)).max_abs_coeff() <= 1e-14);
        assert!((t.primed[3] - Multivector::gamma(3)).max_abs_coeff() <= 1e-14);
        // g'_0 = (1.25, 0.75, 0, 0)
        assert_eq!(t.primed[0].vector_part()[0], t.primed[0].coeff(1));
        let p0 = t.primed[0].vector_part();
        assert!((p0[0] - 1.25).abs() <= 1e-12 && (p0[1] - 0.75).abs() <= 1e-12);
        // g''_0 = (1.25, -0.75, 0, 0)
        let q0 = t.double_primed[0].vector_part();
        assert!((q0[0] - 1.25).abs() <= 1e-12 && (q0[1] + 0.75).abs() <= 1e-12);
        for frame in [&t.fiducial, &t.primed, &t.double_primed] {
            assert!(FrameTriple::orthonormality_defect(frame) <= 1e-12);
        }
    }

    #[test]
    fn point_map_examples() {
        let (l, _) = boost_matrix(0.6).unwrap();
        let mapped = lorentz_point_map(&l, [0.0, 1.0, 0.0, 0.0]);
        assert!((mapped[0] - 0.75).abs() <= 1e-14);
        assert!((mapped[1] - 1.25).abs() <= 1e-14);
        assert_eq!(
            lorentz_point_map(&LorentzMatrix::IDENTITY, [1.0, 2.0, 3.0, 4.0]),
            [1.0, 2.0, 3.0, 4.0]
        );
        // round trip through L then L^-1
        let li = l.inverse();
        let back = lorentz_point_map(&li, lorentz_point_map(&l, [0.3, -1.2, 0.4, 2.0]));
        for (a, b) in back.iter().zip([0.3, -1.2, 0.4, 2.0]) {
            assert!((a - b).abs() <= 1e-14);
        }
    }

    #[test]
    fn isometry_holds_across_velocity_sweep() {
        let mut v = -0.99;
        while v < 0.99 {
            let (l, _) = boost_matrix(v).unwrap();
            assert!(l.isometry_defect() <= 1e-12, "defect at v={v}");
            v += 0.03;
        }
    }
}
