//! Tetrads, connection bivector fields, Pfaff/covariant/spinor derivatives,
//! structure coefficients, torsion, and the passive/active gauge
//! transformation laws with their cross-checks.
//!
//! All geometry lives over Minkowski spacetime in the global Cartesian
//! chart; tetrads are pointwise Lorentz-valued coframe coefficient fields
//! `theta^a = h^a_mu dx^mu`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Multivector, METRIC};
use crate::error::{ConnectionError, FieldError};
use crate::field::{AnalyticField, Differentiation, Event};
use crate::gauge::RotorField;

pub type Mat4 = [[f64; 4]; 4];

type MatFn = Arc<dyn Fn(&Event) -> Mat4 + Send + Sync>;
type MatPartialFn = Arc<dyn Fn(usize, &Event) -> Mat4 + Send + Sync>;
type OmegaFn = Arc<dyn Fn(usize, &Event) -> Multivector + Send + Sync>;

pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Direction argument for frame derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Direction {
    /// The frame vector e_a of the tetrad in use.
    Frame(usize),
    /// Constant coordinate components X^mu d_mu.
    Coordinate([f64; 4]),
}

/// Orthonormal coframe coefficient field h^a_mu, with optional analytic
/// coordinate derivatives.
#[derive(Clone)]
pub struct TetradField {
    h: MatFn,
    dh: Option<MatPartialFn>,
    identity: bool,
}

impl std::fmt::Debug for TetradField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TetradField")
            .field("identity", &self.identity)
            .field("has_analytic_derivatives", &self.dh.is_some())
            .finish()
    }
}

impl TetradField {
    pub fn new(h: impl Fn(&Event) -> Mat4 + Send + Sync + 'static) -> TetradField {
        TetradField {
            h: Arc::new(h),
            dh: None,
            identity: false,
        }
    }

    pub fn with_derivatives(
        mut self,
        dh: impl Fn(usize, &Event) -> Mat4 + Send + Sync + 'static,
    ) -> TetradField {
        self.dh = Some(Arc::new(dh));
        self
    }

    /// Flat Cartesian coframe theta^a = dx^a.
    pub fn cartesian() -> TetradField {
        let mut t = TetradField::new(|_| IDENTITY4).with_derivatives(|_, _| [[0.0; 4]; 4]);
        t.identity = true;
        t
    }

    /// Spatially rotating frame: e_0 = d_t, e_1 = cos(w t) d_x + sin(w t) d_y,
    /// e_2 = -sin(w t) d_x + cos(w t) d_y, e_3 = d_z.
    pub fn rotating(omega: f64) -> TetradField {
        TetradField::new(move |e| {
            let (s, c) = (omega * e[0]).sin_cos();
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, c, s, 0.0],
                [0.0, -s, c, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ]
        })
        .with_derivatives(move |mu, e| {
            if mu != 0 {
                return [[0.0; 4]; 4];
            }
            let (s, c) = (omega * e[0]).sin_cos();
            [
                [0.0, 0.0, 0.0, 0.0],
                [0.0, -omega * s, omega * c, 0.0],
                [0.0, -omega * c, -omega * s, 0.0],
                [0.0, 0.0, 0.0, 0.0],
            ]
        })
    }

    /// Actively rotated coframe theta'^a = R theta^a R~.
    pub fn rotated(rotor: &RotorField, base: &TetradField) -> TetradField {
        let r = rotor.clone();
        let b = base.clone();
        let value = {
            let (r, b) = (r.clone(), b.clone());
            move |e: &Event| -> Mat4 {
                let rot = r.eval(e);
                let mut h = [[0.0; 4]; 4];
                for a in 0..4 {
                    let tp = rot.sandwich(&b.coframe_upper(a, e));
                    for mu in 0..4 {
                        h[a][mu] = Multivector::gamma(mu).scalar_product(&tp);
                    }
                }
                h
            }
        };
        let deriv = move |mu: usize, e: &Event| -> Mat4 {
            let rot = r.eval(e).into_multivector();
            let drot = r
                .partial(mu, e)
                .expect("rotated tetrad requires analytic rotor derivatives");
            let dbase = b.partial_h(mu, e, Differentiation::Analytic).expect(
                "rotated tetrad requires analytic base-tetrad derivatives",
            );
            let mut out = [[0.0; 4]; 4];
            for a in 0..4 {
                let theta = b.coframe_upper(a, e);
                let dtheta = row_covector(&dbase, a);
                let term = drot.geometric(&theta).geometric(&rot.reverse())
                    + rot.geometric(&dtheta).geometric(&rot.reverse())
                    + rot.geometric(&theta).geometric(&drot.reverse());
                for m in 0..4 {
                    out[a][m] = Multivector::gamma(m).scalar_product(&term);
                }
            }
            out
        };
        TetradField::new(value).with_derivatives(deriv)
    }

    pub fn h(&self, e: &Event) -> Mat4 {
        (self.h)(e)
    }

    pub fn is_identity(&self) -> bool {
        self.identity
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.dh.is_some()
    }

    /// d_mu h, analytic when available, else central differences.
    pub fn partial_h(&self, mu: usize, e: &Event, diff: Differentiation) -> Result<Mat4, ConnectionError> {
        match (&self.dh, diff) {
            (Some(dh), Differentiation::Analytic | Differentiation::Auto { .. }) => Ok(dh(mu, e)),
            (None, Differentiation::Analytic) => {
                Err(ConnectionError::Field(FieldError::MissingAnalyticDerivatives))
            }
            (_, Differentiation::CentralDiff { h } | Differentiation::Auto { h }) => {
                let mut fwd = *e;
                fwd[mu] += h;
                let mut bwd = *e;
                bwd[mu] -= h;
                let (hf, hb) = ((self.h)(&fwd), (self.h)(&bwd));
                let mut out = [[0.0; 4]; 4];
                for a in 0..4 {
                    for m in 0..4 {
                        out[a][m] = (hf[a][m] - hb[a][m]) / (2.0 * h);
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn h_inverse(&self, e: &Event) -> Result<Mat4, ConnectionError> {
        invert4(&self.h(e)).ok_or(ConnectionError::SingularTetrad { event: *e })
    }

    /// Coframe element theta^a = h^a_mu g^mu.
    pub fn coframe_upper(&self, a: usize, e: &Event) -> Multivector {
        row_covector(&self.h(e), a)
    }

    /// Lowered coframe element theta_a = eta_ab theta^b.
    pub fn coframe_lower(&self, a: usize, e: &Event) -> Multivector {
        self.coframe_upper(a, e).scale(METRIC[a])
    }

    /// Coordinate components of the frame vector e_a = (h^-1)^mu_a d_mu.
    pub fn frame_vector(&self, a: usize, e: &Event) -> Result<[f64; 4], ConnectionError> {
        let inv = self.h_inverse(e)?;
        Ok(std::array::from_fn(|mu| inv[mu][a]))
    }

    /// Frame components X^a = theta^a(X) = h^a_mu X^mu of a coordinate vector.
    pub fn frame_components(&self, x: &[f64; 4], e: &Event) -> [f64; 4] {
        let h = self.h(e);
        std::array::from_fn(|a| (0..4).map(|mu| h[a][mu] * x[mu]).sum())
    }

    /// Max |h eta h^T - eta| over the probe events.
    pub fn orthonormality_defect(&self, events: &[Event]) -> f64 {
        let mut worst = 0.0f64;
        for e in events {
            let h = self.h(e);
            for a in 0..4 {
                for b in 0..4 {
                    let mut s = 0.0;
                    for mu in 0..4 {
                        s += h[a][mu] * METRIC[mu] * h[b][mu];
                    }
                    let eta = if a == b { METRIC[a] } else { 0.0 };
                    worst = worst.max((s - eta).abs());
                }
            }
        }
        worst
    }

    pub fn validate_at(&self, events: &[Event]) -> Result<(), ConnectionError> {
        let defect = self.orthonormality_defect(events);
        if defect > ORTHONORMALITY_TOL {
            return Err(ConnectionError::NotOrthonormal { defect });
        }
        Ok(())
    }

    pub fn det_h(&self, e: &Event) -> f64 {
        crate::boost::det4(&self.h(e))
    }

    fn resolve(&self, dir: &Direction, e: &Event) -> Result<[f64; 4], ConnectionError> {
        match dir {
            Direction::Frame(a) => self.frame_vector(*a, e),
            Direction::Coordinate(x) => Ok(*x),
        }
    }
}

fn row_covector(h: &Mat4, a: usize) -> Multivector {
    let mut out = Multivector::ZERO;
    for mu in 0..4 {
        out += Multivector::gamma_upper(mu).scale(h[a][mu]);
    }
    out
}

pub const IDENTITY4: Mat4 = [
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
];

/// Gauss-Jordan inverse; returns None when the pivot collapses.
pub fn invert4(m: &Mat4) -> Option<Mat4> {
    let mut a = *m;
    let mut inv = IDENTITY4;
    for col in 0..4 {
        let mut pivot = col;
        for row in (col + 1)..4 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-13 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col];
        for j in 0..4 {
            a[col][j] /= scale;
            inv[col][j] /= scale;
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..4 {
                a[row][j] -= factor * a[col][j];
                inv[row][j] -= factor * inv[col][j];
            }
        }
    }
    Some(inv)
}

/// Connection bivector field: omega_{e_a} = -1/2 omega_a^{bc} theta_b ^ theta_c.
#[derive(Clone)]
pub struct ConnectionField {
    omega: OmegaFn,
}

impl std::fmt::Debug for ConnectionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("ConnectionField")
    }
}

impl ConnectionField {
    pub fn new(omega: impl Fn(usize, &Event) -> Multivector + Send + Sync + 'static) -> Self {
        ConnectionField {
            omega: Arc::new(omega),
        }
    }

    pub fn zero() -> Self {
        ConnectionField::new(|_, _| Multivector::ZERO)
    }

    /// Builds the bivectors from coefficient tables omega_a^{bc}(e).
    pub fn from_coefficients(
        tetrad: &TetradField,
        coeffs: impl Fn(&Event) -> [[[f64; 4]; 4]; 4] + Send + Sync + 'static,
    ) -> Self {
        let tetrad = tetrad.clone();
        ConnectionField::new(move |a, e| {
            let w = coeffs(e);
            let mut out = Multivector::ZERO;
            for b in 0..4 {
                for c in 0..4 {
                    if w[a][b][c] == 0.0 {
                        continue;
                    }
                    let blade = tetrad.coframe_lower(b, e).wedge(&tetrad.coframe_lower(c, e));
                    out += blade.scale(-0.5 * w[a][b][c]);
                }
            }
            out
        })
    }

    /// Constant coefficients, mostly for torsional presets.
    pub fn from_constant_coefficients(
        tetrad: &TetradField,
        coeffs: [[[f64; 4]; 4]; 4],
    ) -> Self {
        Self::from_coefficients(tetrad, move |_| coeffs)
    }

    pub fn bivector(&self, a: usize, e: &Event) -> Multivector {
        (self.omega)(a, e)
    }

    /// omega along an arbitrary coordinate direction, by linearity:
    /// omega_X = theta^a(X) omega_{e_a}.
    pub fn along(&self, x: &[f64; 4], tetrad: &TetradField, e: &Event) -> Multivector {
        let comps = tetrad.frame_components(x, e);
        let mut out = Multivector::ZERO;
        for a in 0..4 {
            if comps[a] != 0.0 {
                out += self.bivector(a, e).scale(comps[a]);
            }
        }
        out
    }

    pub fn resolve(
        &self,
        dir: &Direction,
        tetrad: &TetradField,
        e: &Event,
    ) -> Result<Multivector, ConnectionError> {
        match dir {
            Direction::Frame(a) => Ok(self.bivector(*a, e)),
            Direction::Coordinate(x) => Ok(self.along(x, tetrad, e)),
        }
    }

    /// Coefficients omega_a^{bc} = -(theta^b ^ theta^c) . omega_{e_a}.
    pub fn coefficients(&self, tetrad: &TetradField, e: &Event) -> [[[f64; 4]; 4]; 4] {
        let mut out = [[[0.0; 4]; 4]; 4];
        let upper: [Multivector; 4] = std::array::from_fn(|a| tetrad.coframe_upper(a, e));
        for a in 0..4 {
            let w = self.bivector(a, e);
            for b in 0..4 {
                for c in (b + 1)..4 {
                    let val = -upper[b].wedge(&upper[c]).scalar_product(&w);
                    out[a][b][c] = val;
                    out[a][c][b] = -val;
                }
            }
        }
        out
    }
}

/// Per-event coframe blade tables: Theta^J and Theta_J for all 16 masks,
/// built by ascending wedges, plus their coordinate derivatives.
struct CoframeBlades {
    upper: [Multivector; 16],
    lower: [Multivector; 16],
    dupper: Option<[[Multivector; 16]; 4]>,
}

fn wedge_tables(theta_upper: &[Multivector; 4]) -> ([Multivector; 16], [Multivector; 16]) {
    let mut upper = [Multivector::ZERO; 16];
    let mut lower = [Multivector::ZERO; 16];
    upper[0] = Multivector::ONE;
    lower[0] = Multivector::ONE;
    for mask in 1..16usize {
        let lo = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        upper[mask] = theta_upper[lo].wedge(&upper[rest]);
        lower[mask] = theta_upper[lo].scale(METRIC[lo]).wedge(&lower[rest]);
    }
    (upper, lower)
}

fn wedge_table_derivs(
    theta_upper: &[Multivector; 4],
    dtheta_upper: &[[Multivector; 4]; 4],
    upper: &[Multivector; 16],
) -> [[Multivector; 16]; 4] {
    std::array::from_fn(|mu| {
        let mut d = [Multivector::ZERO; 16];
        for mask in 1..16usize {
            let lo = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            d[mask] =
                dtheta_upper[mu][lo].wedge(&upper[rest]) + theta_upper[lo].wedge(&d[rest]);
        }
        d
    })
}

fn coframe_blades(
    tetrad: &TetradField,
    e: &Event,
    diff: Differentiation,
    want_derivs: bool,
) -> Result<CoframeBlades, ConnectionError> {
    let theta_upper: [Multivector; 4] = std::array::from_fn(|a| tetrad.coframe_upper(a, e));
    let (upper, lower) = wedge_tables(&theta_upper);
    let dupper = if want_derivs {
        let mut dtheta = [[Multivector::ZERO; 4]; 4];
        for mu in 0..4 {
            let dh = tetrad.partial_h(mu, e, diff)?;
            for a in 0..4 {
                dtheta[mu][a] = row_covector(&dh, a);
            }
        }
        Some(wedge_table_derivs(&theta_upper, &dtheta, &upper))
    } else {
        None
    };
    Ok(CoframeBlades {
        upper,
        lower,
        dupper,
    })
}

/// Pfaff derivative: differentiates the frame components of `a` while the
/// coframe blades are held fixed.
pub fn pfaff_derivative(
    dir: &Direction,
    a: &AnalyticField,
    tetrad: &TetradField,
    e: &Event,
    diff: Differentiation,
) -> Result<Multivector, ConnectionError> {
    let x = tetrad.resolve(dir, e)?;
    // constant Cartesian coframe: components are the blade coefficients
    if tetrad.is_identity() {
        let mut out = Multivector::ZERO;
        for mu in 0..4 {
            if x[mu] != 0.0 {
                out += a.partial(mu, e, diff)?.scale(x[mu]);
            }
        }
        return Ok(out);
    }
    let blades = coframe_blades(tetrad, e, diff, true)?;
    let dupper = blades.dupper.as_ref().expect("derivatives requested");
    let value = a.eval(e)?;
    let mut dvalue = [Multivector::ZERO; 4];
    for mu in 0..4 {
        dvalue[mu] = a.partial(mu, e, diff)?;
    }
    let mut out = Multivector::ZERO;
    for mask in 0..16usize {
        let mut directional = 0.0;
        for mu in 0..4 {
            if x[mu] == 0.0 {
                continue;
            }
            let d_comp = dupper[mu][mask].scalar_product(&value)
                + blades.upper[mask].scalar_product(&dvalue[mu]);
            directional += x[mu] * d_comp;
        }
        out += blades.lower[mask].scale(directional);
    }
    Ok(out)
}

/// Covariant derivative of a Clifford field:
/// nabla_X A = pfaff_X(A) + 1/2 [omega_X, A].
pub fn covariant_derivative(
    dir: &Direction,
    a: &AnalyticField,
    tetrad: &TetradField,
    omega: &ConnectionField,
    e: &Event,
    diff: Differentiation,
) -> Result<Multivector, ConnectionError> {
    let pfaff = pfaff_derivative(dir, a, tetrad, e, diff)?;
    let w = omega.resolve(dir, tetrad, e)?;
    let value = a.eval(e)?;
    Ok(pfaff + commutator_half(&w, &value))
}

pub fn commutator_half(w: &Multivector, a: &Multivector) -> Multivector {
    (w.geometric(a) - a.geometric(w)).scale(0.5)
}

/// Spinor derivative of an even representative:
/// nabla^(s)_X psi = pfaff_X(psi) + 1/2 omega_X psi (one-sided action).
pub fn spinor_derivative(
    dir: &Direction,
    psi: &AnalyticField,
    tetrad: &TetradField,
    omega: &ConnectionField,
    e: &Event,
    diff: Differentiation,
) -> Result<Multivector, ConnectionError> {
    let value = psi.eval(e)?;
    if !value.is_even(1e-10 * (1.0 + value.norm())) {
        let odd = value - (value.grade_project(0) + value.grade_project(2) + value.grade_project(4));
        return Err(ConnectionError::OddSpinor { odd_norm: odd.norm() });
    }
    let pfaff = pfaff_derivative(dir, psi, tetrad, e, diff)?;
    let w = omega.resolve(dir, tetrad, e)?;
    Ok(pfaff + w.geometric(&value).scale(0.5))
}

/// Passive gauge transform: the new gauge has coframe theta'^a = R theta^a R~
/// and representative psi' = psi R~, with connection
///
///   omega'_X = R omega_X R~ + 2 (nabla_X R) R~   (equivalently omega_X + 2 (pfaff_X R) R~)
///
/// for every fixed direction X. The factor 2 on the derivative term is fixed
/// by requiring nabla'^(s)_X (psi R~) = (nabla^(s)_X psi) R~ to hold.
///
/// Returns the primed pair (tetrad', omega'): the connection is indexed by
/// the primed frame so the pair feeds the generic derivative operations
/// directly.
pub fn passive_gauge_transform(
    rotor: &RotorField,
    omega: &ConnectionField,
    tetrad: &TetradField,
    diff: Differentiation,
) -> (TetradField, ConnectionField) {
    let primed_tetrad = TetradField::rotated(rotor, tetrad);
    let rotor = rotor.clone();
    let rfield = rotor.to_analytic_field();
    let omega = omega.clone();
    let tetrad = tetrad.clone();
    let primed = primed_tetrad.clone();
    let connection = ConnectionField::new(move |a, e| {
        let x = primed
            .frame_vector(a, e)
            .expect("rotated tetrad stays invertible");
        let dir = Direction::Coordinate(x);
        let r = rotor.eval(e).into_multivector();
        let nabla_r = covariant_derivative(&dir, &rfield, &tetrad, &omega, e, diff)
            .expect("rotor field differentiates everywhere");
        let w = omega.along(&x, &tetrad, e);
        r.geometric(&w).geometric(&r.reverse()) + nabla_r.geometric(&r.reverse()).scale(2.0)
    });
    (primed_tetrad, connection)
}

/// Active gauge transform of the connection under psi -> R psi,
/// theta^a -> R theta^a R~:
///
///   omega'_{e_m} = R omega_{e_m} R~ - 2 (pfaff_{e_m} R) R~
///
/// The bivector labeled `m` pairs with the original frame direction e_m in
/// the covariance identity
/// pfaff_{e_m}(R psi) + 1/2 omega'_{e_m} R psi = R nabla^(s)_{e_m} psi.
pub fn active_gauge_transform(
    rotor: &RotorField,
    omega: &ConnectionField,
    tetrad: &TetradField,
    diff: Differentiation,
) -> ConnectionField {
    let rotor = rotor.clone();
    let rfield = rotor.to_analytic_field();
    let omega = omega.clone();
    let tetrad = tetrad.clone();
    ConnectionField::new(move |a, e| {
        let r = rotor.eval(e).into_multivector();
        let pfaff_r = pfaff_derivative(&Direction::Frame(a), &rfield, &tetrad, e, diff)
            .expect("rotor field differentiates everywhere");
        let w = omega.bivector(a, e);
        r.geometric(&w).geometric(&r.reverse()) - pfaff_r.geometric(&r.reverse()).scale(2.0)
    })
}

/// Frame transform matrix of an active rotation: theta'^m = Lambda^m_n theta^n,
/// extracted as Lambda^m_n = theta_n . (R theta^m R~).
pub fn lambda_matrix(rotor: &RotorField, tetrad: &TetradField, e: &Event) -> Mat4 {
    let r = rotor.eval(e);
    let mut lambda = [[0.0; 4]; 4];
    for m in 0..4 {
        let rotated = r.sandwich(&tetrad.coframe_upper(m, e));
        for n in 0..4 {
            lambda[m][n] = tetrad.coframe_lower(n, e).scalar_product(&rotated);
        }
    }
    lambda
}

/// Coordinate derivative of the Lambda matrix (needs analytic rotor and
/// tetrad derivatives).
pub fn lambda_matrix_partial(
    rotor: &RotorField,
    tetrad: &TetradField,
    mu: usize,
    e: &Event,
    diff: Differentiation,
) -> Result<Mat4, ConnectionError> {
    let r = rotor.eval(e).into_multivector();
    let dr = rotor
        .partial(mu, e)
        .ok_or(ConnectionError::Field(FieldError::MissingAnalyticDerivatives))?;
    let dh = tetrad.partial_h(mu, e, diff)?;
    let h = tetrad.h(e);
    let mut out = [[0.0; 4]; 4];
    for m in 0..4 {
        let theta = row_covector(&h, m);
        let dtheta = row_covector(&dh, m);
        let drot = dr.geometric(&theta).geometric(&r.reverse())
            + r.geometric(&dtheta).geometric(&r.reverse())
            + r.geometric(&theta).geometric(&dr.reverse());
        let rot = r.geometric(&theta).geometric(&r.reverse());
        for n in 0..4 {
            let low = row_covector(&h, n).scale(METRIC[n]);
            let dlow = row_covector(&dh, n).scale(METRIC[n]);
            out[m][n] = dlow.scalar_product(&rot) + low.scalar_product(&drot);
        }
    }
    Ok(out)
}

/// Structure coefficients c^r_{nk} of [e_n, e_k] = c^r_{nk} e_r.
pub fn structure_coefficients(
    tetrad: &TetradField,
    e: &Event,
    diff: Differentiation,
) -> Result<[[[f64; 4]; 4]; 4], ConnectionError> {
    let h = tetrad.h(e);
    let inv = tetrad.h_inverse(e)?;
    // d_nu of h^-1 = -h^-1 (d_nu h) h^-1
    let mut dinv = [[[0.0; 4]; 4]; 4];
    for nu in 0..4 {
        let dh = tetrad.partial_h(nu, e, diff)?;
        for mu in 0..4 {
            for a in 0..4 {
                let mut acc = 0.0;
                for p in 0..4 {
                    for q in 0..4 {
                        acc -= inv[mu][p] * dh[p][q] * inv[q][a];
                    }
                }
                dinv[nu][mu][a] = acc;
            }
        }
    }
    let mut c = [[[0.0; 4]; 4]; 4];
    for n in 0..4 {
        for k in (n + 1)..4 {
            // [e_n, e_k]^mu = E^nu_n d_nu E^mu_k - E^nu_k d_nu E^mu_n
            let mut bracket = [0.0; 4];
            for mu in 0..4 {
                let mut acc = 0.0;
                for nu in 0..4 {
                    acc += inv[nu][n] * dinv[nu][mu][k] - inv[nu][k] * dinv[nu][mu][n];
                }
                bracket[mu] = acc;
            }
            for r in 0..4 {
                let mut acc = 0.0;
                for mu in 0..4 {
                    acc += h[r][mu] * bracket[mu];
                }
                c[r][n][k] = acc;
                c[r][k][n] = -acc;
            }
        }
    }
    Ok(c)
}

/// Torsion components T^r_{nk} = omega^r_{nk} - omega^r_{kn} - c^r_{nk},
/// with omega^r_{nk} = omega_n^{rs} eta_{sk}, plus the torsion covector
/// T = T^b_{ab} theta^a.
#[derive(Clone, Debug)]
pub struct TorsionData {
    pub components: [[[f64; 4]; 4]; 4],
    pub covector: Multivector,
}

impl TorsionData {
    pub fn max_abs(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for n in 0..4 {
                for k in 0..4 {
                    worst = worst.max(self.components[r][n][k].abs());
                }
            }
        }
        worst
    }
}

pub fn torsion_from_parts(
    omega_coeffs: &[[[f64; 4]; 4]; 4],
    c: &[[[f64; 4]; 4]; 4],
    tetrad: &TetradField,
    e: &Event,
) -> TorsionData {
    let lowered = |n: usize, r: usize, k: usize| -> f64 {
        // omega^r_{nk} = omega_n^{rs} eta_{sk}
        omega_coeffs[n][r][k] * METRIC[k]
    };
    let mut components = [[[0.0; 4]; 4]; 4];
    for r in 0..4 {
        for n in 0..4 {
            for k in 0..4 {
                components[r][n][k] = lowered(n, r, k) - lowered(k, r, n) - c[r][n][k];
            }
        }
    }
    let mut covector = Multivector::ZERO;
    for a in 0..4 {
        let mut t_a = 0.0;
        for b in 0..4 {
            t_a += components[b][a][b];
        }
        covector += tetrad.coframe_upper(a, e).scale(t_a);
    }
    TorsionData {
        components,
        covector,
    }
}

pub fn torsion_at(
    omega: &ConnectionField,
    tetrad: &TetradField,
    e: &Event,
    diff: Differentiation,
) -> Result<TorsionData, ConnectionError> {
    let coeffs = omega.coefficients(tetrad, e);
    let c = structure_coefficients(tetrad, e, diff)?;
    Ok(torsion_from_parts(&coeffs, &c, tetrad, e))
}

/// Torsion-free metric connection built from the frame structure
/// coefficients: omega_{rnk} = 1/2 (c_{rnk} - c_{nkr} + c_{krn}) with all
/// indices lowered by eta.
pub fn levi_civita_connection(tetrad: &TetradField, diff: Differentiation) -> ConnectionField {
    let t = tetrad.clone();
    ConnectionField::from_coefficients(tetrad, move |e| {
        let c = structure_coefficients(&t, e, diff).expect("tetrad invertible");
        let lower = |r: usize, n: usize, k: usize| METRIC[r] * c[r][n][k];
        let mut coeffs = [[[0.0; 4]; 4]; 4];
        for n in 0..4 {
            for b in 0..4 {
                for s in 0..4 {
                    // omega_n^{bs} = eta^{br} omega_{rnk} eta^{ks}
                    let w_l = 0.5 * (lower(b, n, s) - lower(n, s, b) + lower(s, b, n));
                    coeffs[n][b][s] = METRIC[b] * w_l * METRIC[s];
                }
            }
        }
        coeffs
    })
}

/// Report for the torsion transformation cross-check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorsionCrosscheck {
    /// Max |T'| over the probe events, direct route.
    pub torsion_norm: f64,
    /// Max component difference between the two routes.
    pub route_difference: f64,
    /// Verified max |T| of the input connection (precondition).
    pub input_torsion_norm: f64,
}

/// Computes the transformed torsion two independent ways.
///
/// Route (i): active-transform the connection, rotate the tetrad, and read
/// T' from components in the primed frame.
///
/// Route (ii): the closed formula in unprimed data, derived from the
/// transformation law for a rotor field R = exp(G):
///   T'^b_{nk} = c^b_{nk} - c'^b_{nk}
///             + 2 Lambda^b_r [ eta_{kc} Lambda^c_s e_n(G^{rs})
///                            - eta_{nc} Lambda^c_s e_k(G^{rs}) ]
/// where c' is expanded through Lambda and its derivatives only.
pub fn torsion_transform_crosscheck(
    rotor: &RotorField,
    tetrad: &TetradField,
    omega: &ConnectionField,
    events: &[Event],
    diff: Differentiation,
) -> Result<TorsionCrosscheck, ConnectionError> {
    let generator = rotor
        .generator()
        .ok_or(ConnectionError::Field(FieldError::MissingAnalyticDerivatives))?;

    // precondition: input torsion vanishes
    let mut input_norm = 0.0f64;
    for e in events {
        input_norm = input_norm.max(torsion_at(omega, tetrad, e, diff)?.max_abs());
    }
    if input_norm > 1e-8 {
        return Err(ConnectionError::NotTorsionFree {
            torsion_norm: input_norm,
        });
    }

    let primed_tetrad = TetradField::rotated(rotor, tetrad);
    let primed_omega = active_gauge_transform(rotor, omega, tetrad, diff);

    let mut torsion_norm = 0.0f64;
    let mut route_difference = 0.0f64;

    for e in events {
        // route (i): components in the primed frame
        let direct = torsion_at(&primed_omega, &primed_tetrad, e, diff)?;

        // route (ii): closed formula from unprimed data
        let c = structure_coefficients(tetrad, e, diff)?;
        let lambda = lambda_matrix(rotor, tetrad, e);
        let lambda_inv = lorentz_matrix_inverse(&lambda);
        let mut dlambda = [[[0.0; 4]; 4]; 4];
        for mu in 0..4 {
            dlambda[mu] = lambda_matrix_partial(rotor, tetrad, mu, e, diff)?;
        }
        let dlambda_inv: [Mat4; 4] = std::array::from_fn(|mu| lorentz_matrix_inverse_partial(&dlambda[mu]));
        let e_frame: [[f64; 4]; 4] = std::array::from_fn(|a| tetrad.frame_vector(a, e).unwrap());

        // directional derivative of (Lambda^-1)^c_k along e_a
        let dir_dinv = |a: usize, c_idx: usize, k: usize| -> f64 {
            (0..4)
                .map(|mu| e_frame[a][mu] * dlambda_inv[mu][c_idx][k])
                .sum()
        };

        // c' expanded through Lambda only
        let mut c_primed = [[[0.0; 4]; 4]; 4];
        for n in 0..4 {
            for k in 0..4 {
                for r in 0..4 {
                    let mut acc = 0.0;
                    for cc in 0..4 {
                        let mut inner = 0.0;
                        for a in 0..4 {
                            inner += lambda_inv[a][n] * dir_dinv(a, cc, k)
                                - lambda_inv[a][k] * dir_dinv(a, cc, n);
                        }
                        let mut c_term = 0.0;
                        for a in 0..4 {
                            for b in 0..4 {
                                c_term += lambda_inv[a][n] * lambda_inv[b][k] * c[cc][a][b];
                            }
                        }
                        acc += lambda[r][cc] * (inner + c_term);
                    }
                    c_primed[r][n][k] = acc;
                }
            }
        }

        // frame-component derivatives of the generator: e_n(G^{rs})
        let gen_field = generator;
        let mut dgen = [[[0.0; 4]; 4]; 4];
        for n in 0..4 {
            let pf = pfaff_derivative(&Direction::Frame(n), gen_field, tetrad, e, diff)?;
            for r in 0..4 {
                for s in 0..4 {
                    dgen[n][r][s] = tetrad
                        .coframe_upper(r, e)
                        .wedge(&tetrad.coframe_upper(s, e))
                        .scalar_product(&pf);
                }
            }
        }

        let mut formula = [[[0.0; 4]; 4]; 4];
        for b in 0..4 {
            for n in 0..4 {
                for k in 0..4 {
                    let mut deriv_term = 0.0;
                    for r in 0..4 {
                        for s in 0..4 {
                            for cc in 0..4 {
                                let eta_kc = if k == cc { METRIC[k] } else { 0.0 };
                                let eta_nc = if n == cc { METRIC[n] } else { 0.0 };
                                deriv_term += lambda[b][r]
                                    * lambda[cc][s]
                                    * (eta_kc * dgen[n][r][s] - eta_nc * dgen[k][r][s]);
                            }
                        }
                    }
                    formula[b][n][k] = c[b][n][k] - c_primed[b][n][k] + 2.0 * deriv_term;
                }
            }
        }

        torsion_norm = torsion_norm.max(direct.max_abs());
        for r in 0..4 {
            for n in 0..4 {
                for k in 0..4 {
                    route_difference = route_difference
                        .max((direct.components[r][n][k] - formula[r][n][k]).abs());
                }
            }
        }
    }

    Ok(TorsionCrosscheck {
        torsion_norm,
        route_difference,
        input_torsion_norm: input_norm,
    })
}

/// Inverse of a Lorentz-valued frame matrix: (L^-1)^a_b = eta L^T eta.
pub fn lorentz_matrix_inverse(m: &Mat4) -> Mat4 {
    let mut inv = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            inv[a][b] = METRIC[a] * m[b][a] * METRIC[b];
        }
    }
    inv
}

fn lorentz_matrix_inverse_partial(dm: &Mat4) -> Mat4 {
    // d(eta L^T eta) = eta (dL)^T eta
    lorentz_matrix_inverse(dm)
}
