//! Electromagnetic fields as multivector fields: the Coulomb solution, its
//! pullbacks and boosted closed forms, E/B decompositions, the flat Dirac
//! operator, Maxwell residuals, the action density, and probe worldlines.
//!
//! Natural units: c = 1, and the Coulomb field carries no 4*pi.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Multivector, METRIC};
use crate::boost::LorentzMatrix;
use crate::error::FieldError;
use crate::field::{
    AnalyticField, Differentiation, Event, EventGrid, FieldResult, MultivectorField, ScalarSamples,
};

/// Antisymmetric component matrix F_mu_nu of a bivector, relative to the
/// fiducial frame: F = 1/2 F_mu_nu g^mu ^ g^nu.
pub fn f_components(f: &Multivector) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let mask = (1usize << mu) | (1usize << nu);
            let sq = f64::from(crate::algebra::blade_square_sign(mask));
            let val = -sq * f.coeff(mask);
            out[mu][nu] = val;
            out[nu][mu] = -val;
        }
    }
    out
}

/// Rebuilds the bivector from components: F = sum_{mu<nu} F_mu_nu g^mu ^ g^nu.
pub fn from_f_components(comps: &[[f64; 4]; 4]) -> Multivector {
    let mut out = Multivector::ZERO;
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let mask = (1usize << mu) | (1usize << nu);
            out += Multivector::from_blade(mask, METRIC[mu] * METRIC[nu] * comps[mu][nu]);
        }
    }
    out
}

/// Components of a bivector relative to an arbitrary orthonormal coframe
/// (lower-index elements): F_ab = (theta_a ^ theta_b) . F.
pub fn f_components_in_frame(f: &Multivector, frame: &[Multivector; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in (a + 1)..4 {
            let val = frame[a].wedge(&frame[b]).scalar_product(f);
            out[a][b] = val;
            out[b][a] = -val;
        }
    }
    out
}

/// Electric and magnetic parts of a bivector in a chosen frame,
/// components on sigma_i = g_i g_0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EBSplit {
    pub e: [f64; 3],
    pub b: [f64; 3],
}

/// Splits a pure bivector as F = E + tau_g B relative to the frame's g0.
///
/// In components: E_i = F_0i and B = (-F_23, F_13, -F_12); this is the sign
/// combination under which the reconstruction below is exact and the boosted
/// Coulomb field satisfies B = v x E.
pub fn eb_decompose(f: &Multivector, frame: &[Multivector; 4]) -> Result<EBSplit, FieldError> {
    let off = (*f - f.grade_project(2)).norm();
    if off > 1e-12 * (1.0 + f.norm()) {
        return Err(FieldError::WrongGrade {
            expected: 2,
            off_grade_norm: off,
        });
    }
    let c = f_components_in_frame(f, frame);
    Ok(EBSplit {
        e: [c[0][1], c[0][2], c[0][3]],
        b: [-c[2][3], c[1][3], -c[1][2]],
    })
}

pub fn eb_decompose_fiducial(f: &Multivector) -> Result<EBSplit, FieldError> {
    eb_decompose(f, &fiducial_frame())
}

/// Reconstruction F = E + tau_g B in the given frame.
pub fn eb_compose(split: &EBSplit, frame: &[Multivector; 4]) -> Multivector {
    let g5 = frame[0]
        .geometric(&frame[1])
        .geometric(&frame[2])
        .geometric(&frame[3]);
    let mut e_part = Multivector::ZERO;
    let mut b_part = Multivector::ZERO;
    for i in 0..3 {
        let sigma = frame[i + 1].geometric(&frame[0]);
        e_part += sigma.scale(split.e[i]);
        b_part += sigma.scale(split.b[i]);
    }
    e_part + g5.geometric(&b_part)
}

pub fn eb_compose_fiducial(split: &EBSplit) -> Multivector {
    eb_compose(split, &fiducial_frame())
}

pub fn fiducial_frame() -> [Multivector; 4] {
    std::array::from_fn(Multivector::gamma)
}

fn spatial_norm(e: &Event) -> f64 {
    (e[1] * e[1] + e[2] * e[2] + e[3] * e[3]).sqrt()
}

/// Field of a charge q at rest at the spatial origin:
/// F_0i = q x^i / |x|^3, F_ij = 0.
pub fn coulomb_field(q: f64) -> MultivectorField {
    let value = move |e: &Event| -> FieldResult {
        let r = spatial_norm(e);
        if r == 0.0 {
            return Err(FieldError::Singular { event: *e });
        }
        let r3 = r * r * r;
        let mut comps = [[0.0; 4]; 4];
        for i in 1..4 {
            comps[0][i] = q * e[i] / r3;
            comps[i][0] = -comps[0][i];
        }
        Ok(from_f_components(&comps))
    };
    let partial = move |mu: usize, e: &Event| -> FieldResult {
        let r = spatial_norm(e);
        if r == 0.0 {
            return Err(FieldError::Singular { event: *e });
        }
        if mu == 0 {
            return Ok(Multivector::ZERO);
        }
        let r2 = r * r;
        let r5 = r2 * r2 * r;
        let mut comps = [[0.0; 4]; 4];
        for i in 1..4 {
            let delta = if i == mu { 1.0 } else { 0.0 };
            comps[0][i] = q * (delta * r2 - 3.0 * e[i] * e[mu]) / r5;
            comps[i][0] = -comps[0][i];
        }
        Ok(from_f_components(&comps))
    };
    MultivectorField::Analytic(
        AnalyticField::new(value)
            .with_partials(partial)
            .with_singular_distance(|e| spatial_norm(e)),
    )
}

/// Pullback of a bivector field under the active Lorentz point map:
/// Fbar_mu_nu(x) = (L^-1)^a_mu (L^-1)^b_nu F_ab(x(le)), x(le) = L^-1 x.
pub fn pullback_field(l: &LorentzMatrix, field: &MultivectorField) -> MultivectorField {
    let m = l.inverse();
    let inner = field.clone();
    let value = {
        let inner = inner.clone();
        move |e: &Event| -> FieldResult {
            let mapped = m.apply(*e);
            let f = inner.eval(&mapped)?;
            Ok(transform_components(&f, &m))
        }
    };
    let mut analytic = AnalyticField::new(value);
    if let Some(src) = inner.as_analytic() {
        if src.has_partials() {
            let src = src.clone();
            analytic = analytic.with_partials(move |kappa, e: &Event| -> FieldResult {
                let mapped = m.apply(*e);
                let mut acc = Multivector::ZERO;
                for lambda in 0..4 {
                    if m.0[lambda][kappa] == 0.0 {
                        continue;
                    }
                    let d = src.partial(lambda, &mapped, Differentiation::Analytic)?;
                    acc += transform_components(&d, &m).scale(m.0[lambda][kappa]);
                }
                Ok(acc)
            });
        }
        if let MultivectorField::Analytic(af) = &inner {
            if af.singular_distance(&[0.0; 4]).is_some() {
                let src = af.clone();
                analytic = analytic
                    .with_singular_distance(move |e| src.singular_distance(&m.apply(*e)).unwrap());
            }
        }
    }
    MultivectorField::Analytic(analytic)
}

fn transform_components(f: &Multivector, m: &LorentzMatrix) -> Multivector {
    let comps = f_components(f);
    let mut out = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in (mu + 1)..4 {
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    acc += m.0[a][mu] * m.0[b][nu] * comps[a][b];
                }
            }
            out[mu][nu] = acc;
            out[nu][mu] = -acc;
        }
    }
    from_f_components(&out)
}

/// Closed form of the pulled-back Coulomb field: the field of a charge
/// moving in the negative x1 direction with speed v,
///
///   Ebar = q gamma { (x1 + v x0)/Rb^3, x2/Rb^3, x3/Rb^3 },
///   Bbar = v_vec x Ebar,           v_vec = (-v, 0, 0),
///   Rb   = sqrt(gamma^2 (x1 + v x0)^2 + x2^2 + x3^2).
pub fn boosted_coulomb_closed_form(q: f64, v: f64) -> Result<MultivectorField, FieldError> {
    if !(v.abs() < 1.0) {
        return Err(FieldError::Singular { event: [v, 0.0, 0.0, 0.0] });
    }
    let g = 1.0 / (1.0 - v * v).sqrt();
    let eb_at = move |e: &Event| -> Result<(EBSplit, ()), FieldError> {
        let s = e[1] + v * e[0];
        let rb2 = g * g * s * s + e[2] * e[2] + e[3] * e[3];
        if rb2 == 0.0 {
            return Err(FieldError::Singular { event: *e });
        }
        let rb3 = rb2.powf(1.5);
        let ef = [q * g * s / rb3, q * g * e[2] / rb3, q * g * e[3] / rb3];
        let bf = [0.0, v * ef[2], -v * ef[1]];
        Ok((EBSplit { e: ef, b: bf }, ()))
    };
    let value = move |e: &Event| -> FieldResult {
        let (split, ()) = eb_at(e)?;
        Ok(eb_compose_fiducial(&split))
    };
    let partial = move |mu: usize, e: &Event| -> FieldResult {
        let s = e[1] + v * e[0];
        let rb2 = g * g * s * s + e[2] * e[2] + e[3] * e[3];
        if rb2 == 0.0 {
            return Err(FieldError::Singular { event: *e });
        }
        let rb = rb2.sqrt();
        let rb3 = rb2 * rb;
        let rb4 = rb2 * rb2;
        // u = (s, x2, x3); E_i = q g u_i / Rb^3
        let u = [s, e[2], e[3]];
        let du = match mu {
            0 => [v, 0.0, 0.0],
            1 => [1.0, 0.0, 0.0],
            2 => [0.0, 1.0, 0.0],
            _ => [0.0, 0.0, 1.0],
        };
        let drb = match mu {
            0 => g * g * s * v / rb,
            1 => g * g * s / rb,
            2 => e[2] / rb,
            _ => e[3] / rb,
        };
        let de: [f64; 3] =
            std::array::from_fn(|i| q * g * (du[i] / rb3 - 3.0 * u[i] * drb / rb4));
        let db = [0.0, v * de[2], -v * de[1]];
        Ok(eb_compose_fiducial(&EBSplit { e: de, b: db }))
    };
    Ok(MultivectorField::Analytic(
        AnalyticField::new(value)
            .with_partials(partial)
            .with_singular_distance(move |e| {
                let s = e[1] + v * e[0];
                (s * s + e[2] * e[2] + e[3] * e[3]).sqrt()
            }),
    ))
}

/// Field of a uniformly moving point charge (through the origin at t = 0),
/// reduced from the Lienard-Wiechert potentials to present-position form:
///
///   E = q (1 - u^2) Rv / (|Rv|^2 - |Rv x u|^2)^(3/2),  Rv = x - u t,
///   B = u x E.
///
/// Independent oracle for `boosted_coulomb_closed_form` (set u = (-v, 0, 0)).
pub fn lienard_wiechert_uniform(q: f64, u: [f64; 3]) -> Result<MultivectorField, FieldError> {
    let u2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    if !(u2 < 1.0) {
        return Err(FieldError::Singular { event: [u2, 0.0, 0.0, 0.0] });
    }
    let value = move |e: &Event| -> FieldResult {
        let rv = [e[1] - u[0] * e[0], e[2] - u[1] * e[0], e[3] - u[2] * e[0]];
        let cross = cross3(rv, u);
        let d2 = dot3(rv, rv) - dot3(cross, cross);
        if d2 <= 0.0 {
            return Err(FieldError::Singular { event: *e });
        }
        let d3 = d2.powf(1.5);
        let ef: [f64; 3] = std::array::from_fn(|i| q * (1.0 - u2) * rv[i] / d3);
        let bf = cross3(u, ef);
        Ok(eb_compose_fiducial(&EBSplit { e: ef, b: bf }))
    };
    Ok(MultivectorField::Analytic(
        AnalyticField::new(value).with_singular_distance(move |e| {
            let rv = [e[1] - u[0] * e[0], e[2] - u[1] * e[0], e[3] - u[2] * e[0]];
            dot3(rv, rv).sqrt()
        }),
    ))
}

pub fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Flat Dirac operator dF = g^mu d_mu F at a single event.
pub fn dirac_flat_at(field: &MultivectorField, e: &Event, diff: Differentiation) -> FieldResult {
    match field {
        MultivectorField::Analytic(f) => {
            let mut acc = Multivector::ZERO;
            for mu in 0..4 {
                acc += Multivector::gamma_upper(mu).geometric(&f.partial(mu, e, diff)?);
            }
            Ok(acc)
        }
        MultivectorField::Sampled(_) => {
            Err(FieldError::MissingAnalyticDerivatives)
        }
    }
}

/// Flat Dirac operator as a field transform. Analytic fields map to analytic
/// closures; sampled fields map to grid central differences with border
/// samples flagged.
pub fn dirac_operator_flat(field: &MultivectorField, diff: Differentiation) -> MultivectorField {
    match field {
        MultivectorField::Analytic(f) => {
            let f = f.clone();
            MultivectorField::analytic(move |e| {
                let mut acc = Multivector::ZERO;
                for mu in 0..4 {
                    acc += Multivector::gamma_upper(mu).geometric(&f.partial(mu, e, diff)?);
                }
                Ok(acc)
            })
        }
        MultivectorField::Sampled(s) => {
            let samples: Vec<Option<Multivector>> = (0..s.grid.len())
                .into_par_iter()
                .map(|flat| {
                    let mut acc = Multivector::ZERO;
                    for mu in 0..4 {
                        acc += Multivector::gamma_upper(mu).geometric(&s.partial(mu, flat)?);
                    }
                    Some(acc)
                })
                .collect();
            MultivectorField::Sampled(crate::field::SampledField {
                grid: s.grid.clone(),
                samples,
            })
        }
    }
}

/// Configuration for residual sweeps over a grid.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ResidualConfig {
    pub diff: Differentiation,
    /// Samples closer than `exclusion_factor * h` to a field singularity
    /// are excluded from norms.
    pub exclusion_factor: f64,
}

impl ResidualConfig {
    pub fn central(h: f64) -> ResidualConfig {
        ResidualConfig {
            diff: Differentiation::CentralDiff { h },
            exclusion_factor: 2.0,
        }
    }
}

/// Pointwise Maxwell residual dF - J with its grade split:
/// `bianchi` is the grade-3 part of dF (the dF = 0 check) and `source` is
/// the grade-1 part minus J (the delta F = -J check).
#[derive(Clone, Debug)]
pub struct MaxwellResidual {
    pub total: ScalarSamples,
    pub bianchi: ScalarSamples,
    pub source: ScalarSamples,
    pub h: f64,
}

/// Summary statistics in the shape of the JSON residual report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualReport {
    pub h: f64,
    pub residual_l2: f64,
    pub residual_linf: f64,
    pub excluded_points: usize,
}

impl MaxwellResidual {
    pub fn report(&self) -> ResidualReport {
        ResidualReport {
            h: self.h,
            residual_l2: self.total.l2(),
            residual_linf: self.total.linf(),
            excluded_points: self.total.excluded(),
        }
    }
}

/// Sweeps |dF - J| over a grid of probe events.
pub fn maxwell_residual(
    f: &MultivectorField,
    j: &MultivectorField,
    grid: &EventGrid,
    config: ResidualConfig,
) -> MaxwellResidual {
    let h = config.diff.step().unwrap_or(grid.spacing);
    let cutoff = config.exclusion_factor * h;
    let rows: Vec<Option<(f64, f64, f64)>> = (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let e = grid.event_at(flat);
            if let Some(d) = f.singular_distance(&e) {
                if d < cutoff {
                    return None;
                }
            }
            let df = dirac_flat_at(f, &e, config.diff).ok()?;
            let jv = j.eval(&e).ok()?;
            let diff = df - jv;
            Some((
                diff.norm(),
                df.grade_project(3).norm(),
                (df.grade_project(1) - jv).norm(),
            ))
        })
        .collect();
    let total = ScalarSamples {
        grid: grid.clone(),
        values: rows.iter().map(|r| r.map(|(t, _, _)| t)).collect(),
    };
    let bianchi = ScalarSamples {
        grid: grid.clone(),
        values: rows.iter().map(|r| r.map(|(_, b, _)| b)).collect(),
    };
    let source = ScalarSamples {
        grid: grid.clone(),
        values: rows.iter().map(|r| r.map(|(_, _, s)| s)).collect(),
    };
    MaxwellResidual {
        total,
        bianchi,
        source,
        h,
    }
}

/// Halving study: returns per-step residual reports and the observed
/// convergence orders log2(r_h / r_{h/2}).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub steps: Vec<ResidualReport>,
    pub l2_ratios: Vec<f64>,
    pub observed_orders: Vec<f64>,
}

pub fn convergence_study(
    f: &MultivectorField,
    j: &MultivectorField,
    grid: &EventGrid,
    h_values: &[f64],
    exclusion_factor: f64,
) -> ConvergenceReport {
    let steps: Vec<ResidualReport> = h_values
        .iter()
        .map(|&h| {
            maxwell_residual(
                f,
                j,
                grid,
                ResidualConfig {
                    diff: Differentiation::CentralDiff { h },
                    exclusion_factor,
                },
            )
            .report()
        })
        .collect();
    let l2_ratios: Vec<f64> = steps
        .windows(2)
        .map(|w| w[0].residual_l2 / w[1].residual_l2)
        .collect();
    let observed_orders = l2_ratios.iter().map(|r| r.log2()).collect();
    ConvergenceReport {
        steps,
        l2_ratios,
        observed_orders,
    }
}

/// Coefficient of tau_g in F ^ star(F) - A ^ star(J) at one event.
pub fn action_density_at(f: &Multivector, a: &Multivector, j: &Multivector) -> f64 {
    let four_form = f.wedge(&f.hodge_star()) - a.wedge(&j.hodge_star());
    four_form.coeff(0b1111)
}

/// The Lagrangian 4-form coefficient as a scalar field.
pub fn maxwell_action_density(
    f: &MultivectorField,
    a: &MultivectorField,
    j: &MultivectorField,
    grid: &EventGrid,
) -> ScalarSamples {
    let values: Vec<Option<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|flat| {
            let e = grid.event_at(flat);
            let fv = f.eval(&e).ok()?;
            let av = a.eval(&e).ok()?;
            let jv = j.eval(&e).ok()?;
            Some(action_density_at(&fv, &av, &jv))
        })
        .collect();
    ScalarSamples {
        grid: grid.clone(),
        values,
    }
}

/// Probe charge state on its worldline. The proper velocity is a grade-1
/// multivector with unit norm v . v = 1.
#[derive(Clone, Copy, Debug)]
pub struct ProbeCharge {
    pub mass: f64,
    pub charge: f64,
    pub event: Event,
    pub velocity: Multivector,
}

impl ProbeCharge {
    pub fn at_rest(mass: f64, charge: f64, event: Event) -> ProbeCharge {
        ProbeCharge {
            mass,
            charge,
            event,
            velocity: Multivector::gamma(0),
        }
    }

    pub fn velocity_norm_defect(&self) -> f64 {
        (self.velocity.scalar_product(&self.velocity) - 1.0).abs()
    }
}

/// One RK4 step of m dv/dtau = q (v . F), with the proper velocity
/// projected back to unit norm afterwards. Returns the advanced state and
/// the pre-projection norm drift |sqrt(v.v) - 1|.
pub fn lorentz_force_step(
    charge: &ProbeCharge,
    field: &MultivectorField,
    dtau: f64,
) -> Result<(ProbeCharge, f64), FieldError> {
    let qm = charge.charge / charge.mass;
    let deriv = |event: &Event, velocity: &Multivector| -> Result<([f64; 4], Multivector), FieldError> {
        let f = field.eval(event)?;
        let acc = velocity.left_contraction(&f).scale(qm);
        Ok((velocity.vector_part(), acc))
    };

    let (k1x, k1v) = deriv(&charge.event, &charge.velocity)?;
    let (k2x, k2v) = deriv(
        &advance(&charge.event, &k1x, dtau / 2.0),
        &(charge.velocity + k1v.scale(dtau / 2.0)),
    )?;
    let (k3x, k3v) = deriv(
        &advance(&charge.event, &k2x, dtau / 2.0),
        &(charge.velocity + k2v.scale(dtau / 2.0)),
    )?;
    let (k4x, k4v) = deriv(
        &advance(&charge.event, &k3x, dtau),
        &(charge.velocity + k3v.scale(dtau)),
    )?;

    let event = std::array::from_fn(|i| {
        charge.event[i] + dtau / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i])
    });
    let velocity =
        charge.velocity + (k1v + k2v.scale(2.0) + k3v.scale(2.0) + k4v).scale(dtau / 6.0);

    let norm2 = velocity.scalar_product(&velocity);
    if norm2 <= 0.0 {
        return Err(FieldError::IntegrationAborted {
            steps: 1,
            reason: format!("velocity left the timelike cone: v.v = {norm2}"),
        });
    }
    let drift = (norm2.sqrt() - 1.0).abs();
    let projected = velocity.scale(1.0 / norm2.sqrt());
    Ok((
        ProbeCharge {
            event,
            velocity: projected,
            ..*charge
        },
        drift,
    ))
}

fn advance(e: &Event, dx: &[f64; 4], dt: f64) -> Event {
    std::array::from_fn(|i| e[i] + dx[i] * dt)
}

/// Worldline summary after n fixed steps.
#[derive(Clone, Debug)]
pub struct WorldlineRun {
    pub state: ProbeCharge,
    pub steps: usize,
    pub max_norm_drift: f64,
}

pub fn integrate_worldline(
    start: ProbeCharge,
    field: &MultivectorField,
    dtau: f64,
    steps: usize,
) -> Result<WorldlineRun, FieldError> {
    let mut state = start;
    let mut max_drift = 0.0f64;
    for k in 0..steps {
        let (next, drift) = lorentz_force_step(&state, field, dtau).map_err(|err| match err {
            FieldError::Singular { event } => FieldError::IntegrationAborted {
                steps: k,
                reason: format!("singular field evaluation at {event:?}"),
            },
            other => other,
        })?;
        state = next;
        max_drift = max_drift.max(drift);
    }
    Ok(WorldlineRun {
        state,
        steps,
        max_norm_drift: max_drift,
    })
}

#[cfg(test)]
mod tests;
