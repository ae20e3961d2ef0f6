//! Multivector fields over Minkowski spacetime: analytic closures, uniform
//! grids of samples, and finite-difference machinery.
//!
//! Events carry coordinates in the Einstein-Lorentz-Poincare gauge
//! (global Cartesian chart, metric diag(+1,-1,-1,-1)).

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Multivector;
use crate::error::FieldError;

/// A spacetime event: coordinates (x0, x1, x2, x3) = (t, x, y, z).
pub type Event = [f64; 4];

pub type FieldResult = Result<Multivector, FieldError>;

type ValueFn = Arc<dyn Fn(&Event) -> FieldResult + Send + Sync>;
type PartialFn = Arc<dyn Fn(usize, &Event) -> FieldResult + Send + Sync>;
type DistanceFn = Arc<dyn Fn(&Event) -> f64 + Send + Sync>;

/// Default cap on grid sizes: 33^4 events.
pub const DEFAULT_GRID_BUDGET: usize = 33 * 33 * 33 * 33;

/// Uniform four-dimensional grid of events.
///
/// Flat index layout is row-major with axis 0 slowest:
/// `index = ((i0 * n1 + i1) * n2 + i2) * n3 + i3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventGrid {
    pub origin: [f64; 4],
    pub spacing: f64,
    pub extents: [usize; 4],
}

impl EventGrid {
    pub fn new(origin: [f64; 4], spacing: f64, extents: [usize; 4]) -> Result<EventGrid, FieldError> {
        Self::with_budget(origin, spacing, extents, DEFAULT_GRID_BUDGET)
    }

    pub fn with_budget(
        origin: [f64; 4],
        spacing: f64,
        extents: [usize; 4],
        budget: usize,
    ) -> Result<EventGrid, FieldError> {
        if spacing <= 0.0 {
            return Err(FieldError::NonPositiveSpacing { h: spacing });
        }
        let points: usize = extents.iter().product();
        if points > budget {
            return Err(FieldError::GridBudgetExceeded { points, budget });
        }
        Ok(EventGrid {
            origin,
            spacing,
            extents,
        })
    }

    /// Cubic grid centered on `center` with `n` points per axis.
    pub fn centered(center: [f64; 4], spacing: f64, n: usize) -> Result<EventGrid, FieldError> {
        let half = spacing * (n.saturating_sub(1)) as f64 / 2.0;
        let origin = std::array::from_fn(|i| center[i] - half);
        EventGrid::new(origin, spacing, [n; 4])
    }

    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn indices_of(&self, flat: usize) -> [usize; 4] {
        let [_, n1, n2, n3] = self.extents;
        let i3 = flat % n3;
        let rest = flat / n3;
        let i2 = rest % n2;
        let rest = rest / n2;
        let i1 = rest % n1;
        let i0 = rest / n1;
        [i0, i1, i2, i3]
    }

    pub fn event_at(&self, flat: usize) -> Event {
        let idx = self.indices_of(flat);
        std::array::from_fn(|axis| self.origin[axis] + self.spacing * idx[axis] as f64)
    }

    pub fn events(&self) -> impl Iterator<Item = Event> + '_ {
        (0..self.len()).map(|i| self.event_at(i))
    }
}

/// How to take coordinate partial derivatives of a field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Differentiation {
    /// Require analytic partial closures; error when absent.
    Analytic,
    /// Second-order central differences with step h.
    CentralDiff { h: f64 },
    /// Analytic when the field provides closures, else central differences.
    Auto { h: f64 },
}

impl Differentiation {
    pub fn step(&self) -> Option<f64> {
        match self {
            Differentiation::Analytic => None,
            Differentiation::CentralDiff { h } | Differentiation::Auto { h } => Some(*h),
        }
    }
}

/// Analytic multivector field: a pure closure, optionally with analytic
/// coordinate partials and a distance-to-singularity estimate.
#[derive(Clone)]
pub struct AnalyticField {
    value: ValueFn,
    partials: Option<PartialFn>,
    singular_distance: Option<DistanceFn>,
}

impl AnalyticField {
    pub fn new(value: impl Fn(&Event) -> FieldResult + Send + Sync + 'static) -> AnalyticField {
        AnalyticField {
            value: Arc::new(value),
            partials: None,
            singular_distance: None,
        }
    }

    pub fn constant(m: Multivector) -> AnalyticField {
        AnalyticField::new(move |_| Ok(m)).with_partials(|_, _| Ok(Multivector::ZERO))
    }

    pub fn with_partials(
        mut self,
        partials: impl Fn(usize, &Event) -> FieldResult + Send + Sync + 'static,
    ) -> AnalyticField {
        self.partials = Some(Arc::new(partials));
        self
    }

    /// Spatial distance from an event to the nearest field singularity,
    /// used to exclude polluted samples from grid norms.
    pub fn with_singular_distance(
        mut self,
        distance: impl Fn(&Event) -> f64 + Send + Sync + 'static,
    ) -> AnalyticField {
        self.singular_distance = Some(Arc::new(distance));
        self
    }

    pub fn eval(&self, e: &Event) -> FieldResult {
        (self.value)(e)
    }

    pub fn has_partials(&self) -> bool {
        self.partials.is_some()
    }

    pub fn singular_distance(&self, e: &Event) -> Option<f64> {
        self.singular_distance.as_ref().map(|d| d(e))
    }

    pub fn partial(&self, mu: usize, e: &Event, diff: Differentiation) -> FieldResult {
        match diff {
            Differentiation::Analytic => match &self.partials {
                Some(p) => p(mu, e),
                None => Err(FieldError::MissingAnalyticDerivatives),
            },
            Differentiation::CentralDiff { h } => self.central_diff(mu, e, h),
            Differentiation::Auto { h } => match &self.partials {
                Some(p) => p(mu, e),
                None => self.central_diff(mu, e, h),
            },
        }
    }

    fn central_diff(&self, mu: usize, e: &Event, h: f64) -> FieldResult {
        let mut fwd = *e;
        fwd[mu] += h;
        let mut bwd = *e;
        bwd[mu] -= h;
        Ok((self.eval(&fwd)? - self.eval(&bwd)?).scale(0.5 / h))
    }
}

impl std::fmt::Debug for AnalyticField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticField")
            .field("has_partials", &self.partials.is_some())
            .field("has_singular_distance", &self.singular_distance.is_some())
            .finish()
    }
}

/// Field sampled on a uniform grid. `None` marks flagged samples (singular
/// evaluations or stencils reaching outside the grid); they are excluded
/// from norms.
#[derive(Clone, Debug)]
pub struct SampledField {
    pub grid: EventGrid,
    pub samples: Vec<Option<Multivector>>,
}

impl SampledField {
    pub fn from_analytic(grid: EventGrid, field: &AnalyticField) -> SampledField {
        let samples: Vec<Option<Multivector>> = (0..grid.len())
            .into_par_iter()
            .map(|i| field.eval(&grid.event_at(i)).ok())
            .collect();
        SampledField { grid, samples }
    }

    /// Central difference along axis `mu` using the stored samples; border
    /// samples and neighbors of flagged samples come back flagged.
    pub fn partial(&self, mu: usize, flat: usize) -> Option<Multivector> {
        let idx = self.grid.indices_of(flat);
        if idx[mu] == 0 || idx[mu] + 1 >= self.grid.extents[mu] {
            return None;
        }
        let stride: usize = self.grid.extents[mu + 1..].iter().product();
        let fwd = self.samples[flat + stride]?;
        let bwd = self.samples[flat - stride]?;
        Some((fwd - bwd).scale(0.5 / self.grid.spacing))
    }
}

/// A multivector field, either analytic or sampled.
#[derive(Clone, Debug)]
pub enum MultivectorField {
    Analytic(AnalyticField),
    Sampled(SampledField),
}

impl MultivectorField {
    pub fn analytic(value: impl Fn(&Event) -> FieldResult + Send + Sync + 'static) -> Self {
        MultivectorField::Analytic(AnalyticField::new(value))
    }

    pub fn constant(m: Multivector) -> Self {
        MultivectorField::Analytic(AnalyticField::constant(m))
    }

    pub fn zero() -> Self {
        Self::constant(Multivector::ZERO)
    }

    pub fn eval(&self, e: &Event) -> FieldResult {
        match self {
            MultivectorField::Analytic(f) => f.eval(e),
            MultivectorField::Sampled(s) => {
                let flat = nearest_index(&s.grid, e)?;
                s.samples[flat].ok_or(FieldError::Singular { event: *e })
            }
        }
    }

    pub fn as_analytic(&self) -> Option<&AnalyticField> {
        match self {
            MultivectorField::Analytic(f) => Some(f),
            MultivectorField::Sampled(_) => None,
        }
    }

    pub fn singular_distance(&self, e: &Event) -> Option<f64> {
        self.as_analytic().and_then(|f| f.singular_distance(e))
    }

    /// Samples the field on a grid (identity for already-sampled fields on
    /// the same grid).
    pub fn sample(&self, grid: &EventGrid) -> SampledField {
        match self {
            MultivectorField::Analytic(f) => SampledField::from_analytic(grid.clone(), f),
            MultivectorField::Sampled(s) => s.clone(),
        }
    }
}

fn nearest_index(grid: &EventGrid, e: &Event) -> Result<usize, FieldError> {
    let mut flat = 0usize;
    for axis in 0..4 {
        let pos = (e[axis] - grid.origin[axis]) / grid.spacing;
        let i = pos.round();
        if (pos - i).abs() > 1e-9 || i < 0.0 || i as usize >= grid.extents[axis] {
            return Err(FieldError::Singular { event: *e });
        }
        flat = flat * grid.extents[axis] + i as usize;
    }
    Ok(flat)
}

/// Scalar samples over a grid, with flagged entries excluded from norms.
#[derive(Clone, Debug)]
pub struct ScalarSamples {
    pub grid: EventGrid,
    pub values: Vec<Option<f64>>,
}

impl ScalarSamples {
    /// Root-mean-square over the included samples.
    pub fn l2(&self) -> f64 {
        let (sum, n) = self
            .values
            .iter()
            .flatten()
            .fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
        if n == 0 {
            0.0
        } else {
            (sum / n as f64).sqrt()
        }
    }

    pub fn linf(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn excluded(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn included(&self) -> usize {
        self.values.len() - self.excluded()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout_and_budget() {
        let g = EventGrid::new([0.0; 4], 0.5, [2, 3, 4, 5]).unwrap();
        assert_eq!(g.len(), 120);
        assert_eq!(g.indices_of(0), [0, 0, 0, 0]);
        assert_eq!(g.indices_of(119), [1, 2, 3, 4]);
        let e = g.event_at(g.len() - 1);
        assert_eq!(e, [0.5, 1.0, 1.5, 2.0]);

        assert!(matches!(
            EventGrid::new([0.0; 4], 0.1, [40, 40, 40, 40]),
            Err(FieldError::GridBudgetExceeded { .. })
        ));
        assert!(matches!(
            EventGrid::new([0.0; 4], 0.0, [2; 4]),
            Err(FieldError::NonPositiveSpacing { .. })
        ));
    }

    #[test]
    fn analytic_partial_modes() {
        // f(x) = x1^2 * g0, analytic partial provided
        let f = AnalyticField::new(|e| Ok(Multivector::gamma(0).scale(e[1] * e[1])))
            .with_partials(|mu, e| {
                Ok(if mu == 1 {
                    Multivector::gamma(0).scale(2.0 * e[1])
                } else {
                    Multivector::ZERO
                })
            });
        let e = [0.0, 3.0, 0.0, 0.0];
        let exact = f.partial(1, &e, Differentiation::Analytic).unwrap();
        assert!((exact - Multivector::gamma(0).scale(6.0)).max_abs_coeff() <= 1e-14);
        // quadratic: central difference is exact up to roundoff
        let fd = f
            .partial(1, &e, Differentiation::CentralDiff { h: 0.1 })
            .unwrap();
        assert!((fd - Multivector::gamma(0).scale(6.0)).max_abs_coeff() <= 1e-12);

        let bare = AnalyticField::new(|e| Ok(Multivector::gamma(0).scale(e[1] * e[1])));
        assert!(matches!(
            bare.partial(1, &e, Differentiation::Analytic),
            Err(FieldError::MissingAnalyticDerivatives)
        ));
        assert!(bare.partial(1, &e, Differentiation::Auto { h: 0.1 }).is_ok());
    }

    #[test]
    fn sampled_partial_flags_borders() {
        let grid = EventGrid::new([0.0; 4], 0.25, [1, 5, 1, 1]).unwrap();
        let f = AnalyticField::new(|e| Ok(Multivector::scalar(e[1] * e[1])));
        let s = SampledField::from_analytic(grid, &f);
        assert!(s.partial(1, 0).is_none());
        let mid = s.partial(1, 2).unwrap();
        assert!((mid.scalar_part() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn scalar_sample_norms_skip_flagged() {
        let grid = EventGrid::new([0.0; 4], 1.0, [1, 1, 1, 4]).unwrap();
        let s = ScalarSamples {
            grid,
            values: vec![Some(3.0), None, Some(-4.0), Some(0.0)],
        };
        assert_eq!(s.excluded(), 1);
        assert!((s.linf() - 4.0).abs() <= 1e-15);
        let expected = ((9.0 + 16.0 + 0.0) / 3.0f64).sqrt();
        assert!((s.l2() - expected).abs() <= 1e-15);
    }
}
