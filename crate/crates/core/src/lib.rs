//! Numerical spacetime algebra for desk-scale field theory checks.
//!
//! The crate builds up from a fixed-signature Clifford kernel Cl(1,3) to
//! Lorentz boosts and frames, electromagnetic multivector fields, local
//! rotor gauge transformations, tetrad connections with torsion, and
//! Dirac-Hestenes spinor fields on Riemann-Cartan backgrounds.
//!
//! Everything is plain immutable data and pure functions; grid sweeps are
//! data-parallel over events.

pub mod algebra;
pub mod boost;
pub mod connection;
pub mod dirac;
pub mod em;
pub mod error;
pub mod field;
pub mod gauge;
pub mod verify;
pub mod rng;
pub mod scenario;

pub use algebra::{Multivector, Rotor};
pub use field::{Event, EventGrid, MultivectorField};
