//! Clifford algebra Cl(1,3) kernel: multivector storage, products,
//! involutions, duality, exponentials, and a matrix-representation oracle.

mod matrix_rep;
mod multivector;
mod rotor;

pub use matrix_rep::{matrix_rep, CMat4};
pub use multivector::{blade_square_sign, Multivector, BLADE_COUNT, BLADE_NAMES, METRIC};
pub use rotor::{exp_bivector, Rotor, ROTOR_UNIT_TOL};
