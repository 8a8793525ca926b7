//! Quantum Schur algebras of affine type C and their stabilized versions.

pub mod algebra;
pub mod bases;
pub mod coeffs;
pub mod error;
pub mod fforacle;
pub mod permat;
pub mod qpoly;
pub mod stab;

pub use algebra::{Algebra, AlgebraElement, Element, Level, StabElement};
pub use error::{Error, Result};
pub use permat::{AlgebraType, IndexSet, IndexVector, PeriodicMatrix};
pub use qpoly::{BivarPoly, Laurent, Poly};
