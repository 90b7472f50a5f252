//! Exact structure-constant workbench for finite-dimensional n-ary algebras.
//!
//! Everything is computed over the rationals or a prime field with exact
//! arithmetic: products and multiplication operators, the total
//! commutativity and `D_{x,y}` checks, ideals and simplicity, derivation
//! algebras, multilinear identity spaces and a catalog of concrete
//! algebras (including ternary algebras built from Cayley–Dickson doubling).

pub mod algebra;
pub mod catalog;
pub mod checks;
pub mod derivations;
pub mod field;
pub mod ideals;
pub mod identities;
pub mod linalg;

pub use algebra::{AlgebraError, AlgebraResult, Element, NAryAlgebra, SymmetryHint};
pub use checks::{ArgGroup, Status, Verdict, Witness, WitnessKind};
pub use field::{FieldError, FieldKind, FieldSpec, Scalar};
pub use linalg::{matrix_algebra_closure, LinalgError, Matrix, SubspaceBasis};
