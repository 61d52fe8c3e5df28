//! Finite-dimensional operator-algebra toolkit for the metric characterization
//! of projections: a positive norm-one `p` is a projection exactly when the
//! sphere around the sphere around `p` is `{p}`.
//!
//! The [`witness`] engine turns that statement into an algorithm producing
//! checkable certificates; [`sphere`] holds the metric predicates and an exact
//! oracle for diagonal algebras; [`jordan`] provides the Jordan-algebra layer.

pub mod algebra;
pub mod calculus;
pub mod eigen;
pub mod error;
pub mod instances;
pub mod jordan;
pub mod matrix;
pub mod random;
pub mod sphere;
pub mod witness;

pub use algebra::{AlgebraDescriptor, Corner, Element, KindTag};
pub use error::{Error, Result};
pub use witness::{CaseTag, Verdict, WitnessCertificate};
