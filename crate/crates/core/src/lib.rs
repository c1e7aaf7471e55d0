//! Exact rational models for spherical T-duality.
//!
//! Bases are finite-dimensional graded-commutative algebras over ℚ, sphere
//! bundles are odd extensions of them, and everything downstream (twisted
//! cohomology, the T-dual, the transform `τ_F`) is finite linear algebra
//! over [`Scalar`].

pub mod algebra;
pub mod bundle;
pub mod catalog;
pub mod complex;
pub mod error;
pub mod library;
pub mod matrix;
pub mod model_file;
pub mod scalar;
pub mod tduality;
pub mod twisted;

pub use algebra::{algebra_check, AlgebraBuilder, Axiom, AxiomViolation, Element, GradedAlgebra};
pub use bundle::{BundleElement, SphereBundleModel, TwistedClass};
pub use complex::{induced_map_on_cohomology, ChainMap, Complex, Grading, InducedMap, Layout};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::Scalar;
pub use tduality::{dualize, gauge_shift_pair, tau, tau_as_chain_map, verify_pair, CorrespondenceForm, TDualPair};
pub use twisted::{cup_h_operator, gauge_map, twisted_dims, CupOperator, TwistedComplex};
