//! Scalar curvature of invariant metrics on compact Lie groups and
//! homogeneous spaces, with numerical rigidity certificates for
//! bi-invariant (normal homogeneous) metrics.
//!
//! The pipeline is: build a [`lie_core::LieAlgebra`], pick a bi-invariant
//! metric and orthonormalize ([`binorm`]), evaluate curvature of diagonal
//! metrics ([`curvature`], [`homogeneous`]), then probe rigidity over the
//! cone `λ ≥ 1` ([`rigidity`]).

pub mod binorm;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod homogeneous;
pub mod lie_core;
pub mod rigidity;
pub mod tensor;
pub mod tolerance;

pub use error::{Error, Result};
