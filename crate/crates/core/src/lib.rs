//! Skew ruled surfaces reconstructed from their fundamental invariants
//! `(κ, δ, λ)`, relative normalizations given by support functions, and the
//! Laplace normal vector field `L = Δx / 2` of the relative metric.
//!
//! The modules build on each other bottom-up:
//!
//! * [`expr`]: expression parsing and jet evaluation,
//! * [`surface`]: frame integration and the Euclidean patch,
//! * [`relnorm`]: relative and equiaffine normals,
//! * [`laplace`]: the Laplace normal field and classification of its image,
//! * [`image`]: the Laplace image surface of non-conoidal surfaces,
//! * [`oracle`]: finite-difference and SVD checks independent of the closed forms,
//! * [`scene`] and [`commands`]: the batch front-end used by the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod expr;
pub mod image;
pub mod laplace;
pub mod oracle;
pub mod relnorm;
pub mod scene;
pub mod surface;

pub use error::{Error, Result};
