//! Moment-preserving recombination of atomic measures.
//!
//! Any finite measure, restricted to a finite-dimensional space `V` of
//! integrable functions, agrees with an atomic measure on at most `dim(V)`
//! points. This crate computes such measures for discrete inputs and builds
//! two things on top:
//!
//! - [`mvt`]: two-point mean-value certificates
//!   `mean(f) = lambda f(x0) + (1 - lambda) f(x1)`, valid for any `f`, and the
//!   classical one-point witness for continuous `f` on an interval;
//! - [`cubature`]: compressed cubature rules with at most `C(n + d, d)`
//!   positive-weight nodes that are exact on polynomials of degree `<= n`.
//!
//! ```
//! use richter::{discretize, two_point_mvt, SamplerSpec};
//!
//! let lebesgue = discretize(|_| 1.0, &SamplerSpec::grid_1d(1000, 0.0, 1.0)?)?;
//! let step = |x: &[f64]| if x[0] <= 0.5 { 1.0 } else { 2.0 };
//! let cert = two_point_mvt(&lebesgue, step, 1e-9)?;
//! assert!((cert.mean - 1.5).abs() < 1e-12);
//! assert!((cert.lambda - 0.5).abs() < 1e-10);
//! # Ok::<(), richter::Error>(())
//! ```
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basis;
pub mod cli;
pub mod cubature;
pub mod error;
pub mod expr;
pub mod io;
pub mod linalg;
pub mod measure;
pub mod mvt;
pub mod recombine;
pub mod sampler;

pub use basis::{basis_dimension, eval_matrix, moments, BasisFn, FunctionBasis, MomentVector};
pub use cubature::{compress_to_cubature, verify_exactness, CubatureRule, ExactnessReport};
pub use error::{Error, Result};
pub use measure::{integrate, DiscreteMeasure, Point};
pub use mvt::{one_point_mvt_1d, two_point_mvt, MvtCertificate, OnePointOptions, OnePointWitness};
pub use recombine::{elimination_step, reduce, ReduceOptions, ReductionReport, DEFAULT_TOL};
pub use sampler::{discretize, SamplerSpec};
