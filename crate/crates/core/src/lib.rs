//! Constructive approximation of smooth functions on the unit cube by shallow
//! networks.
//!
//! The crate builds two families of approximants and the machinery needed to
//! measure how fast they converge:
//!
//! - [`lattice`]: a windowed extension of the target is periodized on a box of
//!   side `L`, giving an exact expansion on `[0,1]^d` in frequencies on the
//!   shifted lattice `a + L^{-1}Z^d`.
//! - [`cosine_net`]: n-term truncations of that expansion (cosine / complex
//!   exponential networks).
//! - [`splines`] and [`reluk_net`]: every lattice exponential is expanded in a
//!   multiscale series of cardinal B-splines along its ridge direction; the
//!   resulting ridge atoms are selected greedily (or by stratified sampling)
//!   and emitted as ReLU^k networks.
//! - [`oracles`]: quadrature Sobolev norms, the 1D free-knot optimum and a
//!   uniform-grid piecewise polynomial baseline.
//! - [`harness`]: experiment configs, n-sweeps, slope fits and CSV output.

pub mod cosine_net;
pub mod error;
pub mod field;
pub mod harness;
pub mod lattice;
pub mod oracles;
pub mod reluk_net;
pub mod splines;
pub mod targets;

pub use num_complex::Complex64;

pub use cosine_net::{CosineNetwork, CosineTerm, WeightMode};
pub use error::{Error, Result};
pub use field::{FnField, ScalarField};
pub use harness::{ExperimentConfig, Method, RateReport, RateRow};
pub use lattice::{CutoffFunction, LatticeExpansion, Weight};
pub use oracles::{FreeKnotFit, QuadratureGrid};
pub use reluk_net::{Dictionary, ReLUkNetwork, RidgeAtom, SelectionMode};
pub use splines::{BSpline, MultiscaleExpansion, SplineSeries};
pub use targets::TargetFunction;
