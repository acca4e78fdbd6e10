//! Exact computational invariants of toric hyperkähler (hypertoric)
//! varieties.
//!
//! A hypertoric variety is the hyperkähler quotient of a quaternionic vector
//! space by a subtorus of the standard torus, specified here by an integer
//! basis matrix of the subtorus lattice together with rational quotient
//! parameters. The crate computes, with exact integer/rational arithmetic
//! throughout:
//!
//! - walls and chambers of the parameter space, regularity and smoothness
//!   tests ([`torus`], [`wallcross`]);
//! - the hyperplane arrangement attached to a real parameter, its face poset
//!   and the bounded (compact-face) polyhedral complex carrying the core
//!   ([`arrangement`]);
//! - Betti numbers and two presentations of the cohomology ring, with an
//!   independent Hilbert-function cross-check ([`topology`]);
//! - semistability and closed-orbit oracles for the induced torus action,
//!   with Farkas certificates and a numerical convex-descent cross-check
//!   ([`stability`]);
//! - wall-crossing classification (isomorphism vs. Mukai flop) including the
//!   recursive fixed-locus spec ([`wallcross`]);
//! - SVG figures for planar slices ([`svg`]).

pub mod arrangement;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod stability;
pub mod svg;
pub mod topology;
pub mod torus;
pub mod wallcross;

pub use error::{Error, Result};
pub use linalg::{IntMatrix, SmithDecomposition};
pub use torus::{Parameter, TorusSpec, Wall};
