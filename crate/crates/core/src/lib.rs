//! Equilibrium stability of gravitating bodies on near-circular orbits around a central star.
//!
//! The crate has four layers:
//!
//! * [`model`]: bodies, pair couplings and the dimensionless Hamiltonian in the
//!   `(xi, theta)` coordinates, plus the Gibbs measure built from it.
//! * [`combinatorics`]: exhaustive labelled-graph enumeration and the tree-graph identities
//!   behind the cluster expansion, exact over rationals.
//! * [`bounds`]: closed-form and tree-sum upper bounds on the relative radial variance
//!   `epsilon` for similar-sized belts, power-law belts and geometric planet chains.
//! * [`sampler`]: Metropolis chains over the Gibbs measure and a two-body quadrature oracle
//!   used to check the bounds.
//!
//! Numeric code is generic over [`Scalar`] (`f64` or `f32`); the `*64` aliases below fix the
//! common choice.

// `!(x > 0)` is the intended spelling: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod sampler;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{
    pair_coupling, Body, CentralField, Configuration, FreeMeasure, GibbsModel, PairCoupling, StarSystem,
    GRAVITATIONAL_CONSTANT,
};
pub use scalar::{Rational, Scalar};

pub type Body64 = Body<f64>;
pub type StarSystem64 = StarSystem<f64>;
pub type Configuration64 = Configuration<f64>;
pub type GibbsModel64 = GibbsModel<f64>;
pub type EdgeWeights64 = combinatorics::EdgeWeights<f64>;
/// Bond weights in exact rational arithmetic.
pub type ExactEdgeWeights = combinatorics::EdgeWeights<Rational>;
pub type EpsilonBound64 = bounds::EpsilonBound<f64>;
pub type SampleStats64 = sampler::SampleStats<f64>;

pub type Body32 = Body<f32>;
pub type StarSystem32 = StarSystem<f32>;
pub type GibbsModel32 = GibbsModel<f32>;
