//! Bound states of the N-dimensional radial Schrödinger equation with the
//! pseudoharmonic potential `V(r) = a1 r^2 + a2 / r^2 + a3`.
//!
//! * [`params`] reduces potential coefficients and quantum numbers to the
//!   symbols shared by every closed form.
//! * [`spectrum`] and [`wavefunction`] hold the exact energies and
//!   normalized radial eigenfunctions.
//! * [`ladder`] realizes the SU(1,1) ladder operators spectrally and as
//!   differential operators.
//! * [`oracle`] is an independent finite-difference eigensolver.
//! * [`specfun`] provides Gamma, Laguerre, 1F1 and quadrature.

// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ladder;
pub mod oracle;
pub mod params;
pub mod specfun;
pub mod spectrum;
pub mod tolerances;
pub mod wavefunction;

pub use error::{Error, Result};
pub use params::{
    from_molecular, reduce, CoefficientSet, MolecularParams, QuantumNumbers, ReducedParams,
    UnitSystem,
};
