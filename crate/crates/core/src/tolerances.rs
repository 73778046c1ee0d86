//! Verification tolerances shared by the library checks, the CLI `verify`
//! command and the acceptance suite.
//!
//! All values are relative unless the name says otherwise.

/// Closed-form identities evaluated in plain f64 arithmetic
/// (root consistency, two-route energies, special-case collapse).
pub const ANALYTIC: f64 = 1e-12;

/// Finite-difference eigenvalues after Richardson extrapolation versus the
/// closed-form spectrum.
pub const ORACLE: f64 = 1e-6;

/// Quadrature of the normalization integral (absolute deviation from 1).
pub const NORMALIZATION: f64 = 1e-8;

/// Quadrature of overlaps between distinct states (absolute).
pub const ORTHOGONALITY: f64 = 1e-8;

/// Weighted radial-equation residual at an exact eigenpair.
pub const RESIDUAL_EXACT: f64 = 1e-9;

/// Minimum residual expected when the energy is detuned by a tenth of a
/// level spacing.
pub const RESIDUAL_DETUNED: f64 = 1e-2;

/// Pointwise agreement of the differential ladder action with
/// `lambda * neighbour`, relative to the largest sample magnitude.
pub const LADDER_DIFFERENTIAL: f64 = 1e-10;

/// Commutators and the Casimir operator in the spectral representation.
pub const ALGEBRA: f64 = 1e-13;

/// Composition of `q` ladder steps versus the closed product.
pub const POWER: f64 = 1e-12;

/// Integral identities (convolution/Beta/1F1 and the weighted Laguerre
/// norm) evaluated by adaptive quadrature.
pub const INTEGRAL_IDENTITY: f64 = 1e-8;

/// Polynomial 1F1 through the Laguerre conversion versus direct series.
pub const HYPERGEOMETRIC: f64 = 1e-10;

/// Default target for adaptive quadrature used by the checks above.
pub const QUADRATURE: f64 = 1e-12;
