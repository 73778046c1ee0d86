//! Special functions and quadrature used by the closed forms and by every
//! verification path.

mod gamma;
mod hypergeometric;
mod laguerre;
mod quadrature;

pub use gamma::{beta, gamma, ln_factorial, ln_gamma};
pub use hypergeometric::{hyp1f1_poly, hyp1f1_series, laguerre_conversion};
pub use laguerre::{
    laguerre, laguerre_derivative, laguerre_second_derivative, laguerre_x_derivative,
};
pub use quadrature::{
    gauss_legendre_nodes, integrate, integrate_with_estimate, Quadrature, QuadratureRule,
};
