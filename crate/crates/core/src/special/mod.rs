//! Zeta and Gamma functions, quadrature, and Whittaker functions.

pub mod gamma;
pub mod quad;
pub mod whittaker;
pub mod zeta;

pub use gamma::{beta, gamma, lgamma};
pub use quad::{QuadResult, QuadratureSpec};
pub use whittaker::{
    classical_whittaker, eigenvalues, whittaker_closed, whittaker_w, SpectralParam, UniChar,
};
pub use zeta::{divisor_sigma, lambda_completed, zeta};
