//! Exact and numerical machinery for Eisenstein series on Sp(4).
//!
//! The crate is organised bottom-up:
//! [`symplectic`] (matrices, Plücker data, Iwasawa coordinates),
//! [`cosets`] (coset representatives and Bruhat factorisation),
//! [`ramanujan`] (Sp(4) Ramanujan sums and their Dirichlet series),
//! [`special`] (zeta, Beta, quadrature and Whittaker functions) and
//! [`eisenstein`] (series evaluation, constant terms and Fourier coefficients).

pub mod arith;
pub mod cosets;
pub mod eisenstein;
pub mod ramanujan;
pub mod special;
pub mod symplectic;

pub use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("not primitive: {0}")]
    NotPrimitive(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("too close to a pole: {0}")]
    Pole(String),
    #[error("outside the convergence region: {0}")]
    Region(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
