//! Pseudospectral laboratory for the periodic BBM equation
//!
//! ```text
//! u_t - u_xxt + u_x + (u^2/2)_x = 0   on the torus T = R/(2*pi*Z),
//! ```
//!
//! written throughout in the multiplier form `i u_t = phi(D)u + N(u)/2` with
//! `phi(n) = n/(1+n^2)` and the renormalized quadratic nonlinearity `N(u)`
//! (zero output frequency removed).
//!
//! The crate provides truncated Fourier fields and their norms, reproducible
//! samplers for random initial data `u0 = sum g_n <n>^{-alpha} e^{inx}`,
//! the renormalized nonlinearity and its Monte Carlo diagnostics, an
//! integrating-factor RK4 / Picard solver pair, the I-method modified-energy
//! ledger, a tree-indexed power-series engine with the norm-inflation
//! construction, and empirical Hoelder/tail estimators.
//!
//! # Conventions
//!
//! A field is `f(x) = sum_{|n| <= M} fhat(n) e^{inx}` and every norm uses the
//! unit-coefficient Plancherel convention `||f||_{L^2}^2 = sum |fhat(n)|^2`,
//! so physical-space quadratures average over the grid (measure `dx/2pi`).
//! Japanese brackets are `<n> = (1 + n^2)^{1/2}`.

pub mod error;
pub mod field;
pub mod imethod;
pub mod inflation;
pub mod multiplier;
pub mod nonlin;
pub mod norms;
pub mod random;
pub mod solver;
pub mod stats;
pub mod tails;

mod fft;

pub use error::Error;
pub use field::SpectralField;
pub use multiplier::MultiplierSymbol;
pub use norms::{bracket, fourier_lebesgue_norm, phi_beta, sobolev_norm, wsp_norm, NormDescriptor};

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// The BBM dispersion symbol `phi(n) = n/(1+n^2)`.
///
/// Bounded, odd, and `phi(0) = 0`; the zero at the origin is what makes the
/// renormalized nonlinearity well defined for rough data.
pub fn phi(n: f64) -> f64 {
    n / (1.0 + n * n)
}
