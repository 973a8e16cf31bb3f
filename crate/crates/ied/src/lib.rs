//! Left tails that decay like `exp(-lambda / x^rho)` near zero, the closure
//! arithmetic they obey under scaling, sums and series, and the processes
//! (AR(1), ARMA(p,q), stochastic fixed point equations) whose stationary laws
//! inherit that decay.
//!
//! The crate is organized around [`class::IedClass`], the triple
//! `(rho, L, lambda)` describing a law with
//! `lim_{x->0+} x^rho L(x) log P(X < x) = -lambda`:
//!
//! - [`class`] — the class type and all closed-form parameter arithmetic;
//! - [`distributions`] — samplers and CDFs for the concrete laws used here;
//! - [`tail_estimation`] — recover `(rho, lambda)` or a right-tail index
//!   from samples;
//! - [`arma`] — ARMA(p,q) models, stability/coprimality certificates,
//!   psi-coefficient expansions and limiting parameters;
//! - [`sfpe`] — the equation `X =d AX + B`: iteration, perpetuity series,
//!   closed-form limit parameters;
//! - [`envelope`] — the lower-envelope statistic `X_n / g(1/log n)`;
//! - [`flemingviot`] — the dependent coefficient pair `(A, B) = (Y^-2, T Y^-2)`
//!   built from two Brownian first-passage times, where the quadrant-dependence
//!   based formulas fail.

pub mod arma;
pub mod class;
pub mod distributions;
pub mod envelope;
pub mod error;
pub mod flemingviot;
pub mod rng;
pub mod sfpe;
pub mod tail_estimation;

pub use class::IedClass;
pub use error::{IedError, Result};
pub use rng::RngStream;
