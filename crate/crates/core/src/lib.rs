//! Generating functions for Gegenbauer polynomials, checked as truncated
//! power series.
//!
//! - [`series`]: truncated and Puiseux series in `t`.
//! - [`hypergeo`]: `pFq` coefficients, Gauss `2F1` values and compositions.
//! - [`gegenbauer`]: `C_n^lambda` by recurrence, closed forms and the ordinary
//!   generating function.
//! - [`legendre`]: Legendre and Ferrers functions with algebraic closed forms.
//! - [`brafman`]: weighted generating functions and their closed forms.
//! - [`poisson`]: Poisson kernels, complete elliptic integrals.
//! - [`verify`]: the identity catalog and its reports.
//!
//! ```
//! use gegenfun::brafman::{first_gf, Variant};
//! use gegenfun::Complex;
//!
//! let pair = first_gf(0.25, -1.0 / 12.0, Complex::new(1.5, 0.0), 16, Variant::A)?;
//! assert!(pair.deviation(16) < 1e-12);
//! # Ok::<(), gegenfun::Error>(())
//! ```

pub mod brafman;
pub mod error;
pub mod gegenbauer;
pub mod hypergeo;
pub mod legendre;
pub mod poisson;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use series::{Complex, TruncatedSeries};
