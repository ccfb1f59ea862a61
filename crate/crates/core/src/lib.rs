//! Exact-arithmetic toolkit for hyperbolic polynomials: spectra and cone
//! queries, mixed characteristic polynomials and their root bounds, a
//! derandomized partition engine, sharpness experiments against Jacobi
//! asymptotics, and strong-Rayleigh / matroid base-packing certificates.

pub mod error;
pub mod hyperbolic;
pub mod mixed;
pub mod multipoly;
pub mod partition;
pub mod quad;
pub mod rayleigh;
pub mod report;
pub mod scalar;
pub mod selftest;
pub mod sharpness;
pub mod unipoly;

pub use error::{Error, Result};
