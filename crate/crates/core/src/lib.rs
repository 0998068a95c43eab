//! Numerical index transform with kernel x^{z/2} K_z(2 sqrt x).
//!
//! Forward evaluation by three routes, contour-integral inversion, the
//! associated convolution with its factorization property, and an explicit
//! solver for first-kind convolution equations.

pub mod convolution;
pub mod error;
pub mod mellin;
pub mod quad;
pub mod registry;
pub mod solver;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
