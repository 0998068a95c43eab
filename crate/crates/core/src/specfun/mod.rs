//! Complex gamma and modified Bessel functions of complex order.
//!
//! `besselk(z, x)` returns K_z(2 sqrt x) and `besseli(nu, x)` returns
//! I_nu(2 sqrt x); every kernel in the crate is evaluated at the argument
//! 2 sqrt x. `bessel_k0(w)` is the exception and takes the plain argument.

mod bessel;
mod gamma;

pub use bessel::{
    bessel_k0, besseli, besseli_scaled, besseli_series_parts, besselk, besselk_arg, besselk_eval, besselk_real, KEval,
};
pub use gamma::{gamma, log_gamma, near_pole, rgamma, GammaEval};

pub use num_complex::Complex64;

/// The universal scalar.
pub type ComplexPoint = Complex64;

/// Shorthand constructor.
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
