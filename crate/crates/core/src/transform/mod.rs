//! The index transform (Ff)(z) = 2 int_0^inf x^{z/2} K_z(2 sqrt x) f(x) dx.
//!
//! Three forward routes (direct kernel quadrature, the gamma-product
//! contour over the Mellin symbol, and the Mellin transform of a Laplace
//! transform), the operational identities for derivatives, and the two
//! inversion formulas.

mod image;
mod inversion;

pub use image::{ImageDecay, ImageSource, TransformImage};
pub use inversion::{
    default_gamma, index_integral_bessel, index_integral_exp, invert, invert_expansion, laplace_identity,
    IndexIntegral,
};

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::mellin::{laplace, laplace_complex, mellin_forward, Decay, LineFunction, RealFunction};
use crate::quad::{integrate_contour, integrate_halfline_with, ContourSpec, Envelope, HalfLine, QuadResult, Tolerance};
use crate::specfun::{besselk, gamma};

/// Limit on the relative residual of the boundary-sum identity.
pub const TAIL_IDENTITY_LIMIT: f64 = 1e-6;

/// 2 x^{z/2} K_z(2 sqrt x).
pub(crate) fn kernel(z: Complex64, x: f64) -> Result<Complex64> {
    Ok(2.0 * (0.5 * z * x.ln()).exp() * besselk(z, x)?)
}

/// Half-line description of x -> 2 x^{z/2} K_z(2 sqrt x) f(x).
fn kernel_halfline(f: &RealFunction, z: Complex64) -> HalfLine {
    // K_z(2 sqrt x) ~ x^{-|Re z|/2}; at Re z = 0 a logarithm remains
    let origin = f.origin_exponent + if z.re < 0.0 { z.re } else if z.re == 0.0 { -1e-2 } else { 0.0 };
    HalfLine::default().origin(origin)
}

/// Direct forward transform by half-line quadrature of the kernel.
pub fn forward(f: &RealFunction, z: Complex64, tol: f64) -> Result<QuadResult> {
    let lower = -1.0 - f.origin_exponent;
    if f.origin_exponent <= -1.0 {
        return Err(Error::DomainViolation(format!("{} is not integrable at the origin", f.label())));
    }
    if !(z.re > lower) {
        return Err(Error::DomainViolation(format!("Re z = {} must exceed {lower} for {}", z.re, f.label())));
    }
    if f.is_zero() {
        return Ok(QuadResult::zero());
    }
    integrate_halfline_with(|x| Ok(kernel(z, x)? * f.eval(x)), &kernel_halfline(f, z), Tolerance::rel(tol))
}

/// 2 int_y^inf x^{z/2} K_z(2 sqrt x) f(x) dx.
pub fn forward_truncated(f: &RealFunction, y: f64, z: Complex64, tol: f64) -> Result<QuadResult> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::DomainViolation(format!("truncation point must be positive, got {y}")));
    }
    if f.is_zero() {
        return Ok(QuadResult::zero());
    }
    let hl = HalfLine::default().split(y.max(1.0));
    integrate_halfline_with(|u| Ok(kernel(z, y + u)? * f.eval(y + u)), &hl, Tolerance::rel(tol))
}

fn loose_gamma_bound(x: f64) -> Result<f64> {
    Ok(gamma(Complex64::new(x, 0.0))?.re.max(1.0))
}

/// (1/2 pi i) int Gamma(1 - s + z) Gamma(1 - s) f*(s) ds along Re s = c0.
pub fn forward_mellin_route(fstar: &LineFunction, z: Complex64, tol: f64) -> Result<QuadResult> {
    let c0 = fstar.c0;
    if c0 >= 1.0 {
        return Err(Error::DomainViolation(format!("Mellin route needs c0 < 1, got {c0}")));
    }
    if !(z.re > c0 - 1.0) {
        return Err(Error::DomainViolation(format!("Re z = {} must exceed c0 - 1 = {}", z.re, c0 - 1.0)));
    }
    // poles of Gamma(1 - s + z) at s = 1 + z + k and of Gamma(1 - s) at s = 1 + k
    let poles: Vec<Complex64> = (0..4).flat_map(|k| [z + 1.0 + k as f64, Complex64::new(1.0 + k as f64, 0.0)]).collect();
    let spec = ContourSpec::adaptive(c0, tol)?.with_poles(&poles)?;
    if fstar.is_zero() {
        return Ok(QuadResult::zero());
    }
    // |Gamma(x + iy)| <= Gamma(x) and Stirling give a loose bound in t
    let x1 = 1.0 - c0 + z.re;
    let x2 = 1.0 - c0;
    let q1 = x1 - 0.5;
    let tau = z.im.abs();
    let fe = fstar.envelope;
    let c = 4.0 * 2.0 * PI * (PI * tau / 2.0).exp() * (1.0 + tau).powf(q1.abs()) * loose_gamma_bound(x1)? * loose_gamma_bound(x2)? * fe.c;
    let env = Envelope::new(c, q1 + (x2 - 0.5) + fe.p, PI + fe.a)?;
    let real = fstar.real_data && z.im == 0.0;
    integrate_contour(|s| Ok(gamma(1.0 - s + z)? * gamma(1.0 - s)? * fstar.eval(s)?), &env, &spec, real)
}

/// t -> e^{-t} (Lf)(1/t), whose Mellin transform is (Ff). It continues
/// analytically into a sector of half-angle just below pi/2 through the
/// Laplace transform at complex argument.
pub fn laplace_composite(f: &RealFunction, tol: f64) -> Result<RealFunction> {
    let g = f.clone();
    let phi = RealFunction::new(
        &format!("e^-t (L{})(1/t)", f.label()),
        move |t| {
            let v = laplace(&g, 1.0 / t, tol).map(|r| r.value.re).unwrap_or(f64::NAN);
            (-t).exp() * v
        },
        f.origin_exponent + 1.0,
        Decay::Exponential { rate: 1.0 },
    )?;
    let half_angle = match f.decay {
        Decay::Exponential { .. } => FRAC_PI_2 - 0.01,
        Decay::Power { .. } => FRAC_PI_2 - 0.1,
    };
    let g = f.clone();
    phi.with_continuation(half_angle, move |t| {
        let p = Complex64::from_polar(1.0 / t.norm(), -t.arg());
        Ok((-t).exp() * laplace_complex(&g, p, tol)?.value)
    })
}

/// Mellin transform at z of t -> e^{-t} (Lf)(1/t).
///
/// `alpha` is the weight exponent of the admissible class
/// L1(x^{(alpha - |alpha|)/2} dx); Re z must be >= 0 for alpha > 0 and
/// >= alpha for alpha < 0.
pub fn forward_laplace_route(f: &RealFunction, z: Complex64, alpha: f64, tol: f64) -> Result<QuadResult> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::DomainViolation(format!("Laplace route needs a nonzero weight exponent, got {alpha}")));
    }
    let edge = if alpha > 0.0 { 0.0 } else { alpha };
    if z.re < edge {
        return Err(Error::DomainViolation(format!("Re z = {} below {edge} for weight exponent {alpha}", z.re)));
    }
    if f.origin_exponent <= -1.0 {
        return Err(Error::DomainViolation(format!("{} is not integrable at the origin", f.label())));
    }
    if f.is_zero() {
        return Ok(QuadResult::zero());
    }
    let phi = laplace_composite(f, 0.01 * tol)?;
    let r = mellin_forward(&phi, z, tol)?;
    if !r.value.re.is_finite() {
        return Err(Error::NonConvergence { level: "inner Laplace transform".into(), estimate: f64::NAN, err_abs: f64::NAN });
    }
    Ok(r)
}

/// Both sides of the boundary-sum identity for the truncated transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailIdentity {
    /// 2 int_y^inf x^{z/2} K_z(2 sqrt x) f(x) dx with its quadrature error.
    pub direct: QuadResult,
    /// Boundary terms plus the truncated transform of f^{(n)} at z + n.
    pub expanded: Complex64,
    pub residual: f64,
}

/// Truncated transform checked against
/// 2 sum_{m<n} y^{(z+m+1)/2} K_{z+m+1}(2 sqrt y) f^{(m)}(y) + (F f^{(n)})_y(z + n).
pub fn forward_tail(f: &RealFunction, y: f64, z: Complex64, n: usize, tol: f64) -> Result<TailIdentity> {
    if n > f.derivative_count() {
        return Err(Error::InvalidInput(format!("{} carries {} derivatives, {n} requested", f.label(), f.derivative_count())));
    }
    let direct = forward_truncated(f, y, z, tol)?;
    let mut expanded = Complex64::new(0.0, 0.0);
    for m in 0..n {
        let zm = z + (m as f64 + 1.0);
        let dm = f.derivative(m).expect("count checked").eval(y);
        expanded += 2.0 * (0.5 * zm * y.ln()).exp() * besselk(zm, y)? * dm;
    }
    let dn = f.derivative(n).expect("count checked");
    expanded += forward_truncated(dn, y, z + n as f64, tol)?.value;
    let scale = direct.value.norm().max(expanded.norm());
    let residual = if scale == 0.0 { 0.0 } else { (direct.value - expanded).norm() / scale };
    if residual > TAIL_IDENTITY_LIMIT {
        return Err(Error::IdentityResidualExceeded { residual, limit: TAIL_IDENTITY_LIMIT });
    }
    Ok(TailIdentity { direct: QuadResult { err_abs: direct.err_abs.max(residual * scale), ..direct }, expanded, residual })
}

/// Symbol of the n-th derivative, (-1)^n (s - n)_n f*(s - n) on Re s = c0 + n.
pub fn derivative_symbol(fstar: &LineFunction, n: usize) -> Result<LineFunction> {
    if n == 0 {
        return Ok(fstar.clone());
    }
    if fstar.is_zero() {
        return Ok(LineFunction::zero(fstar.c0 + n as f64));
    }
    let g = fstar.evaluator();
    let nn = n as f64;
    let mut growth = 1.0;
    for k in 0..n {
        growth *= 1.0 + (fstar.c0 + k as f64).abs();
    }
    let env = fstar.envelope;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    LineFunction::new(
        &format!("d^{n} {}", fstar.label()),
        fstar.c0 + nn,
        move |s| {
            let w = s - nn;
            let mut poch = Complex64::new(1.0, 0.0);
            for k in 0..n {
                poch *= w + k as f64;
            }
            Ok(sign * poch * g(w)?)
        },
        Envelope::new(env.c * growth, env.p + nn, env.a)?,
        fstar.real_data,
    )
}

/// |F(f^{(n)})(z) - (Ff)(z - n)| / |(Ff)(z - n)|, both by the Mellin route.
pub fn derivative_shift_check(fstar: &LineFunction, n: usize, z: Complex64, tol: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let c0 = fstar.c0;
    let nn = n as f64;
    if c0 >= 1.0 - nn {
        return Err(Error::DomainViolation(format!("derivative shift of order {n} needs c0 < {}, got {c0}", 1.0 - nn)));
    }
    if !(z.re > c0 + nn - 1.0) {
        return Err(Error::DomainViolation(format!("Re z = {} must exceed c0 + n - 1 = {}", z.re, c0 + nn - 1.0)));
    }
    let d = derivative_symbol(fstar, n)?;
    let lhs = forward_mellin_route(&d, z, tol)?.ensure_converged("derivative image")?;
    let rhs = forward_mellin_route(fstar, z - nn, tol)?.ensure_converged("shifted image")?;
    let scale = rhs.value.norm();
    if scale == 0.0 {
        return Ok(lhs.value.norm());
    }
    Ok((lhs.value - rhs.value).norm() / scale)
}
