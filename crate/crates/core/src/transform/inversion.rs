use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use super::image::TransformImage;
use crate::error::{Error, Result};
use crate::quad::{integrate_contour, Convergence, ContourSpec, Envelope, QuadResult};
use crate::specfun::{besseli_scaled, besselk_real, gamma, rgamma};

/// I_{-(1+z)}(2 sqrt t) t^{-(1+z)/2}.
fn inversion_kernel(z: Complex64, t: f64) -> Result<Complex64> {
    let nu = -(z + 1.0);
    Ok(besseli_scaled(nu, t)? * (nu * t.ln()).exp())
}

/// The same kernel from the term-by-term x-derivative of
/// I_{-z}(2 sqrt x) x^{-z/2} = sum_n x^{n-z} / (n! Gamma(n+1-z)).
fn differentiated_kernel(z: Complex64, x: f64) -> Result<Complex64> {
    let mut term = rgamma(1.0 - z);
    let mut sum = -z * term;
    let mut n = 0usize;
    loop {
        let nf = n as f64;
        term *= x / ((nf + 1.0) * (nf + 1.0 - z));
        n += 1;
        let add = (n as f64 - z) * term;
        sum += add;
        if add.norm() <= 1e-17 * sum.norm() && (n as f64) > x {
            break;
        }
        if n > 400 {
            return Err(Error::SeriesNonConvergence { terms: n });
        }
    }
    Ok(sum * ((-z - 1.0) * x.ln()).exp())
}

/// Sup over 1 <= tau <= 200 of |kernel(gamma + i tau)| / (tau^{gamma+1/2} e^{pi tau/2}),
/// with headroom.
fn kernel_constant(t: f64, gamma: f64) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for k in 0..40 {
        let tau = 200f64.powf(k as f64 / 39.0);
        let v = inversion_kernel(Complex64::new(gamma, tau), t)?.norm();
        sup = sup.max(v / (tau.powf(gamma + 0.5) * (FRAC_PI_2 * tau).exp()));
    }
    Ok(1.5 * sup)
}

/// Default contour abscissa: the middle of the interval where the image
/// decay makes the inversion integral absolutely convergent, or the middle
/// of (lower, 0) when that interval is empty.
pub fn default_gamma(image: &TransformImage) -> f64 {
    let lo = image.lower.max(-1e3);
    let hi = ((-1.5 - image.decay.p0) / 2.0).min(0.0);
    if hi > lo {
        0.5 * (lo + hi)
    } else {
        0.5 * lo
    }
}

fn check_abscissa(image: &TransformImage, gamma: f64) -> Result<()> {
    if !(gamma > image.lower && gamma < 0.0) {
        return Err(Error::DomainViolation(format!("contour abscissa {gamma} must lie in ({}, 0)", image.lower)));
    }
    Ok(())
}

/// Envelope of kernel * image on Re z = gamma.
fn inversion_envelope(image: &TransformImage, t: f64, gamma: f64) -> Result<Envelope> {
    let img = image.envelope_on(gamma)?;
    if img.c == 0.0 {
        return Ok(img);
    }
    let a = img.a - FRAC_PI_2;
    if a < 0.0 {
        return Err(Error::EnvelopeTooWeak(format!(
            "image decay rate {} is below pi/2; the inversion integrand grows along Re z = {gamma}",
            img.a
        )));
    }
    Envelope::new(img.c * kernel_constant(t, gamma)?, img.p + gamma + 0.5, a)
}

/// f(t) = (1/2 pi i) int I_{-(1+z)}(2 sqrt t) t^{-(1+z)/2} (Ff)(z) dz along Re z = gamma.
///
/// With absolute convergence the image must be integrable against
/// |tau|^{gamma+1/2} e^{pi |tau|/2}; otherwise EnvelopeTooWeak.
pub fn invert(image: &TransformImage, t: f64, spec: &ContourSpec) -> Result<QuadResult> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::DomainViolation(format!("inversion needs t > 0, got {t}")));
    }
    if image.is_zero() {
        return Ok(QuadResult::zero());
    }
    check_abscissa(image, spec.gamma)?;
    let env = inversion_envelope(image, t, spec.gamma)?;
    if spec.convergence == Convergence::Absolute && !env.integrable() {
        return Err(Error::EnvelopeTooWeak(format!(
            "image decay |tau|^{:.4} e^(-{:.4}|tau|) fails the inversion integrability condition on Re z = {}",
            image.decay.p0 + spec.gamma,
            image.decay.a,
            spec.gamma
        )));
    }
    integrate_contour(|z| Ok(inversion_kernel(z, t)? * image.eval(z)?), &env, spec, image.real_data)
}

/// f(x) = (1/2 pi i) d/dx int I_{-z}(2 sqrt x) x^{-z/2} (Ff)(z) dz, with the
/// derivative taken term by term inside the integral. The line integral is
/// understood in the improper sense.
///
/// `eps` defaults to the middle of (2 c0 - 1, c0) with c0 = lower + 1; the
/// abscissa must lie in (c0 - 1, (eps - 1)/2).
pub fn invert_expansion(image: &TransformImage, x: f64, spec: &ContourSpec, eps: Option<f64>) -> Result<QuadResult> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::DomainViolation(format!("inversion needs x > 0, got {x}")));
    }
    if image.is_zero() {
        return Ok(QuadResult::zero());
    }
    let c0 = image.lower + 1.0;
    let eps = eps.unwrap_or(c0 - 0.5);
    if !(eps > 2.0 * c0 - 1.0 && eps < c0) {
        return Err(Error::DomainViolation(format!("eps = {eps} must lie in ({}, {c0})", 2.0 * c0 - 1.0)));
    }
    let hi = (eps - 1.0) / 2.0;
    if !(spec.gamma > c0 - 1.0 && spec.gamma < hi) {
        return Err(Error::DomainViolation(format!("contour abscissa {} must lie in ({}, {hi})", spec.gamma, c0 - 1.0)));
    }
    let env = inversion_envelope(image, x, spec.gamma)?;
    let spec = spec.improper();
    integrate_contour(|z| Ok(differentiated_kernel(z, x)? * image.eval(z)?), &env, &spec, image.real_data)
}

/// (1/2 pi i) int (Ff)(z) e^{1/x} x^z dz along Re z = gamma, which equals
/// the Laplace transform of f at x.
pub fn laplace_identity(image: &TransformImage, x: f64, gamma: f64, tol: f64) -> Result<QuadResult> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::DomainViolation(format!("Laplace identity needs x > 0, got {x}")));
    }
    if !(gamma > image.lower) {
        return Err(Error::DomainViolation(format!("contour abscissa {gamma} must exceed {}", image.lower)));
    }
    if image.is_zero() {
        return Ok(QuadResult::zero());
    }
    let lx = x.ln();
    let env = image.envelope_on(gamma)?.scaled((1.0 / x + gamma * lx).exp(), 0.0, 0.0);
    let spec = ContourSpec::adaptive(gamma, tol)?;
    integrate_contour(|z| Ok(image.eval(z)? * (1.0 / x + z * lx).exp()), &env, &spec, image.real_data)
}

/// A contour integral with a known closed-form value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexIntegral {
    pub contour: QuadResult,
    pub closed: f64,
}

impl IndexIntegral {
    pub fn residual(&self) -> f64 {
        (self.contour.value.re - self.closed).abs().max(self.contour.value.im.abs()) / self.closed.abs()
    }
}

/// (1/2 pi i) int I_{-z}(2 sqrt x) Gamma(z)/(2z+1) x^{-z/2} dz along Re z = gamma in (0, 1/2),
/// equal to e^{-2 sqrt x}.
pub fn index_integral_exp(x: f64, gamma_abs: f64, tol: f64) -> Result<IndexIntegral> {
    if !(x > 0.0) {
        return Err(Error::DomainViolation(format!("index integral needs x > 0, got {x}")));
    }
    if !(gamma_abs > 0.0 && gamma_abs < 0.5) {
        return Err(Error::DomainViolation(format!("abscissa {gamma_abs} must lie in (0, 1/2)")));
    }
    let spec = ContourSpec::adaptive(gamma_abs, tol)?;
    // |I_{-z} x^{-z/2}| ~ x^{-gamma} e^{pi|tau|/2} |tau|^{gamma-1/2} / sqrt(2 pi), |Gamma(z)/(2z+1)| ~ sqrt(2 pi) |tau|^{gamma-3/2} e^{-pi|tau|/2} / 2
    let env = Envelope::new(4.0 * (2.0 * x.sqrt()).exp() * x.powf(-gamma_abs).max(1.0), 2.0 * gamma_abs - 2.0, 0.0)?;
    let lx = x.ln();
    let contour = integrate_contour(
        |z| Ok(besseli_scaled(-z, x)? * (-z * lx).exp() * gamma(z)? / (2.0 * z + 1.0)),
        &env,
        &spec,
        true,
    )?;
    Ok(IndexIntegral { contour, closed: (-2.0 * x.sqrt()).exp() })
}

/// (1/4 pi i) int I_{-z}(2 sqrt x) Gamma(z + mu/2) Gamma(z - mu/2) / Gamma(z + 1) x^{-z/2} dz
/// along Re z = nu in (|mu|/2, 1/2), equal to K_mu(2 sqrt x) / (Gamma(1 + mu/2) Gamma(1 - mu/2)).
pub fn index_integral_bessel(x: f64, mu: f64, nu: f64, tol: f64) -> Result<IndexIntegral> {
    if !(x > 0.0) {
        return Err(Error::DomainViolation(format!("index integral needs x > 0, got {x}")));
    }
    if !(nu > 0.5 * mu.abs() && nu < 0.5) {
        return Err(Error::DomainViolation(format!("abscissa {nu} must lie in ({}, 1/2)", 0.5 * mu.abs())));
    }
    let spec = ContourSpec::adaptive(nu, tol)?;
    let env = Envelope::new(8.0 * (2.0 * x.sqrt()).exp() * x.powf(-nu).max(1.0), 2.0 * nu - 2.0, 0.0)?;
    let lx = x.ln();
    let h = 0.5 * mu;
    let contour = integrate_contour(
        |z| Ok(besseli_scaled(-z, x)? * (-z * lx).exp() * gamma(z + h)? * gamma(z - h)? * rgamma(z + 1.0) * 0.5),
        &env,
        &spec,
        true,
    )?;
    let norm = gamma(Complex64::new(1.0 + h, 0.0))?.re * gamma(Complex64::new(1.0 - h, 0.0))?.re;
    Ok(IndexIntegral { contour, closed: besselk_real(mu, x)? / norm })
}
