//! The convolution
//! (f*g)(x) = 2 int int K_0(2 sqrt((x+u)(x+v)/x)) f(u) g(v) du dv,
//! its kernel algebra and the norm identities it satisfies.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mellin::{mellin_forward, Decay, RealFunction};
use crate::quad::{integrate_finite, integrate_halfline_with, integrate_quarterplane_with, HalfLine, QuadResult, Tolerance};
use crate::specfun::{bessel_k0, besselk, besselk_real, gamma};
use crate::transform::{forward, ImageDecay, TransformImage};

/// Probe points for closed-form image checks.
const IMAGE_PROBES: [(f64, f64); 3] = [(0.25, 0.0), (1.0, 0.5), (2.0, -1.5)];
const IMAGE_LIMIT: f64 = 1e-7;

/// Known closed forms of a kernel function h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// h(x) = x^{-1/2}.
    HalfInverseSqrt,
    /// h(x) = x^{beta - 1}.
    Power(f64),
    Generic,
}

type ComplexEval = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// The function h of a first-kind equation with its image (Fh).
#[derive(Clone)]
pub struct KernelSpec {
    pub h: RealFunction,
    pub closed_form: ClosedForm,
    fh: Option<ComplexEval>,
}

impl fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelSpec").field("h", &self.h).field("closed_form", &self.closed_form).finish()
    }
}

impl KernelSpec {
    pub fn half_inverse_sqrt() -> Result<Self> {
        let h = RealFunction::new("x^-1/2", |x| 1.0 / x.sqrt(), -0.5, Decay::Power { exponent: 0.5 })?;
        Ok(KernelSpec {
            h,
            closed_form: ClosedForm::HalfInverseSqrt,
            fh: Some(Arc::new(|z| Ok(PI.sqrt() * gamma(z + 0.5)?))),
        })
    }

    pub fn power(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::DomainViolation(format!("power kernel needs beta > 0, got {beta}")));
        }
        let h = RealFunction::new(&format!("x^{}", beta - 1.0), move |x| x.powf(beta - 1.0), beta - 1.0, Decay::Power { exponent: 1.0 - beta })?;
        let gb = gamma(Complex64::new(beta, 0.0))?;
        Ok(KernelSpec {
            h,
            closed_form: ClosedForm::Power(beta),
            fh: Some(Arc::new(move |z| Ok(gb * gamma(z + beta)?))),
        })
    }

    /// A kernel with no closed form; (Fh) is computed by quadrature.
    pub fn generic(h: RealFunction) -> Self {
        KernelSpec { h, closed_form: ClosedForm::Generic, fh: None }
    }

    /// Attach an analytic evaluator of (Fh).
    pub fn with_image<F>(mut self, fh: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        self.fh = Some(Arc::new(fh));
        self
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero()
    }

    /// Left edge of the half-plane where (Fh) exists.
    pub fn lower(&self) -> f64 {
        -1.0 - self.h.origin_exponent
    }

    /// (Fh)(z), analytic when available.
    pub fn fh(&self, z: Complex64, tol: f64) -> Result<Complex64> {
        if !(z.re > self.lower()) {
            return Err(Error::DomainViolation(format!("Re z = {} must exceed {}", z.re, self.lower())));
        }
        match &self.fh {
            Some(f) => f(z),
            None => forward(&self.h, z, tol).map(|r| r.value),
        }
    }

    /// (Fh) as a transform image.
    pub fn image(&self, tol: f64) -> Result<TransformImage> {
        match (&self.fh, self.closed_form) {
            (_, ClosedForm::HalfInverseSqrt) => Ok(TransformImage::half_inverse_sqrt()),
            (_, ClosedForm::Power(beta)) => TransformImage::power(beta),
            (Some(f), ClosedForm::Generic) => {
                let f = f.clone();
                Ok(TransformImage::analytic(&format!("F[{}]", self.h.label()), move |z| f(z), self.lower(), ImageDecay::smooth(), true))
            }
            (None, ClosedForm::Generic) => {
                if self.h.is_zero() {
                    return Ok(TransformImage::zero());
                }
                TransformImage::from_real_function(&self.h, ImageDecay::smooth(), tol)
            }
        }
    }

    /// Largest relative difference between the analytic (Fh) and forward
    /// quadrature at three probe points; ClosedFormMismatch above 1e-7.
    pub fn verify(&self, tol: f64) -> Result<f64> {
        let Some(f) = &self.fh else { return Ok(0.0) };
        let mut worst: f64 = 0.0;
        for &(re, im) in &IMAGE_PROBES {
            let z = Complex64::new(self.lower() + re, im);
            let closed = f(z)?;
            let quad = forward(&self.h, z, tol)?.value;
            let rel = (closed - quad).norm() / closed.norm();
            if rel > IMAGE_LIMIT {
                return Err(Error::ClosedFormMismatch { closed: closed.norm(), quad: quad.norm() });
            }
            worst = worst.max(rel);
        }
        Ok(worst)
    }

    /// k_h(x, y) in closed form, when known.
    pub fn kernel_closed(&self, x: f64, y: f64) -> Result<Option<f64>> {
        let s = x + y;
        match self.closed_form {
            ClosedForm::HalfInverseSqrt => Ok(Some(PI * x.sqrt() * (-2.0 * s.sqrt()).exp() / s.sqrt())),
            ClosedForm::Power(beta) => {
                let gb = gamma(Complex64::new(beta, 0.0))?.re;
                Ok(Some(2.0 * gb * (x / s.sqrt()).powf(beta) * besselk_real(beta, s)?))
            }
            ClosedForm::Generic => Ok(None),
        }
    }
}

/// 2 K_0(2 sqrt((x+u)(x+v)/x)).
fn conv_kernel(x: f64, u: f64, v: f64) -> f64 {
    2.0 * bessel_k0(2.0 * ((x + u) * (x + v) / x).sqrt())
}

/// (f*g)(x) by iterated half-line quadrature.
pub fn convolve(f: &RealFunction, g: &RealFunction, x: f64, tol: f64) -> Result<QuadResult> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::DomainViolation(format!("convolution needs x > 0, got {x}")));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(QuadResult::zero());
    }
    let outer = HalfLine::default().split(x.max(1e-3)).origin(f.origin_exponent);
    let inner = HalfLine::default().split(x.max(1e-3)).origin(g.origin_exponent);
    integrate_quarterplane_with(
        |u, v| Ok(Complex64::new(conv_kernel(x, u, v) * f.eval(u) * g.eval(v), 0.0)),
        &outer,
        &inner,
        Tolerance::new(0.0, tol),
    )
}

/// x -> (f*g)(x) as a real function. Near the origin it behaves like
/// x^{1 + min(a_f, a_g)} up to logarithms; at infinity like e^{-2 sqrt x}.
pub fn convolution_function(f: &RealFunction, g: &RealFunction, tol: f64) -> Result<RealFunction> {
    if f.is_zero() || g.is_zero() {
        return Ok(RealFunction::zero());
    }
    let (ff, gg) = (f.clone(), g.clone());
    RealFunction::new(
        &format!("({})*({})", f.label(), g.label()),
        move |x| convolve(&ff, &gg, x, tol).map(|r| r.value.re).unwrap_or(f64::NAN),
        1.0 + f.origin_exponent.min(g.origin_exponent),
        Decay::Power { exponent: 20.0 },
    )
}

/// Both sides of the kernel product formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelProduct {
    /// 2 (xy)^{z/2} K_z(2 sqrt x) K_z(2 sqrt y).
    pub product: Complex64,
    /// int_0^inf K_0(2 sqrt((x+v)(y+v)/v)) v^{z-1} dv.
    pub integral: QuadResult,
    pub residual: f64,
}

pub fn kernel_product(x: f64, y: f64, z: Complex64, tol: f64) -> Result<KernelProduct> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::DomainViolation(format!("kernel product needs x, y > 0, got ({x}, {y})")));
    }
    let product = 2.0 * (0.5 * z * (x * y).ln()).exp() * besselk(z, x)? * besselk(z, y)?;
    let hl = HalfLine::default().split(x.min(y));
    let integral = integrate_halfline_with(
        |v| Ok(bessel_k0(2.0 * ((x + v) * (y + v) / v).sqrt()) * ((z - 1.0) * v.ln()).exp()),
        &hl,
        Tolerance::new(0.0, tol),
    )?;
    let residual = (product - integral.value).norm() / product.norm();
    Ok(KernelProduct { product, integral, residual })
}

/// Relative difference of the two sides of the kernel product formula.
pub fn kernel_product_check(x: f64, y: f64, z: Complex64, tol: f64) -> Result<f64> {
    kernel_product(x, y, z, tol).map(|k| k.residual)
}

/// k_h(x, y) = 2 int_0^inf K_0(2 sqrt((x+y)(x+u)/x)) h(u) du.
///
/// With a closed form the closed value is returned and `err_abs` holds its
/// distance to the quadrature; ClosedFormMismatch beyond 10 tol relative.
pub fn kernel_kh(spec: &KernelSpec, x: f64, y: f64, tol: f64) -> Result<QuadResult> {
    if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
        return Err(Error::DomainViolation(format!("k_h needs x, y > 0, got ({x}, {y})")));
    }
    if spec.is_zero() {
        return Ok(QuadResult::zero());
    }
    let h = &spec.h;
    let hl = HalfLine::default().split(x).origin(h.origin_exponent);
    let quad = integrate_halfline_with(
        |u| Ok(Complex64::new(2.0 * bessel_k0(2.0 * ((x + y) * (x + u) / x).sqrt()) * h.eval(u), 0.0)),
        &hl,
        Tolerance::new(0.0, 0.1 * tol),
    )?;
    match spec.kernel_closed(x, y)? {
        Some(closed) => {
            let diff = (quad.value.re - closed).abs();
            if diff > 10.0 * tol * closed.abs() {
                return Err(Error::ClosedFormMismatch { closed, quad: quad.value.re });
            }
            Ok(QuadResult { value: Complex64::new(closed, 0.0), err_abs: diff, evals: quad.evals, converged: true })
        }
        None => Ok(quad),
    }
}

/// Both sides of the factorization identity M(f*g)(z) = (Ff)(z) (Fg)(z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Factorization {
    pub mellin_of_convolution: QuadResult,
    pub product_of_images: Complex64,
    pub residual: f64,
}

pub fn factorization(f: &RealFunction, g: &RealFunction, z: Complex64, tol: f64) -> Result<Factorization> {
    let ff = forward(f, z, tol)?.value;
    let fg = forward(g, z, tol)?.value;
    let product = ff * fg;
    if f.is_zero() || g.is_zero() {
        return Ok(Factorization { mellin_of_convolution: QuadResult::zero(), product_of_images: product, residual: 0.0 });
    }
    let conv = convolution_function(f, g, 0.01 * tol)?;
    let m = mellin_forward(&conv, z, tol)?;
    let residual = (m.value - product).norm() / product.norm();
    Ok(Factorization { mellin_of_convolution: m, product_of_images: product, residual })
}

/// Relative difference of the two sides of the factorization identity.
pub fn factorization_check(f: &RealFunction, g: &RealFunction, z: Complex64, tol: f64) -> Result<f64> {
    factorization(f, g, z, tol).map(|r| r.residual)
}

/// 2 int_0^inf |f(x)| x^{alpha/2} K_alpha(2 sqrt x) dx.
pub fn kernel_weighted_norm(f: &RealFunction, alpha: f64, tol: f64) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    // K_alpha(2 sqrt x) ~ x^{-|alpha|/2} at the origin
    let hl = HalfLine::default().origin(f.origin_exponent + (alpha - alpha.abs()) / 2.0);
    let r = integrate_halfline_with(
        |x| Ok(Complex64::new(2.0 * f.eval(x).abs() * x.powf(alpha / 2.0) * besselk_real(alpha, x)?, 0.0)),
        &hl,
        Tolerance::new(0.0, tol),
    )?;
    Ok(r.value.re)
}

/// The two sides of the Young inequality: the L1(x^{alpha-1} dx) norm of
/// f*g and the product of the kernel-weighted norms of f and g.
pub fn young_norms(f: &RealFunction, g: &RealFunction, alpha: f64, tol: f64) -> Result<(f64, f64)> {
    if !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("alpha must be finite, got {alpha}")));
    }
    if f.is_zero() || g.is_zero() {
        return Ok((0.0, 0.0));
    }
    let conv = convolution_function(f, g, 0.01 * tol)?;
    let origin = conv.origin_exponent + alpha - 1.0;
    if origin <= -1.0 {
        return Err(Error::DivergentNorm(format!("f*g is not integrable against x^{} at the origin", alpha - 1.0)));
    }
    let hl = HalfLine::default().origin(origin);
    let lhs = integrate_halfline_with(|x| Ok(Complex64::new(conv.eval(x).abs() * x.powf(alpha - 1.0), 0.0)), &hl, Tolerance::new(0.0, tol))?;
    let rhs = kernel_weighted_norm(f, alpha, tol)? * kernel_weighted_norm(g, alpha, tol)?;
    Ok((lhs.value.re, rhs))
}

/// Both sides of the Parseval equality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parseval {
    /// int_0^inf |(f*g)(x)|^2 x^{2 alpha - 1} dx.
    pub energy: f64,
    /// (1/2 pi) int |(Ff)(alpha+it) (Fg)(alpha+it)|^2 dt.
    pub line: f64,
    pub residual: f64,
}

pub fn parseval(f: &RealFunction, g: &RealFunction, alpha: f64, tol: f64) -> Result<Parseval> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::DomainViolation(format!("Parseval equality needs alpha > 0, got {alpha}")));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Parseval { energy: 0.0, line: 0.0, residual: 0.0 });
    }
    let conv = convolution_function(f, g, 0.01 * tol)?;
    let hl = HalfLine::default().origin(2.0 * conv.origin_exponent + 2.0 * alpha - 1.0);
    let energy = integrate_halfline_with(
        |x| {
            let c = conv.eval(x);
            Ok(Complex64::new(c * c * x.powf(2.0 * alpha - 1.0), 0.0))
        },
        &hl,
        Tolerance::new(0.0, tol),
    )?
    .value
    .re;

    let fi = TransformImage::from_real_function(f, ImageDecay::smooth(), 0.01 * tol)?;
    let gi = TransformImage::from_real_function(g, ImageDecay::smooth(), 0.01 * tol)?;
    // |Ff Fg|^2 <= C^2 |t|^{4 alpha - 2} e^{-2 pi |t|}; truncate where the tail drops below tol
    let env = fi.envelope_on(alpha)?.times(&gi.envelope_on(alpha)?);
    let sq = |t: f64| -> Result<f64> {
        let z = Complex64::new(alpha, t);
        Ok((fi.eval(z)? * gi.eval(z)?).norm_sqr())
    };
    let at0 = sq(0.0)?;
    let mut top = 1.0;
    while env.bound(top).powi(2) / (2.0 * env.a) > 1e-3 * tol * at0 && top < 200.0 {
        top *= 1.25;
    }
    let body = integrate_finite(|t| Ok(Complex64::new(sq(t)?, 0.0)), 0.0, top, Tolerance::new(0.0, tol))?;
    let line = body.value.re / PI;
    let residual = (energy - line).abs() / line.abs();
    Ok(Parseval { energy, line, residual })
}

/// Relative difference of the two sides of the Parseval equality.
pub fn parseval_check(f: &RealFunction, g: &RealFunction, alpha: f64, tol: f64) -> Result<f64> {
    parseval(f, g, alpha, tol).map(|p| p.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_fn(rate: f64) -> RealFunction {
        RealFunction::new(&format!("exp(-{rate}x)"), move |x| (-rate * x).exp(), 0.0, Decay::Exponential { rate }).unwrap()
    }

    #[test]
    fn convolution_is_symmetric_and_matches_tensor_grid() {
        let f = exp_fn(1.0);
        let g = exp_fn(2.0);
        let a = convolve(&f, &g, 1.0, 1e-11).unwrap().value.re;
        let b = convolve(&g, &f, 1.0, 1e-11).unwrap().value.re;
        assert!((a - b).abs() < 1e-10 * a.abs());

        // 400 x 400 Gauss-Legendre product rule after u = t/(1-t)
        let ff = exp_fn(1.0);
        let c = convolve(&ff, &ff, 1.0, 1e-11).unwrap().value.re;
        let (nodes, weights) = gauss_legendre(400);
        let mut brute = 0.0;
        for (i, &s) in nodes.iter().enumerate() {
            let (u, du) = (s / (1.0 - s), 1.0 / (1.0 - s).powi(2));
            for (j, &t) in nodes.iter().enumerate() {
                let (v, dv) = (t / (1.0 - t), 1.0 / (1.0 - t).powi(2));
                brute += weights[i] * weights[j] * du * dv * conv_kernel(1.0, u, v) * (-u - v).exp();
            }
        }
        assert!((c - brute).abs() < 1e-6 * c, "{c} vs {brute}");
    }

    fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut x = Vec::with_capacity(n);
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, t);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                let dt = p1 / dp;
                t -= dt;
                if dt.abs() < 1e-15 {
                    break;
                }
            }
            x.push(0.5 * (1.0 - t));
            w.push(1.0 / ((1.0 - t * t) * dp * dp));
        }
        (x, w)
    }

    #[test]
    fn zero_inputs() {
        let f = exp_fn(1.0);
        let z = RealFunction::zero();
        assert_eq!(convolve(&z, &f, 1.0, 1e-8).unwrap().value, Complex64::new(0.0, 0.0));
        assert_eq!(young_norms(&z, &f, 1.0, 1e-8).unwrap(), (0.0, 0.0));
        let p = parseval(&z, &f, 0.5, 1e-8).unwrap();
        assert_eq!((p.energy, p.line), (0.0, 0.0));
        let spec = KernelSpec::generic(RealFunction::zero());
        assert_eq!(kernel_kh(&spec, 1.0, 3.0, 1e-8).unwrap().value, Complex64::new(0.0, 0.0));
        let fz = factorization(&z, &f, Complex64::new(1.0, 0.0), 1e-8).unwrap();
        assert_eq!(fz.residual, 0.0);
    }

    #[test]
    fn kernel_product_examples() {
        let k = kernel_product(1.0, 1.0, Complex64::new(0.5, 0.0), 1e-11).unwrap();
        // K_{1/2}(w) = sqrt(pi/(2w)) e^{-w}
        let closed = 0.5 * PI * (-4.0f64).exp();
        assert!((k.product.re - closed).abs() < 1e-12 * closed);
        assert!(k.residual < 1e-7);
        assert!(kernel_product_check(1.0, 2.0, Complex64::new(0.0, 0.0), 1e-11).unwrap() < 1e-7);
        assert!(kernel_product_check(0.5, 2.0, Complex64::new(0.25, 1.0), 1e-11).unwrap() < 1e-7);
        // x = y: the product is 2 x^z K_z(2 sqrt x)^2 and K_z = K_{-z}
        let z = Complex64::new(0.3, 0.4);
        let a = kernel_product(1.7, 1.7, z, 1e-11).unwrap().product;
        let b = kernel_product(1.7, 1.7, -z, 1e-11).unwrap().product;
        let shift = (z * 1.7f64.ln()).exp();
        assert!((a / shift - b * shift).norm() < 1e-9 * (a / shift).norm());
    }

    #[test]
    fn closed_form_kernels() {
        let half = KernelSpec::half_inverse_sqrt().unwrap();
        let v = kernel_kh(&half, 1.0, 3.0, 1e-9).unwrap().value.re;
        assert!((v - 0.5 * PI * (-4.0f64).exp()).abs() < 1e-14);
        let p1 = KernelSpec::power(1.0).unwrap();
        let v = kernel_kh(&p1, 1.0, 3.0, 1e-9).unwrap().value.re;
        assert!((v - 0.012483498887268431).abs() < 1e-12, "{v}");
        let p32 = KernelSpec::power(1.5).unwrap();
        for &(x, y) in &[(0.5, 0.5), (1.0, 2.0), (3.0, 0.2)] {
            kernel_kh(&p32, x, y, 1e-9).unwrap();
        }
        assert!(half.verify(1e-12).unwrap() < 1e-7);
        assert!(p1.verify(1e-12).unwrap() < 1e-7);
        assert!(p32.verify(1e-12).unwrap() < 1e-7);
    }

    #[test]
    fn wrong_closed_form_detected() {
        let wrong = KernelSpec::generic(RealFunction::new("x^-1/2", |x| 1.0 / x.sqrt(), -0.5, Decay::Power { exponent: 0.5 }).unwrap())
            .with_image(|z| Ok(gamma(z + 0.5)?));
        assert!(matches!(wrong.verify(1e-12), Err(Error::ClosedFormMismatch { .. })));
    }

    #[test]
    fn young_inequality_for_exp() {
        let f = exp_fn(1.0);
        let (lhs, rhs) = young_norms(&f, &f, 1.0, 1e-9).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-6), "{lhs} > {rhs}");
        // both norms of e^{-x} with alpha = 1 equal 1 - e E1(1)
        assert!((rhs - 0.16293545190).abs() < 1e-9, "{rhs}");
    }

    #[test]
    fn young_inequality_strict_for_sign_change() {
        let f = RealFunction::new("(1-x)exp(-x)", |x| (1.0 - x) * (-x).exp(), 0.0, Decay::Exponential { rate: 0.9 }).unwrap();
        let g = exp_fn(1.0);
        let (lhs, rhs) = young_norms(&f, &g, 0.5, 1e-9).unwrap();
        assert!(lhs < rhs * (1.0 - 1e-3), "{lhs} vs {rhs}");
    }

    #[test]
    fn k0_squared_constant() {
        let r = integrate_halfline_with(|x| Ok(Complex64::new(bessel_k0(2.0 * x.sqrt()).powi(2), 0.0)), &HalfLine::default(), 1e-12).unwrap();
        assert!((r.value.re - 0.25).abs() < 1e-10, "{}", r.value.re);
    }

    #[test]
    fn factorization_at_one() {
        let f = exp_fn(1.0);
        let r = factorization(&f, &f, Complex64::new(1.0, 0.0), 1e-10).unwrap();
        // (F e^{-x})(1) = 1 - e E1(1)
        let ff1: f64 = 0.403_652_637_676_805_9;
        assert!((r.product_of_images.re - ff1 * ff1).abs() < 1e-10);
        assert!((r.mellin_of_convolution.value.re - ff1 * ff1).abs() < 1e-8, "{:?}", r.mellin_of_convolution);
        assert!(r.residual < 1e-8, "{}", r.residual);
    }

    #[test]
    fn parseval_for_exp() {
        let f = exp_fn(1.0);
        let p = parseval(&f, &f, 0.5, 1e-9).unwrap();
        assert!(p.residual < 1e-7, "{p:?}");
        assert!(matches!(parseval(&f, &f, -0.5, 1e-9), Err(Error::DomainViolation(_))));
        assert_eq!(parseval(&RealFunction::zero(), &f, 0.5, 1e-9).unwrap().energy, 0.0);
    }
}
