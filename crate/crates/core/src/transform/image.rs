use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::{forward, forward_mellin_route, laplace_composite};
use crate::error::{Error, Result};
use crate::mellin::{LineFunction, MellinSampler, RealFunction};
use crate::quad::Envelope;
use crate::specfun::gamma;

const SAMPLER_MARGIN: f64 = 0.1;
const SAMPLER_SPAN: f64 = 12.0;

type ComplexEval = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// Decay of an image on vertical lines:
/// |F(gamma + i tau)| <= C |tau|^{gamma + p0} e^{-a |tau|} for |tau| >= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageDecay {
    pub p0: f64,
    pub a: f64,
}

impl ImageDecay {
    pub fn new(p0: f64, a: f64) -> Self {
        ImageDecay { p0, a }
    }

    /// The Stirling-type decay of e^{-x}-like inputs.
    pub fn smooth() -> Self {
        ImageDecay { p0: -0.5, a: FRAC_PI_2 }
    }
}

/// Where an image came from.
#[derive(Clone)]
pub enum ImageSource {
    Real(RealFunction),
    Line(LineFunction),
    Analytic,
}

/// (Ff)(z) on the half-plane Re z > lower with its line envelope.
#[derive(Clone)]
pub struct TransformImage {
    label: String,
    pub source: ImageSource,
    eval: ComplexEval,
    pub lower: f64,
    pub decay: ImageDecay,
    pub real_data: bool,
    constant: Option<f64>,
    zero: bool,
    cache: Arc<Mutex<HashMap<(u64, u64), Complex64>>>,
    calibrated: Arc<Mutex<HashMap<u64, f64>>>,
}

impl fmt::Debug for TransformImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformImage")
            .field("label", &self.label)
            .field("lower", &self.lower)
            .field("decay", &self.decay)
            .field("real_data", &self.real_data)
            .finish()
    }
}

impl TransformImage {
    fn build(label: &str, source: ImageSource, eval: ComplexEval, lower: f64, decay: ImageDecay, real_data: bool) -> Self {
        TransformImage {
            label: label.to_string(),
            source,
            eval,
            lower,
            decay,
            real_data,
            constant: None,
            zero: false,
            cache: Arc::new(Mutex::new(HashMap::new())),
            calibrated: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// Image of f by direct quadrature; the half-plane comes from f's
    /// origin exponent.
    pub fn from_real_function(f: &RealFunction, decay: ImageDecay, tol: f64) -> Result<Self> {
        let lower = -1.0 - f.origin_exponent;
        let g = f.clone();
        // Mellin samples of e^{-t} (Lf)(1/t) along rotated rays, shared by all z
        let phi = laplace_composite(f, 1e-3 * tol)?;
        let sampler: Arc<OnceLock<Result<MellinSampler>>> = Arc::new(OnceLock::new());
        let (re_lo, re_hi) = (lower + SAMPLER_MARGIN, lower + SAMPLER_SPAN);
        let mut img = TransformImage::build(
            &format!("F[{}]", f.label()),
            ImageSource::Real(f.clone()),
            Arc::new(move |z: Complex64| {
                if z.re >= re_lo && z.re <= re_hi {
                    let s = sampler.get_or_init(|| MellinSampler::new(&phi, re_lo, re_hi, tol));
                    if let Ok(s) = s {
                        let r = s.eval(z)?;
                        if r.converged {
                            return Ok(r.value);
                        }
                    }
                }
                forward(&g, z, tol).map(|r| r.value)
            }),
            lower,
            decay,
            true,
        );
        img.zero = f.is_zero();
        Ok(img)
    }

    /// Image of the function with Mellin symbol f* on Re s = c0 < 1,
    /// computed by the gamma-product contour integral.
    pub fn from_line_function(fstar: &LineFunction, decay: ImageDecay, tol: f64) -> Result<Self> {
        if fstar.c0 >= 1.0 {
            return Err(Error::DomainViolation(format!("Mellin route needs c0 < 1, got {}", fstar.c0)));
        }
        let g = fstar.clone();
        let mut img = TransformImage::build(
            &format!("F[{}]", fstar.label()),
            ImageSource::Line(fstar.clone()),
            Arc::new(move |z| forward_mellin_route(&g, z, tol).map(|r| r.value)),
            fstar.c0 - 1.0,
            decay,
            fstar.real_data,
        );
        img.zero = fstar.is_zero();
        Ok(img)
    }

    /// An image given in closed form; `lower` is the edge of its half-plane
    /// of analyticity.
    pub fn analytic<F>(label: &str, f: F, lower: f64, decay: ImageDecay, real_data: bool) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        TransformImage::build(label, ImageSource::Analytic, Arc::new(f), lower, decay, real_data)
    }

    /// sqrt(pi) Gamma(z + 1/2), the image of x^{-1/2}.
    pub fn half_inverse_sqrt() -> Self {
        TransformImage::analytic("sqrt(pi) Gamma(z+1/2)", |z| Ok(gamma(z + 0.5)? * PI.sqrt()), -0.5, ImageDecay::new(0.0, FRAC_PI_2), true)
    }

    /// Gamma(beta) Gamma(beta + z), the image of x^{beta - 1}.
    pub fn power(beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::DomainViolation(format!("power image needs beta > 0, got {beta}")));
        }
        let gb = gamma(Complex64::new(beta, 0.0))?;
        Ok(TransformImage::analytic(
            &format!("Gamma({beta}) Gamma({beta}+z)"),
            move |z| Ok(gb * gamma(z + beta)?),
            -beta,
            ImageDecay::new(beta - 0.5, FRAC_PI_2),
            true,
        ))
    }

    pub fn zero() -> Self {
        let mut img = TransformImage::analytic("zero", |_| Ok(Complex64::new(0.0, 0.0)), f64::NEG_INFINITY, ImageDecay::new(0.0, 0.0), true);
        img.zero = true;
        img
    }

    /// Fix the envelope constant instead of calibrating it.
    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant = Some(c);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// (Ff)(z); values are memoized.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.zero {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if !(z.re > self.lower) {
            return Err(Error::DomainViolation(format!("{}: Re z = {} not above the half-plane edge {}", self.label, z.re, self.lower)));
        }
        let key = (z.re.to_bits(), z.im.to_bits());
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = (self.eval)(z)?;
        self.cache.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// Envelope on Re z = gamma. The constant is the largest sampled ratio
    /// |F| / (|tau|^{gamma + p0} e^{-a |tau|}) over 1 <= tau <= 30, doubled.
    pub fn envelope_on(&self, gamma: f64) -> Result<Envelope> {
        if self.zero {
            return Ok(Envelope::zero());
        }
        let p = gamma + self.decay.p0;
        let a = self.decay.a;
        if let Some(c) = self.constant {
            return Envelope::new(c, p, a);
        }
        if let Some(c) = self.calibrated.lock().unwrap().get(&gamma.to_bits()) {
            return Envelope::new(*c, p, a);
        }
        let mut sup: f64 = 0.0;
        for k in 0..12 {
            let tau = 30f64.powf(k as f64 / 11.0);
            for &t in &[tau, -tau] {
                if self.real_data && t < 0.0 {
                    continue;
                }
                let v = self.eval(Complex64::new(gamma, t))?.norm();
                sup = sup.max(v / (tau.powf(p) * (-a * tau).exp()));
            }
        }
        let c = 2.0 * sup.max(f64::MIN_POSITIVE);
        self.calibrated.lock().unwrap().insert(gamma.to_bits(), c);
        Envelope::new(c, p, a)
    }

    /// Samples |F| at heights up to 60 against 10x the calibrated envelope.
    pub fn check_envelope(&self, gamma: f64) -> Result<()> {
        let env = self.envelope_on(gamma)?;
        for k in 0..8 {
            let tau = 60f64.powf(k as f64 / 7.0);
            let v = self.eval(Complex64::new(gamma, tau))?.norm();
            let b = env.bound(tau);
            if v > 10.0 * b {
                return Err(Error::EnvelopeViolation { t: tau, value: v, bound: b });
            }
        }
        Ok(())
    }

    /// Relative Cauchy-Riemann residual |dF/dx - dF/(i dy)| / |dF| at z by
    /// central differences.
    pub fn check_analyticity(&self, z: Complex64) -> Result<f64> {
        let h = 1e-4 * (1.0 + z.norm()).min(10.0);
        let dx = (self.eval(z + h)? - self.eval(z - h)?) / (2.0 * h);
        let i = Complex64::i();
        let dy = (self.eval(z + i * h)? - self.eval(z - i * h)?) / (2.0 * h * i);
        let scale = dx.norm().max(dy.norm()).max(self.eval(z)?.norm());
        if scale == 0.0 {
            return Ok(0.0);
        }
        Ok((dx - dy).norm() / scale)
    }
}
