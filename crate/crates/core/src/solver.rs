//! The first-kind equation int_0^inf k_h(x, y) f(y) dy = g(x), solved by
//! f = inverse transform of (Mg)/(Fh) along Re z = gamma.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::convolution::{kernel_kh, ClosedForm, KernelSpec};
use crate::error::{Error, Result};
use crate::mellin::{mellin_forward, Decay, MellinSampler, RealFunction};
use crate::quad::{adapt, integrate_halfline_with, ContourSpec, Convergence, HalfLine, QuadResult, Tolerance};
use crate::specfun::{besselk_arg, gamma};
use crate::transform::{invert, ImageDecay, TransformImage};

/// Heights at which |Fh| is compared with zero_guard.
const GUARD_HEIGHTS: usize = 16;
const GUARD_TOP: f64 = 60.0;
/// Sector half-angle of the synthesized right-hand side.
const RHS_SECTOR: f64 = PI - 0.05;
const UNDERFLOW_ARG: f64 = 800.0;

/// Parameters of one solve.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    pub kernel: KernelSpec,
    /// Contour abscissa, inside (alpha, 0).
    pub gamma: f64,
    /// Weight exponent of the admissible class of h.
    pub alpha: f64,
    pub tol: f64,
    /// Smallest allowed |Fh| on the contour relative to its Stirling envelope.
    pub zero_guard: f64,
    pub convergence: Convergence,
    /// Declared decay of (Mg)/(Fh) on vertical lines.
    pub quotient_decay: ImageDecay,
}

impl SolveConfig {
    pub fn new(kernel: KernelSpec, alpha: f64, gamma: f64) -> Result<Self> {
        let lower = kernel.lower();
        if !(alpha > lower && alpha < 0.0) {
            return Err(Error::DomainViolation(format!("alpha = {alpha} must lie in ({lower}, 0) for h = {}", kernel.h.label())));
        }
        if !(gamma > alpha && gamma < 0.0) {
            return Err(Error::DomainViolation(format!("gamma = {gamma} must lie in (alpha, 0) = ({alpha}, 0)")));
        }
        Ok(SolveConfig {
            kernel,
            gamma,
            alpha,
            tol: 1e-8,
            zero_guard: 1e-6,
            convergence: Convergence::Absolute,
            quotient_decay: ImageDecay::smooth(),
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn with_zero_guard(mut self, guard: f64) -> Result<Self> {
        if !(guard > 0.0) {
            return Err(Error::InvalidInput(format!("zero_guard must be positive, got {guard}")));
        }
        self.zero_guard = guard;
        Ok(self)
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        let mut c = SolveConfig::new(self.kernel.clone(), self.alpha, gamma)?;
        c.tol = self.tol;
        c.zero_guard = self.zero_guard;
        c.convergence = self.convergence;
        c.quotient_decay = self.quotient_decay;
        Ok(c)
    }

    /// Accept the contour integral in the improper sense.
    pub fn improper(mut self) -> Self {
        self.convergence = Convergence::Improper;
        self
    }

    pub fn with_quotient_decay(mut self, decay: ImageDecay) -> Self {
        self.quotient_decay = decay;
        self
    }
}

/// k_h(x, y) at complex x for the closed-form kernels.
fn kernel_at(kernel: &ClosedForm, x: Complex64, y: f64) -> Result<Complex64> {
    let s = x + y;
    match *kernel {
        ClosedForm::HalfInverseSqrt => {
            let r = s.sqrt();
            Ok(PI * x.sqrt() * (-2.0 * r).exp() / r)
        }
        ClosedForm::Power(beta) => {
            // far below the smallest normal number
            if (2.0 * s.sqrt()).re > UNDERFLOW_ARG {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let gb = gamma(Complex64::new(beta, 0.0))?;
            let k = besselk_arg(Complex64::new(beta, 0.0), s)?.value;
            Ok(2.0 * gb * (beta * (x.ln() - 0.5 * s.ln())).exp() * k)
        }
        ClosedForm::Generic => Err(Error::InvalidInput("no closed-form kernel".into())),
    }
}

/// g(x) = int_0^inf k_h(x, y) f(y) dy on a grid. Closed-form kernels also
/// give g an analytic continuation into |arg x| < pi - 0.05.
pub fn synthesize_rhs(f: &RealFunction, kernel: &KernelSpec, x_grid: &[f64], tol: f64) -> Result<RealFunction> {
    if x_grid.len() < 2 {
        return Err(Error::InvalidInput("synthesis grid needs at least two points".into()));
    }
    let a0 = 1.0 + f.origin_exponent.min(kernel.h.origin_exponent);
    let decay = Decay::Power { exponent: 20.0 };
    if f.is_zero() || kernel.is_zero() {
        let g = RealFunction::from_grid(x_grid.to_vec(), vec![0.0; x_grid.len()], a0, decay)?;
        return Ok(g.with_label("zero"));
    }
    let closed = kernel.closed_form;
    let hl = HalfLine::default().origin(f.origin_exponent);
    let mut values = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::DomainViolation(format!("grid point {x} is not positive")));
        }
        let r = match closed {
            ClosedForm::Generic => integrate_halfline_with(
                |y| Ok(kernel_kh(kernel, x, y, tol)?.value * f.eval(y)),
                &hl.split(x.max(0.1)),
                Tolerance::new(0.0, tol),
            )?,
            _ => integrate_halfline_with(
                |y| Ok(kernel_at(&closed, Complex64::new(x, 0.0), y)? * f.eval(y)),
                &hl.split(x.max(0.1)),
                Tolerance::new(0.0, tol),
            )?,
        };
        values.push(r.value.re);
    }
    let g = RealFunction::from_grid(x_grid.to_vec(), values, a0, decay)?.with_label(&format!("g[{}]", f.label()));
    if closed == ClosedForm::Generic {
        return Ok(g);
    }
    let ff = f.clone();
    let y_tol = tol.min(1e-13);
    g.with_continuation(RHS_SECTOR, move |x| {
        Ok(scaled_halfline(|y| Ok(kernel_at(&closed, x, y)? * ff.eval(y)), x.norm(), ff.origin_exponent, y_tol)?.value)
    })
}

/// int_0^inf of an integrand that varies on the scale |x| near the origin.
/// Small scales get geometric panels up to 1 so every decade is resolved.
fn scaled_halfline<F>(f: F, scale: f64, origin: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if scale >= 0.1 {
        let hl = HalfLine::default().origin(origin).split(scale.min(1e3));
        return integrate_halfline_with(f, &hl, Tolerance::new(0.0, tol));
    }
    let mut panels = vec![(0.0, scale)];
    let mut a = scale;
    while a < 1.0 {
        let b = (a * 8.0).min(1.0);
        panels.push((a, b));
        a = b;
    }
    let head = adapt(&f, &panels, Tolerance::new(0.0, tol), 50 * panels.len())?;
    let tail = integrate_halfline_with(|u| f(1.0 + u), &HalfLine::default(), Tolerance::new(0.0, tol))?;
    Ok(QuadResult {
        value: head.value + tail.value,
        err_abs: head.err_abs + tail.err_abs,
        evals: head.evals + tail.evals,
        converged: head.converged && tail.converged,
    })
}

/// A solution sampled on a grid, with per-point error estimates.
#[derive(Debug, Clone)]
pub struct Solution {
    pub t: Vec<f64>,
    pub values: Vec<QuadResult>,
}

impl Solution {
    /// Grid-backed function through the real parts.
    pub fn function(&self, origin_exponent: f64, decay: Decay) -> Result<RealFunction> {
        RealFunction::from_grid(self.t.clone(), self.values.iter().map(|r| r.value.re).collect(), origin_exponent, decay)
    }
}

/// (Mg)(z) evaluator: shared ray samples when g continues analytically,
/// real-axis quadrature otherwise.
fn mellin_of_rhs(g: &RealFunction, gamma: f64, tol: f64) -> Result<Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>> {
    if g.continuation().is_some() {
        let sampler = Arc::new(MellinSampler::new(g, gamma, gamma, tol)?);
        return Ok(Arc::new(move |z| {
            let r = sampler.eval(z)?;
            Ok(r.value)
        }));
    }
    let g = g.clone();
    Ok(Arc::new(move |z| Ok(mellin_forward(&g, z, tol)?.value)))
}

/// Rejects contours on which |Fh| comes within zero_guard of its Stirling
/// envelope.
fn check_kernel_zeros(fh: &TransformImage, gamma: f64, guard: f64) -> Result<()> {
    let env = fh.envelope_on(gamma)?;
    for k in 0..GUARD_HEIGHTS {
        let tau = if k == 0 { 0.0 } else { GUARD_TOP.powf(k as f64 / (GUARD_HEIGHTS - 1) as f64) };
        let v = fh.eval(Complex64::new(gamma, tau))?.norm();
        let scale = env.bound(tau.max(1.0));
        if !(v >= guard * scale) {
            return Err(Error::KernelZeroOnContour(format!(
                "|Fh({gamma}{tau:+}i)| = {v:e} is below zero_guard {guard:e} times its envelope {scale:e}"
            )));
        }
    }
    Ok(())
}

/// f(t) = (1/2 pi i) int I_{-(1+z)}(2 sqrt t) t^{-(1+z)/2} (Mg)(z)/(Fh)(z) dz along Re z = gamma.
pub fn solve(g: &RealFunction, config: &SolveConfig, t_grid: &[f64]) -> Result<Solution> {
    for &t in t_grid {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::DomainViolation(format!("solution grid point {t} is not positive")));
        }
    }
    if g.is_zero() {
        return Ok(Solution { t: t_grid.to_vec(), values: vec![QuadResult::zero(); t_grid.len()] });
    }
    let gamma = config.gamma;
    let (lo, hi) = g.strip();
    if !(gamma > lo && gamma < hi) {
        return Err(Error::StripViolation { re: gamma, lo, hi });
    }
    let fh = config.kernel.image(config.tol)?;
    check_kernel_zeros(&fh, gamma, config.zero_guard)?;
    let mg = mellin_of_rhs(g, gamma, 0.01 * config.tol)?;
    let fh_q = fh.clone();
    let quotient = TransformImage::analytic(
        &format!("M[{}]/F[{}]", g.label(), config.kernel.h.label()),
        move |z| Ok(mg(z)? / fh_q.eval(z)?),
        config.alpha,
        config.quotient_decay,
        true,
    );
    quotient.check_envelope(gamma)?;
    let mut spec = ContourSpec::adaptive(gamma, config.tol)?;
    if config.convergence == Convergence::Improper {
        spec = spec.improper();
    }
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        values.push(invert(&quotient, t, &spec)?);
    }
    Ok(Solution { t: t_grid.to_vec(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::convolve;
    use crate::mellin::log_spaced;

    fn exp_fn() -> RealFunction {
        RealFunction::new("exp(-x)", |x| (-x).exp(), 0.0, Decay::Exponential { rate: 1.0 }).unwrap()
    }

    #[test]
    fn config_validation() {
        let k = KernelSpec::power(1.0).unwrap();
        assert!(SolveConfig::new(k.clone(), -0.8, -0.6).is_ok());
        assert!(matches!(SolveConfig::new(k.clone(), -1.2, -0.6), Err(Error::DomainViolation(_))));
        assert!(matches!(SolveConfig::new(k.clone(), -0.8, -0.9), Err(Error::DomainViolation(_))));
        assert!(matches!(SolveConfig::new(k.clone(), -0.8, 0.1), Err(Error::DomainViolation(_))));
        assert!(SolveConfig::new(k, -0.8, -0.6).unwrap().with_zero_guard(0.0).is_err());
    }

    #[test]
    fn zero_rhs() {
        let grid = log_spaced(0.1, 10.0, 4);
        let k = KernelSpec::power(1.0).unwrap();
        let g = synthesize_rhs(&RealFunction::zero(), &k, &grid, 1e-10).unwrap();
        assert!(g.is_zero());
        let cfg = SolveConfig::new(k, -0.8, -0.6).unwrap();
        let s = solve(&g, &cfg, &[0.5, 1.0]).unwrap();
        assert!(s.values.iter().all(|r| r.value.norm() == 0.0));
    }

    #[test]
    fn synthesized_rhs_matches_convolution() {
        let f = exp_fn();
        let k = KernelSpec::half_inverse_sqrt().unwrap();
        let g = synthesize_rhs(&f, &k, &[0.5, 1.0, 2.0], 1e-11).unwrap();
        // independent route: plain quadrature of the closed-form kernel
        let direct = integrate_halfline_with(
            |y| Ok(Complex64::new(PI * (-2.0 * (1.0 + y).sqrt()).exp() / (1.0 + y).sqrt() * (-y).exp(), 0.0)),
            &HalfLine::default(),
            1e-12,
        )
        .unwrap()
        .value
        .re;
        assert!((g.eval(1.0) - direct).abs() < 1e-10 * direct);
        for &x in &[0.5, 1.0, 2.0] {
            let c = convolve(&f, &k.h, x, 1e-10).unwrap().value.re;
            assert!((g.eval(x) - c).abs() < 1e-6 * c, "x={x}: {} vs {c}", g.eval(x));
        }
        // the continuation agrees with the real samples
        let cont = g.continuation().unwrap().eval(Complex64::new(1.0, 0.0)).unwrap();
        assert!((cont.re - direct).abs() < 1e-10 * direct);
    }

    #[test]
    fn kernel_zero_detected() {
        // an image with a zero on the contour at one of the guard heights
        let h = RealFunction::new("h", |x| (-x).exp(), 0.0, Decay::Exponential { rate: 1.0 }).unwrap();
        let zero = Complex64::new(-0.6, GUARD_TOP.powf(3.0 / (GUARD_HEIGHTS - 1) as f64));
        let k = KernelSpec::generic(h).with_image(move |z| Ok(gamma(z + 1.0)? * (z - zero) * (z - zero.conj()) / (z + 3.0).powi(2)));
        let cfg = SolveConfig::new(k, -0.8, -0.6).unwrap();
        let grid = log_spaced(0.1, 10.0, 4);
        let g = RealFunction::from_grid(grid.clone(), grid.iter().map(|x| (-x).exp()).collect(), 1.0, Decay::Exponential { rate: 1.0 }).unwrap();
        assert!(matches!(solve(&g, &cfg, &[1.0]), Err(Error::KernelZeroOnContour(_))));
    }

    #[test]
    fn manufactured_power_kernel() {
        let f = exp_fn();
        let k = KernelSpec::power(1.0).unwrap();
        let grid = log_spaced(0.05, 20.0, 6);
        let g = synthesize_rhs(&f, &k, &grid, 1e-10).unwrap();
        let cfg = SolveConfig::new(k, -0.8, -0.6).unwrap();
        let t = [0.2, 1.0, 5.0];
        let s = solve(&g, &cfg, &t).unwrap();
        for (i, &ti) in t.iter().enumerate() {
            let e = (-ti).exp();
            assert!((s.values[i].value.re - e).abs() < 1e-4 * e, "t={ti}: {:?}", s.values[i]);
        }
    }

    #[test]
    fn manufactured_half_kernel_improper() {
        let f = exp_fn();
        let k = KernelSpec::half_inverse_sqrt().unwrap();
        let grid = log_spaced(0.05, 20.0, 6);
        let g = synthesize_rhs(&f, &k, &grid, 1e-10).unwrap();
        let t = [0.2, 1.0, 5.0];
        // Fh decays too slowly for absolute convergence on this contour
        let cfg = SolveConfig::new(k, -0.4, -0.2).unwrap();
        assert!(matches!(solve(&g, &cfg, &t), Err(Error::EnvelopeTooWeak { .. })));
        let s = solve(&g, &cfg.improper(), &t).unwrap();
        for (i, &ti) in t.iter().enumerate() {
            let e = (-ti).exp();
            assert!((s.values[i].value.re - e).abs() < 1e-4 * e, "t={ti}: {:?}", s.values[i]);
        }
    }
}
