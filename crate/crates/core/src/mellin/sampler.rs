use num_complex::Complex64;
use std::sync::OnceLock;

use super::function::RealFunction;
use crate::error::{Error, Result};
use crate::quad::QuadResult;

const MAX_LEVEL: usize = 5;
/// Largest tolerated value of gap * |Im s|; beyond it cancellation along a
/// ray costs more than e^14 in relative accuracy.
const NOISE_BUDGET: f64 = 14.0;
const CUT: f64 = 1e-17;
const V_MIN: f64 = -700.0;
const V_MAX: f64 = 60.0;

struct Ray {
    theta: f64,
    h: f64,
    v: Vec<f64>,
    vals: Vec<Complex64>,
}

/// Mellin transform of a real function with an analytic continuation,
/// evaluated by trapezoid sums along rays x = e^{v + i theta}.
///
/// Along a ray the transform is e^{i theta s} int g(e^{v + i theta}) e^{s v} dv;
/// the rotation removes most of the oscillation of x^{i Im s}, so values at
/// large |Im s| keep their relative accuracy. Rays closer to the sector edge
/// are built on demand for larger |Im s|. Samples of g are computed once per
/// ray and shared by all s.
pub struct MellinSampler {
    f: RealFunction,
    re_lo: f64,
    re_hi: f64,
    tol: f64,
    half_angle: f64,
    gap0: f64,
    rays: Vec<OnceLock<Result<Ray>>>,
}

impl MellinSampler {
    /// Sampler for Re s in [re_lo, re_hi]; `f` must carry a continuation.
    pub fn new(f: &RealFunction, re_lo: f64, re_hi: f64, tol: f64) -> Result<Self> {
        let sector = f
            .continuation()
            .ok_or_else(|| Error::InvalidInput(format!("{}: ray sampling needs an analytic continuation", f.label())))?;
        let (lo, hi) = f.strip();
        if !(re_lo > lo && re_hi < hi && re_lo <= re_hi) {
            return Err(Error::StripViolation { re: if re_lo <= lo { re_lo } else { re_hi }, lo, hi });
        }
        let half_angle = sector.half_angle;
        let gap0 = (0.3 * std::f64::consts::PI).min(0.5 * half_angle);
        Ok(MellinSampler {
            f: f.clone(),
            re_lo,
            re_hi,
            tol: tol.max(1e-15),
            half_angle,
            gap0,
            rays: (0..=MAX_LEVEL).map(|_| OnceLock::new()).collect(),
        })
    }

    fn level_for(&self, tau: f64) -> usize {
        let mut k = 0;
        while k < MAX_LEVEL && tau * self.gap0 / 2f64.powi(k as i32) > NOISE_BUDGET {
            k += 1;
        }
        k
    }

    fn ray(&self, k: usize) -> Result<&Ray> {
        let r = self.rays[k].get_or_init(|| self.build(k));
        r.as_ref().map_err(|e| e.clone())
    }

    fn build(&self, k: usize) -> Result<Ray> {
        let sector = self.f.continuation().expect("checked in new");
        let gap = self.gap0 / 2f64.powi(k as i32);
        let theta = self.half_angle - gap;
        let dir = Complex64::from_polar(1.0, theta);
        // trapezoid error ~ exp(-2 pi gap / h); aim below 1e-2 tol
        let h_req = 2.0 * std::f64::consts::PI * gap / (100.0 / self.tol).ln();
        let h = 2f64.powf(h_req.log2().floor());
        let steps = (1.0 / h).round() as i64;
        let at = |v: f64| -> Result<Complex64> {
            let x = dir * v.exp();
            let g = sector.eval(x)?;
            if !(g.re.is_finite() && g.im.is_finite()) {
                return Err(Error::SingularIntegrand { at: format!("continuation at {x}") });
            }
            Ok(g)
        };
        // walk outwards in unit steps to find where the weighted samples vanish
        let mut coarse: Vec<(i64, Complex64)> = Vec::new();
        let g0 = at(0.0)?;
        coarse.push((0, g0));
        let mut peak = g0.norm();
        let mut lo = 0i64;
        let mut small = 0;
        while (lo as f64) > V_MIN {
            lo -= 1;
            let g = at(lo as f64)?;
            coarse.push((lo, g));
            let m = g.norm() * (self.re_lo * lo as f64).exp();
            peak = peak.max(m);
            if m <= CUT * peak {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        let mut hi = 0i64;
        small = 0;
        while (hi as f64) < V_MAX {
            hi += 1;
            let g = at(hi as f64)?;
            coarse.push((hi, g));
            let m = g.norm() * (self.re_hi * hi as f64).exp();
            peak = peak.max(m);
            if m <= CUT * peak {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
        }
        let n = ((hi - lo) * steps) as usize;
        let mut v = Vec::with_capacity(n + 1);
        let mut vals = Vec::with_capacity(n + 1);
        coarse.sort_by_key(|p| p.0);
        let mut ci = 0;
        for j in 0..=n as i64 {
            let vv = lo as f64 + j as f64 * h;
            let val = if j % steps == 0 {
                let key = lo + j / steps;
                while coarse[ci].0 < key {
                    ci += 1;
                }
                coarse[ci].1
            } else {
                at(vv)?
            };
            v.push(vv);
            vals.push(val);
        }
        Ok(Ray { theta, h, v, vals })
    }

    /// (Mg)(s) with an error estimate from the half-step comparison and the
    /// rounding level of the sum.
    pub fn eval(&self, s: Complex64) -> Result<QuadResult> {
        if self.f.is_zero() {
            return Ok(QuadResult::zero());
        }
        if s.re < self.re_lo - 1e-12 || s.re > self.re_hi + 1e-12 {
            return Err(Error::StripViolation { re: s.re, lo: self.re_lo, hi: self.re_hi });
        }
        let flip = s.im < 0.0;
        let s = if flip { s.conj() } else { s };
        let k = self.level_for(s.im);
        let ray = self.ray(k)?;
        let mut full = Complex64::new(0.0, 0.0);
        let mut even = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        for (j, (&v, &g)) in ray.v.iter().zip(&ray.vals).enumerate() {
            let w = if j == 0 || j + 1 == ray.v.len() { 0.5 } else { 1.0 };
            let term = g * (s * v).exp() * w;
            full += term;
            mag += term.norm();
            if j % 2 == 0 {
                even += term;
            }
        }
        let rot = (Complex64::i() * ray.theta * s).exp();
        let value = full * ray.h * rot;
        let coarse = even * (2.0 * ray.h) * rot;
        let scale = mag * ray.h * rot.norm();
        let diff = (value - coarse).norm();
        let disc = if scale > 0.0 { diff.min(diff * diff / scale) } else { 0.0 };
        let noise = (8.0 * f64::EPSILON + self.f.sample_error()) * scale;
        let err = disc + noise;
        let value = if flip { value.conj() } else { value };
        Ok(QuadResult {
            value,
            err_abs: err,
            evals: ray.v.len(),
            converged: diff <= 1e-3 * scale.max(f64::MIN_POSITIVE) && err <= self.tol * value.norm() + noise,
        })
    }

    /// Number of samples of the continuation taken so far.
    pub fn samples(&self) -> usize {
        self.rays.iter().filter_map(|r| r.get()).filter_map(|r| r.as_ref().ok()).map(|r| r.v.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::Decay;
    use crate::specfun::gamma;

    fn exp_with_sector() -> RealFunction {
        RealFunction::new("exp", |x| (-x).exp(), 0.0, Decay::Exponential { rate: 1.0 })
            .unwrap()
            .with_continuation(std::f64::consts::FRAC_PI_2, |z| Ok((-z).exp()))
            .unwrap()
    }

    #[test]
    fn gamma_recovered_far_up_the_line() {
        let s = MellinSampler::new(&exp_with_sector(), 0.2, 2.0, 1e-12).unwrap();
        for &z in &[Complex64::new(0.5, 0.0), Complex64::new(1.0, 3.0), Complex64::new(0.3, -10.0), Complex64::new(1.5, 40.0)] {
            let r = s.eval(z).unwrap();
            let g = gamma(z).unwrap();
            assert!((r.value - g).norm() <= 1e-9 * g.norm(), "{z}: {} vs {g}", r.value);
            assert!(r.err_abs <= 1e-8 * g.norm(), "{z}: err {}", r.err_abs);
        }
    }

    #[test]
    fn rejects_outside_strip() {
        assert!(MellinSampler::new(&exp_with_sector(), -0.5, 1.0, 1e-10).is_err());
        let s = MellinSampler::new(&exp_with_sector(), 0.5, 1.0, 1e-10).unwrap();
        assert!(s.eval(Complex64::new(2.0, 0.0)).is_err());
    }
}
