//! Mellin and Laplace machinery on lines and half-lines.
//!
//! Functions on (0, inf) carry their growth metadata (`RealFunction`);
//! Mellin symbols carry a decay envelope on their line (`LineFunction`).

mod function;
mod grid;
mod sampler;

pub use function::{Decay, LineFunction, RealFunction, Sector};
pub use grid::{log_spaced, LogGrid};
pub use sampler::MellinSampler;

pub use crate::quad::Envelope;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate_contour, integrate_halfline_with, ContourSpec, HalfLine, QuadResult, Tolerance};

/// Distance kept from the ends of a convergence strip.
pub const STRIP_MARGIN: f64 = 1e-3;

/// (1/2 pi i) int_{c0 - i inf}^{c0 + i inf} F(s) x^{-s} ds.
pub fn inverse_mellin(f: &LineFunction, x: f64, tol: f64) -> Result<QuadResult> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::DomainViolation(format!("inverse Mellin needs x > 0, got {x}")));
    }
    if f.is_zero() {
        return Ok(QuadResult::zero());
    }
    let lx = x.ln();
    let env = f.envelope.scaled(x.powf(-f.c0), 0.0, 0.0);
    let mut spec = ContourSpec::adaptive(f.c0, tol)?;
    if f.improper {
        spec = spec.improper();
    }
    integrate_contour(|s| Ok(f.eval(s)? * (-s * lx).exp()), &env, &spec, f.real_data)
}

/// Convergence strip of f with the open-end margin applied.
fn check_strip(f: &RealFunction, re: f64) -> Result<()> {
    let (lo, hi) = f.strip();
    if re <= lo + STRIP_MARGIN || re >= hi - STRIP_MARGIN {
        return Err(Error::StripViolation { re, lo, hi });
    }
    Ok(())
}

/// int_0^inf f(x) x^{s-1} dx.
///
/// Integrates along the real axis, or along a rotated ray when f carries an
/// analytic continuation and |Im s| > 1.
pub fn mellin_forward(f: &RealFunction, s: Complex64, tol: f64) -> Result<QuadResult> {
    check_strip(f, s.re)?;
    if f.is_zero() {
        return Ok(QuadResult::zero());
    }
    let tail = match f.decay {
        Decay::Exponential { .. } => None,
        Decay::Power { exponent } => Some(exponent - s.re + 1.0),
    };
    let hl = HalfLine::default().origin(f.origin_exponent + s.re - 1.0).tail(tail);
    if let (Some(sector), true) = (f.continuation(), s.im.abs() > 1.0) {
        let mut gap = (0.3 * PI).min(0.5 * sector.half_angle);
        while gap * s.im.abs() > 14.0 && gap > 1e-3 {
            gap *= 0.5;
        }
        let theta = s.im.signum() * (sector.half_angle - gap);
        let dir = Complex64::from_polar(1.0, theta);
        let r = integrate_halfline_with(
            |r| {
                let x = dir * r;
                Ok(sector.eval(x)? * ((s - 1.0) * x.ln()).exp() * dir)
            },
            &hl,
            Tolerance::rel(tol),
        )?;
        return Ok(r);
    }
    integrate_halfline_with(|x| Ok(f.eval(x) * ((s - 1.0) * x.ln()).exp()), &hl, Tolerance::rel(tol))
}

/// int_0^inf e^{-p t} f(t) dt.
pub fn laplace(f: &RealFunction, p: f64, tol: f64) -> Result<QuadResult> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::DomainViolation(format!("Laplace transform needs p > 0, got {p}")));
    }
    if f.origin_exponent <= -1.0 {
        return Err(Error::DomainViolation(format!("{} is not locally integrable at 0", f.label())));
    }
    if f.is_zero() {
        return Ok(QuadResult::zero());
    }
    let hl = HalfLine::default().split(1.0 / p).origin(f.origin_exponent);
    integrate_halfline_with(|t| Ok(Complex64::new((-p * t).exp() * f.eval(t), 0.0)), &hl, Tolerance::rel(tol))
}

/// int_0^inf e^{-p t} f(t) dt for complex p; Re p must be positive, or above
/// -rate for exponentially decaying f.
pub fn laplace_complex(f: &RealFunction, p: Complex64, tol: f64) -> Result<QuadResult> {
    let edge = match f.decay {
        Decay::Exponential { rate } => -rate,
        Decay::Power { .. } => 0.0,
    };
    if !(p.re > edge && p.norm().is_finite()) {
        return Err(Error::DomainViolation(format!("Laplace transform needs Re p > {edge}, got {p}")));
    }
    if f.origin_exponent <= -1.0 {
        return Err(Error::DomainViolation(format!("{} is not locally integrable at 0", f.label())));
    }
    if f.is_zero() {
        return Ok(QuadResult::zero());
    }
    let hl = HalfLine::default().split(1.0 / p.norm()).origin(f.origin_exponent);
    integrate_halfline_with(|t| Ok((-p * t).exp() * f.eval(t)), &hl, Tolerance::rel(tol))
}

/// (1/2 pi) int e^{pi c1 |s|} |s^{c2} F(s)| dt along Re s = c0.
///
/// Finite only when the envelope beats the weight: a > pi c1, or a = pi c1
/// with p + c2 < -1.
pub fn space_norm(f: &LineFunction, c1: f64, c2: f64, tol: f64) -> Result<f64> {
    if 2.0 * sign(c1) + sign(c2) < 0.0 {
        return Err(Error::DomainViolation(format!("space index (c1, c2) = ({c1}, {c2}) violates 2 sign c1 + sign c2 >= 0")));
    }
    if f.is_zero() {
        return Ok(0.0);
    }
    let env = f.envelope;
    let rate = env.a - PI * c1;
    let power = env.p + c2;
    let finite = rate > 0.0 || (rate == 0.0 && power < -1.0);
    if !finite {
        return Err(Error::DivergentNorm(format!(
            "envelope |t|^{} e^(-{}|t|) against weight e^({} pi |s|) |s|^{c2} is not integrable",
            env.p, env.a, c1
        )));
    }
    let hl = HalfLine::default().tail(if rate > 0.0 { None } else { Some(-power) });
    let c0 = f.c0;
    let side = |d: f64| -> Result<f64> {
        let r = integrate_halfline_with(
            |t| {
                let s = Complex64::new(c0, d * t);
                let m = s.norm();
                Ok(Complex64::new((PI * c1 * m).exp() * m.powf(c2) * f.eval(s)?.norm(), 0.0))
            },
            &hl,
            Tolerance::rel(tol),
        )?;
        Ok(r.ensure_converged("space norm")?.value.re)
    };
    let total = if f.real_data { 2.0 * side(1.0)? } else { side(1.0)? + side(-1.0)? };
    Ok(total / (2.0 * PI))
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// The function represented by a symbol, evaluated pointwise by inverse
/// Mellin integrals; metadata is supplied by the caller.
pub fn represented(f: &LineFunction, origin_exponent: f64, decay: Decay, tol: f64) -> Result<RealFunction> {
    if f.is_zero() {
        return Ok(RealFunction::zero());
    }
    let g = f.clone();
    RealFunction::new(
        &format!("inverse Mellin of {}", f.label()),
        move |x| inverse_mellin(&g, x, tol).map(|r| r.value.re).unwrap_or(f64::NAN),
        origin_exponent,
        decay,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{besselk_real, gamma};

    fn exp_fn() -> RealFunction {
        RealFunction::new("exp", |x| (-x).exp(), 0.0, Decay::Exponential { rate: 1.0 }).unwrap()
    }

    #[test]
    fn inverse_mellin_examples() {
        let g = LineFunction::gamma(1.0).unwrap();
        let r = inverse_mellin(&g, 2.0, 1e-12).unwrap();
        assert!((r.value.re - (-2f64).exp()).abs() < 1e-10, "{}", r.value);

        // Gamma(s)/Gamma(s+1) = 1/s on Re s = 1/2: the unit step, equal to 1 for x < 1.
        // |1/s| ~ 1/t is not absolutely integrable, so only the improper form is accepted.
        let env = Envelope::new(1.0, -1.0, 0.0).unwrap();
        let ratio = |s: Complex64| Ok(gamma(s)? / gamma(s + 1.0)?);
        assert!(LineFunction::new("ratio", 0.5, ratio, env, true).is_err());
        let step = LineFunction::improper("ratio", 0.5, ratio, env, true).unwrap();
        let r = inverse_mellin(&step, 0.5, 1e-9).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-7, "{}", r.value);
        let r = inverse_mellin(&step, 2.0, 1e-9).unwrap();
        assert!(r.value.re.abs() < 1e-7, "{}", r.value);

        let sq = LineFunction::new(
            "gamma^2",
            0.5,
            |s| Ok(gamma(s)? * gamma(s)?),
            Envelope::new(1.1 * 2.0 * PI, 0.0, PI).unwrap(),
            true,
        )
        .unwrap();
        let r = inverse_mellin(&sq, 1.0, 1e-12).unwrap();
        let oracle = 2.0 * besselk_real(0.0, 1.0).unwrap();
        assert!((oracle - 0.227_787_745_499_066_87).abs() < 1e-13);
        assert!((r.value.re - oracle).abs() < 1e-10, "{}", r.value);
        assert!(r.value.im == 0.0);
    }

    #[test]
    fn mellin_forward_examples() {
        let f = exp_fn();
        let r = mellin_forward(&f, Complex64::new(0.5, 0.0), 1e-12).unwrap();
        assert!((r.value.re - PI.sqrt()).abs() < 1e-11);
        let r = mellin_forward(&f, Complex64::new(3.0, 0.0), 1e-12).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-11);
        let r = mellin_forward(&f, Complex64::new(0.7, 4.0), 1e-12).unwrap();
        let g = gamma(Complex64::new(0.7, 4.0)).unwrap();
        assert!((r.value - g).norm() < 1e-9 * g.norm());
        assert!(matches!(mellin_forward(&f, Complex64::new(0.0005, 0.0), 1e-10), Err(Error::StripViolation { .. })));
    }

    #[test]
    fn rotated_forward_matches_gamma() {
        let f = exp_fn().with_continuation(PI / 2.0, |z| Ok((-z).exp())).unwrap();
        for &s in &[Complex64::new(0.7, 12.0), Complex64::new(1.3, -25.0)] {
            let r = mellin_forward(&f, s, 1e-12).unwrap();
            let g = gamma(s).unwrap();
            assert!((r.value - g).norm() < 1e-9 * g.norm(), "{s}");
        }
    }

    #[test]
    fn mellin_round_trip_through_inverse() {
        let g = LineFunction::gamma(0.8).unwrap();
        let f = represented(&g, 0.0, Decay::Exponential { rate: 1.0 }, 1e-12).unwrap();
        for &t in &[0.0, 0.5, -1.0, 2.0, 3.5] {
            let s = Complex64::new(0.8, t);
            let r = mellin_forward(&f, s, 1e-9).unwrap();
            let want = g.eval(s).unwrap();
            assert!((r.value - want).norm() < 1e-7 * want.norm().max(1e-3), "{s}: {} vs {want}", r.value);
        }
    }

    #[test]
    fn laplace_examples() {
        assert!((laplace(&exp_fn(), 1.0, 1e-12).unwrap().value.re - 0.5).abs() < 1e-12);
        let one = RealFunction::new("one", |_| 1.0, 0.0, Decay::Power { exponent: 0.0 }).unwrap();
        assert!((laplace(&one, 2.0, 1e-12).unwrap().value.re - 0.5).abs() < 1e-12);
        let id = RealFunction::new("t", |t| t, 1.0, Decay::Power { exponent: -1.0 }).unwrap();
        assert!((laplace(&id, 3.0, 1e-12).unwrap().value.re - 1.0 / 9.0).abs() < 1e-12);
        assert!(laplace(&id, 0.0, 1e-12).is_err());
    }

    #[test]
    fn space_norm_examples() {
        let g = LineFunction::gamma(0.5).unwrap();
        let v = space_norm(&g, 0.0, 0.0, 1e-11).unwrap();
        // independent oracle: |Gamma(1/2 + it)| = sqrt(pi / cosh(pi t)), Simpson on [-40, 40]
        let n = 80_000;
        let h = 80.0 / n as f64;
        let w = |t: f64| (PI / (PI * t).cosh()).sqrt();
        let mut s = w(-40.0) + w(40.0);
        for i in 1..n {
            let t = -40.0 + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * w(t);
        }
        let oracle = s * h / 3.0 / (2.0 * PI);
        assert!((v - oracle).abs() < 1e-9 * oracle, "{v} vs {oracle}");
        assert_eq!(space_norm(&LineFunction::zero(0.5), 0.0, 0.0, 1e-10).unwrap(), 0.0);
        assert!(matches!(space_norm(&g, 0.5, 0.0, 1e-10), Err(Error::DivergentNorm(_))));
        assert!(space_norm(&g, -0.5, 1.0, 1e-10).is_err());
    }
}
