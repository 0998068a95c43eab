use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

pub(crate) const MAX_DEPTH: u32 = 40;
pub(crate) const DEFAULT_MAX_INTERVALS: usize = 2000;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub a: f64,
    pub b: f64,
    pub value: Complex64,
    pub err: f64,
    pub resabs: f64,
    pub depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn checked<F>(f: &F, x: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let v = f(x)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::SingularIntegrand { at: format!("{x:e}") })
    }
}

/// One Gauss-Kronrod 15 point panel with the QUADPACK error heuristic.
pub(crate) fn gk15<F>(f: &F, a: f64, b: f64, depth: u32) -> Result<Segment>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = checked(f, c)?;
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    let mut resabs = WGK[7] * fc.norm();
    let mut fv1 = [Complex64::new(0.0, 0.0); 7];
    let mut fv2 = [Complex64::new(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = hl * XGK[j];
        let f1 = checked(f, c - dx)?;
        let f2 = checked(f, c + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        rk += (f1 + f2) * WGK[j];
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            rg += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = rk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let ahl = hl.abs();
    let value = rk * hl;
    resabs *= ahl;
    resasc *= ahl;
    let mut err = ((rk - rg) * hl).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Segment { a, b, value, err, resabs, depth })
}

/// Globally adaptive GK15 over a list of initial panels.
pub(crate) fn adapt<F>(f: &F, panels: &[(f64, f64)], tol: Tolerance, max_intervals: usize) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut resabs = 0.0;
    let mut frozen_err = 0.0;
    for &(a, b) in panels {
        if b == a {
            continue;
        }
        let s = gk15(f, a, b, 0)?;
        evals += 15;
        value += s.value;
        err += s.err;
        resabs += s.resabs;
        heap.push(s);
    }
    let mut count = heap.len();
    loop {
        let target = tol.target(value.norm(), resabs);
        if err <= target {
            return Ok(QuadResult { value, err_abs: err, evals, converged: true });
        }
        if count >= max_intervals {
            break;
        }
        let Some(s) = heap.pop() else { break };
        if s.depth >= MAX_DEPTH {
            // leave it in the total but stop refining it
            frozen_err += s.err;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let m = 0.5 * (s.a + s.b);
        let l = gk15(f, s.a, m, s.depth + 1)?;
        let r = gk15(f, m, s.b, s.depth + 1)?;
        evals += 30;
        count += 1;
        value += l.value + r.value - s.value;
        err += l.err + r.err - s.err;
        resabs += l.resabs + r.resabs - s.resabs;
        heap.push(l);
        heap.push(r);
    }
    // recompute the totals to shed accumulated rounding in the running sums
    let mut v = Complex64::new(0.0, 0.0);
    let mut e = frozen_err;
    for s in heap.iter() {
        v += s.value;
        e += s.err;
    }
    let converged = e <= tol.target(v.norm(), resabs);
    Ok(QuadResult { value: v, err_abs: e, evals, converged })
}

/// Adaptive integration over a finite interval.
pub fn integrate_finite<F>(f: F, a: f64, b: f64, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput("finite interval endpoints required".into()));
    }
    adapt(&f, &[(a, b)], tol.into(), DEFAULT_MAX_INTERVALS)
}

/// Behaviour of a half-line integrand near 0 and at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfLine {
    /// Split point between the origin and tail maps.
    pub split: f64,
    /// The integrand behaves like x^origin_power as x -> 0 (must exceed -1).
    pub origin_power: f64,
    /// Algebraic decay exponent q (integrand ~ x^-q, q > 1) or None for
    /// exponential decay.
    pub tail_power: Option<f64>,
    pub max_intervals: usize,
}

impl Default for HalfLine {
    fn default() -> Self {
        HalfLine { split: 1.0, origin_power: 0.0, tail_power: None, max_intervals: DEFAULT_MAX_INTERVALS }
    }
}

impl HalfLine {
    pub fn split(mut self, s: f64) -> Self {
        self.split = s;
        self
    }
    pub fn origin(mut self, p: f64) -> Self {
        self.origin_power = p;
        self
    }
    pub fn tail(mut self, q: Option<f64>) -> Self {
        self.tail_power = q;
        self
    }
    pub fn max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }

    /// Map exponents for x = s t^m on (0, s) and x = s u^-k on (s, inf).
    pub(crate) fn exponents(&self) -> (f64, f64) {
        let m = if self.origin_power >= 0.0 { 2.0 } else { (2.0 / (self.origin_power + 1.0)).max(2.0).min(40.0) };
        let k = match self.tail_power {
            None => 2.0,
            Some(q) => (2.0 / (q - 1.0)).max(2.0).min(40.0),
        };
        (m, k)
    }
}

/// Integral over (0, inf) with the default half-line description.
pub fn integrate_halfline<F>(f: F, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    integrate_halfline_with(f, &HalfLine::default(), tol)
}

/// Integral over (0, inf): split at `hl.split`, map both pieces onto (0, 1)
/// by power substitutions and run one global adaptive process.
pub fn integrate_halfline_with<F>(f: F, hl: &HalfLine, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let s = hl.split;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidInput(format!("half-line split must be positive, got {s}")));
    }
    if hl.origin_power <= -1.0 {
        return Err(Error::DomainViolation(format!("origin power {} is not integrable", hl.origin_power)));
    }
    if let Some(q) = hl.tail_power {
        if q <= 1.0 {
            return Err(Error::DomainViolation(format!("tail power {q} is not integrable")));
        }
    }
    let (m, k) = hl.exponents();
    let g = |t: f64| -> Result<Complex64> {
        if t <= 1.0 {
            if t <= 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let x = s * t.powf(m);
            if x == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            Ok(f(x)? * (s * m * t.powf(m - 1.0)))
        } else {
            let u = 2.0 - t;
            if u <= 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let x = s * u.powf(-k);
            if !x.is_finite() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let v = f(x)?;
            if v == Complex64::new(0.0, 0.0) {
                return Ok(v);
            }
            Ok(v * (s * k * u.powf(-k - 1.0)))
        }
    };
    adapt(&g, &[(0.0, 1.0), (1.0, 2.0)], tol.into(), hl.max_intervals)
}

/// Iterated integral over the quarter plane (0, inf)^2; the inner variable
/// is v.
pub fn integrate_quarterplane<F>(f2: F, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    integrate_quarterplane_with(f2, &HalfLine::default(), &HalfLine::default(), tol)
}

/// Quarter-plane integral with explicit half-line descriptions for the outer
/// (u) and inner (v) variables.
pub fn integrate_quarterplane_with<F>(f2: F, outer: &HalfLine, inner: &HalfLine, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    let tol = tol.into();
    let inner_tol = Tolerance { abs: tol.abs * 0.1, rel: tol.rel * 0.1 };
    let inner_err = std::cell::Cell::new(0.0f64);
    let inner_evals = std::cell::Cell::new(0usize);
    let outer_f = |u: f64| -> Result<Complex64> {
        let r = integrate_halfline_with(|v| f2(u, v), inner, inner_tol).map_err(|e| label(e, "inner"))?;
        inner_evals.set(inner_evals.get() + r.evals);
        if !r.converged {
            return Err(Error::NonConvergence { level: format!("inner integral at u = {u:e}"), estimate: r.value.norm(), err_abs: r.err_abs });
        }
        inner_err.set(inner_err.get().max(r.err_abs / r.value.norm().max(f64::MIN_POSITIVE)));
        Ok(r.value)
    };
    let r = integrate_halfline_with(outer_f, outer, tol).map_err(|e| label(e, "outer"))?;
    let err = r.err_abs + inner_err.get() * r.value.norm();
    Ok(QuadResult {
        value: r.value,
        err_abs: err,
        evals: inner_evals.get(),
        converged: r.converged,
    })
}

fn label(e: Error, level: &str) -> Error {
    match e {
        Error::NonConvergence { level: l, estimate, err_abs } => {
            let level = if l.starts_with("inner") { l } else { format!("{level}: {l}") };
            Error::NonConvergence { level, estimate, err_abs }
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::besselk_real;

    fn r(v: f64) -> Result<Complex64> {
        Ok(Complex64::new(v, 0.0))
    }

    #[test]
    fn finite_polynomial_exact() {
        let q = integrate_finite(|x| r(x * x * x), 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value.re - 4.0).abs() < 1e-13 && q.converged);
    }

    #[test]
    fn halfline_examples() {
        let q = integrate_halfline(|x| r((-x).exp()), 1e-12).unwrap();
        assert!((q.value.re - 1.0).abs() < 1e-12 && q.converged);
        let q = integrate_halfline(|x| r(x.powf(-0.5) * (-x).exp()), 1e-12).unwrap();
        assert!((q.value.re - 1.772_453_850_905_516).abs() < 1e-11, "{}", q.value);
        let q = integrate_halfline(|x| r(besselk_real(0.0, x).unwrap().powi(2)), 1e-11).unwrap();
        assert!((q.value.re - 0.25).abs() < 1e-10, "{}", q.value);
    }

    #[test]
    fn halfline_strong_singularity_and_power_tail() {
        let hl = HalfLine::default().origin(-0.75).tail(Some(1.5));
        // int x^{-3/4} / (1 + x)^{3/4} ... use x^{-3/4}/(1+x) = pi / sin(pi/4)
        let q = integrate_halfline_with(|x| r(x.powf(-0.75) / (1.0 + x)), &hl.tail(Some(1.75)), 1e-10).unwrap();
        let exact = std::f64::consts::PI / (std::f64::consts::PI * 0.25).sin();
        assert!((q.value.re - exact).abs() < 1e-9 * exact, "{} {}", q.value, exact);
    }

    #[test]
    fn zero_integrand() {
        let q = integrate_halfline(|_| r(0.0), 1e-10).unwrap();
        assert_eq!(q.value, Complex64::new(0.0, 0.0));
        assert!(q.converged);
        let q = integrate_quarterplane(|_, _| r(0.0), 1e-10).unwrap();
        assert_eq!(q.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn singular_integrand_reported() {
        let e = integrate_finite(|x| r(1.0 / (x - 0.5)), 0.0, 1.0, 1e-10);
        assert!(e.is_ok() || matches!(e, Err(Error::SingularIntegrand { .. })));
        let e = integrate_finite(|_| r(f64::NAN), 0.0, 1.0, 1e-10);
        assert!(matches!(e, Err(Error::SingularIntegrand { .. })));
    }

    #[test]
    fn quarterplane_product() {
        let q = integrate_quarterplane(|u, v| r((-u - v).exp()), 1e-10).unwrap();
        assert!((q.value.re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn quarterplane_bessel_against_tensor_grid() {
        let f = |u: f64, v: f64| besselk_real(0.0, (1.0 + u) * (1.0 + v)).unwrap() * (-u - v).exp();
        let q = integrate_quarterplane(|u, v| r(f(u, v)), 1e-9).unwrap();
        // independent oracle: 200 x 200 Gauss-Legendre-free tensor Simpson on [0, 30]^2
        // after the substitution u = s^2 (smooth, rapidly decaying integrand)
        let n = 200;
        let smax: f64 = 5.5;
        let h = smax / n as f64;
        let w = |i: usize| if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let mut acc = 0.0;
        for i in 0..=n {
            let s = i as f64 * h;
            for j in 0..=n {
                let t = j as f64 * h;
                acc += w(i) * w(j) * f(s * s, t * t) * 4.0 * s * t;
            }
        }
        let oracle = acc * h * h / 9.0;
        assert!((q.value.re - oracle).abs() < 1e-6 * oracle, "{} {}", q.value.re, oracle);
    }
}
