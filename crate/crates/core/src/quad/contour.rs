use num_complex::Complex64;
use std::f64::consts::PI;

use super::accel::oscillatory_tail;
use super::gk::{adapt, DEFAULT_MAX_INTERVALS};
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};

/// Decay descriptor on a vertical line: |F(c + it)| <= c |t|^p e^{-a|t|}
/// for |t| >= 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub c: f64,
    pub p: f64,
    pub a: f64,
}

impl Envelope {
    pub fn new(c: f64, p: f64, a: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite() && p.is_finite() && a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidInput(format!("bad envelope constants c={c}, p={p}, a={a}")));
        }
        Ok(Envelope { c, p, a })
    }

    /// The zero envelope.
    pub fn zero() -> Self {
        Envelope { c: 0.0, p: 0.0, a: 0.0 }
    }

    pub fn bound(&self, t: f64) -> f64 {
        let t = t.abs().max(1.0);
        self.c * t.powf(self.p) * (-self.a * t).exp()
    }

    /// Absolutely integrable along the line.
    pub fn integrable(&self) -> bool {
        self.c == 0.0 || self.a > 0.0 || self.p < -1.0
    }

    /// Tends to zero along the line.
    pub fn vanishing(&self) -> bool {
        self.c == 0.0 || self.a > 0.0 || self.p < 0.0
    }

    /// Upper bound of the integral of the envelope over (t, inf), t >= 1.
    pub fn tail_bound(&self, t: f64) -> f64 {
        let t = t.max(1.0);
        let (c, p, a) = (self.c, self.p, self.a);
        if c == 0.0 {
            return 0.0;
        }
        if a > 0.0 {
            if p <= 0.0 {
                return c * t.powf(p) * (-a * t).exp() / a;
            }
            let knee = 2.0 * p / a;
            if t >= knee {
                return 2.0 * c * t.powf(p) * (-a * t).exp() / a;
            }
            // bounded stretch up to the knee plus the tail beyond it
            let peak = if p / a > t { p / a } else { t };
            let mx = c * peak.powf(p) * (-a * peak).exp();
            return mx * (knee - t) + 2.0 * c * knee.powf(p) * (-a * knee).exp() / a;
        }
        if p < -1.0 {
            return c * t.powf(p + 1.0) / (-p - 1.0);
        }
        f64::INFINITY
    }

    /// Smallest height T >= 1 with tail_bound(T) <= target (capped at `cap`).
    pub fn height_for(&self, target: f64, cap: f64) -> f64 {
        if self.tail_bound(1.0) <= target {
            return 1.0;
        }
        let mut hi = 2.0;
        while self.tail_bound(hi) > target {
            hi *= 2.0;
            if hi >= cap {
                return cap;
            }
        }
        let mut lo = hi / 2.0;
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if self.tail_bound(m) > target {
                lo = m;
            } else {
                hi = m;
            }
        }
        hi.min(cap)
    }

    /// Envelope of a product.
    pub fn times(&self, other: &Envelope) -> Envelope {
        Envelope { c: self.c * other.c, p: self.p + other.p, a: self.a + other.a }
    }

    /// Multiply by C' |t|^dp e^{da |t|}.
    pub fn scaled(&self, c: f64, dp: f64, da: f64) -> Envelope {
        Envelope { c: self.c * c, p: self.p + dp, a: self.a - da }
    }
}

/// Node placement along the contour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContourPolicy {
    /// Trapezoid rule with spacing h on [-T, T]; `tol` decides the
    /// convergence flag.
    FixedStep { h: f64, tol: f64 },
    /// Adaptive panels; truncation from the envelope, oscillatory tails
    /// extrapolated.
    Adaptive { tol: f64 },
}

/// How the line integral is understood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    /// The envelope must be integrable along the line.
    Absolute,
    /// Improper Riemann sense: the envelope must only vanish at infinity.
    Improper,
}

/// Vertical contour Re z = gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub gamma: f64,
    /// Largest height ever sampled.
    pub truncation: f64,
    pub policy: ContourPolicy,
    pub convergence: Convergence,
}

pub(crate) const DEFAULT_TRUNCATION: f64 = 400.0;

impl ContourSpec {
    pub fn new(gamma: f64, truncation: f64, policy: ContourPolicy) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidInput(format!("contour abscissa must be finite, got {gamma}")));
        }
        if !(truncation > 0.0 && truncation.is_finite()) {
            return Err(Error::InvalidInput(format!("truncation height must be positive, got {truncation}")));
        }
        match policy {
            ContourPolicy::FixedStep { h, tol } => {
                if !(h > 0.0 && h < truncation) || !(tol > 0.0) {
                    return Err(Error::InvalidInput(format!("fixed step needs 0 < h < T and tol > 0, got h={h}, tol={tol}")));
                }
            }
            ContourPolicy::Adaptive { tol } => {
                if !(tol > 0.0) {
                    return Err(Error::InvalidInput(format!("adaptive policy needs tol > 0, got {tol}")));
                }
            }
        }
        Ok(ContourSpec { gamma, truncation, policy, convergence: Convergence::Absolute })
    }

    /// Adaptive contour with the default truncation cap.
    pub fn adaptive(gamma: f64, tol: f64) -> Result<Self> {
        ContourSpec::new(gamma, DEFAULT_TRUNCATION, ContourPolicy::Adaptive { tol })
    }

    /// Reject the abscissa if any declared pole lies on the line.
    pub fn with_poles(self, poles: &[Complex64]) -> Result<Self> {
        for p in poles {
            if (p.re - self.gamma).abs() < 1e-9 * (1.0 + p.re.abs()) {
                return Err(Error::PoleOnContour(format!("pole {p} on Re z = {}", self.gamma)));
            }
        }
        Ok(self)
    }

    pub fn improper(mut self) -> Self {
        self.convergence = Convergence::Improper;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn tol(&self) -> f64 {
        match self.policy {
            ContourPolicy::FixedStep { tol, .. } => tol,
            ContourPolicy::Adaptive { tol } => tol,
        }
    }
}

/// (1/2 pi i) int F(z) dz along Re z = gamma, i.e. (1/2 pi) int F(gamma + i t) dt.
///
/// `env` bounds |F| on the line. With `real_data` the caller declares
/// F(gamma - it) = conj F(gamma + it); only t >= 0 is sampled and the
/// result is real.
pub fn integrate_contour<F>(f: F, env: &Envelope, spec: &ContourSpec, real_data: bool) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    match spec.convergence {
        Convergence::Absolute if !env.integrable() => {
            return Err(Error::EnvelopeTooWeak(format!(
                "integrand envelope |t|^{:.4} e^(-{:.4}|t|) is not integrable on Re z = {}",
                env.p, env.a, spec.gamma
            )))
        }
        Convergence::Improper if !env.vanishing() => {
            return Err(Error::EnvelopeTooWeak(format!(
                "integrand envelope |t|^{:.4} e^(-{:.4}|t|) does not vanish on Re z = {}",
                env.p, env.a, spec.gamma
            )))
        }
        _ => {}
    }
    let gamma = spec.gamma;
    let g = |t: f64| -> Result<Complex64> {
        let v = f(Complex64::new(gamma, t))?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::SingularIntegrand { at: format!("{gamma}{t:+}i") });
        }
        if t.abs() >= 1.0 {
            let b = env.bound(t);
            if v.norm() > 10.0 * b {
                return Err(Error::EnvelopeViolation { t, value: v.norm(), bound: b });
            }
        }
        Ok(v)
    };
    if env.c == 0.0 {
        // the zero envelope admits only the zero function
        let probe = g(0.0)?;
        if probe.norm() != 0.0 {
            return Err(Error::EnvelopeViolation { t: 0.0, value: probe.norm(), bound: 0.0 });
        }
        return Ok(QuadResult::zero());
    }
    let sides = if real_data { 1.0 } else { 2.0 };
    // int_0^inf of the folded integrand
    let folded = |t: f64| -> Result<Complex64> {
        if real_data {
            // only the real part survives the fold
            Ok(Complex64::new(g(t)?.re, 0.0))
        } else {
            Ok(g(t)? + g(-t)?)
        }
    };
    let finish = |acc: Complex64| -> Complex64 {
        if real_data {
            Complex64::new(acc.re / PI, 0.0)
        } else {
            acc / (2.0 * PI)
        }
    };
    let cap = spec.truncation;

    match spec.policy {
        ContourPolicy::FixedStep { h, tol } => {
            let n = (cap / h).floor() as usize;
            let mut s_h = Complex64::new(0.0, 0.0);
            let mut s_2h = Complex64::new(0.0, 0.0);
            for k in 0..=n {
                let w = if k == 0 { 0.5 } else { 1.0 };
                let v = folded(k as f64 * h)? * w;
                s_h += v;
                if k % 2 == 0 {
                    s_2h += v;
                }
            }
            let evals = (n + 1) * if real_data { 1 } else { 2 };
            let i_h = s_h * h;
            let i_2h = s_2h * (2.0 * h);
            let value = finish(i_h);
            let disc = (finish(i_h) - finish(i_2h)).norm();
            let tail = sides * env.tail_bound(n as f64 * h) / (2.0 * PI);
            let err = disc + tail;
            let converged = err <= tol * value.norm().max(f64::MIN_POSITIVE) || (err == 0.0);
            Ok(QuadResult { value, err_abs: err, evals, converged })
        }
        ContourPolicy::Adaptive { tol } => {
            let tau0 = cap.min(4.0);
            let core = adapt(&folded, &[(0.0, tau0)], Tolerance::rel(0.1 * tol), DEFAULT_MAX_INTERVALS)?;
            let mut acc = core.value;
            let mut err = core.err_abs;
            let mut evals = core.evals * if real_data { 1 } else { 2 };
            let mut converged = core.converged;
            let mut reached = tau0;
            let scale_of = |acc: Complex64| finish(acc).norm().max(1e-300);

            if env.a > 0.0 {
                // exponential decay: extend panels until the envelope tail is small
                loop {
                    let target = 0.25 * tol * scale_of(acc) * 2.0 * PI / sides;
                    let need = env.height_for(target, cap);
                    if need <= reached || reached >= cap {
                        break;
                    }
                    let next = need.min(cap).min(2.0 * reached.max(1.0)).max(reached + 1.0).min(cap);
                    let abs = 0.1 * tol * scale_of(acc) * 2.0 * PI / sides;
                    let p = adapt(&folded, &[(reached, next)], Tolerance::new(abs, 0.1 * tol), DEFAULT_MAX_INTERVALS)?;
                    acc += p.value;
                    err += p.err_abs;
                    evals += p.evals * if real_data { 1 } else { 2 };
                    converged &= p.converged;
                    reached = next;
                }
                let value = finish(acc);
                let tail = sides * env.tail_bound(reached) / (2.0 * PI);
                let err_total = err / if real_data { PI } else { 2.0 * PI } + tail;
                let ok = converged && err_total <= tol * value.norm().max(f64::MIN_POSITIVE) + 100.0 * f64::EPSILON * core_abs(&core);
                return Ok(QuadResult { value, err_abs: err_total, evals, converged: ok || value.norm() == 0.0 && err_total == 0.0 });
            }

            // algebraic envelope: extrapolate the oscillatory tail on each side
            let algebraic = |scale: Option<f64>| -> Result<(QuadResult, bool)> {
                let (core, mut acc, mut evals) = match scale {
                    None => (core, core.value, evals),
                    Some(sc) => {
                        // cancellation: hold the core to the size of the result, not of the partial sum
                        let abs = 0.1 * tol * sc * 2.0 * PI / sides;
                        let q = adapt(&folded, &[(0.0, tau0)], Tolerance::new(abs, 0.0), DEFAULT_MAX_INTERVALS)?;
                        let v = q.value;
                        let n = q.evals * if real_data { 1 } else { 2 };
                        (q, v, evals + n)
                    }
                };
                let mut err = core.err_abs;
                let scale = scale.unwrap_or_else(|| scale_of(acc));
                let tail_tol = 0.25 * tol * scale * 2.0 * PI / sides;
                let dirs: &[f64] = if real_data { &[1.0] } else { &[1.0, -1.0] };
                let mut tails_ok = true;
                for &d in dirs {
                    let side = |t: f64| g(d * t);
                    let tr = oscillatory_tail(&side, tau0, cap, tail_tol)?;
                    evals += tr.evals;
                    acc += tr.value;
                    err += tr.err_abs;
                    if !tr.converged {
                        tails_ok = false;
                        if !tr.settled && spec.convergence == Convergence::Absolute {
                            err += env.tail_bound(tr.reached);
                        }
                    }
                }
                let value = finish(acc);
                let err_total = err / if real_data { PI } else { 2.0 * PI };
                let ok = core.converged && tails_ok && err_total <= tol * value.norm().max(f64::MIN_POSITIVE);
                Ok((QuadResult { value, err_abs: err_total, evals, converged: ok }, tails_ok))
            };
            let (first, tails_ok) = algebraic(None)?;
            let partial = finish(core.value).norm();
            if first.converged || !tails_ok || first.value.norm() == 0.0 || first.value.norm() > 0.5 * partial {
                return Ok(first);
            }
            // the refinement may walk into overflow far up the contour; keep the first pass then
            match algebraic(Some(first.value.norm())) {
                Ok((second, _)) => Ok(QuadResult { evals: first.evals + second.evals, ..second }),
                Err(_) => Ok(first),
            }
        }
    }
}

fn core_abs(q: &QuadResult) -> f64 {
    q.value.norm()
}
