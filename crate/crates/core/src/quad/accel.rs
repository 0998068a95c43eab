use num_complex::Complex64;
use std::f64::consts::PI;

use super::gk::adapt;
use super::Tolerance;
use crate::error::Result;

const MAX_ZEROS: usize = 120;
const WYNN_WINDOW: usize = 24;
/// Subintervals per tail panel. Noisy integrands stop here instead of
/// exhausting the default budget; the panel error then joins the tail error.
const PANEL_MAX_INTERVALS: usize = 32;

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// Returns the extrapolated limit and an error estimate.
pub fn wynn_epsilon(seq: &[Complex64]) -> (Complex64, f64) {
    let n = seq.len();
    if n == 0 {
        return (Complex64::new(0.0, 0.0), f64::INFINITY);
    }
    if n < 3 {
        let last = seq[n - 1];
        let err = if n == 2 { (seq[1] - seq[0]).norm() } else { f64::INFINITY };
        return (last, err);
    }
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = seq.to_vec();
    // (estimate, error) per even column
    let mut evens: Vec<(Complex64, f64)> = vec![(seq[n - 1], (seq[n - 1] - seq[n - 2]).norm())];
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut ok = true;
        for j in 0..cur.len() - 1 {
            let d = cur[j + 1] - cur[j];
            if d.norm() == 0.0 || !d.re.is_finite() {
                ok = false;
                break;
            }
            next.push(prev[j + 1] + 1.0 / d);
        }
        if !ok {
            break;
        }
        k += 1;
        prev = cur;
        cur = next;
        if k % 2 == 0 && !cur.is_empty() {
            let m = cur.len();
            let est = cur[m - 1];
            if !(est.re.is_finite() && est.im.is_finite()) {
                break;
            }
            let err = if m >= 2 { (cur[m - 1] - cur[m - 2]).norm() } else { f64::INFINITY };
            evens.push((est, err));
        }
    }
    // pick the column with the smallest self-consistency error, also
    // accounting for its distance to the neighbouring column
    let mut best = evens[0];
    let mut best_err = evens[0].1;
    for i in 1..evens.len() {
        let spread = (evens[i].0 - evens[i - 1].0).norm();
        let err = evens[i].1.max(spread);
        if err < best_err {
            best = evens[i];
            best_err = err;
        }
    }
    (best.0, best_err)
}

/// Result of an extrapolated oscillatory tail integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailResult {
    pub value: Complex64,
    pub err_abs: f64,
    pub evals: usize,
    pub converged: bool,
    /// Largest abscissa sampled.
    pub reached: f64,
    /// The tail settled; `err_abs` then covers everything beyond `reached`.
    pub settled: bool,
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    } else if a < -PI {
        a += 2.0 * PI;
    }
    a
}

fn refine_zero(g: &dyn Fn(f64) -> Result<Complex64>, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, evals: &mut usize) -> Result<f64> {
    // Illinois variant of regula falsi on Re g
    let mut side = 0i32;
    for _ in 0..60 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() < 1e-10 * (1.0 + b.abs()) {
            return Ok(c);
        }
        let fc = g(c)?.re;
        *evals += 1;
        if fc == 0.0 {
            return Ok(c);
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    Ok(0.5 * (a + b))
}

/// Integral of g over (tau0, inf) for an oscillating integrand with slowly
/// decaying amplitude.
///
/// The integral is split at successive zeros of Re g, located by a march
/// whose step follows the local phase speed of g; each panel is integrated
/// adaptively and the partial sums are extrapolated by the epsilon algorithm.
pub fn oscillatory_tail(g: &dyn Fn(f64) -> Result<Complex64>, tau0: f64, tau_cap: f64, tol_abs: f64) -> Result<TailResult> {
    let mut evals = 0usize;
    let panel_tol = Tolerance::new(0.02 * tol_abs, 1e-13);
    let mut t = tau0;
    let mut gt = g(t)?;
    evals += 1;
    let mut step = 0.05 * (1.0 + t.abs());
    let mut last_break = tau0;
    let mut sums: Vec<Complex64> = Vec::new();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut small_panels = 0usize;
    let mut prev_est: Option<(Complex64, f64)> = None;
    let mut flat_steps = 0usize;
    // error of panels that stopped at the subinterval cap
    let mut unresolved = 0.0;

    while t < tau_cap && sums.len() < MAX_ZEROS {
        let tn = (t + step).min(tau_cap);
        let gn = g(tn)?;
        evals += 1;
        let dpsi = if gt.norm() > 0.0 && gn.norm() > 0.0 { wrap(gn.arg() - gt.arg()) } else { 0.0 };
        if dpsi.abs() > 0.8 && step > 1e-9 * (1.0 + t) {
            step *= 0.5;
            continue;
        }
        let crossed = gt.re != 0.0 && gn.re != 0.0 && (gt.re > 0.0) != (gn.re > 0.0);
        if crossed || gn.re == 0.0 {
            let z = if gn.re == 0.0 { tn } else { refine_zero(g, t, gt.re, tn, gn.re, &mut evals)? };
            let p = adapt(&|x| g(x), &[(last_break, z)], panel_tol, PANEL_MAX_INTERVALS)?;
            evals += p.evals;
            if !p.converged {
                unresolved += p.err_abs;
            }
            acc += p.value;
            sums.push(acc);
            last_break = z;
            if p.value.norm() < 0.05 * tol_abs {
                small_panels += 1;
            } else {
                small_panels = 0;
            }
            if small_panels >= 2 {
                return Ok(TailResult { value: acc, err_abs: p.value.norm() + unresolved, evals, converged: unresolved < tol_abs, reached: tn, settled: true });
            }
            if sums.len() >= 6 {
                let window = &sums[sums.len().saturating_sub(WYNN_WINDOW)..];
                let (est, err) = wynn_epsilon(window);
                if let Some((pe, perr)) = prev_est {
                    let drift = (est - pe).norm();
                    let e = err.max(drift);
                    // unresolved panel error is a noise floor the extrapolation cannot beat
                    let floor = tol_abs.max(unresolved);
                    if e < floor && perr < 4.0 * floor {
                        let err_abs = e + unresolved;
                        return Ok(TailResult { value: est, err_abs, evals, converged: err_abs < tol_abs, reached: tn, settled: true });
                    }
                }
                prev_est = Some((est, err));
            }
        }
        // aim for a phase advance of about 0.4 rad per step
        let speed = dpsi.abs() / (tn - t);
        let target = if speed > 0.0 { 0.4 / speed } else { 2.0 * step };
        if dpsi.abs() < 1e-3 {
            flat_steps += 1;
        } else {
            flat_steps = 0;
        }
        step = target.min(2.0 * step).max(1e-6 * (1.0 + tn)).min(0.5 * (1.0 + tn));
        if flat_steps > 4000 {
            break;
        }
        t = tn;
        gt = gn;
    }
    let (value, err) = match prev_est {
        Some((e, err)) => (e, err + unresolved),
        None => (acc, f64::INFINITY),
    };
    Ok(TailResult { value, err_abs: err, evals, converged: false, reached: t, settled: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wynn_accelerates_alternating_series() {
        // partial sums of log 2 = 1 - 1/2 + 1/3 - ...
        let mut s = Complex64::new(0.0, 0.0);
        let mut seq = Vec::new();
        for k in 1..=15 {
            s += Complex64::new(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0);
            seq.push(s);
        }
        let (v, err) = wynn_epsilon(&seq);
        assert!((v.re - 2f64.ln()).abs() < 1e-10, "{v}");
        assert!(err < 1e-8);
    }

    #[test]
    fn tail_of_slowly_decaying_oscillation() {
        // int_1^inf cos(x) / sqrt(x) dx = sqrt(pi/2) - sqrt(2 pi) C(sqrt(2/pi)) ... use
        // int_1^inf sin(x)/x dx = pi/2 - Si(1)
        let si1 = 0.946_083_070_367_183_1;
        let g = |x: f64| Ok(Complex64::new(x.sin() / x, -x.cos() / x));
        // Re g crosses zero where sin x = 0
        let r = oscillatory_tail(&g, 1.0, 1e4, 1e-10).unwrap();
        assert!(r.converged);
        assert!((r.value.re - (std::f64::consts::FRAC_PI_2 - si1)).abs() < 1e-9, "{}", r.value);
    }
}
