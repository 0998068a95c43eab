use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const POLE_DISTANCE: f64 = 1e-9;

/// Gamma value together with its principal logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEval {
    pub argument: Complex64,
    pub value: Complex64,
    pub log_value: Complex64,
}

impl GammaEval {
    pub fn new(w: Complex64) -> Result<Self> {
        Ok(GammaEval {
            argument: w,
            value: gamma(w)?,
            log_value: log_gamma(w)?,
        })
    }
}

pub(crate) fn check_pole(w: Complex64) -> Result<()> {
    let n = w.re.round();
    if n <= 0.0 && (w - Complex64::new(n, 0.0)).norm() < POLE_DISTANCE {
        return Err(Error::PoleProximity { re: w.re, im: w.im });
    }
    Ok(())
}

/// True when `w` is within the pole distance of a non-positive integer.
pub fn near_pole(w: Complex64) -> bool {
    check_pole(w).is_err()
}

fn lanczos_sum(w: Complex64) -> Complex64 {
    // w is the shifted argument (Gamma(w + 1))
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (w + k as f64);
    }
    acc
}

/// Lanczos log-gamma for Re w >= 1/2.
fn log_gamma_right(w: Complex64) -> Complex64 {
    let wm = w - 1.0;
    let t = wm + LANCZOS_G + 0.5;
    HALF_LN_2PI + (wm + 0.5) * t.ln() - t + lanczos_sum(wm).ln()
}

fn gamma_right(w: Complex64) -> Complex64 {
    let wm = w - 1.0;
    let t = wm + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * ((wm + 0.5) * t.ln() - t).exp() * lanczos_sum(wm)
}

/// Euler's gamma function for complex argument.
pub fn gamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    let v = if w.re < 0.5 {
        let s = (PI * w).sin();
        PI / (s * gamma_right(1.0 - w))
    } else {
        gamma_right(w)
    };
    if v.re.is_finite() && v.im.is_finite() && (v.norm() > 0.0 || w.im.abs() < 100.0) {
        return Ok(v);
    }
    let lv = log_gamma(w)?;
    let v = lv.exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("gamma({w})")))
    }
}

/// Principal branch of log Gamma, analytic off the non-positive real axis.
///
/// For Re w < 1/2 the argument is shifted to the right by the recurrence,
/// subtracting principal logarithms. The result is continuous on vertical
/// lines with Re w >= 0 and jumps by a multiple of 2 pi i where a line with
/// Re w < 0 crosses the real axis.
pub fn log_gamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    if w.re >= 0.5 {
        return Ok(log_gamma_right(w));
    }
    let n = (0.5 - w.re).ceil() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += (w + k as f64).ln();
    }
    Ok(log_gamma_right(w + n as f64) - acc)
}

/// 1/Gamma(w), entire; exactly zero at the poles.
pub fn rgamma(w: Complex64) -> Complex64 {
    if near_pole(w) {
        return Complex64::new(0.0, 0.0);
    }
    match log_gamma(w) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn trivial_values() {
        assert!(rel(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(1.772_453_850_905_516, 0.0)) < 1e-14);
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-13);
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn log_gamma_ten_matches_log_factorial() {
        let oracle: f64 = (1..=9).map(|k| (k as f64).ln()).sum();
        assert!((oracle - 12.801_827_480_081_469).abs() < 1e-13);
        let v = log_gamma(c(10.0, 0.0)).unwrap();
        assert!((v.re - oracle).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn gamma_three_quarters_matches_euler_integral() {
        // independent oracle: composite Simpson on t = u^4 substitution
        let w = 0.75;
        let f = |u: f64| {
            if u == 0.0 {
                return 0.0;
            }
            let t = u.powi(4);
            4.0 * u.powi(3) * t.powf(w - 1.0) * (-t).exp()
        };
        let (a, b, n) = (0.0, 7.0, 200_000);
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
        }
        let oracle = s * h / 3.0;
        let v = gamma(c(w, 0.0)).unwrap();
        assert!((v.re - oracle).abs() / oracle < 1e-10, "{} vs {}", v.re, oracle);
        assert!((v.re - 1.225_416_702_465_177_6).abs() < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        for n in 0..5 {
            let w = c(-(n as f64) + 1e-10, 0.0);
            assert!(matches!(gamma(w), Err(Error::PoleProximity { .. })));
            assert!(matches!(log_gamma(w), Err(Error::PoleProximity { .. })));
        }
        assert!(gamma(c(-1.0 + 1e-6, 0.0)).is_ok());
    }

    #[test]
    fn recurrence_and_reflection() {
        for &w in &[c(0.3, 0.7), c(-2.4, 1.1), c(3.2, -5.0), c(0.1, 20.0)] {
            let g = gamma(w).unwrap();
            let g1 = gamma(w + 1.0).unwrap();
            assert!(rel(g1, w * g) < 1e-12, "{w}");
            let refl = gamma(1.0 - w).unwrap() * g * (PI * w).sin();
            assert!(rel(refl, c(PI, 0.0)) < 1e-12, "{w}");
        }
    }

    #[test]
    fn exp_of_log_matches_value() {
        for &w in &[c(0.3, 0.7), c(-2.4, 1.1), c(7.5, -30.0), c(-0.5, 12.0), c(0.25, -60.0)] {
            let e = GammaEval::new(w).unwrap();
            assert!(rel(e.log_value.exp(), e.value) < 1e-12, "{w}");
        }
    }

    #[test]
    fn log_gamma_continuous_on_vertical_lines() {
        for &re in &[-1.5, -0.25, 0.5, 1.0, 3.0] {
            let mut prev = log_gamma(c(re, -200.0)).unwrap();
            let mut t = -200.0;
            while t < 200.0 {
                t += 0.05;
                let cur = log_gamma(c(re, t)).unwrap();
                // the principal branch is cut along the negative real axis
                let crosses_cut = re < 0.0 && (t - 0.05) * t <= 0.0;
                assert!(crosses_cut || (cur.im - prev.im).abs() < 1.0, "jump at {re}+{t}i");
                prev = cur;
            }
        }
    }

    #[test]
    fn log_gamma_large_imaginary_against_stirling() {
        // Stirling with two correction terms is accurate to ~1e-12 at |w| = 300
        let w = c(0.7, 300.0);
        let st = (w - 0.5) * w.ln() - w + HALF_LN_2PI + 1.0 / (12.0 * w) - 1.0 / (360.0 * w * w * w);
        assert!((log_gamma(w).unwrap() - st).norm() < 1e-10);
    }

    #[test]
    fn stirling_decay_constant() {
        for &g in &[-0.7, -0.25, 0.5, 1.0] {
            let t: f64 = 50.0;
            let v = gamma(c(g, t)).unwrap().norm() * (PI * t / 2.0).exp() * t.powf(0.5 - g);
            assert!((v / (2.0 * PI).sqrt() - 1.0).abs() < 0.01, "{g}: {v}");
        }
    }

    #[test]
    fn rgamma_zero_at_poles() {
        assert_eq!(rgamma(c(-3.0, 0.0)), c(0.0, 0.0));
        assert!(rel(rgamma(c(4.0, 0.0)), c(1.0 / 6.0, 0.0)) < 1e-14);
    }
}
