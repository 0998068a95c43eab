use klt::convolution::{convolve, young_norms};
use klt::mellin::{Decay, RealFunction};
use klt::quad::{integrate_contour, integrate_halfline_with, ContourSpec, Envelope, HalfLine};
use klt::specfun::{besseli_scaled, besselk, gamma};
use klt::transform::forward;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn decaying(rate: f64) -> RealFunction {
    RealFunction::new("exp(-a x)", move |x| (-rate * x).exp(), 0.0, Decay::Exponential { rate }).unwrap()
}

fn damped_rational(rate: f64) -> RealFunction {
    RealFunction::new("exp(-a x)/(1+x)", move |x| (-rate * x).exp() / (1.0 + x), 0.0, Decay::Exponential { rate }).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_symmetry(re in -3.0..3.0f64, im in -6.0..6.0f64, x in 1e-3..30.0f64) {
        let a = besselk(c(re, im), x).unwrap();
        let b = besselk(c(-re, -im), x).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-300), "{a} {b}");
    }

    #[test]
    fn conjugate_order(re in -3.0..3.0f64, im in -6.0..6.0f64, x in 1e-3..30.0f64) {
        let a = besselk(c(re, im), x).unwrap();
        let b = besselk(c(re, -im), x).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn kernel_derivative(re in -2.0..2.0f64, im in -3.0..3.0f64, x in 0.05..20.0f64) {
        // d/dx x^{z/2} K_z(2 sqrt x) = -x^{(z-1)/2} K_{z-1}(2 sqrt x)
        let z = c(re, im);
        let k = |x: f64| (z * 0.5 * x.ln()).exp() * besselk(z, x).unwrap();
        let h = 1e-5 * x;
        let fd = (k(x + h) - k(x - h)) / (2.0 * h);
        let want = -((z - 1.0) * 0.5 * x.ln()).exp() * besselk(z - 1.0, x).unwrap();
        prop_assert!((fd - want).norm() <= 1e-6 * want.norm(), "{fd} {want}");
    }

    #[test]
    fn gamma_recurrence(re in -4.5..6.0f64, im in 0.1..40.0f64) {
        let w = c(re, im);
        let a = gamma(w + 1.0).unwrap();
        let b = w * gamma(w).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn halfline_linearity(p in 0.2..3.0f64, q in 0.2..3.0f64, a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let hl = HalfLine::default();
        let f = |x: f64| (-p * x).exp();
        let g = |x: f64| x * (-q * x).exp() / (1.0 + x);
        let rf = integrate_halfline_with(|x| Ok(c(f(x), 0.0)), &hl, 1e-12).unwrap();
        let rg = integrate_halfline_with(|x| Ok(c(g(x), 0.0)), &hl, 1e-12).unwrap();
        let rs = integrate_halfline_with(|x| Ok(c(a * f(x) + b * g(x), 0.0)), &hl, 1e-12).unwrap();
        let combined = a * rf.value + b * rg.value;
        let bound = rs.err_abs + a.abs() * rf.err_abs + b.abs() * rg.err_abs + 1e-14;
        prop_assert!((rs.value - combined).norm() <= bound, "{} vs {} bound {bound}", rs.value, combined);
    }

    #[test]
    fn symmetric_contour_fast_path(x in 0.2..5.0f64) {
        // (1/2 pi i) int Gamma(z) x^{-z} dz = e^{-x}
        let env = Envelope::new(4.0, 0.5, PI / 2.0).unwrap();
        let spec = ContourSpec::adaptive(1.0, 1e-13).unwrap();
        let lx = x.ln();
        let one = integrate_contour(|z| Ok(gamma(z)? * (-z * lx).exp()), &env, &spec, true).unwrap();
        let two = integrate_contour(|z| Ok(gamma(z)? * (-z * lx).exp()), &env, &spec, false).unwrap();
        prop_assert!((one.value - two.value).norm() <= 1e-12);
        prop_assert!((one.value.re - (-x).exp()).abs() <= 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn forward_is_linear(a in -2.0..2.0f64, b in -2.0..2.0f64, re in 0.3..2.0f64, im in -1.5..1.5f64) {
        let f = decaying(1.0);
        let g = damped_rational(1.0);
        let z = c(re, im);
        let tol = 1e-10;
        let rf = forward(&f, z, tol).unwrap();
        let rg = forward(&g, z, tol).unwrap();
        let rs = forward(&RealFunction::combine(a, &f, b, &g).unwrap(), z, tol).unwrap();
        let combined = rf.value * a + rg.value * b;
        let bound = 10.0 * (rs.err_abs + a.abs() * rf.err_abs + b.abs() * rg.err_abs) + 1e-13;
        prop_assert!((rs.value - combined).norm() <= bound, "{} vs {combined}", rs.value);
    }

    #[test]
    fn image_does_not_vanish(rate in 0.3..3.0f64) {
        let f = decaying(rate);
        let biggest = [0.0, 1.0, 3.0, 8.0]
            .iter()
            .map(|&t| forward(&f, c(0.5, t), 1e-8).unwrap().value.norm())
            .fold(0.0f64, f64::max);
        prop_assert!(biggest > 1e-8);
    }

    #[test]
    fn convolution_commutes(p in 0.5..2.0f64, q in 0.5..2.0f64, x in 0.1..5.0f64) {
        let f = decaying(p);
        let g = damped_rational(q);
        let fg = convolve(&f, &g, x, 1e-9).unwrap();
        let gf = convolve(&g, &f, x, 1e-9).unwrap();
        prop_assert!((fg.value - gf.value).norm() <= 10.0 * (fg.err_abs + gf.err_abs) + 1e-14, "{} {}", fg.value, gf.value);
        prop_assert!(fg.value.re > 1e-8);
    }

    #[test]
    fn young_inequality(p in 0.5..2.0f64, q in 0.5..2.0f64, half in proptest::bool::ANY) {
        let alpha = if half { 0.5 } else { 1.0 };
        let (lhs, rhs) = young_norms(&decaying(p), &damped_rational(q), alpha, 1e-9).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-7), "{lhs} > {rhs}");
    }
}

#[test]
fn i_kernel_at_integer_orders() {
    // I_{-n} = I_n at integer orders
    for n in 1..4 {
        let v = besseli_scaled(c(-(n as f64), 0.0), 0.7).unwrap();
        let w = besseli_scaled(c(n as f64, 0.0), 0.7).unwrap() * 0.7f64.powi(n);
        assert!((v - w).norm() < 1e-13 * w.norm(), "{n}: {v} {w}");
    }
}
