//! Identity suites run from the registry, no input files needed.

use klt::convolution::{factorization, kernel_kh, kernel_product, parseval, young_norms, KernelSpec};
use klt::mellin::{log_spaced, LineFunction};
use klt::quad::{integrate_halfline_with, ContourSpec, HalfLine, QuadResult};
use klt::registry;
use klt::solver::{solve, synthesize_rhs, SolveConfig};
use klt::specfun::{bessel_k0, besselk_eval, gamma};
use klt::transform::{
    derivative_shift_check, forward, forward_laplace_route, forward_mellin_route, forward_tail, index_integral_bessel,
    index_integral_exp, invert, invert_expansion, ImageDecay, TransformImage,
};
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::CliError;
use crate::output::{Cell, Table};

pub const SUITES: &[&str] = &[
    "index-integrals",
    "closed-forms",
    "mellin-identity",
    "routes",
    "operational",
    "kernel-product",
    "inversion",
    "factorization",
    "young",
    "parseval",
    "solver",
];

struct Check {
    case: String,
    result: QuadResult,
    residual: f64,
    limit: f64,
}

impl Check {
    fn new(case: impl Into<String>, result: QuadResult, residual: f64, limit: f64) -> Self {
        Check { case: case.into(), result, residual, limit }
    }

    fn value(case: impl Into<String>, value: Complex64, residual: f64, limit: f64) -> Self {
        let result = QuadResult { value, err_abs: 0.0, evals: 1, converged: true };
        Check::new(case, result, residual, limit)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn index_integrals(tol: f64) -> klt::Result<Vec<Check>> {
    let mut out = Vec::new();
    for &x in &[0.1, 1.0, 10.0] {
        let r = index_integral_exp(x, 0.25, tol)?;
        out.push(Check::new(format!("exp(-2 sqrt x) x={x}"), r.contour, r.residual(), 1e-6));
    }
    for &x in &[0.5, 2.0] {
        let r = index_integral_bessel(x, 0.5, 0.375, tol)?;
        out.push(Check::new(format!("K_1/2 x={x}"), r.contour, r.residual(), 1e-6));
    }
    Ok(out)
}

fn closed_forms(tol: f64) -> klt::Result<Vec<Check>> {
    let mut out = Vec::new();
    for x in [0.01, 0.1, 1.0, 10.0, 25.0] {
        let k = besselk_eval(c(0.5, 0.0), x)?.value;
        let closed = (PI / (4.0 * x.sqrt())).sqrt() * (-2.0 * x.sqrt()).exp();
        out.push(Check::value(format!("K_1/2 x={x}"), k, rel(k, c(closed, 0.0)), 1e-10));
    }
    for name in ["half_inverse_sqrt", "power:1", "power:1.5"] {
        let k = registry::kernel(name)?;
        for &x in &[0.5, 2.0] {
            for &y in &[0.5, 2.0] {
                let r = kernel_kh(&k, x, y, tol)?;
                let residual = r.err_abs / r.value.norm();
                out.push(Check::new(format!("k_h {name} x={x} y={y}"), r, residual, 1e-8));
            }
        }
        let worst = k.verify(tol)?;
        out.push(Check::value(format!("Fh {name}"), c(worst, 0.0), worst, 1e-7));
    }
    Ok(out)
}

fn mellin_identity(tol: f64) -> klt::Result<Vec<Check>> {
    let mut out = Vec::new();
    for s in [0.6, 0.9] {
        let f = registry::monomial(s - 1.0)?;
        for z in [c(0.5, 0.0), c(1.0, 0.0), c(0.3, 0.7), c(1.0, 0.8)] {
            let r = forward(&f, z, tol)?;
            let want = gamma(c(s, 0.0) + z)? * gamma(c(s, 0.0))?;
            let residual = rel(r.value, want);
            out.push(Check::new(format!("s={s} z={z}"), r, residual, 1e-8));
        }
    }
    Ok(out)
}

fn routes(tol: f64) -> klt::Result<Vec<Check>> {
    let f = registry::exp();
    let symbol = LineFunction::gamma(0.5)?;
    let mut out = Vec::new();
    for z in [c(0.5, 0.0), c(1.0, 0.0), c(1.5, 0.0), c(2.0, 0.0), c(0.5, 1.0)] {
        let d = forward(&f, z, tol)?;
        let m = forward_mellin_route(&symbol, z, tol)?.value;
        let l = forward_laplace_route(&f, z, 1.0, tol)?.value;
        let residual = rel(m, d.value).max(rel(l, d.value)).max(rel(l, m));
        out.push(Check::new(format!("exp z={z}"), d, residual, 1e-7));
    }
    Ok(out)
}

fn operational(tol: f64) -> klt::Result<Vec<Check>> {
    let mut out = Vec::new();
    // Gamma on Re s = c0 in (-n-1, -n) is the symbol of e^{-x} minus its Taylor part
    for (n, c0) in [(1usize, -0.5), (2, -1.5)] {
        let r = derivative_shift_check(&LineFunction::gamma(c0)?, n, c(1.5, 0.0), tol)?;
        out.push(Check::value(format!("derivative shift n={n}"), c(r, 0.0), r, 1e-6));
    }
    for f in [registry::exp(), registry::exp_rational()] {
        for n in [1usize, 2] {
            let t = forward_tail(&f, 1.0, c(1.0, 0.0), n, tol)?;
            out.push(Check::new(format!("tail {} n={n}", f.label()), t.direct, t.residual, 1e-6));
        }
    }
    Ok(out)
}

fn kernel_products(tol: f64) -> klt::Result<Vec<Check>> {
    let mut out = Vec::new();
    for &x in &[0.5, 1.0, 2.0] {
        for &y in &[0.5, 1.0, 2.0] {
            for z in [c(0.5, 0.0), c(1.0, 0.0), c(0.25, 1.0)] {
                let k = kernel_product(x, y, z, tol)?;
                out.push(Check::new(format!("x={x} y={y} z={z}"), k.integral, k.residual, 1e-7));
            }
        }
    }
    Ok(out)
}

fn inversion(tol: f64) -> klt::Result<Vec<Check>> {
    let f = registry::exp();
    let image = TransformImage::from_real_function(&f, ImageDecay::smooth(), tol)?;
    let spec = ContourSpec::adaptive(-0.75, tol)?;
    let expansion = ContourSpec::adaptive(-0.8, tol)?;
    let mut out = Vec::new();
    for &t in &[0.1, 0.5, 1.0, 2.0, 5.0] {
        let r = invert(&image, t, &spec)?;
        let e = invert_expansion(&image, t, &expansion, None)?;
        let want = (-t).exp();
        out.push(Check::new(format!("exp t={t}"), r, (r.value.re - want).abs() / want, 1e-6));
        out.push(Check::new(format!("expansion t={t}"), e, (e.value - r.value).norm() / want, 1e-6));
    }
    Ok(out)
}

fn factorizations(tol: f64) -> klt::Result<Vec<Check>> {
    let f = registry::exp();
    let mut out = Vec::new();
    for z in [c(1.0, 0.0), c(1.5, 0.0), c(1.0, 0.5)] {
        let r = factorization(&f, &f, z, tol)?;
        out.push(Check::new(format!("exp*exp z={z}"), r.mellin_of_convolution, r.residual, 1e-6));
    }
    Ok(out)
}

fn young(tol: f64) -> klt::Result<Vec<Check>> {
    let pairs = [
        (registry::exp(), registry::exp()),
        (registry::exp(), registry::exp_rational()),
        (registry::bump(), registry::exp()),
    ];
    let mut out = Vec::new();
    for (f, g) in &pairs {
        for alpha in [0.5, 1.0] {
            let (lhs, rhs) = young_norms(f, g, alpha, tol)?;
            let excess = ((lhs - rhs) / rhs).max(0.0);
            out.push(Check::value(format!("{} * {} alpha={alpha}", f.label(), g.label()), c(lhs, 0.0), excess, 1e-8));
        }
    }
    Ok(out)
}

fn parsevals(tol: f64) -> klt::Result<Vec<Check>> {
    let k0 = integrate_halfline_with(|x| Ok(c(bessel_k0(2.0 * x.sqrt()).powi(2), 0.0)), &HalfLine::default(), tol)?;
    let k0_res = (k0.value.re - 0.25).abs();
    let f = registry::exp();
    let p = parseval(&f, &f, 0.5, tol)?;
    Ok(vec![
        Check::new("int K_0^2(2 sqrt x) dx = 1/4", k0, k0_res, 1e-8),
        Check::value("exp*exp alpha=0.5", c(p.energy, 0.0), p.residual, 1e-5),
    ])
}

fn solver(tol: f64) -> klt::Result<Vec<Check>> {
    let f = registry::exp();
    let grid = log_spaced(0.05, 20.0, 6);
    let t = [0.2, 1.0, 5.0];
    let cases: [(&str, KernelSpec, f64, f64, bool); 2] = [
        ("power:1", KernelSpec::power(1.0)?, -0.8, -0.6, false),
        ("half_inverse_sqrt", KernelSpec::half_inverse_sqrt()?, -0.4, -0.2, true),
    ];
    let mut out = Vec::new();
    for (name, k, alpha, gamma, improper) in cases {
        let g = synthesize_rhs(&f, &k, &grid, tol)?;
        let mut cfg = SolveConfig::new(k, alpha, gamma)?.with_tol(tol.max(1e-8))?;
        if improper {
            cfg = cfg.improper();
        }
        let s = solve(&g, &cfg, &t)?;
        for (ti, r) in t.iter().zip(s.values) {
            let want = (-ti).exp();
            let residual = (r.value.re - want).abs() / want;
            out.push(Check::new(format!("{name} t={ti}"), r, residual, 1e-4));
        }
    }
    Ok(out)
}

fn suite(name: &str, tol: f64) -> klt::Result<Vec<Check>> {
    match name {
        "index-integrals" => index_integrals(tol),
        "closed-forms" => closed_forms(tol),
        "mellin-identity" => mellin_identity(tol),
        "routes" => routes(tol),
        "operational" => operational(tol),
        "kernel-product" => kernel_products(tol),
        "inversion" => inversion(tol),
        "factorization" => factorizations(tol),
        "young" => young(tol),
        "parseval" => parsevals(tol),
        "solver" => solver(tol),
        _ => unreachable!("suite names are checked by run"),
    }
}

/// Rows of one suite, or of every suite for `all`. A failed check marks the
/// table so the job exits nonzero.
pub fn run(name: &str, tol: f64) -> Result<Table, CliError> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(CliError::Validation(format!("unknown suite `{name}`; known: all, {}", SUITES.join(", "))));
    };
    let mut t = Table::new("verify", &["suite", "case", "residual", "limit", "passed"], tol);
    t.set_checks();
    for n in names {
        for ch in suite(n, tol)? {
            let passed = ch.residual <= ch.limit;
            let r = ch.result;
            t.push_parts(
                vec![Cell::from(n), Cell::from(ch.case), Cell::Num(ch.residual), Cell::Num(ch.limit), Cell::Bool(passed)],
                r.value,
                r.err_abs,
                r.evals,
                r.converged,
            );
            if !passed {
                t.mark_failed();
            }
        }
    }
    Ok(t)
}
