//! Named test functions and kernels, so that jobs run without input files.

use crate::convolution::KernelSpec;
use crate::error::{Error, Result};
use crate::mellin::{Decay, LineFunction, RealFunction};

/// Names accepted by [`function`].
pub const FUNCTION_NAMES: &[&str] = &["exp", "exp_rational", "monomial:<p>", "bump", "zero"];

/// Names accepted by [`kernel`].
pub const KERNEL_NAMES: &[&str] = &["half_inverse_sqrt", "power:<beta>"];

fn exp_decay() -> Decay {
    Decay::Exponential { rate: 1.0 }
}

/// e^{-x} with its first two derivatives.
pub fn exp() -> RealFunction {
    let d = |label: &str, sign: f64| RealFunction::new(label, move |x| sign * (-x).exp(), 0.0, exp_decay()).expect("valid metadata");
    d("exp", 1.0).with_derivatives(vec![d("-exp", -1.0), d("exp", 1.0)])
}

/// e^{-x}/(1+x) with its first two derivatives.
pub fn exp_rational() -> RealFunction {
    let mk = |label: &str, f: fn(f64) -> f64| RealFunction::new(label, f, 0.0, exp_decay()).expect("valid metadata");
    mk("exp_rational", |x| (-x).exp() / (1.0 + x)).with_derivatives(vec![
        mk("exp_rational'", |x| -(-x).exp() * (2.0 + x) / (1.0 + x).powi(2)),
        mk("exp_rational''", |x| (-x).exp() * (x * x + 4.0 * x + 5.0) / (1.0 + x).powi(3)),
    ])
}

/// x^p with its first two derivatives. It grows or decays like x^p at both ends.
pub fn monomial(p: f64) -> Result<RealFunction> {
    if !p.is_finite() {
        return Err(Error::InvalidInput(format!("monomial exponent must be finite, got {p}")));
    }
    let label = format!("x^{p}");
    let f = RealFunction::new(&label, move |x| x.powf(p), p, Decay::Power { exponent: -p })?;
    let d1 = RealFunction::new(&format!("{p} x^{}", p - 1.0), move |x| p * x.powf(p - 1.0), p - 1.0, Decay::Power { exponent: 1.0 - p })?;
    let d2 = RealFunction::new(
        &format!("{} x^{}", p * (p - 1.0), p - 2.0),
        move |x| p * (p - 1.0) * x.powf(p - 2.0),
        p - 2.0,
        Decay::Power { exponent: 2.0 - p },
    )?;
    Ok(f.with_derivatives(vec![d1, d2]))
}

/// exp(1 - 1/(1 - (x-1)^2)) on (0, 2), zero elsewhere.
pub fn bump() -> RealFunction {
    RealFunction::new(
        "bump",
        |x| {
            let u = x - 1.0;
            if u.abs() < 1.0 {
                (1.0 - 1.0 / (1.0 - u * u)).exp()
            } else {
                0.0
            }
        },
        0.0,
        exp_decay(),
    )
    .expect("valid metadata")
}

/// Look up a named function: `exp`, `exp_rational`, `monomial:<p>`, `bump`, `zero`.
pub fn function(name: &str) -> Result<RealFunction> {
    let name = name.trim();
    if let Some(p) = name.strip_prefix("monomial:") {
        let p: f64 = p.trim().parse().map_err(|_| Error::InvalidInput(format!("bad monomial exponent `{p}`")))?;
        return monomial(p);
    }
    match name {
        "exp" => Ok(exp()),
        "exp_rational" => Ok(exp_rational()),
        "bump" => Ok(bump()),
        "zero" => Ok(RealFunction::zero()),
        _ => Err(Error::InvalidInput(format!("unknown function `{name}`; known: {}", FUNCTION_NAMES.join(", ")))),
    }
}

/// Mellin symbol of a named function on Re s = c0, where one is known.
pub fn mellin_symbol(name: &str, c0: f64) -> Result<LineFunction> {
    match name.trim() {
        "exp" => LineFunction::gamma(c0),
        "zero" => Ok(LineFunction::zero(c0)),
        other => Err(Error::InvalidInput(format!("no Mellin symbol registered for `{other}`"))),
    }
}

/// Look up a kernel: `half_inverse_sqrt` or `power:<beta>`.
pub fn kernel(name: &str) -> Result<KernelSpec> {
    let name = name.trim();
    if let Some(b) = name.strip_prefix("power:") {
        let beta: f64 = b.trim().parse().map_err(|_| Error::InvalidInput(format!("bad power exponent `{b}`")))?;
        return KernelSpec::power(beta);
    }
    match name {
        "half_inverse_sqrt" => KernelSpec::half_inverse_sqrt(),
        _ => Err(Error::InvalidInput(format!("unknown kernel `{name}`; known: {}", KERNEL_NAMES.join(", ")))),
    }
}
