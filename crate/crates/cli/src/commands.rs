use klt::convolution::{convolve, kernel_kh};
use klt::mellin::{log_spaced, Decay, RealFunction};
use klt::quad::{ContourPolicy, ContourSpec, QuadResult};
use klt::registry;
use klt::solver::{solve, synthesize_rhs, SolveConfig};
use klt::specfun::besselk_eval;
use klt::transform::{default_gamma, forward, forward_laplace_route, forward_mellin_route, invert, invert_expansion, ImageDecay, TransformImage};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::fs::File;

use crate::args::{Command, Common, ForwardRoute, Input, InvertRoute};
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::verify;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("--tol must lie in (0, 1), got {tol}")))
    }
}

fn check_positive(name: &str, xs: &[f64]) -> Result<(), CliError> {
    match xs.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
        Some(x) => Err(invalid(format!("--{name} values must be positive and finite, got {x}"))),
        None => Ok(()),
    }
}

/// `exp:<rate>` or `power:<q>`.
pub fn parse_decay(s: &str) -> Result<Decay, CliError> {
    let (kind, v) = s.split_once(':').ok_or_else(|| invalid(format!("decay must be exp:<rate> or power:<q>, got `{s}`")))?;
    let v: f64 = v.trim().parse().map_err(|_| invalid(format!("bad decay parameter in `{s}`")))?;
    match kind.trim() {
        "exp" => Ok(Decay::Exponential { rate: v }),
        "power" => Ok(Decay::Power { exponent: v }),
        _ => Err(invalid(format!("decay must be exp:<rate> or power:<q>, got `{s}`"))),
    }
}

fn load_grid(path: &std::path::Path, origin_exponent: f64, decay: &str) -> Result<RealFunction, CliError> {
    let decay = parse_decay(decay)?;
    let file = File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(RealFunction::from_csv(file, origin_exponent, decay)?.with_label(&path.display().to_string()))
}

/// The function named by --f or read from --grid, with its display name.
fn load_input(input: &Input) -> Result<(RealFunction, String), CliError> {
    match (&input.f, &input.grid) {
        (Some(name), None) => {
            if input.origin_exponent.is_some() {
                return Err(invalid("--origin-exponent applies to --grid input only"));
            }
            Ok((registry::function(name)?, name.clone()))
        }
        (None, Some(path)) => Ok((load_grid(path, input.origin_exponent.unwrap_or(0.0), &input.decay)?, path.display().to_string())),
        _ => Err(invalid("exactly one of --f and --grid is required")),
    }
}

fn complex_cells(z: Complex64) -> Vec<Cell> {
    vec![Cell::Num(z.re), Cell::Num(z.im)]
}

/// Runs one job and returns its table with the output options.
pub fn run(command: &Command) -> Result<(Table, Common), CliError> {
    match command {
        Command::EvalK(a) => {
            check_tol(a.common.tol)?;
            check_positive("x", &a.x)?;
            let mut t = Table::new("eval-k", &["z_re", "z_im", "x"], a.common.tol);
            for &z in &a.z {
                for &x in &a.x {
                    let k = besselk_eval(z, x)?;
                    let mut cells = complex_cells(z);
                    cells.push(Cell::Num(x));
                    t.push_parts(cells, k.value, k.rel_err * k.value.norm(), 1, true);
                }
            }
            Ok((t, a.common.clone()))
        }
        Command::Forward(a) => {
            check_tol(a.common.tol)?;
            let (f, name) = load_input(&a.input)?;
            let symbol = match a.route {
                ForwardRoute::Mellin => Some(registry::mellin_symbol(&name, a.c0)?),
                _ => None,
            };
            let mut t = Table::new("forward", &["z_re", "z_im"], a.common.tol);
            t.meta("function", json!(name));
            t.meta("route", json!(format!("{:?}", a.route).to_lowercase()));
            for &z in &a.z {
                let r = match a.route {
                    ForwardRoute::Direct => forward(&f, z, a.common.tol)?,
                    ForwardRoute::Mellin => forward_mellin_route(symbol.as_ref().expect("built above"), z, a.common.tol)?,
                    ForwardRoute::Laplace => forward_laplace_route(&f, z, a.alpha, a.common.tol)?,
                };
                t.push(complex_cells(z), &r);
            }
            Ok((t, a.common.clone()))
        }
        Command::Invert(a) => {
            check_tol(a.common.tol)?;
            check_positive("t", &a.t)?;
            let (f, name) = load_input(&a.input)?;
            let image = TransformImage::from_real_function(&f, ImageDecay::smooth(), a.common.tol)?;
            let gamma = match (a.gamma, a.route) {
                (Some(g), _) => g,
                (None, InvertRoute::Standard) => default_gamma(&image),
                (None, InvertRoute::Expansion) => {
                    let c0 = image.lower + 1.0;
                    let eps = a.eps.unwrap_or(c0 - 0.5);
                    0.5 * ((c0 - 1.0) + (eps - 1.0) / 2.0)
                }
            };
            let policy = match a.step {
                Some(h) => ContourPolicy::FixedStep { h, tol: a.common.tol },
                None => ContourPolicy::Adaptive { tol: a.common.tol },
            };
            let mut spec = ContourSpec::new(gamma, a.truncation, policy)?;
            if a.improper {
                spec = spec.improper();
            }
            let mut t = Table::new("invert", &["t"], a.common.tol);
            t.meta("function", json!(name));
            t.meta("gamma", json!(gamma));
            t.meta("route", json!(format!("{:?}", a.route).to_lowercase()));
            t.meta(
                "contour",
                json!({
                    "policy": if a.step.is_some() { "fixed-step" } else { "adaptive" },
                    "step": a.step,
                    "truncation": a.truncation,
                    "improper": a.improper,
                }),
            );
            for &ti in &a.t {
                let r = match a.route {
                    InvertRoute::Standard => invert(&image, ti, &spec)?,
                    InvertRoute::Expansion => invert_expansion(&image, ti, &spec, a.eps)?,
                };
                t.push(vec![Cell::Num(ti)], &r);
            }
            Ok((t, a.common.clone()))
        }
        Command::Convolve(a) => {
            check_tol(a.common.tol)?;
            check_positive("x", &a.x)?;
            let f = registry::function(&a.f)?;
            let g = registry::function(&a.g)?;
            let mut t = Table::new("convolve", &["x"], a.common.tol);
            t.meta("f", json!(a.f));
            t.meta("g", json!(a.g));
            for &x in &a.x {
                t.push(vec![Cell::Num(x)], &convolve(&f, &g, x, a.common.tol)?);
            }
            Ok((t, a.common.clone()))
        }
        Command::Kernel(a) => {
            check_tol(a.common.tol)?;
            let k = registry::kernel(&a.h)?;
            if a.z.is_empty() {
                if a.x.is_empty() {
                    return Err(invalid("kernel needs --x and --y, or --z"));
                }
                check_positive("x", &a.x)?;
                check_positive("y", &a.y)?;
                let mut t = Table::new("kernel", &["x", "y"], a.common.tol);
                t.meta("h", json!(a.h));
                for &x in &a.x {
                    for &y in &a.y {
                        t.push(vec![Cell::Num(x), Cell::Num(y)], &kernel_kh(&k, x, y, a.common.tol)?);
                    }
                }
                Ok((t, a.common.clone()))
            } else {
                let mut t = Table::new("kernel-image", &["z_re", "z_im"], a.common.tol);
                t.meta("h", json!(a.h));
                for &z in &a.z {
                    let closed = k.fh(z, a.common.tol)?;
                    let quad = forward(&k.h, z, a.common.tol)?;
                    let err = (closed - quad.value).norm().max(quad.err_abs);
                    t.push(complex_cells(z), &QuadResult { value: closed, err_abs: err, evals: quad.evals, converged: quad.converged });
                }
                Ok((t, a.common.clone()))
            }
        }
        Command::Solve(a) => {
            check_tol(a.common.tol)?;
            check_positive("t", &a.t)?;
            let k = registry::kernel(&a.kernel)?;
            let mut cfg = SolveConfig::new(k.clone(), a.alpha, a.gamma)?.with_tol(a.common.tol)?.with_zero_guard(a.zero_guard)?;
            if a.improper {
                cfg = cfg.improper();
            }
            let (g, source) = match (&a.f, &a.grid) {
                (Some(name), None) => {
                    if a.synth_points < 2 {
                        return Err(invalid("--synth-points must be at least 2"));
                    }
                    let f = registry::function(name)?;
                    (synthesize_rhs(&f, &k, &log_spaced(0.05, 20.0, a.synth_points), a.common.tol)?, format!("synthesized from {name}"))
                }
                (None, Some(path)) => (load_grid(path, a.origin_exponent, &a.decay)?, path.display().to_string()),
                _ => return Err(invalid("exactly one of --f and --grid is required")),
            };
            let s = solve(&g, &cfg, &a.t)?;
            let mut t = Table::new("solve", &["t"], a.common.tol);
            t.meta("kernel", json!(a.kernel));
            t.meta("rhs", json!(source));
            t.meta("alpha", json!(a.alpha));
            t.meta("gamma", json!(a.gamma));
            t.meta("zero_guard", json!(a.zero_guard));
            t.meta("contour", json!({ "policy": "adaptive", "improper": a.improper }));
            for (ti, r) in s.t.iter().zip(&s.values) {
                t.push(vec![Cell::Num(*ti)], r);
            }
            Ok((t, a.common.clone()))
        }
        Command::Verify(a) => {
            check_tol(a.common.tol)?;
            let mut t = verify::run(&a.suite, a.common.tol)?;
            t.meta("suite", Value::from(a.suite.clone()));
            Ok((t, a.common.clone()))
        }
    }
}
