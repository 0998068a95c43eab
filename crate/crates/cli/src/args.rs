use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "klt", version, about = "Index transform with kernel x^{z/2} K_z(2 sqrt x)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate K_z(2 sqrt x).
    EvalK(EvalK),
    /// Forward transform (Ff)(z).
    Forward(Forward),
    /// Invert the transform of f at points t.
    Invert(Invert),
    /// Convolution (f*g)(x).
    Convolve(Convolve),
    /// Kernel k_h(x, y) of a first-kind equation, or its image (Fh)(z).
    Kernel(Kernel),
    /// Solve int k_h(x, y) f(y) dy = g(x).
    Solve(Solve),
    /// Run a verification suite.
    Verify(Verify),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Relative tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output path; `-` writes to stdout.
    #[arg(long, default_value = "-")]
    pub out: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// A function given by name or as a grid file.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Registered function: exp, exp_rational, monomial:<p>, bump, zero.
    #[arg(long, conflicts_with = "grid")]
    pub f: Option<String>,
    /// CSV file with header `x,f`, strictly increasing x > 0.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Exponent a with f(x) = O(x^a) at the origin, for grid input.
    #[arg(long, allow_negative_numbers = true)]
    pub origin_exponent: Option<f64>,
    /// Decay at infinity for grid input: exp:<rate> or power:<q>.
    #[arg(long, default_value = "power:20")]
    pub decay: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForwardRoute {
    Direct,
    Mellin,
    Laplace,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvertRoute {
    Standard,
    Expansion,
}

#[derive(Args, Debug)]
pub struct EvalK {
    /// Order as `re,im` or `re`; repeat the flag for several.
    #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true, action = clap::ArgAction::Append)]
    pub z: Vec<Complex64>,
    #[arg(long, required = true, num_args = 1..)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Forward {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true, action = clap::ArgAction::Append)]
    pub z: Vec<Complex64>,
    #[arg(long, value_enum, default_value_t = ForwardRoute::Direct)]
    pub route: ForwardRoute,
    /// Weight exponent for the Laplace route.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Line Re s = c0 of the Mellin symbol for the Mellin route.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub c0: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Invert {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, required = true, num_args = 1..)]
    pub t: Vec<f64>,
    /// Contour abscissa; defaults to the middle of the admissible interval.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, value_enum, default_value_t = InvertRoute::Standard)]
    pub route: InvertRoute,
    /// Parameter eps of the expansion route.
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Accept the contour integral in the improper sense.
    #[arg(long)]
    pub improper: bool,
    /// Fixed trapezoid step along the contour instead of adaptive panels.
    #[arg(long)]
    pub step: Option<f64>,
    /// Largest contour height sampled.
    #[arg(long, default_value_t = 400.0)]
    pub truncation: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Convolve {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: String,
    #[arg(long, required = true, num_args = 1..)]
    pub x: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Kernel {
    /// half_inverse_sqrt or power:<beta>.
    #[arg(long)]
    pub h: String,
    #[arg(long, num_args = 1.., requires = "y", conflicts_with = "z")]
    pub x: Vec<f64>,
    #[arg(long, num_args = 1..)]
    pub y: Vec<f64>,
    /// Points for the image (Fh)(z) instead of the kernel.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, action = clap::ArgAction::Append)]
    pub z: Vec<Complex64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Solve {
    /// half_inverse_sqrt or power:<beta>.
    #[arg(long)]
    pub kernel: String,
    /// Right-hand side g as a CSV grid `x,f`.
    #[arg(long, conflicts_with = "f")]
    pub grid: Option<PathBuf>,
    /// Manufactured solution: g is synthesized from this registered function.
    #[arg(long)]
    pub f: Option<String>,
    /// Exponent a with g(x) = O(x^a) at the origin, for grid input.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub origin_exponent: f64,
    /// Decay of g at infinity for grid input: exp:<rate> or power:<q>.
    #[arg(long, default_value = "power:20")]
    pub decay: String,
    /// Weight exponent of the admissible class of h.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Contour abscissa in (alpha, 0).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, required = true, num_args = 1..)]
    pub t: Vec<f64>,
    /// Smallest allowed |Fh| on the contour relative to its envelope.
    #[arg(long, default_value_t = 1e-6)]
    pub zero_guard: f64,
    #[arg(long)]
    pub improper: bool,
    /// Number of log-spaced synthesis points on [0.05, 20] for --f.
    #[arg(long, default_value_t = 6)]
    pub synth_points: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Verify {
    /// Suite name, or `all`.
    #[arg(long)]
    pub suite: String,
    #[command(flatten)]
    pub common: Common,
}

/// `re,im` or `re`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number `{p}` in `{s}`: {e}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re,im`, got `{s}`")),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("non-finite complex value `{s}`"));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("1,0").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex(" -0.5 , 2 ").unwrap(), Complex64::new(-0.5, 2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("a,b").is_err());
        assert!(parse_complex("inf").is_err());
    }
}
