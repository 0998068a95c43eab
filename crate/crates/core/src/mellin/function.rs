use num_complex::Complex64;
use std::fmt;
use std::io::Read;
use std::sync::Arc;

use super::grid::LogGrid;
use crate::error::{Error, Result};
use crate::quad::Envelope;

type RealEval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexEval = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// Behaviour of f(x) as x -> infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// |f(x)| = O(e^{-rate x}), rate > 0.
    Exponential { rate: f64 },
    /// |f(x)| = O(x^{-exponent}).
    Power { exponent: f64 },
}

impl Decay {
    fn validate(&self) -> Result<()> {
        match *self {
            Decay::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                Err(Error::InvalidInput(format!("exponential decay rate must be positive, got {rate}")))
            }
            Decay::Power { exponent } if !exponent.is_finite() => {
                Err(Error::InvalidInput(format!("power decay exponent must be finite, got {exponent}")))
            }
            _ => Ok(()),
        }
    }

    /// Upper end of the Mellin strip.
    pub fn strip_end(&self) -> f64 {
        match *self {
            Decay::Exponential { .. } => f64::INFINITY,
            Decay::Power { exponent } => exponent,
        }
    }

    /// The weaker of two descriptors.
    pub fn weaker(self, other: Decay) -> Decay {
        match (self, other) {
            (Decay::Exponential { rate: a }, Decay::Exponential { rate: b }) => Decay::Exponential { rate: a.min(b) },
            (Decay::Power { exponent: a }, Decay::Power { exponent: b }) => Decay::Power { exponent: a.min(b) },
            (p @ Decay::Power { .. }, _) | (_, p @ Decay::Power { .. }) => p,
        }
    }

    fn shape(&self, x: f64) -> f64 {
        match *self {
            Decay::Exponential { rate } => (-rate * (x - 1.0)).exp(),
            Decay::Power { exponent } => x.powf(-exponent),
        }
    }
}

/// Analytic continuation of a real function into the sector |arg x| < half_angle.
#[derive(Clone)]
pub struct Sector {
    pub half_angle: f64,
    eval: ComplexEval,
}

impl Sector {
    pub fn eval(&self, x: Complex64) -> Result<Complex64> {
        (self.eval)(x)
    }
}

/// A real function on (0, inf) with mandatory growth metadata.
#[derive(Clone)]
pub struct RealFunction {
    label: String,
    eval: RealEval,
    pub origin_exponent: f64,
    pub decay: Decay,
    continuation: Option<Sector>,
    derivatives: Vec<RealFunction>,
    grid: Option<Arc<LogGrid>>,
    sample_err: f64,
    zero: bool,
}

impl fmt::Debug for RealFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFunction")
            .field("label", &self.label)
            .field("origin_exponent", &self.origin_exponent)
            .field("decay", &self.decay)
            .field("continuation", &self.continuation.as_ref().map(|s| s.half_angle))
            .field("derivatives", &self.derivatives.len())
            .field("grid_points", &self.grid.as_ref().map(|g| g.xs().len()))
            .finish()
    }
}

impl RealFunction {
    /// Analytic function with f(x) = O(x^origin_exponent) at 0 and the given decay.
    pub fn new<F>(label: &str, f: F, origin_exponent: f64, decay: Decay) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !origin_exponent.is_finite() {
            return Err(Error::InvalidInput(format!("origin exponent must be finite, got {origin_exponent}")));
        }
        decay.validate()?;
        Ok(RealFunction {
            label: label.to_string(),
            eval: Arc::new(f),
            origin_exponent,
            decay,
            continuation: None,
            derivatives: Vec::new(),
            grid: None,
            sample_err: 0.0,
            zero: false,
        })
    }

    /// The zero function.
    pub fn zero() -> Self {
        RealFunction {
            label: "zero".into(),
            eval: Arc::new(|_| 0.0),
            origin_exponent: 0.0,
            decay: Decay::Exponential { rate: 1.0 },
            continuation: Some(Sector { half_angle: std::f64::consts::PI, eval: Arc::new(|_| Ok(Complex64::new(0.0, 0.0))) }),
            derivatives: Vec::new(),
            grid: None,
            sample_err: 0.0,
            zero: true,
        }
    }

    /// Samples on a log grid, interpolated monotonically in ln x and
    /// extrapolated by the declared metadata outside the grid.
    pub fn from_grid(xs: Vec<f64>, fs: Vec<f64>, origin_exponent: f64, decay: Decay) -> Result<Self> {
        let zero = fs.iter().all(|&v| v == 0.0);
        let grid = Arc::new(LogGrid::new(xs, fs)?);
        let g = grid.clone();
        let mut r = RealFunction::new("grid", move |x| grid_eval(&g, x, origin_exponent, decay), origin_exponent, decay)?;
        r.grid = Some(grid);
        r.zero = zero;
        Ok(r)
    }

    /// Grid from CSV text with header `x,f`.
    pub fn from_csv<R: Read>(reader: R, origin_exponent: f64, decay: Decay) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::InvalidInput(format!("grid csv: {e}")))?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "f" {
            return Err(Error::InvalidInput(format!("grid csv header must be `x,f`, got `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut xs = Vec::new();
        let mut fs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::InvalidInput(format!("grid csv row {}: {e}", i + 1)))?;
            let num = |k: usize| -> Result<f64> {
                rec.get(k)
                    .ok_or_else(|| Error::InvalidInput(format!("grid csv row {}: missing column", i + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("grid csv row {}: {e}", i + 1)))
            };
            xs.push(num(0)?);
            fs.push(num(1)?);
        }
        RealFunction::from_grid(xs, fs, origin_exponent, decay)
    }

    /// Attach an analytic continuation into |arg x| < half_angle.
    pub fn with_continuation<F>(mut self, half_angle: f64, f: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        if !(half_angle > 0.0 && half_angle <= std::f64::consts::PI) {
            return Err(Error::InvalidInput(format!("sector half-angle must lie in (0, pi], got {half_angle}")));
        }
        self.continuation = Some(Sector { half_angle, eval: Arc::new(f) });
        Ok(self)
    }

    /// Attach f', f'', ... in order.
    pub fn with_derivatives(mut self, ds: Vec<RealFunction>) -> Self {
        self.derivatives = ds;
        self
    }

    /// Declared relative accuracy of the samples.
    pub fn with_sample_error(mut self, rel: f64) -> Self {
        self.sample_err = rel.max(0.0);
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn continuation(&self) -> Option<&Sector> {
        self.continuation.as_ref()
    }

    pub fn grid(&self) -> Option<&LogGrid> {
        self.grid.as_deref()
    }

    pub fn sample_error(&self) -> f64 {
        self.sample_err
    }

    /// The m-th derivative; m = 0 is the function itself.
    pub fn derivative(&self, m: usize) -> Option<&RealFunction> {
        if m == 0 {
            Some(self)
        } else if self.zero {
            Some(self)
        } else {
            self.derivatives.get(m - 1)
        }
    }

    /// Number of attached derivatives.
    pub fn derivative_count(&self) -> usize {
        if self.zero {
            usize::MAX
        } else {
            self.derivatives.len()
        }
    }

    /// Mellin strip (lo, hi) implied by the metadata.
    pub fn strip(&self) -> (f64, f64) {
        (-self.origin_exponent, self.decay.strip_end())
    }

    /// a f + b g; grids are combined pointwise through their evaluators.
    pub fn combine(a: f64, f: &RealFunction, b: f64, g: &RealFunction) -> Result<Self> {
        let (ff, gg) = (f.eval.clone(), g.eval.clone());
        let mut r = RealFunction::new(
            &format!("{a}*{} + {b}*{}", f.label, g.label),
            move |x| a * ff(x) + b * gg(x),
            f.origin_exponent.min(g.origin_exponent),
            f.decay.weaker(g.decay),
        )?;
        if let (Some(cf), Some(cg)) = (&f.continuation, &g.continuation) {
            let (ef, eg) = (cf.eval.clone(), cg.eval.clone());
            r = r.with_continuation(cf.half_angle.min(cg.half_angle), move |z| Ok(ef(z)? * a + eg(z)? * b))?;
        }
        r.sample_err = f.sample_err.max(g.sample_err);
        r.zero = (a == 0.0 || f.zero) && (b == 0.0 || g.zero);
        Ok(r)
    }

    /// Checks |f| at 10 log-spaced probes in [1e-3, 30] against
    /// C x^origin_exponent (x <= 1) and C decay(x) (x > 1) within a factor 10,
    /// with C taken as the largest envelope ratio over probes in [0.5, 2].
    pub fn check_metadata(&self) -> Result<()> {
        if self.zero {
            return Ok(());
        }
        let probes: Vec<f64> = (0..10).map(|i| 1e-3 * 30_000f64.powf(i as f64 / 9.0)).collect();
        let shape = |x: f64| if x <= 1.0 { x.powf(self.origin_exponent) } else { self.decay.shape(x) };
        let mut c: f64 = 0.0;
        for i in 0..5 {
            let x = 0.5 * 4f64.powf(i as f64 / 4.0);
            c = c.max(self.eval(x).abs() / shape(x));
        }
        if c == 0.0 {
            c = f64::MIN_POSITIVE;
        }
        for &x in &probes {
            let v = self.eval(x).abs();
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("{}: non-finite value at x = {x}", self.label)));
            }
            if v > 10.0 * c * shape(x) {
                return Err(Error::InvalidInput(format!(
                    "{}: |f({x:e})| = {v:e} exceeds 10x the declared envelope {:e}",
                    self.label,
                    c * shape(x)
                )));
            }
        }
        Ok(())
    }
}

fn grid_eval(g: &LogGrid, x: f64, origin_exponent: f64, decay: Decay) -> f64 {
    if let Some(v) = g.interpolate(x) {
        return v;
    }
    let (x0, f0) = g.first();
    if x < x0 {
        return if x > 0.0 { f0 * (x / x0).powf(origin_exponent) } else { 0.0 };
    }
    let (x1, f1) = g.last();
    match decay {
        Decay::Exponential { rate } => f1 * (-rate * (x - x1)).exp(),
        Decay::Power { exponent } => f1 * (x / x1).powf(-exponent),
    }
}

/// A function given by its Mellin symbol f*(s) on the line Re s = c0.
#[derive(Clone)]
pub struct LineFunction {
    pub c0: f64,
    eval: ComplexEval,
    pub envelope: Envelope,
    /// f*(conj s) = conj f*(s), i.e. the represented function is real.
    pub real_data: bool,
    /// Only conditionally integrable along the line.
    pub improper: bool,
    label: String,
}

impl fmt::Debug for LineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LineFunction")
            .field("label", &self.label)
            .field("c0", &self.c0)
            .field("envelope", &self.envelope)
            .field("real_data", &self.real_data)
            .finish()
    }
}

impl LineFunction {
    /// Symbol on Re s = c0 with a declared envelope; the envelope must be
    /// integrable along the line.
    pub fn new<F>(label: &str, c0: f64, f: F, envelope: Envelope, real_data: bool) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        if !c0.is_finite() {
            return Err(Error::InvalidInput(format!("line abscissa must be finite, got {c0}")));
        }
        if !envelope.integrable() {
            return Err(Error::InvalidInput(format!(
                "{label}: envelope |t|^{} e^(-{}|t|) is not integrable on the line",
                envelope.p, envelope.a
            )));
        }
        Ok(LineFunction { c0, eval: Arc::new(f), envelope, real_data, improper: false, label: label.to_string() })
    }

    /// Symbol whose envelope only vanishes along the line (a = 0, p < 0);
    /// line integrals against it are taken in the improper Riemann sense.
    pub fn improper<F>(label: &str, c0: f64, f: F, envelope: Envelope, real_data: bool) -> Result<Self>
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        if !c0.is_finite() {
            return Err(Error::InvalidInput(format!("line abscissa must be finite, got {c0}")));
        }
        if !envelope.vanishing() {
            return Err(Error::InvalidInput(format!("{label}: envelope |t|^{} e^(-{}|t|) does not vanish on the line", envelope.p, envelope.a)));
        }
        Ok(LineFunction { c0, eval: Arc::new(f), envelope, real_data, improper: true, label: label.to_string() })
    }

    /// Gamma(s) on Re s = c0. For c0 > 0 this is the symbol of e^{-x}; for
    /// -k-1 < c0 < -k it is the symbol of e^{-x} minus its Taylor polynomial
    /// of degree k.
    pub fn gamma(c0: f64) -> Result<Self> {
        if c0 <= 0.0 && (c0 - c0.round()).abs() < 1e-6 {
            return Err(Error::PoleOnContour(format!("Gamma symbol has a pole on Re s = {c0}")));
        }
        let env = gamma_line_envelope(c0, 0.0, 1.0)?;
        LineFunction::new("gamma", c0, crate::specfun::gamma, env, true)
    }

    /// The zero symbol.
    pub fn zero(c0: f64) -> Self {
        LineFunction { c0, eval: Arc::new(|_| Ok(Complex64::new(0.0, 0.0))), envelope: Envelope::zero(), real_data: true, improper: false, label: "zero".into() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_zero(&self) -> bool {
        self.envelope.c == 0.0
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        (self.eval)(s)
    }

    /// f*(c0 + i t).
    pub fn at(&self, t: f64) -> Result<Complex64> {
        self.eval(Complex64::new(self.c0, t))
    }

    pub(crate) fn evaluator(&self) -> ComplexEval {
        self.eval.clone()
    }

    /// Samples |f*| at the given heights (|t| >= 1) against 10x the envelope.
    pub fn check_envelope(&self, heights: &[f64]) -> Result<()> {
        for &t in heights {
            if t.abs() < 1.0 {
                continue;
            }
            let v = self.at(t)?.norm();
            let b = self.envelope.bound(t);
            if v > 10.0 * b {
                return Err(Error::EnvelopeViolation { t, value: v, bound: b });
            }
        }
        Ok(())
    }
}

/// Envelope of |Gamma(c + shift + it)| t^{dp} on |t| >= 1 times `scale`:
/// the exponent and rate come from Stirling, the constant is the supremum
/// of the ratio over sampled heights with 10% headroom.
pub(crate) fn gamma_line_envelope(c: f64, shift: f64, scale: f64) -> Result<Envelope> {
    let w = c + shift;
    let p = w - 0.5;
    let a = std::f64::consts::FRAC_PI_2;
    let mut sup: f64 = (2.0 * std::f64::consts::PI).sqrt();
    let mut t = 1.0;
    while t <= 200.0 {
        let g = crate::specfun::gamma(Complex64::new(w, t))?.norm();
        sup = sup.max(g / (t.powf(p) * (-a * t).exp()));
        t *= 1.05;
    }
    Envelope::new(1.1 * sup * scale, p, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_fn() -> RealFunction {
        RealFunction::new("exp", |x| (-x).exp(), 0.0, Decay::Exponential { rate: 1.0 }).unwrap()
    }

    #[test]
    fn metadata_check_accepts_honest_and_rejects_wrong() {
        exp_fn().check_metadata().unwrap();
        let lying = RealFunction::new("lying", |x| x.powf(-0.9), 0.0, Decay::Exponential { rate: 1.0 }).unwrap();
        assert!(lying.check_metadata().is_err());
        let mono = RealFunction::new("mono", |x| x.powf(-0.25), -0.25, Decay::Power { exponent: 0.25 }).unwrap();
        mono.check_metadata().unwrap();
    }

    #[test]
    fn grid_extrapolates_by_metadata() {
        let xs = super::super::grid::log_spaced(1e-2, 10.0, 64);
        let fs: Vec<f64> = xs.iter().map(|x| (-x).exp()).collect();
        let f = RealFunction::from_grid(xs, fs, 0.0, Decay::Exponential { rate: 1.0 }).unwrap();
        assert!((f.eval(12.0) - (-12f64).exp()).abs() < 1e-12);
        assert!((f.eval(1e-4) - (-1e-2f64).exp()).abs() < 1e-15);
        assert!((f.eval(0.5) - (-0.5f64).exp()).abs() < 1e-5);
    }

    #[test]
    fn csv_parsing() {
        let text = "x,f\n0.1,1.0\n0.2,0.5\n0.4,0.25\n";
        let f = RealFunction::from_csv(text.as_bytes(), 0.0, Decay::Power { exponent: 1.0 }).unwrap();
        assert_eq!(f.eval(0.2), 0.5);
        assert!(RealFunction::from_csv("a,b\n1,2\n".as_bytes(), 0.0, Decay::Power { exponent: 1.0 }).is_err());
        assert!(RealFunction::from_csv("x,f\n0.2,1\n0.1,2\n".as_bytes(), 0.0, Decay::Power { exponent: 1.0 }).is_err());
        assert!(RealFunction::from_csv("x,f\n0.1,1\n0.2,zz\n".as_bytes(), 0.0, Decay::Power { exponent: 1.0 }).is_err());
    }

    #[test]
    fn gamma_line_respects_envelope() {
        let f = LineFunction::gamma(0.5).unwrap();
        let hs: Vec<f64> = (0..60).map(|k| 1.0 + 3.0 * k as f64).collect();
        f.check_envelope(&hs).unwrap();
        assert!(LineFunction::new("bad", 0.5, |_| Ok(Complex64::new(1.0, 0.0)), Envelope::new(1.0, 0.0, 0.0).unwrap(), true).is_err());
    }

    #[test]
    fn combination_is_pointwise() {
        let f = exp_fn();
        let g = RealFunction::new("exp2", |x| (-2.0 * x).exp(), 0.0, Decay::Exponential { rate: 2.0 }).unwrap();
        let h = RealFunction::combine(2.0, &f, -3.0, &g).unwrap();
        assert!((h.eval(0.7) - (2.0 * (-0.7f64).exp() - 3.0 * (-1.4f64).exp())).abs() < 1e-15);
        assert_eq!(h.decay, Decay::Exponential { rate: 1.0 });
    }
}
