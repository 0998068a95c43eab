use crate::error::{Error, Result};

/// Monotone cubic (Fritsch-Carlson) interpolant of samples on ln x.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    x: Vec<f64>,
    u: Vec<f64>,
    f: Vec<f64>,
    d: Vec<f64>,
}

impl LogGrid {
    pub fn new(x: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if x.len() != f.len() {
            return Err(Error::InvalidInput(format!("grid has {} abscissae and {} values", x.len(), f.len())));
        }
        if x.len() < 2 {
            return Err(Error::InvalidInput("grid needs at least two points".into()));
        }
        for (i, (&xi, &fi)) in x.iter().zip(&f).enumerate() {
            if !(xi > 0.0 && xi.is_finite()) {
                return Err(Error::InvalidInput(format!("grid abscissa {xi} at row {} is not positive", i + 1)));
            }
            if !fi.is_finite() {
                return Err(Error::InvalidInput(format!("grid value at row {} is not finite", i + 1)));
            }
            if i > 0 && xi <= x[i - 1] {
                return Err(Error::InvalidInput(format!("grid abscissae not strictly increasing at row {}", i + 1)));
            }
        }
        let u: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let n = u.len();
        let h: Vec<f64> = (0..n - 1).map(|i| u[i + 1] - u[i]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (f[i + 1] - f[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] <= 0.0 {
                    d[i] = 0.0;
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(LogGrid { x, u, f, d })
    }

    pub fn xs(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.f
    }

    pub fn first(&self) -> (f64, f64) {
        (self.x[0], self.f[0])
    }

    pub fn last(&self) -> (f64, f64) {
        let n = self.x.len();
        (self.x[n - 1], self.f[n - 1])
    }

    /// Interpolated value for x inside the grid range; None outside.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let n = self.x.len();
        if !(x >= self.x[0] && x <= self.x[n - 1]) {
            return None;
        }
        let u = x.ln();
        let i = match self.u.binary_search_by(|p| p.partial_cmp(&u).unwrap()) {
            Ok(i) => return Some(self.f[i]),
            Err(i) => (i.max(1) - 1).min(n - 2),
        };
        let h = self.u[i + 1] - self.u[i];
        let t = (u - self.u[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Some(h00 * self.f[i] + h10 * h * self.d[i] + h01 * self.f[i + 1] + h11 * h * self.d[i + 1])
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

/// Log-spaced abscissae from `lo` to `hi` with `per_decade` points per decade.
pub fn log_spaced(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    (0..=n).map(|i| lo * 10f64.powf(decades * i as f64 / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_smooth_data() {
        let xs = log_spaced(1e-3, 1e2, 64);
        let fs: Vec<f64> = xs.iter().map(|x| (-x).exp()).collect();
        let g = LogGrid::new(xs.clone(), fs).unwrap();
        for &x in &xs {
            assert_eq!(g.interpolate(x).unwrap(), (-x).exp());
        }
        for &x in &[2e-3, 0.37, 1.5, 7.7] {
            let v = g.interpolate(x).unwrap();
            assert!((v - (-x).exp()).abs() < 1e-6, "{x}");
        }
        assert!(g.interpolate(1e3).is_none());
    }

    #[test]
    fn monotone_data_stays_monotone() {
        let xs = vec![0.1, 0.2, 0.5, 1.0, 3.0];
        let fs = vec![0.0, 0.0, 1.0, 1.0, 5.0];
        let g = LogGrid::new(xs, fs).unwrap();
        let mut prev = -1.0;
        let mut x = 0.1;
        while x < 3.0 {
            let v = g.interpolate(x).unwrap();
            assert!(v >= prev - 1e-15);
            prev = v;
            x *= 1.01;
        }
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(LogGrid::new(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(LogGrid::new(vec![-1.0, 1.0], vec![0.0, 0.0]).is_err());
        assert!(LogGrid::new(vec![1.0, 2.0], vec![0.0, f64::NAN]).is_err());
    }
}
