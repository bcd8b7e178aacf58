//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson).

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "interpolation needs equal lengths, got {} knots and {} values",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InvalidInput("interpolation needs at least two knots".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("interpolation knots must be strictly increasing".into()));
        }
        let m = x.len();
        let secants: Vec<f64> = (0..m - 1)
            .map(|k| (y[k + 1] - y[k]) / (x[k + 1] - x[k]))
            .collect();
        let mut slopes = vec![0.0; m];
        slopes[0] = secants[0];
        slopes[m - 1] = secants[m - 2];
        for k in 1..m - 1 {
            let (d0, d1) = (secants[k - 1], secants[k]);
            slopes[k] = if d0 * d1 <= 0.0 {
                0.0
            } else {
                // weighted harmonic mean keeps each cubic piece monotone
                let h0 = x[k] - x[k - 1];
                let h1 = x[k + 1] - x[k];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                (w1 + w2) / (w1 / d0 + w2 / d1)
            };
        }
        Ok(Self { x, y, slopes })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().expect("non-empty knots"))
    }

    /// Value, first and second derivative at `t`; `None` outside the knot range.
    pub fn eval(&self, t: f64) -> Option<(f64, f64, f64)> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return None;
        }
        let k = match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i - 1,
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (y0, y1) = (self.y[k], self.y[k + 1]);
        let (m0, m1) = (self.slopes[k] * h, self.slopes[k + 1] * h);

        let s2 = s * s;
        let s3 = s2 * s;
        let value = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * m1;
        let d1 = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * m0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * m1)
            / h;
        let d2 = ((12.0 * s - 6.0) * y0
            + (6.0 * s - 4.0) * m0
            + (-12.0 * s + 6.0) * y1
            + (6.0 * s - 2.0) * m1)
            / (h * h);
        Some((value, d1, d2))
    }
}
