//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol * |I|)`. Integrands with an
//! inverse-square-root endpoint go through [`integrate_sqrt_endpoint`], which
//! applies `x = b - (b - a) u^2` (or the mirror image) before integrating.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub const fn relative(rel: f64) -> Self {
        Self {
            rel,
            abs: 0.0,
            max_intervals: 4000,
        }
    }

    pub const fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::relative(1e-10)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return Err(non_finite(center, fc));
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let (xl, xr) = (center - dx, center + dx);
        let (fl, fr) = (f(xl), f(xr));
        if !fl.is_finite() {
            return Err(non_finite(xl, fl));
        }
        if !fr.is_finite() {
            return Err(non_finite(xr, fr));
        }
        kronrod += WGK[j] * (fl + fr);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (fl + fr);
        }
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

fn non_finite(x: f64, fx: f64) -> Error {
    Error::Quadrature(format!("integrand is not finite at x = {x} (value {fx})"))
}

/// Integrate `f` over `[a, b]` (a > b is allowed and flips the sign).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    if a > b {
        let r = integrate(f, b, a, tol)?;
        return Ok(Integral {
            value: -r.value,
            ..r
        });
    }

    let first = gauss_kronrod(&f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        let target = tol.abs.max(tol.rel * total.abs());
        if total_err <= target || total_err <= 50.0 * f64::EPSILON * total.abs() {
            break;
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a}, {b}] after {} panels: estimate {total}, error {total_err}",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            return Err(Error::Quadrature(format!(
                "panel [{}, {}] collapsed before reaching tolerance",
                worst.a, worst.b
            )));
        }
        let left = gauss_kronrod(&f, worst.a, mid)?;
        let right = gauss_kronrod(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // re-sum to shed the drift of the running updates
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(Integral {
        value,
        error,
        intervals: heap.len(),
    })
}

/// Which end of the interval carries the `1/sqrt` singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// Integrate `f` over `[a, b]` when `f(x) ~ |x - e|^{-1/2}` at the endpoint `e`.
///
/// With `x = e ∓ (b - a) u^2` the Jacobian `2 (b - a) u` cancels the
/// singularity and the transformed integrand is smooth on `[0, 1]`.
pub fn integrate_sqrt_endpoint<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    singular_at: Endpoint,
    tol: Tolerance,
) -> Result<Integral> {
    if !(b > a) {
        return Err(Error::Quadrature(format!(
            "endpoint substitution needs a < b, got [{a}, {b}]"
        )));
    }
    let width = b - a;
    let g = |u: f64| {
        let x = match singular_at {
            Endpoint::Upper => b - width * u * u,
            Endpoint::Lower => a + width * u * u,
        };
        f(x) * 2.0 * width * u
    };
    integrate(g, 0.0, 1.0, tol)
}
