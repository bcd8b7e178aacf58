//! The `(x, y) = (F, F')` phase plane with `F = A^{n/(n-1)}`.
//!
//! Along a profile, `F'' ≤ -(n Ric₀/(n-1)) F^{(2-n)/n}` turns into the
//! monotonicity of the Ricci mass `m = y₀² - F'² - (n² Ric₀/(n-1)) F^{2/n}`,
//! and extremal paths are its level sets. Half the volume is `∫ dx / y`
//! along such a path.

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, Tolerance};
use crate::numerics::unit_sphere_area;
use crate::warped_geometry::Profile;

/// Samples of `F(V)` and `F'(V)` on the profile's volume grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FCurve {
    pub n: usize,
    pub v: Vec<f64>,
    pub f: Vec<f64>,
    pub f_prime: Vec<f64>,
}

/// `y₀ = n ω_{n-1}^{1/(n-1)}`, the slope `F'(0)` on a smooth manifold.
pub fn smooth_start(n: usize) -> f64 {
    n as f64 * unit_sphere_area(n - 1).powf(1.0 / (n - 1) as f64)
}

/// `n² Ric₀ / (n - 1)`.
fn curvature_coefficient(n: usize, ric0: f64) -> f64 {
    let nf = n as f64;
    nf * nf * ric0 / (nf - 1.0)
}

/// Derivative of samples on a uniform grid, fourth order throughout.
///
/// `odd_ends` reflects the data as an odd function about either end (a pole
/// where the samples vanish); otherwise one-sided stencils are used there.
fn uniform_derivative(y: &[f64], h: f64, odd_ends: bool) -> Vec<f64> {
    let m = y.len();
    let at = |i: isize| -> f64 {
        if i < 0 {
            -y[(-i) as usize]
        } else if i as usize >= m {
            let j = 2 * (m - 1) - i as usize;
            -y[j]
        } else {
            y[i as usize]
        }
    };
    (0..m)
        .map(|k| {
            let i = k as isize;
            let inner = k >= 2 && k + 2 < m;
            if inner || odd_ends {
                (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h)
            } else if k < 2 {
                let s = |j: usize| y[k + j];
                if k == 0 {
                    (-25.0 * s(0) + 48.0 * s(1) - 36.0 * s(2) + 16.0 * s(3) - 3.0 * s(4)) / (12.0 * h)
                } else {
                    (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h)
                }
            } else {
                let s = |j: usize| y[m - 1 - j];
                if k == m - 1 {
                    -(-25.0 * s(0) + 48.0 * s(1) - 36.0 * s(2) + 16.0 * s(3) - 3.0 * s(4)) / (12.0 * h)
                } else {
                    -(-3.0 * s(0) - 10.0 * s(1) + 18.0 * s(2) - 6.0 * s(3) + s(4)) / (12.0 * h)
                }
            }
        })
        .collect()
}

/// Three-point derivative on an arbitrary increasing grid.
fn nonuniform_derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let m = x.len();
    (0..m)
        .map(|k| {
            let (i0, i1, i2) = if k == 0 {
                (0, 1, 2)
            } else if k == m - 1 {
                (m - 3, m - 2, m - 1)
            } else {
                (k - 1, k, k + 1)
            };
            let (x0, x1, x2) = (x[i0], x[i1], x[i2]);
            let t = x[k];
            // derivative of the Lagrange interpolant through the three points
            y[i0] * (2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2))
                + y[i1] * (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2))
                + y[i2] * (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))
        })
        .collect()
}

/// `F = A^{n/(n-1)}` with its volume derivative.
///
/// With `ρ = A^{1/(n-1)}` and `dV/dt = A`, `F' = n dρ/dt`, so profiles that
/// remember their radial grid are differenced in `t` where `ρ` is smooth up
/// to the poles. Other profiles fall back to differences in `V`.
pub fn to_f(profile: &Profile) -> Result<FCurve> {
    let n = profile.n;
    let m = profile.len();
    let last = m - 1;
    for (k, &a) in profile.a_values.iter().enumerate() {
        let pole = profile.closed && (k == 0 || k == last);
        if !(a.is_finite() && (a > 0.0 || (pole && a == 0.0))) {
            return Err(Error::Validation(format!(
                "area {a} at V = {} must be positive away from the poles",
                profile.v_grid[k]
            )));
        }
    }
    let p = 1.0 / (n - 1) as f64;
    let rho: Vec<f64> = profile.a_values.iter().map(|a| a.powf(p)).collect();
    let f: Vec<f64> = rho.iter().map(|r| r.powi(n as i32)).collect();

    let f_prime = match &profile.t_grid {
        Some(t) if t.len() == m && m >= 5 => {
            let h = (t[last] - t[0]) / last as f64;
            uniform_derivative(&rho, h, profile.closed)
                .into_iter()
                .map(|d| n as f64 * d)
                .collect()
        }
        _ => nonuniform_derivative(&profile.v_grid, &f),
    };
    Ok(FCurve {
        n,
        v: profile.v_grid.clone(),
        f,
        f_prime,
    })
}

/// Ricci mass on the profile grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    pub v_grid: Vec<f64>,
    pub m_values: Vec<f64>,
    pub f: FCurve,
    /// Least-squares slope of `F ≈ s V` over the first samples.
    pub anchor_slope: f64,
    /// The additive constant is `y0²`.
    pub y0: f64,
}

/// Samples used to fit the small-volume slope.
const ANCHOR_SAMPLES: usize = 10;
/// Allowed mismatch between the fitted slope and the differenced `F'(0)`.
const ANCHOR_TOL: f64 = 1e-2;

/// `m(V) = y₀² - F'(V)² - (n² Ric₀/(n-1)) F(V)^{2/n}`, zero at `V = 0` on smooth manifolds.
pub fn ricci_mass(profile: &Profile, ric0: f64) -> Result<MassFunction> {
    if !(ric0 > 0.0 && ric0.is_finite()) {
        return Err(Error::InvalidInput(format!("Ric0 must be positive, got {ric0}")));
    }
    if !profile.closed {
        return Err(Error::InvalidInput(
            "the mass is anchored at a pole; the profile must start at V = 0 with A = 0".into(),
        ));
    }
    let n = profile.n;
    let curve = to_f(profile)?;
    if curve.v.len() <= ANCHOR_SAMPLES {
        return Err(Error::Resolution(format!(
            "{} samples cannot anchor the mass at V = 0",
            curve.v.len()
        )));
    }
    let (num, den) = (1..=ANCHOR_SAMPLES).fold((0.0, 0.0), |(a, b), k| {
        (a + curve.v[k] * curve.f[k], b + curve.v[k] * curve.v[k])
    });
    let anchor_slope = num / den;
    let slope0 = curve.f_prime[0];
    if !((anchor_slope - slope0).abs() <= ANCHOR_TOL * slope0.abs()) {
        return Err(Error::Resolution(format!(
            "small-volume fit F ≈ {anchor_slope:.6} V disagrees with F'(0) = {slope0:.6}; refine the grid"
        )));
    }

    let y0 = smooth_start(n);
    let k = curvature_coefficient(n, ric0);
    let e = 2.0 / n as f64;
    let m_values = curve
        .f
        .iter()
        .zip(&curve.f_prime)
        .map(|(f, d)| y0 * y0 - d * d - k * f.powf(e))
        .collect();
    Ok(MassFunction {
        v_grid: curve.v.clone(),
        m_values,
        f: curve,
        anchor_slope,
        y0,
    })
}

/// A level set of the mass: `y = (y_start² - k x^{2/n})^{1/2}` from `x = 0` to `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePath {
    pub n: usize,
    pub ric0: f64,
    pub m0: f64,
    /// `n ω_{n-1}^{1/(n-1)}`.
    pub y0: f64,
    /// `(y0² - m0)^{1/2}`.
    pub y_start: f64,
    pub x0: f64,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

const PATH_SAMPLES: usize = 257;

impl PhasePath {
    /// `y` on the closed form; NaN beyond `x0`.
    pub fn y_at(&self, x: f64) -> f64 {
        let k = curvature_coefficient(self.n, self.ric0);
        (self.y_start * self.y_start - k * x.powf(2.0 / self.n as f64)).sqrt()
    }
}

pub fn extremal_path(n: usize, ric0: f64, m0: f64) -> Result<PhasePath> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dimension n = {n} is below the minimum 3")));
    }
    if !(ric0 > 0.0 && ric0.is_finite()) {
        return Err(Error::InvalidInput(format!("Ric0 must be positive, got {ric0}")));
    }
    if !(m0 >= 0.0) {
        return Err(Error::InvalidInput(format!("mass m0 must be nonnegative, got {m0}")));
    }
    let y0 = smooth_start(n);
    let y_sq = y0 * y0 - m0;
    if !(y_sq > 0.0) {
        return Err(Error::EmptyPath { m0, y0_sq: y0 * y0 });
    }
    let k = curvature_coefficient(n, ric0);
    let x0 = (y_sq / k).powf(n as f64 / 2.0);
    let y_start = y_sq.sqrt();

    // x = x0 sin^n θ spreads samples towards both ends
    let (x, y) = (0..PATH_SAMPLES)
        .map(|i| {
            let theta = std::f64::consts::FRAC_PI_2 * i as f64 / (PATH_SAMPLES - 1) as f64;
            let (s, c) = theta.sin_cos();
            let x = if i == PATH_SAMPLES - 1 { x0 } else { x0 * s.powi(n as i32) };
            let y = if i == PATH_SAMPLES - 1 { 0.0 } else { y_start * c };
            (x, y)
        })
        .unzip();
    Ok(PhasePath {
        n,
        ric0,
        m0,
        y0,
        y_start,
        x0,
        x,
        y,
    })
}

/// Relative accuracy requested from the path quadrature.
const PATH_TOL: Tolerance = Tolerance::relative(1e-12);

/// `2 ∫₀^{x0} dx / y` under `x = x0 sin^n θ`.
///
/// `dx = n x0 sin^{n-1}θ cos θ dθ` while `y ∝ cos θ` near `x0`, so the
/// transformed integrand stays bounded. A path whose samples do not match its
/// closed form produces non-finite values and a quadrature error.
pub fn volume_from_path(path: &PhasePath) -> Result<f64> {
    if !(path.x0 > 0.0) || path.x.is_empty() {
        return Err(Error::Quadrature("path is empty".into()));
    }
    let n = path.n as i32;
    let x0 = path.x0;
    let integrand = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let x = x0 * s.powi(n);
        n as f64 * x0 * s.powi(n - 1) * c / path.y_at(x)
    };
    let half = integrate(integrand, 0.0, std::f64::consts::FRAC_PI_2, PATH_TOL)?;
    Ok(2.0 * half.value)
}

/// Largest volume allowed by `Ric ≥ Ric₀`: the path with `m0 = 0`.
pub fn bishop_bound(n: usize, ric0: f64) -> Result<f64> {
    volume_from_path(&extremal_path(n, ric0, 0.0)?)
}
