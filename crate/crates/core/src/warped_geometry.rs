//! Rotationally symmetric model manifolds `dt² + f(t)² g_{S^{n-1}}`.
//!
//! Geodesic spheres `{t = const}` are umbilic, so every slice quantity has a
//! closed form in `f`, `f'` and `f''`. The geodesic-ball foliation about the
//! pole `t = 0` supplies the candidate isoperimetric profile: exact on round
//! spheres and an upper bound for the true profile elsewhere.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::interp::MonotoneCubic;
use crate::numerics::quadrature::{integrate, Tolerance};
use crate::numerics::roots::golden_max;
use crate::numerics::unit_sphere_area;

/// Closed-form or sampled warp function.
#[derive(Debug, Clone, PartialEq)]
pub enum Warp {
    /// `f(t) = r sin(t / r)` on `[0, π r]`.
    RoundSphere { radius: f64 },
    /// `f(t) = r c sin(t / r)` on `[0, π r]`; cone points at both poles when `c < 1`.
    Football { cone_factor: f64, scale: f64 },
    /// `f ≡ a` on `[0, L]`.
    Cylinder { radius: f64, length: f64 },
    /// Positive samples on the interior grid `t_k = t_max k / (m + 1)`, `k = 1..=m`.
    Tabulated(TabulatedWarp),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedWarp {
    t_max: f64,
    samples: Vec<f64>,
    interp: MonotoneCubic,
}

impl TabulatedWarp {
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarpedMetric {
    n: usize,
    warp: Warp,
}

fn check_dim(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("dimension n = {n} is below the minimum 3")));
    }
    Ok(())
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl WarpedMetric {
    pub fn round_sphere(n: usize, radius: f64) -> Result<Self> {
        check_dim(n)?;
        check_positive("sphere radius", radius)?;
        Ok(Self {
            n,
            warp: Warp::RoundSphere { radius },
        })
    }

    pub fn football(n: usize, cone_factor: f64, scale: f64) -> Result<Self> {
        check_dim(n)?;
        check_positive("football scale", scale)?;
        if !(cone_factor > 0.0 && cone_factor <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "football cone factor must lie in (0, 1], got {cone_factor}"
            )));
        }
        Ok(Self {
            n,
            warp: Warp::Football { cone_factor, scale },
        })
    }

    pub fn cylinder(n: usize, radius: f64, length: f64) -> Result<Self> {
        check_dim(n)?;
        check_positive("cylinder radius", radius)?;
        check_positive("cylinder length", length)?;
        Ok(Self {
            n,
            warp: Warp::Cylinder { radius, length },
        })
    }

    pub fn tabulated(n: usize, t_max: f64, samples: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        check_positive("t_max", t_max)?;
        if samples.len() < 4 {
            return Err(Error::InvalidInput(format!(
                "tabulated warp needs at least 4 samples, got {}",
                samples.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidInput(format!(
                "tabulated warp samples must be strictly positive, found {bad}"
            )));
        }
        let m = samples.len();
        let knots: Vec<f64> = (1..=m).map(|k| t_max * k as f64 / (m + 1) as f64).collect();
        let interp = MonotoneCubic::new(knots, samples.clone())?;
        Ok(Self {
            n,
            warp: Warp::Tabulated(TabulatedWarp {
                t_max,
                samples,
                interp,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn warp(&self) -> &Warp {
        &self.warp
    }

    pub fn t_max(&self) -> f64 {
        match &self.warp {
            Warp::RoundSphere { radius } => PI * radius,
            Warp::Football { scale, .. } => PI * scale,
            Warp::Cylinder { length, .. } => *length,
            Warp::Tabulated(tab) => tab.t_max,
        }
    }

    /// Closed models have `f = 0` at both ends of the domain.
    pub fn is_closed(&self) -> bool {
        matches!(self.warp, Warp::RoundSphere { .. } | Warp::Football { .. })
    }

    /// Whether `f(t) = f(t_max - t)` holds for the closed form.
    pub fn is_symmetric(&self) -> bool {
        !matches!(self.warp, Warp::Tabulated(_))
    }

    /// The range on which the warp can be evaluated: `[0, t_max]`, or the
    /// knot range for tabulated warps.
    pub fn supported_range(&self) -> (f64, f64) {
        match &self.warp {
            Warp::Tabulated(tab) => tab.interp.domain(),
            _ => (0.0, self.t_max()),
        }
    }

    /// `ω_{n-1}`, the area of the unit `(n-1)`-sphere.
    pub fn sphere_area(&self) -> f64 {
        unit_sphere_area(self.n - 1)
    }
}

/// Warp value with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpValue {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
}

/// Evaluate `(f, f', f'')` at `t`.
pub fn eval_warp(metric: &WarpedMetric, t: f64) -> Result<WarpValue> {
    let t_max = metric.t_max();
    if !(t >= 0.0 && t <= t_max) {
        return Err(Error::Domain { t, t_max });
    }
    Ok(match &metric.warp {
        Warp::RoundSphere { radius: r } => {
            let (s, c) = (t / r).sin_cos();
            WarpValue {
                f: r * s,
                df: c,
                d2f: -s / r,
            }
        }
        Warp::Football {
            cone_factor: c,
            scale: r,
        } => {
            let (s, co) = (t / r).sin_cos();
            WarpValue {
                f: r * c * s,
                df: c * co,
                d2f: -c * s / r,
            }
        }
        Warp::Cylinder { radius, .. } => WarpValue {
            f: *radius,
            df: 0.0,
            d2f: 0.0,
        },
        Warp::Tabulated(tab) => {
            let (lo, hi) = tab.interp.domain();
            let (f, df, d2f) = tab
                .interp
                .eval(t)
                .ok_or(Error::UnsupportedPoint { t, lo, hi })?;
            WarpValue { f, df, d2f }
        }
    })
}

/// `1 - f'(t)²`, evaluated without cancellation for the closed forms.
fn one_minus_df_sq(metric: &WarpedMetric, t: f64, w: &WarpValue) -> f64 {
    match &metric.warp {
        Warp::RoundSphere { radius } => (t / radius).sin().powi(2),
        Warp::Football {
            cone_factor: c,
            scale,
        } => (1.0 - c * c) + (c * (t / scale).sin()).powi(2),
        Warp::Cylinder { .. } => 1.0,
        Warp::Tabulated(_) => 1.0 - w.df * w.df,
    }
}

/// Curvature of the model at a point of the slice `{t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureData {
    /// `Ric(∂_t, ∂_t) = -(n-1) f''/f`.
    pub ric_radial: f64,
    /// Ricci eigenvalue tangent to the slice: `-f''/f + (n-2)(1 - f'²)/f²`.
    pub ric_tangential: f64,
    /// `R = 2(n-1)(-f''/f) + (n-1)(n-2)(1 - f'²)/f²`.
    pub scalar: f64,
}

impl CurvatureData {
    pub fn min_ricci(&self) -> f64 {
        self.ric_radial.min(self.ric_tangential)
    }
}

pub fn curvature_at(metric: &WarpedMetric, t: f64) -> Result<CurvatureData> {
    let w = eval_warp(metric, t)?;
    if !(w.f > 0.0) {
        return Err(Error::SingularPoint { t });
    }
    let n = metric.n as f64;
    // + 0.0 turns a signed zero into +0
    let radial = -w.d2f / w.f + 0.0;
    let sectional_tangent = one_minus_df_sq(metric, t, &w) / (w.f * w.f);
    Ok(CurvatureData {
        ric_radial: (n - 1.0) * radial,
        ric_tangential: radial + (n - 2.0) * sectional_tangent,
        scalar: 2.0 * (n - 1.0) * radial + (n - 1.0) * (n - 2.0) * sectional_tangent,
    })
}

/// Grid infima of the smallest Ricci eigenvalue and of the scalar curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureBounds {
    pub min_ricci: f64,
    pub min_scalar: f64,
    pub argmin_ricci: f64,
    pub argmin_scalar: f64,
    /// Largest change of either infimum between the coarse and refined grid.
    pub refinement_gap: f64,
    /// `false` when the refined grid moved an infimum by more than
    /// [`CURVATURE_REFINEMENT_TOL`] (relative, floor 1), or when tabulated
    /// samples oscillate (more than two sign changes of their differences).
    pub conclusive: bool,
}

impl CurvatureBounds {
    /// Certify `Ric ≥ ric0` (relative slack 1e-12 for rounding).
    pub fn certifies_ricci(&self, ric0: f64) -> bool {
        self.conclusive && self.min_ricci >= ric0 - 1e-12 * ric0.abs().max(1.0)
    }

    pub fn certifies_scalar(&self, r0: f64) -> bool {
        self.conclusive && self.min_scalar >= r0 - 1e-12 * r0.abs().max(1.0)
    }
}

pub const CURVATURE_REFINEMENT_TOL: f64 = 1e-6;
// not nested, so a refined minimum is never just a re-sampled coarse point
const COARSE_GRID: usize = 1000;
const FINE_GRID: usize = 4099;

fn tabulated_oscillates(metric: &WarpedMetric) -> bool {
    let Warp::Tabulated(tab) = &metric.warp else {
        return false;
    };
    let diffs: Vec<f64> = tab
        .samples
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .collect();
    diffs.windows(2).filter(|w| w[0].signum() != w[1].signum()).count() > 2
}

fn grid_minima(metric: &WarpedMetric, points: &[f64]) -> (f64, f64, f64, f64) {
    let mut best = (f64::INFINITY, f64::NAN, f64::INFINITY, f64::NAN);
    for &t in points {
        if let Ok(c) = curvature_at(metric, t) {
            let ric = c.min_ricci();
            if ric < best.0 {
                best.0 = ric;
                best.1 = t;
            }
            if c.scalar < best.2 {
                best.2 = c.scalar;
                best.3 = t;
            }
        }
    }
    best
}

/// Infimum of curvature over the model, with a grid-refinement check.
pub fn curvature_bounds(metric: &WarpedMetric) -> CurvatureBounds {
    let (lo, hi) = metric.supported_range();
    let closed = metric.is_closed();
    let width = hi - lo;

    // endpoint-limit points approach the poles geometrically
    let mut limit_points = Vec::new();
    for j in 2..=6 {
        let d = width * 10f64.powi(-j);
        limit_points.push(lo + d);
        limit_points.push(hi - d);
    }
    let grid = |m: usize| -> Vec<f64> {
        let (first, last) = if closed { (1, m - 1) } else { (0, m) };
        let mut pts: Vec<f64> = (first..=last)
            .map(|k| lo + width * k as f64 / m as f64)
            .collect();
        pts.extend_from_slice(&limit_points);
        pts
    };

    let coarse = grid_minima(metric, &grid(COARSE_GRID));
    let mut fine = grid_minima(metric, &grid(FINE_GRID));

    // polish each grid argmin over its neighbouring cells
    let cell = width / FINE_GRID as f64;
    let polish = |t0: f64, pick: fn(&CurvatureData) -> f64| -> Option<(f64, f64)> {
        if !t0.is_finite() {
            return None;
        }
        let a = (t0 - cell).max(lo);
        let b = (t0 + cell).min(hi);
        let (t, v) = golden_max(
            |t| curvature_at(metric, t).map_or(f64::NEG_INFINITY, |c| -pick(&c)),
            a,
            b,
            1e-12 * width,
        );
        Some((t, -v))
    };
    if let Some((t, v)) = polish(fine.1, CurvatureData::min_ricci) {
        if v < fine.0 {
            fine.0 = v;
            fine.1 = t;
        }
    }
    if let Some((t, v)) = polish(fine.3, |c| c.scalar) {
        if v < fine.2 {
            fine.2 = v;
            fine.3 = t;
        }
    }
    let gap_ric = (coarse.0 - fine.0).abs() / fine.0.abs().max(1.0);
    let gap_scalar = (coarse.2 - fine.2).abs() / fine.2.abs().max(1.0);
    let refinement_gap = gap_ric.max(gap_scalar);
    CurvatureBounds {
        min_ricci: fine.0,
        min_scalar: fine.2,
        argmin_ricci: fine.1,
        argmin_scalar: fine.3,
        refinement_gap,
        conclusive: refinement_gap.is_finite()
            && refinement_gap <= CURVATURE_REFINEMENT_TOL
            && !tabulated_oscillates(metric),
    }
}

/// A geodesic sphere `{t}` with its area, enclosed volume and extrinsic data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slice {
    pub t: f64,
    pub area: f64,
    pub volume: f64,
    pub mean_curvature: f64,
    pub second_fundamental_norm_sq: f64,
}

pub(crate) const VOLUME_TOL: Tolerance = Tolerance::relative(1e-12);

/// `ω_{n-1} ∫_a^b f^{n-1}`.
pub(crate) fn volume_between(metric: &WarpedMetric, a: f64, b: f64) -> Result<f64> {
    let omega = metric.sphere_area();
    let p = (metric.n - 1) as i32;
    let integral = integrate(
        |s| eval_warp(metric, s).map_or(f64::NAN, |w| w.f.powi(p)),
        a,
        b,
        VOLUME_TOL,
    )?;
    Ok(omega * integral.value)
}

pub(crate) fn area_at(metric: &WarpedMetric, t: f64) -> Result<f64> {
    let w = eval_warp(metric, t)?;
    Ok(metric.sphere_area() * w.f.powi(metric.n as i32 - 1))
}

/// Mean curvature `(n-1) f'/f` of the slice `{t}`.
pub(crate) fn mean_curvature_at(metric: &WarpedMetric, t: f64) -> Result<f64> {
    let w = eval_warp(metric, t)?;
    if !(w.f > 0.0) {
        return Err(Error::SingularPoint { t });
    }
    Ok((metric.n - 1) as f64 * w.df / w.f)
}

pub fn slice_at(metric: &WarpedMetric, t: f64) -> Result<Slice> {
    let t_max = metric.t_max();
    if !(t > 0.0 && t < t_max) {
        return if t == 0.0 || t == t_max {
            Err(Error::SingularPoint { t })
        } else {
            Err(Error::Domain { t, t_max })
        };
    }
    let w = eval_warp(metric, t)?;
    if !(w.f > 0.0) {
        return Err(Error::SingularPoint { t });
    }
    let k = (metric.n - 1) as f64;
    let q = w.df / w.f;
    let (lo, _) = metric.supported_range();
    Ok(Slice {
        t,
        area: metric.sphere_area() * w.f.powi(metric.n as i32 - 1),
        volume: volume_between(metric, lo, t)?,
        mean_curvature: k * q,
        second_fundamental_norm_sq: k * q * q,
    })
}

/// Total volume of the model (of the supported range for tabulated warps).
pub fn total_volume(metric: &WarpedMetric) -> Result<f64> {
    let (lo, hi) = metric.supported_range();
    volume_between(metric, lo, hi)
}

/// Sampled `(V, A)` curve of a hypersurface foliation.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub n: usize,
    pub v_grid: Vec<f64>,
    pub a_values: Vec<f64>,
    pub total_volume: f64,
    /// Both ends are poles with `A = 0`.
    pub closed: bool,
    /// Uniform radial grid the samples came from, when known.
    pub t_grid: Option<Vec<f64>>,
}

impl Profile {
    /// Wrap externally produced samples; `v_grid` must be strictly increasing.
    pub fn from_samples(n: usize, v_grid: Vec<f64>, a_values: Vec<f64>, closed: bool) -> Result<Self> {
        check_dim(n)?;
        if v_grid.len() != a_values.len() || v_grid.len() < 3 {
            return Err(Error::Validation(
                "profile needs at least 3 (V, A) pairs of equal length".into(),
            ));
        }
        if v_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation("profile volumes must be strictly increasing".into()));
        }
        let total_volume = *v_grid.last().expect("checked non-empty");
        Ok(Self {
            n,
            v_grid,
            a_values,
            total_volume,
            closed,
            t_grid: None,
        })
    }

    pub fn len(&self) -> usize {
        self.v_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v_grid.is_empty()
    }

    /// Area at volume `v`, by shape-preserving cubic interpolation of the samples.
    pub fn area_at(&self, v: f64) -> Result<f64> {
        let ip = MonotoneCubic::new(self.v_grid.clone(), self.a_values.clone())?;
        ip.eval(v).map(|(a, _, _)| a).ok_or_else(|| {
            Error::InvalidInput(format!(
                "volume {v} outside the profile range [{}, {}]",
                self.v_grid[0], self.total_volume
            ))
        })
    }
}

/// Geodesic-ball candidate profile on a uniform `t`-grid of `grid_size` cells.
pub fn candidate_profile(metric: &WarpedMetric, grid_size: usize) -> Result<Profile> {
    if grid_size < 16 {
        return Err(Error::InvalidInput(format!(
            "grid_size must be at least 16, got {grid_size}"
        )));
    }
    let (lo, hi) = metric.supported_range();
    let width = hi - lo;
    let t_grid: Vec<f64> = (0..=grid_size)
        .map(|k| lo + width * k as f64 / grid_size as f64)
        .collect();

    let closed = metric.is_closed();
    let mut a_values = Vec::with_capacity(t_grid.len());
    for (k, &t) in t_grid.iter().enumerate() {
        if closed && (k == 0 || k == grid_size) {
            a_values.push(0.0);
        } else {
            a_values.push(area_at(metric, t)?);
        }
    }

    let mut v_grid = Vec::with_capacity(t_grid.len());
    let mut acc = 0.0;
    v_grid.push(0.0);
    for w in t_grid.windows(2) {
        acc += volume_between(metric, w[0], w[1])?;
        v_grid.push(acc);
    }
    if let Some(k) = v_grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::Validation(format!(
            "volume samples are not strictly increasing at t = {}",
            t_grid[k + 1]
        )));
    }
    let interior = if closed {
        &a_values[1..grid_size]
    } else {
        &a_values[..]
    };
    if let Some(bad) = interior.iter().find(|a| !(**a > 0.0)) {
        return Err(Error::Validation(format!("non-positive interior area {bad}")));
    }

    Ok(Profile {
        n: metric.n,
        total_volume: acc,
        v_grid,
        a_values,
        closed,
        t_grid: Some(t_grid),
    })
}
