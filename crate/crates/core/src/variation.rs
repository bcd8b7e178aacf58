//! Finite-difference checks of the area and mean-curvature evolution along
//! the unit normal flow of geodesic spheres.
//!
//! Flow quantities are differenced in `t`; the profile second derivative is
//! differenced in `V`, with the volume increments taken as local integrals so
//! that `dV/dt = A` is honoured exactly.

use crate::error::{Error, Result};
use crate::warped_geometry::{
    area_at, curvature_at, eval_warp, mean_curvature_at, slice_at, volume_between, WarpedMetric,
};

/// Residuals below this are indistinguishable from rounding.
const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Finite difference against its closed-form counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub finite_difference: f64,
    pub analytic: f64,
    /// `|fd - analytic| / max(|analytic|, 1)`.
    pub residual: f64,
}

impl Comparison {
    fn new(finite_difference: f64, analytic: f64) -> Self {
        Self {
            finite_difference,
            analytic,
            residual: (finite_difference - analytic).abs() / analytic.abs().max(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationReport {
    pub t: f64,
    pub h: f64,
    /// `dA/dt` against `H A`.
    pub first: Option<Comparison>,
    /// `dH/dt` against `-‖Π‖² - Ric(ν,ν)`.
    pub h_dot: Option<Comparison>,
    /// `d²A/dV²` against `(-‖Π‖² - Ric(ν,ν)) / A`.
    pub second: Option<Comparison>,
    /// Worst observed order over the filled checks, from a rerun at `h/2`.
    pub order_estimate: Option<f64>,
}

impl VariationReport {
    fn empty(t: f64, h: f64) -> Self {
        Self {
            t,
            h,
            first: None,
            h_dot: None,
            second: None,
            order_estimate: None,
        }
    }

    pub fn residual_first(&self) -> Option<f64> {
        self.first.map(|c| c.residual)
    }

    pub fn residual_h_dot(&self) -> Option<f64> {
        self.h_dot.map(|c| c.residual)
    }

    pub fn residual_second(&self) -> Option<f64> {
        self.second.map(|c| c.residual)
    }
}

/// `1e-3 t_max`.
pub fn default_step(metric: &WarpedMetric) -> f64 {
    1e-3 * metric.t_max()
}

/// `log2(r(h) / r(h/2))`, or `None` once either residual sits at rounding level.
pub fn observed_order(coarse: f64, fine: f64) -> Option<f64> {
    if coarse < ROUNDOFF_FLOOR || fine < ROUNDOFF_FLOOR {
        return None;
    }
    Some((coarse / fine).log2())
}

fn check_stencil(metric: &WarpedMetric, t: f64, h: f64) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("step h must be positive, got {h}")));
    }
    let (lo, hi) = metric.supported_range();
    let t_max = metric.t_max();
    let interior = if metric.is_closed() {
        t - h > lo && t + h < hi
    } else {
        t - h >= lo && t + h <= hi
    };
    if !interior {
        let t = if t - h <= lo { t - h } else { t + h };
        return Err(Error::Domain { t, t_max });
    }
    Ok(())
}

fn first_at(metric: &WarpedMetric, t: f64, h: f64) -> Result<Comparison> {
    check_stencil(metric, t, h)?;
    let fd = (area_at(metric, t + h)? - area_at(metric, t - h)?) / (2.0 * h);
    let an = mean_curvature_at(metric, t)? * area_at(metric, t)?;
    Ok(Comparison::new(fd, an))
}

fn h_dot_at(metric: &WarpedMetric, t: f64, h: f64) -> Result<Comparison> {
    check_stencil(metric, t, h)?;
    let fd = (mean_curvature_at(metric, t + h)? - mean_curvature_at(metric, t - h)?) / (2.0 * h);
    let s = slice_at(metric, t)?;
    let ric = curvature_at(metric, t)?.ric_radial;
    Ok(Comparison::new(fd, -s.second_fundamental_norm_sq - ric))
}

fn second_at(metric: &WarpedMetric, t: f64, h: f64) -> Result<Comparison> {
    check_stencil(metric, t, h)?;
    let (a_minus, a0, a_plus) = (
        area_at(metric, t - h)?,
        area_at(metric, t)?,
        area_at(metric, t + h)?,
    );
    let dv_minus = volume_between(metric, t - h, t)?;
    let dv_plus = volume_between(metric, t, t + h)?;
    let fd = 2.0 * ((a_plus - a0) / dv_plus - (a0 - a_minus) / dv_minus) / (dv_plus + dv_minus);

    let s = slice_at(metric, t)?;
    let ric = curvature_at(metric, t)?.ric_radial;
    Ok(Comparison::new(fd, (-s.second_fundamental_norm_sq - ric) / a0))
}

type Check = fn(&WarpedMetric, f64, f64) -> Result<Comparison>;

fn with_order(metric: &WarpedMetric, t: f64, h: f64, check: Check) -> Result<(Comparison, Option<f64>)> {
    let coarse = check(metric, t, h)?;
    let fine = check(metric, t, 0.5 * h)?;
    Ok((coarse, observed_order(coarse.residual, fine.residual)))
}

/// Centered `dA/dt` against `∫ H dA = H A`.
pub fn check_first_variation(metric: &WarpedMetric, t: f64, h: f64) -> Result<VariationReport> {
    let (c, order) = with_order(metric, t, h, first_at)?;
    Ok(VariationReport {
        first: Some(c),
        order_estimate: order,
        ..VariationReport::empty(t, h)
    })
}

/// Centered `dH/dt` against `-‖Π‖² - Ric(ν,ν)`.
pub fn check_mean_curvature_evolution(metric: &WarpedMetric, t: f64, h: f64) -> Result<VariationReport> {
    let (c, order) = with_order(metric, t, h, h_dot_at)?;
    Ok(VariationReport {
        h_dot: Some(c),
        order_estimate: order,
        ..VariationReport::empty(t, h)
    })
}

/// Second divided difference of the `(V, A)` curve against `(1/A²) ∫ (-‖Π‖² - Ric) dA`.
pub fn check_second_variation(metric: &WarpedMetric, t: f64, h: f64) -> Result<VariationReport> {
    let (c, order) = with_order(metric, t, h, second_at)?;
    Ok(VariationReport {
        second: Some(c),
        order_estimate: order,
        ..VariationReport::empty(t, h)
    })
}

/// All three checks at one point; the order is the worst of the three.
pub fn check_all(metric: &WarpedMetric, t: f64, h: f64) -> Result<VariationReport> {
    let (first, o1) = with_order(metric, t, h, first_at)?;
    let (h_dot, o2) = with_order(metric, t, h, h_dot_at)?;
    let (second, o3) = with_order(metric, t, h, second_at)?;
    let order_estimate = [o1, o2, o3].into_iter().flatten().reduce(f64::min);
    Ok(VariationReport {
        t,
        h,
        first: Some(first),
        h_dot: Some(h_dot),
        second: Some(second),
        order_estimate,
    })
}

/// Orders between consecutive steps of a refinement sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub t: f64,
    pub steps: Vec<f64>,
    pub first: Vec<f64>,
    pub h_dot: Vec<f64>,
    pub second: Vec<f64>,
    /// `orders[k][q]`: order of quantity `q` between `steps[k]` and `steps[k + 1]`.
    pub orders: Vec<[Option<f64>; 3]>,
}

impl ConvergenceStudy {
    /// Smallest order seen, ignoring pairs at rounding level.
    pub fn min_order(&self) -> Option<f64> {
        self.orders.iter().flatten().flatten().copied().reduce(f64::min)
    }
}

pub fn convergence_study(metric: &WarpedMetric, t: f64, steps: &[f64]) -> Result<ConvergenceStudy> {
    if steps.len() < 2 {
        return Err(Error::InvalidInput("convergence study needs at least two steps".into()));
    }
    let mut first = Vec::with_capacity(steps.len());
    let mut h_dot = Vec::with_capacity(steps.len());
    let mut second = Vec::with_capacity(steps.len());
    for &h in steps {
        first.push(first_at(metric, t, h)?.residual);
        h_dot.push(h_dot_at(metric, t, h)?.residual);
        second.push(second_at(metric, t, h)?.residual);
    }
    let orders = (0..steps.len() - 1)
        .map(|k| {
            let ratio = (steps[k] / steps[k + 1]).log2();
            let o = |r: &[f64]| observed_order(r[k], r[k + 1]).map(|v| v / ratio);
            [o(&first), o(&h_dot), o(&second)]
        })
        .collect();
    Ok(ConvergenceStudy {
        t,
        steps: steps.to_vec(),
        first,
        h_dot,
        second,
        orders,
    })
}

/// `dA/dV` of the geodesic-ball profile from the closed forms `dA/dt` and `dV/dt = A`.
pub fn profile_slope(metric: &WarpedMetric, t: f64) -> Result<f64> {
    let w = eval_warp(metric, t)?;
    if !(w.f > 0.0) {
        return Err(Error::SingularPoint { t });
    }
    let k = (metric.dim() - 1) as i32;
    let omega = metric.sphere_area();
    let da_dt = omega * k as f64 * w.f.powi(k - 1) * w.df;
    let dv_dt = omega * w.f.powi(k);
    Ok(da_dt / dv_dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sphere() -> WarpedMetric {
        WarpedMetric::round_sphere(3, 1.0).unwrap()
    }

    #[test]
    fn equator_first_variation() {
        let r = check_first_variation(&sphere(), PI / 2.0, 1e-3).unwrap();
        assert!(r.residual_first().unwrap() <= 1e-6);
    }

    #[test]
    fn cylinder_is_exact() {
        let m = WarpedMetric::cylinder(3, 1.0, 2.0).unwrap();
        let r = check_all(&m, 1.0, 1e-3).unwrap();
        assert_eq!(r.residual_first(), Some(0.0));
        assert_eq!(r.residual_h_dot(), Some(0.0));
        let s = r.second.unwrap();
        assert!(s.finite_difference.abs() < 1e-12);
        assert_eq!(s.analytic, 0.0);
    }

    #[test]
    fn first_variation_halving_ratio() {
        let m = sphere();
        let a = first_at(&m, PI / 3.0, 1e-2).unwrap().residual;
        let b = first_at(&m, PI / 3.0, 5e-3).unwrap().residual;
        assert!((a / b - 4.0).abs() < 0.01, "ratio {}", a / b);
    }

    #[test]
    fn h_dot_at_equator() {
        let r = check_mean_curvature_evolution(&sphere(), PI / 2.0, 1e-3).unwrap();
        let c = r.h_dot.unwrap();
        assert_eq!(c.analytic, -2.0);
        assert!(c.residual <= 1e-6);

        let fb = WarpedMetric::football(3, 0.5, 1.0).unwrap();
        let r = check_mean_curvature_evolution(&fb, PI / 2.0, 1e-3).unwrap();
        assert!(r.residual_h_dot().unwrap() <= 1e-6);
    }

    #[test]
    fn equator_second_variation() {
        let r = check_second_variation(&sphere(), PI / 2.0, 1e-3).unwrap();
        let c = r.second.unwrap();
        assert!((c.analytic + 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert!(c.residual <= 1e-5);
        assert!((c.finite_difference + 1.0 / (2.0 * PI)).abs() <= 1e-5);

        let r = check_second_variation(&sphere(), PI / 3.0, 1e-3).unwrap();
        assert!(r.residual_second().unwrap() <= 1e-5);
    }

    #[test]
    fn second_order_convergence() {
        let m = WarpedMetric::football(3, 0.5, 1.0).unwrap();
        let study = convergence_study(&m, 1.0, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(study.min_order().unwrap() >= 1.9, "{:?}", study.orders);
        assert!(study.orders.iter().all(|o| o.iter().all(|v| v.is_some())));
    }

    #[test]
    fn order_vanishes_at_roundoff() {
        assert_eq!(observed_order(1e-16, 1e-17), None);
        assert!((observed_order(4e-6, 1e-6).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn stencil_must_stay_interior() {
        let m = sphere();
        assert!(matches!(
            check_first_variation(&m, 1e-3, 2e-3),
            Err(Error::Domain { .. })
        ));
        assert!(check_second_variation(&m, PI - 1e-4, 1e-3).is_err());
    }

    #[test]
    fn profile_slope_is_mean_curvature() {
        for m in [
            sphere(),
            WarpedMetric::football(4, 0.3, 2.0).unwrap(),
            WarpedMetric::cylinder(5, 1.5, 3.0).unwrap(),
        ] {
            for t in [0.3, 0.9, 1.7] {
                let h = mean_curvature_at(&m, t).unwrap();
                assert!((profile_slope(&m, t).unwrap() - h).abs() <= 1e-14 * h.abs().max(1.0));
            }
        }
    }
}
