//! Desk-scale checks of the measure-theoretic estimates: the monotonicity
//! formula on surfaces with closed-form ball masses, the ambient mean
//! curvature bound, and the cutoff budget over a covering of the singular set.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, Tolerance};
use crate::numerics::unit_sphere_area;
use crate::warped_geometry::{eval_warp, WarpedMetric};

/// Analytic surfaces with exact masses in Euclidean balls about `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "surface", rename_all = "snake_case")]
pub enum Surface {
    /// Unit circle in the plane, `ξ` on the circle.
    UnitCircleInPlane,
    /// Unit `m`-sphere in `R^{m+1}`, `ξ` on the sphere.
    UnitSphereInSpace { m: usize },
    /// Cone of half-opening `angle` and slant length 1, `ξ` at the apex.
    ConeOverCircle { angle: f64 },
}

impl Surface {
    pub fn dim(&self) -> usize {
        match self {
            Surface::UnitCircleInPlane => 1,
            Surface::UnitSphereInSpace { m } => *m,
            Surface::ConeOverCircle { .. } => 2,
        }
    }

    /// Largest distance from `ξ` to a point of the surface.
    pub fn diameter(&self) -> f64 {
        match self {
            Surface::UnitCircleInPlane | Surface::UnitSphereInSpace { .. } => 2.0,
            Surface::ConeOverCircle { .. } => 1.0,
        }
    }

    /// `sup |H|` with `H = tr Π`, as it enters the formula centred at `ξ`.
    ///
    /// The cone's mean curvature vector is normal while the position vector
    /// from the apex is tangent, so it contributes nothing there.
    pub fn exact_sup_h(&self) -> f64 {
        match self {
            Surface::UnitCircleInPlane => 1.0,
            Surface::UnitSphereInSpace { m } => *m as f64,
            Surface::ConeOverCircle { .. } => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Surface::UnitSphereInSpace { m: 0 } => {
                Err(Error::InvalidInput("sphere dimension must be at least 1".into()))
            }
            Surface::ConeOverCircle { angle } if !(angle > 0.0 && angle <= 0.5 * PI) => Err(
                Error::InvalidInput(format!("cone angle must lie in (0, π/2], got {angle}")),
            ),
            _ => Ok(()),
        }
    }

    /// `μ(B_ρ(ξ))` for `0 < ρ ≤ diameter`.
    pub fn ball_mass(&self, rho: f64) -> f64 {
        match *self {
            Surface::UnitCircleInPlane => 4.0 * (0.5 * rho).asin(),
            Surface::UnitSphereInSpace { m } => {
                // chord ρ subtends the geodesic radius 2 arcsin(ρ/2)
                let theta = 2.0 * (0.5 * rho).asin();
                if m == 2 {
                    PI * rho * rho
                } else {
                    unit_sphere_area(m - 1) * sin_power_integral(m - 1, theta)
                }
            }
            Surface::ConeOverCircle { angle } => PI * rho * rho * angle.sin(),
        }
    }
}

/// `∫₀^θ sin^k`.
fn sin_power_integral(k: usize, theta: f64) -> f64 {
    match k {
        0 => theta,
        1 => 1.0 - theta.cos(),
        _ => integrate(|s| s.sin().powi(k as i32), 0.0, theta, Tolerance::relative(1e-13))
            .map(|i| i.value)
            .unwrap_or(f64::NAN),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityCase {
    pub surface: Surface,
    pub lambda: f64,
    pub rho_grid: Vec<f64>,
}

impl MonotonicityCase {
    /// `count` radii evenly spaced on `(0, diameter]`.
    pub fn uniform(surface: Surface, lambda: f64, count: usize) -> Self {
        let d = surface.diameter();
        let rho_grid = (1..=count).map(|k| d * k as f64 / count as f64).collect();
        Self {
            surface,
            lambda,
            rho_grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityProfile {
    pub rho: Vec<f64>,
    pub mass: Vec<f64>,
    /// `e^{Λρ} ρ^{-m} μ(B_ρ(ξ))`.
    pub profile: Vec<f64>,
    /// Radii beyond the diameter, evaluated at the diameter.
    pub clamped: Vec<bool>,
}

pub fn monotonicity_profile(case: &MonotonicityCase) -> Result<MonotonicityProfile> {
    case.surface.validate()?;
    if !case.lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda must be finite, got {}", case.lambda)));
    }
    if let Some(r) = case.rho_grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidInput(format!("radii must be positive, got {r}")));
    }
    if case.rho_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput("radii must be increasing".into()));
    }
    let d = case.surface.diameter();
    let m = case.surface.dim() as i32;
    let mut out = MonotonicityProfile {
        rho: case.rho_grid.clone(),
        mass: Vec::with_capacity(case.rho_grid.len()),
        profile: Vec::with_capacity(case.rho_grid.len()),
        clamped: Vec::with_capacity(case.rho_grid.len()),
    };
    for &rho in &case.rho_grid {
        let clamped = rho > d;
        let mass = case.surface.ball_mass(rho.min(d));
        out.mass.push(mass);
        out.profile.push((case.lambda * rho).exp() * mass / rho.powi(m));
        out.clamped.push(clamped);
    }
    Ok(out)
}

/// Adjacent pair where the profile decreases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneViolation {
    pub index: usize,
    pub previous: f64,
    pub next: f64,
}

const MONOTONE_RTOL: f64 = 1e-12;

/// Every `k` with `samples[k + 1] < samples[k]` beyond relative rounding.
pub fn check_monotone(samples: &[f64]) -> Vec<MonotoneViolation> {
    samples
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] < w[0] - MONOTONE_RTOL * w[0].abs().max(w[1].abs()))
        .map(|(index, w)| MonotoneViolation {
            index,
            previous: w[0],
            next: w[1],
        })
        .collect()
}

/// `Λ = sup|H^{M ⊂ R^{m+l}}| + |H^{Σ ⊂ M}| + n l A`.
pub fn ambient_h_bound(sup_h_m: f64, h_sigma: f64, n: usize, l: usize, a: f64) -> f64 {
    sup_h_m + h_sigma.abs() + (n * l) as f64 * a
}

/// Covering radii of the singular set with the constants of the budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusFamily {
    pub radii: Vec<f64>,
    pub delta: f64,
    pub n: usize,
    /// Gradient constant of the cutoffs: `|∇η_i| ≤ C₀ / r_i`.
    pub c0: f64,
    /// Area-ratio constant: `|Σ ∩ B_ρ| ≤ C ρ^{n-1}`.
    pub c: f64,
    /// Mean curvature of the bubble.
    pub h: f64,
}

impl RadiusFamily {
    /// Named constraints the family breaks; empty when admissible.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.n < 8 {
            v.push(format!("n = {} is below 8", self.n));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            v.push(format!("delta = {} must lie in (0, 1]", self.delta));
        }
        if self.radii.is_empty() {
            v.push("no radii".into());
        }
        for (i, &r) in self.radii.iter().enumerate() {
            if !(r > 0.0 && r <= self.delta) {
                v.push(format!("r_{} = {r} must lie in (0, delta = {}]", i + 1, self.delta));
            }
        }
        if self.n >= 7 {
            let s = self.power_sum(self.n as i32 - 7);
            if !(s <= 1.0) {
                v.push(format!("sum of r_i^(n-7) = {s} exceeds 1"));
            }
        }
        for (name, x) in [("C0", self.c0), ("C", self.c)] {
            if !(x >= 0.0 && x.is_finite()) {
                v.push(format!("{name} = {x} must be nonnegative"));
            }
        }
        if !self.h.is_finite() {
            v.push(format!("H = {} must be finite", self.h));
        }
        v
    }

    fn power_sum(&self, p: i32) -> f64 {
        self.radii.iter().map(|r| r.powi(p)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutoffBudget {
    /// `C Σ r_i^{n-1}`.
    pub area_term: f64,
    /// `2^{n-1} (H² C Σ r_i^{n-1} + C₀² C Σ r_i^{n-3})` over the doubled balls.
    pub dirichlet_term: f64,
    /// `C δ⁶`.
    pub area_bound: f64,
    /// `2^{n-1} C (H² + C₀²)`.
    pub c1: f64,
    /// `C₁ δ⁴`.
    pub dirichlet_bound: f64,
    pub area_holds: bool,
    pub dirichlet_holds: bool,
    pub admissible: bool,
    pub violations: Vec<String>,
}

/// Budget of the area and Dirichlet errors from cutting out `∪ B_{r_i}`.
pub fn cutoff_budget(family: &RadiusFamily) -> CutoffBudget {
    let n = family.n as i32;
    let doubling = 2f64.powi(n - 1);
    let area_term = family.c * family.power_sum(n - 1);
    let dirichlet_term = doubling
        * (family.h * family.h * area_term + family.c0 * family.c0 * family.c * family.power_sum(n - 3));
    let c1 = doubling * family.c * (family.h * family.h + family.c0 * family.c0);
    let area_bound = family.c * family.delta.powi(6);
    let dirichlet_bound = c1 * family.delta.powi(4);
    let violations = family.violations();
    CutoffBudget {
        area_term,
        dirichlet_term,
        area_bound,
        c1,
        dirichlet_bound,
        area_holds: area_term <= area_bound,
        dirichlet_holds: dirichlet_term <= dirichlet_bound,
        admissible: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AreaRatio {
    /// Largest `|Σ ∩ B_ρ(ξ)| / ρ^{n-1}` over the radii.
    pub constant: f64,
    pub rho: Vec<f64>,
    pub ratios: Vec<f64>,
}

/// Area ratio of the slice `{t}` in its own intrinsic balls.
///
/// The slice is a round sphere of radius `R = f(t)`, so every centre `ξ`
/// gives the same cap `ω_{n-2} R^{n-1} ∫₀^{ρ/R} sin^{n-2}`.
pub fn area_ratio_constant(metric: &WarpedMetric, t: f64, rho_grid: &[f64]) -> Result<AreaRatio> {
    let radius = eval_warp(metric, t)?.f;
    if !(radius > 0.0) {
        return Err(Error::SingularPoint { t });
    }
    if rho_grid.is_empty() || rho_grid.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(Error::InvalidInput("radii must be positive and nonempty".into()));
    }
    let k = metric.dim() - 1;
    let omega = unit_sphere_area(k - 1);
    let ratios: Vec<f64> = rho_grid
        .iter()
        .map(|&rho| {
            let theta = (rho / radius).min(PI);
            omega * radius.powi(k as i32) * sin_power_integral(k - 1, theta) / rho.powi(k as i32)
        })
        .collect();
    let constant = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(AreaRatio {
        constant,
        rho: rho_grid.to_vec(),
        ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_profile_is_pi_exp() {
        let case = MonotonicityCase::uniform(Surface::UnitSphereInSpace { m: 2 }, 1.0, 50);
        let p = monotonicity_profile(&case).unwrap();
        for (r, v) in p.rho.iter().zip(&p.profile) {
            assert!((v - PI * r.exp()).abs() < 1e-12 * v);
        }
        assert!(check_monotone(&p.profile).is_empty());
    }

    #[test]
    fn general_sphere_cap_matches_two_sphere() {
        let two = Surface::UnitSphereInSpace { m: 2 };
        let theta = 2.0 * (0.35f64).asin();
        let general = unit_sphere_area(1) * sin_power_integral(1, theta);
        assert!((two.ball_mass(0.7) - general).abs() < 1e-14);
    }

    #[test]
    fn circle_limit_and_negative_control() {
        let p = monotonicity_profile(&MonotonicityCase {
            surface: Surface::UnitCircleInPlane,
            lambda: 1.0,
            rho_grid: vec![1e-6],
        })
        .unwrap();
        assert!((p.profile[0] - 2.0).abs() < 1e-5);

        let flat = MonotonicityCase::uniform(Surface::UnitCircleInPlane, 0.0, 40);
        assert!(check_monotone(&monotonicity_profile(&flat).unwrap().profile).is_empty());

        let neg = MonotonicityCase::uniform(Surface::UnitCircleInPlane, -10.0, 40);
        assert!(!check_monotone(&monotonicity_profile(&neg).unwrap().profile).is_empty());
    }

    #[test]
    fn cone_is_constant_at_apex() {
        let case = MonotonicityCase::uniform(Surface::ConeOverCircle { angle: 0.4 }, 0.0, 30);
        let p = monotonicity_profile(&case).unwrap();
        for v in &p.profile {
            assert!((v - PI * 0.4f64.sin()).abs() < 1e-14);
        }
        assert!(check_monotone(&p.profile).is_empty());
    }

    #[test]
    fn radii_beyond_diameter_are_clamped() {
        let p = monotonicity_profile(&MonotonicityCase {
            surface: Surface::UnitCircleInPlane,
            lambda: 1.0,
            rho_grid: vec![1.0, 2.0, 2.5],
        })
        .unwrap();
        assert_eq!(p.clamped, vec![false, false, true]);
        assert_eq!(p.mass[2], p.mass[1]);
    }

    #[test]
    fn negated_profile_flags_every_pair() {
        let v: Vec<f64> = (1..=10).map(|k| -(k as f64)).collect();
        assert_eq!(check_monotone(&v).len(), 9);
    }

    #[test]
    fn ambient_bound_values() {
        assert_eq!(ambient_h_bound(1.0, 0.5, 3, 1, 2.0), 7.5);
        assert_eq!(ambient_h_bound(0.0, 0.0, 5, 2, 0.0), 0.0);
        assert_eq!(ambient_h_bound(2.0, 1.0, 8, 2, 0.25), 7.0);
    }

    #[test]
    fn single_ball_budget() {
        let f = RadiusFamily {
            radii: vec![0.1],
            delta: 0.1,
            n: 8,
            c0: 1.0,
            c: 1.0,
            h: 0.0,
        };
        let b = cutoff_budget(&f);
        assert!((b.area_term - 1e-7).abs() < 1e-20);
        assert!((b.area_bound - 1e-6).abs() < 1e-19);
        assert!(b.admissible && b.area_holds && b.dirichlet_holds);
    }

    #[test]
    fn geometric_family_is_admissible() {
        let delta = 0.05;
        let f = RadiusFamily {
            radii: (1..=20).map(|i| delta * 0.5f64.powi(i)).collect(),
            delta,
            n: 8,
            c0: 2.0,
            c: 3.0,
            h: 1.5,
        };
        let b = cutoff_budget(&f);
        assert!(b.admissible, "{:?}", b.violations);
        assert!(b.area_holds && b.dirichlet_holds);
    }

    #[test]
    fn oversized_radius_is_named() {
        let f = RadiusFamily {
            radii: vec![1.5],
            delta: 1.0,
            n: 8,
            c0: 1.0,
            c: 1.0,
            h: 0.0,
        };
        let b = cutoff_budget(&f);
        assert!(!b.admissible);
        assert!(b.violations.iter().any(|v| v.starts_with("r_1")));
    }

    #[test]
    fn equatorial_area_ratio() {
        let m = WarpedMetric::round_sphere(3, 1.0).unwrap();
        let t = PI / 2.0;
        let small = area_ratio_constant(&m, t, &[1e-4]).unwrap();
        assert!((small.constant - PI).abs() < 1e-7);
        let whole = area_ratio_constant(&m, t, &[PI]).unwrap();
        assert!((whole.constant - 4.0 * PI / (PI * PI)).abs() < 1e-13);

        let big = WarpedMetric::round_sphere(3, 2.0).unwrap();
        let rhos = [0.3, 1.0, 2.5];
        let a = area_ratio_constant(&m, t, &rhos).unwrap();
        let b = area_ratio_constant(&big, 2.0 * t, &rhos.map(|r| 2.0 * r)).unwrap();
        for (x, y) in a.ratios.iter().zip(&b.ratios) {
            assert!((x - y).abs() < 1e-13);
        }
    }
}
