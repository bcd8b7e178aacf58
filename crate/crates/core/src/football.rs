//! Volume bounds for 3-manifolds with `R ≥ R₀` and `Ric ≥ ε Ric₀`.
//!
//! Everything is normalized to the unit round `S³`: `R₀ = 6`, `Ric₀ = 2`,
//! `V₀ = 2π²`. In the phase plane `(x, y) = (F, F')`, `F = A^{3/2}`, the two
//! differential inequalities for the profile become
//!
//! ```text
//! Ricci:  F'' ≤ -(3/2) ε Ric₀ x^{-1/3}
//! scalar: F'' ≤ (9 G - y²) / (6 x) - (3 R₀ / 4) x^{-1/3}
//! ```
//!
//! with `G = 2π χ` the Gauss–Bonnet bound for a sphere. The oracle follows
//! the pointwise smaller of the two from a cone tip `y(0) = c y₀` up to the
//! equator `y = 0` and takes the supremum of the enclosed volume over `c`.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::ode::{Dopri5, Stop};
use crate::numerics::quadrature::{integrate_sqrt_endpoint, Endpoint, Tolerance};
use crate::numerics::roots::golden_max;
use crate::phase_plane::smooth_start;
use crate::warped_geometry::{curvature_bounds, total_volume, WarpedMetric};

/// Euler characteristic of an isoperimetric sphere.
pub const EULER_CHARACTERISTIC: f64 = 2.0;
/// `∫ K ≤ 2π χ`.
pub const GAUSS_BONNET: f64 = 2.0 * PI * EULER_CHARACTERISTIC;
/// Scalar curvature of the unit `S³`.
pub const R0: f64 = 6.0;
/// Ricci constant of the unit `S³`.
pub const RIC0: f64 = 2.0;
/// Volume of the unit `S³`.
pub const V0: f64 = 2.0 * PI * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FootballSpec {
    pub epsilon: f64,
    pub r0: f64,
    pub ric0: f64,
    pub v0: f64,
}

impl FootballSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            epsilon,
            r0: R0,
            ric0: RIC0,
            v0: V0,
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    Ok(())
}

fn check_area(a: f64) -> Result<()> {
    if !(a > 0.0) {
        return Err(Error::NonPositiveArea { a });
    }
    Ok(())
}

/// `G/A² - (1/A)(¾ A'² + ½ R₀)`: the bound on `A''` from `R ≥ R₀` and Gauss–Bonnet.
pub fn scalar_odi_rhs(a: f64, a_prime: f64, r0: f64) -> Result<f64> {
    check_area(a)?;
    Ok(GAUSS_BONNET / (a * a) - (0.75 * a_prime * a_prime + 0.5 * r0) / a)
}

/// `-(1/A)(½ A'² + ε Ric₀)`: the bound on `A''` from `Ric ≥ ε Ric₀`.
pub fn ricci_odi_rhs(a: f64, a_prime: f64, epsilon: f64, ric0: f64) -> Result<f64> {
    check_area(a)?;
    Ok(-(0.5 * a_prime * a_prime + epsilon * ric0) / a)
}

/// Ricci bound in the phase plane; independent of `y`.
pub fn phase_ricci_rhs(x: f64, epsilon: f64) -> f64 {
    -1.5 * epsilon * RIC0 / x.cbrt()
}

/// Scalar bound in the phase plane.
pub fn phase_scalar_rhs(x: f64, y: f64) -> f64 {
    (9.0 * GAUSS_BONNET - y * y) / (6.0 * x) - 0.75 * R0 / x.cbrt()
}

/// `6x (F''_scalar - F''_ricci) / (9G)`: positive while the Ricci bound is the tighter one.
pub fn switch_margin(x: f64, y: f64, epsilon: f64) -> f64 {
    let g9 = 9.0 * GAUSS_BONNET;
    (g9 - y * y - (4.5 * R0 - 9.0 * epsilon * RIC0) * x.powf(2.0 / 3.0)) / g9
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Ricci,
    Scalar,
}

impl Regime {
    fn other(self) -> Self {
        match self {
            Regime::Ricci => Regime::Scalar,
            Regime::Scalar => Regime::Ricci,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwitchPoint {
    pub volume: f64,
    pub x: f64,
    pub y: f64,
    pub from: Regime,
    pub to: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathSample {
    pub volume: f64,
    pub x: f64,
    pub y: f64,
    pub regime: Regime,
}

/// One extremal trajectory of the oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OraclePath {
    pub epsilon: f64,
    /// Start `y(0) = c y₀`.
    pub cone_factor: f64,
    pub half_volume: f64,
    /// `2 half_volume / V₀`.
    pub alpha: f64,
    pub x_end: f64,
    /// Equatorial area `x_end^{2/3}`.
    pub z: f64,
    pub switches: Vec<SwitchPoint>,
    pub samples: Vec<PathSample>,
}

/// Relative width of the dead band around a regime switch.
const HYSTERESIS: f64 = 1e-10;
/// Starting `τ` (with `V = τ³`); the path is seeded on its leading-order form.
const TAU_START: f64 = 1e-5;
const MAX_SWITCHES: usize = 16;

fn oracle_solver() -> Dopri5 {
    Dopri5 {
        h_init: TAU_START,
        ..Dopri5::with_tolerances(1e-11, 1e-13)
    }
}

/// Integrate `F'' = min(Ricci, scalar)` from `(0, c y₀)` to `y = 0`.
///
/// The volume is reparametrized as `V = τ³` so that the `x^{-1/3}` forcing
/// near the tip becomes bounded.
pub fn oracle_path(epsilon: f64, cone_factor: f64) -> Result<OraclePath> {
    check_epsilon(epsilon)?;
    if !(cone_factor > 0.0 && cone_factor <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "cone factor must lie in (0, 1], got {cone_factor}"
        )));
    }
    let y0 = smooth_start(3);
    let ys = cone_factor * y0;
    let mut regime = if ys * ys < 9.0 * GAUSS_BONNET {
        Regime::Ricci
    } else {
        Regime::Scalar
    };

    let mut tau = TAU_START;
    let x_start = ys * tau.powi(3);
    let lead = match regime {
        Regime::Ricci => 9.0 * epsilon,
        Regime::Scalar => 9.0,
    };
    let mut state = [x_start, (ys * ys - lead * x_start.powf(2.0 / 3.0)).sqrt()];
    // generous: the pure-Ricci tip bound is π² / ((3 - 2ε) √ε)
    let tau_max = (10.0 * PI * PI / epsilon.sqrt()).cbrt();

    let solver = oracle_solver();
    let mut switches = Vec::new();
    let mut samples = vec![PathSample {
        volume: tau.powi(3),
        x: state[0],
        y: state[1],
        regime,
    }];

    loop {
        let r = regime;
        let rhs = move |t: f64, s: &[f64; 2]| {
            let j = 3.0 * t * t;
            let f2 = match r {
                Regime::Ricci => phase_ricci_rhs(s[0], epsilon),
                Regime::Scalar => phase_scalar_rhs(s[0], s[1]),
            };
            [j * s[1], j * f2]
        };
        let end = |_: f64, s: &[f64; 2]| s[1] / y0;
        let switch = move |_: f64, s: &[f64; 2]| {
            let m = switch_margin(s[0], s[1], epsilon);
            match r {
                Regime::Ricci => m + HYSTERESIS,
                Regime::Scalar => HYSTERESIS - m,
            }
        };
        let events: [&dyn Fn(f64, &[f64; 2]) -> f64; 2] = [&end, &switch];
        let sol = solver.solve(rhs, tau, state, tau_max, &events).map_err(|e| {
            Error::Integration(format!(
                "oracle path (epsilon = {epsilon}, c = {cone_factor}) in {r:?} regime: {e}"
            ))
        })?;
        for (t, s) in sol.t.iter().zip(&sol.y).skip(1) {
            samples.push(PathSample {
                volume: t.powi(3),
                x: s[0],
                y: s[1],
                regime: r,
            });
        }
        let (t_last, s_last) = sol.last();
        tau = t_last;
        state = s_last;
        match sol.stop {
            Stop::Event(0) => break,
            Stop::Event(_) => {
                switches.push(SwitchPoint {
                    volume: tau.powi(3),
                    x: state[0],
                    y: state[1],
                    from: r,
                    to: r.other(),
                });
                if switches.len() > MAX_SWITCHES {
                    return Err(Error::Integration(format!(
                        "oracle path (epsilon = {epsilon}, c = {cone_factor}) keeps switching regimes"
                    )));
                }
                regime = r.other();
            }
            Stop::End => {
                return Err(Error::Integration(format!(
                    "oracle path (epsilon = {epsilon}, c = {cone_factor}) did not reach y = 0 by V = {}",
                    tau_max.powi(3)
                )))
            }
        }
    }

    let half_volume = tau.powi(3);
    Ok(OraclePath {
        epsilon,
        cone_factor,
        half_volume,
        alpha: 2.0 * half_volume / V0,
        x_end: state[0],
        z: state[0].powf(2.0 / 3.0),
        switches,
        samples,
    })
}

/// Cone factors `k / CONE_GRID` scanned before refinement.
pub const CONE_GRID: usize = 128;
const CONE_XTOL: f64 = 1e-10;

/// Supremum of the oracle volume ratio over cone-tip starts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSup {
    pub epsilon: f64,
    pub alpha: f64,
    pub cone_factor: f64,
    pub z_argmax: f64,
    /// More than one local maximum on the cone grid.
    pub multimodal: bool,
    /// Refined `(c, α)` at every grid-local maximum.
    pub local_maxima: Vec<(f64, f64)>,
    pub switches: Vec<SwitchPoint>,
}

/// `α(ε)` by the phase-plane oracle: sequential in `c`.
pub fn alpha_oracle(epsilon: f64) -> Result<OracleSup> {
    check_epsilon(epsilon)?;
    let cs: Vec<f64> = (1..=CONE_GRID).map(|k| k as f64 / CONE_GRID as f64).collect();
    let values = cs
        .iter()
        .map(|&c| oracle_path(epsilon, c).map(|p| p.alpha))
        .collect::<Result<Vec<f64>>>()?;

    let m = values.len();
    let mut local_maxima = Vec::new();
    for k in 0..m {
        let left = if k == 0 { f64::NEG_INFINITY } else { values[k - 1] };
        let right = if k + 1 == m { f64::NEG_INFINITY } else { values[k + 1] };
        if values[k] >= left && values[k] > right || (k + 1 == m && values[k] >= left) {
            let (c, a) = if k + 1 == m {
                (cs[k], values[k])
            } else {
                let lo = if k == 0 { 0.5 * cs[0] } else { cs[k - 1] };
                let (c, a) = golden_max(
                    |c| oracle_path(epsilon, c).map_or(f64::NEG_INFINITY, |p| p.alpha),
                    lo,
                    cs[k + 1],
                    CONE_XTOL,
                );
                if a >= values[k] {
                    (c, a)
                } else {
                    (cs[k], values[k])
                }
            };
            local_maxima.push((c, a));
        }
    }
    let &(c_best, _) = local_maxima
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Integration("no maximum on the cone grid".into()))?;
    let best = oracle_path(epsilon, c_best)?;
    Ok(OracleSup {
        epsilon,
        alpha: best.alpha,
        cone_factor: c_best,
        z_argmax: best.z,
        multimodal: local_maxima.len() > 1,
        local_maxima,
        switches: best.switches,
    })
}

/// Which part of the displayed formula failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaPart {
    /// `y(z)` itself.
    Breakpoint,
    FirstIntegral,
    SecondIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// Radicand negative on this fraction of the sampled integration range.
    NegativeRadicand { fraction: f64 },
    /// Lower limit above the upper one.
    ReversedLimits { lower: f64, upper: f64 },
    NonFinite { value: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainViolation {
    pub z: f64,
    pub part: FormulaPart,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

/// Evaluation of the displayed closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsWritten {
    pub epsilon: f64,
    /// `None` when no `z` in range gives a well-defined value.
    pub alpha: Option<f64>,
    pub z_argmax: Option<f64>,
    pub z_evaluated: usize,
    pub z_valid: usize,
    pub violations: Vec<DomainViolation>,
    /// `y(z)` blows up as `ε → 1`.
    pub degenerate: bool,
}

/// `z` points of the coarse scan.
pub const Z_GRID: usize = 33;
/// Radicand samples per integral.
const RADICAND_SAMPLES: usize = 65;
const FORMULA_TOL: Tolerance = Tolerance::relative(1e-10);

/// `y(z) = z^{(4π - ε)/2} / (2(1 - ε))`, verbatim.
pub fn breakpoint_as_written(z: f64, epsilon: f64) -> f64 {
    z.powf(0.5 * (4.0 * PI - epsilon)) / (2.0 * (1.0 - epsilon))
}

fn radicand_check(
    z: f64,
    part: FormulaPart,
    lo: f64,
    hi: f64,
    radicand: &dyn Fn(f64) -> f64,
) -> Option<DomainViolation> {
    let mut negative = 0usize;
    for i in 0..RADICAND_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / (RADICAND_SAMPLES - 1) as f64;
        let r = radicand(x);
        if !r.is_finite() {
            return Some(DomainViolation {
                z,
                part,
                kind: ViolationKind::NonFinite { value: r },
            });
        }
        // a zero at the upper end is the integrable square-root singularity
        if r < 0.0 || (r == 0.0 && i + 1 < RADICAND_SAMPLES) {
            negative += 1;
        }
    }
    (negative > 0).then(|| DomainViolation {
        z,
        part,
        kind: ViolationKind::NegativeRadicand {
            fraction: negative as f64 / RADICAND_SAMPLES as f64,
        },
    })
}

/// Value of the displayed bracket at one `z`, or the reasons it has none.
pub fn as_written_at(z: f64, epsilon: f64) -> std::result::Result<f64, Vec<DomainViolation>> {
    let s = breakpoint_as_written(z, epsilon);
    if !s.is_finite() {
        return Err(vec![DomainViolation {
            z,
            part: FormulaPart::Breakpoint,
            kind: ViolationKind::NonFinite { value: s },
        }]);
    }
    let x0 = z.powf(1.5);
    let mut violations = Vec::new();
    if s < 0.0 {
        violations.push(DomainViolation {
            z,
            part: FormulaPart::FirstIntegral,
            kind: ViolationKind::ReversedLimits { lower: 0.0, upper: s },
        });
    }
    if s > x0 {
        violations.push(DomainViolation {
            z,
            part: FormulaPart::SecondIntegral,
            kind: ViolationKind::ReversedLimits { lower: s, upper: x0 },
        });
    }

    let g9 = 9.0 * GAUSS_BONNET;
    let first = move |x: f64| g9 - 27.0 * (1.0 - epsilon) * s.powf(2.0 / 3.0) - 9.0 * epsilon * x.powf(2.0 / 3.0);
    let second = move |x: f64| g9 - 18.0 * (1.0 - epsilon) * s.powf(-1.0 / 3.0) - 9.0 * x.powf(2.0 / 3.0);
    let (a1, b1) = (0.0f64.min(s), 0.0f64.max(s));
    let (a2, b2) = (s.min(x0), s.max(x0));
    violations.extend(radicand_check(z, FormulaPart::FirstIntegral, a1, b1, &first));
    violations.extend(radicand_check(z, FormulaPart::SecondIntegral, a2, b2, &second));
    if !violations.is_empty() {
        return Err(violations);
    }

    let piece = |part: FormulaPart, a: f64, b: f64, r: &dyn Fn(f64) -> f64| {
        if b <= a {
            return Ok(0.0);
        }
        integrate_sqrt_endpoint(|x| 1.0 / r(x).sqrt(), a, b, Endpoint::Upper, FORMULA_TOL)
            .map(|i| i.value)
            .map_err(|_| {
                vec![DomainViolation {
                    z,
                    part,
                    kind: ViolationKind::NonFinite { value: f64::NAN },
                }]
            })
    };
    let i1 = piece(FormulaPart::FirstIntegral, 0.0, s, &first)?;
    let i2 = piece(FormulaPart::SecondIntegral, s, x0, &second)?;
    Ok((i1 + i2) / (PI * PI))
}

/// `z` range `[4π/(3 - 2ε), 4π]` of the supremum.
pub fn z_range(epsilon: f64) -> (f64, f64) {
    (GAUSS_BONNET / (3.0 - 2.0 * epsilon), GAUSS_BONNET)
}

/// The displayed `α(ε)` with a 33-point scan and golden-section refinement.
pub fn alpha_as_written(epsilon: f64) -> Result<AsWritten> {
    check_epsilon(epsilon)?;
    let degenerate = 1.0 - epsilon <= 1e-9;
    let (lo, hi) = z_range(epsilon);
    let zs: Vec<f64> = (0..Z_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (Z_GRID - 1) as f64)
        .collect();
    let mut violations = Vec::new();
    let mut values = Vec::with_capacity(Z_GRID);
    for &z in &zs {
        match as_written_at(z, epsilon) {
            Ok(v) => values.push(Some(v)),
            Err(vs) => {
                violations.extend(vs);
                values.push(None);
            }
        }
    }
    let z_valid = values.iter().flatten().count();
    let best = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i, v)))
        .max_by(|a, b| a.1.total_cmp(&b.1));

    let (alpha, z_argmax) = match best {
        None => (None, None),
        Some((i, v)) => {
            let a = zs[i.saturating_sub(1)];
            let b = zs[(i + 1).min(Z_GRID - 1)];
            let (z, w) = golden_max(
                |z| as_written_at(z, epsilon).unwrap_or(f64::NEG_INFINITY),
                a,
                b,
                1e-10 * (hi - lo),
            );
            if w >= v {
                (Some(w), Some(z))
            } else {
                (Some(v), Some(zs[i]))
            }
        }
    };
    Ok(AsWritten {
        epsilon,
        alpha,
        z_argmax,
        z_evaluated: Z_GRID,
        z_valid,
        violations,
        degenerate: degenerate || zs.iter().any(|&z| !breakpoint_as_written(z, epsilon).is_finite()),
    })
}

/// Both evaluations of `α(ε)` side by side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaResult {
    pub epsilon: f64,
    pub alpha_oracle: f64,
    pub alpha_as_written: Option<f64>,
    /// Equatorial area of the maximizing oracle path.
    pub z_argmax: f64,
    pub cone_factor: f64,
    pub multimodal: bool,
    /// `|as_written - oracle|` when the displayed formula is defined.
    pub discrepancy: Option<f64>,
    pub as_written: AsWritten,
    pub switches: Vec<SwitchPoint>,
}

pub fn alpha(epsilon: f64) -> Result<AlphaResult> {
    let oracle = alpha_oracle(epsilon)?;
    let as_written = alpha_as_written(epsilon)?;
    Ok(AlphaResult {
        epsilon,
        alpha_oracle: oracle.alpha,
        alpha_as_written: as_written.alpha,
        z_argmax: oracle.z_argmax,
        cone_factor: oracle.cone_factor,
        multimodal: oracle.multimodal,
        discrepancy: as_written.alpha.map(|a| (a - oracle.alpha).abs()),
        as_written,
        switches: oracle.switches,
    })
}

/// `α` over an `ε` grid, evaluated concurrently.
pub fn alpha_curve(epsilons: &[f64]) -> Result<Vec<AlphaResult>> {
    epsilons.par_iter().map(|&e| alpha(e)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Oracle,
    AsWritten,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "as-written" | "as_written" => Ok(Method::AsWritten),
            other => Err(Error::InvalidInput(format!(
                "unknown method `{other}` (expected oracle or as-written)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Epsilon0Search {
    pub lo: f64,
    pub hi: f64,
    /// Final bracket width.
    pub tol: f64,
    /// `α > 1 + threshold` counts as exceeding the sphere.
    pub threshold: f64,
}

impl Default for Epsilon0Search {
    fn default() -> Self {
        Self {
            lo: 0.01,
            hi: 1.0,
            tol: 5e-4,
            threshold: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Epsilon0 {
    Bracket { lo: f64, hi: f64, iterations: usize },
    NoRoot { reason: String, violations: Vec<DomainViolation> },
}

impl Epsilon0 {
    pub fn bracket(&self) -> Option<(f64, f64)> {
        match self {
            Epsilon0::Bracket { lo, hi, .. } => Some((*lo, *hi)),
            Epsilon0::NoRoot { .. } => None,
        }
    }
}

pub fn epsilon0(method: Method) -> Result<Epsilon0> {
    epsilon0_with(method, &Epsilon0Search::default())
}

/// Bisection on `α(ε) > 1`: `α` exceeds the sphere below `ε₀` and equals it above.
pub fn epsilon0_with(method: Method, search: &Epsilon0Search) -> Result<Epsilon0> {
    if !(search.lo > 0.0 && search.lo < search.hi && search.hi <= 1.0 && search.tol > 0.0) {
        return Err(Error::InvalidInput(format!("invalid epsilon0 search {search:?}")));
    }
    let mut violations = Vec::new();
    let mut above = |e: f64| -> Result<Option<bool>> {
        let a = match method {
            Method::Oracle => Some(alpha_oracle(e)?.alpha),
            Method::AsWritten => {
                let w = alpha_as_written(e)?;
                violations.extend(w.violations);
                w.alpha
            }
        };
        Ok(a.map(|a| a > 1.0 + search.threshold))
    };

    let (mut lo, mut hi) = (search.lo, search.hi);
    let at_lo = above(lo)?;
    let at_hi = above(hi)?;
    let reason = match (at_lo, at_hi) {
        (Some(true), Some(false)) => None,
        (None, _) | (_, None) => Some(format!(
            "alpha is undefined at the search ends [{lo}, {hi}]"
        )),
        (Some(false), _) => Some(format!("alpha({lo}) does not exceed 1")),
        (_, Some(true)) => Some(format!("alpha({hi}) still exceeds 1")),
    };
    if let Some(reason) = reason {
        return Ok(Epsilon0::NoRoot { reason, violations });
    }

    let mut iterations = 0;
    while hi - lo > search.tol {
        let mid = 0.5 * (lo + hi);
        match above(mid)? {
            Some(true) => lo = mid,
            Some(false) => hi = mid,
            None => {
                return Ok(Epsilon0::NoRoot {
                    reason: format!("alpha is undefined at epsilon = {mid}"),
                    violations,
                })
            }
        }
        iterations += 1;
    }
    Ok(Epsilon0::Bracket { lo, hi, iterations })
}

/// Round cylinder `[0, N] × S²` of radius 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderRow {
    pub length: f64,
    pub volume: f64,
    pub ric_inf: f64,
    pub scalar_inf: f64,
    /// `Ric ≥ ε Ric₀` fails for every `ε > 0`.
    pub violates_ricci: bool,
}

/// Volumes grow like `4πN` while `R ≡ 2` and `Ric_inf = 0`.
pub fn cylinder_growth(lengths: &[f64]) -> Result<Vec<CylinderRow>> {
    if lengths.is_empty() {
        return Err(Error::InvalidInput("no cylinder lengths given".into()));
    }
    if lengths.iter().any(|l| !(*l > 0.0 && l.is_finite())) || lengths.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(format!(
            "cylinder lengths must be positive and increasing, got {lengths:?}"
        )));
    }
    lengths
        .iter()
        .map(|&length| {
            let m = WarpedMetric::cylinder(3, 1.0, length)?;
            let b = curvature_bounds(&m);
            Ok(CylinderRow {
                length,
                volume: total_volume(&m)?,
                ric_inf: b.min_ricci,
                scalar_inf: b.min_scalar,
                violates_ricci: b.min_ricci <= 0.0,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_rhs_values() {
        let a = 4.0 * PI;
        assert!((scalar_odi_rhs(a, 0.0, 6.0).unwrap() + 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((scalar_odi_rhs(a, 0.0, 0.0).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-15);
        let far = scalar_odi_rhs(1e12, 0.0, 6.0).unwrap();
        assert!(far < 0.0 && far > -1e-11);
        assert!(matches!(scalar_odi_rhs(0.0, 0.0, 6.0), Err(Error::NonPositiveArea { .. })));
    }

    #[test]
    fn ricci_rhs_values() {
        let a = 4.0 * PI;
        assert!((ricci_odi_rhs(a, 0.0, 1.0, 2.0).unwrap() + 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((ricci_odi_rhs(a, 0.0, 0.5, 2.0).unwrap() + 1.0 / (4.0 * PI)).abs() < 1e-15);
        assert_eq!(ricci_odi_rhs(1.0, 2.0, 1.0, 2.0).unwrap(), -4.0);
        assert!(ricci_odi_rhs(-1.0, 0.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn gauss_bonnet_constant() {
        assert_eq!(GAUSS_BONNET, 4.0 * PI);
    }

    #[test]
    fn phase_rhs_matches_area_form() {
        // F = A^{3/2}: F'' = (3/2) A^{1/2} A'' + (3/4) A^{-1/2} A'²
        for &(a, ap, eps) in &[(1.3f64, 0.4f64, 0.2), (7.0, -1.1, 0.7), (12.0, 0.0, 1.0)] {
            let x = a.powf(1.5);
            let y = 1.5 * a.sqrt() * ap;
            let lift = |app: f64| 1.5 * a.sqrt() * app + 0.75 * ap * ap / a.sqrt();
            let r = lift(ricci_odi_rhs(a, ap, eps, RIC0).unwrap());
            let s = lift(scalar_odi_rhs(a, ap, R0).unwrap());
            assert!((phase_ricci_rhs(x, eps) - r).abs() < 1e-12 * r.abs().max(1.0));
            assert!((phase_scalar_rhs(x, y) - s).abs() < 1e-12 * s.abs().max(1.0));
            let d = 6.0 * x * (s - r) / (9.0 * GAUSS_BONNET);
            assert!((switch_margin(x, y, eps) - d).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_path_is_the_extremal_path() {
        let p = oracle_path(1.0, 1.0).unwrap();
        assert!((p.alpha - 1.0).abs() < 1e-9);
        let ext = crate::phase_plane::extremal_path(3, 2.0, 0.0).unwrap();
        for s in &p.samples {
            let y = ext.y_at(s.x);
            if y.is_finite() {
                assert!((s.y - y).abs() < 1e-8, "x = {} y = {} vs {}", s.x, s.y, y);
            }
        }
        assert!((p.z - 4.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn pure_ricci_tip() {
        // below c² = ε/(3 - 2ε) the path never switches and α_c = c² ε^{-3/2}
        let (eps, c): (f64, f64) = (0.3, 0.2);
        let p = oracle_path(eps, c).unwrap();
        assert!(p.switches.is_empty());
        assert!((p.alpha - c * c / eps.powf(1.5)).abs() < 1e-9);
    }

    #[test]
    fn single_switch_from_ricci_to_scalar() {
        let p = oracle_path(0.3, 0.6).unwrap();
        assert_eq!(p.switches.len(), 1);
        let s = p.switches[0];
        assert_eq!((s.from, s.to), (Regime::Ricci, Regime::Scalar));
        // switch area 4π(1 - c²) / (3(1 - ε))
        let z_s = 4.0 * PI * (1.0 - 0.36) / (3.0 * 0.7);
        assert!((s.x.powf(2.0 / 3.0) - z_s).abs() < 1e-8);
        let signs: Vec<bool> = p
            .samples
            .iter()
            .map(|q| switch_margin(q.x, q.y, 0.3) > 0.0)
            .collect();
        assert_eq!(signs.windows(2).filter(|w| w[0] != w[1]).count(), 1);
    }

    #[test]
    fn oracle_at_one_and_half() {
        for eps in [1.0, 0.5] {
            let a = alpha_oracle(eps).unwrap();
            assert!((a.alpha - 1.0).abs() < 1e-6, "eps {eps}: {}", a.alpha);
        }
    }

    #[test]
    fn oracle_exceeds_sphere_for_small_epsilon() {
        let a = alpha_oracle(0.05).unwrap();
        assert!(a.alpha > 1.5);
        let (lo, hi) = z_range(0.05);
        assert!(a.z_argmax >= lo - 1e-9 && a.z_argmax <= hi + 1e-9, "{} not in [{lo}, {hi}]", a.z_argmax);
    }

    #[test]
    fn as_written_violates_its_domain() {
        let w = alpha_as_written(0.3).unwrap();
        assert_eq!(w.alpha, None);
        assert_eq!(w.z_valid, 0);
        assert!(!w.violations.is_empty());
        assert!(w
            .violations
            .iter()
            .any(|v| matches!(v.kind, ViolationKind::ReversedLimits { .. })));
    }

    #[test]
    fn as_written_degenerates_at_one() {
        assert!(alpha_as_written(1.0).unwrap().degenerate);
        assert!(!alpha_as_written(0.5).unwrap().degenerate);
    }

    #[test]
    fn method_parsing() {
        assert_eq!("oracle".parse::<Method>().unwrap(), Method::Oracle);
        assert_eq!("as-written".parse::<Method>().unwrap(), Method::AsWritten);
        assert!("exact".parse::<Method>().is_err());
    }

    #[test]
    fn as_written_search_reports_no_root() {
        match epsilon0(Method::AsWritten).unwrap() {
            Epsilon0::NoRoot { violations, .. } => assert!(!violations.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cylinder_volumes() {
        let rows = cylinder_growth(&[10.0, 100.0]).unwrap();
        assert!((rows[0].volume - 40.0 * PI).abs() < 1e-9);
        assert!((rows[1].volume - 400.0 * PI).abs() < 1e-8);
        assert!(rows.iter().all(|r| r.ric_inf == 0.0 && r.violates_ricci));
        assert!(cylinder_growth(&[10.0, 5.0]).is_err());
    }
}
