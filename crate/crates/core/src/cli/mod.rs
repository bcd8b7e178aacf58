//! Configuration-driven front end shared by the `iso-compare` binary.

pub mod config;
pub mod output;

use serde_json::Value;
use thiserror::Error;

use crate::error::Error;
use crate::football::{self, Epsilon0, Epsilon0Search, Method};
use crate::phase_plane::{extremal_path, ricci_mass, volume_from_path};
use crate::singular_gmt::{check_monotone, cutoff_budget, monotonicity_profile, MonotonicityCase, RadiusFamily};
use crate::variation::{convergence_study, default_step};
use crate::warped_geometry::{candidate_profile, curvature_bounds};

pub use config::{load, parse_config, Command, Format, RunConfig};
pub use output::{render, Report};

use output::{num, opt, round_value};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {message}", line.map_or_else(|| "command line".to_string(), |l| format!("line {l}")))]
    Config { line: Option<usize>, message: String },

    #[error("invalid parameters for {operation}: {source}")]
    Validation { operation: String, source: Error },

    #[error("{operation} failed: {source}")]
    Numerical { operation: String, source: Error },
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Validation { .. } => 2,
            CliError::Numerical { .. } => 3,
        }
    }
}

fn wrap(operation: &str) -> impl FnOnce(Error) -> CliError + '_ {
    move |source| {
        let operation = operation.to_string();
        match source {
            Error::Domain { .. }
            | Error::UnsupportedPoint { .. }
            | Error::SingularPoint { .. }
            | Error::NonPositiveArea { .. }
            | Error::InvalidInput(_)
            | Error::Validation(_) => CliError::Validation { operation, source },
            Error::Resolution(_)
            | Error::EmptyPath { .. }
            | Error::Quadrature(_)
            | Error::Integration(_)
            | Error::RootFinding(_) => CliError::Numerical { operation, source },
        }
    }
}

/// Run the configured command and collect its report.
pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Profile => profile(cfg),
        Command::VariationCheck => variation_check(cfg),
        Command::Mass => mass(cfg),
        Command::BishopBound => bishop(cfg),
        Command::FootballAlpha => football_alpha(cfg),
        Command::Epsilon0 => epsilon0(cfg),
        Command::Monotonicity => monotonicity(cfg),
        Command::CutoffBudget => cutoff(cfg),
        Command::CylinderGrowth => cylinder(cfg),
    }
}

fn profile(cfg: &RunConfig) -> Result<Report, CliError> {
    let metric = cfg.model.build(cfg.n.unwrap_or(3)).map_err(wrap("model"))?;
    let p = candidate_profile(&metric, cfg.grid).map_err(wrap("candidate_profile"))?;
    let bounds = curvature_bounds(&metric);
    let mut r = Report::with_columns(&["t", "V", "A"]);
    r.field("n", Value::from(metric.dim()))
        .field("total_volume", num(p.total_volume))
        .field("closed", Value::from(p.closed))
        .field("min_ricci", num(bounds.min_ricci))
        .field("min_scalar", num(bounds.min_scalar))
        .field("curvature_conclusive", Value::from(bounds.conclusive));
    let t = p.t_grid.clone().unwrap_or_default();
    for k in 0..p.len() {
        r.row(vec![opt(t.get(k).copied()), num(p.v_grid[k]), num(p.a_values[k])]);
    }
    Ok(r)
}

fn variation_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let metric = cfg.model.build(cfg.n.unwrap_or(3)).map_err(wrap("model"))?;
    let (lo, hi) = metric.supported_range();
    let t = cfg.t.unwrap_or(lo + (hi - lo) / 3.0);
    let h = cfg.h.unwrap_or_else(|| default_step(&metric));
    let steps: Vec<f64> = (0..=cfg.halvings).map(|k| h / 2f64.powi(k as i32)).collect();
    let study = convergence_study(&metric, t, &steps).map_err(wrap("variation check"))?;
    let mut r = Report::with_columns(&[
        "t",
        "h",
        "residual_first",
        "residual_h_dot",
        "residual_second",
        "order_first",
        "order_h_dot",
        "order_second",
    ]);
    r.field("min_order", opt(study.min_order()));
    for k in 0..steps.len() {
        let o = if k == 0 { [None; 3] } else { study.orders[k - 1] };
        r.row(vec![
            num(t),
            num(steps[k]),
            num(study.first[k]),
            num(study.h_dot[k]),
            num(study.second[k]),
            opt(o[0]),
            opt(o[1]),
            opt(o[2]),
        ]);
    }
    Ok(r)
}

fn mass(cfg: &RunConfig) -> Result<Report, CliError> {
    let metric = cfg.model.build(cfg.n.unwrap_or(3)).map_err(wrap("model"))?;
    let p = candidate_profile(&metric, cfg.grid).map_err(wrap("candidate_profile"))?;
    let m = ricci_mass(&p, cfg.ric0).map_err(wrap("ricci_mass"))?;
    let certified = curvature_bounds(&metric).certifies_ricci(cfg.ric0);
    let half = p.total_volume / 2.0;
    let upto: Vec<f64> = m
        .v_grid
        .iter()
        .zip(&m.m_values)
        .filter(|(v, _)| **v <= half)
        .map(|(_, m)| *m)
        .collect();
    let monotone = upto.windows(2).all(|w| w[1] >= w[0] - 1e-6);
    let max_abs = m.m_values.iter().fold(0.0f64, |a, v| a.max(v.abs()));

    let mut r = Report::with_columns(&["V", "A", "F", "F_prime", "m"]);
    r.field("y0", num(m.y0))
        .field("anchor_slope", num(m.anchor_slope))
        .field("max_abs_m", num(max_abs))
        .field("ricci_certified", Value::from(certified))
        .field("monotone_on_half", Value::from(monotone));
    for k in 0..p.len() {
        r.row(vec![
            num(m.v_grid[k]),
            num(p.a_values[k]),
            num(m.f.f[k]),
            num(m.f.f_prime[k]),
            num(m.m_values[k]),
        ]);
    }
    Ok(r)
}

fn bishop(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(3);
    let path = extremal_path(n, cfg.ric0, 0.0).map_err(wrap("extremal_path"))?;
    let bound = volume_from_path(&path).map_err(wrap("volume_from_path"))?;
    let mut r = Report::default();
    r.field("bound", num(bound))
        .field("y0", num(path.y0))
        .field("x0", num(path.x0));
    Ok(r)
}

fn football_alpha(cfg: &RunConfig) -> Result<Report, CliError> {
    let curve = football::alpha_curve(&cfg.eps_grid.values()).map_err(wrap("alpha"))?;
    let mut r = Report::with_columns(&[
        "epsilon",
        "alpha_oracle",
        "alpha_as_written",
        "z_argmax",
        "discrepancy",
        "cone_factor",
        "multimodal",
        "as_written_violations",
    ]);
    for a in &curve {
        r.row(vec![
            num(a.epsilon),
            num(a.alpha_oracle),
            opt(a.alpha_as_written),
            num(a.z_argmax),
            opt(a.discrepancy),
            num(a.cone_factor),
            Value::from(a.multimodal),
            Value::from(a.as_written.violations.len()),
        ]);
    }
    Ok(r)
}

/// Reference bracket the oracle is compared against.
const TARGET: (f64, f64) = (0.134, 0.135);

fn epsilon0(cfg: &RunConfig) -> Result<Report, CliError> {
    let search = Epsilon0Search {
        tol: cfg.tol,
        ..Epsilon0Search::default()
    };
    let outcome = football::epsilon0_with(cfg.method, &search).map_err(wrap("epsilon0"))?;
    let mut r = Report::default();
    r.field("method", Value::from(if cfg.method == Method::Oracle { "oracle" } else { "as-written" }));
    match &outcome {
        Epsilon0::Bracket { lo, hi, iterations } => {
            let overlaps = *lo < TARGET.1 && *hi > TARGET.0;
            r.field("outcome", Value::from("bracket"))
                .field("lo", num(*lo))
                .field("hi", num(*hi))
                .field("iterations", Value::from(*iterations))
                .field("overlaps_reference", Value::from(overlaps));
            if !overlaps && cfg.method == Method::Oracle {
                // the disagreement is reported with everything needed to audit it
                let grid: Vec<f64> = (1..=40).map(|k| k as f64 / 40.0).collect();
                let curve = football::alpha_curve(&grid).map_err(wrap("alpha"))?;
                let audit: Vec<Value> = curve
                    .iter()
                    .map(|a| {
                        serde_json::json!({
                            "epsilon": num(a.epsilon),
                            "alpha_oracle": num(a.alpha_oracle),
                            "z_argmax": num(a.z_argmax),
                            "switches": round_value(serde_json::to_value(&a.switches).unwrap_or_default()),
                        })
                    })
                    .collect();
                r.field("alpha_curve", Value::Array(audit));
            }
        }
        Epsilon0::NoRoot { reason, violations } => {
            r.field("outcome", Value::from("no_root"))
                .field("lo", Value::Null)
                .field("hi", Value::Null)
                .field("reason", Value::from(reason.as_str()))
                .field("violation_count", Value::from(violations.len()));
            if cfg.format() == Format::Json {
                r.field(
                    "violations",
                    round_value(serde_json::to_value(violations).unwrap_or_default()),
                );
            }
        }
    }
    Ok(r)
}

fn monotonicity(cfg: &RunConfig) -> Result<Report, CliError> {
    let surface = cfg.surface();
    let lambda = cfg.lambda.unwrap_or_else(|| surface.exact_sup_h());
    let case = MonotonicityCase::uniform(surface, lambda, cfg.rho_count);
    let p = monotonicity_profile(&case).map_err(wrap("monotonicity_profile"))?;
    let violations = check_monotone(&p.profile);
    let mut r = Report::with_columns(&["rho", "mass", "profile", "clamped"]);
    r.field("lambda", num(lambda))
        .field("exact_sup_h", num(surface.exact_sup_h()))
        .field("violations", Value::from(violations.len()));
    for k in 0..p.rho.len() {
        r.row(vec![
            num(p.rho[k]),
            num(p.mass[k]),
            num(p.profile[k]),
            Value::from(p.clamped[k]),
        ]);
    }
    Ok(r)
}

fn cutoff(cfg: &RunConfig) -> Result<Report, CliError> {
    let radii = if cfg.radii.is_empty() {
        // dyadic family below delta
        (1..=20).map(|i| cfg.delta * 0.5f64.powi(i)).collect()
    } else {
        cfg.radii.clone()
    };
    let family = RadiusFamily {
        radii,
        delta: cfg.delta,
        n: cfg.n.unwrap_or(8),
        c0: cfg.c0,
        c: cfg.c,
        h: cfg.h_bubble,
    };
    let b = cutoff_budget(&family);
    let mut r = Report::default();
    r.field("area_term", num(b.area_term))
        .field("dirichlet_term", num(b.dirichlet_term))
        .field("area_bound", num(b.area_bound))
        .field("dirichlet_bound", num(b.dirichlet_bound))
        .field("c1", num(b.c1))
        .field("area_holds", Value::from(b.area_holds))
        .field("dirichlet_holds", Value::from(b.dirichlet_holds))
        .field("admissible", Value::from(b.admissible))
        .field(
            "violations",
            Value::Array(b.violations.iter().map(|v| Value::from(v.as_str())).collect()),
        );
    Ok(r)
}

fn cylinder(cfg: &RunConfig) -> Result<Report, CliError> {
    let rows = football::cylinder_growth(&cfg.lengths).map_err(wrap("cylinder_growth"))?;
    let mut r = Report::with_columns(&["length", "volume", "ric_inf", "scalar_inf", "violates_ricci"]);
    for row in rows {
        r.row(vec![
            num(row.length),
            num(row.volume),
            num(row.ric_inf),
            num(row.scalar_inf),
            Value::from(row.violates_ricci),
        ]);
    }
    Ok(r)
}

/// Parse, execute and render in one go.
pub fn run_text(command: &str, text: &str, overrides: &[(String, String)]) -> Result<(RunConfig, String), CliError> {
    let cfg = load(command, text, overrides)?;
    let report = execute(&cfg)?;
    let rendered = render(&report, &cfg);
    Ok((cfg, rendered))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bishop_json() {
        let (_, out) = run_text("bishop-bound", "n = 3\nric0 = 2", &[]).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["bound"], serde_json::json!(19.7392088022));
        assert_eq!(v["meta"]["command"], "bishop-bound");
        assert!((v["y0"].as_f64().unwrap() - 10.6347).abs() < 1e-4);
    }

    #[test]
    fn exit_codes() {
        let e = run_text("bishop-bound", "n = 2", &[]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_text("profile", "model = football\ncone_factor = 1.5", &[]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_text("mass", "grid = 16", &[]).unwrap_err();
        assert_eq!(e.exit_code(), 3, "{e}");
    }

    #[test]
    fn csv_has_header_comments() {
        let (_, out) = run_text("cylinder-growth", "lengths = 10, 100", &[]).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# iso-compare "));
        assert_eq!(lines[1], "# command: cylinder-growth");
        assert_eq!(lines[2], "# params: lengths=10, 100");
        assert_eq!(lines[3], "length,volume,ric_inf,scalar_inf,violates_ricci");
        assert_eq!(lines[4], "10,125.663706144,0,2,true");
    }
}
