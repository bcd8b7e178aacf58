//! Candidate isoperimetric profiles and curvature bounds of the model metrics.

use iso_compare::warped_geometry::{candidate_profile, curvature_bounds, WarpedMetric};

fn main() -> iso_compare::Result<()> {
    let models = [
        ("unit S^3", WarpedMetric::round_sphere(3, 1.0)?),
        ("football c=0.7", WarpedMetric::football(3, 0.7, 1.0)?),
        ("cylinder L=10", WarpedMetric::cylinder(3, 1.0, 10.0)?),
    ];
    for (name, metric) in &models {
        let p = candidate_profile(metric, 64)?;
        let b = curvature_bounds(metric);
        let peak = p.a_values.iter().cloned().fold(0.0, f64::max);
        println!(
            "{name:>15}: V = {:.6}, max A = {:.6}, inf Ric = {:.4}, inf R = {:.4}, conclusive = {}",
            p.total_volume, peak, b.min_ricci, b.min_scalar, b.conclusive
        );
    }
    Ok(())
}
