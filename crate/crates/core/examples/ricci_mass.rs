//! Ricci curvature mass along candidate profiles.
//!
//! The round sphere is the equality case and carries no mass; a football
//! with cone factor `c` has constant mass `36π(1 - c²)`.

use iso_compare::phase_plane::ricci_mass;
use iso_compare::warped_geometry::{candidate_profile, WarpedMetric};
use std::f64::consts::PI;

fn main() -> iso_compare::Result<()> {
    let sphere = candidate_profile(&WarpedMetric::round_sphere(3, 1.0)?, 1024)?;
    let m = ricci_mass(&sphere, 2.0)?;
    let worst = m.m_values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    println!("sphere: y0 = {:.6}, sup |m| = {worst:.2e}", m.y0);

    for c in [0.5, 0.9] {
        let p = candidate_profile(&WarpedMetric::football(3, c, 1.0)?, 512)?;
        let m = ricci_mass(&p, 2.0)?;
        let mid = m.m_values[m.m_values.len() / 2];
        println!("football c = {c}: m = {mid:.6}, closed form {:.6}", 36.0 * PI * (1.0 - c * c));
    }
    Ok(())
}
