//! Monotonicity of the density ratio on analytic surfaces.

use iso_compare::singular_gmt::{check_monotone, monotonicity_profile, MonotonicityCase, Surface};

fn main() -> iso_compare::Result<()> {
    let surfaces = [
        Surface::UnitCircleInPlane,
        Surface::UnitSphereInSpace { m: 2 },
        Surface::ConeOverCircle { angle: 0.5 },
    ];
    for s in surfaces {
        for lambda in [s.exact_sup_h(), s.exact_sup_h() + 1.0] {
            let p = monotonicity_profile(&MonotonicityCase::uniform(s, lambda, 64))?;
            println!("{s:?}, lambda = {lambda}: {} violations", check_monotone(&p.profile).len());
        }
    }
    // too small a lambda breaks the inequality
    let bad = monotonicity_profile(&MonotonicityCase::uniform(Surface::UnitCircleInPlane, -10.0, 64))?;
    println!("circle, lambda = -10: {} violations", check_monotone(&bad.profile).len());
    Ok(())
}
