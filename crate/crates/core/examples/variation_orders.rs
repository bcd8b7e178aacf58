//! Finite-difference checks of the first and second variation formulas.

use iso_compare::variation::{check_second_variation, convergence_study};
use iso_compare::warped_geometry::WarpedMetric;
use std::f64::consts::{FRAC_PI_2, PI};

fn main() -> iso_compare::Result<()> {
    let steps = [1e-2, 5e-3, 2.5e-3];
    for metric in [WarpedMetric::round_sphere(3, 1.0)?, WarpedMetric::football(3, 0.5, 1.0)?] {
        let study = convergence_study(&metric, 1.0, &steps)?;
        println!("{:?}", metric.warp());
        for (k, h) in steps.iter().enumerate() {
            println!(
                "  h = {h:.4}: residuals {:.3e} {:.3e} {:.3e}",
                study.first[k], study.h_dot[k], study.second[k]
            );
        }
        println!("  min observed order {:?}", study.min_order());
    }

    // equator of the unit 3-sphere: A'' = -1/(2 pi)
    let equator = check_second_variation(&WarpedMetric::round_sphere(3, 1.0)?, FRAC_PI_2, 1e-3)?;
    if let Some(c) = equator.second {
        println!("equator A'' = {:.9} (exact {:.9})", c.analytic, -1.0 / (2.0 * PI));
    }
    Ok(())
}
