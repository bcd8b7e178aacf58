//! Without positive scalar curvature there is no volume bound: long cylinders.

use iso_compare::football::cylinder_growth;

fn main() -> iso_compare::Result<()> {
    for row in cylinder_growth(&[10.0, 100.0, 1000.0, 10000.0])? {
        println!(
            "L = {:>7}: volume / pi = {:>9.3}, inf Ric = {}, inf R = {}",
            row.length,
            row.volume / std::f64::consts::PI,
            row.ric_inf,
            row.scalar_inf
        );
    }
    Ok(())
}
