use iso_compare::singular_gmt::{ambient_h_bound, area_ratio_constant};
use iso_compare::warped_geometry::WarpedMetric;

fn main() -> iso_compare::Result<()> {
    let metric = WarpedMetric::round_sphere(4, 1.0)?;
    let rho: Vec<f64> = (1..=20).map(|k| 0.05 * k as f64).collect();
    let r = area_ratio_constant(&metric, 1.0, &rho)?;
    println!("area ratio constant of the slice t = 1 in S^4: {:.6}", r.constant);
    println!("ambient |H| bound (sup|H_M| = 2, |H_S| = 1, n = 8, l = 3, a = 0.5): {}", ambient_h_bound(2.0, 1.0, 8, 3, 0.5));
    Ok(())
}
