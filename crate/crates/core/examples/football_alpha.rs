//! The football constant alpha(eps): oracle sup against the displayed formula.

use iso_compare::football::alpha_curve;

fn main() -> iso_compare::Result<()> {
    let eps: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    println!("{:>6} {:>12} {:>12} {:>10} {:>10}", "eps", "oracle", "as-written", "z*", "c*");
    for a in alpha_curve(&eps)? {
        let written = a.alpha_as_written.map_or("undefined".to_string(), |v| format!("{v:.8}"));
        println!(
            "{:>6.2} {:>12.8} {:>12} {:>10.5} {:>10.5}",
            a.epsilon, a.alpha_oracle, written, a.z_argmax, a.cone_factor
        );
    }
    Ok(())
}
