//! Error budget for excising small balls around a singular set.

use iso_compare::singular_gmt::{cutoff_budget, RadiusFamily};

fn main() {
    for delta in [0.1, 0.05, 0.025] {
        let family = RadiusFamily {
            radii: (1..=30).map(|i| delta * 0.6f64.powi(i)).collect(),
            delta,
            n: 8,
            c0: 1.0,
            c: 1.0,
            h: 0.5,
        };
        let b = cutoff_budget(&family);
        println!(
            "delta = {delta}: area {:.3e} <= {:.3e}, dirichlet {:.3e} <= {:.3e}, admissible = {}",
            b.area_term, b.area_bound, b.dirichlet_term, b.dirichlet_bound, b.admissible
        );
    }
}
