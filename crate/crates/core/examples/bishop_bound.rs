//! Sharp volume bound from the extremal phase-plane path.

use iso_compare::phase_plane::{bishop_bound, extremal_path, volume_from_path};
use std::f64::consts::PI;

fn main() -> iso_compare::Result<()> {
    let cases = [(3, 2.0, 2.0 * PI * PI), (4, 3.0, 8.0 * PI * PI / 3.0), (3, 8.0, PI * PI / 4.0)];
    for (n, ric0, exact) in cases {
        let v = bishop_bound(n, ric0)?;
        println!("n = {n}, Ric0 = {ric0}: {v:.12} (exact {exact:.12})");
    }

    // paths with positive mass bound strictly less volume
    for m0 in [0.0, 20.0, 60.0] {
        let path = extremal_path(3, 2.0, m0)?;
        println!("m0 = {m0:>4}: x0 = {:.6}, volume = {:.6}", path.x0, volume_from_path(&path)?);
    }
    Ok(())
}
