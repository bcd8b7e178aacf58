pub mod interp;
pub mod ode;
pub mod quadrature;
pub mod roots;

use std::f64::consts::PI;

/// Γ(k/2) for a positive integer `k`, via Γ(1) = 1, Γ(1/2) = √π, Γ(x+1) = xΓ(x).
pub fn gamma_half_integer(k: usize) -> f64 {
    assert!(k > 0, "Γ(k/2) needs k >= 1");
    let (mut x, mut g) = if k.is_multiple_of(2) { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = k as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Area of the unit `k`-sphere `S^k ⊂ R^{k+1}`: `2 π^{(k+1)/2} / Γ((k+1)/2)`.
///
/// `unit_sphere_area(n - 1)` is the `ω_{n-1}` that normalizes slice areas.
pub fn unit_sphere_area(k: usize) -> f64 {
    2.0 * PI.powf((k + 1) as f64 / 2.0) / gamma_half_integer(k + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((unit_sphere_area(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma_half_integer(2), 1.0);
        assert_eq!(gamma_half_integer(8), 6.0);
        assert!((gamma_half_integer(3) - PI.sqrt() / 2.0).abs() < 1e-15);
    }
}
