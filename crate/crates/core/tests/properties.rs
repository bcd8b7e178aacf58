use std::f64::consts::PI;

use iso_compare::cli::output::round12;
use iso_compare::phase_plane::{bishop_bound, ricci_mass};
use iso_compare::singular_gmt::{
    ambient_h_bound, check_monotone, cutoff_budget, monotonicity_profile, MonotonicityCase, RadiusFamily, Surface,
};
use iso_compare::warped_geometry::{candidate_profile, curvature_at, slice_at, total_volume, WarpedMetric};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn volume_scales_with_the_nth_power(n in 3usize..=6, r in 0.2f64..4.0) {
        let unit = total_volume(&WarpedMetric::round_sphere(n, 1.0).unwrap()).unwrap();
        let v = total_volume(&WarpedMetric::round_sphere(n, r).unwrap()).unwrap();
        prop_assert!((v - unit * r.powi(n as i32)).abs() <= 1e-10 * v);
    }

    #[test]
    fn curvature_scales_inversely_with_area(n in 3usize..=6, r in 0.2f64..4.0, s in 0.05f64..0.95) {
        let m = WarpedMetric::round_sphere(n, r).unwrap();
        let k = curvature_at(&m, s * PI * r).unwrap();
        let expect = (n - 1) as f64 / (r * r);
        prop_assert!((k.ric_radial - expect).abs() <= 1e-10 * expect);
        prop_assert!((k.ric_tangential - expect).abs() <= 1e-10 * expect);
    }

    #[test]
    fn slices_are_umbilic(n in 3usize..=6, c in 0.1f64..1.0, s in 0.05f64..0.95) {
        let m = WarpedMetric::football(n, c, 1.0).unwrap();
        let sl = slice_at(&m, s * PI).unwrap();
        let h2 = sl.mean_curvature * sl.mean_curvature / (n - 1) as f64;
        prop_assert!((sl.second_fundamental_norm_sq - h2).abs() <= 1e-12 * h2.max(1.0));
    }

    #[test]
    fn bishop_bound_is_the_sphere_volume(n in 3usize..=6, ric0 in 0.5f64..10.0) {
        let r = ((n - 1) as f64 / ric0).sqrt();
        let exact = total_volume(&WarpedMetric::round_sphere(n, r).unwrap()).unwrap();
        prop_assert!((bishop_bound(n, ric0).unwrap() - exact).abs() <= 1e-8 * exact);
    }

    #[test]
    fn football_mass_is_constant(c in 0.3f64..0.95) {
        let p = candidate_profile(&WarpedMetric::football(3, c, 1.0).unwrap(), 512).unwrap();
        let m = ricci_mass(&p, 2.0).unwrap();
        let expect = 36.0 * PI * (1.0 - c * c);
        let worst = m.m_values.iter().fold(0.0f64, |a, v| a.max((v - expect).abs()));
        prop_assert!(worst <= 1e-5 * expect, "worst {worst}");
    }

    #[test]
    fn ambient_bound_is_monotone(h in 0.0f64..5.0, hs in -5.0f64..5.0, a in 0.0f64..2.0, dh in 0.0f64..1.0, l in 1usize..5) {
        let base = ambient_h_bound(h, hs, 8, l, a);
        prop_assert!(ambient_h_bound(h + dh, hs, 8, l, a) >= base);
        prop_assert!(ambient_h_bound(h, hs, 8, l, a + dh) >= base);
        prop_assert!(ambient_h_bound(h, hs, 8, l + 1, a) >= base);
        prop_assert!(ambient_h_bound(h, hs.abs() + dh, 8, l, a) >= base);
    }

    #[test]
    fn monotone_above_the_mean_curvature(extra in 0.0f64..5.0, which in 0usize..3, angle in 0.1f64..1.5) {
        let s = [
            Surface::UnitCircleInPlane,
            Surface::UnitSphereInSpace { m: 2 },
            Surface::ConeOverCircle { angle },
        ][which];
        let p = monotonicity_profile(&MonotonicityCase::uniform(s, s.exact_sup_h() + extra, 48)).unwrap();
        prop_assert!(check_monotone(&p.profile).is_empty());
    }

    #[test]
    fn sorted_samples_never_violate(mut v in prop::collection::vec(-1e6f64..1e6, 0..64)) {
        v.sort_by(f64::total_cmp);
        prop_assert!(check_monotone(&v).is_empty());
    }

    #[test]
    fn budget_bounds_scale_exactly(n in 8usize..=12, delta in 0.01f64..0.5, k in 1usize..20, c in 0.0f64..5.0, c0 in 0.0f64..5.0, h in -3.0f64..3.0) {
        let radii: Vec<f64> = (1..=k).map(|i| delta * 0.5f64.powi(i as i32)).collect();
        let fam = RadiusFamily { radii, delta, n, c0, c, h };
        let b = cutoff_budget(&fam);
        prop_assert!(b.admissible && b.area_holds && b.dirichlet_holds);
        let d = cutoff_budget(&RadiusFamily { delta: 2.0 * delta, ..fam });
        prop_assert_eq!(d.area_bound, 64.0 * b.area_bound);
        prop_assert_eq!(d.dirichlet_bound, 16.0 * b.dirichlet_bound);
    }

    #[test]
    fn rounding_is_idempotent(x in prop::num::f64::NORMAL) {
        let r = round12(x);
        prop_assert_eq!(round12(r), r);
        prop_assert!((r - x).abs() <= 1e-11 * x.abs());
    }
}

#[test]
fn sphere_density_is_pi_exp_rho() {
    // Archimedes: a Euclidean ρ-ball meets the unit 2-sphere in area πρ²
    let p = monotonicity_profile(&MonotonicityCase::uniform(Surface::UnitSphereInSpace { m: 2 }, 1.0, 32)).unwrap();
    for (rho, q) in p.rho.iter().zip(&p.profile) {
        assert!((q - PI * rho.exp()).abs() <= 1e-10 * q, "rho {rho}: {q}");
    }
}

#[test]
fn corrupt_tabulated_profile_is_rejected() {
    let samples: Vec<f64> = (0..=64).map(|k| if k % 2 == 0 { 1.0 } else { -1.0 }).collect();
    assert!(WarpedMetric::tabulated(3, 1.0, samples).is_err());
}
