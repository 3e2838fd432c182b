use apsk_core::constellation::{box_muller_apsk, dvb_variant_apsk, square_qam};
use apsk_core::convergence::closed_form_power;
use apsk_core::{Constellation, Family, SignalPoint};
use proptest::prelude::*;
use std::f64::consts::PI;

fn family_and_n() -> impl Strategy<Value = (Family, usize)> {
    prop_oneof![
        (1usize..=40).prop_map(|n| (Family::BoxMuller, n)),
        (1usize..=20).prop_map(|n| (Family::DvbVariant, 2 * n)),
        (1usize..=40).prop_map(|n| (Family::SquareQam, n)),
    ]
}

/// Every point of `a` has a partner in `b` within `tol` per coordinate.
fn same_set(a: &[SignalPoint], b: &[SignalPoint], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| {
            b.iter()
                .any(|q| (p.x - q.x).abs() <= tol && (p.y - q.y).abs() <= tol)
        })
}

proptest! {
    #[test]
    fn cardinality_and_power((family, n) in family_and_n(), power in 0.01f64..100.0) {
        let c = Constellation::build(family, n, power).unwrap();
        prop_assert_eq!(c.len(), n * n);
        let avg = c.average_power();
        match family {
            Family::SquareQam if n > 1 => prop_assert!((avg - power).abs() <= 1e-9 * power),
            Family::SquareQam => prop_assert_eq!(avg, 0.0),
            _ => prop_assert!(avg < power),
        }
    }

    #[test]
    fn apsk_points_sit_on_their_rings((family, n) in family_and_n(), power in 0.01f64..100.0) {
        prop_assume!(family.is_apsk());
        let c = Constellation::build(family, n, power).unwrap();
        let rings = c.rings().unwrap();
        let per_ring = rings[0].points_per_ring;
        prop_assert!(rings.iter().all(|r| r.points_per_ring == per_ring));
        let us = family.radial_grid(n);
        for (k, ring) in rings.iter().enumerate() {
            prop_assert!((ring.radius * ring.radius + power * us[k].ln()).abs() <= 1e-12 * power.max(1.0) * 10.0);
            for p in &c.points()[k * per_ring..(k + 1) * per_ring] {
                prop_assert!((p.norm() - ring.radius).abs() <= 1e-9 * ring.radius);
            }
        }
    }

    #[test]
    fn scaling_equivariance(n in 1usize..30, power in 0.1f64..10.0, scale in 0.01f64..100.0) {
        let a = box_muller_apsk(n, power).unwrap();
        let b = box_muller_apsk(n, scale * power).unwrap();
        let s = scale.sqrt();
        for (p, q) in a.points().iter().zip(b.points()) {
            prop_assert!((p.x * s - q.x).abs() <= 1e-12 * q.norm().max(1e-300) * 4.0);
            prop_assert!((p.y * s - q.y).abs() <= 1e-12 * q.norm().max(1e-300) * 4.0);
        }
    }

    #[test]
    fn construction_is_deterministic((family, n) in family_and_n(), power in 0.01f64..100.0) {
        let a = Constellation::build(family, n, power).unwrap();
        let b = Constellation::build(family, n, power).unwrap();
        let bits = |c: &Constellation| c.points().iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn points_are_distinct((family, n) in family_and_n()) {
        let c = Constellation::build(family, n, 1.0).unwrap();
        if c.len() > 1 {
            prop_assert!(c.min_distance().unwrap() > 1e-6);
        }
        prop_assert!(Constellation::from_points("copy", family, n, 1.0, c.points().to_vec()).is_ok());
    }
}

#[test]
fn rotational_structure() {
    for n in 1..=16 {
        let c = box_muller_apsk(n, 1.0).unwrap();
        let r = c.rotated(2.0 * PI / n as f64);
        assert!(same_set(c.points(), r.points(), 1e-9), "box_muller n={n}");
    }
    for n in (2..=16).step_by(2) {
        let c = dvb_variant_apsk(n, 1.0).unwrap();
        let r = c.rotated(2.0 * PI / (2 * n) as f64);
        assert!(same_set(c.points(), r.points(), 1e-9), "dvb n={n}");
    }
}

#[test]
fn power_bound_and_closed_form_up_to_256() {
    for power in [0.5, 1.0, 10.0] {
        for n in 1..=256 {
            let c = box_muller_apsk(n, power).unwrap();
            let avg = c.average_power();
            assert!(avg < power, "n={n} P={power}: {avg}");
            let closed = closed_form_power(Family::BoxMuller, n, power).unwrap();
            assert!((avg - closed).abs() <= 1e-12 * closed, "n={n}: {avg} vs {closed}");
        }
    }
}

#[test]
fn qam_distance_matches_grid_step() {
    for n in 2..=12 {
        let c = square_qam(n, 1.0).unwrap();
        let d = (3.0 / (2.0 * (n * n - 1) as f64)).sqrt();
        assert!((c.min_distance().unwrap() - 2.0 * d).abs() < 1e-12);
    }
}

#[test]
fn papr_ordering_dvb_below_box_muller() {
    for n in [2, 4, 8, 16] {
        let bm = box_muller_apsk(n, 1.0).unwrap().papr().unwrap();
        let dvb = dvb_variant_apsk(n, 1.0).unwrap().papr().unwrap();
        assert!(dvb < bm, "n={n}: {dvb} vs {bm}");
    }
}
