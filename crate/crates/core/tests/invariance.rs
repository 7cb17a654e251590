use std::f64::consts::PI;

use atiyah_core::atiyah::{
    atiyah_determinant_with, hopf, lift_pair, paired_lift, result_from_lifts, Chart, ChartPolicy,
    LiftTable,
};
use atiyah_core::geometry::{pair_frame, Rotation};
use atiyah_core::{apply_motion, atiyah_determinant, Complex64, Configuration, Motion, Point};
use proptest::prelude::*;

fn configuration(min_n: usize, max_n: usize) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(prop::array::uniform3(-1.0f64..1.0), min_n..=max_n).prop_filter_map(
        "points too close",
        |pts| {
            let config = Configuration::new(pts.into_iter().map(Point::from_xyz).collect()).ok()?;
            (config.min_separation() > 1e-2).then_some(config)
        },
    )
}

fn at(config: &Configuration) -> Complex64 {
    atiyah_determinant(config).unwrap().at
}

fn close(x: Complex64, y: Complex64, rel: f64) -> bool {
    (x - y).norm() <= rel * x.norm().max(y.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pair_frame_identities(config in configuration(2, 2)) {
        let f = pair_frame(&config, 0, 1).unwrap();
        let dist = config.points()[0].distance(&config.points()[1]);
        prop_assert!((f.rho - dist).abs() <= 1e-14 * dist);
        prop_assert!(f.d >= 0.0 && f.e >= 0.0);
        prop_assert!((f.d + f.e - 2.0 * f.rho).abs() <= 1e-14 * f.rho);
        prop_assert!((f.d * f.e - f.z.norm_sqr()).abs() <= 1e-13 * f.rho * f.rho);
    }

    #[test]
    fn lifts_project_back(config in configuration(2, 2)) {
        let f = pair_frame(&config, 0, 1).unwrap();
        let s = lift_pair(&f).unwrap();
        let (a, z) = hopf(s);
        prop_assert!((a - f.a).abs() <= 1e-14 * f.rho);
        prop_assert!((z - f.z).norm() <= 1e-14 * f.rho);
        let (ra, rz) = hopf(paired_lift(s));
        prop_assert!((ra + f.a).abs() <= 1e-14 * f.rho);
        prop_assert!((rz + f.z).norm() <= 1e-14 * f.rho);
        prop_assert!((s.norm_sqr() - 2.0 * f.rho).abs() <= 1e-14 * f.rho);
    }

    #[test]
    fn rigid_motion_invariance(
        config in configuration(3, 6),
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in -PI..PI,
        shift in prop::array::uniform3(-5.0f64..5.0),
    ) {
        prop_assume!(axis.iter().map(|c| c * c).sum::<f64>() > 1e-4);
        let rotation = Rotation::from_axis_angle(axis, angle).unwrap();
        let moved = apply_motion(&config, &Motion::Rotation(rotation)).unwrap();
        let moved = apply_motion(
            &moved,
            &Motion::Translation { a: shift[0], z: Complex64::new(shift[1], shift[2]) },
        )
        .unwrap();
        prop_assert!(close(at(&config), at(&moved), 1e-9));
    }

    #[test]
    fn four_point_scaling_has_exponent_six(config in configuration(4, 4), pick in 0usize..3) {
        let lambda = [0.5, 2.0, 10.0][pick];
        let scaled = apply_motion(&config, &Motion::Scale(lambda)).unwrap();
        prop_assert!(close(at(&scaled), at(&config) * lambda.powi(6), 1e-10));
    }

    #[test]
    fn reflection_conjugates(config in configuration(3, 6)) {
        let mirrored = apply_motion(&config, &Motion::Reflection { normal: [0.0, 0.0, 1.0] }).unwrap();
        prop_assert!(close(at(&mirrored), at(&config).conj(), 1e-10));
    }

    #[test]
    fn relabeling_invariance(config in configuration(3, 6), seed in any::<u64>()) {
        let n = config.len();
        let mut order: Vec<usize> = (0..n).collect();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            order.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let relabeled = config.relabeled(&order).unwrap();
        prop_assert!(close(at(&relabeled), at(&config), 1e-10));
    }

    #[test]
    fn lift_phase_invariance(config in configuration(3, 6), phases in prop::collection::vec(-PI..PI, 28)) {
        let mut lifts = LiftTable::new(&config).unwrap();
        let n = config.len();
        let mut t = phases.iter();
        for j in 0..n {
            for k in j + 1..n {
                lifts.rephase(j, k, *t.next().unwrap());
            }
        }
        let rephased = result_from_lifts(&config, &lifts);
        prop_assert!(close(rephased.at, at(&config), 1e-10));
    }

    #[test]
    fn chart_invariance(config in configuration(3, 6)) {
        let reference = at(&config);
        for chart in [Chart::A, Chart::B] {
            let forced = atiyah_determinant_with(&config, ChartPolicy::Force(chart)).unwrap();
            prop_assert!(close(forced.at, reference, 1e-10));
        }
    }

    #[test]
    fn coplanar_determinants_are_real(config in configuration(3, 6)) {
        let flat = Configuration::new(
            config.points().iter().map(|p| Point::planar(p.z)).collect(),
        );
        prop_assume!(flat.as_ref().is_ok_and(|c| c.min_separation() > 1e-2));
        let r = atiyah_determinant(&flat.unwrap()).unwrap();
        prop_assert!(r.at.im.abs() <= 1e-10 * r.at.norm());
    }
}
