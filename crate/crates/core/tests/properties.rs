use pathlight_core::scenarios::{probability_parabolic, probability_side};
use pathlight_core::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parabolic_probability_is_bounded(x in -0.5f64..0.5, y in -0.5f64..0.5, dz in -20.0f64..20.0, zw in 0.0f64..2e-3) {
        let spec = ParabolicSheetSpec::new(2.0, 1000.0, zw, 1e-3).unwrap();
        let p = probability_parabolic(&spec, Point3::new(x, y, 1000.0 + dz), &SamplingPlan::default()).unwrap();
        prop_assert!(p.probability >= 0.0 && p.probability <= 1.0 + 1e-9);
        prop_assert!(p.node_count > 0);
    }

    #[test]
    fn side_probability_is_bounded(x in -0.1f64..0.1, z in 1.0f64..30.0, zw in 0.0f64..2e-3) {
        let spec = SideSheetSpec::new(1.0, zw, 1e-3).unwrap();
        let p = probability_side(&spec, x, z, &SamplingPlan::default()).unwrap();
        prop_assert!(p.probability >= 0.0 && p.probability <= 1.0 + 1e-9);
    }
}
