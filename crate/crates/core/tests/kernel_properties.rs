use std::sync::OnceLock;

use proptest::prelude::*;
use tacnode_core::{FvParams, Resolution};

fn base() -> &'static FvParams {
    static P: OnceLock<FvParams> = OnceLock::new();
    P.get_or_init(|| FvParams::single_time(1.0, 0.6, 0.0, &Resolution::default()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn time_reversal_swaps_arguments(u in -3.0f64..3.0, v in -3.0f64..3.0, t1 in -0.5f64..0.5, t2 in -0.5f64..0.5) {
        let p = base().with_times(t1, t2).unwrap();
        let q = base().with_times(-t2, -t1).unwrap();
        prop_assert!((p.kernel(u, v) - q.kernel(v, u)).abs() < 1e-10);
    }

    #[test]
    fn unit_lambda_reflection(u in -3.0f64..3.0, v in -3.0f64..3.0) {
        let p = base();
        prop_assert!((p.kernel(u, v) - p.kernel(-u, -v)).abs() < 1e-9);
    }

    #[test]
    fn heat_term_only_forward_in_time(u in -2.0f64..2.0, v in -2.0f64..2.0, dt in 0.01f64..0.5) {
        prop_assert!(tacnode_core::tacnode::heat_term(0.0, dt, u, v) < 0.0);
        prop_assert_eq!(tacnode_core::tacnode::heat_term(dt, 0.0, u, v), 0.0);
    }
}
