//! Self-convergence: results at the default resolution against refined
//! rebuilds.

use tacnode_core::rh::{rh_kernel_direct, RhParams};
use tacnode_core::{gap_probability, AiryResolvent, FvParams, Resolution, TailSpec};

#[test]
fn tw_scalars_against_refined_rule() {
    let fine = Resolution::new(160, 24.0).unwrap();
    for s in [-3.0, 0.0, 2.0] {
        let a = AiryResolvent::build(s, &Resolution::default()).unwrap();
        let b = AiryResolvent::build(s, &fine).unwrap();
        assert!((a.q() - b.q()).abs() < 1e-9, "q at {s}");
        assert!((a.u() - b.u()).abs() < 1e-9, "u at {s}");
        assert!((a.det() - b.det()).abs() < 1e-9, "det at {s}");
    }
}

#[test]
fn kernels_against_doubled_order() {
    let coarse = Resolution::default();
    let fine = Resolution::new(160, 16.0).unwrap();
    for (l, big, tau) in [(1.0, 1.0, 0.0), (2.0, 0.5, 0.3)] {
        let a = FvParams::single_time(l, big, tau, &coarse).unwrap();
        let b = FvParams::single_time(l, big, tau, &fine).unwrap();
        let (pa, pb) = (
            RhParams::from_fv(l, big, tau, &coarse).unwrap(),
            RhParams::from_fv(l, big, tau, &fine).unwrap(),
        );
        for (u, v) in [(0.0, 0.0), (1.0, -1.0), (-1.5, 0.4)] {
            assert!((a.kernel(u, v) - b.kernel(u, v)).abs() < 1e-8);
            let ka = rh_kernel_direct(&pa, &pa.negated(), u, v).unwrap();
            let kb = rh_kernel_direct(&pb, &pb.negated(), u, v).unwrap();
            assert!((ka - kb).abs() < 1e-8);
        }
    }
}

#[test]
fn gap_against_doubled_order() {
    let p = FvParams::single_time(2.0, 0.5, 0.3, &Resolution::default()).unwrap();
    let a = gap_probability(&p, -1.0, 0.5, 60).unwrap();
    let b = gap_probability(&p, -1.0, 0.5, 120).unwrap();
    assert!((a - b).abs() < 1e-7);
}

#[test]
fn tail_against_doubled_span() {
    let p = FvParams::new(1.5, 0.2, -0.1, 0.3, &Resolution::default()).unwrap();
    let long = TailSpec::new(16.0, 80, 1e-4).unwrap();
    for (u, v) in [(0.0, 0.5), (1.0, -1.0)] {
        let a = p.kernel_tail(u, v, &TailSpec::default()).unwrap();
        let b = p.kernel_tail(u, v, &long).unwrap();
        // Two-time tails decay more slowly; the default span leaves ~1e-7.
        assert!((a - b).abs() < 1e-6);
        assert!((b - p.kernel(u, v)).abs() < 1e-12);
    }
}
