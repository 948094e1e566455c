//! Values frozen from `tests/reference/mpmath_oracle.py` (40-digit mpmath).

#![allow(clippy::excessive_precision)]

use tacnode_core::{airy_pair, AiryResolvent, Resolution};

const AIRY: [(f64, f64, f64); 22] = [
    (-15.0, 0.27821749087082892953, 0.27237420430864202083),
    (-12.5, -0.27627456138116024823, -0.41933133041950516441),
    (-9.5, 0.31910324771912820138, -0.108095318811871239),
    (-9.0, -0.022133721547341403674, -0.97566398092633159471),
    (-7.3, 0.33577037051514727697, -0.18009580448329365985),
    (-5.0, 0.35076100902411431979, 0.32719281855444313679),
    (-3.2, -0.41744342056415137673, 0.065031146995262914081),
    (-1.0, 0.5355608832923521188, -0.010160567116645209395),
    (-0.25, 0.41872461427545292423, -0.24638918992017597303),
    (0.0, 0.35502805388781723926, -0.25881940379280679841),
    (0.5, 0.23169360648083348977, -0.22491053266468389314),
    (1.0, 0.13529241631288141552, -0.15914744129679321279),
    (1.9, 0.040594420031529502034, -0.060436781785756547),
    (2.1, 0.029952602115866522488, -0.046455994032674593872),
    (3.7, 0.0017455720006099785209, -0.0034669407490276270702),
    (4.8, 0.00017032552328643501627, -0.00038157072868873858577),
    (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
    (8.5, 1.0997009755195506509e-8, -3.2377254404476022559e-8),
    (12.0, 1.393184688875360839e-13, -4.854736554985308463e-13),
    (20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27),
    (25.0, 8.1160268246913866838e-38, -4.0660893372432810053e-37),
    (40.0, 6.3657426585529149096e-75, -4.0300179776006780423e-74),
];

/// (σ, det, q, p, u, v)
const TW: [(f64, f64, f64, f64, f64, f64); 3] = [
    (
        -2.0,
        0.41322414250512255469,
        0.98339134972780534358,
        0.78729167253108925272,
        1.0681413704096603923,
        0.086933720230576283403,
    ),
    (
        0.0,
        0.96937282835526266835,
        0.36706155154807842775,
        -0.27001131604593365563,
        0.069091380708923402389,
        -0.064980281868308621972,
    ),
    (
        2.0,
        0.99988755369830917293,
        0.034928149264595719589,
        -0.053096840575234114092,
        0.00037924175602652918107,
        -0.00060991589337018221084,
    ),
];

#[test]
fn airy_matches_high_precision_table() {
    for &(x, ai, aip) in &AIRY {
        let (a, b) = airy_pair(x);
        // On the oscillatory side relative error is measured against the
        // envelope, since a table point can sit near a zero.
        let (sa, sb) = if x < 0.0 {
            let z = -x;
            let env = 1.0 / (std::f64::consts::PI.sqrt() * z.powf(0.25));
            (ai.abs().max(env), aip.abs().max(env * z.sqrt()))
        } else {
            (ai.abs(), aip.abs())
        };
        assert!((a - ai).abs() <= 1e-12 * sa, "Ai({x}) = {a}, want {ai}");
        assert!((b - aip).abs() <= 1e-12 * sb, "Ai'({x}) = {b}, want {aip}");
    }
}

#[test]
fn tracy_widom_scalars_match_high_precision_nystrom() {
    for &(s, det, q, p, u, v) in &TW {
        let r = AiryResolvent::build(s, &Resolution::default()).unwrap();
        for (name, got, want) in [
            ("det", r.det(), det),
            ("q", r.q(), q),
            ("p", r.p(), p),
            ("u", r.u(), u),
            ("v", r.v(), v),
        ] {
            assert!(
                (got - want).abs() < 1e-13,
                "sigma={s} {name}: {got} vs {want}"
            );
        }
    }
}
