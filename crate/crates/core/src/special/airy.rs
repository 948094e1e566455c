//! Airy function `Ai` and its derivative on the real line.
//!
//! Three regimes:
//! * `-9 ≤ x ≤ 2`: Maclaurin series summed in double-double arithmetic, so
//!   the cancellation for negative `x` costs nothing visible in the result.
//! * `x > 2`: `Ai` and `Ai'` through `K_{1/3}` and `K_{2/3}`, each written as
//!   `e^{-ζ} ∫_0^∞ exp(-2ζ sinh²(t/2)) cosh(νt) dt` and summed by the
//!   trapezoid rule, which converges geometrically for this integrand.
//! * `x < -9`: modulus/phase asymptotic expansion truncated at its smallest
//!   term.

use super::dd::Dd;
use crate::math::{abs, cos, exp, sin, sqrt, PI};

const SERIES_LO: f64 = -9.0;
const SERIES_HI: f64 = 2.0;

/// `Ai(0)` and `-Ai'(0)` as double-double constants.
const C1: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const C2: Dd = Dd::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// `(Ai(x), Ai'(x))`.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x > SERIES_HI {
        positive(x)
    } else if x >= SERIES_LO {
        series(x)
    } else {
        oscillatory(-x)
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy_pair(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy_pair(x).1
}

fn series(x: f64) -> (f64, f64) {
    let x2 = Dd::from_f64(x).mul_f64(x);
    let x3 = x2.mul_f64(x);
    let xd = Dd::from_f64(x);

    let mut t = Dd::from_f64(1.0);
    let mut s = xd;
    let mut a = x2.div_f64(2.0);
    let mut b = Dd::from_f64(1.0);
    let mut f = t;
    let mut g = s;
    let mut fp = a;
    let mut gp = b;
    for k in 1..400 {
        let kf = k as f64;
        t = t.mul(x3).div_f64((3.0 * kf - 1.0) * (3.0 * kf));
        s = s.mul(x3).div_f64((3.0 * kf) * (3.0 * kf + 1.0));
        if k > 1 {
            a = a.mul(x3).div_f64((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
        }
        b = b.mul(x3).div_f64((3.0 * kf - 2.0) * (3.0 * kf));
        f = f.add(t);
        g = g.add(s);
        if k > 1 {
            fp = fp.add(a);
        }
        gp = gp.add(b);
        let small = |term: Dd, sum: Dd| term.abs_hi() <= 1e-34 * sum.abs_hi().max(1e-300);
        if k > 2 && small(t, f) && small(s, g) && small(a, fp) && small(b, gp) {
            break;
        }
    }
    let ai = C1.mul(f).sub(C2.mul(g));
    let aip = C1.mul(fp).sub(C2.mul(gp));
    (ai.to_f64(), aip.to_f64())
}

fn positive(x: f64) -> (f64, f64) {
    let sx = sqrt(x);
    let zeta = 2.0 / 3.0 * x * sx;
    let h = (0.5 / sqrt(zeta)).min(0.2);
    let mut i13 = 0.5;
    let mut i23 = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let e6 = exp(t / 6.0);
        let e3 = e6 * e6;
        let sh = 0.5 * (e6 * e3 - 1.0 / (e6 * e3));
        let damp = exp(-2.0 * zeta * sh * sh);
        let c13 = 0.5 * (e3 + 1.0 / e3);
        let c23 = 0.5 * (e3 * e3 + 1.0 / (e3 * e3));
        let f13 = damp * c13;
        let f23 = damp * c23;
        i13 += f13;
        i23 += f23;
        k += 1;
        if f23 < 1e-18 * i23 || k > 2000 {
            break;
        }
    }
    let ez = exp(-zeta);
    let ai = sx / (PI * sqrt(3.0)) * ez * h * i13;
    let aip = -x / (PI * sqrt(3.0)) * ez * h * i23;
    (ai, aip)
}

/// `(Ai(-z), Ai'(-z))` for `z > 9`.
fn oscillatory(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * sqrt(z);
    // Sums of (-1)^k u_{2k}/ζ^{2k} etc.
    let (mut ue, mut uo, mut ve, mut vo) = (1.0, 0.0, 1.0, 0.0);
    let mut u = 1.0;
    let mut zp = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        zp /= zeta;
        let tu = u * zp;
        let tv = v * zp;
        let size = abs(tu).max(abs(tv));
        if size >= last || size < 1e-17 {
            break;
        }
        last = size;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * tu;
            ve += sign * tv;
        } else {
            uo += sign * tu;
            vo += sign * tv;
        }
    }
    let (s, c) = (sin(zeta), cos(zeta));
    let r2 = core::f64::consts::FRAC_1_SQRT_2;
    let cm = (c + s) * r2;
    let sm = (s - c) * r2;
    let amp = 1.0 / sqrt(PI);
    let z4 = sqrt(sqrt(z));
    let ai = amp / z4 * (cm * ue + sm * uo);
    let aip = amp * z4 * (sm * ve - cm * vo);
    (ai, aip)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        let (a, ap) = airy_pair(0.0);
        assert_eq!(a, 0.355_028_053_887_817_2);
        assert_eq!(ap, -0.258_819_403_792_806_8);
    }

    #[test]
    fn regimes_agree_where_they_overlap() {
        for &x in &[-9.0, -9.5, -10.5] {
            let (a, b) = series(x);
            let (c, d) = oscillatory(-x);
            assert!((a - c).abs() < 1e-14, "x={x}: {a} {c}");
            assert!((b - d).abs() < 1e-13, "x={x}: {b} {d}");
        }
        for &x in &[1.6, 2.0, 2.6] {
            let (a, b) = series(x);
            let (c, d) = positive(x);
            assert!((a / c - 1.0).abs() < 1e-14, "x={x}");
            assert!((b / d - 1.0).abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn wronskian_with_bi_free_identity() {
        // Ai'' = x Ai, checked by a fourth-order central difference of Ai'.
        for &x in &[-12.0, -8.5, -3.0, 0.7, 2.5, 7.0] {
            let h = 1e-3;
            let d = (-airy_ai_prime(x + 2.0 * h) + 8.0 * airy_ai_prime(x + h)
                - 8.0 * airy_ai_prime(x - h)
                + airy_ai_prime(x - 2.0 * h))
                / (12.0 * h);
            let scale = airy_ai(x).abs().max(airy_ai_prime(x).abs()) * x.abs().max(1.0);
            assert!((d - x * airy_ai(x)).abs() < 1e-9 * scale, "x={x}");
        }
    }

    #[test]
    fn nan_and_far_right() {
        assert!(airy_ai(f64::NAN).is_nan());
        assert_eq!(airy_ai(200.0), 0.0);
        assert!(airy_ai(60.0) > 0.0);
    }
}
