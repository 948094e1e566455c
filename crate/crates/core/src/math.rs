//! Thin re-exports of `libm` so the rest of the crate reads like std code.

pub(crate) use libm::{cbrt, cos, exp, fabs as abs, log, pow, sin, sqrt};

pub(crate) const PI: f64 = core::f64::consts::PI;

#[inline]
pub(crate) fn sq(x: f64) -> f64 {
    x * x
}
