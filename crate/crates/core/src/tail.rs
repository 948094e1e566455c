//! Truncated tail integrals `∫_σ^{σ+S} … ds` used by the integrated forms
//! of the tacnode kernel.

use crate::math::abs;
use crate::special::{affine_map_rule, gauss_legendre_rule};
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

/// Span `S`, Gauss–Legendre order, and the truncation gate: the integral is
/// rejected when `|integrand at the last node| > gate · |integral|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSpec {
    pub span: f64,
    pub nodes: usize,
    pub gate: f64,
}

impl Default for TailSpec {
    fn default() -> Self {
        TailSpec {
            span: 8.0,
            nodes: 40,
            gate: 1e-4,
        }
    }
}

impl TailSpec {
    pub fn new(span: f64, nodes: usize, gate: f64) -> Result<Self> {
        if !(span > 0.0 && span.is_finite()) || nodes == 0 || !(gate > 0.0) {
            return Err(Error::Parameter(
                "tail span, order and gate must be positive",
            ));
        }
        Ok(TailSpec { span, nodes, gate })
    }

    /// Integrate `f` over `(start, start + span)`.
    pub fn integrate<F>(&self, start: f64, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let rule = affine_map_rule(&gauss_legendre_rule(self.nodes)?, start, start + self.span)?;
        let mut acc = 0.0;
        let mut last = 0.0;
        for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
            last = f(s)?;
            acc += w * last;
        }
        if abs(last) > self.gate * abs(acc) {
            let ratio = if acc == 0.0 {
                f64::INFINITY
            } else {
                abs(last / acc)
            };
            return Err(Error::TruncationInsufficient {
                what: "tail span",
                ratio,
            });
        }
        Ok(acc)
    }

    /// Integrate `n` functions at once; `f(s, out)` fills all `n` values at
    /// node `s`. The gate applies to each entry separately.
    pub fn integrate_many<F>(&self, start: f64, n: usize, mut f: F) -> Result<Vec<f64>>
    where
        F: FnMut(f64, &mut [f64]) -> Result<()>,
    {
        let rule = affine_map_rule(&gauss_legendre_rule(self.nodes)?, start, start + self.span)?;
        let mut acc = vec![0.0; n];
        let mut last = vec![0.0; n];
        for (&s, &w) in rule.nodes().iter().zip(rule.weights()) {
            f(s, &mut last)?;
            for (a, l) in acc.iter_mut().zip(&last) {
                *a += w * l;
            }
        }
        for (a, l) in acc.iter().zip(&last) {
            if abs(*l) > self.gate * abs(*a) {
                let ratio = if *a == 0.0 { f64::INFINITY } else { abs(l / a) };
                return Err(Error::TruncationInsufficient {
                    what: "tail span",
                    ratio,
                });
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_decaying_function() {
        let t = TailSpec::new(20.0, 40, 1e-6).unwrap();
        let v = t.integrate(1.0, |s| Ok(libm::exp(-2.0 * s))).unwrap();
        assert!((v - 0.5 * (libm::exp(-2.0) - libm::exp(-42.0))).abs() < 1e-15);
    }

    #[test]
    fn gate_rejects_slow_decay() {
        let t = TailSpec::default();
        let e = t.integrate(0.0, |s| Ok(1.0 / (1.0 + s))).unwrap_err();
        assert!(matches!(e, Error::TruncationInsufficient { .. }));
    }

    #[test]
    fn many_matches_single() {
        let t = TailSpec::new(20.0, 40, 1e-6).unwrap();
        let v = t
            .integrate_many(1.0, 2, |s, out| {
                out[0] = libm::exp(-2.0 * s);
                out[1] = libm::exp(-3.0 * s);
                Ok(())
            })
            .unwrap();
        assert_eq!(v[0], t.integrate(1.0, |s| Ok(libm::exp(-2.0 * s))).unwrap());
        assert_eq!(v[1], t.integrate(1.0, |s| Ok(libm::exp(-3.0 * s))).unwrap());
    }

    #[test]
    fn bad_spec() {
        assert!(TailSpec::new(0.0, 4, 1e-4).is_err());
        assert!(TailSpec::new(1.0, 0, 1e-4).is_err());
    }
}
