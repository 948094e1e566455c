//! Gauss–Legendre rules by Newton iteration on the three-term recurrence.

use alloc::vec::Vec;

use crate::math::{abs, cos, PI};
use crate::{Error, Result};

/// Nodes and weights for an `n`-point rule on a finite interval.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: (f64, f64),
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(*x);
        }
        acc
    }
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The `m`-point Gauss–Legendre rule on `(-1, 1)`, nodes ascending.
pub fn gauss_legendre_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::Parameter("quadrature order must be at least 1"));
    }
    let mut nodes = alloc::vec![0.0; m];
    let mut weights = alloc::vec![0.0; m];
    if m == 1 {
        weights[0] = 2.0;
        return Ok(QuadratureRule {
            nodes,
            weights,
            interval: (-1.0, 1.0),
        });
    }
    let mf = m as f64;
    let half = m.div_ceil(2);
    for i in 0..half {
        // Tricomi's initial guess for the (i+1)-th largest root.
        let k = i as f64 + 1.0;
        let theta = PI * (k - 0.25) / (mf + 0.5);
        let mut x = (1.0 - (mf - 1.0) / (8.0 * mf * mf * mf)) * cos(theta);
        for _ in 0..100 {
            let (p, d) = legendre(m, x);
            let dx = p / d;
            x -= dx;
            if abs(dx) <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[m - 1 - i] = x;
        weights[m - 1 - i] = w;
        nodes[i] = -x;
        weights[i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        interval: (-1.0, 1.0),
    })
}

/// Map `rule` affinely onto `(a, b)`.
pub fn affine_map_rule(rule: &QuadratureRule, a: f64, b: f64) -> Result<QuadratureRule> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Parameter("quadrature interval must satisfy a < b"));
    }
    let (c, d) = rule.interval;
    let scale = (b - a) / (d - c);
    let nodes = rule.nodes.iter().map(|t| a + (t - c) * scale).collect();
    let weights = rule.weights.iter().map(|w| w * scale).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        interval: (a, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weights_sum_to_two() {
        for &m in &[1usize, 2, 3, 7, 40, 80, 2000] {
            let r = gauss_legendre_rule(m).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13 * 2.0, "m={m}: {s}");
        }
    }

    #[test]
    fn three_point_rule_is_exact() {
        let r = gauss_legendre_rule(3).unwrap();
        let x = (0.6f64).sqrt();
        assert!((r.nodes()[0] + x).abs() < 1e-16);
        assert_eq!(r.nodes()[1], 0.0);
        assert!((r.weights()[0] - 5.0 / 9.0).abs() < 1e-15);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_ascending_and_symmetric() {
        let r = gauss_legendre_rule(81).unwrap();
        for w in r.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..81 {
            assert_eq!(r.nodes()[i], -r.nodes()[80 - i]);
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(gauss_legendre_rule(0), Err(Error::Parameter(_))));
    }

    #[test]
    fn affine_map_integrates_on_new_interval() {
        let r = affine_map_rule(&gauss_legendre_rule(20).unwrap(), 0.0, 16.0).unwrap();
        let v = r.integrate(|x| libm::exp(-x));
        assert!((v - (1.0 - libm::exp(-16.0))).abs() < 1e-14);
        assert!(affine_map_rule(&r, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn exact_for_polynomials_up_to_degree_2m_minus_1(
            m in 1usize..30,
            coeffs in proptest::collection::vec(-3.0f64..3.0, 60),
        ) {
            let r = gauss_legendre_rule(m).unwrap();
            let deg = 2 * m - 1;
            let c = &coeffs[..=deg];
            let got = r.integrate(|x| c.iter().rev().fold(0.0, |acc, a| acc * x + a));
            let exact: f64 = c
                .iter()
                .enumerate()
                .map(|(k, a)| if k % 2 == 0 { 2.0 * a / (k as f64 + 1.0) } else { 0.0 })
                .sum();
            let scale: f64 = c.iter().map(|a| a.abs()).sum::<f64>().max(1.0);
            prop_assert!((got - exact).abs() < 1e-12 * scale);
        }
    }
}
