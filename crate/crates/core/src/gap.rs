//! Gap probabilities `det(I − 𝓛)` on an interval.

use crate::linalg::lu_det;
use crate::math::sqrt;
use crate::special::{affine_map_rule, gauss_legendre_rule};
use crate::tacnode::FvParams;
use crate::{Error, Result};

/// `det(I − 𝓛)_{L²(a₁, a₂)}` by an `order`-point Nyström rule. The kernel is
/// not symmetric for `τ ≠ 0`, so the determinant is taken by pivoted LU.
pub fn gap_probability(params: &FvParams, a1: f64, a2: f64, order: usize) -> Result<f64> {
    if !(a1.is_finite() && a2.is_finite()) || a1 > a2 {
        return Err(Error::Parameter("gap interval must satisfy a1 <= a2"));
    }
    if order == 0 {
        return Err(Error::Parameter("gap quadrature order must be at least 1"));
    }
    if a1 == a2 {
        return Ok(1.0);
    }
    let rule = affine_map_rule(&gauss_legendre_rule(order)?, a1, a2)?;
    let t = rule.nodes();
    let sw: alloc::vec::Vec<f64> = rule.weights().iter().map(|&w| sqrt(w)).collect();
    let mut m = params.kernel_matrix(t, t);
    for i in 0..order {
        for j in 0..order {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i * order + j] = delta - sw[i] * m[i * order + j] * sw[j];
        }
    }
    Ok(lu_det(order, &m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Resolution;

    #[test]
    fn empty_interval_and_bad_input() {
        let p = FvParams::single_time(1.0, 1.0, 0.0, &Resolution::default()).unwrap();
        assert_eq!(gap_probability(&p, 0.3, 0.3, 10).unwrap(), 1.0);
        assert!(gap_probability(&p, 1.0, 0.0, 10).is_err());
        assert!(gap_probability(&p, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn probability_in_unit_interval() {
        let p = FvParams::single_time(1.0, 0.0, 0.0, &Resolution::default()).unwrap();
        let g = gap_probability(&p, -1.0, 1.0, 30).unwrap();
        assert!(g > 0.0 && g < 1.0, "{g}");
    }
}
