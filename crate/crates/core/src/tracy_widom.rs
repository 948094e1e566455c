//! Tracy–Widom quantities read off a resolvent.
//!
//! `q` is the Hastings–McLeod solution of `q'' = σq + 2q³`, `u` the
//! Hamiltonian `(q')² − σq² − q⁴`, and `det(I − K)` the GUE edge
//! distribution `F₂(σ)`.

use crate::operator::{AiryResolvent, Resolution};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwScalars {
    pub sigma: f64,
    pub q: f64,
    pub p: f64,
    pub u: f64,
    pub v: f64,
    pub det: f64,
}

impl TwScalars {
    pub fn q_prime(&self) -> f64 {
        self.p - self.q * self.u
    }

    /// `(q')² − σq² − q⁴`, which should equal `u`.
    pub fn hamiltonian(&self) -> f64 {
        let qp = self.q_prime();
        qp * qp - self.sigma * self.q * self.q - self.q * self.q * self.q * self.q
    }
}

pub fn tw_scalars(sigma: f64, res: &Resolution) -> Result<TwScalars> {
    Ok(AiryResolvent::build(sigma, res)?.scalars())
}

pub fn hastings_mcleod(sigma: f64, res: &Resolution) -> Result<f64> {
    Ok(tw_scalars(sigma, res)?.q)
}

pub fn hm_derivative(sigma: f64, res: &Resolution) -> Result<f64> {
    Ok(tw_scalars(sigma, res)?.q_prime())
}

pub fn hamiltonian(sigma: f64, res: &Resolution) -> Result<f64> {
    Ok(tw_scalars(sigma, res)?.u)
}

pub fn f2_det(sigma: f64, res: &Resolution) -> Result<f64> {
    Ok(tw_scalars(sigma, res)?.det)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamiltonian_matches_u() {
        for &s in &[-3.0, -1.0, 0.0, 1.5] {
            let t = tw_scalars(s, &Resolution::default()).unwrap();
            assert!((t.hamiltonian() - t.u).abs() < 1e-10, "sigma={s}");
        }
    }

    #[test]
    fn two_v_is_u_squared_minus_q_squared() {
        let t = tw_scalars(-2.5, &Resolution::default()).unwrap();
        assert!((2.0 * t.v - (t.u * t.u - t.q * t.q)).abs() < 1e-10);
    }

    #[test]
    fn decays_like_airy_on_the_right() {
        let q = hastings_mcleod(8.0, &Resolution::default()).unwrap();
        let ai = crate::airy_ai(8.0);
        assert!((q / ai - 1.0).abs() < 1e-9);
        assert!((f2_det(8.0, &Resolution::default()).unwrap() - 1.0).abs() < 1e-10);
        assert!(hm_derivative(0.0, &Resolution::default()).unwrap() < 0.0);
        assert!(hamiltonian(0.0, &Resolution::default()).unwrap() > 0.0);
    }
}
