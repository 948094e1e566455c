//! The two-time tacnode kernel written through the Airy resolvent.
//!
//! With `C = (1 + λ^{-1/2})^{1/3}` and `σ = λ^{1/2}(1 + λ^{-1/2})^{2/3} Σ`,
//!
//! ```text
//! 𝓛(u, v) = heat(u, v; τ₁, τ₂)
//!         + C λ^{1/3} ∫ b̃_{τ₁,u} b̃_{−τ₂,v}
//!         + C ∫∫ (δ + R)(x, y) 𝒜_{τ₁,u}(x) 𝒜_{−τ₂,v}(y) dx dy
//! ```
//!
//! where `𝒜 = b − λ^{1/6} A b̃`, `𝒜̃ = b̃ − λ^{-1/6} A b` and `A` is the
//! integral operator with kernel `Ai(x + y + σ)` on `(0, ∞)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::{abs, cbrt, exp, pow, sq, sqrt, PI};
use crate::operator::{AiryResolvent, Resolution};
use crate::special::airy_pair;
use crate::tail::TailSpec;
use crate::{Error, Result};

/// Below this separation two times are treated as equal.
pub const TIME_EPS: f64 = 1e-12;

/// Selects `b`/`𝒜` or `b̃`/`𝒜̃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Tilde,
}

/// A function on `(0, T)` known at `0` and at the quadrature nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct ScriptA {
    pub at_zero: f64,
    pub nodes: Vec<f64>,
}

/// `−1[τ₁<τ₂] (4π(τ₂−τ₁))^{-1/2} exp(−(v−u)²/(4(τ₂−τ₁)))`.
pub fn heat_term(tau1: f64, tau2: f64, u: f64, v: f64) -> f64 {
    let dt = tau2 - tau1;
    if dt < TIME_EPS {
        return 0.0;
    }
    -exp(-sq(v - u) / (4.0 * dt)) / sqrt(4.0 * PI * dt)
}

/// `C = (1 + λ^{-1/2})^{1/3}`.
pub fn fv_c(lambda: f64) -> f64 {
    cbrt(1.0 + 1.0 / sqrt(lambda))
}

/// `σ` from `Σ`.
pub fn sigma_from_big(lambda: f64, big_sigma: f64) -> f64 {
    let c = fv_c(lambda);
    sqrt(lambda) * c * c * big_sigma
}

/// `Σ` from `σ`.
pub fn big_from_sigma(lambda: f64, sigma: f64) -> f64 {
    let c = fv_c(lambda);
    sigma / (sqrt(lambda) * c * c)
}

#[derive(Clone, Debug)]
pub struct FvParams {
    lambda: f64,
    big_sigma: f64,
    tau1: f64,
    tau2: f64,
    c: f64,
    l6: f64,
    res: Arc<AiryResolvent>,
}

/// Nodal data attached to one kernel argument, reused across a grid.
struct Side {
    bt: Vec<f64>,
    script: Vec<f64>,
}

impl FvParams {
    pub fn new(
        lambda: f64,
        big_sigma: f64,
        tau1: f64,
        tau2: f64,
        res: &Resolution,
    ) -> Result<Self> {
        check(lambda, tau1, tau2)?;
        if !big_sigma.is_finite() {
            return Err(Error::Parameter("Sigma must be finite"));
        }
        let r = AiryResolvent::build(sigma_from_big(lambda, big_sigma), res)?;
        Self::assemble(lambda, big_sigma, tau1, tau2, Arc::new(r))
    }

    pub fn from_sigma(
        lambda: f64,
        sigma: f64,
        tau1: f64,
        tau2: f64,
        res: &Resolution,
    ) -> Result<Self> {
        check(lambda, tau1, tau2)?;
        let r = AiryResolvent::build(sigma, res)?;
        Self::assemble(
            lambda,
            big_from_sigma(lambda, sigma),
            tau1,
            tau2,
            Arc::new(r),
        )
    }

    /// Single-time parameters (`τ₁ = τ₂ = τ`).
    pub fn single_time(lambda: f64, big_sigma: f64, tau: f64, res: &Resolution) -> Result<Self> {
        Self::new(lambda, big_sigma, tau, tau, res)
    }

    /// Attach an existing resolvent, whose σ must match `Σ`.
    pub fn with_resolvent(
        lambda: f64,
        big_sigma: f64,
        tau1: f64,
        tau2: f64,
        res: Arc<AiryResolvent>,
    ) -> Result<Self> {
        check(lambda, tau1, tau2)?;
        let sigma = sigma_from_big(lambda, big_sigma);
        if abs(sigma - res.sigma()) > 1e-12 * sigma.abs().max(1.0) {
            return Err(Error::MismatchedParams(
                "resolvent sigma does not match Sigma",
            ));
        }
        Self::assemble(lambda, big_sigma, tau1, tau2, res)
    }

    fn assemble(
        lambda: f64,
        big_sigma: f64,
        tau1: f64,
        tau2: f64,
        res: Arc<AiryResolvent>,
    ) -> Result<Self> {
        Ok(FvParams {
            lambda,
            big_sigma,
            tau1,
            tau2,
            c: fv_c(lambda),
            l6: pow(lambda, 1.0 / 6.0),
            res,
        })
    }

    /// Same λ and times at a different `σ` (shares nothing).
    pub fn at_sigma(&self, sigma: f64) -> Result<Self> {
        let r = AiryResolvent::build(sigma, &self.res.resolution())?;
        Self::assemble(
            self.lambda,
            big_from_sigma(self.lambda, sigma),
            self.tau1,
            self.tau2,
            Arc::new(r),
        )
    }

    /// Same σ and resolvent with other times.
    pub fn with_times(&self, tau1: f64, tau2: f64) -> Result<Self> {
        check(self.lambda, tau1, tau2)?;
        Self::assemble(self.lambda, self.big_sigma, tau1, tau2, self.res.clone())
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn big_sigma(&self) -> f64 {
        self.big_sigma
    }
    pub fn sigma(&self) -> f64 {
        self.res.sigma()
    }
    pub fn tau1(&self) -> f64 {
        self.tau1
    }
    pub fn tau2(&self) -> f64 {
        self.tau2
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn resolvent(&self) -> &AiryResolvent {
        &self.res
    }
    pub fn shared_resolvent(&self) -> Arc<AiryResolvent> {
        self.res.clone()
    }
    pub fn is_single_time(&self) -> bool {
        abs(self.tau2 - self.tau1) < TIME_EPS
    }

    /// `b_{τ,z}(x)` or `b̃_{τ,z}(x)`.
    pub fn b(&self, variant: Variant, tau: f64, z: f64, x: f64) -> f64 {
        let lam = self.lambda;
        let t2 = tau * tau;
        match variant {
            Variant::Plain => {
                let y = z + self.c * x + self.big_sigma + t2;
                exp(-tau * y + tau * t2 / 3.0) * airy_pair(y).0
            }
            Variant::Tilde => {
                let sl = sqrt(lam);
                let y = -z + self.c * x + sl * (self.big_sigma + t2);
                exp(-sl * tau * y + lam * tau * t2 / 3.0) * airy_pair(self.l6 * y).0
            }
        }
    }

    fn b_nodes(&self, variant: Variant, tau: f64, z: f64) -> Vec<f64> {
        self.res
            .nodes()
            .iter()
            .map(|&x| self.b(variant, tau, z, x))
            .collect()
    }

    fn factor(&self, variant: Variant) -> f64 {
        match variant {
            Variant::Plain => self.l6,
            Variant::Tilde => 1.0 / self.l6,
        }
    }

    fn other(variant: Variant) -> Variant {
        match variant {
            Variant::Plain => Variant::Tilde,
            Variant::Tilde => Variant::Plain,
        }
    }

    /// `𝒜_{τ,z}` (`Plain`) or `𝒜̃_{τ,z}` (`Tilde`) at `0` and at the nodes.
    pub fn script_a(&self, variant: Variant, tau: f64, z: f64) -> ScriptA {
        let own = self.b_nodes(variant, tau, z);
        let other = self.b_nodes(Self::other(variant), tau, z);
        self.script_from(variant, tau, z, own, &other)
    }

    fn script_from(
        &self,
        variant: Variant,
        tau: f64,
        z: f64,
        own: Vec<f64>,
        other: &[f64],
    ) -> ScriptA {
        let k = self.factor(variant);
        let smooth = self.res.smooth(other);
        let at_zero = self.b(variant, tau, z, 0.0) - k * self.res.smooth_at_zero(other);
        let nodes = own.iter().zip(&smooth).map(|(b, a)| b - k * a).collect();
        ScriptA { at_zero, nodes }
    }

    /// `𝒜` or `𝒜̃` at an arbitrary `x ≥ 0`.
    pub fn script_a_at(&self, variant: Variant, tau: f64, z: f64, x: f64) -> f64 {
        let other = self.b_nodes(Self::other(variant), tau, z);
        self.b(variant, tau, z, x) - self.factor(variant) * self.res.smooth_at(x, &other)
    }

    /// `(p̂₁, p̂₂) = (∫(δ+R)(x,0) 𝒜̃(x) dx, ∫(δ+R)(x,0) 𝒜(x) dx)`.
    pub fn phat(&self, tau: f64, z: f64) -> (f64, f64) {
        let at = self.script_a(Variant::Tilde, tau, z);
        let a = self.script_a(Variant::Plain, tau, z);
        (
            self.res.apply_r0_values(at.at_zero, &at.nodes),
            self.res.apply_r0_values(a.at_zero, &a.nodes),
        )
    }

    /// The same pair written with `Q`: `p̂₁ = b̃(0) − λ^{-1/6} ∫ Q 𝒜`,
    /// `p̂₂ = b(0) − λ^{1/6} ∫ Q 𝒜̃`.
    pub fn phat_via_q(&self, tau: f64, z: f64) -> (f64, f64) {
        let at = self.script_a(Variant::Tilde, tau, z);
        let a = self.script_a(Variant::Plain, tau, z);
        let q = self.res.qvec();
        (
            self.b(Variant::Tilde, tau, z, 0.0) - self.res.weighted_dot(q, &a.nodes) / self.l6,
            self.b(Variant::Plain, tau, z, 0.0) - self.l6 * self.res.weighted_dot(q, &at.nodes),
        )
    }

    fn left(&self, u: f64) -> Side {
        let bt = self.b_nodes(Variant::Tilde, self.tau1, u);
        let b = self.b_nodes(Variant::Plain, self.tau1, u);
        let script = self.script_from(Variant::Plain, self.tau1, u, b, &bt).nodes;
        Side { bt, script }
    }

    fn right(&self, v: f64) -> Side {
        let bt = self.b_nodes(Variant::Tilde, -self.tau2, v);
        let b = self.b_nodes(Variant::Plain, -self.tau2, v);
        let script = self
            .script_from(Variant::Plain, -self.tau2, v, b, &bt)
            .nodes;
        Side {
            bt,
            script: self.res.solve_unchecked(&script),
        }
    }

    fn combine(&self, u: f64, v: f64, l: &Side, r: &Side) -> f64 {
        let l3 = self.l6 * self.l6;
        heat_term(self.tau1, self.tau2, u, v)
            + self.c * l3 * self.res.weighted_dot(&l.bt, &r.bt)
            + self.c * self.res.weighted_dot(&l.script, &r.script)
    }

    /// `𝓛(u, v; σ, τ₁, τ₂)`.
    pub fn kernel(&self, u: f64, v: f64) -> f64 {
        self.combine(u, v, &self.left(u), &self.right(v))
    }

    /// Row-major `𝓛(us[i], vs[j])`, bit-identical to calling [`kernel`](Self::kernel)
    /// cell by cell.
    pub fn kernel_matrix(&self, us: &[f64], vs: &[f64]) -> Vec<f64> {
        let rights: Vec<Side> = vs.iter().map(|&v| self.right(v)).collect();
        let mut out = Vec::with_capacity(us.len() * vs.len());
        for &u in us {
            let l = self.left(u);
            for (j, &v) in vs.iter().enumerate() {
                out.push(self.combine(u, v, &l, &rights[j]));
            }
        }
        out
    }

    /// Six-term expansion of the single-time kernel, with every `𝒜` expanded
    /// into `b` and `A b̃`.
    pub fn kernel_sixterm(&self, u: f64, v: f64) -> Result<f64> {
        if !self.is_single_time() {
            return Err(Error::MultiTimeUnsupported);
        }
        let tau = self.tau1;
        let r = &*self.res;
        let bu = self.b_nodes(Variant::Plain, tau, u);
        let bv = self.b_nodes(Variant::Plain, -tau, v);
        let btu = self.b_nodes(Variant::Tilde, tau, u);
        let btv = self.b_nodes(Variant::Tilde, -tau, v);
        let (abu, abv, abtu, abtv) = (r.smooth(&bu), r.smooth(&bv), r.smooth(&btu), r.smooth(&btv));
        let l6 = self.l6;
        let l3 = l6 * l6;
        let sum = r.weighted_dot(&bu, &bv) + r.double_integral(&abu, &abv)
            - l6 * r.double_integral(&abu, &btv)
            + l3 * r.weighted_dot(&btu, &btv)
            + l3 * r.double_integral(&abtu, &abtv)
            - l6 * r.double_integral(&abtu, &bv);
        Ok(self.c * sum)
    }

    /// `∂𝓛/∂σ = −C^{-2}(λ^{1/3} p̂₁(u;τ₁) p̂₁(v;−τ₂) + λ^{-1/2} p̂₂(u;τ₁) p̂₂(v;−τ₂))`.
    pub fn kernel_dsigma(&self, u: f64, v: f64) -> f64 {
        let (p1u, p2u) = self.phat(self.tau1, u);
        let (p1v, p2v) = self.phat(-self.tau2, v);
        self.rank_two(p1u, p2u, p1v, p2v)
    }

    fn rank_two(&self, p1u: f64, p2u: f64, p1v: f64, p2v: f64) -> f64 {
        let l3 = self.l6 * self.l6;
        -(l3 * p1u * p1v + p2u * p2v / sqrt(self.lambda)) / (self.c * self.c)
    }

    /// `heat + ∫_σ^{σ+S} (−∂𝓛/∂s) ds`, rebuilding the resolvent at each node.
    pub fn kernel_tail(&self, u: f64, v: f64, tail: &TailSpec) -> Result<f64> {
        Ok(self.kernel_tail_matrix(&[u], &[v], tail)?[0])
    }

    /// Row-major tail-form kernel on `us × vs`; each shifted resolvent is
    /// built once for the whole grid.
    pub fn kernel_tail_matrix(&self, us: &[f64], vs: &[f64], tail: &TailSpec) -> Result<Vec<f64>> {
        let n = us.len() * vs.len();
        let mut pu = vec![(0.0, 0.0); us.len()];
        let mut pv = vec![(0.0, 0.0); vs.len()];
        let integral = tail.integrate_many(self.sigma(), n, |s, out| {
            let p = self.at_sigma(s)?;
            for (slot, &u) in pu.iter_mut().zip(us) {
                *slot = p.phat(p.tau1, u);
            }
            for (slot, &v) in pv.iter_mut().zip(vs) {
                *slot = p.phat(-p.tau2, v);
            }
            for (i, a) in pu.iter().enumerate() {
                for (j, b) in pv.iter().enumerate() {
                    out[i * vs.len() + j] = -p.rank_two(a.0, a.1, b.0, b.1);
                }
            }
            Ok(())
        })?;
        let mut out = Vec::with_capacity(n);
        for &u in us {
            for &v in vs {
                out.push(heat_term(self.tau1, self.tau2, u, v) + integral[out.len()]);
            }
        }
        Ok(out)
    }
}

fn check(lambda: f64, tau1: f64, tau2: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Parameter("lambda must be positive"));
    }
    if !(tau1.is_finite() && tau2.is_finite()) {
        return Err(Error::Parameter("times must be finite"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(lambda: f64, big: f64, tau: f64) -> FvParams {
        FvParams::single_time(lambda, big, tau, &Resolution::default()).unwrap()
    }

    #[test]
    fn lambda_one_constants() {
        assert!((fv_c(1.0) - cbrt(2.0)).abs() < 1e-15);
        assert!((sigma_from_big(1.0, 1.0) - pow(2.0, 2.0 / 3.0)).abs() < 1e-15);
        assert!((big_from_sigma(2.0, sigma_from_big(2.0, 0.7)) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_lambda() {
        assert!(matches!(
            FvParams::new(0.0, 1.0, 0.0, 0.0, &Resolution::default()),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            FvParams::new(-1.0, 1.0, 0.0, 0.0, &Resolution::default()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn b_at_lambda_one_reflects() {
        let p = fv(1.0, 0.4, 0.3);
        for &(z, x) in &[(0.5, 0.0), (-1.0, 2.0), (0.3, 7.5)] {
            assert!(
                (p.b(Variant::Tilde, 0.3, z, x) - p.b(Variant::Plain, 0.3, -z, x)).abs() < 1e-15
            );
        }
    }

    #[test]
    fn script_a_reflection_at_lambda_one() {
        let p = fv(1.0, 1.0, 0.2);
        let a = p.script_a(Variant::Tilde, 0.2, 0.7);
        let b = p.script_a(Variant::Plain, 0.2, -0.7);
        assert!((a.at_zero - b.at_zero).abs() < 1e-13);
        for (x, y) in a.nodes.iter().zip(&b.nodes) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn single_time_symmetry() {
        let p = fv(2.0, 0.5, 0.3);
        let q = p.with_times(-0.3, -0.3).unwrap();
        for &(u, v) in &[(0.2, -0.9), (1.0, 0.4)] {
            assert!((p.kernel(u, v) - q.kernel(v, u)).abs() < 1e-12);
        }
    }

    #[test]
    fn sixterm_matches_compact() {
        let p = fv(2.0, 0.5, 0.3);
        let d = p.kernel_sixterm(0.7, -0.2).unwrap() - p.kernel(0.7, -0.2);
        assert!(d.abs() < 1e-12);
        let m = p.with_times(0.1, 0.4).unwrap();
        assert_eq!(m.kernel_sixterm(0.0, 0.0), Err(Error::MultiTimeUnsupported));
    }

    #[test]
    fn heat_term_indicator() {
        assert_eq!(heat_term(0.2, 0.2, 0.0, 1.0), 0.0);
        assert_eq!(heat_term(0.3, 0.2, 0.0, 1.0), 0.0);
        assert_eq!(heat_term(0.2, 0.2 + 1e-13, 0.0, 0.0), 0.0);
        let h = heat_term(0.0, 0.25, 0.0, 0.0);
        assert!((h + 1.0 / sqrt(PI)).abs() < 1e-15);
    }

    #[test]
    fn matrix_is_bit_identical_to_cells() {
        let p = FvParams::new(1.5, 0.2, -0.1, 0.3, &Resolution::default()).unwrap();
        let us = [-1.0, 0.5];
        let vs = [0.0, 0.25, 2.0];
        let m = p.kernel_matrix(&us, &vs);
        for (i, &u) in us.iter().enumerate() {
            for (j, &v) in vs.iter().enumerate() {
                assert_eq!(m[i * 3 + j].to_bits(), p.kernel(u, v).to_bits());
            }
        }
    }

    #[test]
    fn phat_forms_agree() {
        let p = fv(2.0, 0.5, 0.3);
        let (a1, a2) = p.phat(0.3, -0.4);
        let (b1, b2) = p.phat_via_q(0.3, -0.4);
        assert!((a1 - b1).abs() < 1e-10 && (a2 - b2).abs() < 1e-10);
    }

    #[test]
    fn mismatched_resolvent_rejected() {
        let p = fv(1.0, 1.0, 0.0);
        let e = FvParams::with_resolvent(1.0, 0.5, 0.0, 0.0, p.shared_resolvent()).unwrap_err();
        assert!(matches!(e, Error::MismatchedParams(_)));
        assert!(FvParams::with_resolvent(1.0, 1.0, 0.2, 0.2, p.shared_resolvent()).is_ok());
    }
}
