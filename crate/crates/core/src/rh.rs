//! The tacnode kernel from the 4×4 Riemann–Hilbert problem, written with
//! the same Airy resolvent.
//!
//! Parameters are `r₁, r₂ > 0`, `s₁, s₂` and a time `τ`, with
//!
//! ```text
//! C = (r₁⁻² + r₂⁻²)^{1/3}
//! D = √(r₁/r₂) exp((r₁⁴ − r₂⁴)τ³/3 + 2(r₂s₂ − r₁s₁)τ)
//! σ = C⁻¹ (2(s₁/r₁ + s₂/r₂) − (r₁² + r₂²)τ²)
//! ```
//!
//! The kernel is
//! `K(u, v) = [p₃(v;−τ)p₁(u;τ) + p₄(v;−τ)p₂(u;τ) − p₁(v;−τ)p₃(u;τ) − p₂(v;−τ)p₄(u;τ)] / (2πi(u − v))`
//! and here `ip₃ = i·p₃`, `ip₄ = i·p₄` are stored so everything stays real.

use alloc::sync::Arc;

use crate::math::{abs, exp, pow, sqrt, PI};
use crate::operator::{AiryResolvent, Resolution};
use crate::special::airy_pair;
use crate::tacnode::{ScriptA, Variant};
use crate::tail::TailSpec;
use crate::{Error, Result};

/// Below this `|u − v|` the direct kernel uses its diagonal limit.
const DIAGONAL_EPS: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct RhParams {
    r1: f64,
    r2: f64,
    s1: f64,
    s2: f64,
    tau: f64,
    c: f64,
    d: f64,
    res: Arc<AiryResolvent>,
}

/// Line `s₁ = σ₁ s`, `s₂ = σ₂ s` in the `(s₁, s₂)` plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SParam {
    pub sigma1: f64,
    pub sigma2: f64,
    pub s: f64,
}

impl SParam {
    pub fn instantiate(&self, r1: f64, r2: f64, tau: f64, res: &Resolution) -> Result<RhParams> {
        RhParams::new(r1, r2, self.sigma1 * self.s, self.sigma2 * self.s, tau, res)
    }

    pub fn at(&self, s: f64) -> SParam {
        SParam { s, ..*self }
    }
}

/// `(p₁, p₂, ip₃, ip₄)` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PVector {
    pub p1: f64,
    pub p2: f64,
    pub ip3: f64,
    pub ip4: f64,
}

/// Entries of the residue matrix `M₁` that enter the compatibility equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidueEntries {
    pub d: f64,
    pub d_tilde: f64,
    pub c: f64,
    pub c_tilde: f64,
    pub b: f64,
    pub b_tilde: f64,
    pub beta: f64,
    pub beta_tilde: f64,
    pub f: f64,
    pub f_tilde: f64,
}

impl ResidueEntries {
    pub const NAMES: [&'static str; 10] = [
        "d",
        "d_tilde",
        "c",
        "c_tilde",
        "b",
        "b_tilde",
        "beta",
        "beta_tilde",
        "f",
        "f_tilde",
    ];

    pub fn values(&self) -> [f64; 10] {
        [
            self.d,
            self.d_tilde,
            self.c,
            self.c_tilde,
            self.b,
            self.b_tilde,
            self.beta,
            self.beta_tilde,
            self.f,
            self.f_tilde,
        ]
    }
}

fn constants(r1: f64, r2: f64, s1: f64, s2: f64, tau: f64) -> (f64, f64, f64) {
    let c = pow(1.0 / (r1 * r1) + 1.0 / (r2 * r2), 1.0 / 3.0);
    let d = sqrt(r1 / r2)
        * exp(
            (pow(r1, 4.0) - pow(r2, 4.0)) * tau * tau * tau / 3.0 + 2.0 * (r2 * s2 - r1 * s1) * tau
        );
    let sigma = (2.0 * (s1 / r1 + s2 / r2) - (r1 * r1 + r2 * r2) * tau * tau) / c;
    (c, d, sigma)
}

fn check(r1: f64, r2: f64, s1: f64, s2: f64, tau: f64) -> Result<()> {
    if !(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite()) {
        return Err(Error::Parameter("r1 and r2 must be positive"));
    }
    if !(s1.is_finite() && s2.is_finite() && tau.is_finite()) {
        return Err(Error::Parameter("s1, s2 and tau must be finite"));
    }
    Ok(())
}

/// `(r₁, r₂, s₁, s₂)` corresponding to resolvent-side `(λ, Σ, τ)`.
pub fn rh_params_from_fv(lambda: f64, big_sigma: f64, tau: f64) -> (f64, f64, f64, f64) {
    let r1 = pow(lambda, 0.25);
    let t = big_sigma + tau * tau;
    (r1, 1.0, 0.5 * pow(lambda, 0.75) * t, 0.5 * t)
}

/// `(σ₁, σ₂, s)` for the same correspondence.
pub fn sparam_from_fv(lambda: f64, big_sigma: f64, tau: f64) -> SParam {
    SParam {
        sigma1: pow(lambda, 0.75),
        sigma2: 1.0,
        s: 0.5 * (big_sigma + tau * tau),
    }
}

impl RhParams {
    pub fn new(r1: f64, r2: f64, s1: f64, s2: f64, tau: f64, res: &Resolution) -> Result<Self> {
        check(r1, r2, s1, s2, tau)?;
        let (c, d, sigma) = constants(r1, r2, s1, s2, tau);
        let r = AiryResolvent::build(sigma, res)?;
        Ok(RhParams {
            r1,
            r2,
            s1,
            s2,
            tau,
            c,
            d,
            res: Arc::new(r),
        })
    }

    /// Attach an existing resolvent; its σ must match.
    pub fn with_resolvent(
        r1: f64,
        r2: f64,
        s1: f64,
        s2: f64,
        tau: f64,
        res: Arc<AiryResolvent>,
    ) -> Result<Self> {
        check(r1, r2, s1, s2, tau)?;
        let (c, d, sigma) = constants(r1, r2, s1, s2, tau);
        if abs(sigma - res.sigma()) > 1e-12 * sigma.abs().max(1.0) {
            return Err(Error::MismatchedParams(
                "resolvent sigma does not match RH parameters",
            ));
        }
        Ok(RhParams {
            r1,
            r2,
            s1,
            s2,
            tau,
            c,
            d,
            res,
        })
    }

    pub fn from_fv(lambda: f64, big_sigma: f64, tau: f64, res: &Resolution) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Parameter("lambda must be positive"));
        }
        let (r1, r2, s1, s2) = rh_params_from_fv(lambda, big_sigma, tau);
        Self::new(r1, r2, s1, s2, tau, res)
    }

    /// The same parameters at `−τ`. σ only depends on `τ²`, so the resolvent
    /// is shared.
    pub fn negated(&self) -> RhParams {
        let (c, d, _) = constants(self.r1, self.r2, self.s1, self.s2, -self.tau);
        RhParams {
            tau: -self.tau,
            c,
            d,
            res: self.res.clone(),
            ..*self
        }
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }
    pub fn r2(&self) -> f64 {
        self.r2
    }
    pub fn s1(&self) -> f64 {
        self.s1
    }
    pub fn s2(&self) -> f64 {
        self.s2
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn sigma(&self) -> f64 {
        self.res.sigma()
    }
    pub fn resolvent(&self) -> &AiryResolvent {
        &self.res
    }

    /// `∂ᵏ/∂zᵏ` of `b_z(x)` (`Plain`) or `b̃_z(x)` (`Tilde`), `k ≤ 2`.
    pub fn b(&self, variant: Variant, z: f64, x: f64, order: u8) -> f64 {
        let (k, c, arg, e) = match variant {
            Variant::Plain => {
                let r = self.r2;
                let arg = pow(r, 2.0 / 3.0) * (z + self.c * x + 2.0 * self.s2 / r);
                let e =
                    sqrt(2.0 * PI) * pow(r, 1.0 / 6.0) * exp(-r * r * self.tau * (z + self.c * x));
                (-r * r * self.tau, pow(r, 2.0 / 3.0), arg, e)
            }
            Variant::Tilde => {
                let r = self.r1;
                let arg = pow(r, 2.0 / 3.0) * (-z + self.c * x + 2.0 * self.s1 / r);
                let e =
                    sqrt(2.0 * PI) * pow(r, 1.0 / 6.0) * exp(r * r * self.tau * (z - self.c * x));
                (r * r * self.tau, -pow(r, 2.0 / 3.0), arg, e)
            }
        };
        let (a, ap) = airy_pair(arg);
        match order {
            0 => e * a,
            1 => e * (k * a + c * ap),
            _ => e * (k * k * a + 2.0 * k * c * ap + c * c * arg * a),
        }
    }

    fn b_nodes(&self, variant: Variant, z: f64, order: u8) -> alloc::vec::Vec<f64> {
        self.res
            .nodes()
            .iter()
            .map(|&x| self.b(variant, z, x, order))
            .collect()
    }

    /// `∂ᵏ_z 𝒜_z` (`Plain`: `b − D·A b̃`) or `∂ᵏ_z 𝒜̃_z` (`Tilde`: `b̃ − D⁻¹·A b`).
    pub fn script_a(&self, variant: Variant, z: f64, order: u8) -> ScriptA {
        let (other, k) = match variant {
            Variant::Plain => (Variant::Tilde, self.d),
            Variant::Tilde => (Variant::Plain, 1.0 / self.d),
        };
        let own = self.b_nodes(variant, z, order);
        let oth = self.b_nodes(other, z, order);
        let smooth = self.res.smooth(&oth);
        ScriptA {
            at_zero: self.b(variant, z, 0.0, order) - k * self.res.smooth_at_zero(&oth),
            nodes: own.iter().zip(&smooth).map(|(b, a)| b - k * a).collect(),
        }
    }

    /// `𝒜_z(x)` or `𝒜̃_z(x)` at an arbitrary `x`.
    pub fn script_a_at(&self, variant: Variant, z: f64, x: f64) -> f64 {
        let (other, k) = match variant {
            Variant::Plain => (Variant::Tilde, self.d),
            Variant::Tilde => (Variant::Plain, 1.0 / self.d),
        };
        let oth = self.b_nodes(other, z, 0);
        self.b(variant, z, x, 0) - k * self.res.smooth_at(x, &oth)
    }

    /// `∂ᵏ_z (p₁, p₂)` with `p₁ = ∫(δ+R)(x,0)𝒜̃_z`, `p₂ = ∫(δ+R)(x,0)𝒜_z`.
    pub fn p(&self, z: f64, order: u8) -> (f64, f64) {
        let at = self.script_a(Variant::Tilde, z, order);
        let a = self.script_a(Variant::Plain, z, order);
        (
            self.res.apply_r0_values(at.at_zero, &at.nodes),
            self.res.apply_r0_values(a.at_zero, &a.nodes),
        )
    }

    /// `(p₁, p₂)` written with `Q`: `p₁ = b̃(0) − D⁻¹∫Q𝒜`, `p₂ = b(0) − D∫Q𝒜̃`.
    pub fn p_via_q(&self, z: f64) -> (f64, f64) {
        let at = self.script_a(Variant::Tilde, z, 0);
        let a = self.script_a(Variant::Plain, z, 0);
        let q = self.res.qvec();
        (
            self.b(Variant::Tilde, z, 0.0, 0) - self.res.weighted_dot(q, &a.nodes) / self.d,
            self.b(Variant::Plain, z, 0.0, 0) - self.d * self.res.weighted_dot(q, &at.nodes),
        )
    }

    fn coeffs(&self) -> (f64, f64, f64, f64) {
        let (q, u) = (self.res.q(), self.res.u());
        let a1 = u / self.c - self.s1 * self.s1 + self.r1 * self.r1 * self.tau;
        let a2 = u / self.c - self.s2 * self.s2 + self.r2 * self.r2 * self.tau;
        (a1, a2, q / (self.c * self.d), self.d * q / self.c)
    }

    fn assemble(&self, p: (f64, f64), dp: (f64, f64)) -> PVector {
        let (a1, a2, k12, k21) = self.coeffs();
        PVector {
            p1: p.0,
            p2: p.1,
            ip3: (dp.0 - a1 * p.0 - k12 * p.1) / self.r1,
            ip4: (dp.1 + k21 * p.0 + a2 * p.1) / self.r2,
        }
    }

    /// `(p₁, p₂, ip₃, ip₄)` at `z`.
    pub fn pvector(&self, z: f64) -> PVector {
        self.assemble(self.p(z, 0), self.p(z, 1))
    }

    /// `∂_z` of [`pvector`](Self::pvector), from analytic second derivatives.
    pub fn pvector_dz(&self, z: f64) -> PVector {
        self.assemble(self.p(z, 1), self.p(z, 2))
    }

    /// `∂ᵏ_z` of the top-left 2×2 block of `M̂`, row-major.
    pub fn m_topleft(&self, z: f64, order: u8) -> [[f64; 2]; 2] {
        let r = &*self.res;
        let bt = self.b_nodes(Variant::Tilde, z, order);
        let b = self.b_nodes(Variant::Plain, z, order);
        let m11 = r.apply_r0_values(self.b(Variant::Tilde, z, 0.0, order), &bt);
        let m22 = r.apply_r0_values(self.b(Variant::Plain, z, 0.0, order), &b);
        let m21 = -self.d * r.apply_r0_values(r.smooth_at_zero(&bt), &r.smooth(&bt));
        let m12 = -r.apply_r0_values(r.smooth_at_zero(&b), &r.smooth(&b)) / self.d;
        [[m11, m12], [m21, m22]]
    }

    /// Entries of `M₁`. `f` and `f̃` use the analytic `τ`-derivative of `d`
    /// and `d̃` at fixed `s₁, s₂`.
    pub fn residue_matrix(&self) -> ResidueEntries {
        let (r1, r2, s1, s2, tau) = (self.r1, self.r2, self.s1, self.s2, self.tau);
        let (c0, d0) = (self.c, self.d);
        let (q, u) = (self.res.q(), self.res.u());
        let qp = self.res.q_prime();
        let d = q / (r2 * c0 * d0);
        let dt = d0 * q / (r1 * c0);
        let c = (s1 * s1 - u / c0) / r1;
        let ct = (s2 * s2 - u / c0) / r2;
        let cc = c0 * c0;
        let b = (ct + tau * r2) * d - qp / (r2 * r2 * cc * d0);
        let bt = (c + tau * r1) * dt - d0 * qp / (r1 * r1 * cc);
        let beta = (ct - tau * r2) * dt - d0 * qp / (r1 * r2 * cc);
        let betat = (c - tau * r1) * d - qp / (r1 * r2 * cc * d0);
        let rr = r1 * r1 + r2 * r2;
        let dsdt = -2.0 * rr * tau / c0;
        let dlog = (pow(r1, 4.0) - pow(r2, 4.0)) * tau * tau + 2.0 * (r2 * s2 - r1 * s1);
        let dd = (qp * dsdt - q * dlog) / (r2 * c0 * d0);
        let ddt = d0 * (dlog * q + qp * dsdt) / (r1 * c0);
        let mix = -r1 * c - r2 * ct + rr * tau;
        let f = (-r2 / rr * dd + mix * b - r1 * d * d * dt + r2 * ct * ct * d - 2.0 * s2 * d) / r1;
        let ft =
            (-r1 / rr * ddt + mix * bt - r2 * dt * dt * d + r1 * c * c * dt - 2.0 * s1 * dt) / r2;
        ResidueEntries {
            d,
            d_tilde: dt,
            c,
            c_tilde: ct,
            b,
            b_tilde: bt,
            beta,
            beta_tilde: betat,
            f,
            f_tilde: ft,
        }
    }
}

fn check_pair(plus: &RhParams, minus: &RhParams) -> Result<()> {
    if plus.r1 != minus.r1 || plus.r2 != minus.r2 || plus.s1 != minus.s1 || plus.s2 != minus.s2 {
        return Err(Error::MismatchedParams("r1, r2, s1, s2 differ"));
    }
    if minus.tau != -plus.tau {
        return Err(Error::MismatchedParams(
            "second parameter set must carry -tau",
        ));
    }
    if plus.res.resolution() != minus.res.resolution() {
        return Err(Error::MismatchedParams("resolutions differ"));
    }
    Ok(())
}

/// `K^{tac}(u, v)` from `p₁, p₂, ip₃, ip₄` at `τ` (for `u`) and `−τ` (for `v`).
/// For `|u − v| < 1e-6` the quotient is replaced by `∂_u` of the numerator
/// at the midpoint, which is second-order accurate.
pub fn rh_kernel_direct(plus: &RhParams, minus: &RhParams, u: f64, v: f64) -> Result<f64> {
    check_pair(plus, minus)?;
    let pv = minus.pvector(v);
    if abs(u - v) < DIAGONAL_EPS {
        let w = 0.5 * (u + v);
        let du = plus.pvector_dz(w);
        let n = pv.ip3 * du.p1 + pv.ip4 * du.p2 - pv.p1 * du.ip3 - pv.p2 * du.ip4;
        return Ok(n / (2.0 * PI));
    }
    let pu = plus.pvector(u);
    let n = pv.ip3 * pu.p1 + pv.ip4 * pu.p2 - pv.p1 * pu.ip3 - pv.p2 * pu.ip4;
    Ok(n / (2.0 * PI * (u - v)))
}

/// `∂_s K^{tac}(u, v) = −(1/π)(σ₁ p₁(u;τ)p₁(v;−τ) + σ₂ p₂(u;τ)p₂(v;−τ))`
/// along the line `(s₁, s₂) = (σ₁ s, σ₂ s)`.
pub fn rh_kernel_ds(
    plus: &RhParams,
    minus: &RhParams,
    sigma1: f64,
    sigma2: f64,
    u: f64,
    v: f64,
) -> Result<f64> {
    check_pair(plus, minus)?;
    let (a1, a2) = plus.p(u, 0);
    let (b1, b2) = minus.p(v, 0);
    Ok(-(sigma1 * a1 * b1 + sigma2 * a2 * b2) / PI)
}

/// `(1/π) ∫_s^{s+S} [σ₁ p₁(u;τ)p₁(v;−τ) + σ₂ p₂(u;τ)p₂(v;−τ)] ds̃`.
#[allow(clippy::too_many_arguments)]
pub fn rh_kernel_tail(
    sp: SParam,
    r1: f64,
    r2: f64,
    tau: f64,
    u: f64,
    v: f64,
    res: &Resolution,
    tail: &TailSpec,
) -> Result<f64> {
    tail.integrate(sp.s, |s| {
        let plus = sp.at(s).instantiate(r1, r2, tau, res)?;
        let minus = plus.negated();
        Ok(-rh_kernel_ds(&plus, &minus, sp.sigma1, sp.sigma2, u, v)?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tacnode::FvParams;

    fn sym() -> RhParams {
        RhParams::new(1.0, 1.0, 0.5, 0.5, 0.0, &Resolution::default()).unwrap()
    }

    #[test]
    fn constants_for_symmetric_case() {
        let p = sym();
        assert!((p.c() - pow(2.0, 1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(p.d(), 1.0);
        assert!((p.sigma() - 2.0 / pow(2.0, 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive_r() {
        assert!(matches!(
            RhParams::new(0.0, 1.0, 0.0, 0.0, 0.0, &Resolution::default()),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn symmetric_degeneracies() {
        let m = sym().m_topleft(0.0, 0);
        assert!((m[0][0] - m[1][1]).abs() < 1e-12);
        assert!((m[0][1] - m[1][0]).abs() < 1e-12);
    }

    #[test]
    fn column_sums_give_p() {
        let p = RhParams::new(1.2, 0.9, 0.52, 0.32, 0.3, &Resolution::default()).unwrap();
        for &z in &[-1.0, 0.0, 0.8] {
            for order in 0..3 {
                let m = p.m_topleft(z, order);
                let (p1, p2) = p.p(z, order);
                assert!((p1 - m[0][0] - m[0][1]).abs() < 1e-12);
                assert!((p2 - m[1][0] - m[1][1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn analytic_z_derivative_of_b() {
        let p = RhParams::new(1.2, 0.9, 0.52, 0.32, 0.3, &Resolution::default()).unwrap();
        let h = 1e-4;
        for v in [Variant::Plain, Variant::Tilde] {
            for order in 0..2u8 {
                let fd = (p.b(v, 0.3 + h, 1.1, order) - p.b(v, 0.3 - h, 1.1, order)) / (2.0 * h);
                assert!((fd - p.b(v, 0.3, 1.1, order + 1)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn matches_resolvent_form_kernel() {
        for &(lam, big, tau) in &[(1.0, 1.0, 0.0), (2.0, 0.5, 0.3)] {
            let fv = FvParams::single_time(lam, big, tau, &Resolution::default()).unwrap();
            let plus = RhParams::from_fv(lam, big, tau, &Resolution::default()).unwrap();
            let minus = plus.negated();
            for &(u, v) in &[(0.7, -0.2), (1.0, -1.0), (0.3, 0.3)] {
                let k = rh_kernel_direct(&plus, &minus, u, v).unwrap();
                assert!(
                    (k - fv.kernel(u, v)).abs() < 1e-10,
                    "({lam},{big},{tau}) ({u},{v})"
                );
            }
        }
    }

    #[test]
    fn pair_must_carry_opposite_times() {
        let p = RhParams::new(1.2, 0.9, 0.52, 0.32, 0.3, &Resolution::default()).unwrap();
        assert!(matches!(
            rh_kernel_direct(&p, &p, 0.0, 1.0),
            Err(Error::MismatchedParams(_))
        ));
        let other = RhParams::new(1.2, 0.9, 0.5, 0.32, -0.3, &Resolution::default()).unwrap();
        assert!(matches!(
            rh_kernel_direct(&p, &other, 0.0, 1.0),
            Err(Error::MismatchedParams(_))
        ));
    }

    #[test]
    fn residue_swap_symmetry() {
        let a = RhParams::new(1.2, 0.9, 0.52, 0.32, 0.3, &Resolution::default())
            .unwrap()
            .residue_matrix();
        let b = RhParams::new(0.9, 1.2, 0.32, 0.52, 0.3, &Resolution::default())
            .unwrap()
            .residue_matrix();
        let pairs = [
            (a.d, b.d_tilde),
            (a.c, b.c_tilde),
            (a.b, b.b_tilde),
            (a.beta, b.beta_tilde),
            (a.f, b.f_tilde),
        ];
        for (x, y) in pairs {
            assert!((x - y).abs() < 1e-12, "{x} {y}");
        }
    }

    #[test]
    fn symmetric_d_is_scaled_q() {
        let p = sym();
        let e = p.residue_matrix();
        assert!((e.d - p.resolvent().q() / pow(2.0, 1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn diagonal_branch_is_continuous() {
        let plus = RhParams::from_fv(2.0, 0.5, 0.3, &Resolution::default()).unwrap();
        let minus = plus.negated();
        let on = rh_kernel_direct(&plus, &minus, 0.4, 0.4).unwrap();
        let near = rh_kernel_direct(&plus, &minus, 0.4 + 2e-6, 0.4).unwrap();
        let close = rh_kernel_direct(&plus, &minus, 0.4 + 5e-7, 0.4).unwrap();
        assert!((on - near).abs() < 1e-6);
        assert!((close - near).abs() < 1e-6);
    }
}
