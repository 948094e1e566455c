//! Numerical verification of the identities the library relies on.
//!
//! Every check evaluates an identity that holds exactly in the continuum at
//! fixed points and reports the largest residual against a tolerance sized
//! to the discretization and finite-difference error involved. Checks are
//! grouped into independent [`Job`]s so a caller may run them concurrently;
//! [`merge_reports`] restores the canonical order.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::singular_values;
use crate::math::{abs, exp, log, pow, sqrt, PI};
use crate::operator::{AiryResolvent, Resolution};
use crate::rh::{rh_kernel_direct, rh_kernel_ds, rh_kernel_tail, sparam_from_fv, RhParams, SParam};
use crate::special::airy_pair;
use crate::tacnode::{heat_term, FvParams, Variant};
use crate::tail::TailSpec;
use crate::Result;

/// Outcome of one identity over all its evaluation points.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    /// The identity being checked, written out.
    pub anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub points: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    pub resolution: Resolution,
    pub tail: TailSpec,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            resolution: Resolution::default(),
            tail: TailSpec::default(),
            tol_scale: 1.0,
        }
    }
}

/// `(name, identity, tolerance)` for every check the suite can emit.
pub const CHECKS: &[(&str, &str, f64)] = &[
    (
        "tw.painleve_ii",
        "q'' = σ q + 2 q³ (Hastings–McLeod solution of Painlevé II)",
        1e-5,
    ),
    ("tw.hamiltonian", "u = (q')² − σ q² − q⁴", 1e-8),
    ("tw.q_prime", "q' = p − q u", 1e-6),
    ("tw.p_prime", "p' = σ q + p u − 2 q v", 1e-6),
    ("tw.u_prime", "u' = −q²", 1e-6),
    ("tw.v_prime", "v' = −p q", 1e-6),
    ("tw.two_v", "2 v = u² − q²", 1e-9),
    (
        "tw.v_two_forms",
        "∫ Q(x) Ai'(x+σ) dx = ∫ P(x) Ai(x+σ) dx",
        1e-9,
    ),
    ("tw.log_det", "∂σ log det(I − K) = u", 1e-6),
    (
        "tw.hastings_mcleod_tail",
        "q(σ) / Ai(σ) → 1 as σ → +∞",
        1e-8,
    ),
    (
        "op.q_smoothing",
        "∫ Q b = ∫∫ (δ+R)(x,0) Ai(x+y+σ) b(y) dy dx",
        1e-9,
    ),
    (
        "op.r0_smoothing",
        "∫∫ Q(x) Ai(x+y+σ) b(y) dx dy = ∫ R(y,0) b(y) dy",
        1e-9,
    ),
    (
        "op.pde_rxy",
        "(∂x + ∂y) R(x,y) = R(x,0) R(0,y) − Q(x) Q(y)",
        1e-5,
    ),
    ("op.pde_rsigma", "∂σ R(x,y) = −Q(x) Q(y)", 1e-5),
    ("op.pde_qx", "Q'(x) = P(x) + q R(x,0) − u Q(x)", 1e-5),
    (
        "op.pde_px",
        "P'(x) = (x + σ − 2v) Q(x) + p R(x,0) + u P(x)",
        1e-5,
    ),
    (
        "fv.dsigma_fd",
        "∂σ𝓛 = −C⁻²(λ^{1/3} p̂₁(u;τ₁)p̂₁(v;−τ₂) + λ^{−1/2} p̂₂(u;τ₁)p̂₂(v;−τ₂)), relative",
        1e-5,
    ),
    ("fv.rank_two", "[∂σ𝓛(u_i, v_j)] has rank two: s₃/s₁", 1e-8),
    (
        "fv.phat_forms",
        "p̂₁ = ∫(δ+R)(x,0)𝒜̃ = b̃(0) − λ^{−1/6}∫Q𝒜, and likewise p̂₂",
        1e-9,
    ),
    (
        "fv.sixterm",
        "compact kernel = six-term expansion with b, b̃ and A b, A b̃",
        1e-8,
    ),
    ("fv.time_symmetry", "𝓛(u,v; τ₁,τ₂) = 𝓛(v,u; −τ₂,−τ₁)", 1e-10),
    (
        "fv.multi_time_reduction",
        "𝓛(u,v; τ, τ) through the two-time path equals the single-time value exactly",
        0.0,
    ),
    ("fv.heat_indicator", "heat term present iff τ₁ < τ₂", 0.0),
    ("fv.reflection", "λ = 1: 𝓛(u,v) = 𝓛(−u,−v)", 1e-9),
    ("fv.script_a_reflection", "λ = 1: 𝒜̃_{τ,z} = 𝒜_{τ,−z}", 1e-13),
    ("fv.phat_reflection", "λ = 1: p̂₁(z) = p̂₂(−z)", 1e-12),
    (
        "fv.script_a_sigma",
        "(1+λ^{−1/2})∂σ𝒜 = λ^{−1/2}∂x𝒜 + λ^{1/6} Ai(x+σ) b̃_{τ,z}(0)",
        1e-5,
    ),
    (
        "fv.tail",
        "𝓛 = heat + C⁻²∫_σ^{σ+S}(λ^{1/3}p̂₁p̂₁ + λ^{−1/2}p̂₂p̂₂) ds",
        1e-5,
    ),
    ("fv.large_sigma_script_a", "Σ = 20: 𝒜 = b", 1e-12),
    (
        "fv.large_sigma_decay",
        "Σ = 20: ∂σ𝓛 → 0, p̂₂ → b(0), six-term = compact",
        1e-10,
    ),
    ("rh.column_sum", "p₁ = M̂₁₁ + M̂₁₂, p₂ = M̂₂₁ + M̂₂₂", 1e-12),
    (
        "rh.p_ode",
        "(p₁, p₂) solve the second-order system in z (second derivative by finite differences)",
        1e-5,
    ),
    (
        "rh.column_ode",
        "(M̂₁₁, M̂₂₁) solves the second-order system in z",
        1e-5,
    ),
    (
        "rh.p_forms",
        "p₁ = ∫(δ+R)(x,0)𝒜̃ = b̃(0) − D⁻¹∫Q𝒜, and likewise p₂",
        1e-9,
    ),
    (
        "rh.b_ode",
        "r₂⁻²∂²b + 2τ∂b = (z + Cx + 2s₂/r₂ − r₂²τ²) b, and the tilde analogue",
        1e-6,
    ),
    ("rh.b_x_vs_z", "∂x b = C ∂z b, ∂x b̃ = −C ∂z b̃", 1e-8),
    ("rh.script_a_dz", "∂z𝒜 = C⁻¹(∂x𝒜 − D Ai(x+σ) b̃(0))", 1e-6),
    (
        "rh.script_a_second_order",
        "r₂⁻²∂²𝒜 + 2τ∂𝒜 = (z + Cx + 2s₂/r₂ − r₂²τ²)𝒜 + CD(Ai(x+σ)b̃'(0) − Ai'(x+σ)b̃(0))",
        1e-5,
    ),
    (
        "rh.symmetric_block",
        "r₁ = r₂, s₁ = s₂, τ = 0, z = 0: M̂₁₁ = M̂₂₂, M̂₁₂ = M̂₂₁",
        1e-12,
    ),
    (
        "rh.kernel_symmetry",
        "r₁ = r₂, s₁ = s₂, τ = 0: K(u,v) = K(v,u)",
        1e-9,
    ),
    (
        "rh.ds_rank_two",
        "∂s K = −π⁻¹(σ₁ p₁(u;τ)p₁(v;−τ) + σ₂ p₂(u;τ)p₂(v;−τ)), relative",
        1e-6,
    ),
    ("rh.rank_two", "[∂s K(u_i, v_j)] has rank two: s₃/s₁", 1e-8),
    ("rh.tail", "K = π⁻¹∫_s^{s+S}(σ₁p₁p₁ + σ₂p₂p₂) ds̃", 1e-5),
    (
        "rh.p_phat_scaling",
        "p_j = √(2π) r_j^{1/6} exp(r_j⁴τ(Σ + 2τ²/3)) p̂_j, relative",
        1e-9,
    ),
    (
        "equiv.direct",
        "𝓛(u,v) = K(u,v) under r₁ = λ^{1/4}, r₂ = 1, s_j from (Σ+τ²)/2, relative to max(1,|𝓛|)",
        1e-5,
    ),
    ("equiv.tail", "𝓛(u,v) = π⁻¹∫(σ₁p₁p₁ + σ₂p₂p₂) ds̃", 1e-5),
    (
        "equiv.diagonal",
        "𝓛(u,u) = K(u,u) through the diagonal limit, relative to max(1,|𝓛|)",
        1e-5,
    ),
    ("equiv.large_sigma_magnitude", "Σ = 20: |𝓛|, |K| → 0", 1e-10),
    ("equiv.large_sigma_difference", "Σ = 20: 𝓛 = K", 1e-12),
    (
        "compat.bbs",
        "r₂(c̃d − b) − r₁(cd − β̃) + (r₁² + r₂²)τ d = 0",
        1e-10,
    ),
    (
        "compat.swap",
        "x(r₁,r₂,s₁,s₂,τ) = x̃(r₂,r₁,s₂,s₁,τ) for d, c, b, β, f",
        1e-12,
    ),
    ("compat.s_d1", "r₁ ∂s d = 2k(c̃d − b) + 2Rσ₁τd", 1e-5),
    ("compat.s_d2", "r₂ ∂s d = 2k(cd − β̃) − 2Rσ₂τd", 1e-5),
    ("compat.s_dtil1", "r₁ ∂s d̃ = 2k(c̃d̃ − β) − 2Rσ₁τd̃", 1e-5),
    ("compat.s_dtil2", "r₂ ∂s d̃ = 2k(cd̃ − b̃) + 2Rσ₂τd̃", 1e-5),
    ("compat.s_c", "r₁ ∂s c = 2k d d̃ + 2σ₁² s", 1e-5),
    ("compat.s_ctil", "r₂ ∂s c̃ = 2k d d̃ + 2σ₂² s", 1e-5),
    (
        "compat.tau_d1",
        "r₁ ∂τ d = R(Rτβ̃ + r₁cβ̃ + r₂c̃β̃ + r₂d²d̃ − r₁c²d + 2s₁d + r₂f)",
        1e-5,
    ),
    (
        "compat.tau_d2",
        "r₂ ∂τ d = R(Rτb − r₁cb − r₂c̃b − r₁d²d̃ + r₂c̃²d − 2s₂d − r₁f)",
        1e-5,
    ),
    (
        "compat.tau_dtil1",
        "r₁ ∂τ d̃ = R(Rτb̃ − r₂c̃b̃ − r₁cb̃ − r₂d̃²d + r₁c²d̃ − 2s₁d̃ − r₂f̃)",
        1e-5,
    ),
    (
        "compat.tau_dtil2",
        "r₂ ∂τ d̃ = R(Rτβ + r₂c̃β + r₁cβ + r₁d̃²d − r₂c̃²d̃ + 2s₂d̃ + r₁f̃)",
        1e-5,
    ),
    ("compat.tau_c", "∂τ c = R(dβ − d̃b)", 1e-5),
    ("compat.tau_ctil", "∂τ c̃ = R(d̃β̃ − db̃)", 1e-5),
    (
        "compat.pii",
        "coupled second-order system in s for d, d̃",
        1e-4,
    ),
    (
        "compat.mixed",
        "∂τ d = −r₁r₂Rτ/k ∂s d + R²(σ₁r₂ − σ₂r₁)τ²/k d + 2(r₁s₁ − r₂s₂) d",
        1e-5,
    ),
    (
        "compat.symmetric_d",
        "r₁ = r₂ = 1, s₁ = s₂, τ = 0: d = 2^{−1/3} q(σ)",
        1e-14,
    ),
];

/// `(check name, identity)` for every check.
pub fn coverage_manifest() -> Vec<(&'static str, &'static str)> {
    CHECKS.iter().map(|(n, a, _)| (*n, *a)).collect()
}

fn lookup(name: &str) -> (&'static str, f64) {
    CHECKS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, a, t)| (*a, *t))
        .unwrap_or_else(|| panic!("unregistered check {name}"))
}

/// Accumulates residuals per check name, in first-use order.
struct Checks {
    scale: f64,
    items: Vec<(&'static str, f64, Vec<Vec<f64>>)>,
}

impl Checks {
    fn new(cfg: &VerifyConfig) -> Self {
        Checks {
            scale: cfg.tol_scale,
            items: Vec::new(),
        }
    }

    fn add(&mut self, name: &'static str, residual: f64, point: &[f64]) {
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            abs(residual)
        };
        let slot = match self.items.iter().position(|(n, _, _)| *n == name) {
            Some(i) => i,
            None => {
                lookup(name);
                self.items.push((name, 0.0, Vec::new()));
                self.items.len() - 1
            }
        };
        let item = &mut self.items[slot];
        if r > item.1 {
            item.1 = r;
        }
        item.2.push(point.to_vec());
    }

    fn add_result(&mut self, name: &'static str, residual: Result<f64>, point: &[f64]) {
        self.add(name, residual.unwrap_or(f64::INFINITY), point);
    }

    fn fail(&mut self, names: &[&'static str], point: &[f64]) {
        for n in names {
            self.add(n, f64::INFINITY, point);
        }
    }

    fn finish(self) -> Vec<CheckReport> {
        let scale = self.scale;
        self.items
            .into_iter()
            .map(|(name, max, points)| {
                let (anchor, tol) = lookup(name);
                let tolerance = tol * scale;
                CheckReport {
                    name: name.to_string(),
                    anchor: anchor.to_string(),
                    max_residual: max,
                    tolerance,
                    passed: max <= tolerance,
                    points,
                }
            })
            .collect()
    }
}

/// Combine reports sharing a name, keeping first-seen order.
pub fn merge_reports(reports: Vec<CheckReport>) -> Vec<CheckReport> {
    let mut out: Vec<CheckReport> = Vec::new();
    for r in reports {
        match out.iter_mut().find(|o| o.name == r.name) {
            Some(o) => {
                if r.max_residual > o.max_residual || r.max_residual.is_nan() {
                    o.max_residual = r.max_residual;
                }
                o.points.extend(r.points);
                o.passed = o.max_residual <= o.tolerance;
            }
            None => out.push(r),
        }
    }
    out
}

fn d1_5(f: &[f64; 5], h: f64) -> f64 {
    (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h)
}

fn d2_5(f: &[f64; 5], h: f64) -> f64 {
    (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h)
}

/// Central difference with one Richardson step: `(4 D(h/2) − D(h)) / 3`.
fn richardson<F: FnMut(f64) -> Result<f64>>(mut f: F, x: f64, h: f64) -> Result<f64> {
    let d = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let dh = (f(x + 0.5 * h)? - f(x - 0.5 * h)?) / h;
    Ok((4.0 * dh - d) / 3.0)
}

fn rel(a: f64, b: f64, floor: f64) -> f64 {
    abs(a - b) / abs(b).max(floor)
}

// ---------------------------------------------------------------- TW

const TW_H: f64 = 1e-2;
const FD_H: f64 = 1e-3;

/// Fractions of `m` selecting the node pairs for the resolvent PDE checks.
const PDE_PAIRS: [(f64, f64); 10] = [
    (0.05, 0.30),
    (0.10, 0.12),
    (0.15, 0.40),
    (0.20, 0.22),
    (0.25, 0.05),
    (0.30, 0.45),
    (0.35, 0.18),
    (0.40, 0.33),
    (0.45, 0.27),
    (0.50, 0.08),
];

/// Tracy–Widom and resolvent identities at each σ.
pub fn check_tw(sigmas: &[f64], cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    for &s in sigmas {
        tw_at(s, cfg, &mut c);
    }
    c.finish()
}

fn tw_at(s: f64, cfg: &VerifyConfig, c: &mut Checks) {
    let pt = [s];
    let res = &cfg.resolution;
    let builds: Result<Vec<AiryResolvent>> = [-2.0, -1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|k| AiryResolvent::build(s + k * TW_H, res))
        .collect();
    let names = [
        "tw.painleve_ii",
        "tw.hamiltonian",
        "tw.q_prime",
        "tw.p_prime",
        "tw.u_prime",
        "tw.v_prime",
        "tw.two_v",
        "tw.v_two_forms",
        "tw.log_det",
        "op.q_smoothing",
        "op.r0_smoothing",
    ];
    let builds = match builds {
        Ok(b) => b,
        Err(_) => return c.fail(&names, &pt),
    };
    let r = &builds[2];
    let t = r.scalars();
    let col = |f: fn(&AiryResolvent) -> f64| -> [f64; 5] {
        [
            f(&builds[0]),
            f(&builds[1]),
            f(&builds[2]),
            f(&builds[3]),
            f(&builds[4]),
        ]
    };
    let q = col(|r| r.q());
    let p = col(|r| r.p());
    let u = col(|r| r.u());
    let v = col(|r| r.v());
    let ld = col(|r| log(r.det()));
    c.add(
        "tw.painleve_ii",
        d2_5(&q, TW_H) - s * t.q - 2.0 * t.q * t.q * t.q,
        &pt,
    );
    c.add("tw.hamiltonian", t.u - t.hamiltonian(), &pt);
    c.add("tw.q_prime", d1_5(&q, TW_H) - (t.p - t.q * t.u), &pt);
    c.add(
        "tw.p_prime",
        d1_5(&p, TW_H) - (s * t.q + t.p * t.u - 2.0 * t.q * t.v),
        &pt,
    );
    c.add("tw.u_prime", d1_5(&u, TW_H) + t.q * t.q, &pt);
    c.add("tw.v_prime", d1_5(&v, TW_H) + t.p * t.q, &pt);
    c.add("tw.two_v", 2.0 * t.v - (t.u * t.u - t.q * t.q), &pt);
    c.add(
        "tw.v_two_forms",
        t.v - r.weighted_dot(r.pvec(), r.ai_nodes()),
        &pt,
    );
    c.add("tw.log_det", d1_5(&ld, TW_H) - t.u, &pt);

    let b: Vec<f64> = r.nodes().iter().map(|&x| exp(-x)).collect();
    let ab = r.smooth(&b);
    let lhs = r.weighted_dot(r.qvec(), &b);
    c.add(
        "op.q_smoothing",
        lhs - r.apply_r0_values(r.smooth_at_zero(&b), &ab),
        &pt,
    );
    c.add(
        "op.r0_smoothing",
        r.weighted_dot(r.qvec(), &ab) - r.weighted_dot(r.r0(), &b),
        &pt,
    );

    pde_at(r, cfg, c);
}

fn pde_at(r: &AiryResolvent, cfg: &VerifyConfig, c: &mut Checks) {
    let s = r.sigma();
    let names = ["op.pde_rxy", "op.pde_rsigma", "op.pde_qx", "op.pde_px"];
    let (rp, rm) = match (
        AiryResolvent::build(s + FD_H, &cfg.resolution),
        AiryResolvent::build(s - FD_H, &cfg.resolution),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return c.fail(&names, &[s]),
    };
    let m = r.order();
    let h = FD_H;
    let (q, p, u, v) = (r.q(), r.p(), r.u(), r.v());
    for &(a, b) in &PDE_PAIRS {
        let x = r.nodes()[(a * m as f64) as usize];
        let y = r.nodes()[(b * m as f64) as usize];
        let pt = [s, x, y];
        let dxy = (r.resolvent_kernel(x + h, y + h) - r.resolvent_kernel(x - h, y - h)) / (2.0 * h);
        let rx0 = r.resolvent_kernel(x, 0.0);
        let r0y = r.resolvent_kernel(0.0, y);
        let (qx, qy) = (r.q_at(x), r.q_at(y));
        c.add("op.pde_rxy", dxy - (rx0 * r0y - qx * qy), &pt);
        let ds = (rp.resolvent_kernel(x, y) - rm.resolvent_kernel(x, y)) / (2.0 * h);
        c.add("op.pde_rsigma", ds + qx * qy, &pt);
        let px = r.p_at(x);
        let dq = (r.q_at(x + h) - r.q_at(x - h)) / (2.0 * h);
        c.add("op.pde_qx", dq - (px + q * rx0 - u * qx), &pt);
        let dp = (r.p_at(x + h) - r.p_at(x - h)) / (2.0 * h);
        c.add(
            "op.pde_px",
            dp - ((x + s - 2.0 * v) * qx + p * rx0 + u * px),
            &pt,
        );
    }
}

/// Painlevé II residual for an arbitrary `q`, sampled on the same stencil
/// as [`check_tw`].
pub fn check_painleve_with<F>(sigmas: &[f64], q: F, cfg: &VerifyConfig) -> CheckReport
where
    F: Fn(f64) -> Result<f64>,
{
    let mut c = Checks::new(cfg);
    for &s in sigmas {
        let vals: Result<Vec<f64>> = [-2.0, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .map(|k| q(s + k * TW_H))
            .collect();
        let r = vals.map(|v| {
            let v = [v[0], v[1], v[2], v[3], v[4]];
            d2_5(&v, TW_H) - s * v[2] - 2.0 * v[2] * v[2] * v[2]
        });
        c.add_result("tw.painleve_ii", r, &[s]);
    }
    c.finish().pop().expect("at least one sigma")
}

/// `q(σ)/Ai(σ) − 1` far to the right.
pub fn check_hm_tail(sigma: f64, cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    let r = AiryResolvent::build(sigma, &cfg.resolution).map(|r| r.q() / airy_pair(sigma).0 - 1.0);
    c.add_result("tw.hastings_mcleod_tail", r, &[sigma]);
    c.finish()
}

// ---------------------------------------------------------------- FV

/// Resolvent-side parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FvSet {
    pub lambda: f64,
    pub big_sigma: f64,
    pub tau1: f64,
    pub tau2: f64,
}

impl FvSet {
    pub const fn single(lambda: f64, big_sigma: f64, tau: f64) -> Self {
        FvSet {
            lambda,
            big_sigma,
            tau1: tau,
            tau2: tau,
        }
    }

    fn build(&self, res: &Resolution) -> Result<FvParams> {
        FvParams::new(self.lambda, self.big_sigma, self.tau1, self.tau2, res)
    }

    fn coords(&self, extra: &[f64]) -> Vec<f64> {
        let mut v = vec![self.lambda, self.big_sigma, self.tau1, self.tau2];
        v.extend_from_slice(extra);
        v
    }
}

const SYM_GRID: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];
const RANK_GRID: [f64; 3] = [-1.0, 0.0, 1.0];

pub fn check_fv(sets: &[FvSet], points: &[(f64, f64)], cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    for set in sets {
        fv_set(set, points, cfg, &mut c);
    }
    c.finish()
}

fn fv_set(set: &FvSet, points: &[(f64, f64)], cfg: &VerifyConfig, c: &mut Checks) {
    let res = &cfg.resolution;
    let p = match set.build(res) {
        Ok(p) => p,
        Err(_) => return c.fail(&["fv.dsigma_fd"], &set.coords(&[])),
    };
    let sigma = p.sigma();

    // σ-derivative against the rank-two formula.
    match (p.at_sigma(sigma + FD_H), p.at_sigma(sigma - FD_H)) {
        (Ok(pp), Ok(pm)) => {
            for &(u, v) in points {
                let fd = (pp.kernel(u, v) - pm.kernel(u, v)) / (2.0 * FD_H);
                c.add(
                    "fv.dsigma_fd",
                    rel(fd, p.kernel_dsigma(u, v), 1e-12),
                    &set.coords(&[u, v]),
                );
            }
        }
        _ => c.fail(&["fv.dsigma_fd"], &set.coords(&[])),
    }

    // Rank of the finite-difference derivative matrix.
    let h = 1e-2;
    let shifted: Result<Vec<Vec<f64>>> = [h, -h, 0.5 * h, -0.5 * h]
        .iter()
        .map(|d| {
            p.at_sigma(sigma + d)
                .map(|q| q.kernel_matrix(&RANK_GRID, &RANK_GRID))
        })
        .collect();
    match shifted {
        Ok(k) => {
            let m: Vec<f64> = (0..9)
                .map(|i| {
                    let d = (k[0][i] - k[1][i]) / (2.0 * h);
                    let dh = (k[2][i] - k[3][i]) / h;
                    (4.0 * dh - d) / 3.0
                })
                .collect();
            let sv = singular_values(3, 3, &m);
            c.add("fv.rank_two", sv[2] / sv[0], &set.coords(&[]));
        }
        Err(_) => c.fail(&["fv.rank_two"], &set.coords(&[])),
    }

    for &(u, _) in points {
        let (a1, a2) = p.phat(set.tau1, u);
        let (b1, b2) = p.phat_via_q(set.tau1, u);
        c.add(
            "fv.phat_forms",
            abs(a1 - b1).max(abs(a2 - b2)),
            &set.coords(&[u]),
        );
    }

    if p.is_single_time() {
        for &(u, v) in points {
            let r = p.kernel_sixterm(u, v).map(|k| k - p.kernel(u, v));
            c.add_result("fv.sixterm", r, &set.coords(&[u, v]));
        }
    }

    if let Ok(flip) = p.with_times(-set.tau2, -set.tau1) {
        let a = p.kernel_matrix(&SYM_GRID, &SYM_GRID);
        let b = flip.kernel_matrix(&SYM_GRID, &SYM_GRID);
        for i in 0..5 {
            for j in 0..5 {
                c.add(
                    "fv.time_symmetry",
                    a[i * 5 + j] - b[j * 5 + i],
                    &set.coords(&[SYM_GRID[i], SYM_GRID[j]]),
                );
            }
        }
    }

    // Equal times through the multi-time path, and the heat-term indicator.
    let t = set.tau1;
    if let (Ok(eq), Ok(single)) = (
        p.with_times(t, t),
        FvParams::with_resolvent(set.lambda, set.big_sigma, t, t, p.shared_resolvent()),
    ) {
        for &(u, v) in points {
            let d = if eq.kernel(u, v).to_bits() == single.kernel(u, v).to_bits() {
                0.0
            } else {
                1.0
            };
            c.add("fv.multi_time_reduction", d, &set.coords(&[u, v]));
        }
    }
    for &(u, v) in points {
        let later = heat_term(t, t + 0.05, u, v) != 0.0;
        let same = heat_term(t, t, u, v) == 0.0;
        let earlier = heat_term(t + 0.05, t, u, v) == 0.0;
        c.add(
            "fv.heat_indicator",
            if later && same && earlier { 0.0 } else { 1.0 },
            &set.coords(&[u, v]),
        );
    }

    if set.lambda == 1.0 {
        let a = p.kernel_matrix(&SYM_GRID, &SYM_GRID);
        let neg: Vec<f64> = SYM_GRID.iter().map(|x| -x).collect();
        let b = p.kernel_matrix(&neg, &neg);
        for i in 0..25 {
            c.add(
                "fv.reflection",
                a[i] - b[i],
                &set.coords(&[SYM_GRID[i / 5], SYM_GRID[i % 5]]),
            );
        }
        for &(z, _) in points {
            let at = p.script_a(Variant::Tilde, t, z);
            let a = p.script_a(Variant::Plain, t, -z);
            let mut d = abs(at.at_zero - a.at_zero);
            for (x, y) in at.nodes.iter().zip(&a.nodes) {
                d = d.max(abs(x - y));
            }
            c.add("fv.script_a_reflection", d, &set.coords(&[z]));
            c.add(
                "fv.phat_reflection",
                p.phat(t, z).0 - p.phat(t, -z).1,
                &set.coords(&[z]),
            );
        }
    }

    // σ-derivative of 𝒜 at fixed x against its x-derivative.
    if let (Ok(pp), Ok(pm)) = (p.at_sigma(sigma + FD_H), p.at_sigma(sigma - FD_H)) {
        let lam = set.lambda;
        for &(z, _) in points {
            for &x in &[0.4, 1.3] {
                let ds = (pp.script_a_at(Variant::Plain, t, z, x)
                    - pm.script_a_at(Variant::Plain, t, z, x))
                    / (2.0 * FD_H);
                let dx = (p.script_a_at(Variant::Plain, t, z, x + FD_H)
                    - p.script_a_at(Variant::Plain, t, z, x - FD_H))
                    / (2.0 * FD_H);
                let lhs = (1.0 + 1.0 / sqrt(lam)) * ds;
                let rhs = dx / sqrt(lam)
                    + pow(lam, 1.0 / 6.0) * airy_pair(x + sigma).0 * p.b(Variant::Tilde, t, z, 0.0);
                c.add("fv.script_a_sigma", lhs - rhs, &set.coords(&[z, x]));
            }
        }
    }

    if let Some(&(u, v)) = points.first() {
        let r = p.kernel_tail(u, v, &cfg.tail).map(|k| k - p.kernel(u, v));
        c.add_result("fv.tail", r, &set.coords(&[u, v]));
    }
}

/// Behaviour at Σ = 20 where all resolvent and smoothing terms vanish.
pub fn check_fv_decay(
    lambda: f64,
    tau: f64,
    points: &[(f64, f64)],
    cfg: &VerifyConfig,
) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    let set = FvSet::single(lambda, 20.0, tau);
    match set.build(&cfg.resolution) {
        Ok(p) => {
            for &(u, v) in points {
                let a = p.script_a(Variant::Plain, tau, u);
                let mut d = abs(a.at_zero - p.b(Variant::Plain, tau, u, 0.0));
                for (x, &ax) in p.resolvent().nodes().iter().zip(&a.nodes) {
                    d = d.max(abs(ax - p.b(Variant::Plain, tau, u, *x)));
                }
                c.add("fv.large_sigma_script_a", d, &set.coords(&[u]));
                let six = p.kernel_sixterm(u, v).unwrap_or(f64::INFINITY);
                let decay = abs(p.kernel_dsigma(u, v))
                    .max(abs(p.phat(tau, u).1 - p.b(Variant::Plain, tau, u, 0.0)))
                    .max(abs(six - p.kernel(u, v)));
                c.add("fv.large_sigma_decay", decay, &set.coords(&[u, v]));
            }
        }
        Err(_) => c.fail(
            &["fv.large_sigma_script_a", "fv.large_sigma_decay"],
            &set.coords(&[]),
        ),
    }
    c.finish()
}

// ---------------------------------------------------------------- RH

/// Riemann–Hilbert parameter set on the line `(s₁, s₂) = (σ₁ s, σ₂ s)`,
/// optionally remembering the resolvent-side `(λ, Σ)` it came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhSet {
    pub r1: f64,
    pub r2: f64,
    pub line: SParam,
    pub tau: f64,
    pub origin: Option<(f64, f64)>,
}

impl RhSet {
    pub const fn new(r1: f64, r2: f64, sigma1: f64, sigma2: f64, s: f64, tau: f64) -> Self {
        RhSet {
            r1,
            r2,
            line: SParam { sigma1, sigma2, s },
            tau,
            origin: None,
        }
    }

    pub fn from_fv(lambda: f64, big_sigma: f64, tau: f64) -> Self {
        RhSet {
            r1: pow(lambda, 0.25),
            r2: 1.0,
            line: sparam_from_fv(lambda, big_sigma, tau),
            tau,
            origin: Some((lambda, big_sigma)),
        }
    }

    fn build(&self, res: &Resolution) -> Result<RhParams> {
        self.line.instantiate(self.r1, self.r2, self.tau, res)
    }

    fn at_s(&self, s: f64, res: &Resolution) -> Result<RhParams> {
        self.line.at(s).instantiate(self.r1, self.r2, self.tau, res)
    }

    fn coords(&self, extra: &[f64]) -> Vec<f64> {
        let mut v = vec![
            self.r1,
            self.r2,
            self.line.sigma1,
            self.line.sigma2,
            self.line.s,
            self.tau,
        ];
        v.extend_from_slice(extra);
        v
    }

    fn is_symmetric(&self) -> bool {
        self.r1 == self.r2 && self.line.sigma1 == self.line.sigma2
    }
}

/// Off-diagonal `(u, v)` grid for RH-side kernel checks.
const RH_U: [f64; 3] = [-1.0, 0.0, 1.0];
const RH_V: [f64; 3] = [-0.5, 0.25, 1.5];

pub fn check_rh(sets: &[RhSet], zs: &[f64], cfg: &VerifyConfig) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    for set in sets {
        rh_set(set, zs, cfg, &mut c);
    }
    c.finish()
}

/// Residuals of the two second-order equations for a vector `(m₁, m₂)`
/// with first and second z-derivatives.
fn ode_residual(p: &RhParams, z: f64, m: (f64, f64), dm: (f64, f64), d2m: (f64, f64)) -> f64 {
    let (r1, r2, s1, s2, tau) = (p.r1(), p.r2(), p.s1(), p.s2(), p.tau());
    let (c, d) = (p.c(), p.d());
    let res = p.resolvent();
    let (q, qp) = (res.q(), res.q_prime());
    let e1 = d2m.0 / (r1 * r1)
        - (2.0 * tau * dm.0
            + c * c / d * q * dm.1
            + (c * q * q - z + 2.0 * s1 / r1 - r1 * r1 * tau * tau) * m.0
            - c / d * qp * m.1);
    let e2 = d2m.1 / (r2 * r2)
        - (-c * c * d * q * dm.0 - 2.0 * tau * dm.1
            + (c * q * q + z + 2.0 * s2 / r2 - r2 * r2 * tau * tau) * m.1
            - c * d * qp * m.0);
    abs(e1).max(abs(e2))
}

fn rh_set(set: &RhSet, zs: &[f64], cfg: &VerifyConfig, c: &mut Checks) {
    let res = &cfg.resolution;
    let p = match set.build(res) {
        Ok(p) => p,
        Err(_) => return c.fail(&["rh.column_sum"], &set.coords(&[])),
    };
    let minus = p.negated();
    let (cc, dd, sigma) = (p.c(), p.d(), p.sigma());

    for &z in zs {
        let pt = set.coords(&[z]);
        let m = p.m_topleft(z, 0);
        let (p1, p2) = p.p(z, 0);
        c.add(
            "rh.column_sum",
            abs(p1 - m[0][0] - m[0][1]).max(abs(p2 - m[1][0] - m[1][1])),
            &pt,
        );

        let d2 = |k: usize| {
            richardson(
                |x| {
                    let d = p.p(x, 1);
                    Ok(if k == 0 { d.0 } else { d.1 })
                },
                z,
                FD_H,
            )
            .unwrap_or(f64::NAN)
        };
        c.add(
            "rh.p_ode",
            ode_residual(&p, z, (p1, p2), p.p(z, 1), (d2(0), d2(1))),
            &pt,
        );

        let m1 = p.m_topleft(z, 1);
        let m2 = p.m_topleft(z, 2);
        c.add(
            "rh.column_ode",
            ode_residual(
                &p,
                z,
                (m[0][0], m[1][0]),
                (m1[0][0], m1[1][0]),
                (m2[0][0], m2[1][0]),
            ),
            &pt,
        );

        let (a1, a2) = p.p_via_q(z);
        c.add("rh.p_forms", abs(a1 - p1).max(abs(a2 - p2)), &pt);

        for &x in &[0.0, 0.7, 2.3] {
            let pt = set.coords(&[z, x]);
            let (r1, r2, s1, s2, tau) = (p.r1(), p.r2(), p.s1(), p.s2(), p.tau());
            let b = |o| p.b(Variant::Plain, z, x, o);
            let bt = |o| p.b(Variant::Tilde, z, x, o);
            let e1 = b(2) / (r2 * r2) + 2.0 * tau * b(1)
                - (z + cc * x + 2.0 * s2 / r2 - r2 * r2 * tau * tau) * b(0);
            let e2 = bt(2) / (r1 * r1)
                - 2.0 * tau * bt(1)
                - (-z + cc * x + 2.0 * s1 / r1 - r1 * r1 * tau * tau) * bt(0);
            c.add("rh.b_ode", abs(e1).max(abs(e2)), &pt);

            let h = 1e-4;
            let fdx = |v| (p.b(v, z, x + h, 0) - p.b(v, z, x - h, 0)) / (2.0 * h);
            let fdz = |v| (p.b(v, z + h, x, 0) - p.b(v, z - h, x, 0)) / (2.0 * h);
            let e = abs(fdx(Variant::Plain) - cc * fdz(Variant::Plain))
                .max(abs(fdx(Variant::Tilde) + cc * fdz(Variant::Tilde)));
            c.add("rh.b_x_vs_z", e, &pt);
        }

        let a0 = p.script_a(Variant::Plain, z, 0);
        let a1 = p.script_a(Variant::Plain, z, 1);
        let a2 = p.script_a(Variant::Plain, z, 2);
        let bt0 = p.b(Variant::Tilde, z, 0.0, 0);
        let bt0x = -cc * p.b(Variant::Tilde, z, 0.0, 1);
        let m_nodes = p.resolvent().order();
        for &frac in &[0.05, 0.2, 0.45] {
            let i = (frac * m_nodes as f64) as usize;
            let x = p.resolvent().nodes()[i];
            let pt = set.coords(&[z, x]);
            let dx = (p.script_a_at(Variant::Plain, z, x + FD_H)
                - p.script_a_at(Variant::Plain, z, x - FD_H))
                / (2.0 * FD_H);
            let (ai, aip) = airy_pair(x + sigma);
            c.add(
                "rh.script_a_dz",
                a1.nodes[i] - (dx - dd * ai * bt0) / cc,
                &pt,
            );
            let (r2, s2, tau) = (p.r2(), p.s2(), p.tau());
            let e = a2.nodes[i] / (r2 * r2) + 2.0 * tau * a1.nodes[i]
                - (z + cc * x + 2.0 * s2 / r2 - r2 * r2 * tau * tau) * a0.nodes[i]
                - cc * dd * (ai * bt0x - aip * bt0);
            c.add("rh.script_a_second_order", e, &pt);
        }
    }

    if set.is_symmetric() && set.tau == 0.0 {
        let m = p.m_topleft(0.0, 0);
        c.add(
            "rh.symmetric_block",
            abs(m[0][0] - m[1][1]).max(abs(m[0][1] - m[1][0])),
            &set.coords(&[0.0]),
        );
        for &u in &RH_U {
            for &v in &RH_V {
                let r = rh_kernel_direct(&p, &minus, u, v)
                    .and_then(|a| rh_kernel_direct(&p, &minus, v, u).map(|b| a - b));
                c.add_result("rh.kernel_symmetry", r, &set.coords(&[u, v]));
            }
        }
    }

    // s-derivative of the direct kernel: formula and rank.
    let h = 1e-2;
    let s0 = set.line.s;
    let shifted: Result<Vec<Vec<f64>>> = [h, -h, 0.5 * h, -0.5 * h]
        .iter()
        .map(|d| {
            let pl = set.at_s(s0 + d, res)?;
            let mi = pl.negated();
            let mut out = Vec::with_capacity(9);
            for &u in &RH_U {
                for &v in &RH_V {
                    out.push(rh_kernel_direct(&pl, &mi, u, v)?);
                }
            }
            Ok(out)
        })
        .collect();
    match shifted {
        Ok(k) => {
            let m: Vec<f64> = (0..9)
                .map(|i| {
                    let d = (k[0][i] - k[1][i]) / (2.0 * h);
                    let dh = (k[2][i] - k[3][i]) / h;
                    (4.0 * dh - d) / 3.0
                })
                .collect();
            for (i, &fd) in m.iter().enumerate() {
                let (u, v) = (RH_U[i / 3], RH_V[i % 3]);
                let r = rh_kernel_ds(&p, &minus, set.line.sigma1, set.line.sigma2, u, v)
                    .map(|f| rel(fd, f, 1.0));
                c.add_result("rh.ds_rank_two", r, &set.coords(&[u, v]));
            }
            let sv = singular_values(3, 3, &m);
            c.add("rh.rank_two", sv[2] / sv[0], &set.coords(&[]));
        }
        Err(_) => c.fail(&["rh.ds_rank_two", "rh.rank_two"], &set.coords(&[])),
    }

    let (u, v) = (0.0, 1.0);
    let r = rh_kernel_tail(set.line, set.r1, set.r2, set.tau, u, v, res, &cfg.tail)
        .and_then(|t| rh_kernel_direct(&p, &minus, u, v).map(|k| t - k));
    c.add_result("rh.tail", r, &set.coords(&[u, v]));

    if let Some((lambda, big)) = set.origin {
        match FvParams::single_time(lambda, big, set.tau, res) {
            Ok(fv) => {
                let tau = set.tau;
                for &z in zs {
                    let (p1, p2) = p.p(z, 0);
                    let (h1, h2) = fv.phat(tau, z);
                    let k = |r: f64| {
                        sqrt(2.0 * PI)
                            * pow(r, 1.0 / 6.0)
                            * exp(pow(r, 4.0) * tau * (big + 2.0 / 3.0 * tau * tau))
                    };
                    let e = abs(p1 / (k(set.r1) * h1) - 1.0).max(abs(p2 / (k(set.r2) * h2) - 1.0));
                    c.add("rh.p_phat_scaling", e, &set.coords(&[z]));
                }
            }
            Err(_) => c.fail(&["rh.p_phat_scaling"], &set.coords(&[])),
        }
    }
}

// ---------------------------------------------------------------- equivalence

/// Resolvent-side kernel against the RH kernel, directly and through the
/// tail integral.
pub fn check_equivalence(
    tuples: &[(f64, f64, f64)],
    points: &[(f64, f64)],
    cfg: &VerifyConfig,
) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    for &t in tuples {
        equiv_at(t, points, cfg, &mut c);
    }
    c.finish()
}

fn equiv_at(
    (lambda, big, tau): (f64, f64, f64),
    points: &[(f64, f64)],
    cfg: &VerifyConfig,
    c: &mut Checks,
) {
    let res = &cfg.resolution;
    let coords = |u: f64, v: f64| vec![lambda, big, tau, u, v];
    let built = FvParams::single_time(lambda, big, tau, res)
        .and_then(|fv| RhParams::from_fv(lambda, big, tau, res).map(|rh| (fv, rh)));
    let (fv, plus) = match built {
        Ok(b) => b,
        Err(_) => return c.fail(&["equiv.direct", "equiv.tail"], &coords(f64::NAN, f64::NAN)),
    };
    let minus = plus.negated();
    let line = sparam_from_fv(lambda, big, tau);
    for &(u, v) in points {
        let l = fv.kernel(u, v);
        let r = rh_kernel_direct(&plus, &minus, u, v).map(|k| abs(l - k) / abs(l).max(1.0));
        c.add_result("equiv.direct", r, &coords(u, v));
        let t =
            rh_kernel_tail(line, plus.r1(), plus.r2(), tau, u, v, res, &cfg.tail).map(|k| l - k);
        c.add_result("equiv.tail", t, &coords(u, v));
    }
    for &u in &RANK_GRID {
        let l = fv.kernel(u, u);
        let r = rh_kernel_direct(&plus, &minus, u, u).map(|k| abs(l - k) / abs(l).max(1.0));
        c.add_result("equiv.diagonal", r, &coords(u, u));
    }
}

/// Both kernels at Σ = 20.
pub fn check_equivalence_decay(
    lambda: f64,
    tau: f64,
    points: &[(f64, f64)],
    cfg: &VerifyConfig,
) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    let res = &cfg.resolution;
    let big = 20.0;
    match FvParams::single_time(lambda, big, tau, res)
        .and_then(|fv| RhParams::from_fv(lambda, big, tau, res).map(|rh| (fv, rh)))
    {
        Ok((fv, plus)) => {
            let minus = plus.negated();
            for &(u, v) in points {
                let l = fv.kernel(u, v);
                let pt = [lambda, big, tau, u, v];
                match rh_kernel_direct(&plus, &minus, u, v) {
                    Ok(k) => {
                        c.add("equiv.large_sigma_magnitude", abs(l).max(abs(k)), &pt);
                        c.add("equiv.large_sigma_difference", l - k, &pt);
                    }
                    Err(_) => c.fail(
                        &[
                            "equiv.large_sigma_magnitude",
                            "equiv.large_sigma_difference",
                        ],
                        &pt,
                    ),
                }
            }
        }
        Err(_) => c.fail(&["equiv.large_sigma_magnitude"], &[lambda, big, tau]),
    }
    c.finish()
}

// ---------------------------------------------------------------- residue matrix

/// Residue-matrix identities at `(r₁, r₂)`, on the line `sp`, at time `τ`.
pub fn check_compat(
    r1: f64,
    r2: f64,
    sp: SParam,
    tau: f64,
    cfg: &VerifyConfig,
) -> Vec<CheckReport> {
    let mut c = Checks::new(cfg);
    compat_at(r1, r2, sp, tau, cfg, &mut c);
    c.finish()
}

fn compat_at(r1: f64, r2: f64, sp: SParam, tau: f64, cfg: &VerifyConfig, c: &mut Checks) {
    let res = &cfg.resolution;
    let pt = [r1, r2, sp.sigma1, sp.sigma2, sp.s, tau];
    let entries = |s: f64, t: f64| {
        sp.at(s)
            .instantiate(r1, r2, t, res)
            .map(|p| (p.residue_matrix(), p))
    };
    let (e, p) = match entries(sp.s, tau) {
        Ok(x) => x,
        Err(_) => return c.fail(&["compat.bbs"], &pt),
    };
    let (s1, s2) = (p.s1(), p.s2());
    let rr = r1 * r1 + r2 * r2;
    c.add(
        "compat.bbs",
        r2 * (e.c_tilde * e.d - e.b) - r1 * (e.c * e.d - e.beta_tilde) + rr * tau * e.d,
        &pt,
    );

    match RhParams::new(r2, r1, s2, s1, tau, res) {
        Ok(sw) => {
            let w = sw.residue_matrix();
            let d = [
                e.d - w.d_tilde,
                e.c - w.c_tilde,
                e.b - w.b_tilde,
                e.beta - w.beta_tilde,
                e.f - w.f_tilde,
                e.d_tilde - w.d,
                e.c_tilde - w.c,
                e.b_tilde - w.b,
                e.beta_tilde - w.beta,
                e.f_tilde - w.f,
            ];
            c.add(
                "compat.swap",
                d.iter().fold(0.0f64, |m, x| m.max(abs(*x))),
                &pt,
            );
        }
        Err(_) => c.fail(&["compat.swap"], &pt),
    }

    let (g1, g2, s) = (sp.sigma1, sp.sigma2, sp.s);
    let k = g1 * r2 + g2 * r1;
    let h = FD_H;
    match (entries(s + h, tau), entries(s - h, tau)) {
        (Ok((ep, _)), Ok((em, _))) => {
            let ds = |f: fn(&crate::rh::ResidueEntries) -> f64| (f(&ep) - f(&em)) / (2.0 * h);
            c.add(
                "compat.s_d1",
                r1 * ds(|x| x.d) - (2.0 * k * (e.c_tilde * e.d - e.b) + 2.0 * rr * g1 * tau * e.d),
                &pt,
            );
            c.add(
                "compat.s_d2",
                r2 * ds(|x| x.d)
                    - (2.0 * k * (e.c * e.d - e.beta_tilde) - 2.0 * rr * g2 * tau * e.d),
                &pt,
            );
            c.add(
                "compat.s_dtil1",
                r1 * ds(|x| x.d_tilde)
                    - (2.0 * k * (e.c_tilde * e.d_tilde - e.beta)
                        - 2.0 * rr * g1 * tau * e.d_tilde),
                &pt,
            );
            c.add(
                "compat.s_dtil2",
                r2 * ds(|x| x.d_tilde)
                    - (2.0 * k * (e.c * e.d_tilde - e.b_tilde) + 2.0 * rr * g2 * tau * e.d_tilde),
                &pt,
            );
            c.add(
                "compat.s_c",
                r1 * ds(|x| x.c) - (2.0 * k * e.d * e.d_tilde + 2.0 * g1 * g1 * s),
                &pt,
            );
            c.add(
                "compat.s_ctil",
                r2 * ds(|x| x.c_tilde) - (2.0 * k * e.d * e.d_tilde + 2.0 * g2 * g2 * s),
                &pt,
            );

            // τ-derivatives at fixed s₁, s₂.
            let at_tau = |t: f64| RhParams::new(r1, r2, s1, s2, t, res).map(|p| p.residue_matrix());
            match (at_tau(tau + h), at_tau(tau - h)) {
                (Ok(tp), Ok(tm)) => {
                    let dt =
                        |f: fn(&crate::rh::ResidueEntries) -> f64| (f(&tp) - f(&tm)) / (2.0 * h);
                    let (d, dl, cc, ct) = (e.d, e.d_tilde, e.c, e.c_tilde);
                    c.add(
                        "compat.tau_d1",
                        r1 * dt(|x| x.d)
                            - rr * (rr * tau * e.beta_tilde
                                + r1 * cc * e.beta_tilde
                                + r2 * ct * e.beta_tilde
                                + r2 * d * d * dl
                                - r1 * cc * cc * d
                                + 2.0 * s1 * d
                                + r2 * e.f),
                        &pt,
                    );
                    c.add(
                        "compat.tau_d2",
                        r2 * dt(|x| x.d)
                            - rr * (rr * tau * e.b
                                - r1 * cc * e.b
                                - r2 * ct * e.b
                                - r1 * d * d * dl
                                + r2 * ct * ct * d
                                - 2.0 * s2 * d
                                - r1 * e.f),
                        &pt,
                    );
                    c.add(
                        "compat.tau_dtil1",
                        r1 * dt(|x| x.d_tilde)
                            - rr * (rr * tau * e.b_tilde
                                - r2 * ct * e.b_tilde
                                - r1 * cc * e.b_tilde
                                - r2 * dl * dl * d
                                + r1 * cc * cc * dl
                                - 2.0 * s1 * dl
                                - r2 * e.f_tilde),
                        &pt,
                    );
                    c.add(
                        "compat.tau_dtil2",
                        r2 * dt(|x| x.d_tilde)
                            - rr * (rr * tau * e.beta
                                + r2 * ct * e.beta
                                + r1 * cc * e.beta
                                + r1 * dl * dl * d
                                - r2 * ct * ct * dl
                                + 2.0 * s2 * dl
                                + r1 * e.f_tilde),
                        &pt,
                    );
                    c.add(
                        "compat.tau_c",
                        dt(|x| x.c) - rr * (d * e.beta - dl * e.b),
                        &pt,
                    );
                    c.add(
                        "compat.tau_ctil",
                        dt(|x| x.c_tilde) - rr * (dl * e.beta_tilde - d * e.b_tilde),
                        &pt,
                    );
                    let mixed = dt(|x| x.d)
                        - (-r1 * r2 * rr / k * tau * ds(|x| x.d)
                            + rr * rr * (g1 * r2 - g2 * r1) / k * tau * tau * d
                            + 2.0 * (r1 * s1 - r2 * s2) * d);
                    c.add("compat.mixed", mixed, &pt);
                }
                _ => c.fail(&["compat.tau_d1", "compat.mixed"], &pt),
            }
        }
        _ => c.fail(&["compat.s_d1", "compat.tau_d1"], &pt),
    }

    // Second order in s, five-point differences.
    let hh = 1e-2;
    let vals: Result<Vec<crate::rh::ResidueEntries>> = [-2.0, -1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|j| entries(s + j * hh, tau).map(|x| x.0))
        .collect();
    match vals {
        Ok(v) => {
            let col = |f: fn(&crate::rh::ResidueEntries) -> f64| {
                [f(&v[0]), f(&v[1]), f(&v[2]), f(&v[3]), f(&v[4])]
            };
            let kk = k;
            let mut worst = 0.0f64;
            for (a, b, sgn) in [
                (col(|x| x.d), e.d_tilde, 1.0),
                (col(|x| x.d_tilde), e.d, -1.0),
            ] {
                let rhs = sgn * 4.0 * tau * (r1 * g1 - r2 * g2) * d1_5(&a, hh)
                    - 4.0 * rr * (g1 * g1 + g2 * g2) * tau * tau * a[2]
                    + 8.0 * kk * kk / (r1 * r2) * a[2] * a[2] * b
                    + 8.0 * kk * kk * kk / (r1 * r2 * rr) * s * a[2];
                worst = worst.max(abs(d2_5(&a, hh) - rhs));
            }
            c.add("compat.pii", worst, &pt);
        }
        Err(_) => c.fail(&["compat.pii"], &pt),
    }

    if r1 == 1.0 && r2 == 1.0 && sp.sigma1 == sp.sigma2 && tau == 0.0 {
        c.add(
            "compat.symmetric_d",
            e.d - p.resolvent().q() / pow(2.0, 1.0 / 3.0),
            &pt,
        );
    }
}

// ---------------------------------------------------------------- suites

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Tw,
    Fv,
    Rh,
    Equivalence,
    Compat,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Tw,
        Suite::Fv,
        Suite::Rh,
        Suite::Equivalence,
        Suite::Compat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tw => "tw",
            Suite::Fv => "fv",
            Suite::Rh => "rh",
            Suite::Equivalence => "equivalence",
            Suite::Compat => "compat",
        }
    }

    /// `"all"` expands to every suite.
    pub fn parse(s: &str) -> Option<Vec<Suite>> {
        if s == "all" {
            return Some(Suite::ALL.to_vec());
        }
        Suite::ALL.iter().find(|x| x.name() == s).map(|x| vec![*x])
    }
}

pub const DEFAULT_SIGMAS: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];
pub const DEFAULT_FV_SETS: [FvSet; 5] = [
    FvSet::single(1.0, 1.0, 0.0),
    FvSet::single(2.0, 0.5, 0.3),
    FvSet::single(2.0, 1.0, 0.4),
    FvSet::single(1.0, 0.5, 0.25),
    FvSet {
        lambda: 1.5,
        big_sigma: 0.2,
        tau1: -0.1,
        tau2: 0.3,
    },
];
pub const DEFAULT_FV_POINTS: [(f64, f64); 3] = [(0.0, 0.0), (1.0, -1.0), (0.7, -0.2)];
pub const DEFAULT_ZS: [f64; 3] = [-1.0, 0.0, 1.0];
pub const DEFAULT_EQUIV: [(f64, f64, f64); 2] = [(1.0, 1.0, 0.0), (2.0, 0.5, 0.3)];

/// Off-diagonal 3×3 grid for the equivalence checks.
pub fn default_equiv_points() -> Vec<(f64, f64)> {
    let mut v = Vec::with_capacity(9);
    for &u in &RH_U {
        for &w in &RH_V {
            v.push((u, w));
        }
    }
    v
}

fn default_rh_sets() -> [RhSet; 4] {
    [
        RhSet::new(1.0, 1.0, 1.0, 1.0, 0.5, 0.0),
        RhSet::new(1.2, 0.9, 1.3, 0.8, 0.4, 0.3),
        RhSet::from_fv(1.0, 0.7, 0.25),
        RhSet::from_fv(2.0, 0.7, 0.25),
    ]
}

const DEFAULT_COMPAT: [(f64, f64, SParam, f64); 3] = [
    (
        1.0,
        1.0,
        SParam {
            sigma1: 1.0,
            sigma2: 1.0,
            s: 0.5,
        },
        0.0,
    ),
    (
        1.2,
        0.9,
        SParam {
            sigma1: 1.3,
            sigma2: 0.8,
            s: 0.4,
        },
        0.3,
    ),
    (
        1.2,
        0.9,
        SParam {
            sigma1: 0.4,
            sigma2: 0.7,
            s: 1.0,
        },
        0.3,
    ),
];

/// One independent unit of verification work.
#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Tw(f64),
    HmTail(f64),
    Fv(FvSet),
    FvDecay(f64, f64),
    Rh(RhSet),
    Equivalence((f64, f64, f64)),
    EquivalenceDecay(f64, f64),
    Compat(f64, f64, SParam, f64),
}

impl Job {
    pub fn run(&self, cfg: &VerifyConfig) -> Vec<CheckReport> {
        match *self {
            Job::Tw(s) => check_tw(&[s], cfg),
            Job::HmTail(s) => check_hm_tail(s, cfg),
            Job::Fv(set) => check_fv(&[set], &DEFAULT_FV_POINTS, cfg),
            Job::FvDecay(l, t) => check_fv_decay(l, t, &DEFAULT_FV_POINTS, cfg),
            Job::Rh(set) => check_rh(&[set], &DEFAULT_ZS, cfg),
            Job::Equivalence(t) => check_equivalence(&[t], &default_equiv_points(), cfg),
            Job::EquivalenceDecay(l, t) => {
                check_equivalence_decay(l, t, &default_equiv_points(), cfg)
            }
            Job::Compat(r1, r2, sp, tau) => check_compat(r1, r2, sp, tau, cfg),
        }
    }
}

/// The canonical job list for the given suites, in report order.
pub fn jobs(suites: &[Suite]) -> Vec<Job> {
    let mut out = Vec::new();
    for s in Suite::ALL {
        if !suites.contains(&s) {
            continue;
        }
        match s {
            Suite::Tw => {
                out.extend(DEFAULT_SIGMAS.iter().map(|&x| Job::Tw(x)));
                out.push(Job::HmTail(6.0));
            }
            Suite::Fv => {
                out.extend(DEFAULT_FV_SETS.iter().map(|&x| Job::Fv(x)));
                out.push(Job::FvDecay(1.0, 0.0));
            }
            Suite::Rh => out.extend(default_rh_sets().iter().map(|&x| Job::Rh(x))),
            Suite::Equivalence => {
                out.extend(DEFAULT_EQUIV.iter().map(|&x| Job::Equivalence(x)));
                out.push(Job::EquivalenceDecay(1.0, 0.0));
            }
            Suite::Compat => out.extend(
                DEFAULT_COMPAT
                    .iter()
                    .map(|&(a, b, c, d)| Job::Compat(a, b, c, d)),
            ),
        }
    }
    out
}

/// Run the suites serially.
pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Vec<CheckReport> {
    merge_reports(jobs(suites).iter().flat_map(|j| j.run(cfg)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_manifest_entry_is_unique() {
        for (i, (a, _, _)) in CHECKS.iter().enumerate() {
            assert!(CHECKS[i + 1..].iter().all(|(b, _, _)| a != b), "{a}");
        }
    }

    #[test]
    fn merge_keeps_first_order_and_max() {
        let mk = |n: &str, r: f64| CheckReport {
            name: n.into(),
            anchor: String::new(),
            max_residual: r,
            tolerance: 1.0,
            passed: r <= 1.0,
            points: vec![vec![r]],
        };
        let m = merge_reports(vec![mk("a", 0.5), mk("b", 0.1), mk("a", 2.0)]);
        assert_eq!(m.len(), 2);
        assert_eq!(m[0].name, "a");
        assert_eq!(m[0].max_residual, 2.0);
        assert!(!m[0].passed);
        assert_eq!(m[0].points.len(), 2);
    }

    #[test]
    fn tw_checks_pass_far_right_with_tiny_residuals() {
        let r = check_tw(&[30.0], &VerifyConfig::default());
        assert!(!r.is_empty());
        for c in &r {
            assert!(c.max_residual < 1e-9, "{}: {}", c.name, c.max_residual);
        }
    }

    #[test]
    fn corrupted_q_fails_painleve() {
        let cfg = VerifyConfig::default();
        let q = |s: f64| AiryResolvent::build(s, &cfg.resolution).map(|r| r.q());
        assert!(check_painleve_with(&[0.0, 1.0], q, &cfg).passed);
        let bad = check_painleve_with(&[0.0, 1.0], |s| q(s).map(|v| v + 1e-3), &cfg);
        assert!(!bad.passed && bad.max_residual > 1e-4);
    }

    #[test]
    fn suite_parse() {
        assert_eq!(Suite::parse("all").unwrap().len(), 5);
        assert_eq!(Suite::parse("rh").unwrap(), vec![Suite::Rh]);
        assert!(Suite::parse("nope").is_none());
    }
}
