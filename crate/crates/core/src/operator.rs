//! Nyström discretization of the shifted Airy kernel on `(0, T)` and the
//! resolvent `(I − K_{Ai,σ})⁻¹` built from it.
//!
//! The kernel is `K(x, y) = [Ai(x+σ)Ai'(y+σ) − Ai'(x+σ)Ai(y+σ)] / (x − y)`.
//! With nodes `x_i` and weights `w_i`, the symmetric matrix
//! `I − W^{1/2} K W^{1/2}` is positive definite whenever `det(I − K) > 0`,
//! so it is Cholesky-factored once and every solve reuses the factor.

use alloc::vec::Vec;

use crate::linalg::Cholesky;
use crate::math::{abs, sqrt};
use crate::special::{affine_map_rule, airy_pair, gauss_legendre_rule, QuadratureRule};
use crate::tracy_widom::TwScalars;
use crate::{Error, Result};

/// Smallest σ for which a resolvent is built.
pub const SIGMA_MIN: f64 = -8.0;
/// `det(I − K)` below this is treated as singular.
pub const DET_MIN: f64 = 1e-8;
/// Below this separation the kernel switches to its midpoint expansion.
const NEAR_DIAGONAL: f64 = 1e-3;

/// Quadrature order `m` and truncation point `T` of the interval `(0, T)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolution {
    pub order: usize,
    pub cutoff: f64,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            order: 80,
            cutoff: 16.0,
        }
    }
}

impl Resolution {
    pub fn new(order: usize, cutoff: f64) -> Result<Self> {
        if order < 2 {
            return Err(Error::Parameter("quadrature order must be at least 2"));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::Parameter(
                "truncation point must be positive and finite",
            ));
        }
        Ok(Resolution { order, cutoff })
    }
}

/// Airy kernel from precomputed values at `x + σ` and `y + σ`.
#[inline]
fn kernel_from(s: f64, t: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = s - t;
    if d == 0.0 {
        return a.1 * a.1 - s * a.0 * a.0;
    }
    if abs(d) < NEAR_DIAGONAL {
        let m = 0.5 * (s + t);
        let (am, bm) = airy_pair(m);
        return bm * bm - m * am * am
            + d * d * (am * bm / 12.0 + (m * bm * bm - m * m * am * am) / 6.0);
    }
    (a.0 * b.1 - a.1 * b.0) / d
}

/// `K_{Ai,σ}(x, y)`, with the diagonal `Ai'(x+σ)² − (x+σ)Ai(x+σ)²`.
pub fn airy_kernel_shifted(sigma: f64, x: f64, y: f64) -> f64 {
    let s = x + sigma;
    let t = y + sigma;
    kernel_from(s, t, airy_pair(s), airy_pair(t))
}

/// Stored pieces of a resolvent, enough to rebuild it without re-solving.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventParts {
    pub sigma: f64,
    pub resolution: Resolution,
    pub det: f64,
    pub r0: Vec<f64>,
    pub qvec: Vec<f64>,
    pub pvec: Vec<f64>,
    pub q: f64,
    pub p: f64,
    pub u: f64,
    pub v: f64,
}

/// The discretized resolvent at one σ together with the scalars
/// `q, p, u, v` and `det(I − K)`.
#[derive(Clone, Debug)]
pub struct AiryResolvent {
    sigma: f64,
    resolution: Resolution,
    rule: QuadratureRule,
    sqrt_w: Vec<f64>,
    ai: Vec<f64>,
    aip: Vec<f64>,
    kmat: Vec<f64>,
    factor: Cholesky,
    smoothing: Vec<f64>,
    det: f64,
    r0: Vec<f64>,
    qvec: Vec<f64>,
    pvec: Vec<f64>,
    q: f64,
    p: f64,
    u: f64,
    v: f64,
}

struct Frame {
    rule: QuadratureRule,
    sqrt_w: Vec<f64>,
    ai: Vec<f64>,
    aip: Vec<f64>,
    ai0: f64,
    aip0: f64,
    k0: Vec<f64>,
    kmat: Vec<f64>,
    factor: Cholesky,
    smoothing: Vec<f64>,
    det: f64,
}

/// `I − W^{1/2} K W^{1/2}`, row-major.
fn identity_minus_weighted(sqrt_w: &[f64], kmat: &[f64]) -> Vec<f64> {
    let m = sqrt_w.len();
    let mut s = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let delta = if i == j { 1.0 } else { 0.0 };
            s[i * m + j] = delta - sqrt_w[i] * kmat[i * m + j] * sqrt_w[j];
        }
    }
    s
}

/// Nyström value of `det(I − K)` for a symmetric kernel on the rule's
/// interval, with the same weighting and factorization as
/// [`AiryResolvent::build`]. `None` when the matrix is not positive
/// definite.
pub fn fredholm_det_symmetric<F: Fn(f64, f64) -> f64>(
    rule: &QuadratureRule,
    kernel: F,
) -> Option<f64> {
    let x = rule.nodes();
    let m = x.len();
    let sqrt_w: Vec<f64> = rule.weights().iter().map(|&v| sqrt(v)).collect();
    let mut kmat = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let k = kernel(x[i], x[j]);
            kmat[i * m + j] = k;
            kmat[j * m + i] = k;
        }
    }
    Cholesky::factor(m, &identity_minus_weighted(&sqrt_w, &kmat)).map(|c| c.det())
}

fn frame(sigma: f64, res: &Resolution) -> Result<Frame> {
    if sigma.is_nan() {
        return Err(Error::Parameter("sigma is NaN"));
    }
    if sigma < SIGMA_MIN {
        return Err(Error::UnsupportedRange {
            sigma,
            min: SIGMA_MIN,
        });
    }
    if !sigma.is_finite() {
        return Err(Error::Parameter("sigma must be finite"));
    }
    let res = Resolution::new(res.order, res.cutoff)?;
    let m = res.order;
    let rule = affine_map_rule(&gauss_legendre_rule(m)?, 0.0, res.cutoff)?;
    let x = rule.nodes();
    let w = rule.weights();
    let sqrt_w: Vec<f64> = w.iter().map(|&v| sqrt(v)).collect();
    let mut ai = Vec::with_capacity(m);
    let mut aip = Vec::with_capacity(m);
    for &xi in x {
        let (a, b) = airy_pair(xi + sigma);
        ai.push(a);
        aip.push(b);
    }
    let (ai0, aip0) = airy_pair(sigma);
    let mut kmat = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let k = kernel_from(x[i] + sigma, x[j] + sigma, (ai[i], aip[i]), (ai[j], aip[j]));
            kmat[i * m + j] = k;
            kmat[j * m + i] = k;
        }
    }
    let k0: Vec<f64> = (0..m)
        .map(|j| kernel_from(sigma, x[j] + sigma, (ai0, aip0), (ai[j], aip[j])))
        .collect();
    let s = identity_minus_weighted(&sqrt_w, &kmat);
    let factor = Cholesky::factor(m, &s).ok_or(Error::SingularResolvent { sigma, det: 0.0 })?;
    let det = factor.det();
    if !(det >= DET_MIN) {
        return Err(Error::SingularResolvent { sigma, det });
    }
    let mut smoothing = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let a = airy_pair(x[i] + x[j] + sigma).0;
            smoothing[i * m + j] = a;
            smoothing[j * m + i] = a;
        }
    }
    Ok(Frame {
        rule,
        sqrt_w,
        ai,
        aip,
        ai0,
        aip0,
        k0,
        kmat,
        factor,
        smoothing,
        det,
    })
}

impl AiryResolvent {
    /// Discretize on `(0, T)` and solve for `R(·,0)`, `Q`, `P` at the nodes.
    pub fn build(sigma: f64, res: &Resolution) -> Result<Self> {
        let f = frame(sigma, res)?;
        let solve = |g: &[f64]| {
            let mut h: Vec<f64> = g.iter().zip(&f.sqrt_w).map(|(a, b)| a * b).collect();
            f.factor.solve_in_place(&mut h);
            for (v, s) in h.iter_mut().zip(&f.sqrt_w) {
                *v /= s;
            }
            h
        };
        let r0 = solve(&f.k0);
        let qvec = solve(&f.ai);
        let pvec = solve(&f.aip);
        let w = f.rule.weights();
        let mut q = f.ai0;
        let mut p = f.aip0;
        let mut u = 0.0;
        let mut v = 0.0;
        for j in 0..w.len() {
            q += w[j] * f.k0[j] * qvec[j];
            p += w[j] * f.k0[j] * pvec[j];
            u += w[j] * qvec[j] * f.ai[j];
            v += w[j] * qvec[j] * f.aip[j];
        }
        Ok(Self::assemble(sigma, *res, f, r0, qvec, pvec, [q, p, u, v]))
    }

    /// Build at `T` and at `T + 4`; fail if `det` or `q` moves by more than 1e-10.
    pub fn build_strict(sigma: f64, res: &Resolution) -> Result<Self> {
        let r = Self::build(sigma, res)?;
        let wider = Self::build(sigma, &Resolution::new(res.order, res.cutoff + 4.0)?)?;
        let change = abs(r.det - wider.det).max(abs(r.q - wider.q));
        if change > 1e-10 {
            return Err(Error::TruncationInsufficient {
                what: "resolvent interval",
                ratio: change,
            });
        }
        Ok(r)
    }

    /// Rebuild from stored vectors. The kernel matrix and factorization are
    /// recomputed; `det`, `r0`, `Q`, `P` and the scalars are taken as given.
    pub fn from_parts(parts: ResolventParts) -> Result<Self> {
        let f = frame(parts.sigma, &parts.resolution)?;
        let m = parts.resolution.order;
        if parts.r0.len() != m || parts.qvec.len() != m || parts.pvec.len() != m {
            return Err(Error::Parameter(
                "stored vectors do not match the quadrature order",
            ));
        }
        let scalars = [parts.q, parts.p, parts.u, parts.v];
        let mut r = Self::assemble(
            parts.sigma,
            parts.resolution,
            f,
            parts.r0,
            parts.qvec,
            parts.pvec,
            scalars,
        );
        r.det = parts.det;
        Ok(r)
    }

    fn assemble(
        sigma: f64,
        resolution: Resolution,
        f: Frame,
        r0: Vec<f64>,
        qvec: Vec<f64>,
        pvec: Vec<f64>,
        [q, p, u, v]: [f64; 4],
    ) -> Self {
        AiryResolvent {
            sigma,
            resolution,
            rule: f.rule,
            sqrt_w: f.sqrt_w,
            ai: f.ai,
            aip: f.aip,
            kmat: f.kmat,
            factor: f.factor,
            smoothing: f.smoothing,
            det: f.det,
            r0,
            qvec,
            pvec,
            q,
            p,
            u,
            v,
        }
    }

    pub fn parts(&self) -> ResolventParts {
        ResolventParts {
            sigma: self.sigma,
            resolution: self.resolution,
            det: self.det,
            r0: self.r0.clone(),
            qvec: self.qvec.clone(),
            pvec: self.pvec.clone(),
            q: self.q,
            p: self.p,
            u: self.u,
            v: self.v,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn resolution(&self) -> Resolution {
        self.resolution
    }
    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }
    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }
    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }
    pub fn order(&self) -> usize {
        self.resolution.order
    }
    /// Row-major `K(x_i, x_j)`.
    pub fn kernel_matrix(&self) -> &[f64] {
        &self.kmat
    }
    /// `Ai(x_i + σ)` at the nodes.
    pub fn ai_nodes(&self) -> &[f64] {
        &self.ai
    }
    /// `Ai'(x_i + σ)` at the nodes.
    pub fn aip_nodes(&self) -> &[f64] {
        &self.aip
    }
    /// `R(x_i, 0)` at the nodes.
    pub fn r0(&self) -> &[f64] {
        &self.r0
    }
    pub fn qvec(&self) -> &[f64] {
        &self.qvec
    }
    pub fn pvec(&self) -> &[f64] {
        &self.pvec
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn u(&self) -> f64 {
        self.u
    }
    pub fn v(&self) -> f64 {
        self.v
    }
    /// `q' = p − q u`.
    pub fn q_prime(&self) -> f64 {
        self.p - self.q * self.u
    }
    pub fn fredholm_det(&self) -> f64 {
        self.det
    }
    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn scalars(&self) -> TwScalars {
        TwScalars {
            sigma: self.sigma,
            q: self.q,
            p: self.p,
            u: self.u,
            v: self.v,
            det: self.det,
        }
    }

    /// Solve `(I − K W) f = g` for nodal values `f`.
    pub fn resolvent_solve(&self, g: &[f64]) -> Result<Vec<f64>> {
        if g.len() != self.order() {
            return Err(Error::Parameter(
                "right-hand side length differs from quadrature order",
            ));
        }
        Ok(self.solve(g))
    }

    fn solve(&self, g: &[f64]) -> Vec<f64> {
        let mut h: Vec<f64> = g.iter().zip(&self.sqrt_w).map(|(a, b)| a * b).collect();
        self.factor.solve_in_place(&mut h);
        for (v, s) in h.iter_mut().zip(&self.sqrt_w) {
            *v /= s;
        }
        h
    }

    /// `∫ (δ + R)(x, 0) f(x) dx` from `f(0)` and nodal values.
    pub fn apply_r0_values(&self, f0: f64, fvals: &[f64]) -> f64 {
        f0 + self.weighted_dot(&self.r0, fvals)
    }

    pub fn apply_r0<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let vals: Vec<f64> = self.nodes().iter().map(|&x| f(x)).collect();
        self.apply_r0_values(f(0.0), &vals)
    }

    pub fn weighted_dot(&self, f: &[f64], g: &[f64]) -> f64 {
        let w = self.weights();
        let mut acc = 0.0;
        for j in 0..w.len() {
            acc += w[j] * f[j] * g[j];
        }
        acc
    }

    /// `K(x, x_j)` for all nodes.
    pub fn kernel_row(&self, x: f64) -> Vec<f64> {
        let s = x + self.sigma;
        let a = airy_pair(s);
        self.nodes()
            .iter()
            .enumerate()
            .map(|(j, &xj)| kernel_from(s, xj + self.sigma, a, (self.ai[j], self.aip[j])))
            .collect()
    }

    pub fn kernel(&self, x: f64, y: f64) -> f64 {
        airy_kernel_shifted(self.sigma, x, y)
    }

    /// `g(x) + Σ_j w_j K(x, x_j) f_j`: the natural extension of a nodal
    /// solution of `(I − K)f = g` to an arbitrary point.
    pub fn nystrom_extend<G: Fn(f64) -> f64>(&self, fvals: &[f64], g: G, x: f64) -> f64 {
        g(x) + self.weighted_dot(&self.kernel_row(x), fvals)
    }

    /// Resolvent kernel `R(x, y)` at arbitrary points.
    pub fn resolvent_kernel(&self, x: f64, y: f64) -> f64 {
        let ky = self.kernel_row(y);
        let ry = self.solve(&ky);
        self.kernel(x, y) + self.weighted_dot(&self.kernel_row(x), &ry)
    }

    /// `Q(x) = ((I − K)⁻¹ Ai(·+σ))(x)`.
    pub fn q_at(&self, x: f64) -> f64 {
        self.nystrom_extend(&self.qvec, |t| airy_pair(t + self.sigma).0, x)
    }

    /// `P(x) = ((I − K)⁻¹ Ai'(·+σ))(x)`.
    pub fn p_at(&self, x: f64) -> f64 {
        self.nystrom_extend(&self.pvec, |t| airy_pair(t + self.sigma).1, x)
    }

    /// `[A f](x_i) = Σ_j w_j Ai(x_i + x_j + σ) f_j` at every node.
    pub fn smooth(&self, fvals: &[f64]) -> Vec<f64> {
        let m = self.order();
        let w = self.weights();
        (0..m)
            .map(|i| {
                let row = &self.smoothing[i * m..(i + 1) * m];
                let mut acc = 0.0;
                for j in 0..m {
                    acc += row[j] * w[j] * fvals[j];
                }
                acc
            })
            .collect()
    }

    /// `[A f](0)`.
    pub fn smooth_at_zero(&self, fvals: &[f64]) -> f64 {
        self.weighted_dot(&self.ai, fvals)
    }

    /// `[A f](x)` at an arbitrary point.
    pub fn smooth_at(&self, x: f64, fvals: &[f64]) -> f64 {
        let w = self.weights();
        let mut acc = 0.0;
        for (j, &xj) in self.nodes().iter().enumerate() {
            acc += airy_pair(x + xj + self.sigma).0 * w[j] * fvals[j];
        }
        acc
    }

    /// `∫∫ (δ + R)(x, y) f(x) g(y) dx dy` from nodal values.
    pub fn double_integral(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weighted_dot(f, &self.solve(g))
    }

    /// `(I − K W)⁻¹ g` without the length check, for hot loops that already
    /// hold correctly sized vectors.
    pub(crate) fn solve_unchecked(&self, g: &[f64]) -> Vec<f64> {
        self.solve(g)
    }

    /// `Q_i − Σ_j w_j K_ij Q_j − Ai(x_i + σ)` at one node.
    pub fn q_residual_at(&self, i: usize) -> f64 {
        let m = self.order();
        let row = &self.kmat[i * m..(i + 1) * m];
        self.qvec[i] - self.weighted_dot(row, &self.qvec) - self.ai[i]
    }
}
