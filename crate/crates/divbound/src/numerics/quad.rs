//! Gaussian quadrature against probability weights via Golub-Welsch.
//!
//! Nodes and weights come from the symmetric tridiagonal Jacobi matrix of
//! the weight's orthogonal polynomials. Because the accompanying vector in
//! the QL iteration starts as `e_1`, the squared first eigenvector
//! components are exactly the quadrature weights of the *normalized*
//! (probability) measure, so `integrate(|_| 1.0) == 1` by construction.
//!
//! Every integral is evaluated on the scheme's own rule and on a rule with
//! twice the nodes; the difference is the error estimate. If it misses the
//! tolerance the scheme falls back to adaptive panel integration with
//! explicit tail rules.

use super::special::ln_gamma;
use crate::{Error, Result};

/// Default node count; doubling it supplies the built-in error estimate.
pub const DEFAULT_NODE_COUNT: usize = 200;

const DEFAULT_ABS_TOL: f64 = 1e-10;
const DEFAULT_REL_TOL: f64 = 1e-10;
const DEFAULT_MAX_DEPTH: u32 = 24;

/// Weight measures understood by the scheme, both normalized to mass one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightKind {
    /// `x^alpha exp(-x) / Gamma(alpha + 1)` on `[0, inf)`, `alpha > -1`.
    Gamma { alpha: f64 },
    /// Standard normal density on the real line.
    Gaussian,
}

#[derive(Clone, Debug)]
struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// A fixed quadrature rule plus its refinement and adaptive fallback.
#[derive(Clone, Debug)]
pub struct QuadratureScheme {
    weight: WeightKind,
    node_count: usize,
    max_depth: u32,
    abs_tol: f64,
    rel_tol: f64,
    base: Rule,
    refined: Rule,
}

impl QuadratureScheme {
    pub fn new(weight: WeightKind, node_count: usize) -> Result<Self> {
        if let WeightKind::Gamma { alpha } = weight {
            if !alpha.is_finite() || alpha <= -1.0 {
                return Err(Error::OutOfDomain {
                    name: "alpha",
                    value: alpha,
                    domain: "(-1, inf)".to_string(),
                });
            }
        }
        if !(1..=8192).contains(&node_count) {
            return Err(Error::OutOfDomain {
                name: "node_count",
                value: node_count as f64,
                domain: "[1, 8192]".to_string(),
            });
        }
        let base = gauss_rule(weight, node_count)?;
        let refined = gauss_rule(weight, node_count * 2)?;
        Ok(Self {
            weight,
            node_count,
            max_depth: DEFAULT_MAX_DEPTH,
            abs_tol: DEFAULT_ABS_TOL,
            rel_tol: DEFAULT_REL_TOL,
            base,
            refined,
        })
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn weight(&self) -> WeightKind {
        self.weight
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    /// Nodes of the base rule, strictly increasing.
    pub fn nodes(&self) -> &[f64] {
        &self.base.nodes
    }

    /// Probability weights of the base rule, positive and summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.base.weights
    }

    /// Nodes of the doubled rule used for error estimation.
    pub fn refined_nodes(&self) -> &[f64] {
        &self.refined.nodes
    }

    pub fn refined_weights(&self) -> &[f64] {
        &self.refined.weights
    }

    fn apply(rule: &Rule, f: &dyn Fn(f64) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteEvaluation { node: x });
            }
            acc += w * v;
        }
        Ok(acc)
    }

    /// Integrate `f` against the weight without enforcing tolerances.
    /// Returns the refined value and the `|I_N - I_2N|` error estimate.
    pub fn integrate_with_estimate(&self, f: &dyn Fn(f64) -> f64) -> Result<(f64, f64)> {
        let coarse = Self::apply(&self.base, f)?;
        let fine = Self::apply(&self.refined, f)?;
        Ok((fine, (coarse - fine).abs()))
    }

    /// Integrate `f` against the weight measure with error control.
    ///
    /// Falls back to adaptive panel integration when the two Gauss rules
    /// disagree beyond tolerance; if even the adaptive pass cannot certify
    /// the requested accuracy an [`Error::Accuracy`] is returned.
    pub fn integrate(&self, f: &dyn Fn(f64) -> f64) -> Result<f64> {
        let (value, estimate) = self.integrate_with_estimate(f)?;
        let tol = self.abs_tol.max(self.rel_tol * value.abs());
        if estimate <= tol {
            return Ok(value);
        }
        self.integrate_adaptive(f, tol)
    }

    /// Adaptive fallback: panel-wise Gauss-Legendre on a finite core with
    /// dedicated semi-infinite tail rules.
    fn integrate_adaptive(&self, f: &dyn Fn(f64) -> f64, tol: f64) -> Result<f64> {
        match self.weight {
            WeightKind::Gamma { alpha } => {
                let norm = ln_gamma(alpha + 1.0);
                let cut = self.refined.nodes.last().copied().unwrap_or(50.0) * 1.25 + 10.0;
                // Head [0, 1] under x = u^8 to flatten the x^alpha endpoint,
                // core [1, cut] directly, tail via a shifted Laguerre rule.
                let head_g = |u: f64| {
                    if u <= 0.0 {
                        return 0.0;
                    }
                    let x = u.powi(8);
                    8.0 * ((8.0 * alpha + 7.0) * u.ln() - x - norm).exp() * f(x)
                };
                let core_g = |x: f64| (alpha * x.ln() - x - norm).exp() * f(x);
                let mut est = 0.0;
                let mut total =
                    adaptive_panel(&head_g, 0.0, 1.0, tol / 4.0, self.max_depth, &mut est)?;
                total += adaptive_panel(&core_g, 1.0, cut, tol / 2.0, self.max_depth, &mut est)?;
                total += self.gamma_tail(f, alpha, cut, norm)?;
                if est > tol {
                    return Err(Error::Accuracy {
                        achieved: est,
                        required: tol,
                    });
                }
                Ok(total)
            }
            WeightKind::Gaussian => {
                let cut = self.refined.nodes.last().copied().unwrap_or(10.0) * 1.25 + 5.0;
                let g = |x: f64| (-0.5 * x * x).exp() / (std::f64::consts::TAU).sqrt() * f(x);
                let mut est = 0.0;
                let mut total = adaptive_panel(&g, -cut, cut, tol / 2.0, self.max_depth, &mut est)?;
                total += self.gaussian_tail(f, cut, false)?;
                total += self.gaussian_tail(f, cut, true)?;
                if est > tol {
                    return Err(Error::Accuracy {
                        achieved: est,
                        required: tol,
                    });
                }
                Ok(total)
            }
        }
    }

    /// `int_cut^inf f(x) x^alpha e^-x / Gamma(alpha+1) dx` via an exponential
    /// substitution onto a plain Laguerre rule.
    fn gamma_tail(&self, f: &dyn Fn(f64) -> f64, alpha: f64, cut: f64, norm: f64) -> Result<f64> {
        let rule = gauss_rule(WeightKind::Gamma { alpha: 0.0 }, 60)?;
        let mut acc = 0.0;
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let x = cut + u;
            let v = (alpha * x.ln() - cut - norm).exp() * f(x);
            if !v.is_finite() {
                return Err(Error::NonFiniteEvaluation { node: x });
            }
            acc += w * v;
        }
        Ok(acc)
    }

    /// One Gaussian tail beyond `|x| = cut`, mapped to a Laguerre rule by
    /// `x = cut + v / cut`.
    fn gaussian_tail(&self, f: &dyn Fn(f64) -> f64, cut: f64, negative: bool) -> Result<f64> {
        let rule = gauss_rule(WeightKind::Gamma { alpha: 0.0 }, 60)?;
        let sign = if negative { -1.0 } else { 1.0 };
        let scale = (-0.5 * cut * cut).exp() / (std::f64::consts::TAU).sqrt() / cut;
        let mut acc = 0.0;
        for (&v, &w) in rule.nodes.iter().zip(&rule.weights) {
            let u = v / cut;
            let x = sign * (cut + u);
            let val = (-0.5 * u * u).exp() * f(x);
            if !val.is_finite() {
                return Err(Error::NonFiniteEvaluation { node: x });
            }
            acc += w * val;
        }
        Ok(acc * scale)
    }
}

/// Recursive panel integration with a 15-point Gauss-Legendre rule,
/// comparing each panel against its two halves.
fn adaptive_panel(
    g: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
    depth: u32,
    est: &mut f64,
) -> Result<f64> {
    let whole = legendre15(g, lo, hi)?;
    let mid = 0.5 * (lo + hi);
    let left = legendre15(g, lo, mid)?;
    let right = legendre15(g, mid, hi)?;
    let disc = (whole - (left + right)).abs();
    if disc <= tol || depth == 0 {
        if depth == 0 {
            *est += disc;
        }
        return Ok(left + right);
    }
    let a = adaptive_panel(g, lo, mid, tol / 2.0, depth - 1, est)?;
    let b = adaptive_panel(g, mid, hi, tol / 2.0, depth - 1, est)?;
    Ok(a + b)
}

fn legendre15(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<f64> {
    let (nodes, weights) = legendre15_rule();
    let half = 0.5 * (hi - lo);
    let centre = 0.5 * (hi + lo);
    let mut acc = 0.0;
    for (&t, &w) in nodes.iter().zip(weights.iter()) {
        let x = centre + half * t;
        let v = g(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteEvaluation { node: x });
        }
        acc += w * v;
    }
    Ok(acc * half)
}

fn legendre15_rule() -> (&'static [f64], &'static [f64]) {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (n, w) = RULE.get_or_init(|| {
        // Jacobi matrix for Legendre on [-1, 1]: zero diagonal,
        // off-diagonal k / sqrt(4k^2 - 1); total mass 2.
        let m = 15;
        let mut diag = vec![0.0; m];
        let mut off = vec![0.0; m];
        for (k, o) in off.iter_mut().enumerate().skip(1) {
            let kf = k as f64;
            *o = kf / (4.0 * kf * kf - 1.0).sqrt();
        }
        let mut first = vec![0.0; m];
        first[0] = 1.0;
        tridiag_ql(&mut diag, &mut off, &mut first).expect("legendre rule");
        let mut pairs: Vec<(f64, f64)> = diag
            .iter()
            .zip(&first)
            .map(|(&x, &z)| (x, 2.0 * z * z))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pairs.into_iter().unzip()
    });
    (n, w)
}

fn gauss_rule(weight: WeightKind, n: usize) -> Result<Rule> {
    let (mut diag, mut off) = jacobi_matrix(weight, n);
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiag_ql(&mut diag, &mut off, &mut first)?;
    let mut pairs: Vec<(f64, f64)> = diag.iter().zip(&first).map(|(&x, &z)| (x, z * z)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(Rule { nodes, weights })
}

/// Diagonal and off-diagonal of the Jacobi matrix of the weight's monic
/// orthogonal polynomials. `off[k]` couples rows `k - 1` and `k`.
fn jacobi_matrix(weight: WeightKind, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    match weight {
        WeightKind::Gamma { alpha } => {
            for (k, d) in diag.iter_mut().enumerate() {
                *d = 2.0 * k as f64 + alpha + 1.0;
            }
            for (k, o) in off.iter_mut().enumerate().skip(1) {
                let kf = k as f64;
                *o = (kf * (kf + alpha)).sqrt();
            }
        }
        WeightKind::Gaussian => {
            for (k, o) in off.iter_mut().enumerate().skip(1) {
                *o = (k as f64).sqrt();
            }
        }
    }
    (diag, off)
}

/// QL iteration with implicit shifts for a symmetric tridiagonal matrix,
/// rotating an accompanying vector so that `z[i]` ends as the first
/// component of the i-th eigenvector. Eigenvalues land in `d`.
fn tridiag_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    // shift the off-diagonal so e[i] couples i and i + 1
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical {
                    detail: format!("QL iteration failed to converge at row {l}"),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut recovered = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // deflation hit an exact zero mid-sweep; restart
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    recovered = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if recovered {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
