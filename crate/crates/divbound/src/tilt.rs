//! Exponentially tilted families `dQ_beta/dQ_0 = exp(beta T(x)) / Z(beta)`
//! with a polynomial sufficient statistic `T` over a Gamma or standard
//! Gaussian base, plus information projection onto a single moment
//! constraint `E_beta[T] = target`.
//!
//! Means, variances and divergences are evaluated in log-space ratios
//! (`sum w T exp(s - max s) / sum w exp(s - max s)`), so extreme tilts do
//! not overflow even though the raw partition values would.

use crate::numerics::{Interval, QuadratureScheme, WeightKind, DEFAULT_NODE_COUNT};
use crate::orthopoly::PolynomialStatistic;
use crate::{Error, Result};

/// Base measure of a tilted family.
#[derive(Clone, Debug)]
pub enum TiltBase {
    /// Gamma with shape `alpha + 1`, scale one.
    Gamma { alpha: f64 },
    /// Standard Gaussian.
    Gaussian,
}

impl TiltBase {
    fn weight_kind(&self) -> WeightKind {
        match self {
            TiltBase::Gamma { alpha } => WeightKind::Gamma { alpha: *alpha },
            TiltBase::Gaussian => WeightKind::Gaussian,
        }
    }

    /// Log-density of the base probability measure.
    pub fn log_pdf(&self, x: f64) -> f64 {
        match self {
            TiltBase::Gamma { alpha } => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    alpha * x.ln() - x - crate::numerics::special::ln_gamma(alpha + 1.0)
                }
            }
            TiltBase::Gaussian => -0.5 * x * x - 0.5 * (std::f64::consts::TAU).ln(),
        }
    }
}

/// Admissible tilt parameters `beta` for which `Z(beta)` is finite, from
/// the dominant term of `beta T(x)` against the base tail.
///
/// For a Gamma base the integrand behaves like `exp(beta c x^d - x)` at
/// `+inf` (`c` the leading coefficient, `d` the degree): any `beta c < 1`
/// works for `d = 1`, while `d >= 2` requires `beta c <= 0`. For a Gaussian
/// base the competing term is `x^2 / 2`, and an odd statistic of degree 3
/// or more blows up on one side for every nonzero `beta`.
pub fn beta_domain_of(base: &TiltBase, statistic: &PolynomialStatistic) -> Result<Interval> {
    let d = statistic.degree();
    let c = statistic.leading_coefficient();
    if c == 0.0 || d == 0 {
        return Err(Error::MalformedStatistic {
            detail: format!("statistic must have degree >= 1 (degree {d}, leading {c})"),
        });
    }
    let domain = match base {
        TiltBase::Gamma { .. } => {
            if d == 1 {
                if c > 0.0 {
                    Interval::open(f64::NEG_INFINITY, 1.0 / c)
                } else {
                    Interval::open(1.0 / c, f64::INFINITY)
                }
            } else if c > 0.0 {
                Interval::open_closed(f64::NEG_INFINITY, 0.0)
            } else {
                Interval::closed_open(0.0, f64::INFINITY)
            }
        }
        TiltBase::Gaussian => match d {
            1 => Interval::real_line(),
            2 => {
                if c > 0.0 {
                    Interval::open(f64::NEG_INFINITY, 0.5 / c)
                } else {
                    Interval::open(0.5 / c, f64::INFINITY)
                }
            }
            _ if d % 2 == 1 => Interval::closed(0.0, 0.0),
            _ => {
                if c > 0.0 {
                    Interval::open_closed(f64::NEG_INFINITY, 0.0)
                } else {
                    Interval::closed_open(0.0, f64::INFINITY)
                }
            }
        },
    };
    Ok(domain)
}

/// Result of an information projection onto a moment constraint.
#[derive(Clone, Copy, Debug)]
pub struct Projection {
    pub beta: f64,
    pub divergence: f64,
}

/// A base measure tilted by `exp(beta T(x))`, with all functionals
/// evaluated by quadrature against the base weight.
#[derive(Clone, Debug)]
pub struct TiltedFamily {
    base: TiltBase,
    statistic: PolynomialStatistic,
    beta_domain: Interval,
    scheme: QuadratureScheme,
}

impl TiltedFamily {
    pub fn new(base: TiltBase, statistic: PolynomialStatistic) -> Result<Self> {
        Self::with_nodes(base, statistic, DEFAULT_NODE_COUNT)
    }

    pub fn with_nodes(
        base: TiltBase,
        statistic: PolynomialStatistic,
        node_count: usize,
    ) -> Result<Self> {
        let beta_domain = beta_domain_of(&base, &statistic)?;
        let scheme = QuadratureScheme::new(base.weight_kind(), node_count)?;
        Ok(Self {
            base,
            statistic,
            beta_domain,
            scheme,
        })
    }

    pub fn base(&self) -> &TiltBase {
        &self.base
    }

    pub fn statistic(&self) -> &PolynomialStatistic {
        &self.statistic
    }

    pub fn beta_domain(&self) -> Interval {
        self.beta_domain
    }

    pub fn scheme(&self) -> &QuadratureScheme {
        &self.scheme
    }

    fn check_beta(&self, beta: f64) -> Result<()> {
        if self.beta_domain.contains(beta) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                name: "beta",
                value: beta,
                domain: self.beta_domain.to_string(),
            })
        }
    }

    /// Raw partition integrals: `Z`, `Z' = int T exp(beta T) dQ_0`, or
    /// `Z'' = int T^2 exp(beta T) dQ_0` for `order` 0, 1, 2.
    pub fn partition(&self, beta: f64, order: u8) -> Result<f64> {
        assert!(order <= 2, "order must be 0, 1 or 2");
        self.check_beta(beta)?;
        let t = |x: f64| self.statistic.eval(x);
        self.scheme.integrate(&|x| {
            let tv = t(x);
            tv.powi(order as i32) * (beta * tv).exp()
        })
    }

    /// Log-space moment pass over one rule: returns
    /// `(ln Z, E_beta[T], E_beta[T^2], E_beta[g])`.
    fn moments_on(
        &self,
        nodes: &[f64],
        weights: &[f64],
        beta: f64,
        g: Option<&dyn Fn(f64) -> f64>,
    ) -> Result<(f64, f64, f64, f64)> {
        let mut s_max = f64::NEG_INFINITY;
        let mut tv = Vec::with_capacity(nodes.len());
        for &x in nodes {
            let t = self.statistic.eval(x);
            if !t.is_finite() {
                return Err(Error::NonFiniteEvaluation { node: x });
            }
            let s = beta * t;
            if s > s_max {
                s_max = s;
            }
            tv.push((x, t, s));
        }
        let mut denom = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut mg = 0.0;
        for ((x, t, s), &w) in tv.into_iter().zip(weights) {
            let e = w * (s - s_max).exp();
            denom += e;
            m1 += e * t;
            m2 += e * t * t;
            if let Some(g) = g {
                let gv = g(x);
                if !gv.is_finite() && e > 0.0 {
                    return Err(Error::NonFiniteEvaluation { node: x });
                }
                if e > 0.0 {
                    mg += e * gv;
                }
            }
        }
        Ok((s_max + denom.ln(), m1 / denom, m2 / denom, mg / denom))
    }

    /// Log-space moments with the scheme's two-rule error control.
    fn moments(&self, beta: f64, g: Option<&dyn Fn(f64) -> f64>) -> Result<(f64, f64, f64, f64)> {
        self.check_beta(beta)?;
        let coarse = self.moments_on(self.scheme.nodes(), self.scheme.weights(), beta, g)?;
        let fine = self.moments_on(
            self.scheme.refined_nodes(),
            self.scheme.refined_weights(),
            beta,
            g,
        )?;
        // Breakdown detector, not an accuracy certificate: the doubled rule
        // is returned and is far more accurate than this estimate. Tilts
        // concentrated beyond what the node count resolves show up here as
        // disagreement way above 1e-3.
        const MOMENTS_GUARD: f64 = 1e-3;
        for (c, f) in [
            (coarse.0, fine.0),
            (coarse.1, fine.1),
            (coarse.2, fine.2),
            (coarse.3, fine.3),
        ] {
            let err = (c - f).abs();
            let guard = MOMENTS_GUARD * f.abs().max(1.0);
            if err > guard {
                return Err(Error::Accuracy {
                    achieved: err,
                    required: guard,
                });
            }
        }
        Ok(fine)
    }

    /// `ln Z(beta)`, overflow-safe for strongly tilted members.
    pub fn log_partition(&self, beta: f64) -> Result<f64> {
        Ok(self.moments(beta, None)?.0)
    }

    /// Mean of `T(X)` under `Q_beta`, i.e. `Z'(beta) / Z(beta)`.
    pub fn tilted_mean(&self, beta: f64) -> Result<f64> {
        Ok(self.moments(beta, None)?.1)
    }

    /// Variance of `T(X)` under `Q_beta`.
    pub fn tilted_variance(&self, beta: f64) -> Result<f64> {
        let (_, m1, m2, _) = self.moments(beta, None)?;
        Ok(m2 - m1 * m1)
    }

    /// `D(Q_beta || Q_0) = beta mu_beta - ln Z(beta)`.
    pub fn divergence_from_base(&self, beta: f64) -> Result<f64> {
        let (ln_z, mean, _, _) = self.moments(beta, None)?;
        Ok(beta * mean - ln_z)
    }

    /// Expectation of an arbitrary integrand under `Q_beta`.
    pub fn expect(&self, beta: f64, g: &dyn Fn(f64) -> f64) -> Result<f64> {
        Ok(self.moments(beta, Some(g))?.3)
    }

    /// Information projection of the base onto `{ E[T(X)] = target }`,
    /// realized by solving `mu_beta = target` on the monotone mean map.
    pub fn project_to_mean(&self, target: f64) -> Result<Projection> {
        let mean0 = self.tilted_mean(0.0)?;
        let done = |beta: f64, this: &Self| -> Result<Projection> {
            Ok(Projection {
                beta,
                divergence: this.divergence_from_base(beta)?,
            })
        };
        if (target - mean0).abs() <= 1e-13 {
            return done(0.0, self);
        }

        // grow a bracket away from beta = 0 toward the relevant domain edge
        let go_right = target > mean0;
        let domain = self.beta_domain;
        let edge = if go_right { domain.hi() } else { domain.lo() };
        let edge_open = if go_right {
            domain.hi_open()
        } else {
            domain.lo_open()
        };
        let max_reach = 400.0;
        let mut near = 0.0; // last beta whose mean has not crossed the target
        let far: f64; // first beta whose mean crosses it
        let mut step = 1.0;
        let mut furthest_mean = mean0;
        let out_of_range = |reached: f64| {
            let (lo, hi) = if go_right {
                (mean0, reached)
            } else {
                (reached, mean0)
            };
            Error::TargetOutOfRange { target, lo, hi }
        };
        loop {
            let candidate = if edge.is_infinite() {
                let c = if go_right { near + step } else { near - step };
                step *= 2.0;
                c
            } else if edge_open {
                // approach an open endpoint geometrically
                near + (edge - near) * 0.5
            } else {
                edge
            };
            let cand_mean = match self.tilted_mean(candidate) {
                Ok(m) => m,
                // a tilt the quadrature can no longer resolve marks the
                // practical end of the attainable range
                Err(Error::Accuracy { .. }) => return Err(out_of_range(furthest_mean)),
                Err(e) => return Err(e),
            };
            if (go_right && cand_mean >= target) || (!go_right && cand_mean <= target) {
                far = candidate;
                break;
            }
            furthest_mean = cand_mean;
            let exhausted = if edge.is_infinite() {
                candidate.abs() > max_reach
            } else if edge_open {
                (edge - candidate).abs() < 1e-12 * edge.abs().max(1.0)
            } else {
                candidate == edge
            };
            if exhausted {
                return Err(out_of_range(cand_mean));
            }
            near = candidate;
        }

        let (lo, hi) = if near < far { (near, far) } else { (far, near) };
        let beta = crate::numerics::find_root(
            &|b| self.tilted_mean(b).map(|m| m - target).unwrap_or(f64::NAN),
            (lo, hi),
            1e-11,
        )?;
        // the closure hides evaluation failures as NaN; make sure the
        // solution really inverts the mean map
        let residual = (self.tilted_mean(beta)? - target).abs();
        if residual > 1e-8 * target.abs().max(1.0) {
            return Err(Error::Numerical {
                detail: format!("projection residual {residual:e} at beta = {beta}"),
            });
        }
        done(beta, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn normalized_laguerre_family(n: usize, alpha: f64) -> TiltedFamily {
        TiltedFamily::new(
            TiltBase::Gamma { alpha },
            PolynomialStatistic::normalized_laguerre(n, alpha).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn beta_domain_rules() {
        // positive leading cubic over a Gamma base: beta <= 0
        let dom = beta_domain_of(
            &TiltBase::Gamma { alpha: -0.5 },
            &PolynomialStatistic::normalized_laguerre(3, -0.5).unwrap(),
        )
        .unwrap();
        assert!(dom.contains(-1.84));
        assert!(dom.contains(0.0));
        assert!(!dom.contains(1e-6));

        // identity statistic over a Gamma base: beta < 1
        let dom = beta_domain_of(
            &TiltBase::Gamma { alpha: 1.0 },
            &PolynomialStatistic::from_coefficients(vec![0.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert!(dom.contains(0.999));
        assert!(!dom.contains(1.0));
        assert!(dom.contains(-50.0));

        // x^2 over a Gaussian base: beta < 1/2
        let dom = beta_domain_of(
            &TiltBase::Gaussian,
            &PolynomialStatistic::from_coefficients(vec![0.0, 0.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert!(dom.contains(0.499));
        assert!(!dom.contains(0.5));

        // odd degree >= 3 over a Gaussian base: only beta = 0
        let dom = beta_domain_of(
            &TiltBase::Gaussian,
            &PolynomialStatistic::from_coefficients(vec![0.0, 0.0, 0.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert!(dom.contains(0.0));
        assert!(!dom.contains(-1e-9));

        // constants cannot tilt
        assert!(beta_domain_of(
            &TiltBase::Gaussian,
            &PolynomialStatistic::from_coefficients(vec![2.0]).unwrap(),
        )
        .is_err());
    }

    #[test]
    fn partition_at_zero() {
        let fam = normalized_laguerre_family(2, -0.5);
        assert!((fam.partition(0.0, 0).unwrap() - 1.0).abs() < 1e-12);
        // orthogonality to constants and unit norm
        assert!(fam.partition(0.0, 1).unwrap().abs() < 1e-11);
        assert!((fam.partition(0.0, 2).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn partition_rejects_out_of_domain_beta() {
        let fam = normalized_laguerre_family(2, 0.0);
        assert!(fam.partition(0.25, 0).is_err());
    }

    #[test]
    fn orthonormal_statistic_mean_zero_variance_one() {
        for &(n, alpha) in &[(2usize, -0.5), (3, 0.0), (4, 2.5)] {
            let fam = normalized_laguerre_family(n, alpha);
            assert!(fam.tilted_mean(0.0).unwrap().abs() < 1e-10);
            assert!((fam.tilted_variance(0.0).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn gaussian_identity_statistic_shifts_mean() {
        let fam = TiltedFamily::new(
            TiltBase::Gaussian,
            PolynomialStatistic::from_coefficients(vec![0.0, 1.0]).unwrap(),
        )
        .unwrap();
        for &beta in &[-1.0, -0.25, 0.5, 2.0] {
            assert!((fam.tilted_mean(beta).unwrap() - beta).abs() < 1e-10);
        }
        // D(N(1,1) || N(0,1)) = 1/2
        assert!((fam.divergence_from_base(1.0).unwrap() - 0.5).abs() < 1e-10);
        let proj = fam.project_to_mean(-1.0).unwrap();
        assert!((proj.beta + 1.0).abs() < 1e-9);
        assert!((proj.divergence - 0.5).abs() < 1e-9);
    }

    #[test]
    fn divergence_zero_at_base() {
        let fam = normalized_laguerre_family(3, -0.5);
        assert!(fam.divergence_from_base(0.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn projection_at_current_mean_is_identity() {
        let fam = normalized_laguerre_family(2, 1.0);
        let proj = fam.project_to_mean(0.0).unwrap();
        assert_eq!(proj.beta, 0.0);
        assert!(proj.divergence.abs() < 1e-12);
    }

    #[test]
    fn projection_range_error_reports_attainable_interval() {
        // Ltilde_2 is bounded below, so extreme negative targets are
        // unattainable: E[T] >= min T = -2^{-1/2} sqrt(1 + 1/(alpha+1)).
        let fam = normalized_laguerre_family(2, 0.0);
        let err = fam.project_to_mean(-5.0).unwrap_err();
        match err {
            Error::TargetOutOfRange { lo, hi, .. } => {
                assert!(lo > -1.1, "lo {lo} should be near the statistic minimum");
                assert!(hi <= 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mean_map_strictly_increasing() {
        let fam = normalized_laguerre_family(2, -0.5);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..24 {
            let beta = -2.0 + i as f64 * (2.0 / 24.0);
            if !fam.beta_domain().contains(beta) {
                continue;
            }
            let m = fam.tilted_mean(beta).unwrap();
            assert!(m > prev, "mean not increasing at beta {beta}");
            prev = m;
        }
    }

    #[test]
    fn cumulant_consistency_via_finite_differences() {
        let fam = normalized_laguerre_family(2, 0.5);
        for &beta in &[-1.5, -0.6, -0.1] {
            // first derivative of ln Z
            let h = 1e-5;
            let d1 = (fam.log_partition(beta + h).unwrap() - fam.log_partition(beta - h).unwrap())
                / (2.0 * h);
            let mean = fam.tilted_mean(beta).unwrap();
            assert!(
                (d1 - mean).abs() <= 1e-6 * mean.abs().max(1.0),
                "beta {beta}: {d1} vs {mean}"
            );
            // second derivative via Richardson-extrapolated central
            // differences; a raw 1e-5 step sits below the f64 noise floor
            let h2 = 1e-2;
            let second = |h: f64| {
                (fam.log_partition(beta + h).unwrap() - 2.0 * fam.log_partition(beta).unwrap()
                    + fam.log_partition(beta - h).unwrap())
                    / (h * h)
            };
            let d2 = (4.0 * second(h2 / 2.0) - second(h2)) / 3.0;
            let var = fam.tilted_variance(beta).unwrap();
            assert!(
                (d2 - var).abs() <= 1e-6 * var.abs().max(1.0),
                "beta {beta}: {d2} vs {var}"
            );
        }
    }

    #[test]
    fn divergence_matches_direct_quadrature() {
        // D(Q_beta || Q_0) = int (e^{beta T}/Z) ln(e^{beta T}/Z) dQ_0
        let fam = normalized_laguerre_family(2, -0.5);
        for &beta in &[-1.2, -0.4] {
            let z = fam.partition(beta, 0).unwrap();
            let direct = fam
                .scheme()
                .integrate(&|x| {
                    let t = fam.statistic().eval(x);
                    let dens = (beta * t).exp() / z;
                    dens * (beta * t - z.ln())
                })
                .unwrap();
            let identity = fam.divergence_from_base(beta).unwrap();
            assert!(
                (direct - identity).abs() < 1e-8,
                "beta {beta}: {direct} vs {identity}"
            );
        }
    }

    #[test]
    fn third_moment_positive_at_base() {
        // E[T^3] > 0 for T = Ltilde_n^alpha at beta = 0: the hypothesis
        // under which the local quadratic bound holds on the left.
        for n in 1..=5usize {
            for &alpha in &[-0.5, 0.0, 1.0, 2.5, 6.0] {
                let fam = normalized_laguerre_family(n, alpha);
                let third = fam
                    .expect(0.0, &|x| {
                        let t = fam.statistic().eval(x);
                        t * t * t
                    })
                    .unwrap();
                assert!(third > 0.0, "n {n} alpha {alpha}: E[T^3] = {third}");
            }
        }
    }

    #[test]
    fn projection_inverts_mean_map() {
        // beta caps at zero for this family, so only nonpositive target
        // means are attainable
        let fam = normalized_laguerre_family(2, -0.5);
        for &target in &[-0.9, -0.5, -0.1, -0.01] {
            let proj = fam.project_to_mean(target).unwrap();
            let mean = fam.tilted_mean(proj.beta).unwrap();
            assert!((mean - target).abs() < 1e-8, "target {target}: mean {mean}");
        }
    }

    #[test]
    fn counterexample_family_reproduces_reported_numbers() {
        // degree-3 statistic over the shape-1/2 Gamma base, projected to
        // mean -3
        let fam = normalized_laguerre_family(3, -0.5);
        let proj = fam.project_to_mean(-3.0).unwrap();
        assert!((proj.beta + 1.83125).abs() < 1e-3, "beta {}", proj.beta);
        assert!(
            (proj.divergence - 3.3195).abs() < 1e-3,
            "divergence {}",
            proj.divergence
        );
        assert!((fam.tilted_mean(proj.beta).unwrap() + 3.0).abs() < 1e-8);
        // mean at the reported beta
        assert!((fam.tilted_mean(-1.83125).unwrap() + 3.0).abs() < 1e-2);
    }
}
