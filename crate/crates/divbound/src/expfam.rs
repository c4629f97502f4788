//! Catalog of analytic natural exponential families with closed-form
//! log-partition functions, mean maps, variance functions, exact
//! divergences, and the quadratic lower bound
//! `D(Q^mu || Q^nu) >= (mu - nu)^2 / (2 V(nu))`.
//!
//! Base-measure conventions (the member at `beta = 0`):
//!
//! * `GaussianMean` — standard normal, statistic `x`.
//! * `GaussianSecondMoment` — standard normal tilted through `x^2`; the
//!   "mean" coordinate is the second moment `m`, and the member with mean
//!   `m` is `N(0, m)`.
//! * `Gamma { shape }` — Gamma with the given shape and scale one; tilting
//!   acts through the scale.
//! * `Poisson` — unit rate.
//! * `Binomial { trials, base_prob }` / `NegativeBinomial { failures,
//!   base_prob }` — the base success probability is a family parameter.
//! * `InverseGaussian { base_mean, lambda }` — `lambda` is fixed, the mean
//!   indexes members.

use crate::numerics::special::ln_gamma;
use crate::numerics::{find_root, Interval};
use crate::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Return a point where `|g| <= tol`, searching the knot sequence directly
/// and then bisecting the first adjacent pair with a sign change.
fn locate_witness(g: &dyn Fn(f64) -> f64, knots: Vec<f64>, tol: f64) -> Result<f64> {
    let values: Vec<f64> = knots.iter().map(|&k| g(k)).collect();
    for (&k, &v) in knots.iter().zip(&values) {
        if v.abs() <= tol {
            return Ok(k);
        }
    }
    for i in 0..knots.len() - 1 {
        if values[i].is_finite()
            && values[i + 1].is_finite()
            && values[i].signum() != values[i + 1].signum()
        {
            return find_root(g, (knots[i], knots[i + 1]), tol);
        }
    }
    Err(Error::WitnessDiagnostic {
        detail: format!("no sign change over knots {knots:?}: g = {values:?}"),
    })
}

/// Monotonicity classification of a variance function on the mean domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    Unimodal { peak: f64 },
}

/// One of the catalogued natural exponential families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AnalyticFamily {
    GaussianMean,
    GaussianSecondMoment,
    Gamma { shape: f64 },
    Poisson,
    Binomial { trials: u32, base_prob: f64 },
    NegativeBinomial { failures: f64, base_prob: f64 },
    InverseGaussian { base_mean: f64, lambda: f64 },
}

/// The variance function `mu -> V(mu)` of a family together with its
/// monotonicity and region of validity (the mean domain).
#[derive(Clone, Copy, Debug)]
pub struct VarianceFunctionProfile {
    family: AnalyticFamily,
    pub monotonicity: Monotonicity,
    pub region: Interval,
}

impl VarianceFunctionProfile {
    pub fn evaluate(&self, mu: f64) -> Result<f64> {
        self.family.variance_at_mean(mu)
    }
}

impl AnalyticFamily {
    fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, value: f64, domain: &str| Error::OutOfDomain {
            name,
            value,
            domain: domain.to_string(),
        };
        match *self {
            AnalyticFamily::GaussianMean
            | AnalyticFamily::GaussianSecondMoment
            | AnalyticFamily::Poisson => Ok(()),
            AnalyticFamily::Gamma { shape } => {
                if shape > 0.0 && shape.is_finite() {
                    Ok(())
                } else {
                    Err(bad("shape", shape, "(0, inf)"))
                }
            }
            AnalyticFamily::Binomial { trials, base_prob } => {
                if trials == 0 {
                    return Err(bad("trials", 0.0, "[1, inf)"));
                }
                if base_prob > 0.0 && base_prob < 1.0 {
                    Ok(())
                } else {
                    Err(bad("base_prob", base_prob, "(0, 1)"))
                }
            }
            AnalyticFamily::NegativeBinomial {
                failures,
                base_prob,
            } => {
                if !(failures > 0.0 && failures.is_finite()) {
                    return Err(bad("failures", failures, "(0, inf)"));
                }
                if base_prob > 0.0 && base_prob < 1.0 {
                    Ok(())
                } else {
                    Err(bad("base_prob", base_prob, "(0, 1)"))
                }
            }
            AnalyticFamily::InverseGaussian { base_mean, lambda } => {
                if !(base_mean > 0.0 && base_mean.is_finite()) {
                    return Err(bad("base_mean", base_mean, "(0, inf)"));
                }
                if lambda > 0.0 && lambda.is_finite() {
                    Ok(())
                } else {
                    Err(bad("lambda", lambda, "(0, inf)"))
                }
            }
        }
    }

    /// Natural parameters `beta` for which the partition function is finite.
    pub fn natural_domain(&self) -> Interval {
        match *self {
            AnalyticFamily::GaussianMean | AnalyticFamily::Poisson => Interval::real_line(),
            AnalyticFamily::GaussianSecondMoment => Interval::open(f64::NEG_INFINITY, 0.5),
            AnalyticFamily::Gamma { .. } => Interval::open(f64::NEG_INFINITY, 1.0),
            AnalyticFamily::Binomial { .. } => Interval::real_line(),
            AnalyticFamily::NegativeBinomial { base_prob, .. } => {
                Interval::open(f64::NEG_INFINITY, -base_prob.ln())
            }
            AnalyticFamily::InverseGaussian { base_mean, lambda } => {
                Interval::open(f64::NEG_INFINITY, 0.5 * lambda / (base_mean * base_mean))
            }
        }
    }

    /// Admissible mean parameters.
    pub fn mean_domain(&self) -> Interval {
        match *self {
            AnalyticFamily::GaussianMean => Interval::real_line(),
            AnalyticFamily::Binomial { trials, .. } => Interval::open(0.0, trials as f64),
            _ => Interval::open(0.0, f64::INFINITY),
        }
    }

    fn check_natural(&self, name: &'static str, beta: f64) -> Result<()> {
        if self.natural_domain().contains(beta) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                name,
                value: beta,
                domain: self.natural_domain().to_string(),
            })
        }
    }

    fn check_mean(&self, name: &'static str, mu: f64) -> Result<()> {
        if self.mean_domain().contains(mu) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                name,
                value: mu,
                domain: self.mean_domain().to_string(),
            })
        }
    }

    /// Mean of the base member (`beta = 0`).
    pub fn base_mean(&self) -> f64 {
        match *self {
            AnalyticFamily::GaussianMean => 0.0,
            AnalyticFamily::GaussianSecondMoment => 1.0,
            AnalyticFamily::Gamma { shape } => shape,
            AnalyticFamily::Poisson => 1.0,
            AnalyticFamily::Binomial { trials, base_prob } => trials as f64 * base_prob,
            AnalyticFamily::NegativeBinomial {
                failures,
                base_prob,
            } => failures * base_prob / (1.0 - base_prob),
            AnalyticFamily::InverseGaussian { base_mean, .. } => base_mean,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            AnalyticFamily::Poisson
                | AnalyticFamily::Binomial { .. }
                | AnalyticFamily::NegativeBinomial { .. }
        )
    }

    /// `ln Z(beta)` in closed form.
    pub fn log_partition(&self, beta: f64) -> Result<f64> {
        self.validate()?;
        self.check_natural("beta", beta)?;
        Ok(match *self {
            AnalyticFamily::GaussianMean => 0.5 * beta * beta,
            AnalyticFamily::GaussianSecondMoment => -0.5 * (1.0 - 2.0 * beta).ln(),
            AnalyticFamily::Gamma { shape } => -shape * (1.0 - beta).ln(),
            AnalyticFamily::Poisson => beta.exp() - 1.0,
            AnalyticFamily::Binomial { trials, base_prob } => {
                trials as f64 * (1.0 - base_prob + base_prob * beta.exp()).ln()
            }
            AnalyticFamily::NegativeBinomial {
                failures,
                base_prob,
            } => failures * ((1.0 - base_prob).ln() - (1.0 - base_prob * beta.exp()).ln()),
            AnalyticFamily::InverseGaussian { base_mean, lambda } => {
                let disc = 1.0 - 2.0 * base_mean * base_mean * beta / lambda;
                lambda / base_mean * (1.0 - disc.sqrt())
            }
        })
    }

    /// The mean map `beta -> mu_beta = d/dbeta ln Z`.
    pub fn mean_of(&self, beta: f64) -> Result<f64> {
        self.validate()?;
        self.check_natural("beta", beta)?;
        Ok(match *self {
            AnalyticFamily::GaussianMean => beta,
            AnalyticFamily::GaussianSecondMoment => 1.0 / (1.0 - 2.0 * beta),
            AnalyticFamily::Gamma { shape } => shape / (1.0 - beta),
            AnalyticFamily::Poisson => beta.exp(),
            AnalyticFamily::Binomial { trials, base_prob } => {
                let e = base_prob * beta.exp();
                trials as f64 * e / (1.0 - base_prob + e)
            }
            AnalyticFamily::NegativeBinomial {
                failures,
                base_prob,
            } => {
                let e = base_prob * beta.exp();
                failures * e / (1.0 - e)
            }
            AnalyticFamily::InverseGaussian { base_mean, lambda } => {
                let disc = 1.0 - 2.0 * base_mean * base_mean * beta / lambda;
                base_mean / disc.sqrt()
            }
        })
    }

    /// The inverse mean map `betahat(mu)`, the maximum likelihood estimate
    /// of the natural parameter.
    pub fn natural_of(&self, mu: f64) -> Result<f64> {
        self.validate()?;
        self.check_mean("mu", mu)?;
        Ok(match *self {
            AnalyticFamily::GaussianMean => mu,
            AnalyticFamily::GaussianSecondMoment => 0.5 * (1.0 - 1.0 / mu),
            AnalyticFamily::Gamma { shape } => 1.0 - shape / mu,
            AnalyticFamily::Poisson => mu.ln(),
            AnalyticFamily::Binomial { trials, base_prob } => {
                let n = trials as f64;
                ((1.0 - base_prob) * mu / (base_prob * (n - mu))).ln()
            }
            AnalyticFamily::NegativeBinomial {
                failures,
                base_prob,
            } => (mu / (base_prob * (mu + failures))).ln(),
            AnalyticFamily::InverseGaussian { base_mean, lambda } => {
                0.5 * lambda * (1.0 / (base_mean * base_mean) - 1.0 / (mu * mu))
            }
        })
    }

    /// The variance function `V(mu)`.
    pub fn variance_at_mean(&self, mu: f64) -> Result<f64> {
        self.validate()?;
        self.check_mean("mu", mu)?;
        Ok(match *self {
            AnalyticFamily::GaussianMean => 1.0,
            AnalyticFamily::GaussianSecondMoment => 2.0 * mu * mu,
            AnalyticFamily::Gamma { shape } => mu * mu / shape,
            AnalyticFamily::Poisson => mu,
            AnalyticFamily::Binomial { trials, .. } => mu - mu * mu / trials as f64,
            AnalyticFamily::NegativeBinomial { failures, .. } => mu * (mu + failures) / failures,
            AnalyticFamily::InverseGaussian { lambda, .. } => mu * mu * mu / lambda,
        })
    }

    pub fn variance_profile(&self) -> VarianceFunctionProfile {
        let monotonicity = match *self {
            AnalyticFamily::GaussianMean => Monotonicity::Constant,
            AnalyticFamily::Binomial { trials, .. } => Monotonicity::Unimodal {
                peak: trials as f64 / 2.0,
            },
            _ => Monotonicity::Increasing,
        };
        VarianceFunctionProfile {
            family: *self,
            monotonicity,
            region: self.mean_domain(),
        }
    }

    /// Exact divergence `D(Q^mu || Q^nu)` between mean-parametrized
    /// members, through the Bregman identity
    /// `(betahat(mu) - betahat(nu)) mu + ln Z(betahat(nu)) - ln Z(betahat(mu))`.
    ///
    /// The inverse Gaussian case uses its closed form
    /// `lambda (mu - nu)^2 / (2 mu nu^2)` directly.
    pub fn divergence_mean_params(&self, mu: f64, nu: f64) -> Result<f64> {
        self.validate()?;
        self.check_mean("mu", mu)?;
        self.check_mean("nu", nu)?;
        if mu == nu {
            return Ok(0.0);
        }
        if let AnalyticFamily::InverseGaussian { lambda, .. } = *self {
            return Ok(lambda * (mu - nu) * (mu - nu) / (2.0 * mu * nu * nu));
        }
        let beta_mu = self.natural_of(mu)?;
        let beta_nu = self.natural_of(nu)?;
        let d = (beta_mu - beta_nu) * mu + self.log_partition(beta_nu)?
            - self.log_partition(beta_mu)?;
        // exact zero at mu == nu is handled above; clamp quadrature-free
        // rounding residue
        Ok(d.max(0.0))
    }

    /// The quadratic lower bound `(mu - nu)^2 / (2 V(nu))` plus a flag for
    /// whether the variance-function argument actually applies: `V`
    /// increasing requires `mu <= nu`, decreasing `mu >= nu`, and the
    /// unimodal binomial case requires `mu <= nu <= peak` or
    /// `mu >= nu >= peak` (so `nu` at the peak covers every `mu`).
    pub fn quadratic_lower_bound(&self, mu: f64, nu: f64) -> Result<(f64, bool)> {
        self.check_mean("mu", mu)?;
        self.bound_for_observed_mean(mu, nu)
    }

    /// Same bound for an observed mean that need not lie inside the mean
    /// domain (the expectation of an audited distribution is just a
    /// number); only the reference `nu` indexes a family member.
    pub fn bound_for_observed_mean(&self, mu: f64, nu: f64) -> Result<(f64, bool)> {
        self.validate()?;
        self.check_mean("nu", nu)?;
        let bound = (mu - nu) * (mu - nu) / (2.0 * self.variance_at_mean(nu)?);
        let applicable = match self.variance_profile().monotonicity {
            Monotonicity::Increasing => mu <= nu,
            Monotonicity::Decreasing => mu >= nu,
            Monotonicity::Constant => true,
            Monotonicity::Unimodal { peak } => (mu <= nu && nu <= peak) || (mu >= nu && nu >= peak),
        };
        Ok((bound, applicable))
    }

    /// The mean-value witness `eta` between `mu` and `nu` with
    /// `D(Q^mu || Q^nu) = (mu - nu)^2 / (2 V(eta))`.
    pub fn intermediate_eta(&self, mu: f64, nu: f64) -> Result<f64> {
        self.validate()?;
        self.check_mean("mu", mu)?;
        self.check_mean("nu", nu)?;
        if mu == nu {
            return Err(Error::WitnessDiagnostic {
                detail: "mu and nu must differ".to_string(),
            });
        }
        let d = self.divergence_mean_params(mu, nu)?;
        let lo = mu.min(nu);
        let hi = mu.max(nu);
        let gap = (mu - nu) * (mu - nu);
        let g = |eta: f64| match self.variance_at_mean(eta) {
            Ok(v) => gap / (2.0 * v) - d,
            Err(_) => f64::NAN,
        };
        let tol = 1e-10 * d.abs().max(1.0);
        locate_witness(&g, self.witness_knots(lo, hi), tol)
    }

    /// Knots at which the variance function is monotone in between: the
    /// interval endpoints, plus the interior peak for the unimodal case
    /// (where a same-sign pair of endpoints can hide a sign change).
    fn witness_knots(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self.variance_profile().monotonicity {
            Monotonicity::Unimodal { peak } if lo < peak && peak < hi => vec![lo, peak, hi],
            _ => vec![lo, hi],
        }
    }

    /// Divergence between naturally parametrized members together with a
    /// witness `gamma` between `a` and `b` satisfying
    /// `D(Q_a || Q_b) = V(mu_gamma) / 2 (a - b)^2`.
    pub fn divergence_natural_params(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        self.validate()?;
        self.check_natural("a", a)?;
        self.check_natural("b", b)?;
        if a == b {
            return Ok((0.0, a));
        }
        let d = self.divergence_mean_params(self.mean_of(a)?, self.mean_of(b)?)?;
        let lo = a.min(b);
        let hi = a.max(b);
        let gap = (a - b) * (a - b);
        let g = |gamma: f64| match self.mean_of(gamma).and_then(|m| self.variance_at_mean(m)) {
            Ok(v) => 0.5 * v * gap - d,
            Err(_) => f64::NAN,
        };
        let tol = 1e-10 * d.abs().max(1.0);
        // map the mean-space variance peak back to natural coordinates
        let knots = match self.variance_profile().monotonicity {
            Monotonicity::Unimodal { peak } => match self.natural_of(peak) {
                Ok(peak_beta) if lo < peak_beta && peak_beta < hi => vec![lo, peak_beta, hi],
                _ => vec![lo, hi],
            },
            _ => vec![lo, hi],
        };
        let gamma = locate_witness(&g, knots, tol)?;
        Ok((d, gamma))
    }

    /// Log-pmf of the member with mean `nu` (discrete families only).
    pub fn member_log_pmf(&self, nu: f64, k: i64) -> Result<f64> {
        self.validate()?;
        self.check_mean("nu", nu)?;
        match *self {
            AnalyticFamily::Poisson => Ok(if k < 0 {
                f64::NEG_INFINITY
            } else {
                k as f64 * nu.ln() - nu - ln_gamma(k as f64 + 1.0)
            }),
            AnalyticFamily::Binomial { trials, .. } => {
                let n = trials as f64;
                if k < 0 || k > trials as i64 {
                    return Ok(f64::NEG_INFINITY);
                }
                let p = nu / n;
                let kf = k as f64;
                Ok(
                    ln_gamma(n + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(n - kf + 1.0)
                        + kf * p.ln()
                        + (n - kf) * (1.0 - p).ln(),
                )
            }
            AnalyticFamily::NegativeBinomial { failures, .. } => {
                if k < 0 {
                    return Ok(f64::NEG_INFINITY);
                }
                let p = nu / (nu + failures);
                let kf = k as f64;
                Ok(
                    ln_gamma(kf + failures) - ln_gamma(failures) - ln_gamma(kf + 1.0)
                        + failures * (1.0 - p).ln()
                        + kf * p.ln(),
                )
            }
            _ => Err(Error::SupportMismatch {
                detail: format!("{self:?} is not a discrete family"),
            }),
        }
    }

    /// Log-density of the member with mean `nu` (continuous families only).
    pub fn member_log_pdf(&self, nu: f64, x: f64) -> Result<f64> {
        self.validate()?;
        self.check_mean("nu", nu)?;
        match *self {
            AnalyticFamily::GaussianMean => Ok(-0.5 * (x - nu) * (x - nu) - 0.5 * TAU.ln()),
            AnalyticFamily::GaussianSecondMoment => Ok(-0.5 * x * x / nu - 0.5 * (TAU * nu).ln()),
            AnalyticFamily::Gamma { shape } => {
                let scale = nu / shape;
                if x == 0.0 && shape == 1.0 {
                    // the exponential density is finite at the origin
                    return Ok(-scale.ln());
                }
                if x <= 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                Ok((shape - 1.0) * x.ln() - x / scale - ln_gamma(shape) - shape * scale.ln())
            }
            AnalyticFamily::InverseGaussian { lambda, .. } => {
                if x <= 0.0 {
                    return Ok(f64::NEG_INFINITY);
                }
                Ok(0.5 * (lambda / (TAU * x * x * x)).ln()
                    - lambda * (x - nu) * (x - nu) / (2.0 * nu * nu * x))
            }
            _ => Err(Error::SupportMismatch {
                detail: format!("{self:?} is not a continuous family"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_families() -> Vec<AnalyticFamily> {
        vec![
            AnalyticFamily::GaussianMean,
            AnalyticFamily::GaussianSecondMoment,
            AnalyticFamily::Gamma { shape: 1.0 },
            AnalyticFamily::Gamma { shape: 2.5 },
            AnalyticFamily::Poisson,
            AnalyticFamily::Binomial {
                trials: 10,
                base_prob: 0.5,
            },
            AnalyticFamily::NegativeBinomial {
                failures: 3.0,
                base_prob: 0.4,
            },
            AnalyticFamily::InverseGaussian {
                base_mean: 1.0,
                lambda: 2.0,
            },
        ]
    }

    /// A safe box of mean parameters for randomized sweeps, comfortably
    /// inside every family's mean domain.
    fn mean_box(family: &AnalyticFamily) -> (f64, f64) {
        match family {
            AnalyticFamily::GaussianMean => (-3.0, 3.0),
            AnalyticFamily::Binomial { trials, .. } => (0.05, *trials as f64 - 0.05),
            _ => (0.05, 5.0),
        }
    }

    #[test]
    fn log_partition_examples() {
        let g = AnalyticFamily::GaussianMean;
        assert_eq!(g.log_partition(0.0).unwrap(), 0.0);

        // int exp(beta x^2) phi(x) dx = (1 - 2 beta)^{-1/2}
        let g2 = AnalyticFamily::GaussianSecondMoment;
        let got = g2.log_partition(-0.5).unwrap();
        assert!((got + 0.5 * 2f64.ln()).abs() < 1e-15);
        // same integral by quadrature
        let scheme =
            crate::numerics::QuadratureScheme::new(crate::numerics::WeightKind::Gaussian, 48)
                .unwrap();
        let direct = scheme.integrate(&|x| (-0.5 * x * x).exp()).unwrap().ln();
        assert!((got - direct).abs() < 1e-12);

        let p = AnalyticFamily::Poisson;
        assert_eq!(p.log_partition(0.0).unwrap(), 0.0);
        // ln Z(beta) = e^beta - 1 against a direct pmf sum
        let beta = 0.3;
        let direct: f64 = (0..200)
            .map(|k| {
                let k = k as f64;
                (beta * k - 1.0 - ln_gamma(k + 1.0)).exp()
            })
            .sum();
        assert!((p.log_partition(beta).unwrap() - direct.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_partition_domain_errors_name_the_interval() {
        let g2 = AnalyticFamily::GaussianSecondMoment;
        let err = g2.log_partition(0.5).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("(-inf, 0.5)"), "message: {msg}");
    }

    #[test]
    fn mean_and_natural_maps() {
        let p = AnalyticFamily::Poisson;
        for &lambda in &[0.25, 1.0, 4.0] {
            assert!((p.natural_of(lambda).unwrap() - lambda.ln()).abs() < 1e-14);
        }
        let g = AnalyticFamily::GaussianMean;
        assert_eq!(g.mean_of(0.7).unwrap(), 0.7);
        assert_eq!(g.natural_of(-1.2).unwrap(), -1.2);
        let b = AnalyticFamily::Binomial {
            trials: 10,
            base_prob: 0.5,
        };
        assert!((b.mean_of(0.0).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn variance_examples() {
        let gamma = AnalyticFamily::Gamma { shape: 1.0 };
        assert!((gamma.variance_at_mean(2.0).unwrap() - 4.0).abs() < 1e-14);
        let b = AnalyticFamily::Binomial {
            trials: 10,
            base_prob: 0.5,
        };
        assert!((b.variance_at_mean(5.0).unwrap() - 2.5).abs() < 1e-14);
        let ig = AnalyticFamily::InverseGaussian {
            base_mean: 1.0,
            lambda: 2.0,
        };
        assert!((ig.variance_at_mean(1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!(b.variance_at_mean(10.0).is_err());
        assert!(gamma.variance_at_mean(0.0).is_err());
    }

    #[test]
    fn divergence_examples() {
        let g = AnalyticFamily::GaussianMean;
        assert!((g.divergence_mean_params(-0.5, 0.0).unwrap() - 0.125).abs() < 1e-15);

        // closed-form Poisson divergence as an independent oracle
        let p = AnalyticFamily::Poisson;
        let expected = 0.5 * (0.5f64 / 1.0).ln() + 1.0 - 0.5;
        assert!((p.divergence_mean_params(0.5, 1.0).unwrap() - expected).abs() < 1e-14);

        for family in all_families() {
            let (lo, hi) = mean_box(&family);
            let mu = 0.5 * (lo + hi);
            assert_eq!(family.divergence_mean_params(mu, mu).unwrap(), 0.0);
        }
    }

    #[test]
    fn gamma_divergence_closed_form_oracle() {
        // D = shape (mu/nu - 1 - ln(mu/nu))
        let fam = AnalyticFamily::Gamma { shape: 1.0 };
        let expected = (2f64 / 1.0).ln() + 1.0 / 2.0 - 1.0;
        assert!((fam.divergence_mean_params(1.0, 2.0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn inverse_gaussian_closed_form_matches_bregman() {
        let fam = AnalyticFamily::InverseGaussian {
            base_mean: 1.0,
            lambda: 2.0,
        };
        for &(mu, nu) in &[(0.5, 1.5), (2.0, 0.7), (1.0, 3.0)] {
            let closed = fam.divergence_mean_params(mu, nu).unwrap();
            let beta_mu = fam.natural_of(mu).unwrap();
            let beta_nu = fam.natural_of(nu).unwrap();
            let bregman = (beta_mu - beta_nu) * mu + fam.log_partition(beta_nu).unwrap()
                - fam.log_partition(beta_mu).unwrap();
            assert!(
                (closed - bregman).abs() < 1e-13 * closed.max(1.0),
                "({mu}, {nu}): {closed} vs {bregman}"
            );
        }
    }

    #[test]
    fn quadratic_lower_bound_examples() {
        let p = AnalyticFamily::Poisson;
        let (bound, ok) = p.quadratic_lower_bound(0.5, 1.0).unwrap();
        assert!((bound - 0.125).abs() < 1e-15);
        assert!(ok);

        let b = AnalyticFamily::Binomial {
            trials: 10,
            base_prob: 0.5,
        };
        let (bound, ok) = b.quadratic_lower_bound(3.0, 5.0).unwrap();
        assert!((bound - 0.8).abs() < 1e-14); // 2 (3 - 5)^2 / 10
        assert!(ok);
        // nu at the unimodal peak covers the other side too
        let (_, ok) = b.quadratic_lower_bound(8.0, 5.0).unwrap();
        assert!(ok);
        // off-peak, wrong side
        let (_, ok) = b.quadratic_lower_bound(4.9, 4.0).unwrap();
        assert!(!ok);
        let (_, ok) = b.quadratic_lower_bound(3.0, 4.0).unwrap();
        assert!(ok);

        let gamma = AnalyticFamily::Gamma { shape: 1.0 };
        let (bound, ok) = gamma.quadratic_lower_bound(1.0, 2.0).unwrap();
        assert!((bound - 0.125).abs() < 1e-15);
        assert!(ok);
    }

    #[test]
    fn eta_witness_examples() {
        // constant variance: any eta in the interval works
        let g = AnalyticFamily::GaussianMean;
        let eta = g.intermediate_eta(-0.5, 0.5).unwrap();
        assert!((-0.5..=0.5).contains(&eta));

        // Poisson: eta = (mu - nu)^2 / (2 D)
        let p = AnalyticFamily::Poisson;
        let d = p.divergence_mean_params(0.5, 1.0).unwrap();
        let eta = p.intermediate_eta(0.5, 1.0).unwrap();
        let oracle = 0.25 / (2.0 * d);
        assert!((eta - oracle).abs() < 1e-9, "{eta} vs {oracle}");
        assert!((0.5..=1.0).contains(&eta));

        // Gamma: identity residual at the returned witness
        let gamma = AnalyticFamily::Gamma { shape: 1.0 };
        let eta = gamma.intermediate_eta(1.0, 2.0).unwrap();
        assert!((1.0..=2.0).contains(&eta));
        let d = gamma.divergence_mean_params(1.0, 2.0).unwrap();
        let v = gamma.variance_at_mean(eta).unwrap();
        assert!((d - 1.0 / (2.0 * v)).abs() < 1e-9);

        assert!(p.intermediate_eta(1.0, 1.0).is_err());
    }

    #[test]
    fn natural_divergence_examples() {
        let g = AnalyticFamily::GaussianMean;
        let (d, gamma) = g.divergence_natural_params(-1.0, 0.0).unwrap();
        assert!((d - 0.5).abs() < 1e-14);
        assert!((-1.0..=0.0).contains(&gamma));

        let p = AnalyticFamily::Poisson;
        let (d, gamma) = p.divergence_natural_params(0.5f64.ln(), 0.0).unwrap();
        let expected = 0.5 * 0.5f64.ln() + 0.5;
        assert!((d - expected).abs() < 1e-13);
        assert!((0.5f64.ln()..=0.0).contains(&gamma));
        let v = p.variance_at_mean(p.mean_of(gamma).unwrap()).unwrap();
        let residual = d - 0.5 * v * (0.5f64.ln()) * (0.5f64.ln());
        assert!(residual.abs() < 1e-9);

        let (d, gamma) = p.divergence_natural_params(0.3, 0.3).unwrap();
        assert_eq!((d, gamma), (0.0, 0.3));
    }

    #[test]
    fn cumulant_derivative_identities() {
        // central differences of ln Z against the mean and variance maps;
        // the second difference uses a wider step to stay above the f64
        // noise floor
        for family in all_families() {
            let betas: Vec<f64> = match family {
                AnalyticFamily::GaussianSecondMoment => vec![-1.0, -0.2, 0.3],
                AnalyticFamily::Gamma { .. } => vec![-1.0, 0.0, 0.6],
                AnalyticFamily::NegativeBinomial { .. } => vec![-0.5, 0.0, 0.4],
                AnalyticFamily::InverseGaussian { .. } => vec![-1.0, 0.0, 0.5],
                _ => vec![-0.5, 0.0, 0.8],
            };
            for &beta in &betas {
                let h = 1e-5;
                let d1 = (family.log_partition(beta + h).unwrap()
                    - family.log_partition(beta - h).unwrap())
                    / (2.0 * h);
                let mean = family.mean_of(beta).unwrap();
                assert!(
                    (d1 - mean).abs() <= 1e-6 * mean.abs().max(1.0),
                    "{family:?} beta {beta}: {d1} vs {mean}"
                );
                let h2 = 1e-4;
                let d2 = (family.log_partition(beta + h2).unwrap()
                    - 2.0 * family.log_partition(beta).unwrap()
                    + family.log_partition(beta - h2).unwrap())
                    / (h2 * h2);
                let var = family.variance_at_mean(mean).unwrap();
                assert!(
                    (d2 - var).abs() <= 1e-6 * var.abs().max(1.0),
                    "{family:?} beta {beta}: {d2} vs {var}"
                );
            }
        }
    }

    #[test]
    fn inverse_map_consistency_on_grids() {
        for family in all_families() {
            for i in 1..40 {
                let beta = match family {
                    AnalyticFamily::GaussianSecondMoment => -2.0 + i as f64 * 0.06,
                    AnalyticFamily::Gamma { .. } => -2.0 + i as f64 * 0.07,
                    AnalyticFamily::NegativeBinomial { .. } => -2.0 + i as f64 * 0.07,
                    AnalyticFamily::InverseGaussian { .. } => -2.0 + i as f64 * 0.07,
                    _ => -2.0 + i as f64 * 0.1,
                };
                if !family.natural_domain().contains(beta) {
                    continue;
                }
                let mu = family.mean_of(beta).unwrap();
                if !family.mean_domain().contains(mu) {
                    continue;
                }
                let back = family.natural_of(mu).unwrap();
                assert!(
                    (back - beta).abs() <= 1e-12 * beta.abs().max(1.0),
                    "{family:?}: beta {beta} -> mu {mu} -> {back}"
                );
            }
        }
    }

    #[test]
    fn mean_map_strictly_increasing() {
        for family in all_families() {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..30 {
                let beta = -1.5 + i as f64 * 0.06;
                if !family.natural_domain().contains(beta) {
                    continue;
                }
                let m = family.mean_of(beta).unwrap();
                assert!(m > prev, "{family:?}: mean map not increasing at {beta}");
                prev = m;
            }
        }
    }

    #[test]
    fn variance_monotonicity_matches_finite_differences() {
        for family in all_families() {
            let profile = family.variance_profile();
            let (lo, hi) = mean_box(&family);
            let step = (hi - lo) / 24.0;
            for i in 0..24 {
                let mu = lo + step * i as f64;
                let dv = profile.evaluate(mu + 1e-6).unwrap() - profile.evaluate(mu).unwrap();
                match profile.monotonicity {
                    Monotonicity::Increasing => assert!(dv > 0.0, "{family:?} at {mu}"),
                    Monotonicity::Decreasing => assert!(dv < 0.0, "{family:?} at {mu}"),
                    Monotonicity::Constant => assert!(dv.abs() < 1e-12),
                    Monotonicity::Unimodal { peak } => {
                        if mu + 1e-6 < peak {
                            assert!(dv > 0.0, "{family:?} below peak at {mu}");
                        } else if mu > peak {
                            assert!(dv < 0.0, "{family:?} above peak at {mu}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn second_moment_family_variance_bound() {
        // D(N(0, s) || N(0, 1)) >= (s - 1)^2 / 4 for s <= 1
        let fam = AnalyticFamily::GaussianSecondMoment;
        for i in 1..=40 {
            let s = i as f64 / 40.0;
            let d = fam.divergence_mean_params(s, 1.0).unwrap();
            let gaussian_kl = 0.5 * (s - 1.0 - s.ln());
            assert!(
                (d - gaussian_kl).abs() < 1e-12,
                "family D is the Gaussian KL"
            );
            let bound = (s - 1.0) * (s - 1.0) / 4.0;
            assert!(d >= bound - 1e-12, "s = {s}: {d} < {bound}");
        }
    }

    #[test]
    fn tightness_of_bound_near_reference() {
        // ratio D / bound stays in [1, V(nu)/V(mu)] and tends to 1
        let p = AnalyticFamily::Poisson;
        let nu = 2.0;
        let mut prev_ratio = f64::INFINITY;
        for &delta in &[0.5, 0.25, 0.1, 0.05, 0.01, 1e-3, 1e-4] {
            let mu = nu - delta;
            let d = p.divergence_mean_params(mu, nu).unwrap();
            let (bound, ok) = p.quadratic_lower_bound(mu, nu).unwrap();
            assert!(ok);
            let ratio = d / bound;
            let cap = p.variance_at_mean(nu).unwrap() / p.variance_at_mean(mu).unwrap();
            assert!(ratio >= 1.0 - 1e-9, "delta {delta}: ratio {ratio}");
            assert!(
                ratio <= cap + 1e-9,
                "delta {delta}: ratio {ratio} cap {cap}"
            );
            assert!(ratio <= prev_ratio + 1e-12);
            prev_ratio = ratio;
        }
        assert!(prev_ratio - 1.0 < 1e-3);
    }

    proptest! {
        #[test]
        fn divergence_nonnegative_zero_iff_equal(
            idx in 0usize..8,
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            let family = all_families()[idx];
            let (lo, hi) = mean_box(&family);
            let mu = lo + a * (hi - lo);
            let nu = lo + b * (hi - lo);
            let d = family.divergence_mean_params(mu, nu).unwrap();
            prop_assert!(d >= 0.0);
            if (mu - nu).abs() > 1e-3 {
                prop_assert!(d > 0.0);
            }
            prop_assert_eq!(family.divergence_mean_params(mu, mu).unwrap(), 0.0);
        }

        #[test]
        fn bound_holds_whenever_applicable(
            idx in 0usize..8,
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            let family = all_families()[idx];
            let (lo, hi) = mean_box(&family);
            let mu = lo + a * (hi - lo);
            let nu = lo + b * (hi - lo);
            let (bound, applicable) = family.quadratic_lower_bound(mu, nu).unwrap();
            if applicable {
                let d = family.divergence_mean_params(mu, nu).unwrap();
                prop_assert!(
                    d >= bound - 1e-12,
                    "{:?} mu {} nu {}: D {} < bound {}", family, mu, nu, d, bound
                );
            }
        }

        #[test]
        fn witness_stays_in_interval(
            idx in 0usize..8,
            a in 0.0f64..1.0,
            b in 0.0f64..1.0,
        ) {
            let family = all_families()[idx];
            let (lo, hi) = mean_box(&family);
            let mu = lo + a * (hi - lo);
            let nu = lo + b * (hi - lo);
            prop_assume!((mu - nu).abs() > 1e-6);
            let eta = family.intermediate_eta(mu, nu).unwrap();
            prop_assert!(eta >= mu.min(nu) && eta <= mu.max(nu));
            let d = family.divergence_mean_params(mu, nu).unwrap();
            let v = family.variance_at_mean(eta).unwrap();
            let residual = d - (mu - nu) * (mu - nu) / (2.0 * v);
            prop_assert!(residual.abs() <= 1e-8 * d.max(1.0));
        }
    }
}
