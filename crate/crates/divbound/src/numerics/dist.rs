//! Concrete test distributions and Kullback-Leibler divergence against
//! discrete or density references. An infinite divergence is a distinguished
//! value, not an error: any finite bound is trivially satisfied by it.

use crate::tilt::TiltedFamily;
use crate::{Error, Result};
use serde::{Serialize, Serializer};

/// Divergence value with an explicit infinite marker.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn is_finite(&self) -> bool {
        matches!(self, Divergence::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Divergence::Finite(v) => Some(*v),
            Divergence::Infinite => None,
        }
    }

    /// Collapse to `f64`, mapping the infinite marker to `f64::INFINITY`.
    pub fn as_f64(&self) -> f64 {
        match self {
            Divergence::Finite(v) => *v,
            Divergence::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for Divergence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Divergence::Finite(v) => serializer.serialize_f64(*v),
            Divergence::Infinite => serializer.serialize_none(),
        }
    }
}

/// A concrete distribution: an integer-supported pmf, a density sampled on
/// a grid (integrated by the trapezoid rule), or a member of a tilted
/// family evaluated by quadrature.
#[derive(Clone, Debug)]
pub enum DistributionSpec {
    DiscretePmf { support: Vec<i64>, probs: Vec<f64> },
    GridDensity { nodes: Vec<f64>, values: Vec<f64> },
    TiltedMember { family: TiltedFamily, beta: f64 },
}

const PMF_NORM_TOL: f64 = 1e-12;
const GRID_NORM_TOL: f64 = 1e-8;

fn trapezoid(nodes: &[f64], values: &[f64]) -> f64 {
    nodes
        .windows(2)
        .zip(values.windows(2))
        .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
        .sum()
}

impl DistributionSpec {
    pub fn discrete(support: Vec<i64>, probs: Vec<f64>) -> Result<Self> {
        if support.len() != probs.len() || support.is_empty() {
            return Err(Error::InvalidDistribution {
                detail: format!(
                    "support ({}) and probability ({}) lengths must match and be nonempty",
                    support.len(),
                    probs.len()
                ),
            });
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution {
                detail: format!("negative or non-finite probability {p}"),
            });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PMF_NORM_TOL {
            return Err(Error::InvalidDistribution {
                detail: format!("pmf sums to {total}, expected 1 within {PMF_NORM_TOL:e}"),
            });
        }
        let mut sorted = support.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != support.len() {
            return Err(Error::InvalidDistribution {
                detail: "duplicate support points".to_string(),
            });
        }
        Ok(Self::DiscretePmf { support, probs })
    }

    pub fn grid(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::InvalidDistribution {
                detail: "grid needs at least two matching nodes and values".to_string(),
            });
        }
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidDistribution {
                detail: "grid nodes must be strictly increasing".to_string(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidDistribution {
                detail: format!("negative or non-finite density value {v}"),
            });
        }
        let total = trapezoid(&nodes, &values);
        if (total - 1.0).abs() > GRID_NORM_TOL {
            return Err(Error::InvalidDistribution {
                detail: format!(
                    "grid density integrates to {total}, expected 1 within {GRID_NORM_TOL:e}"
                ),
            });
        }
        Ok(Self::GridDensity { nodes, values })
    }

    /// Build a discrete spec from a pmf on `{k0, k0+1, ...}`, truncated at
    /// the first point (past the mode) where the pmf drops below `1e-18`
    /// and renormalized. Returns the spec together with the dropped tail
    /// mass as a diagnostic.
    pub fn truncated_discrete(pmf: &dyn Fn(i64) -> f64, k0: i64) -> Result<(Self, f64)> {
        const FLOOR: f64 = 1e-18;
        let mut support = Vec::new();
        let mut probs = Vec::new();
        let mut k = k0;
        let mut rising = true;
        loop {
            let p = pmf(k);
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDistribution {
                    detail: format!("pmf invalid at k = {k}: {p}"),
                });
            }
            if p < FLOOR && !rising {
                break;
            }
            if p >= FLOOR {
                rising = probs.last().is_none_or(|&prev| p >= prev);
                support.push(k);
                probs.push(p);
            }
            k += 1;
            if k - k0 > 1_000_000 {
                return Err(Error::InvalidDistribution {
                    detail: "pmf truncation did not terminate".to_string(),
                });
            }
        }
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidDistribution {
                detail: "pmf has no mass above the truncation floor".to_string(),
            });
        }
        let dropped = (1.0 - total).max(0.0);
        for p in &mut probs {
            *p /= total;
        }
        Ok((Self::DiscretePmf { support, probs }, dropped))
    }

    pub fn tilted(family: TiltedFamily, beta: f64) -> Result<Self> {
        if !family.beta_domain().contains(beta) {
            return Err(Error::OutOfDomain {
                name: "beta",
                value: beta,
                domain: family.beta_domain().to_string(),
            });
        }
        Ok(Self::TiltedMember { family, beta })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Self::DiscretePmf { .. })
    }

    /// Smallest point carrying mass (grid lower edge for densities).
    pub fn support_lo(&self) -> f64 {
        match self {
            Self::DiscretePmf { support, probs } => support
                .iter()
                .zip(probs)
                .filter(|(_, &p)| p > 0.0)
                .map(|(&k, _)| k as f64)
                .fold(f64::INFINITY, f64::min),
            Self::GridDensity { nodes, .. } => nodes[0],
            Self::TiltedMember { family, .. } => match family.base() {
                crate::tilt::TiltBase::Gamma { .. } => 0.0,
                crate::tilt::TiltBase::Gaussian => f64::NEG_INFINITY,
            },
        }
    }

    /// Expectation of `g` under the distribution.
    pub fn expect(&self, g: &dyn Fn(f64) -> f64) -> Result<f64> {
        match self {
            Self::DiscretePmf { support, probs } => {
                let mut acc = 0.0;
                for (&k, &p) in support.iter().zip(probs) {
                    if p == 0.0 {
                        continue;
                    }
                    let v = g(k as f64);
                    if !v.is_finite() {
                        return Err(Error::NonFiniteEvaluation { node: k as f64 });
                    }
                    acc += p * v;
                }
                Ok(acc)
            }
            Self::GridDensity { nodes, values } => {
                let weighted: Vec<f64> = nodes
                    .iter()
                    .zip(values)
                    .map(|(&x, &p)| if p == 0.0 { 0.0 } else { p * g(x) })
                    .collect();
                if weighted.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidDistribution {
                        detail: "non-finite integrand on grid".to_string(),
                    });
                }
                Ok(trapezoid(nodes, &weighted))
            }
            Self::TiltedMember { family, beta } => family.expect(*beta, g),
        }
    }

    pub fn mean(&self) -> Result<f64> {
        self.expect(&|x| x)
    }

    pub fn variance(&self) -> Result<f64> {
        let m = self.mean()?;
        self.expect(&|x| (x - m) * (x - m))
    }

    /// `D(self || q)` for a discrete reference pmf.
    pub fn divergence_vs_pmf(&self, q: &dyn Fn(i64) -> f64) -> Result<Divergence> {
        match self {
            Self::DiscretePmf { support, probs } => {
                let mut acc = 0.0;
                for (&k, &p) in support.iter().zip(probs) {
                    if p == 0.0 {
                        continue; // 0 ln 0 := 0
                    }
                    let qk = q(k);
                    if qk.is_nan() || qk < 0.0 {
                        return Err(Error::InvalidDistribution {
                            detail: format!("reference pmf invalid at k = {k}: {qk}"),
                        });
                    }
                    if qk == 0.0 {
                        return Ok(Divergence::Infinite);
                    }
                    acc += p * (p / qk).ln();
                }
                Ok(Divergence::Finite(acc))
            }
            _ => Err(Error::SupportMismatch {
                detail: "discrete reference requires a discrete distribution".to_string(),
            }),
        }
    }

    /// `D(self || q)` for a density reference given by its log-density.
    pub fn divergence_vs_log_density(&self, ln_q: &dyn Fn(f64) -> f64) -> Result<Divergence> {
        match self {
            Self::DiscretePmf { .. } => Err(Error::SupportMismatch {
                detail: "density reference requires a grid or tilted distribution".to_string(),
            }),
            Self::GridDensity { nodes, values } => {
                let mut integrand = Vec::with_capacity(nodes.len());
                for (&x, &p) in nodes.iter().zip(values) {
                    if p == 0.0 {
                        integrand.push(0.0);
                        continue;
                    }
                    let lq = ln_q(x);
                    if lq == f64::NEG_INFINITY {
                        return Ok(Divergence::Infinite);
                    }
                    if !lq.is_finite() {
                        return Err(Error::NonFiniteEvaluation { node: x });
                    }
                    integrand.push(p * (p.ln() - lq));
                }
                Ok(Divergence::Finite(trapezoid(nodes, &integrand)))
            }
            Self::TiltedMember { family, beta } => {
                // D(Q_beta || q) = D(Q_beta || Q_0) + E_beta[ln q_0 - ln q];
                // a reference vanishing at any quadrature node means the
                // member has mass where the reference has none
                let scheme = family.scheme();
                for &x in scheme.nodes().iter().chain(scheme.refined_nodes()) {
                    if ln_q(x) == f64::NEG_INFINITY {
                        return Ok(Divergence::Infinite);
                    }
                }
                let from_base = family.divergence_from_base(*beta)?;
                let base = family.base().clone();
                let shift = family.expect(*beta, &|x| base.log_pdf(x) - ln_q(x))?;
                Ok(Divergence::Finite(from_base + shift))
            }
        }
    }
}
