//! Target spec mini-grammar:
//!
//! * `gamma:<alpha>:laguerre:<k>` — Gamma reference with the order-k
//!   normalized Laguerre moment bound
//! * `gaussian:hermite:<n>` — standard normal with the (even) order-n
//!   normalized Hermite moment bound
//! * `poisson:<lambda>`, `binomial:<n>:<p>`, `negbin:<r>:<p>`,
//!   `invgauss:<mu>:<lambda>` — mean-based family bounds

use anyhow::{anyhow, bail, Result};
use divbound::expfam::AnalyticFamily;
use divbound::verify::BoundTarget;

pub fn parse_target(spec: &str) -> Result<BoundTarget> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str, what: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| anyhow!("target '{spec}': cannot parse {what} from '{s}'"))
    };
    match parts.as_slice() {
        ["gamma", alpha, "laguerre", k] => {
            let alpha = num(alpha, "alpha")?;
            if alpha <= -1.0 {
                bail!("target '{spec}': alpha must exceed -1");
            }
            let order: usize = k
                .parse()
                .map_err(|_| anyhow!("target '{spec}': bad Laguerre order '{k}'"))?;
            Ok(BoundTarget::GammaLaguerre { alpha, order })
        }
        ["gaussian", "hermite", n] => {
            let order: usize = n
                .parse()
                .map_err(|_| anyhow!("target '{spec}': bad Hermite order '{n}'"))?;
            if order == 0 || !order.is_multiple_of(2) {
                bail!("target '{spec}': Hermite order must be a positive even integer");
            }
            Ok(BoundTarget::GaussianHermite { order })
        }
        ["poisson", lambda] => {
            let lambda = num(lambda, "lambda")?;
            if lambda <= 0.0 {
                bail!("target '{spec}': lambda must be positive");
            }
            Ok(BoundTarget::Family {
                family: AnalyticFamily::Poisson,
                nu: lambda,
            })
        }
        ["binomial", n, p] => {
            let trials: u32 = n
                .parse()
                .map_err(|_| anyhow!("target '{spec}': bad trial count '{n}'"))?;
            let p = num(p, "p")?;
            if trials == 0 || !(p > 0.0 && p < 1.0) {
                bail!("target '{spec}': need n >= 1 and p in (0, 1)");
            }
            Ok(BoundTarget::Family {
                family: AnalyticFamily::Binomial {
                    trials,
                    base_prob: p,
                },
                nu: trials as f64 * p,
            })
        }
        ["negbin", r, p] => {
            let failures = num(r, "r")?;
            let p = num(p, "p")?;
            if failures <= 0.0 || !(p > 0.0 && p < 1.0) {
                bail!("target '{spec}': need r > 0 and p in (0, 1)");
            }
            Ok(BoundTarget::Family {
                family: AnalyticFamily::NegativeBinomial {
                    failures,
                    base_prob: p,
                },
                nu: failures * p / (1.0 - p),
            })
        }
        ["invgauss", mu, lambda] => {
            let mu = num(mu, "mu")?;
            let lambda = num(lambda, "lambda")?;
            if mu <= 0.0 || lambda <= 0.0 {
                bail!("target '{spec}': need mu > 0 and lambda > 0");
            }
            Ok(BoundTarget::Family {
                family: AnalyticFamily::InverseGaussian {
                    base_mean: mu,
                    lambda,
                },
                nu: mu,
            })
        }
        _ => bail!(
            "unrecognized target '{spec}'; expected gamma:<alpha>:laguerre:<k>, \
             gaussian:hermite:<n>, poisson:<lambda>, binomial:<n>:<p>, \
             negbin:<r>:<p>, or invgauss:<mu>:<lambda>"
        ),
    }
}
