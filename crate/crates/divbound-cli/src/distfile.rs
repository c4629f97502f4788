//! Distribution files: a `kind,{pmf|grid}` header followed by `x,p` rows.
//!
//! Normalization drift up to 1e-8 is corrected silently; anything larger
//! requires an explicit `--renormalize`.

use anyhow::{anyhow, bail, Result};
use divbound::numerics::DistributionSpec;

const NORM_TOL: f64 = 1e-8;

pub fn parse_distribution(text: &str, renormalize: bool) -> Result<DistributionSpec> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| anyhow!("line 1: empty distribution file"))?;
    let kind = match header.trim() {
        "kind,pmf" => Kind::Pmf,
        "kind,grid" => Kind::Grid,
        other => bail!("line 1: expected 'kind,pmf' or 'kind,grid', found '{other}'"),
    };

    let mut xs: Vec<f64> = Vec::new();
    let mut ps: Vec<f64> = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let mut parts = line.trim().split(',');
        let x: f64 = parts
            .next()
            .ok_or_else(|| anyhow!("line {line_no}: missing x column"))?
            .trim()
            .parse()
            .map_err(|e| anyhow!("line {line_no}: bad x value: {e}"))?;
        let p: f64 = parts
            .next()
            .ok_or_else(|| anyhow!("line {line_no}: missing p column"))?
            .trim()
            .parse()
            .map_err(|e| anyhow!("line {line_no}: bad p value: {e}"))?;
        if parts.next().is_some() {
            bail!("line {line_no}: expected exactly two columns");
        }
        if !p.is_finite() || p < 0.0 {
            bail!("line {line_no}: negative or non-finite probability {p}");
        }
        if kind == Kind::Pmf && x.fract() != 0.0 {
            bail!("line {line_no}: pmf support point {x} is not an integer");
        }
        xs.push(x);
        ps.push(p);
    }
    if xs.is_empty() {
        bail!("no data rows after the header");
    }

    let total = match kind {
        Kind::Pmf => ps.iter().sum::<f64>(),
        Kind::Grid => xs
            .windows(2)
            .zip(ps.windows(2))
            .map(|(x, p)| 0.5 * (x[1] - x[0]) * (p[0] + p[1]))
            .sum(),
    };
    if !total.is_finite() || total <= 0.0 {
        bail!("distribution has non-positive total mass {total}");
    }
    if (total - 1.0).abs() > NORM_TOL && !renormalize {
        bail!(
            "total mass {total} deviates from 1 by more than {NORM_TOL:e}; \
             pass --renormalize to rescale"
        );
    }
    // Pmf rows always rescale to an exact unit sum (the natural reading of
    // the file). Grid values are kept verbatim when inside tolerance:
    // rescaling would bias every pointwise density comparison by ln(total).
    match kind {
        Kind::Pmf => {
            for p in &mut ps {
                *p /= total;
            }
        }
        Kind::Grid if renormalize => {
            for p in &mut ps {
                *p /= total;
            }
        }
        Kind::Grid => {}
    }

    let spec = match kind {
        Kind::Pmf => {
            let support: Vec<i64> = xs.iter().map(|&x| x as i64).collect();
            DistributionSpec::discrete(support, ps)?
        }
        Kind::Grid => DistributionSpec::grid(xs, ps)?,
    };
    Ok(spec)
}

#[derive(PartialEq, Clone, Copy)]
enum Kind {
    Pmf,
    Grid,
}
