//! Laguerre and probabilists' Hermite polynomials, their orthonormal
//! variants, and the structural facts (degree-2 minimum, Hermite-Laguerre
//! bridge) the divergence bounds rest on.
//!
//! Conventions:
//!
//! * `L_n^alpha` follows the three-term recurrence `L_0 = 1`,
//!   `L_1 = 1 + alpha - x`,
//!   `(n+1) L_{n+1} = (2n + 1 + alpha - x) L_n - (n + alpha) L_{n-1}`,
//!   orthogonal under the Gamma(alpha + 1, 1) probability weight.
//! * The orthonormal version is
//!   `Ltilde_n^alpha = (-1)^n L_n^alpha / C(n + alpha, n)^(1/2)`; it has unit
//!   norm and positive leading coefficient.
//! * `He_n` is the probabilists' Hermite polynomial (`He_0 = 1`,
//!   `He_1 = x`, `He_{n+1} = x He_n - n He_{n-1}`), orthogonal under the
//!   standard normal; `Htilde_n = He_n / (n!)^(1/2)` is orthonormal.

mod rational;

use crate::numerics::special::generalized_binomial;
use crate::{Error, Result};
use rational::Ratio;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "alpha",
            value: alpha,
            domain: "(-1, inf)".to_string(),
        })
    }
}

/// `L_n^alpha(x)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `Ltilde_n^alpha(x) = (-1)^n L_n^alpha(x) / C(n + alpha, n)^(1/2)`.
pub fn normalized_laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * laguerre(n, alpha, x)? / generalized_binomial(n, alpha).sqrt())
}

/// Location and value of the minimum of `Ltilde_2^alpha` over the reals.
///
/// The numerator `x^2 - 2(alpha + 2) x + (alpha + 2)(alpha + 1)` is minimal
/// at `x = alpha + 2`, where the normalized polynomial takes the value
/// `-2^(-1/2) (1 + 1/(alpha + 1))^(1/2)`.
pub fn laguerre2_extremum(alpha: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    let argmin = alpha + 2.0;
    let min_value = -(0.5 * (1.0 + 1.0 / (alpha + 1.0))).sqrt();
    Ok((argmin, min_value))
}

/// Probabilists' Hermite polynomial `He_n(x)`.
pub fn hermite_prob(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Htilde_n(x) = He_n(x) / (n!)^(1/2)`, orthonormal under the standard
/// normal weight.
pub fn normalized_hermite(n: usize, x: f64) -> f64 {
    hermite_prob(n, x) / factorial(n).sqrt()
}

/// Both sides of `He_{2n}(x) = (-2)^n n! L_n^{-1/2}(x^2 / 2)`.
pub fn hermite_laguerre_bridge(n: usize, x: f64) -> (f64, f64) {
    let lhs = hermite_prob(2 * n, x);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = sign
        * (2.0f64).powi(n as i32)
        * factorial(n)
        * laguerre(n, -0.5, 0.5 * x * x).expect("alpha = -1/2 is admissible");
    (lhs, rhs)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[derive(Clone, Debug)]
enum CoeffRepr {
    /// Exact rationals times a common floating-point scale. The scale is 1
    /// for plain Laguerre/Hermite polynomials and the irrational norm
    /// factor for the orthonormal variants.
    Exact {
        coeffs: Vec<Ratio>,
        scale: f64,
    },
    Float(Vec<f64>),
}

/// A polynomial with coefficients stored in ascending powers, used as the
/// sufficient statistic of tilted families.
///
/// Coefficients of Laguerre polynomials are kept in exact rational form
/// when `2 alpha` is an integer and the expansion fits in `i128`; this is
/// the case for every half-integer shape in the condition table and removes
/// one rounding source from the audits built on top.
#[derive(Clone, Debug)]
pub struct PolynomialStatistic {
    repr: CoeffRepr,
}

impl PolynomialStatistic {
    /// Build from ascending coefficients; exact trailing zeros are trimmed
    /// so that `degree` is the index of the last nonzero coefficient.
    pub fn from_coefficients(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedStatistic {
                detail: "non-finite coefficient".to_string(),
            });
        }
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Ok(Self {
            repr: CoeffRepr::Float(coeffs),
        })
    }

    /// Coefficients of `L_n^alpha`.
    pub fn laguerre(n: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if let Some(exact) = laguerre_coeffs_exact(n, alpha) {
            return Ok(Self {
                repr: CoeffRepr::Exact {
                    coeffs: exact,
                    scale: 1.0,
                },
            });
        }
        Ok(Self {
            repr: CoeffRepr::Float(laguerre_coeffs_float(n, alpha)),
        })
    }

    /// Coefficients of `Ltilde_n^alpha`.
    pub fn normalized_laguerre(n: usize, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let norm = generalized_binomial(n, alpha).sqrt();
        let sign = if n.is_multiple_of(2) { 1 } else { -1 };
        if let Some(mut exact) = laguerre_coeffs_exact(n, alpha) {
            for c in &mut exact {
                *c = c
                    .mul(Ratio::from_int(sign))
                    .expect("sign flip cannot overflow");
            }
            return Ok(Self {
                repr: CoeffRepr::Exact {
                    coeffs: exact,
                    scale: 1.0 / norm,
                },
            });
        }
        let coeffs = laguerre_coeffs_float(n, alpha)
            .into_iter()
            .map(|c| sign as f64 * c / norm)
            .collect();
        Ok(Self {
            repr: CoeffRepr::Float(coeffs),
        })
    }

    /// Coefficients of `He_n`.
    pub fn hermite(n: usize) -> Self {
        Self {
            repr: CoeffRepr::Exact {
                coeffs: hermite_coeffs_exact(n),
                scale: 1.0,
            },
        }
    }

    /// Coefficients of `Htilde_n = He_n / (n!)^(1/2)`.
    pub fn normalized_hermite(n: usize) -> Self {
        Self {
            repr: CoeffRepr::Exact {
                coeffs: hermite_coeffs_exact(n),
                scale: 1.0 / factorial(n).sqrt(),
            },
        }
    }

    pub fn degree(&self) -> usize {
        match &self.repr {
            CoeffRepr::Exact { coeffs, .. } => {
                let mut deg = coeffs.len() - 1;
                while deg > 0 && coeffs[deg].is_zero() {
                    deg -= 1;
                }
                deg
            }
            CoeffRepr::Float(coeffs) => {
                let mut deg = coeffs.len() - 1;
                while deg > 0 && coeffs[deg] == 0.0 {
                    deg -= 1;
                }
                deg
            }
        }
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coefficient(&self, k: usize) -> f64 {
        match &self.repr {
            CoeffRepr::Exact { coeffs, scale } => coeffs.get(k).map_or(0.0, |c| c.to_f64() * scale),
            CoeffRepr::Float(coeffs) => coeffs.get(k).copied().unwrap_or(0.0),
        }
    }

    pub fn coefficients(&self) -> Vec<f64> {
        (0..=self.degree()).map(|k| self.coefficient(k)).collect()
    }

    pub fn leading_coefficient(&self) -> f64 {
        self.coefficient(self.degree())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match &self.repr {
            CoeffRepr::Exact { coeffs, scale } => {
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = acc * x + c.to_f64();
                }
                acc * scale
            }
            CoeffRepr::Float(coeffs) => {
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc
            }
        }
    }

    #[cfg(test)]
    fn exact_coefficients(&self) -> Option<(&[Ratio], f64)> {
        match &self.repr {
            CoeffRepr::Exact { coeffs, scale } => Some((coeffs, *scale)),
            CoeffRepr::Float(_) => None,
        }
    }
}

/// Exact expansion of `L_n^alpha` when `2 alpha` is a small integer.
/// Returns `None` when alpha is not half-integral or i128 overflows.
fn laguerre_coeffs_exact(n: usize, alpha: f64) -> Option<Vec<Ratio>> {
    let two_alpha = 2.0 * alpha;
    if two_alpha.fract() != 0.0 || two_alpha.abs() > 1e6 {
        return None;
    }
    let alpha_r = Ratio::new(two_alpha as i128, 2)?;
    if n == 0 {
        return Some(vec![Ratio::one()]);
    }
    // L_0 = 1; L_1 = (1 + alpha) - x
    let mut prev = vec![Ratio::one()];
    let mut cur = vec![alpha_r.add(Ratio::one())?, Ratio::from_int(-1)];
    for k in 1..n {
        let kf = Ratio::from_int(k as i128);
        let a = kf
            .mul(Ratio::from_int(2))?
            .add(Ratio::one())?
            .add(alpha_r)?; // 2k + 1 + alpha
        let b = kf.add(alpha_r)?; // k + alpha
        let div = kf.add(Ratio::one())?; // k + 1
        let mut next = vec![Ratio::zero(); cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i] = next[i].add(a.mul(c)?)?;
            next[i + 1] = next[i + 1].sub(c)?;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] = next[i].sub(b.mul(c)?)?;
        }
        for c in &mut next {
            *c = c.div(div)?;
        }
        prev = cur;
        cur = next;
    }
    Some(cur)
}

fn laguerre_coeffs_float(n: usize, alpha: f64) -> Vec<f64> {
    if n == 0 {
        return vec![1.0];
    }
    let mut prev = vec![1.0];
    let mut cur = vec![1.0 + alpha, -1.0];
    for k in 1..n {
        let kf = k as f64;
        let a = 2.0 * kf + 1.0 + alpha;
        let b = kf + alpha;
        let div = kf + 1.0;
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i] += a * c;
            next[i + 1] -= c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= b * c;
        }
        for c in &mut next {
            *c /= div;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn hermite_coeffs_exact(n: usize) -> Vec<Ratio> {
    if n == 0 {
        return vec![Ratio::one()];
    }
    let mut prev = vec![Ratio::one()];
    let mut cur = vec![Ratio::zero(), Ratio::one()];
    for k in 1..n {
        let mut next = vec![Ratio::zero(); cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c).expect("hermite coefficients fit i128");
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] = next[i]
                .sub(
                    Ratio::from_int(k as i128)
                        .mul(c)
                        .expect("hermite coefficients fit i128"),
                )
                .expect("hermite coefficients fit i128");
        }
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_degree_zero_is_one() {
        assert_eq!(laguerre(0, 0.0, 5.0).unwrap(), 1.0);
    }

    #[test]
    fn laguerre_rejects_alpha_at_minus_one() {
        assert!(laguerre(2, -1.0, 0.0).is_err());
        assert!(laguerre2_extremum(-1.5).is_err());
    }

    #[test]
    fn laguerre_2_half_shape_at_zero() {
        // L_2^{-1/2}(x) = x^2/2 - 3x/2 + 3/8
        assert!((laguerre(2, -0.5, 0.0).unwrap() - 0.375).abs() < 1e-15);
    }

    #[test]
    fn laguerre_3_alpha0_at_one() {
        // L_3^0(x) = -x^3/6 + 3x^2/2 - 3x + 1, expanded by hand
        let expected = -1.0 / 6.0 + 1.5 - 3.0 + 1.0;
        assert!((laguerre(3, 0.0, 1.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn normalized_laguerre_examples() {
        // generic degree-2 formula on a grid
        for &alpha in &[-0.5f64, 0.0, 1.0, 2.5, 6.0] {
            let norm = (2.0 * (2.0 + alpha) * (1.0 + alpha)).sqrt();
            for i in 0..40 {
                let x = -2.0 + 0.3 * i as f64;
                let expected =
                    (x * x - 2.0 * (alpha + 2.0) * x + (alpha + 2.0) * (alpha + 1.0)) / norm;
                let got = normalized_laguerre(2, alpha, x).unwrap();
                assert!((got - expected).abs() < 1e-13 * expected.abs().max(1.0));
            }
        }
        // (x^2 - 3x + 3/4) / (3/2)^(1/2) at x = 0
        let got = normalized_laguerre(2, -0.5, 0.0).unwrap();
        assert!((got - 0.75 / 1.5f64.sqrt()).abs() < 1e-14);
        // Ltilde_1^0 = x - 1
        assert!((normalized_laguerre(1, 0.0, 0.0).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn laguerre2_extremum_values() {
        let (argmin, min) = laguerre2_extremum(0.0).unwrap();
        assert!((argmin - 2.0).abs() < 1e-15);
        assert!((min + 1.0).abs() < 1e-15);

        let (argmin, min) = laguerre2_extremum(-0.5).unwrap();
        assert!((argmin - 1.5).abs() < 1e-15);
        assert!((min + 1.5f64.sqrt()).abs() < 1e-15); // -1.2247...

        // large alpha: the minimum value tends to -2^{-1/2}
        let (_, min) = laguerre2_extremum(1e7).unwrap();
        assert!((min + 0.5f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn laguerre2_extremum_matches_numerical_minimum() {
        // ternary search over the unimodal normalized quadratic
        for &alpha in &[-0.5, 0.0, 1.0, 2.5, 6.0, 10.0] {
            let f = |x: f64| normalized_laguerre(2, alpha, x).unwrap();
            let (mut lo, mut hi) = (0.0, 4.0 * (alpha + 2.0));
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if f(m1) < f(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let x_num = 0.5 * (lo + hi);
            let (argmin, min) = laguerre2_extremum(alpha).unwrap();
            assert!((f(x_num) - min).abs() < 1e-10, "alpha {alpha}");
            assert!((x_num - argmin).abs() < 1e-6, "alpha {alpha}");
        }
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite_prob(1, 0.0), 0.0);
        assert_eq!(hermite_prob(2, 1.0), 0.0); // He_2 = x^2 - 1
        assert_eq!(hermite_prob(4, 0.0), 3.0); // He_4 = x^4 - 6x^2 + 3
        assert!((normalized_hermite(4, 0.0) - 3.0 / 24f64.sqrt()).abs() < 1e-15);
        assert_eq!(normalized_hermite(0, 17.3), 1.0);
    }

    #[test]
    fn bridge_identity_examples() {
        let (lhs, rhs) = hermite_laguerre_bridge(1, 2.0);
        assert!((lhs - 3.0).abs() < 1e-14);
        assert!((rhs - 3.0).abs() < 1e-14);

        let (lhs, rhs) = hermite_laguerre_bridge(0, 0.7);
        assert_eq!((lhs, rhs), (1.0, 1.0));

        let (lhs, rhs) = hermite_laguerre_bridge(2, 0.0);
        assert!((lhs - 3.0).abs() < 1e-14);
        assert!((rhs - 3.0).abs() < 1e-14);
    }

    #[test]
    fn bridge_identity_on_grid() {
        for n in 0..=4usize {
            for i in 0..=100 {
                let x = -5.0 + 0.1 * i as f64;
                let (lhs, rhs) = hermite_laguerre_bridge(n, x);
                let tol = 1e-10 * lhs.abs().max(rhs.abs()).max(1.0);
                assert!((lhs - rhs).abs() <= tol, "n {n} x {x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn exact_coefficients_match_hand_expansion() {
        // L_2^{-1/2} = 3/8 - 3x/2 + x^2/2
        let p = PolynomialStatistic::laguerre(2, -0.5).unwrap();
        let (coeffs, scale) = p.exact_coefficients().unwrap();
        assert_eq!(scale, 1.0);
        assert_eq!(coeffs[0], Ratio::new(3, 8).unwrap());
        assert_eq!(coeffs[1], Ratio::new(-3, 2).unwrap());
        assert_eq!(coeffs[2], Ratio::new(1, 2).unwrap());

        // L_3^0 = 1 - 3x + 3x^2/2 - x^3/6
        let p = PolynomialStatistic::laguerre(3, 0.0).unwrap();
        let (coeffs, _) = p.exact_coefficients().unwrap();
        assert_eq!(coeffs[0], Ratio::from_int(1));
        assert_eq!(coeffs[1], Ratio::from_int(-3));
        assert_eq!(coeffs[2], Ratio::new(3, 2).unwrap());
        assert_eq!(coeffs[3], Ratio::new(-1, 6).unwrap());

        // L_4^{1/2} hand-expanded from the recurrence:
        // 4 L_4 = (7 + 1/2 - x) L_3 - (3 + 1/2) L_2 with
        // L_2^{1/2} = x^2/2 - 5x/2 + 15/8,
        // L_3^{1/2} = -x^3/6 + 7x^2/4 - 35x/8 + 35/16.
        let p = PolynomialStatistic::laguerre(4, 0.5).unwrap();
        let (coeffs, _) = p.exact_coefficients().unwrap();
        assert_eq!(coeffs[4], Ratio::new(1, 24).unwrap());
        assert_eq!(coeffs[3], Ratio::new(-3, 4).unwrap());
        assert_eq!(coeffs[2], Ratio::new(63, 16).unwrap());
        assert_eq!(coeffs[1], Ratio::new(-105, 16).unwrap());
        assert_eq!(coeffs[0], Ratio::new(315, 128).unwrap());

        // He_4 = x^4 - 6x^2 + 3
        let h = PolynomialStatistic::hermite(4);
        let (coeffs, _) = h.exact_coefficients().unwrap();
        let ints: Vec<i128> = vec![3, 0, -6, 0, 1];
        for (c, i) in coeffs.iter().zip(ints) {
            assert_eq!(*c, Ratio::from_int(i));
        }
    }

    #[test]
    fn coefficient_eval_matches_value_recurrence() {
        for &(n, alpha) in &[
            (1usize, -0.5),
            (2, 0.0),
            (3, -0.5),
            (4, 2.5),
            (5, 0.25),
            (6, 6.0),
        ] {
            let p = PolynomialStatistic::normalized_laguerre(n, alpha).unwrap();
            for i in 0..30 {
                let x = 0.4 * i as f64;
                let direct = normalized_laguerre(n, alpha, x).unwrap();
                let via_coeffs = p.eval(x);
                let tol = 1e-11 * direct.abs().max(1.0);
                assert!(
                    (direct - via_coeffs).abs() <= tol,
                    "n {n} alpha {alpha} x {x}: {direct} vs {via_coeffs}"
                );
            }
        }
    }

    #[test]
    fn positive_leading_coefficient() {
        for n in 1..=6usize {
            for &alpha in &[-0.5, 0.0, 1.0, 2.5, 6.0] {
                let p = PolynomialStatistic::normalized_laguerre(n, alpha).unwrap();
                assert!(p.leading_coefficient() > 0.0, "n {n} alpha {alpha}");
                assert_eq!(p.degree(), n);
            }
            let h = PolynomialStatistic::normalized_hermite(n);
            assert!(h.leading_coefficient() > 0.0);
        }
    }

    #[test]
    fn non_half_integer_alpha_uses_float_path() {
        let p = PolynomialStatistic::laguerre(3, 0.3).unwrap();
        assert!(p.exact_coefficients().is_none());
        for i in 0..20 {
            let x = 0.5 * i as f64;
            let direct = laguerre(3, 0.3, x).unwrap();
            assert!((p.eval(x) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn normalized_hermite_is_orthonormal_under_the_gaussian() {
        use crate::numerics::{QuadratureScheme, WeightKind};
        let scheme = QuadratureScheme::new(WeightKind::Gaussian, 64).unwrap();
        for m in 0..=6usize {
            for n in m..=6usize {
                let got = scheme
                    .integrate(&|x| normalized_hermite(m, x) * normalized_hermite(n, x))
                    .unwrap();
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!((got - expected).abs() < 1e-10, "m {m} n {n}: {got}");
            }
        }
    }

    #[test]
    fn from_coefficients_trims_and_validates() {
        let p = PolynomialStatistic::from_coefficients(vec![1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 1);
        assert_eq!(p.coefficients(), vec![1.0, 2.0]);
        assert!(PolynomialStatistic::from_coefficients(vec![1.0, f64::NAN]).is_err());
    }
}
