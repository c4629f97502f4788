use crate::{Error, Result};

/// Bracketed bisection.
///
/// Requires a sign change on `[lo, hi]` and returns `x` with both the final
/// bracket width and `|g(x)|` at most `tol`. Endpoints that already satisfy
/// the residual test are returned directly.
pub fn find_root(g: &dyn Fn(f64) -> f64, bracket: (f64, f64), tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    assert!(lo < hi, "bracket must satisfy lo < hi");
    assert!(tol > 0.0, "tolerance must be positive");
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo.abs() <= tol {
        return Ok(lo);
    }
    if g_hi.abs() <= tol {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() || !g_lo.is_finite() || !g_hi.is_finite() {
        return Err(Error::NoBracket { lo, hi, g_lo, g_hi });
    }

    let mut mid = 0.5 * (lo + hi);
    let mut g_mid = g(mid);
    for _ in 0..256 {
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
        let width = hi - lo;
        mid = 0.5 * (lo + hi);
        g_mid = g(mid);
        if width <= tol && g_mid.abs() <= tol {
            return Ok(mid);
        }
        // bracket exhausted at machine precision
        if mid <= lo || mid >= hi {
            break;
        }
    }
    if g_mid.abs() <= tol {
        Ok(mid)
    } else {
        Err(Error::Accuracy {
            achieved: g_mid.abs(),
            required: tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear() {
        let root = find_root(&|x| x - 1.0, (0.0, 2.0), 1e-12).unwrap();
        assert!((root - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sqrt_two() {
        let root = find_root(&|x| x * x - 2.0, (1.0, 2.0), 1e-10).unwrap();
        assert!((root - std::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn beta_zero_equation() {
        // negative solution of b^2 exp(b^2) = 1
        let root = find_root(&|b: f64| b * b * (b * b).exp() - 1.0, (-1.0, -0.5), 1e-12).unwrap();
        assert!((root + 0.75309).abs() < 5e-6);
        let residual = root * root * (root * root).exp() - 1.0;
        assert!(residual.abs() <= 1e-10);
    }

    #[test]
    fn missing_sign_change() {
        let err = find_root(&|x| x * x + 1.0, (-1.0, 1.0), 1e-10).unwrap_err();
        match err {
            Error::NoBracket { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
