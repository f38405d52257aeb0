//! Incomplete gamma function and the χ² distribution.

use crate::math::{abs, exp, ln, ln_gamma};
use crate::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;

/// `ln |Γ(x)|`.
pub fn ln_gamma_abs(x: f64) -> f64 {
    ln_gamma(x)
}

/// Regularized lower incomplete gamma `P(s, x)`.
pub fn gamma_p(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < s + 1.0 {
        series(s, x)
    } else {
        1.0 - continued_fraction(s, x)
    }
}

/// Regularized upper incomplete gamma `Q(s, x) = 1 − P(s, x)`.
pub fn gamma_q(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < s + 1.0 {
        1.0 - series(s, x)
    } else {
        continued_fraction(s, x)
    }
}

fn prefactor(s: f64, x: f64) -> f64 {
    exp(s * ln(x) - x - ln_gamma(s))
}

fn series(s: f64, x: f64) -> f64 {
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut ap = s;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if abs(term) < abs(sum) * EPS {
            break;
        }
    }
    sum * prefactor(s, x)
}

/// Modified Lentz evaluation of the continued fraction for `Q`.
fn continued_fraction(s: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if abs(d) < tiny {
            d = tiny;
        }
        c = b + an / c;
        if abs(c) < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if abs(delta - 1.0) < EPS {
            break;
        }
    }
    prefactor(s, x) * h
}

/// `P(χ²_n ≤ x)`.
pub fn chi2_cdf(x: f64, n: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    gamma_p(n / 2.0, x / 2.0)
}

/// `P(χ²_n > x)`, accurate in the far tail.
pub fn chi2_sf(x: f64, n: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(n / 2.0, x / 2.0)
}

/// `x` with `P(χ²_n ≤ x) = p`, by bisection on a bracket grown by doubling.
pub fn chi2_quantile(p: f64, n: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
        });
    }
    if !(n > 0.0) {
        return Err(Error::OutOfRange {
            name: "n",
            value: n,
        });
    }
    let mut hi = n.max(1.0);
    while chi2_cdf(hi, n) < p {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::BracketFailed { p, max_x: hi });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi2_cdf(mid, n) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_degrees_of_freedom_is_exponential() {
        for x in [0.1, 1.0, 3.7, 12.0, 40.0] {
            let want = 1.0 - libm::exp(-x / 2.0);
            assert!((chi2_cdf(x, 2.0) - want).abs() < 1e-14, "{x}");
        }
        assert_eq!(chi2_cdf(0.0, 5.0), 0.0);
    }

    #[test]
    fn one_degree_of_freedom_is_erf() {
        for x in [0.2, 1.0, 4.0, 9.0] {
            let want = libm::erf(libm::sqrt(x / 2.0));
            assert!((chi2_cdf(x, 1.0) - want).abs() < 1e-14, "{x}");
        }
    }

    #[test]
    fn seven_degrees_at_forty() {
        assert!((chi2_cdf(40.0, 7.0) - 0.9999987).abs() < 5e-8);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for n in [1.0, 3.0, 12.0] {
            for p in [0.01, 0.5, 0.95, 0.999] {
                let x = chi2_quantile(p, n).unwrap();
                assert!((chi2_cdf(x, n) - p).abs() < 1e-12);
            }
        }
        assert!(chi2_quantile(1.0, 3.0).is_err());
    }
}
