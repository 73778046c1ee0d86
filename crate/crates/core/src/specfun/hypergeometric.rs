use super::laguerre::laguerre_unchecked;
use crate::error::{Error, Result};

/// Conversion factor `n! Gamma(b) / Gamma(b + n) = prod_{j<n} (j + 1) / (b + j)`
/// between `1F1(-n, b, x)` and `L_n^{b-1}(x)`.
pub fn laguerre_conversion(n: u32, b: f64) -> f64 {
    (0..n)
        .map(f64::from)
        .fold(1.0, |acc, j| acc * (j + 1.0) / (b + j))
}

/// Polynomial confluent hypergeometric function `1F1(-n; b; x)`, evaluated
/// through `1F1(-n; b; x) = n! Gamma(b) / Gamma(b + n) * L_n^{b-1}(x)`.
pub fn hyp1f1_poly(n: u32, b: f64, x: f64) -> Result<f64> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain(
            "b",
            format!("1F1 lower parameter must be > 0, got {b}"),
        ));
    }
    Ok(laguerre_conversion(n, b) * laguerre_unchecked(n, b - 1.0, x))
}

/// Kummer series `sum_k (a)_k / (b)_k x^k / k!` summed term by term until
/// it terminates or the terms fall below machine precision.
///
/// Real arguments only; intended for moderate `|x|` where the series
/// converges without cancellation trouble.
pub fn hyp1f1_series(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain(
            "b",
            format!("1F1 lower parameter must be > 0, got {b}"),
        ));
    }
    const MAX_TERMS: u32 = 10_000;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for k in 0..MAX_TERMS {
        let kf = f64::from(k);
        term *= (a + kf) / (b + kf) * x / (kf + 1.0);
        sum += term;
        // past k ~ |x| the term ratio stays below one
        if term == 0.0 || (kf + 1.0 > x.abs() && term.abs() <= 0.5 * f64::EPSILON * sum.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy {
        context: format!("1F1({a}; {b}; {x}) series"),
        estimate: sum,
        error: term.abs(),
    })
}
