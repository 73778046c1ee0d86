use crate::error::{Error, Result};

// Lanczos-type series with g = 671/128 and 14 terms.
const LANCZOS_SHIFT: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS_BASE: f64 = 0.999_999_999_999_997_092;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain("x", format!("ln_gamma needs x > 0, got {x}")));
    }
    // exact zeros
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let tmp = x + LANCZOS_SHIFT;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut y = x;
    let mut series = LANCZOS_BASE;
    for c in LANCZOS_COEFFS {
        y += 1.0;
        series += c / y;
    }
    Ok(tmp + (SQRT_TWO_PI * series / x).ln())
}

/// `ln(n!)`.
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma(f64::from(n) + 1.0).expect("n + 1 > 0")
}

/// `Gamma(x)` for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(f64::exp)
}

/// Euler Beta function `B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)`.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain("a", format!("beta needs a > 0, got {a}")));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::domain("b", format!("beta needs b > 0, got {b}")));
    }
    Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
}
