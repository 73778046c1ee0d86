use crate::error::{Error, Result};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > -1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "alpha",
            format!("Laguerre order must be > -1, got {alpha}"),
        ))
    }
}

/// Associated Laguerre polynomial `L_n^alpha(x)` by the forward recurrence
/// `(k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1}`.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(laguerre_unchecked(n, alpha, x))
}

pub(crate) fn laguerre_unchecked(n: u32, alpha: f64, x: f64) -> f64 {
    let (prev, cur) = laguerre_pair(n, alpha, x);
    if n == 0 {
        prev
    } else {
        cur
    }
}

/// `(L_{n-1}, L_n)`; for `n = 0` returns `(1, 1)` with only the first
/// entry meaningful.
fn laguerre_pair(n: u32, alpha: f64, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (prev, cur)
}

/// `x dL_n^alpha/dx = n L_n - (n + alpha) L_{n-1}`, with no division by `x`.
pub fn laguerre_x_derivative(n: u32, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Ok(0.0);
    }
    let (prev, cur) = laguerre_pair(n, alpha, x);
    let nf = f64::from(n);
    Ok(nf * cur - (nf + alpha) * prev)
}

/// First derivative `dL_n^alpha/dx`.
///
/// Away from the origin (`|x| >= 1`) this is the recurrence
/// `[n L_n - (n + alpha) L_{n-1}] / x`; closer in, where that quotient
/// loses digits and has a removable singularity at `x = 0`, the shifted
/// identity `dL_n^alpha/dx = -L_{n-1}^{alpha+1}(x)` is used.
pub fn laguerre_derivative(n: u32, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Ok(0.0);
    }
    if x.abs() >= 1.0 {
        Ok(laguerre_x_derivative(n, alpha, x)? / x)
    } else {
        Ok(-laguerre_unchecked(n - 1, alpha + 1.0, x))
    }
}

/// Second derivative `d^2 L_n^alpha / dx^2 = L_{n-2}^{alpha+2}(x)`.
pub fn laguerre_second_derivative(n: u32, alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n < 2 {
        return Ok(0.0);
    }
    Ok(laguerre_unchecked(n - 2, alpha + 2.0, x))
}
