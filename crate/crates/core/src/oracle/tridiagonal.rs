//! Lowest eigenvalues of a real symmetric tridiagonal matrix by Sturm-sequence
//! bisection.

/// Number of eigenvalues strictly below `x`.
pub(crate) fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 {
            0.0
        } else {
            off[i - 1] * off[i - 1] / q
        };
        q = d - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &d) in diag.iter().enumerate() {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = off.get(i).map_or(0.0, |e| e.abs());
        lo = lo.min(d - left - right);
        hi = hi.max(d + left + right);
    }
    (lo, hi)
}

/// The `count` smallest eigenvalues in ascending order. `off` holds the
/// `diag.len() - 1` off-diagonal entries.
pub(crate) fn lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    debug_assert_eq!(off.len() + 1, diag.len());
    let (lo, hi) = gershgorin(diag, off);
    let mut values: Vec<f64> = Vec::with_capacity(count);
    for k in 0..count.min(diag.len()) {
        // the k-th eigenvalue is the smallest x with count_below(x) > k
        let mut a = values.last().copied().unwrap_or(lo).max(lo);
        let mut b = hi;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(diag, off, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        values.push(0.5 * (a + b));
    }
    values
}
