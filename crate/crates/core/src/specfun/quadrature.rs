//! Numerical integration: a fixed Gauss-Legendre rule and globally adaptive
//! Gauss-Kronrod (7/15) subdivision. Semi-infinite ranges `[a, inf)` are
//! mapped onto `[0, 1)` through `x = a + t / (1 - t)`.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum QuadratureRule {
    /// Single `points`-node Gauss-Legendre rule on the (mapped) interval.
    GaussLegendreMapped { points: usize },
    /// Adaptive subdivision until the error estimate drops below
    /// `tolerance * integral(|f|)`.
    AdaptiveSubdivision { tolerance: f64 },
}

impl QuadratureRule {
    pub fn gauss_legendre(points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::domain(
                "points",
                format!("need at least 2 nodes, got {points}"),
            ));
        }
        Ok(Self::GaussLegendreMapped { points })
    }

    pub fn adaptive(tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0 && tolerance <= 1e-2) {
            return Err(Error::domain(
                "tolerance",
                format!("adaptive tolerance must lie in (0, 1e-2], got {tolerance}"),
            ));
        }
        Ok(Self::AdaptiveSubdivision { tolerance })
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::AdaptiveSubdivision {
            tolerance: crate::tolerances::QUADRATURE,
        }
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// `integral_a^b f(x) dx`; `b` may be `f64::INFINITY`.
pub fn integrate<F>(f: F, a: f64, b: f64, rule: QuadratureRule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with_estimate(f, a, b, rule).map(|q| q.value)
}

pub fn integrate_with_estimate<F>(f: F, a: f64, b: f64, rule: QuadratureRule) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !a.is_finite() {
        return Err(Error::domain(
            "a",
            format!("lower limit must be finite, got {a}"),
        ));
    }
    if b.is_nan() || b <= a {
        return Err(Error::domain(
            "b",
            format!("upper limit must exceed {a}, got {b}"),
        ));
    }
    if b.is_infinite() {
        let mapped = |t: f64| {
            let s = 1.0 - t;
            let x = a + t / s;
            let fx = f(x);
            if fx == 0.0 {
                0.0
            } else {
                fx / (s * s)
            }
        };
        dispatch(&mapped, 0.0, 1.0, rule)
    } else {
        dispatch(&f, a, b, rule)
    }
}

fn dispatch<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: QuadratureRule) -> Result<Quadrature> {
    match rule {
        QuadratureRule::GaussLegendreMapped { points } => {
            let (nodes, weights) = gauss_legendre_nodes(points)?;
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            let value = half
                * nodes
                    .iter()
                    .zip(&weights)
                    .map(|(x, w)| w * f(mid + half * x))
                    .sum::<f64>();
            Ok(Quadrature {
                value,
                error: f64::NAN,
                evaluations: points,
            })
        }
        QuadratureRule::AdaptiveSubdivision { tolerance } => adaptive(f, a, b, tolerance),
    }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre_nodes(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::domain(
            "points",
            format!("need at least 2 nodes, got {n}"),
        ));
    }
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok((nodes, weights))
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

// Kronrod 15-point abscissae (non-negative half) and weights; the 7-point
// Gauss rule uses the odd-indexed abscissae.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error).is_eq()
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut result_k = fc * WGK[7];
    let mut result_g = fc * WG[3];
    let mut result_abs = fc.abs() * WGK[7];
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        *slot = (f1, f2);
        result_k += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * result_k;
    let mut result_asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        result_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = result_k * half;
    let abs_value = result_abs * half.abs();
    let result_asc = result_asc * half.abs();
    let mut error = ((result_k - result_g) * half).abs();
    if result_asc != 0.0 && error != 0.0 {
        error = result_asc * (200.0 * error / result_asc).powf(1.5).min(1.0);
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_value);
    }
    Segment {
        a,
        b,
        value,
        error,
        abs_value,
    }
}

const MAX_SEGMENTS: usize = 20_000;

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tolerance: f64) -> Result<Quadrature> {
    let first = kronrod(f, a, b);
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_value = first.abs_value;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Accuracy {
                context: format!("quadrature on [{a}, {b}]: non-finite integrand"),
                estimate: value,
                error,
            });
        }
        if error <= tolerance * abs_value.max(f64::MIN_POSITIVE) || error == 0.0 {
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow =
            (worst.b - worst.a).abs() <= 100.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
        if heap.len() + 2 > MAX_SEGMENTS || too_narrow {
            return Err(Error::Accuracy {
                context: format!(
                    "adaptive quadrature on [{a}, {b}] after {evaluations} evaluations"
                ),
                estimate: value,
                error,
            });
        }
        let left = kronrod(f, worst.a, mid);
        let right = kronrod(f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_value += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        // the running sums drift; resum occasionally
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
            abs_value = heap.iter().map(|s| s.abs_value).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_tail() {
        let v = integrate(
            |x| (-x).exp(),
            0.0,
            f64::INFINITY,
            QuadratureRule::default(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate(
            |x| (-x).exp(),
            0.0,
            f64::INFINITY,
            QuadratureRule::gauss_legendre(60).unwrap(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre_nodes(5).unwrap();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 9 is exact for 5 nodes
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((got - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn kronrod_weights_sum() {
        let s = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((s - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn endpoint_singularity() {
        // integral_0^1 x^-1/2 dx = 2
        let v = integrate(
            |x| 1.0 / x.sqrt(),
            0.0,
            1.0,
            QuadratureRule::adaptive(1e-11).unwrap(),
        )
        .unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn oscillating_integrand() {
        let v = integrate(
            |x| (10.0 * x).sin(),
            0.0,
            std::f64::consts::PI,
            QuadratureRule::default(),
        )
        .unwrap();
        assert!(v.abs() < 1e-13);
    }

    #[test]
    fn invalid_rules_and_limits() {
        assert!(QuadratureRule::gauss_legendre(1).is_err());
        assert!(QuadratureRule::adaptive(0.0).is_err());
        assert!(QuadratureRule::adaptive(0.1).is_err());
        assert!(integrate(|x| x, 1.0, 0.0, QuadratureRule::default()).is_err());
        assert!(integrate(|x| x, f64::NEG_INFINITY, 0.0, QuadratureRule::default()).is_err());
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let err = integrate(
            |x| 1.0 / x,
            0.0,
            1.0,
            QuadratureRule::adaptive(1e-12).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }
}
