//! SU(1,1) ladder operators for the radial states of fixed `(l, N)`.
//!
//! Spectral representation, on the basis `|n> = R_{n l N}`:
//!
//! ```text
//! L-|n> = sqrt(n (n + eta - 1)) |n - 1>
//! L+|n> = sqrt((n + 1)(n + eta)) |n + 1>
//! L0|n> = (n + eta/2) |n>
//! ```
//!
//! Differential representation in `z = mu r^2`, where `n` is the index of
//! the state acted on:
//!
//! ```text
//! L- = -z d/dz - z/2 + eta/2 - N/4 + n
//! L+ =  z d/dz - z/2 + eta/2 + N/4 + n
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{laguerre, laguerre_x_derivative, ln_factorial, ln_gamma};
use crate::wavefunction::RadialState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderCoeffs {
    eta: f64,
    dim: u32,
}

impl LadderCoeffs {
    pub fn new(eta: f64, dim: u32) -> Result<Self> {
        if !(eta.is_finite() && eta > 0.0) {
            return Err(Error::domain("eta", format!("must be > 0, got {eta}")));
        }
        if dim < 2 {
            return Err(Error::domain(
                "dim",
                format!("dimension must be >= 2, got {dim}"),
            ));
        }
        Ok(Self { eta, dim })
    }

    pub fn from_state(s: &RadialState) -> Self {
        Self {
            eta: s.reduced().eta,
            dim: s.qn().dim,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Bargmann index `J = eta / 2`.
    pub fn bargmann_index(&self) -> f64 {
        0.5 * self.eta
    }
}

/// `sqrt(n (n + eta - 1))`.
pub fn lambda_minus(n: u32, eta: f64) -> f64 {
    let value = (f64::from(n) * (f64::from(n) + eta - 1.0)).sqrt();
    debug_assert!(
        n == 0
            || lambda_minus_from_norms(n, eta)
                .map_or(true, |alt| (alt - value).abs() <= 1e-10 * value.max(1.0)),
        "lambda_minus disagrees with the normalization-ratio form at n = {n}"
    );
    value
}

/// `sqrt((n + 1)(n + eta))`.
pub fn lambda_plus(n: u32, eta: f64) -> f64 {
    let n = f64::from(n);
    ((n + 1.0) * (n + eta)).sqrt()
}

/// `(n + eta - 1) zeta_n / zeta_{n-1}`, the form `lambda_minus` takes before
/// the normalization ratio is simplified. Requires `n >= 1`.
pub fn lambda_minus_from_norms(n: u32, eta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n", "the normalization ratio needs n >= 1"));
    }
    let nf = f64::from(n);
    // zeta_n / zeta_{n-1} = sqrt(n! Gamma(eta + n - 1) / ((n-1)! Gamma(eta + n)))
    let ln_ratio = 0.5
        * (ln_factorial(n) - ln_factorial(n - 1) + ln_gamma(eta + nf - 1.0)? - ln_gamma(eta + nf)?);
    Ok((nf + eta - 1.0) * ln_ratio.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Raise,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralOp {
    Raise,
    Lower,
    Zero,
}

impl From<Direction> for SpectralOp {
    fn from(d: Direction) -> Self {
        match d {
            Direction::Raise => SpectralOp::Raise,
            Direction::Lower => SpectralOp::Lower,
        }
    }
}

/// Finite linear combination of radial basis states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisVector {
    amplitudes: BTreeMap<u32, f64>,
    context: LadderCoeffs,
}

impl BasisVector {
    pub fn zero(context: LadderCoeffs) -> Self {
        Self {
            amplitudes: BTreeMap::new(),
            context,
        }
    }

    /// The pure state `|n>`.
    pub fn basis(n: u32, context: LadderCoeffs) -> Self {
        Self::from_amplitudes([(n, 1.0)], context)
    }

    pub fn from_amplitudes(
        amplitudes: impl IntoIterator<Item = (u32, f64)>,
        context: LadderCoeffs,
    ) -> Self {
        let mut v = Self::zero(context);
        for (n, a) in amplitudes {
            *v.amplitudes.entry(n).or_insert(0.0) += a;
        }
        v
    }

    pub fn context(&self) -> LadderCoeffs {
        self.context
    }

    pub fn amplitude(&self, n: u32) -> f64 {
        self.amplitudes.get(&n).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.amplitudes.iter().map(|(&n, &a)| (n, a))
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.values().all(|&a| a == 0.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(&n, &a)| (n, a * factor))
                .collect(),
            context: self.context,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        let mut out = self.clone();
        for (n, a) in other.iter() {
            *out.amplitudes.entry(n).or_insert(0.0) += sign * a;
        }
        out
    }

    /// Largest amplitude magnitude.
    pub fn max_abs(&self) -> f64 {
        self.amplitudes.values().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// Largest componentwise difference relative to the larger operand,
    /// `max_n |a_n - b_n| / max(|a|_inf, |b|_inf)`; zero when both vanish.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        if scale == 0.0 {
            return 0.0;
        }
        self.sub(other).max_abs() / scale
    }
}

/// Action of `L+`, `L-` or `L0` on a vector. `L-` annihilates `|0>`.
pub fn apply_spectral(op: SpectralOp, v: &BasisVector) -> BasisVector {
    let eta = v.context.eta;
    let mut out = BasisVector::zero(v.context);
    for (n, a) in v.iter() {
        match op {
            SpectralOp::Raise => {
                *out.amplitudes.entry(n + 1).or_insert(0.0) += lambda_plus(n, eta) * a;
            }
            SpectralOp::Lower => {
                if n > 0 {
                    *out.amplitudes.entry(n - 1).or_insert(0.0) += lambda_minus(n, eta) * a;
                }
            }
            SpectralOp::Zero => {
                *out.amplitudes.entry(n).or_insert(0.0) += (f64::from(n) + 0.5 * eta) * a;
            }
        }
    }
    out
}

/// `L_a = L+ + L-`.
pub fn apply_sum(v: &BasisVector) -> BasisVector {
    apply_spectral(SpectralOp::Raise, v).add(&apply_spectral(SpectralOp::Lower, v))
}

/// `L_s = L+ - L-`.
pub fn apply_difference(v: &BasisVector) -> BasisVector {
    apply_spectral(SpectralOp::Raise, v).sub(&apply_spectral(SpectralOp::Lower, v))
}

/// `q`-fold composition of `L+` or `L-`.
pub fn apply_power(q: u32, direction: Direction, v: &BasisVector) -> Result<BasisVector> {
    if q == 0 {
        return Err(Error::domain("q", "power must be >= 1"));
    }
    let op = SpectralOp::from(direction);
    let mut out = v.clone();
    for _ in 0..q {
        out = apply_spectral(op, &out);
    }
    Ok(out)
}

/// Closed product for `L+^q |n> = c |n + q>` (raise) or
/// `L-^q |n> = c |n - q>` (lower; zero when `n < q`).
pub fn power_coefficient(q: u32, direction: Direction, n: u32, eta: f64) -> f64 {
    let product = |base: u32, factor: &dyn Fn(f64) -> f64| {
        (1..=q)
            .map(f64::from)
            .fold(1.0, |acc, i| acc * (f64::from(base) + i) * factor(i))
    };
    match direction {
        Direction::Raise => product(n, &|i| f64::from(n) + i + eta - 1.0).sqrt(),
        Direction::Lower => {
            if n < q {
                return 0.0;
            }
            let base = n - q;
            product(base, &|i| f64::from(n) + eta - i).sqrt()
        }
    }
}

/// Expected image of `v` under `L±^q` from [`power_coefficient`].
pub fn power_closed_form(q: u32, direction: Direction, v: &BasisVector) -> BasisVector {
    let eta = v.context.eta;
    let mut out = BasisVector::zero(v.context);
    for (n, a) in v.iter() {
        let c = power_coefficient(q, direction, n, eta);
        match direction {
            Direction::Raise => *out.amplitudes.entry(n + q).or_insert(0.0) += c * a,
            Direction::Lower if n >= q => *out.amplitudes.entry(n - q).or_insert(0.0) += c * a,
            Direction::Lower => {}
        }
    }
    out
}

/// Commutation relations checked in the spectral representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommutatorPair {
    /// `[L-, L+] = 2 L0`
    Mp,
    /// `[L0, L+] = L+`
    Zp,
    /// `[L-, L0] = L-`
    Mz,
    /// `[L0, L_a] = L_s`
    Za,
    /// `[L0, L_s] = L_a`
    Zs,
}

impl CommutatorPair {
    pub const ALL: [CommutatorPair; 5] = [
        CommutatorPair::Mp,
        CommutatorPair::Zp,
        CommutatorPair::Mz,
        CommutatorPair::Za,
        CommutatorPair::Zs,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            CommutatorPair::Mp => "[L-,L+]=2L0",
            CommutatorPair::Zp => "[L0,L+]=L+",
            CommutatorPair::Mz => "[L-,L0]=L-",
            CommutatorPair::Za => "[L0,La]=Ls",
            CommutatorPair::Zs => "[L0,Ls]=La",
        }
    }
}

fn commutator(
    a: &dyn Fn(&BasisVector) -> BasisVector,
    b: &dyn Fn(&BasisVector) -> BasisVector,
    v: &BasisVector,
) -> BasisVector {
    a(&b(v)).sub(&b(&a(v)))
}

/// Both sides of a commutation relation applied to `v`, `(lhs, rhs)`.
pub fn commutator_check(pair: CommutatorPair, v: &BasisVector) -> (BasisVector, BasisVector) {
    let raise = |x: &BasisVector| apply_spectral(SpectralOp::Raise, x);
    let lower = |x: &BasisVector| apply_spectral(SpectralOp::Lower, x);
    let zero = |x: &BasisVector| apply_spectral(SpectralOp::Zero, x);
    match pair {
        CommutatorPair::Mp => (commutator(&lower, &raise, v), zero(v).scale(2.0)),
        CommutatorPair::Zp => (commutator(&zero, &raise, v), raise(v)),
        CommutatorPair::Mz => (commutator(&lower, &zero, v), lower(v)),
        CommutatorPair::Za => (commutator(&zero, &apply_sum, v), apply_difference(v)),
        CommutatorPair::Zs => (commutator(&zero, &apply_difference, v), apply_sum(v)),
    }
}

/// The two factorizations of the Casimir operator applied to a vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CasimirForms {
    /// `L0 (L0 - 1) - L+ L-`
    pub via_lowering: BasisVector,
    /// `L0 (L0 + 1) - L- L+`
    pub via_raising: BasisVector,
}

pub fn casimir(v: &BasisVector) -> CasimirForms {
    let l0 = |x: &BasisVector| apply_spectral(SpectralOp::Zero, x);
    let l0v = l0(v);
    let l0l0v = l0(&l0v);
    let plus_minus = apply_spectral(SpectralOp::Raise, &apply_spectral(SpectralOp::Lower, v));
    let minus_plus = apply_spectral(SpectralOp::Lower, &apply_spectral(SpectralOp::Raise, v));
    CasimirForms {
        via_lowering: l0l0v.sub(&l0v).sub(&plus_minus),
        via_raising: l0l0v.add(&l0v).sub(&minus_plus),
    }
}

/// `J (J - 1)` with `J = eta / 2`.
pub fn casimir_eigenvalue(eta: f64) -> f64 {
    let j = 0.5 * eta;
    j * (j - 1.0)
}

/// Samples of `(L± R_n)(z)` computed from the differential operators,
/// with `z dR/dz` taken from the analytic Laguerre derivative.
pub fn apply_differential(op: Direction, s: &RadialState, z: &[f64]) -> Result<Vec<f64>> {
    let eta = s.reduced().eta;
    let quarter_dim = 0.25 * f64::from(s.qn().dim);
    let n = s.qn().n;
    let nf = f64::from(n);
    let alpha = eta - 1.0;
    let p = 0.5 * s.reduced().radial_exponent();
    let zeta = s.zeta()?;
    z.iter()
        .map(|&z| {
            if !(z > 0.0) {
                return Err(Error::domain("z", format!("samples must be > 0, got {z}")));
            }
            let envelope = zeta * (-0.5 * z).exp() * z.powf(p);
            let l = laguerre(n, alpha, z)?;
            let value = envelope * l;
            // z dR/dz = (p - z/2) R + envelope * z L'
            let z_dr = (p - 0.5 * z) * value + envelope * laguerre_x_derivative(n, alpha, z)?;
            Ok(match op {
                Direction::Lower => -z_dr + (-0.5 * z + 0.5 * eta - quarter_dim + nf) * value,
                Direction::Raise => z_dr + (-0.5 * z + 0.5 * eta + quarter_dim + nf) * value,
            })
        })
        .collect()
}

/// Largest deviation of `L± R_n` from `lambda± R_{n±1}` on the samples,
/// relative to the largest sample magnitude of the two sides (or of `R_n`
/// when lowering the ground state).
pub fn differential_agreement(op: Direction, s: &RadialState, z: &[f64]) -> Result<f64> {
    let lhs = apply_differential(op, s, z)?;
    let n = s.qn().n;
    let eta = s.reduced().eta;
    let rhs: Vec<f64> = match (op, n) {
        (Direction::Lower, 0) => vec![0.0; z.len()],
        (Direction::Lower, _) => {
            let neighbour = s.with_n(n - 1)?;
            let lambda = lambda_minus(n, eta);
            z.iter()
                .map(|&z| neighbour.eval_z(z).map(|r| lambda * r))
                .collect::<Result<_>>()?
        }
        (Direction::Raise, _) => {
            let neighbour = s.with_n(n + 1)?;
            let lambda = lambda_plus(n, eta);
            z.iter()
                .map(|&z| neighbour.eval_z(z).map(|r| lambda * r))
                .collect::<Result<_>>()?
        }
    };
    let mut scale = lhs.iter().chain(&rhs).fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || (op == Direction::Lower && n == 0) {
        scale = z
            .iter()
            .map(|&z| s.eval_z(z).map(f64::abs))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
    }
    let worst = lhs
        .iter()
        .zip(&rhs)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(worst / scale)
}

/// `count` equally spaced samples on `(0, z_max]` covering the state.
pub fn z_samples(s: &RadialState, count: usize) -> Vec<f64> {
    let z_max = s.reduced().eta + 2.0 * f64::from(s.qn().n) + 40.0;
    (1..=count)
        .map(|i| z_max * i as f64 / count as f64)
        .collect()
}

/// Summary of the spectral algebra for one `(eta, N)` over `n <= n_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSummary {
    pub eta: f64,
    pub dim: u32,
    pub n_max: u32,
    pub q_max: u32,
    pub lambda_minus: Vec<f64>,
    pub lambda_plus: Vec<f64>,
    /// Worst relative residual per commutation relation, in
    /// [`CommutatorPair::ALL`] order.
    pub commutator_residuals: Vec<(CommutatorPair, f64)>,
    /// `J (J - 1)`.
    pub casimir_eigenvalue: f64,
    /// Worst deviation of either Casimir factorization from
    /// `J (J - 1) |n>`, relative to the larger of `|J (J - 1)|` and the
    /// `L0^2` term it is computed from.
    pub casimir_residual: f64,
    /// Worst relative deviation of `q`-fold composition from the closed
    /// product, both directions.
    pub power_residual: f64,
}

/// Evaluate every spectral identity on each basis state `|n>`, `n <= n_max`.
pub fn algebra_summary(context: LadderCoeffs, n_max: u32, q_max: u32) -> Result<AlgebraSummary> {
    let eta = context.eta;
    let mut residuals: Vec<(CommutatorPair, f64)> =
        CommutatorPair::ALL.iter().map(|&p| (p, 0.0)).collect();
    let mut casimir_residual = 0.0f64;
    let mut power_residual = 0.0f64;
    let expected_casimir = casimir_eigenvalue(eta);

    for n in 0..=n_max {
        let v = BasisVector::basis(n, context);
        for (pair, worst) in residuals.iter_mut() {
            let (lhs, rhs) = commutator_check(*pair, &v);
            *worst = worst.max(lhs.relative_distance(&rhs));
        }

        let forms = casimir(&v);
        let l0 = f64::from(n) + 0.5 * eta;
        let scale = expected_casimir.abs().max(l0 * l0);
        for form in [&forms.via_lowering, &forms.via_raising] {
            let dev = form.sub(&v.scale(expected_casimir)).max_abs() / scale;
            casimir_residual = casimir_residual.max(dev);
        }

        for q in 1..=q_max {
            for direction in [Direction::Raise, Direction::Lower] {
                let start = match direction {
                    Direction::Raise => v.clone(),
                    Direction::Lower => BasisVector::basis(n + q, context),
                };
                let composed = apply_power(q, direction, &start)?;
                let closed = power_closed_form(q, direction, &start);
                power_residual = power_residual.max(composed.relative_distance(&closed));
            }
        }
    }

    Ok(AlgebraSummary {
        eta,
        dim: context.dim,
        n_max,
        q_max,
        lambda_minus: (0..=n_max).map(|n| lambda_minus(n, eta)).collect(),
        lambda_plus: (0..=n_max).map(|n| lambda_plus(n, eta)).collect(),
        commutator_residuals: residuals,
        casimir_eigenvalue: expected_casimir,
        casimir_residual,
        power_residual,
    })
}
