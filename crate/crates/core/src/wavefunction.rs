//! Normalized radial eigenfunctions
//!
//! ```text
//! R_{n l N}(r) = C e^{-mu r^2 / 2} r^{eta - N/2} L_n^{eta - 1}(mu r^2)
//! C            = sqrt(2) mu^{eta/2} sqrt(n! / Gamma(eta + n))
//! ```
//!
//! together with quadrature checks of normalization and orthogonality and
//! the residual of the radial equation evaluated with analytic derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{reduce, CoefficientSet, QuantumNumbers, ReducedParams};
use crate::specfun::{
    integrate, laguerre, laguerre_conversion, laguerre_derivative, laguerre_second_derivative,
    ln_factorial, ln_gamma, QuadratureRule,
};
use crate::tolerances;

// e^{-z/2} underflows past this; polynomial prefactors cannot compensate.
const Z_CUTOFF: f64 = 1490.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    qn: QuantumNumbers,
    rp: ReducedParams,
    norm_const: f64,
    coeffs: CoefficientSet,
}

/// Value and first two radial derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// `ln C` in the Laguerre form.
fn ln_norm_laguerre(rp: &ReducedParams, n: u32) -> Result<f64> {
    Ok(0.5 * std::f64::consts::LN_2
        + 0.5 * rp.eta * rp.mu.ln()
        + 0.5 * (ln_factorial(n) - ln_gamma(rp.eta + f64::from(n))?))
}

/// Build the normalized state `(n, l, N)` for the given potential.
pub fn make_state(c: &CoefficientSet, q: QuantumNumbers) -> Result<RadialState> {
    let rp = reduce(c, q)?;
    let norm_const = ln_norm_laguerre(&rp, q.n)?.exp();
    let state = RadialState {
        qn: q,
        rp,
        norm_const,
        coeffs: *c,
    };
    let ratio = state.reconciliation_ratio()?;
    if (ratio - 1.0).abs() > tolerances::ANALYTIC {
        return Err(Error::Accuracy {
            context: format!("normalization constants for {q:?} disagree"),
            estimate: norm_const,
            error: (ratio - 1.0).abs(),
        });
    }
    Ok(state)
}

impl RadialState {
    pub fn qn(&self) -> QuantumNumbers {
        self.qn
    }

    pub fn reduced(&self) -> &ReducedParams {
        &self.rp
    }

    pub fn coefficients(&self) -> &CoefficientSet {
        &self.coeffs
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// The neighbouring state with radial index `n`.
    pub fn with_n(&self, n: u32) -> Result<RadialState> {
        make_state(&self.coeffs, self.qn.with_n(n))
    }

    /// Copy with the prefactor multiplied by `factor` (no longer normalized).
    pub fn scaled(&self, factor: f64) -> RadialState {
        RadialState {
            norm_const: self.norm_const * factor,
            ..*self
        }
    }

    /// Prefactor of the `1F1(-n, eta, mu r^2)` form,
    /// `C * Gamma(eta + n) / (n! Gamma(eta))`.
    pub fn norm_const_hypergeometric(&self) -> Result<f64> {
        let eta = self.rp.eta;
        let n = self.qn.n;
        let ln = ln_norm_laguerre(&self.rp, n)? + ln_gamma(eta + f64::from(n))?
            - ln_factorial(n)
            - ln_gamma(eta)?;
        Ok(ln.exp())
    }

    /// `1F1`-form prefactor times the `1F1 -> L` conversion factor, divided
    /// by the Laguerre-form prefactor. Equal to one.
    pub fn reconciliation_ratio(&self) -> Result<f64> {
        Ok(
            self.norm_const_hypergeometric()? * laguerre_conversion(self.qn.n, self.rp.eta)
                / self.norm_const,
        )
    }

    /// `zeta = sqrt(2) mu^{N/4} sqrt(n! / Gamma(eta + n))`, the prefactor in
    /// the variable `z = mu r^2`.
    pub fn zeta(&self) -> Result<f64> {
        let rp = &self.rp;
        let n = self.qn.n;
        Ok((0.5 * std::f64::consts::LN_2
            + 0.25 * f64::from(self.qn.dim) * rp.mu.ln()
            + 0.5 * (ln_factorial(n) - ln_gamma(rp.eta + f64::from(n))?))
        .exp())
    }

    fn alpha(&self) -> f64 {
        self.rp.eta - 1.0
    }

    /// `R(r)`; `r = 0` returns the regular limit.
    pub fn eval_r(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::domain("r", format!("radius must be >= 0, got {r}")));
        }
        Ok(self.eval_r_unchecked(r))
    }

    fn eval_r_unchecked(&self, r: f64) -> f64 {
        let z = self.rp.mu * r * r;
        if z > Z_CUTOFF {
            return 0.0;
        }
        let s = self.rp.radial_exponent();
        self.norm_const
            * (-0.5 * z).exp()
            * r.powf(s)
            * laguerre(self.qn.n, self.alpha(), z).unwrap_or(f64::NAN)
    }

    /// `R` as a function of `z = mu r^2`.
    pub fn eval_z(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) {
            return Err(Error::domain("z", format!("z must be >= 0, got {z}")));
        }
        if z > Z_CUTOFF {
            return Ok(0.0);
        }
        let p = 0.5 * self.rp.radial_exponent();
        Ok(self.zeta()? * (-0.5 * z).exp() * z.powf(p) * laguerre(self.qn.n, self.alpha(), z)?)
    }

    /// `dR/dz`, using the analytic Laguerre derivative.
    pub fn derivative_z(&self, z: f64) -> Result<f64> {
        if !(z > 0.0) {
            return Err(Error::domain("z", format!("z must be > 0, got {z}")));
        }
        if z > Z_CUTOFF {
            return Ok(0.0);
        }
        let p = 0.5 * self.rp.radial_exponent();
        let n = self.qn.n;
        let l = laguerre(n, self.alpha(), z)?;
        let dl = laguerre_derivative(n, self.alpha(), z)?;
        let envelope = self.zeta()? * (-0.5 * z).exp() * z.powf(p);
        Ok(envelope * ((p / z - 0.5) * l + dl))
    }

    /// `R`, `dR/dr`, `d^2R/dr^2` at `r > 0` from the product rule on
    /// `e^{-mu r^2/2}`, `r^s` and `L(mu r^2)`.
    pub fn jet(&self, r: f64) -> Result<RadialJet> {
        if !(r > 0.0) {
            return Err(Error::domain("r", format!("radius must be > 0, got {r}")));
        }
        let mu = self.rp.mu;
        let z = mu * r * r;
        if z > Z_CUTOFF {
            return Ok(RadialJet {
                value: 0.0,
                d1: 0.0,
                d2: 0.0,
            });
        }
        let (n, alpha) = (self.qn.n, self.alpha());
        let s = self.rp.radial_exponent();

        let gauss = (-0.5 * z).exp();
        let gauss_d1 = -mu * r * gauss;
        let gauss_d2 = (mu * mu * r * r - mu) * gauss;

        let power = r.powf(s);
        let power_d1 = s * power / r;
        let power_d2 = s * (s - 1.0) * power / (r * r);

        let l = laguerre(n, alpha, z)?;
        let dl = laguerre_derivative(n, alpha, z)?;
        let d2l = laguerre_second_derivative(n, alpha, z)?;
        let poly_d1 = 2.0 * mu * r * dl;
        let poly_d2 = 2.0 * mu * dl + 4.0 * mu * mu * r * r * d2l;

        let c = self.norm_const;
        Ok(RadialJet {
            value: c * gauss * power * l,
            d1: c * (gauss_d1 * power * l + gauss * power_d1 * l + gauss * power * poly_d1),
            d2: c
                * (gauss_d2 * power * l
                    + gauss * power_d2 * l
                    + gauss * power * poly_d2
                    + 2.0
                        * (gauss_d1 * power_d1 * l
                            + gauss_d1 * power * poly_d1
                            + gauss * power_d1 * poly_d1)),
        })
    }

    /// Radius beyond which `|R| < 1e-12`. Starts at
    /// `sqrt((eta + 2n + 40) / mu)`, past every node and the turning point,
    /// and moves out until the Gaussian tail is small enough.
    pub fn r_max(&self) -> f64 {
        let mut r = ((self.rp.eta + 2.0 * f64::from(self.qn.n) + 40.0) / self.rp.mu).sqrt();
        while self.eval_r_unchecked(r).abs() >= 1e-12 {
            r *= 1.05;
        }
        r
    }
}

/// Sample points on `(0, inf)` with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    pub fn uniform(r_min: f64, r_max: f64, count: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min.is_finite()) {
            return Err(Error::domain("r_min", format!("must be > 0, got {r_min}")));
        }
        if !(r_max > r_min && r_max.is_finite()) {
            return Err(Error::domain(
                "r_max",
                format!("must exceed r_min = {r_min}, got {r_max}"),
            ));
        }
        if count < 2 {
            return Err(Error::domain(
                "points",
                format!("need at least 2 points, got {count}"),
            ));
        }
        let h = (r_max - r_min) / (count - 1) as f64;
        let points: Vec<f64> = (0..count).map(|i| r_min + h * i as f64).collect();
        let mut weights = vec![h; count];
        weights[0] = 0.5 * h;
        weights[count - 1] = 0.5 * h;
        Ok(Self { points, weights })
    }

    /// Uniform grid from `1e-3 / sqrt(mu)` to the state's `r_max`.
    pub fn for_state(state: &RadialState, count: usize) -> Result<Self> {
        Self::uniform(1e-3 / state.rp.mu.sqrt(), state.r_max(), count)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn scaled_rule() -> QuadratureRule {
    QuadratureRule::default()
}

/// `integral_0^inf R(r)^2 r^{N-1} dr` by adaptive quadrature.
pub fn norm_integral(s: &RadialState) -> Result<f64> {
    overlap_unchecked(s, s)
}

/// `integral_0^inf R1 R2 r^{N-1} dr` for two states of the same `(l, N)`
/// and potential.
pub fn overlap(s1: &RadialState, s2: &RadialState) -> Result<f64> {
    if s1.qn.ell != s2.qn.ell {
        return Err(Error::domain("ell", "overlap needs states with the same l"));
    }
    if s1.qn.dim != s2.qn.dim {
        return Err(Error::domain("dim", "overlap needs states with the same N"));
    }
    if s1.coeffs != s2.coeffs {
        return Err(Error::domain(
            "coefficients",
            "overlap needs states of the same potential",
        ));
    }
    overlap_unchecked(s1, s2)
}

fn overlap_unchecked(s1: &RadialState, s2: &RadialState) -> Result<f64> {
    // integrate in rho = sqrt(mu) r so the Gaussian width is O(1)
    let scale = 1.0 / s1.rp.mu.sqrt();
    let power = f64::from(s1.qn.dim) - 1.0;
    let integrand = |rho: f64| {
        let r = rho * scale;
        s1.eval_r_unchecked(r) * s2.eval_r_unchecked(r) * r.powf(power)
    };
    Ok(scale * integrate(integrand, 0.0, f64::INFINITY, scaled_rule())?)
}

/// Weighted max-norm of the radial-equation residual
///
/// ```text
/// R'' + (N-1)/r R' - l(l+N-2)/r^2 R - (2M/hbar^2)(V - E) R
/// ```
///
/// on `grid`, with both the residual and `R` weighted by `r^{(N-1)/2}`; the
/// result is `max |w res| / max |w R|`.
pub fn residual(s: &RadialState, energy: f64, grid: &RadialGrid) -> Result<f64> {
    let q = s.qn;
    let dim = f64::from(q.dim);
    let sep = q.separation_constant();
    let kinetic = s.coeffs.units().kinetic_scale();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &r in grid.points() {
        let jet = s.jet(r)?;
        let res = jet.d2 + (dim - 1.0) / r * jet.d1
            - sep / (r * r) * jet.value
            - kinetic * (s.coeffs.potential(r) - energy) * jet.value;
        let w = r.powf(0.5 * (dim - 1.0));
        worst = worst.max((w * res).abs());
        scale = scale.max((w * jet.value).abs());
    }
    if scale == 0.0 {
        return Err(Error::domain("grid", "state vanishes on every grid point"));
    }
    Ok(worst / scale)
}

/// Sign changes of `R` on `count` uniform samples of `(0, r_max)`.
pub fn count_nodes(s: &RadialState, count: usize) -> usize {
    let r_max = s.r_max();
    let mut last_sign = 0.0f64;
    let mut nodes = 0;
    for i in 1..count {
        let v = s.eval_r_unchecked(r_max * i as f64 / count as f64);
        if v == 0.0 {
            continue;
        }
        let sign = v.signum();
        if last_sign != 0.0 && sign != last_sign {
            nodes += 1;
        }
        last_sign = sign;
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{from_molecular, MolecularParams, UnitSystem};
    use crate::spectrum::energy;

    fn harmonic() -> CoefficientSet {
        CoefficientSet::new(0.5, 0.0, 0.0, UnitSystem::default()).unwrap()
    }

    fn pseudo() -> CoefficientSet {
        from_molecular(
            MolecularParams::new(1.0, 1.0).unwrap(),
            UnitSystem::default(),
        )
        .unwrap()
    }

    fn state(c: &CoefficientSet, n: u32, ell: u32, dim: u32) -> RadialState {
        make_state(c, QuantumNumbers::new(n, ell, dim).unwrap()).unwrap()
    }

    #[test]
    fn harmonic_ground_state_constant() {
        let s = state(&harmonic(), 0, 0, 3);
        let expected = 2.0 / std::f64::consts::PI.powf(0.25);
        assert!((s.norm_const() - expected).abs() < 1e-14);
        assert!((s.norm_const() - 1.502_251_1).abs() < 1e-7);
        // analytic Gaussian integral C^2 integral r^2 e^{-r^2} = C^2 sqrt(pi) / 4
        let analytic = s.norm_const().powi(2) * std::f64::consts::PI.sqrt() / 4.0;
        assert!((analytic - 1.0).abs() < 1e-14);
        assert!((s.eval_r(1.0).unwrap() - expected * (-0.5f64).exp()).abs() < 1e-14);
        assert!((s.eval_r(1.0).unwrap() - 0.911_161_3).abs() < 1e-7);
    }

    #[test]
    fn normalization_constants_reconcile() {
        for c in [harmonic(), pseudo()] {
            for n in 0..12 {
                let s = state(&c, n, 1, 4);
                assert!((s.reconciliation_ratio().unwrap() - 1.0).abs() < 1e-12);
            }
        }
        let s = state(&pseudo(), 0, 2, 3);
        assert!(
            (s.norm_const_hypergeometric().unwrap() - s.norm_const()).abs()
                < 1e-14 * s.norm_const()
        );
    }

    #[test]
    fn three_dimensional_hypergeometric_constant() {
        // mu^{(nu+3/2)/2} sqrt(2 Gamma(nu + n + 3/2) / n!) / Gamma(nu + 3/2)
        let c = pseudo();
        for n in 0..6 {
            for ell in 0..3 {
                let s = state(&c, n, ell, 3);
                let rp = s.reduced();
                let nu = rp.nu;
                let nf = f64::from(n);
                let expected = rp.mu.powf(0.5 * (nu + 1.5))
                    * (2.0 * crate::specfun::gamma(nu + nf + 1.5).unwrap()
                        / crate::specfun::gamma(nf + 1.0).unwrap())
                    .sqrt()
                    / crate::specfun::gamma(nu + 1.5).unwrap();
                let got = s.norm_const_hypergeometric().unwrap();
                assert!((got - expected).abs() < 1e-12 * expected, "n={n} l={ell}");
            }
        }
    }

    #[test]
    fn large_quantum_numbers_stay_finite() {
        let s = state(&pseudo(), 150, 40, 30);
        assert!(s.norm_const().is_finite() && s.norm_const() > 0.0);
        assert!(s.eval_r(3.0).unwrap().is_finite());
    }

    #[test]
    fn eval_z_matches_eval_r() {
        for c in [harmonic(), pseudo()] {
            let s = state(&c, 3, 2, 5);
            for &r in &[0.05, 0.4, 1.0, 2.2, 4.5] {
                let a = s.eval_r(r).unwrap();
                let b = s.eval_z(s.reduced().mu * r * r).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1e-300),
                    "r={r}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn zeta_example() {
        let s = state(&harmonic(), 0, 0, 3);
        assert!((s.zeta().unwrap() - 1.502_251_1).abs() < 1e-7);
    }

    #[test]
    fn ground_state_peak_in_z() {
        let s = state(&pseudo(), 0, 1, 4);
        let peak = s.reduced().eta - 2.0;
        // golden-section search for the maximum of R(z)
        let f = |z: f64| s.eval_z(z).unwrap();
        let (mut a, mut b) = (1e-6, 20.0);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if f(x1) > f(x2) {
                b = x2;
            } else {
                a = x1;
            }
        }
        assert!((0.5 * (a + b) - peak).abs() < 1e-6);
    }

    #[test]
    fn negative_arguments_rejected() {
        let s = state(&harmonic(), 1, 0, 3);
        assert_eq!(s.eval_r(-1.0).unwrap_err().field(), Some("r"));
        assert_eq!(s.eval_z(-0.1).unwrap_err().field(), Some("z"));
        assert!(s.eval_r(0.0).unwrap().is_finite());
    }

    #[test]
    fn decays_at_large_radius() {
        let s = state(&pseudo(), 4, 2, 3);
        assert!(s.eval_r(s.r_max()).unwrap().abs() < 1e-12);
        assert_eq!(s.eval_r(1e6).unwrap(), 0.0);
    }

    #[test]
    fn normalization_and_scaling() {
        let s = state(&pseudo(), 2, 1, 3);
        assert!((norm_integral(&s).unwrap() - 1.0).abs() < 1e-8);
        assert!((norm_integral(&s.scaled(2.0)).unwrap() - 4.0).abs() < 1e-8);
        let g = state(&harmonic(), 0, 0, 3);
        assert!((norm_integral(&g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlaps() {
        let c = harmonic();
        let s0 = state(&c, 0, 1, 3);
        let s1 = state(&c, 1, 1, 3);
        let s3 = state(&c, 3, 1, 3);
        assert!((overlap(&s1, &s1).unwrap() - 1.0).abs() < 1e-8);
        assert!(overlap(&s0, &s1).unwrap().abs() < 1e-8);
        assert!(overlap(&s1, &s3).unwrap().abs() < 1e-8);
    }

    #[test]
    fn overlap_rejects_mismatch() {
        let a = state(&harmonic(), 0, 1, 3);
        assert_eq!(
            overlap(&a, &state(&harmonic(), 1, 2, 3))
                .unwrap_err()
                .field(),
            Some("ell")
        );
        assert_eq!(
            overlap(&a, &state(&harmonic(), 1, 1, 4))
                .unwrap_err()
                .field(),
            Some("dim")
        );
        assert_eq!(
            overlap(&a, &state(&pseudo(), 1, 1, 3)).unwrap_err().field(),
            Some("coefficients")
        );
    }

    #[test]
    fn residual_exact_and_detuned() {
        let c = harmonic();
        let s = state(&c, 1, 0, 3);
        let e = energy(&c, s.qn()).unwrap().energy;
        let grid = RadialGrid::for_state(&s, 2000).unwrap();
        assert!(residual(&s, e, &grid).unwrap() <= 1e-9);
        // 0.1 in units of hbar omega
        assert!(residual(&s, e + 0.1, &grid).unwrap() >= 1e-2);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let c = harmonic();
        let s = state(&c, 1, 0, 3);
        let h = 1e-3;
        let f = |r: f64| s.eval_r(r).unwrap();
        let grid = RadialGrid::for_state(&s, 300).unwrap();
        for &r in grid.points().iter().filter(|&&r| r > 0.05) {
            let jet = s.jet(r).unwrap();
            // sixth-order central differences
            let d1 = (-f(r - 3.0 * h) + 9.0 * f(r - 2.0 * h) - 45.0 * f(r - h) + 45.0 * f(r + h)
                - 9.0 * f(r + 2.0 * h)
                + f(r + 3.0 * h))
                / (60.0 * h);
            let d2 = (2.0 * f(r - 3.0 * h) - 27.0 * f(r - 2.0 * h) + 270.0 * f(r - h)
                - 490.0 * f(r)
                + 270.0 * f(r + h)
                - 27.0 * f(r + 2.0 * h)
                + 2.0 * f(r + 3.0 * h))
                / (180.0 * h * h);
            assert!((jet.d1 - d1).abs() < 1e-9, "r={r}");
            assert!((jet.d2 - d2).abs() < 1e-7, "r={r}");
        }
    }

    #[test]
    fn node_counts() {
        for n in 0..7 {
            assert_eq!(count_nodes(&state(&pseudo(), n, 1, 3), 4000), n as usize);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::uniform(0.0, 1.0, 10).is_err());
        assert!(RadialGrid::uniform(1.0, 0.5, 10).is_err());
        let g = RadialGrid::uniform(0.1, 1.1, 11).unwrap();
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(g.points().windows(2).all(|w| w[0] < w[1]));
    }
}
