//! Units, potential coefficients and the reduced parameters `nu`, `mu`, `k`,
//! `eta` that drive the spectrum, the wavefunctions and the ladder algebra.
//!
//! The potential is `V(r) = a1 r^2 + a2 / r^2 + a3`. For a particle of mass
//! `M` in `N` dimensions with orbital quantum number `l`:
//!
//! ```text
//! nu (nu + 1) = l (l + N - 2) + 2 M a2 / hbar^2      (nu >= 0)
//! mu          = sqrt(2 M a1) / hbar
//! k           = [(N - 2) + sqrt((N - 2)^2 + 4 nu (nu + 1))] / 2
//! eta         = k - N / 2 + 2
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn positive_finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(
            field,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

/// Reduced Planck constant and particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    hbar: f64,
    mass: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        Ok(Self {
            hbar: positive_finite("hbar", hbar)?,
            mass: positive_finite("mass", mass)?,
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `2 M / hbar^2`, the factor converting energies to inverse squared
    /// lengths in the radial equation.
    pub fn kinetic_scale(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

/// Coefficients of `V(r) = a1 r^2 + a2 / r^2 + a3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    a1: f64,
    a2: f64,
    a3: f64,
    units: UnitSystem,
}

impl CoefficientSet {
    /// `a1 = 0` is admitted here (the potential is still well defined) but
    /// every spectral operation rejects it.
    pub fn new(a1: f64, a2: f64, a3: f64, units: UnitSystem) -> Result<Self> {
        if !(a1.is_finite() && a1 >= 0.0) {
            return Err(Error::domain(
                "a1",
                format!("must be finite and >= 0, got {a1}"),
            ));
        }
        if !(a2.is_finite() && a2 >= 0.0) {
            return Err(Error::domain(
                "a2",
                format!("must be finite and >= 0, got {a2}"),
            ));
        }
        if !a3.is_finite() {
            return Err(Error::domain("a3", format!("must be finite, got {a3}")));
        }
        Ok(Self { a1, a2, a3, units })
    }

    /// Isotropic oscillator `a1 = M omega^2 / 2` with `a2 = a3 = 0`.
    pub fn harmonic(omega: f64, units: UnitSystem) -> Result<Self> {
        let omega = positive_finite("omega", omega)?;
        Self::new(0.5 * units.mass() * omega * omega, 0.0, 0.0, units)
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn a3(&self) -> f64 {
        self.a3
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.a1 * r * r + self.a2 / (r * r) + self.a3
    }

    /// Oscillator frequency `omega = sqrt(2 a1 / M)`.
    pub fn omega(&self) -> f64 {
        (2.0 * self.a1 / self.units.mass()).sqrt()
    }

    pub(crate) fn require_bound(&self) -> Result<()> {
        if self.a1 > 0.0 {
            Ok(())
        } else {
            Err(Error::domain("a1", "a1 must be > 0 for a bound spectrum"))
        }
    }
}

/// Dissociation energy and equilibrium distance of a diatomic molecule,
/// `V(r) = De (r / re - re / r)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MolecularParams {
    de: f64,
    re: f64,
}

impl MolecularParams {
    pub fn new(de: f64, re: f64) -> Result<Self> {
        Ok(Self {
            de: positive_finite("De", de)?,
            re: positive_finite("re", re)?,
        })
    }

    pub fn de(&self) -> f64 {
        self.de
    }

    pub fn re(&self) -> f64 {
        self.re
    }
}

/// Map molecular parameters onto `(a1, a2, a3) = (De/re^2, De re^2, -2 De)`.
pub fn from_molecular(m: MolecularParams, units: UnitSystem) -> Result<CoefficientSet> {
    let MolecularParams { de, re } = MolecularParams::new(m.de, m.re)?;
    CoefficientSet::new(de / (re * re), de * re * re, -2.0 * de, units)
}

/// Radial node count `n`, orbital quantum number `ell` and dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n: u32,
    pub ell: u32,
    pub dim: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, ell: u32, dim: u32) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(
                "dim",
                format!("dimension must be >= 2, got {dim}"),
            ));
        }
        Ok(Self { n, ell, dim })
    }

    /// Separation constant `l (l + N - 2)` of the hyperangular equation.
    pub fn separation_constant(&self) -> f64 {
        let ell = f64::from(self.ell);
        ell * (ell + f64::from(self.dim) - 2.0)
    }

    pub fn with_n(&self, n: u32) -> Self {
        Self { n, ..*self }
    }
}

/// Derived symbols of the reduced radial equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub nu: f64,
    pub mu: f64,
    pub k: f64,
    pub eta: f64,
    /// `nu (nu + 1)`, kept exactly as computed from the inputs.
    pub centrifugal: f64,
    dim: u32,
}

impl ReducedParams {
    /// Residual of the constraint `k (k + 1) - k (N - 1) - nu (nu + 1) = 0`.
    pub fn root_residual(&self) -> f64 {
        let n = f64::from(self.dim);
        self.k * (self.k + 1.0) - self.k * (n - 1.0) - self.nu * (self.nu + 1.0)
    }

    /// Power `eta - N/2` of the small-`r` behaviour `R ~ r^(eta - N/2)`.
    ///
    /// Evaluated as the non-negative indicial root
    /// `s = [sqrt((N-2)^2 + 4 nu(nu+1)) - (N-2)] / 2` in cancellation-free
    /// form; equals `eta - N/2` up to rounding.
    pub fn radial_exponent(&self) -> f64 {
        if self.centrifugal == 0.0 {
            return 0.0;
        }
        let shift = f64::from(self.dim) - 2.0;
        2.0 * self.centrifugal / ((shift * shift + 4.0 * self.centrifugal).sqrt() + shift)
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// True for the `k = 0` corner (`N = 2`, `l = 0`, `a2 = 0`), where the
    /// ansatz `R = r^-k f` degenerates to `R = f`.
    pub fn is_k_zero_corner(&self) -> bool {
        self.k == 0.0
    }
}

/// Reduce coefficients and quantum numbers to `(nu, mu, k, eta)`.
pub fn reduce(c: &CoefficientSet, q: QuantumNumbers) -> Result<ReducedParams> {
    c.require_bound()?;
    let q = QuantumNumbers::new(q.n, q.ell, q.dim)?;
    let scale = c.units.kinetic_scale();

    let centrifugal = q.separation_constant() + scale * c.a2;
    // non-negative root of nu^2 + nu - x = 0
    let nu = 2.0 * centrifugal / (1.0 + (1.0 + 4.0 * centrifugal).sqrt());
    let mu = (scale * c.a1).sqrt();

    let shift = f64::from(q.dim) - 2.0;
    let k = 0.5 * (shift + (shift * shift + 4.0 * centrifugal).sqrt());
    let eta = k - 0.5 * f64::from(q.dim) + 2.0;

    Ok(ReducedParams {
        nu,
        mu,
        k,
        eta,
        centrifugal,
        dim: q.dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units() -> UnitSystem {
        UnitSystem::default()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn molecular_mapping() {
        let c = from_molecular(MolecularParams::new(1.0, 1.0).unwrap(), units()).unwrap();
        assert_eq!((c.a1(), c.a2(), c.a3()), (1.0, 1.0, -2.0));

        let c = from_molecular(MolecularParams::new(2.0, 0.5).unwrap(), units()).unwrap();
        assert_eq!((c.a1(), c.a2(), c.a3()), (8.0, 0.5, -4.0));
    }

    #[test]
    fn molecular_rejects_degenerate_input() {
        let err = MolecularParams::new(1.0, 0.0).unwrap_err();
        assert_eq!(err.field(), Some("re"));
        assert_eq!(
            MolecularParams::new(-1.0, 1.0).unwrap_err().field(),
            Some("De")
        );
    }

    #[test]
    fn molecular_potential_matches_coefficient_form() {
        let m = MolecularParams::new(1.7, 1.3).unwrap();
        let c = from_molecular(m, units()).unwrap();
        for &r in &[0.3, 1.0, 1.3, 2.9] {
            let direct = m.de() * (r / m.re() - m.re() / r).powi(2);
            assert!(close(c.potential(r), direct, 1e-13));
        }
    }

    #[test]
    fn three_dimensional_oscillator() {
        let c = CoefficientSet::new(0.5, 0.0, 0.0, units()).unwrap();
        let rp = reduce(&c, QuantumNumbers::new(0, 1, 3).unwrap()).unwrap();
        assert!(close(rp.nu, 1.0, 1e-15));
        assert_eq!(rp.mu, 1.0);
        assert_eq!(rp.k, 2.0);
        assert_eq!(rp.eta, 2.5);
    }

    #[test]
    fn oscillator_any_dimension() {
        let c = CoefficientSet::new(0.5, 0.0, 0.0, units()).unwrap();
        for dim in 2..12 {
            for ell in 0..6 {
                let rp = reduce(&c, QuantumNumbers::new(0, ell, dim).unwrap()).unwrap();
                let (l, n) = (f64::from(ell), f64::from(dim));
                assert!(close(rp.k, l + n - 2.0, 1e-12), "k for l={ell} N={dim}");
                assert!(close(rp.eta, l + n / 2.0, 1e-12));
                assert!(close(rp.nu * (rp.nu + 1.0), l * (l + n - 2.0), 1e-12));
            }
        }
    }

    #[test]
    fn inverse_quadratic_root_matches_scan() {
        // 2 M a2 / hbar^2 = 2 with hbar = M = 1
        let c = CoefficientSet::new(0.5, 1.0, 0.0, units()).unwrap();
        let rp = reduce(&c, QuantumNumbers::new(0, 0, 3).unwrap()).unwrap();

        // brute-force scan for the non-negative root of nu(nu+1) = 2
        let scanned = (0..=400_000)
            .map(|i| f64::from(i) * 1e-5)
            .min_by(|a, b| {
                (a * (a + 1.0) - 2.0)
                    .abs()
                    .total_cmp(&(b * (b + 1.0) - 2.0).abs())
            })
            .unwrap();
        assert!((rp.nu - scanned).abs() < 1e-5);
        assert!(close(rp.nu, 1.0, 1e-15));
        assert!(close(rp.k, 2.0, 1e-15));
        assert!(close(rp.eta, 2.5, 1e-15));
    }

    #[test]
    fn two_dimensional_k() {
        let c = CoefficientSet::new(0.5, 0.7, 0.0, units()).unwrap();
        for ell in 0..5 {
            let rp = reduce(&c, QuantumNumbers::new(0, ell, 2).unwrap()).unwrap();
            let expected = (f64::from(ell * ell) + 1.4).sqrt();
            assert!(close(rp.k, expected, 1e-14));
        }
    }

    #[test]
    fn k_zero_corner_is_accepted() {
        let c = CoefficientSet::new(0.5, 0.0, 0.0, units()).unwrap();
        let rp = reduce(&c, QuantumNumbers::new(0, 0, 2).unwrap()).unwrap();
        assert_eq!((rp.nu, rp.k, rp.eta), (0.0, 0.0, 1.0));
        assert!(rp.is_k_zero_corner());
        assert_eq!(rp.radial_exponent(), 0.0);
    }

    #[test]
    fn reduce_rejects_unbound() {
        let c = CoefficientSet::new(0.0, 1.0, 0.0, units()).unwrap();
        let err = reduce(&c, QuantumNumbers::new(0, 0, 3).unwrap()).unwrap_err();
        assert_eq!(err.field(), Some("a1"));
        assert_eq!(
            CoefficientSet::new(-1.0, 0.0, 0.0, units())
                .unwrap_err()
                .field(),
            Some("a1")
        );
        assert_eq!(
            CoefficientSet::new(1.0, -1.0, 0.0, units())
                .unwrap_err()
                .field(),
            Some("a2")
        );
    }

    #[test]
    fn dimension_below_two_rejected() {
        assert_eq!(
            QuantumNumbers::new(0, 0, 1).unwrap_err().field(),
            Some("dim")
        );
    }

    #[test]
    fn radial_exponent_matches_eta() {
        let c = CoefficientSet::new(1.0, 1.0, -2.0, units()).unwrap();
        for dim in 2..8 {
            for ell in 0..4 {
                let rp = reduce(&c, QuantumNumbers::new(0, ell, dim).unwrap()).unwrap();
                let s = rp.radial_exponent();
                assert!((s - (rp.eta - f64::from(dim) / 2.0)).abs() < 1e-13);
                assert!(s > 0.0);
            }
        }
    }
}
