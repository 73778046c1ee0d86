//! Closed-form energy eigenvalues.
//!
//! ```text
//! E = a3 + sqrt(8 hbar^2 a1 / M) [n + 1/2 + 1/4 sqrt((N + 2l - 2)^2 + 8 M a2 / hbar^2)]
//! ```
//!
//! The same energy also follows from the quantization condition
//! `eps^2 / (4 mu) - eta / 2 = n` with `E = a3 + hbar^2 eps^2 / (2M)`; both
//! routes are evaluated and must agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{reduce, CoefficientSet, QuantumNumbers, ReducedParams, UnitSystem};
use crate::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub energy: f64,
    /// `eps^2 = 2 M (E - a3) / hbar^2`.
    pub epsilon_sq: f64,
    pub qn: QuantumNumbers,
    pub rp: ReducedParams,
}

/// `sqrt(8 hbar^2 a1 / M)`: spacing between consecutive radial levels.
pub fn level_spacing(c: &CoefficientSet) -> f64 {
    let u = c.units();
    (8.0 * u.hbar() * u.hbar() * c.a1() / u.mass()).sqrt()
}

/// Energy from the explicit closed form.
pub fn closed_form_energy(c: &CoefficientSet, q: QuantumNumbers) -> Result<f64> {
    c.require_bound()?;
    let q = QuantumNumbers::new(q.n, q.ell, q.dim)?;
    let u = c.units();
    let shift = f64::from(q.dim) + 2.0 * f64::from(q.ell) - 2.0;
    let root = (shift * shift + 8.0 * u.mass() * c.a2() / (u.hbar() * u.hbar())).sqrt();
    Ok(c.a3() + level_spacing(c) * (f64::from(q.n) + 0.5 + 0.25 * root))
}

/// Energy eigenvalue of the state `q`, with `eps^2` from the quantization
/// condition.
pub fn energy(c: &CoefficientSet, q: QuantumNumbers) -> Result<EnergyLevel> {
    let rp = reduce(c, q)?;
    let energy = closed_form_energy(c, q)?;
    let epsilon_sq = 4.0 * rp.mu * (f64::from(q.n) + 0.5 * rp.eta);
    let via_condition = c.a3() + epsilon_sq / c.units().kinetic_scale();
    debug_assert!(
        (energy - via_condition).abs()
            <= 10.0 * tolerances::ANALYTIC * energy.abs().max(level_spacing(c)),
        "closed form {energy} vs quantization condition {via_condition}"
    );
    Ok(EnergyLevel {
        energy,
        epsilon_sq,
        qn: q,
        rp,
    })
}

impl EnergyLevel {
    /// `E` recomputed from `eps^2`.
    pub fn energy_from_epsilon(&self, c: &CoefficientSet) -> f64 {
        c.a3() + self.epsilon_sq / c.units().kinetic_scale()
    }

    /// `eps^2 / (4 mu) - eta / 2`, which equals `n`.
    pub fn quantization_index(&self) -> f64 {
        self.epsilon_sq / (4.0 * self.rp.mu) - 0.5 * self.rp.eta
    }
}

/// Families with textbook energy formulas, used as an independent
/// regression surface for [`energy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCaseKind {
    /// 3-D isotropic oscillator.
    Osc3d,
    /// N-D isotropic oscillator.
    OscNd,
    /// 2-D oscillator plus inverse-quadratic term.
    OscInv2d,
    /// 3-D oscillator plus inverse-quadratic term.
    OscInv3d,
    /// 3-D pseudoharmonic potential.
    Pseudo3d,
}

/// A special case together with the parameters its formula is written in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpecialCase {
    Osc3d { omega: f64 },
    OscNd { omega: f64, dim: u32 },
    OscInv2d { omega: f64, a2: f64 },
    OscInv3d { omega: f64, a2: f64 },
    Pseudo3d { a1: f64, a2: f64, a3: f64 },
}

impl SpecialCase {
    /// Match a coefficient set and dimension against the parameter pattern
    /// of `kind`.
    pub fn from_coefficients(kind: SpecialCaseKind, c: &CoefficientSet, dim: u32) -> Result<Self> {
        c.require_bound()?;
        let expect_dim = |want: u32| {
            if dim == want {
                Ok(())
            } else {
                Err(Error::domain(
                    "dim",
                    format!("{kind:?} needs N = {want}, got {dim}"),
                ))
            }
        };
        let expect_zero = |field: &'static str, value: f64| {
            if value == 0.0 {
                Ok(())
            } else {
                Err(Error::domain(
                    field,
                    format!("{kind:?} needs {field} = 0, got {value}"),
                ))
            }
        };
        let expect_nonzero_a2 = || {
            if c.a2() > 0.0 {
                Ok(())
            } else {
                Err(Error::domain("a2", format!("{kind:?} needs a2 != 0")))
            }
        };
        let omega = c.omega();
        match kind {
            SpecialCaseKind::Osc3d => {
                expect_dim(3)?;
                expect_zero("a2", c.a2())?;
                expect_zero("a3", c.a3())?;
                Ok(SpecialCase::Osc3d { omega })
            }
            SpecialCaseKind::OscNd => {
                QuantumNumbers::new(0, 0, dim)?;
                expect_zero("a2", c.a2())?;
                expect_zero("a3", c.a3())?;
                Ok(SpecialCase::OscNd { omega, dim })
            }
            SpecialCaseKind::OscInv2d => {
                expect_dim(2)?;
                expect_nonzero_a2()?;
                expect_zero("a3", c.a3())?;
                Ok(SpecialCase::OscInv2d { omega, a2: c.a2() })
            }
            SpecialCaseKind::OscInv3d => {
                expect_dim(3)?;
                expect_nonzero_a2()?;
                expect_zero("a3", c.a3())?;
                Ok(SpecialCase::OscInv3d { omega, a2: c.a2() })
            }
            SpecialCaseKind::Pseudo3d => {
                expect_dim(3)?;
                Ok(SpecialCase::Pseudo3d {
                    a1: c.a1(),
                    a2: c.a2(),
                    a3: c.a3(),
                })
            }
        }
    }

    pub fn kind(&self) -> SpecialCaseKind {
        match self {
            SpecialCase::Osc3d { .. } => SpecialCaseKind::Osc3d,
            SpecialCase::OscNd { .. } => SpecialCaseKind::OscNd,
            SpecialCase::OscInv2d { .. } => SpecialCaseKind::OscInv2d,
            SpecialCase::OscInv3d { .. } => SpecialCaseKind::OscInv3d,
            SpecialCase::Pseudo3d { .. } => SpecialCaseKind::Pseudo3d,
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            SpecialCase::OscNd { dim, .. } => *dim,
            SpecialCase::OscInv2d { .. } => 2,
            _ => 3,
        }
    }

    /// Coefficient set the case describes; `a1 = M omega^2 / 2`.
    pub fn coefficients(&self, units: UnitSystem) -> Result<CoefficientSet> {
        let m = units.mass();
        match *self {
            SpecialCase::Osc3d { omega } | SpecialCase::OscNd { omega, .. } => {
                CoefficientSet::new(0.5 * m * omega * omega, 0.0, 0.0, units)
            }
            SpecialCase::OscInv2d { omega, a2 } | SpecialCase::OscInv3d { omega, a2 } => {
                CoefficientSet::new(0.5 * m * omega * omega, a2, 0.0, units)
            }
            SpecialCase::Pseudo3d { a1, a2, a3 } => CoefficientSet::new(a1, a2, a3, units),
        }
    }
}

/// Literal special-case energy formula, computed without going through
/// [`energy`].
pub fn special_case_energy(case: &SpecialCase, units: UnitSystem, n: u32, ell: u32) -> Result<f64> {
    let (hbar, m) = (units.hbar(), units.mass());
    let (nf, l) = (f64::from(n), f64::from(ell));
    let positive = |field: &'static str, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(Error::domain(field, format!("must be > 0, got {v}")))
        }
    };
    let energy = match *case {
        SpecialCase::Osc3d { omega } => {
            let omega = positive("omega", omega)?;
            hbar * omega * (2.0 * nf + l + 1.5)
        }
        SpecialCase::OscNd { omega, dim } => {
            let omega = positive("omega", omega)?;
            QuantumNumbers::new(n, ell, dim)?;
            hbar * omega * (2.0 * nf + l + 0.5 * f64::from(dim))
        }
        SpecialCase::OscInv2d { omega, a2 } => {
            let omega = positive("omega", omega)?;
            positive("a2", a2)?;
            let k = (l * l + 2.0 * m * a2 / (hbar * hbar)).sqrt();
            hbar * omega * (2.0 * nf + k + 1.0)
        }
        SpecialCase::OscInv3d { omega, a2 } => {
            let omega = positive("omega", omega)?;
            positive("a2", a2)?;
            let root = ((2.0 * l + 1.0).powi(2) + 8.0 * m * a2 / (hbar * hbar)).sqrt();
            0.5 * hbar * omega * (4.0 * nf + 2.0 + root)
        }
        SpecialCase::Pseudo3d { a1, a2, a3 } => {
            let a1 = positive("a1", a1)?;
            let root = ((2.0 * l + 1.0).powi(2) + 8.0 * m * a2 / (hbar * hbar)).sqrt();
            a3 + (8.0 * hbar * hbar * a1 / m).sqrt() * (nf + 0.5 + 0.25 * root)
        }
    };
    Ok(energy)
}

/// All levels with `n <= n_max`, `l <= ell_max` for each dimension in
/// `dims`, sorted by `(N, E, l, n)`.
pub fn level_table(
    c: &CoefficientSet,
    n_max: u32,
    ell_max: u32,
    dims: &[u32],
) -> Result<Vec<EnergyLevel>> {
    if dims.is_empty() {
        return Err(Error::domain("dims", "at least one dimension is required"));
    }
    let mut levels = Vec::with_capacity(dims.len() * ((n_max + 1) * (ell_max + 1)) as usize);
    for &dim in dims {
        for ell in 0..=ell_max {
            for n in 0..=n_max {
                levels.push(energy(c, QuantumNumbers::new(n, ell, dim)?)?);
            }
        }
    }
    levels.sort_by(|a, b| {
        a.qn.dim
            .cmp(&b.qn.dim)
            .then(a.energy.total_cmp(&b.energy))
            .then(a.qn.ell.cmp(&b.qn.ell))
            .then(a.qn.n.cmp(&b.qn.n))
    });
    Ok(levels)
}
