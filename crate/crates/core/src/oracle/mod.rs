//! Finite-difference eigenvalue oracle for the radial equation
//!
//! ```text
//! -(hbar^2 / 2M) r^{1-N} (r^{N-1} R')' + [hbar^2 l(l+N-2) / (2M r^2) + V(r)] R = E R
//! ```
//!
//! with `R` regular at the origin and `R(r_max) = 0`. It shares nothing with
//! the closed forms beyond the potential callback, so it serves as an
//! independent check of the spectrum.

mod tridiagonal;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{CoefficientSet, UnitSystem};

pub type Potential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Discretisation of the radial operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Cell-centred grid `r_i = (i - 1/2) h` with face fluxes weighted by
    /// `r^{N-1}`; the flux through the origin vanishes. Symmetrised by the
    /// measure `r_i^{N-1}`.
    #[default]
    FluxConservative,
    /// Vertex grid `r_i = i h` for `u = r^{(N-1)/2} R` with `u(0) = 0`, a
    /// plain three-point Laplacian and barrier `Lambda(Lambda+1)/r^2`,
    /// `Lambda = l + (N-3)/2`. Converges slowly when `Lambda` is near `-1/2`.
    Substituted,
    /// Cell-centred central differences of `R'' + (N-1)/r R'` without the
    /// flux form, symmetrised by a diagonal similarity transform.
    Direct,
}

#[derive(Clone)]
pub struct FDProblem {
    potential: Potential,
    ell: u32,
    dim: u32,
    r_max: f64,
    points: usize,
    units: UnitSystem,
    scheme: Scheme,
}

impl fmt::Debug for FDProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FDProblem")
            .field("ell", &self.ell)
            .field("dim", &self.dim)
            .field("r_max", &self.r_max)
            .field("points", &self.points)
            .field("units", &self.units)
            .field("scheme", &self.scheme)
            .finish_non_exhaustive()
    }
}

pub const MIN_POINTS: usize = 100;

/// `Lambda = l + (N-3)/2`, the effective angular momentum of `u = r^{(N-1)/2} R`.
pub fn effective_angular_momentum(ell: u32, dim: u32) -> f64 {
    f64::from(ell) + 0.5 * (f64::from(dim) - 3.0)
}

impl FDProblem {
    pub fn new(
        potential: Potential,
        ell: u32,
        dim: u32,
        r_max: f64,
        points: usize,
        units: UnitSystem,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(
                "dim",
                format!("dimension must be >= 2, got {dim}"),
            ));
        }
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::domain(
                "r_max",
                format!("must be finite and > 0, got {r_max}"),
            ));
        }
        if points < MIN_POINTS {
            return Err(Error::domain(
                "points",
                format!("need at least {MIN_POINTS}, got {points}"),
            ));
        }
        Ok(Self {
            potential,
            ell,
            dim,
            r_max,
            points,
            units,
            scheme: Scheme::default(),
        })
    }

    pub fn from_coefficients(
        c: &CoefficientSet,
        ell: u32,
        dim: u32,
        r_max: f64,
        points: usize,
    ) -> Result<Self> {
        let c = *c;
        Self::new(
            Arc::new(move |r| c.potential(r)),
            ell,
            dim,
            r_max,
            points,
            c.units(),
        )
    }

    /// Box sized from an energy ceiling: `r_max = r_t + 8 w`, where `r_t` is
    /// the outer point with `V_eff(r_t) = e_ceiling` and
    /// `w = (hbar^2 / (2M a))^{1/4}` with the local curvature `a = V'(r_t) / (2 r_t)`.
    pub fn with_ceiling(
        potential: Potential,
        ell: u32,
        dim: u32,
        units: UnitSystem,
        e_ceiling: f64,
        points: usize,
    ) -> Result<Self> {
        let mut p = Self::new(potential, ell, dim, 1.0, points, units)?;
        p.r_max = p.box_for_ceiling(e_ceiling)?;
        Ok(p)
    }

    /// Box sized to hold the lowest `count` levels. The ceiling is found from
    /// coarse solves, so no closed-form energy is consulted.
    pub fn for_levels(
        potential: Potential,
        ell: u32,
        dim: u32,
        units: UnitSystem,
        count: usize,
        points: usize,
    ) -> Result<Self> {
        if count == 0 {
            return Err(Error::domain("count", "need at least one level"));
        }
        let mut p = Self::new(potential, ell, dim, 1.0, points, units)?;
        let (_, v_min) = p.effective_minimum()?;
        let mut gap = v_min.abs().max(1.0);
        for _ in 0..60 {
            let ceiling = v_min + gap;
            let mut coarse = p.clone();
            coarse.points = (10 * count).max(400);
            coarse.r_max = coarse.box_for_ceiling(ceiling)?;
            let levels = solve(&coarse, count)?;
            let top = *levels.eigenvalues.last().expect("count >= 1");
            if top < v_min + 0.5 * gap {
                p.r_max = p.box_for_ceiling(top + (top - v_min))?;
                return Ok(p);
            }
            gap *= 2.0;
        }
        Err(Error::Accuracy {
            context: "oracle box search".into(),
            estimate: v_min + gap,
            error: f64::INFINITY,
        })
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_points(mut self, points: usize) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(Error::domain(
                "points",
                format!("need at least {MIN_POINTS}, got {points}"),
            ));
        }
        self.points = points;
        Ok(self)
    }

    pub fn with_r_max(mut self, r_max: f64) -> Result<Self> {
        if !(r_max.is_finite() && r_max > 0.0) {
            return Err(Error::domain(
                "r_max",
                format!("must be finite and > 0, got {r_max}"),
            ));
        }
        self.r_max = r_max;
        Ok(self)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    fn kinetic(&self) -> f64 {
        1.0 / self.units.kinetic_scale()
    }

    fn effective_potential(&self, r: f64) -> f64 {
        let l = f64::from(self.ell);
        let barrier = l * (l + f64::from(self.dim) - 2.0);
        (self.potential)(r) + self.kinetic() * barrier / (r * r)
    }

    /// Location and value of the smallest `V_eff` on a geometric scan.
    fn effective_minimum(&self) -> Result<(f64, f64)> {
        let mut best = (f64::NAN, f64::INFINITY);
        for k in -160..=160 {
            let r = 2f64.powf(f64::from(k) / 4.0);
            let v = self.effective_potential(r);
            if v < best.1 {
                best = (r, v);
            }
        }
        if !best.1.is_finite() {
            return Err(Error::domain(
                "potential",
                "effective potential has no finite minimum",
            ));
        }
        Ok(best)
    }

    fn box_for_ceiling(&self, e_ceiling: f64) -> Result<f64> {
        let v = |r: f64| self.effective_potential(r);
        // outermost sample below the ceiling on a geometric scan
        let mut lo = None;
        for k in -160..=160 {
            let r = 2f64.powf(f64::from(k) / 4.0);
            if v(r) <= e_ceiling {
                lo = Some(r);
            }
        }
        let Some(mut lo) = lo else {
            return Err(Error::domain(
                "e_ceiling",
                format!("{e_ceiling} lies below the potential"),
            ));
        };
        let mut hi = lo * 2f64.powf(0.25);
        for _ in 0..8 {
            if v(hi) > e_ceiling {
                break;
            }
            lo = hi;
            hi *= 2f64.powf(0.25);
        }
        if v(hi) <= e_ceiling {
            return Err(Error::domain("potential", "potential is not confining"));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if v(mid) <= e_ceiling {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r_t = 0.5 * (lo + hi);
        let step = 1e-4 * r_t;
        let slope = (v(r_t + step) - v(r_t - step)) / (2.0 * step);
        if !(slope > 0.0) {
            return Err(Error::domain(
                "potential",
                "potential is not increasing at the turning point",
            ));
        }
        let curvature = slope / (2.0 * r_t);
        let width = (self.kinetic() / curvature).powf(0.25);
        Ok(r_t + 8.0 * width)
    }

    /// Symmetric tridiagonal matrix `(diag, off)` and grid spacing.
    fn assemble(&self) -> Result<(Vec<f64>, Vec<f64>, f64)> {
        let p = self.points;
        let kin = self.kinetic();
        let dim = f64::from(self.dim);
        match self.scheme {
            Scheme::FluxConservative => {
                let h = self.r_max / p as f64;
                let inv_h2 = 1.0 / (h * h);
                let weight = |r: f64| r.powf(dim - 1.0);
                let centre = |i: usize| (i as f64 + 0.5) * h;
                // face i sits between cells i - 1 and i; face 0 is the origin
                let face = |i: usize| if i == 0 { 0.0 } else { weight(i as f64 * h) };
                let w: Vec<f64> = (0..p).map(|i| weight(centre(i))).collect();
                let diag = (0..p)
                    .map(|i| {
                        kin * (face(i) + face(i + 1)) * inv_h2 / w[i]
                            + self.effective_potential(centre(i))
                    })
                    .collect();
                let off = (0..p - 1)
                    .map(|i| -kin * face(i + 1) * inv_h2 / (w[i] * w[i + 1]).sqrt())
                    .collect();
                Ok((diag, off, h))
            }
            Scheme::Substituted => {
                let h = self.r_max / (p + 1) as f64;
                let inv_h2 = 1.0 / (h * h);
                let lam = effective_angular_momentum(self.ell, self.dim);
                let barrier = lam * (lam + 1.0);
                let diag = (1..=p)
                    .map(|i| {
                        let r = i as f64 * h;
                        kin * (2.0 * inv_h2 + barrier / (r * r)) + (self.potential)(r)
                    })
                    .collect();
                Ok((diag, vec![-kin * inv_h2; p - 1], h))
            }
            Scheme::Direct => {
                let h = self.r_max / p as f64;
                let inv_h2 = 1.0 / (h * h);
                let centre = |i: usize| (i as f64 + 0.5) * h;
                let drift = |i: usize| (dim - 1.0) / (2.0 * centre(i) * h);
                // row i: sub = -kin (1/h^2 - drift), super = -kin (1/h^2 + drift)
                let sub = |i: usize| -kin * (inv_h2 - drift(i));
                let sup = |i: usize| -kin * (inv_h2 + drift(i));
                let mut diag: Vec<f64> = (0..p)
                    .map(|i| 2.0 * kin * inv_h2 + self.effective_potential(centre(i)))
                    .collect();
                // reflecting ghost R(-h/2) = R(h/2)
                diag[0] += sub(0);
                let mut off = Vec::with_capacity(p - 1);
                for i in 0..p - 1 {
                    let product = sup(i) * sub(i + 1);
                    if !(product > 0.0) {
                        return Err(Error::domain(
                            "scheme",
                            format!("direct scheme is not symmetrisable for N = {}", self.dim),
                        ));
                    }
                    off.push(-product.sqrt());
                }
                Ok((diag, off, h))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FDSpectrum {
    pub eigenvalues: Vec<f64>,
    pub h: f64,
    pub points: usize,
    pub r_max: f64,
}

/// The `count` lowest eigenvalues on the problem's grid. `count` may be at
/// most a tenth of the grid size.
pub fn solve(p: &FDProblem, count: usize) -> Result<FDSpectrum> {
    if count == 0 || count > p.points / 10 {
        return Err(Error::domain(
            "count",
            format!(
                "must be in 1..={} for {} points, got {count}",
                p.points / 10,
                p.points
            ),
        ));
    }
    let (diag, off, h) = p.assemble()?;
    if diag.iter().chain(&off).any(|v| !v.is_finite()) {
        return Err(Error::domain(
            "potential",
            "potential is not finite on the grid",
        ));
    }
    Ok(FDSpectrum {
        eigenvalues: tridiagonal::lowest_eigenvalues(&diag, &off, count),
        h,
        points: p.points,
        r_max: p.r_max,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    /// Richardson estimates assuming an `h^2` leading error.
    pub eigenvalues: Vec<f64>,
    /// Per-level error estimate: the change between the last two
    /// extrapolations, or the distance to the finest raw value when only two
    /// grids were used.
    pub convergence: Vec<f64>,
    /// Raw spectra from coarsest to finest.
    pub grids: Vec<FDSpectrum>,
}

/// Solve on `refinements` grids, doubling the point count each time, and
/// extrapolate the last pair. Errors with [`Error::Accuracy`] when the
/// successive differences stop shrinking above round-off.
pub fn richardson(p: &FDProblem, count: usize, refinements: usize) -> Result<Extrapolated> {
    if refinements < 2 {
        return Err(Error::domain(
            "refinements",
            format!("need at least 2, got {refinements}"),
        ));
    }
    let mut grids = Vec::with_capacity(refinements);
    let mut problem = p.clone();
    for _ in 0..refinements {
        grids.push(solve(&problem, count)?);
        problem.points *= 2;
    }
    let extrapolate = |coarse: &FDSpectrum, fine: &FDSpectrum, k: usize| {
        (4.0 * fine.eigenvalues[k] - coarse.eigenvalues[k]) / 3.0
    };
    let last = refinements - 1;
    let mut eigenvalues = Vec::with_capacity(count);
    let mut convergence = Vec::with_capacity(count);
    for k in 0..count {
        let noise = 1e-11 * grids[last].eigenvalues[k].abs().max(1.0);
        let diffs: Vec<f64> = grids
            .windows(2)
            .map(|w| (w[0].eigenvalues[k] - w[1].eigenvalues[k]).abs())
            .collect();
        if let Some(w) = diffs.windows(2).find(|w| w[1] > w[0] && w[1] > noise) {
            return Err(Error::Accuracy {
                context: format!("oracle level {k} is not converging"),
                estimate: grids[last].eigenvalues[k],
                error: w[1],
            });
        }
        let value = extrapolate(&grids[last - 1], &grids[last], k);
        let change = if refinements >= 3 {
            (value - extrapolate(&grids[last - 2], &grids[last - 1], k)).abs()
        } else {
            (value - grids[last].eigenvalues[k]).abs()
        };
        eigenvalues.push(value);
        convergence.push(change);
    }
    Ok(Extrapolated {
        eigenvalues,
        convergence,
        grids,
    })
}
