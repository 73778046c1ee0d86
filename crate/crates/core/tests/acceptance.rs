//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use pseudoharmonic::ladder::{
    algebra_summary, differential_agreement, z_samples, Direction, LadderCoeffs,
};
use pseudoharmonic::oracle::{richardson, solve, FDProblem};
use pseudoharmonic::specfun::{
    beta, hyp1f1_poly, hyp1f1_series, integrate, laguerre, ln_factorial, ln_gamma, QuadratureRule,
};
use pseudoharmonic::spectrum::{
    closed_form_energy, energy, level_spacing, special_case_energy, SpecialCase,
};
use pseudoharmonic::wavefunction::{
    count_nodes, make_state, norm_integral, overlap, residual, RadialGrid,
};
use pseudoharmonic::{from_molecular, CoefficientSet, MolecularParams, QuantumNumbers, UnitSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn units() -> UnitSystem {
    UnitSystem::default()
}

fn harmonic() -> CoefficientSet {
    CoefficientSet::new(0.5, 0.0, 0.0, units()).unwrap()
}

fn pseudoharmonic() -> CoefficientSet {
    from_molecular(MolecularParams::new(1.0, 1.0).unwrap(), units()).unwrap()
}

/// Oscillator plus inverse square with `2 M a2 / hbar^2 = 2`.
fn oscillator_inverse_square() -> CoefficientSet {
    CoefficientSet::new(0.5, 1.0, 0.0, units()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Tracks the worst value of a measure and where it occurred.
struct Worst {
    value: f64,
    at: String,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            at: String::new(),
        }
    }

    fn update(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    fn within(&self, tolerance: f64, what: &str) -> Outcome {
        let at = if self.at.is_empty() {
            "every case"
        } else {
            &self.at
        };
        let msg = format!(
            "worst {what} {:.3e} (tol {tolerance:.0e}) at {at}",
            self.value
        );
        if self.value <= tolerance {
            Ok(msg)
        } else {
            Err(msg)
        }
    }
}

fn closed_form_vs_oracle() -> Outcome {
    let sets = [
        ("harmonic", harmonic()),
        ("pseudoharmonic", pseudoharmonic()),
        ("oscillator+inverse-square", oscillator_inverse_square()),
    ];
    let jobs: Vec<(&str, CoefficientSet, u32, u32)> = sets
        .iter()
        .flat_map(|&(name, c)| {
            [2u32, 3, 5]
                .into_iter()
                .flat_map(move |dim| (0u32..=2).map(move |ell| (name, c, dim, ell)))
        })
        .collect();

    let results: Vec<Result<(f64, String), String>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(name, c, dim, ell)| {
                scope.spawn(move || -> Result<(f64, String), String> {
                    let label = format!("{name} N={dim} l={ell}");
                    let potential = Arc::new(move |r: f64| c.potential(r));
                    let problem = FDProblem::for_levels(potential, ell, dim, c.units(), 4, 2000)
                        .map_err(|e| format!("{label}: {e}"))?;
                    let fd = richardson(&problem, 4, 3).map_err(|e| format!("{label}: {e}"))?;
                    let mut worst = (0.0f64, String::new());
                    for n in 0..4u32 {
                        let exact =
                            closed_form_energy(&c, QuantumNumbers::new(n, ell, dim).unwrap())
                                .map_err(|e| e.to_string())?;
                        let err = rel(fd.eigenvalues[n as usize], exact);
                        if err > worst.0 {
                            worst = (err, format!("{label} n={n}"));
                        }
                    }
                    // no spurious or missing levels below the top requested one
                    let e_top =
                        closed_form_energy(&c, QuantumNumbers::new(3, ell, dim).unwrap()).unwrap();
                    let ceiling = e_top + 0.5 * level_spacing(&c);
                    let many = solve(&problem.clone().with_points(4000).unwrap(), 8)
                        .map_err(|e| e.to_string())?;
                    let below = many.eigenvalues.iter().filter(|&&e| e < ceiling).count();
                    if below != 4 {
                        return Err(format!(
                            "{label}: {below} oracle levels below E(n=3), expected 4"
                        ));
                    }
                    Ok(worst)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    });

    let mut worst = Worst::new();
    for r in results {
        let (err, at) = r?;
        worst.update(err, || at);
    }
    worst.within(
        1e-6,
        &format!("relative deviation over {} problems x 4 levels", jobs.len()),
    )
}

fn special_cases() -> Outcome {
    let mut worst = Worst::new();
    let mut checked = 0;
    let unit_choices = [units(), UnitSystem::new(1.3, 0.7).unwrap()];
    for u in unit_choices {
        let cases = [
            SpecialCase::Osc3d { omega: 1.0 },
            SpecialCase::OscNd { omega: 1.0, dim: 2 },
            SpecialCase::OscNd { omega: 1.0, dim: 3 },
            SpecialCase::OscNd { omega: 1.0, dim: 5 },
            SpecialCase::OscNd {
                omega: 1.0,
                dim: 10,
            },
            SpecialCase::OscNd {
                omega: 0.37,
                dim: 7,
            },
            SpecialCase::OscInv2d {
                omega: 1.0,
                a2: 1.0,
            },
            SpecialCase::OscInv2d {
                omega: 2.2,
                a2: 0.3,
            },
            SpecialCase::OscInv3d {
                omega: 1.0,
                a2: 1.0,
            },
            SpecialCase::OscInv3d {
                omega: 0.8,
                a2: 2.5,
            },
            SpecialCase::Pseudo3d {
                a1: 1.0,
                a2: 1.0,
                a3: -2.0,
            },
            SpecialCase::Pseudo3d {
                a1: 0.4,
                a2: 3.1,
                a3: 1.7,
            },
        ];
        for case in cases {
            let c = case.coefficients(u).map_err(|e| e.to_string())?;
            // the coefficient form maps back onto the same case
            let back = SpecialCase::from_coefficients(case.kind(), &c, case.dim())
                .map_err(|e| e.to_string())?;
            let round_trip = special_case_energy(&back, u, 0, 0).map_err(|e| e.to_string())?;
            for n in 0..4 {
                for ell in 0..3 {
                    let special =
                        special_case_energy(&case, u, n, ell).map_err(|e| e.to_string())?;
                    let general = energy(&c, QuantumNumbers::new(n, ell, case.dim()).unwrap())
                        .map_err(|e| e.to_string())?
                        .energy;
                    worst.update(rel(general, special), || format!("{case:?} n={n} l={ell}"));
                    checked += 1;
                }
            }
            let direct = special_case_energy(&case, u, 0, 0).unwrap();
            worst.update(rel(round_trip, direct), || format!("{case:?} round trip"));
        }
    }
    let ground = energy(&harmonic(), QuantumNumbers::new(0, 0, 3).unwrap())
        .unwrap()
        .energy;
    let five = energy(&harmonic(), QuantumNumbers::new(0, 0, 5).unwrap())
        .unwrap()
        .energy;
    worst.update(rel(ground, 1.5), || "3-D oscillator ground state".into());
    worst.update(rel(five, 2.5), || "5-D oscillator ground state".into());
    worst.within(1e-12, &format!("relative deviation over {checked} levels"))
}

fn state_sets() -> [(&'static str, CoefficientSet); 2] {
    [
        ("harmonic", harmonic()),
        ("pseudoharmonic", pseudoharmonic()),
    ]
}

fn normalization_and_orthogonality() -> Outcome {
    let mut norm = Worst::new();
    let mut orth = Worst::new();
    for (name, c) in state_sets() {
        for dim in [2u32, 3, 5, 10] {
            for ell in 0..=3u32 {
                let states: Vec<_> = (0..=5u32)
                    .map(|n| make_state(&c, QuantumNumbers::new(n, ell, dim).unwrap()))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?;
                for (i, s) in states.iter().enumerate() {
                    let value = norm_integral(s).map_err(|e| e.to_string())?;
                    norm.update((value - 1.0).abs(), || {
                        format!("{name} N={dim} l={ell} n={i}")
                    });
                    for (j, t) in states.iter().enumerate().skip(i + 1) {
                        let value = overlap(s, t).map_err(|e| e.to_string())?;
                        orth.update(value.abs(), || format!("{name} N={dim} l={ell} n={i},{j}"));
                    }
                }
            }
        }
    }
    let a = norm.within(1e-8, "|norm - 1|");
    let b = orth.within(1e-8, "|overlap|");
    match (a, b) {
        (Ok(a), Ok(b)) => Ok(format!("{a}; {b}")),
        (a, b) => Err(format!(
            "{}; {}",
            a.unwrap_or_else(|e| e),
            b.unwrap_or_else(|e| e)
        )),
    }
}

fn radial_residual() -> Outcome {
    let mut exact = Worst::new();
    // smallest detuned residual; stored negated so Worst tracks the minimum
    let mut detuned = Worst::new();
    detuned.value = f64::NEG_INFINITY;
    let sets = [
        ("harmonic", harmonic()),
        ("pseudoharmonic", pseudoharmonic()),
        ("oscillator+inverse-square", oscillator_inverse_square()),
    ];
    for (name, c) in sets {
        let shift = 0.1 * level_spacing(&c);
        for dim in [2u32, 3, 5, 10] {
            for ell in 0..=3u32 {
                for n in 0..=5u32 {
                    let q = QuantumNumbers::new(n, ell, dim).unwrap();
                    let s = make_state(&c, q).map_err(|e| e.to_string())?;
                    let grid = RadialGrid::for_state(&s, 2000).map_err(|e| e.to_string())?;
                    let e = energy(&c, q).map_err(|e| e.to_string())?.energy;
                    let at = || format!("{name} N={dim} l={ell} n={n}");
                    exact.update(residual(&s, e, &grid).map_err(|e| e.to_string())?, at);
                    for sign in [-1.0, 1.0] {
                        let r = residual(&s, e + sign * shift, &grid).map_err(|e| e.to_string())?;
                        detuned.update(-r, at);
                    }
                }
            }
        }
    }
    let smallest_detuned = -detuned.value;
    let a = exact.within(1e-9, "exact residual");
    let msg = format!(
        "smallest detuned residual {smallest_detuned:.3e} (min 1e-2) at {}",
        detuned.at
    );
    match a {
        Ok(a) if smallest_detuned >= 1e-2 => Ok(format!("{a}; {msg}")),
        a => Err(format!("{}; {msg}", a.unwrap_or_else(|e| e))),
    }
}

fn ladder_differential() -> Outcome {
    let mut worst = Worst::new();
    let sets = [
        ("harmonic", harmonic()),
        ("pseudoharmonic", pseudoharmonic()),
        ("oscillator+inverse-square", oscillator_inverse_square()),
    ];
    for (name, c) in sets {
        for dim in [2u32, 3, 5] {
            for ell in 0..=2u32 {
                for n in 0..=5u32 {
                    let s = make_state(&c, QuantumNumbers::new(n, ell, dim).unwrap())
                        .map_err(|e| e.to_string())?;
                    let z = z_samples(&s, 200);
                    for op in [Direction::Lower, Direction::Raise] {
                        let dev = differential_agreement(op, &s, &z).map_err(|e| e.to_string())?;
                        worst.update(dev, || format!("{name} N={dim} l={ell} n={n} {op:?}"));
                    }
                }
            }
        }
    }
    worst.within(1e-10, "relative pointwise deviation")
}

fn spectral_algebra() -> Outcome {
    let mut commutators = Worst::new();
    let mut casimir = Worst::new();
    let mut powers = Worst::new();
    let mut etas: Vec<(String, LadderCoeffs)> = Vec::new();
    for (name, c) in state_sets() {
        for dim in [2u32, 3, 5, 10] {
            for ell in 0..=3u32 {
                let s = make_state(&c, QuantumNumbers::new(0, ell, dim).unwrap())
                    .map_err(|e| e.to_string())?;
                etas.push((
                    format!("{name} N={dim} l={ell}"),
                    LadderCoeffs::from_state(&s),
                ));
            }
        }
    }
    for eta in [0.5, 1.0, 2.0, 7.25] {
        etas.push((format!("eta={eta}"), LadderCoeffs::new(eta, 3).unwrap()));
    }
    for (label, ctx) in &etas {
        let s = algebra_summary(*ctx, 20, 5).map_err(|e| e.to_string())?;
        for (pair, r) in &s.commutator_residuals {
            commutators.update(*r, || format!("{label} {}", pair.label()));
        }
        casimir.update(s.casimir_residual, || label.clone());
        powers.update(s.power_residual, || label.clone());
    }
    let parts = [
        commutators.within(1e-13, "commutator residual"),
        casimir.within(1e-13, "Casimir residual"),
        powers.within(1e-13, "power-product residual"),
    ];
    let ok = parts.iter().all(Result::is_ok);
    let msg = parts
        .into_iter()
        .map(|p| p.unwrap_or_else(|e| e))
        .collect::<Vec<_>>()
        .join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn special_function_identities() -> Outcome {
    let mut convolution = Worst::new();
    let samples = [
        (0.5, 1.5, 2.0, 1.0),
        (0.3, 2.7, -1.3, 2.2),
        (1.7, 0.6, 0.8, 3.1),
        (2.5, 3.5, -2.0, 1.5),
        (0.9, 0.4, 1.1, 0.7),
        (1.25, 1.75, 4.0, 2.0),
    ];
    for (a, b, mu, y) in samples {
        // split at y/2 and reflect the right half so both endpoint
        // singularities sit at an exact zero of the integration variable
        let half = 0.5 * y;
        let left = integrate(
            |t: f64| (y - t).powf(a - 1.0) * t.powf(b - 1.0) * (mu * t).exp(),
            0.0,
            half,
            QuadratureRule::default(),
        )
        .map_err(|e| e.to_string())?;
        let right = integrate(
            |u: f64| u.powf(a - 1.0) * (y - u).powf(b - 1.0) * (mu * (y - u)).exp(),
            0.0,
            half,
            QuadratureRule::default(),
        )
        .map_err(|e| e.to_string())?;
        let lhs = left + right;
        let rhs = beta(a, b).map_err(|e| e.to_string())?
            * y.powf(a + b - 1.0)
            * hyp1f1_series(b, a + b, mu * y).map_err(|e| e.to_string())?;
        convolution.update(rel(lhs, rhs), || format!("a={a} b={b} mu={mu} y={y}"));
    }

    let mut conversion = Worst::new();
    for n in 0..=10u32 {
        for b in [0.5, 1.0, 1.5, 2.5, 4.2, 7.0] {
            for x in [0.1, 0.5, 1.0, 2.3, 5.0, 9.7] {
                let poly = hyp1f1_poly(n, b, x).map_err(|e| e.to_string())?;
                let series = hyp1f1_series(-f64::from(n), b, x).map_err(|e| e.to_string())?;
                conversion.update(rel(poly, series), || format!("n={n} b={b} x={x}"));
            }
        }
    }

    let mut weighted_norm = Worst::new();
    for a in [0.5, 1.5, 2.5] {
        for b in 0..=3u32 {
            let integral = integrate(
                |x: f64| {
                    let l = laguerre(b, a, x).unwrap_or(f64::NAN);
                    x.powf(a) * (-x).exp() * l * l
                },
                0.0,
                f64::INFINITY,
                QuadratureRule::default(),
            )
            .map_err(|e| e.to_string())?;
            let expected = (ln_gamma(a + f64::from(b) + 1.0).map_err(|e| e.to_string())?
                - ln_factorial(b))
            .exp();
            weighted_norm.update(rel(integral, expected), || format!("A={a} B={b}"));
        }
    }

    let parts = [
        convolution.within(1e-8, "convolution identity"),
        conversion.within(1e-10, "confluent/Laguerre conversion"),
        weighted_norm.within(1e-8, "weighted Laguerre norm"),
    ];
    let ok = parts.iter().all(Result::is_ok);
    let msg = parts
        .into_iter()
        .map(|p| p.unwrap_or_else(|e| e))
        .collect::<Vec<_>>()
        .join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn structural_invariants() -> Outcome {
    const CASES: usize = 600;
    let mut rng = ChaCha8Rng::seed_from_u64(0x05ee_d0fa);
    let mut degeneracy = Worst::new();
    let mut spacing = Worst::new();
    let mut node_failures = Vec::new();
    for case in 0..CASES {
        let u = UnitSystem::new(rng.random_range(0.5..2.0), rng.random_range(0.5..2.0)).unwrap();
        let c = CoefficientSet::new(
            rng.random_range(0.05..5.0),
            rng.random_range(0.0..5.0),
            rng.random_range(-10.0..10.0),
            u,
        )
        .unwrap();
        let n = rng.random_range(0..9u32);
        let ell = rng.random_range(0..6u32);
        let dim = rng.random_range(2..12u32);
        let label = || format!("case {case}: {c:?} n={n} l={ell} N={dim}");

        let lifted =
            energy(&c, QuantumNumbers::new(n, ell, dim + 2).unwrap()).map_err(|e| e.to_string())?;
        let shifted =
            energy(&c, QuantumNumbers::new(n, ell + 1, dim).unwrap()).map_err(|e| e.to_string())?;
        degeneracy.update(rel(lifted.energy, shifted.energy), label);

        let q = QuantumNumbers::new(n, ell, dim).unwrap();
        let e0 = energy(&c, q).map_err(|e| e.to_string())?.energy;
        let e1 = energy(&c, q.with_n(n + 1))
            .map_err(|e| e.to_string())?
            .energy;
        let expected = (8.0 * u.hbar() * u.hbar() * c.a1() / u.mass()).sqrt();
        spacing.update(rel(e1 - e0, expected), label);

        let s = make_state(&c, q).map_err(|e| e.to_string())?;
        let nodes = count_nodes(&s, 4000);
        if nodes != n as usize {
            node_failures.push(format!("{} has {nodes} nodes", label()));
        }
    }
    let parts = [
        degeneracy.within(1e-12, "degeneracy deviation"),
        spacing.within(1e-10, "spacing deviation"),
        if node_failures.is_empty() {
            Ok(format!("node count = n in all {CASES} cases"))
        } else {
            Err(format!(
                "{} node-count failures, first: {}",
                node_failures.len(),
                node_failures[0]
            ))
        },
    ];
    let ok = parts.iter().all(Result::is_ok);
    let msg = parts
        .into_iter()
        .map(|p| p.unwrap_or_else(|e| e))
        .collect::<Vec<_>>()
        .join("; ");
    if ok {
        Ok(format!("{CASES} random cases: {msg}"))
    } else {
        Err(format!("{CASES} random cases: {msg}"))
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "AC1 closed-form energies vs finite-difference oracle",
            closed_form_vs_oracle,
        ),
        ("AC2 special cases via the general spectrum", special_cases),
        (
            "AC3 normalization and orthogonality",
            normalization_and_orthogonality,
        ),
        ("AC4 radial-equation residual", radial_residual),
        (
            "AC5 differential vs spectral ladder action",
            ladder_differential,
        ),
        ("AC6 spectral algebra", spectral_algebra),
        (
            "AC7 special-function identities",
            special_function_identities,
        ),
        ("AC8 structural invariants", structural_invariants),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {name} [{elapsed:.1}s]: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name} [{elapsed:.1}s]: {msg}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
