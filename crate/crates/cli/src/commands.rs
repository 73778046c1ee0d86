use serde_json::{json, Map, Value};

use pseudoharmonic::ladder::{
    algebra_summary, casimir, differential_agreement, z_samples, BasisVector, Direction,
    LadderCoeffs,
};
use pseudoharmonic::oracle::{richardson, FDProblem};
use pseudoharmonic::spectrum::{closed_form_energy, energy, level_spacing, level_table};
use pseudoharmonic::wavefunction::{
    make_state, norm_integral, overlap, residual, RadialGrid, RadialState,
};
use pseudoharmonic::{from_molecular, CoefficientSet, MolecularParams, QuantumNumbers, UnitSystem};

use crate::args::{
    LadderArgs, OracleArgs, OracleSettings, Preset, RangeArgs, SourceArgs, SpectrumArgs,
    ToleranceArgs, VerifyArgs, WavefunctionArgs,
};
use crate::molecules::load_molecules;
use crate::output::{Report, Table};
use crate::CliError;

/// Command result: a report and whether every check in it passed.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

struct Resolved {
    coefficients: CoefficientSet,
    source: String,
}

fn usage(field: &'static str, message: impl Into<String>) -> CliError {
    CliError::Usage {
        field,
        message: message.into(),
    }
}

fn units_from(s: &SourceArgs) -> pseudoharmonic::Result<UnitSystem> {
    UnitSystem::new(s.hbar.unwrap_or(1.0), s.mass.unwrap_or(1.0))
}

fn resolve(s: &SourceArgs) -> Result<Resolved, CliError> {
    let inline = s.a1.is_some() || s.a2.is_some() || s.a3.is_some();
    let molecular = s.de.is_some() || s.re.is_some();
    let file = s.molecule.is_some() || s.molecule_file.is_some();

    if let Some(preset) = s.preset {
        if inline || file {
            return Err(usage(
                "preset",
                "--preset cannot be combined with --a1/--a2/--a3 or a molecule file",
            ));
        }
        let units = units_from(s)?;
        return Ok(match preset {
            Preset::Harmonic => {
                if molecular {
                    return Err(usage(
                        "preset",
                        "--preset harmonic takes --omega, not --De/--re",
                    ));
                }
                let omega = s.omega.unwrap_or(1.0);
                Resolved {
                    coefficients: CoefficientSet::harmonic(omega, units)?,
                    source: format!("preset harmonic (omega={omega})"),
                }
            }
            Preset::Pseudoharmonic => {
                if s.omega.is_some() {
                    return Err(usage("omega", "--omega only applies to --preset harmonic"));
                }
                let (de, re) = (s.de.unwrap_or(1.0), s.re.unwrap_or(1.0));
                Resolved {
                    coefficients: from_molecular(MolecularParams::new(de, re)?, units)?,
                    source: format!("preset pseudoharmonic (De={de}, re={re})"),
                }
            }
        });
    }
    if s.omega.is_some() {
        return Err(usage("omega", "--omega only applies to --preset harmonic"));
    }
    match (inline, molecular, file) {
        (true, false, false) => {
            let a1 = s.a1.ok_or_else(|| usage("a1", "--a1 is required with --a2/--a3"))?;
            Ok(Resolved {
                coefficients: CoefficientSet::new(a1, s.a2.unwrap_or(0.0), s.a3.unwrap_or(0.0), units_from(s)?)?,
                source: "inline".into(),
            })
        }
        (false, true, false) => {
            let de = s.de.ok_or_else(|| usage("De", "--De is required with --re"))?;
            let re = s.re.ok_or_else(|| usage("re", "--re is required with --De"))?;
            Ok(Resolved {
                coefficients: from_molecular(MolecularParams::new(de, re)?, units_from(s)?)?,
                source: format!("molecular (De={de}, re={re})"),
            })
        }
        (false, false, true) => {
            let key = s.molecule.as_deref().ok_or_else(|| usage("molecule", "--molecule KEY is required with --molecule-file"))?;
            let path = s.molecule_file.as_deref().ok_or_else(|| usage("molecule-file", "--molecule-file is required"))?;
            if s.hbar.is_some() {
                return Err(usage("hbar", "units come from the molecule file"));
            }
            if s.mass.is_some() {
                return Err(usage("mass", "units come from the molecule file"));
            }
            let molecules = load_molecules(path)?;
            let m = molecules
                .get(key)
                .ok_or_else(|| usage("molecule", format!("unknown molecule key `{key}` in {}", path.display())))?;
            Ok(Resolved {
                coefficients: from_molecular(m.params, m.units)?,
                source: format!("molecule `{key}` from {}", path.display()),
            })
        }
        (false, false, false) => Err(usage(
            "source",
            "give one coefficient source: --a1/--a2/--a3, --De/--re, --molecule with --molecule-file, or --preset",
        )),
        _ => Err(usage(
            "source",
            "give exactly one coefficient source: --a1/--a2/--a3, --De/--re, or --molecule with --molecule-file",
        )),
    }
}

fn base_meta(command: &str, r: &Resolved) -> Map<String, Value> {
    let c = &r.coefficients;
    let mut meta = Map::new();
    meta.insert("command".into(), json!(command));
    meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    meta.insert("source".into(), json!(r.source));
    meta.insert(
        "coefficients".into(),
        json!({ "a1": c.a1(), "a2": c.a2(), "a3": c.a3() }),
    );
    meta.insert(
        "units".into(),
        json!({ "hbar": c.units().hbar(), "M": c.units().mass() }),
    );
    meta
}

fn range_meta(meta: &mut Map<String, Value>, range: &RangeArgs) {
    meta.insert(
        "range".into(),
        json!({ "dims": range.dims, "n_max": range.n_max, "ell_max": range.ell_max }),
    );
}

fn validate_dims(dims: &[u32]) -> Result<(), CliError> {
    if dims.is_empty() {
        return Err(usage("dims", "at least one dimension is required"));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(usage("dims", format!("dimensions must be >= 2, got {d}")));
    }
    Ok(())
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.source)?;
    validate_dims(&args.range.dims)?;
    let c = &r.coefficients;
    let levels = level_table(c, args.range.n_max, args.range.ell_max, &args.range.dims)?;
    let mut table = Table::new(vec!["dim", "ell", "n", "energy", "eta", "nu", "k", "mu"]);
    for level in &levels {
        table.push(vec![
            level.qn.dim.into(),
            level.qn.ell.into(),
            level.qn.n.into(),
            level.energy.into(),
            level.rp.eta.into(),
            level.rp.nu.into(),
            level.rp.k.into(),
            level.rp.mu.into(),
        ]);
    }
    let mut meta = base_meta("spectrum", &r);
    range_meta(&mut meta, &args.range);
    meta.insert("level_spacing".into(), json!(level_spacing(c)));
    Ok(Outcome {
        report: Report { meta, table },
        passed: true,
    })
}

pub fn wavefunction(args: &WavefunctionArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.source)?;
    let c = &r.coefficients;
    let q = QuantumNumbers::new(args.n, args.ell, args.dim)?;
    let state = make_state(c, q)?;
    if args.points < 2 {
        return Err(usage(
            "points",
            format!("need at least 2 samples, got {}", args.points),
        ));
    }
    let r_max = match args.r_max {
        Some(v) if v.is_finite() && v > 0.0 => v,
        Some(v) => return Err(usage("r-max", format!("must be finite and > 0, got {v}"))),
        None => state.r_max(),
    };
    let mu = state.reduced().mu;
    let power = f64::from(args.dim) - 1.0;
    let mut table = Table::new(vec!["r", "z", "R", "density"]);
    for i in 0..args.points {
        let radius = r_max * i as f64 / (args.points - 1) as f64;
        let value = state.eval_r(radius)?;
        table.push(vec![
            radius.into(),
            (mu * radius * radius).into(),
            value.into(),
            (value * value * radius.powf(power)).into(),
        ]);
    }
    let mut meta = base_meta("wavefunction", &r);
    meta.insert(
        "state".into(),
        json!({ "n": args.n, "ell": args.ell, "dim": args.dim }),
    );
    meta.insert("energy".into(), json!(energy(c, q)?.energy));
    meta.insert("eta".into(), json!(state.reduced().eta));
    meta.insert("norm_const".into(), json!(state.norm_const()));
    meta.insert("norm_integral".into(), json!(norm_integral(&state)?));
    meta.insert("r_max".into(), json!(r_max));
    Ok(Outcome {
        report: Report { meta, table },
        passed: true,
    })
}

pub fn ladder(args: &LadderArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.source)?;
    let c = &r.coefficients;
    let ground = make_state(c, QuantumNumbers::new(0, args.ell, args.dim)?)?;
    let ctx = LadderCoeffs::from_state(&ground);
    let summary = algebra_summary(ctx, args.n_max, args.q_max)?;
    let mut table = Table::new(vec![
        "n",
        "lambda_minus",
        "lambda_plus",
        "l0",
        "casimir_lowering",
        "casimir_raising",
        "differential_lower",
        "differential_raise",
    ]);
    for n in 0..=args.n_max {
        let state = ground.with_n(n)?;
        let z = z_samples(&state, 200);
        let forms = casimir(&BasisVector::basis(n, ctx));
        table.push(vec![
            n.into(),
            summary.lambda_minus[n as usize].into(),
            summary.lambda_plus[n as usize].into(),
            (f64::from(n) + 0.5 * ctx.eta()).into(),
            forms.via_lowering.amplitude(n).into(),
            forms.via_raising.amplitude(n).into(),
            differential_agreement(Direction::Lower, &state, &z)?.into(),
            differential_agreement(Direction::Raise, &state, &z)?.into(),
        ]);
    }
    let commutators: Map<String, Value> = summary
        .commutator_residuals
        .iter()
        .map(|(pair, r)| (pair.label().to_owned(), json!(r)))
        .collect();
    let mut meta = base_meta("ladder", &r);
    meta.insert("state".into(), json!({ "ell": args.ell, "dim": args.dim }));
    meta.insert("eta".into(), json!(ctx.eta()));
    meta.insert("bargmann_index".into(), json!(ctx.bargmann_index()));
    meta.insert(
        "casimir_eigenvalue".into(),
        json!(summary.casimir_eigenvalue),
    );
    meta.insert("commutator_residuals".into(), Value::Object(commutators));
    meta.insert("casimir_residual".into(), json!(summary.casimir_residual));
    meta.insert("power_residual".into(), json!(summary.power_residual));
    Ok(Outcome {
        report: Report { meta, table },
        passed: true,
    })
}

/// Accuracy failures count as a failed check (NaN); domain errors abort.
fn measured(value: pseudoharmonic::Result<f64>) -> Result<f64, CliError> {
    match value {
        Ok(v) => Ok(v),
        Err(e @ pseudoharmonic::Error::Domain { .. }) => Err(e.into()),
        Err(pseudoharmonic::Error::Accuracy { .. }) => Ok(f64::NAN),
    }
}

#[derive(Clone, Copy)]
enum Bound {
    Max(f64),
    Min(f64),
}

struct Checks {
    table: Table,
    failures: usize,
}

impl Checks {
    fn new() -> Self {
        Self {
            table: Table::new(vec![
                "check",
                "dim",
                "ell",
                "n",
                "value",
                "tolerance",
                "pass",
            ]),
            failures: 0,
        }
    }

    fn record(&mut self, check: &str, dim: u32, ell: u32, n: String, value: f64, bound: Bound) {
        let (pass, tolerance) = match bound {
            Bound::Max(t) => (value <= t, t),
            Bound::Min(t) => (value >= t, t),
        };
        if !pass {
            self.failures += 1;
        }
        self.table.push(vec![
            check.into(),
            dim.into(),
            ell.into(),
            n.into(),
            value.into(),
            tolerance.into(),
            pass.into(),
        ]);
    }
}

fn oracle_problem(
    c: &CoefficientSet,
    ell: u32,
    dim: u32,
    count: usize,
    settings: &OracleSettings,
) -> Result<FDProblem, CliError> {
    let c = *c;
    let problem = FDProblem::for_levels(
        std::sync::Arc::new(move |r| c.potential(r)),
        ell,
        dim,
        c.units(),
        count,
        settings.points,
    )?;
    Ok(problem.with_scheme(settings.scheme.into()))
}

fn tolerance_meta(t: &ToleranceArgs) -> Value {
    json!({
        "oracle": t.tol_oracle,
        "normalization": t.tol_normalization,
        "orthogonality": t.tol_orthogonality,
        "residual": t.tol_residual,
        "detuned_minimum": t.tol_detuned,
        "ladder_differential": t.tol_ladder,
        "algebra": t.tol_algebra,
        "power": t.tol_power,
    })
}

fn oracle_meta(s: &OracleSettings) -> Value {
    json!({
        "points": s.points,
        "refinements": s.refinements,
        "scheme": format!("{:?}", pseudoharmonic::oracle::Scheme::from(s.scheme)),
    })
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.source)?;
    validate_dims(&args.range.dims)?;
    let c = &r.coefficients;
    let t = &args.tolerances;
    let spacing = level_spacing(c);
    let mut checks = Checks::new();

    for &dim in &args.range.dims {
        for ell in 0..=args.range.ell_max {
            let states: Vec<RadialState> = (0..=args.range.n_max)
                .map(|n| make_state(c, QuantumNumbers::new(n, ell, dim)?))
                .collect::<pseudoharmonic::Result<_>>()?;

            for s in &states {
                let n = s.qn().n;
                let label = n.to_string();
                let norm = measured(norm_integral(s))?;
                checks.record(
                    "normalization",
                    dim,
                    ell,
                    label.clone(),
                    (norm - 1.0).abs(),
                    Bound::Max(t.tol_normalization),
                );

                let e = energy(c, s.qn())?.energy;
                let grid = RadialGrid::for_state(s, 2000)?;
                let exact = measured(residual(s, e, &grid))?;
                checks.record(
                    "residual",
                    dim,
                    ell,
                    label.clone(),
                    exact,
                    Bound::Max(t.tol_residual),
                );
                let detuned = measured(residual(s, e + 0.1 * spacing, &grid))?
                    .min(measured(residual(s, e - 0.1 * spacing, &grid))?);
                checks.record(
                    "residual_detuned",
                    dim,
                    ell,
                    label.clone(),
                    detuned,
                    Bound::Min(t.tol_detuned),
                );

                let z = z_samples(s, 200);
                let lower = measured(differential_agreement(Direction::Lower, s, &z))?;
                checks.record(
                    "ladder_lower",
                    dim,
                    ell,
                    label.clone(),
                    lower,
                    Bound::Max(t.tol_ladder),
                );
                let raise = measured(differential_agreement(Direction::Raise, s, &z))?;
                checks.record(
                    "ladder_raise",
                    dim,
                    ell,
                    label,
                    raise,
                    Bound::Max(t.tol_ladder),
                );
            }

            for (i, a) in states.iter().enumerate() {
                for b in &states[i + 1..] {
                    let value = measured(overlap(a, b))?.abs();
                    let label = format!("{},{}", a.qn().n, b.qn().n);
                    checks.record(
                        "orthogonality",
                        dim,
                        ell,
                        label,
                        value,
                        Bound::Max(t.tol_orthogonality),
                    );
                }
            }

            let ctx = LadderCoeffs::from_state(&states[0]);
            let summary = algebra_summary(ctx, args.range.n_max, 5)?;
            let range = format!("0..={}", args.range.n_max);
            let worst_commutator = summary
                .commutator_residuals
                .iter()
                .map(|(_, r)| *r)
                .fold(0.0, f64::max);
            checks.record(
                "commutators",
                dim,
                ell,
                range.clone(),
                worst_commutator,
                Bound::Max(t.tol_algebra),
            );
            checks.record(
                "casimir",
                dim,
                ell,
                range.clone(),
                summary.casimir_residual,
                Bound::Max(t.tol_algebra),
            );
            checks.record(
                "powers",
                dim,
                ell,
                range,
                summary.power_residual,
                Bound::Max(t.tol_power),
            );

            let count = args.range.n_max as usize + 1;
            let problem = oracle_problem(c, ell, dim, count, &args.oracle)?;
            match richardson(&problem, count, args.oracle.refinements) {
                Ok(fd) => {
                    for (n, value) in fd.eigenvalues.iter().enumerate() {
                        let exact =
                            closed_form_energy(c, QuantumNumbers::new(n as u32, ell, dim)?)?;
                        let rel = (value - exact).abs() / exact.abs();
                        checks.record(
                            "oracle",
                            dim,
                            ell,
                            n.to_string(),
                            rel,
                            Bound::Max(t.tol_oracle),
                        );
                    }
                }
                Err(e @ pseudoharmonic::Error::Domain { .. }) => return Err(e.into()),
                Err(pseudoharmonic::Error::Accuracy { .. }) => {
                    checks.record(
                        "oracle",
                        dim,
                        ell,
                        "all".into(),
                        f64::NAN,
                        Bound::Max(t.tol_oracle),
                    );
                }
            }
        }
    }

    let mut meta = base_meta("verify", &r);
    range_meta(&mut meta, &args.range);
    meta.insert("tolerances".into(), tolerance_meta(t));
    meta.insert("oracle".into(), oracle_meta(&args.oracle));
    meta.insert("checks".into(), json!(checks.table.rows.len()));
    meta.insert("failures".into(), json!(checks.failures));
    Ok(Outcome {
        passed: checks.failures == 0,
        report: Report {
            meta,
            table: checks.table,
        },
    })
}

pub fn oracle_compare(args: &OracleArgs) -> Result<Outcome, CliError> {
    let r = resolve(&args.source)?;
    validate_dims(&args.range.dims)?;
    let c = &r.coefficients;
    let count = args.range.n_max as usize + 1;
    let mut table = Table::new(vec![
        "dim",
        "ell",
        "n",
        "closed_form",
        "oracle",
        "abs_delta",
        "rel_delta",
        "convergence",
        "pass",
    ]);
    let mut failures = 0;
    for &dim in &args.range.dims {
        for ell in 0..=args.range.ell_max {
            let problem = oracle_problem(c, ell, dim, count, &args.oracle)?;
            let fd = richardson(&problem, count, args.oracle.refinements)?;
            for n in 0..count {
                let exact = closed_form_energy(c, QuantumNumbers::new(n as u32, ell, dim)?)?;
                let value = fd.eigenvalues[n];
                let abs = (value - exact).abs();
                let rel = abs / exact.abs();
                let pass = rel <= args.tol_oracle;
                if !pass {
                    failures += 1;
                }
                table.push(vec![
                    dim.into(),
                    ell.into(),
                    n.into(),
                    exact.into(),
                    value.into(),
                    abs.into(),
                    rel.into(),
                    fd.convergence[n].into(),
                    pass.into(),
                ]);
            }
        }
    }
    let mut meta = base_meta("oracle-compare", &r);
    range_meta(&mut meta, &args.range);
    meta.insert("tolerances".into(), json!({ "oracle": args.tol_oracle }));
    meta.insert("oracle".into(), oracle_meta(&args.oracle));
    meta.insert("failures".into(), json!(failures));
    Ok(Outcome {
        passed: failures == 0,
        report: Report { meta, table },
    })
}
