use std::f64::consts::PI;

use serde_json::{json, Value};

use dnls_core::evolution::{
    convergence_study, simulate, ConvergenceStatus, Equation, InitialData, SimConfig,
};
use dnls_core::functionals::{f_functional, FieldMoments, InvariantSet};
use dnls_core::gauge::{correspondence_check, gauge_forward, gauge_inverse};
use dnls_core::random::smooth_fields;
use dnls_core::threshold::{cubic_analyze, f_bounds, mass_sweep, regime_bound};
use dnls_core::variational::{
    elliptic_residual, elliptic_residual_full, estimate_sharp_constant, gn1_check, gn2_check,
    ground_state_q, ground_state_q_shooting, psi_optimizer, EllipticEquation, GnInequality,
    SearchOptions,
};
use dnls_core::{ComplexField, Grid, GridSpec, LabError};

use crate::args::{Cli, Command, ConfigArgs, FieldKind, GridArgs};
use crate::config::{apply_override, load_sim_config, sim_config_from, CliError};
use crate::output::OutputDir;

/// Tolerance used by `gauge-check` to call a field consistent.
const CORRESPONDENCE_TOL: f64 = 1e-8;

/// What a command produced: its report, the grid it ran on, and whether a
/// numerical failure should turn into exit status 1.
struct Outcome {
    report: Value,
    grid: Option<Grid>,
    failed: bool,
}

impl Outcome {
    fn ok(report: Value, grid: Option<Grid>) -> Self {
        Outcome {
            report,
            grid,
            failed: false,
        }
    }
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    let name = cli.command.name();
    let seed = cli.seed;
    let mut out = OutputDir::create(&cli.out)?;
    let outcome = match cli.command {
        Command::Simulate(args) => run_simulate(&mut out, &args)?,
        Command::GaugeCheck { count, grid } => run_gauge_check(&mut out, seed, count, &grid)?,
        Command::Invariants(args) => run_invariants(&mut out, &args)?,
        Command::GroundState { grid } => run_ground_state(&mut out, &grid)?,
        Command::GnVerify {
            field,
            estimate,
            grid,
        } => run_gn_verify(&mut out, seed, field, estimate, &grid)?,
        Command::Cubic { m0, epsilon } => {
            out.write_json("config.json", &json!({ "m0": m0, "epsilon": epsilon }))?;
            let (m0_used, snapped) = snap_to_threshold(m0);
            let mut report = to_value(&cubic_analyze(m0_used, epsilon).map_err(usage)?);
            report["m0_input"] = json!(m0);
            report["snapped_to_threshold"] = json!(snapped);
            Outcome::ok(report, None)
        }
        Command::Sweep {
            amplitudes,
            config,
            overrides,
        } => run_sweep(&mut out, &amplitudes, config.as_deref(), &overrides)?,
        Command::Convergence { config, dts } => run_convergence(&mut out, &config, &dts)?,
    };
    out.write_json("report.json", &outcome.report)?;
    let status = if outcome.failed {
        "numerical_failure"
    } else {
        "ok"
    };
    let uses_seed = matches!(name, "gauge-check" | "gn-verify");
    out.finish(
        name,
        uses_seed.then_some(seed),
        outcome.grid.as_ref(),
        status,
    )?;
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.report).unwrap_or_default()
    );
    Ok(if outcome.failed { 1 } else { 0 })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Argument errors raised by the library are usage errors, not numerical ones.
fn usage(e: LabError) -> CliError {
    if e.is_numerical() {
        CliError::Lab(e)
    } else {
        CliError::Config(e.to_string())
    }
}

/// A decimal `m0` within `THRESHOLD_SNAP` (relative) of 4π is the threshold
/// itself typed with finitely many digits.
const THRESHOLD_SNAP: f64 = 1e-9;

fn snap_to_threshold(m0: f64) -> (f64, bool) {
    let threshold = 4.0 * PI;
    if m0 != threshold && (m0 - threshold).abs() <= THRESHOLD_SNAP * threshold {
        (threshold, true)
    } else {
        (m0, false)
    }
}

fn grid_from(args: &GridArgs, default: GridSpec) -> Result<Grid, CliError> {
    let spec = GridSpec {
        length: args.length.unwrap_or(default.length),
        n_points: args.n_points.unwrap_or(default.n_points),
    };
    spec.build()
        .map_err(|e| CliError::Config(format!("grid: {e}")))
}

fn run_simulate(out: &mut OutputDir, args: &ConfigArgs) -> Result<Outcome, CliError> {
    let (config, grid) = load_sim_config(&args.config, &args.overrides)?;
    out.write_json("config.json", &config)?;
    match simulate(&config) {
        Ok(series) => {
            out.write_series(&series)?;
            let report = json!({
                "status": "completed",
                "final_time": series.final_time,
                "samples": series.rows.len(),
                "drift": series.drift,
                "metadata": series.metadata,
                "final_row": series.rows.last(),
            });
            Ok(Outcome::ok(report, Some(grid)))
        }
        Err(LabError::NumericalBlowUp { t, partial }) => {
            out.write_series(&partial)?;
            eprintln!("error: numerical blow-up at t = {t}; partial series written");
            let report = json!({
                "status": "blow_up",
                "blow_up_time": t,
                "final_time": partial.final_time,
                "samples": partial.rows.len(),
                "drift": partial.drift,
                "metadata": partial.metadata,
            });
            Ok(Outcome {
                report,
                grid: Some(grid),
                failed: true,
            })
        }
        Err(e) => Err(usage(e)),
    }
}

fn run_gauge_check(
    out: &mut OutputDir,
    seed: u64,
    count: usize,
    grid_args: &GridArgs,
) -> Result<Outcome, CliError> {
    let grid = grid_from(grid_args, GridSpec::default())?;
    if count == 0 {
        return Err(CliError::Config("count must be at least 1".into()));
    }
    out.write_json(
        "config.json",
        &json!({ "seed": seed, "count": count, "grid": grid.spec(), "tolerance": CORRESPONDENCE_TOL }),
    )?;
    let (mut max_de, mut max_dp, mut max_round_trip, mut max_modulus) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for u in smooth_fields(&grid, seed, count) {
        let (de, dp) = correspondence_check(&u).map_err(usage)?;
        let v = gauge_forward(&u).map_err(usage)?;
        let back = gauge_inverse(&v).map_err(usage)?;
        let modulus = u
            .samples()
            .iter()
            .zip(v.samples())
            .map(|(a, b)| (a.norm() - b.norm()).abs())
            .fold(0.0, f64::max);
        max_de = max_de.max(de.abs());
        max_dp = max_dp.max(dp.abs());
        max_round_trip = max_round_trip.max(back.sup_distance(&u));
        max_modulus = max_modulus.max(modulus);
    }
    let passed = max_de <= CORRESPONDENCE_TOL && max_dp <= CORRESPONDENCE_TOL;
    let report = json!({
        "fields": count,
        "max_energy_difference": max_de,
        "max_momentum_difference": max_dp,
        "max_round_trip_error": max_round_trip,
        "max_modulus_change": max_modulus,
        "tolerance": CORRESPONDENCE_TOL,
        "passed": passed,
    });
    Ok(Outcome {
        report,
        grid: Some(grid),
        failed: !passed,
    })
}

fn run_invariants(out: &mut OutputDir, args: &ConfigArgs) -> Result<Outcome, CliError> {
    let (config, grid) = load_sim_config(&args.config, &args.overrides)?;
    out.write_json("config.json", &config)?;
    let field = config.initial.build(&grid)?;
    let moments = FieldMoments::of(&field);
    let invariants = InvariantSet::evaluate(&field, config.equation.invariant_form(), 0.0);
    // bound diagnostics live on the gauged side
    let gauged = match config.equation {
        Equation::Gauged => Ok(field.clone()),
        Equation::Original => gauge_forward(&field),
    };
    let (f_bracket, bound) = match &gauged {
        Ok(v) => (
            f_bounds(v)
                .map(|b| to_value(&b))
                .unwrap_or_else(error_value),
            regime_bound(v, 0.0)
                .map(|b| to_value(&b))
                .unwrap_or_else(error_value),
        ),
        Err(e) => (
            json!({ "error": e.to_string() }),
            json!({ "error": e.to_string() }),
        ),
    };
    let report = json!({
        "equation": config.equation,
        "invariants": invariants,
        "l2_grad": moments.l2_grad(),
        "l4": moments.l4(),
        "l6": moments.l6(),
        "f_bounds": f_bracket,
        "bound": bound,
    });
    Ok(Outcome::ok(report, Some(grid)))
}

fn error_value(e: LabError) -> Value {
    json!({ "error": e.to_string() })
}

fn run_ground_state(out: &mut OutputDir, grid_args: &GridArgs) -> Result<Outcome, CliError> {
    let grid = grid_from(grid_args, GridSpec::default())?;
    out.write_json("config.json", &json!({ "grid": grid.spec() }))?;
    let q = ground_state_q(&grid).map_err(usage)?;
    let m = FieldMoments::of(&q);
    let shooting = ground_state_q_shooting(&grid)
        .map(|(s, rep)| json!({ "report": rep, "sup_distance": s.sup_distance(&q) }))
        .unwrap_or_else(error_value);
    let report = json!({
        "mass": m.mass,
        "energy": m.energy_gauged(),
        "momentum": m.momentum_gauged(),
        "f": f_functional(&q)?,
        "f_bounds": f_bounds(&q)?,
        "elliptic_residual": elliptic_residual(&q, EllipticEquation::DnlsGroundState)?,
        "elliptic_residual_full": elliptic_residual_full(&q, EllipticEquation::DnlsGroundState)?,
        "gn1": gn1_check(&q, "Q")?,
        "shooting": shooting,
    });
    Ok(Outcome::ok(report, Some(grid)))
}

fn run_gn_verify(
    out: &mut OutputDir,
    seed: u64,
    field: FieldKind,
    estimate: bool,
    grid_args: &GridArgs,
) -> Result<Outcome, CliError> {
    let default = match field {
        // algebraic tails need the wide box
        FieldKind::Psi => GridSpec {
            length: 200.0,
            n_points: 8192,
        },
        _ => GridSpec::default(),
    };
    let grid = grid_from(grid_args, default)?;
    out.write_json(
        "config.json",
        &json!({ "field": field, "seed": seed, "estimate": estimate, "grid": grid.spec() }),
    )?;
    let (f, id): (ComplexField, &str) = match field {
        FieldKind::Q => (ground_state_q(&grid).map_err(usage)?, "Q"),
        FieldKind::Psi => (psi_optimizer(&grid), "psi"),
        FieldKind::Gaussian => (
            ComplexField::from_real_fn(&grid, |x| (-x * x).exp())?,
            "gaussian",
        ),
        FieldKind::Random => (smooth_fields(&grid, seed, 1).remove(0), "random"),
    };
    let mut report = json!({
        "gn1": gn1_check(&f, id).map_err(usage)?,
        "gn2": gn2_check(&f, id).map_err(usage)?,
    });
    if estimate {
        let mut estimates = Vec::new();
        for inequality in [GnInequality::Gn1, GnInequality::Gn2] {
            let options = SearchOptions::for_inequality(inequality);
            let est = estimate_sharp_constant(inequality, &options)?;
            estimates.push(json!({
                "estimate": est,
                "sharp_constant": inequality.sharp_constant(),
                "relative_error": (est.constant / inequality.sharp_constant() - 1.0).abs(),
            }));
        }
        report["sharp_constant_estimates"] = Value::Array(estimates);
    }
    Ok(Outcome::ok(report, Some(grid)))
}

fn run_sweep(
    out: &mut OutputDir,
    amplitudes: &[f64],
    config: Option<&std::path::Path>,
    overrides: &[String],
) -> Result<Outcome, CliError> {
    let (base, grid) = match config {
        Some(path) => load_sim_config(path, overrides)?,
        None => {
            let mut doc = to_value(&SimConfig::new(
                Equation::Gauged,
                InitialData::ScaledGroundState { a: 1.0 },
            ));
            for o in overrides {
                apply_override(&mut doc, o)?;
            }
            sim_config_from(doc, "sweep base")?
        }
    };
    out.write_json(
        "config.json",
        &json!({ "base": base, "amplitudes": amplitudes }),
    )?;
    let report = mass_sweep(&base, amplitudes).map_err(usage)?;
    let mut failed = false;
    for (i, run) in report.runs.iter().enumerate() {
        let mut sub = out.subdir(&format!("run_{i:02}"))?;
        sub.write_json("config.json", &run.config)?;
        if let Some(series) = &run.series {
            sub.write_series(series)?;
        }
        sub.write_json("report.json", run)?;
        let status = if run.completed {
            "ok"
        } else {
            "numerical_failure"
        };
        failed |= !run.completed;
        sub.finish("sweep", None, Some(&grid), status)?;
    }
    let mut value = to_value(&report);
    value["threshold_mass"] = json!(4.0 * PI);
    Ok(Outcome {
        report: value,
        grid: Some(grid),
        failed,
    })
}

fn run_convergence(
    out: &mut OutputDir,
    args: &ConfigArgs,
    dts: &[f64],
) -> Result<Outcome, CliError> {
    let (config, grid) = load_sim_config(&args.config, &args.overrides)?;
    out.write_json("config.json", &json!({ "base": config, "dts": dts }))?;
    let report = convergence_study(&config, dts).map_err(usage)?;
    let failed = report.status == ConvergenceStatus::NonMonotone;
    Ok(Outcome {
        report: to_value(&report),
        grid: Some(grid),
        failed,
    })
}
