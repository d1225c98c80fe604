//! Scenario runner: dispatch a validated [`ScenarioConfig`] to the solver,
//! level-set, or experiment drivers and write CSV/JSON outputs.
//!
//! Outputs per scenario directory:
//!
//! * `profiles.csv` — header `t,r,u` (or `t,x,u` in log coordinates), one row
//!   per recorded node;
//! * `spiral_t<k>.csv` — header `x,y`, Cartesian spiral points of the k-th
//!   recorded snapshot;
//! * `field_t<k>.csv` — header `x,y,U` (level-set scenarios only);
//! * `report.json` — scheme metadata, step-size summary, and any experiment
//!   report.
//!
//! Exit status: 0 on success/pass, 2 when an experiment fails its threshold
//! (or its stated precondition), 1 on runtime errors. Numbers are written
//! with Rust's shortest round-trip formatting, so files are byte-identical
//! for identical config and seed.

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::error::{Error, Result};
use crate::grid::{spiral_points, CoordKind, ProfileState, SpiralCurve};
use crate::levelset::{extract_zero_level, init_from_profile, run_levelset_coupled, LevelSetField};
use crate::profile::InitialProfile;
use crate::solver::{run, sample_initial, Trajectory};
use crate::verify::{
    check_bs_assumptions, comparison_experiment, gradient_experiment, psi_lower_bound_survey,
    time_regularity_experiment, ExperimentReport,
};
use crate::{barriers, pde};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Result of one scenario: process exit code plus the output directory.
#[derive(Debug)]
pub struct ScenarioOutcome {
    pub exit_code: i32,
    pub out_dir: PathBuf,
}

/// Seed after the `SPIRALFLOW_SEED` environment override.
pub fn effective_seed(config: &ScenarioConfig) -> u64 {
    std::env::var("SPIRALFLOW_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(config.seed)
}

fn build_initial(config: &ScenarioConfig) -> Result<InitialProfile> {
    let base =
        InitialProfile::by_name(&config.initial_name, &config.initial_args, config.params.c)?;
    match config.mollify_eps {
        Some(eps) => barriers::mollify_initial(&base, eps, &config.params),
        None => Ok(base),
    }
}

fn write_profiles_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let coord = match traj.snapshots[0].grid.coord() {
        CoordKind::PolarR => "r",
        CoordKind::LogX => "x",
    };
    let mut text = format!("t,{coord},u\n");
    for snap in &traj.snapshots {
        for (i, v) in snap.values.iter().enumerate() {
            writeln!(text, "{},{},{}", snap.t, snap.grid.node(i), v).unwrap();
        }
    }
    fs::write(path, text)?;
    Ok(())
}

fn write_spiral_csv(path: &Path, curve: &SpiralCurve) -> Result<()> {
    let mut text = String::from("x,y\n");
    for p in &curve.points {
        writeln!(text, "{},{}", p[0], p[1]).unwrap();
    }
    fs::write(path, text)?;
    Ok(())
}

fn write_field_csv(path: &Path, field: &LevelSetField) -> Result<()> {
    let mut text = String::from("x,y,U\n");
    for j in 0..field.n {
        for i in 0..field.n {
            if field.is_masked(i, j) {
                let (x, y) = field.coords(i, j);
                writeln!(text, "{},{},{}", x, y, field.values[j * field.n + i]).unwrap();
            }
        }
    }
    fs::write(path, text)?;
    Ok(())
}

fn spiral_curve_of(snapshot: &ProfileState) -> Result<SpiralCurve> {
    match snapshot.grid.coord() {
        CoordKind::PolarR => spiral_points(snapshot),
        CoordKind::LogX => {
            let points = snapshot
                .values
                .iter()
                .enumerate()
                .map(|(i, &u)| {
                    let r = snapshot.grid.node(i).exp();
                    [r * u.cos(), -r * u.sin()]
                })
                .collect();
            Ok(SpiralCurve { t: snapshot.t, points })
        }
    }
}

fn dt_summary(traj: &Trajectory) -> Value {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for &dt in &traj.dt_history {
        lo = lo.min(dt);
        hi = hi.max(dt);
    }
    json!({
        "steps": traj.dt_history.len(),
        "dt_min": if traj.dt_history.is_empty() { 0.0 } else { lo },
        "dt_max": hi,
        "t_final": traj.last().t,
        "snapshots": traj.snapshots.len(),
    })
}

fn base_report(config: &ScenarioConfig, seed: u64) -> Value {
    json!({
        "scenario": config.kind.as_str(),
        "seed": seed,
        "params": {"c": config.params.c, "r0": config.params.r0},
        "grid": {
            "lo": config.grid.lo(),
            "hi": config.grid.hi(),
            "n": config.grid.len(),
            "coord": match config.grid.coord() { CoordKind::PolarR => "polar_r", CoordKind::LogX => "log_x" },
        },
        "scheme": {
            "cfl_safety": config.scheme.cfl_safety,
            "t_end": config.scheme.t_end,
            "record_every": config.scheme.record_every,
        },
        "initial": config.initial_name,
    })
}

fn run_experiment(config: &ScenarioConfig, seed: u64) -> Result<ExperimentReport> {
    let ScenarioKind::Experiment(name) = &config.kind else {
        return Err(Error::State("not an experiment scenario".into()));
    };
    match name.as_str() {
        "comparison" => {
            let v0 = build_initial(config)?;
            let w0 = match &config.upper_name {
                Some(n) => InitialProfile::by_name(n, &config.upper_args, config.params.c)?,
                None => v0.shifted(config.upper_gap),
            };
            comparison_experiment(&v0, &w0, &config.grid, &config.params, &config.scheme)
        }
        "gradient" => {
            let u0 = build_initial(config)?;
            gradient_experiment(&u0, &config.grid, &config.params, &config.scheme)
        }
        "time_regularity" => {
            let u0 = build_initial(config)?;
            time_regularity_experiment(&u0, &config.grid, &config.params, &config.scheme)
        }
        "bs_assumptions" => {
            let coeffs = match config.experiment.family.as_str() {
                "spiral" => pde::GenCoeffs::spiral(&config.params),
                "radial_heat" => pde::GenCoeffs::radial_heat(config.experiment.heat_n),
                _ => pde::GenCoeffs::pure_diffusion(),
            };
            let rep =
                check_bs_assumptions(&coeffs, config.experiment.q_max, config.experiment.p_max);
            let mut out = ExperimentReport {
                name: format!("bs_assumptions[{}]", rep.label),
                parameters: Default::default(),
                measured: Default::default(),
                pass: rep.passes,
                runtime: Default::default(),
            };
            out.parameters.insert("q_max".into(), rep.q_max);
            out.parameters.insert("p_max".into(), rep.p_max);
            out.measured.insert("delta1".into(), rep.delta1);
            out.measured.insert("delta2".into(), rep.delta2);
            out.measured.insert("delta3".into(), rep.delta3);
            out.measured.insert("delta4".into(), rep.delta4);
            out.measured.insert("sigma_inf".into(), rep.sigma_inf);
            out.measured.insert("margin".into(), rep.margin);
            Ok(out)
        }
        "psi_survey" => {
            let survey = psi_lower_bound_survey(
                config.experiment.samples,
                &config.experiment.delta0,
                seed,
            )?;
            let mut out = ExperimentReport {
                name: "psi_survey".into(),
                parameters: Default::default(),
                measured: Default::default(),
                pass: survey.pass,
                runtime: Default::default(),
            };
            out.parameters.insert("samples".into(), config.experiment.samples as f64);
            out.parameters.insert("delta0".into(), survey.delta0);
            out.measured.insert("m_direct".into(), survey.m_direct);
            out.measured.insert("m_contracted".into(), survey.m_contracted);
            out.measured.insert("admissible_pairs".into(), survey.admissible_pairs as f64);
            Ok(out)
        }
        other => Err(Error::State(format!("unknown experiment `{other}`"))),
    }
}

/// Run a scenario, writing its files under `out_override`, the config's
/// `[output] dir`, or `./out`.
pub fn run_scenario(config: &ScenarioConfig, out_override: Option<&Path>) -> Result<ScenarioOutcome> {
    let out_dir: PathBuf = out_override
        .map(|p| p.to_path_buf())
        .or_else(|| config.out_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&out_dir)?;
    let seed = effective_seed(config);
    let mut report = base_report(config, seed);

    let exit_code = match &config.kind {
        ScenarioKind::EvolvePolar | ScenarioKind::EvolveLog => {
            let initial = build_initial(config)?;
            let traj = run(&initial, &config.grid, &config.params, &config.scheme)?;
            write_profiles_csv(&out_dir.join("profiles.csv"), &traj)?;
            for (k, snap) in traj.snapshots.iter().enumerate() {
                let curve = spiral_curve_of(snap)?;
                write_spiral_csv(&out_dir.join(format!("spiral_t{k}.csv")), &curve)?;
            }
            report["dt_summary"] = dt_summary(&traj);
            report["experiment"] = Value::Null;
            0
        }
        ScenarioKind::EvolveLevelset => {
            let ls = config.levelset.as_ref().expect("validated");
            let initial = build_initial(config)?;
            let state0 = sample_initial(&initial, &config.grid)?;
            let field0 = init_from_profile(&state0, ls.a, ls.b, ls.n2d)?;
            write_field_csv(&out_dir.join("field_t0.csv"), &field0)?;
            let (field, state) = run_levelset_coupled(
                &initial,
                &config.grid,
                ls.a,
                ls.b,
                ls.n2d,
                &config.params,
                &config.scheme,
                ls.eps_reg,
            )?;
            write_field_csv(&out_dir.join("field_t1.csv"), &field)?;
            let traj = Trajectory { snapshots: vec![state0, state], dt_history: vec![] };
            write_profiles_csv(&out_dir.join("profiles.csv"), &traj)?;
            for (k, f) in [&field0, &field].iter().enumerate() {
                if let Ok(curve) = extract_zero_level(f) {
                    write_spiral_csv(&out_dir.join(format!("spiral_t{k}.csv")), &curve)?;
                }
            }
            report["dt_summary"] = json!({"t_final": field.t});
            report["experiment"] = Value::Null;
            0
        }
        ScenarioKind::Experiment(_) => match run_experiment(config, seed) {
            Ok(exp) => {
                let pass = exp.pass;
                report["experiment"] = serde_json::to_value(&exp).expect("serializable");
                if pass {
                    0
                } else {
                    2
                }
            }
            Err(Error::Precondition(msg)) => {
                report["experiment"] = json!({
                    "name": config.kind.as_str(),
                    "pass": false,
                    "violated_precondition": msg,
                });
                2
            }
            Err(e) => return Err(e),
        },
    };

    let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
    fs::write(out_dir.join("report.json"), text)?;
    Ok(ScenarioOutcome { exit_code, out_dir })
}
