//! The canned experiments behind the `peskin` CLI.
//!
//! Each command takes one [`ExperimentSpec`] (JSON config + flag overrides),
//! writes its CSV outputs plus a `summary.json` into the output directory,
//! and returns a [`Report`]. The summary always carries the crate version,
//! the command name, the fully resolved config, and a metrics block, so a
//! result directory is self-describing.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::biop;
use crate::curve::{c1h_norm, Curve};
use crate::error::{Error, Result};
use crate::init::{make_initial, InitialCondition};
use crate::integrator::{order_estimate, run, OrderEstimate, RunConfig, RunStatus};
use crate::io;
use crate::modes;
use crate::spectral::SpectralPlan;

/// Rectangular evaluation grid for the `fields` command.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    /// Evaluate the field of the curve at this simulation time.
    pub time: f64,
}

impl Default for FieldGrid {
    fn default() -> Self {
        FieldGrid {
            x_min: -2.0,
            x_max: 2.0,
            y_min: -2.0,
            y_max: 2.0,
            nx: 41,
            ny: 41,
            time: 0.0,
        }
    }
}

/// One config drives all five commands; fields irrelevant to a command are
/// ignored. `None` means "use the command's own default".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub n: usize,
    pub dt: f64,
    pub t_final: Option<f64>,
    pub snapshot_every: usize,
    pub init: Option<InitialCondition>,
    pub out: PathBuf,
    /// Fit window [t_min, t_max] for the Π-norm decay series.
    pub pi_fit_window: Option<[f64; 2]>,
    /// Fit window for the mode-velocity series.
    pub dta_fit_window: Option<[f64; 2]>,
    /// Times at which `simulate` writes full curve snapshots.
    pub snapshot_times: Option<Vec<f64>>,
    /// Largest wavenumber probed by `spectrum`.
    pub k_max: usize,
    /// Linearization step for `spectrum`; default 1e-5·‖X‖_{C¹ₕ}.
    pub eps: Option<f64>,
    pub field: FieldGrid,
    /// Coarsest step of the Richardson triple in `convergence`.
    pub dt0: f64,
    /// Grid sizes for the spatial-accuracy table.
    pub spatial_grids: Vec<usize>,
    /// Reference grid the spatial errors are measured against.
    pub reference_n: usize,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            n: 128,
            dt: 0.01,
            t_final: None,
            snapshot_every: 1,
            init: None,
            out: PathBuf::from("out"),
            pi_fit_window: None,
            dta_fit_window: None,
            snapshot_times: None,
            k_max: 8,
            eps: None,
            field: FieldGrid::default(),
            dt0: 0.02,
            spatial_grids: vec![32, 64, 128],
            reference_n: 512,
        }
    }
}

impl ExperimentSpec {
    /// Parse a JSON config. Unknown keys are rejected — a typo in a config
    /// should fail loudly, not silently fall back to a default.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// What a command hands back to the CLI.
#[derive(Debug)]
pub struct Report {
    /// The simulated curve degenerated (CLI exit code 2).
    pub degenerate: bool,
    pub summary: Value,
    pub summary_path: PathBuf,
}

fn finish(
    spec: &ExperimentSpec,
    command: &str,
    metrics: Value,
    degenerate: bool,
) -> Result<Report> {
    let summary = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "status": if degenerate { "degenerate" } else { "ok" },
        "config": serde_json::to_value(spec)?,
        "metrics": metrics,
    });
    let path = spec.out.join("summary.json");
    io::write_json(&path, &summary)?;
    Ok(Report {
        degenerate,
        summary,
        summary_path: path,
    })
}

fn warn_if_clockwise(outcome_area: Option<f64>) {
    if let Some(a) = outcome_area {
        if a < 0.0 {
            eprintln!(
                "warning: initial curve is clockwise (area {a:.3e} < 0); \
                 diagnostics assume counterclockwise orientation"
            );
        }
    }
}

fn status_json(status: &RunStatus) -> Value {
    match status {
        RunStatus::Completed => json!({"kind": "completed"}),
        RunStatus::Degenerate { t, detail } => {
            json!({"kind": "degenerate", "t": t, "detail": detail})
        }
    }
}

/// Integrate and write the trajectory trace plus full curve snapshots.
pub fn cmd_simulate(spec: &ExperimentSpec) -> Result<Report> {
    let t_final = spec.t_final.unwrap_or(1.5);
    let initial = spec.init.clone().unwrap_or(InitialCondition::Demo);
    let snapshot_times: Vec<f64> = spec
        .snapshot_times
        .clone()
        .unwrap_or_else(|| vec![0.0, 0.5, 1.0, 1.5])
        .into_iter()
        .filter(|&t| t <= t_final + 1e-12)
        .collect();
    let cfg = RunConfig {
        n: spec.n,
        dt: spec.dt,
        t_final,
        snapshot_every: spec.snapshot_every,
        initial,
        snapshot_times,
    };
    let outcome = run(&cfg)?;
    warn_if_clockwise(outcome.trace.first().map(|r| r.area));

    io::write_trace_csv(&spec.out.join("trace.csv"), &outcome.trace)?;
    let theta = SpectralPlan::new(spec.n)?.theta();
    for (t, c) in &outcome.snapshots {
        io::write_curve_csv(&spec.out.join(format!("curve_t{t:.4}.csv")), &theta, c)?;
    }

    let mut metrics = json!({
        "t_final": t_final,
        "status": status_json(&outcome.status),
        "partial_final_step": outcome.partial_final_step,
        "records": outcome.trace.len(),
        "snapshots": outcome.snapshots.len(),
    });
    if let (Some(first), Some(last)) = (outcome.trace.first(), outcome.trace.last()) {
        let drift = (last.area - first.area).abs();
        metrics["initial_area"] = json!(first.area);
        metrics["final_area"] = json!(last.area);
        metrics["area_drift_abs"] = json!(drift);
        metrics["area_drift_rel"] = json!(drift / first.area.abs().max(f64::MIN_POSITIVE));
        metrics["initial_energy"] = json!(first.energy);
        metrics["final_energy"] = json!(last.energy);
        let max_rise = outcome
            .trace
            .windows(2)
            .map(|w| w[1].energy - w[0].energy)
            .fold(f64::NEG_INFINITY, f64::max);
        metrics["max_energy_rise"] = json!(max_rise);
        metrics["min_star_norm"] = json!(outcome
            .trace
            .iter()
            .map(|r| r.star_norm)
            .fold(f64::INFINITY, f64::min));
    }
    finish(spec, "simulate", metrics, !outcome.completed())
}

fn fit_to_json(series: &[[f64; 2]], window: [f64; 2]) -> Value {
    match modes::fit_slope(series, window[0], window[1]) {
        Ok(fit) => json!({
            "window": window,
            "slope": fit.slope,
            "stderr": fit.stderr,
            "points": fit.points,
        }),
        Err(Error::FitWindow(detail)) => {
            // The circle runs land here: the series sits on the roundoff
            // floor and no rate can honestly be claimed.
            let at_roundoff = detail.contains("roundoff");
            json!({
                "window": window,
                "at_roundoff": at_roundoff,
                "unfit": detail,
            })
        }
        Err(e) => json!({ "window": window, "unfit": e.to_string() }),
    }
}

/// Long-horizon decay run: trace, the two log-series, and their slope fits.
pub fn cmd_decay(spec: &ExperimentSpec) -> Result<Report> {
    let t_final = spec.t_final.unwrap_or(20.0);
    let initial = spec.init.clone().unwrap_or(InitialCondition::Unlabeled);
    let cfg = RunConfig {
        n: spec.n,
        dt: spec.dt,
        t_final,
        snapshot_every: spec.snapshot_every,
        initial,
        snapshot_times: Vec::new(),
    };
    let outcome = run(&cfg)?;
    warn_if_clockwise(outcome.trace.first().map(|r| r.area));
    io::write_trace_csv(&spec.out.join("trace.csv"), &outcome.trace)?;

    let mut metrics = json!({
        "t_final": t_final,
        "status": status_json(&outcome.status),
        "records": outcome.trace.len(),
    });

    if outcome.completed() && outcome.trace.len() >= 2 {
        let series = modes::decay_metrics(&outcome.trace)?;
        // The mode-velocity series is only meaningful over the first half of
        // the horizon: beyond it the differences approach roundoff.
        let dta_horizon = 0.5 * t_final;
        let dta: Vec<[f64; 2]> = series
            .dta
            .iter()
            .filter(|p| p[0] <= dta_horizon + 1e-9)
            .copied()
            .collect();
        io::write_series_csv(&spec.out.join("decay_pi.csv"), "t,log_pi_c1h", &series.pi)?;
        io::write_series_csv(&spec.out.join("decay_dta.csv"), "t_half,log_dta", &dta)?;

        let pi_window = spec.pi_fit_window.unwrap_or([0.5 * t_final, t_final]);
        let dta_window = spec
            .dta_fit_window
            .unwrap_or([0.4 * dta_horizon, dta_horizon]);
        metrics["pi_fit"] = fit_to_json(&series.pi, pi_window);
        metrics["dta_fit"] = fit_to_json(&dta, dta_window);
    }
    finish(spec, "decay", metrics, !outcome.completed())
}

/// Labels and directions of the probe modes at wavenumber k.
fn probe_modes(k: usize, n: usize) -> Vec<(String, Curve)> {
    let b = modes::basis(n);
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let theta: Vec<f64> = (0..n).map(|j| j as f64 * h).collect();
    let envelope = |f: &dyn Fn(f64) -> f64, e: &Curve| -> Curve {
        let mut out = e.clone();
        for (j, &t) in theta.iter().enumerate() {
            out.x[j] *= f(t);
            out.y[j] *= f(t);
        }
        out
    };
    match k {
        0 => vec![
            ("e_x".into(), b.e_x),
            ("e_y".into(), b.e_y),
            ("e_r".into(), b.e_r),
            ("e_t".into(), b.e_t),
        ],
        1 => {
            // The wavenumber-1 invariant pair: (cos 2θ, sin 2θ) and its
            // quarter-turn partner (-sin 2θ, cos 2θ).
            let pair_a = Curve {
                x: theta.iter().map(|&t| (2.0 * t).cos()).collect(),
                y: theta.iter().map(|&t| (2.0 * t).sin()).collect(),
            };
            let pair_b = Curve {
                x: theta.iter().map(|&t| -(2.0 * t).sin()).collect(),
                y: theta.iter().map(|&t| (2.0 * t).cos()).collect(),
            };
            vec![("pair_a".into(), pair_a), ("pair_b".into(), pair_b)]
        }
        _ => {
            let kf = k as f64;
            vec![
                ("cos_er".into(), envelope(&|t| (kf * t).cos(), &b.e_r)),
                ("sin_er".into(), envelope(&|t| (kf * t).sin(), &b.e_r)),
                ("cos_et".into(), envelope(&|t| (kf * t).cos(), &b.e_t)),
                ("sin_et".into(), envelope(&|t| (kf * t).sin(), &b.e_t)),
            ]
        }
    }
}

/// Rayleigh quotients and residuals of the linearized operator at the unit
/// circle against the analytic eigenvalues -k/4.
pub fn cmd_spectrum(spec: &ExperimentSpec) -> Result<Report> {
    let n = spec.n;
    // The probe at wavenumber k needs 2k < n to be resolvable; the top mode
    // envelope lives at k+1 in the components.
    if 2 * (spec.k_max + 1) >= n {
        return Err(Error::InvalidArgument(format!(
            "k_max = {} is not resolvable on a grid of {n} nodes",
            spec.k_max
        )));
    }
    let plan = SpectralPlan::new(n)?;
    let base = make_initial(
        &InitialCondition::Circle {
            a: 1.0,
            b: 0.0,
            c1: 0.0,
            c2: 0.0,
        },
        n,
    )?;
    let eps = match spec.eps {
        Some(e) => e,
        None => 1e-5 * c1h_norm(&base, &plan)?,
    };

    let mut csv = String::from("k,mode,rayleigh,residual\n");
    let mut max_eig_err: f64 = 0.0;
    let mut max_residual: f64 = 0.0;
    let mut table = Vec::new();
    for k in 0..=spec.k_max {
        let lambda = -(k as f64) / 4.0;
        for (label, dir) in probe_modes(k, n) {
            let lv = biop::linearize_rhs(&base, &dir, eps, &plan)?;
            let vv = modes::inner(&dir, &dir)?;
            let rayleigh = modes::inner(&lv, &dir)? / vv;
            let resid_vec = lv.add_scaled(&dir, -lambda)?;
            let residual = (modes::inner(&resid_vec, &resid_vec)? / vv).sqrt();
            max_eig_err = max_eig_err.max((rayleigh - lambda).abs());
            max_residual = max_residual.max(residual);
            csv.push_str(&format!(
                "{k},{label},{},{}\n",
                io::fmt_float(rayleigh),
                io::fmt_float(residual)
            ));
            table.push(json!({
                "k": k,
                "mode": label,
                "rayleigh": rayleigh,
                "residual": residual,
            }));
        }
    }
    std::fs::create_dir_all(&spec.out)?;
    std::fs::write(spec.out.join("spectrum.csv"), csv)?;

    // Central differencing leaves an O(ε²) bias while roundoff grows like
    // 1/ε; the sweep documents where the probe sits between the two.
    let sweep_dir = probe_modes(2, n).remove(0).1;
    let mut sweep = Vec::new();
    for e in [1e-4, 1e-5, 1e-6] {
        let lv = biop::linearize_rhs(&base, &sweep_dir, e, &plan)?;
        let vv = modes::inner(&sweep_dir, &sweep_dir)?;
        let resid_vec = lv.add_scaled(&sweep_dir, 0.5)?;
        let residual = (modes::inner(&resid_vec, &resid_vec)? / vv).sqrt();
        sweep.push(json!({"eps": e, "residual": residual}));
    }

    let metrics = json!({
        "eps": eps,
        "k_max": spec.k_max,
        "max_eigenvalue_error": max_eig_err,
        "max_residual": max_residual,
        "modes": table,
        "eps_sweep": sweep,
    });
    finish(spec, "spectrum", metrics, false)
}

/// Velocity/pressure field on a rectangular grid around the curve.
pub fn cmd_fields(spec: &ExperimentSpec) -> Result<Report> {
    let initial = spec.init.clone().unwrap_or(InitialCondition::Circle {
        a: 1.0,
        b: 0.0,
        c1: 0.0,
        c2: 0.0,
    });
    let g = &spec.field;
    if g.nx < 2 || g.ny < 2 {
        return Err(Error::InvalidArgument(
            "field grid needs nx, ny >= 2".into(),
        ));
    }
    let plan = SpectralPlan::new(spec.n)?;
    let (curve, status) = if g.time > 0.0 {
        let cfg = RunConfig {
            n: spec.n,
            dt: spec.dt,
            t_final: g.time,
            snapshot_every: usize::MAX,
            initial,
            snapshot_times: Vec::new(),
        };
        let outcome = run(&cfg)?;
        warn_if_clockwise(outcome.trace.first().map(|r| r.area));
        (outcome.final_curve, outcome.status)
    } else {
        (make_initial(&initial, spec.n)?, RunStatus::Completed)
    };
    let degenerate = status != RunStatus::Completed;

    let mut metrics = json!({
        "time": g.time,
        "status": status_json(&status),
        "mask_radius": biop::mask_radius(&curve, &plan)?,
    });
    if !degenerate {
        let mut samples = Vec::with_capacity(g.nx * g.ny);
        let mut masked = 0usize;
        let mut max_speed: f64 = 0.0;
        for j in 0..g.ny {
            let y = g.y_min + (g.y_max - g.y_min) * j as f64 / (g.ny - 1) as f64;
            for i in 0..g.nx {
                let x = g.x_min + (g.x_max - g.x_min) * i as f64 / (g.nx - 1) as f64;
                let s = biop::field_at(&curve, &plan, [x, y])?;
                if let Some(u) = s.u {
                    max_speed = max_speed.max(u[0].hypot(u[1]));
                } else {
                    masked += 1;
                }
                samples.push(s);
            }
        }
        io::write_field_csv(&spec.out.join("field.csv"), &samples)?;
        metrics["points"] = json!(samples.len());
        metrics["masked"] = json!(masked);
        metrics["max_speed_unmasked"] = json!(max_speed);
    }
    finish(spec, "fields", metrics, degenerate)
}

/// Temporal Richardson triple plus the spatial-accuracy table.
pub fn cmd_convergence(spec: &ExperimentSpec) -> Result<Report> {
    let initial = spec.init.clone().unwrap_or(InitialCondition::Demo);
    let t_final = spec.t_final.unwrap_or(0.5);

    // Temporal: one grid, three step sizes.
    let plan = SpectralPlan::new(spec.n)?;
    let start = make_initial(&initial, spec.n)?;
    let estimate = order_estimate(&start, t_final, spec.dt0, &plan)?;
    let (temporal_json, d_coarse, d_fine) = match estimate {
        OrderEstimate::Order {
            value,
            d_coarse,
            d_fine,
        } => (
            json!({"order": value, "d_coarse": d_coarse, "d_fine": d_fine}),
            d_coarse,
            d_fine,
        ),
        OrderEstimate::AtRoundoff { d_coarse, d_fine } => (
            json!({"at_roundoff": true, "d_coarse": d_coarse, "d_fine": d_fine}),
            d_coarse,
            d_fine,
        ),
    };
    let temporal_csv = format!(
        "comparison,sup_diff\ndt0_vs_half,{}\nhalf_vs_quarter,{}\n",
        io::fmt_float(d_coarse),
        io::fmt_float(d_fine)
    );
    std::fs::create_dir_all(&spec.out)?;
    std::fs::write(spec.out.join("temporal.csv"), temporal_csv)?;

    // Spatial: remainder and one-step map against a fine reference grid.
    let n_ref = spec.reference_n;
    for &n in &spec.spatial_grids {
        if !n_ref.is_multiple_of(n) || n >= n_ref {
            return Err(Error::InvalidArgument(format!(
                "spatial grid {n} must divide the reference grid {n_ref}"
            )));
        }
    }
    let plan_ref = SpectralPlan::new(n_ref)?;
    let start_ref = make_initial(&initial, n_ref)?;
    let rem_ref = biop::remainder(&start_ref, &plan_ref)?;
    let step_ref = crate::integrator::step(&start_ref, spec.dt, &plan_ref)?;

    let mut spatial_csv = String::from("n,remainder_err,step_err\n");
    let mut rows = Vec::new();
    for &n in &spec.spatial_grids {
        let stride = n_ref / n;
        let plan_n = SpectralPlan::new(n)?;
        let start_n = make_initial(&initial, n)?;
        let rem_n = biop::remainder(&start_n, &plan_n)?;
        let step_n = crate::integrator::step(&start_n, spec.dt, &plan_n)?;
        let mut rem_err: f64 = 0.0;
        let mut step_err: f64 = 0.0;
        for k in 0..n {
            let kr = k * stride;
            rem_err = rem_err.max(
                (rem_n.x[k] - rem_ref.x[kr]).hypot(rem_n.y[k] - rem_ref.y[kr]),
            );
            step_err = step_err.max(
                (step_n.x[k] - step_ref.x[kr]).hypot(step_n.y[k] - step_ref.y[kr]),
            );
        }
        spatial_csv.push_str(&format!(
            "{n},{},{}\n",
            io::fmt_float(rem_err),
            io::fmt_float(step_err)
        ));
        rows.push(json!({"n": n, "remainder_err": rem_err, "step_err": step_err}));
    }
    std::fs::write(spec.out.join("spatial.csv"), spatial_csv)?;

    let metrics = json!({
        "t_final": t_final,
        "dt0": spec.dt0,
        "temporal": temporal_json,
        "reference_n": n_ref,
        "spatial": rows,
    });
    finish(spec, "convergence", metrics, false)
}

/// Parse an `--init` flag: `demo`, `unlabeled`, `labeled:M`,
/// `circle:A,B[,C1,C2]`, or `fourier:SEED`.
pub fn parse_init_flag(s: &str) -> Result<InitialCondition> {
    let (name, rest) = match s.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (s, None),
    };
    let bad = |msg: String| Err(Error::InvalidArgument(msg));
    match (name, rest) {
        ("demo", None) => Ok(InitialCondition::Demo),
        ("unlabeled", None) => Ok(InitialCondition::Unlabeled),
        ("labeled", Some(r)) => match r.parse() {
            Ok(m) => Ok(InitialCondition::Labeled { m }),
            Err(_) => bad(format!("labeled wants an integer symmetry, got {r:?}")),
        },
        ("labeled", None) => bad("labeled needs a symmetry index, e.g. labeled:4".into()),
        ("circle", Some(r)) => {
            let parts: std::result::Result<Vec<f64>, _> =
                r.split(',').map(|p| p.trim().parse::<f64>()).collect();
            match parts.as_deref() {
                Ok([a, b]) => Ok(InitialCondition::Circle {
                    a: *a,
                    b: *b,
                    c1: 0.0,
                    c2: 0.0,
                }),
                Ok([a, b, c1, c2]) => Ok(InitialCondition::Circle {
                    a: *a,
                    b: *b,
                    c1: *c1,
                    c2: *c2,
                }),
                _ => bad(format!("circle wants A,B or A,B,C1,C2, got {r:?}")),
            }
        }
        ("circle", None) => bad("circle needs parameters, e.g. circle:1,0".into()),
        ("fourier", Some(r)) => match r.parse() {
            Ok(seed) => Ok(InitialCondition::Fourier {
                seed: Some(seed),
                modes: 8,
                amplitude: 0.1,
                decay: 2.0,
                cos_x: vec![],
                sin_x: vec![],
                cos_y: vec![],
                sin_y: vec![],
            }),
            Err(_) => bad(format!("fourier wants an integer seed, got {r:?}")),
        },
        ("fourier", None) => bad("fourier needs a seed, e.g. fourier:7".into()),
        _ => bad(format!(
            "unknown initial condition {s:?}; try demo, unlabeled, labeled:4, \
             circle:1,0, or fourier:7"
        )),
    }
}

/// Resolve the output directory against a base (tests point it at a tempdir).
pub fn with_out_dir(mut spec: ExperimentSpec, dir: &Path) -> ExperimentSpec {
    spec.out = dir.to_path_buf();
    spec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_spec_parses_from_empty_json() {
        let spec = ExperimentSpec::from_json("{}").unwrap();
        assert_eq!(spec.n, 128);
        assert_eq!(spec.dt, 0.01);
        assert_eq!(spec.k_max, 8);
        assert_eq!(spec.spatial_grids, vec![32, 64, 128]);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(ExperimentSpec::from_json(r#"{"dt_final": 1.0}"#).is_err());
        assert!(ExperimentSpec::from_json(r#"{"n": 64, "typo": true}"#).is_err());
    }

    #[test]
    fn nested_config_round_trips() {
        let text = r#"{
            "n": 64,
            "dt": 0.02,
            "init": {"name": "labeled", "m": 5},
            "field": {"nx": 11, "ny": 11, "time": 0.5},
            "pi_fit_window": [5.0, 10.0]
        }"#;
        let spec = ExperimentSpec::from_json(text).unwrap();
        assert_eq!(spec.n, 64);
        assert_eq!(spec.init, Some(InitialCondition::Labeled { m: 5 }));
        assert_eq!(spec.field.nx, 11);
        assert_eq!(spec.field.time, 0.5);
        assert_eq!(spec.pi_fit_window, Some([5.0, 10.0]));
        // And the resolved spec serializes back without loss.
        let text2 = serde_json::to_string(&spec).unwrap();
        let spec2 = ExperimentSpec::from_json(&text2).unwrap();
        assert_eq!(spec2.field.nx, 11);
    }

    #[test]
    fn init_flag_parsing() {
        assert_eq!(parse_init_flag("demo").unwrap(), InitialCondition::Demo);
        assert_eq!(
            parse_init_flag("labeled:4").unwrap(),
            InitialCondition::Labeled { m: 4 }
        );
        assert_eq!(
            parse_init_flag("circle:2,0").unwrap(),
            InitialCondition::Circle {
                a: 2.0,
                b: 0.0,
                c1: 0.0,
                c2: 0.0
            }
        );
        assert_eq!(
            parse_init_flag("circle:1,0,0.5,-0.5").unwrap(),
            InitialCondition::Circle {
                a: 1.0,
                b: 0.0,
                c1: 0.5,
                c2: -0.5
            }
        );
        assert!(matches!(
            parse_init_flag("fourier:9").unwrap(),
            InitialCondition::Fourier { seed: Some(9), .. }
        ));
        for bad in ["banana", "labeled", "labeled:x", "circle:1", "fourier:x"] {
            assert!(parse_init_flag(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn spectrum_rejects_unresolvable_k_max() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = with_out_dir(ExperimentSpec::default(), dir.path());
        spec.n = 16;
        spec.k_max = 8;
        assert!(matches!(
            cmd_spectrum(&spec),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn convergence_rejects_non_nesting_grids() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = with_out_dir(ExperimentSpec::default(), dir.path());
        spec.spatial_grids = vec![48];
        spec.reference_n = 128;
        assert!(matches!(
            cmd_convergence(&spec),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn simulate_writes_trace_snapshots_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = with_out_dir(ExperimentSpec::default(), dir.path());
        spec.n = 32;
        spec.dt = 0.05;
        spec.t_final = Some(0.2);
        spec.snapshot_times = Some(vec![0.0, 0.1, 0.2]);
        spec.init = Some(InitialCondition::Unlabeled);
        let report = cmd_simulate(&spec).unwrap();
        assert!(!report.degenerate);
        assert!(dir.path().join("trace.csv").is_file());
        assert!(dir.path().join("curve_t0.0000.csv").is_file());
        assert!(dir.path().join("curve_t0.1000.csv").is_file());
        assert!(dir.path().join("curve_t0.2000.csv").is_file());
        assert!(report.summary_path.is_file());
        assert_eq!(report.summary["command"], "simulate");
        assert_eq!(report.summary["status"], "ok");
        // Coarse grid and step: this only checks the bookkeeping is sane, not
        // the tight conservation of the production resolution.
        assert!(report.summary["metrics"]["area_drift_rel"].as_f64().unwrap() < 1e-3);
    }

    #[test]
    fn fields_masks_near_curve_and_counts_points() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = with_out_dir(ExperimentSpec::default(), dir.path());
        spec.n = 64;
        spec.field = FieldGrid {
            x_min: -2.0,
            x_max: 2.0,
            y_min: -2.0,
            y_max: 2.0,
            nx: 9,
            ny: 9,
            time: 0.0,
        };
        let report = cmd_fields(&spec).unwrap();
        assert!(!report.degenerate);
        let m = &report.summary["metrics"];
        assert_eq!(m["points"].as_u64().unwrap(), 81);
        assert!(m["masked"].as_u64().unwrap() > 0);
        // Equilibrium circle: the exterior flow is numerically still.
        assert!(m["max_speed_unmasked"].as_f64().unwrap() < 1e-9);
        assert!(dir.path().join("field.csv").is_file());
    }
}
