//! Time stepping: the two-stage exponential rule, the trajectory driver, and
//! a Richardson order estimator.
//!
//! One step of size Δt treats Λ exactly and the remainder ℛ with a midpoint
//! predictor:
//!
//! ```text
//! X* = e^{(Δt/2)Λ} (Xⁿ + (Δt/2) ℛ(Xⁿ))
//! Xⁿ⁺¹ = e^{ΔtΛ} Xⁿ + Δt e^{(Δt/2)Λ} ℛ(X*)
//! ```
//!
//! The rule is second order, unconditionally stable in the leading term, and
//! exact on pure semigroup flow. The driver records diagnostics along the
//! way and aborts cleanly — partial trace preserved — if the curve
//! degenerates, which is a physical outcome (self-contact), not a bug.

use crate::biop;
use crate::curve::{self, Curve, TraceRecord};
use crate::error::{Error, Result, Stage};
use crate::init::{make_initial, InitialCondition};
use crate::modes;
use crate::spectral::SpectralPlan;

/// Star-norm floor below which the discretization is considered collapsed.
/// Well short of underflow, but far below any resolvable geometry.
pub const STAR_NORM_FLOOR: f64 = 1e-8;

/// Sup-norm differences below this are indistinguishable from roundoff in a
/// Richardson comparison, so no order can be claimed from them.
pub const RICHARDSON_FLOOR: f64 = 1e-10;

/// Advance one step of size `dt ≥ 0`.
pub fn step(c: &Curve, dt: f64, plan: &SpectralPlan) -> Result<Curve> {
    let r0 = biop::remainder(c, plan).map_err(|e| Error::Step {
        stage: Stage::Half,
        source: Box::new(e),
    })?;
    step_stages(c, &r0, dt, plan)
}

/// The step with the first remainder evaluation supplied by the caller (the
/// driver reuses it for the trace's speed diagnostic).
fn step_stages(c: &Curve, r0: &Curve, dt: f64, plan: &SpectralPlan) -> Result<Curve> {
    if !(dt >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time step must be nonnegative, got {dt}"
        )));
    }
    let half = c
        .add_scaled(r0, 0.5 * dt)?
        .semigroup(plan, 0.5 * dt)?;
    if !half.is_finite() {
        return Err(Error::Step {
            stage: Stage::Half,
            source: Box::new(Error::Degenerate("nonfinite midpoint state".into())),
        });
    }
    let r1 = biop::remainder(&half, plan).map_err(|e| Error::Step {
        stage: Stage::Full,
        source: Box::new(e),
    })?;
    let next = c
        .semigroup(plan, dt)?
        .add_scaled(&r1.semigroup(plan, 0.5 * dt)?, dt)?;
    if !next.is_finite() {
        return Err(Error::Step {
            stage: Stage::Full,
            source: Box::new(Error::Degenerate("nonfinite updated state".into())),
        });
    }
    Ok(next)
}

/// A trajectory request.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Record a trace row every this many steps (plus always t = 0 and t_final).
    pub snapshot_every: usize,
    pub initial: InitialCondition,
    /// Times at which to keep a full copy of the curve (rounded to the
    /// nearest step). Empty by default.
    pub snapshot_times: Vec<f64>,
}

impl RunConfig {
    pub fn new(n: usize, dt: f64, t_final: f64, initial: InitialCondition) -> Self {
        RunConfig {
            n,
            dt,
            t_final,
            snapshot_every: 1,
            initial,
            snapshot_times: Vec::new(),
        }
    }
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Completed,
    /// The curve degenerated at time `t`; the trace up to that point is kept.
    Degenerate { t: f64, detail: String },
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: Vec<TraceRecord>,
    pub final_curve: Curve,
    /// Curve copies at the requested snapshot times, in time order.
    pub snapshots: Vec<(f64, Curve)>,
    pub status: RunStatus,
    /// True when t_final was not a whole number of steps and the last step
    /// was shortened to land on it exactly.
    pub partial_final_step: bool,
}

impl RunOutcome {
    pub fn completed(&self) -> bool {
        self.status == RunStatus::Completed
    }
}

/// Integrate from the configured initial curve to t_final.
///
/// Diagnostics are recorded every `snapshot_every` steps and at both ends.
/// The star norm is checked at every recording time and whenever a stage
/// produces nonfinite values; dropping below [`STAR_NORM_FLOOR`] aborts the
/// run with [`RunStatus::Degenerate`] (an `Ok` outcome — the partial data is
/// the result). Configuration mistakes are `Err`.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    if !(cfg.dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "dt must be positive, got {}",
            cfg.dt
        )));
    }
    if !(cfg.t_final >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_final must be nonnegative, got {}",
            cfg.t_final
        )));
    }
    if cfg.snapshot_every == 0 {
        return Err(Error::InvalidArgument(
            "snapshot_every must be at least 1".into(),
        ));
    }
    let plan = SpectralPlan::new(cfg.n)?;
    let mut x = make_initial(&cfg.initial, cfg.n)?;

    // Whole steps, then one shortened step if t_final is off the step grid.
    let steps_exact = cfg.t_final / cfg.dt;
    let rounded = steps_exact.round();
    let (whole_steps, partial_dt) =
        if (steps_exact - rounded).abs() <= 1e-9 * steps_exact.max(1.0) {
            (rounded as usize, None)
        } else {
            let w = steps_exact.floor() as usize;
            (w, Some(cfg.t_final - w as f64 * cfg.dt))
        };

    let snapshot_steps: Vec<usize> = cfg
        .snapshot_times
        .iter()
        .map(|&t| (t / cfg.dt).round() as usize)
        .collect();

    let mut trace = Vec::new();
    let mut snapshots = Vec::new();
    let record_and_check = |x: &Curve,
                                t: f64,
                                r0: &Curve,
                                trace: &mut Vec<TraceRecord>|
     -> Result<Option<RunStatus>> {
        let star = curve::star_norm(x);
        if star <= STAR_NORM_FLOOR {
            return Ok(Some(RunStatus::Degenerate {
                t,
                detail: format!("star norm {star:.3e} at floor"),
            }));
        }
        trace.push(trace_record(x, t, star, r0, &plan)?);
        Ok(None)
    };

    for i in 0..whole_steps {
        let t = i as f64 * cfg.dt;
        if snapshot_steps.contains(&i) {
            snapshots.push((t, x.clone()));
        }
        let r0 = match biop::remainder(&x, &plan) {
            Ok(r) => r,
            Err(e) if e.is_degeneracy() => {
                return Ok(RunOutcome {
                    trace,
                    final_curve: x,
                    snapshots,
                    status: RunStatus::Degenerate {
                        t,
                        detail: e.to_string(),
                    },
                    partial_final_step: partial_dt.is_some(),
                });
            }
            Err(e) => return Err(e),
        };
        if i % cfg.snapshot_every == 0 {
            if let Some(status) = record_and_check(&x, t, &r0, &mut trace)? {
                return Ok(RunOutcome {
                    trace,
                    final_curve: x,
                    snapshots,
                    status,
                    partial_final_step: partial_dt.is_some(),
                });
            }
        }
        x = match step_stages(&x, &r0, cfg.dt, &plan) {
            Ok(next) => next,
            Err(e) if e.is_degeneracy() => {
                return Ok(RunOutcome {
                    trace,
                    final_curve: x,
                    snapshots,
                    status: RunStatus::Degenerate {
                        t,
                        detail: e.to_string(),
                    },
                    partial_final_step: partial_dt.is_some(),
                });
            }
            Err(e) => return Err(e),
        };
    }

    if let Some(dtp) = partial_dt {
        let t = whole_steps as f64 * cfg.dt;
        match step(&x, dtp, &plan) {
            Ok(next) => x = next,
            Err(e) if e.is_degeneracy() => {
                return Ok(RunOutcome {
                    trace,
                    final_curve: x,
                    snapshots,
                    status: RunStatus::Degenerate {
                        t,
                        detail: e.to_string(),
                    },
                    partial_final_step: true,
                });
            }
            Err(e) => return Err(e),
        }
    }

    // Closing record at t_final (step count may not align with the stride).
    // Requested snapshot times at or beyond the last whole step clamp to the
    // final state.
    let t_end = cfg.t_final;
    if snapshot_steps.iter().any(|&s| s >= whole_steps) {
        snapshots.push((t_end, x.clone()));
    }
    let status = match biop::remainder(&x, &plan) {
        Ok(r0) => record_and_check(&x, t_end, &r0, &mut trace)?
            .unwrap_or(RunStatus::Completed),
        Err(e) if e.is_degeneracy() => RunStatus::Degenerate {
            t: t_end,
            detail: e.to_string(),
        },
        Err(e) => return Err(e),
    };
    Ok(RunOutcome {
        trace,
        final_curve: x,
        snapshots,
        status,
        partial_final_step: partial_dt.is_some(),
    })
}

fn trace_record(
    x: &Curve,
    t: f64,
    star: f64,
    r0: &Curve,
    plan: &SpectralPlan,
) -> Result<TraceRecord> {
    let velocity = x.lambda_op(plan)?.add_scaled(r0, 1.0)?;
    let tangent_sup = x.derivative(plan)?.max_norm();
    Ok(TraceRecord {
        t,
        energy: curve::energy(x, plan)?,
        area: curve::area(x, plan)?,
        star_norm: star,
        c1h_pi_norm: modes::pi_c1h_norm(x, plan)?,
        coeffs: modes::coeffs(x)?,
        deformation_ratio_0: tangent_sup / star,
        max_speed: velocity.max_norm(),
    })
}

/// Richardson order estimate over the step triple (dt₀, dt₀/2, dt₀/4).
#[derive(Debug, Clone, Copy)]
pub enum OrderEstimate {
    /// log₂ of the ratio of successive solution differences.
    Order {
        value: f64,
        d_coarse: f64,
        d_fine: f64,
    },
    /// Both differences sit at roundoff; the order is unresolvable (and the
    /// integrator is doing as well as the arithmetic allows).
    AtRoundoff { d_coarse: f64, d_fine: f64 },
}

/// Integrate `initial` to `t_final` with steps dt₀, dt₀/2, dt₀/4 and compare
/// endpoints in the sup norm. `t_final` must be a whole number of coarse
/// steps. Degeneracy in any of the three runs propagates as an error.
pub fn order_estimate(
    initial: &Curve,
    t_final: f64,
    dt0: f64,
    plan: &SpectralPlan,
) -> Result<OrderEstimate> {
    if !(dt0 > 0.0) || !(t_final > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need positive dt0 and t_final, got dt0 = {dt0}, t_final = {t_final}"
        )));
    }
    let steps = t_final / dt0;
    if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "t_final = {t_final} is not a whole number of dt0 = {dt0} steps"
        )));
    }
    let base_steps = steps.round() as usize;
    let mut endpoints = Vec::new();
    for refine in [1usize, 2, 4] {
        let dt = dt0 / refine as f64;
        let mut x = initial.clone();
        for _ in 0..base_steps * refine {
            x = step(&x, dt, plan)?;
        }
        endpoints.push(x);
    }
    let d_coarse = endpoints[0].add_scaled(&endpoints[1], -1.0)?.max_norm();
    let d_fine = endpoints[1].add_scaled(&endpoints[2], -1.0)?.max_norm();
    if d_coarse.max(d_fine) <= RICHARDSON_FLOOR || d_fine == 0.0 {
        Ok(OrderEstimate::AtRoundoff { d_coarse, d_fine })
    } else {
        Ok(OrderEstimate::Order {
            value: (d_coarse / d_fine).log2(),
            d_coarse,
            d_fine,
        })
    }
}
