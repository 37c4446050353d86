//! The four slow modes, projections onto and away from them, and the
//! decay-rate fits built on top of a trajectory trace.
//!
//! A uniformly parametrized circle of any radius, center, and phase is an
//! equilibrium, so near equilibrium the dynamics splits into four neutral or
//! slow directions — dilation `e_r`, parameter rotation `e_t`, and the two
//! translations `e_x`, `e_y` — plus everything else, which decays. The
//! interesting observables are therefore the coefficients of X on those four
//! directions (recorded in the trace as `a_x, a_y, a_r, a_t`) and the C¹ norm
//! of the complement `Π X`, whose logarithm decays linearly in time with
//! slope -1/4; the mode coefficients themselves settle at rate -1/2.

use crate::curve::{c1h_norm, Curve, TraceRecord};
use crate::error::{Error, Result};
use crate::spectral::SpectralPlan;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Values below this are treated as roundoff noise by [`fit_slope`]: fitting
/// a decay rate to them would measure the floating-point floor, not dynamics.
pub const FIT_FLOOR: f64 = 1e-13;

/// The four slow directions sampled on n nodes. Mutually ⟨·,·⟩ₕ-orthogonal
/// with squared norm 2π each.
#[derive(Debug, Clone)]
pub struct Basis {
    pub e_r: Curve,
    pub e_t: Curve,
    pub e_x: Curve,
    pub e_y: Curve,
}

/// Build the slow-mode basis: e_r = (cos θ, sin θ), e_t = (-sin θ, cos θ),
/// e_x = (1, 0), e_y = (0, 1).
pub fn basis(n: usize) -> Basis {
    let h = TWO_PI / n as f64;
    let cos: Vec<f64> = (0..n).map(|k| (k as f64 * h).cos()).collect();
    let sin: Vec<f64> = (0..n).map(|k| (k as f64 * h).sin()).collect();
    Basis {
        e_r: Curve {
            x: cos.clone(),
            y: sin.clone(),
        },
        e_t: Curve {
            x: sin.iter().map(|v| -v).collect(),
            y: cos,
        },
        e_x: Curve {
            x: vec![1.0; n],
            y: vec![0.0; n],
        },
        e_y: Curve {
            x: vec![0.0; n],
            y: vec![1.0; n],
        },
    }
}

/// Discrete inner product ⟨V, W⟩ₕ = Σ_k (V_k · W_k) h.
pub fn inner(u: &Curve, v: &Curve) -> Result<f64> {
    if u.n() != v.n() {
        return Err(Error::SizeMismatch {
            expected: u.n(),
            got: v.n(),
        });
    }
    let h = TWO_PI / u.n() as f64;
    let mut s = 0.0;
    for k in 0..u.n() {
        s += u.x[k] * v.x[k] + u.y[k] * v.y[k];
    }
    Ok(s * h)
}

/// Coefficients of a grid function on the slow-mode basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoeffs {
    pub a_x: f64,
    pub a_y: f64,
    pub a_r: f64,
    pub a_t: f64,
}

impl ModeCoeffs {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a_x, self.a_y, self.a_r, self.a_t]
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// a_ℓ = ⟨V, e_ℓ⟩ₕ / 2π for each of the four slow modes.
pub fn coeffs(v: &Curve) -> Result<ModeCoeffs> {
    let b = basis(v.n());
    Ok(ModeCoeffs {
        a_x: inner(v, &b.e_x)? / TWO_PI,
        a_y: inner(v, &b.e_y)? / TWO_PI,
        a_r: inner(v, &b.e_r)? / TWO_PI,
        a_t: inner(v, &b.e_t)? / TWO_PI,
    })
}

/// Assemble `a_x e_x + a_y e_y + a_r e_r + a_t e_t` on n nodes.
pub fn reconstruct(a: &ModeCoeffs, n: usize) -> Curve {
    let b = basis(n);
    let mut out = Curve::zeros(n);
    for k in 0..n {
        out.x[k] = a.a_x + a.a_r * b.e_r.x[k] + a.a_t * b.e_t.x[k];
        out.y[k] = a.a_y + a.a_r * b.e_r.y[k] + a.a_t * b.e_t.y[k];
    }
    out
}

/// Orthogonal projection Pₕ onto the slow modes.
pub fn project_p(v: &Curve) -> Result<Curve> {
    Ok(reconstruct(&coeffs(v)?, v.n()))
}

/// Complementary projection Πₕ = I - Pₕ.
pub fn project_pi(v: &Curve) -> Result<Curve> {
    v.add_scaled(&project_p(v)?, -1.0)
}

/// C¹ norm of the slow-mode complement, the quantity whose decay rate is -1/4.
pub fn pi_c1h_norm(v: &Curve, plan: &SpectralPlan) -> Result<f64> {
    c1h_norm(&project_pi(v)?, plan)
}

/// The two log-series extracted from a trace for rate fitting.
#[derive(Debug, Clone)]
pub struct DecaySeries {
    /// (t, ln ‖Πₕ X(t)‖_{C¹ₕ}) at every record.
    pub pi: Vec<[f64; 2]>,
    /// (t midpoint, ln |a(t+Δ) - a(t)| / Δ): the mode-velocity series.
    pub dta: Vec<[f64; 2]>,
}

/// Build the decay series from a trace. Requires at least two records at a
/// uniform time stride (the finite difference in the second series assumes it).
pub fn decay_metrics(trace: &[TraceRecord]) -> Result<DecaySeries> {
    if trace.len() < 2 {
        return Err(Error::InvalidArgument(
            "decay metrics need at least two trace records".into(),
        ));
    }
    let dt = trace[1].t - trace[0].t;
    if dt <= 0.0 {
        return Err(Error::InvalidArgument(
            "trace records must be strictly increasing in time".into(),
        ));
    }
    for w in trace.windows(2) {
        if ((w[1].t - w[0].t) - dt).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "trace stride is not uniform: {} vs {}",
                w[1].t - w[0].t,
                dt
            )));
        }
    }
    let pi = trace
        .iter()
        .map(|r| [r.t, safe_ln(r.c1h_pi_norm)])
        .collect();
    let dta = trace
        .windows(2)
        .map(|w| {
            let da: f64 = w[1]
                .coeffs
                .as_array()
                .iter()
                .zip(w[0].coeffs.as_array())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            [0.5 * (w[0].t + w[1].t), safe_ln(da / dt)]
        })
        .collect();
    Ok(DecaySeries { pi, dta })
}

fn safe_ln(v: f64) -> f64 {
    v.max(f64::MIN_POSITIVE).ln()
}

/// Least-squares line fit over a time window.
#[derive(Debug, Clone, Copy)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope estimate.
    pub stderr: f64,
    /// Number of points inside the window.
    pub points: usize,
}

/// Ordinary least squares on the points of `series` with t ∈ [t_min, t_max].
///
/// Fails if fewer than 10 points fall in the window, or if any windowed value
/// is below ln([`FIT_FLOOR`]) — in that case the series has hit roundoff and a
/// rate estimate would be meaningless.
pub fn fit_slope(series: &[[f64; 2]], t_min: f64, t_max: f64) -> Result<SlopeFit> {
    let pts: Vec<[f64; 2]> = series
        .iter()
        .filter(|p| p[0] >= t_min - 1e-12 && p[0] <= t_max + 1e-12)
        .copied()
        .collect();
    if pts.len() < 10 {
        return Err(Error::FitWindow(format!(
            "only {} points in [{t_min}, {t_max}]; need at least 10",
            pts.len()
        )));
    }
    let floor = FIT_FLOOR.ln();
    if let Some(p) = pts.iter().find(|p| p[1] < floor) {
        return Err(Error::FitWindow(format!(
            "value {} at t = {} is below the roundoff floor ln({FIT_FLOOR:e})",
            p[1], p[0]
        )));
    }
    let m = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p[0]).sum::<f64>() / m;
    let y_mean = pts.iter().map(|p| p[1]).sum::<f64>() / m;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for p in &pts {
        sxx += (p[0] - t_mean) * (p[0] - t_mean);
        sxy += (p[0] - t_mean) * (p[1] - y_mean);
    }
    if sxx == 0.0 {
        return Err(Error::FitWindow("window has zero time extent".into()));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let ssr: f64 = pts
        .iter()
        .map(|p| {
            let r = p[1] - (intercept + slope * p[0]);
            r * r
        })
        .sum();
    let stderr = (ssr / (m - 2.0) / sxx).sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        stderr,
        points: pts.len(),
    })
}
