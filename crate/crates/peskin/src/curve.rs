//! Closed curves sampled on the periodic grid, and their pointwise
//! diagnostics.
//!
//! A [`Curve`] is a pair of coordinate arrays `(x_k, y_k)` at the nodes
//! θ_k = kh. The same type doubles as a general vector grid function
//! (velocities, mode directions, residuals), so the arithmetic helpers are
//! deliberately generic.
//!
//! The diagnostics here are the ones recorded along a trajectory:
//!
//! - [`star_norm`]: `min_{k≠l} |X_k - X_l| / d(k,l)` with `d` the circle
//!   distance of the parameters. Positive iff the discrete curve is simple
//!   and non-self-touching at grid scale; it degrades *before* a collision,
//!   which is what makes it a usable runtime guard.
//! - [`area`]: signed polygon-free spectral area `½ Σ (x Dₕy - y Dₕx) h`. The
//!   flow is incompressible, so this should be conserved; its drift is a
//!   global accuracy indicator.
//! - [`energy`]: elastic energy `½ Σ |DₕX|² h` of a linear tension law,
//!   strictly decreasing along exact dynamics.
//! - [`holder_seminorm`] / [`c1h_norm`] / [`deformation_ratio`]: the mesh
//!   regularity quantities controlling how far the curve is from the
//!   well-parametrized regime.

use crate::error::{Error, Result};
use crate::modes::ModeCoeffs;
use crate::spectral::SpectralPlan;

/// A vector grid function: coordinates (or vector components) at the N nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl Curve {
    /// Wrap coordinate arrays; they must have equal, nonzero length.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::SizeMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::InvalidArgument("empty curve".into()));
        }
        Ok(Curve { x, y })
    }

    pub fn zeros(n: usize) -> Self {
        Curve {
            x: vec![0.0; n],
            y: vec![0.0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn point(&self, k: usize) -> [f64; 2] {
        [self.x[k], self.y[k]]
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(|v| v.is_finite()) && self.y.iter().all(|v| v.is_finite())
    }

    /// self + s·other, elementwise.
    pub fn add_scaled(&self, other: &Curve, s: f64) -> Result<Curve> {
        if other.n() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                got: other.n(),
            });
        }
        Ok(Curve {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + s * b).collect(),
            y: self.y.iter().zip(&other.y).map(|(a, b)| a + s * b).collect(),
        })
    }

    pub fn scale(&self, a: f64) -> Curve {
        Curve {
            x: self.x.iter().map(|v| a * v).collect(),
            y: self.y.iter().map(|v| a * v).collect(),
        }
    }

    pub fn translate(&self, cx: f64, cy: f64) -> Curve {
        Curve {
            x: self.x.iter().map(|v| v + cx).collect(),
            y: self.y.iter().map(|v| v + cy).collect(),
        }
    }

    /// Rotate every node (and hence every vector value) by `angle` about the origin.
    pub fn rotate(&self, angle: f64) -> Curve {
        let (s, c) = angle.sin_cos();
        Curve {
            x: self.x.iter().zip(&self.y).map(|(x, y)| c * x - s * y).collect(),
            y: self.x.iter().zip(&self.y).map(|(x, y)| s * x + c * y).collect(),
        }
    }

    /// sup_k of the pointwise Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(x, y)| x.hypot(*y))
            .fold(0.0, f64::max)
    }

    /// Componentwise spectral derivative DₕX (the discrete tangent).
    pub fn derivative(&self, plan: &SpectralPlan) -> Result<Curve> {
        Ok(Curve {
            x: plan.derivative(&self.x)?,
            y: plan.derivative(&self.y)?,
        })
    }

    /// Componentwise Λ = -¼ℋ∂_θ.
    pub fn lambda_op(&self, plan: &SpectralPlan) -> Result<Curve> {
        Ok(Curve {
            x: plan.lambda_op(&self.x)?,
            y: plan.lambda_op(&self.y)?,
        })
    }

    /// Componentwise semigroup e^{tΛ}.
    pub fn semigroup(&self, plan: &SpectralPlan, t: f64) -> Result<Curve> {
        Ok(Curve {
            x: plan.semigroup(t, &self.x)?,
            y: plan.semigroup(t, &self.y)?,
        })
    }
}

/// Circle distance of two node indices, in parameter length: min(|k-l|, N-|k-l|)·h.
fn node_distance(k: usize, l: usize, n: usize, h: f64) -> f64 {
    let d = k.abs_diff(l);
    d.min(n - d) as f64 * h
}

/// `min_{k≠l} |X_k - X_l| / d(k,l)`. Zero iff two nodes coincide.
pub fn star_norm(c: &Curve) -> f64 {
    let n = c.n();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut best = f64::INFINITY;
    for k in 0..n {
        for l in (k + 1)..n {
            let dx = c.x[k] - c.x[l];
            let dy = c.y[k] - c.y[l];
            let r = dx.hypot(dy) / node_distance(k, l, n, h);
            if r < best {
                best = r;
            }
        }
    }
    best
}

/// Signed enclosed area `½ Σ (x_k (Dₕy)_k - y_k (Dₕx)_k) h`.
/// Positive for counterclockwise orientation.
pub fn area(c: &Curve, plan: &SpectralPlan) -> Result<f64> {
    let d = c.derivative(plan)?;
    let h = plan.h();
    let mut s = 0.0;
    for k in 0..c.n() {
        s += c.x[k] * d.y[k] - c.y[k] * d.x[k];
    }
    Ok(0.5 * s * h)
}

/// Elastic energy `½ Σ |(DₕX)_k|² h`.
pub fn energy(c: &Curve, plan: &SpectralPlan) -> Result<f64> {
    let d = c.derivative(plan)?;
    let h = plan.h();
    let mut s = 0.0;
    for k in 0..c.n() {
        s += d.x[k] * d.x[k] + d.y[k] * d.y[k];
    }
    Ok(0.5 * s * h)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Hölder exponent must lie in (0, 1), got {gamma}"
        )));
    }
    Ok(())
}

/// Discrete Hölder seminorm of a scalar grid function:
/// `max |v_k - v_l| / d(k,l)^γ` over node pairs with circle distance
/// 0 < d(k,l) < 1. Requires γ ∈ (0, 1).
pub fn holder_seminorm_scalar(v: &[f64], gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let n = v.len();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut best: f64 = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            let d = node_distance(k, l, n, h);
            if d < 1.0 {
                best = best.max((v[k] - v[l]).abs() / d.powf(gamma));
            }
        }
    }
    Ok(best)
}

/// Vector version of [`holder_seminorm_scalar`]: pointwise differences are
/// measured in the Euclidean norm.
pub fn holder_seminorm(c: &Curve, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let n = c.n();
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut best: f64 = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            let d = node_distance(k, l, n, h);
            if d < 1.0 {
                let diff = (c.x[k] - c.x[l]).hypot(c.y[k] - c.y[l]);
                best = best.max(diff / d.powf(gamma));
            }
        }
    }
    Ok(best)
}

/// Discrete C¹ norm: `sup_k |V_k| + sup_k |(DₕV)_k|`.
pub fn c1h_norm(c: &Curve, plan: &SpectralPlan) -> Result<f64> {
    Ok(c.max_norm() + c.derivative(plan)?.max_norm())
}

/// Mesh-deformation ratio `(sup_k |(DₕX)_k| + |DₕX|_{C^γ}) / |X|_*`.
///
/// γ = 0 is accepted as the convention "drop the Hölder term", giving the
/// ratio ρ₀ = sup|DₕX| / |X|_* that the trajectory trace records.
pub fn deformation_ratio(c: &Curve, plan: &SpectralPlan, gamma: f64) -> Result<f64> {
    if gamma != 0.0 {
        check_gamma(gamma)?;
    }
    let star = star_norm(c);
    if star <= 0.0 {
        return Err(Error::Degenerate(
            "deformation ratio undefined: star norm is zero".into(),
        ));
    }
    let tangent = c.derivative(plan)?;
    let mut top = tangent.max_norm();
    if gamma != 0.0 {
        top += holder_seminorm(&tangent, gamma)?;
    }
    Ok(top / star)
}

/// One row of the trajectory trace.
#[derive(Debug, Clone)]
pub struct TraceRecord {
    pub t: f64,
    pub energy: f64,
    pub area: f64,
    pub star_norm: f64,
    /// C¹ norm of the projection of X away from the four slow modes.
    pub c1h_pi_norm: f64,
    /// Coefficients of X on the four slow modes.
    pub coeffs: ModeCoeffs,
    /// ρ₀ = sup|DₕX| / |X|_*.
    pub deformation_ratio_0: f64,
    /// sup_k |(ΛX + ℛ(X))_k|: the fastest node speed.
    pub max_speed: f64,
}
