//! The boundary-integral operator: kernel matrix, smooth remainder ℛ, full
//! right-hand side ΛX + ℛ(X), its directional linearization, and off-curve
//! velocity/pressure evaluation.
//!
//! The single-layer self-interaction of the filament splits as
//!
//! ```text
//! (1/4π) ∫ H(θ,θ') X''(θ') dθ'  =  ΛX + ℛ(X),
//! ```
//!
//! where the kernel blocks are
//!
//! ```text
//! H(θ,θ') = -ln( |X(θ)-X(θ')| / |2 sin((θ-θ')/2)| ) I  +  ΔX⊗ΔX / |ΔX|²,
//! ```
//!
//! i.e. the plain Stokeslet with its parameter-space log singularity divided
//! out: what remains is smooth when the curve is, and the removed
//! `ln|2 sin(·/2)|` part reproduces exactly Λ. On the diagonal the limit is
//! `-ln|T_k| I + T_k⊗T_k/|T_k|²` with T = DₕX the discrete tangent.
//!
//! Discretely we integrate by parts once: with `(Dₕ,ⱼ H_kj)` the spectral
//! derivative of each kernel entry along its column index,
//!
//! ```text
//! ℛₕ(X)_k = -(1/4π) Σ_l (Dₕ,ⱼ H_kj)_l · (DₕX)_l · h,
//! ```
//!
//! which avoids ever forming X'' and keeps spectral accuracy.

use std::f64::consts::PI;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::spectral::SpectralPlan;

/// Dense N×N matrix of symmetric 2×2 blocks, stored as the three distinct
/// entries per block in row-major order.
#[derive(Clone)]
pub struct BlockKernel {
    n: usize,
    xx: Vec<f64>,
    xy: Vec<f64>,
    yy: Vec<f64>,
}

impl std::fmt::Debug for BlockKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlockKernel").field("n", &self.n).finish()
    }
}

impl BlockKernel {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The 2×2 block H_{kl} as [[xx, xy], [xy, yy]].
    pub fn block(&self, k: usize, l: usize) -> [[f64; 2]; 2] {
        let i = k * self.n + l;
        [[self.xx[i], self.xy[i]], [self.xy[i], self.yy[i]]]
    }

    fn row(&self, k: usize) -> (&[f64], &[f64], &[f64]) {
        let r = k * self.n..(k + 1) * self.n;
        (&self.xx[r.clone()], &self.xy[r.clone()], &self.yy[r])
    }
}

/// Assemble the kernel matrix for a curve.
///
/// The diagonal blocks use the analytic limit `-ln|(DₕX)_k| I + T⊗T/|T|²`.
/// Off-diagonal entries depend on (k, l) only through quantities that are
/// exactly symmetric in floating point (squared differences, and a
/// `ln|2 sin|` table symmetrized by construction), so `H_{kl} == H_{lk}`
/// holds exactly — no symmetrization step is ever needed. (Off-diagonal
/// products can differ in the sign of zero; IEEE equality treats those as
/// equal, and nothing downstream looks at the bit pattern.)
///
/// Errors with the offending node indices if two nodes coincide or a tangent
/// vanishes; both make the kernel's logarithms singular.
pub fn kernel_matrix(c: &Curve, plan: &SpectralPlan) -> Result<BlockKernel> {
    let n = plan.n();
    if c.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: c.n(),
        });
    }
    let tangent = c.derivative(plan)?;
    let h = plan.h();

    // ln|2 sin(m h / 2)| for parameter offset m = (k - l) mod n. Filling both
    // m and n-m from one evaluation makes the table exactly symmetric.
    let mut log_2sin = vec![0.0; n];
    for m in 1..=n / 2 {
        let v = (2.0 * (0.5 * m as f64 * h).sin()).abs().ln();
        log_2sin[m] = v;
        log_2sin[n - m] = v;
    }

    let mut xx = vec![0.0; n * n];
    let mut xy = vec![0.0; n * n];
    let mut yy = vec![0.0; n * n];
    for k in 0..n {
        for l in 0..n {
            let i = k * n + l;
            if l == k {
                let tx = tangent.x[k];
                let ty = tangent.y[k];
                let m2 = tx * tx + ty * ty;
                if m2 == 0.0 {
                    return Err(Error::Degenerate(format!(
                        "tangent vanishes at node {k}"
                    )));
                }
                let lg = -0.5 * m2.ln();
                xx[i] = lg + tx * tx / m2;
                xy[i] = tx * ty / m2;
                yy[i] = lg + ty * ty / m2;
            } else {
                let dx = c.x[k] - c.x[l];
                let dy = c.y[k] - c.y[l];
                let r2 = dx * dx + dy * dy;
                if r2 == 0.0 {
                    return Err(Error::Degenerate(format!(
                        "nodes {k} and {l} coincide"
                    )));
                }
                let lg = log_2sin[(n + k - l) % n] - 0.5 * r2.ln();
                xx[i] = lg + dx * dx / r2;
                xy[i] = dx * dy / r2;
                yy[i] = lg + dy * dy / r2;
            }
        }
    }
    Ok(BlockKernel { n, xx, xy, yy })
}

/// The smooth remainder ℛₕ(X): integrate the kernel by parts along columns
/// and contract with the tangent.
pub fn remainder(c: &Curve, plan: &SpectralPlan) -> Result<Curve> {
    let kern = kernel_matrix(c, plan)?;
    let tangent = c.derivative(plan)?;
    let n = plan.n();
    let scale = -plan.h() / (4.0 * PI);
    let mut out = Curve::zeros(n);
    for k in 0..n {
        let (row_xx, row_xy, row_yy) = kern.row(k);
        let dxx = plan.derivative(row_xx)?;
        let dxy = plan.derivative(row_xy)?;
        let dyy = plan.derivative(row_yy)?;
        let mut sx = 0.0;
        let mut sy = 0.0;
        for l in 0..n {
            sx += dxx[l] * tangent.x[l] + dxy[l] * tangent.y[l];
            sy += dxy[l] * tangent.x[l] + dyy[l] * tangent.y[l];
        }
        out.x[k] = scale * sx;
        out.y[k] = scale * sy;
    }
    Ok(out)
}

/// Full right-hand side ΛX + ℛₕ(X): the velocity of the filament.
pub fn rhs(c: &Curve, plan: &SpectralPlan) -> Result<Curve> {
    let lin = c.lambda_op(plan)?;
    let rem = remainder(c, plan)?;
    lin.add_scaled(&rem, 1.0)
}

/// Central-difference directional derivative of the right-hand side:
/// `(rhs(base + ε·dir) - rhs(base - ε·dir)) / 2ε`.
///
/// ε must be positive; a good default is `1e-5 · ‖base‖_{C¹ₕ}`. Degeneracy of
/// either perturbed curve propagates as an error.
pub fn linearize_rhs(base: &Curve, dir: &Curve, eps: f64, plan: &SpectralPlan) -> Result<Curve> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "linearization step must be positive, got {eps}"
        )));
    }
    let plus = rhs(&base.add_scaled(dir, eps)?, plan)?;
    let minus = rhs(&base.add_scaled(dir, -eps)?, plan)?;
    plus.add_scaled(&minus, -1.0).map(|d| d.scale(0.5 / eps))
}

/// Free-space 2D Stokeslet `G(x) = (1/4π)(-ln|x| I + x⊗x/|x|²)`.
pub fn stokeslet(x: [f64; 2]) -> Result<[[f64; 2]; 2]> {
    let r2 = x[0] * x[0] + x[1] * x[1];
    if r2 == 0.0 {
        return Err(Error::InvalidArgument(
            "stokeslet is singular at the origin".into(),
        ));
    }
    let lg = -0.5 * r2.ln();
    let s = 1.0 / (4.0 * PI);
    Ok([
        [s * (lg + x[0] * x[0] / r2), s * (x[0] * x[1] / r2)],
        [s * (x[0] * x[1] / r2), s * (lg + x[1] * x[1] / r2)],
    ])
}

/// Velocity and pressure at one off-curve point.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub point: [f64; 2],
    /// `None` when the point is masked as too close to the curve.
    pub u: Option<[f64; 2]>,
    pub p: Option<f64>,
    pub near_curve: bool,
}

/// Distance below which field evaluation is masked: 5h·sup|DₕX|, i.e. a few
/// arclength grid spacings. Inside it the periodic trapezoid sum no longer
/// converges spectrally for the near-singular integrand.
pub fn mask_radius(c: &Curve, plan: &SpectralPlan) -> Result<f64> {
    Ok(5.0 * plan.h() * c.derivative(plan)?.max_norm())
}

/// Evaluate the induced velocity and pressure at `point`.
///
/// The velocity uses the once integrated-by-parts Stokeslet sum, which for
/// z = point - X_l and T = DₕX collapses to
///
/// ```text
/// u = (h/4π) Σ_l [ |T_l|² - 2 (z·T_l)²/|z|² ] z / |z|²,
/// ```
///
/// and the pressure pairs the pressure kernel z/(2π|z|²) with Dₕ²X directly.
/// Points within [`mask_radius`] of a node are flagged and left unevaluated.
pub fn field_at(c: &Curve, plan: &SpectralPlan, point: [f64; 2]) -> Result<FieldSample> {
    let n = plan.n();
    if c.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            got: c.n(),
        });
    }
    let tangent = c.derivative(plan)?;
    let delta = 5.0 * plan.h() * tangent.max_norm();
    let mut min_r2 = f64::INFINITY;
    for l in 0..n {
        let dx = point[0] - c.x[l];
        let dy = point[1] - c.y[l];
        min_r2 = min_r2.min(dx * dx + dy * dy);
    }
    if min_r2 < delta * delta {
        return Ok(FieldSample {
            point,
            u: None,
            p: None,
            near_curve: true,
        });
    }

    let second = tangent.derivative(plan)?;
    let h = plan.h();
    let mut ux = 0.0;
    let mut uy = 0.0;
    let mut p = 0.0;
    for l in 0..n {
        let zx = point[0] - c.x[l];
        let zy = point[1] - c.y[l];
        let r2 = zx * zx + zy * zy;
        let tx = tangent.x[l];
        let ty = tangent.y[l];
        let zdott = zx * tx + zy * ty;
        let w = (tx * tx + ty * ty - 2.0 * zdott * zdott / r2) / r2;
        ux += w * zx;
        uy += w * zy;
        p += (zx * second.x[l] + zy * second.y[l]) / r2;
    }
    Ok(FieldSample {
        point,
        u: Some([h / (4.0 * PI) * ux, h / (4.0 * PI) * uy]),
        p: Some(h / (2.0 * PI) * p),
        near_curve: false,
    })
}
