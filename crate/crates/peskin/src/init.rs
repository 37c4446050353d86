//! The family of initial curves the experiments run from.
//!
//! Every shape is sampled analytically at the grid nodes θ_k = kh, so the
//! same descriptor reproduces bit-identical data at any resolution. The named
//! shapes:
//!
//! - `demo`: a 7-fold flower with an asymmetric 2-mode overlay; the default
//!   "generic smooth curve" used for goldens and convergence studies.
//! - `unlabeled`: a gently perturbed circle used for decay-rate measurements.
//! - `labeled(m)`: strongly anisotropic curves with exponential bumps; the
//!   integer m selects the symmetry of the y-modulation.
//! - `circle`: the exact relative equilibria A·e_r + B·e_t + (C₁, C₂).
//! - `fourier`: random (or explicitly listed) low-mode perturbations of the
//!   unit circle, with a counter-based generator so a seed fully determines
//!   the curve independent of evaluation order.

use serde::{Deserialize, Serialize};

use crate::curve::{star_norm, Curve};
use crate::error::{Error, Result};

/// Descriptor for an initial curve. Serializes with a `name` tag, e.g.
/// `{"name": "labeled", "m": 4}` or `{"name": "fourier", "seed": 7}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum InitialCondition {
    Demo,
    Unlabeled,
    Labeled {
        m: i64,
    },
    Circle {
        a: f64,
        b: f64,
        #[serde(default)]
        c1: f64,
        #[serde(default)]
        c2: f64,
    },
    Fourier {
        /// Seed for generated coefficients; ignored when explicit lists are given.
        #[serde(default)]
        seed: Option<u64>,
        /// Number of perturbation modes when generating from a seed.
        #[serde(default = "default_modes")]
        modes: usize,
        /// Overall amplitude of generated coefficients.
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        /// Coefficients of mode j are damped by j^decay.
        #[serde(default = "default_decay")]
        decay: f64,
        /// Explicit coefficient lists, indexed from mode 1: x(θ) gains
        /// `cos_x[j-1]·cos(jθ) + sin_x[j-1]·sin(jθ)`, and likewise for y.
        #[serde(default)]
        cos_x: Vec<f64>,
        #[serde(default)]
        sin_x: Vec<f64>,
        #[serde(default)]
        cos_y: Vec<f64>,
        #[serde(default)]
        sin_y: Vec<f64>,
    },
}

fn default_modes() -> usize {
    8
}

fn default_amplitude() -> f64 {
    0.1
}

fn default_decay() -> f64 {
    2.0
}

/// SplitMix64 finalizer: maps a counter to a well-mixed 64-bit word.
/// Public because the experiment configs promise a stable, portable stream:
/// the same (seed, counter) pair gives the same coefficient on every platform.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Counter-based uniform draw in [-1, 1): element `counter` of the stream
/// `seed`. Stateless, so any subset of the stream can be evaluated in any
/// order.
pub fn unit_uniform(seed: u64, counter: u64) -> f64 {
    let word = splitmix64(seed.wrapping_add(counter.wrapping_mul(0x9E3779B97F4A7C15)));
    // Top 53 bits → [0, 1), then shift to [-1, 1).
    (word >> 11) as f64 * (2.0 / 9007199254740992.0) - 1.0
}

/// Sample an initial curve on n nodes (n even, ≥ 8).
///
/// Fails with an argument error for unusable parameters (degenerate circle,
/// mismatched coefficient lists) and with a degeneracy error if the sampled
/// polygon has coincident nodes or nonfinite coordinates.
pub fn make_initial(ic: &InitialCondition, n: usize) -> Result<Curve> {
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "grid size must be even and at least 8, got {n}"
        )));
    }
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let theta: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
    let mut c = Curve::zeros(n);
    match ic {
        InitialCondition::Demo => {
            for (k, &t) in theta.iter().enumerate() {
                let r = 1.0 + 0.25 * (7.0 * t).cos();
                c.x[k] = r * t.cos() + 0.125 * (2.0 * t).cos();
                c.y[k] = r * t.sin() + 0.125 * (2.0 * t).sin();
            }
        }
        InitialCondition::Unlabeled => {
            for (k, &t) in theta.iter().enumerate() {
                c.x[k] = t.cos() + 0.2 * (2.0 * t).cos() - 0.1 * (2.0 * t).sin();
                c.y[k] = t.sin() + 0.2 * (2.0 * t).sin() + 0.1 * (2.0 * t).cos();
            }
        }
        InitialCondition::Labeled { m } => {
            let mf = *m as f64;
            for (k, &t) in theta.iter().enumerate() {
                c.x[k] = (1.0 + 0.25 * (3.0 * t).cos().exp()) * t.cos();
                c.y[k] = (1.0 + 0.25 * (mf * t).sin().exp()) * t.sin();
            }
        }
        InitialCondition::Circle { a, b, c1, c2 } => {
            if a * a + b * b == 0.0 {
                return Err(Error::InvalidArgument(
                    "circle radius is zero: need a² + b² > 0".into(),
                ));
            }
            for (k, &t) in theta.iter().enumerate() {
                c.x[k] = a * t.cos() - b * t.sin() + c1;
                c.y[k] = a * t.sin() + b * t.cos() + c2;
            }
        }
        InitialCondition::Fourier {
            seed,
            modes,
            amplitude,
            decay,
            cos_x,
            sin_x,
            cos_y,
            sin_y,
        } => {
            let lists = [cos_x, sin_x, cos_y, sin_y];
            let explicit = lists.iter().any(|l| !l.is_empty());
            let (cx, sx, cy, sy): (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) = if explicit {
                let len = lists.iter().map(|l| l.len()).max().unwrap();
                let pad = |l: &Vec<f64>| {
                    let mut v = l.clone();
                    v.resize(len, 0.0);
                    v
                };
                (pad(cos_x), pad(sin_x), pad(cos_y), pad(sin_y))
            } else {
                let seed = seed.ok_or_else(|| {
                    Error::InvalidArgument(
                        "fourier initial condition needs a seed or explicit coefficients".into(),
                    )
                })?;
                let gen = |kind: u64, j: usize| {
                    let damp = (j as f64).powf(*decay);
                    amplitude * unit_uniform(seed, (j as u64 - 1) * 4 + kind) / damp
                };
                (
                    (1..=*modes).map(|j| gen(0, j)).collect(),
                    (1..=*modes).map(|j| gen(1, j)).collect(),
                    (1..=*modes).map(|j| gen(2, j)).collect(),
                    (1..=*modes).map(|j| gen(3, j)).collect(),
                )
            };
            for (k, &t) in theta.iter().enumerate() {
                let mut x = t.cos();
                let mut y = t.sin();
                for j in 1..=cx.len() {
                    let (sj, cj) = (j as f64 * t).sin_cos();
                    x += cx[j - 1] * cj + sx[j - 1] * sj;
                    y += cy[j - 1] * cj + sy[j - 1] * sj;
                }
                c.x[k] = x;
                c.y[k] = y;
            }
        }
    }
    if !c.is_finite() {
        return Err(Error::Degenerate(
            "initial curve has nonfinite coordinates".into(),
        ));
    }
    if star_norm(&c) <= 0.0 {
        return Err(Error::Degenerate(
            "initial curve has coincident nodes".into(),
        ));
    }
    Ok(c)
}
