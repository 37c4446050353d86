// Argument validation is written `!(x > 0.0)` rather than `x <= 0.0` on
// purpose: the negated form also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Simulator for a closed elastic filament (a "Peskin loop") immersed in a
//! two-dimensional Stokes flow, written in the boundary-integral formulation.
//!
//! The filament is a closed curve `X(θ)`, θ ∈ [0, 2π), discretized on `N`
//! equispaced nodes. Its motion under its own elastic tension decomposes as
//!
//! ```text
//! ∂ₜX = ΛX + ℛ(X),      Λ = -¼ ℋ ∂_θ   (Fourier symbol -|k|/4),
//! ```
//!
//! where Λ is the leading quarter-derivative term and ℛ collects the smoother
//! remainder of the Stokes single-layer self-interaction. Time stepping treats
//! Λ exactly through its semigroup `e^{tΛ}` and the remainder with a two-stage
//! second-order exponential Runge–Kutta rule; all spatial operators are
//! spectral.
//!
//! Module map:
//! - [`spectral`]: FFT plans and Fourier-multiplier operators (Dₕ, ℋ, Λ, e^{tΛ}).
//! - [`curve`]: grid curves and pointwise diagnostics (area, energy, star norm, …).
//! - [`modes`]: the four translation/dilation/rotation modes, projections, decay fits.
//! - [`biop`]: the boundary-integral kernel, remainder ℛ, full right-hand side,
//!   and off-curve velocity/pressure evaluation.
//! - [`integrator`]: the two-stage step, trajectory driver, and order estimator.
//! - [`init`]: the family of initial curves (demo, unlabeled, labeled(m), circle,
//!   random Fourier).
//! - [`experiments`]: the canned experiment drivers behind the `peskin` CLI.
//! - [`io`]: CSV/JSON writers with a fixed, reproducible float format.
//!
//! # Example
//!
//! A uniformly parametrized circle is a relative equilibrium: the full
//! right-hand side reduces to a rigid translation, so its projection away from
//! the translation modes vanishes to roundoff.
//!
//! ```
//! use peskin::{biop, init, modes, spectral::SpectralPlan};
//!
//! let plan = SpectralPlan::new(32).unwrap();
//! let circle = init::make_initial(
//!     &init::InitialCondition::Circle { a: 1.0, b: 0.0, c1: 0.3, c2: -0.2 },
//!     plan.n(),
//! )
//! .unwrap();
//! let v = biop::rhs(&circle, &plan).unwrap();
//! let residual = modes::project_pi(&v).unwrap();
//! assert!(residual.max_norm() < 1e-12);
//! ```

pub mod biop;
pub mod curve;
pub mod error;
pub mod experiments;
pub mod init;
pub mod integrator;
pub mod io;
pub mod modes;
pub mod spectral;

pub use curve::Curve;
pub use error::{Error, Result};
pub use integrator::{RunConfig, RunOutcome, RunStatus};
pub use spectral::SpectralPlan;
