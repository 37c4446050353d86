//! Fourier-multiplier operators on the periodic grid θ_k = kh, h = 2π/N.
//!
//! Conventions, fixed once here and relied on everywhere else:
//!
//! - The forward DFT is unnormalized, `v̂(k) = Σ_j v_j e^{-ikθ_j}`; the inverse
//!   carries the 1/N factor. Wavenumbers are ordered `0, 1, …, N/2, -N/2+1, …, -1`.
//! - Every multiplier zeroes the Nyquist mode k = N/2. The Nyquist bin of a
//!   real signal is real and has no conjugate partner, so an odd symbol like
//!   ik would make the output complex; dropping it keeps all operators
//!   real-for-real and is invisible on resolved data.
//!
//! The operators provided are the spectral derivative Dₕ (symbol ik), the
//! Hilbert transform ℋ (symbol -i·sgn k), the leading evolution operator
//! Λ = -¼ℋ∂_θ (symbol -|k|/4), and its semigroup e^{tΛ} (symbol e^{-t|k|/4}).

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Grid size, node set, and cached FFT plans for one value of N.
///
/// Plans are immutable after construction and the struct is `Send + Sync`, so
/// one plan can serve any number of threads.
pub struct SpectralPlan {
    n: usize,
    h: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralPlan").field("n", &self.n).finish()
    }
}

impl SpectralPlan {
    /// Build a plan for an even grid size `n >= 8`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and at least 8, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(SpectralPlan {
            n,
            h: 2.0 * std::f64::consts::PI / n as f64,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing h = 2π/N.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Grid nodes θ_k = kh, k = 0..N-1.
    pub fn theta(&self) -> Vec<f64> {
        (0..self.n).map(|k| k as f64 * self.h).collect()
    }

    /// Signed wavenumber of DFT bin `j` in the order `0, …, N/2, -N/2+1, …, -1`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        debug_assert!(j < self.n);
        if j <= self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Unnormalized forward DFT of a real signal.
    pub fn forward(&self, v: &[f64]) -> Result<Vec<Complex64>> {
        self.check_len(v.len())?;
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        Ok(buf)
    }

    /// Inverse DFT including the 1/N normalization. Complex output so callers
    /// can inspect the imaginary residue of multiplier pipelines.
    pub fn inverse(&self, spec: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(spec.len())?;
        let mut buf = spec.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        for z in &mut buf {
            *z *= scale;
        }
        Ok(buf)
    }

    /// Spectral derivative Dₕv, symbol ik (Nyquist zeroed).
    pub fn derivative(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply_multiplier(v, |k| Complex64::new(0.0, k as f64))
    }

    /// Periodic Hilbert transform ℋv, symbol -i·sgn k (Nyquist zeroed).
    pub fn hilbert(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply_multiplier(v, |k| Complex64::new(0.0, -(k.signum() as f64)))
    }

    /// Leading evolution operator Λv = -¼ℋ(Dₕv), symbol -|k|/4 (Nyquist zeroed).
    pub fn lambda_op(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.apply_multiplier(v, |k| Complex64::new(-(k.abs() as f64) / 4.0, 0.0))
    }

    /// Semigroup e^{tΛ}v, symbol e^{-t|k|/4} (Nyquist zeroed). Requires t ≥ 0;
    /// the symbol grows for t < 0 and the inverse problem is ill-posed.
    pub fn semigroup(&self, t: f64, v: &[f64]) -> Result<Vec<f64>> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "semigroup time must be nonnegative, got {t}"
            )));
        }
        self.apply_multiplier(v, |k| Complex64::new((-t * k.abs() as f64 / 4.0).exp(), 0.0))
    }

    /// Apply a Fourier multiplier `m(k)` to a real signal, zeroing the Nyquist
    /// bin, and return the real part of the inverse transform.
    fn apply_multiplier(&self, v: &[f64], m: impl Fn(i64) -> Complex64) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        let nyquist = self.n / 2;
        for (j, z) in buf.iter_mut().enumerate() {
            if j == nyquist {
                *z = Complex64::new(0.0, 0.0);
            } else {
                *z *= m(self.wavenumber(j));
            }
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        Ok(buf.iter().map(|z| z.re * scale).collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: len,
            });
        }
        Ok(())
    }
}
