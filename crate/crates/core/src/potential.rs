//! Trigonometric interaction potentials.
//!
//! The pair interaction is the finite cosine sum
//!
//! ```text
//! D(u) = -Σ_{k=1..n} a_k cos(ku),        u ∈ [0, 2π),
//! ```
//!
//! so the force between two oscillators at angular separation `u` is
//! `-D′(u) = -Σ a_k k sin(ku)`. The sign convention keeps the classical
//! Kuramoto model at `a = [1]`: `D(u) = -cos(u)` attracts, and positive
//! higher coefficients add shorter-wavelength attraction channels.
//!
//! In Fourier terms `D̂(k) = ∫ D(u) cos(ku) du = -π a_k`, so the potential is
//! H-stable (no finite-temperature transition) exactly when every `a_k ≤ 0`.

#[cfg(not(feature = "std"))]
use crate::math::FloatMath;
use alloc::vec::Vec;

/// A potential `D(u) = -Σ_{k=1..n} a_k cos(ku)`, stored as `[a_1, ..., a_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    coefficients: Vec<f64>,
}

impl Potential {
    /// Builds the potential from `[a_1, ..., a_n]`.
    pub fn new(coefficients: Vec<f64>) -> Self {
        Self { coefficients }
    }

    /// The classical Kuramoto interaction, `D(u) = -cos(u)`.
    pub fn kuramoto() -> Self {
        Self::new(alloc::vec![1.0])
    }

    /// The coefficients `[a_1, ..., a_n]`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Number of Fourier modes `n` in the sum.
    pub fn mode_count(&self) -> usize {
        self.coefficients.len()
    }

    /// `D(u) = -Σ a_k cos(ku)`.
    pub fn eval(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, &a) in self.coefficients.iter().enumerate() {
            let k = (idx + 1) as f64;
            acc -= a * (k * u).cos();
        }
        acc
    }

    /// `D′(u) = Σ a_k k sin(ku)`.
    pub fn derivative(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, &a) in self.coefficients.iter().enumerate() {
            let k = (idx + 1) as f64;
            acc += a * k * (k * u).sin();
        }
        acc
    }

    /// Cosine-basis Fourier coefficient `D̂(k) = ∫_0^{2π} D(u) cos(ku) du`,
    /// which is `-π a_k` for `1 ≤ k ≤ n` and zero otherwise (`k ≥ 1`).
    pub fn fourier_coefficient(&self, k: usize) -> f64 {
        assert!(k >= 1, "Fourier index starts at 1");
        match self.coefficients.get(k - 1) {
            Some(&a) => -core::f64::consts::PI * a,
            None => 0.0,
        }
    }

    /// H-stability: `D̂(k) ≥ 0` for all `k`, i.e. every `a_k ≤ 0`. H-stable
    /// potentials admit no phase transition at any temperature.
    pub fn is_h_stable(&self) -> bool {
        self.coefficients.iter().all(|&a| a <= 0.0)
    }
}
