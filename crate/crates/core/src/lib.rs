//! Weakly interacting diffusions on large random graphs, and their mean-field
//! limits.
//!
//! The crate covers three coupled layers of the same model:
//!
//! * **Particle level** — `N` angular variables on the circle driven by the
//!   pairwise force `−θ/(N α_N) Σ_j W_{N,ij} D′(X_i − X_j)` plus thermal noise
//!   of strength `σ = √(2/β)`, integrated with Euler–Maruyama
//!   ([`particle_sim`]). The coupling matrix comes from one of three graphon
//!   families (Erdős–Rényi, small-world, power-law) discretized or sampled in
//!   [`graphon`].
//! * **Mean-field level** — the McKean–Vlasov equation
//!   `∂_t ρ = θ ∂_u(ρ ∂_u(W ⋆ D ⋆ ρ)) + β⁻¹ ∂_u² ρ` on `[0,2π] × [0,1]`,
//!   solved with a Fourier-in-`u` × grid-in-`x` semi-discretization, plus the
//!   Gibbs fixed-point map for stationary states and the free energy that the
//!   flow dissipates ([`pde`]).
//! * **Bifurcation level** — critical interaction strengths at which the
//!   uniform state and, later, the even two-peak branch lose stability,
//!   computed from graphon spectra ([`spectral`]) and Bessel-ratio
//!   self-consistency equations ([`specialfn`], [`bifurcation`]).
//!
//! [`observables`] supplies the order parameters `r_k`, interaction energies,
//! and plateau detection used to summarize simulations. Everything here is
//! deterministic given the caller's seeds: randomness flows through the
//! counter-based streams in [`rng`].
//!
//! The crate is `no_std`-compatible (with `alloc`): disable the default `std`
//! feature and enable `libm` to route float math through software
//! implementations.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("enable either the `std` feature or the `libm` feature for f64 math");

pub mod bifurcation;
pub mod graphon;
mod math;
pub mod observables;
pub mod particle_sim;
pub mod pde;
pub mod potential;
pub mod rng;
pub mod specialfn;
pub mod spectral;
