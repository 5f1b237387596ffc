//! Fourier × grid solver for the graphon McKean–Vlasov equation.
//!
//! The mean-field density `ρ(u, x, t)` on `[0,2π) × [0,1]` obeys
//!
//! ```text
//! ∂_t ρ = θ ∂_u(ρ ∂_u Φ) + β⁻¹ ∂_u² ρ,
//! Φ(u,x) = ∫∫ W(x,y) D(u-v) ρ(v,y) dv dy.
//! ```
//!
//! In `u` the density is a truncated Fourier series,
//! `2πρ = 1 + Σ_{j=1..M} A_j(x) cos(ju) + B_j(x) sin(ju)`; in `x` the
//! coefficients live on the same cell grid as the discretized graphon. The
//! interaction needs only the potential's `n` modes:
//! `Φ = -Σ_k a_k [C_k(x) cos ku + S_k(x) sin ku]` with `C_k = (L A_k)/2`,
//! `S_k = (L B_k)/2`, where `L` is the kernel operator from [`spectral`].
//!
//! The transport term is evaluated pseudospectrally on `n_u = 4M` points
//! (enough to alias nothing: the integrand `ρ ∂_uΦ` has bandwidth at most
//! `2M`), and diffusion is integrated exactly per mode with the factor
//! `e^{-β⁻¹ j² dt}`, leaving only the transport explicit. Linearizing about
//! the flat state recovers the dispersion relation
//! `λ_rate = j²(θ a_j λ/2 - β⁻¹)` on kernel eigenfunctions, which ties the
//! solver to the threshold formulas.
//!
//! Stationary states come from the damped Gibbs fixed-point map
//! `ρ ∝ exp(βθ Σ_k a_k [C_k cos ku + S_k sin ku])`, the zero-flux solution
//! of the same equation. The free energy
//! `F = β⁻¹ ∫∫ ρ ln ρ + (θ/2) ∫∫ ρ Φ` decreases along trajectories and is
//! reported with both terms separated.

#[cfg(not(feature = "std"))]
use crate::math::FloatMath;
use crate::graphon::Graphon;
use crate::potential::Potential;
use crate::spectral::apply_kernel;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

/// Discretization and physical parameters of one PDE setup.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeParams {
    /// Fourier modes kept in `u`.
    pub modes: usize,
    /// Cells in the graphon coordinate `x`.
    pub x_cells: usize,
    pub dt: f64,
    pub beta: f64,
    pub theta: f64,
}

/// Most negative density value the mode truncation is allowed to produce.
/// Spectral truncation of a sharp peak rings slightly below zero; past this
/// the state no longer represents a probability density.
pub const REALIZABILITY_TOLERANCE: f64 = 1e-6;

/// Ways a deterministic solve can fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdeError {
    /// A coefficient left the trust region (|coef| > 1e3) during evolution.
    BlowUp { time: f64 },
    /// The fixed-point iteration did not reach its tolerance.
    NoConvergence { residual: f64 },
    /// The density dipped below `-REALIZABILITY_TOLERANCE` somewhere.
    Unrealizable { time: f64, min_density: f64 },
}

impl core::fmt::Display for PdeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::BlowUp { time } => write!(f, "coefficients blew up at t = {time}"),
            Self::NoConvergence { residual } => {
                write!(f, "fixed-point iteration stalled at residual {residual:e}")
            }
            Self::Unrealizable { time, min_density } => write!(
                f,
                "density reached {min_density:e} at t = {time}, below the realizability tolerance"
            ),
        }
    }
}

impl core::error::Error for PdeError {}

/// Coefficient state: `a[(j-1)·m + xi]` holds `A_j(x_i)`, likewise `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeState {
    modes: usize,
    x_cells: usize,
    pub time: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl PdeState {
    /// The flat density `ρ = 1/2π`.
    pub fn uniform(modes: usize, x_cells: usize) -> Self {
        Self {
            modes,
            x_cells,
            time: 0.0,
            a: vec![0.0; modes * x_cells],
            b: vec![0.0; modes * x_cells],
        }
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn x_cells(&self) -> usize {
        self.x_cells
    }

    pub fn cos_coefficient(&self, j: usize, xi: usize) -> f64 {
        self.a[(j - 1) * self.x_cells + xi]
    }

    pub fn sin_coefficient(&self, j: usize, xi: usize) -> f64 {
        self.b[(j - 1) * self.x_cells + xi]
    }

    /// Overwrites `A_j(x)` with the given per-cell values.
    pub fn set_cos(&mut self, j: usize, values: &[f64]) {
        assert_eq!(values.len(), self.x_cells);
        self.a[(j - 1) * self.x_cells..j * self.x_cells].copy_from_slice(values);
    }

    /// Overwrites `B_j(x)` with the given per-cell values.
    pub fn set_sin(&mut self, j: usize, values: &[f64]) {
        assert_eq!(values.len(), self.x_cells);
        self.b[(j - 1) * self.x_cells..j * self.x_cells].copy_from_slice(values);
    }

    /// Root-mean-square amplitude of mode `j` over `x`, both phases.
    pub fn mode_l2(&self, j: usize) -> f64 {
        let m = self.x_cells;
        let mut acc = 0.0;
        for xi in 0..m {
            let a = self.a[(j - 1) * m + xi];
            let b = self.b[(j - 1) * m + xi];
            acc += a * a + b * b;
        }
        (acc / m as f64).sqrt()
    }

    /// Density value `ρ(u, x_i)`.
    pub fn value_at(&self, u: f64, xi: usize) -> f64 {
        let m = self.x_cells;
        let mut acc = 1.0;
        for j in 1..=self.modes {
            let (s, c) = (j as f64 * u).sin_cos();
            acc += self.a[(j - 1) * m + xi] * c + self.b[(j - 1) * m + xi] * s;
        }
        acc / TAU
    }

    fn max_abs_coefficient(&self) -> f64 {
        let mut best = 0.0f64;
        for &v in self.a.iter().chain(self.b.iter()) {
            best = best.max(v.abs());
        }
        best
    }
}

/// One recorded instant of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeSample {
    pub time: f64,
    pub free_energy: f64,
    pub entropy: f64,
    pub interaction: f64,
    /// `mode_l2` for `j = 1..=modes`.
    pub mode_amplitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdeTrajectory {
    pub samples: Vec<PdeSample>,
    pub final_state: PdeState,
}

/// Outcome of the stationary fixed-point solve.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryResult {
    pub state: PdeState,
    pub iterations: usize,
    /// `max |rhs|` of the evolution equations at the returned state.
    pub residual: f64,
}

/// Precomputed kernel and trigonometric tables for one configuration.
pub struct PdeProblem<'a> {
    potential: &'a Potential,
    params: PdeParams,
    kernel: Vec<f64>,
    n_u: usize,
    cos_table: Vec<f64>,
    sin_table: Vec<f64>,
}

struct Scratch {
    /// `C_k` and `S_k` for the potential modes, each `n × m`.
    c: Vec<f64>,
    s: Vec<f64>,
    lk: Vec<f64>,
    rho: Vec<f64>,
    dphi: Vec<f64>,
    da: Vec<f64>,
    db: Vec<f64>,
}

impl<'a> PdeProblem<'a> {
    pub fn new(potential: &'a Potential, graphon: &Graphon, params: PdeParams) -> Self {
        Self::with_kernel(potential, graphon.discretize(params.x_cells), params)
    }

    /// Builds the problem over an explicit `x_cells × x_cells` kernel.
    pub fn with_kernel(potential: &'a Potential, kernel: Vec<f64>, params: PdeParams) -> Self {
        assert!(params.modes >= potential.mode_count() + 1, "need more Fourier modes than the potential");
        assert!(params.x_cells >= 1 && params.dt > 0.0 && params.beta > 0.0 && params.theta >= 0.0);
        assert_eq!(kernel.len(), params.x_cells * params.x_cells);
        let n_u = 4 * params.modes;
        let mut cos_table = vec![0.0; params.modes * n_u];
        let mut sin_table = vec![0.0; params.modes * n_u];
        for j in 1..=params.modes {
            for r in 0..n_u {
                let u = TAU * r as f64 / n_u as f64;
                let (s, c) = (j as f64 * u).sin_cos();
                cos_table[(j - 1) * n_u + r] = c;
                sin_table[(j - 1) * n_u + r] = s;
            }
        }
        Self { potential, params, kernel, n_u, cos_table, sin_table }
    }

    pub fn params(&self) -> PdeParams {
        self.params
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    fn scratch(&self) -> Scratch {
        let n = self.potential.mode_count();
        let m = self.params.x_cells;
        Scratch {
            c: vec![0.0; n * m],
            s: vec![0.0; n * m],
            lk: vec![0.0; m],
            rho: vec![0.0; self.n_u],
            dphi: vec![0.0; self.n_u],
            da: vec![0.0; self.params.modes * m],
            db: vec![0.0; self.params.modes * m],
        }
    }

    /// Fills `scratch.c/s` with `C_k = (L A_k)/2`, `S_k = (L B_k)/2`.
    fn interaction_fields(&self, state: &PdeState, scratch: &mut Scratch) {
        let m = self.params.x_cells;
        for k in 1..=self.potential.mode_count() {
            apply_kernel(&self.kernel, m, &state.a[(k - 1) * m..k * m], &mut scratch.lk);
            for xi in 0..m {
                scratch.c[(k - 1) * m + xi] = 0.5 * scratch.lk[xi];
            }
            apply_kernel(&self.kernel, m, &state.b[(k - 1) * m..k * m], &mut scratch.lk);
            for xi in 0..m {
                scratch.s[(k - 1) * m + xi] = 0.5 * scratch.lk[xi];
            }
        }
    }

    /// Transport tendencies `T_A = θ j Ĝ^s_j`, `T_B = -θ j Ĝ^c_j` into
    /// `scratch.da/db` (diffusion not included).
    fn transport(&self, state: &PdeState, scratch: &mut Scratch) {
        let m = self.params.x_cells;
        let mm = self.params.modes;
        let n_u = self.n_u;
        self.interaction_fields(state, scratch);
        for xi in 0..m {
            for r in 0..n_u {
                scratch.rho[r] = 1.0;
                scratch.dphi[r] = 0.0;
            }
            for j in 1..=mm {
                let a = state.a[(j - 1) * m + xi];
                let b = state.b[(j - 1) * m + xi];
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                let cos_row = &self.cos_table[(j - 1) * n_u..j * n_u];
                let sin_row = &self.sin_table[(j - 1) * n_u..j * n_u];
                for r in 0..n_u {
                    scratch.rho[r] += a * cos_row[r] + b * sin_row[r];
                }
            }
            for (idx, &ak) in self.potential.coefficients().iter().enumerate() {
                let k = idx + 1;
                let ck = scratch.c[idx * m + xi];
                let sk = scratch.s[idx * m + xi];
                if ak == 0.0 || (ck == 0.0 && sk == 0.0) {
                    continue;
                }
                let coef = ak * k as f64;
                let cos_row = &self.cos_table[idx * n_u..k * n_u];
                let sin_row = &self.sin_table[idx * n_u..k * n_u];
                for r in 0..n_u {
                    scratch.dphi[r] += coef * (ck * sin_row[r] - sk * cos_row[r]);
                }
            }
            for r in 0..n_u {
                scratch.rho[r] *= scratch.dphi[r];
            }
            let theta = self.params.theta;
            let norm = 2.0 / n_u as f64;
            for j in 1..=mm {
                let cos_row = &self.cos_table[(j - 1) * n_u..j * n_u];
                let sin_row = &self.sin_table[(j - 1) * n_u..j * n_u];
                let (mut gc, mut gs) = (0.0, 0.0);
                for r in 0..n_u {
                    gc += scratch.rho[r] * cos_row[r];
                    gs += scratch.rho[r] * sin_row[r];
                }
                gc *= norm;
                gs *= norm;
                scratch.da[(j - 1) * m + xi] = theta * j as f64 * gs;
                scratch.db[(j - 1) * m + xi] = -theta * j as f64 * gc;
            }
        }
    }
}

/// Smallest density value over the dealiased `u`-grid and all `x`-cells.
pub fn min_density(problem: &PdeProblem, state: &PdeState) -> f64 {
    let m = problem.params.x_cells;
    let n_u = problem.n_u;
    let mut worst = f64::INFINITY;
    for xi in 0..m {
        for r in 0..n_u {
            let mut rho_t = 1.0;
            for j in 1..=problem.params.modes {
                rho_t += state.a[(j - 1) * m + xi] * problem.cos_table[(j - 1) * n_u + r]
                    + state.b[(j - 1) * m + xi] * problem.sin_table[(j - 1) * n_u + r];
            }
            worst = worst.min(rho_t);
        }
    }
    worst / TAU
}

fn check_realizable(problem: &PdeProblem, state: &PdeState) -> Result<(), PdeError> {
    let min = min_density(problem, state);
    if min < -REALIZABILITY_TOLERANCE {
        return Err(PdeError::Unrealizable { time: state.time, min_density: min });
    }
    Ok(())
}

/// `max |∂_t coefficient|` at this state: zero exactly at stationary points.
pub fn stationarity_residual(problem: &PdeProblem, state: &PdeState) -> f64 {
    let mut scratch = problem.scratch();
    problem.transport(state, &mut scratch);
    let m = problem.params.x_cells;
    let inv_beta = 1.0 / problem.params.beta;
    let mut worst = 0.0f64;
    for j in 1..=problem.params.modes {
        let damp = inv_beta * (j * j) as f64;
        for xi in 0..m {
            let da = scratch.da[(j - 1) * m + xi] - damp * state.a[(j - 1) * m + xi];
            let db = scratch.db[(j - 1) * m + xi] - damp * state.b[(j - 1) * m + xi];
            worst = worst.max(da.abs()).max(db.abs());
        }
    }
    worst
}

/// Free energy `F = β⁻¹ S + E_int` with `S = ∫∫ ρ ln ρ` and
/// `E_int = -(θ/8) Σ_k a_k [⟨A_k, L A_k⟩ + ⟨B_k, L B_k⟩]`.
pub fn free_energy(problem: &PdeProblem, state: &PdeState) -> (f64, f64, f64) {
    let m = problem.params.x_cells;
    let n_u = problem.n_u;
    let mut entropy = 0.0;
    let mut clamped = 0usize;
    let floor = TAU * 1e-12;
    for xi in 0..m {
        for r in 0..n_u {
            let mut rho_t = 1.0;
            for j in 1..=problem.params.modes {
                rho_t += state.a[(j - 1) * m + xi] * problem.cos_table[(j - 1) * n_u + r]
                    + state.b[(j - 1) * m + xi] * problem.sin_table[(j - 1) * n_u + r];
            }
            if rho_t < floor {
                rho_t = floor;
                clamped += 1;
            }
            entropy += rho_t * (rho_t / TAU).ln();
        }
    }
    entropy /= (m * n_u) as f64;
    if clamped > 0 {
        log::debug!("entropy grid clamped {clamped} negative density values");
    }
    let mut scratch = problem.scratch();
    problem.interaction_fields(state, &mut scratch);
    let mut interaction = 0.0;
    for (idx, &ak) in problem.potential.coefficients().iter().enumerate() {
        let mut quad = 0.0;
        for xi in 0..m {
            quad += state.a[idx * m + xi] * scratch.c[idx * m + xi]
                + state.b[idx * m + xi] * scratch.s[idx * m + xi];
        }
        // ⟨m^c_k, L m^c_k⟩ = Σ (A_k/2)·C_k / m = quad/(2m), so the
        // -(θ/2) a_k prefactor becomes -(θ/4) a_k quad/m.
        interaction -= problem.params.theta / 4.0 * ak * quad / m as f64;
    }
    let total = entropy / problem.params.beta + interaction;
    (total, entropy, interaction)
}

fn sample(problem: &PdeProblem, state: &PdeState) -> PdeSample {
    let (total, entropy, interaction) = free_energy(problem, state);
    PdeSample {
        time: state.time,
        free_energy: total,
        entropy,
        interaction,
        mode_amplitudes: (1..=problem.params.modes).map(|j| state.mode_l2(j)).collect(),
    }
}

/// Integrates `steps` IMEX steps from `state`, recording every
/// `record_stride` steps plus the endpoints. Realizability is monitored at
/// every recorded instant (including the initial state).
pub fn evolve(
    problem: &PdeProblem,
    state: PdeState,
    steps: usize,
    record_stride: usize,
) -> Result<PdeTrajectory, PdeError> {
    assert_eq!(state.modes, problem.params.modes);
    assert_eq!(state.x_cells, problem.params.x_cells);
    let stride = record_stride.max(1);
    let m = problem.params.x_cells;
    let dt = problem.params.dt;
    let decay: Vec<f64> = (1..=problem.params.modes)
        .map(|j| (-dt * (j * j) as f64 / problem.params.beta).exp())
        .collect();
    let mut scratch = problem.scratch();
    let mut state = state;
    let t0 = state.time;
    check_realizable(problem, &state)?;
    let mut samples = vec![sample(problem, &state)];
    for step in 0..steps {
        problem.transport(&state, &mut scratch);
        for j in 0..problem.params.modes {
            let d = decay[j];
            for xi in 0..m {
                let idx = j * m + xi;
                state.a[idx] = d * (state.a[idx] + dt * scratch.da[idx]);
                state.b[idx] = d * (state.b[idx] + dt * scratch.db[idx]);
            }
        }
        state.time = t0 + (step + 1) as f64 * dt;
        if state.max_abs_coefficient() > 1e3 {
            return Err(PdeError::BlowUp { time: state.time });
        }
        if (step + 1) % stride == 0 || step + 1 == steps {
            check_realizable(problem, &state)?;
            samples.push(sample(problem, &state));
        }
    }
    Ok(PdeTrajectory { samples, final_state: state })
}

/// Damped Gibbs fixed-point iteration for stationary states:
/// `ρ_next ∝ exp(βθ Σ_k a_k [C_k cos ku + S_k sin ku])`, mixed into the
/// current state with weight `damping`. Converges when the undamped update
/// moves no coefficient by more than `tol`.
pub fn stationary(
    problem: &PdeProblem,
    init: PdeState,
    max_iter: usize,
    damping: f64,
    tol: f64,
) -> Result<StationaryResult, PdeError> {
    assert!(damping > 0.0 && damping <= 1.0);
    assert_eq!(init.modes, problem.params.modes);
    assert_eq!(init.x_cells, problem.params.x_cells);
    let m = problem.params.x_cells;
    let mm = problem.params.modes;
    let n_u = problem.n_u;
    let bt = problem.params.beta * problem.params.theta;
    let mut scratch = problem.scratch();
    let mut state = init;
    let mut weights = vec![0.0; n_u];
    for iter in 1..=max_iter {
        problem.interaction_fields(&state, &mut scratch);
        let mut delta = 0.0f64;
        for xi in 0..m {
            for r in 0..n_u {
                let mut expo = 0.0;
                for (idx, &ak) in problem.potential.coefficients().iter().enumerate() {
                    expo += ak
                        * (scratch.c[idx * m + xi] * problem.cos_table[idx * n_u + r]
                            + scratch.s[idx * m + xi] * problem.sin_table[idx * n_u + r]);
                }
                weights[r] = (bt * expo).min(700.0).exp();
            }
            let mean = weights.iter().sum::<f64>() / n_u as f64;
            for j in 1..=mm {
                let cos_row = &problem.cos_table[(j - 1) * n_u..j * n_u];
                let sin_row = &problem.sin_table[(j - 1) * n_u..j * n_u];
                let (mut pa, mut pb) = (0.0, 0.0);
                for r in 0..n_u {
                    pa += weights[r] * cos_row[r];
                    pb += weights[r] * sin_row[r];
                }
                pa *= 2.0 / (n_u as f64 * mean);
                pb *= 2.0 / (n_u as f64 * mean);
                let idx = (j - 1) * m + xi;
                delta = delta.max((pa - state.a[idx]).abs()).max((pb - state.b[idx]).abs());
                state.a[idx] += damping * (pa - state.a[idx]);
                state.b[idx] += damping * (pb - state.b[idx]);
            }
        }
        if !delta.is_finite() {
            return Err(PdeError::NoConvergence { residual: f64::INFINITY });
        }
        if delta <= tol {
            let residual = stationarity_residual(problem, &state);
            return Ok(StationaryResult { state, iterations: iter, residual });
        }
    }
    let residual = stationarity_residual(problem, &state);
    Err(PdeError::NoConvergence { residual })
}

/// Growth rate of mode `j` about `base`: seeds `A_j += ε` uniformly,
/// evolves past `t_relax` to land on the dominant eigendirection, then fits
/// the log-amplitude slope over a further `t_fit`.
pub fn mode_growth_rate(
    problem: &PdeProblem,
    base: &PdeState,
    j: usize,
    epsilon: f64,
    t_relax: f64,
    t_fit: f64,
) -> Result<f64, PdeError> {
    let m = problem.params.x_cells;
    let mut state = base.clone();
    state.time = 0.0;
    for xi in 0..m {
        state.a[(j - 1) * m + xi] += epsilon;
    }
    let dt = problem.params.dt;
    let relax_steps = (t_relax / dt).round() as usize;
    let fit_steps = (t_fit / dt).round() as usize;
    let relaxed = evolve(problem, state, relax_steps, relax_steps.max(1))?;
    let start = relaxed.final_state;
    let a0 = start.mode_l2(j);
    let t_start = start.time;
    let fitted = evolve(problem, start, fit_steps, fit_steps.max(1))?;
    let a1 = fitted.final_state.mode_l2(j);
    let span = fitted.final_state.time - t_start;
    if a0 <= 0.0 || a1 <= 0.0 || span <= 0.0 {
        return Err(PdeError::NoConvergence { residual: f64::NAN });
    }
    Ok((a1 / a0).ln() / span)
}
