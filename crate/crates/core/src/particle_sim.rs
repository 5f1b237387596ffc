//! Euler–Maruyama integration of the interacting particle system.
//!
//! `N` angles on `[0, 2π)` evolve by
//!
//! ```text
//! dX_i = -θ/(N α_N) Σ_j W_ij D′(X_i - X_j) dt + √(2/β) dB_i,
//! ```
//!
//! with `W` a [`CouplingMatrix`] and `D` a trigonometric [`Potential`]. The
//! force never forms the O(N²·n) pair sum: expanding
//! `sin(k(X_i - X_j)) = sin kX_i cos kX_j - cos kX_i sin kX_j` turns each
//! mode into two matrix-vector products,
//!
//! ```text
//! F_i = -θ/(N α_N) Σ_k a_k k [sin(kX_i)(W c_k)_i - cos(kX_i)(W s_k)_i],
//! ```
//!
//! where `c_k, s_k` are the per-particle mode vectors, built by the angle
//! addition recurrence from `k = 1`. Sparse couplings (under 10% density)
//! run the products in compressed-row form.
//!
//! Noise is counter-based: the increment for particle `i` at step `t` is a
//! pure function of `(noise_seed, t, i)`, so trajectories are reproducible
//! and insensitive to execution order.

#[cfg(not(feature = "std"))]
use crate::math::FloatMath;
use crate::graphon::CouplingMatrix;
use crate::potential::Potential;
use crate::rng;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

/// One recorded configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub positions: Vec<f64>,
}

/// Everything the integrator needs besides the state itself.
#[derive(Debug, Clone, Copy)]
pub struct SimParams<'a> {
    pub potential: &'a Potential,
    pub coupling: &'a CouplingMatrix,
    /// Interaction strength θ ≥ 0.
    pub theta: f64,
    /// Inverse temperature; `f64::INFINITY` switches the noise off.
    pub beta: f64,
    pub dt: f64,
    pub steps: usize,
    /// Record every this many steps (step 0 and the last step always).
    pub record_stride: usize,
}

/// Uniform initial angles on `[0, 2π)`, keyed by `seed`.
pub fn initial_positions(n: usize, seed: u64) -> Vec<f64> {
    (0..n).map(|i| TAU * rng::uniform(&[seed, i as u64])).collect()
}

/// How to set up the initial configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Independent uniforms on `[0, 2π)`, the disordered state.
    Uniform,
    /// Every particle at the same angle.
    PointMass(f64),
    /// Explicit positions, wrapped into `[0, 2π)`.
    Custom(Vec<f64>),
}

/// Materializes an [`InitialCondition`]; `seed` only matters for `Uniform`.
pub fn init_state(n: usize, seed: u64, condition: &InitialCondition) -> Vec<f64> {
    match condition {
        InitialCondition::Uniform => initial_positions(n, seed),
        InitialCondition::PointMass(u) => vec![wrap(*u); n],
        InitialCondition::Custom(positions) => {
            assert_eq!(positions.len(), n, "custom initial state size mismatch");
            positions.iter().map(|&x| wrap(x)).collect()
        }
    }
}

fn wrap(u: f64) -> f64 {
    let mut w = u % TAU;
    if w < 0.0 {
        w += TAU;
    }
    if w >= TAU {
        w = 0.0;
    }
    w
}

enum ForceKernel<'a> {
    Dense { weights: &'a [f64], n: usize },
    Csr { row_ptr: Vec<usize>, cols: Vec<u32>, vals: Vec<f64> },
}

impl<'a> ForceKernel<'a> {
    fn build(coupling: &'a CouplingMatrix) -> Self {
        let n = coupling.n();
        if coupling.density() >= 0.10 {
            return Self::Dense { weights: coupling.weights(), n };
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..n {
            for j in 0..n {
                let w = coupling.weights()[i * n + j];
                if w != 0.0 {
                    cols.push(j as u32);
                    vals.push(w);
                }
            }
            row_ptr.push(cols.len());
        }
        Self::Csr { row_ptr, cols, vals }
    }

    /// `out = W v`.
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        match self {
            Self::Dense { weights, n } => {
                for i in 0..*n {
                    let row = &weights[i * n..(i + 1) * n];
                    let mut acc = 0.0;
                    for j in 0..*n {
                        acc += row[j] * v[j];
                    }
                    out[i] = acc;
                }
            }
            Self::Csr { row_ptr, cols, vals } => {
                for i in 0..row_ptr.len() - 1 {
                    let mut acc = 0.0;
                    for idx in row_ptr[i]..row_ptr[i + 1] {
                        acc += vals[idx] * v[cols[idx] as usize];
                    }
                    out[i] = acc;
                }
            }
        }
    }
}

struct ForceBuffers {
    c1: Vec<f64>,
    s1: Vec<f64>,
    ck: Vec<f64>,
    sk: Vec<f64>,
    wc: Vec<f64>,
    ws: Vec<f64>,
}

impl ForceBuffers {
    fn new(n: usize) -> Self {
        Self {
            c1: vec![0.0; n],
            s1: vec![0.0; n],
            ck: vec![0.0; n],
            sk: vec![0.0; n],
            wc: vec![0.0; n],
            ws: vec![0.0; n],
        }
    }
}

fn accumulate_drift(
    positions: &[f64],
    potential: &Potential,
    kernel: &ForceKernel,
    prefactor: f64,
    buf: &mut ForceBuffers,
    out: &mut [f64],
) {
    let n = positions.len();
    for x in out.iter_mut() {
        *x = 0.0;
    }
    for i in 0..n {
        let (s, c) = positions[i].sin_cos();
        buf.c1[i] = c;
        buf.s1[i] = s;
        buf.ck[i] = c;
        buf.sk[i] = s;
    }
    for (idx, &a) in potential.coefficients().iter().enumerate() {
        let k = idx + 1;
        if idx > 0 {
            // Angle addition: (c,s)_k = (c,s)_{k-1} ⊕ (c,s)_1.
            for i in 0..n {
                let c = buf.ck[i] * buf.c1[i] - buf.sk[i] * buf.s1[i];
                let s = buf.sk[i] * buf.c1[i] + buf.ck[i] * buf.s1[i];
                buf.ck[i] = c;
                buf.sk[i] = s;
            }
        }
        if a == 0.0 {
            continue;
        }
        kernel.apply(&buf.ck, &mut buf.wc);
        kernel.apply(&buf.sk, &mut buf.ws);
        let coef = prefactor * a * k as f64;
        for i in 0..n {
            out[i] += coef * (buf.sk[i] * buf.wc[i] - buf.ck[i] * buf.ws[i]);
        }
    }
}

/// The drift field `F(X)` at one configuration. This is the reference entry
/// point; [`run`] uses the same kernel internally.
pub fn drift(positions: &[f64], potential: &Potential, coupling: &CouplingMatrix, theta: f64) -> Vec<f64> {
    let n = coupling.n();
    assert_eq!(positions.len(), n);
    let kernel = ForceKernel::build(coupling);
    let prefactor = -theta / (n as f64 * coupling.alpha());
    let mut buf = ForceBuffers::new(n);
    let mut out = vec![0.0; n];
    accumulate_drift(positions, potential, &kernel, prefactor, &mut buf, &mut out);
    out
}

/// Integrates the system from `initial`, drawing noise from `noise_seed`.
/// Returns snapshots at step 0, every `record_stride` steps, and the final
/// step.
pub fn run(params: &SimParams, initial: Vec<f64>, noise_seed: u64) -> Vec<Snapshot> {
    let n = params.coupling.n();
    assert_eq!(initial.len(), n, "initial state size mismatch");
    assert!(params.dt > 0.0 && params.dt.is_finite());
    assert!(params.theta >= 0.0);
    assert!(params.beta > 0.0);
    let stride = params.record_stride.max(1);

    let kernel = ForceKernel::build(params.coupling);
    let prefactor = -params.theta / (n as f64 * params.coupling.alpha());
    // Explicit Euler loses stability when the fastest linearized mode
    // outruns the step: rate ≤ θ max_row_sum/(Nα) Σ a_k k².
    let stiffness: f64 = params.potential.coefficients().iter().enumerate()
        .map(|(idx, a)| a.abs() * ((idx + 1) * (idx + 1)) as f64)
        .sum();
    let rate = params.theta * params.coupling.max_row_sum() / (n as f64 * params.coupling.alpha())
        * stiffness
        * params.dt;
    if rate > 0.5 {
        log::warn!("time step resolves the interaction poorly (rate {rate:.2} > 0.5); expect discretization bias");
    }

    let noise_scale = if params.beta.is_finite() {
        (2.0 / params.beta).sqrt() * params.dt.sqrt()
    } else {
        0.0
    };

    let mut buf = ForceBuffers::new(n);
    let mut force = vec![0.0; n];
    let mut positions = initial;
    let mut snapshots = Vec::with_capacity(params.steps / stride + 2);
    snapshots.push(Snapshot { time: 0.0, positions: positions.clone() });
    for step in 0..params.steps {
        accumulate_drift(&positions, params.potential, &kernel, prefactor, &mut buf, &mut force);
        if noise_scale > 0.0 {
            for i in 0..n {
                let xi = rng::normal(&[noise_seed, step as u64, i as u64]);
                positions[i] = wrap(positions[i] + params.dt * force[i] + noise_scale * xi);
            }
        } else {
            for i in 0..n {
                positions[i] = wrap(positions[i] + params.dt * force[i]);
            }
        }
        let done = step + 1;
        if done % stride == 0 || done == params.steps {
            snapshots.push(Snapshot {
                time: done as f64 * params.dt,
                positions: positions.clone(),
            });
        }
    }
    snapshots
}
