//! Order parameters, interaction energies, and metastability detection.
//!
//! The mode order parameters `r_k = (1/N) Σ_j e^{ikX_j}` compress a particle
//! configuration into the quantities the mean-field theory predicts. Two
//! scalar energies derive from them:
//!
//! * `U = -½ Σ_k |a_k| |r_k|²`, the all-to-all interaction energy written in
//!   order parameters. It is ~0 for scattered states and `-½ Σ|a_k|` at full
//!   synchronization, so downward steps in `U(t)` mark transitions between
//!   metastable states.
//! * `E_graph = 1/(N² α_N) Σ_ij W_ij D(X_i - X_j)`, the energy through the
//!   actual coupling matrix, evaluated per mode as quadratic forms
//!   `c_kᵀ W c_k + s_kᵀ W s_k` rather than by the O(N²) pair sum per mode.
//!   (The α_N is ours: without it the sparse-graph energy vanishes as N
//!   grows, while the drift carries 1/(Nα_N).)
//!
//! Plateau detection turns a `U(t)` series into a sequence of metastable
//! levels: maximal runs whose rolling standard deviation stays below a
//! quarter of the drop threshold, with a transition counted for each
//! consecutive pair of plateaus separated by a drop exceeding the threshold.

#[cfg(not(feature = "std"))]
use crate::math::FloatMath;
use crate::graphon::CouplingMatrix;
use crate::particle_sim::Snapshot;
use crate::potential::Potential;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// `r_k = (1/N) Σ_j e^{ikX_j}` for `k = 1..=k_max`.
pub fn order_parameters(positions: &[f64], k_max: usize) -> Vec<Complex64> {
    let n = positions.len() as f64;
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for &x in positions {
            let (s, c) = (k as f64 * x).sin_cos();
            acc += Complex64::new(c, s);
        }
        out.push(acc / n);
    }
    out
}

/// `U = -½ Σ_k |a_k| |r_k|²` from precomputed order parameters covering
/// modes `1..=n`.
pub fn energy_order_parameter(r: &[Complex64], potential: &Potential) -> f64 {
    let coeffs = potential.coefficients();
    assert!(r.len() >= coeffs.len(), "order parameters must cover every mode");
    -0.5 * coeffs
        .iter()
        .zip(r)
        .map(|(a, rk)| a.abs() * rk.norm_sqr())
        .sum::<f64>()
}

/// `E_graph = 1/(N²α_N) Σ_ij W_ij D(X_i - X_j)` via per-mode quadratic
/// forms.
pub fn graph_interaction_energy(
    positions: &[f64],
    coupling: &CouplingMatrix,
    potential: &Potential,
) -> f64 {
    let n = coupling.n();
    assert_eq!(positions.len(), n);
    let norm = 1.0 / (n as f64 * n as f64 * coupling.alpha());
    let mut c = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut e = 0.0;
    for (idx, &a) in potential.coefficients().iter().enumerate() {
        let k = (idx + 1) as f64;
        for (i, &x) in positions.iter().enumerate() {
            let (si, ci) = (k * x).sin_cos();
            c[i] = ci;
            s[i] = si;
        }
        let mut quad = 0.0;
        for i in 0..n {
            let row = &coupling.weights()[i * n..(i + 1) * n];
            let (mut ac, mut as_) = (0.0, 0.0);
            for j in 0..n {
                ac += row[j] * c[j];
                as_ += row[j] * s[j];
            }
            quad += c[i] * ac + s[i] * as_;
        }
        e -= a * quad * norm;
    }
    e
}

/// Time series of both interaction energies along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub times: Vec<f64>,
    pub u: Vec<f64>,
    pub e_graph: Vec<f64>,
}

/// Evaluates `U` and `E_graph` at every snapshot.
pub fn energy_series(
    snapshots: &[Snapshot],
    coupling: &CouplingMatrix,
    potential: &Potential,
) -> EnergySeries {
    let k_max = potential.mode_count();
    let mut times = Vec::with_capacity(snapshots.len());
    let mut u_series = Vec::with_capacity(snapshots.len());
    let mut e_series = Vec::with_capacity(snapshots.len());
    for snap in snapshots {
        let r = order_parameters(&snap.positions, k_max);
        times.push(snap.time);
        u_series.push(energy_order_parameter(&r, potential));
        e_series.push(graph_interaction_energy(&snap.positions, coupling, potential));
    }
    EnergySeries { times, u: u_series, e_graph: e_series }
}

/// Time aggregates of an [`EnergySeries`] over `t ≥ t_from`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAggregate {
    pub u_mean: f64,
    pub u_min: f64,
    pub u_max: f64,
    pub e_graph_mean: f64,
}

/// Trapezoid time averages and pointwise extrema of the tail `t ≥ t_from`.
/// Falls back to the final sample if fewer than two remain.
pub fn aggregate_energy(series: &EnergySeries, t_from: f64) -> EnergyAggregate {
    let start = series.times.partition_point(|&t| t < t_from);
    let times = &series.times[start..];
    let u = &series.u[start..];
    let e = &series.e_graph[start..];
    assert!(!series.times.is_empty(), "empty series");
    if times.len() < 2 {
        let last = *series.u.last().unwrap();
        return EnergyAggregate {
            u_mean: last,
            u_min: last,
            u_max: last,
            e_graph_mean: *series.e_graph.last().unwrap(),
        };
    }
    let span = times[times.len() - 1] - times[0];
    let (mut u_acc, mut e_acc) = (0.0, 0.0);
    for i in 1..times.len() {
        let w = times[i] - times[i - 1];
        u_acc += 0.5 * w * (u[i] + u[i - 1]);
        e_acc += 0.5 * w * (e[i] + e[i - 1]);
    }
    let mut u_min = f64::INFINITY;
    let mut u_max = f64::NEG_INFINITY;
    for &v in u {
        u_min = u_min.min(v);
        u_max = u_max.max(v);
    }
    EnergyAggregate {
        u_mean: u_acc / span,
        u_min,
        u_max,
        e_graph_mean: e_acc / span,
    }
}

/// Empirical density on `bins` uniform arcs of the circle, normalized so
/// that `Σ density · (2π/bins) = 1`.
pub fn empirical_histogram(positions: &[f64], bins: usize) -> Vec<f64> {
    assert!(bins >= 2);
    assert!(!positions.is_empty());
    let tau = core::f64::consts::TAU;
    let mut counts = vec![0.0; bins];
    for &x in positions {
        let mut frac = (x / tau) % 1.0;
        if frac < 0.0 {
            frac += 1.0;
        }
        counts[((frac * bins as f64) as usize).min(bins - 1)] += 1.0;
    }
    let scale = bins as f64 / (tau * positions.len() as f64);
    counts.iter_mut().for_each(|c| *c *= scale);
    counts
}

/// A maximal quiet stretch of a series: sample range `[start, end]`
/// (inclusive) and its mean level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub start: usize,
    pub end: usize,
    pub level: f64,
}

/// Finds metastable plateaus: maximal runs in which every length-`window`
/// rolling standard deviation stays below `drop_threshold / 4`.
pub fn detect_plateaus(values: &[f64], window: usize, drop_threshold: f64) -> Vec<Plateau> {
    assert!(window >= 2, "window must cover at least two samples");
    if values.len() < window {
        return Vec::new();
    }
    // Prefix sums make each window's mean and variance O(1).
    let mut sum = vec![0.0; values.len() + 1];
    let mut sum_sq = vec![0.0; values.len() + 1];
    for (i, &v) in values.iter().enumerate() {
        sum[i + 1] = sum[i] + v;
        sum_sq[i + 1] = sum_sq[i] + v * v;
    }
    let wf = window as f64;
    let quiet: Vec<bool> = (0..=values.len() - window)
        .map(|i| {
            let mean = (sum[i + window] - sum[i]) / wf;
            let var = ((sum_sq[i + window] - sum_sq[i]) / wf - mean * mean).max(0.0);
            var.sqrt() < drop_threshold / 4.0
        })
        .collect();
    let mut plateaus = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..=quiet.len() {
        match (run_start, i < quiet.len() && quiet[i]) {
            (None, true) => run_start = Some(i),
            (Some(s), false) => {
                let end = i - 1 + window - 1;
                let level = (sum[end + 1] - sum[s]) / (end + 1 - s) as f64;
                plateaus.push(Plateau { start: s, end, level });
                run_start = None;
            }
            _ => {}
        }
    }
    plateaus
}

/// One detected drop between consecutive plateaus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub t_start: f64,
    pub t_end: f64,
    pub level_before: f64,
    pub level_after: f64,
}

/// Plateau-to-plateau drops larger than `drop_threshold`, with the times of
/// the bracketing plateau edges.
pub fn detect_transitions(
    times: &[f64],
    values: &[f64],
    window: usize,
    drop_threshold: f64,
) -> Vec<Transition> {
    assert_eq!(times.len(), values.len());
    let plateaus = detect_plateaus(values, window, drop_threshold);
    plateaus
        .windows(2)
        .filter(|w| w[0].level - w[1].level > drop_threshold)
        .map(|w| Transition {
            t_start: times[w[0].end],
            t_end: times[w[1].start],
            level_before: w[0].level,
            level_after: w[1].level,
        })
        .collect()
}

/// Number of consecutive plateau pairs whose level drops by more than
/// `drop_threshold`.
pub fn count_transitions(plateaus: &[Plateau], drop_threshold: f64) -> usize {
    plateaus
        .windows(2)
        .filter(|w| w[0].level - w[1].level > drop_threshold)
        .count()
}

/// Counts clusters: circular histogram bins (smoothed over 3 neighbors)
/// whose density exceeds twice the uniform level, merged into connected
/// arcs.
pub fn count_peaks(positions: &[f64], bins: usize) -> usize {
    assert!(bins >= 4);
    let density = empirical_histogram(positions, bins);
    let uniform = 1.0 / core::f64::consts::TAU;
    let above: Vec<bool> = (0..bins)
        .map(|b| {
            let smoothed =
                (density[(b + bins - 1) % bins] + density[b] + density[(b + 1) % bins]) / 3.0;
            smoothed > 2.0 * uniform
        })
        .collect();
    if above.iter().all(|&x| x) {
        return 1;
    }
    // Count rising edges along the circle.
    (0..bins)
        .filter(|&b| above[b] && !above[(b + bins - 1) % bins])
        .count()
}
