//! Graphon families and their finite couplings.
//!
//! A graphon `W: [0,1]² → [0,∞)` encodes the edge structure of a growing
//! graph sequence. Three families are covered:
//!
//! * **Erdős–Rényi**: `W ≡ p`, the dense homogeneous benchmark.
//! * **Small-world**: `W(x,y) = 2ph + (1-p) 1{d(x,y) ≤ h}` with `d` the
//!   circle distance, the annealed Watts–Strogatz kernel with rewiring
//!   probability `p` and bandwidth `h`.
//! * **Power-law**: `W(x,y) = (xy)^{-γ}`, an unbounded rank-one kernel
//!   paired with the sparse scaling `α_N = N^{-α}`, `0 < γ < α < 1`.
//!
//! Finite systems use the cell-average discretization
//! `W_{N,ij} = N² ∫∫_{cell_i × cell_j} W`, computed in closed form for all
//! three families (for small-world this is what makes the constant vector an
//! exact eigenvector of the discrete operator). Particle simulations couple
//! through a [`CouplingMatrix`]: either the annealed matrix `W_N` itself, a
//! quenched Bernoulli graph with edge probability `min(1, α_N W_{N,ij})`, or
//! a literal ring-rewiring graph for the small-world family.

#[cfg(not(feature = "std"))]
use crate::math::FloatMath;
use crate::rng;
use alloc::vec;
use alloc::vec::Vec;

/// One of the three graphon families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Graphon {
    ErdosRenyi { p: f64 },
    SmallWorld { p: f64, h: f64 },
    PowerLaw { gamma: f64, alpha: f64 },
}

/// Parameter ranges each family accepts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphonError {
    ProbabilityOutOfRange(f64),
    BandwidthOutOfRange(f64),
    ExponentsOutOfOrder { gamma: f64, alpha: f64 },
    NotSmallWorld,
    DeterministicPowerLaw,
}

impl core::fmt::Display for GraphonError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::ProbabilityOutOfRange(p) => write!(f, "probability {p} outside [0, 1]"),
            Self::BandwidthOutOfRange(h) => write!(f, "bandwidth {h} outside (0, 1/2]"),
            Self::ExponentsOutOfOrder { gamma, alpha } => {
                write!(f, "power-law exponents must satisfy 0 < gamma < alpha < 1, got gamma = {gamma}, alpha = {alpha}")
            }
            Self::NotSmallWorld => write!(f, "ring rewiring is defined only for the small-world family"),
            Self::DeterministicPowerLaw => write!(
                f,
                "deterministic weights are ill-defined for the power-law family: cell averages exceed 1 near the origin and only enter through clipped Bernoulli probabilities"
            ),
        }
    }
}

impl core::error::Error for GraphonError {}

/// Finite coupling: the drift on particle `i` is
/// `-θ/(n·alpha) Σ_j weights[i,j] D′(X_i - X_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    n: usize,
    alpha: f64,
    weights: Vec<f64>,
}

impl CouplingMatrix {
    /// Wraps an explicit row-major `n × n` weight matrix.
    pub fn new(n: usize, alpha: f64, weights: Vec<f64>) -> Self {
        assert_eq!(weights.len(), n * n, "weight matrix must be n x n");
        assert!(alpha > 0.0, "scaling must be positive");
        Self { n, alpha, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The sparsity scaling `α_N` dividing the drift.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Row-major entries.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    /// Fraction of nonzero off-diagonal entries.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let mut nonzero = 0usize;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && self.weights[i * self.n + j] != 0.0 {
                    nonzero += 1;
                }
            }
        }
        nonzero as f64 / (self.n * (self.n - 1)) as f64
    }

    /// Largest row sum of `|weights|`, used by the integrator's stiffness
    /// warning.
    pub fn max_row_sum(&self) -> f64 {
        let mut best = 0.0;
        for i in 0..self.n {
            let s: f64 = self.weights[i * self.n..(i + 1) * self.n]
                .iter()
                .map(|w| w.abs())
                .sum();
            if s > best {
                best = s;
            }
        }
        best
    }
}

/// Distance on the unit circle `[0,1)` with wraparound.
fn circle_distance(d: f64) -> f64 {
    let d = d.abs() % 1.0;
    d.min(1.0 - d)
}

/// CDF of the symmetric triangular distribution on `[-1, 1]` (the law of
/// `U - V` for independent uniforms), used for exact cell averages of
/// indicator kernels.
fn triangle_cdf(s: f64) -> f64 {
    if s <= -1.0 {
        0.0
    } else if s <= 0.0 {
        0.5 * (s + 1.0) * (s + 1.0)
    } else if s <= 1.0 {
        1.0 - 0.5 * (1.0 - s) * (1.0 - s)
    } else {
        1.0
    }
}

impl Graphon {
    pub fn validate(&self) -> Result<(), GraphonError> {
        match *self {
            Self::ErdosRenyi { p } => {
                if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                    return Err(GraphonError::ProbabilityOutOfRange(p));
                }
            }
            Self::SmallWorld { p, h } => {
                if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                    return Err(GraphonError::ProbabilityOutOfRange(p));
                }
                if !(h > 0.0 && h <= 0.5) {
                    return Err(GraphonError::BandwidthOutOfRange(h));
                }
            }
            Self::PowerLaw { gamma, alpha } => {
                if !(gamma > 0.0 && gamma < alpha && alpha < 1.0) {
                    return Err(GraphonError::ExponentsOutOfOrder { gamma, alpha });
                }
            }
        }
        Ok(())
    }

    /// Pointwise kernel value. The power-law kernel diverges as `x` or `y`
    /// approaches 0; use the cell averages for finite systems.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            Self::ErdosRenyi { p } => p,
            Self::SmallWorld { p, h } => {
                let band = if circle_distance(x - y) <= h { 1.0 } else { 0.0 };
                2.0 * p * h + (1.0 - p) * band
            }
            Self::PowerLaw { gamma, .. } => (x * y).powf(-gamma),
        }
    }

    /// The drift normalization `α_N`: 1 for the dense families, `N^{-α}`
    /// for the power law.
    pub fn scaling(&self, n: usize) -> f64 {
        match *self {
            Self::PowerLaw { alpha, .. } => (n as f64).powf(-alpha),
            _ => 1.0,
        }
    }

    /// Exact cell averages `W_{m,ij} = m² ∫∫_{cell_i × cell_j} W`, row-major.
    pub fn discretize(&self, m: usize) -> Vec<f64> {
        assert!(m > 0);
        match *self {
            Self::ErdosRenyi { p } => vec![p; m * m],
            Self::SmallWorld { p, h } => {
                let w = 1.0 / m as f64;
                // The average of 1{d(x,y) ≤ h} over a cell pair depends only
                // on the offset δ = (i-j)/m: it is the probability that
                // δ + (U-V)/m lands in the admissible difference set, read
                // off the triangular CDF at the three window edges.
                let mut band_by_offset = Vec::with_capacity(m);
                for k in 0..m {
                    let delta = k as f64 * w;
                    let t = |s: f64| triangle_cdf((s - delta) / w);
                    let prob =
                        t(h) - t(-h) + t(-(1.0 - h)) + 1.0 - t(1.0 - h);
                    band_by_offset.push(2.0 * p * h + (1.0 - p) * prob);
                }
                let mut out = vec![0.0; m * m];
                for i in 0..m {
                    for j in 0..m {
                        out[i * m + j] = band_by_offset[(m + i - j) % m];
                    }
                }
                out
            }
            Self::PowerLaw { gamma, .. } => {
                // Separable: the cell average is c_i c_j with
                // c_i = m ∫_{i/m}^{(i+1)/m} x^{-γ} dx.
                let c = power_law_cell_means(gamma, m);
                let mut out = vec![0.0; m * m];
                let mut above_one = 0usize;
                for i in 0..m {
                    for j in 0..m {
                        let v = c[i] * c[j];
                        above_one += (v > 1.0) as usize;
                        out[i * m + j] = v;
                    }
                }
                if above_one > 0 {
                    log::debug!(
                        "power-law discretization: {above_one} of {} cell averages exceed 1 near the origin",
                        m * m
                    );
                }
                out
            }
        }
    }

    /// Annealed coupling: the discretized graphon itself with a zeroed
    /// diagonal (self-interaction is dynamically inert since `D′(0) = 0`,
    /// and removing it keeps the graph energy comparable to sampled graphs).
    /// Refused for the power law, whose cell averages exceed 1 near the
    /// origin and are only meaningful as clipped Bernoulli probabilities.
    pub fn mean_field(&self, n: usize) -> Result<CouplingMatrix, GraphonError> {
        if matches!(self, Self::PowerLaw { .. }) {
            return Err(GraphonError::DeterministicPowerLaw);
        }
        let mut weights = self.discretize(n);
        for i in 0..n {
            weights[i * n + i] = 0.0;
        }
        Ok(CouplingMatrix::new(n, 1.0, weights))
    }

    /// Quenched coupling: symmetric Bernoulli graph with
    /// `P(A_ij = 1) = min(1, α_N W_{N,ij})`, no self-loops. Deterministic
    /// in `seed`.
    pub fn sample_bernoulli(&self, n: usize, seed: u64) -> CouplingMatrix {
        let cells = self.discretize(n);
        let alpha = self.scaling(n);
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let prob = (alpha * cells[i * n + j]).min(1.0);
                if rng::uniform(&[seed, 1, i as u64, j as u64]) < prob {
                    weights[i * n + j] = 1.0;
                    weights[j * n + i] = 1.0;
                }
            }
        }
        CouplingMatrix::new(n, alpha, weights)
    }

    /// Watts–Strogatz construction for the small-world family: a ring where
    /// each node connects to its `r = round(h·n)` nearest neighbors per
    /// side, then each ring edge is rewired to a uniform new endpoint with
    /// probability `p`. Edge count is preserved exactly. Deterministic in
    /// `seed`.
    pub fn sample_ring_rewiring(&self, n: usize, seed: u64) -> Result<CouplingMatrix, GraphonError> {
        let (p, h) = match *self {
            Self::SmallWorld { p, h } => (p, h),
            _ => return Err(GraphonError::NotSmallWorld),
        };
        let r = (h * n as f64).round() as usize;
        let mut weights = vec![0.0; n * n];
        let set = |w: &mut Vec<f64>, a: usize, b: usize, v: f64| {
            w[a * n + b] = v;
            w[b * n + a] = v;
        };
        for i in 0..n {
            for k in 1..=r {
                set(&mut weights, i, (i + k) % n, 1.0);
            }
        }
        for i in 0..n {
            for k in 1..=r {
                let j = (i + k) % n;
                if rng::uniform(&[seed, 2, i as u64, k as u64]) >= p {
                    continue;
                }
                if weights[i * n + j] == 0.0 {
                    // Already rewired away from the other side.
                    continue;
                }
                // Draw a fresh endpoint that is neither i nor an existing
                // neighbor of i; give up after a bounded number of attempts
                // in pathologically dense rings.
                for attempt in 0..64u64 {
                    let t = (rng::uniform(&[seed, 3, i as u64, k as u64, attempt]) * n as f64)
                        as usize;
                    let t = t.min(n - 1);
                    if t != i && weights[i * n + t] == 0.0 {
                        set(&mut weights, i, j, 0.0);
                        set(&mut weights, i, t, 1.0);
                        break;
                    }
                }
            }
        }
        Ok(CouplingMatrix::new(n, 1.0, weights))
    }
}

/// `c_i = m ∫_{cell_i} x^{-γ} dx`, the per-axis factors of the power-law
/// cell averages.
fn power_law_cell_means(gamma: f64, m: usize) -> Vec<f64> {
    let e = 1.0 - gamma;
    let mut edges = Vec::with_capacity(m + 1);
    for i in 0..=m {
        edges.push((i as f64 / m as f64).powf(e));
    }
    (0..m)
        .map(|i| m as f64 * (edges[i + 1] - edges[i]) / e)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson rule on `[a, b]` with `2k` intervals.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, k: usize) -> f64 {
        let n = 2 * k;
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for r in 1..n {
            let w = if r % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + r as f64 * h);
        }
        acc * h / 3.0
    }

    /// ∫ x^{-γ} over a cell, handling the singular first cell by dyadic
    /// refinement toward 0. Independent of the antiderivative used in the
    /// implementation.
    fn power_law_cell_integral_oracle(gamma: f64, m: usize, i: usize) -> f64 {
        let w = 1.0 / m as f64;
        let f = |x: f64| x.powf(-gamma);
        if i > 0 {
            return simpson(&f, i as f64 * w, (i + 1) as f64 * w, 256);
        }
        let mut acc = 0.0;
        let mut hi = w;
        for _ in 0..80 {
            let lo = hi / 2.0;
            acc += simpson(&f, lo, hi, 256);
            hi = lo;
        }
        acc
    }

    /// Cell average of 1{d(x,y) ≤ h} by exact interval intersection in y
    /// and trapezoid quadrature in x. Independent of the triangle-CDF path.
    fn sw_band_cell_average_oracle(h: f64, m: usize, i: usize, j: usize, points: usize) -> f64 {
        let w = 1.0 / m as f64;
        let windows = [(-h, h), (1.0 - h, 1.0 + h), (-1.0 - h, -(1.0 - h))];
        let measure = |x: f64| {
            // s = x - y sweeps [x - (j+1)w, x - jw] as y crosses its cell.
            let lo = x - (j as f64 + 1.0) * w;
            let hi = x - j as f64 * w;
            let mut total = 0.0;
            for &(a, b) in &windows {
                let l = lo.max(a);
                let r = hi.min(b);
                if r > l {
                    total += r - l;
                }
            }
            total
        };
        let mut acc = 0.0;
        for r in 0..=points {
            let x = (i as f64 + r as f64 / points as f64) * w;
            let weight = if r == 0 || r == points { 0.5 } else { 1.0 };
            acc += weight * measure(x);
        }
        m as f64 * acc / points as f64
    }

    #[test]
    fn er_cells_are_exactly_p() {
        let g = Graphon::ErdosRenyi { p: 0.37 };
        assert!(g.discretize(5).iter().all(|&v| v == 0.37));
        assert_eq!(g.scaling(100), 1.0);
        assert_eq!(g.eval(0.2, 0.9), 0.37);
    }

    #[test]
    fn sw_cells_match_hand_computed_two_by_two() {
        // p = 0.4, h = 0.25, m = 2: diagonal cells average 0.65 and
        // off-diagonal 0.35 (worked out from the triangular overlap).
        let g = Graphon::SmallWorld { p: 0.4, h: 0.25 };
        let cells = g.discretize(2);
        assert!((cells[0] - 0.65).abs() < 1e-15);
        assert!((cells[3] - 0.65).abs() < 1e-15);
        assert!((cells[1] - 0.35).abs() < 1e-15);
        assert!((cells[2] - 0.35).abs() < 1e-15);
    }

    #[test]
    fn sw_cells_match_interval_oracle() {
        let (p, h, m) = (0.4, 0.25, 8);
        let g = Graphon::SmallWorld { p, h };
        let cells = g.discretize(m);
        for i in 0..m {
            for j in 0..m {
                let band = sw_band_cell_average_oracle(h, m, i, j, 20_000);
                let expected = 2.0 * p * h + (1.0 - p) * band;
                assert!(
                    (cells[i * m + j] - expected).abs() < 1e-9,
                    "cell ({i},{j}): {} vs {expected}",
                    cells[i * m + j]
                );
            }
        }
    }

    #[test]
    fn sw_rows_average_to_twice_bandwidth() {
        // Row means of the cell-average matrix equal ∫ W(x,·) = 2h exactly,
        // which is what makes the constant vector an exact eigenvector.
        let g = Graphon::SmallWorld { p: 0.3, h: 0.11 };
        for m in [3usize, 7, 32] {
            let cells = g.discretize(m);
            for i in 0..m {
                let mean: f64 = cells[i * m..(i + 1) * m].iter().sum::<f64>() / m as f64;
                assert!((mean - 0.22).abs() < 1e-13, "m = {m}, row {i}: {mean}");
            }
        }
    }

    #[test]
    fn pl_cells_match_quadrature_oracle() {
        for &(gamma, alpha, m) in &[(0.3, 0.4, 2usize), (0.3, 0.4, 5), (0.45, 0.6, 4)] {
            let g = Graphon::PowerLaw { gamma, alpha };
            let cells = g.discretize(m);
            let integrals: Vec<f64> = (0..m)
                .map(|i| power_law_cell_integral_oracle(gamma, m, i))
                .collect();
            for i in 0..m {
                for j in 0..m {
                    let expected = (m * m) as f64 * integrals[i] * integrals[j];
                    let got = cells[i * m + j];
                    assert!(
                        (got - expected).abs() < 1e-10 * expected,
                        "gamma {gamma} m {m} cell ({i},{j}): {got} vs {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn pl_mean_matches_full_integral() {
        // (1/m²) Σ_ij W_ij telescopes to (∫ x^{-γ})² = 1/(1-γ)².
        let g = Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 };
        let m = 64;
        let cells = g.discretize(m);
        let mean = cells.iter().sum::<f64>() / (m * m) as f64;
        let expected = 1.0 / (0.7 * 0.7);
        assert!((mean - expected).abs() < 1e-12 * expected);
        assert!((g.scaling(256) - (256f64).powf(-0.4)).abs() < 1e-15);
    }

    #[test]
    fn discretizations_are_symmetric() {
        for g in [
            Graphon::ErdosRenyi { p: 0.5 },
            Graphon::SmallWorld { p: 0.4, h: 0.04 },
            Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 },
        ] {
            let m = 17;
            let cells = g.discretize(m);
            for i in 0..m {
                for j in 0..m {
                    assert_eq!(cells[i * m + j], cells[j * m + i]);
                }
            }
        }
    }

    #[test]
    fn bernoulli_sampling_is_deterministic_and_unbiased() {
        let g = Graphon::ErdosRenyi { p: 0.5 };
        let a = g.sample_bernoulli(200, 99);
        let b = g.sample_bernoulli(200, 99);
        assert_eq!(a, b);
        assert_ne!(a, g.sample_bernoulli(200, 100));
        let mut edges = 0usize;
        for i in 0..200 {
            assert_eq!(a.weight(i, i), 0.0);
            for j in (i + 1)..200 {
                assert_eq!(a.weight(i, j), a.weight(j, i));
                assert!(a.weight(i, j) == 0.0 || a.weight(i, j) == 1.0);
                edges += (a.weight(i, j) == 1.0) as usize;
            }
        }
        // 19900 pairs at p = 1/2: mean 9950, sd ~70.5; allow 4+ sigma.
        assert!((edges as f64 - 9950.0).abs() < 300.0, "edges = {edges}");
    }

    #[test]
    fn bernoulli_power_law_edge_count_tracks_expectation() {
        let g = Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 };
        let n = 256;
        let sampled = g.sample_bernoulli(n, 7);
        assert_eq!(sampled.alpha(), g.scaling(n));
        let cells = g.discretize(n);
        let alpha = g.scaling(n);
        let mut mean = 0.0;
        let mut var = 0.0;
        let mut edges = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let p = (alpha * cells[i * n + j]).min(1.0);
                mean += p;
                var += p * (1.0 - p);
                edges += sampled.weight(i, j);
            }
        }
        assert!(
            (edges - mean).abs() < 4.0 * var.sqrt() + 1.0,
            "edges {edges} vs mean {mean} (sd {})",
            var.sqrt()
        );
    }

    #[test]
    fn ring_rewiring_preserves_edge_count() {
        let g = Graphon::SmallWorld { p: 0.3, h: 0.05 };
        let n = 400;
        let a = g.sample_ring_rewiring(n, 21).unwrap();
        assert_eq!(a, g.sample_ring_rewiring(n, 21).unwrap());
        let mut edges = 0usize;
        for i in 0..n {
            assert_eq!(a.weight(i, i), 0.0);
            for j in (i + 1)..n {
                assert_eq!(a.weight(i, j), a.weight(j, i));
                edges += (a.weight(i, j) == 1.0) as usize;
            }
        }
        // r = round(0.05 * 400) = 20 neighbors per side; rewiring moves
        // endpoints but never creates or destroys edges.
        assert_eq!(edges, 400 * 20);
        assert!(Graphon::ErdosRenyi { p: 0.5 }
            .sample_ring_rewiring(10, 0)
            .is_err());
    }

    #[test]
    fn mean_field_wraps_discretization_with_zero_diagonal() {
        let g = Graphon::SmallWorld { p: 0.4, h: 0.04 };
        let n = 25;
        let mf = g.mean_field(n).unwrap();
        assert_eq!(mf.alpha(), 1.0);
        let cells = g.discretize(n);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 0.0 } else { cells[i * n + j] };
                assert_eq!(mf.weight(i, j), want);
            }
        }
        assert_eq!(
            Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 }.mean_field(8),
            Err(GraphonError::DeterministicPowerLaw)
        );
    }

    #[test]
    fn bernoulli_degenerate_probabilities() {
        let full = Graphon::ErdosRenyi { p: 1.0 }.sample_bernoulli(12, 4);
        let empty = Graphon::ErdosRenyi { p: 0.0 }.sample_bernoulli(12, 4);
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(full.weight(i, j), if i == j { 0.0 } else { 1.0 });
                assert_eq!(empty.weight(i, j), 0.0);
            }
        }
    }

    #[test]
    fn sw_rows_vary_continuously() {
        // The L¹ modulus of continuity of the small-world kernel is linear
        // in the row offset: shifting the band by k cells flips at most
        // 2k + 2 cells between its two values.
        let g = Graphon::SmallWorld { p: 0.4, h: 0.1 };
        let m = 512;
        let cells = g.discretize(m);
        for k in [1usize, 2, 4, 8, 32] {
            let i = 100;
            let other = i + k;
            let diff: f64 = (0..m)
                .map(|j| (cells[i * m + j] - cells[other * m + j]).abs())
                .sum::<f64>()
                / m as f64;
            let bound = (2 * k + 2) as f64 * (1.0 - 0.4) / m as f64;
            assert!(diff <= bound + 1e-12, "k = {k}: {diff} > {bound}");
        }
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(Graphon::ErdosRenyi { p: 1.2 }.validate().is_err());
        assert!(Graphon::SmallWorld { p: 0.5, h: 0.0 }.validate().is_err());
        assert!(Graphon::SmallWorld { p: 0.5, h: 0.6 }.validate().is_err());
        assert!(Graphon::PowerLaw { gamma: 0.5, alpha: 0.4 }.validate().is_err());
        assert!(Graphon::PowerLaw { gamma: 0.3, alpha: 1.0 }.validate().is_err());
        assert!(Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 }.validate().is_ok());
        assert!(Graphon::SmallWorld { p: 0.4, h: 0.25 }.validate().is_ok());
    }
}
