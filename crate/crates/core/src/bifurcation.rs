//! Bifurcation thresholds of the mean-field equation.
//!
//! About the flat state, mode `m` of the density on a kernel eigenfunction
//! with eigenvalue `λ` is linearly stable below
//!
//! ```text
//! θ_{m,λ} = 2 / (β λ a_m),
//! ```
//!
//! so the primary transition happens at `θ_c = min θ_{m,λ}` over positive
//! `a_m` and positive `λ`. For bichromatic potentials with `a₂ > a₁ > 0`
//! mode 2 goes first and the system lands on the *even branch*: a two-peak
//! state `ρ ∝ exp(h₂(x) cos 2u)` whose concentration solves the
//! self-consistency equation `C₂ = L[Γ(βθ a₂ C₂)]` with `Γ = I₁/I₀`.
//!
//! That branch loses stability to mode-1 perturbations at a *secondary*
//! threshold. Linearizing about the branch weights the operator by
//! `g(x) = (1 + Γ(h₂(x)))/2`, and the crossing condition is
//!
//! ```text
//! Φ(θ) = βθ a₁ λ_max(L ∘ M_g) = 1,
//! ```
//!
//! which always lies strictly between `1/(β a₁ λ₁)` and `2/(β a₁ λ₁)` when
//! it exists. On the reflected branch (`C₂ < 0`) the same probe has
//! `g = (1 - Γ(|h₂|))/2`, and for Erdős–Rényi `Φ` saturates at `a₁/(4a₂)`,
//! so no crossing occurs when `a₁ < 4 a₂`.

#[cfg(not(feature = "std"))]
use crate::math::FloatMath;
use crate::graphon::Graphon;
use crate::potential::Potential;
use crate::specialfn::bessel_i_ratio;
use crate::spectral;
use alloc::vec;
use alloc::vec::Vec;

/// One unstable channel: mode `m` against eigenvalue `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEntry {
    pub mode: usize,
    pub eigenvalue: f64,
    /// Position of `eigenvalue` in the spectrum handed to
    /// [`primary_thresholds`] (0-based).
    pub eigenvalue_index: usize,
    pub theta: f64,
}

/// All finite thresholds, sorted by θ ascending; `critical` is the first.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTable {
    pub entries: Vec<ThresholdEntry>,
    pub critical: Option<ThresholdEntry>,
}

impl ThresholdTable {
    /// True when at least two channels attain the critical θ within a
    /// relative 1e-12. Branch analysis needs a simple crossing and refuses
    /// to proceed past a degenerate one.
    pub fn degenerate_critical(&self) -> bool {
        match self.entries[..] {
            [first, second, ..] => second.theta - first.theta <= 1e-12 * first.theta,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BifurcationError {
    /// The requested analysis needs a potential shape this solver does not
    /// cover (see the function docs for the exact requirement).
    UnsupportedPotential(alloc::string::String),
    InvalidGraphon(crate::graphon::GraphonError),
    /// Two channels reach criticality at the same θ, so there is no single
    /// branch to follow.
    DegenerateCritical(ThresholdEntry, ThresholdEntry),
    /// Φ never crossed 1 on the positive branch inside the search window.
    /// On the negative branch the same outcome is a finding, not a failure,
    /// and is reported as a scan without a crossing.
    BracketingFailure(SecondaryScan),
}

impl core::fmt::Display for BifurcationError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Self::UnsupportedPotential(msg) => write!(f, "{msg}"),
            Self::InvalidGraphon(e) => write!(f, "{e}"),
            Self::DegenerateCritical(a, b) => write!(
                f,
                "degenerate critical threshold: modes {} and {} both destabilize at theta = {}",
                a.mode, b.mode, a.theta
            ),
            Self::BracketingFailure(scan) => write!(
                f,
                "no secondary crossing bracketed: phi stayed in [{:.6}, {:.6}] over theta in [{:.6e}, {:.6e}]",
                scan.phi.iter().cloned().fold(f64::INFINITY, f64::min),
                scan.phi.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
                scan.thetas.first().copied().unwrap_or(f64::NAN),
                scan.thetas.last().copied().unwrap_or(f64::NAN),
            ),
        }
    }
}

impl core::error::Error for BifurcationError {}

/// Thresholds `θ_{m,λ} = 2/(βλa_m)` for every attractive mode against every
/// positive *simple* eigenvalue. Eigenvalues closer than a relative 1e-6
/// form a multiplet and are left out: a multiple eigenvalue does not open a
/// one-dimensional branch, so it never defines a threshold channel.
/// H-stable potentials (or spectra with no positive simple eigenvalue)
/// yield an empty table.
pub fn primary_thresholds(potential: &Potential, beta: f64, eigenvalues: &[f64]) -> ThresholdTable {
    assert!(beta > 0.0 && beta.is_finite());
    let mut positive: Vec<(usize, f64)> = eigenvalues
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, lam)| lam > 0.0)
        .collect();
    positive.sort_by(|a, b| a.1.total_cmp(&b.1));
    // Sweep the sorted values; a gap above 1e-6 relative closes a multiplet.
    let mut simple: Vec<(usize, f64)> = Vec::new();
    let mut group_start = 0;
    for i in 1..=positive.len() {
        let closes = i == positive.len()
            || (positive[i].1 - positive[i - 1].1) > 1e-6 * positive[i].1;
        if closes {
            if i - group_start == 1 {
                simple.push(positive[group_start]);
            }
            group_start = i;
        }
    }
    let mut entries = Vec::new();
    for (idx, &a) in potential.coefficients().iter().enumerate() {
        if a <= 0.0 {
            continue;
        }
        for &(l, lam) in &simple {
            entries.push(ThresholdEntry {
                mode: idx + 1,
                eigenvalue: lam,
                eigenvalue_index: l,
                theta: 2.0 / (beta * lam * a),
            });
        }
    }
    entries.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    let critical = entries.first().copied();
    ThresholdTable { entries, critical }
}

/// Stability exponent `ξ_{m,λ}(θ) = π m² (2β⁻¹ - θ a_m λ)` of the flat
/// state: positive below the threshold (the mode decays at rate `ξ/(2π)`),
/// zero exactly at `θ_{m,λ}`.
pub fn stability_exponent(beta: f64, theta: f64, mode: usize, a_m: f64, eigenvalue: f64) -> f64 {
    core::f64::consts::PI
        * (mode * mode) as f64
        * (2.0 / beta - theta * a_m * eigenvalue)
}

/// 8-point Gauss–Legendre rule on [-1, 1] (positive nodes; mirrored).
const GAUSS8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GAUSS8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss8<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..4 {
        acc += GAUSS8_WEIGHTS[i] * (f(mid + half * GAUSS8_NODES[i]) + f(mid - half * GAUSS8_NODES[i]));
    }
    acc * half
}

/// `(1/(1-γ)) ∫_0^1 Γ(J K s^{-γ/(1-γ)}) ds`, the power-law branch map after
/// the substitution `y = s^{1/(1-γ)}` that flattens `y^{-γ} dy`. Dyadic
/// panels resolve the algebraic behavior at `s = 0`, where the integrand
/// saturates at sign(K).
fn power_law_branch_map(gamma: f64, j2: f64, k: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    let q = gamma / (1.0 - gamma);
    let f = |s: f64| bessel_i_ratio(j2 * k * s.powf(-q));
    let mut acc = 0.0;
    let mut hi = 1.0;
    for _ in 0..50 {
        let lo = hi / 2.0;
        // Four Gauss panels per dyadic level keep the error far below the
        // bisection tolerance.
        let w = (hi - lo) / 4.0;
        for p in 0..4 {
            acc += gauss8(&f, lo + p as f64 * w, lo + (p + 1) as f64 * w);
        }
        hi = lo;
    }
    // Below 2^-50 the integrand is sign(K) to ~1e-7 relative on a 1e-15
    // measure set.
    acc += hi * if k > 0.0 { 1.0 } else { -1.0 };
    acc / (1.0 - gamma)
}

/// Solves `C = rhs(C)` for the positive root, given that `rhs(C)/C` is
/// strictly decreasing with slope `rhs'(0) = slope0` at zero.
fn bisect_amplitude<F: Fn(f64) -> f64>(rhs: &F, slope0: f64, hi_bound: f64) -> f64 {
    if slope0 <= 1.0 {
        return 0.0;
    }
    let mut lo = 1e-12 * hi_bound;
    let mut hi = hi_bound;
    debug_assert!(rhs(lo) / lo > 1.0 && rhs(hi) / hi < 1.0);
    for _ in 0..200 {
        if hi - lo <= 1e-15 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if rhs(mid) / mid > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Amplitude of the even two-peak branch at interaction strength `theta`.
///
/// Returns the scalar parameterizing `C₂(x)`: the constant value itself for
/// Erdős–Rényi and small-world, and the coefficient `K` of `C₂(x) = K x^{-γ}`
/// for the power law. Zero at and below the mode-2 threshold. Requires
/// `a₂ > 0` (and `γ < 1/2` for the power law).
pub fn even_branch_amplitude(
    potential: &Potential,
    graphon: &Graphon,
    beta: f64,
    theta: f64,
) -> Result<f64, BifurcationError> {
    let coeffs = potential.coefficients();
    if coeffs.len() < 2 || coeffs[1] <= 0.0 {
        return Err(BifurcationError::UnsupportedPotential(alloc::format!(
            "the even branch needs an attractive second mode, got coefficients {coeffs:?}"
        )));
    }
    graphon.validate().map_err(BifurcationError::InvalidGraphon)?;
    let j2 = beta * theta * coeffs[1];
    Ok(match *graphon {
        Graphon::ErdosRenyi { p } => {
            bisect_amplitude(&|c| p * bessel_i_ratio(j2 * c), p * j2 / 2.0, p)
        }
        Graphon::SmallWorld { h, .. } => {
            let lam = 2.0 * h;
            bisect_amplitude(&|c| lam * bessel_i_ratio(j2 * c), lam * j2 / 2.0, lam)
        }
        Graphon::PowerLaw { gamma, .. } => {
            if gamma >= 0.5 {
                return Err(BifurcationError::UnsupportedPotential(alloc::format!(
                    "power-law branch analysis needs gamma < 1/2, got {gamma}"
                )));
            }
            let lam = 1.0 / (1.0 - 2.0 * gamma);
            bisect_amplitude(
                &|k| power_law_branch_map(gamma, j2, k),
                lam * j2 / 2.0,
                1.0 / (1.0 - gamma),
            )
        }
    })
}

/// Largest eigenvalue of the composition `v ↦ L(g·v)` by power iteration
/// from the constant vector (the operator preserves the positive cone).
pub fn lambda_max_composition(kernel: &[f64], m: usize, g: &[f64]) -> f64 {
    assert_eq!(kernel.len(), m * m);
    assert_eq!(g.len(), m);
    let mut v = vec![1.0; m];
    let mut gv = vec![0.0; m];
    let mut w = vec![0.0; m];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        for i in 0..m {
            gv[i] = g[i] * v[i];
        }
        spectral::apply_kernel(kernel, m, &gv, &mut w);
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..m {
            num += v[i] * w[i];
            den += v[i] * v[i];
        }
        lambda = num / den;
        let mut residual = 0.0f64;
        let mut norm = 0.0f64;
        for i in 0..m {
            residual += (w[i] - lambda * v[i]) * (w[i] - lambda * v[i]);
            norm += w[i] * w[i];
        }
        if residual.sqrt() <= 1e-13 * lambda.abs().max(1e-30) * (m as f64).sqrt() {
            break;
        }
        if norm == 0.0 {
            return 0.0;
        }
        let scale = 1.0 / (norm / m as f64).sqrt();
        for i in 0..m {
            v[i] = w[i] * scale;
        }
    }
    lambda
}

/// The same eigenvalue through the self-adjoint form `√g L √g`, validating
/// [`lambda_max_composition`] by an independent route.
pub fn lambda_max_symmetrized(kernel: &[f64], m: usize, g: &[f64]) -> f64 {
    assert_eq!(g.len(), m);
    let root: Vec<f64> = g.iter().map(|&x| x.max(0.0).sqrt()).collect();
    let mut sym = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            sym[i * m + j] = root[i] * kernel[i * m + j] * root[j];
        }
    }
    spectral::leading_eigenpairs(&sym, m, 1)[0].value
}

/// Which sign of the even branch to analyze.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSign {
    Positive,
    Negative,
}

/// Search box for the secondary threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondarySearch {
    /// Start the scan at `θ_c (1 + lo_offset)`.
    pub lo_offset: f64,
    /// End it at `θ_c · hi_factor`.
    pub hi_factor: f64,
    /// Number of scan points (inclusive endpoints).
    pub trace_points: usize,
    /// Kernel discretization for the weighted operator.
    pub x_cells: usize,
    /// Relative θ width at which bisection stops.
    pub bisection_tol: f64,
}

impl Default for SecondarySearch {
    fn default() -> Self {
        Self {
            lo_offset: 1e-6,
            hi_factor: 10.0,
            trace_points: 33,
            x_cells: 256,
            bisection_tol: 1e-12,
        }
    }
}

/// Trace of `Φ(θ)` over the scan grid and the crossing, if one exists.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondaryScan {
    pub thetas: Vec<f64>,
    pub phi: Vec<f64>,
    /// θ with `Φ(θ) = 1`, the secondary threshold.
    pub crossing: Option<f64>,
}

/// Locates the secondary threshold `Φ(θ) = βθa₁ λ_max(L ∘ M_g) = 1` along
/// the chosen even branch, evaluating `λ_max` through the self-adjoint form
/// `√g W √g` (same spectrum as the composition). Requires exactly two modes
/// with `a₂ > a₁ > 0` (other shapes couple additional modes into the
/// perturbation and are not reduced by this operator) and a simple critical
/// eigenvalue. On the positive branch a missing crossing is a bracketing
/// failure; on the negative branch it is the expected "no secondary
/// transition" outcome and comes back as a scan with `crossing: None`.
pub fn secondary_threshold(
    potential: &Potential,
    graphon: &Graphon,
    beta: f64,
    sign: BranchSign,
    search: &SecondarySearch,
) -> Result<SecondaryScan, BifurcationError> {
    let coeffs = potential.coefficients();
    if coeffs.len() != 2 || !(coeffs[1] > coeffs[0] && coeffs[0] > 0.0) {
        return Err(BifurcationError::UnsupportedPotential(alloc::format!(
            "secondary analysis needs exactly two modes with a2 > a1 > 0, got {coeffs:?}"
        )));
    }
    graphon.validate().map_err(BifurcationError::InvalidGraphon)?;
    let (a1, a2) = (coeffs[0], coeffs[1]);
    let table = primary_thresholds(potential, beta, &spectral::analytic_spectrum(graphon, 8));
    if table.degenerate_critical() {
        return Err(BifurcationError::DegenerateCritical(table.entries[0], table.entries[1]));
    }
    let lambda1 = spectral::analytic_spectrum(graphon, 1)[0];
    let theta_c = 2.0 / (beta * lambda1 * a2);
    let m = search.x_cells;
    let kernel = graphon.discretize(m);
    // h₂(x) = βθa₂ C₂(x); per cell, C₂ is the scalar amplitude times the
    // family profile (constant, constant, or the power-law cell means).
    let profile: Vec<f64> = match *graphon {
        Graphon::PowerLaw { .. } => (0..m).map(|i| kernel[i * m + i].sqrt()).collect(),
        _ => vec![1.0; m],
    };
    let phi_at = |theta: f64| -> Result<f64, BifurcationError> {
        let mut amp = even_branch_amplitude(potential, graphon, beta, theta)?;
        if sign == BranchSign::Negative {
            amp = -amp;
        }
        let j2 = beta * theta * a2;
        let g: Vec<f64> = profile
            .iter()
            .map(|&c| 0.5 * (1.0 + bessel_i_ratio(j2 * amp * c)))
            .collect();
        Ok(beta * theta * a1 * lambda_max_symmetrized(&kernel, m, &g))
    };

    let points = search.trace_points.max(2);
    let lo = theta_c * (1.0 + search.lo_offset);
    let hi = theta_c * search.hi_factor;
    let mut thetas = Vec::with_capacity(points);
    let mut phi = Vec::with_capacity(points);
    for i in 0..points {
        let t = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        thetas.push(t);
        phi.push(phi_at(t)?);
    }
    let mut crossing = None;
    for i in 0..points - 1 {
        if (phi[i] - 1.0) * (phi[i + 1] - 1.0) <= 0.0 && phi[i] != phi[i + 1] {
            let (mut tl, mut tr) = (thetas[i], thetas[i + 1]);
            let mut fl = phi[i] - 1.0;
            for _ in 0..200 {
                if tr - tl <= search.bisection_tol * tr {
                    break;
                }
                let mid = 0.5 * (tl + tr);
                let fm = phi_at(mid)? - 1.0;
                if (fl <= 0.0) == (fm <= 0.0) {
                    tl = mid;
                    fl = fm;
                } else {
                    tr = mid;
                }
            }
            crossing = Some(0.5 * (tl + tr));
            break;
        }
    }
    if crossing.is_none() && sign == BranchSign::Positive {
        return Err(BifurcationError::BracketingFailure(SecondaryScan {
            thetas,
            phi,
            crossing: None,
        }));
    }
    Ok(SecondaryScan { thetas, phi, crossing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::analytic_spectrum;

    fn bichromatic() -> Potential {
        Potential::new(alloc::vec![1.0, 2.0])
    }

    #[test]
    fn primary_thresholds_for_the_three_families() {
        let beta = 200.0;
        let pot = bichromatic();
        let er = primary_thresholds(&pot, beta, &analytic_spectrum(&Graphon::ErdosRenyi { p: 0.5 }, 4));
        let c = er.critical.unwrap();
        assert!((c.theta - 0.01).abs() < 1e-15);
        assert_eq!(c.mode, 2);
        let sw = primary_thresholds(
            &pot,
            beta,
            &analytic_spectrum(&Graphon::SmallWorld { p: 0.4, h: 0.04 }, 8),
        );
        assert!((sw.critical.unwrap().theta - 0.0625).abs() < 1e-12);
        let pl = primary_thresholds(
            &pot,
            beta,
            &analytic_spectrum(&Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 }, 4),
        );
        assert!((pl.critical.unwrap().theta - 0.002).abs() < 1e-15);
        // Kuramoto on Erdős–Rényi: the classical 2/(βp).
        let kur = primary_thresholds(&Potential::kuramoto(), beta, &[0.5]);
        assert!((kur.critical.unwrap().theta - 0.02).abs() < 1e-15);
        assert_eq!(kur.critical.unwrap().eigenvalue_index, 0);
        // The table carries the slower mode-1 channel too, in order.
        assert_eq!(er.entries.len(), 2);
        assert!((er.entries[1].theta - 0.02).abs() < 1e-15);
    }

    #[test]
    fn multiple_eigenvalues_open_no_channel() {
        // {0.5, 0.5 + 1e-9} is a multiplet: no one-dimensional branch comes
        // out of it, so only the simple 0.3 (input slot 2) remains.
        let pot = Potential::kuramoto();
        let table = primary_thresholds(&pot, 100.0, &[0.5, 0.5 + 1e-9, 0.3, -0.2, 0.0]);
        assert_eq!(table.entries.len(), 1);
        let only = table.critical.unwrap();
        assert_eq!((only.mode, only.eigenvalue_index), (1, 2));
        assert!((only.theta - 2.0 / (100.0 * 0.3)).abs() < 1e-15);
    }

    #[test]
    fn tied_thresholds_are_all_reported_and_flagged() {
        // a₁ = a₂ with λ = 2λ' makes (1, λ) and (2, λ') cross at the same θ.
        let pot = Potential::new(alloc::vec![2.0, 2.0]);
        let table = primary_thresholds(&pot, 100.0, &[1.0, 0.5]);
        assert_eq!(table.entries.len(), 4);
        assert!((table.entries[0].theta - 0.01).abs() < 1e-16);
        assert!((table.entries[1].theta - 0.01).abs() < 1e-16);
        assert_ne!(
            (table.entries[0].mode, table.entries[0].eigenvalue_index),
            (table.entries[1].mode, table.entries[1].eigenvalue_index),
        );
        assert!(table.degenerate_critical());
        // A clean bichromatic table is not degenerate.
        let clean = primary_thresholds(&bichromatic(), 200.0, &[0.5]);
        assert!(!clean.degenerate_critical());
    }

    #[test]
    fn h_stable_potentials_have_no_threshold() {
        let pot = Potential::new(alloc::vec![-1.0, -2.0]);
        let table = primary_thresholds(&pot, 200.0, &[0.5, 0.2]);
        assert!(table.entries.is_empty());
        assert!(table.critical.is_none());
    }

    #[test]
    fn stability_exponent_flips_sign_at_threshold() {
        let (beta, a, lam, mode) = (200.0, 2.0, 0.5, 2usize);
        let theta_c = 2.0 / (beta * lam * a);
        assert!(stability_exponent(beta, theta_c, mode, a, lam).abs() < 1e-16);
        assert!(stability_exponent(beta, 0.9 * theta_c, mode, a, lam) > 0.0);
        assert!(stability_exponent(beta, 1.1 * theta_c, mode, a, lam) < 0.0);
    }

    #[test]
    fn even_branch_amplitude_er_and_sw() {
        let pot = bichromatic();
        let beta = 200.0;
        let er = Graphon::ErdosRenyi { p: 0.5 };
        // Below and at threshold: flat state only.
        assert_eq!(even_branch_amplitude(&pot, &er, beta, 0.009).unwrap(), 0.0);
        assert_eq!(even_branch_amplitude(&pot, &er, beta, 0.01).unwrap(), 0.0);
        // At 1.5 θ_c the residual of C = p Γ(βθ a₂ C) must vanish.
        let c = even_branch_amplitude(&pot, &er, beta, 0.015).unwrap();
        assert!(c > 0.0 && c < 0.5);
        assert!((c - 0.5 * bessel_i_ratio(200.0 * 0.015 * 2.0 * c)).abs() < 1e-12);
        // Deep in the ordered phase the amplitude approaches λ = p.
        let deep = even_branch_amplitude(&pot, &er, beta, 1.0).unwrap();
        assert!(deep > 0.49 && deep < 0.5);
        // A small world with 2h = p reduces to the identical equation.
        let sw = Graphon::SmallWorld { p: 0.123, h: 0.25 };
        let c_sw = even_branch_amplitude(&pot, &sw, beta, 0.015).unwrap();
        assert!((c_sw - c).abs() < 1e-12);
    }

    #[test]
    fn even_branch_amplitude_power_law_residual() {
        let pot = bichromatic();
        let g = Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 };
        let beta = 200.0;
        let theta = 0.003; // 1.5 θ_c
        let k = even_branch_amplitude(&pot, &g, beta, theta).unwrap();
        assert!(k > 0.0);
        let j2 = beta * theta * 2.0;
        assert!((k - power_law_branch_map(0.3, j2, k)).abs() < 1e-10);
        // The map itself against a blunt Simpson evaluation of the original
        // y-integral, singularity split off dyadically.
        let f = |y: f64| y.powf(-0.3) * bessel_i_ratio(j2 * k * y.powf(-0.3));
        let mut oracle = 0.0;
        let mut hi = 1.0;
        for _ in 0..60 {
            let lo = hi / 2.0;
            let steps = 64;
            let h = (hi - lo) / steps as f64;
            let mut acc = f(lo) + f(hi);
            for r in 1..steps {
                acc += if r % 2 == 1 { 4.0 } else { 2.0 } * f(lo + r as f64 * h);
            }
            oracle += acc * h / 3.0;
            hi = lo;
        }
        assert!((power_law_branch_map(0.3, j2, k) - oracle).abs() < 1e-9, "oracle {oracle}");
    }

    #[test]
    fn pitchfork_scaling_near_threshold() {
        let pot = bichromatic();
        let er = Graphon::ErdosRenyi { p: 0.5 };
        let theta_c = 0.01;
        let mut lx = alloc::vec![];
        let mut ly = alloc::vec![];
        for f in [1.001, 1.005, 1.01, 1.02, 1.05] {
            let c = even_branch_amplitude(&pot, &er, 200.0, f * theta_c).unwrap();
            lx.push((f - 1.0f64).ln());
            ly.push(c.ln());
        }
        let n = lx.len() as f64;
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let slope: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / lx.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
        assert!((0.4..=0.6).contains(&slope), "pitchfork exponent {slope}");
    }

    #[test]
    fn composition_eigenvalue_dual_route_identity() {
        let g = Graphon::SmallWorld { p: 0.4, h: 0.25 };
        let m = 128;
        let kernel = g.discretize(m);
        // A non-constant positive weight with structure in x.
        let weight: Vec<f64> = (0..m)
            .map(|i| 0.5 + 0.3 * (core::f64::consts::TAU * i as f64 / m as f64).cos())
            .collect();
        let direct = lambda_max_composition(&kernel, m, &weight);
        let sym = lambda_max_symmetrized(&kernel, m, &weight);
        assert!(
            (direct - sym).abs() <= 1e-8 * sym.abs(),
            "dual route mismatch: {direct} vs {sym}"
        );
    }

    #[test]
    fn weighted_eigenvalue_obeys_the_rayleigh_bounds() {
        // g_min λ₁ ≤ λ_max(L ∘ M_g) ≤ g_max λ₁ on the discretized kernel,
        // including the power-law family where g genuinely varies in x.
        let m = 128;
        for graphon in [
            Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 },
            Graphon::SmallWorld { p: 0.4, h: 0.1 },
        ] {
            let kernel = graphon.discretize(m);
            let lambda1 = spectral::leading_eigenpairs(&kernel, m, 1)[0].value;
            let g: Vec<f64> = (0..m).map(|i| 0.5 + 0.4 * (i as f64 + 0.5) / m as f64).collect();
            let (g_min, g_max) = (g[0], g[m - 1]);
            for lam in [
                lambda_max_composition(&kernel, m, &g),
                lambda_max_symmetrized(&kernel, m, &g),
            ] {
                assert!(
                    g_min * lambda1 - 1e-10 <= lam && lam <= g_max * lambda1 + 1e-10,
                    "{lam} outside [{}, {}]",
                    g_min * lambda1,
                    g_max * lambda1
                );
            }
        }
    }

    #[test]
    fn branch_susceptibility_at_unit_field() {
        // g = (1 + Γ(h₂))/2 at h₂ = 1, against digits frozen from the
        // quadrature oracle for Γ.
        let g = 0.5 * (1.0 + bessel_i_ratio(1.0));
        assert!((g - 0.7231949830).abs() < 1e-9, "g(1) = {g}");
    }

    #[test]
    fn secondary_threshold_er_sits_in_its_bounds() {
        let pot = bichromatic();
        let er = Graphon::ErdosRenyi { p: 0.5 };
        let search = SecondarySearch { x_cells: 64, ..SecondarySearch::default() };
        let scan = secondary_threshold(&pot, &er, 200.0, BranchSign::Positive, &search).unwrap();
        let theta2 = scan.crossing.expect("crossing must exist");
        // Strict general bounds 1/(βa₁λ) < θ₂ < 2/(βa₁λ).
        assert!(theta2 > 0.01 && theta2 < 0.02, "theta2 = {theta2}");
        // Φ is increasing along the branch and equals a₁/a₂ at the lower
        // edge of the branch.
        assert!((scan.phi[0] - 0.5).abs() < 1e-4, "phi at branch foot {}", scan.phi[0]);
        for w in scan.phi.windows(2) {
            assert!(w[1] > w[0]);
        }
        // The small world with 2h = p solves the identical scalar problem.
        let sw = Graphon::SmallWorld { p: 0.4, h: 0.25 };
        let sw_scan = secondary_threshold(&pot, &sw, 200.0, BranchSign::Positive, &search).unwrap();
        assert!((sw_scan.crossing.unwrap() - theta2).abs() < 1e-8 * theta2);
    }

    #[test]
    fn secondary_threshold_power_law() {
        let pot = bichromatic();
        let g = Graphon::PowerLaw { gamma: 0.3, alpha: 0.4 };
        let search = SecondarySearch { x_cells: 256, ..SecondarySearch::default() };
        let scan = secondary_threshold(&pot, &g, 200.0, BranchSign::Positive, &search).unwrap();
        let theta2 = scan.crossing.expect("crossing must exist");
        // Same structural bounds with λ = 2.5: (0.002, 0.004). The
        // discretized operator softens λ a little, hence strict bounds only.
        assert!(theta2 > 0.002 && theta2 < 0.004, "theta2 = {theta2}");
    }

    #[test]
    fn negative_branch_has_no_secondary_crossing() {
        let pot = bichromatic();
        let er = Graphon::ErdosRenyi { p: 0.5 };
        let search = SecondarySearch { x_cells: 32, ..SecondarySearch::default() };
        let scan = secondary_threshold(&pot, &er, 200.0, BranchSign::Negative, &search).unwrap();
        assert!(scan.crossing.is_none());
        // Φ saturates at a₁/(4a₂) = 1/8 for this family.
        let last = *scan.phi.last().unwrap();
        assert!(last < 0.15, "phi tail {last}");
        assert!((last - 0.125).abs() < 0.02);
        assert!(scan.phi.iter().all(|&v| v < 0.5));
    }

    #[test]
    fn positive_branch_without_a_crossing_is_a_bracketing_failure() {
        // Truncate the window before Φ can reach 1: the positive branch
        // must not silently report absence.
        let pot = bichromatic();
        let er = Graphon::ErdosRenyi { p: 0.5 };
        let search = SecondarySearch {
            hi_factor: 1.01,
            x_cells: 32,
            trace_points: 5,
            ..SecondarySearch::default()
        };
        let err = secondary_threshold(&pot, &er, 200.0, BranchSign::Positive, &search).unwrap_err();
        match err {
            BifurcationError::BracketingFailure(scan) => {
                assert_eq!(scan.phi.len(), 5);
                assert!(scan.phi.iter().all(|&v| v < 1.0));
            }
            other => panic!("expected a bracketing failure, got {other:?}"),
        }
        // The same truncated window on the negative branch is a finding.
        let scan =
            secondary_threshold(&pot, &er, 200.0, BranchSign::Negative, &search).unwrap();
        assert!(scan.crossing.is_none());
    }

    #[test]
    fn secondary_rejects_unsupported_potentials() {
        let er = Graphon::ErdosRenyi { p: 0.5 };
        let s = SecondarySearch::default();
        for coeffs in [alloc::vec![1.0], alloc::vec![2.0, 1.0], alloc::vec![1.0, 2.0, 3.0]] {
            let pot = Potential::new(coeffs);
            assert!(matches!(
                secondary_threshold(&pot, &er, 200.0, BranchSign::Positive, &s),
                Err(BifurcationError::UnsupportedPotential(_))
            ));
        }
    }
}
