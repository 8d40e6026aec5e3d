//! Truncated Fock-space simulation of optical modes: coherent and cat
//! states, Kerr evolution, and sign-binned quadrature readout.
//!
//! The quadrature is x = (a + a†)/√2, so ⟨x|α⟩ peaks at x = √2 α and the
//! sign of x distinguishes |α⟩ from |−α⟩ for α of a few or more. The
//! half-line overlap matrix Q with entries Q_nm = ∫₀^∞ ψ_n ψ_m dx turns
//! that sign bin into a Fock-basis projector.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

const TAIL_LIMIT: f64 = 1e-10;
const TAIL_WINDOW: usize = 5;

/// Single optical mode as amplitudes over photon numbers 0..=cutoff.
#[derive(Debug, Clone)]
pub struct ModeState {
    pub amplitudes: Vec<Complex64>,
    pub cutoff: usize,
}

/// Kerr Hamiltonian H = Ω n̂^k; evolution for time t multiplies the
/// amplitude at photon number n by e^{−iΩt n^k}.
#[derive(Debug, Clone, Copy)]
pub struct KerrParams {
    pub omega: f64,
    pub k: u32,
    pub t: f64,
}

impl KerrParams {
    /// Quarter-period pulse U(π/2Ω): maps |α⟩ to e^{−iπ/4}(|α⟩+i|−α⟩)/√2
    /// for k = 2.
    pub fn quarter(omega: f64) -> Self {
        KerrParams { omega, k: 2, t: std::f64::consts::FRAC_PI_2 / omega }
    }

    /// Inverse of the quarter-period pulse, realized as evolution for
    /// t = 3π/2Ω (the k = 2 revival period is 2π/Ω).
    pub fn uy(omega: f64) -> Self {
        KerrParams { omega, k: 2, t: 3.0 * std::f64::consts::FRAC_PI_2 / omega }
    }

    /// Full revival U(2π/Ω), the identity up to global phase for k = 2.
    pub fn full_period(omega: f64) -> Self {
        KerrParams { omega, k: 2, t: 2.0 * std::f64::consts::PI / omega }
    }
}

/// Two modes A and B; `amplitudes[(n_a, n_b)]`.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    pub amplitudes: DMatrix<Complex64>,
    pub cutoff_a: usize,
    pub cutoff_b: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Spin setting for a continuous-variable mode: `Z` reads the sign of x
/// directly, `Y` first applies the inverse quarter-period Kerr pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CvSetting {
    Z,
    Y,
}

/// Sign-bin joint probabilities; `pp` is P(+,+) and so on.
#[derive(Debug, Clone, Copy)]
pub struct SignProbabilities {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl SignProbabilities {
    pub fn moment(&self) -> f64 {
        self.pp + self.mm - self.pm - self.mp
    }
}

/// Cutoff adequate for a coherent state of amplitude magnitude `alpha_mag`.
pub fn default_cutoff(alpha_mag: f64) -> usize {
    (alpha_mag * alpha_mag + 10.0 * alpha_mag + 20.0).ceil() as usize
}

fn check_tail(amps: &[Complex64], cutoff: usize, alpha_mag: f64) -> Result<()> {
    let start = cutoff.saturating_sub(TAIL_WINDOW) + 1;
    let tail: f64 = amps[start..].iter().map(|a| a.norm_sqr()).sum();
    if tail >= TAIL_LIMIT {
        return Err(Error::CutoffInadequate { cutoff, alpha_mag, tail, limit: TAIL_LIMIT });
    }
    Ok(())
}

fn normalize(amps: &mut [Complex64]) {
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
}

/// Coherent state |α⟩ with amplitudes ∝ α^n/√(n!).
pub fn coherent_state(alpha: Complex64, cutoff: usize) -> Result<ModeState> {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = Complex64::new(1.0, 0.0);
    amps.push(a);
    for n in 0..cutoff {
        a *= alpha / ((n + 1) as f64).sqrt();
        amps.push(a);
    }
    normalize(&mut amps);
    check_tail(&amps, cutoff, alpha.norm())?;
    Ok(ModeState { amplitudes: amps, cutoff })
}

/// Raw (unnormalized as a set) coherent amplitudes e^{−|α|²/2} α^n/√(n!).
fn coherent_amps(alpha: f64, cutoff: usize) -> Vec<f64> {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = (-0.5 * alpha * alpha).exp();
    amps.push(a);
    for n in 0..cutoff {
        a *= alpha / ((n + 1) as f64).sqrt();
        amps.push(a);
    }
    amps
}

/// Entangled cat state N(|α⟩|−β⟩ − |−α⟩|β⟩) with
/// N = (1/√2){1 − exp(−2α² − 2β²)}^{−1/2}.
pub fn cat_bell_state(alpha: f64, beta: f64) -> Result<TwoModeState> {
    if alpha <= 0.0 || beta <= 0.0 {
        return Err(Error::invalid("cat_bell_state requires positive real alpha, beta"));
    }
    let ca = default_cutoff(alpha);
    let cb = default_cutoff(beta);
    let ap = coherent_amps(alpha, ca);
    let bp = coherent_amps(beta, cb);
    // |−α⟩ amplitudes are (−1)^n times those of |α⟩
    let norm = std::f64::consts::FRAC_1_SQRT_2
        / (1.0 - (-2.0 * alpha * alpha - 2.0 * beta * beta).exp()).sqrt();
    let mut m = DMatrix::zeros(ca + 1, cb + 1);
    for n in 0..=ca {
        let sa = if n % 2 == 0 { 1.0 } else { -1.0 };
        for p in 0..=cb {
            let sb = if p % 2 == 0 { 1.0 } else { -1.0 };
            let v = norm * (ap[n] * sb * bp[p] - sa * ap[n] * bp[p]);
            m[(n, p)] = Complex64::new(v, 0.0);
        }
    }
    let fro: f64 = m.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if (fro - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!(
            "cat Bell normalization drifted: norm = {fro:.12}"
        )));
    }
    let row_mass: Vec<Complex64> = (0..=ca)
        .map(|n| Complex64::new(m.row(n).iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt(), 0.0))
        .collect();
    check_tail(&row_mass, ca, alpha)?;
    Ok(TwoModeState { amplitudes: m, cutoff_a: ca, cutoff_b: cb })
}

/// Product state |ψ_a⟩ ⊗ |ψ_b⟩.
pub fn product_state(a: &ModeState, b: &ModeState) -> TwoModeState {
    let mut m = DMatrix::zeros(a.cutoff + 1, b.cutoff + 1);
    for n in 0..=a.cutoff {
        for p in 0..=b.cutoff {
            m[(n, p)] = a.amplitudes[n] * b.amplitudes[p];
        }
    }
    TwoModeState { amplitudes: m, cutoff_a: a.cutoff, cutoff_b: b.cutoff }
}

fn kerr_phases(cutoff: usize, params: KerrParams) -> Vec<Complex64> {
    // Ωt n^k with n^k integer, so reduce Ωt mod 2π first to keep the
    // phase argument small at large n
    let wt = (params.omega * params.t).rem_euclid(2.0 * std::f64::consts::PI);
    (0..=cutoff)
        .map(|n| {
            let nk = (n as f64).powi(params.k as i32);
            Complex64::from_polar(1.0, -(wt * nk).rem_euclid(2.0 * std::f64::consts::PI))
        })
        .collect()
}

/// Diagonal Kerr evolution e^{−iΩt n̂^k}.
pub fn kerr_evolve(state: &ModeState, params: KerrParams) -> ModeState {
    let phases = kerr_phases(state.cutoff, params);
    let amps = state
        .amplitudes
        .iter()
        .zip(&phases)
        .map(|(a, p)| a * p)
        .collect();
    ModeState { amplitudes: amps, cutoff: state.cutoff }
}

/// Kerr evolution applied to one mode of a two-mode state.
pub fn kerr_evolve_mode(state: &TwoModeState, mode: Mode, params: KerrParams) -> TwoModeState {
    let mut m = state.amplitudes.clone();
    match mode {
        Mode::A => {
            let phases = kerr_phases(state.cutoff_a, params);
            for n in 0..=state.cutoff_a {
                for p in 0..=state.cutoff_b {
                    m[(n, p)] *= phases[n];
                }
            }
        }
        Mode::B => {
            let phases = kerr_phases(state.cutoff_b, params);
            for n in 0..=state.cutoff_a {
                for p in 0..=state.cutoff_b {
                    m[(n, p)] *= phases[p];
                }
            }
        }
    }
    TwoModeState { amplitudes: m, cutoff_a: state.cutoff_a, cutoff_b: state.cutoff_b }
}

/// Inverse of the quarter-period pulse: U_y ∘ U(π/2Ω) = identity.
pub fn apply_uy(state: &ModeState, omega: f64) -> ModeState {
    kerr_evolve(state, KerrParams::uy(omega))
}

/// Overlap fidelity |⟨a|b⟩|², insensitive to global phase.
pub fn fidelity(a: &ModeState, b: &ModeState) -> f64 {
    let n = a.amplitudes.len().min(b.amplitudes.len());
    let ip: Complex64 = (0..n).map(|i| a.amplitudes[i].conj() * b.amplitudes[i]).sum();
    ip.norm_sqr()
}

/// Two-mode overlap fidelity |⟨a|b⟩|².
pub fn fidelity_two_mode(a: &TwoModeState, b: &TwoModeState) -> f64 {
    assert_eq!(a.amplitudes.shape(), b.amplitudes.shape());
    let ip: Complex64 = a
        .amplitudes
        .iter()
        .zip(b.amplitudes.iter())
        .map(|(x, y)| x.conj() * y)
        .sum();
    ip.norm_sqr()
}

/// Matrix of half-line overlaps Q_nm = ∫₀^∞ ψ_n(x) ψ_m(x) dx over the
/// oscillator eigenfunctions.
#[derive(Debug, Clone)]
pub struct HalfLineOverlap {
    pub q: DMatrix<f64>,
}

/// Oscillator eigenfunctions ψ_0..ψ_nmax at x, by the stable recurrence
/// ψ_{n+1} = √(2/(n+1)) x ψ_n − √(n/(n+1)) ψ_{n−1}.
fn eigenfunctions(x: f64, nmax: usize, out: &mut [f64]) {
    out[0] = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    if nmax == 0 {
        return;
    }
    out[1] = (2.0f64).sqrt() * x * out[0];
    for n in 1..nmax {
        let np1 = (n + 1) as f64;
        out[n + 1] = (2.0 / np1).sqrt() * x * out[n] - (n as f64 / np1).sqrt() * out[n - 1];
    }
}

fn halfline_overlap_with(cutoff: usize, panels: usize, points: usize) -> DMatrix<f64> {
    // the highest eigenfunction's classical turning point is √(2n+1);
    // padding by 10 makes the neglected tail far below 1e-12
    let x_max = ((2 * cutoff + 1) as f64).sqrt() + 10.0;
    let (nodes, weights) = quad::gauss_legendre(points);
    let h = x_max / panels as f64;
    let mut q = DMatrix::zeros(cutoff + 1, cutoff + 1);
    let mut psi = vec![0.0; cutoff + 1];
    for p in 0..panels {
        let mid = p as f64 * h + 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            let xv = mid + 0.5 * h * x;
            eigenfunctions(xv, cutoff, &mut psi);
            let wv = w * 0.5 * h;
            for n in 0..=cutoff {
                for m in n..=cutoff {
                    q[(n, m)] += wv * psi[n] * psi[m];
                }
            }
        }
    }
    for n in 0..=cutoff {
        for m in 0..n {
            q[(n, m)] = q[(m, n)];
        }
    }
    q
}

/// Compute the half-line overlap matrix by composite Gauss-Legendre
/// quadrature, with a panel-refinement convergence check.
pub fn halfline_overlap(cutoff: usize) -> Result<HalfLineOverlap> {
    let panels = (cutoff / 2).max(8);
    let points = 24;
    let coarse = halfline_overlap_with(cutoff, panels, points);
    let fine = halfline_overlap_with(cutoff, 2 * panels, points);
    let disagreement = (&coarse - &fine).abs().max();
    if disagreement > 1e-11 {
        return Err(Error::QuadratureNotConverged { disagreement });
    }
    Ok(HalfLineOverlap { q: fine })
}

/// Joint probabilities of the sign-of-x readout on both modes.
/// P(s_A, s_B) = ⟨ψ| Π_{s_A} ⊗ Π_{s_B} |ψ⟩ with Π_+ = Q and Π_− = I − Q.
/// x = 0 counts as "+" (measure zero, pinned for determinism).
pub fn sign_probabilities(
    state: &TwoModeState,
    qa: &HalfLineOverlap,
    qb: &HalfLineOverlap,
) -> SignProbabilities {
    let c = &state.amplitudes;
    let qa_c = qa.q.map(|v| Complex64::new(v, 0.0)) * c;
    let c_qb = c * qb.q.map(|v| Complex64::new(v, 0.0));
    let qa_c_qb = &qa_c * qb.q.map(|v| Complex64::new(v, 0.0));
    let dot = |d: &DMatrix<Complex64>| -> f64 {
        c.iter().zip(d.iter()).map(|(x, y)| (x.conj() * y).re).sum()
    };
    let pp = dot(&qa_c_qb);
    let pa = dot(&qa_c);
    let pb = dot(&c_qb);
    SignProbabilities {
        pp,
        pm: pa - pp,
        mp: pb - pp,
        mm: 1.0 - pa - pb + pp,
    }
}

/// Reduced density matrix of one mode, ρ_nm = Σ_b C[n,b] C*[m,b] for A.
pub fn reduced_mode(state: &TwoModeState, mode: Mode) -> DMatrix<Complex64> {
    let c = &state.amplitudes;
    match mode {
        Mode::A => c * c.adjoint(),
        Mode::B => c.adjoint() * c,
    }
}

/// ⟨S^A S^B⟩ on a two-mode state for sign-bin readout after the optional
/// per-mode inverse rotation selected by the settings.
pub fn spin_moment_cv(
    state: &TwoModeState,
    setting_a: CvSetting,
    setting_b: CvSetting,
    qa: &HalfLineOverlap,
    qb: &HalfLineOverlap,
) -> f64 {
    let omega = 1.0;
    let mut s = state.clone();
    if setting_a == CvSetting::Y {
        s = kerr_evolve_mode(&s, Mode::A, KerrParams::uy(omega));
    }
    if setting_b == CvSetting::Y {
        s = kerr_evolve_mode(&s, Mode::B, KerrParams::uy(omega));
    }
    sign_probabilities(&s, qa, qb).moment()
}
