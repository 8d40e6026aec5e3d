//! Exact n-qubit state vectors partitioned into sites.
//!
//! Qubit q is bit q of the basis index (little endian) and ↑ is bit value
//! 0, so the pointer readout of a site is the parity of its bits: an even
//! number of ↓ gives collective spin +1.
//!
//! Measurement settings follow the two-stage model: a reversible setting
//! unitary rotates the site so that the computational-basis pointer
//! readout yields the chosen spin component. The setting unitary is the
//! inverse of the preparation direction (rotation on the site's first
//! qubit followed by a CNOT cascade), i.e. cascade first, then the
//! adjoint rotation.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register accepted by the constructors.
pub const QUBIT_BOUND: usize = 24;

#[derive(Debug, Clone)]
pub struct QubitState {
    pub amplitudes: Vec<Complex64>,
    /// Qubit indices of each site; together they partition 0..n.
    pub site_map: Vec<Vec<usize>>,
}

/// Convex mixture of pure states over a common site map.
#[derive(Debug, Clone)]
pub struct MixedState {
    pub components: Vec<(f64, QubitState)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Axis> {
        match s {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(Error::UnsupportedSetting { setting: other.to_string() }),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// A measurement setting: one of the three axes, or a spin direction
/// sin θ σ_x + cos θ σ_z in the xz plane (used for the four-correlator
/// Bell quantity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setting {
    Axis(Axis),
    XzAngle(f64),
}

impl Setting {
    /// Rotation angles (θ, ϑ) of the preparation unitary, or None when
    /// the setting is the identity (z).
    pub fn angles(&self) -> Option<(f64, f64)> {
        match self {
            Setting::Axis(Axis::Z) => None,
            Setting::Axis(Axis::X) => Some((std::f64::consts::FRAC_PI_2, 0.0)),
            Setting::Axis(Axis::Y) => {
                Some((std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2))
            }
            Setting::XzAngle(theta) => {
                if *theta == 0.0 {
                    None
                } else {
                    Some((*theta, 0.0))
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Setting::Axis(a) => a.label().to_string(),
            Setting::XzAngle(t) => format!("xz({t})"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SettingChoice {
    pub site: usize,
    pub setting: Setting,
}

impl SettingChoice {
    pub fn new(site: usize, setting: Setting) -> Self {
        SettingChoice { site, setting }
    }

    pub fn axis(site: usize, axis: Axis) -> Self {
        SettingChoice { site, setting: Setting::Axis(axis) }
    }
}

impl QubitState {
    pub fn num_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn num_sites(&self) -> usize {
        self.site_map.len()
    }

    pub fn site_mask(&self, site: usize) -> usize {
        self.site_map[site].iter().fold(0, |m, q| m | (1 << q))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn check_bound(qubits: usize) -> Result<()> {
    if qubits > QUBIT_BOUND {
        return Err(Error::RegisterTooLarge { qubits, bound: QUBIT_BOUND });
    }
    Ok(())
}

fn contiguous_sites(sites: usize, qubits_per_site: usize) -> Vec<Vec<usize>> {
    (0..sites)
        .map(|s| (s * qubits_per_site..(s + 1) * qubits_per_site).collect())
        .collect()
}

/// Two-qubit singlet (|↑↓⟩ − |↓↑⟩)/√2, one qubit per site.
pub fn bell_state() -> QubitState {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    amps[0b10] = s;
    amps[0b01] = -s;
    QubitState { amplitudes: amps, site_map: contiguous_sites(2, 1) }
}

/// Product state |↑⟩_A |↓⟩_B.
pub fn product_up_down() -> QubitState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    amps[0b10] = Complex64::new(1.0, 0.0);
    QubitState { amplitudes: amps, site_map: contiguous_sites(2, 1) }
}

/// GHZ state (|↑⟩^{⊗sn} − |↓⟩^{⊗sn})/√2 over `sites` sites of
/// `qubits_per_site` qubits each.
pub fn ghz_sites(sites: usize, qubits_per_site: usize) -> Result<QubitState> {
    if qubits_per_site == 0 {
        return Err(Error::invalid("qubits_per_site must be at least 1"));
    }
    let n = sites * qubits_per_site;
    check_bound(n)?;
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = s;
    amps[(1usize << n) - 1] = -s;
    Ok(QubitState { amplitudes: amps, site_map: contiguous_sites(sites, qubits_per_site) })
}

/// Three-site GHZ state.
pub fn ghz_state(qubits_per_site: usize) -> Result<QubitState> {
    ghz_sites(3, qubits_per_site)
}

/// Two-site GHZ state.
pub fn two_site_ghz(qubits_per_site: usize) -> Result<QubitState> {
    ghz_sites(2, qubits_per_site)
}

/// The 2×2 setting rotation [[cos θ/2, −sin θ/2],
/// [e^{iϑ} sin θ/2, e^{iϑ} cos θ/2]].
pub fn rotation(theta: f64, vartheta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new((theta / 2.0).sin(), 0.0);
    let ph = Complex64::from_polar(1.0, vartheta);
    [[c, -s], [ph * s, ph * c]]
}

fn adjoint(m: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// Apply a 2×2 matrix to one qubit.
pub fn apply_one_qubit(state: &QubitState, qubit: usize, m: [[Complex64; 2]; 2]) -> QubitState {
    let bit = 1usize << qubit;
    let mut amps = state.amplitudes.clone();
    for i in 0..amps.len() {
        if i & bit == 0 {
            let a0 = amps[i];
            let a1 = amps[i | bit];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
    QubitState { amplitudes: amps, site_map: state.site_map.clone() }
}

/// Setting rotation on one qubit.
pub fn single_qubit_rotation(
    state: &QubitState,
    qubit: usize,
    theta: f64,
    vartheta: f64,
) -> QubitState {
    apply_one_qubit(state, qubit, rotation(theta, vartheta))
}

/// CNOT with the given control and target qubits.
pub fn cnot(state: &QubitState, control: usize, target: usize) -> QubitState {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    let mut amps = state.amplitudes.clone();
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
    QubitState { amplitudes: amps, site_map: state.site_map.clone() }
}

/// CNOT cascade within a site: control is the site's first qubit,
/// targets ascend through the rest. Self-inverse.
pub fn cnot_cascade(state: &QubitState, site: usize) -> QubitState {
    let qubits = &state.site_map[site];
    let mut s = state.clone();
    for &t in &qubits[1..] {
        s = cnot(&s, qubits[0], t);
    }
    s
}

/// Apply the measurement-setting unitary for `choice`: the inverse of the
/// preparation direction, so the cascade acts first and the adjoint
/// rotation second. z (and θ = 0) is the identity.
pub fn apply_setting(state: &QubitState, choice: SettingChoice) -> QubitState {
    match choice.setting.angles() {
        None => state.clone(),
        Some((theta, vartheta)) => {
            let s = cnot_cascade(state, choice.site);
            let first = state.site_map[choice.site][0];
            apply_one_qubit(&s, first, adjoint(rotation(theta, vartheta)))
        }
    }
}

/// Inverse of `apply_setting`.
pub fn undo_setting(state: &QubitState, choice: SettingChoice) -> QubitState {
    match choice.setting.angles() {
        None => state.clone(),
        Some((theta, vartheta)) => {
            let first = state.site_map[choice.site][0];
            let s = apply_one_qubit(state, first, rotation(theta, vartheta));
            cnot_cascade(&s, choice.site)
        }
    }
}

/// Replace the setting a site is prepared in: undo the old one, apply the
/// new one.
pub fn change_setting(
    state: &QubitState,
    site: usize,
    old: Setting,
    new: Setting,
) -> QubitState {
    let undone = undo_setting(state, SettingChoice::new(site, old));
    apply_setting(&undone, SettingChoice::new(site, new))
}

fn parity(index: usize, mask: usize) -> f64 {
    if (index & mask).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Expectation of the product of collective spins over the sites named in
/// `choices`, each measured in its chosen setting.
pub fn moment(state: &QubitState, choices: &[SettingChoice]) -> f64 {
    let mut s = state.clone();
    let mut mask = 0usize;
    for c in choices {
        s = apply_setting(&s, *c);
        mask |= state.site_mask(c.site);
    }
    s.amplitudes
        .iter()
        .enumerate()
        .map(|(i, a)| parity(i, mask) * a.norm_sqr())
        .sum()
}

/// Weight-averaged moment of a mixture.
pub fn mixed_moment(state: &MixedState, choices: &[SettingChoice]) -> f64 {
    state
        .components
        .iter()
        .map(|(w, psi)| w * moment(psi, choices))
        .sum()
}

/// Joint distribution of the collective-spin readouts of the listed
/// sites, after applying all the given settings. The returned vector has
/// length 2^sites.len(); bit j of the index is 1 when site `sites[j]`
/// reads −1.
pub fn joint_site_distribution(
    state: &QubitState,
    choices: &[SettingChoice],
    sites: &[usize],
) -> Vec<f64> {
    let mut s = state.clone();
    for c in choices {
        s = apply_setting(&s, *c);
    }
    let masks: Vec<usize> = sites.iter().map(|&j| state.site_mask(j)).collect();
    let mut dist = vec![0.0; 1 << sites.len()];
    for (i, a) in s.amplitudes.iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let mut key = 0usize;
        for (j, mask) in masks.iter().enumerate() {
            if (i & mask).count_ones() % 2 == 1 {
                key |= 1 << j;
            }
        }
        dist[key] += p;
    }
    dist
}

/// Joint distribution of a mixture.
pub fn mixed_joint_site_distribution(
    state: &MixedState,
    choices: &[SettingChoice],
    sites: &[usize],
) -> Vec<f64> {
    let mut dist = Vec::new();
    for (w, psi) in &state.components {
        let d = joint_site_distribution(psi, choices, sites);
        if dist.is_empty() {
            dist = vec![0.0; d.len()];
        }
        for (acc, v) in dist.iter_mut().zip(&d) {
            *acc += w * v;
        }
    }
    dist
}

/// Project onto the subspace where the site's collective spin reads
/// `outcome` (±1); returns the outcome probability and the normalized
/// post-readout state. Probability 0 returns the zero state.
pub fn project_site_parity(state: &QubitState, site: usize, outcome: i8) -> (f64, QubitState) {
    let mask = state.site_mask(site);
    let want = outcome as f64;
    let mut amps = state.amplitudes.clone();
    let mut prob = 0.0;
    for (i, a) in amps.iter_mut().enumerate() {
        if parity(i, mask) == want {
            prob += a.norm_sqr();
        } else {
            *a = Complex64::new(0.0, 0.0);
        }
    }
    if prob > 0.0 {
        let inv = 1.0 / prob.sqrt();
        for a in amps.iter_mut() {
            *a *= inv;
        }
    }
    (prob, QubitState { amplitudes: amps, site_map: state.site_map.clone() })
}

/// Reduced density matrix over the listed qubits (in the given order).
pub fn reduced_density(state: &QubitState, qubits: &[usize]) -> DMatrix<Complex64> {
    let k = qubits.len();
    let n = state.num_qubits();
    let rest: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let dim = 1usize << k;
    let mut rho = DMatrix::zeros(dim, dim);
    let build = |sub: usize, env: usize| -> usize {
        let mut idx = 0usize;
        for (j, &q) in qubits.iter().enumerate() {
            if sub & (1 << j) != 0 {
                idx |= 1 << q;
            }
        }
        for (j, &q) in rest.iter().enumerate() {
            if env & (1 << j) != 0 {
                idx |= 1 << q;
            }
        }
        idx
    };
    for env in 0..(1usize << rest.len()) {
        for a in 0..dim {
            let ia = build(a, env);
            for b in 0..dim {
                let ib = build(b, env);
                rho[(a, b)] += state.amplitudes[ia] * state.amplitudes[ib].conj();
            }
        }
    }
    rho
}

/// Reduced 2×2 density matrix of a site's collective {|↑…↑⟩, |↓…↓⟩}
/// subspace; errors if the site has weight outside that subspace.
pub fn reduced_collective(state: &QubitState, site: usize) -> Result<DMatrix<Complex64>> {
    let rho = reduced_density(state, &state.site_map[site]);
    let dim = rho.nrows();
    let top = dim - 1;
    let inside = (rho[(0, 0)] + rho[(top, top)]).re;
    let leakage = 1.0 - inside;
    if leakage > 1e-10 {
        return Err(Error::NotATwoStateSubspace { site, leakage });
    }
    let mut two = DMatrix::zeros(2, 2);
    two[(0, 0)] = rho[(0, 0)];
    two[(0, 1)] = rho[(0, top)];
    two[(1, 0)] = rho[(top, 0)];
    two[(1, 1)] = rho[(top, top)];
    Ok(two)
}

/// Variances (Δσ_x², Δσ_y², Δσ_z²) of a site's collective qubit.
pub fn pauli_variances(state: &QubitState, site: usize) -> Result<(f64, f64, f64)> {
    let rho = reduced_collective(state, site)?;
    let mx = (rho[(0, 1)] + rho[(1, 0)]).re;
    let my = ((rho[(0, 1)] - rho[(1, 0)]) * Complex64::new(0.0, 1.0)).re;
    let mz = (rho[(0, 0)] - rho[(1, 1)]).re;
    Ok((1.0 - mx * mx, 1.0 - my * my, 1.0 - mz * mz))
}

/// Mean values (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩) of a site's collective qubit.
pub fn pauli_means(state: &QubitState, site: usize) -> Result<(f64, f64, f64)> {
    let rho = reduced_collective(state, site)?;
    let mx = (rho[(0, 1)] + rho[(1, 0)]).re;
    let my = ((rho[(0, 1)] - rho[(1, 0)]) * Complex64::new(0.0, 1.0)).re;
    let mz = (rho[(0, 0)] - rho[(1, 1)]).re;
    Ok((mx, my, mz))
}

/// Fidelity |⟨a|b⟩|².
pub fn state_fidelity(a: &QubitState, b: &QubitState) -> f64 {
    let ip: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    ip.norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_state(n: usize, seed: u64, site_map: Vec<Vec<usize>>) -> QubitState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
        QubitState { amplitudes: amps, site_map }
    }

    fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a.kronecker(b)
    }

    fn sigma(axis: Axis) -> DMatrix<Complex64> {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match axis {
            Axis::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Axis::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            Axis::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }

    /// Independent oracle for one-qubit-per-site moments: contract the
    /// state with the Kronecker product of Pauli matrices directly,
    /// without any setting rotation.
    fn kron_moment(state: &QubitState, axes: &[Axis]) -> f64 {
        // qubit 0 is the least-significant bit, so it is the rightmost
        // Kronecker factor
        let mut op = DMatrix::identity(1, 1);
        for axis in axes.iter().rev() {
            op = kron(&op, &sigma(*axis));
        }
        let v = nalgebra::DVector::from_vec(state.amplitudes.clone());
        (v.adjoint() * op * v)[(0, 0)].re
    }

    #[test]
    fn bell_amplitudes() {
        let b = bell_state();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(b.amplitudes[0b10].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(b.amplitudes[0b01].re, -s, epsilon = 1e-15);
        assert_eq!(b.amplitudes[0b00].norm(), 0.0);
        assert_eq!(b.amplitudes[0b11].norm(), 0.0);
    }

    #[test]
    fn bell_moments_anticorrelate_in_all_axes() {
        let b = bell_state();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let m = moment(
                &b,
                &[SettingChoice::axis(0, axis), SettingChoice::axis(1, axis)],
            );
            assert_abs_diff_eq!(m, -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(kron_moment(&b, &[axis, axis]), -1.0, epsilon = 1e-12);
        }
        let zy = moment(
            &b,
            &[SettingChoice::axis(0, Axis::Z), SettingChoice::axis(1, Axis::Y)],
        );
        assert_abs_diff_eq!(zy, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rotation_examples() {
        let up = QubitState {
            amplitudes: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            site_map: vec![vec![0]],
        };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r0 = single_qubit_rotation(&up, 0, 0.0, 0.0);
        assert!(state_fidelity(&r0, &up) >= 1.0 - 1e-14);
        let rx = single_qubit_rotation(&up, 0, std::f64::consts::FRAC_PI_2, 0.0);
        assert_abs_diff_eq!(rx.amplitudes[0].re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(rx.amplitudes[1].re, s, epsilon = 1e-14);
        let ry = single_qubit_rotation(&up, 0, std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(ry.amplitudes[0].re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(ry.amplitudes[1].im, s, epsilon = 1e-14);
    }

    #[test]
    fn cascade_builds_site_cats() {
        // N = 2: rotation θ=π/2 then cascade gives (|↑↑⟩+|↓↓⟩)/√2
        let mut up2 = QubitState {
            amplitudes: vec![Complex64::new(0.0, 0.0); 4],
            site_map: vec![vec![0, 1]],
        };
        up2.amplitudes[0] = Complex64::new(1.0, 0.0);
        let r = single_qubit_rotation(&up2, 0, std::f64::consts::FRAC_PI_2, 0.0);
        let c = cnot_cascade(&r, 0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(c.amplitudes[0b00].re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(c.amplitudes[0b11].re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(c.amplitudes[0b01].norm(), 0.0, epsilon = 1e-14);

        // N = 3, ϑ = π/2: (|↑↑↑⟩ + i|↓↓↓⟩)/√2; oracle by explicit matrix
        // product of the CNOT permutations on the rotated vector
        let mut up3 = QubitState {
            amplitudes: vec![Complex64::new(0.0, 0.0); 8],
            site_map: vec![vec![0, 1, 2]],
        };
        up3.amplitudes[0] = Complex64::new(1.0, 0.0);
        let r = single_qubit_rotation(
            &up3,
            0,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
        );
        let c = cnot_cascade(&r, 0);
        assert_abs_diff_eq!(c.amplitudes[0b000].re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(c.amplitudes[0b111].im, s, epsilon = 1e-14);
        let mut oracle = vec![Complex64::new(0.0, 0.0); 8];
        for (i, a) in r.amplitudes.iter().enumerate() {
            let mut j = i;
            if j & 1 != 0 {
                j ^= 0b010;
            }
            if j & 1 != 0 {
                j ^= 0b100;
            }
            oracle[j] += a;
        }
        for (x, y) in c.amplitudes.iter().zip(&oracle) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn cascade_on_single_qubit_site_is_identity() {
        let b = bell_state();
        let c = cnot_cascade(&b, 0);
        assert!(state_fidelity(&b, &c) >= 1.0 - 1e-14);
    }

    #[test]
    fn ghz_amplitudes_and_moments_n1() {
        let g = ghz_state(1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(g.amplitudes[0b000].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(g.amplitudes[0b111].re, -s, epsilon = 1e-15);
        let cases = [
            ([Axis::X, Axis::X, Axis::X], -1.0),
            ([Axis::X, Axis::Y, Axis::Y], 1.0),
            ([Axis::Y, Axis::X, Axis::Y], 1.0),
            ([Axis::Y, Axis::Y, Axis::X], 1.0),
        ];
        for (axes, expect) in cases {
            let choices: Vec<SettingChoice> = axes
                .iter()
                .enumerate()
                .map(|(i, a)| SettingChoice::axis(i, *a))
                .collect();
            assert_abs_diff_eq!(moment(&g, &choices), expect, epsilon = 1e-12);
            assert_abs_diff_eq!(kron_moment(&g, &axes), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn ghz_moments_match_across_site_sizes() {
        for n in [2usize, 3] {
            let g = ghz_state(n).unwrap();
            let cases = [
                ([Axis::X, Axis::X, Axis::X], -1.0),
                ([Axis::X, Axis::Y, Axis::Y], 1.0),
                ([Axis::Y, Axis::X, Axis::Y], 1.0),
                ([Axis::Y, Axis::Y, Axis::X], 1.0),
            ];
            for (axes, expect) in cases {
                let choices: Vec<SettingChoice> = axes
                    .iter()
                    .enumerate()
                    .map(|(i, a)| SettingChoice::axis(i, *a))
                    .collect();
                assert_abs_diff_eq!(moment(&g, &choices), expect, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn register_bound_enforced() {
        match ghz_state(9) {
            Err(Error::RegisterTooLarge { qubits: 27, bound }) => assert_eq!(bound, QUBIT_BOUND),
            other => panic!("expected register bound error, got {other:?}"),
        }
    }

    #[test]
    fn settings_are_invertible_and_commute_across_sites() {
        let state = random_state(6, 7, contiguous_sites(3, 2));
        for setting in [
            Setting::Axis(Axis::X),
            Setting::Axis(Axis::Y),
            Setting::XzAngle(0.83),
        ] {
            let c = SettingChoice::new(1, setting);
            let back = undo_setting(&apply_setting(&state, c), c);
            assert!(state_fidelity(&state, &back) >= 1.0 - 1e-12);
        }
        let a = SettingChoice::axis(0, Axis::X);
        let b = SettingChoice::axis(2, Axis::Y);
        let ab = apply_setting(&apply_setting(&state, a), b);
        let ba = apply_setting(&apply_setting(&state, b), a);
        for (x, y) in ab.amplitudes.iter().zip(&ba.amplitudes) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn settings_preserve_norm_on_random_states() {
        for seed in 0..10 {
            let state = random_state(4, seed, contiguous_sites(2, 2));
            for setting in [Setting::Axis(Axis::X), Setting::Axis(Axis::Y), Setting::XzAngle(1.3)] {
                let s = apply_setting(&state, SettingChoice::new(0, setting));
                assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn xz_angle_reproduces_singlet_correlator() {
        // E(θ, φ) = −cos(θ − φ) on the singlet
        let b = bell_state();
        for (theta, phi) in [(0.0, 0.7), (0.4, 2.0), (1.2, 1.2), (std::f64::consts::FRAC_PI_2, 0.0)] {
            let m = moment(
                &b,
                &[
                    SettingChoice::new(0, Setting::XzAngle(theta)),
                    SettingChoice::new(1, Setting::XzAngle(phi)),
                ],
            );
            assert_abs_diff_eq!(m, -(theta - phi).cos(), epsilon = 1e-12);
        }
    }

    #[test]
    fn mixed_moment_matches_density_contraction() {
        // mixture of the GHZ state and a product state on 3 qubits,
        // checked against tr(ρ σ_x⊗σ_y⊗σ_y) built from dense matrices
        let g = ghz_state(1).unwrap();
        let mut prod = QubitState {
            amplitudes: vec![Complex64::new(0.0, 0.0); 8],
            site_map: contiguous_sites(3, 1),
        };
        prod.amplitudes[0b101] = Complex64::new(1.0, 0.0);
        let mix = MixedState { components: vec![(0.3, g.clone()), (0.7, prod.clone())] };
        let axes = [Axis::X, Axis::Y, Axis::Y];
        let choices: Vec<SettingChoice> = axes
            .iter()
            .enumerate()
            .map(|(i, a)| SettingChoice::axis(i, *a))
            .collect();
        let got = mixed_moment(&mix, &choices);
        let oracle = 0.3 * kron_moment(&g, &axes) + 0.7 * kron_moment(&prod, &axes);
        assert_abs_diff_eq!(got, oracle, epsilon = 1e-12);
    }

    #[test]
    fn joint_distribution_sums_to_one_and_matches_moment() {
        let g = ghz_state(2).unwrap();
        let choices = [
            SettingChoice::axis(0, Axis::X),
            SettingChoice::axis(1, Axis::Y),
            SettingChoice::axis(2, Axis::Y),
        ];
        let dist = joint_site_distribution(&g, &choices, &[0, 1, 2]);
        assert_abs_diff_eq!(dist.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        let m: f64 = dist
            .iter()
            .enumerate()
            .map(|(k, p)| if (k as u32).count_ones() % 2 == 0 { *p } else { -p })
            .sum();
        assert_abs_diff_eq!(m, moment(&g, &choices), epsilon = 1e-12);
    }

    #[test]
    fn parity_projection_partitions_the_state() {
        let g = ghz_state(1).unwrap();
        let s = apply_setting(&g, SettingChoice::axis(0, Axis::X));
        let (p_plus, post_plus) = project_site_parity(&s, 0, 1);
        let (p_minus, post_minus) = project_site_parity(&s, 0, -1);
        assert_abs_diff_eq!(p_plus + p_minus, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(post_plus.norm_sqr(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(post_minus.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pauli_variance_examples() {
        let mut up = QubitState {
            amplitudes: vec![Complex64::new(0.0, 0.0); 2],
            site_map: vec![vec![0]],
        };
        up.amplitudes[0] = Complex64::new(1.0, 0.0);
        let (vx, vy, vz) = pauli_variances(&up, 0).unwrap();
        assert_abs_diff_eq!(vx, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vy, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vz, 0.0, epsilon = 1e-12);

        // Bell-state site reduces to the maximally mixed state
        let b = bell_state();
        let (vx, vy, vz) = pauli_variances(&b, 0).unwrap();
        assert_abs_diff_eq!(vx + vy + vz, 3.0, epsilon = 1e-12);

        // any pure qubit state has total variance 2
        for seed in 0..5 {
            let s = random_state(1, seed, vec![vec![0]]);
            let (vx, vy, vz) = pauli_variances(&s, 0).unwrap();
            assert_abs_diff_eq!(vx + vy + vz, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn leakage_out_of_collective_subspace_is_an_error() {
        // |↑↓⟩ within a 2-qubit site is outside span{|↑↑⟩, |↓↓⟩}
        let mut s = QubitState {
            amplitudes: vec![Complex64::new(0.0, 0.0); 4],
            site_map: vec![vec![0, 1]],
        };
        s.amplitudes[0b01] = Complex64::new(1.0, 0.0);
        match pauli_variances(&s, 0) {
            Err(Error::NotATwoStateSubspace { site: 0, .. }) => {}
            other => panic!("expected leakage error, got {other:?}"),
        }
    }

    #[test]
    fn reduced_density_of_bell_site_is_maximally_mixed() {
        let b = bell_state();
        let rho = reduced_density(&b, &[0]);
        assert_abs_diff_eq!(rho[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rho[(0, 1)].norm(), 0.0, epsilon = 1e-12);
    }
}
