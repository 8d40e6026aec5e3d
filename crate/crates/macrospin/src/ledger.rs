//! Executable hidden-variable models.
//!
//! Two layers live here. `dmr_search` is the deterministic-realism layer:
//! a brute-force search for ±1 assignments satisfying product
//! constraints, which comes up empty on the GHZ set. The `Ledger` is the
//! weak-realism layer: each pointer-prepared site carries a direct λ
//! value, certainty relations between sites yield inferred values with
//! explicit provenance, and a setting unitary resamples only the rotated
//! site while invalidating the inferences that leaned on it.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubit::{Axis, Setting};

/// Exhaustive-search budget in binary variables.
pub const VARIABLE_BUDGET: usize = 20;

const CERTAINTY: f64 = 1.0 - 1e-9;

/// A full ±1 assignment to (site, axis) variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: BTreeMap<(usize, Axis), i8>,
}

/// Requires the product of the named variables to equal `required`.
#[derive(Debug, Clone)]
pub struct ProductConstraint {
    pub factors: Vec<(usize, Axis)>,
    pub required: i8,
}

/// The four GHZ product constraints over sites 0, 1, 2:
/// xxx = −1, xyy = +1, yxy = +1, yyx = +1.
pub fn ghz_constraints() -> Vec<ProductConstraint> {
    let c = |axes: [Axis; 3], required: i8| ProductConstraint {
        factors: axes.iter().enumerate().map(|(s, a)| (s, *a)).collect(),
        required,
    };
    vec![
        c([Axis::X, Axis::X, Axis::X], -1),
        c([Axis::X, Axis::Y, Axis::Y], 1),
        c([Axis::Y, Axis::X, Axis::Y], 1),
        c([Axis::Y, Axis::Y, Axis::X], 1),
    ]
}

/// All assignments satisfying every constraint, by brute force over the
/// 2^V candidates.
pub fn dmr_search(constraints: &[ProductConstraint]) -> Result<Vec<Assignment>> {
    let vars: BTreeSet<(usize, Axis)> = constraints
        .iter()
        .flat_map(|c| c.factors.iter().copied())
        .collect();
    let vars: Vec<(usize, Axis)> = vars.into_iter().collect();
    if vars.len() > VARIABLE_BUDGET {
        return Err(Error::VariableBudgetExceeded { vars: vars.len(), budget: VARIABLE_BUDGET });
    }
    for c in constraints {
        if c.required != 1 && c.required != -1 {
            return Err(Error::invalid("constraint product must be +1 or -1"));
        }
    }
    let index: BTreeMap<(usize, Axis), usize> =
        vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut found = Vec::new();
    for bits in 0u64..(1u64 << vars.len()) {
        let value = |v: &(usize, Axis)| -> i8 {
            if bits & (1 << index[v]) == 0 {
                1
            } else {
                -1
            }
        };
        let ok = constraints.iter().all(|c| {
            let p: i8 = c.factors.iter().map(value).product();
            p == c.required
        });
        if ok {
            found.push(Assignment {
                values: vars.iter().map(|v| (*v, value(v))).collect(),
            });
        }
    }
    Ok(found)
}

/// A prepared multi-site system the ledger can interrogate: the joint
/// pointer-readout distribution for any vector of settings. Bit j of the
/// distribution index is 1 when site j reads −1.
pub trait PointerSystem {
    fn num_sites(&self) -> usize;
    /// Settings the system can be asked about (used to derive inferred
    /// values).
    fn candidate_settings(&self) -> Vec<Setting>;
    fn joint_distribution(&self, settings: &[Setting]) -> Result<Vec<f64>>;
}

/// Wraps a qubit register; all axes are available.
pub struct QubitPointerSystem {
    pub state: crate::qubit::QubitState,
}

impl PointerSystem for QubitPointerSystem {
    fn num_sites(&self) -> usize {
        self.state.num_sites()
    }

    fn candidate_settings(&self) -> Vec<Setting> {
        vec![Setting::Axis(Axis::X), Setting::Axis(Axis::Y), Setting::Axis(Axis::Z)]
    }

    fn joint_distribution(&self, settings: &[Setting]) -> Result<Vec<f64>> {
        if settings.len() != self.num_sites() {
            return Err(Error::invalid("one setting per site required"));
        }
        let choices: Vec<crate::qubit::SettingChoice> = settings
            .iter()
            .enumerate()
            .map(|(s, set)| crate::qubit::SettingChoice::new(s, *set))
            .collect();
        let sites: Vec<usize> = (0..self.num_sites()).collect();
        Ok(crate::qubit::joint_site_distribution(&self.state, &choices, &sites))
    }
}

/// Wraps a two-mode cat state; only the z and y settings exist, realized
/// by the optional inverse Kerr pulse before the sign readout.
pub struct CatPointerSystem {
    pub state: crate::fock::TwoModeState,
    pub overlap_a: crate::fock::HalfLineOverlap,
    pub overlap_b: crate::fock::HalfLineOverlap,
}

fn cat_setting(setting: Setting) -> Result<crate::fock::CvSetting> {
    match setting {
        Setting::Axis(Axis::Z) => Ok(crate::fock::CvSetting::Z),
        Setting::Axis(Axis::Y) => Ok(crate::fock::CvSetting::Y),
        other => Err(Error::UnsupportedSetting { setting: other.label() }),
    }
}

impl PointerSystem for CatPointerSystem {
    fn num_sites(&self) -> usize {
        2
    }

    fn candidate_settings(&self) -> Vec<Setting> {
        vec![Setting::Axis(Axis::Y), Setting::Axis(Axis::Z)]
    }

    fn joint_distribution(&self, settings: &[Setting]) -> Result<Vec<f64>> {
        if settings.len() != 2 {
            return Err(Error::invalid("two settings required"));
        }
        let sa = cat_setting(settings[0])?;
        let sb = cat_setting(settings[1])?;
        let mut s = self.state.clone();
        let omega = 1.0;
        if sa == crate::fock::CvSetting::Y {
            s = crate::fock::kerr_evolve_mode(&s, crate::fock::Mode::A, crate::fock::KerrParams::uy(omega));
        }
        if sb == crate::fock::CvSetting::Y {
            s = crate::fock::kerr_evolve_mode(&s, crate::fock::Mode::B, crate::fock::KerrParams::uy(omega));
        }
        let p = crate::fock::sign_probabilities(&s, &self.overlap_a, &self.overlap_b);
        Ok(vec![p.pp, p.mp, p.pm, p.mm])
    }
}

/// Which earlier direct value an inference leans on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub site: usize,
    pub setting: Setting,
    pub epoch: u64,
}

/// An inferred λ: the outcome site would show if switched to `setting`,
/// certain given the cited direct values.
#[derive(Debug, Clone, PartialEq)]
pub struct Inferred {
    pub setting: Setting,
    pub value: i8,
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone)]
pub struct SiteRecord {
    pub pointer_setting: Setting,
    pub direct: Option<i8>,
    pub inferred: Vec<Inferred>,
}

#[derive(Debug, Clone)]
pub struct Ledger {
    pub sites: Vec<SiteRecord>,
    pub epoch: u64,
}

impl Ledger {
    pub fn settings(&self) -> Vec<Setting> {
        self.sites.iter().map(|s| s.pointer_setting).collect()
    }

    pub fn direct(&self, site: usize) -> Option<i8> {
        self.sites[site].direct
    }

    pub fn inferred(&self, site: usize, setting: Setting) -> Option<&Inferred> {
        self.sites[site].inferred.iter().find(|i| i.setting == setting)
    }
}

fn sample_index(dist: &[f64], rng: &mut impl Rng) -> usize {
    let total: f64 = dist.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, p) in dist.iter().enumerate() {
        x -= p;
        if x <= 0.0 {
            return i;
        }
    }
    dist.len() - 1
}

/// P(site reads +1 | the fixed sites read their given values) under the
/// joint distribution, or None when the conditioning event has zero mass.
fn conditional_plus(dist: &[f64], site: usize, fixed: &[(usize, i8)]) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (key, p) in dist.iter().enumerate() {
        let matches = fixed
            .iter()
            .all(|(s, v)| (key >> s) & 1 == if *v == 1 { 0 } else { 1 });
        if matches {
            den += p;
            if (key >> site) & 1 == 0 {
                num += p;
            }
        }
    }
    if den <= 1e-300 {
        None
    } else {
        Some(num / den)
    }
}

fn outcome_of(key: usize, site: usize) -> i8 {
    if (key >> site) & 1 == 0 {
        1
    } else {
        -1
    }
}

/// Derive every inference not already present: for each site and each
/// candidate setting other than its pointer setting, check whether the
/// outcome is certain given all other sites' direct values.
fn derive_inferences(ledger: &mut Ledger, system: &dyn PointerSystem) -> Result<()> {
    let n = ledger.sites.len();
    let settings = ledger.settings();
    let epoch = ledger.epoch;
    for site in 0..n {
        for cand in system.candidate_settings() {
            if cand == ledger.sites[site].pointer_setting {
                continue;
            }
            if ledger.inferred(site, cand).is_some() {
                continue;
            }
            let mut hypothetical = settings.clone();
            hypothetical[site] = cand;
            let dist = system.joint_distribution(&hypothetical)?;
            let fixed: Vec<(usize, i8)> = (0..n)
                .filter(|s| *s != site)
                .filter_map(|s| ledger.sites[s].direct.map(|v| (s, v)))
                .collect();
            if fixed.is_empty() {
                continue;
            }
            let Some(p) = conditional_plus(&dist, site, &fixed) else {
                continue;
            };
            let value = if p >= CERTAINTY {
                1
            } else if p <= 1.0 - CERTAINTY {
                -1
            } else {
                continue;
            };
            let provenance = fixed
                .iter()
                .map(|(s, _)| Provenance {
                    site: *s,
                    setting: settings[*s],
                    epoch,
                })
                .collect();
            ledger.sites[site].inferred.push(Inferred { setting: cand, value, provenance });
        }
    }
    Ok(())
}

/// Prepare a ledger for a system whose sites already carry the given
/// settings: sample the direct λ values jointly from the quantum pointer
/// distribution, then populate the certain inferences.
pub fn ledger_init(
    system: &dyn PointerSystem,
    settings: &[Setting],
    rng: &mut impl Rng,
) -> Result<Ledger> {
    if settings.len() != system.num_sites() {
        return Err(Error::invalid("one setting per site required"));
    }
    let dist = system.joint_distribution(settings)?;
    let key = sample_index(&dist, rng);
    let mut ledger = Ledger {
        sites: settings
            .iter()
            .enumerate()
            .map(|(s, set)| SiteRecord {
                pointer_setting: *set,
                direct: Some(outcome_of(key, s)),
                inferred: Vec::new(),
            })
            .collect(),
        epoch: 0,
    };
    derive_inferences(&mut ledger, system)?;
    Ok(ledger)
}

/// A setting unitary at one site: the rotated site's direct λ is
/// resampled from the quantum conditional given the surviving direct
/// values elsewhere; untouched sites keep their direct values bitwise;
/// inferences citing the rotated site are invalidated and certainty is
/// re-derived at the new epoch.
pub fn ledger_apply_unitary(
    ledger: &mut Ledger,
    system: &dyn PointerSystem,
    site: usize,
    new_setting: Setting,
    rng: &mut impl Rng,
) -> Result<()> {
    if new_setting == ledger.sites[site].pointer_setting {
        return Err(Error::invalid("setting unitary must change the site's setting"));
    }
    ledger.epoch += 1;
    ledger.sites[site].pointer_setting = new_setting;
    let settings = ledger.settings();
    let dist = system.joint_distribution(&settings)?;
    let fixed: Vec<(usize, i8)> = (0..ledger.sites.len())
        .filter(|s| *s != site)
        .filter_map(|s| ledger.sites[s].direct.map(|v| (s, v)))
        .collect();
    let p_plus = conditional_plus(&dist, site, &fixed).ok_or_else(|| {
        Error::invalid("surviving direct values have zero joint probability")
    })?;
    let value = if rng.gen::<f64>() < p_plus { 1 } else { -1 };
    ledger.sites[site].direct = Some(value);
    for s in ledger.sites.iter_mut() {
        s.inferred.retain(|inf| inf.provenance.iter().all(|pr| pr.site != site));
    }
    ledger.sites[site]
        .inferred
        .retain(|inf| inf.setting != new_setting);
    derive_inferences(ledger, system)?;
    Ok(())
}

/// One Monte Carlo replay: init at `initial`, apply the setting changes
/// in order, return the product of the listed sites' direct values.
pub fn replay_once(
    system: &dyn PointerSystem,
    initial: &[Setting],
    changes: &[(usize, Setting)],
    readout_sites: &[usize],
    rng: &mut impl Rng,
) -> Result<i8> {
    let mut ledger = ledger_init(system, initial, rng)?;
    for (site, setting) in changes {
        ledger_apply_unitary(&mut ledger, system, *site, *setting, rng)?;
    }
    let mut product = 1i8;
    for &s in readout_sites {
        product *= ledger.direct(s).ok_or_else(|| Error::invalid("site has no direct value"))?;
    }
    Ok(product)
}

/// Monte Carlo estimate of a replayed moment with its standard error.
pub fn ledger_replay_moment(
    system: &dyn PointerSystem,
    initial: &[Setting],
    changes: &[(usize, Setting)],
    readout_sites: &[usize],
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials < 100 {
        return Err(Error::TooFewTrials { min: 100, got: trials });
    }
    let mut sum = 0i64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        sum += replay_once(system, initial, changes, readout_sites, &mut rng)? as i64;
    }
    let mean = sum as f64 / trials as f64;
    let var = (1.0 - mean * mean).max(0.0);
    Ok((mean, (var / trials as f64).sqrt()))
}

/// Certificate that the weak-local-realism ledger of a two-site system at
/// settings (z, y) simultaneously carries a direct λ_z at site 0 and an
/// inferred λ_y at site 0 equal to minus the remote direct value.
#[derive(Debug, Clone, Copy)]
pub struct ParadoxSample {
    pub both_present_fraction: f64,
    pub relation_holds_fraction: f64,
}

pub fn wlr_paradox_sample(
    system: &dyn PointerSystem,
    trials: u64,
    seed: u64,
) -> Result<ParadoxSample> {
    if trials < 100 {
        return Err(Error::TooFewTrials { min: 100, got: trials });
    }
    let settings = [Setting::Axis(Axis::Z), Setting::Axis(Axis::Y)];
    let mut both = 0u64;
    let mut relation = 0u64;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let ledger = ledger_init(system, &settings, &mut rng)?;
        let direct_z = ledger.direct(0);
        let inferred_y = ledger.inferred(0, Setting::Axis(Axis::Y));
        if let (Some(_), Some(inf)) = (direct_z, inferred_y) {
            both += 1;
            if let Some(remote) = ledger.direct(1) {
                if inf.value == -remote {
                    relation += 1;
                }
            }
        }
    }
    Ok(ParadoxSample {
        both_present_fraction: both as f64 / trials as f64,
        relation_holds_fraction: relation as f64 / trials as f64,
    })
}

/// CHSH estimates from a local-hidden-variable completion in which every
/// trial draws all four λ values using at most one further rotation from
/// the initially prepared settings (θ at site 0, φ at site 1):
/// λ_{θ'} is drawn conditioned on λ_φ and λ_{φ'} conditioned on λ_θ.
/// Because each trial carries a full value table, |S| ≤ 2 up to sampling
/// error.
pub fn single_rotation_chsh_lhv(
    system: &dyn PointerSystem,
    angles: (f64, f64, f64, f64),
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials < 100 {
        return Err(Error::TooFewTrials { min: 100, got: trials });
    }
    let (theta, theta_p, phi, phi_p) = angles;
    let s_t = Setting::XzAngle(theta);
    let s_tp = Setting::XzAngle(theta_p);
    let s_p = Setting::XzAngle(phi);
    let s_pp = Setting::XzAngle(phi_p);
    let base = system.joint_distribution(&[s_t, s_p])?;
    let rot_a = system.joint_distribution(&[s_tp, s_p])?;
    let rot_b = system.joint_distribution(&[s_t, s_pp])?;
    let mut sums = [0i64; 4];
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let key = sample_index(&base, &mut rng);
        let l_theta = outcome_of(key, 0);
        let l_phi = outcome_of(key, 1);
        let p_a = conditional_plus(&rot_a, 0, &[(1, l_phi)])
            .ok_or_else(|| Error::invalid("zero-mass conditioning"))?;
        let l_theta_p = if rng.gen::<f64>() < p_a { 1 } else { -1 };
        let p_b = conditional_plus(&rot_b, 1, &[(0, l_theta)])
            .ok_or_else(|| Error::invalid("zero-mass conditioning"))?;
        let l_phi_p = if rng.gen::<f64>() < p_b { 1 } else { -1 };
        sums[0] += (l_theta * l_phi) as i64;
        sums[1] += (l_theta * l_phi_p) as i64;
        sums[2] += (l_theta_p * l_phi) as i64;
        sums[3] += (l_theta_p * l_phi_p) as i64;
    }
    let t = trials as f64;
    let e: Vec<f64> = sums.iter().map(|s| *s as f64 / t).collect();
    let s_value = e[0] - e[1] + e[2] + e[3];
    // conservative error bar: four correlators, each with variance ≤ 1
    let se = 2.0 / t.sqrt();
    Ok((s_value, se))
}
