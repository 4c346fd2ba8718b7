//! First-excited-multiplet pair density matrices.
//!
//! At low temperature the Gibbs state is dominated by the ground and first
//! excited multiplets, so subtracting the ground contribution from the
//! thermal pair matrix and renormalizing isolates the excited one. The
//! result is the equal-weight mixture over the (degenerate) multiplet.

use crate::chain::{enumerate_sector, ChainSpec};
use crate::error::{Error, Result};
use crate::pair::{Pair, PairDensityMatrix};

use super::{
    diagonalize, lanczos_sector, LanczosOptions, SpectralDecomposition, SpectralMode, StateRef, ThermalSpec,
    DEGENERACY_TOL,
};

/// Largest tolerated Boltzmann weight of higher levels relative to the first
/// excited multiplet.
pub const CONTAMINATION_TOL: f64 = 1e-6;

/// Smallest first-excited Boltzmann probability the subtraction accepts.
const MIN_EXCITED_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct ExcitedPairDm {
    pub dm: PairDensityMatrix,
    pub energy: f64,
    pub multiplet_dim: usize,
    /// Boltzmann probability of the first excited multiplet at `beta_probe`.
    pub weight: f64,
    /// Weight of all higher levels relative to the first excited multiplet.
    pub contamination: f64,
}

/// Pair density matrix of the first excited multiplet by thermal subtraction.
pub fn excited_pair_dm_by_subtraction(spec: &ChainSpec, pair: Pair, beta_probe: f64) -> Result<ExcitedPairDm> {
    let spectrum = diagonalize(spec)?;
    excited_from_spectrum(&spectrum, pair, beta_probe)
}

pub(crate) fn excited_from_spectrum(
    spectrum: &SpectralDecomposition,
    pair: Pair,
    beta_probe: f64,
) -> Result<ExcitedPairDm> {
    if spectrum.mode != SpectralMode::Full {
        return Err(Error::InvalidArgument("excited-state subtraction needs a full spectrum".into()));
    }
    pair.validate(&spectrum.spec)?;
    let thermal = ThermalSpec::new(beta_probe)?;
    let levels = spectrum.multiplets();
    if levels.len() < 2 {
        return Err(Error::Inconsistent("spectrum has no excited level".into()));
    }
    let (ground, first) = (&levels[0], &levels[1]);
    let e1 = first.energy;
    let deg1 = first.members.len() as f64;
    let contamination: f64 = levels[2..]
        .iter()
        .flat_map(|l| l.members.iter())
        .map(|s| (-beta_probe * (s.energy - e1)).exp())
        .sum::<f64>()
        / deg1;
    if contamination > CONTAMINATION_TOL {
        return Err(Error::BetaProbeTooSmall { beta: beta_probe, contamination, tolerance: CONTAMINATION_TOL });
    }

    let weights = spectrum.weights(thermal);
    let z: f64 = weights.iter().sum();
    let weight = first.members.iter().map(|s| thermal.weight(s.energy - spectrum.ground_energy())).sum::<f64>() / z;
    if weight < MIN_EXCITED_WEIGHT {
        return Err(Error::NumericallyDegenerate { weight });
    }

    let (thermal_dm, _) = spectrum.thermal_pair_dm(thermal, pair)?;
    // ρ(β)·Z minus the ground multiplet's own contribution
    let ground_dm = spectrum.multiplet_pair_dm(&ground.members, pair);
    let ground_weight: f64 = ground.members.iter().map(|s| thermal.weight(s.energy - spectrum.ground_energy())).sum();
    let mut rest = thermal_dm.matrix * z - ground_dm.matrix * ground_weight;
    let tr = rest.trace();
    rest /= tr;
    let dm = PairDensityMatrix::new(thermal_dm.spins, rest);
    let min = dm.min_eigenvalue();
    if min < -1e-8 {
        return Err(Error::Inconsistent(format!("subtracted pair matrix has eigenvalue {min:.3e}")));
    }
    Ok(ExcitedPairDm { dm, energy: e1, multiplet_dim: first.members.len(), weight, contamination })
}

/// The first excited multiplet resolved state by state with Lanczos, and its
/// equal-weight pair density matrix.
///
/// The two lowest levels of sector 0 fix `E_1`; members are then gathered
/// from sectors `2Sz = 0, ±2, ±4, …` until a sector no longer reaches `E_1`.
pub fn direct_excited_pair_dm(spec: &ChainSpec, pair: Pair) -> Result<ExcitedPairDm> {
    let opts = LanczosOptions::default();
    spec.validate()?;
    pair.validate(spec)?;

    let states_below = |twice_sz: i32, ceiling: f64| -> Result<Option<super::SectorSpectrum>> {
        if enumerate_sector(spec, twice_sz).is_empty() {
            return Ok(None);
        }
        let mut k = 2;
        loop {
            let sec = lanczos_sector(spec, k, twice_sz, &opts)?;
            let exhausted = sec.is_complete();
            if exhausted || *sec.energies.last().unwrap() > ceiling + DEGENERACY_TOL {
                return Ok(Some(sec));
            }
            k *= 2;
        }
    };

    // sector 0 until its second level is visible
    let mut k = 2;
    let (sector0, e1) = loop {
        let sec = lanczos_sector(spec, k, 0, &opts)?;
        let eg = sec.energies[0];
        if let Some(&e1) = sec.energies.iter().find(|&&e| e - eg > DEGENERACY_TOL) {
            if *sec.energies.last().unwrap() > e1 + DEGENERACY_TOL || sec.is_complete() {
                break (sec, e1);
            }
        } else if sec.is_complete() {
            return Err(Error::Inconsistent("sector 0 has a single level".into()));
        }
        k *= 2;
    };

    let mut sectors = vec![sector0];
    let mut t = 2;
    loop {
        let mut found = false;
        for label in [t, -t] {
            if let Some(sec) = states_below(label, e1)? {
                if sec.energies[0] <= e1 + DEGENERACY_TOL {
                    found = true;
                    sectors.push(sec);
                }
            }
        }
        if !found {
            break;
        }
        t += 2;
    }

    let spectrum = SpectralDecomposition::assemble(*spec, SpectralMode::Truncated, sectors, None);
    let members: Vec<StateRef> = spectrum
        .states()
        .iter()
        .copied()
        .filter(|s| (s.energy - e1).abs() <= DEGENERACY_TOL)
        .collect();
    let dm = spectrum.multiplet_pair_dm(&members, pair);
    Ok(ExcitedPairDm { dm, energy: e1, multiplet_dim: members.len(), weight: 1.0, contamination: 0.0 })
}
