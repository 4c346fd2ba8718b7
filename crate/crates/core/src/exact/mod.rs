//! Exact diagonalization: full sector-blocked spectra for small rings,
//! Lanczos for the low-lying states of larger ones, and everything derived
//! from them (thermal correlators, pair density matrices, gaps, excited
//! multiplets).

mod excited;
pub mod lanczos;
mod reduce;

use nalgebra::SymmetricEigen;

use crate::chain::{build_hamiltonian_capped, enumerate_sector, sector_labels, ChainSpec, SectorBasis, SPARSE_DIM_CAP};
use crate::error::{Error, Result};
use crate::pair::{CorrelatorEstimate, Pair, PairDensityMatrix};
use crate::par;

pub use excited::{direct_excited_pair_dm, excited_pair_dm_by_subtraction, ExcitedPairDm, CONTAMINATION_TOL};
pub use lanczos::{lowest_eigenpairs, Eigenpair, LanczosOptions};
pub use reduce::{reduce_to_pair, PairReducer};

/// Largest full-space dimension handled by dense diagonalization.
pub const DENSE_DIM_CAP: usize = 10_000;

/// Eigenvalues closer than this are one multiplet.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Largest relative Boltzmann weight a truncated spectrum may drop.
pub const TRUNCATION_TOL: f64 = 1e-8;

/// Inverse temperature in units of `1/J1`; `+∞` selects the ground multiplet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    beta: f64,
}

impl ThermalSpec {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::InvalidArgument(format!("beta={beta} must be > 0")));
        }
        Ok(Self { beta })
    }

    pub fn ground() -> Self {
        Self { beta: f64::INFINITY }
    }

    /// `k_B T` in units of J1; zero means the ground state.
    pub fn from_kbt(kbt: f64) -> Result<Self> {
        if kbt == 0.0 {
            Ok(Self::ground())
        } else if kbt > 0.0 && kbt.is_finite() {
            Self::new(1.0 / kbt)
        } else {
            Err(Error::InvalidArgument(format!("k_B T={kbt} must be >= 0")))
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn kbt(&self) -> f64 {
        if self.is_ground() {
            0.0
        } else {
            1.0 / self.beta
        }
    }

    pub fn is_ground(&self) -> bool {
        self.beta.is_infinite()
    }

    /// Boltzmann factor of an excitation energy `de = E - E_g ≥ 0`.
    pub fn weight(&self, de: f64) -> f64 {
        if self.is_ground() {
            if de <= DEGENERACY_TOL {
                1.0
            } else {
                0.0
            }
        } else {
            (-self.beta * de).exp()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralMode {
    Full,
    Truncated,
}

/// Eigenpairs of one total-Sz sector.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub basis: SectorBasis,
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl SectorSpectrum {
    pub fn twice_sz(&self) -> i32 {
        self.basis.twice_sz.unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        self.energies.len() == self.basis.len()
    }
}

/// Index of one eigenpair: sector position and column within it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRef {
    pub energy: f64,
    pub sector: usize,
    pub index: usize,
}

/// Degenerate set of eigenstates.
#[derive(Debug, Clone)]
pub struct Multiplet {
    pub energy: f64,
    pub members: Vec<StateRef>,
}

/// States of sectors that were not computed at all, bounded from below.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Uncovered {
    states: usize,
    floor: f64,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub spec: ChainSpec,
    pub mode: SpectralMode,
    pub sectors: Vec<SectorSpectrum>,
    states: Vec<StateRef>,
    uncovered: Option<Uncovered>,
}

impl SpectralDecomposition {
    pub(crate) fn assemble(spec: ChainSpec, mode: SpectralMode, sectors: Vec<SectorSpectrum>, uncovered: Option<Uncovered>) -> Self {
        let mut states: Vec<StateRef> = sectors
            .iter()
            .enumerate()
            .flat_map(|(s, sec)| sec.energies.iter().enumerate().map(move |(i, &e)| StateRef { energy: e, sector: s, index: i }))
            .collect();
        states.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.sector.cmp(&b.sector)).then(a.index.cmp(&b.index)));
        Self { spec, mode, sectors, states, uncovered }
    }

    /// All retained eigenstates, ascending in energy.
    pub fn states(&self) -> &[StateRef] {
        &self.states
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.energy).collect()
    }

    pub fn ground_energy(&self) -> f64 {
        self.states[0].energy
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn vector(&self, s: &StateRef) -> &[f64] {
        &self.sectors[s.sector].vectors[s.index]
    }

    pub fn sector_label(&self, s: &StateRef) -> i32 {
        self.sectors[s.sector].twice_sz()
    }

    pub fn basis(&self, s: &StateRef) -> &SectorBasis {
        &self.sectors[s.sector].basis
    }

    /// Retained states grouped into levels closer than [`DEGENERACY_TOL`].
    pub fn multiplets(&self) -> Vec<Multiplet> {
        let mut out: Vec<Multiplet> = Vec::new();
        for s in &self.states {
            match out.last_mut() {
                Some(m) if s.energy - m.energy <= DEGENERACY_TOL => m.members.push(*s),
                _ => out.push(Multiplet { energy: s.energy, members: vec![*s] }),
            }
        }
        out
    }

    /// Upper bound on the Boltzmann weight (relative to the ground state)
    /// carried by eigenstates missing from a truncated spectrum.
    pub fn truncation_bound(&self, thermal: ThermalSpec) -> f64 {
        if self.mode == SpectralMode::Full {
            return 0.0;
        }
        let eg = self.ground_energy();
        let mut bound = 0.0;
        for sec in &self.sectors {
            let missing = sec.basis.len() - sec.energies.len();
            if missing > 0 {
                let top = sec.energies.last().copied().unwrap_or(eg);
                bound += missing as f64 * thermal.weight(top - eg);
            }
        }
        if let Some(u) = self.uncovered {
            bound += u.states as f64 * thermal.weight(u.floor - eg);
        }
        bound
    }

    /// Unnormalized, ground-shifted Boltzmann weights aligned with [`states`](Self::states).
    pub fn weights(&self, thermal: ThermalSpec) -> Vec<f64> {
        let eg = self.ground_energy();
        self.states.iter().map(|s| thermal.weight(s.energy - eg)).collect()
    }

    fn check_truncation(&self, thermal: ThermalSpec) -> Result<f64> {
        let bound = self.truncation_bound(thermal);
        if bound > TRUNCATION_TOL {
            return Err(Error::TruncationTooLarge { bound, tolerance: TRUNCATION_TOL, beta: thermal.beta() });
        }
        Ok(bound)
    }

    /// `Tr(ρH)` from the spectrum.
    pub fn thermal_energy(&self, thermal: ThermalSpec) -> Result<f64> {
        self.check_truncation(thermal)?;
        let w = self.weights(thermal);
        let z: f64 = w.iter().sum();
        Ok(self.states.iter().zip(&w).map(|(s, w)| w * s.energy).sum::<f64>() / z)
    }

    /// Boltzmann-weighted pair density matrix and the truncation bound it
    /// was computed under.
    pub fn thermal_pair_dm(&self, thermal: ThermalSpec, pair: Pair) -> Result<(PairDensityMatrix, f64)> {
        pair.validate(&self.spec)?;
        let bound = self.check_truncation(thermal)?;
        let w = self.weights(thermal);
        let z: f64 = w.iter().sum();
        let reducers: Vec<PairReducer> = self.sectors.iter().map(|s| PairReducer::new(&s.basis, pair)).collect();
        let mut m = reducers[0].zeros();
        for (s, &wk) in self.states.iter().zip(&w) {
            if wk > 0.0 {
                reducers[s.sector].accumulate(self.vector(s), wk / z, &mut m);
            }
        }
        Ok((PairDensityMatrix::new(reducers[0].spins(), m), bound))
    }

    /// Equal-weight mixture of per-state reductions over `members`.
    pub fn multiplet_pair_dm(&self, members: &[StateRef], pair: Pair) -> PairDensityMatrix {
        let mut acc: Option<PairDensityMatrix> = None;
        let w = 1.0 / members.len() as f64;
        for s in members {
            let dm = reduce_to_pair(self.basis(s), self.vector(s), pair);
            match acc.as_mut() {
                None => acc = Some(PairDensityMatrix::new(dm.spins, dm.matrix * w)),
                Some(a) => a.matrix += dm.matrix * w,
            }
        }
        acc.expect("nonempty multiplet")
    }

    /// `⟨S_i·S_j⟩` in the thermal state.
    pub fn thermal_correlator(&self, thermal: ThermalSpec, pair: Pair) -> Result<CorrelatorEstimate> {
        let (dm, _) = self.thermal_pair_dm(thermal, pair)?;
        Ok(CorrelatorEstimate::exact(pair, dm.exchange_expectation()))
    }
}

/// Full spectrum by dense diagonalization of every total-Sz block.
pub fn diagonalize(spec: &ChainSpec) -> Result<SpectralDecomposition> {
    diagonalize_capped(spec, DENSE_DIM_CAP)
}

pub fn diagonalize_capped(spec: &ChainSpec, cap: usize) -> Result<SpectralDecomposition> {
    spec.validate()?;
    let dim = spec.full_dimension();
    if dim > cap {
        return Err(Error::DimensionTooLarge { dim, cap, path: "dense" });
    }
    let labels = sector_labels(spec);
    let sectors = par::try_map(&labels, |&t| -> Result<SectorSpectrum> {
        let basis = enumerate_sector(spec, t);
        let h = build_hamiltonian_capped(spec, &basis, cap, "dense")?.to_dense();
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let energies = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = order.iter().map(|&k| eig.eigenvectors.column(k).iter().copied().collect()).collect();
        Ok(SectorSpectrum { basis, energies, vectors })
    })?;
    Ok(SpectralDecomposition::assemble(*spec, SpectralMode::Full, sectors, None))
}

pub(crate) fn lanczos_sector(spec: &ChainSpec, k: usize, twice_sz: i32, opts: &LanczosOptions) -> Result<SectorSpectrum> {
    let basis = enumerate_sector(spec, twice_sz);
    if basis.is_empty() {
        return Err(Error::InvalidArgument(format!("sector 2Sz={twice_sz} is empty for n_sites={}", spec.n_sites)));
    }
    let h = build_hamiltonian_capped(spec, &basis, SPARSE_DIM_CAP, "sparse")?;
    let pairs = lowest_eigenpairs(&h, k, opts)?;
    let energies = pairs.iter().map(|p| p.value).collect();
    let vectors = pairs.into_iter().map(|p| p.vector).collect();
    Ok(SectorSpectrum { basis, energies, vectors })
}

/// The `k` lowest eigenpairs of one sector.
pub fn lanczos_lowest(spec: &ChainSpec, k: usize, twice_sz: i32) -> Result<SpectralDecomposition> {
    lanczos_lowest_with(spec, k, twice_sz, &LanczosOptions::default())
}

pub fn lanczos_lowest_with(spec: &ChainSpec, k: usize, twice_sz: i32, opts: &LanczosOptions) -> Result<SpectralDecomposition> {
    spec.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be >= 1".into()));
    }
    let sector = lanczos_sector(spec, k, twice_sz, opts)?;
    // Other sectors are unknown: bound them as if degenerate with the
    // ground state so thermal sums over this spectrum are refused.
    let others = spec.full_dimension() - sector.basis.len();
    let floor = sector.energies[0];
    let uncovered = (others > 0).then_some(Uncovered { states: others, floor });
    Ok(SpectralDecomposition::assemble(*spec, SpectralMode::Truncated, vec![sector], uncovered))
}

/// Low-energy spectrum for thermal sums: `k` states in every sector with
/// `|2Sz| ≤ max_twice_sz`.
///
/// Sectors beyond the cutoff are bounded using SU(2): every state with
/// `|Sz| > M` has a partner of equal energy in the sector `|Sz| = M`, so
/// their energies are at least that sector's minimum.
pub fn low_energy_spectrum(spec: &ChainSpec, k: usize, max_twice_sz: i32, opts: &LanczosOptions) -> Result<SpectralDecomposition> {
    spec.validate()?;
    let all = sector_labels(spec);
    let labels: Vec<i32> = all.iter().copied().filter(|t| t.abs() <= max_twice_sz).collect();
    let sectors = par::try_map(&labels, |&t| lanczos_sector(spec, k, t, opts))?;
    let boundary = labels.iter().map(|t| t.abs()).max().unwrap_or(0);
    let uncovered_states: usize = all
        .iter()
        .filter(|t| t.abs() > max_twice_sz)
        .map(|&t| enumerate_sector(spec, t).len())
        .sum();
    let floor = sectors
        .iter()
        .filter(|s| s.twice_sz().abs() == boundary)
        .map(|s| s.energies[0])
        .fold(f64::INFINITY, f64::min);
    let uncovered = (uncovered_states > 0).then_some(Uncovered { states: uncovered_states, floor });
    let complete = uncovered.is_none() && sectors.iter().all(SectorSpectrum::is_complete);
    let mode = if complete { SpectralMode::Full } else { SpectralMode::Truncated };
    Ok(SpectralDecomposition::assemble(*spec, mode, sectors, uncovered))
}

/// Spin gap `E_1 - E_g`: the lowest level above the ground multiplet.
///
/// Every integer-spin multiplet has an `Sz = 0` member, so the two lowest
/// levels of sector 0 suffice; the lowest `2Sz = 2` state is included as a
/// cross-check on the magnetic excitation.
pub fn spin_gap(spec: &ChainSpec) -> Result<f64> {
    spin_gap_with(spec, &LanczosOptions::default())
}

pub fn spin_gap_with(spec: &ChainSpec, opts: &LanczosOptions) -> Result<f64> {
    spec.validate()?;
    let basis = enumerate_sector(spec, 0);
    let h = build_hamiltonian_capped(spec, &basis, SPARSE_DIM_CAP, "sparse")?;
    let mut k = 2;
    let levels = loop {
        let pairs = lowest_eigenpairs(&h, k, opts)?;
        let eg = pairs[0].value;
        if let Some(p) = pairs.iter().find(|p| p.value - eg > DEGENERACY_TOL) {
            break (eg, p.value);
        }
        if pairs.len() < k {
            return Err(Error::Inconsistent("sector 0 has a single level".into()));
        }
        k += 2;
    };
    let magnetic = lanczos_sector(spec, 1, 2, opts)?.energies[0];
    let (eg, e1) = levels;
    Ok((e1.min(magnetic) - eg).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_spec_validation() {
        assert!(ThermalSpec::new(0.0).is_err());
        assert!(ThermalSpec::new(f64::NAN).is_err());
        assert!(ThermalSpec::new(-1.0).is_err());
        assert!(ThermalSpec::from_kbt(0.0).unwrap().is_ground());
        assert_eq!(ThermalSpec::from_kbt(0.5).unwrap().beta(), 2.0);
        assert!(ThermalSpec::from_kbt(-0.5).is_err());
        let g = ThermalSpec::ground();
        assert_eq!(g.weight(0.0), 1.0);
        assert_eq!(g.weight(1e-3), 0.0);
    }

    #[test]
    fn dimer_limit_spectrum() {
        let spec = ChainSpec::new(4, 0.0).unwrap();
        let d = diagonalize(&spec).unwrap();
        assert_eq!(d.len(), 36);
        assert!((d.ground_energy() + 2.75).abs() < 1e-12);
        let m = d.multiplets();
        assert_eq!(m[0].members.len(), 1);
        assert!((m[1].energy - m[0].energy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ground_state_is_nonmagnetic() {
        for alpha in [0.0, 0.3, 0.768, 1.0, 1.5] {
            let spec = ChainSpec::new(8, alpha).unwrap();
            let d = diagonalize(&spec).unwrap();
            let m = &d.multiplets()[0];
            assert_eq!(m.members.len(), 1, "alpha={alpha}");
            assert_eq!(d.sector_label(&m.members[0]), 0);
        }
    }

    #[test]
    fn dense_cap_is_reported() {
        let spec = ChainSpec::new(12, 0.5).unwrap();
        match diagonalize(&spec) {
            Err(Error::DimensionTooLarge { dim, cap, .. }) => {
                assert_eq!(dim, 46656);
                assert_eq!(cap, DENSE_DIM_CAP);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn dimer_ground_correlator_and_infinite_temperature() {
        let spec = ChainSpec::new(4, 0.0).unwrap();
        let d = diagonalize(&spec).unwrap();
        let c = d.thermal_correlator(ThermalSpec::ground(), Pair::new(1, 2)).unwrap();
        assert!((c.value + 0.75).abs() < 1e-12);
        let hot = ThermalSpec::new(1e-9).unwrap();
        for pair in [Pair::new(1, 2), Pair::new(2, 3), Pair::new(3, 4), Pair::new(1, 3)] {
            assert!(d.thermal_correlator(hot, pair).unwrap().value.abs() < 1e-8);
        }
    }

    #[test]
    fn lanczos_matches_dense_ground() {
        let spec = ChainSpec::new(8, 0.5).unwrap();
        let dense = diagonalize(&spec).unwrap();
        let lz = lanczos_lowest(&spec, 1, 0).unwrap();
        assert!((lz.ground_energy() - dense.ground_energy()).abs() < 1e-8);
        assert_eq!(lz.mode, SpectralMode::Truncated);
    }

    #[test]
    fn triplet_shares_energy_across_sectors() {
        let spec = ChainSpec::new(8, 0.5).unwrap();
        let e0 = lanczos_lowest(&spec, 2, 0).unwrap().eigenvalues()[1];
        let ep = lanczos_lowest(&spec, 1, 2).unwrap().eigenvalues()[0];
        let em = lanczos_lowest(&spec, 1, -2).unwrap().eigenvalues()[0];
        assert!((e0 - ep).abs() < 1e-8 && (e0 - em).abs() < 1e-8);
        let dense = diagonalize(&spec).unwrap();
        let m = &dense.multiplets()[1];
        assert_eq!(m.members.len(), 3);
        assert!((m.energy - e0).abs() < 1e-8);
    }

    #[test]
    fn lanczos_contract_n12() {
        let spec = ChainSpec::new(12, 0.768).unwrap();
        let lz = lanczos_lowest(&spec, 4, 0).unwrap();
        let e = lz.eigenvalues();
        assert_eq!(e.len(), 4);
        assert!(e.windows(2).all(|w| w[0] <= w[1]));
        let h = crate::chain::build_hamiltonian(&spec, &lz.sectors[0].basis).unwrap();
        let mut hv = vec![0.0; h.dim()];
        for (value, v) in lz.sectors[0].energies.iter().zip(&lz.sectors[0].vectors) {
            h.matvec(v, &mut hv);
            let r: f64 = hv.iter().zip(v).map(|(a, b)| (a - value * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-8);
        }
    }

    #[test]
    fn gap_values() {
        let spec = ChainSpec::new(4, 0.0).unwrap();
        assert!((spin_gap(&spec).unwrap() - 1.0).abs() < 1e-9);
        for alpha in [0.2, 0.768, 1.1] {
            assert!(spin_gap(&ChainSpec::new(8, alpha).unwrap()).unwrap() >= 0.0);
        }
    }

    #[test]
    fn truncation_bound_refuses_high_temperature() {
        let spec = ChainSpec::new(8, 0.768).unwrap();
        let low = low_energy_spectrum(&spec, 6, 2, &LanczosOptions::default()).unwrap();
        assert_eq!(low.mode, SpectralMode::Truncated);
        assert_eq!(low.truncation_bound(ThermalSpec::ground()), 0.0);
        let hot = ThermalSpec::new(0.5).unwrap();
        assert!(matches!(
            low.thermal_correlator(hot, Pair::new(1, 2)),
            Err(Error::TruncationTooLarge { .. })
        ));
        let dense = diagonalize(&spec).unwrap();
        let a = low.thermal_correlator(ThermalSpec::ground(), Pair::new(1, 2)).unwrap().value;
        let b = dense.thermal_correlator(ThermalSpec::ground(), Pair::new(1, 2)).unwrap().value;
        assert!((a - b).abs() < 1e-9);
    }
}
