//! The ½-½-1-1 ring: lattice definition, bonds, total-Sz sectors and
//! Hamiltonian assembly.
//!
//! Site labels are 1-based everywhere in the public API: sites `4n-3` and
//! `4n-2` carry spin ½, sites `4n-1` and `4n` carry spin 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::par;
use crate::spin::{ladder_element, SpinValue};
use crate::sparse::SparseRealMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("periodic")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub n_sites: usize,
    pub j1: f64,
    pub alpha: f64,
    pub boundary: Boundary,
}

impl ChainSpec {
    /// Periodic ring with `J1 = 1`.
    pub fn new(n_sites: usize, alpha: f64) -> Result<Self> {
        let spec = Self { n_sites, j1: 1.0, alpha, boundary: Boundary::Periodic };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 || !self.n_sites.is_multiple_of(4) {
            return Err(Error::InvalidSpec(format!("n_sites={} must be a positive multiple of 4", self.n_sites)));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidSpec(format!("alpha={} must be finite and >= 0", self.alpha)));
        }
        if !(self.j1 > 0.0) || !self.j1.is_finite() {
            return Err(Error::InvalidSpec(format!("j1={} must be finite and > 0", self.j1)));
        }
        Ok(())
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let spec = Self { alpha, ..*self };
        spec.validate()?;
        Ok(spec)
    }

    pub fn j2(&self) -> f64 {
        self.alpha * self.j1
    }

    /// Spin carried by 1-based site `site`.
    pub fn spin(&self, site: usize) -> SpinValue {
        debug_assert!(site >= 1 && site <= self.n_sites);
        if (site - 1) % 4 < 2 {
            SpinValue::HALF
        } else {
            SpinValue::ONE
        }
    }

    /// Spins in 0-based site order.
    pub fn spins(&self) -> Vec<SpinValue> {
        (1..=self.n_sites).map(|s| self.spin(s)).collect()
    }

    /// `Σ 2s_i`.
    pub fn max_twice_sz(&self) -> i32 {
        self.spins().iter().map(|s| s.twice() as i32).sum()
    }

    /// `2^(N/2)·3^(N/2)`.
    pub fn full_dimension(&self) -> usize {
        self.spins().iter().map(|s| s.dim()).product()
    }

    pub fn bonds(&self) -> BondList {
        let n = self.n_sites;
        let bonds = (1..=n)
            .map(|i| {
                let j = i % n + 1;
                // odd i: (4n-3,4n-2) or (4n-1,4n) → J1; even i: J2
                let coupling = if i % 2 == 1 { self.j1 } else { self.j2() };
                Bond { i, j, coupling }
            })
            .collect();
        BondList { bonds }
    }

    /// Canonical `key=value` serialization.
    pub fn to_key_value(&self) -> String {
        format!("n_sites={}\nalpha={}\nboundary={}\n", self.n_sites, self.alpha, self.boundary)
    }

    /// Parse `key=value` lines (`#` comments and blank lines ignored). `j1`
    /// is accepted but must equal 1.
    pub fn from_key_value(text: &str) -> Result<Self> {
        let mut n_sites = None;
        let mut alpha = None;
        let mut j1 = 1.0;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value, got {raw:?}", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse(format!("line {}: invalid {what} {value:?}", lineno + 1));
            match key {
                "n_sites" | "n" => n_sites = Some(value.parse::<usize>().map_err(|_| bad("n_sites"))?),
                "alpha" => alpha = Some(value.parse::<f64>().map_err(|_| bad("alpha"))?),
                "j1" => j1 = value.parse::<f64>().map_err(|_| bad("j1"))?,
                "boundary" => {
                    if value != "periodic" {
                        return Err(Error::InvalidSpec(format!(
                            "boundary={value} not supported (only periodic)"
                        )));
                    }
                }
                other => return Err(Error::Parse(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        if j1 != 1.0 {
            return Err(Error::InvalidSpec(format!("j1={j1}: energies are in units of J1, j1 must be 1")));
        }
        let n_sites = n_sites.ok_or_else(|| Error::Parse("missing n_sites".into()))?;
        let alpha = alpha.ok_or_else(|| Error::Parse("missing alpha".into()))?;
        Self::new(n_sites, alpha)
    }
}

impl FromStr for ChainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_key_value(s)
    }
}

/// Nearest-neighbour bond between 1-based sites `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub coupling: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BondList {
    pub bonds: Vec<Bond>,
}

impl BondList {
    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Bond> {
        self.bonds.iter()
    }
}

/// Basis of product states, either one total-Sz sector or the full space.
///
/// States are mixed-radix codes with site 1 most significant and local index
/// `k` (`m = s - k`) as digit, so ascending codes are lexicographic in the
/// site configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBasis {
    pub twice_sz: Option<i32>,
    spins: Vec<SpinValue>,
    strides: Vec<u64>,
    states: Vec<u64>,
}

impl SectorBasis {
    fn strides(spins: &[SpinValue]) -> Vec<u64> {
        let mut strides = vec![1u64; spins.len()];
        for i in (0..spins.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * spins[i + 1].dim() as u64;
        }
        strides
    }

    pub fn full(spec: &ChainSpec) -> Self {
        let spins = spec.spins();
        let strides = Self::strides(&spins);
        let dim = spec.full_dimension() as u64;
        Self { twice_sz: None, spins, strides, states: (0..dim).collect() }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn spins(&self) -> &[SpinValue] {
        &self.spins
    }

    pub fn n_sites(&self) -> usize {
        self.spins.len()
    }

    /// Local index `k` of 0-based site `site` in `code`.
    #[inline]
    pub fn digit(&self, code: u64, site: usize) -> usize {
        ((code / self.strides[site]) % self.spins[site].dim() as u64) as usize
    }

    #[inline]
    pub fn stride(&self, site: usize) -> u64 {
        self.strides[site]
    }

    /// Position of `code` in the basis.
    #[inline]
    pub fn index_of(&self, code: u64) -> Option<usize> {
        match self.twice_sz {
            None => ((code as usize) < self.states.len()).then_some(code as usize),
            Some(_) => self.states.binary_search(&code).ok(),
        }
    }

    /// Local indices of every site for `code`.
    pub fn configuration(&self, code: u64) -> Vec<usize> {
        (0..self.spins.len()).map(|s| self.digit(code, s)).collect()
    }

    /// `2·Sz` of a code.
    pub fn twice_sz_of(&self, code: u64) -> i32 {
        (0..self.spins.len())
            .map(|s| self.spins[s].twice() as i32 - 2 * self.digit(code, s) as i32)
            .sum()
    }
}

/// All product states with total `2Sz = twice_sz`, lexicographically
/// ordered. Sectors with the wrong parity are empty.
pub fn enumerate_sector(spec: &ChainSpec, twice_sz: i32) -> SectorBasis {
    let spins = spec.spins();
    let strides = SectorBasis::strides(&spins);
    let total: i32 = spins.iter().map(|s| s.twice() as i32).sum();
    let mut states = Vec::new();
    if twice_sz.abs() <= total && (total - twice_sz) % 2 == 0 {
        let target = ((total - twice_sz) / 2) as usize;
        // suffix_max[i] = largest k-sum reachable from sites i..
        let mut suffix_max = vec![0usize; spins.len() + 1];
        for i in (0..spins.len()).rev() {
            suffix_max[i] = suffix_max[i + 1] + spins[i].twice() as usize;
        }
        fn walk(
            site: usize,
            remaining: usize,
            code: u64,
            spins: &[SpinValue],
            strides: &[u64],
            suffix_max: &[usize],
            out: &mut Vec<u64>,
        ) {
            if site == spins.len() {
                if remaining == 0 {
                    out.push(code);
                }
                return;
            }
            for k in 0..spins[site].dim() {
                if k > remaining {
                    break;
                }
                if remaining - k > suffix_max[site + 1] {
                    continue;
                }
                walk(site + 1, remaining - k, code + k as u64 * strides[site], spins, strides, suffix_max, out);
            }
        }
        walk(0, target, 0, &spins, &strides, &suffix_max, &mut states);
    }
    SectorBasis { twice_sz: Some(twice_sz), spins, strides, states }
}

/// Every valid sector label, ascending.
pub fn sector_labels(spec: &ChainSpec) -> Vec<i32> {
    let total = spec.max_twice_sz();
    (-total..=total).step_by(2).collect()
}

/// Default dimension cap for sparse assembly.
pub const SPARSE_DIM_CAP: usize = 20_000_000;

/// Assemble `H = Σ_bonds J_b S_i·S_j` on `basis`.
pub fn build_hamiltonian(spec: &ChainSpec, basis: &SectorBasis) -> Result<SparseRealMatrix> {
    build_hamiltonian_capped(spec, basis, SPARSE_DIM_CAP, "sparse")
}

pub(crate) fn build_hamiltonian_capped(
    spec: &ChainSpec,
    basis: &SectorBasis,
    cap: usize,
    path: &'static str,
) -> Result<SparseRealMatrix> {
    spec.validate()?;
    if basis.n_sites() != spec.n_sites {
        return Err(Error::InvalidArgument(format!(
            "basis has {} sites, spec has {}",
            basis.n_sites(),
            spec.n_sites
        )));
    }
    if basis.len() > cap {
        return Err(Error::DimensionTooLarge { dim: basis.len(), cap, path });
    }
    let bonds: Vec<(usize, usize, f64)> = spec.bonds().iter().map(|b| (b.i - 1, b.j - 1, b.coupling)).collect();
    let rows = par::map_range(basis.len(), |row| {
        let code = basis.states[row];
        let mut diag = 0.0;
        let mut entries: Vec<(u32, f64)> = Vec::with_capacity(2 * bonds.len() + 1);
        for &(a, b, coupling) in &bonds {
            if coupling == 0.0 {
                continue;
            }
            let (sa, sb) = (basis.spins[a], basis.spins[b]);
            let (ka, kb) = (basis.digit(code, a), basis.digit(code, b));
            let (ma, mb) = (sa.m_of(ka), sb.m_of(kb));
            diag += coupling * ma * mb;
            // S+_a S-_b: k_a - 1, k_b + 1
            if ka > 0 && kb + 1 < sb.dim() {
                let target = code - basis.strides[a] + basis.strides[b];
                let amp = 0.5 * coupling * ladder_element(sa, ma, ma + 1.0) * ladder_element(sb, mb, mb - 1.0);
                if let Some(col) = basis.index_of(target) {
                    entries.push((col as u32, amp));
                }
            }
            // S-_a S+_b
            if ka + 1 < sa.dim() && kb > 0 {
                let target = code + basis.strides[a] - basis.strides[b];
                let amp = 0.5 * coupling * ladder_element(sa, ma, ma - 1.0) * ladder_element(sb, mb, mb + 1.0);
                if let Some(col) = basis.index_of(target) {
                    entries.push((col as u32, amp));
                }
            }
        }
        entries.push((row as u32, diag));
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged
    });
    Ok(SparseRealMatrix::from_sorted_rows(rows))
}
