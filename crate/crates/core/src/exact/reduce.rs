//! Exact partial traces down to two sites.

use nalgebra::DMatrix;

use crate::chain::SectorBasis;
use crate::pair::{Pair, PairDensityMatrix};
use crate::spin::SpinValue;

/// Precomputed index structure for tracing a sector down to one pair.
///
/// Each term `(p, q, slot)` contributes `ψ_p ψ_q` to the pair matrix entry
/// `slot`; `p` and `q` differ only on the two sites of the pair.
#[derive(Debug, Clone)]
pub struct PairReducer {
    spins: (SpinValue, SpinValue),
    terms: Vec<(u32, u32, u16)>,
}

impl PairReducer {
    pub fn new(basis: &SectorBasis, pair: Pair) -> Self {
        let (a, b) = (pair.i - 1, pair.j - 1);
        let spins = (basis.spins()[a], basis.spins()[b]);
        let (da, db) = (spins.0.dim(), spins.1.dim());
        let d = da * db;
        let mut terms = Vec::with_capacity(basis.len() * da);
        for (p, &code) in basis.states().iter().enumerate() {
            let (ka, kb) = (basis.digit(code, a), basis.digit(code, b));
            let sum = ka + kb;
            for ka2 in 0..da {
                let Some(kb2) = sum.checked_sub(ka2) else { break };
                if kb2 >= db {
                    continue;
                }
                let (sa, sb) = (basis.stride(a), basis.stride(b));
                let target = code - ka as u64 * sa - kb as u64 * sb + ka2 as u64 * sa + kb2 as u64 * sb;
                let q = basis.index_of(target).expect("pair move stays inside the sector");
                let slot = (ka * db + kb) * d + (ka2 * db + kb2);
                terms.push((p as u32, q as u32, slot as u16));
            }
        }
        Self { spins, terms }
    }

    pub fn spins(&self) -> (SpinValue, SpinValue) {
        self.spins
    }

    fn dim(&self) -> usize {
        self.spins.0.dim() * self.spins.1.dim()
    }

    pub fn zeros(&self) -> DMatrix<f64> {
        DMatrix::zeros(self.dim(), self.dim())
    }

    /// `out += weight · Tr_rest |ψ⟩⟨ψ|`.
    pub fn accumulate(&self, psi: &[f64], weight: f64, out: &mut DMatrix<f64>) {
        let d = self.dim();
        let mut acc = vec![0.0; d * d];
        for &(p, q, slot) in &self.terms {
            acc[slot as usize] += psi[p as usize] * psi[q as usize];
        }
        for r in 0..d {
            for c in 0..d {
                out[(r, c)] += weight * acc[r * d + c];
            }
        }
    }
}

/// Reduced density matrix of a normalized state on `pair`.
pub fn reduce_to_pair(basis: &SectorBasis, psi: &[f64], pair: Pair) -> PairDensityMatrix {
    let reducer = PairReducer::new(basis, pair);
    let mut m = reducer.zeros();
    reducer.accumulate(psi, 1.0, &mut m);
    PairDensityMatrix::new(reducer.spins(), m)
}
