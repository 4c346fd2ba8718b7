//! Two-site objects shared by the exact engine, the entanglement measures and
//! the sweep layer.

use nalgebra::DMatrix;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::spin::SpinValue;

/// Ordered pair of distinct 1-based site labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pair {
    pub i: usize,
    pub j: usize,
}

impl Pair {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    pub fn validate(&self, spec: &ChainSpec) -> Result<()> {
        let n = spec.n_sites;
        if self.i == 0 || self.j == 0 || self.i > n || self.j > n {
            return Err(Error::InvalidArgument(format!(
                "pair ({}, {}) outside sites 1..={n}",
                self.i, self.j
            )));
        }
        if self.i == self.j {
            return Err(Error::InvalidArgument(format!("pair ({}, {}) must join distinct sites", self.i, self.j)));
        }
        Ok(())
    }

    pub fn kind(&self, spec: &ChainSpec) -> PairKind {
        PairKind::from_spins(spec.spin(self.i), spec.spin(self.j))
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Spin magnitudes of a pair, unordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairKind {
    HalfHalf,
    HalfOne,
    OneOne,
}

impl PairKind {
    pub fn from_spins(a: SpinValue, b: SpinValue) -> Self {
        match (a.twice().min(b.twice()), a.twice().max(b.twice())) {
            (1, 1) => PairKind::HalfHalf,
            (1, 2) => PairKind::HalfOne,
            (2, 2) => PairKind::OneOne,
            other => panic!("unsupported spin pair {other:?}"),
        }
    }

    /// Canonical spin order, smaller spin first.
    pub fn spins(self) -> (SpinValue, SpinValue) {
        match self {
            PairKind::HalfHalf => (SpinValue::HALF, SpinValue::HALF),
            PairKind::HalfOne => (SpinValue::HALF, SpinValue::ONE),
            PairKind::OneOne => (SpinValue::ONE, SpinValue::ONE),
        }
    }

    /// Physical range of `⟨S_a·S_b⟩`.
    pub fn correlator_window(self) -> (f64, f64) {
        match self {
            PairKind::HalfHalf => (-0.75, 0.25),
            PairKind::HalfOne => (-1.0, 0.5),
            PairKind::OneOne => (-2.0, 1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairKind::HalfHalf => "1/2-1/2",
            PairKind::HalfOne => "1/2-1",
            PairKind::OneOne => "1-1",
        }
    }
}

impl std::str::FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1/2-1/2" => Ok(PairKind::HalfHalf),
            "1/2-1" => Ok(PairKind::HalfOne),
            "1-1" => Ok(PairKind::OneOne),
            other => Err(Error::Parse(format!("unknown pair kind {other:?}"))),
        }
    }
}

/// Two-site reduced density matrix in the product basis of `(a, b)`, first
/// factor major, local index `k ↔ m = s - k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDensityMatrix {
    pub spins: (SpinValue, SpinValue),
    pub matrix: DMatrix<f64>,
}

impl PairDensityMatrix {
    pub fn new(spins: (SpinValue, SpinValue), matrix: DMatrix<f64>) -> Self {
        let d = spins.0.dim() * spins.1.dim();
        assert_eq!((matrix.nrows(), matrix.ncols()), (d, d), "pair matrix shape");
        Self { spins, matrix }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.spins.0.dim(), self.spins.1.dim())
    }

    pub fn kind(&self) -> PairKind {
        PairKind::from_spins(self.spins.0, self.spins.1)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn max_asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).abs().max()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.clone().symmetric_eigen().eigenvalues.min()
    }

    /// `Tr(ρ S_a·S_b)`.
    pub fn exchange_expectation(&self) -> f64 {
        let x = crate::spin::exchange_coupling(self.spins.0, self.spins.1);
        x.entries().map(|(r, c, v)| v * self.matrix[(c, r)]).sum()
    }

    /// Swap the two factors.
    pub fn swapped(&self) -> Self {
        let (da, db) = self.dims();
        let d = da * db;
        let idx = |ka: usize, kb: usize| kb * da + ka;
        let mut out = DMatrix::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                out[(idx(r / db, r % db), idx(c / db, c % db))] = self.matrix[(r, c)];
            }
        }
        Self { spins: (self.spins.1, self.spins.0), matrix: out }
    }

    /// Check trace and positivity invariants.
    pub fn check(&self, trace_tol: f64, psd_tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > trace_tol {
            return Err(Error::Inconsistent(format!("pair density matrix trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -psd_tol {
            return Err(Error::Inconsistent(format!("pair density matrix eigenvalue {min:.3e} < 0")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorrelatorSource {
    Ed,
    Qmc,
}

impl CorrelatorSource {
    pub fn label(self) -> &'static str {
        match self {
            CorrelatorSource::Ed => "ed",
            CorrelatorSource::Qmc => "qmc",
        }
    }
}

/// `⟨S_i·S_j⟩` with its standard error (zero for exact results).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorEstimate {
    pub pair: Pair,
    pub value: f64,
    pub stderr: f64,
    pub source: CorrelatorSource,
}

impl CorrelatorEstimate {
    pub fn exact(pair: Pair, value: f64) -> Self {
        Self { pair, value, stderr: 0.0, source: CorrelatorSource::Ed }
    }

    /// Whether the value lies in the physical window of `kind`.
    pub fn in_window(&self, kind: PairKind) -> bool {
        let (lo, hi) = kind.correlator_window();
        self.value >= lo && self.value <= hi
    }
}
