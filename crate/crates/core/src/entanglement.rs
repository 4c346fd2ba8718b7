//! SU(2)-invariant pair states, partial transpose and log-negativity.
//!
//! For an isotropic chain the reduced state of a (½,½) or (½,1) pair is a
//! mixture of total-spin projectors fixed by one number `g`, and `g` is an
//! affine function of `⟨S_a·S_b⟩`:
//!
//! * (½,½): `ρ = g P_0 + (1-g)/3 P_1`, `g = ¼ - c`
//! * (½,1): `ρ = g/2 P_½ + (1-g)/4 P_{3/2}`, `g = (1 - 2c)/3`
//!
//! (1,1) pairs need a second invariant and are only handled through an
//! explicit partial trace.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::pair::{CorrelatorEstimate, PairDensityMatrix, PairKind};
use crate::spin::total_spin_projector;

/// Separability boundary `g*`: the pair is entangled iff `g > g*`.
pub fn separability_threshold(kind: PairKind) -> f64 {
    match kind {
        PairKind::HalfHalf => 0.5,
        PairKind::HalfOne => 2.0 / 3.0,
        PairKind::OneOne => panic!("(1,1) pairs have no single-parameter family"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flag {
    /// `g` outside `[0, 1]` (sampling noise); projected before expansion.
    OutOfWindow,
    /// `g + 2σ` below the separability boundary: negativity identically zero.
    DeepSeparable,
}

impl Flag {
    pub fn label(self) -> &'static str {
        match self {
            Flag::OutOfWindow => "out_of_window",
            Flag::DeepSeparable => "deep_separable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2PairState {
    pub kind: PairKind,
    pub g: f64,
    pub g_stderr: f64,
}

impl SU2PairState {
    pub fn new(kind: PairKind, g: f64) -> Self {
        assert!(kind != PairKind::OneOne, "(1,1) pairs are not single-parameter");
        Self { kind, g, g_stderr: 0.0 }
    }

    pub fn in_window(&self) -> bool {
        (0.0..=1.0).contains(&self.g)
    }

    pub fn projected(&self) -> Self {
        Self { g: self.g.clamp(0.0, 1.0), ..*self }
    }

    /// Inverse of [`g_from_correlator`].
    pub fn correlator(&self) -> f64 {
        match self.kind {
            PairKind::HalfHalf => 0.25 - self.g,
            PairKind::HalfOne => (1.0 - 3.0 * self.g) / 2.0,
            PairKind::OneOne => unreachable!(),
        }
    }
}

/// `dg/dc` of the correlator map.
fn g_slope(kind: PairKind) -> f64 {
    match kind {
        PairKind::HalfHalf => -1.0,
        PairKind::HalfOne => -2.0 / 3.0,
        PairKind::OneOne => unreachable!(),
    }
}

fn g_of(kind: PairKind, c: f64) -> f64 {
    match kind {
        PairKind::HalfHalf => 0.25 - c,
        PairKind::HalfOne => (1.0 - 2.0 * c) / 3.0,
        PairKind::OneOne => unreachable!(),
    }
}

pub fn g_from_correlator(kind: PairKind, c: &CorrelatorEstimate) -> Result<SU2PairState> {
    if kind == PairKind::OneOne {
        return Err(Error::InvalidArgument(
            "(1,1) pairs are not determined by the correlator alone".into(),
        ));
    }
    Ok(SU2PairState { kind, g: g_of(kind, c.value), g_stderr: g_slope(kind).abs() * c.stderr })
}

/// Explicit density matrix in the product basis, smaller spin first.
pub fn expand(state: &SU2PairState) -> PairDensityMatrix {
    let (sa, sb) = state.kind.spins();
    let g = state.g;
    let m = match state.kind {
        PairKind::HalfHalf => total_spin_projector(sa, sb, 0) * g + total_spin_projector(sa, sb, 2) * ((1.0 - g) / 3.0),
        PairKind::HalfOne => {
            total_spin_projector(sa, sb, 1) * (g / 2.0) + total_spin_projector(sa, sb, 3) * ((1.0 - g) / 4.0)
        }
        PairKind::OneOne => unreachable!(),
    };
    PairDensityMatrix::new((sa, sb), m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Transpose the indices of one tensor factor.
pub fn partial_transpose(rho: &PairDensityMatrix, subsystem: Subsystem) -> DMatrix<f64> {
    let (da, db) = rho.dims();
    let d = da * db;
    let mut out = DMatrix::zeros(d, d);
    for a in 0..da {
        for b in 0..db {
            for a2 in 0..da {
                for b2 in 0..db {
                    let v = rho.matrix[(a * db + b, a2 * db + b2)];
                    let (r, c) = match subsystem {
                        Subsystem::First => (a2 * db + b, a * db + b2),
                        Subsystem::Second => (a * db + b2, a2 * db + b),
                    };
                    out[(r, c)] = v;
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NegativityMethod {
    ClosedForm,
    NumericPt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NegativityResult {
    /// `log2 ‖ρ^Γ‖₁`.
    pub value: f64,
    pub stderr: f64,
    /// Eigenvalues of `ρ^Γ`, ascending.
    pub pt_spectrum: Vec<f64>,
    pub method: NegativityMethod,
    pub flags: Vec<Flag>,
}

/// Largest tolerated `|ρ - ρᵀ|` entry.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// `log2` of the trace norm of the partial transpose.
///
/// Computed as `log2(1 + 2·Σ|λ₋|/Tr)`, which equals `log2 Σ|λ|` for unit
/// trace and is exactly zero when `ρ^Γ` has no negative eigenvalue.
pub fn log_negativity(rho: &PairDensityMatrix) -> Result<NegativityResult> {
    let asym = rho.max_asymmetry();
    if asym > HERMITICITY_TOL {
        return Err(Error::NotHermitian(asym));
    }
    let pt = partial_transpose(rho, Subsystem::Second);
    let pt = (&pt + pt.transpose()) * 0.5;
    let mut spectrum: Vec<f64> = pt.symmetric_eigen().eigenvalues.iter().copied().collect();
    spectrum.sort_by(f64::total_cmp);
    let trace: f64 = spectrum.iter().sum();
    let negative: f64 = spectrum.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    let value = (1.0 + 2.0 * negative / trace).log2();
    Ok(NegativityResult { value, stderr: 0.0, pt_spectrum: spectrum, method: NegativityMethod::NumericPt, flags: vec![] })
}

/// Closed form for the (½,½) family: `log2 max(1, 2g)`.
pub fn log_negativity_closed_form_11(g: f64) -> NegativityResult {
    // ρ^Γ spectrum: (1-2g)/2 once, (1+2g)/6 three times
    let neg = (1.0 - 2.0 * g) / 2.0;
    let pos = (1.0 + 2.0 * g) / 6.0;
    let mut pt_spectrum = vec![neg, pos, pos, pos];
    pt_spectrum.sort_by(f64::total_cmp);
    NegativityResult {
        value: (2.0 * g).max(1.0).log2(),
        stderr: 0.0,
        pt_spectrum,
        method: NegativityMethod::ClosedForm,
        flags: vec![],
    }
}

/// Log-negativity of an SU(2) pair state through its explicit matrix.
pub fn negativity_of_state(state: &SU2PairState) -> Result<NegativityResult> {
    log_negativity(&expand(state))
}

/// Log-negativity with a statistical error.
///
/// With `bins` (per-bin correlator means) the error is a jackknife over bins;
/// otherwise it is the delta method `|dN/dg|·σ_g`, using the larger one-sided
/// derivative at the separability kink. Out-of-window `g` is projected to
/// `[0, 1]` before evaluation and flagged.
pub fn negativity_with_error(state: &SU2PairState, bins: Option<&[f64]>) -> Result<NegativityResult> {
    let kind = state.kind;
    let mut flags = Vec::new();
    if !state.in_window() {
        flags.push(Flag::OutOfWindow);
    }
    let eval = |g: f64| -> Result<f64> { Ok(negativity_of_state(&SU2PairState::new(kind, g.clamp(0.0, 1.0)))?.value) };
    let center = negativity_of_state(&state.projected())?;
    let threshold = separability_threshold(kind);

    let stderr = match bins {
        Some(bins) if bins.len() >= 2 => {
            let gs: Vec<f64> = bins.iter().map(|&c| g_of(kind, c)).collect();
            let values = crate::stats::jackknife_values(&gs, eval)?;
            crate::stats::jackknife_error(&values)
        }
        _ => {
            if state.g_stderr == 0.0 {
                0.0
            } else if state.g + 2.0 * state.g_stderr < threshold {
                flags.push(Flag::DeepSeparable);
                0.0
            } else {
                let h = 1e-7;
                let g = state.g.clamp(0.0, 1.0);
                let up = (eval(g + h)? - eval(g)?) / h;
                let down = (eval(g)? - eval(g - h)?) / h;
                up.abs().max(down.abs()) * state.g_stderr
            }
        }
    };
    if state.g + 2.0 * state.g_stderr < threshold && !flags.contains(&Flag::DeepSeparable) {
        flags.push(Flag::DeepSeparable);
    }
    Ok(NegativityResult { stderr, flags, ..center })
}
