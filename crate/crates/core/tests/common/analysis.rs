//! Scalar summaries located by bisection on exact spectra.

use mixspin::entanglement::log_negativity;
use mixspin::exact::{diagonalize, spin_gap, SpectralDecomposition, ThermalSpec};
use mixspin::{ChainSpec, Pair};

pub const PAIR_11: Pair = Pair { i: 1, j: 2 };
pub const PAIR_12: Pair = Pair { i: 2, j: 3 };

pub fn logneg(spectrum: &SpectralDecomposition, thermal: ThermalSpec, pair: Pair) -> f64 {
    let (dm, _) = spectrum.thermal_pair_dm(thermal, pair).unwrap();
    log_negativity(&dm).unwrap().value
}

pub fn ground_logneg(n: usize, alpha: f64, pair: Pair) -> f64 {
    let spectrum = diagonalize(&ChainSpec::new(n, alpha).unwrap()).unwrap();
    logneg(&spectrum, ThermalSpec::ground(), pair)
}

/// Bisect a sign change of `f` on `[lo, hi]` down to `tol`.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> bool) -> f64 {
    let at_lo = f(lo);
    assert_ne!(at_lo, f(hi), "no sign change on [{lo}, {hi}]");
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// α where the ground-state (½,½) and (½,1) log-negativities cross.
pub fn crossing_alpha(n: usize, lo: f64, hi: f64) -> f64 {
    bisect(lo, hi, 1e-10, |a| ground_logneg(n, a, PAIR_11) > ground_logneg(n, a, PAIR_12))
}

/// Lowest k_B T above which the pair is separable, bracketed by
/// `[lo, hi]` (entangled at `lo`, separable at `hi`).
pub fn sudden_death_kbt(spectrum: &SpectralDecomposition, pair: Pair, lo: f64, hi: f64) -> f64 {
    bisect(lo, hi, 1e-10, |t| logneg(spectrum, ThermalSpec::from_kbt(t).unwrap(), pair) > 0.0)
}

/// Grid point with the smallest spin gap.
pub fn gap_argmin(n: usize, grid: &[f64]) -> (f64, f64) {
    grid.iter()
        .map(|&a| (a, spin_gap(&ChainSpec::new(n, a).unwrap()).unwrap()))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
}

pub fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect()
}
