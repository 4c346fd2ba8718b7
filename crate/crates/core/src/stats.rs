//! Binning, jackknife and autocorrelation estimates for Monte Carlo series.

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean of (assumed independent) bin averages:
/// sample standard deviation over `sqrt(n)`.
pub fn standard_error(bins: &[f64]) -> f64 {
    let n = bins.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(bins);
    let var = bins.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Leave-one-out means of `bins` passed through `f`.
pub fn jackknife_values<E, F>(bins: &[f64], f: F) -> Result<Vec<f64>, E>
where
    F: Fn(f64) -> Result<f64, E>,
{
    let n = bins.len() as f64;
    let total: f64 = bins.iter().sum();
    bins.iter().map(|b| f((total - b) / (n - 1.0))).collect()
}

/// Jackknife standard error from leave-one-out estimates.
pub fn jackknife_error(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(values);
    ((n - 1) as f64 / n as f64 * values.iter().map(|v| (v - m).powi(2)).sum::<f64>()).sqrt()
}

/// Average consecutive blocks of `block` samples; a trailing partial block
/// is dropped.
pub fn block_means(series: &[f64], block: usize) -> Vec<f64> {
    series.chunks_exact(block).map(mean).collect()
}

/// Integrated autocorrelation time `τ_int = ½ + Σ_t ρ(t)` with the
/// self-consistent window `W ≥ c·τ_int` (c = 6).
pub fn integrated_autocorrelation_time(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 4 {
        return 0.5;
    }
    let m = mean(series);
    let c0 = series.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64;
    if c0 == 0.0 {
        return 0.5;
    }
    let mut tau = 0.5;
    for t in 1..n / 2 {
        let ct = series[..n - t].iter().zip(&series[t..]).map(|(a, b)| (a - m) * (b - m)).sum::<f64>() / (n - t) as f64;
        tau += ct / c0;
        if t as f64 >= 6.0 * tau {
            break;
        }
    }
    tau.max(0.5)
}
