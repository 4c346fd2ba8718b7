//! Finite-temperature quantum Monte Carlo: stochastic series expansion with
//! directed-loop updates on native spin-½ and spin-1 sites.
//!
//! The lattice is bipartite, so after a sublattice rotation every vertex
//! weight is non-negative and there is no sign problem; a non-positive weight
//! in a sampled configuration is reported as [`Error::SignViolation`].
//!
//! Pair correlators use the SU(2) identity `⟨S_i·S_j⟩ = 3⟨S^z_i S^z_j⟩` with the
//! imaginary-time averaged diagonal estimator, further averaged over the
//! `N/4` translates of the pair by whole unit cells.

mod sse;
mod vertex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::pair::{CorrelatorEstimate, CorrelatorSource, Pair};
use crate::provenance::{short_hash, CODE_VERSION, GENERATOR};
use crate::{par, stats};
use sse::Walker;

pub const MIN_BINS: usize = 8;

/// Runs outside this envelope need `long_run`.
pub const MAX_SITES: usize = 32;
pub const MAX_BETA: f64 = 64.0;

#[derive(Debug, Clone, PartialEq)]
pub struct QmcConfig {
    pub spec: ChainSpec,
    pub beta: f64,
    pub therm_sweeps: usize,
    pub measure_sweeps: usize,
    pub bins: usize,
    pub seed: u64,
    pub pairs: Vec<Pair>,
    /// Average each pair estimator over its unit-cell translates.
    pub average_translates: bool,
    pub long_run: bool,
}

impl QmcConfig {
    /// Defaults: 10% thermalization, 32 bins.
    pub fn new(spec: ChainSpec, beta: f64, measure_sweeps: usize, seed: u64, pairs: Vec<Pair>) -> Self {
        Self {
            spec,
            beta,
            therm_sweeps: measure_sweeps / 10,
            measure_sweeps,
            bins: 32,
            seed,
            pairs,
            average_translates: true,
            long_run: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidArgument(format!("beta must be positive and finite, got {}", self.beta)));
        }
        if self.bins < MIN_BINS {
            return Err(Error::TooFewBins { bins: self.bins });
        }
        if self.measure_sweeps == 0 || !self.measure_sweeps.is_multiple_of(self.bins) {
            return Err(Error::InvalidArgument(format!(
                "measurement sweeps ({}) must be a positive multiple of the bin count ({})",
                self.measure_sweeps, self.bins
            )));
        }
        if !self.long_run && (self.spec.n_sites > MAX_SITES || self.beta > MAX_BETA) {
            return Err(Error::InvalidArgument(format!(
                "N = {} / beta = {} is outside the default envelope (N <= {MAX_SITES}, beta <= {MAX_BETA}); \
                 pass the long-run option to proceed",
                self.spec.n_sites, self.beta
            )));
        }
        for p in &self.pairs {
            p.validate(&self.spec)?;
        }
        Ok(())
    }

    /// Canonical text of every input that affects the output.
    pub fn canonical(&self) -> String {
        let pairs: Vec<String> = self.pairs.iter().map(|p| format!("{}-{}", p.i, p.j)).collect();
        format!(
            "{};beta={:e};therm={};measure={};bins={};seed={};pairs={};average_translates={}",
            self.spec.to_key_value().replace('\n', ";"),
            self.beta,
            self.therm_sweeps,
            self.measure_sweeps,
            self.bins,
            self.seed,
            pairs.join(","),
            self.average_translates
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub seed: u64,
    pub walkers: usize,
    pub generator: &'static str,
    pub code_version: &'static str,
    pub config_hash: String,
}

/// Bin averages of one block of measurement sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct Bin {
    pub correlators: Vec<f64>,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkerSummary {
    pub mean_expansion_order: f64,
    pub cutoff: usize,
    pub loops_per_sweep: usize,
    pub mean_loop_length: f64,
    pub aborted_loops: u64,
    pub energy_tau_int: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QmcRun {
    pub config: QmcConfig,
    /// Bins of all walkers, walker by walker.
    pub bins: Vec<Bin>,
    pub walkers: Vec<WalkerSummary>,
    pub correlators: Vec<CorrelatorEstimate>,
    pub energy: f64,
    pub energy_stderr: f64,
    pub provenance: Provenance,
}

impl QmcRun {
    /// Bin averages of `⟨S_i·S_j⟩` for the `k`-th configured pair.
    pub fn pair_bins(&self, k: usize) -> Vec<f64> {
        self.bins.iter().map(|b| b.correlators[k]).collect()
    }

    pub fn energy_bins(&self) -> Vec<f64> {
        self.bins.iter().map(|b| b.energy).collect()
    }

    /// Largest integrated autocorrelation time of the energy over walkers,
    /// in sweeps.
    pub fn energy_tau_int(&self) -> f64 {
        self.walkers.iter().map(|w| w.energy_tau_int).fold(0.0, f64::max)
    }

    pub fn estimate(&self, pair: Pair) -> Option<&CorrelatorEstimate> {
        self.correlators.iter().find(|c| c.pair == pair)
    }
}

struct WalkerOutput {
    bins: Vec<Bin>,
    summary: WalkerSummary,
}

fn run_walker(config: &QmcConfig, index: usize) -> Result<WalkerOutput> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let mut walker = Walker::new(&config.spec, config.beta, rng);

    let mut loop_legs = 0u64;
    let mut loops = 0u64;
    for _ in 0..config.therm_sweeps {
        let s = walker.sweep()?;
        walker.adjust_cutoff();
        loop_legs += s.loop_legs;
        loops += s.loops;
        if loops > 0 {
            // aim for about two visits per vertex leg and sweep
            let mean_len = (loop_legs as f64 / loops as f64).max(1.0);
            let target = (2.0 * 4.0 * walker.expansion_order().max(1) as f64 / mean_len).round() as usize;
            walker.loops_per_sweep = target.clamp(1, 4 * walker.cutoff());
        }
    }

    let n = config.spec.n_sites;
    let cells = if config.average_translates { n / 4 } else { 1 };
    // every pair followed by its translates, `cells` entries per pair
    let sites: Vec<(usize, usize)> = config
        .pairs
        .iter()
        .flat_map(|p| (0..cells).map(move |t| ((p.i - 1 + 4 * t) % n, (p.j - 1 + 4 * t) % n)))
        .collect();
    let per_bin = config.measure_sweeps / config.bins;
    let mut scratch = vec![0.0; sites.len()];
    let mut bins = Vec::with_capacity(config.bins);
    let mut energies = Vec::with_capacity(config.measure_sweeps);
    let mut order_sum = 0.0;
    let (mut m_legs, mut m_loops, mut aborted) = (0u64, 0u64, 0u64);
    for _ in 0..config.bins {
        let mut corr = vec![0.0; config.pairs.len()];
        let mut energy = 0.0;
        for _ in 0..per_bin {
            let s = walker.sweep()?;
            m_legs += s.loop_legs;
            m_loops += s.loops;
            aborted += s.aborted;
            walker.measure_szsz(&sites, &mut scratch);
            for (c, class) in corr.iter_mut().zip(scratch.chunks_exact(cells)) {
                *c += 3.0 * class.iter().sum::<f64>() / cells as f64;
            }
            let e = walker.energy();
            energy += e;
            energies.push(e);
            order_sum += walker.expansion_order() as f64;
        }
        for c in corr.iter_mut() {
            *c /= per_bin as f64;
        }
        bins.push(Bin { correlators: corr, energy: energy / per_bin as f64 });
    }
    let summary = WalkerSummary {
        mean_expansion_order: order_sum / config.measure_sweeps as f64,
        cutoff: walker.cutoff(),
        loops_per_sweep: walker.loops_per_sweep,
        mean_loop_length: if m_loops > 0 { m_legs as f64 / m_loops as f64 } else { 0.0 },
        aborted_loops: aborted,
        energy_tau_int: stats::integrated_autocorrelation_time(&energies),
    };
    Ok(WalkerOutput { bins, summary })
}

/// Single-walker run (stream 0). Identical to `run_replicated(config, 1)`.
pub fn run_qmc(config: &QmcConfig) -> Result<QmcRun> {
    run_replicated(config, 1)
}

/// Independent walkers on streams `0..walkers` of the same seed, run in
/// parallel when the `parallel` feature is on; their bins are pooled.
/// The result does not depend on the thread count.
pub fn run_replicated(config: &QmcConfig, walkers: usize) -> Result<QmcRun> {
    config.validate()?;
    if walkers == 0 {
        return Err(Error::InvalidArgument("need at least one walker".into()));
    }
    let outputs = par::map_range(walkers, |w| run_walker(config, w));
    let mut bins = Vec::with_capacity(walkers * config.bins);
    let mut summaries = Vec::with_capacity(walkers);
    for out in outputs {
        let out = out?;
        bins.extend(out.bins);
        summaries.push(out.summary);
    }
    let correlators = config
        .pairs
        .iter()
        .enumerate()
        .map(|(k, &pair)| {
            let xs: Vec<f64> = bins.iter().map(|b| b.correlators[k]).collect();
            CorrelatorEstimate { pair, value: stats::mean(&xs), stderr: stats::standard_error(&xs), source: CorrelatorSource::Qmc }
        })
        .collect();
    let es: Vec<f64> = bins.iter().map(|b| b.energy).collect();
    Ok(QmcRun {
        config: config.clone(),
        energy: stats::mean(&es),
        energy_stderr: stats::standard_error(&es),
        correlators,
        walkers: summaries,
        bins,
        provenance: Provenance {
            seed: config.seed,
            walkers,
            generator: GENERATOR,
            code_version: CODE_VERSION,
            config_hash: short_hash(&format!("{};walkers={walkers}", config.canonical())),
        },
    })
}
