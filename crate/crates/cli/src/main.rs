// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use mixspin::qmc::{MAX_BETA, MAX_SITES};
use mixspin::sweep::{
    run_excited, run_gap_sweep, run_sweep, verify_csv, write_excited_row, write_gap_rows, write_rows, Header, Method,
    PairSelector, QmcSettings, SweepPlan,
};
use mixspin::{ChainSpec, Error, Result};

/// Worker-thread count for sweep points and QMC walkers.
const THREADS_ENV: &str = "MIXSPIN_THREADS";

#[derive(Parser)]
#[command(name = "mixspin", version, about = "Entanglement in the mixed-spin 1/2-1/2-1-1 Heisenberg ring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-state correlators and log-negativity across an alpha grid.
    GroundSweep(SweepArgs),
    /// Thermal correlators and log-negativity across a temperature grid.
    ThermalSweep(SweepArgs),
    /// Spin gap across an alpha grid (Lanczos).
    GapSweep(SweepArgs),
    /// First excited multiplet of one pair by thermal subtraction.
    Excited(ExcitedArgs),
    /// Re-derive g and log-negativity of every row of a results file.
    Verify { file: PathBuf },
}

#[derive(Args, Clone)]
struct Output {
    /// Output file (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave the timestamp line out of the provenance header.
    #[arg(long)]
    no_timestamp: bool,
    /// key=value file; keys are long flag names, flags on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SweepArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma list or start:stop:step.
    #[arg(long)]
    alpha_grid: Option<String>,
    /// k_B T in units of J1 (0 = ground state).
    #[arg(long)]
    kbt: Option<f64>,
    #[arg(long)]
    kbt_grid: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    beta_grid: Option<String>,
    #[arg(long)]
    method: Option<String>,
    /// Comma list of 11, 12, 22, 21.
    #[arg(long)]
    pairs: Option<String>,
    #[arg(long)]
    sweeps: Option<usize>,
    #[arg(long)]
    therm: Option<usize>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    walkers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Allow QMC with N > 32 or beta > 64.
    #[arg(long)]
    long_run: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Clone)]
struct ExcitedArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// One of 11, 12, 22, 21.
    #[arg(long)]
    pair: Option<String>,
    #[arg(long)]
    beta_probe: Option<f64>,
    #[command(flatten)]
    output: Output,
}

/// Command-line values backed by an optional key=value file.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> Result<Self> {
        let mut file = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (k, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("{}:{}: expected key=value", path.display(), k + 1)))?;
                file.insert(key.trim().replace('_', "-"), value.trim().to_string());
            }
        }
        Ok(Self { file })
    }

    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| Error::Parse(format!("config key {key}: invalid value {v:?}"))),
        }
    }

    fn flag(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.get::<bool>(None, key)?.unwrap_or(false))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.file.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::Parse(format!("config key {k:?} does not apply to this command"))),
            None => Ok(()),
        }
    }
}

/// `a,b,c` or `start:stop:step` (inclusive, values rounded to 12 decimals).
fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("invalid grid {s:?}"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    if s.contains(':') {
        let parts: Vec<f64> = s.split(':').map(num).collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

/// Values of one axis given as `--<name>` or `--<name>-grid`; the command
/// line replaces the config file for the whole axis.
fn axis_values(s: &Settings, grid: &Option<String>, single: Option<f64>, name: &str) -> Result<Option<Vec<f64>>> {
    let grid_key = format!("{name}-grid");
    let (grid, single) = if grid.is_some() || single.is_some() {
        (grid.clone(), single)
    } else {
        (s.get(None, &grid_key)?, s.get(None, name)?)
    };
    match (grid, single) {
        (Some(_), Some(_)) => Err(Error::InvalidArgument(format!("give either --{name} or --{name}-grid"))),
        (Some(g), None) => parse_grid(&g).map(Some),
        (None, Some(x)) => Ok(Some(vec![x])),
        (None, None) => Ok(None),
    }
}

/// Temperature grid from `--kbt*` or `--beta*`, ascending in k_B T.
fn temperature_grid(s: &Settings, a: &SweepArgs) -> Result<Vec<f64>> {
    let kbt = axis_values(s, &a.kbt_grid, a.kbt, "kbt")?;
    let beta = axis_values(s, &a.beta_grid, a.beta, "beta")?;
    let mut grid = match (kbt, beta) {
        (Some(_), Some(_)) => return Err(Error::InvalidArgument("give temperatures as k_B T or beta, not both".into())),
        (Some(t), None) => t,
        (None, Some(b)) => {
            if b.iter().any(|&x| !(x > 0.0)) {
                return Err(Error::InvalidArgument("beta must be > 0".into()));
            }
            b.iter().map(|x| if x.is_infinite() { 0.0 } else { 1.0 / x }).collect()
        }
        (None, None) => return Err(Error::InvalidArgument("missing --kbt/--kbt-grid (or --beta/--beta-grid)".into())),
    };
    grid.sort_by(f64::total_cmp);
    Ok(grid)
}

const SWEEP_KEYS: [&str; 18] = [
    "n",
    "alpha",
    "alpha-grid",
    "kbt",
    "kbt-grid",
    "beta",
    "beta-grid",
    "method",
    "pairs",
    "sweeps",
    "therm",
    "bins",
    "walkers",
    "seed",
    "long-run",
    "out",
    "no-timestamp",
    "n-sites",
];

fn build_plan(command: &str, a: &SweepArgs, s: &Settings) -> Result<SweepPlan> {
    s.check_keys(&SWEEP_KEYS)?;
    let n = s
        .get(a.n, "n")?
        .or(s.get(None, "n-sites")?)
        .ok_or_else(|| Error::InvalidArgument("missing --n".into()))?;
    let alphas = axis_values(s, &a.alpha_grid, a.alpha, "alpha")?
        .ok_or_else(|| Error::InvalidArgument("missing --alpha/--alpha-grid".into()))?;
    let method: Method = s.get(a.method.clone(), "method")?.as_deref().unwrap_or("ed").parse()?;
    let mut plan = match command {
        "thermal-sweep" => {
            let [alpha] = alphas[..] else {
                return Err(Error::InvalidArgument("thermal-sweep takes a single --alpha".into()));
            };
            SweepPlan::thermal(n, alpha, temperature_grid(s, a)?, method)
        }
        _ => {
            if a.kbt.is_some() || a.kbt_grid.is_some() || a.beta.is_some() || a.beta_grid.is_some() {
                return Err(Error::InvalidArgument("ground-sweep takes no temperature".into()));
            }
            SweepPlan::ground(n, alphas, method)
        }
    };
    if command == "ground-sweep" && method == Method::Qmc {
        return Err(Error::InvalidArgument("ground-sweep needs --method ed or lanczos".into()));
    }
    if let Some(p) = s.get(a.pairs.clone(), "pairs")? {
        plan.pairs = PairSelector::parse_list(&p)?;
    }
    let d = QmcSettings::default();
    plan.qmc = QmcSettings {
        sweeps: s.get(a.sweeps, "sweeps")?.unwrap_or(d.sweeps),
        therm: s.get(a.therm, "therm")?,
        bins: s.get(a.bins, "bins")?.unwrap_or(d.bins),
        walkers: s.get(a.walkers, "walkers")?.unwrap_or(d.walkers),
        seed: s.get(a.seed, "seed")?.unwrap_or(d.seed),
        long_run: s.flag(a.long_run, "long-run")?,
    };
    Ok(plan)
}

fn open_output(path: Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn stamp(mut header: Header, output: &Output, s: &Settings) -> Result<Header> {
    if !s.flag(output.no_timestamp, "no-timestamp")? {
        header.timestamp = Some(SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
    }
    Ok(header)
}

fn out_path(output: &Output, s: &Settings) -> Result<Option<PathBuf>> {
    s.get(output.out.clone(), "out")
}

fn sweep(command: &str, a: SweepArgs) -> Result<()> {
    let s = Settings::load(a.output.config.as_ref())?;
    if command == "gap-sweep" {
        s.check_keys(&SWEEP_KEYS)?;
        let n = s.get(a.n, "n")?.ok_or_else(|| Error::InvalidArgument("missing --n".into()))?;
        let alphas =
            axis_values(&s, &a.alpha_grid, a.alpha, "alpha")?
                .ok_or_else(|| Error::InvalidArgument("missing --alpha/--alpha-grid".into()))?;
        if let Some(m) = s.get(a.method.clone(), "method")? {
            if m != "lanczos" {
                return Err(Error::InvalidArgument("gap-sweep only supports --method lanczos".into()));
            }
        }
        let rows = run_gap_sweep(n, &alphas)?;
        let grid: Vec<String> = alphas.iter().map(|x| x.to_string()).collect();
        let header = stamp(Header::new(command, format!("n_sites={n};alpha_grid={}", grid.join(",")), None), &a.output, &s)?;
        return write_gap_rows(open_output(out_path(&a.output, &s)?)?, &header, &rows);
    }
    let plan = build_plan(command, &a, &s)?;
    if plan.method == Method::Qmc && plan.qmc.long_run {
        let max_beta = plan.points().iter().map(|p| 1.0 / p.1).fold(0.0, f64::max);
        if plan.n_sites > MAX_SITES || max_beta > MAX_BETA {
            eprintln!(
                "warning: long run (N = {}, beta up to {max_beta}); expect hours of wall-clock time",
                plan.n_sites
            );
        }
    }
    let rows = run_sweep(&plan)?;
    let header = stamp(Header::for_plan(command, &plan), &a.output, &s)?;
    write_rows(open_output(out_path(&a.output, &s)?)?, &header, &rows)
}

fn excited(a: ExcitedArgs) -> Result<()> {
    let s = Settings::load(a.output.config.as_ref())?;
    s.check_keys(&["n", "n-sites", "alpha", "pair", "beta-probe", "out", "no-timestamp"])?;
    let n = s
        .get(a.n, "n")?
        .or(s.get(None, "n-sites")?)
        .ok_or_else(|| Error::InvalidArgument("missing --n".into()))?;
    let alpha = s.get(a.alpha, "alpha")?.ok_or_else(|| Error::InvalidArgument("missing --alpha".into()))?;
    let selector: PairSelector = s.get(a.pair.clone(), "pair")?.as_deref().unwrap_or("12").parse()?;
    let beta_probe = s.get(a.beta_probe, "beta-probe")?.unwrap_or(32.0);
    let spec = ChainSpec::new(n, alpha)?;
    let row = run_excited(&spec, selector.pair(n), beta_probe)?;
    let config = format!("n_sites={n};alpha={alpha};pair={};beta_probe={beta_probe}", selector.label());
    let header = stamp(Header::new("excited", config, None), &a.output, &s)?;
    write_excited_row(open_output(out_path(&a.output, &s)?)?, &header, &row)
}

fn verify(file: PathBuf) -> Result<()> {
    let report = verify_csv(File::open(&file)?)?;
    println!("checked {} rows, skipped {} (1,1) rows, {} mismatches", report.checked, report.skipped, report.mismatches.len());
    for m in &report.mismatches {
        println!("  {m}");
    }
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::VerificationFailed(format!("{} mismatching values in {}", report.mismatches.len(), file.display())))
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize =
        value.parse().map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={value:?} is not a thread count")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::GroundSweep(a) => sweep("ground-sweep", a),
        Command::ThermalSweep(a) => sweep("thermal-sweep", a),
        Command::GapSweep(a) => sweep("gap-sweep", a),
        Command::Excited(a) => excited(a),
        Command::Verify { file } => verify(file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
