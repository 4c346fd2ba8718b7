//! Parameter sweeps over α or temperature, and their CSV form.
//!
//! Every results file starts with a block of `#` provenance lines followed by
//! one header row and one row per (grid point × pair). Floats are written in
//! shortest round-trip form, so a file is a deterministic function of the
//! invocation (the optional timestamp line aside).

use std::io::{Read, Write};
use std::str::FromStr;

use crate::chain::ChainSpec;
use crate::entanglement::{g_from_correlator, log_negativity, negativity_of_state, negativity_with_error, SU2PairState};
use crate::error::{Error, Result};
use crate::exact::{
    diagonalize, direct_excited_pair_dm, excited_pair_dm_by_subtraction, low_energy_spectrum, spin_gap, LanczosOptions,
    SpectralDecomposition, ThermalSpec,
};
use crate::pair::{CorrelatorEstimate, Pair, PairKind};
use crate::provenance::{short_hash, CODE_VERSION, GENERATOR};
use crate::qmc::{run_replicated, QmcConfig};
use crate::par;

/// Tolerance of [`verify_csv`] on re-derived `g` and log-negativity.
pub const VERIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ed,
    Lanczos,
    Qmc,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Ed => "ed",
            Method::Lanczos => "lanczos",
            Method::Qmc => "qmc",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ed" => Ok(Method::Ed),
            "lanczos" => Ok(Method::Lanczos),
            "qmc" => Ok(Method::Qmc),
            _ => Err(Error::Parse(format!("unknown method {s:?} (expected ed, lanczos or qmc)"))),
        }
    }
}

/// Which pair of the first unit cell (or across its right edge) to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairSelector {
    /// Sites (1, 2): the two spin-½ sites.
    Cell11,
    /// Sites (2, 3): spin-½ and spin-1 in the same cell.
    Cell12,
    /// Sites (3, 4): the two spin-1 sites.
    Cell22,
    /// Sites (4, 5): spin-1 and the next cell's spin-½.
    Inter21,
}

impl PairSelector {
    pub const ALL: [PairSelector; 4] = [Self::Cell11, Self::Cell12, Self::Cell22, Self::Inter21];

    pub fn label(self) -> &'static str {
        match self {
            Self::Cell11 => "11",
            Self::Cell12 => "12",
            Self::Cell22 => "22",
            Self::Inter21 => "21",
        }
    }

    pub fn pair(self, n_sites: usize) -> Pair {
        match self {
            Self::Cell11 => Pair::new(1, 2),
            Self::Cell12 => Pair::new(2, 3),
            Self::Cell22 => Pair::new(3, 4),
            Self::Inter21 => Pair::new(4, 4 % n_sites.max(1) + 1),
        }
    }

    /// Comma-separated selectors, e.g. `11,12`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        let list: Vec<Self> = s.split(',').map(|t| t.trim().parse()).collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(Error::Parse("empty pair list".into()));
        }
        Ok(list)
    }
}

impl FromStr for PairSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| Error::Parse(format!("unknown pair {s:?} (expected 11, 12, 22 or 21)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Alpha,
    Temperature,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QmcSettings {
    pub sweeps: usize,
    /// Defaults to 10% of `sweeps`.
    pub therm: Option<usize>,
    pub bins: usize,
    pub walkers: usize,
    pub seed: u64,
    pub long_run: bool,
}

impl Default for QmcSettings {
    fn default() -> Self {
        Self { sweeps: 102_400, therm: None, bins: 32, walkers: 1, seed: 1, long_run: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub n_sites: usize,
    pub axis: Axis,
    /// Strictly ascending α values or k_B T values (0 = ground state).
    pub grid: Vec<f64>,
    /// Fixed α on a temperature axis.
    pub alpha: f64,
    /// Fixed k_B T on an α axis.
    pub kbt: f64,
    pub method: Method,
    pub pairs: Vec<PairSelector>,
    pub qmc: QmcSettings,
}

impl SweepPlan {
    pub fn ground(n_sites: usize, alphas: Vec<f64>, method: Method) -> Self {
        Self {
            n_sites,
            axis: Axis::Alpha,
            grid: alphas,
            alpha: 0.0,
            kbt: 0.0,
            method,
            pairs: PairSelector::ALL.to_vec(),
            qmc: QmcSettings::default(),
        }
    }

    pub fn thermal(n_sites: usize, alpha: f64, kbts: Vec<f64>, method: Method) -> Self {
        Self { axis: Axis::Temperature, grid: kbts, alpha, ..Self::ground(n_sites, vec![], method) }
    }

    /// `(alpha, k_B T)` of every grid point.
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self.axis {
            Axis::Alpha => self.grid.iter().map(|&a| (a, self.kbt)).collect(),
            Axis::Temperature => self.grid.iter().map(|&t| (self.alpha, t)).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidArgument("grid is empty".into()));
        }
        if self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("grid must be strictly ascending".into()));
        }
        if self.pairs.is_empty() {
            return Err(Error::InvalidArgument("no pairs requested".into()));
        }
        for (alpha, kbt) in self.points() {
            ChainSpec::new(self.n_sites, alpha)?;
            ThermalSpec::from_kbt(kbt)?;
            if self.method == Method::Qmc && kbt == 0.0 {
                return Err(Error::InvalidArgument("QMC needs k_B T > 0".into()));
            }
        }
        if self.method == Method::Qmc {
            for (k, &point) in self.points().iter().enumerate() {
                self.qmc_config(point, k)?.validate()?;
            }
            if self.qmc.walkers == 0 {
                return Err(Error::InvalidArgument("need at least one walker".into()));
            }
        }
        Ok(())
    }

    /// Seed used at grid point `index` (the plan seed offset by the index).
    pub fn point_seed(&self, index: usize) -> u64 {
        self.qmc.seed.wrapping_add(index as u64)
    }

    fn qmc_config(&self, (alpha, kbt): (f64, f64), index: usize) -> Result<QmcConfig> {
        let spec = ChainSpec::new(self.n_sites, alpha)?;
        let pairs = self.pairs.iter().map(|p| p.pair(self.n_sites)).collect();
        let mut cfg = QmcConfig::new(spec, 1.0 / kbt, self.qmc.sweeps, self.point_seed(index), pairs);
        cfg.therm_sweeps = self.qmc.therm.unwrap_or(self.qmc.sweeps / 10);
        cfg.bins = self.qmc.bins;
        cfg.long_run = self.qmc.long_run;
        Ok(cfg)
    }

    /// Canonical text of every input that affects the rows.
    pub fn canonical(&self) -> String {
        let grid: Vec<String> = self.grid.iter().map(|g| g.to_string()).collect();
        let pairs: Vec<&str> = self.pairs.iter().map(|p| p.label()).collect();
        let mut s = format!(
            "n_sites={};axis={:?};grid={};alpha={};kbt={};method={};pairs={}",
            self.n_sites,
            self.axis,
            grid.join(","),
            self.alpha,
            self.kbt,
            self.method.label(),
            pairs.join(",")
        );
        if self.method == Method::Qmc {
            let q = &self.qmc;
            s += &format!(
                ";sweeps={};therm={};bins={};walkers={};seed={};long_run={}",
                q.sweeps,
                q.therm.unwrap_or(q.sweeps / 10),
                q.bins,
                q.walkers,
                q.seed,
                q.long_run
            );
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub alpha: f64,
    pub k_b_t: f64,
    pub pair_kind: PairKind,
    pub site_i: usize,
    pub site_j: usize,
    pub correlator: f64,
    pub correlator_err: f64,
    /// Absent for (1,1) pairs.
    pub g: Option<f64>,
    /// Absent for (1,1) pairs from QMC.
    pub logneg: Option<f64>,
    pub logneg_err: Option<f64>,
    pub flags: Vec<String>,
    pub method: Method,
    pub seed: Option<u64>,
}

pub const ROW_COLUMNS: [&str; 13] = [
    "alpha",
    "k_b_t",
    "pair_kind",
    "site_i",
    "site_j",
    "correlator",
    "correlator_err",
    "g",
    "logneg",
    "logneg_err",
    "flags",
    "method",
    "seed",
];

/// Shortest round-trip form, switching to exponent notation for tiny values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl ResultRow {
    fn record(&self) -> Vec<String> {
        vec![
            num(self.alpha),
            num(self.k_b_t),
            self.pair_kind.label().to_string(),
            self.site_i.to_string(),
            self.site_j.to_string(),
            num(self.correlator),
            num(self.correlator_err),
            opt_num(self.g),
            opt_num(self.logneg),
            opt_num(self.logneg_err),
            self.flags.join(";"),
            self.method.label().to_string(),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
        ]
    }
}

fn g_of(kind: PairKind, c: f64) -> Option<f64> {
    (kind != PairKind::OneOne).then(|| g_from_correlator(kind, &CorrelatorEstimate::exact(Pair::new(1, 2), c)).unwrap().g)
}

/// Rows of one grid point from an exact spectrum. Log-negativity comes from
/// the explicit pair density matrix.
fn exact_rows(
    spectrum: &SpectralDecomposition,
    plan: &SweepPlan,
    (alpha, kbt): (f64, f64),
) -> Result<Vec<ResultRow>> {
    let thermal = ThermalSpec::from_kbt(kbt)?;
    plan.pairs
        .iter()
        .map(|sel| {
            let pair = sel.pair(plan.n_sites);
            let (dm, bound) = spectrum.thermal_pair_dm(thermal, pair)?;
            let c = dm.exchange_expectation();
            let kind = dm.kind();
            let neg = log_negativity(&dm)?;
            let mut flags = Vec::new();
            if bound > 0.0 {
                flags.push(format!("truncation_bound={bound:e}"));
            }
            Ok(ResultRow {
                alpha,
                k_b_t: kbt,
                pair_kind: kind,
                site_i: pair.i,
                site_j: pair.j,
                correlator: c,
                correlator_err: 0.0,
                g: g_of(kind, c),
                logneg: Some(neg.value),
                logneg_err: Some(0.0),
                flags,
                method: plan.method,
                seed: None,
            })
        })
        .collect()
}

fn spectrum_for(plan: &SweepPlan, alpha: f64) -> Result<SpectralDecomposition> {
    let spec = ChainSpec::new(plan.n_sites, alpha)?;
    match plan.method {
        Method::Ed => diagonalize(&spec),
        // ground multiplet plus the first magnetic sector; the truncation
        // bound refuses anything this does not cover
        _ => low_energy_spectrum(&spec, 2, 2, &LanczosOptions::default()),
    }
}

fn qmc_rows(plan: &SweepPlan, point: (f64, f64), index: usize) -> Result<Vec<ResultRow>> {
    let cfg = plan.qmc_config(point, index)?;
    let run = run_replicated(&cfg, plan.qmc.walkers)?;
    let spins = cfg.spec.spins();
    run.correlators
        .iter()
        .enumerate()
        .map(|(k, est)| {
            let pair = est.pair;
            let kind = PairKind::from_spins(spins[pair.i - 1], spins[pair.j - 1]);
            let (g, logneg, logneg_err, flags) = if kind == PairKind::OneOne {
                (None, None, None, vec!["not_reported".to_string()])
            } else {
                let state = g_from_correlator(kind, est)?;
                let neg = negativity_with_error(&state, Some(&run.pair_bins(k)))?;
                let flags = neg.flags.iter().map(|f| f.label().to_string()).collect();
                (Some(state.g), Some(neg.value), Some(neg.stderr), flags)
            };
            Ok(ResultRow {
                alpha: point.0,
                k_b_t: point.1,
                pair_kind: kind,
                site_i: pair.i,
                site_j: pair.j,
                correlator: est.value,
                correlator_err: est.stderr,
                g,
                logneg,
                logneg_err,
                flags,
                method: Method::Qmc,
                seed: Some(cfg.seed),
            })
        })
        .collect()
}

/// Rows for every grid point, in grid order. Points run concurrently when
/// the `parallel` feature is on.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<ResultRow>> {
    plan.validate()?;
    let points = plan.points();
    let per_point: Vec<Vec<ResultRow>> = match (plan.method, plan.axis) {
        (Method::Qmc, _) => {
            let idx: Vec<usize> = (0..points.len()).collect();
            par::try_map(&idx, |&k| qmc_rows(plan, points[k], k))?
        }
        (_, Axis::Temperature) => {
            let spectrum = spectrum_for(plan, plan.alpha)?;
            par::try_map(&points, |&p| exact_rows(&spectrum, plan, p))?
        }
        (_, Axis::Alpha) => par::try_map(&points, |&p| exact_rows(&spectrum_for(plan, p.0)?, plan, p))?,
    };
    Ok(per_point.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub alpha: f64,
    pub n_sites: usize,
    pub gap: f64,
}

pub fn run_gap_sweep(n_sites: usize, alphas: &[f64]) -> Result<Vec<GapRow>> {
    if alphas.is_empty() || alphas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("grid must be nonempty and strictly ascending".into()));
    }
    par::try_map(alphas, |&alpha| {
        let spec = ChainSpec::new(n_sites, alpha)?;
        Ok(GapRow { alpha, n_sites, gap: spin_gap(&spec)? })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcitedRow {
    pub alpha: f64,
    pub n_sites: usize,
    pub pair: Pair,
    pub pair_kind: PairKind,
    pub beta_probe: f64,
    pub energy: f64,
    pub multiplet_dim: usize,
    pub weight: f64,
    pub contamination: f64,
    pub trace: f64,
    pub logneg_subtraction: f64,
    pub logneg_direct: f64,
    pub difference: f64,
    /// Largest entry of `|ρ_subtraction - ρ_direct|`.
    pub dm_max_diff: f64,
}

/// First excited multiplet of one pair by thermal subtraction, with the
/// direct construction alongside.
pub fn run_excited(spec: &ChainSpec, pair: Pair, beta_probe: f64) -> Result<ExcitedRow> {
    let sub = excited_pair_dm_by_subtraction(spec, pair, beta_probe)?;
    let direct = direct_excited_pair_dm(spec, pair)?;
    let (ns, nd) = (log_negativity(&sub.dm)?.value, log_negativity(&direct.dm)?.value);
    let dm_max_diff = (&sub.dm.matrix - &direct.dm.matrix).amax();
    Ok(ExcitedRow {
        alpha: spec.alpha,
        n_sites: spec.n_sites,
        pair,
        pair_kind: sub.dm.kind(),
        beta_probe,
        energy: sub.energy,
        multiplet_dim: sub.multiplet_dim,
        weight: sub.weight,
        contamination: sub.contamination,
        trace: sub.dm.trace(),
        logneg_subtraction: ns,
        logneg_direct: nd,
        difference: (ns - nd).abs(),
        dm_max_diff,
    })
}

/// Provenance block written ahead of the column header.
#[derive(Debug, Clone, PartialEq)]
pub struct Header {
    pub command: String,
    pub config: String,
    pub seed: Option<u64>,
    /// Unix seconds; `None` leaves the line out.
    pub timestamp: Option<u64>,
}

impl Header {
    pub fn new(command: &str, config: String, seed: Option<u64>) -> Self {
        Self { command: command.to_string(), config, seed, timestamp: None }
    }

    pub fn for_plan(command: &str, plan: &SweepPlan) -> Self {
        let seed = (plan.method == Method::Qmc).then_some(plan.qmc.seed);
        Self::new(command, plan.canonical(), seed)
    }

    pub fn config_hash(&self) -> String {
        short_hash(&format!("{}|{}", self.command, self.config))
    }

    fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "# mixspin {CODE_VERSION}")?;
        writeln!(w, "# command: {}", self.command)?;
        writeln!(w, "# config: {}", self.config)?;
        writeln!(w, "# config_hash: {}", self.config_hash())?;
        writeln!(w, "# seed: {}", self.seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into()))?;
        writeln!(w, "# generator: {GENERATOR}")?;
        if let Some(t) = self.timestamp {
            writeln!(w, "# timestamp: {t}")?;
        }
        Ok(())
    }
}

fn write_table<W: Write>(mut w: W, header: &Header, columns: &[&str], records: Vec<Vec<String>>) -> Result<()> {
    header.write(&mut w)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(columns)?;
    for r in records {
        out.write_record(&r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_rows<W: Write>(w: W, header: &Header, rows: &[ResultRow]) -> Result<()> {
    write_table(w, header, &ROW_COLUMNS, rows.iter().map(ResultRow::record).collect())
}

pub fn write_gap_rows<W: Write>(w: W, header: &Header, rows: &[GapRow]) -> Result<()> {
    let records = rows
        .iter()
        .map(|r| vec![num(r.alpha), num(r.gap), r.n_sites.to_string(), "lanczos".to_string()])
        .collect();
    write_table(w, header, &["alpha", "gap", "n_sites", "method"], records)
}

pub fn write_excited_row<W: Write>(w: W, header: &Header, r: &ExcitedRow) -> Result<()> {
    let columns = [
        "alpha",
        "n_sites",
        "pair_kind",
        "site_i",
        "site_j",
        "beta_probe",
        "energy",
        "multiplet_dim",
        "weight",
        "contamination",
        "trace",
        "logneg_subtraction",
        "logneg_direct",
        "difference",
        "dm_max_diff",
    ];
    let record = vec![
        num(r.alpha),
        r.n_sites.to_string(),
        r.pair_kind.label().to_string(),
        r.pair.i.to_string(),
        r.pair.j.to_string(),
        num(r.beta_probe),
        num(r.energy),
        r.multiplet_dim.to_string(),
        num(r.weight),
        num(r.contamination),
        num(r.trace),
        num(r.logneg_subtraction),
        num(r.logneg_direct),
        num(r.difference),
        num(r.dm_max_diff),
    ];
    write_table(w, header, &columns, vec![record])
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checked: usize,
    /// (1,1) rows: not determined by the correlator.
    pub skipped: usize,
    pub mismatches: Vec<String>,
}

impl VerifyReport {
    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn parse_f64(field: &str, what: &str, line: usize) -> Result<f64> {
    field.parse().map_err(|_| Error::Parse(format!("row {line}: invalid {what} {field:?}")))
}

/// Re-derive `g` and the log-negativity of every row from its correlator.
pub fn verify_csv<R: Read>(input: R) -> Result<VerifyReport> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ROW_COLUMNS {
        return Err(Error::Parse(format!("unexpected columns {headers:?}")));
    }
    let mut report = VerifyReport::default();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = k + 1;
        let kind: PairKind = rec[2].parse()?;
        if kind == PairKind::OneOne {
            report.skipped += 1;
            continue;
        }
        let c = parse_f64(&rec[5], "correlator", line)?;
        let g = parse_f64(&rec[7], "g", line)?;
        let expected_g = g_of(kind, c).unwrap();
        if (g - expected_g).abs() > VERIFY_TOL {
            report.mismatches.push(format!("row {line}: g = {g}, correlator gives {expected_g}"));
        }
        let logneg = parse_f64(&rec[8], "logneg", line)?;
        let expected = negativity_of_state(&SU2PairState::new(kind, expected_g).projected())?.value;
        if (logneg - expected).abs() > VERIFY_TOL {
            report.mismatches.push(format!("row {line}: logneg = {logneg}, correlator gives {expected}"));
        }
        report.checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        assert_eq!(PairSelector::Inter21.pair(8), Pair::new(4, 5));
        assert_eq!(PairSelector::Inter21.pair(4), Pair::new(4, 1));
        assert_eq!(PairSelector::parse_list("11, 21").unwrap(), vec![PairSelector::Cell11, PairSelector::Inter21]);
        assert!(PairSelector::parse_list("13").is_err());
    }

    #[test]
    fn plan_validation() {
        assert!(SweepPlan::ground(8, vec![0.1, 0.1], Method::Ed).validate().is_err());
        assert!(SweepPlan::ground(8, vec![], Method::Ed).validate().is_err());
        assert!(SweepPlan::ground(6, vec![0.1], Method::Ed).validate().is_err());
        assert!(SweepPlan::thermal(8, 0.5, vec![0.0, 0.5], Method::Qmc).validate().is_err());
        let mut p = SweepPlan::thermal(8, 0.5, vec![0.5], Method::Qmc);
        p.qmc.bins = 4;
        assert!(matches!(p.validate(), Err(Error::TooFewBins { .. })));
    }

    #[test]
    fn single_point_ground_sweep_roundtrips_through_verify() {
        let plan = SweepPlan::ground(4, vec![0.5], Method::Ed);
        let rows = run_sweep(&plan).unwrap();
        assert_eq!(rows.len(), 4);
        let mut buf = Vec::new();
        write_rows(&mut buf, &Header::for_plan("ground-sweep", &plan), &rows).unwrap();
        let report = verify_csv(&buf[..]).unwrap();
        assert_eq!((report.checked, report.skipped), (3, 1));
        assert!(report.is_ok(), "{:?}", report.mismatches);
    }

    #[test]
    fn tampered_row_fails_verification() {
        let plan = SweepPlan::ground(4, vec![0.3], Method::Ed);
        let rows = run_sweep(&plan).unwrap();
        let mut bad = rows.clone();
        bad[0].logneg = Some(bad[0].logneg.unwrap() + 1e-6);
        let mut buf = Vec::new();
        write_rows(&mut buf, &Header::for_plan("ground-sweep", &plan), &bad).unwrap();
        let report = verify_csv(&buf[..]).unwrap();
        assert_eq!(report.mismatches.len(), 1);
    }

    #[test]
    fn lanczos_matches_dense_on_ground_rows() {
        let ed = run_sweep(&SweepPlan::ground(8, vec![0.6], Method::Ed)).unwrap();
        let lz = run_sweep(&SweepPlan::ground(8, vec![0.6], Method::Lanczos)).unwrap();
        for (a, b) in ed.iter().zip(&lz) {
            assert!((a.correlator - b.correlator).abs() < 1e-8);
            assert!((a.logneg.unwrap() - b.logneg.unwrap()).abs() < 1e-7);
        }
    }

    #[test]
    fn header_hash_tracks_config() {
        let a = Header::new("x", "n=1".into(), None);
        let b = Header::new("x", "n=2".into(), None);
        assert_ne!(a.config_hash(), b.config_hash());
        let mut buf = Vec::new();
        write_gap_rows(&mut buf, &a, &[GapRow { alpha: 0.0, n_sites: 4, gap: 1.0 }]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# config_hash: "));
        assert!(text.ends_with("alpha,gap,n_sites,method\n0.0,1.0,4,lanczos\n"));
    }
}
