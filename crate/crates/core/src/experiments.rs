//! Seeded surveys over pairs and schedules of random or enumerated bases.
//!
//! Every work unit draws from its own ChaCha stream selected by
//! `(seed, unit index)`, and records are sorted canonically before they are
//! returned, so output bytes depend only on the configuration.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::PathBuf;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Prime;
use crate::chain::{partition_with_tables, BasisSchedule, InverseTable};
use crate::error::{Error, Result};
use crate::field::{count_irreducibles, enumerate_irreducibles, random_irreducible, Guard, IrreduciblePoly};
use crate::loops::census_with_tables;
use crate::poly::ElementIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { samples: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "text" => Some(Format::Text),
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "dot" => Some(Format::Dot),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub p: Prime,
    /// Inclusive degree range.
    pub n: (usize, usize),
    pub mode: Mode,
    pub seed: u64,
    pub beta: usize,
    pub guard: Guard,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(p: Prime, n: usize) -> Self {
        ExperimentConfig {
            p,
            n: (n, n),
            mode: Mode::Exhaustive,
            seed: 0,
            beta: 2,
            guard: Guard::DEFAULT,
            output: None,
            format: Format::Csv,
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<usize> {
        self.n.0..=self.n.1
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.0 == 0 || self.n.0 > self.n.1 {
            return Err(Error::Config(format!(
                "degree range {}..{} is empty or starts at 0",
                self.n.0, self.n.1
            )));
        }
        if self.beta < 2 {
            return Err(Error::Config("beta must be at least 2".into()));
        }
        if let Mode::Sampled { samples: 0 } = self.mode {
            return Err(Error::Config("sampled mode needs samples >= 1".into()));
        }
        for n in self.degrees() {
            self.guard.field_size(self.p, n)?;
            let available = count_irreducibles(self.p, n);
            if (available as usize) < self.beta {
                return Err(Error::TooFewIrreducibles {
                    n,
                    available,
                    needed: self.beta,
                });
            }
            if self.mode == Mode::Exhaustive {
                let tuples = (0..self.beta as u128)
                    .try_fold(1u128, |acc, i| acc.checked_mul(available - i))
                    .unwrap_or(u128::MAX);
                self.guard.check(tuples)?;
            }
        }
        Ok(())
    }
}

/// Independent stream for work unit `task`.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Renders `r` with exactly six decimals, rounding half up.
pub fn render_decimal(r: &Ratio<u64>) -> String {
    let (num, den) = (*r.numer() as u128, *r.denom() as u128);
    let scaled = (num * 2_000_000 + den) / (2 * den);
    format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairRecord {
    pub p: u32,
    pub n: usize,
    pub f1: ElementIndex,
    pub f2: ElementIndex,
    pub num_cycles: usize,
    pub min_len: usize,
    pub max_len: usize,
    pub mean_len: Ratio<u64>,
    pub spanning: bool,
    /// Cycle lengths in canonical partition order.
    pub cycle_lengths: Vec<usize>,
}

impl PairRecord {
    fn from_lengths(p: u32, n: usize, f1: ElementIndex, f2: ElementIndex, lengths: Vec<usize>) -> Self {
        let total: usize = lengths.iter().sum();
        PairRecord {
            p,
            n,
            f1,
            f2,
            num_cycles: lengths.len(),
            min_len: lengths.iter().copied().min().unwrap_or(0),
            max_len: lengths.iter().copied().max().unwrap_or(0),
            mean_len: Ratio::new(total as u64, lengths.len().max(1) as u64),
            spanning: lengths.len() == 1,
            cycle_lengths: lengths,
        }
    }

    /// Lengths even and at least 4, summing to `p^n - p`, spanning iff one cycle.
    pub fn is_consistent(&self) -> bool {
        let q = (self.p as u64).pow(self.n as u32);
        let total: usize = self.cycle_lengths.iter().sum();
        total as u64 == q - self.p as u64
            && self.cycle_lengths.iter().all(|&l| l >= 4 && l % 2 == 0)
            && self.min_len >= 4
            && self.spanning == (self.num_cycles == 1)
            && self.num_cycles == self.cycle_lengths.len()
    }
}

/// Lazily built inverse tables keyed by basis index.
struct TableCache {
    guard: Guard,
    tables: HashMap<ElementIndex, InverseTable>,
}

impl TableCache {
    fn new(guard: Guard) -> Self {
        TableCache {
            guard,
            tables: HashMap::new(),
        }
    }

    fn ensure(&mut self, f: &IrreduciblePoly) -> Result<()> {
        let key = f.index();
        if !self.tables.contains_key(&key) {
            self.tables.insert(key, InverseTable::new(f, self.guard)?);
        }
        Ok(())
    }

    fn tables_for(&mut self, bases: &[IrreduciblePoly]) -> Result<Vec<&InverseTable>> {
        for f in bases {
            self.ensure(f)?;
        }
        Ok(bases.iter().map(|f| &self.tables[&f.index()]).collect())
    }
}

/// `count` pairwise distinct random irreducibles; repeats are redrawn.
fn distinct_random(p: Prime, n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<IrreduciblePoly> {
    let mut out: Vec<IrreduciblePoly> = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_irreducible(p, n, rng);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Ordered tuples of `len` distinct entries, lexicographic by position.
fn ordered_tuples(len: usize, choose: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(choose);
    fn rec(len: usize, choose: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == choose {
            out.push(current.clone());
            return;
        }
        for i in 0..len {
            if !current.contains(&i) {
                current.push(i);
                rec(len, choose, current, out);
                current.pop();
            }
        }
    }
    rec(len, choose, &mut current, &mut out);
    out
}

/// Schedules visited by a survey, per degree.
fn schedules(cfg: &ExperimentConfig, n: usize, task_base: u64) -> Result<Vec<Vec<IrreduciblePoly>>> {
    match cfg.mode {
        Mode::Exhaustive => {
            let irr = enumerate_irreducibles(cfg.p, n, cfg.guard)?;
            Ok(ordered_tuples(irr.len(), cfg.beta)
                .into_iter()
                .map(|t| t.into_iter().map(|i| irr[i].clone()).collect())
                .collect())
        }
        Mode::Sampled { samples } => Ok((0..samples as u64)
            .map(|s| {
                let mut rng = task_rng(cfg.seed, task_base + s);
                distinct_random(cfg.p, n, cfg.beta, &mut rng)
            })
            .collect()),
    }
}

fn task_base(cfg: &ExperimentConfig, n: usize) -> u64 {
    match cfg.mode {
        Mode::Sampled { samples } => (n - cfg.n.0) as u64 * samples as u64,
        Mode::Exhaustive => 0,
    }
}

/// Cycle statistics for every ordered pair (exhaustive) or every sampled
/// pair. `beta` is ignored.
pub fn run_pair_survey(cfg: &ExperimentConfig) -> Result<Vec<PairRecord>> {
    let cfg = ExperimentConfig { beta: 2, ..cfg.clone() };
    cfg.validate()?;
    let mut records = Vec::new();
    for n in cfg.degrees() {
        let mut cache = TableCache::new(cfg.guard);
        for pair in schedules(&cfg, n, task_base(&cfg, n))? {
            let tables = cache.tables_for(&pair)?;
            let part = partition_with_tables(tables[0], tables[1])?;
            records.push(PairRecord::from_lengths(
                cfg.p.get(),
                n,
                pair[0].index(),
                pair[1].index(),
                part.lengths(),
            ));
        }
    }
    records.sort_by_key(|r| (r.n, r.f1, r.f2));
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleRecord {
    pub p: u32,
    pub n: usize,
    pub bases: Vec<ElementIndex>,
    /// Loop length -> number of non-constant start elements with that length.
    pub histogram: BTreeMap<usize, usize>,
    /// Distinct loops after rotation deduplication.
    pub num_loops: usize,
    pub state_coverage: usize,
    pub beta_loop: bool,
}

impl ScheduleRecord {
    pub fn min_len(&self) -> usize {
        self.histogram.keys().next().copied().unwrap_or(0)
    }

    pub fn max_len(&self) -> usize {
        self.histogram.keys().next_back().copied().unwrap_or(0)
    }
}

/// Loop-length histograms for schedules of `cfg.beta` distinct bases.
pub fn run_loop_survey(cfg: &ExperimentConfig) -> Result<Vec<ScheduleRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for n in cfg.degrees() {
        let mut cache = TableCache::new(cfg.guard);
        for bases in schedules(cfg, n, task_base(cfg, n))? {
            let schedule = BasisSchedule::distinct(bases)?;
            let tables = cache.tables_for(schedule.bases())?;
            let census = census_with_tables(&schedule, &tables)?;
            let histogram = census.start_histogram();
            records.push(ScheduleRecord {
                p: cfg.p.get(),
                n,
                bases: schedule.bases().iter().map(IrreduciblePoly::index).collect(),
                beta_loop: histogram.contains_key(&cfg.beta),
                num_loops: census.loops.len(),
                state_coverage: census.state_coverage(),
                histogram,
            });
        }
    }
    records.sort_by(|a, b| (a.n, &a.bases).cmp(&(b.n, &b.bases)));
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningCensus {
    pub p: u32,
    pub n: usize,
    pub ordered_total: usize,
    pub ordered_spanning: usize,
    pub unordered_total: usize,
    pub unordered_spanning: usize,
    pub table: Vec<(ElementIndex, ElementIndex, bool)>,
}

impl SpanningCensus {
    pub fn fraction(&self) -> Ratio<u64> {
        Ratio::new(self.ordered_spanning as u64, self.ordered_total.max(1) as u64)
    }
}

/// Exact share of ordered pairs whose partition is a single cycle.
pub fn spanning_census(p: Prime, n: usize, guard: Guard) -> Result<SpanningCensus> {
    let cfg = ExperimentConfig {
        guard,
        ..ExperimentConfig::new(p, n)
    };
    let records = run_pair_survey(&cfg)?;
    let table: Vec<_> = records.iter().map(|r| (r.f1, r.f2, r.spanning)).collect();
    let unordered: Vec<_> = records.iter().filter(|r| r.f1 < r.f2).collect();
    Ok(SpanningCensus {
        p: p.get(),
        n,
        ordered_total: records.len(),
        ordered_spanning: records.iter().filter(|r| r.spanning).count(),
        unordered_total: unordered.len(),
        unordered_spanning: unordered.iter().filter(|r| r.spanning).count(),
        table,
    })
}

pub const PAIR_CSV_HEADER: [&str; 9] = [
    "p", "n", "f1", "f2", "num_cycles", "min_len", "max_len", "mean_len", "spanning",
];

pub fn write_pairs_csv<W: Write>(records: &[PairRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(PAIR_CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.p.to_string(),
            r.n.to_string(),
            r.f1.to_string(),
            r.f2.to_string(),
            r.num_cycles.to_string(),
            r.min_len.to_string(),
            r.max_len.to_string(),
            render_decimal(&r.mean_len),
            r.spanning.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PairDoc {
    p: u32,
    n: usize,
    f1: String,
    f2: String,
    num_cycles: usize,
    min_len: usize,
    max_len: usize,
    mean_len: String,
    spanning: bool,
    cycle_lengths: Vec<usize>,
}

pub fn pairs_json(records: &[PairRecord]) -> serde_json::Value {
    let docs: Vec<PairDoc> = records
        .iter()
        .map(|r| PairDoc {
            p: r.p,
            n: r.n,
            f1: r.f1.to_string(),
            f2: r.f2.to_string(),
            num_cycles: r.num_cycles,
            min_len: r.min_len,
            max_len: r.max_len,
            mean_len: render_decimal(&r.mean_len),
            spanning: r.spanning,
            cycle_lengths: r.cycle_lengths.clone(),
        })
        .collect();
    serde_json::to_value(docs).expect("plain data serializes")
}

pub const LOOP_CSV_HEADER: [&str; 9] = [
    "p", "n", "bases", "num_loops", "min_len", "max_len", "beta_loop", "state_coverage", "histogram",
];

fn join_bases(bases: &[ElementIndex]) -> String {
    bases.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn join_histogram(h: &BTreeMap<usize, usize>) -> String {
    h.iter().map(|(k, c)| format!("{k}:{c}")).collect::<Vec<_>>().join(";")
}

pub fn write_loops_csv<W: Write>(records: &[ScheduleRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(LOOP_CSV_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.p.to_string(),
            r.n.to_string(),
            join_bases(&r.bases),
            r.num_loops.to_string(),
            r.min_len().to_string(),
            r.max_len().to_string(),
            r.beta_loop.to_string(),
            r.state_coverage.to_string(),
            join_histogram(&r.histogram),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ScheduleDoc {
    p: u32,
    n: usize,
    bases: Vec<String>,
    num_loops: usize,
    min_len: usize,
    max_len: usize,
    beta_loop: bool,
    state_coverage: usize,
    histogram: BTreeMap<usize, usize>,
}

pub fn loops_json(records: &[ScheduleRecord]) -> serde_json::Value {
    let docs: Vec<ScheduleDoc> = records
        .iter()
        .map(|r| ScheduleDoc {
            p: r.p,
            n: r.n,
            bases: r.bases.iter().map(ToString::to_string).collect(),
            num_loops: r.num_loops,
            min_len: r.min_len(),
            max_len: r.max_len(),
            beta_loop: r.beta_loop,
            state_coverage: r.state_coverage,
            histogram: r.histogram.clone(),
        })
        .collect();
    serde_json::to_value(docs).expect("plain data serializes")
}

pub const CENSUS_CSV_HEADER: [&str; 5] = ["p", "n", "f1", "f2", "spanning"];

pub fn write_census_csv<W: Write>(census: &SpanningCensus, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CENSUS_CSV_HEADER).map_err(csv_err)?;
    for (f1, f2, s) in &census.table {
        w.write_record([
            census.p.to_string(),
            census.n.to_string(),
            f1.to_string(),
            f2.to_string(),
            s.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn census_json(census: &SpanningCensus) -> serde_json::Value {
    serde_json::json!({
        "p": census.p,
        "n": census.n,
        "ordered_total": census.ordered_total,
        "ordered_spanning": census.ordered_spanning,
        "unordered_total": census.unordered_total,
        "unordered_spanning": census.unordered_spanning,
        "fraction": render_decimal(&census.fraction()),
        "table": census.table.iter().map(|(f1, f2, s)| serde_json::json!({
            "f1": f1.to_string(), "f2": f2.to_string(), "spanning": s
        })).collect::<Vec<_>>(),
    })
}

/// Known keys of the `key = value` configuration file.
pub const CONFIG_KEYS: [&str; 10] = [
    "kind", "p", "n", "samples", "seed", "beta", "guard", "format", "out", "mode",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !CONFIG_KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key {k:?}", lineno + 1)));
        }
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal(&Ratio::new(6, 1)), "6.000000");
        assert_eq!(render_decimal(&Ratio::new(62, 3)), "20.666667");
        assert_eq!(render_decimal(&Ratio::new(1, 8)), "0.125000");
        assert_eq!(render_decimal(&Ratio::new(1, 3_000_000)), "0.000000");
        assert_eq!(render_decimal(&Ratio::new(1, 2_000_000)), "0.000001");
    }

    #[test]
    fn tuples() {
        assert_eq!(ordered_tuples(3, 2).len(), 6);
        assert_eq!(ordered_tuples(9, 3).len(), 504);
        assert_eq!(ordered_tuples(3, 3)[0], vec![0, 1, 2]);
    }

    #[test]
    fn exhaustive_n3() {
        let records = run_pair_survey(&ExperimentConfig::new(Prime::TWO, 3)).unwrap();
        assert_eq!(records.len(), 2);
        for r in &records {
            assert_eq!((r.num_cycles, r.min_len, r.max_len), (1, 6, 6));
            assert_eq!(r.mean_len, Ratio::from_integer(6));
            assert!(r.spanning && r.is_consistent());
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(Prime::TWO, 2);
        assert!(matches!(cfg.validate(), Err(Error::TooFewIrreducibles { .. })));
        cfg.n = (4, 4);
        cfg.mode = Mode::Sampled { samples: 0 };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.mode = Mode::Exhaustive;
        cfg.beta = 4;
        assert!(matches!(cfg.validate(), Err(Error::TooFewIrreducibles { .. })));
        cfg.beta = 3;
        assert!(cfg.validate().is_ok());
        cfg.n = (21, 21);
        assert!(matches!(cfg.validate(), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn config_text() {
        let kv = parse_config_text("# survey\np = 2\nn=8 # degree\n\nseed = 42\n").unwrap();
        assert_eq!(kv["p"], "2");
        assert_eq!(kv["n"], "8");
        assert_eq!(kv["seed"], "42");
        assert!(parse_config_text("colour = red").is_err());
        assert!(parse_config_text("p 2").is_err());
    }

    #[test]
    fn csv_layout() {
        let records = run_pair_survey(&ExperimentConfig::new(Prime::TWO, 3)).unwrap();
        let mut buf = Vec::new();
        write_pairs_csv(&records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "p,n,f1,f2,num_cycles,min_len,max_len,mean_len,spanning\n\
             2,3,#11,#13,1,6,6,6.000000,true\n\
             2,3,#13,#11,1,6,6,6.000000,true\n"
        );
    }
}
