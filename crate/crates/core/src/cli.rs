//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (reducible basis, zero
//! element, guard exceeded, ...), 2 on a usage error (bad flag, unparsable
//! literal, conflicting degree).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::chain::{k_chain, partition, BasisSchedule};
use crate::error::Error;
use crate::experiments::{
    self, parse_config_text, run_loop_survey, run_pair_survey, spanning_census, ExperimentConfig,
    Format, Mode,
};
use crate::field::{count_irreducibles, enumerate_irreducibles, inv, inv_oracle, Guard, IrreduciblePoly};
use crate::graph::{build_union, export_dot, graph_json, DotOptions, DotSource};
use crate::json::{ChainDoc, ClosedLoopDoc, PartitionDoc, PermutationDoc};
use crate::loops::{enumerate_closed_loops, find_closed_loop};
use crate::permutation::{build_permutation, Orientation};
use crate::poly::Poly;
use crate::Prime;

#[derive(Debug, Parser)]
#[command(
    name = "ffchain",
    version,
    about = "Multiplicative-inverse chaining in finite fields under alternating polynomial bases"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Field characteristic (default 2)
    #[arg(long = "p", global = true)]
    pub p: Option<u64>,

    /// Extension degree; inferred from the bases when omitted. `survey` also accepts a range `lo-hi`
    #[arg(long = "n", global = true)]
    pub n: Option<String>,

    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,

    /// Write output to PATH instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Seed for sampled surveys
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Maximum number of elements an exhaustive scan may visit
    #[arg(long, global = true, env = "FFCHAIN_GUARD")]
    pub guard: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Csv,
    Dot,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Dot => Format::Dot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurveyKind {
    /// Cycle statistics per basis pair
    Pairs,
    /// Closed-loop histograms per schedule of `--beta` bases
    Loops,
    /// Share of pairs with a single spanning cycle
    Census,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiplicative inverse of an element modulo a basis
    Inv {
        #[arg(long)]
        basis: String,
        #[arg(long)]
        elem: String,
        /// Also compute the exhaustive-search inverse and check agreement
        #[arg(long)]
        oracle: bool,
    },
    /// k-chain of an element under a schedule of bases
    Chain {
        /// Basis polynomial; repeat for each schedule position
        #[arg(long = "basis", required = true)]
        bases: Vec<String>,
        #[arg(long)]
        start: String,
        #[arg(long)]
        k: usize,
    },
    /// Cycle partition of the non-constant elements for a basis pair
    Partition {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
    },
    /// Permutation induced by a basis pair
    Perm {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        /// `canonical` or one bit per cycle (1 = canonical direction)
        #[arg(long, default_value = "canonical")]
        orientation: String,
    },
    /// Closed loops under a schedule of at least two bases
    Loops {
        #[arg(long = "basis", required = true)]
        bases: Vec<String>,
        /// Report only the loop through this element
        #[arg(long)]
        start: Option<String>,
    },
    /// Monic irreducible polynomials of degree n
    Irreducibles {
        /// Print only the count
        #[arg(long)]
        count_only: bool,
    },
    /// Statistical surveys over pairs or schedules of bases
    Survey {
        #[arg(long, value_enum)]
        kind: Option<SurveyKind>,
        /// Number of random pairs/schedules; exhaustive when omitted
        #[arg(long)]
        samples: Option<usize>,
        /// Schedule length for loop surveys
        #[arg(long)]
        beta: Option<usize>,
        /// `key = value` file; command-line flags take precedence
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
    },
    /// Matching graphs (one or two bases) or a closed loop (`--start`) as DOT or JSON
    Export {
        #[arg(long = "basis", required = true)]
        bases: Vec<String>,
        /// Export the closed loop through this element instead of the matching graph
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        include_constants: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => CliError::Usage(e.to_string()),
            other => CliError::Domain(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the command, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

struct Ctx {
    p: Prime,
    n: Option<usize>,
    guard: Guard,
}

impl Ctx {
    fn new(cli: &Cli) -> CliResult<Self> {
        let p = Prime::new(cli.p.unwrap_or(2))?;
        let n = match &cli.n {
            // survey parses its own degree range
            _ if matches!(cli.command, Command::Survey { .. }) => None,
            None => None,
            Some(s) => Some(
                s.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("--n expects a positive integer, got {s:?}")))?,
            ),
        };
        let guard = cli.guard.map(Guard).unwrap_or_default();
        Ok(Ctx { p, n, guard })
    }

    fn poly(&self, literal: &str) -> CliResult<Poly> {
        Ok(Poly::parse(self.p, literal)?)
    }

    fn basis(&self, literal: &str) -> CliResult<IrreduciblePoly> {
        let poly = self.poly(literal)?;
        let f = IrreduciblePoly::new(poly)?;
        if let Some(n) = self.n {
            if n != f.degree() {
                return Err(CliError::Usage(format!(
                    "--n {n} conflicts with basis {f} of degree {}",
                    f.degree()
                )));
            }
        }
        Ok(f)
    }

    fn bases(&self, literals: &[String]) -> CliResult<Vec<IrreduciblePoly>> {
        let bases = literals
            .iter()
            .map(|l| self.basis(l))
            .collect::<CliResult<Vec<_>>>()?;
        BasisSchedule::new(bases.clone())?;
        Ok(bases)
    }

    fn degree(&self) -> CliResult<usize> {
        self.n
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Usage("--n is required and must be at least 1".into()))
    }
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> CliResult<Format> {
    let f = cli.format.map(Format::from).unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!(
            "format {:?} is not available for this command",
            f
        )))
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Domain(e.into())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Domain(e.into()))
        }
    }
}

fn json_text<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn labeled(p: &Poly) -> String {
    format!("{p} ({})", p.index())
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    let ctx = Ctx::new(cli)?;
    let text_json = [Format::Text, Format::Json];
    match &cli.command {
        Command::Inv { basis, elem, oracle } => {
            let fmt = format_or(cli, Format::Text, &text_json)?;
            let f = ctx.basis(basis)?;
            let a = ctx.poly(elem)?;
            let b = inv(&a, &f)?;
            if *oracle {
                let check = inv_oracle(&a, &f, ctx.guard)?;
                if check != b {
                    return Err(CliError::Domain(Error::NotInvertible(format!(
                        "{a}: oracle disagrees ({check} vs {b})"
                    ))));
                }
            }
            let out = match fmt {
                Format::Json => json_text(&serde_json::json!({
                    "p": ctx.p.get(),
                    "n": f.degree(),
                    "basis": f.index().to_string(),
                    "elem": a.index().to_string(),
                    "inverse": b.index().to_string(),
                })),
                _ => format!("{}\n", labeled(&b)),
            };
            emit(cli, &out)
        }
        Command::Chain { bases, start, k } => {
            let fmt = format_or(cli, Format::Text, &text_json)?;
            let schedule = BasisSchedule::new(ctx.bases(bases)?)?;
            let chain = k_chain(&ctx.poly(start)?, &schedule, *k)?;
            let out = match fmt {
                Format::Json => json_text(&ChainDoc::from(&chain)),
                _ => {
                    let n = schedule.degree();
                    let mut s = String::new();
                    for (i, a) in chain.elements.iter().enumerate() {
                        let _ = writeln!(s, "a{i}\t{}\t{}\t{a}", a.digit_string(n), a.index());
                    }
                    s
                }
            };
            emit(cli, &out)
        }
        Command::Partition { f1, f2 } => {
            let fmt = format_or(cli, Format::Text, &text_json)?;
            let bases = ctx.bases(&[f1.clone(), f2.clone()])?;
            let part = partition(&bases[0], &bases[1], ctx.guard)?;
            let out = match fmt {
                Format::Json => json_text(&PartitionDoc::from(&part)),
                _ => {
                    let mut s = String::new();
                    for (i, c) in part.cycles.iter().enumerate() {
                        let elems: Vec<String> = c.elements.iter().map(ToString::to_string).collect();
                        let _ = writeln!(s, "cycle {} (len {}): {}", i + 1, c.len(), elems.join(" "));
                    }
                    let _ = writeln!(s, "cycles: {}, covered: {}", part.cycles.len(), part.covered());
                    s
                }
            };
            emit(cli, &out)
        }
        Command::Perm { f1, f2, orientation } => {
            let fmt = format_or(cli, Format::Text, &text_json)?;
            let orientation = Orientation::parse(orientation).ok_or_else(|| {
                CliError::Usage(format!(
                    "--orientation expects `canonical` or a bit string, got {orientation:?}"
                ))
            })?;
            let bases = ctx.bases(&[f1.clone(), f2.clone()])?;
            let perm = build_permutation(&bases[0], &bases[1], &orientation, ctx.guard)?;
            let out = match fmt {
                Format::Json => json_text(&PermutationDoc::from(&perm)),
                _ => {
                    let mut s = String::new();
                    for c in perm.cycles() {
                        let elems: Vec<String> = c.iter().map(ToString::to_string).collect();
                        let _ = writeln!(s, "({})", elems.join(" "));
                    }
                    let fixed: Vec<String> = perm.fixed_points().iter().map(ToString::to_string).collect();
                    let _ = writeln!(s, "fixed points: {}", fixed.join(" "));
                    s
                }
            };
            emit(cli, &out)
        }
        Command::Loops { bases, start } => {
            let fmt = format_or(cli, Format::Text, &text_json)?;
            let schedule = BasisSchedule::new(ctx.bases(bases)?)?;
            let out = match start {
                Some(start) => {
                    let l = find_closed_loop(&ctx.poly(start)?, &schedule)?;
                    match fmt {
                        Format::Json => json_text(&ClosedLoopDoc::from(&l)),
                        _ => loop_text(&l),
                    }
                }
                None => {
                    let census = enumerate_closed_loops(&schedule, ctx.guard)?;
                    match fmt {
                        Format::Json => {
                            let loops: Vec<ClosedLoopDoc> = census.loops.iter().map(ClosedLoopDoc::from).collect();
                            let report: BTreeMap<String, Vec<(usize, usize)>> = census
                                .report
                                .iter()
                                .map(|(e, m)| (e.to_string(), m.clone()))
                                .collect();
                            json_text(&serde_json::json!({ "loops": loops, "report": report }))
                        }
                        _ => {
                            let mut s = String::new();
                            for (i, l) in census.loops.iter().enumerate() {
                                let _ = write!(s, "loop {} ", i + 1);
                                s.push_str(&loop_text(l));
                            }
                            let _ = writeln!(s, "loops: {}, states covered: {}", census.loops.len(), census.state_coverage());
                            for (e, m) in &census.report {
                                let parts: Vec<String> = m.iter().map(|(l, k)| format!("loop {}x{k}", l + 1)).collect();
                                let _ = writeln!(s, "{e}: {}", parts.join(", "));
                            }
                            s
                        }
                    }
                }
            };
            emit(cli, &out)
        }
        Command::Irreducibles { count_only } => {
            let fmt = format_or(cli, Format::Text, &text_json)?;
            let n = ctx.degree()?;
            let expected = count_irreducibles(ctx.p, n);
            let out = if *count_only {
                match fmt {
                    Format::Json => json_text(&serde_json::json!({"p": ctx.p.get(), "n": n, "count": expected.to_string()})),
                    _ => format!("{expected}\n"),
                }
            } else {
                let all = enumerate_irreducibles(ctx.p, n, ctx.guard)?;
                match fmt {
                    Format::Json => {
                        let polys: Vec<String> = all.iter().map(|f| f.index().to_string()).collect();
                        json_text(&serde_json::json!({"p": ctx.p.get(), "n": n, "count": all.len(), "polynomials": polys}))
                    }
                    _ => {
                        let mut s = String::new();
                        for f in &all {
                            let _ = writeln!(s, "{}", labeled(f.poly()));
                        }
                        let _ = writeln!(s, "count: {}", all.len());
                        s
                    }
                }
            };
            emit(cli, &out)
        }
        Command::Survey { kind, samples, beta, config } => survey(cli, &ctx, *kind, *samples, *beta, config.as_ref()),
        Command::Export { bases, start, include_constants } => {
            let fmt = format_or(cli, Format::Dot, &[Format::Dot, Format::Json])?;
            let bases = ctx.bases(bases)?;
            let name = bases.iter().map(|f| f.index().to_string()).collect::<Vec<_>>().join(",");
            let options = DotOptions { name };
            let out = match start {
                Some(start) => {
                    let schedule = BasisSchedule::new(bases)?;
                    let l = find_closed_loop(&ctx.poly(start)?, &schedule)?;
                    match fmt {
                        Format::Json => json_text(&ClosedLoopDoc::from(&l)),
                        _ => export_dot(DotSource::Loop(&l), &options),
                    }
                }
                None => {
                    if bases.len() > 2 {
                        return Err(CliError::Usage(
                            "graph export takes one or two bases; add --start for a closed loop".into(),
                        ));
                    }
                    BasisSchedule::distinct(bases.clone())?;
                    let g = build_union(&bases, *include_constants, ctx.guard)?;
                    match fmt {
                        Format::Json => json_text(&graph_json(&g)),
                        _ => export_dot(DotSource::Graph(&g), &options),
                    }
                }
            };
            emit(cli, &out)
        }
    }
}

fn loop_text(l: &crate::loops::ClosedLoop) -> String {
    let elems: Vec<String> = l.elements.iter().map(|e| e.index().to_string()).collect();
    let repeated: Vec<String> = l
        .multiplicities()
        .into_iter()
        .filter(|(_, m)| *m > 1)
        .map(|(e, m)| format!("{e}x{m}"))
        .collect();
    let mut s = format!("(k = {}): {}\n", l.k(), elems.join(" "));
    if !repeated.is_empty() {
        let _ = writeln!(s, "  repeated: {}", repeated.join(" "));
    }
    s
}

fn parse_degree_range(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("--n expects N or LO-HI, got {s:?}"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi)?)),
        None => {
            let n = parse(s)?;
            Ok((n, n))
        }
    }
}

fn survey(
    cli: &Cli,
    ctx: &Ctx,
    kind: Option<SurveyKind>,
    samples: Option<usize>,
    beta: Option<usize>,
    config: Option<&PathBuf>,
) -> CliResult<()> {
    let file = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Domain(e.into()))?;
            parse_config_text(&text)?
        }
        None => BTreeMap::new(),
    };
    let usage = |k: &str, v: &str| CliError::Usage(format!("config key {k}: cannot parse {v:?}"));
    let from_file = |k: &str| file.get(k).map(String::as_str);
    fn num<T: std::str::FromStr>(v: Option<&str>, k: &str, usage: &dyn Fn(&str, &str) -> CliError) -> CliResult<Option<T>> {
        v.map(|s| s.parse::<T>().map_err(|_| usage(k, s))).transpose()
    }

    let p = match (cli.p, num::<u64>(from_file("p"), "p", &usage)?) {
        (Some(p), _) | (None, Some(p)) => Prime::new(p)?,
        (None, None) => ctx.p,
    };
    let n = match (&cli.n, from_file("n")) {
        (Some(s), _) => parse_degree_range(s)?,
        (None, Some(s)) => parse_degree_range(s)?,
        (None, None) => return Err(CliError::Usage("--n is required for survey".into())),
    };
    let kind = match (kind, from_file("kind")) {
        (Some(k), _) => k,
        (None, Some(s)) => SurveyKind::from_str(s, true).map_err(|_| usage("kind", s))?,
        (None, None) => SurveyKind::Pairs,
    };
    let mode = match samples {
        Some(s) => Mode::Sampled { samples: s },
        None => match (from_file("mode"), num::<usize>(from_file("samples"), "samples", &usage)?) {
            (None | Some("sampled"), Some(s)) => Mode::Sampled { samples: s },
            (None | Some("exhaustive"), None) | (Some("exhaustive"), Some(_)) => Mode::Exhaustive,
            (Some(m), _) => {
                return Err(CliError::Usage(format!(
                    "mode {m:?} must be `exhaustive`, or `sampled` with samples set"
                )))
            }
        },
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => num::<u64>(from_file("seed"), "seed", &usage)?.unwrap_or(0),
    };
    let beta = match beta {
        Some(b) => b,
        None => num::<usize>(from_file("beta"), "beta", &usage)?.unwrap_or(match kind {
            SurveyKind::Loops => 3,
            _ => 2,
        }),
    };
    let guard = match cli.guard {
        Some(g) => Guard(g),
        None => num::<u64>(from_file("guard"), "guard", &usage)?.map(Guard).unwrap_or_default(),
    };
    let format = match (cli.format, from_file("format")) {
        (Some(f), _) => Format::from(f),
        (None, Some(s)) => Format::parse(s).ok_or_else(|| usage("format", s))?,
        (None, None) => Format::Csv,
    };
    if format == Format::Dot {
        return Err(CliError::Usage("survey writes csv, json or text".into()));
    }
    let output = cli.out.clone().or_else(|| from_file("out").map(PathBuf::from));
    let cfg = ExperimentConfig {
        p,
        n,
        mode,
        seed,
        beta,
        guard,
        output: output.clone(),
        format,
    };

    let mut buf = Vec::new();
    match kind {
        SurveyKind::Pairs => {
            let records = run_pair_survey(&cfg)?;
            match format {
                Format::Json => buf.extend(json_text(&experiments::pairs_json(&records)).into_bytes()),
                Format::Text => {
                    let spanning = records.iter().filter(|r| r.spanning).count();
                    let mut s = String::new();
                    for r in &records {
                        let _ = writeln!(
                            s,
                            "n={} {} {}: {} cycles, lengths {:?}",
                            r.n, r.f1, r.f2, r.num_cycles, r.cycle_lengths
                        );
                    }
                    let _ = writeln!(s, "pairs: {}, spanning: {spanning}", records.len());
                    buf.extend(s.into_bytes());
                }
                _ => experiments::write_pairs_csv(&records, &mut buf)?,
            }
        }
        SurveyKind::Loops => {
            let records = run_loop_survey(&cfg)?;
            match format {
                Format::Json => buf.extend(json_text(&experiments::loops_json(&records)).into_bytes()),
                Format::Text => {
                    let with_beta = records.iter().filter(|r| r.beta_loop).count();
                    let mut s = String::new();
                    for r in &records {
                        let bases: Vec<String> = r.bases.iter().map(ToString::to_string).collect();
                        let _ = writeln!(s, "n={} ({}): {:?}", r.n, bases.join(","), r.histogram);
                    }
                    let _ = writeln!(s, "schedules: {}, with a length-{} loop: {with_beta}", records.len(), cfg.beta);
                    buf.extend(s.into_bytes());
                }
                _ => experiments::write_loops_csv(&records, &mut buf)?,
            }
        }
        SurveyKind::Census => {
            if cfg.n.0 != cfg.n.1 {
                return Err(CliError::Usage("census takes a single degree".into()));
            }
            let census = spanning_census(cfg.p, cfg.n.0, cfg.guard)?;
            match format {
                Format::Json => buf.extend(json_text(&experiments::census_json(&census)).into_bytes()),
                Format::Text => {
                    let s = format!(
                        "ordered: {} of {} spanning ({})\nunordered: {} of {} spanning\n",
                        census.ordered_spanning,
                        census.ordered_total,
                        experiments::render_decimal(&census.fraction()),
                        census.unordered_spanning,
                        census.unordered_total
                    );
                    buf.extend(s.into_bytes());
                }
                _ => experiments::write_census_csv(&census, &mut buf)?,
            }
        }
    }
    match output {
        Some(path) => std::fs::write(path, &buf).map_err(|e| CliError::Domain(e.into())),
        None => std::io::stdout()
            .lock()
            .write_all(&buf)
            .map_err(|e| CliError::Domain(e.into())),
    }
}
