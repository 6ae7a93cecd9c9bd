use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cosetlab::coset::{check_all, check_height_theorem, enumerate_u, enumerate_v, CosetSmallSet, RhsCache};
use cosetlab::congruence::{run_experiment, CongruenceExperiment};
use cosetlab::fixed_points::{fixed_point_row, log_log_log, FixedPointRow};
use cosetlab::modp::{ceil_sqrt, CosetSpec, PrimeContext};
use num_bigint::BigUint;
use cosetlab::smooth::{primes_up_to, psi_exact_big, SmoothCounter};
use cosetlab::sweep::{map_primes, parse_checks, run_sweep_with, Emit, SweepConfig};
use cosetlab::{BoundReport, CheckId};
use serde::Serialize;

const SCHEMA_LINE: &str = "# schema=1";
const MEMO_FILE: &str = "psi_memo.txt";

/// Verification laboratory for small elements of cosets of multiplicative subgroups mod p.
#[derive(Parser, Debug)]
#[command(name = "cosetlab", version, about)]
struct Cli {
    /// Output format (tables default to csv, congruence to json)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for sweeps
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for coset sampling
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integer and rational heights of residues mod p
    Heights {
        #[arg(long)]
        p: u64,
        /// Residues (repeat or separate with commas)
        #[arg(long, required = true, value_delimiter = ',', allow_negative_numbers = true)]
        x: Vec<i64>,
    },
    /// Check reports (or the sets U and V) for one coset aG
    Coset(CosetArgs),
    /// Exact count of y-smooth numbers up to x
    Smooth {
        #[arg(long)]
        x: BigUint,
        #[arg(long)]
        y: u64,
    },
    /// Sweep checks over a prime range; exit 1 on any violation
    Verify(VerifyArgs),
    /// One congruence experiment
    Congruence(CongruenceArgs),
    /// Fixed-point counts F(p) and their identities per prime
    FixedPoints {
        #[arg(long, default_value_t = 3)]
        p_min: u64,
        #[arg(long)]
        p_max: u64,
    },
}

#[derive(Args, Debug)]
struct CosetArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    t: u64,
    #[arg(long, default_value_t = 1)]
    a: u64,
    #[arg(long)]
    k: u64,
    /// A single check instead of all of them
    #[arg(long)]
    check: Option<CheckId>,
    /// Fix s for the r2 bounds
    #[arg(long)]
    s: Option<u64>,
    /// Fix x0 for T2
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<i64>,
    /// List the elements of U and V instead of checking
    #[arg(long)]
    sets: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// key=value file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    p_min: Option<u64>,
    #[arg(long)]
    p_max: Option<u64>,
    /// `all` or a comma-separated list of t
    #[arg(long)]
    t: Option<String>,
    /// `formula`, `lo..hi` or a single k
    #[arg(long)]
    k: Option<String>,
    /// `auto`, `all` or `sample:N`
    #[arg(long)]
    a: Option<String>,
    /// `coset`, `fixed`, `all` or a comma-separated list of check ids
    #[arg(long)]
    checks: Option<String>,
    /// `failures` or `all`
    #[arg(long)]
    emit: Option<String>,
    /// Multiply every right side (forces failures below 1)
    #[arg(long)]
    rhs_scale: Option<f64>,
}

#[derive(Args, Debug)]
struct CongruenceArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k1: u64,
    #[arg(long)]
    k2: u64,
    #[arg(long, default_value_t = 1)]
    a1: u64,
    #[arg(long, default_value_t = 1)]
    a2: u64,
    #[arg(long, default_value_t = 0)]
    l1: u64,
    #[arg(long, default_value_t = 0)]
    l2: u64,
    #[arg(long)]
    n1: u64,
    #[arg(long)]
    n2: u64,
    #[arg(long, default_value_t = 2)]
    delta: u64,
    /// Frequency cutoff L of the discrepancy bound
    #[arg(long = "L", default_value_t = 10)]
    l_cut: u64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

const EXIT_VIOLATION: u8 = 1;
/// Usage, configuration and input errors.
const EXIT_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let mut out = open_output(cli.out.as_deref())?;
    let code = match &cli.command {
        Command::Heights { p, x } => heights(&cli, &mut out, *p, x)?,
        Command::Coset(args) => coset(&cli, &mut out, args)?,
        Command::Smooth { x, y } => smooth(&cli, &mut out, x, *y)?,
        Command::Verify(args) => verify(&cli, &mut out, args)?,
        Command::Congruence(args) => congruence(&cli, &mut out, args)?,
        Command::FixedPoints { p_min, p_max } => fixed_points(&cli, &mut out, *p_min, *p_max)?,
    };
    out.flush()?;
    Ok(code)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn workers(cli: &Cli) -> usize {
    cli.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// CSV with the schema line, or one JSON object per line.
enum Sink<'a> {
    Csv(Box<csv::Writer<&'a mut dyn Write>>),
    Json(&'a mut dyn Write),
}

impl<'a> Sink<'a> {
    fn new(format: Format, out: &'a mut dyn Write, header: &[&str]) -> Result<Self> {
        Ok(match format {
            Format::Csv => {
                writeln!(out, "{SCHEMA_LINE}")?;
                let mut w = csv::Writer::from_writer(out);
                w.write_record(header)?;
                Sink::Csv(Box::new(w))
            }
            Format::Json => Sink::Json(out),
        })
    }

    fn row<T: Serialize>(&mut self, value: &T, record: impl FnOnce(&T) -> Vec<String>) -> Result<()> {
        match self {
            Sink::Csv(w) => w.write_record(record(value))?,
            Sink::Json(out) => {
                serde_json::to_writer(&mut **out, value)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self {
            Sink::Csv(mut w) => w.flush()?,
            Sink::Json(out) => out.flush()?,
        }
        Ok(())
    }
}

fn write_rows<T: Serialize>(
    format: Format,
    out: &mut dyn Write,
    header: &[&str],
    rows: impl IntoIterator<Item = T>,
    record: impl Fn(&T) -> Vec<String>,
) -> Result<()> {
    let mut sink = Sink::new(format, out, header)?;
    for r in rows {
        sink.row(&r, &record)?;
    }
    sink.finish()
}

#[derive(Serialize)]
struct HeightRow {
    x: i64,
    int_height: u64,
    rat_height: Option<u64>,
    witness_a: Option<i64>,
    witness_b: Option<u64>,
}

fn heights(cli: &Cli, out: &mut dyn Write, p: u64, xs: &[i64]) -> Result<u8> {
    let ctx = PrimeContext::new(p)?;
    let mut rows = Vec::with_capacity(xs.len());
    for &x in xs {
        let r = ctx.residue(x);
        let row = if r == 0 {
            HeightRow { x, int_height: 0, rat_height: None, witness_a: None, witness_b: None }
        } else {
            let w = ctx.rational_height(r)?;
            HeightRow {
                x,
                int_height: w.int_height,
                rat_height: Some(w.rat_height),
                witness_a: Some(w.witness_a),
                witness_b: Some(w.witness_b),
            }
        };
        rows.push(row);
    }
    let opt = |v: Option<String>| v.unwrap_or_default();
    write_rows(
        cli.format.unwrap_or(Format::Csv),
        out,
        &["x", "int_height", "rat_height", "witness_a", "witness_b"],
        rows,
        |r| {
            vec![
                r.x.to_string(),
                r.int_height.to_string(),
                opt(r.rat_height.map(|h| h.to_string())),
                opt(r.witness_a.map(|a| a.to_string())),
                opt(r.witness_b.map(|b| b.to_string())),
            ]
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct SetRow {
    set: &'static str,
    x: u64,
    symmetric: i64,
    int_height: u64,
    rat_height: u64,
    witness: String,
}

fn set_rows(set: &CosetSmallSet, name: &'static str, p: u64) -> Vec<SetRow> {
    set.height_witnesses
        .iter()
        .map(|(&x, w)| SetRow {
            set: name,
            x,
            symmetric: cosetlab::arith::symmetric(x, p),
            int_height: w.int_height,
            rat_height: w.rat_height,
            witness: format!("{}/{}", w.witness_a, w.witness_b),
        })
        .collect()
}

fn coset(cli: &Cli, out: &mut dyn Write, args: &CosetArgs) -> Result<u8> {
    let ctx = PrimeContext::new(args.p)?;
    let spec = CosetSpec::new(ctx, args.t, args.a)?;
    let format = cli.format.unwrap_or(Format::Csv);
    if args.sets {
        let u = enumerate_u(&spec, args.k)?;
        let v = enumerate_v(&spec, args.k.min(ceil_sqrt(args.p)))?;
        let mut rows = set_rows(&u, "U", args.p);
        rows.extend(set_rows(&v, "V", args.p));
        write_rows(format, out, &["set", "x", "symmetric", "int_height", "rat_height", "witness"], rows, |r| {
            vec![
                r.set.to_string(),
                r.x.to_string(),
                r.symmetric.to_string(),
                r.int_height.to_string(),
                r.rat_height.to_string(),
                r.witness.clone(),
            ]
        })?;
        return Ok(0);
    }
    let reports = match args.check {
        Some(id) => vec![check_height_theorem(id, &spec, args.k, args.s, args.x0)?],
        None => {
            if args.s.is_some() || args.x0.is_some() {
                bail!("--s and --x0 need --check");
            }
            check_all(&spec, args.k, &mut RhsCache::new())?
        }
    };
    write_reports(format, out, &reports)?;
    Ok(if reports.iter().any(BoundReport::failed) { EXIT_VIOLATION } else { 0 })
}

fn write_reports(format: Format, out: &mut dyn Write, reports: &[BoundReport]) -> Result<()> {
    write_rows(format, out, &BoundReport::CSV_HEADER, reports, |r| r.csv_record())
}

#[derive(Serialize)]
struct SmoothRow {
    x: String,
    y: u64,
    psi: String,
}

fn smooth(cli: &Cli, out: &mut dyn Write, x: &BigUint, y: u64) -> Result<u8> {
    let psi = match u64::try_from(x) {
        Ok(x) => {
            let mut counter = SmoothCounter::new();
            let memo = std::env::var_os("COSETLAB_CACHE_DIR").map(|d| PathBuf::from(d).join(MEMO_FILE));
            if let Some(path) = &memo {
                counter.load_memo(path).with_context(|| format!("reading {}", path.display()))?;
            }
            let psi = counter.psi(x, y);
            if let Some(path) = &memo {
                counter.save_memo(path).with_context(|| format!("writing {}", path.display()))?;
            }
            BigUint::from(psi)
        }
        Err(_) => psi_exact_big(x, y),
    };
    match cli.format {
        None => writeln!(out, "{psi}")?,
        Some(format) => {
            let row = SmoothRow { x: x.to_string(), y, psi: psi.to_string() };
            write_rows(format, out, &["x", "y", "psi"], [row], |r| vec![r.x.clone(), r.y.to_string(), r.psi.clone()])?;
        }
    }
    Ok(0)
}

/// Settings from a `key = value` file: blank lines and `#` comments ignored.
fn read_config(path: &Path, cfg: &mut SweepConfig, cli_keys: &mut Vec<(String, String)>) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| anyhow!("{}:{}: expected key=value", path.display(), n + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "format" | "out" => cli_keys.push((key.to_string(), value.to_string())),
            _ => {
                if !cfg.apply_kv(key, value).with_context(|| format!("{}:{}", path.display(), n + 1))? {
                    bail!("{}:{}: unknown key '{key}'", path.display(), n + 1);
                }
            }
        }
    }
    Ok(())
}

fn verify(cli: &Cli, out: &mut dyn Write, args: &VerifyArgs) -> Result<u8> {
    let mut cfg = SweepConfig { workers: workers(cli), ..SweepConfig::default() };
    let mut file_keys = Vec::new();
    if let Some(path) = &args.config {
        read_config(path, &mut cfg, &mut file_keys)?;
    }
    let mut format = Format::Csv;
    let mut file_out = None;
    for (key, value) in file_keys {
        match key.as_str() {
            "format" => format = Format::from_str(&value, true).map_err(|e| anyhow!("format: {e}"))?,
            _ => file_out = Some(PathBuf::from(value)),
        }
    }
    format = cli.format.unwrap_or(format);
    if let Some(p) = args.p_min {
        cfg.p_min = p;
    }
    if let Some(p) = args.p_max {
        cfg.p_max = p;
    }
    if let Some(t) = &args.t {
        cfg.t_policy = t.parse()?;
    }
    if let Some(k) = &args.k {
        cfg.k_policy = k.parse()?;
    }
    if let Some(a) = &args.a {
        cfg.a_policy = a.parse()?;
    }
    if let Some(c) = &args.checks {
        cfg.checks = parse_checks(c)?;
    }
    if let Some(e) = &args.emit {
        cfg.emit = e.parse::<Emit>()?;
    }
    if args.rhs_scale.is_some() {
        cfg.rhs_scale = args.rhs_scale;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;

    let mut file_writer;
    let out: &mut dyn Write = match (&cli.out, file_out) {
        (None, Some(path)) => {
            file_writer = open_output(Some(&path))?;
            &mut *file_writer
        }
        _ => out,
    };
    let mut sink = Sink::new(format, out, &BoundReport::CSV_HEADER)?;
    let mut write_err: Option<anyhow::Error> = None;
    let totals = run_sweep_with(&cfg, |batch| {
        for r in &batch {
            if write_err.is_some() {
                return;
            }
            if let Err(e) = sink.row(r, BoundReport::csv_record) {
                write_err = Some(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e);
    }
    sink.finish()?;
    eprintln!("{}", totals.summary);
    Ok(if totals.summary.failed > 0 { EXIT_VIOLATION } else { 0 })
}

fn congruence(cli: &Cli, out: &mut dyn Write, args: &CongruenceArgs) -> Result<u8> {
    let ctx = PrimeContext::new(args.p)?;
    let exp = CongruenceExperiment::new(ctx, args.k1, args.k2, args.a1, args.a2, args.l1, args.l2, args.n1, args.n2)?;
    let report = run_experiment(&exp, args.delta, args.l_cut, args.epsilon)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut fields = Vec::new();
            flatten("", &serde_json::to_value(&report)?, &mut fields);
            let header: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
            let record: Vec<String> = fields.iter().map(|(_, v)| v.clone()).collect();
            write_rows(Format::Csv, out, &header, [record], |r| r.clone())?;
        }
    }
    Ok(0)
}

/// Nested objects become dotted column names; null becomes an empty cell.
fn flatten(prefix: &str, value: &serde_json::Value, fields: &mut Vec<(String, String)>) {
    use serde_json::Value;
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, fields);
            }
        }
        Value::Null => fields.push((prefix.to_string(), String::new())),
        Value::String(s) => fields.push((prefix.to_string(), s.clone())),
        other => fields.push((prefix.to_string(), other.to_string())),
    }
}

fn fixed_points(cli: &Cli, out: &mut dyn Write, p_min: u64, p_max: u64) -> Result<u8> {
    let primes: Vec<u64> = primes_up_to(p_max).into_iter().filter(|&p| p >= p_min.max(3)).collect();
    if primes.is_empty() {
        bail!("no odd primes in [{p_min}, {p_max}]");
    }
    let rows: Vec<FixedPointRow> = map_primes(&primes, workers(cli), |p| fixed_point_row(p, log_log_log))?;
    write_rows(cli.format.unwrap_or(Format::Csv), out, &FixedPointRow::CSV_HEADER, &rows, |r| r.csv_record())?;
    let broken = rows.iter().any(|r| !(r.expd_ok && r.newX_ok && r.partition_ok));
    Ok(if broken { EXIT_VIOLATION } else { 0 })
}
