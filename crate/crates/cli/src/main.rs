//! `antipower`: generate morphic words, classify morphisms, and run the
//! antipower and golden-ratio verification suites.

use std::io::Write;
use std::ops::Range;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use antipower_core::antipower::{self, Strategy};
use antipower_core::classifier;
use antipower_core::golden;
use antipower_core::morphic::write_prefix_cache;
use antipower_core::report::{approx, write_atomic, Table, VerificationReport};
use antipower_core::suites::{self, Suite, SuiteOptions};
use antipower_core::{Error, MorphicWord, Morphism};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "antipower", version, about = "Antipowers in morphic words")]
struct Cli {
    /// Maximum number of letters any word may materialize.
    #[arg(long, global = true, env = "ANTIPOWER_CAP", default_value_t = 1 << 24)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of a morphic word.
    Gen(GenArgs),
    /// Classify a morphism and seed.
    Classify(ClassifyArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Tabulate the shortest antipower block lengths.
    Gamma(GammaArgs),
    /// Compare the naive and accelerated distinctness kernels.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct WordArgs {
    /// Morphism rules such as "0->01;1->0", or @path to read them from a file.
    #[arg(long)]
    morphism: Option<String>,
    /// Seed letter.
    #[arg(long)]
    seed: Option<char>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
    Binary,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    word: WordArgs,
    #[arg(long = "len", short = 'L')]
    len: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    word: WordArgs,
    /// Prefix length used by the periodicity check.
    #[arg(long = "len", short = 'L', default_value_t = 1 << 12)]
    len: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_parser = parse_suite)]
    suite: Suite,
    #[command(flatten)]
    word: WordArgs,
    /// Values of n, e.g. "3..=8" or "6,9,12".
    #[arg(long)]
    n: Option<String>,
    /// Range of k, e.g. "2..9".
    #[arg(long, value_parser = parse_range)]
    k: Option<Range<usize>>,
    #[arg(long)]
    kmax: Option<u64>,
    #[arg(long, value_parser = parse_range)]
    indices: Option<Range<usize>>,
    #[arg(long)]
    limit: Option<usize>,
    /// Prefix length for prefix-based suites.
    #[arg(long = "len", short = 'L')]
    len: Option<usize>,
    /// Assert complexity exactly n + 1.
    #[arg(long)]
    sturmian: Option<bool>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Accelerated)]
    strategy: StrategyArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct GammaArgs {
    #[command(flatten)]
    word: WordArgs,
    #[arg(long, value_parser = parse_range, default_value = "0..=500")]
    indices: Range<usize>,
    #[arg(long, value_parser = parse_range, default_value = "2..=50")]
    k: Range<usize>,
    /// Largest block length tried for words other than the Fibonacci word.
    #[arg(long, default_value_t = 4096)]
    max_block: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Accelerated)]
    strategy: StrategyArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    word: WordArgs,
    #[arg(long, value_parser = parse_range, default_value = "0..4")]
    indices: Range<usize>,
    #[arg(long, value_parser = parse_range, default_value = "2..=50")]
    k: Range<usize>,
    #[arg(long, default_value_t = 4096)]
    max_block: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Naive,
    Accelerated,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Naive => Strategy::Naive,
            StrategyArg::Accelerated => Strategy::Accelerated,
        }
    }
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<Range<usize>, String> {
    suites::parse_range(s).map_err(|e| e.to_string())
}

/// Failure modes of a command, mapped onto exit codes.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(e.into())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                e if e.is_resource_cap() => EXIT_CAP,
                Error::HypothesisFailed(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Gen(a) => gen(cli, a),
        Command::Classify(a) => classify(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Gamma(a) => gamma(cli, a),
        Command::Bench(a) => bench(cli, a),
    }
}

fn load_morphism(spec: &str) -> Result<Morphism, Failure> {
    let text = match spec.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?,
        None => spec.to_string(),
    };
    Ok(Morphism::parse(&text)?)
}

impl WordArgs {
    fn morphism(&self) -> Result<Option<Morphism>, Failure> {
        self.morphism.as_deref().map(load_morphism).transpose()
    }

    fn seed(&self, mu: &Morphism) -> Result<antipower_core::Letter, Failure> {
        match self.seed {
            Some(c) => Ok(mu.letter(c)?),
            None => Ok(0),
        }
    }

    /// The word selected by the flags, defaulting to `default`.
    fn source(&self, cap: u64, default: fn() -> Morphism) -> Result<MorphicWord, Failure> {
        let mu = self.morphism()?.unwrap_or_else(default);
        let seed = self.seed(&mu)?;
        Ok(MorphicWord::new(mu, seed)?.with_cap(cap))
    }
}

impl OutputArgs {
    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::Usage(
                "unsupported --format for this command".into(),
            ))
        }
    }

    fn emit(&self, bytes: &[u8]) -> Result<(), Failure> {
        match &self.out {
            Some(path) => write_atomic(path, bytes)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(bytes)?;
                stdout.flush()?;
            }
        }
        Ok(())
    }
}

fn gen(cli: &Cli, a: &GenArgs) -> Outcome {
    let source = a.word.source(cli.cap, Morphism::fibonacci)?;
    let format = a
        .output
        .format(Format::Text, &[Format::Text, Format::Binary])?;
    let alphabet = source.morphism().alphabet().clone();
    let bytes = source.with_prefix(a.len, |p| -> Result<Vec<u8>, Error> {
        match format {
            Format::Binary => {
                let mut buf = Vec::new();
                write_prefix_cache(&mut buf, alphabet.size(), p)?;
                Ok(buf)
            }
            _ => {
                let mut s: String = p.iter().map(|&l| alphabet.symbol(l)).collect();
                s.push('\n');
                Ok(s.into_bytes())
            }
        }
    })??;
    a.output.emit(&bytes)?;
    Ok(true)
}

fn classify(cli: &Cli, a: &ClassifyArgs) -> Outcome {
    let mu = a
        .word
        .morphism()?
        .ok_or_else(|| Failure::Usage("--morphism is required".into()))?;
    let seed = a.word.seed(&mu)?;
    if a.len as u64 > cli.cap {
        return Err(Error::CapExceeded {
            requested: a.len as u64,
            cap: cli.cap,
        }
        .into());
    }
    let verdict = classifier::classify(&mu, seed, a.len)?;
    let format = a
        .output
        .format(Format::Json, &[Format::Json, Format::Text])?;
    let text = match format {
        Format::Text => {
            let value = serde_json::to_value(&verdict).map_err(Error::from)?;
            let mut s = String::new();
            for (key, v) in value.as_object().expect("verdict is an object") {
                s.push_str(&format!("{key}: {v}\n"));
            }
            s
        }
        _ => {
            let mut value = serde_json::to_value(&verdict).map_err(Error::from)?;
            value["schema_version"] = 1.into();
            let mut s = serde_json::to_string_pretty(&value).map_err(Error::from)?;
            s.push('\n');
            s
        }
    };
    a.output.emit(text.as_bytes())?;
    Ok(true)
}

fn emit_report(output: &OutputArgs, report: &VerificationReport) -> Outcome {
    let format = output.format(Format::Json, &[Format::Json, Format::Csv, Format::Text])?;
    let text = match format {
        Format::Csv => report.table.to_csv()?,
        Format::Text => report.to_text(),
        _ => report.to_json()?,
    };
    output.emit(text.as_bytes())?;
    Ok(report.acceptable())
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Outcome {
    let morphism = a.word.morphism()?;
    let seed = match &morphism {
        Some(mu) => Some(a.word.seed(mu)?),
        None if a.word.seed.is_some() => {
            return Err(Failure::Usage("--seed requires --morphism".into()))
        }
        None => None,
    };
    let opts = SuiteOptions {
        morphism: morphism.map(Arc::new),
        seed,
        cap: Some(cli.cap),
        n: a.n
            .as_deref()
            .map(suites::parse_list)
            .transpose()
            .map_err(|e| Failure::Usage(e.to_string()))?,
        k: a.k.clone(),
        k_max: a.kmax,
        indices: a.indices.clone(),
        limit: a.limit,
        prefix_length: a.len,
        strategy: a.strategy.into(),
        sturmian: a.sturmian,
    };
    let report = suites::run_suite(a.suite, &opts)?;
    emit_report(&a.output, &report)
}

fn gamma(cli: &Cli, a: &GammaArgs) -> Outcome {
    let strategy = a.strategy.into();
    let report = match a.word.morphism()? {
        None => {
            let fib = MorphicWord::fibonacci().with_cap(cli.cap);
            golden::gamma_bounds_report(&fib, a.indices.clone(), a.k.clone(), strategy)?
        }
        Some(mu) => {
            let seed = a.word.seed(&mu)?;
            let source = MorphicWord::new(mu, seed)?.with_cap(cli.cap);
            gamma_table(&source, a, strategy)?
        }
    };
    let mut output = a.output.clone();
    output.format = Some(output.format.unwrap_or(Format::Csv));
    emit_report(&output, &report)
}

/// Plain `gamma_i(k)` table for an arbitrary word; no bounds are asserted.
fn gamma_table(
    source: &MorphicWord,
    a: &GammaArgs,
    strategy: Strategy,
) -> Result<VerificationReport, Failure> {
    let mut report = VerificationReport::new("gamma", false);
    report
        .param("indices", format!("{}..{}", a.indices.start, a.indices.end))
        .param("k", format!("{}..{}", a.k.start, a.k.end))
        .param("max_block", a.max_block as u64);
    report.table = Table::new(["i", "k", "gamma", "ratio"]);
    let mut unresolved = 0u64;
    for i in a.indices.clone() {
        for k in a.k.clone() {
            let g = antipower::gamma_with(source, i, k, a.max_block, strategy)?;
            report.record_check();
            if g.is_none() {
                unresolved += 1;
            }
            report.table.push(vec![
                i.to_string(),
                k.to_string(),
                g.map(|g| g.to_string()).unwrap_or_default(),
                g.map(|g| approx(g as f64 / k as f64)).unwrap_or_default(),
            ]);
        }
    }
    report.prefix_length = Some(source.materialized_len() as u64);
    report.note("unresolved", unresolved);
    Ok(report)
}

fn bench(cli: &Cli, a: &BenchArgs) -> Outcome {
    let families: Vec<(String, MorphicWord)> = match a.word.morphism()? {
        Some(mu) => {
            let seed = a.word.seed(&mu)?;
            let name = mu.to_string();
            vec![(name, MorphicWord::new(mu, seed)?.with_cap(cli.cap))]
        }
        None => vec![
            (
                "fibonacci".into(),
                MorphicWord::fibonacci().with_cap(cli.cap),
            ),
            (
                "thue-morse".into(),
                MorphicWord::thue_morse().with_cap(cli.cap),
            ),
        ],
    };
    let mut report = VerificationReport::new("bench", true);
    report.table = Table::new(["family", "i", "k", "gamma", "naive_ms", "accelerated_ms"]);
    for (name, source) in &families {
        for i in a.indices.clone() {
            for k in a.k.clone() {
                let start = Instant::now();
                let naive = antipower::gamma_with(source, i, k, a.max_block, Strategy::Naive)?;
                let naive_ms = start.elapsed().as_secs_f64() * 1e3;
                let start = Instant::now();
                let fast = antipower::gamma_with(source, i, k, a.max_block, Strategy::Accelerated)?;
                let fast_ms = start.elapsed().as_secs_f64() * 1e3;
                report.record_check();
                if naive != fast {
                    report.record_failure(serde_json::json!({
                        "family": name, "i": i, "k": k, "naive": naive, "accelerated": fast,
                    }));
                }
                report.table.push(vec![
                    name.clone(),
                    i.to_string(),
                    k.to_string(),
                    fast.map(|g| g.to_string()).unwrap_or_default(),
                    format!("{naive_ms:.3}"),
                    format!("{fast_ms:.3}"),
                ]);
            }
        }
    }
    let mut output = a.output.clone();
    output.format = Some(output.format.unwrap_or(Format::Csv));
    emit_report(&output, &report)
}
