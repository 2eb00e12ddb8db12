//! Command-line interface: `gen`, `stats`, `check`, `mc`, `probe`, `train`
//! and `augment`.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::generation::{
    augment, build_split_with, prune_alpha_equivalent, sidecar_path, BuildOptions, Dataset,
    IntRange, MechanismRegistry, PruneMode, Sequent, SplitSpec,
};
use crate::logic::{parse, Formula};
use crate::neural::{
    accuracy, train, write_trace_csv, AdamConfig, Checkpoint, ModelConfig, ModelRegistry, Sides,
    TrainConfig,
};
use crate::semantics::{
    countermodel_fraction, detection_rates, expected_detection_rate, OracleConfig, OracleRegistry,
    SWEEP_SAMPLES,
};
use crate::validation::{probe_one_sided, requirements_report, split_stats, DEFAULT_ALPHA};

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "ENTAIL_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "entail",
    version,
    about = "Propositional entailment datasets, deciders and models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Generate a split and write it as TSV with a provenance sidecar.
    Gen(GenArgs),
    /// Split statistics, class statistics and the requirements check.
    Stats(StatsArgs),
    /// Decide a single pair, or re-check every label of a TSV file.
    Check(CheckArgs),
    /// Monte-Carlo countermodel detection rates over the negatives of a file.
    Mc(McArgs),
    /// One-sided bag-of-words probe.
    Probe(ProbeArgs),
    /// Train a neural entailment model.
    Train(TrainArgs),
    /// Rename variables of every sequent with a fresh random permutation.
    Augment(AugmentArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    /// Start from a named parameter set: train, easy, hard, big, massive.
    #[arg(long)]
    pub preset: Option<String>,
    /// Variable-pool size range `lo:hi`.
    #[arg(long)]
    pub vars: Option<IntRange>,
    /// Operators per formula `lo:hi`.
    #[arg(long)]
    pub ops: Option<IntRange>,
    #[arg(long, default_value_t = 1000)]
    pub size: usize,
    #[arg(long, env = SEED_ENV)]
    pub seed: u64,
    /// Generation mechanism: quad, mutate or naive.
    #[arg(long)]
    pub mechanism: Option<String>,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Sort the output by canonical form.
    #[arg(long)]
    pub sort: bool,
    /// Drop sequents α-equivalent to ones in this training file.
    #[arg(long)]
    pub prune_against: Option<PathBuf>,
    #[arg(long, default_value = "sequent")]
    pub prune_mode: PruneMode,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct StatsArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    /// Premise of a single pair.
    pub premise: Option<String>,
    /// Conclusion of a single pair.
    pub conclusion: Option<String>,
    /// Re-check the labels of a TSV file instead.
    #[arg(long, short, conflicts_with_all = ["premise", "conclusion"])]
    pub input: Option<PathBuf>,
    /// Decider: dpll, truth-table or monte-carlo.
    #[arg(long, default_value = "dpll")]
    pub oracle: String,
    /// Assignments drawn by the monte-carlo oracle.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Sample counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = SWEEP_SAMPLES)]
    pub samples: Vec<usize>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Also print the exact expected rate from enumerated countermodel counts.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Side seen by the probe: premise or conclusion.
    #[arg(long, default_value = "premise")]
    pub side: Sides,
    /// Number of seeds averaged.
    #[arg(long, default_value_t = 3)]
    pub seeds: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub valid: PathBuf,
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Model: pwnet, treenet, bow-linear or bow-mlp.
    #[arg(long, default_value = "pwnet")]
    pub model: String,
    #[arg(long, default_value_t = 64)]
    pub worlds: usize,
    #[arg(long, default_value_t = 32)]
    pub d: usize,
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    #[arg(long, default_value_t = 32)]
    pub hidden: usize,
    #[arg(long, default_value_t = 50)]
    pub epochs: usize,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    #[arg(long, default_value_t = 5)]
    pub patience: usize,
    /// Disable variable-renaming augmentation.
    #[arg(long)]
    pub no_augment: bool,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Write the trained parameters as JSON.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Write per-epoch accuracies as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct AugmentArgs {
    /// Input TSV; `-` reads standard input.
    #[arg(long, short, default_value = "-")]
    pub input: PathBuf,
    /// Output TSV; `-` writes standard output.
    #[arg(long, short, default_value = "-")]
    pub out: PathBuf,
    /// Augmented copies per input sequent.
    #[arg(long, default_value_t = 1)]
    pub copies: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

/// What a run was invoked with, written next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a> {
    pub generator: &'static str,
    pub version: &'static str,
    #[serde(flatten)]
    pub command: &'a Command,
}

/// Parses `argv` and runs the subcommand, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

pub fn execute(command: &Command) -> anyhow::Result<i32> {
    match command {
        Command::Gen(a) => gen(a),
        Command::Stats(a) => stats(a, command),
        Command::Check(a) => check(a),
        Command::Mc(a) => mc(a),
        Command::Probe(a) => probe(a),
        Command::Train(a) => train_cmd(a, command),
        Command::Augment(a) => augment_cmd(a, command),
    }
}

fn require_file(path: &Path) -> anyhow::Result<()> {
    if !path.is_file() {
        bail!("input file {} does not exist", path.display());
    }
    Ok(())
}

fn require_parent(path: &Path) -> anyhow::Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            bail!("output directory {} does not exist", dir.display())
        }
        _ => Ok(()),
    }
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn write_run_sidecar(path: &Path, command: &Command) -> anyhow::Result<()> {
    let config = RunConfig {
        generator: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
    };
    let meta = sidecar_path(path);
    fs::write(&meta, serde_json::to_string_pretty(&config)? + "\n")
        .with_context(|| format!("writing {}", meta.display()))
}

fn load(path: &Path) -> anyhow::Result<Dataset> {
    Dataset::load(path, false).with_context(|| format!("reading {}", path.display()))
}

fn split_spec(a: &GenArgs) -> anyhow::Result<SplitSpec> {
    let mut spec = match &a.preset {
        Some(p) => SplitSpec::preset(p, a.size, a.seed)
            .with_context(|| format!("unknown preset `{p}` (train, easy, hard, big, massive)"))?,
        None => SplitSpec::train_like(a.size, a.seed),
    };
    if a.preset.is_none() {
        spec.name = "custom".into();
    }
    if let Some(v) = a.vars {
        spec.vars = v;
    }
    if let Some(o) = a.ops {
        spec.ops = o;
    }
    if let Some(m) = &a.mechanism {
        spec.mechanism = m.clone();
    }
    if let Some(n) = &a.name {
        spec.name = n.clone();
    }
    spec.validate()?;
    Ok(spec)
}

fn gen(a: &GenArgs) -> anyhow::Result<i32> {
    let spec = split_spec(a)?;
    require_parent(&a.out)?;
    if let Some(p) = &a.prune_against {
        require_file(p)?;
    }
    if a.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let opts = BuildOptions {
        jobs: a.jobs,
        sort: a.sort,
    };
    let mut d = build_split_with(&MechanismRegistry::default(), &spec, opts)?;
    if let Some(p) = &a.prune_against {
        d = prune_alpha_equivalent(&d, &load(p)?, a.prune_mode);
    }
    d.save(&a.out)
        .with_context(|| format!("writing {}", a.out.display()))?;
    eprintln!("wrote {} sequents to {}", d.len(), a.out.display());
    Ok(EXIT_OK)
}

fn stats(a: &StatsArgs, command: &Command) -> anyhow::Result<i32> {
    require_file(&a.input)?;
    if let Some(out) = &a.out {
        require_parent(out)?;
    }
    let d = load(&a.input)?;
    let split = split_stats(&d);
    let report = requirements_report(&d, a.alpha);
    let json = serde_json::json!({ "split": split, "requirements": report });
    if a.json {
        println!("{}", serde_json::to_string_pretty(&json)?);
    } else {
        let num = |x: Option<f64>| x.map_or("-".to_string(), |x| format!("{x:.2}"));
        println!(
            "size {}  mean vars {}  mean ops {}  mean length {}  mean 2^vars {}",
            split.size,
            num(split.mean_vars),
            num(split.mean_ops),
            num(split.mean_length),
            num(split.mean_worlds)
        );
        print!("{}", report.to_table());
    }
    if let Some(out) = &a.out {
        fs::write(out, serde_json::to_string_pretty(&json)? + "\n")?;
        write_run_sidecar(out, command)?;
    }
    Ok(if report.passed {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    })
}

fn check(a: &CheckArgs) -> anyhow::Result<i32> {
    let config = OracleConfig {
        samples: a.samples,
        seed: a.seed,
    };
    let oracle = OracleRegistry::default().create(&a.oracle, &config)?;
    if let Some(path) = &a.input {
        require_file(path)?;
        let d = load(path)?;
        let mut mismatches = 0usize;
        for (i, s) in d.sequents.iter().enumerate() {
            if oracle.entails(&s.premise, &s.conclusion)? != s.label {
                mismatches += 1;
                println!(
                    "line {}: stored label {} disagrees: {s}",
                    i + 1,
                    u8::from(s.label)
                );
            }
        }
        println!(
            "{} sequents, {mismatches} label mismatches ({})",
            d.len(),
            oracle.name()
        );
        return Ok(if mismatches == 0 {
            EXIT_OK
        } else {
            EXIT_VALIDATION
        });
    }
    let (Some(p), Some(c)) = (&a.premise, &a.conclusion) else {
        bail!("give a premise and a conclusion, or --input FILE");
    };
    let (p, c) = (parse(p)?, parse(c)?);
    println!("{}", u8::from(oracle.entails(&p, &c)?));
    Ok(EXIT_OK)
}

fn mc(a: &McArgs) -> anyhow::Result<i32> {
    require_file(&a.input)?;
    if a.samples.contains(&0) {
        bail!("sample counts must be positive");
    }
    let d = load(&a.input)?;
    let pairs: Vec<(Formula, Formula)> = d
        .negatives()
        .map(|s| (s.premise.clone(), s.conclusion.clone()))
        .collect();
    if pairs.is_empty() {
        bail!("{} has no negative sequents", a.input.display());
    }
    let rates = detection_rates(&pairs, &a.samples, a.seed);
    let fractions = if a.exact {
        Some(
            pairs
                .iter()
                .map(|(p, c)| countermodel_fraction(p, c))
                .collect::<crate::Result<Vec<f64>>>()?,
        )
    } else {
        None
    };
    let expected: Vec<Option<f64>> = rates
        .iter()
        .map(|r| {
            fractions
                .as_ref()
                .map(|f| expected_detection_rate(f, r.samples))
        })
        .collect();
    if a.json {
        let rows: Vec<_> = rates
            .iter()
            .zip(&expected)
            .map(|(r, e)| serde_json::json!({ "samples": r.samples, "rate": r.rate(), "expected": e }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        println!("{} negative pairs", pairs.len());
        for (r, e) in rates.iter().zip(&expected) {
            match e {
                Some(e) => println!(
                    "m={:<4} {:6.2}%  expected {:6.2}%",
                    r.samples,
                    100.0 * r.rate(),
                    100.0 * e
                ),
                None => println!("m={:<4} {:6.2}%", r.samples, 100.0 * r.rate()),
            }
        }
    }
    Ok(EXIT_OK)
}

fn probe(a: &ProbeArgs) -> anyhow::Result<i32> {
    require_file(&a.input)?;
    if a.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let d = load(&a.input)?;
    let mut total = 0.0;
    for i in 0..a.seeds {
        let acc = probe_one_sided(&d, a.side, a.seed + i)?;
        println!("seed {}: {:.2}%", a.seed + i, 100.0 * acc);
        total += acc;
    }
    println!(
        "mean ({} side): {:.2}%",
        a.side,
        100.0 * total / a.seeds as f64
    );
    Ok(EXIT_OK)
}

fn train_cmd(a: &TrainArgs, command: &Command) -> anyhow::Result<i32> {
    require_file(&a.train)?;
    require_file(&a.valid)?;
    if let Some(t) = &a.test {
        require_file(t)?;
    }
    for out in a.checkpoint.iter().chain(&a.trace) {
        require_parent(out)?;
    }
    let config = ModelConfig {
        d: a.d,
        k: a.k,
        worlds: a.worlds,
        hidden: a.hidden,
        world_seed: a.seed,
        init_seed: a.seed,
        ..ModelConfig::new(&a.model)
    };
    let mut model = ModelRegistry::default().create(&config)?;
    let tc = TrainConfig {
        epochs: a.epochs,
        batch_size: a.batch_size,
        adam: AdamConfig {
            lr: a.lr,
            ..AdamConfig::default()
        },
        augment: !a.no_augment,
        patience: a.patience,
        seed: a.seed,
    };
    let (tr, va) = (load(&a.train)?, load(&a.valid)?);
    let report = train(model.as_mut(), &tr.sequents, &va.sequents, &tc)?;
    println!(
        "{}: {} epochs, best epoch {}, valid {:.2}%",
        a.model,
        report.epochs_run,
        report.best_epoch,
        100.0 * report.best_valid_accuracy
    );
    if let Some(t) = &a.test {
        let te = load(t)?;
        println!(
            "test {:.2}% on {} sequents",
            100.0 * accuracy(model.as_ref(), &te.sequents),
            te.len()
        );
    }
    if let Some(path) = &a.checkpoint {
        Checkpoint::capture(model.as_ref()).save(path)?;
        write_run_sidecar(path, command)?;
    }
    if let Some(path) = &a.trace {
        write_trace_csv(&report.trace, BufWriter::new(fs::File::create(path)?))?;
        write_run_sidecar(path, command)?;
    }
    Ok(EXIT_OK)
}

fn augment_cmd(a: &AugmentArgs, command: &Command) -> anyhow::Result<i32> {
    let input: Box<dyn BufRead> = if is_stdio(&a.input) {
        Box::new(io::stdin().lock())
    } else {
        require_file(&a.input)?;
        Box::new(BufReader::new(fs::File::open(&a.input)?))
    };
    let mut output: Box<dyn Write> = if is_stdio(&a.out) {
        Box::new(BufWriter::new(io::stdout().lock()))
    } else {
        require_parent(&a.out)?;
        Box::new(BufWriter::new(fs::File::create(&a.out)?))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let d = Dataset::read_tsv(line.as_bytes(), false)
            .with_context(|| format!("input line {}", i + 1))?;
        let s: &Sequent = &d.sequents[0];
        for _ in 0..a.copies {
            writeln!(output, "{}", augment(s, &mut rng))?;
        }
    }
    output.flush()?;
    if !is_stdio(&a.out) {
        write_run_sidecar(&a.out, command)?;
    }
    Ok(EXIT_OK)
}
