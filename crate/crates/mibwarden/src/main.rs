use std::fs;
use std::io::{self, BufReader, Write};
use std::net::UdpSocket;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use mibwarden::bench::{run_bench, train, LearnerParams};
use mibwarden::csv_io::{load_csv_path, write_csv_path};
use mibwarden::error::{Error, Result};
use mibwarden::model_io::{parse_model, serialize_model};
use mibwarden::profile::parse_profile;
use mibwarden::report::render_tables;
use mibwarden::stream::{serve_udp, stream_classify};
use mibwarden_core::collector::COUNTER64_MODULUS;
use mibwarden_core::eval::evaluate;
use mibwarden_core::learners::{DTableParams, JripParams, PartParams};
use mibwarden_core::{synthesize, DeltaConfig, LearnerId, RuleModel, SynthProfile};

const SEED_ENV: &str = "MIBWARDEN_SEED";
const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "mibwarden", version, about = "Rule-based DoS traffic classification from SNMP-MIB counters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic labeled dataset as CSV.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON generator profile; omitted fields keep their defaults.
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    /// Train and compare all five learners on one holdout split.
    Bench {
        /// Labeled CSV. Without it the default synthetic corpus is used.
        #[arg(long)]
        data: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0.7)]
        split: f64,
        /// Where to write the JSON report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Train one learner and write the model file.
    Train {
        #[arg(long)]
        data: PathBuf,
        /// zeror, oner, jrip, part or dtable
        #[arg(long)]
        learner: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Score a model on a labeled CSV.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Print one predicted class per CSV row.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Classify a snapshot stream from a file, stdin or UDP.
    ClassifyStream {
        #[arg(long)]
        model: PathBuf,
        /// Expected polling interval in seconds.
        #[arg(long)]
        interval: u64,
        /// Counter width in bits (32 or 64).
        #[arg(long, default_value_t = 32)]
        counter_bits: u32,
        /// Gaps longer than this many intervals mark a delta as degraded.
        #[arg(long, default_value_t = 3)]
        max_gap: u64,
        /// Snapshot file; stdin when omitted.
        #[arg(long, conflicts_with = "udp")]
        input: Option<PathBuf>,
        /// Listen for one snapshot line per datagram on this address.
        #[arg(long)]
        udp: Option<String>,
    },
}

#[derive(Args)]
struct ParamFlags {
    /// OneR minimum bucket size.
    #[arg(long, default_value_t = 6)]
    min_bucket: usize,
    /// JRip folds.
    #[arg(long, default_value_t = 3)]
    folds: usize,
    /// JRip minimum covered positives per rule.
    #[arg(long, default_value_t = 2)]
    min_covered: usize,
    /// JRip optimization passes.
    #[arg(long, default_value_t = 2)]
    optimizations: usize,
    /// PART confidence factor.
    #[arg(long, default_value_t = 0.25)]
    confidence: f64,
    /// PART minimum records per leaf.
    #[arg(long, default_value_t = 2)]
    min_leaf: usize,
    /// Decision table non-improving expansions before the search stops.
    #[arg(long, default_value_t = 5)]
    max_stale: usize,
}

impl ParamFlags {
    fn resolve(&self, seed: u64) -> LearnerParams {
        LearnerParams {
            min_bucket: self.min_bucket,
            jrip: JripParams {
                folds: self.folds,
                min_covered: self.min_covered,
                optimizations: self.optimizations,
                seed,
            },
            part: PartParams { confidence: self.confidence, min_leaf: self.min_leaf, seed },
            dtable: DTableParams { max_stale: self.max_stale, seed },
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn load_model(path: &Path) -> Result<RuleModel> {
    parse_model(&read_text(path)?).map_err(|e| match e {
        Error::Format { line, message, .. } => Error::format(path.display().to_string(), line, message),
        other => other,
    })
}

/// Checks that a dataset's columns are exactly the model's attributes.
fn check_schema(model: &RuleModel, names: &[String]) -> Result<()> {
    if model.attributes != names {
        return Err(Error::Schema(format!(
            "model expects attributes [{}], data has [{}]",
            model.attributes.join(","),
            names.join(",")
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let w = |e: io::Error| Error::io("<stdout>", e);
    match cli.command {
        Command::Synth { out: path, seed, profile } => {
            let seed = resolve_seed(seed)?;
            let profile = match profile {
                Some(p) => parse_profile(&read_text(&p)?).map_err(|e| match e {
                    Error::Config(m) => Error::Config(format!("{}: {m}", p.display())),
                    other => other,
                })?,
                None => SynthProfile::default(),
            };
            let ds = synthesize(&profile, seed)?;
            write_csv_path(&ds, &path)?;
            info!("wrote {} records to {}", ds.len(), path.display());
        }
        Command::Bench { data, seed, split, report } => {
            let seed = resolve_seed(seed)?;
            if !(split > 0.0 && split < 1.0) {
                return Err(Error::Config(format!("--split must lie in (0, 1), got {split}")));
            }
            let ds = match data {
                Some(p) => load_csv_path(&p)?,
                None => synthesize(&SynthProfile::default(), seed)?,
            };
            let (rep, timings) = run_bench(&ds, seed, split)?;
            if let Some(p) = report {
                write_text(&p, &rep.to_json())?;
            }
            write!(out, "{}", render_tables(&rep, &timings)).map_err(w)?;
        }
        Command::Train { data, learner, out: path, seed, params } => {
            let seed = resolve_seed(seed)?;
            let learner: LearnerId =
                learner.parse().map_err(|_| Error::Config(format!("unknown learner `{learner}`")))?;
            let ds = load_csv_path(&data)?;
            let model = train(learner, &ds, &params.resolve(seed))?;
            write_text(&path, &serialize_model(&model))?;
            info!("{learner}: {} rules, default {}", model.rules.len(), model.default_class);
        }
        Command::Eval { model, data } => {
            let model = load_model(&model)?;
            let ds = load_csv_path(&data)?;
            check_schema(&model, &ds.attribute_names())?;
            let s = evaluate(&model, &ds)?;
            writeln!(out, "learner {}  records {}  accuracy {:.4}", model.learner, s.matrix.total(), s.accuracy)
                .map_err(w)?;
            writeln!(out, "{:<12} {:>6} {:>6} {:>6} {:>7}", "class", "P", "R", "F", "support").map_err(w)?;
            for m in &s.per_class {
                writeln!(
                    out,
                    "{:<12} {:>6.3} {:>6.3} {:>6.3} {:>7}",
                    m.class.name(),
                    m.precision,
                    m.recall,
                    m.f_measure,
                    m.tp + m.fn_
                )
                .map_err(w)?;
            }
            writeln!(
                out,
                "{:<12} {:>6.3} {:>6.3} {:>6.3} {:>7}",
                "weighted",
                s.weighted_precision,
                s.weighted_recall,
                s.weighted_f_measure,
                s.matrix.total()
            )
            .map_err(w)?;
        }
        Command::Predict { model, input } => {
            let model = load_model(&model)?;
            let ds = load_csv_path(&input)?;
            check_schema(&model, &ds.attribute_names())?;
            for class in model.predict_all(&ds)? {
                writeln!(out, "{class}").map_err(w)?;
            }
        }
        Command::ClassifyStream { model, interval, counter_bits, max_gap, input, udp } => {
            let model = load_model(&model)?;
            let wrap_modulus = match counter_bits {
                32 => 1u128 << 32,
                64 => COUNTER64_MODULUS,
                b => return Err(Error::Config(format!("--counter-bits must be 32 or 64, got {b}"))),
            };
            if interval == 0 || max_gap == 0 {
                return Err(Error::Config("--interval and --max-gap must be positive".into()));
            }
            let config = DeltaConfig { expected_interval: interval, wrap_modulus, max_gap };
            let stats = if let Some(addr) = udp {
                let socket = UdpSocket::bind(&addr).map_err(|e| Error::io(addr.as_str(), e))?;
                info!("listening on {addr}");
                serve_udp(&socket, &model, config, &mut out, None)?
            } else if let Some(p) = input {
                let file = fs::File::open(&p).map_err(|e| Error::io(&p, e))?;
                stream_classify(BufReader::new(file), &model, config, &mut out)?
            } else {
                stream_classify(io::stdin().lock(), &model, config, &mut out)?
            };
            info!("{} classified, {} skipped, {} degraded", stats.classified, stats.skipped, stats.degraded);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mibwarden: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
