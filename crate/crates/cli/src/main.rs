use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use precax_core::alignment::TieBreak;
use precax_core::axioms::{check_a1, check_a2, check_a3, check_a4, check_a5, Axiom, AxiomReport, Measure, Verdict};
use precax_core::corpus;
use precax_core::measures::{evaluate, MeasureKind, MeasureOptions, NegativeMode, Value, Weighting};
use precax_core::reproduce::reproduce;
use precax_core::{parse_log, parse_net, AcceptingPetriNet, Error, EventLog, ExploreLimits};
use serde_json::json;

const CORPUS_PREFIX: &str = "corpus:";

#[derive(Parser, Debug)]
#[command(name = "precax", version, about = "Precision measures and precision axioms for process models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one precision measure on a log and a model.
    Measure(MeasureArgs),
    /// Check one axiom for a measure on concrete instances.
    Axiom(AxiomArgs),
    /// Recompute the reference values and the axiom overview table.
    ReproducePaper(ReproduceArgs),
    /// List the embedded corpus.
    List,
    /// Write corpus entries as standalone `.net` / `.log` files.
    Export(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TieBreakArg {
    Lexicographic,
    Seeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NegativeModeArg {
    Deterministic,
    Sampled,
}

#[derive(Args, Debug, Clone)]
struct MeasureOpts {
    /// Measure name (greco, simple-ba, advanced-ba, etc, one-align-etc, all-align-etc, negative-event, pcc).
    #[arg(long)]
    measure: String,
    /// Subset size for pcc.
    #[arg(long, default_value_t = precax_core::measures::DEFAULT_K)]
    k: usize,
    /// Largest window for negative-event precision.
    #[arg(long, default_value_t = precax_core::measures::DEFAULT_MAX_WINDOW)]
    max_window: usize,
    /// State weighting for one-align-etc (visits or events).
    #[arg(long, default_value = "visits")]
    weighting: String,
    /// How ties between optimal alignments are broken.
    #[arg(long, value_enum, default_value_t = TieBreakArg::Lexicographic)]
    tiebreak: TieBreakArg,
    /// Whether negative-event precision subsamples window matches.
    #[arg(long, value_enum, default_value_t = NegativeModeArg::Deterministic)]
    negative_mode: NegativeModeArg,
    /// Seed for every seeded choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest language counted by greco.
    #[arg(long, default_value_t = 100_000)]
    trace_cap: u128,
    /// Largest number of optimal alignments enumerated per trace.
    #[arg(long, default_value_t = 1_000)]
    alignment_cap: usize,
    /// Maximum number of reachable markings explored.
    #[arg(long, env = "PRECAX_STATE_CAP", default_value_t = ExploreLimits::default().state_cap)]
    state_cap: usize,
    /// Tokens per place beyond which a net counts as unbounded.
    #[arg(long, env = "PRECAX_TOKEN_BOUND", default_value_t = ExploreLimits::default().bound)]
    token_bound: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl MeasureOpts {
    fn kind(&self) -> anyhow::Result<MeasureKind> {
        Ok(self.measure.parse()?)
    }

    fn options(&self) -> anyhow::Result<MeasureOptions> {
        let weighting: Weighting = self.weighting.parse()?;
        Ok(MeasureOptions {
            k: self.k,
            max_window: self.max_window,
            weighting,
            tiebreak: match self.tiebreak {
                TieBreakArg::Lexicographic => TieBreak::Lexicographic,
                TieBreakArg::Seeded => TieBreak::SeededRandom(self.seed),
            },
            negative_mode: match self.negative_mode {
                NegativeModeArg::Deterministic => NegativeMode::Deterministic,
                NegativeModeArg::Sampled => NegativeMode::Sampled(self.seed),
            },
            trace_cap: self.trace_cap,
            alignment_cap: self.alignment_cap,
            limits: ExploreLimits { bound: self.token_bound, state_cap: self.state_cap },
        })
    }

    fn echo(&self) -> serde_json::Value {
        json!({
            "measure": self.measure,
            "k": self.k,
            "max_window": self.max_window,
            "weighting": self.weighting,
            "tiebreak": format!("{:?}", self.tiebreak).to_lowercase(),
            "negative_mode": format!("{:?}", self.negative_mode).to_lowercase(),
            "seed": self.seed,
            "trace_cap": self.trace_cap.to_string(),
            "alignment_cap": self.alignment_cap,
            "state_cap": self.state_cap,
            "token_bound": self.token_bound,
        })
    }
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Model: a net file or `corpus:<name>`.
    #[arg(long)]
    model: String,
    /// Log: a log file or `corpus:<name>`.
    #[arg(long)]
    log: String,
    #[command(flatten)]
    opts: MeasureOpts,
}

#[derive(Args, Debug)]
struct AxiomArgs {
    /// A1, A2, A3, A4 or A5.
    axiom: String,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    model1: Option<String>,
    #[arg(long)]
    model2: Option<String>,
    #[arg(long)]
    log: Option<String>,
    #[arg(long)]
    log1: Option<String>,
    #[arg(long)]
    log2: Option<String>,
    /// Number of seeded runs (A1) or batch size for stochastic measures.
    #[arg(long, default_value_t = 20)]
    runs: u64,
    #[command(flatten)]
    opts: MeasureOpts,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Number of seeds for the stochastic experiments.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct ExportArgs {
    /// Target directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Entries to export; all when omitted.
    names: Vec<String>,
}

fn load_model(src: &str) -> anyhow::Result<AcceptingPetriNet> {
    match src.strip_prefix(CORPUS_PREFIX) {
        Some(name) => Ok(corpus::model(name)?),
        None => {
            let text = fs::read_to_string(src).with_context(|| format!("cannot read model `{src}`"))?;
            parse_net(&text).with_context(|| format!("cannot parse model `{src}`"))
        }
    }
}

fn load_log(src: &str) -> anyhow::Result<EventLog> {
    match src.strip_prefix(CORPUS_PREFIX) {
        Some(name) => Ok(corpus::log(name)?),
        None => {
            let text = fs::read_to_string(src).with_context(|| format!("cannot read log `{src}`"))?;
            parse_log(&text).with_context(|| format!("cannot parse log `{src}`"))
        }
    }
}

fn required<'a>(slot: &'a Option<String>, flag: &str) -> anyhow::Result<&'a str> {
    slot.as_deref().ok_or_else(|| anyhow!("missing --{flag}"))
}

/// Errors that mean "no value could be decided" rather than bad input.
fn undecided(e: &Error) -> bool {
    matches!(
        e,
        Error::Undecided(_)
            | Error::ExplorationOverflow { .. }
            | Error::Unbounded { .. }
            | Error::EnumerationOverflow { .. }
            | Error::Precondition(_)
            | Error::NoAlignment
    )
}

fn cmd_measure(args: &MeasureArgs) -> anyhow::Result<ExitCode> {
    let kind = args.opts.kind()?;
    let opts = args.opts.options()?;
    let model = load_model(&args.model)?;
    let log = load_log(&args.log)?;
    let report = match evaluate(kind, &log, &model, &opts) {
        Ok(r) => r,
        Err(e) if undecided(&e) => {
            eprintln!("precax: {e}");
            if args.opts.format == Format::Records {
                println!("{}", json!({ "config": measure_echo(args), "undecided": e.to_string() }));
            } else {
                println!("measure={kind}\nvalue=undecided\nreason={e}");
            }
            return Ok(ExitCode::from(2));
        }
        Err(e) => return Err(e.into()),
    };
    match args.opts.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Records => println!("{}", json!({ "config": measure_echo(args), "report": report.record() })),
    }
    Ok(match report.value {
        Value::Defined(_) => ExitCode::SUCCESS,
        Value::Undefined { .. } => ExitCode::from(2),
    })
}

fn measure_echo(args: &MeasureArgs) -> serde_json::Value {
    let mut v = args.opts.echo();
    v["command"] = json!("measure");
    v["model"] = json!(args.model);
    v["log"] = json!(args.log);
    v
}

fn cmd_axiom(args: &AxiomArgs) -> anyhow::Result<ExitCode> {
    let axiom: Axiom = args.axiom.parse()?;
    let measure = Measure::new(args.opts.kind()?, args.opts.options()?);
    if args.runs < 2 {
        bail!("--runs must be at least 2");
    }
    let seeds: Vec<u64> = (args.opts.seed..args.opts.seed + args.runs).collect();
    let report: AxiomReport = match axiom {
        Axiom::A1 => check_a1(&measure, &load_log(required(&args.log, "log")?)?, &load_model(required(&args.model, "model")?)?, &seeds),
        Axiom::A2 | Axiom::A4 => {
            let log = load_log(required(&args.log, "log")?)?;
            let m1 = load_model(required(&args.model1, "model1")?)?;
            let m2 = load_model(required(&args.model2, "model2")?)?;
            if axiom == Axiom::A2 {
                check_a2(&measure, &log, &m1, &m2, &seeds)
            } else {
                check_a4(&measure, &log, &m1, &m2, &seeds)
            }
        }
        Axiom::A3 => check_a3(&measure, &load_log(required(&args.log, "log")?)?, &load_model(required(&args.model, "model")?)?, None, &seeds),
        Axiom::A5 => check_a5(
            &measure,
            &load_log(required(&args.log1, "log1")?)?,
            &load_log(required(&args.log2, "log2")?)?,
            &load_model(required(&args.model, "model")?)?,
            &seeds,
        ),
    }?;
    match args.opts.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Records => {
            let mut config = args.opts.echo();
            config["command"] = json!("axiom");
            config["axiom"] = json!(axiom.to_string());
            for (k, v) in [
                ("model", &args.model),
                ("model1", &args.model1),
                ("model2", &args.model2),
                ("log", &args.log),
                ("log1", &args.log1),
                ("log2", &args.log2),
            ] {
                if let Some(v) = v {
                    config[k] = json!(v);
                }
            }
            config["runs"] = json!(args.runs);
            println!("{}", json!({ "config": config, "report": report }));
        }
    }
    Ok(match report.verdict {
        Verdict::SatisfiedOnInstances => ExitCode::SUCCESS,
        Verdict::Violated => ExitCode::from(3),
        Verdict::HypothesisNotMet | Verdict::Undecided => ExitCode::from(2),
    })
}

fn cmd_reproduce(args: &ReproduceArgs) -> anyhow::Result<ExitCode> {
    if args.seeds < 2 {
        bail!("--seeds must be at least 2");
    }
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let r = reproduce(&seeds)?;
    match args.format {
        Format::Text => print!("{}", r.to_text()),
        Format::Records => println!(
            "{}",
            json!({ "config": { "command": "reproduce-paper", "seeds": args.seeds }, "all_pass": r.all_pass(), "reproduction": r })
        ),
    }
    Ok(if r.all_pass() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_list() {
    for e in corpus::entries() {
        println!("{:<18} {:<5} {}", e.name, e.kind.as_str(), e.provenance);
    }
}

fn cmd_export(args: &ExportArgs) -> anyhow::Result<ExitCode> {
    let names: Vec<String> = if args.names.is_empty() {
        corpus::list_entries().into_iter().map(String::from).collect()
    } else {
        args.names.iter().map(|n| n.strip_prefix(CORPUS_PREFIX).unwrap_or(n).to_string()).collect()
    };
    fs::create_dir_all(&args.out).with_context(|| format!("cannot create `{}`", args.out.display()))?;
    for name in names {
        let entry = corpus::entry(&name)?;
        let path: PathBuf = Path::new(&args.out).join(entry.file_name());
        fs::write(&path, corpus::payload(&name)?).with_context(|| format!("cannot write `{}`", path.display()))?;
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Measure(a) => cmd_measure(a),
        Command::Axiom(a) => cmd_axiom(a),
        Command::ReproducePaper(a) => cmd_reproduce(a),
        Command::List => {
            cmd_list();
            Ok(ExitCode::SUCCESS)
        }
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("precax: {e:#}");
            ExitCode::FAILURE
        }
    }
}
