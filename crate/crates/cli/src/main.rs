use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use turs::dataset::{encode_rows, load_csv, parse_schema, write_csv, Schema};
use turs::eval::{cross_validate, run_ablation, simulate_groundtruth, AblationConfig};
use turs::{fit_with_trace, Error, RuleSetModel, SearchConfig};

#[derive(Parser)]
#[command(name = "turs", version, about = "Learn and apply truly unordered probabilistic rule sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a rule set and write it as JSON
    Fit {
        #[command(flatten)]
        input: Input,
        /// Where to write the model
        #[arg(long)]
        out: PathBuf,
        /// Write a JSONL search trace here
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Predict class probabilities for the rows of a CSV
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Output CSV (standard output if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Predict overlaps from one covering rule picked at random
        #[arg(long)]
        random_pick: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Stratified k-fold cross-validation
    Cv {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        /// Write the metrics report as JSON
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write one row per fold as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Write a simulated dataset with one informative binary feature
    Simulate {
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeated fits on simulated data with the local test on and off
    Ablate {
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 5000)]
        n: usize,
        /// Write every run and the summary as JSON
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    target: String,
    /// File of `column: numeric|categorical` lines
    #[arg(long)]
    schema: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// File of `key: value` search settings, applied before the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// [default: 10]
    #[arg(long)]
    beam_width: Option<usize>,
    /// [default: 20]
    #[arg(long)]
    n_cutpoints: Option<usize>,
    /// [default: 3]
    #[arg(long)]
    k_stop: Option<usize>,
    #[arg(long)]
    max_rules: Option<usize>,
    /// Only run without the MDL local test (ablate: only the "off" row)
    #[arg(long)]
    no_local_test: bool,
    #[arg(long)]
    no_patience_diversity: bool,
    #[arg(long)]
    seed: Option<u64>,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, Error> {
        let mut cfg = SearchConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_config_text(&fs::read_to_string(path)?)?;
        }
        if let Some(v) = self.beam_width {
            cfg.beam_width = v;
        }
        if let Some(v) = self.n_cutpoints {
            cfg.n_cutpoints = v;
        }
        if let Some(v) = self.k_stop {
            cfg.k_stop = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.max_rules.is_some() {
            cfg.max_rules = self.max_rules;
        }
        if self.no_local_test {
            cfg.local_test = false;
        }
        if self.no_patience_diversity {
            cfg.patience_diversity = false;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl Input {
    fn load(&self) -> Result<turs::Dataset, Error> {
        let schema: Option<Schema> = match &self.schema {
            Some(p) => Some(parse_schema(&fs::read_to_string(p)?)?),
            None => None,
        };
        load_csv(&self.data, &self.target, schema.as_ref())
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Fit { input, out, trace, search } => {
            let cfg = search.config()?;
            let ds = input.load()?;
            let mut sink = trace.as_deref().map(create).transpose()?;
            let mut trace_err = None;
            let model = fit_with_trace(&ds, &cfg, |event| {
                if let (Some(w), None) = (sink.as_mut(), &trace_err) {
                    let line = serde_json::to_string(event).expect("trace events serialize");
                    if let Err(e) = writeln!(w, "{line}") {
                        trace_err = Some(e);
                    }
                }
            })?;
            if let Some(e) = trace_err {
                return Err(e.into());
            }
            if let Some(mut w) = sink {
                w.flush()?;
            }
            model.save(&out)?;
            print!("{model}");
            println!("{}", model.score());
        }
        Command::Predict { model, data, out, random_pick, seed } => {
            let model = RuleSetModel::load(&model)?;
            let rows = encode_rows(File::open(&data)?, model.columns())?;
            let sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(create(p)?),
                None => Box::new(io::stdout().lock()),
            };
            let mut w = csv::Writer::from_writer(sink);
            let mut header: Vec<String> = model.class_names().iter().map(|c| format!("p_{c}")).collect();
            header.push("provenance".into());
            w.write_record(&header)?;
            // one stream for the whole file, consumed only by overlapping rows
            let mut r = turs::rng::stream(seed, "random-pick", 0);
            for row in &rows {
                let pred = if random_pick {
                    model.predict_random_pick_with(row, &mut r)?
                } else {
                    model.predict(row)?
                };
                let mut rec: Vec<String> = pred.probs.iter().map(f64::to_string).collect();
                rec.push(pred.provenance.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
        Command::Cv { input, folds, out, csv, search } => {
            let cfg = search.config()?;
            let ds = input.load()?;
            let report = cross_validate(&ds, &cfg, folds, cfg.seed)?;
            if let Some(p) = out {
                fs::write(p, report.to_json()?)?;
            }
            if let Some(p) = csv {
                report.write_csv(create(&p)?)?;
            }
            println!("{report}");
        }
        Command::Simulate { n, seed, out } => {
            let ds = simulate_groundtruth(n, seed)?;
            let mut w = create(&out)?;
            write_csv(&ds, &mut w, "Y")?;
            w.flush()?;
        }
        Command::Ablate { reps, n, out, search } => {
            if reps == 0 {
                return Err(Error::InvalidConfig("--reps must be at least 1".into()));
            }
            let cfg = search.config()?;
            let modes: &[bool] = if search.no_local_test { &[false] } else { &[true, false] };
            let ablation = AblationConfig {
                reps,
                n,
                seed: cfg.seed,
                search: SearchConfig { local_test: true, ..cfg },
            };
            let report = run_ablation(&ablation, modes)?;
            if let Some(p) = out {
                fs::write(p, serde_json::to_string_pretty(&report)?)?;
            }
            println!("{report}");
        }
    }
    Ok(())
}

/// Input, configuration, and I/O problems are the caller's to fix (exit 2);
/// anything else is a bug (exit 1).
fn is_usage_error(e: &Error) -> bool {
    !matches!(
        e,
        Error::EmptyIndexSet
            | Error::RuleIndexOutOfRange { .. }
            | Error::EmptyRule
            | Error::ZeroAdmissibleValues { .. }
            | Error::NoNewCoverage
            | Error::CoverMismatch
            | Error::SizeTooLarge { .. }
            | Error::NonPositiveInteger
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("TURS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // results do not depend on the worker count
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
