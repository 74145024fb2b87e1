use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperelm_core::catalog::{check_properties, render_table};
use hyperelm_core::{builtin, AlgebraName, AlgebraSpec, ElmConfig, ElmModel};
use serde::Serialize;

use crate::data::{load_cifar_dir, read_matrix_csv, write_matrix_csv};
use crate::error::{Error, Result};
use crate::experiments::{
    run_autoencoder_experiment, run_lorenz_experiment, AutoencoderExperiment, ImageDump, LorenzExperiment,
    NormalizeMode,
};
use crate::persist::{algebra_from_arg, load_model, save_model, AlgebraDoc};
use crate::records::{emit_csv, emit_csv_file, CsvRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hyperelm", version, about = "Hypercomplex-valued extreme learning machines")]
struct Cli {
    /// Base seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Parallel trials (defaults to the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Inspect the algebra catalog.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Lorenz one-step prediction benchmark.
    Lorenz(LorenzArgs),
    /// CIFAR-10 auto-encoding benchmark.
    Cifar(CifarArgs),
    /// Fit a model to coefficient matrices stored as CSV.
    Train(TrainArgs),
    /// Apply a saved model to a CSV coefficient matrix.
    Predict(PredictArgs),
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraCmd {
    List,
    /// Print the multiplication table of a catalog name or algebra JSON file.
    Show { name: String },
    /// Report commutativity, associativity and self-inverse units.
    Check { name: String },
}

#[derive(Debug, Args)]
struct LorenzArgs {
    /// Comma-separated catalog names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    algebras: Vec<String>,
    #[arg(long, default_value_t = 11)]
    lmin: usize,
    #[arg(long, default_value_t = 35)]
    lmax: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = NormalizeMode::Raw)]
    normalize: NormalizeMode,
    #[arg(long, default_value_t = 4000)]
    steps: usize,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long = "train-size", default_value_t = 300)]
    train_size: usize,
    #[arg(long, default_value_t = 3)]
    window: usize,
}

#[derive(Debug, Args)]
struct CifarArgs {
    /// Directory holding `data_batch_1.bin` and `test_batch.bin`.
    #[arg(long = "data-dir")]
    data_dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "all")]
    algebras: Vec<String>,
    #[arg(long = "l-real", default_value_t = 600)]
    l_real: usize,
    #[arg(long = "l-hyper", default_value_t = 450)]
    l_hyper: usize,
    #[arg(long = "alpha-real", default_value_t = 30.0 / 3072.0)]
    alpha_real: f64,
    #[arg(long = "alpha-hyper", default_value_t = 10.0 / 1024.0)]
    alpha_hyper: f64,
    /// Number of training images (and test images unless `--test-subset` is given).
    #[arg(long, default_value_t = 10_000)]
    subset: usize,
    #[arg(long = "test-subset")]
    test_subset: Option<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Write the first test images and their reconstructions as PNG here.
    #[arg(long = "dump-images")]
    dump_images: Option<PathBuf>,
    #[arg(long = "dump-count", default_value_t = 8)]
    dump_count: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct TrainArgs {
    /// Catalog name or algebra JSON file.
    #[arg(long, default_value = "quaternion")]
    pub algebra: String,
    #[arg(long)]
    pub inputs: PathBuf,
    #[arg(long)]
    pub targets: PathBuf,
    #[arg(long)]
    pub hidden: usize,
    /// Hidden weight scale; `10 / input width` when omitted.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub inputs: PathBuf,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", content = "options", rename_all = "kebab-case")]
pub enum Command {
    Algebra(AlgebraCmd),
    Lorenz(LorenzExperiment),
    Cifar {
        experiment: AutoencoderExperiment,
        #[serde(skip)]
        dump: Option<PathBuf>,
        #[serde(skip)]
        dump_count: usize,
    },
    Train(TrainArgs),
    Predict(PredictArgs),
}

fn algebra_list(names: &[String]) -> Result<Vec<String>> {
    if names.iter().any(|n| n.eq_ignore_ascii_case("all")) {
        return Ok(LorenzExperiment::default().algebras);
    }
    let mut out = Vec::new();
    for n in names {
        let name: AlgebraName = n
            .parse()
            .map_err(|_| Error::Usage(format!("unknown algebra {n:?}")))?;
        if name == AlgebraName::Complex {
            return Err(Error::Usage("the benchmarks need real or four-dimensional algebras".into()));
        }
        if !out.iter().any(|o| o == name.as_str()) {
            out.push(name.as_str().to_string());
        }
    }
    if out.is_empty() {
        return Err(Error::Usage("no algebras selected".into()));
    }
    Ok(out)
}

fn positive(what: &str, v: usize) -> Result<usize> {
    if v == 0 {
        return Err(Error::Usage(format!("{what} must be at least 1")));
    }
    Ok(v)
}

/// Parses and validates a full argument vector, program name included.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Error::Info(e.to_string()),
        _ => Error::Usage(e.render().to_string()),
    })?;
    let jobs = match cli.jobs {
        Some(j) => positive("--jobs", j)?,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let command = match cli.command {
        CliCommand::Algebra(a) => Command::Algebra(a),
        CliCommand::Lorenz(a) => {
            if a.lmin == 0 || a.lmin > a.lmax {
                return Err(Error::Usage(format!("empty hidden-size range --lmin {} --lmax {}", a.lmin, a.lmax)));
            }
            if !(a.dt.is_finite() && a.dt > 0.0) {
                return Err(Error::Usage(format!("--dt must be positive, got {}", a.dt)));
            }
            Command::Lorenz(LorenzExperiment {
                algebras: algebra_list(&a.algebras)?,
                l_min: a.lmin,
                l_max: a.lmax,
                trials: positive("--trials", a.trials)?,
                seed: cli.seed,
                dt: a.dt,
                steps: a.steps,
                train_positions: a.train_size,
                window: positive("--window", a.window)?,
                normalize: a.normalize,
                ..LorenzExperiment::default()
            })
        }
        CliCommand::Cifar(a) => {
            for (flag, v) in [("--alpha-real", a.alpha_real), ("--alpha-hyper", a.alpha_hyper)] {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Usage(format!("{flag} must be finite and non-negative")));
                }
            }
            Command::Cifar {
                experiment: AutoencoderExperiment {
                    algebras: algebra_list(&a.algebras)?,
                    l_real: positive("--l-real", a.l_real)?,
                    l_hyper: positive("--l-hyper", a.l_hyper)?,
                    alpha_real: a.alpha_real,
                    alpha_hyper: a.alpha_hyper,
                    train_images: positive("--subset", a.subset)?,
                    test_images: positive("--test-subset", a.test_subset.unwrap_or(a.subset))?,
                    trials: positive("--trials", a.trials)?,
                    seed: cli.seed,
                    data_dir: a.data_dir,
                },
                dump: a.dump_images,
                dump_count: a.dump_count,
            }
        }
        CliCommand::Train(a) => {
            positive("--hidden", a.hidden)?;
            if cli.out.is_none() {
                return Err(Error::Usage("train needs --out for the model file".into()));
            }
            Command::Train(a)
        }
        CliCommand::Predict(a) => Command::Predict(a),
    };
    Ok(RunConfig {
        seed: cli.seed,
        jobs,
        out: cli.out,
        format: cli.format,
        command,
    })
}

fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).map_err(|e| Error::io(p, e))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_json(value: &impl Serialize, out: &Option<PathBuf>) -> Result<()> {
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).map_err(|e| Error::io(Path::new("-"), e))
}

/// Writes records as CSV with the configuration in `<out>.config.json`, or
/// as one JSON document holding both.
fn emit<R: CsvRow + Serialize>(cfg: &RunConfig, records: &[R], extra: Option<(&str, &[crate::records::WinCount])>) -> Result<()> {
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a, R> {
                config: &'a RunConfig,
                records: &'a [R],
                #[serde(skip_serializing_if = "Option::is_none")]
                wins: Option<&'a [crate::records::WinCount]>,
            }
            write_json(
                &Doc {
                    config: cfg,
                    records,
                    wins: extra.map(|e| e.1),
                },
                &cfg.out,
            )
        }
        Format::Csv => {
            let Some(path) = &cfg.out else {
                return emit_csv(records, &mut io::stdout().lock());
            };
            emit_csv_file(records, path)?;
            let config = sidecar(path, ".config.json");
            let text = serde_json::to_string_pretty(cfg)?;
            fs::write(&config, text).map_err(|e| Error::io(&config, e))?;
            if let Some((suffix, wins)) = extra {
                emit_csv_file(wins, &sidecar(path, suffix))?;
            }
            Ok(())
        }
    }
}

fn show_algebra(spec: &AlgebraSpec, cfg: &RunConfig) -> Result<()> {
    match cfg.format {
        Format::Json => write_json(&AlgebraDoc::from(spec), &cfg.out),
        Format::Csv => {
            let mut w = open_out(&cfg.out)?;
            write!(w, "{} (dimension {})\n{}", spec.name(), spec.dim(), render_table(spec))
                .map_err(|e| Error::io(Path::new("-"), e))
        }
    }
}

#[derive(Serialize)]
struct PropertyDoc<'a> {
    name: &'a str,
    commutative: bool,
    associative: bool,
    units_self_inverse: bool,
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    let progress = |msg: &str| eprintln!("{msg}");
    match &cfg.command {
        Command::Algebra(AlgebraCmd::List) => {
            let mut w = open_out(&cfg.out)?;
            for name in AlgebraName::ALL {
                writeln!(w, "{:<14} {:<14} dim {}", name.as_str(), name.label(), builtin(name).dim())
                    .map_err(|e| Error::io(Path::new("-"), e))?;
            }
            Ok(())
        }
        Command::Algebra(AlgebraCmd::Show { name }) => show_algebra(&algebra_from_arg(name)?, cfg),
        Command::Algebra(AlgebraCmd::Check { name }) => {
            let spec = algebra_from_arg(name)?;
            let r = check_properties(&spec);
            let doc = PropertyDoc {
                name: spec.name(),
                commutative: r.commutative,
                associative: r.associative,
                units_self_inverse: r.units_self_inverse,
            };
            match cfg.format {
                Format::Json => write_json(&doc, &cfg.out),
                Format::Csv => {
                    let mut w = open_out(&cfg.out)?;
                    writeln!(
                        w,
                        "{}: commutative={} associative={} units_self_inverse={}",
                        doc.name, doc.commutative, doc.associative, doc.units_self_inverse
                    )
                    .map_err(|e| Error::io(Path::new("-"), e))
                }
            }
        }
        Command::Lorenz(exp) => {
            let res = run_lorenz_experiment(exp, cfg.jobs, &progress)?;
            emit(cfg, &res.records, Some((".wins.csv", &res.wins)))
        }
        Command::Cifar {
            experiment,
            dump,
            dump_count,
        } => {
            let (train, test) = load_cifar_dir(&experiment.data_dir)?;
            let dump = dump.as_ref().map(|dir| ImageDump {
                dir: dir.clone(),
                count: *dump_count,
            });
            let records = run_autoencoder_experiment(experiment, &train, &test, cfg.jobs, dump.as_ref(), &progress)?;
            emit(cfg, &records, None)
        }
        Command::Train(a) => {
            let algebra = Arc::new(algebra_from_arg(&a.algebra)?);
            let x = read_matrix_csv(&a.inputs, algebra.clone())?;
            let t = read_matrix_csv(&a.targets, algebra.clone())?;
            let mut config = ElmConfig::new(algebra, x.cols(), a.hidden, t.cols(), cfg.seed);
            if let Some(alpha) = a.alpha {
                config = config.with_alpha(alpha);
            }
            let model = ElmModel::init(config)?.train(&x, &t)?;
            let path = cfg.out.as_ref().expect("validated");
            save_model(&model, path)?;
            eprintln!("saved {} model with tnp {} to {}", model.config().algebra.name(), model.config().tnp(), path.display());
            Ok(())
        }
        Command::Predict(a) => {
            let model = load_model(&a.model)?;
            let x = read_matrix_csv(&a.inputs, model.config().algebra.clone())?;
            let y = model.predict(&x)?;
            write_matrix_csv(&y, &mut *open_out(&cfg.out)?)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_args(argv).and_then(|cfg| run(&cfg)) {
        Ok(()) => 0,
        Err(Error::Info(text)) => {
            print!("{text}");
            0
        }
        Err(Error::Usage(text)) => {
            eprint!("{text}");
            if !text.ends_with('\n') {
                eprintln!();
            }
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
