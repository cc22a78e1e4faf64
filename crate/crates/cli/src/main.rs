mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "fwdlda", version, about = "Forward variable selection and uncorrelated LDA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SelectArg {
    Pillai,
    Wilks,
    WilksBonferroni,
    None,
}

impl SelectArg {
    fn criterion(self) -> Option<fwdlda::Criterion> {
        match self {
            SelectArg::Pillai => Some(fwdlda::Criterion::Pillai),
            SelectArg::Wilks => Some(fwdlda::Criterion::Wilks),
            SelectArg::WilksBonferroni => Some(fwdlda::Criterion::WilksBonferroni),
            SelectArg::None => None,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScenarioArg {
    PartialF,
    Type1,
    LambdaZero,
    Bench,
}

/// Options shared by commands that read a labelled table.
#[derive(clap::Args, Debug)]
pub struct InputArgs {
    /// Training CSV with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Name of the class label column.
    #[arg(long)]
    label: String,
    /// Columns to ignore, comma separated.
    #[arg(long, default_value = "")]
    drop: String,
    /// Angle columns encoded as cos/sin, as `name` or `name:period` (default period 360).
    #[arg(long, default_value = "")]
    cyclic: String,
    /// Columns forced to one-hot encoding even when numeric.
    #[arg(long, default_value = "")]
    categorical: String,
    #[arg(long, value_enum, default_value = "pillai")]
    select: SelectArg,
    /// Significance level for the selection criterion.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the preprocessing recipe, select variables and fit ULDA.
    Train {
        #[command(flatten)]
        input: InputArgs,
        /// `empirical`, a comma list in class order, or `label=value` pairs.
        #[arg(long, default_value = "empirical")]
        priors: String,
        /// Cost CSV: header of true labels, each row led by the predicted label.
        #[arg(long)]
        costs: Option<PathBuf>,
        /// Model JSON; the recipe and selection report are written beside it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify rows with a trained model.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        /// Append one posterior probability column per class.
        #[arg(long)]
        posterior: bool,
        /// Cost CSV overriding the one stored with the model.
        #[arg(long)]
        costs: Option<PathBuf>,
        /// Label column used to report accuracy, if present.
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// K-fold cross-validation with preprocessing and selection refitted per fold.
    Crossval {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Per-fold metrics CSV; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte-Carlo study and write its CSV output.
    Simulate {
        #[arg(long, value_enum)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Replicates; defaults to the study's standard size.
        #[arg(long)]
        reps: Option<usize>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Significance level for the type-I study.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Noise-column counts (type1) or feature counts (bench), comma separated.
        #[arg(long)]
        m_list: Option<String>,
        /// Observations per benchmark dataset.
        #[arg(long, default_value_t = fwdlda_experiments::bench::DEFAULT_N)]
        n: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train { input, priors, costs, out } => commands::train(&input, &priors, costs.as_deref(), &out),
        Command::Predict { model, data, posterior, costs, label, out } => {
            commands::predict(&model, &data, posterior, costs.as_deref(), label.as_deref(), &out)
        }
        Command::Crossval { input, folds, seed, out } => commands::crossval(&input, folds, seed, out.as_deref()),
        Command::Simulate { scenario, seed, reps, out_dir, alpha, m_list, n } => {
            commands::simulate(scenario, seed, reps, &out_dir, alpha, m_list.as_deref(), n)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
