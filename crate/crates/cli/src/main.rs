//! synteval: evaluate synthetic tabular data against real train/holdout
//! splits.
//!
//! Exit codes: 0 success, 1 validation or configuration error, 2 I/O or file
//! format error, 3 evaluation finished but at least one stage failed (the
//! report is still written).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use synteval::baselines::{synthesize, SynthesisMethod, SynthesizerSpec};
use synteval::data::{dataset_from_raw, load_csv, read_raw_csv, FillPolicy};
use synteval::fidelity::{fidelity_report, histogram_diff, FidelityOptions};
use synteval::preprocess::{
    cluster_customers, filter_positive, merge_retail_tables, remove_infrequent_products, split,
    DerivedFeatureSpec, SplitSpec,
};
use synteval::privacy::{privacy_report, DistanceConfig};
use synteval::report::evaluate_all;
use synteval::utility::{
    association_report, utility_report, BasketColumns, ClassificationTask, TreeParams,
};
use synteval::{Dataset, Error, EvaluationConfig, TableSchema};

#[derive(Parser)]
#[command(
    name = "synteval",
    version,
    about = "Evaluate synthetic tabular data for fidelity, utility, and privacy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merge and clean raw retail source tables into one typed CSV
    Preprocess(PreprocessArgs),
    /// Split a dataset into train / holdout / eval partitions
    Split(SplitArgs),
    /// Marginal and association fidelity of one dataset against another
    Fidelity(FidelityArgs),
    /// Train classifiers on real and synthetic data, score on eval rows
    Utility(UtilityArgs),
    /// Frequent itemsets and association rules per dataset
    Associations(AssociationsArgs),
    /// Distance-to-closest-record privacy summary
    Privacy(PrivacyArgs),
    /// Generate a reference synthetic dataset from training data
    Baseline(BaselineArgs),
    /// Run every stage and write the combined report
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct PreprocessArgs {
    /// Transaction-level CSV (one row per purchased item)
    #[arg(long)]
    transactions: PathBuf,
    /// Household demographics CSV; requires --products too
    #[arg(long, requires = "products")]
    demographics: Option<PathBuf>,
    /// Product catalog CSV; requires --demographics too
    #[arg(long, requires = "demographics")]
    products: Option<PathBuf>,
    /// Schema JSON for the merged table
    #[arg(long)]
    schema: PathBuf,
    /// Drop rows whose product occurs fewer than this many times
    #[arg(long, default_value_t = 20)]
    min_product_count: usize,
    /// Column joining transactions to demographics
    #[arg(long, default_value = "household_key")]
    household_col: String,
    /// Column joining transactions to the product catalog
    #[arg(long, default_value = "product_id")]
    product_col: String,
    #[arg(long, default_value = "quantity")]
    quantity_col: String,
    #[arg(long, default_value = "sales_value")]
    sales_col: String,
    /// Demographic columns to fold into a customer_cluster label
    #[arg(long, value_delimiter = ',')]
    cluster_by: Vec<String>,
    /// Replace blank cells (numeric: column median, categorical: __missing__)
    #[arg(long)]
    fill_missing: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    /// Train, holdout, eval fractions; must sum to 1
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 3,
        default_value = "0.4,0.4,0.2"
    )]
    ratios: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep all rows sharing this column's value in the same partition
    #[arg(long)]
    group_by: Option<String>,
    /// Directory receiving train.csv, holdout.csv, and eval.csv
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct FidelityArgs {
    #[arg(long)]
    train: PathBuf,
    /// Dataset compared against train (synthetic or holdout)
    #[arg(long)]
    other: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    /// JSON array of derived-feature definitions
    #[arg(long)]
    derived: Option<PathBuf>,
    /// Report Wasserstein distances in train-range units
    #[arg(long)]
    scale_numeric: bool,
    #[arg(long)]
    out: PathBuf,
    /// Write per-column histogram-difference CSVs here
    #[arg(long)]
    plots_dir: Option<PathBuf>,
    /// Histogram bins for plot data
    #[arg(long, default_value_t = 50)]
    bins: usize,
}

#[derive(Args)]
struct UtilityArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    holdout: PathBuf,
    #[arg(long)]
    synthetic: PathBuf,
    #[arg(long)]
    eval: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    /// Classification task JSON (features, label rule, optional assembly)
    #[arg(long)]
    task: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = TreeParams::default().n_trees)]
    trees: usize,
    #[arg(long, default_value_t = TreeParams::default().max_depth)]
    max_depth: usize,
    #[arg(long, default_value_t = TreeParams::default().min_leaf)]
    min_leaf: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AssociationsArgs {
    /// Comma-separated name=path pairs, e.g. train=T.csv,synth=S.csv
    #[arg(long)]
    datasets: String,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long, default_value = "household_key")]
    household_col: String,
    #[arg(long, default_value = "week_no")]
    week_col: String,
    #[arg(long, default_value = "product_id")]
    product_col: String,
    #[arg(long, default_value_t = 0.01)]
    min_support: f64,
    #[arg(long, default_value_t = 0.1)]
    min_confidence: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PrivacyArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    holdout: PathBuf,
    #[arg(long)]
    synthetic: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineMethod {
    Copy,
    NoisyCopy,
    Independent,
    Copula,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long, value_enum)]
    method: BaselineMethod,
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noise half-width as a fraction of each column's range (noisy-copy)
    #[arg(long, default_value_t = 0.05)]
    noise_scale: f64,
    /// Rows to generate; defaults to the training row count
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    train: PathBuf,
    #[arg(long)]
    holdout: PathBuf,
    #[arg(long)]
    eval: PathBuf,
    #[arg(long)]
    synthetic: PathBuf,
    #[arg(long)]
    schema: PathBuf,
    /// Evaluation config JSON (seed, task, basket columns, ...)
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Also render the report as Markdown here
    #[arg(long)]
    markdown: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            std::process::exit(exit_code(&err));
        }
    }
}

// Exit 2 marks problems reading or decoding input files; everything else
// (bad config, semantic validation) is exit 1.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. }
        | Error::Format { .. }
        | Error::EmptyFile { .. }
        | Error::TypeParse { .. }
        | Error::MissingValue { .. }
        | Error::MissingColumn { .. } => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Preprocess(args) => cmd_preprocess(args),
        Command::Split(args) => cmd_split(args),
        Command::Fidelity(args) => cmd_fidelity(args),
        Command::Utility(args) => cmd_utility(args),
        Command::Associations(args) => cmd_associations(args),
        Command::Privacy(args) => cmd_privacy(args),
        Command::Baseline(args) => cmd_baseline(args),
        Command::Evaluate(args) => cmd_evaluate(args),
    }
}

fn load(path: &Path, schema: &TableSchema) -> Result<Dataset, Error> {
    load_csv(path, schema, FillPolicy::Reject)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    let mut body = serde_json::to_string_pretty(value).map_err(|e| Error::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    body.push('\n');
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn cmd_preprocess(args: PreprocessArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let transactions = read_raw_csv(&args.transactions)?;
    let merged = match (&args.demographics, &args.products) {
        (Some(demographics), Some(products)) => merge_retail_tables(
            &transactions,
            &read_raw_csv(demographics)?,
            &read_raw_csv(products)?,
            &args.household_col,
            &args.product_col,
        )?,
        _ => transactions,
    };
    let fill = if args.fill_missing {
        FillPolicy::Fill
    } else {
        FillPolicy::Reject
    };
    let mut dataset = dataset_from_raw(&merged, &schema, fill)?;
    dataset = filter_positive(&dataset, &args.quantity_col, &args.sales_col)?;
    dataset = remove_infrequent_products(&dataset, &args.product_col, args.min_product_count)?;
    if !args.cluster_by.is_empty() {
        dataset = cluster_customers(&dataset, &args.cluster_by)?;
    }
    dataset.write_csv(&args.out)?;
    eprintln!(
        "wrote {} rows to {}",
        dataset.row_count(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_split(args: SplitArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let dataset = load(&args.input, &schema)?;
    let ratios: [f64; 3] = args
        .ratios
        .clone()
        .try_into()
        .map_err(|_| Error::InvalidRatios("expected exactly three ratios".to_string()))?;
    let mut spec = SplitSpec::new(ratios, args.seed)?;
    if let Some(column) = &args.group_by {
        spec = spec.with_group_by(column);
    }
    let bundle = split(&dataset, &spec)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    for (name, part) in [
        ("train.csv", &bundle.train),
        ("holdout.csv", &bundle.holdout),
        ("eval.csv", &bundle.eval),
    ] {
        let path = args.out_dir.join(name);
        part.write_csv(&path)?;
        eprintln!("wrote {} rows to {}", part.row_count(), path.display());
    }
    Ok(0)
}

fn cmd_fidelity(args: FidelityArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let train = load(&args.train, &schema)?;
    let other = load(&args.other, &schema)?;
    let derived: Vec<DerivedFeatureSpec> = match &args.derived {
        Some(path) => read_json(path)?,
        None => Vec::new(),
    };
    let options = FidelityOptions {
        scale_numeric: args.scale_numeric,
    };
    let report = fidelity_report(&train, &other, &derived, options)?;
    write_json(&args.out, &report)?;
    if let Some(dir) = &args.plots_dir {
        write_histogram_plots(dir, &train, &other, args.bins)?;
    }
    Ok(0)
}

fn write_histogram_plots(
    dir: &Path,
    train: &Dataset,
    other: &Dataset,
    bins: usize,
) -> Result<(), Error> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for name in train.schema().numeric_names() {
        let diff = histogram_diff(train.numeric(&name)?, other.numeric(&name)?, bins)?;
        let mut body = String::from("bin_edge_lo,bin_edge_hi,train_freq,other_freq,diff\n");
        for i in 0..diff.diff.len() {
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                diff.edges[i],
                diff.edges[i + 1],
                diff.train_freq[i],
                diff.other_freq[i],
                diff.diff[i]
            ));
        }
        let path = dir.join(format!("{name}.csv"));
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn cmd_utility(args: UtilityArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let train = load(&args.train, &schema)?;
    let holdout = load(&args.holdout, &schema)?;
    let synthetic = load(&args.synthetic, &schema)?;
    let eval = load(&args.eval, &schema)?;
    let task = ClassificationTask::from_json_file(&args.task)?;
    let params = TreeParams {
        n_trees: args.trees,
        max_depth: args.max_depth,
        min_leaf: args.min_leaf,
    };
    let report = utility_report(
        &train, &holdout, &synthetic, &eval, &task, params, args.seed,
    )?;
    write_json(&args.out, &report)?;
    Ok(0)
}

fn cmd_associations(args: AssociationsArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let mut named = Vec::new();
    for pair in args.datasets.split(',') {
        let (name, path) = pair.split_once('=').ok_or_else(|| {
            Error::InvalidSpec(format!(
                "dataset entry `{pair}` is not of the form name=path"
            ))
        })?;
        named.push((name.to_string(), load(Path::new(path), &schema)?));
    }
    let columns = BasketColumns {
        household: args.household_col,
        week: args.week_col,
        product: args.product_col,
    };
    let report = association_report(&named, &columns, args.min_support, args.min_confidence)?;
    write_json(&args.out, &report)?;
    Ok(0)
}

fn cmd_privacy(args: PrivacyArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let train = load(&args.train, &schema)?;
    let holdout = load(&args.holdout, &schema)?;
    let synthetic = load(&args.synthetic, &schema)?;
    let config = DistanceConfig::fit(&train)?;
    let report = privacy_report(&synthetic, &train, &holdout, &config)?;
    write_json(&args.out, &report)?;
    Ok(0)
}

fn cmd_baseline(args: BaselineArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let train = load(&args.train, &schema)?;
    let method = match args.method {
        BaselineMethod::Copy => SynthesisMethod::Copy,
        BaselineMethod::NoisyCopy => SynthesisMethod::NoisyCopy {
            noise_scale: args.noise_scale,
        },
        BaselineMethod::Independent => SynthesisMethod::IndependentMarginals,
        BaselineMethod::Copula => SynthesisMethod::CopulaLite,
    };
    let spec = SynthesizerSpec {
        method,
        seed: args.seed,
        rows: args.rows,
    };
    let synthetic = synthesize(&train, &spec)?;
    synthetic.write_csv(&args.out)?;
    eprintln!(
        "wrote {} synthetic rows to {}",
        synthetic.row_count(),
        args.out.display()
    );
    Ok(0)
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<i32, Error> {
    let schema = TableSchema::from_json_file(&args.schema)?;
    let config = EvaluationConfig::from_json_file(&args.config)?;
    let train = load(&args.train, &schema)?;
    let holdout = load(&args.holdout, &schema)?;
    let eval = load(&args.eval, &schema)?;
    let synthetic = load(&args.synthetic, &schema)?;

    let report = evaluate_all(&train, &holdout, Some(&eval), Some(&synthetic), &config);
    std::fs::write(&args.out, report.render_json()).map_err(|e| Error::io(&args.out, e))?;
    if let Some(path) = &args.markdown {
        std::fs::write(path, synteval::render_markdown(&report)).map_err(|e| Error::io(path, e))?;
    }
    if report.any_stage_failed() {
        eprintln!("one or more stages failed; see the report for details");
        return Ok(3);
    }
    Ok(0)
}
