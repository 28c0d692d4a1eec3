use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use rankdiv::config::{parse_radius_series, RunConfig, CONFIG_SCHEMA_VERSION};
use rankdiv::error::{Error, Result};
use rankdiv::fit::fit_sigmoid;
use rankdiv::ingest::{
    parse_iso8601, CorpusRecord, Placement, RecordReader, StudyWindow, SyntheticCorpus,
    SyntheticSpec, TextModel, DEFAULT_ORIGIN,
};
use rankdiv::pipeline::{run_grid, Dataset};
use rankdiv::plot::{self, Artifact, PlotKind};
use rankdiv::rankdiv::{rank_trajectory, RankMode};
use rankdiv::report::{self, parse_extent_label, CurveName, FitRow};
use rankdiv::scales::{GeoPoint, SpatialExtent, SpatialScale, TemporalScale};
use rankdiv::stats::{self, ModelKind, RegressionReport, RelevanceReport, SpatialPredictor};
use rankdiv::tokenize::{ClassFilter, TokenClass};
use rankdiv::tokenstats::{class_rank_diversity, leaderboard, DEFAULT_TOP_K};

#[derive(Parser)]
#[command(name = "rankdiv", about = "Rank diversity of N-grams across scales")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus as line-delimited JSON.
    Synth(SynthArgs),
    /// Leaderboard (and optionally rank diversity) of one token class.
    Tokens(TokensArgs),
    /// Rank-diversity curve of one cell.
    Diversity(DiversityArgs),
    /// Fit sigmoids to curve CSVs.
    Fit(FitArgs),
    /// Scale relevance from fits CSVs.
    Relevance(RelevanceArgs),
    /// Regress μ on the three scales.
    Regress(RegressArgs),
    /// Render an SVG figure from CSV artifacts.
    Plot(PlotArgs),
    /// Run the whole grid from a config file.
    RunGrid(RunGridArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Zipf,
    RandomTyping,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum, default_value = "zipf")]
    model: ModelArg,
    #[arg(long, default_value_t = 1000)]
    vocab: u32,
    #[arg(long, default_value_t = 1.0)]
    exponent: f64,
    #[arg(long, default_value_t = 5)]
    alphabet: u8,
    #[arg(long, default_value_t = 0.2)]
    space_prob: f64,
    #[arg(long, default_value_t = 12)]
    tokens_per_record: u32,
    #[arg(long, default_value_t = 100)]
    records_per_bin: u32,
    #[arg(long, default_value_t = 10)]
    bins: u32,
    #[arg(long, default_value_t = 3)]
    bin_hours: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// First bin start, ISO-8601 (default 2014-01-01).
    #[arg(long)]
    origin: Option<String>,
    /// Placement center `lat,lon` (default Mexico City).
    #[arg(long)]
    center: Option<String>,
    #[arg(long)]
    min_km: Option<f64>,
    #[arg(long)]
    max_km: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(short, long = "out", visible_alias = "output")]
    output: Option<PathBuf>,
}

/// Where the records come from. `--config` supplies defaults for the rest.
#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short, long = "input")]
    inputs: Vec<PathBuf>,
    /// Study window: start and exclusive end, ISO-8601.
    #[arg(long, num_args = 2, value_names = ["START", "END"])]
    window: Option<Vec<String>>,
    #[arg(long)]
    country: Option<String>,
    #[arg(long)]
    center: Option<String>,
}

fn window_pair(flag: &Option<Vec<String>>) -> Option<[String; 2]> {
    flag.as_ref().map(|w| [w[0].clone(), w[1].clone()])
}

struct DataSource {
    inputs: Vec<PathBuf>,
    window: StudyWindow,
    country: String,
    base: Option<RunConfig>,
}

impl DataArgs {
    fn resolve(&self) -> Result<DataSource> {
        let base = self.config.as_deref().map(RunConfig::from_file).transpose()?;
        let inputs = if self.inputs.is_empty() {
            base.as_ref().map(|c| c.inputs.clone()).unwrap_or_default()
        } else {
            self.inputs.clone()
        };
        if inputs.is_empty() {
            return Err(Error::Config("no input files; pass --input".into()));
        }
        let [start, end] = window_pair(&self.window)
            .or_else(|| base.as_ref().map(|c| c.window.clone()))
            .ok_or_else(|| Error::Config("missing --window".into()))?;
        let window = StudyWindow::from_iso(&start, &end)?;
        let country = self
            .country
            .clone()
            .or_else(|| base.as_ref().map(|c| c.country.clone()))
            .unwrap_or_else(|| "corpus".to_owned());
        Ok(DataSource {
            inputs,
            window,
            country,
            base,
        })
    }

    fn center(&self, src: &DataSource) -> Result<GeoPoint> {
        let mut cfg = src.base.clone().unwrap_or_else(|| {
            RunConfig::new(src.inputs.clone(), [String::new(), String::new()], &src.country, ".".into())
        });
        cfg.country = src.country.clone();
        if let Some(c) = &self.center {
            cfg.center = Some(c.clone());
        }
        cfg.center_point()
    }
}

fn read_records(src: &DataSource) -> Result<Vec<CorpusRecord>> {
    let mut out = Vec::new();
    for path in &src.inputs {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = RecordReader::new(io::BufReader::new(file), src.window);
        for rec in reader.by_ref() {
            out.push(rec.map_err(|e| Error::io(path, e))?);
        }
        report_skipped(path, reader.skipped(), reader.errors().first().map(|e| e.to_string()));
    }
    Ok(out)
}

fn report_skipped(path: &Path, skipped: u64, first: Option<String>) {
    if skipped > 0 {
        eprintln!(
            "{}: skipped {skipped} invalid line(s){}",
            path.display(),
            first.map(|e| format!(", first: {e}")).unwrap_or_default()
        );
    }
}

#[derive(Args)]
struct TokensArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long = "token-class", value_parser = parse_class)]
    class: TokenClass,
    #[arg(short = 'k', long, default_value_t = DEFAULT_TOP_K)]
    top: usize,
    /// Also write the class's rank-diversity curve at this Δt (hours).
    #[arg(long = "dt-hours")]
    dt: Option<u32>,
    #[arg(long, default_value = "intersect")]
    rank_mode: RankMode,
    #[arg(short, long, default_value = ".")]
    output_dir: PathBuf,
}

fn parse_class(s: &str) -> std::result::Result<TokenClass, String> {
    s.parse()
}

#[derive(Args)]
struct DiversityArgs {
    #[command(flatten)]
    data: DataArgs,
    /// N-gram length.
    #[arg(short = 'n', long = "ngram", default_value_t = 1)]
    n: usize,
    /// Circle radius in km, or `all` for the whole country.
    #[arg(long = "radius-km", default_value = "all")]
    radius: String,
    #[arg(long = "dt-hours", default_value_t = 24)]
    dt_hours: u32,
    /// Records drawn from the circle (default: all of them).
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "intersect")]
    rank_mode: RankMode,
    /// Token classes forming N-grams.
    #[arg(long = "token-class", value_parser = parse_class, default_values = ["word"])]
    classes: Vec<TokenClass>,
    /// Write the rank trajectory of this N-gram (space-separated parts).
    #[arg(long = "trajectory")]
    trajectories: Vec<String>,
    #[arg(short, long, default_value = ".")]
    output_dir: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// Curve CSVs named `<country>_N<n>_r<radius>_dt<hours>.csv`.
    #[arg(required = true)]
    curves: Vec<PathBuf>,
    /// Radius (km) recorded for whole-country curves.
    #[arg(long)]
    whole_country_radius: Option<f64>,
    /// Output file (default `fits_<country>.csv` next to the first curve).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RelevanceArgs {
    /// Fits CSVs named `fits_<country>.csv`.
    #[arg(required = true)]
    fits: Vec<PathBuf>,
    #[arg(short, long, default_value = "relevance.csv")]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelChoice {
    Linear,
    Multiplicative,
    Both,
}

#[derive(Args)]
struct RegressArgs {
    #[arg(required = true)]
    fits: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    model: ModelChoice,
    #[arg(long = "spatial-predictor", default_value = "log10")]
    spatial: SpatialPredictor,
    #[arg(short, long, default_value = "regression.csv")]
    output: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    kind: PlotKind,
    #[arg(required = true)]
    artifacts: Vec<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct RunGridArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short, long = "input")]
    inputs: Vec<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["START", "END"])]
    window: Option<Vec<String>>,
    #[arg(long)]
    country: Option<String>,
    #[arg(long)]
    center: Option<String>,
    /// Radius series, e.g. `3x2^m:9`.
    #[arg(long = "radius-series")]
    radii: Option<String>,
    /// Explicit radii, comma separated (instead of a series).
    #[arg(long = "radius-km", value_delimiter = ',', conflicts_with = "radii")]
    radius_km: Vec<f64>,
    #[arg(long)]
    no_whole_country: bool,
    #[arg(long)]
    whole_country_radius: Option<f64>,
    #[arg(long = "dt-hours", value_delimiter = ',')]
    dt_hours: Vec<u32>,
    #[arg(long = "ngram", value_delimiter = ',')]
    ngram: Vec<usize>,
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rank_mode: Option<RankMode>,
    #[arg(long = "spatial-predictor")]
    spatial: Option<SpatialPredictor>,
    #[arg(short, long)]
    output_dir: Option<PathBuf>,
    /// Print the merged config and exit.
    #[arg(long)]
    print_config: bool,
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    report::write_atomic(path, contents).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path) -> impl Fn(report::ReportError) -> Error + '_ {
    move |e| Error::Data(format!("{}: {e}", path.display()))
}

fn synth(args: SynthArgs) -> Result<()> {
    let model = match args.model {
        ModelArg::Zipf => TextModel::Zipf {
            vocabulary_size: args.vocab,
            exponent: args.exponent,
        },
        ModelArg::RandomTyping => TextModel::RandomTyping {
            alphabet_size: args.alphabet,
            space_probability: args.space_prob,
        },
    };
    let mut placement = Placement::default();
    if let Some(c) = &args.center {
        placement.center = c.parse().map_err(|e| Error::Config(format!("center: {e}")))?;
    }
    placement.min_km = args.min_km.unwrap_or(placement.min_km);
    placement.max_km = args.max_km.unwrap_or(placement.max_km);
    let origin = match &args.origin {
        Some(s) => parse_iso8601(s)?,
        None => DEFAULT_ORIGIN,
    };
    let spec = SyntheticSpec {
        model,
        tokens_per_record: args.tokens_per_record,
        records_per_bin: args.records_per_bin,
        bins: args.bins,
        seed: args.seed,
        origin,
        bin_hours: args.bin_hours,
        placement,
    };
    let corpus = SyntheticCorpus::new(spec)?;
    match &args.output {
        Some(path) => {
            let mut buf = Vec::new();
            corpus.write_jsonl(&mut buf).map_err(|e| Error::io(path, e))?;
            write_file(path, &buf)
        }
        None => {
            let stdout = io::stdout();
            corpus
                .write_jsonl(BufWriter::new(stdout.lock()))
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn tokens(args: TokensArgs) -> Result<()> {
    let src = args.data.resolve()?;
    let records = read_records(&src)?;
    let board = leaderboard(&records, args.class, args.top, &src.country)
        .map_err(|e| Error::Config(e.to_string()))?;
    let name = format!("tokens_{}_{}.csv", args.class, src.country);
    let text = report::leaderboard_csv(&board).map_err(|e| Error::Data(e.to_string()))?;
    write_file(&args.output_dir.join(name), text.as_bytes())?;
    if let Some(dt) = args.dt {
        let scale = TemporalScale::new(dt, src.window.start(), src.window.span_seconds())?;
        let curve = class_rank_diversity(&records, args.class, &scale, args.rank_mode)
            .map_err(|e| Error::Data(e.to_string()))?;
        let name = format!("diversity_{}_{}_dt{dt}.csv", args.class, src.country);
        write_file(&args.output_dir.join(name), report::curve_csv(&curve).as_bytes())?;
    }
    Ok(())
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

fn diversity(args: DiversityArgs) -> Result<()> {
    let src = args.data.resolve()?;
    let center = args.data.center(&src)?;
    let extent = parse_extent_label(&args.radius)
        .ok_or_else(|| Error::Config(format!("radius `{}`: expected km or `all`", args.radius)))?;
    let scale = TemporalScale::new(args.dt_hours, src.window.start(), src.window.span_seconds())?;
    let dataset = Dataset::load(&src.inputs, &src.window, ClassFilter::any_of(&args.classes))?;
    if dataset.skipped() > 0 {
        report_skipped(
            &src.inputs[0],
            dataset.skipped(),
            dataset.errors().first().cloned(),
        );
    }
    let spatial = match extent {
        SpatialExtent::RadiusKm(r) => SpatialScale::circle(center, r)?,
        SpatialExtent::WholeCountry => SpatialScale::whole_country(center),
    };
    let selection = match args.sample_size {
        Some(n) => dataset.sample(&spatial, n, args.seed)?,
        None => dataset.population(&spatial),
    };
    if selection.is_empty() {
        return Err(Error::Data(format!("no records within {extent}")));
    }
    let index = dataset.ngram_index(&selection, args.n)?;
    let tables = index.tables(&scale)?;
    let curve = rankdiv::rankdiv::rank_diversity(&tables, args.rank_mode)?;
    let name = CurveName {
        country: src.country.clone(),
        n: args.n,
        extent,
        dt_hours: args.dt_hours,
    };
    write_file(&args.output_dir.join(name.file_name()), report::curve_csv(&curve).as_bytes())?;
    if !args.trajectories.is_empty() {
        let string_tables = index.string_tables(&dataset, &tables);
        for item in &args.trajectories {
            let parts: Vec<&str> = item.split_whitespace().collect();
            let key = parts.join(" ");
            if index.id_of(&dataset, &parts).is_none() {
                eprintln!("`{key}` never occurs in the selection; its trajectory is empty");
            }
            let traj = rank_trajectory(&string_tables, &key);
            let file = format!("trajectory_{}_{}.csv", src.country, slug(&key));
            write_file(&args.output_dir.join(file), report::trajectory_csv(&traj).as_bytes())?;
        }
    }
    Ok(())
}

fn country_of_fits(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(|s| s.strip_prefix("fits_").unwrap_or(s).to_owned())
        .unwrap_or_else(|| "corpus".to_owned())
}

fn fit(args: FitArgs) -> Result<()> {
    let mut rows = Vec::with_capacity(args.curves.len());
    let mut country: Option<String> = None;
    for path in &args.curves {
        let file_name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
        let name = CurveName::parse(file_name).ok_or_else(|| {
            Error::Config(format!(
                "{}: expected a name like `mexico_N1_r3_dt24.csv`",
                path.display()
            ))
        })?;
        match &country {
            Some(c) if *c != name.country => {
                return Err(Error::Config(format!(
                    "curves from several countries ({c}, {}); fit them separately",
                    name.country
                )))
            }
            _ => country = Some(name.country.clone()),
        }
        let curve = report::parse_curve_csv(&read_text(path)?).map_err(csv_err(path))?;
        let fit = fit_sigmoid(&curve).map_err(|e| Error::Cell {
            cell: file_name.to_owned(),
            source: Box::new(e.into()),
        })?;
        let whole = match (name.extent, args.whole_country_radius) {
            (SpatialExtent::WholeCountry, None) => {
                return Err(Error::Config(
                    "whole-country curves need --whole-country-radius".into(),
                ))
            }
            (_, r) => r.unwrap_or(f64::NAN),
        };
        rows.push(FitRow::new(name.n, name.extent, whole, name.dt_hours, &fit));
    }
    rows.sort_by(|a, b| {
        (a.n, a.radius_km, a.dt_hours)
            .partial_cmp(&(b.n, b.radius_km, b.dt_hours))
            .expect("radii are finite")
    });
    let country = country.expect("at least one curve");
    let output = args.output.unwrap_or_else(|| {
        args.curves[0]
            .parent()
            .unwrap_or(Path::new("."))
            .join(format!("fits_{country}.csv"))
    });
    let text = report::fits_csv(&rows).map_err(|e| Error::Data(e.to_string()))?;
    write_file(&output, text.as_bytes())
}

fn load_grids(paths: &[PathBuf]) -> Result<Vec<stats::MuGrid>> {
    paths
        .iter()
        .map(|p| {
            let rows = report::parse_fits_csv(&read_text(p)?).map_err(csv_err(p))?;
            report::mu_grid_from_fits(&country_of_fits(p), &rows).map_err(csv_err(p))
        })
        .collect()
}

fn relevance(args: RelevanceArgs) -> Result<()> {
    let reports = load_grids(&args.fits)?
        .iter()
        .map(RelevanceReport::compute)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for r in &reports {
        println!(
            "{}: eta(N) = {:.4}, eta(radius) = {:.4}, eta(dt) = {:.4}",
            r.country, r.grammatical, r.spatial, r.temporal
        );
    }
    write_file(&args.output, report::relevance_csv(&reports).as_bytes())
}

fn regress(args: RegressArgs) -> Result<()> {
    let kinds: &[ModelKind] = match args.model {
        ModelChoice::Linear => &[ModelKind::Linear],
        ModelChoice::Multiplicative => &[ModelKind::Multiplicative],
        ModelChoice::Both => &[ModelKind::Linear, ModelKind::Multiplicative],
    };
    let mut rows: Vec<(String, RegressionReport)> = Vec::new();
    for grid in load_grids(&args.fits)? {
        for &kind in kinds {
            let rep = stats::regress(&grid, kind, args.spatial)?;
            println!(
                "{} {}: F = {:.1} on ({}, {}) df, p {}",
                grid.country,
                kind.as_str(),
                rep.f_statistic,
                rep.df1,
                rep.df2,
                match stats::format_p(rep.f_p) {
                    p if p.starts_with('<') => p,
                    p => format!("= {p}"),
                }
            );
            rows.push((grid.country.clone(), rep));
        }
    }
    let text = report::regression_csv(&rows).map_err(|e| Error::Data(e.to_string()))?;
    write_file(&args.output, text.as_bytes())
}

fn plot_cmd(args: PlotArgs) -> Result<()> {
    let artifacts = args
        .artifacts
        .iter()
        .map(|p| {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("series");
            let label = stem.strip_prefix("fits_").unwrap_or(stem);
            Artifact::parse(label, &read_text(p)?).map_err(|e| Error::Data(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let svg = plot::render(args.kind, &artifacts).map_err(|e| match e {
        plot::PlotError::Mismatch { .. } => Error::Config(e.to_string()),
        _ => Error::Data(e.to_string()),
    })?;
    write_file(&args.output, svg.as_bytes())
}

fn merged_config(args: &RunGridArgs) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::from_file(path)?,
        None => {
            RunConfig::new(
                args.inputs.clone(),
                window_pair(&args.window)
                    .ok_or_else(|| Error::Config("pass --config or --window".into()))?,
                args.country
                    .as_deref()
                    .ok_or_else(|| Error::Config("pass --config or --country".into()))?,
                args.output_dir
                    .clone()
                    .ok_or_else(|| Error::Config("pass --config or --output-dir".into()))?,
            )
        }
    };
    if !args.inputs.is_empty() {
        cfg.inputs = args.inputs.clone();
    }
    if let Some(w) = window_pair(&args.window) {
        cfg.window = w;
    }
    if let Some(c) = &args.country {
        cfg.country = c.clone();
    }
    if let Some(c) = &args.center {
        cfg.center = Some(c.clone());
    }
    if let Some(r) = &args.radii {
        cfg.radii_km = parse_radius_series(r, 9)?;
    }
    if !args.radius_km.is_empty() {
        cfg.radii_km = args.radius_km.clone();
    }
    if args.no_whole_country {
        cfg.whole_country = false;
    }
    if let Some(r) = args.whole_country_radius {
        cfg.whole_country_radius_km = Some(r);
    }
    if !args.dt_hours.is_empty() {
        cfg.dt_hours = args.dt_hours.clone();
    }
    if !args.ngram.is_empty() {
        cfg.ngram = args.ngram.clone();
    }
    if let Some(n) = args.sample_size {
        cfg.sample_size = Some(n);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(m) = args.rank_mode {
        cfg.rank_mode = m;
    }
    if let Some(p) = args.spatial {
        cfg.spatial_predictor = p;
    }
    if let Some(o) = &args.output_dir {
        cfg.output_dir = o.clone();
    }
    Ok(cfg)
}

fn run_grid_cmd(args: RunGridArgs, threads: Option<usize>) -> Result<()> {
    let mut cfg = merged_config(&args)?;
    if threads.is_some() {
        cfg.threads = threads;
    }
    if args.print_config {
        print!("{}", cfg.to_toml_string());
        return Ok(());
    }
    let run = run_grid(&cfg)?;
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    if run.records_skipped > 0 {
        eprintln!("skipped {} invalid line(s)", run.records_skipped);
    }
    println!(
        "{} cells from {} records (sample size {}) written to {}",
        run.cells.len(),
        run.records_loaded,
        run.sample_size,
        cfg.output_dir.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if cli.threads == Some(0) {
        return Err(Error::Config("--threads must be positive".into()));
    }
    if let (Some(t), false) = (cli.threads, matches!(cli.command, Command::RunGrid(_))) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Synth(a) => synth(a),
        Command::Tokens(a) => tokens(a),
        Command::Diversity(a) => diversity(a),
        Command::Fit(a) => fit(a),
        Command::Relevance(a) => relevance(a),
        Command::Regress(a) => regress(a),
        Command::Plot(a) => plot_cmd(a),
        Command::RunGrid(a) => run_grid_cmd(a, cli.threads),
    }
}

fn main() -> ExitCode {
    let version = format!("{} (config schema {CONFIG_SCHEMA_VERSION})", rankdiv::VERSION);
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
