use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use netph_core::{
    bottleneck_at, compute_persistence, network_distance_correspondences, network_distance_maps,
    run_experiment, run_suite, verify_fdt_pair, Error, ExperimentConfig, FiltrationKind, Network,
    NetworkFormat, PersistenceDiagram, Relation, SearchBudget, Suite, ValidateOptions,
};

#[derive(Parser)]
#[command(name = "netph", version, about = "Persistent homology of weighted directed networks")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Persistence diagram of a network.
    Diagram(DiagramArgs),
    /// Bottleneck distance between two diagram files in one dimension.
    Compare(CompareArgs),
    /// Exact network distance by exhaustive search.
    Netdist(NetdistArgs),
    /// Run randomized validation suites.
    Validate(ValidateArgs),
    /// Simulated place-cell classification experiment.
    Experiment(ExperimentArgs),
    /// Check homology-level agreement of the Dowker complexes of nested relations.
    VerifyFdt(VerifyFdtArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for NetworkFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => NetworkFormat::Json,
            FormatArg::Csv => NetworkFormat::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rips,
    DowkerSink,
    DowkerSource,
}

impl From<MethodArg> for FiltrationKind {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rips => FiltrationKind::Rips,
            MethodArg::DowkerSink => FiltrationKind::DowkerSink,
            MethodArg::DowkerSource => FiltrationKind::DowkerSource,
        }
    }
}

#[derive(Args)]
struct DiagramArgs {
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum, default_value = "dowker-sink")]
    method: MethodArg,
    /// Highest homology dimension to report.
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    #[arg(long)]
    out: PathBuf,
    /// Also write the filtration, one `birth dim v0 .. vk` line per simplex.
    #[arg(long)]
    dump_filtration: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 0)]
    dim: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum NetdistMethod {
    Maps,
    Correspondences,
}

#[derive(Args)]
struct NetdistArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum, default_value = "maps")]
    method: NetdistMethod,
    /// Cap on the number of map pairs searched.
    #[arg(long)]
    max_map_pairs: Option<u128>,
    /// Cap on `|X| * |Y|` for the correspondence search.
    #[arg(long)]
    max_cells: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    n_cases: Option<usize>,
    /// Swap in a wrong oracle; the suite should then fail.
    #[arg(long)]
    corrupt_oracle: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Smoke,
    Desk,
    Full,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON config; missing fields take desk-scale defaults.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Master seed; overrides any seed in the config file.
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyFdtArgs {
    #[arg(long)]
    r: PathBuf,
    #[arg(long)]
    r_prime: PathBuf,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
}

enum Failure {
    Validation,
    Input(anyhow::Error),
    Budget(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let budget = e
            .chain()
            .any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_budget));
        if budget {
            Failure::Budget(e)
        } else {
            Failure::Input(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Diagram(a) => diagram(a),
        Command::Compare(a) => compare(a),
        Command::Netdist(a) => netdist(a),
        Command::Validate(a) => validate(a),
        Command::Experiment(a) => experiment(a),
        Command::VerifyFdt(a) => verify_fdt(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .map_err(|e| anyhow!("cannot write {}: {}", path.display(), e.error))?;
    Ok(())
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn diagram(a: DiagramArgs) -> CmdResult {
    let x = Network::load(&a.input, a.format.map(Into::into))?;
    let kind: FiltrationKind = a.method.into();
    let f = kind.build(&x, a.max_dim + 1);
    let dgm = compute_persistence(&f, a.max_dim)?;
    let dump = a.dump_filtration.as_ref().map(|p| (p, f.to_text()));
    write_atomic(&a.out, &dgm.to_csv())?;
    if let Some((p, text)) = dump {
        write_atomic(p, &text)?;
    }
    Ok(())
}

fn load_diagram(path: &Path) -> anyhow::Result<PersistenceDiagram> {
    let text = read_text(path)?;
    PersistenceDiagram::from_csv(&text).with_context(|| format!("in {}", path.display()))
}

fn compare(a: CompareArgs) -> CmdResult {
    let d1 = load_diagram(&a.a)?;
    let d2 = load_diagram(&a.b)?;
    println!("{}", format_distance(bottleneck_at(&d1, &d2, a.dim)));
    Ok(())
}

fn format_distance(d: f64) -> String {
    if d.is_infinite() {
        "inf".to_string()
    } else {
        format!("{d}")
    }
}

fn netdist(a: NetdistArgs) -> CmdResult {
    let x = Network::load(&a.a, None)?;
    let y = Network::load(&a.b, None)?;
    let mut budget = SearchBudget::default();
    if let Some(m) = a.max_map_pairs {
        budget.max_map_pairs = m;
    }
    if let Some(c) = a.max_cells {
        budget.max_correspondence_cells = c;
    }
    let d = match a.method {
        NetdistMethod::Maps => network_distance_maps(&x, &y, &budget)?.distance,
        NetdistMethod::Correspondences => network_distance_correspondences(&x, &y, &budget)?,
    };
    println!("{}", format_distance(d));
    Ok(())
}

fn validate(a: ValidateArgs) -> CmdResult {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let opts = ValidateOptions {
        seed: a.seed,
        cases: a.n_cases,
        corrupt_oracle: a.corrupt_oracle,
    };
    let mut ok = true;
    for suite in suites {
        let report = run_suite(suite, &opts)?;
        println!("{report}");
        ok &= report.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}

fn experiment(a: ExperimentArgs) -> CmdResult {
    let mut cfg = match (&a.config, a.preset) {
        (Some(path), _) => {
            let text = read_text(path)?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .with_context(|| format!("invalid config {}", path.display()))?
        }
        (None, Some(Preset::Smoke)) => ExperimentConfig::smoke(a.seed),
        (None, Some(Preset::Full)) => ExperimentConfig::full(a.seed),
        (None, Some(Preset::Desk) | None) => ExperimentConfig::desk(a.seed),
    };
    cfg.seed = a.seed;
    cfg.validate()?;
    let result = run_experiment(&cfg)?;
    let artifacts = result.artifacts();
    fs::create_dir_all(&a.out)
        .with_context(|| format!("cannot create {}", a.out.display()))?;
    for (rel, contents) in &artifacts {
        let path = a.out.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
        write_atomic(&path, contents)?;
    }
    match &result.separation {
        Some(s) => println!(
            "{} trials; within-class mean {:.4}, between-class mean {:.4}",
            result.trials.len(),
            s.within_mean,
            s.between_mean
        ),
        None => println!("{} trials", result.trials.len()),
    }
    Ok(())
}

fn load_relation(path: &Path) -> anyhow::Result<Relation> {
    let text = read_text(path)?;
    Relation::from_text(&text).with_context(|| format!("in {}", path.display()))
}

fn verify_fdt(a: VerifyFdtArgs) -> CmdResult {
    let r = load_relation(&a.r)?;
    let r2 = load_relation(&a.r_prime)?;
    let report = verify_fdt_pair(&r, &r2, a.max_dim)?;
    println!("betti E  {:?}  F  {:?}", report.betti_e, report.betti_f);
    println!("betti E' {:?}  F' {:?}", report.betti_e_prime, report.betti_f_prime);
    println!("rank  E->E' {:?}  F->F' {:?}", report.rank_e, report.rank_f);
    println!("diagrams equal: {}", report.diagrams_equal);
    if report.passed() {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Validation)
    }
}
