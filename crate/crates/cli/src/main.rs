//! Command line for the bnsl library: synthetic network/data generation,
//! the NSGA-II and hill-climbing learners, structural evaluation against a
//! ground truth, and the full experiment grid.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime failure.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use bnsl::harness::{run_grid, ExperimentGrid, FrontMemberRecord};
use bnsl::hillclimb::{hill_climb, HcConfig};
use bnsl::metrics::structural_confusion;
use bnsl::model::{read_network_json, to_dot, write_dag_json, write_network_json, Dataset};
use bnsl::nsga2::{evolve, CrossoverKind, GenerationStats, Nsga2Config};
use bnsl::score::{log_likelihood, Complexity, ScoreKind};
use bnsl::synth::{forward_sample, inject_noise, random_cpts_skewed, random_dag, ScenarioConfig};

#[derive(Parser)]
#[command(name = "bnsl", version, about = "Bayesian network structure learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random ground-truth network and sampled observations.
    Generate(GenerateArgs),
    /// Learn a Pareto front of structures with NSGA-II.
    LearnNsga2(LearnNsga2Args),
    /// Learn a single structure by regularized hill climbing.
    LearnHc(LearnHcArgs),
    /// Compare a learned network against a ground truth.
    Evaluate(EvaluateArgs),
    /// Run a full scenario grid with seeded repetitions of all learners.
    Experiment(ExperimentArgs),
}

enum CliError {
    Config(String),
    Runtime(String),
}

impl From<bnsl::Error> for CliError {
    fn from(e: bnsl::Error) -> Self {
        match e {
            bnsl::Error::Config(_) => CliError::Config(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn config_err(message: impl Into<String>) -> CliError {
    CliError::Config(message.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(message)) => {
            eprintln!("configuration error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::LearnNsga2(args) => learn_nsga2(args),
        Command::LearnHc(args) => learn_hc(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Experiment(args) => experiment(args),
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of variables.
    #[arg(long, default_value_t = 15)]
    nodes: usize,
    /// Per-pair edge probability of the ground-truth DAG.
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    /// Number of samples to draw.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Per-cell flip probability applied to a copy of the clean data.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// CPT sharpening exponent; 0 keeps the flat Dirichlet.
    #[arg(long, default_value_t = 0.0)]
    cpt_skew: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let scenario = ScenarioConfig {
        n: args.nodes,
        density: args.density,
        m: args.samples,
        noise: args.noise,
        seed: args.seed,
    };
    scenario.validate()?;
    if args.cpt_skew < 0.0 {
        return Err(config_err("cpt-skew must be >= 0"));
    }
    fs::create_dir_all(&args.out_dir)?;

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let dag = random_dag(args.nodes, args.density, &mut rng);
    let arities = vec![2usize; args.nodes];
    let bn = random_cpts_skewed(&dag, &arities, args.cpt_skew, &mut rng);
    let clean = forward_sample(&bn, args.samples, &mut rng);
    let noisy = inject_noise(&clean, args.noise, &mut rng)?;

    let network_path = args.out_dir.join("network.json");
    write_network_json(BufWriter::new(File::create(&network_path)?), &bn)?;
    fs::write(args.out_dir.join("network.dot"), to_dot(&dag))?;
    clean.write_csv(BufWriter::new(File::create(args.out_dir.join("data_clean.csv"))?))?;
    noisy.write_csv(BufWriter::new(File::create(args.out_dir.join("data.csv"))?))?;

    println!(
        "generated {} nodes, {} edges, {} samples (noise {}) into {}",
        args.nodes,
        dag.edge_count(),
        args.samples,
        args.noise,
        args.out_dir.display()
    );
    Ok(())
}

#[derive(Args)]
struct LearnNsga2Args {
    /// Observation CSV (header V1..Vn).
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 100)]
    pop_size: usize,
    #[arg(long, default_value_t = 100)]
    generations: usize,
    /// Per-bit mutation probability; defaults to 1/(n(n-1)).
    #[arg(long)]
    pmu: Option<f64>,
    /// Crossover probability.
    #[arg(long, default_value_t = 0.9)]
    pchi: f64,
    /// Probability that each initial bit is set.
    #[arg(long, default_value_t = 0.1)]
    init_density: f64,
    /// Use uniform instead of single-point crossover.
    #[arg(long)]
    uniform_crossover: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

fn write_trace_csv(path: &PathBuf, trace: &[GenerationStats]) -> Result<(), CliError> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "generation,best_f1,median_f1,best_f2,front_size")?;
    for g in trace {
        writeln!(
            out,
            "{},{},{},{},{}",
            g.generation,
            g.best_log_likelihood,
            g.median_log_likelihood,
            g.best_arcs,
            g.front_size
        )?;
    }
    Ok(())
}

fn learn_nsga2(args: LearnNsga2Args) -> Result<(), CliError> {
    let data = Dataset::read_csv(BufReader::new(File::open(&args.data)?))?;
    let n = data.n();
    let mut config = Nsga2Config::default_for(n);
    config.population_size = args.pop_size;
    config.generations = args.generations;
    if let Some(pmu) = args.pmu {
        config.p_mutation = pmu;
    }
    config.p_crossover = args.pchi;
    config.init_density = args.init_density;
    if args.uniform_crossover {
        config.crossover = CrossoverKind::Uniform;
    }
    config.seed = args.seed;
    config.validate()?;
    fs::create_dir_all(&args.out_dir)?;

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let result = evolve(&data, &config, &mut rng)?;

    let members: Vec<FrontMemberRecord> = result
        .front
        .members()
        .iter()
        .map(|m| FrontMemberRecord {
            edges: m.dag.edges().to_vec(),
            log_likelihood: m.log_likelihood,
            arcs: m.arcs,
            rank: m.rank.unwrap_or(1),
            crowding: m.crowding.filter(|c| c.is_finite()),
        })
        .collect();
    let mut front_file = BufWriter::new(File::create(args.out_dir.join("front.json"))?);
    serde_json::to_writer_pretty(&mut front_file, &members)?;
    front_file.write_all(b"\n")?;
    write_trace_csv(&args.out_dir.join("trace.csv"), &result.trace)?;

    println!(
        "front of {} solutions; best f1 {:.6}, fewest arcs {}",
        result.front.len(),
        result.front.best_log_likelihood().unwrap_or(f64::NAN),
        result.front.min_arcs().unwrap_or(0)
    );
    Ok(())
}

#[derive(Args)]
struct LearnHcArgs {
    /// Observation CSV (header V1..Vn).
    #[arg(long)]
    data: PathBuf,
    /// Regularized score: aic or bic.
    #[arg(long, default_value = "bic")]
    score: String,
    /// Model-size measure: parameters or edges.
    #[arg(long, default_value = "parameters")]
    complexity: String,
    #[arg(long, default_value_t = 1000)]
    max_iters: usize,
    /// Extra climbs from random graphs.
    #[arg(long, default_value_t = 0)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Serialize)]
struct NetworkSummary {
    n: usize,
    arities: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct HcResultFile {
    score_kind: String,
    complexity: String,
    score_value: f64,
    log_likelihood: f64,
    iterations: usize,
    restarts_used: usize,
    network: NetworkSummary,
}

fn learn_hc(args: LearnHcArgs) -> Result<(), CliError> {
    let data = Dataset::read_csv(BufReader::new(File::open(&args.data)?))?;
    let score: ScoreKind = args.score.parse()?;
    let complexity: Complexity = args.complexity.parse()?;
    let config = HcConfig {
        score,
        complexity,
        max_iterations: args.max_iters,
        restarts: args.restarts,
        seed: args.seed,
    };
    config.validate()?;
    fs::create_dir_all(&args.out_dir)?;

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let result = hill_climb(&data, &config, &mut rng)?;
    let ll = log_likelihood(&result.dag, &data)?;

    let file = HcResultFile {
        score_kind: score.to_string(),
        complexity: complexity.to_string(),
        score_value: result.score,
        log_likelihood: ll,
        iterations: result.iterations,
        restarts_used: result.restarts_used,
        network: NetworkSummary {
            n: result.dag.n(),
            arities: data.arities().to_vec(),
            edges: result.dag.edges().to_vec(),
        },
    };
    let mut out = BufWriter::new(File::create(args.out_dir.join("result.json"))?);
    serde_json::to_writer_pretty(&mut out, &file)?;
    out.write_all(b"\n")?;
    write_dag_json(
        BufWriter::new(File::create(args.out_dir.join("network.json"))?),
        &result.dag,
        data.arities(),
    )?;
    fs::write(args.out_dir.join("result.dot"), to_dot(&result.dag))?;

    println!(
        "{} climb: score {:.6}, {} arcs after {} moves",
        score,
        result.score,
        result.dag.edge_count(),
        result.iterations
    );
    Ok(())
}

#[derive(Args)]
struct EvaluateArgs {
    /// Learned network JSON.
    #[arg(long)]
    learned: PathBuf,
    /// Ground-truth network JSON.
    #[arg(long)]
    truth: PathBuf,
    /// Optional observation CSV for scoring the learned structure.
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Serialize)]
struct EvaluationOutput {
    confusion: bnsl::metrics::StructuralConfusion,
    precision: Option<f64>,
    recall: Option<f64>,
    specificity: Option<f64>,
    learned_arcs: usize,
    truth_arcs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    log_likelihood: Option<f64>,
}

fn evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let (learned, _, _) = read_network_json(BufReader::new(File::open(&args.learned)?))?;
    let (truth, _, _) = read_network_json(BufReader::new(File::open(&args.truth)?))?;
    let confusion = structural_confusion(&learned, &truth)?;
    let metrics = confusion.metrics();
    let ll = match &args.data {
        Some(path) => {
            let data = Dataset::read_csv(BufReader::new(File::open(path)?))?;
            Some(log_likelihood(&learned, &data)?)
        }
        None => None,
    };
    let output = EvaluationOutput {
        confusion,
        precision: metrics.precision,
        recall: metrics.recall,
        specificity: metrics.specificity,
        learned_arcs: learned.edge_count(),
        truth_arcs: truth.edge_count(),
        log_likelihood: ll,
    };
    println!("{}", serde_json::to_string_pretty(&output)?);
    Ok(())
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML file mirroring these flags; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nodes: Option<usize>,
    /// Density levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    density: Option<Vec<f64>>,
    /// Sample-size levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    samples: Option<Vec<usize>>,
    /// Noise levels, comma separated.
    #[arg(long, value_delimiter = ',')]
    noise: Option<Vec<f64>>,
    /// Repetitions per scenario.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    pop_size: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// Per-bit mutation probability; defaults to 1/(n(n-1)).
    #[arg(long)]
    pmu: Option<f64>,
    #[arg(long)]
    pchi: Option<f64>,
    #[arg(long)]
    init_density: Option<f64>,
    /// Hill-climbing baselines to run, comma separated (aic,bic).
    #[arg(long, value_delimiter = ',')]
    score: Option<Vec<String>>,
    #[arg(long)]
    complexity: Option<String>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    cpt_skew: Option<f64>,
    /// Master seed; every repetition stream derives from it.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads for repetitions (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct ExperimentFile {
    nodes: Option<usize>,
    density: Option<Vec<f64>>,
    samples: Option<Vec<usize>>,
    noise: Option<Vec<f64>>,
    reps: Option<usize>,
    pop_size: Option<usize>,
    generations: Option<usize>,
    pmu: Option<f64>,
    pchi: Option<f64>,
    init_density: Option<f64>,
    score: Option<Vec<String>>,
    complexity: Option<String>,
    max_iters: Option<usize>,
    restarts: Option<usize>,
    cpt_skew: Option<f64>,
    seed: Option<u64>,
    out_dir: Option<PathBuf>,
    threads: Option<usize>,
}

fn experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let file: ExperimentFile = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
            toml::from_str(&text)
                .map_err(|e| config_err(format!("{}: {e}", path.display())))?
        }
        None => ExperimentFile::default(),
    };

    let nodes = args.nodes.or(file.nodes).unwrap_or(15);
    let densities = args.density.or(file.density).unwrap_or_else(|| vec![0.2, 0.5, 0.8]);
    let sample_sizes = args.samples.or(file.samples).unwrap_or_else(|| vec![50, 100, 500]);
    let noises = args.noise.or(file.noise).unwrap_or_else(|| vec![0.0, 0.1, 0.2]);
    let repetitions = args.reps.or(file.reps).unwrap_or(50);
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let out_dir = args
        .out_dir
        .or(file.out_dir)
        .ok_or_else(|| config_err("--out-dir is required (flag or config file)"))?;
    let threads = args.threads.or(file.threads);

    let mut nsga2 = Nsga2Config::default_for(nodes);
    nsga2.population_size = args.pop_size.or(file.pop_size).unwrap_or(100);
    nsga2.generations = args.generations.or(file.generations).unwrap_or(100);
    if let Some(pmu) = args.pmu.or(file.pmu) {
        nsga2.p_mutation = pmu;
    }
    nsga2.p_crossover = args.pchi.or(file.pchi).unwrap_or(0.9);
    nsga2.init_density = args.init_density.or(file.init_density).unwrap_or(0.1);
    nsga2.seed = seed;

    let complexity: Complexity = args
        .complexity
        .or(file.complexity)
        .unwrap_or_else(|| "parameters".to_string())
        .parse()?;
    let score_names = args
        .score
        .or(file.score)
        .unwrap_or_else(|| vec!["aic".to_string(), "bic".to_string()]);
    let max_iterations = args.max_iters.or(file.max_iters).unwrap_or(1000);
    let restarts = args.restarts.or(file.restarts).unwrap_or(0);
    let hc = score_names
        .iter()
        .map(|name| {
            Ok(HcConfig {
                score: name.parse()?,
                complexity,
                max_iterations,
                restarts,
                seed,
            })
        })
        .collect::<Result<Vec<_>, bnsl::Error>>()?;

    let grid = ExperimentGrid {
        n: nodes,
        densities,
        sample_sizes,
        noises,
        repetitions,
        nsga2,
        hc,
        master_seed: seed,
        cpt_skew: args.cpt_skew.or(file.cpt_skew).unwrap_or(0.0),
    };
    grid.validate()?;

    let scenario_count = grid.scenarios().len();
    println!(
        "running {scenario_count} scenarios x {} repetitions into {}",
        grid.repetitions,
        out_dir.display()
    );
    let reports = run_grid(&grid, &out_dir, threads)?;
    for report in &reports {
        let dominance: Vec<String> = report
            .aggregate
            .dominance
            .iter()
            .map(|d| format!("{} {}/{}", d.baseline, d.successes, d.total))
            .collect();
        println!(
            "{}: {} ok, {} failed; front dominates {}",
            report.scenario.id,
            report.aggregate.completed,
            report.aggregate.failed,
            if dominance.is_empty() { "-".to_string() } else { dominance.join(", ") }
        );
    }
    Ok(())
}
