//! Experiment orchestration: the scenario grid, seeded repetitions of both
//! learners on identical data, aggregation, and plot-ready exports.
//!
//! Every random stream is derived from the master seed with
//! [`derive_seed`], so a grid run is reproducible byte for byte and
//! independent of how repetitions are scheduled across threads.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hillclimb::{hill_climb, HcConfig};
use crate::metrics::{
    aggregate, front_dominates_point, front_summary, structural_confusion, Aggregate,
    SUMMARY_SLOTS,
};
use crate::model::{to_dot, Dag, Dataset};
use crate::nsga2::{evolve, GenerationStats, Nsga2Config};
use crate::score::log_likelihood;
use crate::synth::{forward_sample, inject_noise, random_cpts_skewed, random_dag};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable stream derivation: the master seed and each component are folded
/// through the splitmix64 finalizer, giving independent streams for distinct
/// (scenario, repetition, purpose) triples.
pub fn derive_seed(master: u64, scenario: u64, repetition: u64, purpose: u64) -> u64 {
    let mut state = mix64(master);
    for part in [scenario, repetition, purpose] {
        state = mix64(state ^ mix64(part));
    }
    state
}

/// Purpose tags for [`derive_seed`].
pub mod stream {
    pub const TRUTH_DAG: u64 = 0;
    pub const TRUTH_CPTS: u64 = 1;
    pub const SAMPLING: u64 = 2;
    pub const NOISE: u64 = 3;
    pub const NSGA2: u64 = 4;
    /// Hill-climbing streams start here, one per configured baseline.
    pub const HC_BASE: u64 = 8;
}

/// One cell of the experiment grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub id: String,
    /// Position in the grid enumeration; part of every derived seed.
    pub index: u64,
    pub n: usize,
    pub density: f64,
    pub samples: usize,
    pub noise: f64,
}

impl ScenarioSpec {
    pub fn new(index: u64, n: usize, density: f64, samples: usize, noise: f64) -> Self {
        let id = format!("density{density}_samples{samples}_noise{noise}");
        Self { id, index, n, density, samples, noise }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("scenario needs n >= 1".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("scenario needs samples >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Config(format!("density {} outside [0, 1]", self.density)));
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(Error::Config(format!("noise {} outside [0, 1]", self.noise)));
        }
        Ok(())
    }
}

/// The full benchmark description: scenario dimensions times repetitions,
/// plus the learner configurations shared by every scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentGrid {
    pub n: usize,
    pub densities: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub noises: Vec<f64>,
    pub repetitions: usize,
    pub nsga2: Nsga2Config,
    pub hc: Vec<HcConfig>,
    pub master_seed: u64,
    /// CPT sharpening exponent for ground-truth generation; 0 = flat.
    pub cpt_skew: f64,
}

impl ExperimentGrid {
    pub fn validate(&self) -> Result<()> {
        if self.densities.is_empty() || self.sample_sizes.is_empty() || self.noises.is_empty() {
            return Err(Error::Config("every grid dimension needs at least one level".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be >= 1".into()));
        }
        if self.cpt_skew < 0.0 {
            return Err(Error::Config("cpt_skew must be >= 0".into()));
        }
        self.nsga2.validate()?;
        for hc in &self.hc {
            hc.validate()?;
        }
        for spec in self.scenarios() {
            spec.validate()?;
        }
        Ok(())
    }

    /// Scenario enumeration order: density, then sample size, then noise.
    pub fn scenarios(&self) -> Vec<ScenarioSpec> {
        let mut out = Vec::new();
        let mut index = 0u64;
        for &density in &self.densities {
            for &samples in &self.sample_sizes {
                for &noise in &self.noises {
                    out.push(ScenarioSpec::new(index, self.n, density, samples, noise));
                    index += 1;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub edges: Vec<(usize, usize)>,
    pub log_likelihood: f64,
    pub arcs: usize,
}

/// Front member in the export shape `{edges, f1, f2, rank, crowding}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrontMemberRecord {
    pub edges: Vec<(usize, usize)>,
    #[serde(rename = "f1")]
    pub log_likelihood: f64,
    #[serde(rename = "f2")]
    pub arcs: usize,
    pub rank: usize,
    /// `None` encodes an infinite (boundary) crowding distance.
    pub crowding: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlotMetrics {
    pub slot: String,
    pub log_likelihood: f64,
    pub arcs: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HcOutcome {
    pub label: String,
    pub score_kind: String,
    pub complexity: String,
    pub solution: SolutionRecord,
    /// The regularized score the climb maximized.
    pub score: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepetitionRecord {
    pub repetition: usize,
    pub arities: Vec<usize>,
    /// Ground-truth structure scored on the noisy learning data.
    pub truth: SolutionRecord,
    /// One digit string per sample; clean data kept for auditability.
    pub data_clean: Vec<String>,
    pub data_noisy: Vec<String>,
    pub front: Vec<FrontMemberRecord>,
    pub front_slots: Vec<SlotMetrics>,
    pub hc: Vec<HcOutcome>,
    /// Aligned with the configured baselines.
    pub front_dominates_hc: Vec<bool>,
    pub front_dominates_truth: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RepetitionOutcome {
    Ok { record: RepetitionRecord },
    Failed { repetition: usize, error: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricAggregate {
    pub f1: Option<Aggregate>,
    pub f2: Option<Aggregate>,
    pub precision: Option<Aggregate>,
    pub recall: Option<Aggregate>,
    pub specificity: Option<Aggregate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledAggregate {
    pub label: String,
    #[serde(flatten)]
    pub metrics: MetricAggregate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominanceRate {
    pub baseline: String,
    pub successes: usize,
    pub total: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioAggregate {
    pub completed: usize,
    pub failed: usize,
    /// One entry per representative slot (min..max by f1).
    pub slots: Vec<LabeledAggregate>,
    pub hc: Vec<LabeledAggregate>,
    pub truth: MetricAggregate,
    pub dominance: Vec<DominanceRate>,
    pub dominance_vs_truth: DominanceRate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema: u32,
    pub scenario: ScenarioSpec,
    pub master_seed: u64,
    pub repetitions_requested: usize,
    pub nsga2_config: Nsga2Config,
    pub hc_configs: Vec<HcConfig>,
    pub cpt_skew: f64,
    pub records: Vec<RepetitionOutcome>,
    pub aggregate: ScenarioAggregate,
}

/// A scenario's report plus the NSGA-II traces (aligned with records;
/// `None` where a repetition failed).
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub report: ScenarioReport,
    pub traces: Vec<Option<Vec<GenerationStats>>>,
}

/// Compact per-sample digit encoding for record files (arity <= 10).
pub fn dataset_to_rows(data: &Dataset) -> Result<Vec<String>> {
    if let Some(j) = data.arities().iter().position(|&a| a > 10) {
        return Err(Error::InvalidValue(format!(
            "variable {j} has arity > 10; digit encoding unavailable"
        )));
    }
    Ok((0..data.m())
        .map(|r| data.row(r).iter().map(|&v| char::from(b'0' + v)).collect())
        .collect())
}

/// Inverse of [`dataset_to_rows`].
pub fn dataset_from_rows(arities: Vec<usize>, rows: &[String]) -> Result<Dataset> {
    let mut decoded = Vec::with_capacity(rows.len());
    for row in rows {
        let cells: Result<Vec<u8>> = row
            .chars()
            .map(|ch| {
                ch.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidValue(format!("non-digit cell {ch:?}")))
            })
            .collect();
        decoded.push(cells?);
    }
    Dataset::from_rows(arities, &decoded)
}

fn run_repetition(
    scenario: &ScenarioSpec,
    nsga2_config: &Nsga2Config,
    hc_configs: &[HcConfig],
    repetition: usize,
    master_seed: u64,
    cpt_skew: f64,
) -> Result<(RepetitionRecord, Vec<GenerationStats>)> {
    let seed_for =
        |purpose: u64| derive_seed(master_seed, scenario.index, repetition as u64, purpose);
    let arities = vec![2usize; scenario.n];

    let truth_dag = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(stream::TRUTH_DAG));
        random_dag(scenario.n, scenario.density, &mut rng)
    };
    let truth_bn = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(stream::TRUTH_CPTS));
        random_cpts_skewed(&truth_dag, &arities, cpt_skew, &mut rng)
    };
    let clean = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(stream::SAMPLING));
        forward_sample(&truth_bn, scenario.samples, &mut rng)
    };
    let noisy = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(stream::NOISE));
        inject_noise(&clean, scenario.noise, &mut rng)?
    };

    let evolve_result = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(stream::NSGA2));
        evolve(&noisy, nsga2_config, &mut rng)?
    };
    let front = &evolve_result.front;

    let front_records: Vec<FrontMemberRecord> = front
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

    let summary = front_summary(front)?;
    let front_slots: Vec<SlotMetrics> = summary
        .representatives
        .iter()
        .zip(SUMMARY_SLOTS)
        .map(|(member, slot)| {
            let metrics = structural_confusion(&member.dag, &truth_dag)?.metrics();
            Ok(SlotMetrics {
                slot: slot.to_string(),
                log_likelihood: member.log_likelihood,
                arcs: member.arcs,
                precision: metrics.precision,
                recall: metrics.recall,
                specificity: metrics.specificity,
            })
        })
        .collect::<Result<_>>()?;

    let mut hc_outcomes = Vec::with_capacity(hc_configs.len());
    for (k, config) in hc_configs.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(stream::HC_BASE + k as u64));
        let result = hill_climb(&noisy, config, &mut rng)?;
        let ll = log_likelihood(&result.dag, &noisy)?;
        let metrics = structural_confusion(&result.dag, &truth_dag)?.metrics();
        hc_outcomes.push(HcOutcome {
            label: format!("hc-{}", config.score),
            score_kind: config.score.to_string(),
            complexity: config.complexity.to_string(),
            solution: SolutionRecord {
                edges: result.dag.edges().to_vec(),
                log_likelihood: ll,
                arcs: result.dag.edge_count(),
            },
            score: result.score,
            iterations: result.iterations,
            restarts_used: result.restarts_used,
            precision: metrics.precision,
            recall: metrics.recall,
            specificity: metrics.specificity,
        });
    }

    let truth_ll = log_likelihood(&truth_dag, &noisy)?;
    let front_dominates_hc: Vec<bool> = hc_outcomes
        .iter()
        .map(|o| front_dominates_point(front, (o.solution.log_likelihood, o.solution.arcs)))
        .collect();
    let front_dominates_truth =
        front_dominates_point(front, (truth_ll, truth_dag.edge_count()));

    let record = RepetitionRecord {
        repetition,
        arities,
        truth: SolutionRecord {
            edges: truth_dag.edges().to_vec(),
            log_likelihood: truth_ll,
            arcs: truth_dag.edge_count(),
        },
        data_clean: dataset_to_rows(&clean)?,
        data_noisy: dataset_to_rows(&noisy)?,
        front: front_records,
        front_slots,
        hc: hc_outcomes,
        front_dominates_hc,
        front_dominates_truth,
    };
    Ok((record, evolve_result.trace))
}

fn aggregate_records(
    records: &[RepetitionOutcome],
    hc_configs: &[HcConfig],
) -> ScenarioAggregate {
    let ok: Vec<&RepetitionRecord> = records
        .iter()
        .filter_map(|r| match r {
            RepetitionOutcome::Ok { record } => Some(record),
            RepetitionOutcome::Failed { .. } => None,
        })
        .collect();
    let completed = ok.len();
    let failed = records.len() - completed;

    let slots = SUMMARY_SLOTS
        .iter()
        .enumerate()
        .map(|(i, slot)| LabeledAggregate {
            label: slot.to_string(),
            metrics: MetricAggregate {
                f1: aggregate(ok.iter().map(|r| Some(r.front_slots[i].log_likelihood))),
                f2: aggregate(ok.iter().map(|r| Some(r.front_slots[i].arcs as f64))),
                precision: aggregate(ok.iter().map(|r| r.front_slots[i].precision)),
                recall: aggregate(ok.iter().map(|r| r.front_slots[i].recall)),
                specificity: aggregate(ok.iter().map(|r| r.front_slots[i].specificity)),
            },
        })
        .collect();

    let hc = hc_configs
        .iter()
        .enumerate()
        .map(|(k, config)| LabeledAggregate {
            label: format!("hc-{}", config.score),
            metrics: MetricAggregate {
                f1: aggregate(ok.iter().map(|r| Some(r.hc[k].solution.log_likelihood))),
                f2: aggregate(ok.iter().map(|r| Some(r.hc[k].solution.arcs as f64))),
                precision: aggregate(ok.iter().map(|r| r.hc[k].precision)),
                recall: aggregate(ok.iter().map(|r| r.hc[k].recall)),
                specificity: aggregate(ok.iter().map(|r| r.hc[k].specificity)),
            },
        })
        .collect();

    let truth = MetricAggregate {
        f1: aggregate(ok.iter().map(|r| Some(r.truth.log_likelihood))),
        f2: aggregate(ok.iter().map(|r| Some(r.truth.arcs as f64))),
        precision: None,
        recall: None,
        specificity: None,
    };

    let dominance = hc_configs
        .iter()
        .enumerate()
        .map(|(k, config)| {
            let successes = ok.iter().filter(|r| r.front_dominates_hc[k]).count();
            DominanceRate {
                baseline: format!("hc-{}", config.score),
                successes,
                total: completed,
                rate: if completed == 0 { 0.0 } else { successes as f64 / completed as f64 },
            }
        })
        .collect();

    let truth_successes = ok.iter().filter(|r| r.front_dominates_truth).count();
    let dominance_vs_truth = DominanceRate {
        baseline: "truth".to_string(),
        successes: truth_successes,
        total: completed,
        rate: if completed == 0 { 0.0 } else { truth_successes as f64 / completed as f64 },
    };

    ScenarioAggregate { completed, failed, slots, hc, truth, dominance, dominance_vs_truth }
}

/// Runs every repetition of one scenario (in parallel when a rayon pool is
/// available), evaluating NSGA-II and every hill-climbing baseline on the
/// identical noisy dataset. A failed repetition is recorded and excluded
/// from the aggregate; it never aborts the scenario.
pub fn run_scenario(
    scenario: &ScenarioSpec,
    nsga2_config: &Nsga2Config,
    hc_configs: &[HcConfig],
    repetitions: usize,
    master_seed: u64,
    cpt_skew: f64,
) -> Result<ScenarioRun> {
    scenario.validate()?;
    nsga2_config.validate()?;
    for config in hc_configs {
        config.validate()?;
    }
    if repetitions == 0 {
        return Err(Error::Config("repetitions must be >= 1".into()));
    }

    let outcomes: Vec<(RepetitionOutcome, Option<Vec<GenerationStats>>)> = (0..repetitions)
        .into_par_iter()
        .map(|repetition| {
            match run_repetition(
                scenario,
                nsga2_config,
                hc_configs,
                repetition,
                master_seed,
                cpt_skew,
            ) {
                Ok((record, trace)) => (RepetitionOutcome::Ok { record }, Some(trace)),
                Err(e) => (
                    RepetitionOutcome::Failed { repetition, error: e.to_string() },
                    None,
                ),
            }
        })
        .collect();

    let (records, traces): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    let aggregate = aggregate_records(&records, hc_configs);
    let report = ScenarioReport {
        schema: REPORT_SCHEMA_VERSION,
        scenario: scenario.clone(),
        master_seed,
        repetitions_requested: repetitions,
        nsga2_config: nsga2_config.clone(),
        hc_configs: hc_configs.to_vec(),
        cpt_skew,
        records,
        aggregate,
    };
    Ok(ScenarioRun { report, traces })
}

fn scenario_io<T>(id: &str, result: std::result::Result<T, impl std::fmt::Display>) -> Result<T> {
    result.map_err(|e| Error::Scenario { id: id.to_string(), message: e.to_string() })
}

fn optional_field(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn write_scenario_files(out_dir: &Path, run: &ScenarioRun) -> Result<()> {
    let id = &run.report.scenario.id;

    let report_path = out_dir.join(format!("report_{id}.json"));
    let mut file = scenario_io(id, fs::File::create(&report_path))?;
    scenario_io(id, serde_json::to_writer_pretty(&mut file, &run.report))?;
    scenario_io(id, file.write_all(b"\n"))?;

    let mut trace = scenario_io(
        id,
        csv::Writer::from_path(out_dir.join(format!("trace_{id}.csv"))),
    )?;
    scenario_io(
        id,
        trace.write_record(["repetition", "generation", "best_f1", "median_f1", "best_f2", "front_size"]),
    )?;
    for (repetition, generations) in run.traces.iter().enumerate() {
        let Some(generations) = generations else { continue };
        for g in generations {
            scenario_io(
                id,
                trace.write_record([
                    repetition.to_string(),
                    g.generation.to_string(),
                    g.best_log_likelihood.to_string(),
                    g.median_log_likelihood.to_string(),
                    g.best_arcs.to_string(),
                    g.front_size.to_string(),
                ]),
            )?;
        }
    }
    scenario_io(id, trace.flush())?;

    let mut plot = scenario_io(
        id,
        csv::Writer::from_path(out_dir.join(format!("plot_{id}.csv"))),
    )?;
    scenario_io(
        id,
        plot.write_record([
            "algorithm",
            "slot",
            "f1_mean",
            "f1_std",
            "f2_mean",
            "f2_std",
            "precision_mean",
            "precision_std",
            "recall_mean",
            "recall_std",
            "specificity_mean",
            "specificity_std",
        ]),
    )?;
    let mut write_plot_row = |algorithm: &str, slot: &str, m: &MetricAggregate| {
        let stat = |a: &Option<Aggregate>, f: fn(&Aggregate) -> f64| {
            a.as_ref().map(|x| f(x).to_string()).unwrap_or_default()
        };
        plot.write_record([
            algorithm.to_string(),
            slot.to_string(),
            stat(&m.f1, |a| a.mean),
            stat(&m.f1, |a| a.std),
            stat(&m.f2, |a| a.mean),
            stat(&m.f2, |a| a.std),
            stat(&m.precision, |a| a.mean),
            stat(&m.precision, |a| a.std),
            stat(&m.recall, |a| a.mean),
            stat(&m.recall, |a| a.std),
            stat(&m.specificity, |a| a.mean),
            stat(&m.specificity, |a| a.std),
        ])
    };
    for slot in &run.report.aggregate.slots {
        scenario_io(id, write_plot_row("nsga2", &slot.label, &slot.metrics))?;
    }
    for hc in &run.report.aggregate.hc {
        scenario_io(id, write_plot_row(&hc.label, "solution", &hc.metrics))?;
    }
    scenario_io(id, write_plot_row("truth", "truth", &run.report.aggregate.truth))?;
    scenario_io(id, plot.flush())?;

    // DOT files for the first successful repetition: ground truth next to
    // the front's best-likelihood member.
    let first_ok = run.report.records.iter().find_map(|r| match r {
        RepetitionOutcome::Ok { record } => Some(record),
        RepetitionOutcome::Failed { .. } => None,
    });
    if let Some(record) = first_ok {
        let n = record.arities.len();
        let truth_dag = scenario_io(id, Dag::new(n, record.truth.edges.iter().copied()))?;
        scenario_io(
            id,
            fs::write(out_dir.join(format!("{id}_truth.dot")), to_dot(&truth_dag)),
        )?;
        if let Some(best) = record.front.iter().max_by(|a, b| {
            a.log_likelihood
                .partial_cmp(&b.log_likelihood)
                .unwrap_or(std::cmp::Ordering::Equal)
        }) {
            let best_dag = scenario_io(id, Dag::new(n, best.edges.iter().copied()))?;
            scenario_io(
                id,
                fs::write(out_dir.join(format!("{id}_front_best.dot")), to_dot(&best_dag)),
            )?;
        }
    }
    Ok(())
}

fn append_combined_rows<W: std::io::Write>(
    writer: &mut csv::Writer<W>,
    report: &ScenarioReport,
) -> Result<()> {
    let scenario = &report.scenario.id;
    for outcome in &report.records {
        let RepetitionOutcome::Ok { record } = outcome else { continue };
        let repetition = record.repetition.to_string();
        for slot in &record.front_slots {
            writer.write_record([
                scenario.clone(),
                repetition.clone(),
                "nsga2".to_string(),
                slot.slot.clone(),
                slot.log_likelihood.to_string(),
                slot.arcs.to_string(),
                optional_field(slot.precision),
                optional_field(slot.recall),
                optional_field(slot.specificity),
            ])?;
        }
        for hc in &record.hc {
            writer.write_record([
                scenario.clone(),
                repetition.clone(),
                hc.label.clone(),
                "solution".to_string(),
                hc.solution.log_likelihood.to_string(),
                hc.solution.arcs.to_string(),
                optional_field(hc.precision),
                optional_field(hc.recall),
                optional_field(hc.specificity),
            ])?;
        }
        writer.write_record([
            scenario.clone(),
            repetition.clone(),
            "truth".to_string(),
            "truth".to_string(),
            record.truth.log_likelihood.to_string(),
            record.truth.arcs.to_string(),
            String::new(),
            String::new(),
            String::new(),
        ])?;
    }
    Ok(())
}

/// Runs every scenario of the grid and writes, per scenario, a report JSON,
/// a generation-trace CSV, a plot-data CSV and DOT files, plus one combined
/// metrics CSV. Returns the in-memory reports in grid order.
pub fn run_grid(
    grid: &ExperimentGrid,
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<Vec<ScenarioReport>> {
    grid.validate()?;
    fs::create_dir_all(out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let mut combined = csv::Writer::from_path(out_dir.join("metrics.csv"))?;
    combined.write_record([
        "scenario",
        "repetition",
        "algorithm",
        "slot",
        "f1",
        "f2",
        "precision",
        "recall",
        "specificity",
    ])?;

    let mut reports = Vec::new();
    for scenario in grid.scenarios() {
        let run = pool.install(|| {
            run_scenario(
                &scenario,
                &grid.nsga2,
                &grid.hc,
                grid.repetitions,
                grid.master_seed,
                grid.cpt_skew,
            )
        })?;
        write_scenario_files(out_dir, &run)?;
        append_combined_rows(&mut combined, &run.report)?;
        reports.push(run.report);
    }
    combined.flush()?;
    Ok(reports)
}
