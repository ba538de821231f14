//! Multi-objective structure search with NSGA-II.
//!
//! Two competing objectives: the log-likelihood of a candidate structure
//! (maximized) and its arc count (minimized). Candidates are bitstring
//! genomes; selection, single-point (or uniform) crossover and per-bit
//! mutation are followed by cycle repair before evaluation. Elitism merges
//! parents and offspring, ranks the union by non-domination and fills the
//! next population front by front, truncating the overflowing front by
//! descending crowding distance.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dag, Dataset, Genome};
use crate::score::log_likelihood;

/// A candidate structure with its objectives and ranking state.
///
/// `genome` is the post-mutation bitstring (it may encode cycles); `dag` is
/// the stored repair realization of that genome, and `arcs` is exactly the
/// DAG's edge count.
#[derive(Debug, Clone)]
pub struct Individual {
    pub genome: Genome,
    pub dag: Dag,
    /// Objective 1, maximized.
    pub log_likelihood: f64,
    /// Objective 2, minimized.
    pub arcs: usize,
    /// Non-domination level, 1 = best; assigned by sorting.
    pub rank: Option<usize>,
    /// Crowding distance; assigned per front.
    pub crowding: Option<f64>,
}

impl Individual {
    /// Repairs the genome, evaluates both objectives, and leaves rank and
    /// crowding unassigned.
    pub fn from_genome<R: Rng + ?Sized>(
        genome: Genome,
        data: &Dataset,
        rng: &mut R,
    ) -> Result<Self> {
        let dag = genome.repair_cycles(rng);
        let log_likelihood = log_likelihood(&dag, data)?;
        let arcs = dag.edge_count();
        Ok(Self { genome, dag, log_likelihood, arcs, rank: None, crowding: None })
    }

    /// Wraps an existing DAG as an objective point (used for baselines and
    /// ground-truth markers).
    pub fn from_dag(dag: Dag, data: &Dataset) -> Result<Self> {
        let genome = Genome::encode(&dag);
        let log_likelihood = log_likelihood(&dag, data)?;
        let arcs = dag.edge_count();
        Ok(Self { genome, dag, log_likelihood, arcs, rank: None, crowding: None })
    }

    pub fn objectives(&self) -> (f64, usize) {
        (self.log_likelihood, self.arcs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrossoverKind {
    SinglePoint,
    Uniform,
}

/// NSGA-II run parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Nsga2Config {
    /// Population size Q; even and >= 4.
    pub population_size: usize,
    pub generations: usize,
    /// Per-bit mutation probability.
    pub p_mutation: f64,
    /// Crossover probability per parent pair.
    pub p_crossover: f64,
    /// Probability that each bit of an initial genome is set.
    pub init_density: f64,
    pub crossover: CrossoverKind,
    pub seed: u64,
}

impl Nsga2Config {
    /// Defaults for an `n`-variable problem: Q = 100, 100 generations,
    /// p_mutation = 1/(n(n-1)), p_crossover = 0.9, sparse initialization.
    pub fn default_for(n: usize) -> Self {
        let bits = (n * n.saturating_sub(1)).max(1);
        Self {
            population_size: 100,
            generations: 100,
            p_mutation: 1.0 / bits as f64,
            p_crossover: 0.9,
            init_density: 0.1,
            crossover: CrossoverKind::SinglePoint,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::Config("population size must be >= 4".into()));
        }
        if self.population_size % 2 != 0 {
            return Err(Error::Config("population size must be even".into()));
        }
        for (name, p) in [
            ("p_mutation", self.p_mutation),
            ("p_crossover", self.p_crossover),
            ("init_density", self.init_density),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// True iff `a` dominates `b`: no worse in both objectives and strictly
/// better in at least one (log-likelihood maximized, arcs minimized).
pub fn dominates(a: &Individual, b: &Individual) -> bool {
    dominates_objectives(a.objectives(), b.objectives())
}

/// Domination on raw objective pairs (log-likelihood, arcs).
pub fn dominates_objectives(a: (f64, usize), b: (f64, usize)) -> bool {
    a.0 >= b.0 && a.1 <= b.1 && (a.0 > b.0 || a.1 < b.1)
}

/// Partitions the population into non-domination fronts and assigns
/// `Individual::rank` (1-based). Front k is the non-dominated set after
/// removing fronts 1..k-1; indices within a front are ascending.
pub fn fast_non_dominated_sort(population: &mut [Individual]) -> Result<Vec<Vec<usize>>> {
    if population.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let q = population.len();
    let mut dominated: Vec<Vec<usize>> = vec![Vec::new(); q];
    let mut dominator_count = vec![0usize; q];
    for i in 0..q {
        for j in (i + 1)..q {
            if dominates(&population[i], &population[j]) {
                dominated[i].push(j);
                dominator_count[j] += 1;
            } else if dominates(&population[j], &population[i]) {
                dominated[j].push(i);
                dominator_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..q).filter(|&i| dominator_count[i] == 0).collect();
    let mut rank = 1;
    while !current.is_empty() {
        for &i in &current {
            population[i].rank = Some(rank);
        }
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated[i] {
                dominator_count[j] -= 1;
                if dominator_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
        rank += 1;
    }
    Ok(fronts)
}

/// Crowding distances for the front members `front` (indices into
/// `population`), in front order. Boundary members of each objective's sort
/// get +infinity; interior members accumulate the normalized gap between
/// their neighbors. A zero-range objective contributes nothing to interiors.
pub fn crowding_distances(population: &[Individual], front: &[usize]) -> Vec<f64> {
    let k = front.len();
    if k <= 2 {
        return vec![f64::INFINITY; k];
    }
    let mut distances = vec![0.0f64; k];
    for objective in 0..2 {
        let value = |slot: usize| -> f64 {
            let ind = &population[front[slot]];
            match objective {
                0 => ind.log_likelihood,
                _ => ind.arcs as f64,
            }
        };
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| value(a).partial_cmp(&value(b)).unwrap_or(Ordering::Equal));
        distances[order[0]] = f64::INFINITY;
        distances[order[k - 1]] = f64::INFINITY;
        let range = value(order[k - 1]) - value(order[0]);
        if range > 0.0 {
            for i in 1..(k - 1) {
                let d = &mut distances[order[i]];
                if d.is_finite() {
                    *d += (value(order[i + 1]) - value(order[i - 1])) / range;
                }
            }
        }
    }
    distances
}

/// Writes crowding distances back onto the front's individuals.
pub fn assign_crowding(population: &mut [Individual], front: &[usize]) {
    let distances = crowding_distances(population, front);
    for (&i, d) in front.iter().zip(distances) {
        population[i].crowding = Some(d);
    }
}

/// Crowded-comparison: lower rank wins; equal rank prefers the larger
/// crowding distance; `Ordering::Less` means `a` is the better individual.
pub fn crowded_compare(a: &Individual, b: &Individual) -> Result<Ordering> {
    let (ra, rb) = (a.rank.ok_or(Error::RankNotAssigned)?, b.rank.ok_or(Error::RankNotAssigned)?);
    if ra != rb {
        return Ok(ra.cmp(&rb));
    }
    let ca = a.crowding.unwrap_or(0.0);
    let cb = b.crowding.unwrap_or(0.0);
    Ok(cb.partial_cmp(&ca).unwrap_or(Ordering::Equal))
}

fn tournament<R: Rng + ?Sized>(population: &[Individual], rng: &mut R) -> Result<usize> {
    let i = rng.gen_range(0..population.len());
    let j = rng.gen_range(0..population.len());
    Ok(match crowded_compare(&population[i], &population[j])? {
        Ordering::Less => i,
        Ordering::Greater => j,
        Ordering::Equal => {
            if rng.gen::<bool>() {
                i
            } else {
                j
            }
        }
    })
}

fn crossover<R: Rng + ?Sized>(
    a: &Genome,
    b: &Genome,
    kind: CrossoverKind,
    rng: &mut R,
) -> (Genome, Genome) {
    let n = a.n();
    let len = a.len();
    let mut bits_a = a.bits().to_vec();
    let mut bits_b = b.bits().to_vec();
    match kind {
        CrossoverKind::SinglePoint => {
            let cut = rng.gen_range(1..len);
            for p in cut..len {
                std::mem::swap(&mut bits_a[p], &mut bits_b[p]);
            }
        }
        CrossoverKind::Uniform => {
            for p in 0..len {
                if rng.gen::<bool>() {
                    std::mem::swap(&mut bits_a[p], &mut bits_b[p]);
                }
            }
        }
    }
    (
        Genome::new(n, bits_a).expect("crossover preserves length"),
        Genome::new(n, bits_b).expect("crossover preserves length"),
    )
}

fn mutate<R: Rng + ?Sized>(genome: &mut Genome, p_mutation: f64, rng: &mut R) {
    for position in 0..genome.len() {
        let u: f64 = rng.gen();
        if u < p_mutation {
            genome.flip_bit(position);
        }
    }
}

/// Builds Q offspring from a ranked population: binary tournaments pick two
/// parents, crossover applies with probability `p_crossover` (otherwise the
/// parents are cloned), every bit then flips with probability `p_mutation`,
/// and each child is repaired and evaluated.
pub fn make_offspring<R: Rng + ?Sized>(
    parents: &[Individual],
    config: &Nsga2Config,
    data: &Dataset,
    rng: &mut R,
) -> Result<Vec<Individual>> {
    let q = config.population_size;
    let mut offspring = Vec::with_capacity(q);
    while offspring.len() < q {
        let first = tournament(parents, rng)?;
        let second = tournament(parents, rng)?;
        let u: f64 = rng.gen();
        let (mut child_a, mut child_b) = if u < config.p_crossover {
            crossover(&parents[first].genome, &parents[second].genome, config.crossover, rng)
        } else {
            (parents[first].genome.clone(), parents[second].genome.clone())
        };
        mutate(&mut child_a, config.p_mutation, rng);
        mutate(&mut child_b, config.p_mutation, rng);
        offspring.push(Individual::from_genome(child_a, data, rng)?);
        if offspring.len() < q {
            offspring.push(Individual::from_genome(child_b, data, rng)?);
        }
    }
    Ok(offspring)
}

/// The rank-1 front of a population, sorted by ascending arc count with
/// ties broken by descending log-likelihood.
#[derive(Debug, Clone)]
pub struct ParetoFront {
    members: Vec<Individual>,
}

impl ParetoFront {
    pub fn new(mut members: Vec<Individual>) -> Self {
        members.sort_by(|a, b| {
            a.arcs
                .cmp(&b.arcs)
                .then_with(|| b.log_likelihood.partial_cmp(&a.log_likelihood).unwrap_or(Ordering::Equal))
        });
        debug_assert!(
            members.iter().enumerate().all(|(i, a)| {
                members.iter().enumerate().all(|(j, b)| i == j || !dominates(a, b))
            }),
            "front members must be mutually non-dominated"
        );
        Self { members }
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Highest log-likelihood in the front.
    pub fn best_log_likelihood(&self) -> Option<f64> {
        self.members.iter().map(|m| m.log_likelihood).fold(None, |acc, v| {
            Some(acc.map_or(v, |a: f64| a.max(v)))
        })
    }

    pub fn min_arcs(&self) -> Option<usize> {
        self.members.iter().map(|m| m.arcs).min()
    }
}

/// Objective statistics recorded after every generation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_log_likelihood: f64,
    pub median_log_likelihood: f64,
    pub best_arcs: usize,
    pub front_size: usize,
}

#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub front: ParetoFront,
    /// One entry for the initial population plus one per generation.
    pub trace: Vec<GenerationStats>,
}

fn population_stats(population: &[Individual], generation: usize) -> GenerationStats {
    let mut lls: Vec<f64> = population.iter().map(|i| i.log_likelihood).collect();
    lls.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let median = if lls.len() % 2 == 1 {
        lls[lls.len() / 2]
    } else {
        (lls[lls.len() / 2 - 1] + lls[lls.len() / 2]) / 2.0
    };
    GenerationStats {
        generation,
        best_log_likelihood: *lls.last().expect("nonempty population"),
        median_log_likelihood: median,
        best_arcs: population.iter().map(|i| i.arcs).min().expect("nonempty population"),
        front_size: population.iter().filter(|i| i.rank == Some(1)).count(),
    }
}

/// Runs the full elitist loop and returns the final rank-1 front plus the
/// per-generation trace. With `generations = 0` this is the non-dominated
/// set of the initial population. Identical config, dataset and rng state
/// give identical results.
pub fn evolve<R: Rng + ?Sized>(
    data: &Dataset,
    config: &Nsga2Config,
    rng: &mut R,
) -> Result<EvolveResult> {
    config.validate()?;
    let n = data.n();
    let genome_len = n * n.saturating_sub(1);
    let q = config.population_size;

    let mut population = Vec::with_capacity(q);
    for _ in 0..q {
        let bits = (0..genome_len)
            .map(|_| {
                let u: f64 = rng.gen();
                u < config.init_density
            })
            .collect();
        let genome = Genome::new(n, bits).expect("init bits have genome length");
        population.push(Individual::from_genome(genome, data, rng)?);
    }
    let fronts = fast_non_dominated_sort(&mut population)?;
    for front in &fronts {
        assign_crowding(&mut population, front);
    }

    let mut trace = Vec::with_capacity(config.generations + 1);
    trace.push(population_stats(&population, 0));

    for generation in 1..=config.generations {
        let offspring = make_offspring(&population, config, data, rng)?;
        let mut union = population;
        union.extend(offspring);
        let fronts = fast_non_dominated_sort(&mut union)?;

        debug_assert!(fronts[0].iter().all(|&i| {
            fronts[0].iter().all(|&j| i == j || !dominates(&union[i], &union[j]))
        }));

        let mut next = Vec::with_capacity(q);
        for front in &fronts {
            assign_crowding(&mut union, front);
            let remaining = q - next.len();
            if front.len() <= remaining {
                next.extend(front.iter().map(|&i| union[i].clone()));
            } else {
                let mut order = front.clone();
                order.sort_by(|&a, &b| {
                    let ca = union[a].crowding.unwrap_or(0.0);
                    let cb = union[b].crowding.unwrap_or(0.0);
                    cb.partial_cmp(&ca).unwrap_or(Ordering::Equal)
                });
                next.extend(order.into_iter().take(remaining).map(|i| union[i].clone()));
            }
            if next.len() == q {
                break;
            }
        }
        population = next;
        trace.push(population_stats(&population, generation));
    }

    let front_members: Vec<Individual> =
        population.iter().filter(|i| i.rank == Some(1)).cloned().collect();
    Ok(EvolveResult { front: ParetoFront::new(front_members), trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{forward_sample, random_cpts, random_dag};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn point(ll: f64, arcs: usize) -> Individual {
        Individual {
            genome: Genome::zeros(2),
            dag: Dag::empty(2),
            log_likelihood: ll,
            arcs,
            rank: None,
            crowding: None,
        }
    }

    #[test]
    fn domination_examples() {
        assert!(dominates(&point(-10.0, 3), &point(-12.0, 5)));
        assert!(!dominates(&point(-10.0, 3), &point(-10.0, 3)));
        assert!(!dominates(&point(-10.0, 5), &point(-12.0, 3)));
        assert!(!dominates(&point(-12.0, 3), &point(-10.0, 5)));
        // Equal in one objective, better in the other.
        assert!(dominates(&point(-10.0, 3), &point(-10.0, 4)));
    }

    #[test]
    fn sort_small_cases() {
        let mut single = vec![point(-5.0, 2)];
        let fronts = fast_non_dominated_sort(&mut single).unwrap();
        assert_eq!(fronts, vec![vec![0]]);
        assert_eq!(single[0].rank, Some(1));

        let mut two = vec![point(-10.0, 3), point(-12.0, 5)];
        let fronts = fast_non_dominated_sort(&mut two).unwrap();
        assert_eq!(fronts, vec![vec![0], vec![1]]);
        assert_eq!(two[1].rank, Some(2));

        assert!(matches!(fast_non_dominated_sort(&mut []), Err(Error::EmptyPopulation)));
    }

    /// O(Q^3) oracle: repeatedly peel off the non-dominated subset.
    fn peel_off_oracle(points: &[(f64, usize)]) -> Vec<Vec<usize>> {
        let mut remaining: Vec<usize> = (0..points.len()).collect();
        let mut fronts = Vec::new();
        while !remaining.is_empty() {
            let front: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&i| {
                    !remaining
                        .iter()
                        .any(|&j| j != i && dominates_objectives(points[j], points[i]))
                })
                .collect();
            remaining.retain(|i| !front.contains(i));
            fronts.push(front);
        }
        fronts
    }

    #[test]
    fn sort_matches_peel_off_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let size = rng.gen_range(1..=50);
            let mut population: Vec<Individual> = (0..size)
                .map(|_| point(-(rng.gen_range(0..40) as f64), rng.gen_range(0..12)))
                .collect();
            let points: Vec<(f64, usize)> =
                population.iter().map(|p| p.objectives()).collect();
            let fronts = fast_non_dominated_sort(&mut population).unwrap();
            assert_eq!(fronts, peel_off_oracle(&points));
        }
    }

    #[test]
    fn crowding_small_fronts_are_infinite() {
        let population = vec![point(-1.0, 1), point(-2.0, 0)];
        let distances = crowding_distances(&population, &[0, 1]);
        assert!(distances.iter().all(|d| d.is_infinite()));
    }

    #[test]
    fn crowding_hand_example() {
        // Raw objective pairs (1,4), (2,2), (4,1): the middle member gets
        // (4-1)/(4-1) + (4-1)/(4-1) = 2.
        let population = vec![point(1.0, 4), point(2.0, 2), point(4.0, 1)];
        let distances = crowding_distances(&population, &[0, 1, 2]);
        assert!(distances[0].is_infinite());
        assert!(distances[2].is_infinite());
        assert!((distances[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn crowding_identical_values() {
        let population = vec![point(-3.0, 2), point(-3.0, 2), point(-3.0, 2), point(-3.0, 2)];
        let distances = crowding_distances(&population, &[0, 1, 2, 3]);
        assert!(distances[0].is_infinite());
        assert!(distances[3].is_infinite());
        assert_eq!(distances[1], 0.0);
        assert_eq!(distances[2], 0.0);
    }

    #[test]
    fn crowded_compare_cases() {
        let mut a = point(-1.0, 1);
        let mut b = point(-2.0, 2);
        assert!(matches!(crowded_compare(&a, &b), Err(Error::RankNotAssigned)));

        a.rank = Some(1);
        b.rank = Some(2);
        assert_eq!(crowded_compare(&a, &b).unwrap(), Ordering::Less);

        b.rank = Some(1);
        a.crowding = Some(f64::INFINITY);
        b.crowding = Some(0.5);
        assert_eq!(crowded_compare(&a, &b).unwrap(), Ordering::Less);

        a.crowding = Some(0.5);
        assert_eq!(crowded_compare(&a, &b).unwrap(), Ordering::Equal);
    }

    fn tiny_dataset(seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth = random_dag(4, 0.5, &mut rng);
        let bn = random_cpts(&truth, &[2; 4], &mut rng);
        forward_sample(&bn, 60, &mut rng)
    }

    fn ranked_population(data: &Dataset, q: usize, seed: u64) -> Vec<Individual> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = data.n();
        let mut population: Vec<Individual> = (0..q)
            .map(|_| {
                let bits = (0..n * (n - 1)).map(|_| rng.gen::<f64>() < 0.3).collect();
                Individual::from_genome(Genome::new(n, bits).unwrap(), data, &mut rng).unwrap()
            })
            .collect();
        let fronts = fast_non_dominated_sort(&mut population).unwrap();
        for front in &fronts {
            assign_crowding(&mut population, front);
        }
        population
    }

    #[test]
    fn offspring_without_variation_are_parent_clones() {
        let data = tiny_dataset(3);
        let parents = ranked_population(&data, 8, 4);
        let config = Nsga2Config {
            p_crossover: 0.0,
            p_mutation: 0.0,
            ..Nsga2Config::default_for(4)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let offspring = make_offspring(&parents, &config, &data, &mut rng).unwrap();
        assert_eq!(offspring.len(), config.population_size);
        for child in &offspring {
            assert!(parents.iter().any(|p| p.genome == child.genome));
        }
    }

    #[test]
    fn forced_mutation_complements_the_intermediate() {
        let data = tiny_dataset(6);
        // All parents share one genome, so the post-selection intermediate is
        // known regardless of tournament outcomes.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shared = Genome::encode(&random_dag(4, 0.4, &mut rng));
        let mut parents: Vec<Individual> = (0..6)
            .map(|_| Individual::from_genome(shared.clone(), &data, &mut rng).unwrap())
            .collect();
        let fronts = fast_non_dominated_sort(&mut parents).unwrap();
        for front in &fronts {
            assign_crowding(&mut parents, front);
        }
        let config = Nsga2Config {
            population_size: 6,
            p_crossover: 0.0,
            p_mutation: 1.0,
            ..Nsga2Config::default_for(4)
        };
        let offspring = make_offspring(&parents, &config, &data, &mut rng).unwrap();
        let complement: Vec<bool> = shared.bits().iter().map(|&b| !b).collect();
        for child in &offspring {
            assert_eq!(child.genome.bits(), complement.as_slice());
        }
    }

    #[test]
    fn offspring_satisfy_individual_invariants() {
        let data = tiny_dataset(8);
        let parents = ranked_population(&data, 10, 9);
        let config = Nsga2Config { population_size: 10, ..Nsga2Config::default_for(4) };
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let offspring = make_offspring(&parents, &config, &data, &mut rng).unwrap();
            for child in &offspring {
                assert!(crate::model::is_acyclic(child.dag.n(), child.dag.edges()));
                assert_eq!(child.arcs, child.dag.edge_count());
                let decoded = child.genome.decode_unchecked();
                assert!(child.dag.edges().iter().all(|e| decoded.contains(e)));
            }
        }
    }

    #[test]
    fn zero_generations_returns_initial_front() {
        let data = tiny_dataset(11);
        let config = Nsga2Config {
            population_size: 12,
            generations: 0,
            ..Nsga2Config::default_for(4)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let result = evolve(&data, &config, &mut rng).unwrap();
        assert_eq!(result.trace.len(), 1);
        assert!(!result.front.is_empty());
        for member in result.front.members() {
            assert_eq!(member.rank, Some(1));
        }
    }

    #[test]
    fn elitism_gives_monotone_traces() {
        for seed in 0..20 {
            let data = tiny_dataset(100 + seed);
            let config = Nsga2Config {
                population_size: 16,
                generations: 25,
                ..Nsga2Config::default_for(4)
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let result = evolve(&data, &config, &mut rng).unwrap();
            for window in result.trace.windows(2) {
                assert!(window[1].best_log_likelihood >= window[0].best_log_likelihood - 1e-12);
                assert!(window[1].best_arcs <= window[0].best_arcs);
            }
        }
    }

    #[test]
    fn evolve_is_deterministic() {
        let data = tiny_dataset(13);
        let config = Nsga2Config {
            population_size: 10,
            generations: 8,
            ..Nsga2Config::default_for(4)
        };
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let result = evolve(&data, &config, &mut rng).unwrap();
            result
                .front
                .members()
                .iter()
                .map(|m| (m.genome.clone(), m.log_likelihood, m.arcs))
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn config_validation() {
        let mut config = Nsga2Config::default_for(4);
        assert!(config.validate().is_ok());
        config.population_size = 3;
        assert!(config.validate().is_err());
        config.population_size = 7;
        assert!(config.validate().is_err());
        config.population_size = 8;
        config.p_mutation = 1.5;
        assert!(config.validate().is_err());
    }

    #[test]
    fn front_ordering_and_accessors() {
        let front = ParetoFront::new(vec![point(-5.0, 4), point(-9.0, 1), point(-7.0, 2)]);
        let arcs: Vec<usize> = front.members().iter().map(|m| m.arcs).collect();
        assert_eq!(arcs, vec![1, 2, 4]);
        assert_eq!(front.min_arcs(), Some(1));
        assert_eq!(front.best_log_likelihood(), Some(-5.0));
    }
}
