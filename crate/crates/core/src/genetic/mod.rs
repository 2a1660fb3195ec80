//! Adaptive genetic algorithm over explicit path chromosomes.
//!
//! Every generation builds one full candidate offspring population per
//! selection method, each from its own deterministically split RNG stream.
//! The population whose best cost is lowest is adopted, and the previous
//! generation's best chromosome replaces the adopted population's worst.

mod init;
mod operators;
mod priority;
mod selection;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qos::{
    is_feasible, path_qos, weighted_sum_cost, BandwidthRule, Constraints, QosVector, Weights, DEFAULT_PENALTY,
};
use crate::topology::{Path, RouteQuery, Topology};

pub use init::{random_paths, random_walk_path};
pub use operators::{common_nodes, crossover, crossover_at, mutate, mutate_through, remove_loops};
pub use priority::{decode_priority, DecodeOutcome, PriorityChromosome};
pub use selection::{boltzmann_temperature, fitness_of, select_pair, SelectionMethod, Selector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionParams {
    pub tournament_size: usize,
    /// Linear ranking pressure, in (1, 2].
    pub rank_pressure: f64,
    pub steady_state_fraction: f64,
    pub sigma_floor: f64,
    pub boltzmann_t0: f64,
    pub boltzmann_decay: f64,
}

impl Default for SelectionParams {
    fn default() -> Self {
        SelectionParams {
            tournament_size: 2,
            rank_pressure: 1.5,
            steady_state_fraction: 0.5,
            sigma_floor: 0.1,
            boltzmann_t0: 10.0,
            boltzmann_decay: 0.95,
        }
    }
}

impl SelectionParams {
    pub fn validate(&self) -> Result<()> {
        if self.tournament_size < 1 {
            return Err(Error::param("tournament_size must be >= 1"));
        }
        if !(self.rank_pressure > 1.0 && self.rank_pressure <= 2.0) {
            return Err(Error::param("rank_pressure must lie in (1, 2]"));
        }
        if !(self.steady_state_fraction > 0.0 && self.steady_state_fraction < 1.0) {
            return Err(Error::param("steady_state_fraction must lie in (0, 1)"));
        }
        if !(self.sigma_floor > 0.0) {
            return Err(Error::param("sigma_floor must be > 0"));
        }
        if !(self.boltzmann_t0 > 0.0) {
            return Err(Error::param("boltzmann_t0 must be > 0"));
        }
        if !(self.boltzmann_decay > 0.0 && self.boltzmann_decay < 1.0) {
            return Err(Error::param("boltzmann_decay must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: u32,
    pub crossover_prob: f64,
    /// Chance that an offspring path goes through mutation once.
    pub mutation_prob: f64,
    pub weights: Weights,
    pub constraints: Constraints,
    pub bandwidth_rule: BandwidthRule,
    pub penalty: f64,
    pub seed: u64,
    pub selection_params: SelectionParams,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            generations: 100,
            crossover_prob: 0.75,
            mutation_prob: 0.01,
            weights: Weights::default(),
            constraints: Constraints::default(),
            bandwidth_rule: BandwidthRule::default(),
            penalty: DEFAULT_PENALTY,
            seed: 0,
            selection_params: SelectionParams::default(),
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::param("population_size must be >= 2"));
        }
        if self.generations < 1 {
            return Err(Error::param("generations must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return Err(Error::param("crossover probability must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.mutation_prob) {
            return Err(Error::param("mutation probability must lie in [0, 1]"));
        }
        if !(self.penalty >= 0.0) {
            return Err(Error::param("penalty must be >= 0"));
        }
        self.weights.validate()?;
        self.constraints.validate()?;
        self.selection_params.validate()
    }

    pub fn cost_model(&self) -> CostModel {
        CostModel {
            weights: self.weights,
            constraints: self.constraints,
            bandwidth_rule: self.bandwidth_rule,
            penalty: self.penalty,
        }
    }
}

/// Everything needed to turn a path into a cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub weights: Weights,
    pub constraints: Constraints,
    pub bandwidth_rule: BandwidthRule,
    pub penalty: f64,
}

impl CostModel {
    pub fn evaluate(&self, topology: &Topology, path: Path) -> Result<Chromosome> {
        let qos = path_qos(topology, &path, self.bandwidth_rule)?;
        let cost = weighted_sum_cost(&qos, &self.weights, &self.constraints, self.penalty);
        Ok(Chromosome { path, cost, qos })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chromosome {
    pub path: Path,
    pub cost: f64,
    pub qos: QosVector,
}

impl Chromosome {
    pub fn is_feasible(&self, c: &Constraints) -> bool {
        is_feasible(&self.qos, c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    /// 1-based.
    pub generation: u32,
    pub chosen_method: SelectionMethod,
    /// Best offspring cost per method, in [`SelectionMethod::ALL`] order.
    pub method_best_costs: [f64; 6],
    pub population_best_cost: f64,
    pub population_best_path: Path,
}

impl GenerationReport {
    pub fn best_cost_of(&self, m: SelectionMethod) -> f64 {
        self.method_best_costs[m.index() - 1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolveResult {
    pub best: Chromosome,
    /// Best cost in the initial population, before any selection.
    pub initial_best_cost: f64,
    pub trace: Vec<GenerationReport>,
    pub final_population: Vec<Chromosome>,
}

/// Position of the lowest cost; first one wins ties.
pub(crate) fn best_index(pop: &[Chromosome]) -> usize {
    let mut best = 0;
    for (i, c) in pop.iter().enumerate().skip(1) {
        if c.cost < pop[best].cost {
            best = i;
        }
    }
    best
}

/// Position of the highest cost; last one wins ties.
fn worst_index(pop: &[Chromosome]) -> usize {
    let mut worst = 0;
    for (i, c) in pop.iter().enumerate().skip(1) {
        if c.cost >= pop[worst].cost {
            worst = i;
        }
    }
    worst
}

/// Independent ChaCha stream `stream` under the run seed.
pub(crate) fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const INIT_STREAM: u64 = 0;

pub(crate) fn generation_stream(generation: u32, lane: usize) -> u64 {
    1 + u64::from(generation) * SelectionMethod::ALL.len() as u64 + lane as u64
}

pub fn initial_population(topology: &Topology, query: &RouteQuery, config: &GaConfig) -> Result<Vec<Chromosome>> {
    let mut rng = rng_stream(config.seed, INIT_STREAM);
    let model = config.cost_model();
    random_paths(topology, query, config.population_size, &mut rng)?
        .into_iter()
        .map(|p| model.evaluate(topology, p))
        .collect()
}

/// Crossover with probability `crossover_prob`, then mutation of each child
/// with probability `mutation_prob`.
pub(crate) fn vary<R: Rng + ?Sized>(
    topology: &Topology,
    query: &RouteQuery,
    config: &GaConfig,
    a: &Path,
    b: &Path,
    rng: &mut R,
) -> [Path; 2] {
    let (c1, c2) = if rng.gen::<f64>() < config.crossover_prob {
        crossover(topology, query, a, b, rng)
    } else {
        (a.clone(), b.clone())
    };
    [c1, c2].map(|c| {
        if rng.gen::<f64>() < config.mutation_prob {
            mutate(topology, query, &c, rng)
        } else {
            c
        }
    })
}

fn offspring_for(
    topology: &Topology,
    query: &RouteQuery,
    config: &GaConfig,
    population: &[Chromosome],
    method: SelectionMethod,
    generation: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Chromosome>> {
    let model = config.cost_model();
    let selector = Selector::new(method, &fitness_of(population), generation, &config.selection_params)?;
    let mut out = Vec::with_capacity(config.population_size);
    while out.len() < config.population_size {
        let a = &population[selector.pick(rng)].path;
        let b = &population[selector.pick(rng)].path;
        for child in vary(topology, query, config, a, b, rng) {
            if out.len() < config.population_size {
                out.push(model.evaluate(topology, child)?);
            }
        }
    }
    Ok(out)
}

/// Runs the adaptive GA for `config.generations` generations.
pub fn evolve(topology: &Topology, query: &RouteQuery, config: &GaConfig) -> Result<EvolveResult> {
    config.validate()?;
    let mut population = initial_population(topology, query, config)?;
    let initial_best_cost = population[best_index(&population)].cost;
    let mut trace = Vec::with_capacity(config.generations as usize);

    for g in 0..config.generations {
        let elite = population[best_index(&population)].clone();
        let mut candidates = Vec::with_capacity(SelectionMethod::ALL.len());
        let mut method_best_costs = [0.0; 6];
        for (lane, method) in SelectionMethod::ALL.into_iter().enumerate() {
            let mut rng = rng_stream(config.seed, generation_stream(g, lane));
            let offspring = offspring_for(topology, query, config, &population, method, g, &mut rng)?;
            method_best_costs[lane] = offspring[best_index(&offspring)].cost;
            candidates.push(offspring);
        }
        let mut chosen = 0;
        for lane in 1..method_best_costs.len() {
            if method_best_costs[lane] < method_best_costs[chosen] {
                chosen = lane;
            }
        }
        population = candidates.swap_remove(chosen);
        let worst = worst_index(&population);
        population[worst] = elite;

        let best = &population[best_index(&population)];
        trace.push(GenerationReport {
            generation: g + 1,
            chosen_method: SelectionMethod::ALL[chosen],
            method_best_costs,
            population_best_cost: best.cost,
            population_best_path: best.path.clone(),
        });
    }

    let best = population[best_index(&population)].clone();
    Ok(EvolveResult {
        best,
        initial_best_cost,
        trace,
        final_population: population,
    })
}

/// One JSON object per line, in generation order.
pub fn trace_to_jsonl(trace: &[GenerationReport]) -> String {
    let mut out = String::new();
    for r in trace {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}
