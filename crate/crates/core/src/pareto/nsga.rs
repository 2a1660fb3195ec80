//! NSGA: front-wise dummy fitness with niche sharing, driving the same path
//! crossover and mutation as the scalar GA. All evaluated feasible paths feed
//! an external cumulative archive.

use serde::{Deserialize, Serialize};

use super::archive::{ArchiveEntry, ParetoArchive};
use super::dominance::{nondominated_sort, normalize, shared_fitness, ObjectiveVector};
use crate::error::{Error, Result};
use crate::genetic::{
    generation_stream, initial_population, rng_stream, vary, Chromosome, GaConfig, SelectionMethod, Selector,
};
use crate::qos::is_feasible;
use crate::topology::{RouteQuery, Topology};

/// Factor applied to a front's smallest shared fitness to get the next front's dummy.
pub const DUMMY_DECAY: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NsgaParams {
    /// Niche radius in min-max normalized objective space.
    pub sigma_share: f64,
    pub population_size: usize,
    pub generations: u32,
}

impl Default for NsgaParams {
    fn default() -> Self {
        NsgaParams {
            sigma_share: 0.1,
            population_size: 50,
            generations: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveSnapshot {
    pub generation: u32,
    pub entries: Vec<ArchiveEntry>,
}

impl ArchiveSnapshot {
    pub fn front(&self) -> Vec<ObjectiveVector> {
        let mut a = ParetoArchive::new();
        for e in &self.entries {
            a.insert(&e.path, e.qos);
        }
        a.front()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsgaResult {
    pub archive: ParetoArchive,
    /// One per requested checkpoint, ascending.
    pub snapshots: Vec<ArchiveSnapshot>,
}

/// Selection fitness for every member of `population`. Feasible members are
/// sorted into fronts first; infeasible ones form the trailing fronts.
pub fn nsga_fitness(population: &[Chromosome], config: &GaConfig, sigma_share: f64) -> Vec<f64> {
    let objectives: Vec<ObjectiveVector> = population.iter().map(|c| ObjectiveVector::from(&c.qos)).collect();
    let normalized = normalize(&objectives);
    let (feasible, infeasible): (Vec<usize>, Vec<usize>) =
        (0..population.len()).partition(|&i| is_feasible(&population[i].qos, &config.constraints));

    let mut fronts = Vec::new();
    for group in [feasible, infeasible] {
        let vecs: Vec<ObjectiveVector> = group.iter().map(|&i| objectives[i].clone()).collect();
        for front in nondominated_sort(&vecs) {
            fronts.push(front.into_iter().map(|k| group[k]).collect::<Vec<usize>>());
        }
    }

    let mut fitness = vec![0.0; population.len()];
    let mut dummy = population.len() as f64;
    for front in &fronts {
        let shared = shared_fitness(front, &normalized, dummy, sigma_share);
        for (&i, &f) in front.iter().zip(&shared) {
            fitness[i] = f;
        }
        let least = shared.iter().copied().fold(f64::INFINITY, f64::min);
        dummy = DUMMY_DECAY * least;
    }
    fitness
}

/// Runs NSGA for `params.generations` generations and snapshots the archive
/// after each generation listed in `checkpoints` (0 means the initial
/// population).
pub fn nsga_evolve(
    topology: &Topology,
    query: &RouteQuery,
    config: &GaConfig,
    params: &NsgaParams,
    checkpoints: &[u32],
) -> Result<NsgaResult> {
    if !(params.sigma_share > 0.0) {
        return Err(Error::param("sigma_share must be > 0"));
    }
    let config = GaConfig {
        population_size: params.population_size,
        generations: params.generations,
        ..*config
    };
    config.validate()?;
    let mut checkpoints = checkpoints.to_vec();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    if let Some(&last) = checkpoints.last() {
        if last > params.generations {
            return Err(Error::param(format!(
                "checkpoint {last} exceeds generation count {}",
                params.generations
            )));
        }
    }

    let mut archive = ParetoArchive::new();
    let mut snapshots = Vec::new();
    let mut population = initial_population(topology, query, &config)?;
    let feed = |archive: &mut ParetoArchive, pop: &[Chromosome]| {
        for c in pop {
            if c.is_feasible(&config.constraints) {
                archive.insert(&c.path, c.qos);
            }
        }
    };
    feed(&mut archive, &population);
    let snap = |g: u32, archive: &ParetoArchive, snapshots: &mut Vec<ArchiveSnapshot>| {
        if checkpoints.binary_search(&g).is_ok() {
            snapshots.push(ArchiveSnapshot {
                generation: g,
                entries: archive.sorted_entries(),
            });
        }
    };
    snap(0, &archive, &mut snapshots);

    let model = config.cost_model();
    for g in 0..params.generations {
        let fitness = nsga_fitness(&population, &config, params.sigma_share);
        let selector = Selector::new(SelectionMethod::RouletteWheel, &fitness, g, &config.selection_params)?;
        let mut rng = rng_stream(config.seed, generation_stream(g, 0));
        let mut offspring = Vec::with_capacity(config.population_size);
        while offspring.len() < config.population_size {
            let a = &population[selector.pick(&mut rng)].path;
            let b = &population[selector.pick(&mut rng)].path;
            for child in vary(topology, query, &config, a, b, &mut rng) {
                if offspring.len() < config.population_size {
                    offspring.push(model.evaluate(topology, child)?);
                }
            }
        }
        feed(&mut archive, &offspring);
        population = offspring;
        snap(g + 1, &archive, &mut snapshots);
    }

    Ok(NsgaResult { archive, snapshots })
}
