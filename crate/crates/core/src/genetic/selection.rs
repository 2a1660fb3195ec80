//! The six parent-selection operators. All of them work on the transformed
//! fitness `1/(1+cost)`, so a lower cost means a higher selection chance.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Chromosome, SelectionParams};
use crate::error::{Error, Result};
use crate::qos::cost_to_fitness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SelectionMethod {
    #[serde(rename = "RWS")]
    RouletteWheel,
    #[serde(rename = "TS")]
    Tournament,
    #[serde(rename = "SSS")]
    SteadyState,
    #[serde(rename = "BS")]
    Boltzmann,
    #[serde(rename = "SigSS")]
    SigmaScaling,
    #[serde(rename = "RS")]
    Rank,
}

impl SelectionMethod {
    /// Fixed order; also the tie-break order when two methods reach the same best cost.
    pub const ALL: [SelectionMethod; 6] = [
        SelectionMethod::RouletteWheel,
        SelectionMethod::Tournament,
        SelectionMethod::SteadyState,
        SelectionMethod::Boltzmann,
        SelectionMethod::SigmaScaling,
        SelectionMethod::Rank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SelectionMethod::RouletteWheel => "RWS",
            SelectionMethod::Tournament => "TS",
            SelectionMethod::SteadyState => "SSS",
            SelectionMethod::Boltzmann => "BS",
            SelectionMethod::SigmaScaling => "SigSS",
            SelectionMethod::Rank => "RS",
        }
    }

    /// 1-based position in [`SelectionMethod::ALL`].
    pub fn index(self) -> usize {
        SelectionMethod::ALL.iter().position(|&m| m == self).unwrap() + 1
    }
}

impl fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SelectionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SelectionMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param(format!("unknown selection method `{s}`")))
    }
}

/// Precomputed sampling state for one method over one population.
#[derive(Debug, Clone)]
pub struct Selector {
    kind: SelectorKind,
}

#[derive(Debug, Clone)]
enum SelectorKind {
    /// Roulette over cumulative weights.
    Wheel(Vec<f64>),
    Tournament {
        fitness: Vec<f64>,
        size: usize,
    },
    /// Uniform over a fixed pool of indices.
    Pool(Vec<usize>),
}

impl Selector {
    pub fn new(
        method: SelectionMethod,
        fitness: &[f64],
        generation: u32,
        params: &SelectionParams,
    ) -> Result<Selector> {
        if fitness.is_empty() {
            return Err(Error::param("cannot select from an empty population"));
        }
        let n = fitness.len();
        let kind = match method {
            SelectionMethod::RouletteWheel => SelectorKind::Wheel(cumulative(fitness.iter().copied())),
            SelectionMethod::Tournament => SelectorKind::Tournament {
                fitness: fitness.to_vec(),
                size: params.tournament_size.max(1),
            },
            SelectionMethod::Rank => {
                let order = ascending_by_fitness(fitness);
                let s = params.rank_pressure;
                let mut weights = vec![0.0; n];
                for (rank, &i) in order.iter().enumerate() {
                    weights[i] = if n == 1 {
                        1.0
                    } else {
                        (2.0 - s) / n as f64 + 2.0 * rank as f64 * (s - 1.0) / (n as f64 * (n as f64 - 1.0))
                    };
                }
                SelectorKind::Wheel(cumulative(weights.into_iter()))
            }
            SelectionMethod::SteadyState => {
                let mut order = ascending_by_fitness(fitness);
                order.reverse();
                let keep = ((params.steady_state_fraction * n as f64).ceil() as usize).clamp(1, n);
                order.truncate(keep);
                SelectorKind::Pool(order)
            }
            SelectionMethod::SigmaScaling => {
                let mean = fitness.iter().sum::<f64>() / n as f64;
                let var = fitness.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / n as f64;
                let sigma = var.sqrt();
                let weights = fitness.iter().map(|&f| {
                    if sigma == 0.0 {
                        1.0
                    } else {
                        (1.0 + (f - mean) / (2.0 * sigma)).max(params.sigma_floor)
                    }
                });
                SelectorKind::Wheel(cumulative(weights))
            }
            SelectionMethod::Boltzmann => {
                let t = boltzmann_temperature(params, generation);
                let fmax = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                // shifted by fmax: same proportions as exp(f/T), no overflow
                SelectorKind::Wheel(cumulative(fitness.iter().map(|&f| ((f - fmax) / t).exp())))
            }
        };
        Ok(Selector { kind })
    }

    pub fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match &self.kind {
            SelectorKind::Wheel(cum) => {
                let total = *cum.last().unwrap();
                let u = rng.gen::<f64>() * total;
                cum.partition_point(|&c| c <= u).min(cum.len() - 1)
            }
            SelectorKind::Tournament { fitness, size } => {
                let mut best = rng.gen_range(0..fitness.len());
                for _ in 1..*size {
                    let i = rng.gen_range(0..fitness.len());
                    if fitness[i] > fitness[best] {
                        best = i;
                    }
                }
                best
            }
            SelectorKind::Pool(pool) => pool[rng.gen_range(0..pool.len())],
        }
    }
}

pub fn boltzmann_temperature(params: &SelectionParams, generation: u32) -> f64 {
    params.boltzmann_t0 * params.boltzmann_decay.powi(generation as i32)
}

fn cumulative(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

/// Indices from worst to best fitness; ties keep the lower index first.
fn ascending_by_fitness(fitness: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| fitness[a].total_cmp(&fitness[b]).then(b.cmp(&a)));
    order
}

pub fn fitness_of(population: &[Chromosome]) -> Vec<f64> {
    population
        .iter()
        .map(|c| cost_to_fitness(c.cost).unwrap_or(0.0))
        .collect()
}

/// Draws two parents (independently, with replacement) using `method`.
pub fn select_pair<'a, R: Rng + ?Sized>(
    population: &'a [Chromosome],
    method: SelectionMethod,
    generation: u32,
    params: &SelectionParams,
    rng: &mut R,
) -> Result<(&'a Chromosome, &'a Chromosome)> {
    let selector = Selector::new(method, &fitness_of(population), generation, params)?;
    let a = selector.pick(rng);
    let b = selector.pick(rng);
    Ok((&population[a], &population[b]))
}
