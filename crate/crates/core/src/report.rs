//! Plot-ready report files. Everything here is rendered to bytes in memory so
//! a command can fail without leaving a partial bundle behind.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use serde::Serialize;
use serde_json::json;

use crate::genetic::{Chromosome, EvolveResult, GenerationReport, SelectionMethod};
use crate::pareto::{hypervolume, ArchiveEntry, ArchiveSnapshot, ObjectiveVector, SweepPoint};
use crate::qos::{cost_to_fitness, Constraints, QosVector};
use crate::topology::Path;

/// Named files relative to an output directory.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Bundle {
    files: Vec<(String, Vec<u8>)>,
}

impl Bundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn add_json<T: Serialize>(&mut self, name: impl Into<String>, value: &T) {
        self.add(name, to_json_bytes(value));
    }

    pub fn files(&self) -> &[(String, Vec<u8>)] {
        &self.files
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    pub fn write_to(&self, dir: &FsPath) -> std::io::Result<()> {
        for (name, bytes) in &self.files {
            let target = dir.join(name);
            if let Some(parent) = target.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(target, bytes)?;
        }
        Ok(())
    }
}

pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("report serializes");
    out.push(b'\n');
    out
}

fn qos_json(q: &QosVector) -> serde_json::Value {
    json!({
        "delay_ms": q.delay,
        "bandwidth_mbps": q.bandwidth,
        "bandwidth_transformed": 1.0 / (1.0 + q.bandwidth),
        "hops": q.hops,
    })
}

pub fn best_json(best: &Chromosome, constraints: &Constraints) -> serde_json::Value {
    let mut v = qos_json(&best.qos);
    v["path"] = json!(best.path);
    v["cost"] = json!(best.cost);
    v["fitness"] = json!(cost_to_fitness(best.cost).unwrap_or(0.0));
    v["feasible"] = json!(best.is_feasible(constraints));
    v
}

/// Fitness curve: one row per generation, raw and normalized to the initial best.
pub fn trace_csv(result: &EvolveResult) -> String {
    let mut s = String::new();
    s.push_str("# normalized_cost = population_best_cost / initial_best_cost\n");
    let _ = writeln!(s, "# initial_best_cost = {}", result.initial_best_cost);
    s.push_str("generation,chosen_method,population_best_cost,normalized_cost");
    for m in SelectionMethod::ALL {
        let _ = write!(s, ",best_{}", m.name());
    }
    s.push_str(",population_best_path\n");
    for r in &result.trace {
        let norm = if result.initial_best_cost != 0.0 {
            r.population_best_cost / result.initial_best_cost
        } else {
            1.0
        };
        let _ = write!(
            s,
            "{},{},{},{}",
            r.generation, r.chosen_method, r.population_best_cost, norm
        );
        for c in r.method_best_costs {
            let _ = write!(s, ",{c}");
        }
        let _ = writeln!(s, ",{}", r.population_best_path);
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: SelectionMethod,
    pub maximum: f64,
    pub minimum: f64,
    pub times_chosen: usize,
}

/// Per-method maximum and minimum of the generation-best cost over a run.
pub fn method_summary(trace: &[GenerationReport]) -> Vec<MethodSummary> {
    SelectionMethod::ALL
        .into_iter()
        .map(|m| {
            let costs = trace.iter().map(|r| r.best_cost_of(m));
            MethodSummary {
                method: m,
                maximum: costs.clone().fold(f64::NEG_INFINITY, f64::max),
                minimum: costs.fold(f64::INFINITY, f64::min),
                times_chosen: trace.iter().filter(|r| r.chosen_method == m).count(),
            }
        })
        .collect()
}

pub fn methods_csv(trace: &[GenerationReport]) -> String {
    let mut s = String::from("index,method,maximum,minimum,times_chosen\n");
    for row in method_summary(trace) {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            row.method.index(),
            row.method,
            row.maximum,
            row.minimum,
            row.times_chosen
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedPathRow {
    pub name: String,
    pub path: Path,
    /// `None` when the path is not valid for the query.
    pub evaluated: Option<Chromosome>,
}

pub fn paths_csv(rows: &[NamedPathRow]) -> String {
    let mut s = String::from("name,path,valid,delay_ms,bandwidth_mbps,bandwidth_transformed,hops,cost,fitness\n");
    for r in rows {
        match &r.evaluated {
            Some(c) => {
                let _ = writeln!(
                    s,
                    "{},{},true,{},{},{},{},{},{}",
                    r.name,
                    r.path,
                    c.qos.delay,
                    c.qos.bandwidth,
                    1.0 / (1.0 + c.qos.bandwidth),
                    c.qos.hops,
                    c.cost,
                    cost_to_fitness(c.cost).unwrap_or(0.0)
                );
            }
            None => {
                let _ = writeln!(s, "{},{},false,,,,,,", r.name, r.path);
            }
        }
    }
    s
}

fn entry_json(e: &ArchiveEntry) -> serde_json::Value {
    let mut v = qos_json(&e.qos);
    v["path"] = json!(e.path);
    v
}

/// Front snapshot document; entries already sorted by (delay, hops, path).
pub fn front_json(snapshot: &ArchiveSnapshot, reference: &ObjectiveVector) -> serde_json::Value {
    let hv = hypervolume(&snapshot.front(), reference).unwrap_or(f64::NAN);
    json!({
        "generation": snapshot.generation,
        "reference_point": reference,
        "hypervolume": hv,
        "entries": snapshot.entries.iter().map(entry_json).collect::<Vec<_>>(),
    })
}

pub fn hypervolume_csv(snapshots: &[ArchiveSnapshot], reference: &ObjectiveVector) -> String {
    let mut s = String::from("generation,hypervolume,archive_size,front_size\n");
    for snap in snapshots {
        let front = snap.front();
        let hv = hypervolume(&front, reference).unwrap_or(f64::NAN);
        let _ = writeln!(s, "{},{},{},{}", snap.generation, hv, snap.entries.len(), front.len());
    }
    s
}

pub const SWEEP_HEADER: &str =
    "tag,sample,alpha1,alpha2,alpha3,path,delay_ms,bandwidth_mbps,bandwidth_transformed,hops,cost\n";

/// Scatter dataset: `fixed-weights` for sample 0, `random-weights` for the
/// rest, then `pareto-archive` rows.
pub fn sweep_csv(points: &[SweepPoint], archive: &[ArchiveEntry]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    for p in points {
        let tag = if p.sample == 0 {
            "fixed-weights"
        } else {
            "random-weights"
        };
        let q = &p.best.qos;
        let _ = writeln!(
            s,
            "{tag},{},{},{},{},{},{},{},{},{},{}",
            p.sample,
            p.weights.alpha1,
            p.weights.alpha2,
            p.weights.alpha3,
            p.best.path,
            q.delay,
            q.bandwidth,
            1.0 / (1.0 + q.bandwidth),
            q.hops,
            p.best.cost
        );
    }
    for e in archive {
        let q = &e.qos;
        let _ = writeln!(
            s,
            "pareto-archive,,,,,{},{},{},{},{},",
            e.path,
            q.delay,
            q.bandwidth,
            1.0 / (1.0 + q.bandwidth),
            q.hops
        );
    }
    s
}
