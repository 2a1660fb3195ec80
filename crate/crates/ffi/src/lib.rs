//! C ABI over `meshqos`.
//!
//! Objects cross the boundary as opaque handles created by `mq_*` constructors
//! and released with the matching `*_free`. Fallible calls return an
//! [`MqStatus`]; the message for the most recent failure on the calling thread
//! is available from [`mq_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use meshqos::genetic::{evolve, EvolveResult, GaConfig};
use meshqos::pareto::{default_reference, hypervolume, nsga_evolve, ArchiveEntry, NsgaParams, ObjectiveVector};
use meshqos::qos::{BandwidthRule, Constraints, Weights};
use meshqos::topology::{load_topology, save_topology, Area, NodeId, Path, RouteQuery, Topology, TopologyParams};
use meshqos::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqStatus {
    Ok = 0,
    NullPointer = 1,
    Parameter = 2,
    NoRoute = 3,
    Format = 4,
    Size = 5,
    Io = 6,
    InvalidPath = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqBandwidthRule {
    /// Path bandwidth is the largest node bandwidth.
    MaxNode = 0,
    /// Path bandwidth is the smallest node bandwidth.
    Bottleneck = 1,
}

/// Plain-data GA configuration; start from [`mq_ga_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MqGaConfig {
    pub population_size: u32,
    pub generations: u32,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub d_max: f64,
    pub b_min: f64,
    pub hops_max: u32,
    pub bandwidth_rule: MqBandwidthRule,
    pub seed: u64,
}

/// QoS of one path.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MqQos {
    pub delay_ms: f64,
    pub bandwidth_mbps: f64,
    pub hops: u32,
}

pub struct MqTopology(Topology);

pub struct MqRouteResult(EvolveResult);

pub struct MqParetoResult {
    entries: Vec<ArchiveEntry>,
    front: Vec<ObjectiveVector>,
    constraints: Constraints,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: MqStatus, msg: impl Into<String>) -> MqStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> MqStatus {
    let status = match &e {
        Error::Parameter(_) => MqStatus::Parameter,
        Error::Path(_) => MqStatus::InvalidPath,
        Error::NoRoute { .. } => MqStatus::NoRoute,
        Error::Format { .. } => MqStatus::Format,
        Error::Size { .. } => MqStatus::Size,
        Error::Io(_) => MqStatus::Io,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), MqStatus>) -> MqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MqStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(MqStatus::Panic, "internal panic"),
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, MqStatus> {
    // SAFETY: callers pass either null or a pointer obtained from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail(MqStatus::NullPointer, format!("{what} is null")))
}

fn write_out<T>(p: *mut T, what: &str, value: T) -> Result<(), MqStatus> {
    if p.is_null() {
        return Err(fail(MqStatus::NullPointer, format!("{what} is null")));
    }
    // SAFETY: a non-null out pointer must be valid for writes.
    unsafe { p.write(value) };
    Ok(())
}

fn boxed<T>(out: *mut *mut T, value: T) -> Result<(), MqStatus> {
    write_out(out, "out", Box::into_raw(Box::new(value)))?;
    Ok(())
}

fn copy_path(path: &Path, out: *mut u32, capacity: usize, len: *mut usize) -> Result<(), MqStatus> {
    write_out(len, "len", path.len())?;
    if capacity < path.len() {
        return Err(fail(
            MqStatus::BufferTooSmall,
            format!("path needs {} slots", path.len()),
        ));
    }
    if path.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(fail(MqStatus::NullPointer, "buffer is null"));
    }
    // SAFETY: `out` holds at least `capacity >= path.len()` elements.
    let buf = unsafe { std::slice::from_raw_parts_mut(out, path.len()) };
    for (slot, n) in buf.iter_mut().zip(path.nodes()) {
        *slot = n.0;
    }
    Ok(())
}

impl MqGaConfig {
    fn to_config(self) -> Result<GaConfig, MqStatus> {
        let weights = Weights::new(self.alpha1, self.alpha2, self.alpha3).map_err(from_error)?;
        let constraints = Constraints::new(self.d_max, self.b_min, self.hops_max).map_err(from_error)?;
        let cfg = GaConfig {
            population_size: self.population_size as usize,
            generations: self.generations,
            crossover_prob: self.crossover_prob,
            mutation_prob: self.mutation_prob,
            weights,
            constraints,
            bandwidth_rule: match self.bandwidth_rule {
                MqBandwidthRule::MaxNode => BandwidthRule::MaxNode,
                MqBandwidthRule::Bottleneck => BandwidthRule::BottleneckMin,
            },
            seed: self.seed,
            ..GaConfig::default()
        };
        cfg.validate().map_err(from_error)?;
        Ok(cfg)
    }
}

fn query(t: &Topology, source: u32, destination: u32) -> Result<RouteQuery, MqStatus> {
    RouteQuery::new(t, NodeId(source), NodeId(destination)).map_err(from_error)
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static, NUL-terminated library version.
#[no_mangle]
pub extern "C" fn mq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from [`mq_topology_save`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn mq_ga_config_default() -> MqGaConfig {
    let d = GaConfig::default();
    MqGaConfig {
        population_size: d.population_size as u32,
        generations: d.generations,
        crossover_prob: d.crossover_prob,
        mutation_prob: d.mutation_prob,
        alpha1: d.weights.alpha1,
        alpha2: d.weights.alpha2,
        alpha3: d.weights.alpha3,
        d_max: d.constraints.d_max,
        b_min: d.constraints.b_min,
        hops_max: d.constraints.hops_max,
        bandwidth_rule: MqBandwidthRule::MaxNode,
        seed: d.seed,
    }
}

/// Random geometric topology with attribute ranges at their defaults.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mq_topology_generate(
    node_count: u32,
    width: f64,
    height: f64,
    radius: f64,
    seed: u64,
    out: *mut *mut MqTopology,
) -> MqStatus {
    guard(|| {
        let params = TopologyParams {
            node_count: node_count as usize,
            area: Area { width, height },
            coverage_radius: radius,
            ..TopologyParams::default()
        };
        let t = Topology::generate(&params, seed).map_err(from_error)?;
        boxed(out, MqTopology(t))
    })
}

/// Parses a topology JSON document of `len` bytes.
///
/// # Safety
/// `bytes` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_topology_load(bytes: *const u8, len: usize, out: *mut *mut MqTopology) -> MqStatus {
    guard(|| {
        if bytes.is_null() {
            return Err(fail(MqStatus::NullPointer, "bytes is null"));
        }
        let data = std::slice::from_raw_parts(bytes, len);
        let t = load_topology(data).map_err(from_error)?;
        boxed(out, MqTopology(t))
    })
}

/// Serializes to JSON. Free the result with [`mq_string_free`].
///
/// # Safety
/// `topology` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_topology_save(topology: *const MqTopology, out: *mut *mut c_char) -> MqStatus {
    guard(|| {
        let t = non_null(topology, "topology")?;
        let s = CString::new(save_topology(&t.0)).map_err(|e| fail(MqStatus::Format, e.to_string()))?;
        write_out(out, "out", s.into_raw())?;
        Ok(())
    })
}

/// # Safety
/// `topology` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mq_topology_free(topology: *mut MqTopology) {
    if !topology.is_null() {
        drop(Box::from_raw(topology));
    }
}

/// Node count, or 0 for a null handle.
///
/// # Safety
/// `topology` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mq_topology_node_count(topology: *const MqTopology) -> u32 {
    topology.as_ref().map_or(0, |t| t.0.node_count() as u32)
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `topology` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mq_topology_edge_count(topology: *const MqTopology) -> u32 {
    topology.as_ref().map_or(0, |t| t.0.edges().len() as u32)
}

/// Writes 1 to `out` when `source` and `destination` are connected.
///
/// # Safety
/// `topology` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_topology_connected(
    topology: *const MqTopology,
    source: u32,
    destination: u32,
    out: *mut u8,
) -> MqStatus {
    guard(|| {
        let t = non_null(topology, "topology")?;
        let q = query(&t.0, source, destination)?;
        write_out(out, "out", u8::from(t.0.is_connected(q.source, q.destination)))?;
        Ok(())
    })
}

/// Runs the adaptive GA from `source` to `destination`.
///
/// # Safety
/// `topology` and `config` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_evolve(
    topology: *const MqTopology,
    source: u32,
    destination: u32,
    config: *const MqGaConfig,
    out: *mut *mut MqRouteResult,
) -> MqStatus {
    guard(|| {
        let t = non_null(topology, "topology")?;
        let cfg = non_null(config, "config")?.to_config()?;
        let q = query(&t.0, source, destination)?;
        let r = evolve(&t.0, &q, &cfg).map_err(from_error)?;
        boxed(out, MqRouteResult(r))
    })
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mq_route_result_free(result: *mut MqRouteResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Copies the best path's node ids into `out`. `len` always receives the
/// required length, so a call with `capacity == 0` queries it.
///
/// # Safety
/// `result` must be live; `out` must hold `capacity` elements; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_route_result_path(
    result: *const MqRouteResult,
    out: *mut u32,
    capacity: usize,
    len: *mut usize,
) -> MqStatus {
    guard(|| copy_path(&non_null(result, "result")?.0.best.path, out, capacity, len))
}

/// # Safety
/// `result` must be live; `cost` and `qos` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_route_result_best(
    result: *const MqRouteResult,
    cost: *mut f64,
    qos: *mut MqQos,
) -> MqStatus {
    guard(|| {
        let best = &non_null(result, "result")?.0.best;
        write_out(cost, "cost", best.cost)?;
        write_out(
            qos,
            "qos",
            MqQos {
                delay_ms: best.qos.delay,
                bandwidth_mbps: best.qos.bandwidth,
                hops: best.qos.hops,
            },
        )?;
        Ok(())
    })
}

/// Number of generations recorded in the trace, or 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mq_route_result_generations(result: *const MqRouteResult) -> u32 {
    result.as_ref().map_or(0, |r| r.0.trace.len() as u32)
}

/// Population best cost after generation `index` (0-based), plus the index
/// (1 to 6) of the selection method adopted in that generation.
///
/// # Safety
/// `result` must be live; `cost` and `method` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_route_result_trace(
    result: *const MqRouteResult,
    index: u32,
    cost: *mut f64,
    method: *mut u32,
) -> MqStatus {
    guard(|| {
        let r = &non_null(result, "result")?.0;
        let g = r
            .trace
            .get(index as usize)
            .ok_or_else(|| fail(MqStatus::Parameter, format!("generation index {index} out of range")))?;
        write_out(cost, "cost", g.population_best_cost)?;
        write_out(method, "method", g.chosen_method.index() as u32)?;
        Ok(())
    })
}

/// Runs NSGA and keeps the final cumulative archive. Population size and
/// constraints come from `config`.
///
/// # Safety
/// `topology` and `config` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_nsga(
    topology: *const MqTopology,
    source: u32,
    destination: u32,
    config: *const MqGaConfig,
    generations: u32,
    sigma_share: f64,
    out: *mut *mut MqParetoResult,
) -> MqStatus {
    guard(|| {
        let t = non_null(topology, "topology")?;
        let cfg = non_null(config, "config")?.to_config()?;
        let q = query(&t.0, source, destination)?;
        let params = NsgaParams {
            sigma_share,
            population_size: cfg.population_size,
            generations,
        };
        let r = nsga_evolve(&t.0, &q, &cfg, &params, &[]).map_err(from_error)?;
        boxed(
            out,
            MqParetoResult {
                entries: r.archive.sorted_entries(),
                front: r.archive.front(),
                constraints: cfg.constraints,
            },
        )
    })
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mq_pareto_result_free(result: *mut MqParetoResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Archive size, or 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mq_pareto_result_len(result: *const MqParetoResult) -> usize {
    result.as_ref().map_or(0, |r| r.entries.len())
}

/// QoS of archive entry `index`. Entries are ordered by delay, then hops.
///
/// # Safety
/// `result` must be live; `qos` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_pareto_result_qos(
    result: *const MqParetoResult,
    index: usize,
    qos: *mut MqQos,
) -> MqStatus {
    guard(|| {
        let r = non_null(result, "result")?;
        let e = r
            .entries
            .get(index)
            .ok_or_else(|| fail(MqStatus::Parameter, format!("entry {index} out of range")))?;
        write_out(
            qos,
            "qos",
            MqQos {
                delay_ms: e.qos.delay,
                bandwidth_mbps: e.qos.bandwidth,
                hops: e.qos.hops,
            },
        )?;
        Ok(())
    })
}

/// Path of archive entry `index`; same length protocol as [`mq_route_result_path`].
///
/// # Safety
/// `result` must be live; `out` must hold `capacity` elements; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_pareto_result_path(
    result: *const MqParetoResult,
    index: usize,
    out: *mut u32,
    capacity: usize,
    len: *mut usize,
) -> MqStatus {
    guard(|| {
        let r = non_null(result, "result")?;
        let e = r
            .entries
            .get(index)
            .ok_or_else(|| fail(MqStatus::Parameter, format!("entry {index} out of range")))?;
        copy_path(&e.path, out, capacity, len)
    })
}

/// Hypervolume of the archive front against `(d_max+1, 2, hops_max+1)`.
///
/// # Safety
/// `result` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mq_pareto_result_hypervolume(result: *const MqParetoResult, out: *mut f64) -> MqStatus {
    guard(|| {
        let r = non_null(result, "result")?;
        let hv = hypervolume(&r.front, &default_reference(&r.constraints)).map_err(from_error)?;
        write_out(out, "out", hv)?;
        Ok(())
    })
}

/// Owned copy of [`mq_last_error`] for Rust callers.
pub fn last_error_string() -> Option<String> {
    let p = mq_last_error();
    if p.is_null() {
        None
    } else {
        // SAFETY: non-null pointers from mq_last_error are valid C strings.
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}
