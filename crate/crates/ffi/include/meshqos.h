#ifndef MESHQOS_H
#define MESHQOS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MqBandwidthRule {
  // Path bandwidth is the largest node bandwidth.
  MQ_BANDWIDTH_RULE_MAX_NODE = 0,
  // Path bandwidth is the smallest node bandwidth.
  MQ_BANDWIDTH_RULE_BOTTLENECK = 1,
} MqBandwidthRule;

typedef enum MqStatus {
  MQ_STATUS_OK = 0,
  MQ_STATUS_NULL_POINTER = 1,
  MQ_STATUS_PARAMETER = 2,
  MQ_STATUS_NO_ROUTE = 3,
  MQ_STATUS_FORMAT = 4,
  MQ_STATUS_SIZE = 5,
  MQ_STATUS_IO = 6,
  MQ_STATUS_INVALID_PATH = 7,
  MQ_STATUS_BUFFER_TOO_SMALL = 8,
  MQ_STATUS_PANIC = 9,
} MqStatus;

typedef struct MqParetoResult MqParetoResult;

typedef struct MqRouteResult MqRouteResult;

typedef struct MqTopology MqTopology;

// Plain-data GA configuration; start from [`mq_ga_config_default`].
typedef struct MqGaConfig {
  uint32_t population_size;
  uint32_t generations;
  double crossover_prob;
  double mutation_prob;
  double alpha1;
  double alpha2;
  double alpha3;
  double d_max;
  double b_min;
  uint32_t hops_max;
  enum MqBandwidthRule bandwidth_rule;
  uint64_t seed;
} MqGaConfig;

// QoS of one path.
typedef struct MqQos {
  double delay_ms;
  double bandwidth_mbps;
  uint32_t hops;
} MqQos;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *mq_last_error(void);

// Static, NUL-terminated library version.
const char *mq_version(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string from [`mq_topology_save`] not yet freed.
void mq_string_free(char *s);

struct MqGaConfig mq_ga_config_default(void);

// Random geometric topology with attribute ranges at their defaults.
//
// # Safety
// `out` must be valid for a pointer write.
enum MqStatus mq_topology_generate(uint32_t node_count,
                                   double width,
                                   double height,
                                   double radius,
                                   uint64_t seed,
                                   struct MqTopology **out);

// Parses a topology JSON document of `len` bytes.
//
// # Safety
// `bytes` must point to `len` readable bytes; `out` must be writable.
enum MqStatus mq_topology_load(const uint8_t *bytes, size_t len, struct MqTopology **out);

// Serializes to JSON. Free the result with [`mq_string_free`].
//
// # Safety
// `topology` must be a live handle; `out` must be writable.
enum MqStatus mq_topology_save(const struct MqTopology *topology, char **out);

// # Safety
// `topology` must be null or a live handle.
void mq_topology_free(struct MqTopology *topology);

// Node count, or 0 for a null handle.
//
// # Safety
// `topology` must be null or a live handle.
uint32_t mq_topology_node_count(const struct MqTopology *topology);

// Edge count, or 0 for a null handle.
//
// # Safety
// `topology` must be null or a live handle.
uint32_t mq_topology_edge_count(const struct MqTopology *topology);

// Writes 1 to `out` when `source` and `destination` are connected.
//
// # Safety
// `topology` must be a live handle; `out` must be writable.
enum MqStatus mq_topology_connected(const struct MqTopology *topology,
                                    uint32_t source,
                                    uint32_t destination,
                                    uint8_t *out);

// Runs the adaptive GA from `source` to `destination`.
//
// # Safety
// `topology` and `config` must be valid; `out` must be writable.
enum MqStatus mq_evolve(const struct MqTopology *topology,
                        uint32_t source,
                        uint32_t destination,
                        const struct MqGaConfig *config,
                        struct MqRouteResult **out);

// # Safety
// `result` must be null or a live handle.
void mq_route_result_free(struct MqRouteResult *result);

// Copies the best path's node ids into `out`. `len` always receives the
// required length, so a call with `capacity == 0` queries it.
//
// # Safety
// `result` must be live; `out` must hold `capacity` elements; `len` must be writable.
enum MqStatus mq_route_result_path(const struct MqRouteResult *result,
                                   uint32_t *out,
                                   size_t capacity,
                                   size_t *len);

// # Safety
// `result` must be live; `cost` and `qos` must be writable.
enum MqStatus mq_route_result_best(const struct MqRouteResult *result,
                                   double *cost,
                                   struct MqQos *qos);

// Number of generations recorded in the trace, or 0 for a null handle.
//
// # Safety
// `result` must be null or a live handle.
uint32_t mq_route_result_generations(const struct MqRouteResult *result);

// Population best cost after generation `index` (0-based), plus the index
// (1 to 6) of the selection method adopted in that generation.
//
// # Safety
// `result` must be live; `cost` and `method` must be writable.
enum MqStatus mq_route_result_trace(const struct MqRouteResult *result,
                                    uint32_t index,
                                    double *cost,
                                    uint32_t *method);

// Runs NSGA and keeps the final cumulative archive. Population size and
// constraints come from `config`.
//
// # Safety
// `topology` and `config` must be valid; `out` must be writable.
enum MqStatus mq_nsga(const struct MqTopology *topology,
                      uint32_t source,
                      uint32_t destination,
                      const struct MqGaConfig *config,
                      uint32_t generations,
                      double sigma_share,
                      struct MqParetoResult **out);

// # Safety
// `result` must be null or a live handle.
void mq_pareto_result_free(struct MqParetoResult *result);

// Archive size, or 0 for a null handle.
//
// # Safety
// `result` must be null or a live handle.
size_t mq_pareto_result_len(const struct MqParetoResult *result);

// QoS of archive entry `index`. Entries are ordered by delay, then hops.
//
// # Safety
// `result` must be live; `qos` must be writable.
enum MqStatus mq_pareto_result_qos(const struct MqParetoResult *result,
                                   size_t index,
                                   struct MqQos *qos);

// Path of archive entry `index`; same length protocol as [`mq_route_result_path`].
//
// # Safety
// `result` must be live; `out` must hold `capacity` elements; `len` must be writable.
enum MqStatus mq_pareto_result_path(const struct MqParetoResult *result,
                                    size_t index,
                                    uint32_t *out,
                                    size_t capacity,
                                    size_t *len);

// Hypervolume of the archive front against `(d_max+1, 2, hops_max+1)`.
//
// # Safety
// `result` must be live; `out` must be writable.
enum MqStatus mq_pareto_result_hypervolume(const struct MqParetoResult *result, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MESHQOS_H */
