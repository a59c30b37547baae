#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "isingrep/lattice.hpp"
#include "isingrep/models.hpp"

namespace isingrep {

/// Worker threads for Monte Carlo runs: ISINGREP_THREADS if set, else the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs f(i) for i in [0, n) on worker_count() threads. f must only write
/// to per-index state; exceptions are rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

/// Component labelling of (V, E_c).
class ClusterLabels {
 public:
  ClusterLabels() = default;
  ClusterLabels(const MultiGraph& g, const EdgeConfig& c);

  std::uint32_t label(VertexId v) const { return label_.at(v); }
  bool connected(VertexId v, VertexId w) const { return label(v) == label(w); }
  std::size_t size_of(VertexId v) const { return size_.at(label(v)); }
  std::size_t component_count() const noexcept { return size_.size(); }
  /// Vertices of the component of v, in increasing order.
  std::vector<VertexId> members(VertexId v) const;

 private:
  std::vector<std::uint32_t> label_;  // dense labels in order of first vertex
  std::vector<std::size_t> size_;
};

ClusterLabels clusters(const MultiGraph& g, const EdgeConfig& c);

/// Sup-metric diameter of a vertex set; on periodic hosts each coordinate
/// uses the shortest covering arc of the cycle.
int radius(const MultiGraph& g, std::span<const VertexId> vertices);

/// Sup-metric distance, periodic on tori.
int sup_distance(const MultiGraph& g, VertexId v, VertexId w);

enum class ObservableKind {
  p_connect,          // v <-> w
  p_reach_boundary,   // C_v reaches sup-distance >= k from v
  mean_cluster_size,  // |C_v|
  mean_radius,        // rad(C_v)
  p_in_cnt,           // v in C_NT, measured as |C_NT| / |V|
  cnt_density,        // |C_NT| / |V|
  wraparound_lb,      // greedy count of disjoint wrap-arounds
};

struct Observable {
  ObservableKind kind = ObservableKind::p_connect;
  VertexId v = 0;
  VertexId w = 0;
  int k = 0;

  std::string name() const;
  bool needs_torus() const noexcept;
};

ObservableKind observable_kind_from_string(const std::string& s);

struct SamplerSpec {
  Model model = Model::loop;
  ModelParams params;
  BoundaryCondition xi;
  std::string bc_name = "free";
  Backend backend = Backend::sw;
  SwSettings sw;
};

struct EstimateRow {
  std::string observable;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t n_samples = 0;
  std::size_t batches = 0;
  std::uint64_t seed = 0;
  std::string host;
  int d = 0;
  int n = 0;
  std::string model;
  ModelParams params;
  std::string bc;
};

inline constexpr std::size_t kDefaultBatches = 32;
inline constexpr std::size_t kMinBatches = 16;

/// Per-batch means of `outputs` values computed from each sample. Batch b
/// is a single SW chain seeded by stream (seed, b); for exact backends,
/// sample i of the run uses stream (seed, i). The result is independent of
/// the worker count.
struct BatchMeans {
  std::size_t batch_size = 0;
  std::vector<std::vector<double>> means;  // [output][batch]

  double mean(std::size_t output) const;
  double stderr_of(std::size_t output) const;
};

using SampleFunction = std::function<void(const EdgeConfig& sample, std::span<double> out)>;

BatchMeans run_batched(const MultiGraph& g, const SamplerSpec& spec, std::size_t n_samples, std::uint64_t seed,
                       std::size_t batches, std::size_t outputs, const SampleFunction& f);

std::vector<EstimateRow> estimate(const MultiGraph& g, const std::vector<Observable>& observables,
                                  const SamplerSpec& spec, std::size_t n_samples, std::uint64_t seed,
                                  std::size_t batches = kDefaultBatches);

EstimateRow estimate(const MultiGraph& g, const Observable& observable, const SamplerSpec& spec, std::size_t n_samples,
                     std::uint64_t seed, std::size_t batches = kDefaultBatches);

/// An event depending only on the edges of a local graph embedded in a host.
using LocalEvent = std::function<bool(const EdgeConfig& local)>;

struct GapEstimate {
  double gap = 0.0;
  double stderr_ = 0.0;
  double p_a = 0.0, se_a = 0.0;
  double p_b = 0.0, se_b = 0.0;
  std::size_t n_samples = 0;
};

/// |P_A[event] - P_B[event]| with the two runs sharing `seed`.
GapEstimate mixing_gap(const MultiGraph& local, const LocalEvent& event, const MultiGraph& host_a,
                       const SamplerSpec& spec_a, const MultiGraph& host_b, const SamplerSpec& spec_b,
                       std::size_t n_samples, std::uint64_t seed, std::size_t batches = kDefaultBatches);

struct FactorizationGap {
  double gap = 0.0;
  double stderr_ = 0.0;
  double p_ab = 0.0, p_a = 0.0, p_b = 0.0;
  std::size_t n_samples = 0;
};

/// |P[A and B] - P[A] P[B]| for two local events on one host; the error bar
/// comes from the spread of the per-batch values.
FactorizationGap factorization_gap(const MultiGraph& host, const SamplerSpec& spec, const MultiGraph& local_a,
                                   const LocalEvent& event_a, const MultiGraph& local_b, const LocalEvent& event_b,
                                   std::size_t n_samples, std::uint64_t seed, std::size_t batches = kDefaultBatches);

}  // namespace isingrep
