#include "isingrep/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "isingrep/topology.hpp"
#include "isingrep/union_find.hpp"

namespace isingrep {

std::size_t worker_count() {
  if (const char* env = std::getenv("ISINGREP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Clusters and geometry

ClusterLabels::ClusterLabels(const MultiGraph& g, const EdgeConfig& c) {
  if (c.size() != g.edge_count()) throw std::invalid_argument("configuration does not match the host");
  DisjointSet ds(g.vertex_count());
  c.for_each_set([&](std::size_t e) { ds.join(g.edge(static_cast<EdgeId>(e)).a, g.edge(static_cast<EdgeId>(e)).b); });
  label_.assign(g.vertex_count(), 0);
  std::vector<std::uint32_t> dense(g.vertex_count(), 0xffffffffU);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const std::uint32_t r = ds.find(v);
    if (dense[r] == 0xffffffffU) {
      dense[r] = static_cast<std::uint32_t>(size_.size());
      size_.push_back(0);
    }
    label_[v] = dense[r];
    ++size_[dense[r]];
  }
}

std::vector<VertexId> ClusterLabels::members(VertexId v) const {
  std::vector<VertexId> out;
  const std::uint32_t l = label(v);
  for (VertexId u = 0; u < label_.size(); ++u)
    if (label_[u] == l) out.push_back(u);
  return out;
}

ClusterLabels clusters(const MultiGraph& g, const EdgeConfig& c) { return ClusterLabels(g, c); }

namespace {

// Shortest arc of the m-cycle covering the occupied residues.
int cyclic_extent(std::vector<bool>& occupied) {
  const int m = static_cast<int>(occupied.size());
  int count = 0, first = -1, last = -1, gap = 0;
  for (int i = 0; i < m; ++i) {
    if (!occupied[static_cast<std::size_t>(i)]) continue;
    ++count;
    if (first < 0) first = i;
    if (last >= 0) gap = std::max(gap, i - last);
    last = i;
  }
  if (count == 0) return 0;
  gap = std::max(gap, first + m - last);  // wrap-around gap
  return m - gap;
}

}  // namespace

int radius(const MultiGraph& g, std::span<const VertexId> vertices) {
  if (!g.has_embedding()) throw std::invalid_argument("radius needs a host with coordinates");
  if (vertices.empty()) return 0;
  const std::size_t d = g.coordinate_width();
  int best = 0;
  for (std::size_t k = 0; k < d; ++k) {
    if (g.is_periodic() && g.kind() == LatticeKind::torus) {
      const int n = g.period() / 2;
      std::vector<bool> occupied(static_cast<std::size_t>(g.period()), false);
      for (VertexId v : vertices) occupied[static_cast<std::size_t>(g.coordinates(v)[k] + n)] = true;
      best = std::max(best, cyclic_extent(occupied));
    } else {
      int lo = g.coordinates(vertices[0])[k], hi = lo;
      for (VertexId v : vertices) {
        lo = std::min(lo, g.coordinates(v)[k]);
        hi = std::max(hi, g.coordinates(v)[k]);
      }
      best = std::max(best, hi - lo);
    }
  }
  return best;
}

int sup_distance(const MultiGraph& g, VertexId v, VertexId w) {
  if (!g.has_embedding()) throw std::invalid_argument("sup_distance needs a host with coordinates");
  auto a = g.coordinates(v), b = g.coordinates(w);
  const bool torus = g.kind() == LatticeKind::torus;
  int best = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    int diff = std::abs(a[k] - b[k]);
    if (torus) diff = std::min(diff, g.period() - diff);
    best = std::max(best, diff);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Observables

std::string Observable::name() const {
  switch (kind) {
    case ObservableKind::p_connect: return "p_connect(" + std::to_string(v) + ";" + std::to_string(w) + ")";
    case ObservableKind::p_reach_boundary: return "p_reach_boundary(" + std::to_string(v) + ";" + std::to_string(k) + ")";
    case ObservableKind::mean_cluster_size: return "mean_cluster_size(" + std::to_string(v) + ")";
    case ObservableKind::mean_radius: return "mean_radius(" + std::to_string(v) + ")";
    case ObservableKind::p_in_cnt: return "p_in_cnt(" + std::to_string(v) + ")";
    case ObservableKind::cnt_density: return "cnt_density";
    case ObservableKind::wraparound_lb: return "wraparound_lb";
  }
  return "unknown";
}

bool Observable::needs_torus() const noexcept {
  return kind == ObservableKind::p_in_cnt || kind == ObservableKind::cnt_density ||
         kind == ObservableKind::wraparound_lb;
}

ObservableKind observable_kind_from_string(const std::string& s) {
  if (s == "p_connect") return ObservableKind::p_connect;
  if (s == "p_reach_boundary") return ObservableKind::p_reach_boundary;
  if (s == "mean_cluster_size") return ObservableKind::mean_cluster_size;
  if (s == "mean_radius") return ObservableKind::mean_radius;
  if (s == "p_in_cnt") return ObservableKind::p_in_cnt;
  if (s == "cnt_density") return ObservableKind::cnt_density;
  if (s == "wraparound_lb") return ObservableKind::wraparound_lb;
  throw std::invalid_argument("unknown observable: " + s);
}

// ---------------------------------------------------------------------------
// Batch means

double BatchMeans::mean(std::size_t output) const {
  const auto& m = means.at(output);
  double s = 0.0;
  for (double x : m) s += x;
  return s / static_cast<double>(m.size());
}

double BatchMeans::stderr_of(std::size_t output) const {
  const auto& m = means.at(output);
  const double mu = mean(output);
  double ss = 0.0;
  for (double x : m) ss += (x - mu) * (x - mu);
  const double b = static_cast<double>(m.size());
  return std::sqrt(ss / (b - 1.0) / b);
}

BatchMeans run_batched(const MultiGraph& g, const SamplerSpec& spec, std::size_t n_samples, std::uint64_t seed,
                       std::size_t batches, std::size_t outputs, const SampleFunction& f) {
  if (batches < kMinBatches) throw std::invalid_argument("at least 16 batches are required for error bars");
  if (n_samples < batches) throw std::invalid_argument("need at least one sample per batch");
  BatchMeans out;
  out.batch_size = n_samples / batches;
  out.means.assign(outputs, std::vector<double>(batches, 0.0));

  const EdgeSampler prototype(g, spec.model, spec.params, spec.xi, spec.backend, spec.sw);
  const bool chain = spec.backend == Backend::sw && spec.model != Model::bernoulli;
  std::vector<std::vector<double>> sums(batches, std::vector<double>(outputs, 0.0));

  parallel_for(batches, [&](std::size_t b) {
    EdgeSampler sampler = prototype.fork();
    std::vector<double> values(outputs);
    auto& acc = sums[b];
    if (chain) {
      RngStream rng(seed, b);
      sampler.start(rng);
      for (std::size_t j = 0; j < out.batch_size; ++j) {
        const EdgeConfig c = sampler.next(rng);
        std::fill(values.begin(), values.end(), 0.0);
        f(c, values);
        for (std::size_t o = 0; o < outputs; ++o) acc[o] += values[o];
      }
    } else {
      for (std::size_t j = 0; j < out.batch_size; ++j) {
        RngStream rng(seed, b * out.batch_size + j);
        const EdgeConfig c = sampler.next(rng);
        std::fill(values.begin(), values.end(), 0.0);
        f(c, values);
        for (std::size_t o = 0; o < outputs; ++o) acc[o] += values[o];
      }
    }
  });
  for (std::size_t b = 0; b < batches; ++b)
    for (std::size_t o = 0; o < outputs; ++o) out.means[o][b] = sums[b][o] / static_cast<double>(out.batch_size);
  return out;
}

std::vector<EstimateRow> estimate(const MultiGraph& g, const std::vector<Observable>& observables,
                                  const SamplerSpec& spec, std::size_t n_samples, std::uint64_t seed,
                                  std::size_t batches) {
  bool need_winding = false, need_wraps = false, need_geometry = false;
  for (const Observable& o : observables) {
    if (o.needs_torus() && !(g.kind() == LatticeKind::torus || g.kind() == LatticeKind::hexagonal_torus))
      throw std::invalid_argument("observable " + o.name() + " requires a torus host");
    if (o.v >= g.vertex_count() || o.w >= g.vertex_count())
      throw std::invalid_argument("observable " + o.name() + " references a vertex outside the host");
    need_winding |= o.needs_torus();
    need_wraps |= o.kind == ObservableKind::wraparound_lb;
    need_geometry |= o.kind == ObservableKind::mean_radius || o.kind == ObservableKind::p_reach_boundary;
  }
  if (need_geometry && !g.has_embedding()) throw std::invalid_argument("radius observables need a host with coordinates");
  std::optional<Hyperplane> h;
  if (need_winding) h = hyperplane(g, 0, 0);

  const double nv = static_cast<double>(g.vertex_count());
  const BatchMeans bm = run_batched(g, spec, n_samples, seed, batches, observables.size(),
                                    [&](const EdgeConfig& c, std::span<double> out) {
    const ClusterLabels cl(g, c);
    std::optional<WindingReport> wr;
    if (need_winding) wr = classify_components(g, c, *h, need_wraps);
    for (std::size_t i = 0; i < observables.size(); ++i) {
      const Observable& o = observables[i];
      switch (o.kind) {
        case ObservableKind::p_connect: out[i] = cl.connected(o.v, o.w) ? 1.0 : 0.0; break;
        case ObservableKind::p_reach_boundary: {
          const auto m = cl.members(o.v);
          bool reach = false;
          for (VertexId u : m) reach = reach || sup_distance(g, o.v, u) >= o.k;
          out[i] = reach ? 1.0 : 0.0;
          break;
        }
        case ObservableKind::mean_cluster_size: out[i] = static_cast<double>(cl.size_of(o.v)); break;
        case ObservableKind::mean_radius: out[i] = radius(g, cl.members(o.v)); break;
        case ObservableKind::p_in_cnt:
        case ObservableKind::cnt_density: out[i] = static_cast<double>(wr->cnt_size) / nv; break;
        case ObservableKind::wraparound_lb: out[i] = static_cast<double>(*wr->disjoint_wraparound_count); break;
      }
    }
  });

  std::vector<EstimateRow> rows;
  for (std::size_t i = 0; i < observables.size(); ++i) {
    EstimateRow r;
    r.observable = observables[i].name();
    r.estimate = bm.mean(i);
    r.stderr_ = bm.stderr_of(i);
    r.batches = batches;
    r.n_samples = bm.batch_size * batches;
    r.seed = seed;
    r.host = to_string(g.kind());
    r.d = g.dimension();
    r.n = g.kind() == LatticeKind::torus ? g.period() / 2 : (g.kind() == LatticeKind::hexagonal_torus ? g.period() / 2 : 0);
    r.model = to_string(spec.model);
    r.params = spec.params;
    r.bc = spec.bc_name;
    rows.push_back(std::move(r));
  }
  return rows;
}

EstimateRow estimate(const MultiGraph& g, const Observable& observable, const SamplerSpec& spec, std::size_t n_samples,
                     std::uint64_t seed, std::size_t batches) {
  return estimate(g, std::vector<Observable>{observable}, spec, n_samples, seed, batches).front();
}

// ---------------------------------------------------------------------------
// Mixing

GapEstimate mixing_gap(const MultiGraph& local, const LocalEvent& event, const MultiGraph& host_a,
                       const SamplerSpec& spec_a, const MultiGraph& host_b, const SamplerSpec& spec_b,
                       std::size_t n_samples, std::uint64_t seed, std::size_t batches) {
  auto run = [&](const MultiGraph& host, const SamplerSpec& spec, double& p, double& se) {
    const std::vector<EdgeId> map = embed_edges(local, host);
    const BatchMeans bm = run_batched(host, spec, n_samples, seed, batches, 1,
                                      [&](const EdgeConfig& c, std::span<double> out) {
                                        out[0] = event(restrict_config(c, map)) ? 1.0 : 0.0;
                                      });
    p = bm.mean(0);
    se = bm.stderr_of(0);
    return bm.batch_size * batches;
  };
  GapEstimate g;
  g.n_samples = run(host_a, spec_a, g.p_a, g.se_a);
  run(host_b, spec_b, g.p_b, g.se_b);
  g.gap = std::abs(g.p_a - g.p_b);
  g.stderr_ = std::sqrt(g.se_a * g.se_a + g.se_b * g.se_b);
  return g;
}

FactorizationGap factorization_gap(const MultiGraph& host, const SamplerSpec& spec, const MultiGraph& local_a,
                                   const LocalEvent& event_a, const MultiGraph& local_b, const LocalEvent& event_b,
                                   std::size_t n_samples, std::uint64_t seed, std::size_t batches) {
  const std::vector<EdgeId> map_a = embed_edges(local_a, host);
  const std::vector<EdgeId> map_b = embed_edges(local_b, host);
  const BatchMeans bm = run_batched(host, spec, n_samples, seed, batches, 3,
                                    [&](const EdgeConfig& c, std::span<double> out) {
                                      const bool a = event_a(restrict_config(c, map_a));
                                      const bool b = event_b(restrict_config(c, map_b));
                                      out[0] = a ? 1.0 : 0.0;
                                      out[1] = b ? 1.0 : 0.0;
                                      out[2] = (a && b) ? 1.0 : 0.0;
                                    });
  FactorizationGap fg;
  fg.p_a = bm.mean(0);
  fg.p_b = bm.mean(1);
  fg.p_ab = bm.mean(2);
  fg.gap = std::abs(fg.p_ab - fg.p_a * fg.p_b);
  fg.n_samples = bm.batch_size * batches;
  std::vector<double> per_batch(batches);
  double mu = 0.0;
  for (std::size_t b = 0; b < batches; ++b) {
    per_batch[b] = bm.means[2][b] - bm.means[0][b] * bm.means[1][b];
    mu += per_batch[b];
  }
  mu /= static_cast<double>(batches);
  double ss = 0.0;
  for (double x : per_batch) ss += (x - mu) * (x - mu);
  fg.stderr_ = std::sqrt(ss / (static_cast<double>(batches) - 1.0) / static_cast<double>(batches));
  return fg;
}

}  // namespace isingrep
