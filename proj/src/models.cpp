#include "isingrep/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "isingrep/evens.hpp"
#include "isingrep/small_graph.hpp"
#include "isingrep/union_find.hpp"

namespace isingrep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}

std::uint64_t reverse_bits(std::uint64_t m, std::size_t width) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < width; ++i) r |= ((m >> i) & 1U) << (width - 1 - i);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

ModelParams ModelParams::from_beta(double beta) {
  if (!(beta >= 0.0)) throw std::domain_error("beta must be >= 0");
  if (std::isinf(beta)) return {kInf, 1.0, 1.0};
  return {beta, -std::expm1(-2.0 * beta), std::tanh(beta)};
}

ModelParams ModelParams::from_p(double p) {
  check_unit(p, "p");
  if (p == 1.0) return {kInf, 1.0, 1.0};
  return {-0.5 * std::log1p(-p), p, p / (2.0 - p)};
}

ModelParams ModelParams::from_x(double x) {
  check_unit(x, "x");
  if (x == 1.0) return {kInf, 1.0, 1.0};
  return {std::atanh(x), 2.0 * x / (1.0 + x), x};
}

double ModelParams::current_union_density() const {
  if (std::isinf(beta)) return 1.0;
  // 1 - 1/cosh b = 2 sinh^2(b/2) / cosh b, free of cancellation near 0
  const double s = std::sinh(0.5 * beta);
  return 2.0 * s * s / std::cosh(beta);
}

double dual_parameter(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("dual_parameter: p must lie in (0, 1)");
  return 2.0 * (1.0 - p) / (2.0 - p);
}

// ---------------------------------------------------------------------------
// Weights

SourceSet Current::sources(const MultiGraph& g) const {
  if (multiplicity.size() != g.edge_count()) throw std::invalid_argument("current does not match the host");
  SourceSet s(g.vertex_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if ((multiplicity[e] & 1U) && !ed.is_loop()) {
      s.flip(ed.a);
      s.flip(ed.b);
    }
  }
  return s;
}

EdgeConfig Current::trace() const {
  EdgeConfig t(multiplicity.size());
  for (std::size_t e = 0; e < multiplicity.size(); ++e)
    if (multiplicity[e] > 0) t.set(e);
  return t;
}

double weight_rc(const MultiGraph& g, const EdgeConfig& c, const BoundaryCondition& xi, double p) {
  check_unit(p, "p");
  const Quotient q = quotient(g, xi);
  const double kappa_weight = std::ldexp(1.0, static_cast<int>(component_count(q.graph, c)));
  const std::size_t open = c.count();
  if (p == 0.0) return open == 0 ? kappa_weight : 0.0;
  if (p == 1.0) return open == g.edge_count() ? kappa_weight : 0.0;
  return kappa_weight * std::pow(p / (1.0 - p), static_cast<double>(open));
}

double weight_ising(const MultiGraph& g, const SpinConfig& s, double beta) {
  if (s.size() != g.vertex_count()) throw std::invalid_argument("spin configuration does not match the host");
  double sum = 0.0;
  for (const Edge& e : g.edges()) sum += (s.test(e.a) == s.test(e.b)) ? 1.0 : -1.0;
  return std::exp(beta * sum);
}

double weight_loop(const MultiGraph& g, const EdgeConfig& c, const BoundaryCondition& xi, double x) {
  check_unit(x, "x");
  if (!is_even(g, c, xi)) return 0.0;
  return std::pow(x, static_cast<double>(c.count()));
}

double weight_current(const MultiGraph& g, const Current& n, double beta) {
  if (!(beta >= 0.0)) throw std::domain_error("beta must be >= 0");
  if (n.sources(g).any()) return 0.0;
  double log_w = 0.0;
  for (std::uint32_t m : n.multiplicity) {
    if (m == 0) continue;
    if (beta == 0.0) return 0.0;
    log_w += m * std::log(beta) - std::lgamma(static_cast<double>(m) + 1.0);
  }
  return std::exp(log_w);
}

EdgeConfig sample_bernoulli(const MultiGraph& g, double q, RngStream& rng) {
  check_unit(q, "density");
  EdgeConfig c(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (rng.bernoulli(q)) c.set(e);
  return c;
}

// ---------------------------------------------------------------------------
// Swendsen-Wang

SwendsenWangChain::SwendsenWangChain(const MultiGraph& g, const BoundaryCondition& xi, double p, bool fixed_plus)
    : p_(p), omega_(g.edge_count()) {
  check_unit(p, "p");
  if (fixed_plus) {
    const auto bnd = xi.boundary();
    if (bnd.empty()) throw std::invalid_argument("plus boundary spins need a nonempty boundary");
    q_ = quotient(g, BoundaryCondition::wired(bnd));
    fixed_ = q_.vertex_map[bnd.front()];
  } else {
    q_ = quotient(g, xi);
  }
  spin_.assign(q_.graph.vertex_count(), 1);
}

void SwendsenWangChain::sweep(RngStream& rng) {
  const MultiGraph& qg = q_.graph;
  omega_ = EdgeConfig(qg.edge_count());
  DisjointSet ds(qg.vertex_count());
  for (EdgeId e = 0; e < qg.edge_count(); ++e) {
    const Edge& ed = qg.edge(e);
    if (spin_[ed.a] == spin_[ed.b] && rng.bernoulli(p_)) {
      omega_.set(e);
      ds.join(ed.a, ed.b);
    }
  }
  std::vector<std::int8_t> cluster_spin(qg.vertex_count(), 0);
  if (fixed_) cluster_spin[ds.find(*fixed_)] = 1;
  for (VertexId v = 0; v < qg.vertex_count(); ++v) {
    const VertexId r = ds.find(v);
    if (cluster_spin[r] == 0) cluster_spin[r] = rng.bit() ? 1 : -1;
    spin_[v] = cluster_spin[r];
  }
}

SpinConfig SwendsenWangChain::spins() const {
  SpinConfig s(q_.vertex_map.size());
  for (VertexId v = 0; v < q_.vertex_map.size(); ++v)
    if (spin_[q_.vertex_map[v]] < 0) s.set(v);
  return s;
}

EdgeConfig sample_rc_sw(const MultiGraph& g, const BoundaryCondition& xi, double p, int sweeps, RngStream& rng) {
  if (sweeps < 1) throw std::invalid_argument("sample_rc_sw: at least one sweep is required");
  SwendsenWangChain chain(g, xi, p);
  chain.sweeps(sweeps, rng);
  return chain.config();
}

// ---------------------------------------------------------------------------
// Exact sequential sampler

ExactRcSampler::ExactRcSampler(const MultiGraph& g, const BoundaryCondition& xi, double p) : edges_(g.edge_count()) {
  check_unit(p, "p");
  if (edges_ > kMaxExactEdges) throw std::length_error("exact RC sampler: too many edges");
  if (p == 0.0 || p == 1.0) {
    constant_ = (p == 1.0);
    return;
  }
  const Quotient q = quotient(g, xi);
  const SmallGraph sg(q.graph);
  const double r = p / (1.0 - p);
  std::vector<double> rpow(edges_ + 1, 1.0);
  for (std::size_t k = 1; k <= edges_; ++k) rpow[k] = rpow[k - 1] * r;

  const std::size_t leaves = std::size_t{1} << edges_;
  sums_.assign(2 * leaves, 0.0);
  for (std::uint64_t m = 0; m < leaves; ++m) {
    const double w = std::ldexp(1.0, static_cast<int>(sg.components(m))) * rpow[static_cast<std::size_t>(std::popcount(m))];
    sums_[leaves + reverse_bits(m, edges_)] = w;
  }
  for (std::size_t i = leaves; i-- > 1;) sums_[i] = sums_[2 * i] + sums_[2 * i + 1];
}

EdgeConfig ExactRcSampler::draw(std::span<const double> u) const {
  if (u.size() < edges_) throw std::invalid_argument("ExactRcSampler: one uniform per edge is required");
  if (constant_) return *constant_ ? EdgeConfig::full(edges_) : EdgeConfig(edges_);
  EdgeConfig c(edges_);
  std::size_t node = 1;
  for (std::size_t j = 0; j < edges_; ++j) {
    const double t = sums_[2 * node + 1] / sums_[node];
    const bool open = u[j] < t;
    if (open) c.set(j);
    node = 2 * node + (open ? 1 : 0);
  }
  return c;
}

EdgeConfig ExactRcSampler::draw(RngStream& rng) const {
  std::vector<double> u(edges_);
  for (auto& v : u) v = rng.uniform();
  return draw(u);
}

EdgeConfig sample_rc_exact(const MultiGraph& g, const BoundaryCondition& xi, double p, RngStream& rng) {
  return ExactRcSampler(g, xi, p).draw(rng);
}

std::pair<EdgeConfig, EdgeConfig> sample_rc_coupled(const ExactRcSampler& low, const ExactRcSampler& high,
                                                    RngStream& rng) {
  if (low.edge_count() != high.edge_count()) throw std::invalid_argument("coupled samplers live on different hosts");
  std::vector<double> u(low.edge_count());
  for (auto& v : u) v = rng.uniform();
  return {low.draw(u), high.draw(u)};
}

// ---------------------------------------------------------------------------
// Edge samplers

std::string to_string(Model m) {
  switch (m) {
    case Model::bernoulli: return "bernoulli";
    case Model::random_cluster: return "random_cluster";
    case Model::loop: return "loop";
    case Model::current: return "current";
    case Model::double_current: return "double_current";
  }
  return "unknown";
}

Model model_from_string(const std::string& s) {
  if (s == "bernoulli") return Model::bernoulli;
  if (s == "random_cluster" || s == "rc") return Model::random_cluster;
  if (s == "loop") return Model::loop;
  if (s == "current") return Model::current;
  if (s == "double_current") return Model::double_current;
  throw std::invalid_argument("unknown model: " + s);
}

struct EdgeSampler::RcSource {
  std::shared_ptr<const ExactRcSampler> exact;
  std::optional<SwendsenWangChain> chain;
};

EdgeSampler::EdgeSampler(const MultiGraph& g, Model model, const ModelParams& params, const BoundaryCondition& xi,
                         Backend backend, SwSettings sw)
    : g_(g), model_(model), params_(params), xi_(xi), backend_(backend), sw_(sw), q_(quotient(g, xi)) {
  if (sw_.burn_in < 0 || sw_.thinning < 1) throw std::invalid_argument("SW settings: burn_in >= 0 and thinning >= 1");
  std::size_t copies = 0;
  switch (model_) {
    case Model::bernoulli: copies = 0; break;
    case Model::random_cluster:
    case Model::loop:
    case Model::current: copies = 1; break;
    case Model::double_current: copies = 2; break;
  }
  std::shared_ptr<const ExactRcSampler> shared;
  if (copies > 0 && backend_ == Backend::exact) shared = std::make_shared<const ExactRcSampler>(g_, xi_, params_.p);
  for (std::size_t i = 0; i < copies; ++i) {
    auto src = std::make_unique<RcSource>();
    if (backend_ == Backend::exact)
      src->exact = shared;
    else
      src->chain.emplace(g_, xi_, params_.p);
    sources_.push_back(std::move(src));
  }
}

EdgeSampler EdgeSampler::fork() const {
  EdgeSampler out;
  out.g_ = g_;
  out.model_ = model_;
  out.params_ = params_;
  out.xi_ = xi_;
  out.backend_ = backend_;
  out.sw_ = sw_;
  out.q_ = q_;
  for (const auto& src : sources_) {
    auto copy = std::make_unique<RcSource>();
    copy->exact = src->exact;
    if (src->chain) copy->chain.emplace(g_, xi_, params_.p);
    out.sources_.push_back(std::move(copy));
  }
  return out;
}

EdgeSampler::~EdgeSampler() = default;
EdgeSampler::EdgeSampler(EdgeSampler&&) noexcept = default;
EdgeSampler& EdgeSampler::operator=(EdgeSampler&&) noexcept = default;

void EdgeSampler::start(RngStream& rng) {
  for (auto& src : sources_)
    if (src->chain) src->chain->sweeps(sw_.burn_in, rng);
}

EdgeConfig EdgeSampler::draw_rc(std::size_t copy, RngStream& rng) {
  RcSource& src = *sources_[copy];
  if (src.exact) return src.exact->draw(rng);
  src.chain->sweeps(sw_.thinning, rng);
  return src.chain->config();
}

EdgeConfig EdgeSampler::draw_loop(std::size_t copy, RngStream& rng) {
  const EdgeConfig omega = draw_rc(copy, rng);
  return sample_ueg(q_.graph, omega, rng);
}

EdgeConfig EdgeSampler::next(RngStream& rng) {
  switch (model_) {
    case Model::bernoulli: return sample_bernoulli(g_, params_.p, rng);
    case Model::random_cluster: return draw_rc(0, rng);
    case Model::loop: return draw_loop(0, rng);
    case Model::current: return draw_loop(0, rng) | sample_bernoulli(g_, params_.current_union_density(), rng);
    case Model::double_current: {
      EdgeConfig a = draw_loop(0, rng) | sample_bernoulli(g_, params_.current_union_density(), rng);
      EdgeConfig b = draw_loop(1, rng) | sample_bernoulli(g_, params_.current_union_density(), rng);
      return a | b;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

EdgeConfig one_draw(const MultiGraph& g, Model m, const ModelParams& params, const BoundaryCondition& xi,
                    Backend backend, RngStream& rng) {
  EdgeSampler s(g, m, params, xi, backend);
  s.start(rng);
  return s.next(rng);
}

}  // namespace

EdgeConfig sample_loop(const MultiGraph& g, const BoundaryCondition& xi, double x, RngStream& rng, Backend backend) {
  return one_draw(g, Model::loop, ModelParams::from_x(x), xi, backend, rng);
}

EdgeConfig sample_current(const MultiGraph& g, double beta, RngStream& rng, Backend backend) {
  return one_draw(g, Model::current, ModelParams::from_beta(beta), BoundaryCondition{}, backend, rng);
}

EdgeConfig sample_double_current(const MultiGraph& g, double beta, RngStream& rng, Backend backend) {
  return one_draw(g, Model::double_current, ModelParams::from_beta(beta), BoundaryCondition{}, backend, rng);
}

// ---------------------------------------------------------------------------
// Ising

SpinConfig sample_ising(const MultiGraph& g, double beta, const IsingBoundary& boundary, RngStream& rng,
                        Backend backend) {
  const ModelParams params = ModelParams::from_beta(beta);
  if (backend == Backend::sw) {
    SwendsenWangChain chain(g, boundary.xi, params.p, boundary.plus);
    chain.sweeps(SwSettings{}.burn_in, rng);
    return chain.spins();
  }
  if (std::isinf(beta)) throw std::domain_error("exact Ising sampling needs finite beta");

  std::optional<VertexId> fixed;
  Quotient q;
  if (boundary.plus) {
    const auto bnd = boundary.xi.boundary();
    if (bnd.empty()) throw std::invalid_argument("plus boundary spins need a nonempty boundary");
    q = quotient(g, BoundaryCondition::wired(bnd));
    fixed = q.vertex_map[bnd.front()];
  } else {
    q = quotient(g, boundary.xi);
  }
  const std::size_t nq = q.graph.vertex_count();
  std::vector<VertexId> free_vertices;
  for (VertexId v = 0; v < nq; ++v)
    if (!fixed || *fixed != v) free_vertices.push_back(v);
  if (free_vertices.size() > kMaxExactSpins) throw std::length_error("exact Ising sampling: too many spins");

  const std::size_t states = std::size_t{1} << free_vertices.size();
  std::vector<double> energy(states);
  std::vector<std::int8_t> s(nq, 1);
  double top = -kInf;
  for (std::size_t m = 0; m < states; ++m) {
    for (std::size_t i = 0; i < free_vertices.size(); ++i) s[free_vertices[i]] = ((m >> i) & 1U) ? -1 : 1;
    double sum = 0.0;
    for (const Edge& e : q.graph.edges()) sum += s[e.a] * s[e.b];
    energy[m] = beta * sum;
    top = std::max(top, energy[m]);
  }
  double total = 0.0;
  for (auto& w : energy) total += (w = std::exp(w - top));
  double u = rng.uniform() * total;
  std::size_t pick = states - 1;
  for (std::size_t m = 0; m < states; ++m) {
    if (u < energy[m]) {
      pick = m;
      break;
    }
    u -= energy[m];
  }
  for (std::size_t i = 0; i < free_vertices.size(); ++i) s[free_vertices[i]] = ((pick >> i) & 1U) ? -1 : 1;
  if (fixed) s[*fixed] = 1;

  SpinConfig out(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (s[q.vertex_map[v]] < 0) out.set(v);
  return out;
}

EdgeConfig interfaces(const MultiGraph& g, const SpinConfig& face_spins) {
  if (!g.faces()) throw std::invalid_argument("interfaces: host has no dual-edge correspondence");
  const FaceMap& fm = *g.faces();
  if (face_spins.size() != fm.face_count) throw std::invalid_argument("interfaces: one spin per face is required");
  EdgeConfig c(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (face_spins.test(fm.edge_faces[e][0]) != face_spins.test(fm.edge_faces[e][1])) c.set(e);
  return c;
}

}  // namespace isingrep
