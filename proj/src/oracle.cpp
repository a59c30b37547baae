#include "isingrep/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "isingrep/evens.hpp"
#include "isingrep/small_graph.hpp"

namespace isingrep {

namespace {

void edge_cap(const MultiGraph& g, std::size_t cap = kMaxOracleEdges) {
  if (g.edge_count() > cap) throw std::length_error("oracle: host has too many edges for exact enumeration");
}

std::uint64_t mask_of(const EdgeConfig& c) { return c.to_mask(); }

// Spin configurations on g's vertices as (minus-spin vertex mask, log weight).
struct SpinTable {
  std::vector<std::uint64_t> keys;
  std::vector<double> log_weights;
};

SpinTable spin_table(const MultiGraph& g, double beta, const IsingBoundary& boundary) {
  if (!(beta >= 0.0) || std::isinf(beta)) throw std::domain_error("exact Ising enumeration needs finite beta >= 0");
  if (g.vertex_count() > 64) throw std::length_error("oracle: spin keys need at most 64 vertices");
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
  std::vector<VertexId> free_vertices;
  for (VertexId v = 0; v < q.graph.vertex_count(); ++v)
    if (!fixed || *fixed != v) free_vertices.push_back(v);
  if (free_vertices.size() > kMaxOracleSpins) throw std::length_error("oracle: too many spins for exact enumeration");

  // Members of each quotient vertex, as masks over g's vertices.
  std::vector<std::uint64_t> members(q.graph.vertex_count(), 0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) members[q.vertex_map[v]] |= std::uint64_t{1} << v;

  const std::size_t states = std::size_t{1} << free_vertices.size();
  SpinTable t;
  t.keys.resize(states);
  t.log_weights.resize(states);
  std::vector<int> s(q.graph.vertex_count(), 1);
  for (std::size_t m = 0; m < states; ++m) {
    std::uint64_t key = 0;
    for (std::size_t i = 0; i < free_vertices.size(); ++i) {
      const bool minus = (m >> i) & 1U;
      s[free_vertices[i]] = minus ? -1 : 1;
      if (minus) key |= members[free_vertices[i]];
    }
    double sum = 0.0;
    for (const Edge& e : q.graph.edges()) sum += s[e.a] * s[e.b];
    t.keys[m] = key;
    t.log_weights[m] = beta * sum;
  }
  return t;
}

std::vector<double> normalized(const std::vector<double>& log_w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> w(log_w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += (w[i] = std::exp(log_w[i] - top));
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

Distribution enumerate_bernoulli(const MultiGraph& g, double q) {
  edge_cap(g);
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("density must lie in [0, 1]");
  const std::size_t ne = g.edge_count();
  if (q == 0.0) return Distribution::point_mass(ne, 0);
  if (q == 1.0) return Distribution::point_mass(ne, mask_of(EdgeConfig::full(ne)));
  std::vector<Distribution::Entry> w;
  w.reserve(std::size_t{1} << ne);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << ne); ++m) {
    const int k = std::popcount(m);
    w.emplace_back(m, std::pow(q, k) * std::pow(1.0 - q, static_cast<double>(ne) - k));
  }
  return Distribution::from_weights(ne, std::move(w));
}

Distribution enumerate_rc(const MultiGraph& g, const BoundaryCondition& xi, double p) {
  edge_cap(g);
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1]");
  const std::size_t ne = g.edge_count();
  if (p == 0.0) return Distribution::point_mass(ne, 0);
  if (p == 1.0) return Distribution::point_mass(ne, mask_of(EdgeConfig::full(ne)));
  const SmallGraph sg(quotient(g, xi).graph);
  const double r = p / (1.0 - p);
  std::vector<Distribution::Entry> w;
  w.reserve(std::size_t{1} << ne);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << ne); ++m)
    w.emplace_back(m, std::ldexp(std::pow(r, std::popcount(m)), static_cast<int>(sg.components(m))));
  return Distribution::from_weights(ne, std::move(w));
}

Distribution enumerate_loop(const MultiGraph& g, const BoundaryCondition& xi, double x) {
  edge_cap(g);
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("x must lie in [0, 1]");
  const Quotient q = quotient(g, xi);
  const std::size_t ne = g.edge_count();
  std::vector<Distribution::Entry> w;
  for_each_even(q.graph, EdgeConfig::full(ne), [&](const EdgeConfig& eta) {
    w.emplace_back(mask_of(eta), std::pow(x, static_cast<double>(eta.count())));
  });
  return Distribution::from_weights(ne, std::move(w));
}

Distribution enumerate_ising(const MultiGraph& g, double beta, const IsingBoundary& boundary) {
  const SpinTable t = spin_table(g, beta, boundary);
  const std::vector<double> w = normalized(t.log_weights);
  std::vector<Distribution::Entry> entries;
  entries.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) entries.emplace_back(t.keys[i], w[i]);
  return Distribution::from_weights(g.vertex_count(), std::move(entries));
}

Distribution pushforward_ueg(const MultiGraph& g, const Distribution& d, const BoundaryCondition& xi) {
  edge_cap(g);
  if (d.bits() != g.edge_count()) throw std::invalid_argument("pushforward_ueg: distribution lives on another host");
  const Quotient q = quotient(g, xi);
  const std::size_t ne = g.edge_count();
  std::unordered_map<std::uint64_t, double> acc;
  for (const auto& [key, prob] : d.entries()) {
    const EdgeConfig omega = EdgeConfig::from_mask(ne, key);
    const CycleBasis basis = cycle_basis(q.graph, omega);
    std::vector<std::uint64_t> gens;
    for (const auto& gen : basis.generators) gens.push_back(gen.to_mask());
    const double share = std::ldexp(prob, -static_cast<int>(gens.size()));
    std::uint64_t eta = 0;
    acc[eta] += share;
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << gens.size()); ++i) {
      eta ^= gens[static_cast<std::size_t>(std::countr_zero(i))];
      acc[eta] += share;
    }
  }
  return Distribution::from_weights(ne, acc);
}

Distribution pushforward_union(const Distribution& d1, const Distribution& d2) {
  if (d1.bits() != d2.bits()) throw std::invalid_argument("pushforward_union: distributions live on different hosts");
  if (static_cast<double>(d1.support_size()) * static_cast<double>(d2.support_size()) > static_cast<double>(1u << 24))
    throw std::length_error("pushforward_union: support product too large");
  std::unordered_map<std::uint64_t, double> acc;
  for (const auto& [a, pa] : d1.entries())
    for (const auto& [b, pb] : d2.entries()) acc[a | b] += pa * pb;
  return Distribution::from_weights(d1.bits(), acc);
}

Distribution enumerate_traced_current(const MultiGraph& g, const BoundaryCondition& xi, double beta) {
  const ModelParams params = ModelParams::from_beta(beta);
  return pushforward_union(enumerate_loop(g, xi, params.x), enumerate_bernoulli(g, params.current_union_density()));
}

Distribution enumerate_double_current(const MultiGraph& g, const BoundaryCondition& xi, double beta) {
  const Distribution single = enumerate_traced_current(g, xi, beta);
  return pushforward_union(single, single);
}

double correlation(const MultiGraph& g, double beta, VertexId v, VertexId w) {
  if (v >= g.vertex_count() || w >= g.vertex_count()) throw std::out_of_range("correlation: vertex out of range");
  const SpinTable t = spin_table(g, beta, IsingBoundary{});
  const std::vector<double> p = normalized(t.log_weights);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool sv = (t.keys[i] >> v) & 1U, sw = (t.keys[i] >> w) & 1U;
    s += (sv == sw) ? p[i] : -p[i];
  }
  return s;
}

double connectivity(const MultiGraph& g, const Distribution& d, VertexId v, VertexId w, const BoundaryCondition& xi) {
  edge_cap(g, 64);
  if (d.bits() != g.edge_count()) throw std::invalid_argument("connectivity: distribution lives on another host");
  if (v >= g.vertex_count() || w >= g.vertex_count()) throw std::out_of_range("connectivity: vertex out of range");
  const Quotient q = quotient(g, xi);
  const SmallGraph sg(q.graph);
  const VertexId qv = q.vertex_map[v], qw = q.vertex_map[w];
  return d.mass([&](std::uint64_t key) { return sg.connected(key, qv, qw); });
}

TruncatedCurrent current_truncated(const MultiGraph& g, double beta, int cap) {
  edge_cap(g, kMaxCurrentEdges);
  if (!(beta >= 0.0) || std::isinf(beta)) throw std::domain_error("current_truncated: beta must be finite and >= 0");
  if (cap < 1) throw std::invalid_argument("current_truncated: cap must be >= 1");
  const std::size_t ne = g.edge_count();
  if (g.vertex_count() > 64) throw std::length_error("current_truncated: too many vertices");

  double w_even = 0.0, w_odd = 0.0, term = 1.0;
  for (int n = 1; n <= cap; ++n) {
    term *= beta / n;
    (n % 2 == 0 ? w_even : w_odd) += term;
  }
  double remainder = 0.0;
  for (int n = cap + 1; term > 0.0; ++n) {
    term *= beta / n;
    remainder += term;
    if (term <= remainder * 1e-18) break;
  }

  std::vector<std::uint64_t> endpoints(ne, 0);
  for (EdgeId e = 0; e < ne; ++e) {
    const Edge& ed = g.edge(e);
    if (!ed.is_loop()) endpoints[e] = (std::uint64_t{1} << ed.a) ^ (std::uint64_t{1} << ed.b);
  }

  // Mixed-radix walk over class assignments 0 = zero, 1 = even > 0, 2 = odd.
  std::unordered_map<std::uint64_t, double> acc;
  std::vector<int> cls(ne, 0);
  double z = 0.0;
  for (;;) {
    std::uint64_t trace = 0, src = 0;
    double w = 1.0;
    for (std::size_t e = 0; e < ne; ++e) {
      if (cls[e] == 0) continue;
      trace |= std::uint64_t{1} << e;
      if (cls[e] == 1) {
        w *= w_even;
      } else {
        w *= w_odd;
        src ^= endpoints[e];
      }
    }
    if (src == 0 && w > 0.0) {
      acc[trace] += w;
      z += w;
    }
    std::size_t k = 0;
    while (k < ne && cls[k] == 2) cls[k++] = 0;
    if (k == ne) break;
    ++cls[k];
  }

  TruncatedCurrent out{Distribution::from_weights(ne, acc), 0.0};
  const double dropped = static_cast<double>(ne) * remainder * std::exp(beta * (static_cast<double>(ne) - 1.0));
  out.tail_bound = std::min(1.0, dropped / z);
  return out;
}

Distribution enumerate_interfaces(const MultiGraph& g, double beta_dual) {
  if (!g.faces() || !g.faces()->outer_face) throw std::invalid_argument("enumerate_interfaces: host needs a planar face map");
  const MultiGraph dual = build_dual(g);
  const Distribution spins = enumerate_ising(dual, beta_dual, IsingBoundary{BoundaryCondition::wired(dual), true});
  std::unordered_map<std::uint64_t, double> acc;
  for (const auto& [key, prob] : spins.entries())
    acc[mask_of(interfaces(g, SpinConfig::from_mask(dual.vertex_count(), key)))] += prob;
  return Distribution::from_weights(g.edge_count(), acc);
}

}  // namespace isingrep
