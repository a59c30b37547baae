#include "isingrep/evens.hpp"

#include <stdexcept>
#include <unordered_map>

#include "isingrep/union_find.hpp"

namespace isingrep {

namespace {

constexpr std::uint32_t kNone = 0xffffffffU;

// BFS spanning forest of the open subgraph.
struct Forest {
  std::vector<std::uint32_t> parent_edge;  // kNone for roots
  std::vector<VertexId> parent;
  std::vector<std::uint32_t> depth;
  std::vector<VertexId> order;  // BFS visiting order
  EdgeConfig tree;
};

Forest bfs_forest(const MultiGraph& g, const EdgeConfig& c) {
  const std::size_t nv = g.vertex_count();
  Forest f{std::vector<std::uint32_t>(nv, kNone), std::vector<VertexId>(nv, 0), std::vector<std::uint32_t>(nv, 0), {},
           EdgeConfig(g.edge_count())};
  std::vector<bool> seen(nv, false);
  f.order.reserve(nv);
  for (VertexId root = 0; root < nv; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::size_t head = f.order.size();
    f.order.push_back(root);
    while (head < f.order.size()) {
      const VertexId v = f.order[head++];
      for (EdgeId e : g.incident(v)) {
        if (!c.test(e)) continue;
        const VertexId w = g.edge(e).other(v);
        if (seen[w]) continue;
        seen[w] = true;
        f.parent_edge[w] = e;
        f.parent[w] = v;
        f.depth[w] = f.depth[v] + 1;
        f.tree.set(e);
        f.order.push_back(w);
      }
    }
  }
  return f;
}

// Forest edges are forced by the parity left at each vertex, leaves first.
void peel(const Forest& f, std::vector<std::uint8_t>& parity, EdgeConfig& eta) {
  for (std::size_t i = f.order.size(); i-- > 0;) {
    const VertexId v = f.order[i];
    if (f.parent_edge[v] == kNone || !parity[v]) continue;
    eta.set(f.parent_edge[v]);
    parity[v] = 0;
    parity[f.parent[v]] ^= 1U;
  }
}

void check_size(const MultiGraph& g, const EdgeConfig& c) {
  if (c.size() != g.edge_count()) throw std::invalid_argument("edge configuration does not match the host");
}

}  // namespace

SourceSet source_map(const MultiGraph& g, const EdgeConfig& c) {
  check_size(g, c);
  SourceSet s(g.vertex_count());
  c.for_each_set([&](std::size_t e) {
    const Edge& ed = g.edge(static_cast<EdgeId>(e));
    if (ed.is_loop()) return;
    s.flip(ed.a);
    s.flip(ed.b);
  });
  return s;
}

bool is_even(const MultiGraph& g, const EdgeConfig& c) { return source_map(g, c).none(); }

bool is_even(const MultiGraph& g, const EdgeConfig& c, const BoundaryCondition& xi) {
  check_size(g, c);
  return source_map(quotient(g, xi).graph, c).none();
}

std::size_t component_count(const MultiGraph& g, const EdgeConfig& c) {
  check_size(g, c);
  DisjointSet ds(g.vertex_count());
  c.for_each_set([&](std::size_t e) { ds.join(g.edge(static_cast<EdgeId>(e)).a, g.edge(static_cast<EdgeId>(e)).b); });
  return ds.components();
}

CycleBasis cycle_basis(const MultiGraph& g) { return cycle_basis(g, EdgeConfig::full(g.edge_count())); }

CycleBasis cycle_basis(const MultiGraph& g, const EdgeConfig& c) {
  check_size(g, c);
  Forest f = bfs_forest(g, c);
  CycleBasis basis;
  basis.forest = f.tree;
  c.for_each_set([&](std::size_t ei) {
    const auto e = static_cast<EdgeId>(ei);
    if (f.tree.test(e)) return;
    EdgeConfig gen(g.edge_count());
    gen.set(e);
    VertexId a = g.edge(e).a, b = g.edge(e).b;
    while (a != b) {
      if (f.depth[a] < f.depth[b]) std::swap(a, b);
      gen.flip(f.parent_edge[a]);
      a = f.parent[a];
    }
    basis.non_forest.push_back(e);
    basis.generators.push_back(std::move(gen));
  });
  return basis;
}

std::int64_t count_even(const MultiGraph& g, const EdgeConfig& c) {
  return static_cast<std::int64_t>(component_count(g, c)) + static_cast<std::int64_t>(c.count()) -
         static_cast<std::int64_t>(g.vertex_count());
}

EdgeConfig even_from_coins(const MultiGraph& g, const EdgeConfig& c, const std::vector<bool>& coins) {
  check_size(g, c);
  const Forest f = bfs_forest(g, c);
  EdgeConfig eta(g.edge_count());
  std::vector<std::uint8_t> parity(g.vertex_count(), 0);
  std::size_t k = 0;
  c.for_each_set([&](std::size_t ei) {
    if (f.tree.test(ei)) return;
    if (k >= coins.size()) throw std::invalid_argument("even_from_coins: too few coins");
    if (coins[k++]) {
      eta.set(ei);
      const Edge& e = g.edge(static_cast<EdgeId>(ei));
      if (!e.is_loop()) {
        parity[e.a] ^= 1U;
        parity[e.b] ^= 1U;
      }
    }
  });
  if (k != coins.size()) throw std::invalid_argument("even_from_coins: too many coins");
  peel(f, parity, eta);
  return eta;
}

EdgeConfig sample_ueg(const MultiGraph& g, const EdgeConfig& c, RngStream& rng) {
  check_size(g, c);
  const Forest f = bfs_forest(g, c);
  EdgeConfig eta(g.edge_count());
  std::vector<std::uint8_t> parity(g.vertex_count(), 0);
  c.for_each_set([&](std::size_t ei) {
    if (f.tree.test(ei) || !rng.bit()) return;
    eta.set(ei);
    const Edge& e = g.edge(static_cast<EdgeId>(ei));
    if (!e.is_loop()) {
      parity[e.a] ^= 1U;
      parity[e.b] ^= 1U;
    }
  });
  peel(f, parity, eta);
  return eta;
}

EdgeConfig sample_wired_ueg(const MultiGraph& g, const BoundaryCondition& xi, RngStream& rng) {
  const Quotient q = quotient(g, xi);
  return sample_ueg(q.graph, EdgeConfig::full(g.edge_count()), rng);
}

bool is_perfect_matching(const MultiGraph& g, const EdgeConfig& m) {
  check_size(g, m);
  std::vector<std::uint8_t> deg(g.vertex_count(), 0);
  bool ok = true;
  m.for_each_set([&](std::size_t ei) {
    const Edge& e = g.edge(static_cast<EdgeId>(ei));
    if (e.is_loop() || deg[e.a]++ > 0 || deg[e.b]++ > 0) ok = false;
  });
  if (!ok) return false;
  for (auto d : deg)
    if (d != 1) return false;
  return true;
}

EdgeConfig sample_uog(const MultiGraph& g, const EdgeConfig& dimerisation, RngStream& rng) {
  if (!is_perfect_matching(g, dimerisation)) throw std::invalid_argument("sample_uog: input is not a perfect matching");
  return dimerisation ^ sample_ueg(g, EdgeConfig::full(g.edge_count()), rng);
}

Distribution marginal_ueg_exact(const MultiGraph& g, const std::vector<EdgeId>& sub, const BoundaryCondition& xi) {
  return marginal_ueg_exact(quotient(g, xi).graph, sub, EdgeConfig::full(g.edge_count()));
}

Distribution marginal_ueg_exact(const MultiGraph& g, const std::vector<EdgeId>& sub, const EdgeConfig& ambient) {
  if (sub.size() > 64) throw std::invalid_argument("marginal_ueg_exact: at most 64 sub-edges");
  for (EdgeId e : sub)
    if (e >= g.edge_count()) throw std::invalid_argument("marginal_ueg_exact: sub-edge out of range");
  const CycleBasis basis = cycle_basis(g, ambient);
  if (basis.rank() > kMaxExactRank) throw std::length_error("marginal_ueg_exact: even group rank exceeds the cap");

  std::vector<std::uint64_t> proj(basis.rank(), 0);
  for (std::size_t i = 0; i < basis.rank(); ++i)
    for (std::size_t j = 0; j < sub.size(); ++j)
      if (basis.generators[i].test(sub[j])) proj[i] |= std::uint64_t{1} << j;

  const std::uint64_t total = std::uint64_t{1} << basis.rank();
  std::vector<Distribution::Entry> weights;
  if (sub.size() <= 24) {
    std::vector<std::uint64_t> counts(std::size_t{1} << sub.size(), 0);
    std::uint64_t key = 0;
    ++counts[0];
    for (std::uint64_t i = 1; i < total; ++i) {
      key ^= proj[static_cast<std::size_t>(std::countr_zero(i))];
      ++counts[key];
    }
    for (std::size_t k = 0; k < counts.size(); ++k)
      if (counts[k]) weights.emplace_back(k, static_cast<double>(counts[k]));
  } else {
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t key = 0;
    ++counts[0];
    for (std::uint64_t i = 1; i < total; ++i) {
      key ^= proj[static_cast<std::size_t>(std::countr_zero(i))];
      ++counts[key];
    }
    for (const auto& [k, n] : counts) weights.emplace_back(k, static_cast<double>(n));
  }
  return Distribution::from_weights(sub.size(), std::move(weights));
}

Distribution marginal_ueg_span(const MultiGraph& g, const std::vector<EdgeId>& sub, const BoundaryCondition& xi) {
  return marginal_ueg_span(quotient(g, xi).graph, sub, EdgeConfig::full(g.edge_count()));
}

Distribution marginal_ueg_span(const MultiGraph& g, const std::vector<EdgeId>& sub, const EdgeConfig& ambient) {
  if (sub.size() > 24) throw std::invalid_argument("marginal_ueg_span: at most 24 sub-edges");
  for (EdgeId e : sub)
    if (e >= g.edge_count()) throw std::invalid_argument("marginal_ueg_span: sub-edge out of range");
  const CycleBasis basis = cycle_basis(g, ambient);

  // Row-reduce the projections; pivots[b] holds the vector whose top bit is b.
  std::vector<std::uint64_t> pivots(sub.size(), 0);
  for (const EdgeConfig& gen : basis.generators) {
    std::uint64_t v = 0;
    for (std::size_t j = 0; j < sub.size(); ++j)
      if (gen.test(sub[j])) v |= std::uint64_t{1} << j;
    while (v) {
      const int top = 63 - std::countl_zero(v);
      if (!pivots[static_cast<std::size_t>(top)]) {
        pivots[static_cast<std::size_t>(top)] = v;
        break;
      }
      v ^= pivots[static_cast<std::size_t>(top)];
    }
  }
  std::vector<std::uint64_t> span_basis;
  for (auto v : pivots)
    if (v) span_basis.push_back(v);

  std::vector<Distribution::Entry> weights;
  std::uint64_t key = 0;
  weights.emplace_back(key, 1.0);
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << span_basis.size()); ++i) {
    key ^= span_basis[static_cast<std::size_t>(std::countr_zero(i))];
    weights.emplace_back(key, 1.0);
  }
  return Distribution::from_weights(sub.size(), std::move(weights));
}

}  // namespace isingrep
