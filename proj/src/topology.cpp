#include "isingrep/topology.hpp"

#include <cassert>
#include <limits>
#include <stdexcept>

#include "isingrep/evens.hpp"

namespace isingrep {

namespace {

void check_host(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h) {
  if (!g.is_periodic()) throw std::invalid_argument("winding analysis needs a torus host");
  if (c.size() != g.edge_count() || h.outgoing.size() != g.edge_count())
    throw std::invalid_argument("configuration or hyperplane does not match the host");
}

// Component labels of the open subgraph plus a GF(2) potential: potential
// differences along BFS tree edges equal their crossing bit.
struct Potential {
  std::vector<std::uint32_t> label;  // component index, or kNone for isolated vertices
  std::vector<std::uint8_t> phi;
  std::vector<std::vector<VertexId>> members;
};

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

Potential potential(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h) {
  const std::size_t nv = g.vertex_count();
  Potential pot{std::vector<std::uint32_t>(nv, kNone), std::vector<std::uint8_t>(nv, 0), {}};
  std::vector<VertexId> queue;
  for (VertexId root = 0; root < nv; ++root) {
    if (pot.label[root] != kNone) continue;
    bool touched = false;
    for (EdgeId e : g.incident(root))
      if (c.test(e)) {
        touched = true;
        break;
      }
    if (!touched) continue;
    const auto id = static_cast<std::uint32_t>(pot.members.size());
    queue.assign(1, root);
    pot.label[root] = id;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      for (EdgeId e : g.incident(v)) {
        if (!c.test(e)) continue;
        const VertexId w = g.edge(e).other(v);
        if (pot.label[w] != kNone) continue;
        pot.label[w] = id;
        pot.phi[w] = pot.phi[v] ^ static_cast<std::uint8_t>(h.outgoing.test(e));
        queue.push_back(w);
      }
    }
    pot.members.push_back(queue);
  }
  return pot;
}

bool edge_parity(const MultiGraph& g, const Potential& pot, const Hyperplane& h, EdgeId e) {
  const Edge& ed = g.edge(e);
  return (pot.phi[ed.a] ^ pot.phi[ed.b] ^ static_cast<std::uint8_t>(h.outgoing.test(e))) != 0;
}

struct Walk {
  std::vector<VertexId> vertices;  // closed: vertices.front() == vertices.back()
  std::vector<EdgeId> edges;
};

bool walk_parity(const Walk& w, const Hyperplane& h) {
  bool p = false;
  for (EdgeId e : w.edges) p ^= h.outgoing.test(e);
  return p;
}

// Splits a closed walk with odd parity at repeated vertices until the walk
// is a simple cycle; one of the two pieces of every split is odd.
Walk reduce_to_simple(Walk w, const Hyperplane& h) {
  for (;;) {
    const std::size_t len = w.edges.size();
    bool split = false;
    for (std::size_t i = 0; i < len && !split; ++i)
      for (std::size_t j = i + 1; j < len && !split; ++j) {
        if (w.vertices[i] != w.vertices[j]) continue;
        Walk inner, outer;
        inner.vertices.assign(w.vertices.begin() + static_cast<std::ptrdiff_t>(i),
                              w.vertices.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        inner.edges.assign(w.edges.begin() + static_cast<std::ptrdiff_t>(i),
                           w.edges.begin() + static_cast<std::ptrdiff_t>(j));
        outer.vertices.assign(w.vertices.begin(), w.vertices.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        outer.vertices.insert(outer.vertices.end(), w.vertices.begin() + static_cast<std::ptrdiff_t>(j) + 1,
                              w.vertices.end());
        outer.edges.assign(w.edges.begin(), w.edges.begin() + static_cast<std::ptrdiff_t>(i));
        outer.edges.insert(outer.edges.end(), w.edges.begin() + static_cast<std::ptrdiff_t>(j), w.edges.end());
        w = walk_parity(inner, h) ? std::move(inner) : std::move(outer);
        split = true;
      }
    if (!split) return w;
  }
}

// Shortest closed walk through s with odd crossing parity, by BFS over
// (vertex, parity) states of the open subgraph.
std::optional<Walk> shortest_odd_walk(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h, VertexId s,
                                      std::vector<std::uint32_t>& dist, std::vector<EdgeId>& via) {
  const std::size_t nv = g.vertex_count();
  dist.assign(2 * nv, kNone);
  via.assign(2 * nv, kNone);
  std::vector<std::size_t> queue{2 * static_cast<std::size_t>(s)};
  dist[2 * s] = 0;
  const std::size_t target = 2 * static_cast<std::size_t>(s) + 1;
  for (std::size_t head = 0; head < queue.size() && dist[target] == kNone; ++head) {
    const std::size_t state = queue[head];
    const auto v = static_cast<VertexId>(state / 2);
    const std::size_t par = state % 2;
    for (EdgeId e : g.incident(v)) {
      if (!c.test(e)) continue;
      const VertexId w = g.edge(e).other(v);
      const std::size_t next = 2 * static_cast<std::size_t>(w) + (par ^ static_cast<std::size_t>(h.outgoing.test(e)));
      if (dist[next] != kNone) continue;
      dist[next] = dist[state] + 1;
      via[next] = e;
      queue.push_back(next);
    }
  }
  if (dist[target] == kNone) return std::nullopt;
  Walk w;
  std::size_t state = target;
  w.vertices.push_back(s);
  while (state != 2 * static_cast<std::size_t>(s)) {
    const EdgeId e = via[state];
    const auto v = static_cast<VertexId>(state / 2);
    const VertexId u = g.edge(e).other(v);
    const std::size_t par = (state % 2) ^ static_cast<std::size_t>(h.outgoing.test(e));
    w.edges.push_back(e);
    w.vertices.push_back(u);
    state = 2 * static_cast<std::size_t>(u) + par;
  }
  return w;
}

}  // namespace

bool crossing_parity(const EdgeConfig& c, const Hyperplane& h) { return (c & h.outgoing).count() % 2 == 1; }

WindingReport classify_components(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h,
                                  bool count_wraparounds) {
  check_host(g, c, h);
  const Potential pot = potential(g, c, h);
  WindingReport r;
  r.cnt_vertices = SourceSet(g.vertex_count());
  r.cnt_edges = EdgeConfig(g.edge_count());
  r.components.resize(pot.members.size());
  for (std::size_t i = 0; i < pot.members.size(); ++i) {
    r.components[i].vertices = pot.members[i];
    r.components[i].edges = EdgeConfig(g.edge_count());
  }
  c.for_each_set([&](std::size_t ei) {
    const auto e = static_cast<EdgeId>(ei);
    ComponentInfo& comp = r.components[pot.label[g.edge(e).a]];
    comp.edges.set(e);
    if (edge_parity(g, pot, h, e)) comp.nontrivial = true;
  });
  for (const ComponentInfo& comp : r.components) {
    if (!comp.nontrivial) continue;
    ++r.nontrivial_count;
    r.cnt_size += comp.vertices.size();
    for (VertexId v : comp.vertices) r.cnt_vertices.set(v);
    r.cnt_edges |= comp.edges;
  }
  if (count_wraparounds) r.disjoint_wraparound_count = count_disjoint_wraparounds(g, c, h);
  return r;
}

bool is_nontrivial(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h) {
  check_host(g, c, h);
  const Potential pot = potential(g, c, h);
  bool found = false;
  c.for_each_set([&](std::size_t e) { found = found || edge_parity(g, pot, h, static_cast<EdgeId>(e)); });
  return found;
}

EdgeConfig xor_action(const MultiGraph& g, const EdgeConfig& eta, const EdgeConfig& gamma, const Hyperplane& h) {
  check_host(g, eta, h);
  if (!crossing_parity(gamma, h)) throw std::invalid_argument("xor_action: loop has crossing parity 0");
  if (!is_even(g, eta)) throw std::invalid_argument("xor_action: eta is not even");
  EdgeConfig out = eta ^ gamma;
  assert(is_nontrivial(g, eta, h) || is_nontrivial(g, out, h));
  return out;
}

std::vector<EdgeConfig> extract_disjoint_wraparounds(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h) {
  check_host(g, c, h);
  EdgeConfig remaining = c;
  std::vector<EdgeConfig> loops;
  std::vector<std::uint32_t> dist;
  std::vector<EdgeId> via;
  for (;;) {
    std::optional<Walk> best;
    std::vector<bool> tried(g.vertex_count(), false);
    (remaining & h.outgoing).for_each_set([&](std::size_t e) {
      const VertexId s = g.edge(static_cast<EdgeId>(e)).a;
      if (tried[s]) return;
      tried[s] = true;
      auto w = shortest_odd_walk(g, remaining, h, s, dist, via);
      if (w && (!best || w->edges.size() < best->edges.size())) best = std::move(w);
    });
    if (!best) break;
    const Walk loop = reduce_to_simple(std::move(*best), h);
    EdgeConfig gamma(g.edge_count());
    for (EdgeId e : loop.edges) gamma.set(e);
    remaining.subtract(gamma);
    loops.push_back(std::move(gamma));
  }
  return loops;
}

std::size_t count_disjoint_wraparounds(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h) {
  return extract_disjoint_wraparounds(g, c, h).size();
}

bool is_simple_loop(const MultiGraph& g, const EdgeConfig& c) {
  if (c.size() != g.edge_count() || c.none()) return false;
  std::vector<std::uint32_t> deg(g.vertex_count(), 0);
  c.for_each_set([&](std::size_t e) {
    ++deg[g.edge(static_cast<EdgeId>(e)).a];
    ++deg[g.edge(static_cast<EdgeId>(e)).b];
  });
  std::size_t touched = 0;
  for (auto d : deg) {
    if (d != 0 && d != 2) return false;
    touched += d != 0;
  }
  return component_count(g, c) == g.vertex_count() - touched + 1;
}

OrbitStats group_orbit_stats(const MultiGraph& g, const EdgeConfig& omega, const EdgeConfig& eta0,
                             const std::vector<EdgeConfig>& loops, const Hyperplane& h, RngStream* rng,
                             std::uint64_t samples) {
  check_host(g, omega, h);
  if (!eta0.is_subset_of(omega) || !is_even(g, eta0))
    throw std::invalid_argument("group_orbit_stats: eta0 must be an even subgraph of omega");
  EdgeConfig used(g.edge_count());
  for (const EdgeConfig& l : loops) {
    if (!l.is_subset_of(omega)) throw std::invalid_argument("group_orbit_stats: loop not contained in omega");
    if ((used & l).any()) throw std::invalid_argument("group_orbit_stats: loops are not edge-disjoint");
    used |= l;
  }

  OrbitStats st;
  st.cnt_size_histogram.assign(g.vertex_count() + 1, 0);
  double size_sum = 0.0;
  auto record = [&](const EdgeConfig& eta) {
    const WindingReport r = classify_components(g, eta, h);
    ++st.orbit_size;
    st.nontrivial += r.nontrivial_count > 0;
    ++st.cnt_size_histogram[r.cnt_size];
    size_sum += static_cast<double>(r.cnt_size);
  };

  if (loops.size() <= kMaxExhaustiveOrbit) {
    st.exhaustive = true;
    EdgeConfig eta = eta0;
    record(eta);
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << loops.size()); ++i) {
      eta ^= loops[static_cast<std::size_t>(std::countr_zero(i))];
      record(eta);
    }
  } else {
    if (!rng || samples == 0) throw std::invalid_argument("group_orbit_stats: sampled mode needs an rng and a sample count");
    for (std::uint64_t s = 0; s < samples; ++s) {
      EdgeConfig eta = eta0;
      for (const EdgeConfig& l : loops)
        if (rng->bit()) eta ^= l;
      record(eta);
    }
  }
  st.p_nontrivial = static_cast<double>(st.nontrivial) / static_cast<double>(st.orbit_size);
  st.mean_cnt_size = size_sum / static_cast<double>(st.orbit_size);
  return st;
}

}  // namespace isingrep
