#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isingrep/bitset.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/rng.hpp"

namespace isingrep {

/// Parity of |c intersected with the outgoing edges of h|.
bool crossing_parity(const EdgeConfig& c, const Hyperplane& h);

struct ComponentInfo {
  std::vector<VertexId> vertices;
  EdgeConfig edges;
  bool nontrivial = false;
};

/// Components of (V, E_c) on a torus. A component is non-trivial iff its
/// cycle space contains a cycle of crossing parity 1, tested with a GF(2)
/// potential along a BFS tree. C_NT is the union of non-trivial components.
/// Isolated vertices are not reported as components.
struct WindingReport {
  std::vector<ComponentInfo> components;
  SourceSet cnt_vertices;
  EdgeConfig cnt_edges;
  std::size_t nontrivial_count = 0;
  std::size_t cnt_size = 0;  // vertices in C_NT
  std::optional<std::size_t> disjoint_wraparound_count;
};

WindingReport classify_components(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h,
                                  bool count_wraparounds = false);

/// True iff some component of c is non-trivial (cheaper than the full report).
bool is_nontrivial(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h);

/// eta XOR gamma for an even eta and a parity-1 loop gamma.
EdgeConfig xor_action(const MultiGraph& g, const EdgeConfig& eta, const EdgeConfig& gamma, const Hyperplane& h);

/// Greedy lower bound on the maximal number of edge-disjoint wrap-arounds:
/// repeatedly remove a shortest parity-1 simple loop, found by BFS over
/// (vertex, parity) states, and count the loops removed.
std::size_t count_disjoint_wraparounds(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h);

/// The loops removed by the greedy search, in extraction order.
std::vector<EdgeConfig> extract_disjoint_wraparounds(const MultiGraph& g, const EdgeConfig& c, const Hyperplane& h);

/// True iff c is a single simple loop (connected, every touched vertex of
/// degree 2; a lone self-loop or a pair of parallel edges qualifies).
bool is_simple_loop(const MultiGraph& g, const EdgeConfig& c);

/// Statistics of |C_NT(eta0 XOR gamma_A)| over subsets A of `loops`, where
/// gamma_A is the XOR of the loops indexed by A.
struct OrbitStats {
  bool exhaustive = false;
  std::uint64_t orbit_size = 0;  // subsets examined
  std::uint64_t nontrivial = 0;  // subsets with C_NT nonempty
  double p_nontrivial = 0.0;
  double mean_cnt_size = 0.0;
  std::vector<std::uint64_t> cnt_size_histogram;  // index = |C_NT|
};

inline constexpr std::size_t kMaxExhaustiveOrbit = 20;

/// Exhaustive when loops.size() <= kMaxExhaustiveOrbit, otherwise `samples`
/// uniform subsets drawn from rng. Throws unless eta0 is an even subgraph of
/// omega and the loops are pairwise edge-disjoint subsets of omega.
OrbitStats group_orbit_stats(const MultiGraph& g, const EdgeConfig& omega, const EdgeConfig& eta0,
                             const std::vector<EdgeConfig>& loops, const Hyperplane& h, RngStream* rng = nullptr,
                             std::uint64_t samples = 0);

}  // namespace isingrep
