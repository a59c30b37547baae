#pragma once

#include <cstdint>
#include <vector>

#include "isingrep/bitset.hpp"
#include "isingrep/distribution.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/rng.hpp"

namespace isingrep {

/// Vertices of odd degree in c. Self-loops contribute 2 and never create sources.
SourceSet source_map(const MultiGraph& g, const EdgeConfig& c);

bool is_even(const MultiGraph& g, const EdgeConfig& c);
/// Evenness of c read on the quotient G/~xi.
bool is_even(const MultiGraph& g, const EdgeConfig& c, const BoundaryCondition& xi);

/// Number of connected components of (V, E_c), isolated vertices included.
std::size_t component_count(const MultiGraph& g, const EdgeConfig& c);

/// Fundamental cycle basis of the open subgraph. The spanning forest is grown
/// by BFS from the lowest unvisited vertex, scanning incident edges in index
/// order. Generator i contains non_forest[i] and no other non-forest edge.
struct CycleBasis {
  EdgeConfig forest;
  std::vector<EdgeId> non_forest;
  std::vector<EdgeConfig> generators;

  std::size_t rank() const noexcept { return generators.size(); }
};

CycleBasis cycle_basis(const MultiGraph& g);
CycleBasis cycle_basis(const MultiGraph& g, const EdgeConfig& c);

/// log2 |Omega_empty(c)| = kappa(c) + o(c) - |V|.
std::int64_t count_even(const MultiGraph& g, const EdgeConfig& c);

/// Uniform even subgraph of the open subgraph. Non-forest edges get fair
/// coins and forest edges are then forced by peeling leaves, which is the
/// same map as XOR-ing the fundamental cycles selected by those coins.
EdgeConfig sample_ueg(const MultiGraph& g, const EdgeConfig& c, RngStream& rng);

/// The even subgraph whose non-forest coordinates are given by `coins`
/// (coins[i] for basis.non_forest[i]), computed by leaf peeling.
EdgeConfig even_from_coins(const MultiGraph& g, const EdgeConfig& c, const std::vector<bool>& coins);

/// Uniform element of the wired even group Omega^xi_empty(g).
EdgeConfig sample_wired_ueg(const MultiGraph& g, const BoundaryCondition& xi, RngStream& rng);

bool is_perfect_matching(const MultiGraph& g, const EdgeConfig& m);

/// Uniform odd subgraph: the dimerisation XOR a uniform even subgraph.
EdgeConfig sample_uog(const MultiGraph& g, const EdgeConfig& dimerisation, RngStream& rng);

inline constexpr std::size_t kMaxExactRank = 30;

/// Exact law of the restriction to `sub` of the uniform even subgraph of
/// G/~xi (first overload) or of the open subgraph `ambient` (second).
/// Keys are bit i = sub[i]. Enumerates all 2^rank coefficient vectors in
/// Gray-code order; throws std::length_error if rank > kMaxExactRank.
Distribution marginal_ueg_exact(const MultiGraph& g, const std::vector<EdgeId>& sub, const BoundaryCondition& xi);
Distribution marginal_ueg_exact(const MultiGraph& g, const std::vector<EdgeId>& sub, const EdgeConfig& ambient);

/// Same law computed without enumerating the even group: the restriction of
/// a uniform group element is uniform on the GF(2) span of the projected
/// generators. Only the span (at most 2^|sub| states) is enumerated, so any
/// rank is allowed; |sub| <= 24.
Distribution marginal_ueg_span(const MultiGraph& g, const std::vector<EdgeId>& sub, const BoundaryCondition& xi);
Distribution marginal_ueg_span(const MultiGraph& g, const std::vector<EdgeId>& sub, const EdgeConfig& ambient);

/// Calls f(eta) for every even subgraph of the open subgraph c, in Gray-code
/// order of the fundamental-basis coefficients. Rank must be <= kMaxExactRank.
template <class F>
void for_each_even(const MultiGraph& g, const EdgeConfig& c, F&& f) {
  const CycleBasis basis = cycle_basis(g, c);
  if (basis.rank() > kMaxExactRank) throw std::length_error("even group rank exceeds enumeration cap");
  EdgeConfig eta(g.edge_count());
  f(static_cast<const EdgeConfig&>(eta));
  const std::uint64_t total = std::uint64_t{1} << basis.rank();
  for (std::uint64_t i = 1; i < total; ++i) {
    eta ^= basis.generators[static_cast<std::size_t>(std::countr_zero(i))];
    f(static_cast<const EdgeConfig&>(eta));
  }
}

}  // namespace isingrep
