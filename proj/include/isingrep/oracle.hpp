#pragma once

#include <cstddef>

#include "isingrep/distribution.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/models.hpp"

namespace isingrep {

// Brute-force exact laws. Edge models are keyed by the config mask (bit i =
// edge i), spin models by the vertex mask of minus spins. Every enumerator
// throws std::length_error above its size cap.

inline constexpr std::size_t kMaxOracleEdges = 24;
inline constexpr std::size_t kMaxOracleSpins = 20;
inline constexpr std::size_t kMaxCurrentEdges = 14;

Distribution enumerate_bernoulli(const MultiGraph& g, double q);
Distribution enumerate_rc(const MultiGraph& g, const BoundaryCondition& xi, double p);
Distribution enumerate_loop(const MultiGraph& g, const BoundaryCondition& xi, double x);
Distribution enumerate_ising(const MultiGraph& g, double beta, const IsingBoundary& boundary);

/// Law of the uniform even subgraph of (omega^xi) for omega ~ d.
Distribution pushforward_ueg(const MultiGraph& g, const Distribution& d, const BoundaryCondition& xi = {});

/// Law of omega1 | omega2 for independent omega1 ~ d1, omega2 ~ d2.
Distribution pushforward_union(const Distribution& d1, const Distribution& d2);

/// Traced sourceless current as loop(tanh beta) united with independent
/// Bernoulli(1 - 1/cosh beta) edges, and the union of two such copies.
Distribution enumerate_traced_current(const MultiGraph& g, const BoundaryCondition& xi, double beta);
Distribution enumerate_double_current(const MultiGraph& g, const BoundaryCondition& xi, double beta);

/// <sigma_v sigma_w> under free boundary conditions.
double correlation(const MultiGraph& g, double beta, VertexId v, VertexId w);

/// P[v <-> w] in omega^xi for omega ~ d.
double connectivity(const MultiGraph& g, const Distribution& d, VertexId v, VertexId w,
                    const BoundaryCondition& xi = {});

/// Law of the trace of a sourceless current with every multiplicity at most
/// `cap`, plus an upper bound on its total-variation distance to the
/// untruncated law. Multiplicities are summed per edge in three classes
/// (zero, even positive, odd), so the cost is 3^|E|.
struct TruncatedCurrent {
  Distribution law;
  double tail_bound = 0.0;
};

TruncatedCurrent current_truncated(const MultiGraph& g, double beta, int cap = 20);

/// Interfaces of the Ising model at inverse temperature `beta_dual` on the
/// dual of a planar g, with the outer face fixed to +1.
Distribution enumerate_interfaces(const MultiGraph& g, double beta_dual);

}  // namespace isingrep
