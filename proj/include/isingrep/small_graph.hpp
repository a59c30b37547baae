#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "isingrep/lattice.hpp"

namespace isingrep {

/// Mask-indexed view of a graph with at most 64 edges, for brute-force loops
/// over all 2^|E| configurations. Bit i of a mask is edge i.
class SmallGraph {
 public:
  explicit SmallGraph(const MultiGraph& g) : n_(g.vertex_count()), a_(g.edge_count()), b_(g.edge_count()) {
    if (g.edge_count() > 64) throw std::length_error("SmallGraph: more than 64 edges");
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      a_[e] = g.edge(e).a;
      b_[e] = g.edge(e).b;
    }
    parent_.resize(n_);
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return a_.size(); }

  /// Components of (V, mask), isolated vertices included.
  std::size_t components(std::uint64_t mask) const {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    std::size_t k = n_;
    while (mask) {
      const int e = std::countr_zero(mask);
      mask &= mask - 1;
      std::uint32_t x = find(a_[e]), y = find(b_[e]);
      if (x != y) {
        parent_[x] = y;
        --k;
      }
    }
    return k;
  }

  /// Vertex-indexed component labels (root ids) after components(mask).
  std::uint32_t root(std::uint32_t v) const { return find(v); }

  bool connected(std::uint64_t mask, std::uint32_t v, std::uint32_t w) const {
    components(mask);
    return find(v) == find(w);
  }

  /// Source set as a vertex mask (requires at most 64 vertices).
  std::uint64_t sources(std::uint64_t mask) const {
    if (n_ > 64) throw std::length_error("SmallGraph: source masks need at most 64 vertices");
    std::uint64_t s = 0;
    while (mask) {
      const int e = std::countr_zero(mask);
      mask &= mask - 1;
      if (a_[e] != b_[e]) s ^= (std::uint64_t{1} << a_[e]) ^ (std::uint64_t{1} << b_[e]);
    }
    return s;
  }

 private:
  std::uint32_t find(std::uint32_t x) const {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::size_t n_;
  std::vector<std::uint32_t> a_, b_;
  mutable std::vector<std::uint32_t> parent_;
};

}  // namespace isingrep
