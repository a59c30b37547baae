#include "doctest.h"
#include "isingrep/evens.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/topology.hpp"

using namespace isingrep;

namespace {

// Direction-0 cycle through the row x_1 = y.
EdgeConfig row(const MultiGraph& t, int y) {
  EdgeConfig c(t.edge_count());
  for (EdgeId e = 0; e < t.edge_count(); ++e)
    if (t.edge(e).label == 0 && t.coordinates(t.edge(e).a)[1] == y) c.set(e);
  return c;
}

// Unit plaquette with lower-left corner (x, y).
EdgeConfig plaquette(const MultiGraph& t, int x, int y) {
  const int m = t.period();
  auto wrap = [m](int v) { return ((v + m / 2) % m + m) % m - m / 2; };
  EdgeConfig c(t.edge_count());
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    const auto a = t.coordinates(t.edge(e).a);
    const int l = t.edge(e).label;
    const bool bottom = l == 0 && a[0] == wrap(x) && a[1] == wrap(y);
    const bool top = l == 0 && a[0] == wrap(x) && a[1] == wrap(y + 1);
    const bool left = l == 1 && a[0] == wrap(x) && a[1] == wrap(y);
    const bool right = l == 1 && a[0] == wrap(x + 1) && a[1] == wrap(y);
    if (bottom || top || left || right) c.set(e);
  }
  return c;
}

}  // namespace

TEST_CASE("crossing parity") {
  const MultiGraph t = build_torus(2, 2);
  const Hyperplane h = hyperplane(t, 0);
  const EdgeConfig r = row(t, 0), p = plaquette(t, -1, -1);
  CHECK(r.count() == 4);
  CHECK(p.count() == 4);
  CHECK(crossing_parity(r, h));
  CHECK_FALSE(crossing_parity(p, h));
  EdgeConfig both = r;
  both ^= p;
  CHECK(crossing_parity(both, h));
  for (int x = -2; x < 2; ++x) CHECK_FALSE(crossing_parity(plaquette(t, x, 0), h));
}

TEST_CASE("crossing parity is linear") {
  const MultiGraph t = build_torus(2, 1);
  const Hyperplane h = hyperplane(t, 0);
  for (std::uint64_t a = 0; a < 256; ++a)
    for (std::uint64_t b = 0; b < 256; b += 5) {
      const EdgeConfig ca = EdgeConfig::from_mask(8, a), cb = EdgeConfig::from_mask(8, b);
      EdgeConfig cx = ca;
      cx ^= cb;
      CHECK(crossing_parity(cx, h) == (crossing_parity(ca, h) != crossing_parity(cb, h)));
    }
}

TEST_CASE("component classification") {
  const MultiGraph t = build_torus(2, 2);
  const Hyperplane h = hyperplane(t, 0);
  const EdgeConfig r = row(t, -2);

  const WindingReport one = classify_components(t, r, h);
  CHECK(one.nontrivial_count == 1);
  CHECK(one.cnt_size == 4);
  CHECK(one.cnt_edges == r);

  EdgeConfig plaqs = plaquette(t, -2, -1);
  plaqs |= plaquette(t, 0, 0);
  const WindingReport none = classify_components(t, plaqs, h);
  CHECK(none.nontrivial_count == 0);
  CHECK(none.cnt_size == 0);
  CHECK(none.components.size() == 2);

  // Wrap-around plus a plaquette away from it: C_NT is the row only.
  EdgeConfig mixed = r;
  mixed |= plaquette(t, 0, 0);
  const WindingReport wr = classify_components(t, mixed, h, true);
  CHECK(wr.components.size() == 2);
  CHECK(wr.nontrivial_count == 1);
  CHECK(wr.cnt_edges == r);
  CHECK(wr.cnt_size == 4);
  CHECK(wr.disjoint_wraparound_count == std::size_t{1});
  CHECK(is_nontrivial(t, mixed, h));
  CHECK_FALSE(is_nontrivial(t, plaqs, h));
}

TEST_CASE("classification does not depend on the hyperplane level") {
  const MultiGraph t = build_torus(2, 1);
  std::vector<Hyperplane> planes;
  for (int level = -1; level < 1; ++level) planes.push_back(hyperplane(t, level));
  for (std::uint64_t m = 0; m < 256; ++m) {
    const EdgeConfig c = EdgeConfig::from_mask(8, m);
    const WindingReport a = classify_components(t, c, planes[0]);
    const WindingReport b = classify_components(t, c, planes[1]);
    CHECK(a.cnt_edges == b.cnt_edges);
    CHECK(a.nontrivial_count == b.nontrivial_count);
  }
  const MultiGraph t2 = build_torus(2, 2);
  const Hyperplane h0 = hyperplane(t2, 0), h1 = hyperplane(t2, 1);
  RngStream rng(8);
  for (int i = 0; i < 300; ++i) {
    EdgeConfig c(t2.edge_count());
    for (EdgeId e = 0; e < t2.edge_count(); ++e) c.set(e, rng.bernoulli(0.45));
    CHECK(classify_components(t2, c, h0).cnt_edges == classify_components(t2, c, h1).cnt_edges);
  }
}

TEST_CASE("span criterion agrees with an explicit odd simple loop") {
  // On T_1^2 a component is non-trivial iff it contains a simple loop of parity 1.
  const MultiGraph t = build_torus(2, 1);
  const Hyperplane h = hyperplane(t, 0);
  std::vector<std::uint64_t> odd_loops;
  for (std::uint64_t m = 1; m < 256; ++m) {
    const EdgeConfig c = EdgeConfig::from_mask(8, m);
    if (is_simple_loop(t, c) && crossing_parity(c, h)) odd_loops.push_back(m);
  }
  // 10 from tests/oracles/reference.py (torus_d2_n1_parity1_simple_loops)
  CHECK(odd_loops.size() == 10);
  for (std::uint64_t m = 0; m < 256; ++m) {
    bool has = false;
    for (std::uint64_t l : odd_loops) has = has || (l & ~m) == 0;
    CHECK(is_nontrivial(t, EdgeConfig::from_mask(8, m), h) == has);
  }
}

TEST_CASE("xor action") {
  const MultiGraph t = build_torus(2, 2);
  const Hyperplane h = hyperplane(t, 0);
  const EdgeConfig gamma = row(t, 0);
  const EdgeConfig empty(t.edge_count());
  CHECK(xor_action(t, empty, gamma, h) == gamma);
  CHECK(xor_action(t, gamma, gamma, h).none());
  const EdgeConfig p = plaquette(t, 0, 0);
  const EdgeConfig out = xor_action(t, p, gamma, h);
  CHECK(is_nontrivial(t, out, h));
  CHECK(is_even(t, out));
  CHECK_THROWS_AS(xor_action(t, empty, p, h), std::invalid_argument);
}

TEST_CASE("disjoint wrap-arounds") {
  const MultiGraph t = build_torus(2, 2);
  const Hyperplane h = hyperplane(t, 0);
  for (int k = 0; k <= 4; ++k) {
    EdgeConfig c(t.edge_count());
    for (int y = -2; y < -2 + k; ++y) c |= row(t, y);
    CHECK(count_disjoint_wraparounds(t, c, h) == static_cast<std::size_t>(k));
  }
  CHECK(count_disjoint_wraparounds(t, EdgeConfig::full(32), h) == 4);
  CHECK(count_disjoint_wraparounds(t, plaquette(t, 0, 0), h) == 0);

  const auto loops = extract_disjoint_wraparounds(t, EdgeConfig::full(32), h);
  for (std::size_t i = 0; i < loops.size(); ++i) {
    CHECK(is_simple_loop(t, loops[i]));
    CHECK(crossing_parity(loops[i], h));
    for (std::size_t j = i + 1; j < loops.size(); ++j) {
      EdgeConfig both = loops[i];
      both &= loops[j];
      CHECK(both.none());
    }
  }

  const MultiGraph t1 = build_torus(2, 1);
  // 2 from tests/oracles/reference.py (torus_d2_n1_max_disjoint_wraparounds)
  CHECK(count_disjoint_wraparounds(t1, EdgeConfig::full(8), hyperplane(t1, 0)) == 2);
}

TEST_CASE("greedy count never exceeds the exact packing number") {
  const MultiGraph t = build_torus(2, 1);
  const Hyperplane h = hyperplane(t, 0);
  std::vector<std::uint64_t> loops;
  for (std::uint64_t m = 1; m < 256; ++m)
    if (is_simple_loop(t, EdgeConfig::from_mask(8, m)) && crossing_parity(EdgeConfig::from_mask(8, m), h))
      loops.push_back(m);
  for (std::uint64_t c = 0; c < 256; ++c) {
    std::size_t best = 0;
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << loops.size()); ++pick) {
      std::uint64_t used = 0;
      bool ok = true;
      for (std::size_t i = 0; i < loops.size() && ok; ++i)
        if ((pick >> i) & 1) {
          ok = (loops[i] & ~c) == 0 && (loops[i] & used) == 0;
          used |= loops[i];
        }
      if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(pick)));
    }
    const std::size_t greedy = count_disjoint_wraparounds(t, EdgeConfig::from_mask(8, c), h);
    CHECK(greedy <= best);
    CHECK((greedy > 0) == (best > 0));
  }
}

TEST_CASE("orbit statistics") {
  const MultiGraph t = build_torus(2, 2);
  const Hyperplane h = hyperplane(t, 0);
  const EdgeConfig full = EdgeConfig::full(32);
  const EdgeConfig empty(32);

  const OrbitStats one = group_orbit_stats(t, full, empty, {row(t, 0)}, h);
  CHECK(one.exhaustive);
  CHECK(one.orbit_size == 2);
  CHECK(one.p_nontrivial == doctest::Approx(0.5));

  std::vector<EdgeConfig> rows;
  for (int y = -2; y < 2; ++y) rows.push_back(row(t, y));
  const OrbitStats four = group_orbit_stats(t, full, empty, rows, h);
  CHECK(four.orbit_size == 16);
  CHECK(four.p_nontrivial == doctest::Approx(15.0 / 16.0));
  CHECK(four.p_nontrivial >= 0.5);

  const OrbitStats none = group_orbit_stats(t, full, plaquette(t, 0, 0), {}, h);
  CHECK(none.orbit_size == 1);
  CHECK(none.p_nontrivial == 0.0);

  CHECK_THROWS_AS(group_orbit_stats(t, full, empty, {row(t, 0), row(t, 0)}, h), std::invalid_argument);

  RngStream rng(1);
  const OrbitStats sampled = group_orbit_stats(t, full, empty, rows, h, &rng, 400);
  CHECK(sampled.p_nontrivial > 0.85);
}
