#include <cmath>

#include "doctest.h"
#include "isingrep/distribution.hpp"
#include "isingrep/evens.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/oracle.hpp"

using namespace isingrep;

namespace {

VertexId at(const MultiGraph& g, int x, int y) {
  const std::vector<int> c{x, y};
  return *g.vertex_at(c);
}

}  // namespace

TEST_CASE("distribution basics") {
  const Distribution a = Distribution::from_weights(1, std::vector<Distribution::Entry>{{0, 3.0}, {1, 1.0}});
  const Distribution b = Distribution::from_weights(1, std::vector<Distribution::Entry>{{0, 1.0}, {1, 3.0}});
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, b) == doctest::Approx(0.5));
  CHECK(tv_distance(Distribution::point_mass(4, 1), Distribution::point_mass(4, 2)) == 1.0);
  CHECK_THROWS_AS(tv_distance(Distribution::point_mass(4, 1), Distribution::point_mass(5, 1)), std::invalid_argument);
  const Distribution merged =
      Distribution::from_weights(2, std::vector<Distribution::Entry>{{1, 1.0}, {1, 1.0}, {2, 0.0}, {3, 2.0}});
  CHECK(merged.support_size() == 2);
  CHECK(merged.probability(1) == doctest::Approx(0.5));
  CHECK(merged.probability(2) == 0.0);
  merged.validate();
}

TEST_CASE("single edge laws") {
  const MultiGraph edge = build_path(1);
  const BoundaryCondition fr = BoundaryCondition::free(edge);
  for (double p : {0.2, 0.5, 0.8}) CHECK(enumerate_rc(edge, fr, p).probability(1) == doctest::Approx(p / (2 - p)));
  CHECK(enumerate_loop(edge, fr, 0.7).probability(1) == 0.0);
  CHECK(correlation(edge, 0.4, 0, 1) == doctest::Approx(std::tanh(0.4)).epsilon(1e-14));
  CHECK(correlation(edge, 0.0, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("triangle loop law") {
  const MultiGraph tri = build_cycle(3);
  for (double x : {0.1, 0.5, 0.9}) {
    const Distribution d = enumerate_loop(tri, BoundaryCondition::free(tri), x);
    CHECK(d.support_size() == 2);
    CHECK(d.probability(7) == doctest::Approx(x * x * x / (1 + x * x * x)).epsilon(1e-14));
  }
}

TEST_CASE("enumerators produce valid distributions") {
  for (const MultiGraph& g : {build_box(2, 1), build_torus(2, 1), build_hexagonal_patch(1, 2)}) {
    for (const BoundaryCondition& xi : {BoundaryCondition::free(g), BoundaryCondition::wired(g)}) {
      enumerate_rc(g, xi, 0.4).validate();
      enumerate_loop(g, xi, 0.4).validate();
      enumerate_bernoulli(g, 0.4).validate();
    }
    enumerate_ising(g, 0.4, {BoundaryCondition::free(g), false}).validate();
  }
  CHECK_THROWS_AS(enumerate_rc(build_box(2, 2), BoundaryCondition::free(build_box(2, 2)), 0.5), std::length_error);
  CHECK_THROWS_AS(enumerate_ising(build_box(2, 2), 0.5, {}), std::length_error);
}

TEST_CASE("reference values on the 3x3 grid") {
  const MultiGraph g = build_box(2, 1);
  const double beta = 0.3;
  const ModelParams mp = ModelParams::from_beta(beta);
  const VertexId corner = at(g, -1, -1), opposite = at(g, 1, 1), center = at(g, 0, 0);
  // From tests/oracles/reference.py (grid3_corr_*, grid3_rc_connect_*)
  CHECK(correlation(g, beta, corner, opposite) == doctest::Approx(0.04455757427423786).epsilon(1e-12));
  CHECK(correlation(g, beta, center, corner) == doctest::Approx(0.18234299534769569).epsilon(1e-12));
  const Distribution rc = enumerate_rc(g, BoundaryCondition::free(g), mp.p);
  CHECK(connectivity(g, rc, corner, opposite) == doctest::Approx(0.04455757427424142).epsilon(1e-12));

  for (VertexId w = 0; w < g.vertex_count(); ++w)
    CHECK(std::abs(correlation(g, beta, 0, w) - connectivity(g, rc, 0, w)) < 1e-12);

  const Distribution loop = enumerate_loop(g, BoundaryCondition::free(g), 0.5);
  EdgeConfig outer(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).a != center && g.edge(e).b != center) outer.set(e);
  // From tests/oracles/reference.py (grid3_loop_x0.5_*)
  CHECK(loop.probability(0) == doctest::Approx(0.7463556851311953).epsilon(1e-14));
  CHECK(loop.probability(outer.to_mask()) == doctest::Approx(0.0029154518950437317).epsilon(1e-14));

  const Distribution rcw = enumerate_rc(g, BoundaryCondition::wired(g), 0.5);
  EdgeId right = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).a == center && g.edge(e).b == at(g, 1, 0)) right = e;
  const std::uint64_t bit = std::uint64_t{1} << right;
  // From tests/oracles/reference.py (grid3_rc_wired_p0.5_center_edge0_open)
  CHECK(rcw.mass([bit](std::uint64_t k) { return (k & bit) != 0; }) ==
        doctest::Approx(0.47058823529413685).epsilon(1e-12));
}

TEST_CASE("pushforward of point masses") {
  const MultiGraph tree = build_path(3);
  const Distribution pt = pushforward_ueg(tree, Distribution::point_mass(3, 7));
  CHECK(pt.support_size() == 1);
  CHECK(pt.probability(0) == 1.0);

  const MultiGraph c4 = build_cycle(4);
  const Distribution pc = pushforward_ueg(c4, Distribution::point_mass(4, 15));
  CHECK(pc.probability(0) == doctest::Approx(0.5));
  CHECK(pc.probability(15) == doctest::Approx(0.5));

  const Distribution d = enumerate_loop(c4, BoundaryCondition::free(c4), 0.3);
  CHECK(tv_distance(pushforward_union(d, Distribution::point_mass(4, 0)), d) < 1e-15);
  const Distribution u = pushforward_union(Distribution::point_mass(4, 3), Distribution::point_mass(4, 6));
  CHECK(u.probability(7) == 1.0);
}

TEST_CASE("coupling identities on small hosts") {
  std::vector<MultiGraph> hosts{build_path(3), build_cycle(4), build_cycle(3), build_box(2, 1),
                                with_boundary(build_torus(2, 1), {0, 3}), build_hexagonal_patch(1, 1)};
  for (const MultiGraph& g : hosts) {
    for (double p : {0.2, 0.5, 0.8}) {
      const ModelParams mp = ModelParams::from_p(p);
      for (const BoundaryCondition& xi : {BoundaryCondition::free(g), BoundaryCondition::wired(g)}) {
        const Distribution rc = enumerate_rc(g, xi, p);
        const Distribution loop = enumerate_loop(g, xi, mp.x);
        CHECK(tv_distance(pushforward_ueg(g, rc, xi), loop) < 1e-12);
        CHECK(tv_distance(pushforward_union(loop, enumerate_bernoulli(g, mp.x)), rc) < 1e-12);
        CHECK(tv_distance(pushforward_ueg(g, enumerate_double_current(g, xi, mp.beta), xi), loop) < 1e-12);
      }
    }
  }
}

TEST_CASE("truncated current") {
  const MultiGraph edge = build_path(1);
  const TruncatedCurrent zero = current_truncated(edge, 0.0, 20);
  CHECK(zero.law.probability(0) == 1.0);

  const TruncatedCurrent tc = current_truncated(edge, 0.7, 40);
  // From tests/oracles/reference.py (single_edge_current_open_b0.7)
  CHECK(tc.law.probability(1) == doctest::Approx(0.20329454000712494).epsilon(1e-12));
  CHECK(tc.tail_bound <= 1e-8);
  CHECK(tc.law.probability(1) == doctest::Approx((std::cosh(0.7) - 1) / std::cosh(0.7)).epsilon(1e-12));

  const MultiGraph tri = build_cycle(3);
  for (double beta : {0.3, 0.5, 1.0}) {
    const TruncatedCurrent t = current_truncated(tri, beta, 40);
    CHECK(t.tail_bound <= 1e-8);
    const double tv = tv_distance(t.law, enumerate_traced_current(tri, BoundaryCondition::free(tri), beta));
    CHECK(tv <= t.tail_bound + 1e-12);
  }
  const TruncatedCurrent coarse = current_truncated(tri, 1.0, 3);
  CHECK(coarse.tail_bound > 1e-6);
  CHECK_THROWS_AS(current_truncated(build_box(2, 2), 0.5, 10), std::length_error);
}

TEST_CASE("squared correlation equals double-current connectivity") {
  for (const MultiGraph& g : {build_cycle(4), build_box(2, 1), build_hexagonal_patch(1, 1)})
    for (double beta : {0.3, 0.7}) {
      const Distribution dc = enumerate_double_current(g, BoundaryCondition::free(g), beta);
      for (VertexId w = 1; w < g.vertex_count(); ++w) {
        const double c = correlation(g, beta, 0, w);
        CHECK(std::abs(c * c - connectivity(g, dc, 0, w)) < 1e-10);
      }
    }
}

TEST_CASE("planar interfaces") {
  const MultiGraph two = build_hexagonal_patch(1, 2);
  const double x = 0.4;
  const Distribution loop = enumerate_loop(two, BoundaryCondition::free(two), x);
  // From tests/oracles/reference.py (hex_1x2_loop_x0.4_empty)
  CHECK(loop.probability(0) == doctest::Approx(0.9917714138078851).epsilon(1e-14));
  const Distribution ifc = enumerate_interfaces(two, -0.5 * std::log(x));
  CHECK(tv_distance(ifc, loop) < 1e-12);

  const MultiGraph grid = build_box(2, 1);
  CHECK(tv_distance(enumerate_interfaces(grid, -0.5 * std::log(0.3)),
                    enumerate_loop(grid, BoundaryCondition::free(grid), 0.3)) < 1e-12);
  CHECK_THROWS_AS(enumerate_interfaces(build_torus(2, 1), 0.3), std::invalid_argument);
}

TEST_CASE("wired Ising boundary shares one spin per class") {
  const MultiGraph g = build_path(2);
  const Distribution d = enumerate_ising(g, 0.5, {BoundaryCondition::wired(g), false});
  for (auto [k, p] : d.entries()) CHECK(((k & 1) != 0) == ((k & 4) != 0));
  const Distribution plus = enumerate_ising(g, 0.5, {BoundaryCondition::wired(g), true});
  for (auto [k, p] : plus.entries()) CHECK((k & 5) == 0);
}
