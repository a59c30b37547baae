// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "isingrep/distribution.hpp"
#include "isingrep/estimators.hpp"
#include "isingrep/evens.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/models.hpp"
#include "isingrep/oracle.hpp"
#include "isingrep/topology.hpp"

using namespace isingrep;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<EdgeId> all_edges(const MultiGraph& g) {
  std::vector<EdgeId> v(g.edge_count());
  for (EdgeId e = 0; e < v.size(); ++e) v[e] = e;
  return v;
}

EdgeId edge_between(const MultiGraph& g, const std::vector<int>& a, const std::vector<int>& b) {
  const VertexId va = *g.vertex_at(a), vb = *g.vertex_at(b);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if ((g.edge(e).a == va && g.edge(e).b == vb) || (g.edge(e).a == vb && g.edge(e).b == va)) return e;
  throw std::runtime_error("edge not found");
}

SamplerSpec loop_spec(const MultiGraph& g, double x, bool wired) {
  SamplerSpec s;
  s.model = Model::loop;
  s.params = ModelParams::from_x(x);
  s.xi = wired ? BoundaryCondition::wired(g) : BoundaryCondition::free(g);
  s.bc_name = wired ? "wired" : "free";
  s.backend = Backend::sw;
  return s;
}

std::vector<MultiGraph> coupling_fixtures() {
  return {build_path(3),  build_cycle(4), build_cycle(3), build_box(2, 1), with_boundary(build_torus(2, 1), {0, 3}),
          build_hexagonal_patch(1, 1)};
}

Outcome criterion_1() {
  double worst = 0.0, worst_current = 0.0;
  int checks = 0;
  bool ok = true;
  for (const MultiGraph& g : coupling_fixtures()) {
    for (double p : {0.2, 0.5, 0.8}) {
      const ModelParams mp = ModelParams::from_p(p);
      for (const BoundaryCondition& xi : {BoundaryCondition::free(g), BoundaryCondition::wired(g)}) {
        const Distribution rc = enumerate_rc(g, xi, p);
        const Distribution loop = enumerate_loop(g, xi, mp.x);
        const double a = tv_distance(pushforward_ueg(g, rc, xi), loop);
        const double b = tv_distance(pushforward_union(loop, enumerate_bernoulli(g, mp.x)), rc);
        const double c = tv_distance(pushforward_ueg(g, enumerate_double_current(g, xi, mp.beta), xi), loop);
        worst = std::max({worst, a, b, c});
        checks += 3;
      }
      if (mp.beta <= 1.0) {
        const TruncatedCurrent tc = current_truncated(g, mp.beta, 40);
        const double tv = tv_distance(tc.law, enumerate_traced_current(g, BoundaryCondition::free(g), mp.beta));
        ok = ok && tc.tail_bound <= 1e-8 && tv <= tc.tail_bound + 1e-12;
        worst_current = std::max(worst_current, tv);
        ++checks;
      }
    }
  }
  ok = ok && worst <= 1e-12;
  return {ok, std::to_string(checks) + " checks, max tv " + fmt("%.2e", worst) + ", truncated-current tv " +
                  fmt("%.2e", worst_current)};
}

// Even-subset count by direct enumeration of the submasks of c, with parity
// tracked through vertex incidence bitmasks.
std::uint64_t brute_even_count(const std::vector<std::uint64_t>& incidence, std::uint64_t c) {
  std::uint64_t count = 0;
  for (std::uint64_t s = c;; s = (s - 1) & c) {
    std::uint64_t odd = 0;
    for (std::uint64_t r = s; r; r &= r - 1) odd ^= incidence[static_cast<std::size_t>(std::countr_zero(r))];
    count += odd == 0;
    if (s == 0) break;
  }
  return count;
}

Outcome criterion_2() {
  std::vector<MultiGraph> hosts = coupling_fixtures();
  hosts.push_back(build_hexagonal_patch(1, 2));
  hosts.push_back(build_cut_lattice(CutBase::box, 2, 1, std::nullopt));
  hosts.push_back(build_hexagonal_patch(1, 3));
  std::uint64_t configs = 0, mismatches = 0;
  std::size_t largest = 0;
  for (const MultiGraph& g : hosts) {
    if (g.edge_count() > 16 || g.vertex_count() > 64) continue;
    largest = std::max(largest, g.edge_count());
    std::vector<std::uint64_t> incidence(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      incidence[e] = (std::uint64_t{1} << g.edge(e).a) ^ (std::uint64_t{1} << g.edge(e).b);
    const std::uint64_t total = std::uint64_t{1} << g.edge_count();
    for (std::uint64_t c = 0; c < total; ++c) {
      const std::int64_t k = count_even(g, EdgeConfig::from_mask(g.edge_count(), c));
      mismatches += brute_even_count(incidence, c) != (std::uint64_t{1} << k);
      ++configs;
    }
  }
  return {mismatches == 0, std::to_string(configs) + " configs on " + std::to_string(hosts.size()) +
                               " hosts (largest " + std::to_string(largest) + " edges), " +
                               std::to_string(mismatches) + " mismatches"};
}

Outcome criterion_3() {
  std::vector<MultiGraph> hosts{build_path(3), build_cycle(4), build_cycle(3), with_boundary(build_torus(2, 1), {0, 3}),
                                build_hexagonal_patch(1, 1), build_cut_lattice(CutBase::box, 2, 1, std::nullopt)};
  double worst_rc = 0.0, worst_dc = 0.0;
  int pairs = 0;
  for (const MultiGraph& g : hosts) {
    if (g.edge_count() > 10) continue;
    for (double beta : {0.3, 0.7}) {
      const ModelParams mp = ModelParams::from_beta(beta);
      const Distribution rc = enumerate_rc(g, BoundaryCondition::free(g), mp.p);
      const Distribution dc = enumerate_double_current(g, BoundaryCondition::free(g), beta);
      for (VertexId v = 0; v < g.vertex_count(); ++v)
        for (VertexId w = v + 1; w < g.vertex_count(); ++w) {
          const double c = correlation(g, beta, v, w);
          worst_rc = std::max(worst_rc, std::abs(c - connectivity(g, rc, v, w)));
          worst_dc = std::max(worst_dc, std::abs(c * c - connectivity(g, dc, v, w)));
          ++pairs;
        }
    }
  }
  return {worst_rc <= 1e-10 && worst_dc <= 1e-10, std::to_string(pairs) + " pairs, max |<ss> - phi| " +
                                                      fmt("%.2e", worst_rc) + ", max |<ss>^2 - P2| " +
                                                      fmt("%.2e", worst_dc)};
}

Outcome criterion_4() {
  const MultiGraph big = build_box(2, 2);
  const MultiGraph small = build_box(2, 1);
  const Distribution marginal = marginal_ueg_exact(big, embed_edges(small, big), BoundaryCondition::free(big));
  const Distribution wired = marginal_ueg_exact(small, all_edges(small), BoundaryCondition::wired(small));
  const double tv_boundary = tv_distance(marginal, wired);

  // E1: the four edges at the origin. E2: the ring of sup-distance 1. E3: the rest.
  std::vector<EdgeId> e1, e3;
  std::size_t ring = 0;
  for (EdgeId e = 0; e < big.edge_count(); ++e) {
    const auto a = big.coordinates(big.edge(e).a), b = big.coordinates(big.edge(e).b);
    const int ra = std::max(std::abs(a[0]), std::abs(a[1])), rb = std::max(std::abs(b[0]), std::abs(b[1]));
    if (ra == 0 || rb == 0)
      e1.push_back(e);
    else if (ra == 1 && rb == 1)
      ++ring;
    else
      e3.push_back(e);
  }
  std::vector<EdgeId> joint_sub = e1;
  joint_sub.insert(joint_sub.end(), e3.begin(), e3.end());
  const Distribution joint = marginal_ueg_exact(big, joint_sub, BoundaryCondition::free(big));
  const Distribution m1 = marginal_ueg_exact(big, e1, BoundaryCondition::free(big));
  const Distribution m3 = marginal_ueg_exact(big, e3, BoundaryCondition::free(big));
  std::vector<Distribution::Entry> product;
  for (auto [k1, p1] : m1.entries())
    for (auto [k3, p3] : m3.entries()) product.emplace_back(k1 | (k3 << e1.size()), p1 * p3);
  const double tv_split = tv_distance(joint, Distribution::from_weights(joint_sub.size(), product));
  const bool shape = e1.size() == 4 && ring == 8 && e3.size() == 28;
  return {shape && tv_boundary <= 1e-12 && tv_split <= 1e-12,
          "TV(marginal, wired) " + fmt("%.2e", tv_boundary) + ", split 4/8/28 TV(joint, product) " +
              fmt("%.2e", tv_split)};
}

Outcome criterion_5() {
  const Subgraph sheet = build_slab_sheet(SlabKind::hyperplane_sheet, 3, 1);
  std::vector<EdgeId> sub;
  for (EdgeId e = 0; e < sheet.host.edge_count(); ++e)
    if (sheet.edges.test(e)) sub.push_back(e);
  const Distribution exact = marginal_ueg_exact(sheet.host, sub, BoundaryCondition::free(sheet.host));
  const Distribution span = marginal_ueg_span(sheet.host, sub, BoundaryCondition::free(sheet.host));
  const Distribution fair = enumerate_bernoulli(sheet.extract(), 0.5);
  const double tv = tv_distance(exact, fair);
  const double tv_span = tv_distance(span, fair);
  return {sub.size() == 12 && tv <= 1e-12 && tv_span <= 1e-12,
          std::to_string(sub.size()) + " sheet edges, TV(exact, Bernoulli-1/2) " + fmt("%.2e", tv) +
              ", span method " + fmt("%.2e", tv_span)};
}

Outcome criterion_6() {
  const MultiGraph t = build_torus(2, 2);
  const Hyperplane h = hyperplane(t, 0);
  const EdgeConfig full = EdgeConfig::full(t.edge_count());
  const CycleBasis basis = cycle_basis(t);
  auto index_of = [&](const EdgeConfig& eta) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < basis.rank(); ++i)
      if (eta.test(basis.non_forest[i])) idx |= std::uint64_t{1} << i;
    return idx;
  };
  std::vector<std::uint8_t> nontrivial(std::size_t{1} << basis.rank(), 0);
  std::vector<std::uint64_t> loops;
  for_each_even(t, full, [&](const EdgeConfig& eta) {
    const std::uint64_t idx = index_of(eta);
    nontrivial[idx] = is_nontrivial(t, eta, h);
    if (is_simple_loop(t, eta) && crossing_parity(eta, h)) loops.push_back(idx);
  });
  std::uint64_t pairs = 0, counterexamples = 0;
  for (std::uint64_t idx = 0; idx < nontrivial.size(); ++idx) {
    if (nontrivial[idx]) continue;
    for (std::uint64_t l : loops) {
      ++pairs;
      counterexamples += !nontrivial[idx ^ l];
    }
  }

  // Orbit bound on the full torus and on random ambient configurations.
  RngStream rng(20261019);
  std::vector<EdgeConfig> ambients{full};
  for (int i = 0; i < 120; ++i) ambients.push_back(sample_bernoulli(t, 0.55 + 0.003 * i, rng));
  int with_wrap = 0, orbit_failures = 0;
  double min_orbit = 1.0, min_ueg = 1.0;
  for (const EdgeConfig& omega : ambients) {
    const std::vector<EdgeConfig> wraps = extract_disjoint_wraparounds(t, omega, h);
    if (wraps.empty()) continue;
    ++with_wrap;
    std::vector<EdgeConfig> starts{EdgeConfig(t.edge_count())};
    for (int j = 0; j < 3; ++j) starts.push_back(sample_ueg(t, omega, rng));
    for (const EdgeConfig& eta0 : starts) {
      const OrbitStats st = group_orbit_stats(t, omega, eta0, wraps, h);
      min_orbit = std::min(min_orbit, st.p_nontrivial);
      orbit_failures += !st.exhaustive || st.p_nontrivial < 0.5;
    }
    std::uint64_t total = 0, nt = 0;
    for_each_even(t, omega, [&](const EdgeConfig& eta) {
      ++total;
      nt += is_nontrivial(t, eta, h);
    });
    const double p = static_cast<double>(nt) / static_cast<double>(total);
    min_ueg = std::min(min_ueg, p);
    orbit_failures += p < 0.5;
  }
  const bool ok = counterexamples == 0 && !loops.empty() && orbit_failures == 0 && with_wrap > 0;
  return {ok, std::to_string(nontrivial.size()) + " even subgraphs x " + std::to_string(loops.size()) +
                  " parity-1 loops (" + std::to_string(pairs) + " trivial pairs), " + std::to_string(counterexamples) +
                  " counterexamples; " + std::to_string(with_wrap) + " ambients with a wrap-around, min orbit P[NT] " +
                  fmt("%.4f", min_orbit) + ", min UEG P[NT] " + fmt("%.4f", min_ueg)};
}

Outcome criterion_7() {
  const std::size_t n_samples = 10000;
  std::vector<double> value, se;
  std::string detail;
  for (int n : {4, 8, 16}) {
    const MultiGraph t = build_torus(2, n);
    Observable o;
    o.kind = ObservableKind::p_in_cnt;
    o.v = *t.vertex_at(std::vector<int>{0, 0});
    const EstimateRow r = estimate(t, o, loop_spec(t, 0.6, false), n_samples, 7000 + static_cast<std::uint64_t>(n));
    value.push_back(n * r.estimate);
    se.push_back(n * r.stderr_);
    detail += "n=" + std::to_string(n) + ": " + fmt("%.4f", n * r.estimate) + " +- " + fmt("%.4f", n * r.stderr_) + "; ";
  }
  bool ok = true;
  for (std::size_t i = 0; i < value.size(); ++i) ok = ok && value[i] - 4 * se[i] > 0;
  for (std::size_t i = 0; i + 1 < value.size(); ++i) {
    const double floor = 0.5 * value[i] - 4 * std::hypot(0.5 * se[i], se[i + 1]);
    ok = ok && value[i + 1] >= floor;
  }
  return {ok, "n*P[0 in C_NT] " + detail + "x=0.6, N=" + std::to_string(n_samples)};
}

Outcome criterion_8() {
  const std::size_t n_samples = 10000;
  const MultiGraph local = build_box(2, 1);
  const EdgeId ev = edge_between(local, {0, 0}, {1, 0});
  const LocalEvent event = [ev](const EdgeConfig& c) { return c.test(ev); };
  std::map<int, GapEstimate> gaps;
  std::string detail;
  for (int n : {4, 8, 16}) {
    const MultiGraph host = build_box(2, n);
    gaps[n] = mixing_gap(local, event, host, loop_spec(host, 0.8, false), host, loop_spec(host, 0.8, true), n_samples,
                         8000 + static_cast<std::uint64_t>(n));
    detail += "gap(" + std::to_string(n) + ")=" + fmt("%.4f", gaps[n].gap) + " +- " + fmt("%.4f", gaps[n].stderr_) + "; ";
  }
  const double margin = gaps[4].gap - gaps[16].gap;
  const double needed = 4 * std::hypot(gaps[4].stderr_, gaps[16].stderr_);
  const bool trend = margin > needed;

  const MultiGraph host = build_box(2, 4);
  const std::vector<EdgeId> map = embed_edges(local, host);
  const Distribution free_law = marginal_ueg_span(host, map, BoundaryCondition::free(host));
  const Distribution wired_law = marginal_ueg_span(host, map, BoundaryCondition::wired(host));
  const std::uint64_t bit = std::uint64_t{1} << ev;
  const double exact_gap = std::abs(free_law.mass([bit](std::uint64_t k) { return (k & bit) != 0; }) -
                                    wired_law.mass([bit](std::uint64_t k) { return (k & bit) != 0; }));
  const bool exact_ok = exact_gap <= 1e-12;
  return {trend && exact_ok, detail + "gap(4)-gap(16)=" + fmt("%.4f", margin) + " vs 4*se " + fmt("%.4f", needed) +
                                 "; x=1 exact gap on L4 " + fmt("%.2e", exact_gap)};
}

double chi_square_pvalue(const Distribution& truth, const std::map<std::uint64_t, std::uint64_t>& counts,
                         std::uint64_t n) {
  double stat = 0.0, pooled_expected = 0.0, pooled_observed = 0.0;
  int bins = 0;
  std::set<std::uint64_t> seen;
  for (auto [k, p] : truth.entries()) {
    seen.insert(k);
    const double expected = p * static_cast<double>(n);
    const auto it = counts.find(k);
    const double observed = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    if (expected < 5.0) {
      pooled_expected += expected;
      pooled_observed += observed;
      continue;
    }
    stat += (observed - expected) * (observed - expected) / expected;
    ++bins;
  }
  for (auto [k, c] : counts)
    if (!seen.count(k)) return 0.0;
  if (pooled_expected > 0.0) {
    stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
    ++bins;
  }
  const boost::math::chi_squared dist(bins - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

Outcome criterion_9() {
  const MultiGraph g = build_box(2, 1);
  const BoundaryCondition xi = BoundaryCondition::free(g);
  const double p = 0.5;
  const Distribution truth = enumerate_rc(g, xi, p);
  const std::uint64_t n = 1000000;

  const ExactRcSampler exact(g, xi, p);
  std::map<std::uint64_t, std::uint64_t> exact_counts, sw_counts;
  for (std::uint64_t i = 0; i < n; ++i) {
    RngStream rng(9001, i);
    ++exact_counts[exact.draw(rng).to_mask()];
  }
  const double p_exact = chi_square_pvalue(truth, exact_counts, n);

  const int burn_in = SwSettings{}.burn_in;
  std::vector<std::uint64_t> keys(n);
  parallel_for(n, [&](std::size_t i) {
    RngStream rng(9002, i);
    keys[i] = sample_rc_sw(g, xi, p, burn_in, rng).to_mask();
  });
  for (std::uint64_t k : keys) ++sw_counts[k];
  const double p_sw = chi_square_pvalue(truth, sw_counts, n);

  const ExactRcSampler low(g, xi, 0.4), high(g, xi, 0.7);
  RngStream rng(9003);
  std::uint64_t violations = 0;
  const std::uint64_t draws = 100000;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto [a, b] = sample_rc_coupled(low, high, rng);
    violations += !a.is_subset_of(b);
  }
  return {p_exact > 0.01 && p_sw > 0.01 && violations == 0,
          "exact chi2 p=" + fmt("%.4f", p_exact) + ", SW (burn-in " + std::to_string(burn_in) + ") chi2 p=" +
              fmt("%.4f", p_sw) + ", N=1e6; coupling violations " + std::to_string(violations) + "/1e5"};
}

bool max_degree_at_most_two(const MultiGraph& g, const EdgeConfig& c) {
  std::vector<int> deg(g.vertex_count(), 0);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (c.test(e)) {
      ++deg[g.edge(e).a];
      ++deg[g.edge(e).b];
    }
  return *std::max_element(deg.begin(), deg.end()) <= 2;
}

Outcome criterion_10() {
  double worst = 0.0;
  for (const MultiGraph& g : {build_hexagonal_patch(1, 2), build_hexagonal_patch(2, 2)})
    for (double x : {0.2, 0.5, 0.8}) {
      const Distribution ifc = enumerate_interfaces(g, -0.5 * std::log(x));
      worst = std::max(worst, tv_distance(ifc, enumerate_loop(g, BoundaryCondition::free(g), x)));
    }
  const MultiGraph patch = build_hexagonal_patch(2, 2);
  const double tv_ueg = tv_distance(enumerate_interfaces(patch, 0.0),
                                    marginal_ueg_exact(patch, all_edges(patch), BoundaryCondition::free(patch)));

  std::uint64_t examined = 0, degree3 = 0;
  for (const MultiGraph& g : {build_hexagonal_patch(2, 2), build_hexagonal_torus(1), build_hexagonal_torus(2)})
    for_each_even(g, EdgeConfig::full(g.edge_count()), [&](const EdgeConfig& eta) {
      ++examined;
      degree3 += !max_degree_at_most_two(g, eta);
    });
  const MultiGraph torus = build_hexagonal_torus(4);
  EdgeSampler sampler(torus, Model::loop, ModelParams::from_x(1.0 / std::sqrt(3.0)), BoundaryCondition::free(torus),
                      Backend::sw);
  RngStream rng(10010);
  sampler.start(rng);
  std::uint64_t sampled = 0;
  for (int i = 0; i < 2000; ++i) {
    ++sampled;
    degree3 += !max_degree_at_most_two(torus, sampler.next(rng));
  }
  return {worst <= 1e-12 && tv_ueg <= 1e-12 && degree3 == 0,
          "max TV(interfaces, loop) " + fmt("%.2e", worst) + ", x=1 TV(interfaces, UEG) " + fmt("%.2e", tv_ueg) + "; " +
              std::to_string(examined) + " even subgraphs enumerated + " + std::to_string(sampled) +
              " sampled, degree-3 vertices " + std::to_string(degree3)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"coupling identities", criterion_1},
      {"counting identity", criterion_2},
      {"correlation identities", criterion_3},
      {"boundary insensitivity and separation", criterion_4},
      {"sheet marginal", criterion_5},
      {"torus wrap-around laws", criterion_6},
      {"torus wrap trend", criterion_7},
      {"mixing trend", criterion_8},
      {"sampler correctness", criterion_9},
      {"planar interfaces", criterion_10},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !out.pass;
    std::printf("%s criterion %d (%s): %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
