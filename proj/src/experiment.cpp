#include "isingrep/experiment.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "isingrep/distribution.hpp"
#include "isingrep/evens.hpp"
#include "isingrep/oracle.hpp"
#include "isingrep/topology.hpp"
#include "isingrep_schema_data.hpp"

namespace isingrep {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool is_integral(const json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  const double d = v.get<double>();
  return std::isfinite(d) && std::floor(d) == d;
}

bool type_matches(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "number") return v.is_number();
  if (t == "integer") return is_integral(v);
  return false;
}

void check_schema(const json& inst, const json& schema, const std::string& path, std::vector<std::string>& out) {
  const std::string where = path.empty() ? "(root)" : path;
  if (auto it = schema.find("type"); it != schema.end()) {
    bool ok = false;
    if (it->is_string()) {
      ok = type_matches(inst, it->get<std::string>());
    } else {
      for (const auto& t : *it) ok = ok || type_matches(inst, t.get<std::string>());
    }
    if (!ok) {
      out.push_back(where + ": expected type " + it->dump());
      return;
    }
  }
  if (auto it = schema.find("enum"); it != schema.end()) {
    bool ok = false;
    for (const auto& e : *it) ok = ok || e == inst;
    if (!ok) out.push_back(where + ": value " + inst.dump() + " not in " + it->dump());
  }
  if (inst.is_number()) {
    const double v = inst.get<double>();
    if (auto it = schema.find("minimum"); it != schema.end() && v < it->get<double>())
      out.push_back(where + ": " + inst.dump() + " is below the minimum " + it->dump());
    if (auto it = schema.find("maximum"); it != schema.end() && v > it->get<double>())
      out.push_back(where + ": " + inst.dump() + " is above the maximum " + it->dump());
  }
  if (inst.is_object()) {
    if (auto it = schema.find("required"); it != schema.end())
      for (const auto& r : *it)
        if (!inst.contains(r.get<std::string>())) out.push_back(where + ": missing required key " + r.dump());
    const json* props = schema.contains("properties") ? &schema.at("properties") : nullptr;
    const bool closed = schema.value("additionalProperties", true) == false;
    for (const auto& [key, value] : inst.items()) {
      if (props && props->contains(key)) {
        check_schema(value, props->at(key), path + "/" + key, out);
      } else if (closed) {
        out.push_back(where + ": unknown key \"" + key + "\"");
      }
    }
  }
  if (inst.is_array()) {
    if (auto it = schema.find("minItems"); it != schema.end() && inst.size() < it->get<std::size_t>())
      out.push_back(where + ": fewer than " + it->dump() + " items");
    if (auto it = schema.find("maxItems"); it != schema.end() && inst.size() > it->get<std::size_t>())
      out.push_back(where + ": more than " + it->dump() + " items");
    if (auto it = schema.find("items"); it != schema.end())
      for (std::size_t i = 0; i < inst.size(); ++i) check_schema(inst[i], *it, path + "/" + std::to_string(i), out);
  }
}

const json& require(const json& obj, const char* key, const char* context) {
  if (!obj.contains(key)) throw ConfigError(std::string(context) + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::vector<int> host_sizes(const json& host) {
  if (host.contains("ns") && host.contains("n")) throw ConfigError("host: give either \"n\" or \"ns\", not both");
  if (host.contains("ns")) return host.at("ns").get<std::vector<int>>();
  if (host.contains("n")) return {host.at("n").get<int>()};
  throw ConfigError("host: missing \"n\" or \"ns\"");
}

MultiGraph build_one(const json& host, const std::string& kind, int d, int n) {
  std::optional<EdgeId> kept;
  if (host.contains("kept_edge")) kept = host.at("kept_edge").get<EdgeId>();
  if (kind == "box") return build_box(d, n);
  if (kind == "torus") return build_torus(d, n);
  if (kind == "hexagonal_torus") return build_hexagonal_torus(n);
  if (kind == "path") return build_path(n);
  if (kind == "cycle") return build_cycle(n);
  if (kind == "cut_box") return build_cut_lattice(CutBase::box, d, n, kept);
  if (kind == "cut_hexagonal") return build_cut_lattice(CutBase::hexagonal, 2, n, kept);
  if (kind == "slab") return build_slab_sheet(SlabKind::two_layer_slab, d, n).extract();
  if (kind == "sheet") return build_slab_sheet(SlabKind::hyperplane_sheet, d, n).extract();
  throw ConfigError("host: unsupported lattice " + kind);
}

bool needs_dimension(const std::string& kind) {
  return kind == "box" || kind == "torus" || kind == "cut_box" || kind == "slab" || kind == "sheet";
}

struct Setup {
  std::vector<HostInstance> hosts;
  Model model = Model::loop;
  ModelParams params;
  std::string bc = "free";
  Backend backend = Backend::sw;
  SwSettings sw;
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t batches = kDefaultBatches;
  std::string hash;
};

Setup read_setup(const json& config) {
  validate_config(config);
  Setup s;
  s.hosts = build_hosts(config.at("host"));
  const json& m = config.at("model");
  s.model = model_from_string(m.at("name").get<std::string>());
  s.params = params_from_config(m);
  s.bc = m.value("bc", std::string("free"));
  if (config.contains("backend")) {
    const json& b = config.at("backend");
    s.backend = b.value("kind", std::string("sw")) == "exact" ? Backend::exact : Backend::sw;
    s.sw.burn_in = b.value("burn_in", s.sw.burn_in);
    s.sw.thinning = b.value("thinning", s.sw.thinning);
  }
  s.seed = config.at("seed").get<std::uint64_t>();
  s.samples = config.value("samples", s.samples);
  s.batches = config.value("batches", s.batches);
  s.hash = config_hash(config);
  return s;
}

BoundaryCondition boundary_of(const MultiGraph& g, const std::string& bc) {
  return bc == "wired" ? BoundaryCondition::wired(g) : BoundaryCondition::free(g);
}

SamplerSpec sampler_spec(const Setup& s, const MultiGraph& g, const std::string& bc) {
  SamplerSpec spec;
  spec.model = s.model;
  spec.params = s.params;
  spec.xi = boundary_of(g, bc);
  spec.bc_name = bc;
  spec.backend = s.backend;
  spec.sw = s.sw;
  return spec;
}

std::string csv_header_comment(const std::string& hash) { return "# config_hash=" + hash + "\n"; }

VertexId origin_of(const MultiGraph& g) {
  if (!g.has_embedding()) return 0;
  const std::vector<int> zero(g.coordinate_width(), 0);
  const auto v = g.vertex_at(zero);
  if (!v) throw ConfigError("host " + g.name() + " has no origin vertex");
  return *v;
}

VertexId resolve_vertex(const json& o, const char* key, const HostInstance& h) {
  if (!o.contains(key)) return origin_of(h.graph);
  const json& v = o.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "origin") return origin_of(h.graph);
    throw ConfigError(std::string("observable vertex must be an index or \"origin\", got ") + v.dump());
  }
  const auto id = v.get<VertexId>();
  if (id >= h.graph.vertex_count()) throw ConfigError("observable vertex out of range on " + h.graph.name());
  return id;
}

int resolve_k(const json& o, const HostInstance& h) {
  if (!o.contains("k")) return h.n;
  const json& k = o.at("k");
  if (k.is_string()) {
    if (k.get<std::string>() == "n") return h.n;
    throw ConfigError("observable k must be an integer or \"n\", got " + k.dump());
  }
  return k.get<int>();
}

bool has_winding(const MultiGraph& g) {
  return g.kind() == LatticeKind::torus || g.kind() == LatticeKind::hexagonal_torus;
}

// ---------------------------------------------------------------------------
// enumerate-check

struct CheckRow {
  std::string identity;
  std::string host;
  std::string bc;
  ModelParams params;
  double tv = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

json to_json_row(const CheckRow& r) {
  json params = {{"beta", std::isinf(r.params.beta) ? json("inf") : json(r.params.beta)},
                 {"p", r.params.p},
                 {"x", r.params.x}};
  return {{"identity", r.identity}, {"host", r.host},           {"bc", r.bc},          {"params", params},
          {"tv", r.tv},             {"tolerance", r.tolerance}, {"pass", r.pass}};
}

// Brute-force count of even subgraphs of every configuration against count_even.
double counting_identity_error(const MultiGraph& g) {
  const std::size_t m = g.edge_count();
  std::vector<std::uint64_t> edge_src(m, 0);
  for (EdgeId e = 0; e < m; ++e) {
    const Edge& ed = g.edge(e);
    if (!ed.is_loop()) edge_src[e] = (std::uint64_t{1} << ed.a) ^ (std::uint64_t{1} << ed.b);
  }
  const std::uint64_t total = std::uint64_t{1} << m;
  std::vector<std::uint64_t> src(total, 0);
  for (std::uint64_t s = 1; s < total; ++s)
    src[s] = src[s & (s - 1)] ^ edge_src[static_cast<std::size_t>(std::countr_zero(s))];
  double worst = 0.0;
  for (std::uint64_t c = 0; c < total; ++c) {
    std::uint64_t count = 0;
    for (std::uint64_t s = c;; s = (s - 1) & c) {
      if (src[s] == 0) ++count;
      if (s == 0) break;
    }
    const std::int64_t k = count_even(g, EdgeConfig::from_mask(m, c));
    const double expected = std::ldexp(1.0, static_cast<int>(k));
    worst = std::max(worst, std::abs(static_cast<double>(count) - expected));
  }
  return worst;
}

}  // namespace

const json& experiment_schema() {
  static const json schema = json::parse(kExperimentSchemaText);
  return schema;
}

std::vector<std::string> schema_violations(const json& instance, const json& schema) {
  std::vector<std::string> out;
  check_schema(instance, schema, "", out);
  return out;
}

void validate_config(const json& config) {
  const auto errors = schema_violations(config, experiment_schema());
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  const json& m = config.at("model");
  const int given = static_cast<int>(m.contains("beta")) + static_cast<int>(m.contains("p")) +
                    static_cast<int>(m.contains("x"));
  if (given != 1) throw ConfigError("model: give exactly one of \"beta\", \"p\", \"x\"");
  const json& h = config.at("host");
  const std::string kind = h.at("lattice").get<std::string>();
  if (needs_dimension(kind) && !h.contains("d")) throw ConfigError("host: lattice " + kind + " needs \"d\"");
  if (kind == "hexagonal_patch" && !(h.contains("rows") && h.contains("cols")))
    throw ConfigError("host: hexagonal_patch needs \"rows\" and \"cols\"");
  if (kind == "generic" && !(h.contains("vertex_count") && h.contains("edges")))
    throw ConfigError("host: generic needs \"vertex_count\" and \"edges\"");
}

std::string config_hash(const json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<HostInstance> build_hosts(const json& host) {
  const std::string kind = require(host, "lattice", "host").get<std::string>();
  std::vector<HostInstance> out;
  const int d = host.value("d", 2);
  try {
    if (kind == "triangle") {
      out.push_back({build_cycle(3), 0, 0});
    } else if (kind == "hexagonal_patch") {
      out.push_back({build_hexagonal_patch(require(host, "rows", "host").get<int>(),
                                           require(host, "cols", "host").get<int>()),
                     2, 0});
    } else if (kind == "generic") {
      std::vector<std::pair<VertexId, VertexId>> edges;
      for (const auto& e : require(host, "edges", "host")) edges.emplace_back(e.at(0).get<VertexId>(), e.at(1).get<VertexId>());
      std::vector<VertexId> boundary;
      if (host.contains("boundary")) boundary = host.at("boundary").get<std::vector<VertexId>>();
      out.push_back({build_generic(require(host, "vertex_count", "host").get<std::size_t>(), std::move(edges),
                                   "generic", std::move(boundary)),
                     0, 0});
    } else {
      for (int n : host_sizes(host)) {
        MultiGraph g = build_one(host, kind, d, n);
        const int dim = g.dimension();
        out.push_back({std::move(g), dim, n});
      }
    }
    if (host.contains("boundary") && kind != "generic")
      for (auto& h : out) h.graph = with_boundary(h.graph, host.at("boundary").get<std::vector<VertexId>>());
  } catch (const std::overflow_error& e) {
    throw CapError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("host: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("host: ") + e.what());
  }
  return out;
}

ModelParams params_from_config(const json& model) {
  try {
    if (model.contains("beta")) return ModelParams::from_beta(model.at("beta").get<double>());
    if (model.contains("p")) return ModelParams::from_p(model.at("p").get<double>());
    if (model.contains("x")) return ModelParams::from_x(model.at("x").get<double>());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  throw ConfigError("model: give exactly one of \"beta\", \"p\", \"x\"");
}

Command command_from_string(const std::string& s) {
  if (s == "enumerate-check") return Command::enumerate_check;
  if (s == "torus-scan") return Command::torus_scan;
  if (s == "mixing-scan") return Command::mixing_scan;
  if (s == "sample") return Command::sample;
  throw ConfigError("unknown command: " + s);
}

std::string to_string(Command c) {
  switch (c) {
    case Command::enumerate_check: return "enumerate-check";
    case Command::torus_scan: return "torus-scan";
    case Command::mixing_scan: return "mixing-scan";
    case Command::sample: return "sample";
  }
  return "?";
}

CommandResult run_command(Command c, const json& config) {
  if (config.is_object() && config.contains("command") && config.at("command").is_string() &&
      config.at("command").get<std::string>() != to_string(c))
    throw ConfigError("config is for command " + config.at("command").get<std::string>() + ", not " + to_string(c));
  try {
    switch (c) {
      case Command::enumerate_check: return cmd_enumerate_check(config);
      case Command::torus_scan: return cmd_torus_scan(config);
      case Command::mixing_scan: return cmd_mixing_scan(config);
      case Command::sample: return cmd_sample(config);
    }
  } catch (const std::length_error& e) {
    throw CapError(e.what());
  }
  throw ConfigError("unknown command");
}

CommandResult cmd_enumerate_check(const json& config) {
  const Setup s = read_setup(config);
  const double tol = config.value("tolerance", 1e-12);
  const double corr_tol = std::max(tol, 1e-10);
  const ModelParams& mp = s.params;

  std::vector<CheckRow> rows;
  json skipped = json::array();
  auto add = [&](std::string identity, const MultiGraph& g, const std::string& bc, double tv, double tolerance) {
    rows.push_back({std::move(identity), g.name(), bc, mp, tv, tolerance, tv <= tolerance});
  };
  auto skip = [&](const std::string& identity, const MultiGraph& g, const std::string& why) {
    skipped.push_back({{"identity", identity}, {"host", g.name()}, {"reason", why}});
  };

  for (const HostInstance& hi : s.hosts) {
    const MultiGraph& g = hi.graph;
    if (g.edge_count() > kMaxOracleEdges)
      throw CapError(g.name() + " has " + std::to_string(g.edge_count()) + " edges; the oracle cap is " +
                     std::to_string(kMaxOracleEdges));
    const bool finite_beta = std::isfinite(mp.beta);

    for (const std::string bc : {"free", "wired"}) {
      const BoundaryCondition xi = boundary_of(g, bc);
      const Distribution rc = enumerate_rc(g, xi, mp.p);
      const Distribution loop = enumerate_loop(g, xi, mp.x);
      add("ueg_of_rc_equals_loop", g, bc, tv_distance(pushforward_ueg(g, rc, xi), loop), tol);
      if (g.edge_count() <= kMaxOracleEdges / 2) {
        add("loop_union_bernoulli_equals_rc", g, bc,
            tv_distance(pushforward_union(loop, enumerate_bernoulli(g, mp.x)), rc), tol);
        if (finite_beta)
          add("ueg_of_double_current_equals_loop", g, bc,
              tv_distance(pushforward_ueg(g, enumerate_double_current(g, xi, mp.beta), xi), loop), tol);
        else
          skip("ueg_of_double_current_equals_loop", g, "infinite beta");
      } else {
        skip("loop_union_bernoulli_equals_rc", g, "more than 12 edges");
        skip("ueg_of_double_current_equals_loop", g, "more than 12 edges");
      }
    }

    if (g.edge_count() <= kMaxCurrentEdges && finite_beta) {
      const TruncatedCurrent tc = current_truncated(g, mp.beta, 40);
      const double tv = tv_distance(enumerate_traced_current(g, BoundaryCondition::free(g), mp.beta), tc.law);
      add("current_union_vs_truncated", g, "free", tv, tc.tail_bound + tol);
    } else {
      skip("current_union_vs_truncated", g, finite_beta ? "more than 14 edges" : "infinite beta");
    }

    if (g.edge_count() <= 16 && g.vertex_count() <= 64)
      add("counting_identity", g, "free", counting_identity_error(g), 0.0);
    else
      skip("counting_identity", g, "more than 16 edges");

    if (g.vertex_count() <= 16 && finite_beta) {
      const Distribution rc = enumerate_rc(g, BoundaryCondition::free(g), mp.p);
      const bool small = g.edge_count() <= kMaxOracleEdges / 2;
      const Distribution dc = small ? enumerate_double_current(g, BoundaryCondition::free(g), mp.beta) : Distribution{};
      double err_rc = 0.0, err_dc = 0.0;
      for (VertexId w = 1; w < g.vertex_count(); ++w) {
        const double corr = correlation(g, mp.beta, 0, w);
        err_rc = std::max(err_rc, std::abs(corr - connectivity(g, rc, 0, w)));
        if (small) err_dc = std::max(err_dc, std::abs(corr * corr - connectivity(g, dc, 0, w)));
      }
      add("correlation_equals_rc_connectivity", g, "free", err_rc, corr_tol);
      if (small)
        add("squared_correlation_equals_double_current_connectivity", g, "free", err_dc, corr_tol);
      else
        skip("squared_correlation_equals_double_current_connectivity", g, "more than 12 edges");
    } else {
      skip("correlation_identities", g, finite_beta ? "more than 16 vertices" : "infinite beta");
    }

    if (g.kind() == LatticeKind::box && hi.d == 2 && hi.n >= 1) {
      const MultiGraph big = build_box(2, hi.n + 1);
      const std::vector<EdgeId> map = embed_edges(g, big);
      std::vector<EdgeId> all(g.edge_count());
      for (EdgeId e = 0; e < g.edge_count(); ++e) all[e] = e;
      const Distribution inner = marginal_ueg_span(big, map, BoundaryCondition::free(big));
      const Distribution wired = marginal_ueg_exact(g, all, BoundaryCondition::wired(g));
      add("ueg_marginal_equals_wired_ueg", g, "wired", tv_distance(inner, wired), tol);
    }

    if (g.faces() && g.faces()->outer_face) {
      if (mp.x > 0.0 && g.faces()->face_count <= kMaxOracleSpins) {
        const double beta_dual = -0.5 * std::log(mp.x);
        add("planar_interfaces_equal_loop", g, "free",
            tv_distance(enumerate_interfaces(g, beta_dual), enumerate_loop(g, BoundaryCondition::free(g), mp.x)),
            tol);
      } else {
        skip("planar_interfaces_equal_loop", g, mp.x > 0.0 ? "too many faces" : "x = 0");
      }
    }
  }

  json report;
  report["config_hash"] = s.hash;
  report["checks"] = json::array();
  bool all = true;
  for (const CheckRow& r : rows) {
    report["checks"].push_back(to_json_row(r));
    all = all && r.pass;
  }
  report["skipped"] = skipped;
  report["pass"] = all;
  return {all ? 0 : 1, report.dump(2) + "\n"};
}

CommandResult cmd_torus_scan(const json& config) {
  const Setup s = read_setup(config);
  std::ostringstream out;
  out << csv_header_comment(s.hash);
  out << "observable,host,d,n,model,beta,p,x,bc,estimate,stderr,n_samples,seed,n_times_estimate\n";
  json obs_cfg = config.value("observables", json::array());
  if (obs_cfg.empty())
    obs_cfg = json::array({{{"name", "p_in_cnt"}}, {{"name", "p_reach_boundary"}}, {{"name", "wraparound_lb"}}});

  for (const HostInstance& hi : s.hosts) {
    if (!has_winding(hi.graph)) throw ConfigError("torus-scan needs torus hosts, got " + hi.graph.name());
    std::vector<Observable> obs;
    for (const json& o : obs_cfg) {
      Observable ob;
      ob.kind = observable_kind_from_string(o.at("name").get<std::string>());
      ob.v = resolve_vertex(o, "v", hi);
      ob.w = resolve_vertex(o, "w", hi);
      ob.k = resolve_k(o, hi);
      obs.push_back(ob);
    }
    const SamplerSpec spec = sampler_spec(s, hi.graph, s.bc);
    const auto rows = estimate(hi.graph, obs, spec, s.samples, s.seed, s.batches);
    for (const EstimateRow& r : rows) {
      out << r.observable << ',' << r.host << ',' << hi.d << ',' << hi.n << ',' << r.model << ',' << fmt(r.params.beta)
          << ',' << fmt(r.params.p) << ',' << fmt(r.params.x) << ',' << r.bc << ',' << fmt(r.estimate) << ','
          << fmt(r.stderr_) << ',' << r.n_samples << ',' << r.seed << ',' << fmt(hi.n * r.estimate) << '\n';
    }
  }
  return {0, out.str()};
}

CommandResult cmd_mixing_scan(const json& config) {
  const Setup s = read_setup(config);
  const json ev = config.value("event", json::object());
  const int k = ev.value("k", 1);
  std::ostringstream out;
  out << csv_header_comment(s.hash);
  out << "host,d,n,model,beta,p,x,event,p_free,se_free,p_wired,se_wired,gap,stderr,n_samples,seed,exact\n";

  for (const HostInstance& hi : s.hosts) {
    const MultiGraph& host = hi.graph;
    if (host.kind() != LatticeKind::box) throw ConfigError("mixing-scan needs box hosts, got " + host.name());
    if (hi.n < k) throw ConfigError("mixing-scan: host " + host.name() + " does not contain the local box");
    const MultiGraph local = build_box(hi.d, k);
    std::vector<int> a(static_cast<std::size_t>(hi.d), 0), b = a;
    b[0] = 1;
    std::optional<EdgeId> local_edge;
    for (EdgeId e = 0; e < local.edge_count(); ++e) {
      const auto ca = local.coordinates(local.edge(e).a), cb = local.coordinates(local.edge(e).b);
      if (std::equal(ca.begin(), ca.end(), a.begin()) && std::equal(cb.begin(), cb.end(), b.begin())) local_edge = e;
    }
    const EdgeId host_edge = embed_edges(local, host).at(*local_edge);

    GapEstimate gap;
    bool exact = false;
    if (s.backend == Backend::exact) {
      exact = true;
      const BoundaryCondition fr = BoundaryCondition::free(host), wi = BoundaryCondition::wired(host);
      if (s.model == Model::loop && s.params.x == 1.0) {
        gap.p_a = marginal_ueg_span(host, {host_edge}, fr).probability(1);
        gap.p_b = marginal_ueg_span(host, {host_edge}, wi).probability(1);
      } else if (s.model == Model::loop || s.model == Model::random_cluster) {
        if (host.edge_count() > kMaxOracleEdges)
          throw CapError("exact mixing-scan away from x = 1 is limited to " + std::to_string(kMaxOracleEdges) +
                         " edges");
        auto law = [&](const BoundaryCondition& xi) {
          return s.model == Model::loop ? enumerate_loop(host, xi, s.params.x) : enumerate_rc(host, xi, s.params.p);
        };
        const std::uint64_t bit = std::uint64_t{1} << host_edge;
        gap.p_a = law(fr).mass([&](std::uint64_t key) { return (key & bit) != 0; });
        gap.p_b = law(wi).mass([&](std::uint64_t key) { return (key & bit) != 0; });
      } else {
        throw ConfigError("exact mixing-scan supports the loop and random_cluster models");
      }
      gap.gap = std::abs(gap.p_a - gap.p_b);
    } else {
      const LocalEvent event = [e = *local_edge](const EdgeConfig& c) { return c.test(e); };
      gap = mixing_gap(local, event, host, sampler_spec(s, host, "free"), host, sampler_spec(s, host, "wired"),
                       s.samples, s.seed, s.batches);
    }
    out << host.name() << ',' << hi.d << ',' << hi.n << ',' << to_string(s.model) << ',' << fmt(s.params.beta) << ','
        << fmt(s.params.p) << ',' << fmt(s.params.x) << ",origin_edge(k=" << k << ")," << fmt(gap.p_a) << ','
        << fmt(gap.se_a) << ',' << fmt(gap.p_b) << ',' << fmt(gap.se_b) << ',' << fmt(gap.gap) << ','
        << fmt(gap.stderr_) << ',' << (exact ? 0 : gap.n_samples) << ',' << s.seed << ',' << (exact ? 1 : 0) << '\n';
  }
  return {0, out.str()};
}

CommandResult cmd_sample(const json& config) {
  const Setup s = read_setup(config);
  if (s.hosts.size() != 1) throw ConfigError("sample takes a single host");
  const MultiGraph& g = s.hosts.front().graph;
  const bool winding = has_winding(g);
  std::optional<Hyperplane> h;
  if (winding) h = hyperplane(g, 0, 0);
  const SamplerSpec spec = sampler_spec(s, g, s.bc);
  const std::size_t n = s.samples;

  auto render = [&](std::size_t i, const EdgeConfig& c) {
    std::string line = std::to_string(i) + "," + c.to_hex();
    if (winding) {
      const WindingReport wr = classify_components(g, c, *h, true);
      line += "," + std::to_string(wr.components.size()) + "," + std::to_string(wr.nontrivial_count) + "," +
              std::to_string(wr.cnt_size) + "," + std::to_string(*wr.disjoint_wraparound_count);
    }
    return line;
  };

  std::vector<std::string> lines(n);
  const EdgeSampler prototype(g, spec.model, spec.params, spec.xi, spec.backend, spec.sw);
  if (spec.backend == Backend::sw && spec.model != Model::bernoulli) {
    EdgeSampler sampler = prototype.fork();
    RngStream rng(s.seed);
    sampler.start(rng);
    std::vector<EdgeConfig> configs;
    configs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) configs.push_back(sampler.next(rng));
    parallel_for(n, [&](std::size_t i) { lines[i] = render(i, configs[i]); });
  } else {
    parallel_for(n, [&](std::size_t i) {
      EdgeSampler sampler = prototype.fork();
      RngStream rng(s.seed, i);
      lines[i] = render(i, sampler.next(rng));
    });
  }

  std::ostringstream out;
  out << csv_header_comment(s.hash);
  out << "sample_id,config";
  if (winding) out << ",n_components,n_nontrivial,cnt_size,wraparound_lb";
  out << '\n';
  for (const auto& line : lines) out << line << '\n';
  return {0, out.str()};
}

}  // namespace isingrep
