#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isingrep/distribution.hpp"
#include "isingrep/estimators.hpp"
#include "isingrep/evens.hpp"
#include "isingrep/experiment.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/models.hpp"
#include "isingrep/oracle.hpp"
#include "isingrep/topology.hpp"

namespace py = pybind11;
using namespace isingrep;

namespace {

BoundaryCondition boundary_condition(const MultiGraph& g, const std::string& bc) {
  if (bc == "free") return BoundaryCondition::free(g);
  if (bc == "wired") return BoundaryCondition::wired(g);
  throw py::value_error("bc must be 'free' or 'wired'");
}

ModelParams params(std::optional<double> beta, std::optional<double> p, std::optional<double> x) {
  const int given = beta.has_value() + p.has_value() + x.has_value();
  if (given != 1) throw py::value_error("give exactly one of beta, p, x");
  if (beta) return ModelParams::from_beta(*beta);
  if (p) return ModelParams::from_p(*p);
  return ModelParams::from_x(*x);
}

Backend backend_from(const std::string& s) {
  if (s == "exact") return Backend::exact;
  if (s == "sw") return Backend::sw;
  throw py::value_error("backend must be 'exact' or 'sw'");
}

std::map<std::uint64_t, double> to_dict(const Distribution& d) {
  std::map<std::uint64_t, double> out;
  for (auto [k, p] : d.entries()) out.emplace(k, p);
  return out;
}

Distribution from_dict(std::size_t bits, const std::map<std::uint64_t, double>& m) {
  std::vector<Distribution::Entry> w(m.begin(), m.end());
  return Distribution::from_weights(bits, std::move(w));
}

EdgeConfig config_from_hex(const MultiGraph& g, const std::string& hex) {
  return EdgeConfig::from_hex(g.edge_count(), hex);
}

py::dict params_dict(const ModelParams& mp) {
  py::dict d;
  d["beta"] = mp.beta;
  d["p"] = mp.p;
  d["x"] = mp.x;
  return d;
}

Distribution enumerate_model(const MultiGraph& g, const std::string& model, const ModelParams& mp,
                             const BoundaryCondition& xi) {
  switch (model_from_string(model)) {
    case Model::bernoulli:
      return enumerate_bernoulli(g, mp.x);
    case Model::random_cluster:
      return enumerate_rc(g, xi, mp.p);
    case Model::loop:
      return enumerate_loop(g, xi, mp.x);
    case Model::current:
      return enumerate_traced_current(g, xi, mp.beta);
    case Model::double_current:
      return enumerate_double_current(g, xi, mp.beta);
  }
  throw py::value_error("unknown model");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Graphical representations of the Ising model: builders, samplers, exact laws and estimators.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CapError>(m, "CapError", PyExc_OverflowError);

  py::class_<MultiGraph>(m, "Graph")
      .def_property_readonly("name", &MultiGraph::name)
      .def_property_readonly("vertex_count", &MultiGraph::vertex_count)
      .def_property_readonly("edge_count", &MultiGraph::edge_count)
      .def_property_readonly("dimension", &MultiGraph::dimension)
      .def_property_readonly("period", &MultiGraph::period)
      .def_property_readonly("edges",
                             [](const MultiGraph& g) {
                               std::vector<std::pair<VertexId, VertexId>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(e.a, e.b);
                               return out;
                             })
      .def_property_readonly("boundary",
                             [](const MultiGraph& g) {
                               return std::vector<VertexId>(g.boundary().begin(), g.boundary().end());
                             })
      .def("coordinates",
           [](const MultiGraph& g, VertexId v) {
             const auto c = g.coordinates(v);
             return std::vector<int>(c.begin(), c.end());
           })
      .def("vertex_at",
           [](const MultiGraph& g, const std::vector<int>& c) -> std::optional<VertexId> { return g.vertex_at(c); })
      .def("degree", &MultiGraph::degree)
      .def("to_json",
           [](const MultiGraph& g) {
             nlohmann::json j;
             to_json(j, g);
             return j.dump();
           })
      .def("__repr__", [](const MultiGraph& g) {
        return "<Graph " + g.name() + " V=" + std::to_string(g.vertex_count()) +
               " E=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("box", &build_box, py::arg("d"), py::arg("n"));
  m.def("torus", &build_torus, py::arg("d"), py::arg("n"));
  m.def("hexagonal_torus", &build_hexagonal_torus, py::arg("k"));
  m.def("hexagonal_patch", &build_hexagonal_patch, py::arg("rows"), py::arg("cols"));
  m.def("path", &build_path, py::arg("edges"));
  m.def("cycle", &build_cycle, py::arg("length"));
  m.def(
      "generic",
      [](std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges, std::vector<VertexId> boundary) {
        return build_generic(n, std::move(edges), "generic", std::move(boundary));
      },
      py::arg("vertex_count"), py::arg("edges"), py::arg("boundary") = std::vector<VertexId>{});
  m.def("with_boundary", &with_boundary, py::arg("graph"), py::arg("boundary"));

  m.def(
      "convert",
      [](std::optional<double> beta, std::optional<double> p, std::optional<double> x) {
        return params_dict(params(beta, p, x));
      },
      py::kw_only(), py::arg("beta") = py::none(), py::arg("p") = py::none(), py::arg("x") = py::none(),
      "The coupled triple (beta, p, x) from any one of them.");
  m.def("dual_parameter", &dual_parameter, py::arg("p"));

  m.def(
      "sample",
      [](const MultiGraph& g, const std::string& model, std::optional<double> beta, std::optional<double> p,
         std::optional<double> x, const std::string& bc, const std::string& backend, std::uint64_t seed,
         std::size_t n) {
        const ModelParams mp = params(beta, p, x);
        EdgeSampler sampler(g, model_from_string(model), mp, boundary_condition(g, bc), backend_from(backend));
        std::vector<std::string> out;
        out.reserve(n);
        py::gil_scoped_release release;
        RngStream rng(seed);
        sampler.start(rng);
        for (std::size_t i = 0; i < n; ++i) out.push_back(sampler.next(rng).to_hex());
        return out;
      },
      py::arg("graph"), py::arg("model"), py::kw_only(), py::arg("beta") = py::none(), py::arg("p") = py::none(),
      py::arg("x") = py::none(), py::arg("bc") = "free", py::arg("backend") = "exact", py::arg("seed") = 0,
      py::arg("n") = 1, "Edge configurations as hex strings (bit i = edge i).");

  m.def(
      "enumerate",
      [](const MultiGraph& g, const std::string& model, std::optional<double> beta, std::optional<double> p,
         std::optional<double> x, const std::string& bc) {
        return to_dict(enumerate_model(g, model, params(beta, p, x), boundary_condition(g, bc)));
      },
      py::arg("graph"), py::arg("model"), py::kw_only(), py::arg("beta") = py::none(), py::arg("p") = py::none(),
      py::arg("x") = py::none(), py::arg("bc") = "free", "Exact law as {edge mask: probability}.");
  m.def(
      "tv_distance",
      [](const std::map<std::uint64_t, double>& a, const std::map<std::uint64_t, double>& b) {
        return tv_distance(from_dict(64, a), from_dict(64, b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "ueg_pushforward",
      [](const MultiGraph& g, const std::map<std::uint64_t, double>& law, const std::string& bc) {
        return to_dict(pushforward_ueg(g, from_dict(g.edge_count(), law), boundary_condition(g, bc)));
      },
      py::arg("graph"), py::arg("law"), py::arg("bc") = "free");
  m.def("correlation", &correlation, py::arg("graph"), py::arg("beta"), py::arg("v"), py::arg("w"));
  m.def(
      "count_even", [](const MultiGraph& g, const std::string& hex) { return count_even(g, config_from_hex(g, hex)); },
      py::arg("graph"), py::arg("config"), "log2 of the number of even subgraphs of the configuration.");
  m.def(
      "is_even",
      [](const MultiGraph& g, const std::string& hex, const std::string& bc) {
        return is_even(g, config_from_hex(g, hex), boundary_condition(g, bc));
      },
      py::arg("graph"), py::arg("config"), py::arg("bc") = "free");

  m.def(
      "classify",
      [](const MultiGraph& g, const std::string& hex, int level) {
        const WindingReport wr = classify_components(g, config_from_hex(g, hex), hyperplane(g, level), true);
        py::dict d;
        d["n_components"] = wr.components.size();
        d["n_nontrivial"] = wr.nontrivial_count;
        d["cnt_size"] = wr.cnt_size;
        d["wraparound_lb"] = *wr.disjoint_wraparound_count;
        return d;
      },
      py::arg("torus"), py::arg("config"), py::arg("level") = 0);

  m.def(
      "estimate",
      [](const MultiGraph& g, const std::string& observable, std::optional<VertexId> v, std::optional<VertexId> w,
         std::optional<int> k, const std::string& model, std::optional<double> beta, std::optional<double> p,
         std::optional<double> x, const std::string& bc, const std::string& backend, std::size_t n,
         std::uint64_t seed) {
        Observable o;
        o.kind = observable_kind_from_string(observable);
        if (v) o.v = *v;
        if (w) o.w = *w;
        if (k) o.k = *k;
        SamplerSpec spec;
        spec.model = model_from_string(model);
        spec.params = params(beta, p, x);
        spec.xi = boundary_condition(g, bc);
        spec.bc_name = bc;
        spec.backend = backend_from(backend);
        EstimateRow r;
        {
          py::gil_scoped_release release;
          r = estimate(g, o, spec, n, seed);
        }
        py::dict d;
        d["observable"] = r.observable;
        d["estimate"] = r.estimate;
        d["stderr"] = r.stderr_;
        d["n_samples"] = r.n_samples;
        d["batches"] = r.batches;
        return d;
      },
      py::arg("graph"), py::arg("observable"), py::kw_only(), py::arg("v") = py::none(), py::arg("w") = py::none(),
      py::arg("k") = py::none(), py::arg("model") = "loop", py::arg("beta") = py::none(), py::arg("p") = py::none(),
      py::arg("x") = py::none(), py::arg("bc") = "free", py::arg("backend") = "sw", py::arg("n") = 3200,
      py::arg("seed") = 0, "Batch-means estimate of an observable.");

  m.def(
      "run_command",
      [](const std::string& command, const std::string& config) {
        const nlohmann::json cfg = nlohmann::json::parse(config);
        CommandResult r;
        {
          py::gil_scoped_release release;
          r = run_command(command_from_string(command), cfg);
        }
        return py::make_tuple(r.exit_code, r.output);
      },
      py::arg("command"), py::arg("config"),
      "Runs a subcommand on a JSON config string; returns (exit_code, output).");
  m.def(
      "config_hash", [](const std::string& config) { return config_hash(nlohmann::json::parse(config)); },
      py::arg("config"));
  m.def("schema", []() { return experiment_schema().dump(2); }, "The experiment config JSON schema.");
}
