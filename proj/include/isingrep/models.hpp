#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isingrep/bitset.hpp"
#include "isingrep/lattice.hpp"
#include "isingrep/rng.hpp"

namespace isingrep {

/// The coupled triple p = 1 - e^{-2 beta}, x = tanh(beta), p = 2x / (1 + x).
/// beta = +infinity corresponds to p = x = 1.
struct ModelParams {
  double beta = 0.0;
  double p = 0.0;
  double x = 0.0;

  static ModelParams from_beta(double beta);
  static ModelParams from_p(double p);
  static ModelParams from_x(double x);

  /// Density 1 - 1/cosh(beta) of the Bernoulli field added to a loop
  /// configuration to obtain a traced current.
  double current_union_density() const;
};

/// Solves p p* / ((1 - p)(1 - p*)) = 2 for p in (0, 1).
double dual_parameter(double p);

struct SpinTag {};
/// One bit per vertex; bit set = spin -1.
using SpinConfig = BitSet<SpinTag>;

/// Edge multiplicities of a current.
struct Current {
  std::vector<std::uint32_t> multiplicity;

  SourceSet sources(const MultiGraph& g) const;
  EdgeConfig trace() const;
};

double weight_rc(const MultiGraph& g, const EdgeConfig& c, const BoundaryCondition& xi, double p);
double weight_ising(const MultiGraph& g, const SpinConfig& s, double beta);
double weight_loop(const MultiGraph& g, const EdgeConfig& c, const BoundaryCondition& xi, double x);
double weight_current(const MultiGraph& g, const Current& n, double beta);

EdgeConfig sample_bernoulli(const MultiGraph& g, double q, RngStream& rng);

enum class Backend { exact, sw };

struct SwSettings {
  int burn_in = 64;
  int thinning = 4;
};

/// Swendsen-Wang dynamics on the quotient G/~xi. The state is a spin per
/// quotient vertex; a sweep opens each spin-agreeing edge with probability p
/// and then resamples one spin per cluster. With `fixed_plus`, the cluster of
/// the (single) wired boundary vertex keeps spin +1.
class SwendsenWangChain {
 public:
  SwendsenWangChain(const MultiGraph& g, const BoundaryCondition& xi, double p, bool fixed_plus = false);

  void sweep(RngStream& rng);
  void sweeps(int count, RngStream& rng) {
    for (int i = 0; i < count; ++i) sweep(rng);
  }

  /// Edge configuration drawn in the last sweep (indexed like g).
  const EdgeConfig& config() const noexcept { return omega_; }
  /// Spins on the vertices of g after the last sweep (+1 / -1).
  SpinConfig spins() const;
  const Quotient& quotient_graph() const noexcept { return q_; }

 private:
  Quotient q_;
  double p_;
  std::optional<VertexId> fixed_;
  std::vector<std::int8_t> spin_;
  EdgeConfig omega_;
};

EdgeConfig sample_rc_sw(const MultiGraph& g, const BoundaryCondition& xi, double p, int sweeps, RngStream& rng);

inline constexpr std::size_t kMaxExactEdges = 24;

/// Perfect random-cluster sampler by sequential conditioning. Holds the
/// subtree sums of all 2^|E| configuration weights; edge 0 is decided first.
class ExactRcSampler {
 public:
  ExactRcSampler(const MultiGraph& g, const BoundaryCondition& xi, double p);

  std::size_t edge_count() const noexcept { return edges_; }
  EdgeConfig draw(RngStream& rng) const;
  /// Opens edge j iff u[j] < P[edge j open | edges 0..j-1 as already drawn].
  EdgeConfig draw(std::span<const double> u) const;

 private:
  std::size_t edges_;
  std::vector<double> sums_;  // heap layout, root at 1; empty when degenerate
  std::optional<bool> constant_;
};

EdgeConfig sample_rc_exact(const MultiGraph& g, const BoundaryCondition& xi, double p, RngStream& rng);

/// Two configurations at p1 <= p2 driven by the same uniforms; the first is
/// always a subset of the second.
std::pair<EdgeConfig, EdgeConfig> sample_rc_coupled(const ExactRcSampler& low, const ExactRcSampler& high,
                                                    RngStream& rng);

enum class Model { bernoulli, random_cluster, loop, current, double_current };

std::string to_string(Model m);
Model model_from_string(const std::string& s);

/// Repeated draws from one edge model. Exact backends return i.i.d. draws;
/// the SW backend runs a chain (burn-in at start(), thinning between draws).
/// The loop law is sampled as the uniform even subgraph of an RC draw on the
/// quotient; currents add independent Bernoulli edges to loop draws.
class EdgeSampler {
 public:
  EdgeSampler(const MultiGraph& g, Model model, const ModelParams& params, const BoundaryCondition& xi,
              Backend backend, SwSettings sw = {});
  ~EdgeSampler();
  EdgeSampler(EdgeSampler&&) noexcept;
  EdgeSampler& operator=(EdgeSampler&&) noexcept;

  /// A sampler with the same settings that shares exact tables with this
  /// one and owns fresh SW chains.
  EdgeSampler fork() const;

  void start(RngStream& rng);
  EdgeConfig next(RngStream& rng);

  Model model() const noexcept { return model_; }
  Backend backend() const noexcept { return backend_; }

 private:
  struct RcSource;
  EdgeSampler() = default;
  EdgeConfig draw_rc(std::size_t copy, RngStream& rng);
  EdgeConfig draw_loop(std::size_t copy, RngStream& rng);

  MultiGraph g_;
  Model model_ = Model::loop;
  ModelParams params_;
  BoundaryCondition xi_;
  Backend backend_ = Backend::exact;
  SwSettings sw_;
  Quotient q_;
  std::vector<std::unique_ptr<RcSource>> sources_;
};

EdgeConfig sample_loop(const MultiGraph& g, const BoundaryCondition& xi, double x, RngStream& rng,
                       Backend backend = Backend::exact);
EdgeConfig sample_current(const MultiGraph& g, double beta, RngStream& rng, Backend backend = Backend::exact);
EdgeConfig sample_double_current(const MultiGraph& g, double beta, RngStream& rng,
                                 Backend backend = Backend::exact);

/// Boundary spins for Ising sampling: each wired class of `xi` shares one
/// spin; with `plus` every boundary vertex is fixed to +1.
struct IsingBoundary {
  BoundaryCondition xi;
  bool plus = false;
};

inline constexpr std::size_t kMaxExactSpins = 20;

SpinConfig sample_ising(const MultiGraph& g, double beta, const IsingBoundary& boundary, RngStream& rng,
                        Backend backend = Backend::exact);

/// Primal edges whose two faces carry opposite spins. `face_spins` is a spin
/// configuration on the faces of g (the vertices of build_dual(g)).
EdgeConfig interfaces(const MultiGraph& g, const SpinConfig& face_spins);

}  // namespace isingrep
