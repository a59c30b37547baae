#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "isingrep/bitset.hpp"

namespace isingrep {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

enum class LatticeKind {
  generic,
  box,
  torus,
  hexagonal_torus,
  hexagonal_patch,
  slab,
  sheet,
  cut_box,
  cut_hexagonal,
  quotient,
  dual,
};

std::string to_string(LatticeKind kind);

/// An edge between two vertices. For lattice edges, `label` is the lattice
/// direction and b = a + e_label (taken modulo the period on tori).
struct Edge {
  VertexId a = 0;
  VertexId b = 0;
  int label = -1;

  bool is_loop() const noexcept { return a == b; }
  VertexId other(VertexId v) const noexcept { return v == a ? b : a; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Planar (or toroidal) face structure: the two faces on either side of each
/// edge. `outer_face` is set for planar embeddings.
struct FaceMap {
  std::size_t face_count = 0;
  std::optional<VertexId> outer_face;
  std::vector<std::array<VertexId, 2>> edge_faces;
};

/// Plain-data description used to construct a MultiGraph.
struct GraphSpec {
  LatticeKind kind = LatticeKind::generic;
  std::string name;
  int dimension = 0;
  int period = 0;  // 2n for tori, 2k for hexagonal tori; 0 otherwise
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
  std::size_t coordinate_width = 0;
  std::vector<int> coordinates;  // vertex_count * coordinate_width, row-major
  std::vector<VertexId> boundary;
  std::optional<FaceMap> faces;
};

/// Finite multigraph with stable vertex and edge indices. Parallel edges and
/// self-loops are allowed. Immutable after construction.
class MultiGraph {
 public:
  MultiGraph() = default;
  explicit MultiGraph(GraphSpec spec);

  std::size_t vertex_count() const noexcept { return spec_.vertex_count; }
  std::size_t edge_count() const noexcept { return spec_.edges.size(); }
  const Edge& edge(EdgeId e) const { return spec_.edges.at(e); }
  std::span<const Edge> edges() const noexcept { return spec_.edges; }

  LatticeKind kind() const noexcept { return spec_.kind; }
  const std::string& name() const noexcept { return spec_.name; }
  int dimension() const noexcept { return spec_.dimension; }
  int period() const noexcept { return spec_.period; }
  bool is_periodic() const noexcept { return spec_.period > 0; }
  bool has_labels() const noexcept { return has_labels_; }

  bool has_embedding() const noexcept { return spec_.coordinate_width > 0; }
  std::size_t coordinate_width() const noexcept { return spec_.coordinate_width; }
  std::span<const int> coordinates(VertexId v) const;
  std::optional<VertexId> vertex_at(std::span<const int> coords) const;

  std::span<const VertexId> boundary() const noexcept { return spec_.boundary; }
  bool is_boundary(VertexId v) const { return is_boundary_.at(v); }

  const std::optional<FaceMap>& faces() const noexcept { return spec_.faces; }

  /// Incident edge ids of v in increasing edge order; a self-loop appears twice.
  std::span<const EdgeId> incident(VertexId v) const;
  /// Degree with multiplicity (self-loops count twice).
  std::size_t degree(VertexId v) const { return incident(v).size(); }

  const GraphSpec& spec() const noexcept { return spec_; }

  friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
    return a.spec_.vertex_count == b.spec_.vertex_count && a.spec_.edges == b.spec_.edges &&
           a.spec_.coordinates == b.spec_.coordinates;
  }

 private:
  GraphSpec spec_;
  bool has_labels_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<EdgeId> incidence_;
  std::vector<bool> is_boundary_;
};

/// A partition of the boundary vertex set into wired classes.
class BoundaryCondition {
 public:
  BoundaryCondition() = default;
  /// `classes` must be disjoint; their union is the boundary vertex set.
  explicit BoundaryCondition(std::vector<std::vector<VertexId>> classes);

  static BoundaryCondition free(const MultiGraph& g);
  static BoundaryCondition wired(const MultiGraph& g);
  static BoundaryCondition free(std::span<const VertexId> boundary);
  static BoundaryCondition wired(std::span<const VertexId> boundary);

  const std::vector<std::vector<VertexId>>& classes() const noexcept { return classes_; }
  std::vector<VertexId> boundary() const;
  bool is_free() const noexcept;

  /// True iff every class of *this lies inside a class of `coarser` and both
  /// partition the same boundary set.
  bool finer_than(const BoundaryCondition& coarser) const;

  /// Throws if a class references a vertex outside g.
  void validate_for(const MultiGraph& g) const;

  std::string describe() const;

 private:
  std::vector<std::vector<VertexId>> classes_;
};

/// The quotient multigraph G/~xi. Edge indices are preserved, so an
/// EdgeConfig on g is also an EdgeConfig on `graph`.
struct Quotient {
  MultiGraph graph;
  std::vector<VertexId> vertex_map;  // old vertex -> quotient vertex
};

Quotient quotient(const MultiGraph& g, const BoundaryCondition& xi);

/// Edge classification of the hyperplane {x_axis = level} of a periodic
/// lattice. Outgoing edges are (v, v + e_axis) with v on the hyperplane,
/// incoming edges are (v, v - e_axis).
struct Hyperplane {
  int axis = 0;
  int level = 0;
  EdgeConfig outgoing;
  EdgeConfig incoming;
};

Hyperplane hyperplane(const MultiGraph& g, int level, int axis = 0);

// Builders. All are pure and deterministic.

/// Lambda_n = [-n, n]^d. Vertices in lexicographic coordinate order; edges in
/// lexicographic order of (lower endpoint, direction). For d = 2 the face
/// structure (plaquettes plus the outer face) is attached.
MultiGraph build_box(int d, int n);

/// T_n^d = Lambda_n / 2n Z^d with coordinates in [-n, n-1]^d.
MultiGraph build_torus(int d, int n);

/// Hexagonal lattice quotiented by 2k (Z + e^{i pi/3} Z). Vertices are the up
/// and down triangles of the underlying triangular lattice; faces are its
/// (2k)^2 points.
MultiGraph build_hexagonal_torus(int k);

/// Planar patch of hexagonal faces indexed by a rows x cols parallelogram of
/// the triangular lattice, with its outer face.
MultiGraph build_hexagonal_patch(int rows, int cols);

MultiGraph build_path(int edges);
MultiGraph build_cycle(int length);
MultiGraph build_generic(std::size_t vertex_count, std::vector<std::pair<VertexId, VertexId>> edges,
                         std::string name = "generic", std::vector<VertexId> boundary = {});

enum class SlabKind { hyperplane_sheet, two_layer_slab };

/// A designated edge subset of a host graph.
struct Subgraph {
  MultiGraph host;
  EdgeConfig edges;
  std::vector<VertexId> vertices;

  /// The subgraph as a graph of its own, vertices renumbered in host order.
  MultiGraph extract() const;
};

/// Sheet {x_d = 0} (d >= 3) or slab {x_d in {0, 1}} (d >= 2, n >= 1) of
/// Lambda_n as an edge subset of the box.
Subgraph build_slab_sheet(SlabKind kind, int d, int n);

enum class CutBase { box, hexagonal };

/// Base graph with every edge crossing the cut hyperplane removed except
/// `kept_edge` (an edge index of the base graph). For the box base the cut
/// is between x_1 = 0 and x_1 = 1; for the hexagonal base it is the level-0
/// hyperplane of build_hexagonal_torus(n).
MultiGraph build_cut_lattice(CutBase base, int d, int n, std::optional<EdgeId> kept_edge);

/// Edges of the base graph that build_cut_lattice removes (or keeps one of).
EdgeConfig cut_edges(CutBase base, int d, int n);

/// Copy of g with a different boundary vertex set.
MultiGraph with_boundary(const MultiGraph& g, std::vector<VertexId> boundary);

/// Planar dual: one vertex per face, edge i joins the two faces of primal edge i.
MultiGraph build_dual(const MultiGraph& g);

/// For graphs with embeddings: index in `large` of every edge of `small`,
/// matched by endpoint coordinates. Throws if an edge is missing.
std::vector<EdgeId> embed_edges(const MultiGraph& small, const MultiGraph& large);

/// Pulls a configuration on `large` back to `small` along an embedding map.
EdgeConfig restrict_config(const EdgeConfig& large_config, std::span<const EdgeId> map);

void to_json(nlohmann::json& j, const MultiGraph& g);
MultiGraph graph_from_json(const nlohmann::json& j);

}  // namespace isingrep
