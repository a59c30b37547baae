#include "isingrep/lattice.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace isingrep {

namespace {

constexpr std::size_t kMaxIndex = std::numeric_limits<std::uint32_t>::max();

std::size_t checked_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > kMaxIndex / base) throw std::overflow_error("lattice too large for 32-bit indices");
    r *= base;
  }
  return r;
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kMaxIndex / a) throw std::overflow_error("lattice too large for 32-bit indices");
  return a * b;
}

// Lexicographic mixed-radix codec with the first coordinate most significant.
struct Grid {
  int d;
  int side;
  int lo;  // smallest coordinate value

  std::size_t size() const { return checked_pow(static_cast<std::size_t>(side), d); }

  void decode(std::size_t idx, std::vector<int>& c) const {
    c.assign(static_cast<std::size_t>(d), 0);
    for (int k = d - 1; k >= 0; --k) {
      c[static_cast<std::size_t>(k)] = static_cast<int>(idx % static_cast<std::size_t>(side)) + lo;
      idx /= static_cast<std::size_t>(side);
    }
  }

  std::size_t encode(const std::vector<int>& c) const {
    std::size_t idx = 0;
    for (int k = 0; k < d; ++k) idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(c[static_cast<std::size_t>(k)] - lo);
    return idx;
  }
};

std::string box_name(const char* what, int d, int n) {
  std::ostringstream os;
  os << what << "(d=" << d << ",n=" << n << ")";
  return os.str();
}

}  // namespace

std::string to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::generic: return "generic";
    case LatticeKind::box: return "box";
    case LatticeKind::torus: return "torus";
    case LatticeKind::hexagonal_torus: return "hexagonal_torus";
    case LatticeKind::hexagonal_patch: return "hexagonal_patch";
    case LatticeKind::slab: return "slab";
    case LatticeKind::sheet: return "sheet";
    case LatticeKind::cut_box: return "cut_box";
    case LatticeKind::cut_hexagonal: return "cut_hexagonal";
    case LatticeKind::quotient: return "quotient";
    case LatticeKind::dual: return "dual";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// MultiGraph

MultiGraph::MultiGraph(GraphSpec spec) : spec_(std::move(spec)) {
  const std::size_t nv = spec_.vertex_count;
  if (nv > kMaxIndex || spec_.edges.size() > kMaxIndex) throw std::overflow_error("graph too large for 32-bit indices");
  for (const Edge& e : spec_.edges)
    if (e.a >= nv || e.b >= nv) throw std::invalid_argument("edge endpoint out of range");
  if (spec_.coordinate_width > 0 && spec_.coordinates.size() != nv * spec_.coordinate_width)
    throw std::invalid_argument("coordinate table has wrong size");
  for (VertexId v : spec_.boundary)
    if (v >= nv) throw std::invalid_argument("boundary vertex out of range");
  if (spec_.faces) {
    if (spec_.faces->edge_faces.size() != spec_.edges.size()) throw std::invalid_argument("face map size mismatch");
    for (const auto& f : spec_.faces->edge_faces)
      if (f[0] >= spec_.faces->face_count || f[1] >= spec_.faces->face_count)
        throw std::invalid_argument("face index out of range");
  }

  has_labels_ = !spec_.edges.empty() &&
                std::all_of(spec_.edges.begin(), spec_.edges.end(), [](const Edge& e) { return e.label >= 0; });

  // Incidence lists in CSR form, each sorted by edge id.
  offsets_.assign(nv + 1, 0);
  for (const Edge& e : spec_.edges) {
    ++offsets_[e.a + 1];
    ++offsets_[e.b + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidence_.resize(offsets_[nv]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < spec_.edges.size(); ++id) {
    incidence_[fill[spec_.edges[id].a]++] = id;
    incidence_[fill[spec_.edges[id].b]++] = id;
  }

  is_boundary_.assign(nv, false);
  for (VertexId v : spec_.boundary) is_boundary_[v] = true;

  if (spec_.coordinate_width > 0) {
    std::vector<VertexId> order(nv);
    std::iota(order.begin(), order.end(), VertexId{0});
    auto row = [&](VertexId v) { return std::span<const int>(spec_.coordinates).subspan(v * spec_.coordinate_width, spec_.coordinate_width); };
    std::sort(order.begin(), order.end(), [&](VertexId x, VertexId y) {
      auto a = row(x), b = row(y);
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
      auto a = row(order[i - 1]), b = row(order[i]);
      if (std::equal(a.begin(), a.end(), b.begin(), b.end())) throw std::invalid_argument("embedding assigns one coordinate to two vertices");
    }
  }
}

std::span<const int> MultiGraph::coordinates(VertexId v) const {
  if (spec_.coordinate_width == 0) throw std::logic_error("graph has no embedding");
  if (v >= spec_.vertex_count) throw std::out_of_range("vertex out of range");
  return std::span<const int>(spec_.coordinates).subspan(v * spec_.coordinate_width, spec_.coordinate_width);
}

std::optional<VertexId> MultiGraph::vertex_at(std::span<const int> coords) const {
  if (spec_.coordinate_width == 0 || coords.size() != spec_.coordinate_width) return std::nullopt;
  for (VertexId v = 0; v < spec_.vertex_count; ++v) {
    auto c = coordinates(v);
    if (std::equal(c.begin(), c.end(), coords.begin())) return v;
  }
  return std::nullopt;
}

std::span<const EdgeId> MultiGraph::incident(VertexId v) const {
  if (v >= spec_.vertex_count) throw std::out_of_range("vertex out of range");
  return std::span<const EdgeId>(incidence_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

// ---------------------------------------------------------------------------
// BoundaryCondition

BoundaryCondition::BoundaryCondition(std::vector<std::vector<VertexId>> classes) : classes_(std::move(classes)) {
  std::set<VertexId> seen;
  for (auto& cls : classes_) {
    if (cls.empty()) throw std::invalid_argument("boundary class is empty");
    std::sort(cls.begin(), cls.end());
    for (VertexId v : cls)
      if (!seen.insert(v).second) throw std::invalid_argument("boundary classes overlap");
  }
  std::sort(classes_.begin(), classes_.end());
}

BoundaryCondition BoundaryCondition::free(std::span<const VertexId> boundary) {
  std::vector<std::vector<VertexId>> classes;
  for (VertexId v : boundary) classes.push_back({v});
  return BoundaryCondition(std::move(classes));
}

BoundaryCondition BoundaryCondition::wired(std::span<const VertexId> boundary) {
  if (boundary.empty()) return BoundaryCondition{};
  return BoundaryCondition({std::vector<VertexId>(boundary.begin(), boundary.end())});
}

BoundaryCondition BoundaryCondition::free(const MultiGraph& g) { return free(g.boundary()); }
BoundaryCondition BoundaryCondition::wired(const MultiGraph& g) { return wired(g.boundary()); }

std::vector<VertexId> BoundaryCondition::boundary() const {
  std::vector<VertexId> out;
  for (const auto& cls : classes_) out.insert(out.end(), cls.begin(), cls.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool BoundaryCondition::is_free() const noexcept {
  return std::all_of(classes_.begin(), classes_.end(), [](const auto& c) { return c.size() == 1; });
}

bool BoundaryCondition::finer_than(const BoundaryCondition& coarser) const {
  if (boundary() != coarser.boundary()) return false;
  std::map<VertexId, std::size_t> owner;
  for (std::size_t i = 0; i < coarser.classes_.size(); ++i)
    for (VertexId v : coarser.classes_[i]) owner[v] = i;
  for (const auto& cls : classes_)
    for (VertexId v : cls)
      if (owner[v] != owner[cls.front()]) return false;
  return true;
}

void BoundaryCondition::validate_for(const MultiGraph& g) const {
  for (const auto& cls : classes_)
    for (VertexId v : cls)
      if (v >= g.vertex_count()) throw std::invalid_argument("boundary condition references a vertex outside the graph");
}

std::string BoundaryCondition::describe() const {
  if (classes_.empty() || is_free()) return "free";
  if (classes_.size() == 1) return "wired";
  std::ostringstream os;
  os << "partition[" << classes_.size() << "]";
  return os.str();
}

Quotient quotient(const MultiGraph& g, const BoundaryCondition& xi) {
  xi.validate_for(g);
  const std::size_t nv = g.vertex_count();
  std::vector<VertexId> rep(nv);
  std::iota(rep.begin(), rep.end(), VertexId{0});
  for (const auto& cls : xi.classes())
    for (VertexId v : cls) rep[v] = cls.front();

  Quotient q;
  q.vertex_map.assign(nv, 0);
  std::vector<std::int64_t> new_id(nv, -1);
  VertexId next = 0;
  for (VertexId v = 0; v < nv; ++v) {
    const VertexId r = rep[v];
    if (new_id[r] < 0) new_id[r] = next++;
    q.vertex_map[v] = static_cast<VertexId>(new_id[r]);
  }

  GraphSpec spec;
  spec.kind = LatticeKind::quotient;
  spec.name = g.name() + "/" + xi.describe();
  spec.dimension = g.dimension();
  spec.vertex_count = next;
  spec.edges.reserve(g.edge_count());
  for (const Edge& e : g.edges()) spec.edges.push_back({q.vertex_map[e.a], q.vertex_map[e.b], e.label});
  std::set<VertexId> bnd;
  for (VertexId v : g.boundary()) bnd.insert(q.vertex_map[v]);
  spec.boundary.assign(bnd.begin(), bnd.end());
  q.graph = MultiGraph(std::move(spec));
  return q;
}

// ---------------------------------------------------------------------------
// Builders

MultiGraph build_box(int d, int n) {
  if (d < 1) throw std::invalid_argument("build_box: d must be >= 1");
  if (n < 0) throw std::invalid_argument("build_box: n must be >= 0");
  const Grid grid{d, 2 * n + 1, -n};
  const std::size_t nv = grid.size();
  checked_mul(nv, static_cast<std::size_t>(d));

  GraphSpec spec;
  spec.kind = LatticeKind::box;
  spec.name = box_name("box", d, n);
  spec.dimension = d;
  spec.vertex_count = nv;
  spec.coordinate_width = static_cast<std::size_t>(d);
  spec.coordinates.reserve(nv * static_cast<std::size_t>(d));

  std::vector<int> c;
  for (std::size_t v = 0; v < nv; ++v) {
    grid.decode(v, c);
    spec.coordinates.insert(spec.coordinates.end(), c.begin(), c.end());
    bool on_face = false;
    for (int k = 0; k < d; ++k) on_face |= (c[static_cast<std::size_t>(k)] == n || c[static_cast<std::size_t>(k)] == -n);
    if (on_face) spec.boundary.push_back(static_cast<VertexId>(v));
    for (int k = 0; k < d; ++k) {
      if (c[static_cast<std::size_t>(k)] == n) continue;
      ++c[static_cast<std::size_t>(k)];
      spec.edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(grid.encode(c)), k});
      --c[static_cast<std::size_t>(k)];
    }
  }

  if (d == 2) {
    // Plaquettes indexed by their lower-left corner in [-n, n-1]^2, outer face last.
    const int m = 2 * n;
    FaceMap faces;
    faces.face_count = static_cast<std::size_t>(m) * static_cast<std::size_t>(m) + 1;
    const auto outer = static_cast<VertexId>(faces.face_count - 1);
    faces.outer_face = outer;
    auto face = [&](int x, int y) -> VertexId {
      if (x < -n || x >= n || y < -n || y >= n) return outer;
      return static_cast<VertexId>((x + n) * m + (y + n));
    };
    for (const Edge& e : spec.edges) {
      const int x = spec.coordinates[2 * e.a], y = spec.coordinates[2 * e.a + 1];
      if (e.label == 0)  // (x,y)-(x+1,y): faces below and above
        faces.edge_faces.push_back({face(x, y - 1), face(x, y)});
      else  // (x,y)-(x,y+1): faces left and right
        faces.edge_faces.push_back({face(x - 1, y), face(x, y)});
    }
    spec.faces = std::move(faces);
  }
  return MultiGraph(std::move(spec));
}

MultiGraph build_torus(int d, int n) {
  if (d < 1) throw std::invalid_argument("build_torus: d must be >= 1");
  if (n < 1) throw std::invalid_argument("build_torus: n must be >= 1");
  const Grid grid{d, 2 * n, -n};
  const std::size_t nv = grid.size();
  checked_mul(nv, static_cast<std::size_t>(d));

  GraphSpec spec;
  spec.kind = LatticeKind::torus;
  spec.name = box_name("torus", d, n);
  spec.dimension = d;
  spec.period = 2 * n;
  spec.vertex_count = nv;
  spec.coordinate_width = static_cast<std::size_t>(d);
  spec.coordinates.reserve(nv * static_cast<std::size_t>(d));
  spec.edges.reserve(nv * static_cast<std::size_t>(d));

  std::vector<int> c;
  for (std::size_t v = 0; v < nv; ++v) {
    grid.decode(v, c);
    spec.coordinates.insert(spec.coordinates.end(), c.begin(), c.end());
    for (int k = 0; k < d; ++k) {
      auto& ck = c[static_cast<std::size_t>(k)];
      const int saved = ck;
      ck = (ck == n - 1) ? -n : ck + 1;
      spec.edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(grid.encode(c)), k});
      ck = saved;
    }
  }
  return MultiGraph(std::move(spec));
}

namespace {

// Triangle (a, b, s) of the triangular lattice spanned by 1 and e^{i pi/3}:
// s = 0 is the up triangle {(a,b), (a+1,b), (a,b+1)}, s = 1 the down
// triangle {(a+1,b), (a,b+1), (a+1,b+1)}. Honeycomb edges leaving the up
// triangle U(a,b), in label order:
//   0: D(a-1,b) -> U(a,b), dual to the triangular edge (a,b)-(a,b+1)
//   1: D(a,b-1) -> U(a,b), dual to (a,b)-(a+1,b)
//   2: U(a,b)   -> D(a,b), dual to (a+1,b)-(a,b+1)
struct HexEdge {
  std::array<int, 3> tail;
  std::array<int, 3> head;
  int label;
  std::array<std::array<int, 2>, 2> faces;
};

std::array<HexEdge, 3> hex_edges_at(int a, int b) {
  return {{
      {{a - 1, b, 1}, {a, b, 0}, 0, {{{a, b}, {a, b + 1}}}},
      {{a, b - 1, 1}, {a, b, 0}, 1, {{{a, b}, {a + 1, b}}}},
      {{a, b, 0}, {a, b, 1}, 2, {{{a + 1, b}, {a, b + 1}}}},
  }};
}

}  // namespace

MultiGraph build_hexagonal_torus(int k) {
  if (k < 1) throw std::invalid_argument("build_hexagonal_torus: k must be >= 1");
  const int m = 2 * k;
  const std::size_t cells = checked_mul(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  checked_mul(cells, 3);
  auto wrap = [m](int x) { return ((x % m) + m) % m; };
  auto vid = [&](const std::array<int, 3>& t) {
    return static_cast<VertexId>(2 * (wrap(t[0]) * m + wrap(t[1])) + t[2]);
  };
  auto fid = [&](const std::array<int, 2>& f) { return static_cast<VertexId>(wrap(f[0]) * m + wrap(f[1])); };

  GraphSpec spec;
  spec.kind = LatticeKind::hexagonal_torus;
  spec.name = "hexagonal_torus(k=" + std::to_string(k) + ")";
  spec.dimension = 2;
  spec.period = m;
  spec.vertex_count = 2 * cells;
  spec.coordinate_width = 3;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int s = 0; s < 2; ++s) spec.coordinates.insert(spec.coordinates.end(), {a, b, s});

  FaceMap faces;
  faces.face_count = cells;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (const HexEdge& he : hex_edges_at(a, b)) {
        spec.edges.push_back({vid(he.tail), vid(he.head), he.label});
        faces.edge_faces.push_back({fid(he.faces[0]), fid(he.faces[1])});
      }
  spec.faces = std::move(faces);
  return MultiGraph(std::move(spec));
}

MultiGraph build_hexagonal_patch(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("build_hexagonal_patch: rows and cols must be >= 1");
  checked_mul(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  auto in_patch = [&](const std::array<int, 2>& f) { return f[0] >= 0 && f[0] < cols && f[1] >= 0 && f[1] < rows; };

  std::vector<HexEdge> kept;
  std::set<std::array<int, 3>> vertex_keys;
  for (int a = -1; a <= cols; ++a)
    for (int b = -1; b <= rows; ++b)
      for (const HexEdge& he : hex_edges_at(a, b)) {
        if (!in_patch(he.faces[0]) && !in_patch(he.faces[1])) continue;
        kept.push_back(he);
        vertex_keys.insert(he.tail);
        vertex_keys.insert(he.head);
      }

  std::map<std::array<int, 3>, VertexId> ids;
  GraphSpec spec;
  spec.kind = LatticeKind::hexagonal_patch;
  spec.name = "hexagonal_patch(" + std::to_string(rows) + "x" + std::to_string(cols) + ")";
  spec.dimension = 2;
  spec.coordinate_width = 3;
  for (const auto& key : vertex_keys) {
    ids.emplace(key, static_cast<VertexId>(ids.size()));
    spec.coordinates.insert(spec.coordinates.end(), key.begin(), key.end());
  }
  spec.vertex_count = ids.size();

  const std::size_t inner = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  FaceMap faces;
  faces.face_count = inner + 1;
  faces.outer_face = static_cast<VertexId>(inner);
  auto fid = [&](const std::array<int, 2>& f) {
    return in_patch(f) ? static_cast<VertexId>(f[0] * rows + f[1]) : static_cast<VertexId>(inner);
  };
  std::vector<std::size_t> degree(spec.vertex_count, 0);
  for (const HexEdge& he : kept) {
    const VertexId t = ids.at(he.tail), h = ids.at(he.head);
    spec.edges.push_back({t, h, he.label});
    faces.edge_faces.push_back({fid(he.faces[0]), fid(he.faces[1])});
    ++degree[t];
    ++degree[h];
  }
  // Vertices on the outer face form the boundary.
  std::set<VertexId> bnd;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (faces.edge_faces[i][0] == inner || faces.edge_faces[i][1] == inner) {
      bnd.insert(spec.edges[i].a);
      bnd.insert(spec.edges[i].b);
    }
  spec.boundary.assign(bnd.begin(), bnd.end());
  spec.faces = std::move(faces);
  return MultiGraph(std::move(spec));
}

MultiGraph build_path(int edges) {
  if (edges < 0) throw std::invalid_argument("build_path: negative length");
  GraphSpec spec;
  spec.kind = LatticeKind::box;
  spec.name = "path(" + std::to_string(edges) + ")";
  spec.dimension = 1;
  spec.vertex_count = static_cast<std::size_t>(edges) + 1;
  spec.coordinate_width = 1;
  for (int i = 0; i <= edges; ++i) spec.coordinates.push_back(i);
  for (int i = 0; i < edges; ++i) spec.edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), 0});
  spec.boundary = {0, static_cast<VertexId>(edges)};
  if (edges == 0) spec.boundary = {0};
  return MultiGraph(std::move(spec));
}

MultiGraph build_cycle(int length) {
  if (length < 1) throw std::invalid_argument("build_cycle: length must be >= 1");
  GraphSpec spec;
  spec.kind = LatticeKind::generic;
  spec.name = "cycle(" + std::to_string(length) + ")";
  spec.vertex_count = static_cast<std::size_t>(length);
  for (int i = 0; i < length; ++i)
    spec.edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % length), -1});
  spec.boundary = {0};
  if (length / 2 != 0) spec.boundary.push_back(static_cast<VertexId>(length / 2));
  return MultiGraph(std::move(spec));
}

MultiGraph with_boundary(const MultiGraph& g, std::vector<VertexId> boundary) {
  GraphSpec spec = g.spec();
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  spec.boundary = std::move(boundary);
  return MultiGraph(std::move(spec));
}

MultiGraph build_generic(std::size_t vertex_count, std::vector<std::pair<VertexId, VertexId>> edges, std::string name,
                         std::vector<VertexId> boundary) {
  GraphSpec spec;
  spec.name = std::move(name);
  spec.vertex_count = vertex_count;
  for (auto [a, b] : edges) spec.edges.push_back({a, b, -1});
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  spec.boundary = std::move(boundary);
  return MultiGraph(std::move(spec));
}

MultiGraph Subgraph::extract() const {
  std::vector<std::int64_t> id(host.vertex_count(), -1);
  GraphSpec spec;
  spec.kind = host.kind() == LatticeKind::box ? LatticeKind::generic : host.kind();
  spec.name = "sub(" + host.name() + ")";
  spec.dimension = host.dimension();
  spec.coordinate_width = host.coordinate_width();
  for (VertexId v : vertices) {
    id[v] = static_cast<std::int64_t>(spec.vertex_count++);
    if (host.has_embedding()) {
      auto c = host.coordinates(v);
      spec.coordinates.insert(spec.coordinates.end(), c.begin(), c.end());
    }
  }
  edges.for_each_set([&](std::size_t e) {
    const Edge& he = host.edge(static_cast<EdgeId>(e));
    if (id[he.a] < 0 || id[he.b] < 0) throw std::logic_error("subgraph edge endpoint outside vertex set");
    spec.edges.push_back({static_cast<VertexId>(id[he.a]), static_cast<VertexId>(id[he.b]), he.label});
  });
  return MultiGraph(std::move(spec));
}

Subgraph build_slab_sheet(SlabKind kind, int d, int n) {
  if (kind == SlabKind::hyperplane_sheet && d < 3) throw std::invalid_argument("hyperplane sheet requires d >= 3");
  if (kind == SlabKind::two_layer_slab && d < 2) throw std::invalid_argument("two-layer slab requires d >= 2");
  if (kind == SlabKind::two_layer_slab && n < 1) throw std::invalid_argument("two-layer slab requires n >= 1");
  Subgraph sub{build_box(d, n), EdgeConfig{}, {}};
  const MultiGraph& g = sub.host;
  sub.edges = EdgeConfig(g.edge_count());
  const auto last = static_cast<std::size_t>(d - 1);
  auto inside = [&](VertexId v) {
    const int z = g.coordinates(v)[last];
    return kind == SlabKind::hyperplane_sheet ? z == 0 : (z == 0 || z == 1);
  };
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (inside(v)) sub.vertices.push_back(v);
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (inside(g.edge(e).a) && inside(g.edge(e).b)) sub.edges.set(e);
  return sub;
}

EdgeConfig cut_edges(CutBase base, int d, int n) {
  if (base == CutBase::box) {
    const MultiGraph g = build_box(d, n);
    EdgeConfig cut(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (g.edge(e).label == 0 && g.coordinates(g.edge(e).a)[0] == 0) cut.set(e);
    return cut;
  }
  return hyperplane(build_hexagonal_torus(n), 0, 0).outgoing;
}

MultiGraph build_cut_lattice(CutBase base, int d, int n, std::optional<EdgeId> kept_edge) {
  const MultiGraph g = base == CutBase::box ? build_box(d, n) : build_hexagonal_torus(n);
  const EdgeConfig cut = cut_edges(base, d, n);
  if (kept_edge && (*kept_edge >= g.edge_count() || !cut.test(*kept_edge)))
    throw std::invalid_argument("build_cut_lattice: kept edge does not lie on the cut hyperplane");

  GraphSpec spec = g.spec();
  spec.kind = base == CutBase::box ? LatticeKind::cut_box : LatticeKind::cut_hexagonal;
  spec.name = "cut_" + g.name();
  spec.edges.clear();
  spec.faces.reset();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (cut.test(e) && (!kept_edge || *kept_edge != e)) continue;
    spec.edges.push_back(g.edge(e));
  }
  return MultiGraph(std::move(spec));
}

MultiGraph build_dual(const MultiGraph& g) {
  if (!g.faces()) throw std::invalid_argument("build_dual: graph has no face structure");
  const FaceMap& fm = *g.faces();
  GraphSpec spec;
  spec.kind = LatticeKind::dual;
  spec.name = "dual(" + g.name() + ")";
  spec.dimension = g.dimension();
  spec.vertex_count = fm.face_count;
  for (const auto& f : fm.edge_faces) spec.edges.push_back({f[0], f[1], -1});
  if (fm.outer_face) spec.boundary = {*fm.outer_face};
  return MultiGraph(std::move(spec));
}

Hyperplane hyperplane(const MultiGraph& g, int level, int axis) {
  const bool supported = g.kind() == LatticeKind::torus || g.kind() == LatticeKind::hexagonal_torus ||
                         g.kind() == LatticeKind::cut_hexagonal;
  if (!supported || !g.is_periodic() || !g.has_labels() || !g.has_embedding())
    throw std::invalid_argument("hyperplane: host must be a labelled periodic lattice");
  if (axis < 0 || axis >= g.dimension()) throw std::invalid_argument("hyperplane: axis out of range");
  const int m = g.period();
  int normalized;
  if (g.kind() == LatticeKind::torus) {
    const int n = m / 2;
    normalized = (((level + n) % m) + m) % m - n;
  } else {
    normalized = ((level % m) + m) % m;
  }
  Hyperplane h{axis, normalized, EdgeConfig(g.edge_count()), EdgeConfig(g.edge_count())};
  const auto ax = static_cast<std::size_t>(axis);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.label != axis) continue;
    if (g.coordinates(ed.a)[ax] == normalized) h.outgoing.set(e);
    if (g.coordinates(ed.b)[ax] == normalized) h.incoming.set(e);
  }
  return h;
}

std::vector<EdgeId> embed_edges(const MultiGraph& small, const MultiGraph& large) {
  if (!small.has_embedding() || !large.has_embedding() || small.coordinate_width() != large.coordinate_width())
    throw std::invalid_argument("embed_edges: both graphs need embeddings of equal width");
  std::map<std::vector<int>, VertexId> index;
  for (VertexId v = 0; v < large.vertex_count(); ++v) {
    auto c = large.coordinates(v);
    index.emplace(std::vector<int>(c.begin(), c.end()), v);
  }
  auto lookup = [&](VertexId v) {
    auto c = small.coordinates(v);
    auto it = index.find(std::vector<int>(c.begin(), c.end()));
    if (it == index.end()) throw std::invalid_argument("embed_edges: vertex missing from the larger graph");
    return it->second;
  };
  std::vector<bool> used(large.edge_count(), false);
  std::vector<EdgeId> map;
  map.reserve(small.edge_count());
  for (const Edge& e : small.edges()) {
    const VertexId a = lookup(e.a), b = lookup(e.b);
    std::optional<EdgeId> found;
    for (EdgeId cand : large.incident(a)) {
      const Edge& le = large.edge(cand);
      const bool match = (le.a == a && le.b == b) || (le.a == b && le.b == a);
      if (match && !used[cand] && (e.label < 0 || le.label == e.label)) {
        found = cand;
        break;
      }
    }
    if (!found) throw std::invalid_argument("embed_edges: edge missing from the larger graph");
    used[*found] = true;
    map.push_back(*found);
  }
  return map;
}

EdgeConfig restrict_config(const EdgeConfig& large_config, std::span<const EdgeId> map) {
  EdgeConfig out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i)
    if (large_config.test(map[i])) out.set(i);
  return out;
}

void to_json(nlohmann::json& j, const MultiGraph& g) {
  j = nlohmann::json::object();
  j["kind"] = to_string(g.kind());
  j["name"] = g.name();
  j["dimension"] = g.dimension();
  j["vertex_count"] = g.vertex_count();
  auto verts = nlohmann::json::array();
  if (g.has_embedding())
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      auto c = g.coordinates(v);
      verts.push_back(std::vector<int>(c.begin(), c.end()));
    }
  j["vertices"] = std::move(verts);
  auto edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.a, e.b, e.label});
  j["edges"] = std::move(edges);
  j["boundary"] = std::vector<VertexId>(g.boundary().begin(), g.boundary().end());
}

MultiGraph graph_from_json(const nlohmann::json& j) {
  GraphSpec spec;
  spec.name = j.value("name", std::string("generic"));
  spec.dimension = j.value("dimension", 0);
  const auto& verts = j.at("vertices");
  if (!verts.empty()) {
    spec.vertex_count = verts.size();
    spec.coordinate_width = verts.front().size();
    for (const auto& v : verts) {
      if (v.size() != spec.coordinate_width) throw std::invalid_argument("graph_from_json: ragged coordinates");
      for (const auto& x : v) spec.coordinates.push_back(x.get<int>());
    }
  } else {
    spec.vertex_count = j.at("vertex_count").get<std::size_t>();
  }
  for (const auto& e : j.at("edges")) spec.edges.push_back({e.at(0).get<VertexId>(), e.at(1).get<VertexId>(), e.size() > 2 ? e.at(2).get<int>() : -1});
  if (j.contains("boundary")) spec.boundary = j.at("boundary").get<std::vector<VertexId>>();
  return MultiGraph(std::move(spec));
}

}  // namespace isingrep
