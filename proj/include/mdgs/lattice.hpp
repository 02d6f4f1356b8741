#ifndef MDGS_LATTICE_HPP
#define MDGS_LATTICE_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mdgs {

// Index into the canonical dense ordering of Sigma = V u E:
// vertices occupy [0, V), edges occupy [V, V + E).
using SigmaIndex = std::int32_t;

struct LatticeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SiteKind : std::uint8_t { kVertex, kEdge };

struct SiteId {
  SiteKind kind = SiteKind::kVertex;
  SigmaIndex sigma = -1;

  friend bool operator==(const SiteId&, const SiteId&) = default;
};

// A finite simple graph with the Sigma indexing used throughout.
// Tori are stored implicitly by (d, n) with coordinate arithmetic; explicit
// graphs by adjacency lists. Immutable after construction.
class Lattice {
 public:
  // The d-dimensional torus (Z/nZ)^d. Requires d >= 1 and n >= 3 (n < 3
  // would create multi-edges and break simplicity).
  static std::shared_ptr<const Lattice> torus(int dimension, int side);

  // Explicit graph from an edge list (0-based endpoints). Rejects self-loops,
  // duplicate edges and out-of-range endpoints.
  static std::shared_ptr<const Lattice> from_edges(
      std::int32_t vertex_count, std::vector<std::pair<std::int32_t, std::int32_t>> edges);

  // Plain-text format: first line "V E", then E lines "u v".
  static std::shared_ptr<const Lattice> load_edge_list(std::istream& in);
  static std::shared_ptr<const Lattice> load_edge_list_file(const std::string& path);

  std::int32_t vertex_count() const { return vertex_count_; }
  std::int32_t edge_count() const { return static_cast<std::int32_t>(edge_endpoints_.size()); }
  std::int32_t sigma_size() const { return vertex_count_ + edge_count(); }

  bool is_torus() const { return dimension_ > 0; }
  int dimension() const { return dimension_; }
  int side() const { return side_; }

  bool is_vertex(SigmaIndex x) const { return x >= 0 && x < vertex_count_; }
  bool is_edge(SigmaIndex x) const { return x >= vertex_count_ && x < sigma_size(); }
  SigmaIndex vertex_sigma(std::int32_t v) const { return v; }
  SigmaIndex edge_sigma(std::int32_t e) const { return vertex_count_ + e; }
  std::int32_t edge_of(SigmaIndex x) const { return x - vertex_count_; }
  SiteId site(SigmaIndex x) const;

  // Endpoints with u < v.
  std::pair<std::int32_t, std::int32_t> edge_endpoints(std::int32_t e) const;
  const std::vector<std::int32_t>& incident_edges(std::int32_t v) const;   // E_v
  const std::vector<std::int32_t>& vertex_neighbors(std::int32_t v) const; // u ~ v
  std::optional<std::int32_t> edge_between(std::int32_t u, std::int32_t v) const;
  int degree(std::int32_t v) const { return static_cast<int>(incident_edges(v).size()); }

  // N(v) = {v} together with the edges incident to v.
  std::vector<SigmaIndex> neighborhood(std::int32_t v) const;

  // Sigma-adjacency: x ~ y iff x != y and their vertex sets intersect.
  // Distinct vertices are never Sigma-adjacent under this rule.
  bool sigma_adjacent(SigmaIndex x, SigmaIndex y) const;
  std::vector<SigmaIndex> sigma_neighbors(SigmaIndex x) const;

  // ext-boundary(S) = {x in S^c : x ~ y for some y in S}; sorted output.
  std::vector<SigmaIndex> exterior_boundary(std::span<const SigmaIndex> s) const;
  // S u ext-boundary(S).
  std::vector<SigmaIndex> closure(std::span<const SigmaIndex> s) const;
  std::vector<SigmaIndex> double_closure(std::span<const SigmaIndex> s) const;

  // Shortest vertex-path distance between the vertex sets of x and y
  // (torus metric on tori, BFS on explicit graphs).
  int graph_distance(SigmaIndex x, SigmaIndex y) const;

  // Torus coordinate helpers.
  std::vector<int> vertex_coords(std::int32_t v) const;
  std::int32_t vertex_at(std::span<const int> coords) const;  // wraps mod n
  // Edge id of (v, v + e_dir) in the torus, dir in [0, d).
  std::int32_t torus_edge(std::int32_t v, int dir) const;
  // Inverse: the (base vertex, direction) of a torus edge.
  std::pair<std::int32_t, int> torus_edge_parts(std::int32_t e) const;
  std::int32_t shift_vertex(std::int32_t v, int dir, int delta) const;

  // Short tag used in report file names, e.g. "t2x24" or "g9e12".
  std::string spec_string() const;

  void require_vertex(SigmaIndex x) const;
  void require_edge(SigmaIndex x) const;
  void require_site(SigmaIndex x) const;

 private:
  Lattice() = default;

  int dimension_ = 0;  // 0 for explicit graphs
  int side_ = 0;
  std::int32_t vertex_count_ = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> edge_endpoints_;
  std::vector<std::vector<std::int32_t>> incident_;
  std::vector<std::vector<std::int32_t>> neighbors_;
  std::vector<std::int64_t> coord_stride_;
};

}  // namespace mdgs

#endif
