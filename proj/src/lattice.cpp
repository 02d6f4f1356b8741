#include "mdgs/lattice.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace mdgs {

std::shared_ptr<const Lattice> Lattice::torus(int dimension, int side) {
  if (dimension < 1) throw LatticeError("torus dimension must be >= 1");
  if (side < 3) throw LatticeError("torus side must be >= 3 (smaller sides create multi-edges)");
  auto lat = std::shared_ptr<Lattice>(new Lattice());
  lat->dimension_ = dimension;
  lat->side_ = side;
  std::int64_t nv = 1;
  lat->coord_stride_.resize(dimension);
  for (int i = 0; i < dimension; ++i) {
    lat->coord_stride_[i] = nv;
    nv *= side;
  }
  if (nv * (dimension + 1) > (std::int64_t(1) << 30)) {
    throw LatticeError("torus too large for the Sigma index type");
  }
  lat->vertex_count_ = static_cast<std::int32_t>(nv);

  // Edge id = v * d + dir, endpoints (v, v + e_dir).
  lat->edge_endpoints_.reserve(nv * dimension);
  lat->incident_.resize(nv);
  lat->neighbors_.resize(nv);
  for (std::int32_t v = 0; v < lat->vertex_count_; ++v) {
    for (int dir = 0; dir < dimension; ++dir) {
      const std::int32_t w = lat->shift_vertex(v, dir, +1);
      lat->edge_endpoints_.emplace_back(std::min(v, w), std::max(v, w));
    }
  }
  for (std::int32_t e = 0; e < lat->edge_count(); ++e) {
    const auto [u, w] = lat->edge_endpoints_[e];
    lat->incident_[u].push_back(e);
    lat->incident_[w].push_back(e);
    lat->neighbors_[u].push_back(w);
    lat->neighbors_[w].push_back(u);
  }
  return lat;
}

std::shared_ptr<const Lattice> Lattice::from_edges(
    std::int32_t vertex_count, std::vector<std::pair<std::int32_t, std::int32_t>> edges) {
  if (vertex_count < 1) throw LatticeError("explicit graph needs at least one vertex");
  auto lat = std::shared_ptr<Lattice>(new Lattice());
  lat->vertex_count_ = vertex_count;
  std::set<std::pair<std::int32_t, std::int32_t>> seen;
  for (auto& [u, v] : edges) {
    if (u == v) throw LatticeError("self-loop in edge list");
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
      throw LatticeError("edge endpoint out of range");
    }
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second) throw LatticeError("duplicate edge in edge list");
  }
  lat->edge_endpoints_ = std::move(edges);
  lat->incident_.resize(vertex_count);
  lat->neighbors_.resize(vertex_count);
  for (std::int32_t e = 0; e < lat->edge_count(); ++e) {
    const auto [u, v] = lat->edge_endpoints_[e];
    lat->incident_[u].push_back(e);
    lat->incident_[v].push_back(e);
    lat->neighbors_[u].push_back(v);
    lat->neighbors_[v].push_back(u);
  }
  return lat;
}

std::shared_ptr<const Lattice> Lattice::load_edge_list(std::istream& in) {
  std::int64_t nv = 0, ne = 0;
  if (!(in >> nv >> ne)) throw LatticeError("edge-list header must be \"V E\"");
  if (nv <= 0 || ne < 0) throw LatticeError("edge-list header out of range");
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  edges.reserve(ne);
  for (std::int64_t i = 0; i < ne; ++i) {
    std::int64_t u = 0, v = 0;
    if (!(in >> u >> v)) throw LatticeError("edge-list truncated at edge " + std::to_string(i));
    edges.emplace_back(static_cast<std::int32_t>(u), static_cast<std::int32_t>(v));
  }
  return from_edges(static_cast<std::int32_t>(nv), std::move(edges));
}

std::shared_ptr<const Lattice> Lattice::load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LatticeError("cannot open edge-list file: " + path);
  return load_edge_list(in);
}

SiteId Lattice::site(SigmaIndex x) const {
  require_site(x);
  return SiteId{is_vertex(x) ? SiteKind::kVertex : SiteKind::kEdge, x};
}

std::pair<std::int32_t, std::int32_t> Lattice::edge_endpoints(std::int32_t e) const {
  if (e < 0 || e >= edge_count()) throw LatticeError("edge id out of range");
  return edge_endpoints_[e];
}

const std::vector<std::int32_t>& Lattice::incident_edges(std::int32_t v) const {
  if (v < 0 || v >= vertex_count_) throw LatticeError("vertex id out of range");
  return incident_[v];
}

const std::vector<std::int32_t>& Lattice::vertex_neighbors(std::int32_t v) const {
  if (v < 0 || v >= vertex_count_) throw LatticeError("vertex id out of range");
  return neighbors_[v];
}

std::optional<std::int32_t> Lattice::edge_between(std::int32_t u, std::int32_t v) const {
  if (u == v) return std::nullopt;
  for (std::int32_t e : incident_edges(u)) {
    const auto [a, b] = edge_endpoints_[e];
    if (a == v || b == v) return e;
  }
  return std::nullopt;
}

std::vector<SigmaIndex> Lattice::neighborhood(std::int32_t v) const {
  std::vector<SigmaIndex> out;
  out.push_back(vertex_sigma(v));
  for (std::int32_t e : incident_edges(v)) out.push_back(edge_sigma(e));
  return out;
}

bool Lattice::sigma_adjacent(SigmaIndex x, SigmaIndex y) const {
  require_site(x);
  require_site(y);
  if (x == y) return false;
  if (is_vertex(x) && is_vertex(y)) return false;
  if (is_vertex(x)) std::swap(x, y);
  const auto [a, b] = edge_endpoints_[edge_of(x)];
  if (is_vertex(y)) return y == a || y == b;
  const auto [c, d] = edge_endpoints_[edge_of(y)];
  return a == c || a == d || b == c || b == d;
}

std::vector<SigmaIndex> Lattice::sigma_neighbors(SigmaIndex x) const {
  require_site(x);
  std::vector<SigmaIndex> out;
  if (is_vertex(x)) {
    for (std::int32_t e : incident_[x]) out.push_back(edge_sigma(e));
  } else {
    const auto [u, v] = edge_endpoints_[edge_of(x)];
    out.push_back(u);
    out.push_back(v);
    for (std::int32_t e : incident_[u]) {
      if (edge_sigma(e) != x) out.push_back(edge_sigma(e));
    }
    for (std::int32_t e : incident_[v]) {
      if (edge_sigma(e) != x) out.push_back(edge_sigma(e));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SigmaIndex> Lattice::exterior_boundary(std::span<const SigmaIndex> s) const {
  std::vector<SigmaIndex> in(s.begin(), s.end());
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  std::vector<SigmaIndex> out;
  for (SigmaIndex x : in) {
    for (SigmaIndex y : sigma_neighbors(x)) {
      if (!std::binary_search(in.begin(), in.end(), y)) out.push_back(y);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SigmaIndex> Lattice::closure(std::span<const SigmaIndex> s) const {
  std::vector<SigmaIndex> out(s.begin(), s.end());
  const auto bd = exterior_boundary(s);
  out.insert(out.end(), bd.begin(), bd.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SigmaIndex> Lattice::double_closure(std::span<const SigmaIndex> s) const {
  const auto once = closure(s);
  return closure(once);
}

namespace {

int torus_axis_distance(int a, int b, int n) {
  int d = a - b;
  if (d < 0) d = -d;
  return std::min(d, n - d);
}

}  // namespace

int Lattice::graph_distance(SigmaIndex x, SigmaIndex y) const {
  require_site(x);
  require_site(y);
  std::vector<std::int32_t> xs, ys;
  if (is_vertex(x)) {
    xs = {x};
  } else {
    const auto [a, b] = edge_endpoints_[edge_of(x)];
    xs = {a, b};
  }
  if (is_vertex(y)) {
    ys = {y};
  } else {
    const auto [a, b] = edge_endpoints_[edge_of(y)];
    ys = {a, b};
  }
  if (is_torus()) {
    int best = -1;
    for (std::int32_t a : xs) {
      const auto ca = vertex_coords(a);
      for (std::int32_t b : ys) {
        const auto cb = vertex_coords(b);
        int d = 0;
        for (int i = 0; i < dimension_; ++i) d += torus_axis_distance(ca[i], cb[i], side_);
        if (best < 0 || d < best) best = d;
      }
    }
    return best;
  }
  // BFS from the (at most two) source vertices.
  std::vector<int> dist(vertex_count_, -1);
  std::deque<std::int32_t> queue;
  for (std::int32_t a : xs) {
    dist[a] = 0;
    queue.push_back(a);
  }
  int best = -1;
  auto update_best = [&](std::int32_t v) {
    for (std::int32_t b : ys) {
      if (v == b && (best < 0 || dist[v] < best)) best = dist[v];
    }
  };
  for (std::int32_t a : xs) update_best(a);
  while (!queue.empty() && best != 0) {
    const std::int32_t v = queue.front();
    queue.pop_front();
    if (best >= 0 && dist[v] >= best) continue;
    for (std::int32_t w : neighbors_[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        update_best(w);
        queue.push_back(w);
      }
    }
  }
  if (best < 0) throw LatticeError("graph_distance: sites in different components");
  return best;
}

std::vector<int> Lattice::vertex_coords(std::int32_t v) const {
  if (!is_torus()) throw LatticeError("vertex_coords requires a torus lattice");
  std::vector<int> c(dimension_);
  for (int i = 0; i < dimension_; ++i) {
    c[i] = static_cast<int>((v / coord_stride_[i]) % side_);
  }
  return c;
}

std::int32_t Lattice::vertex_at(std::span<const int> coords) const {
  if (!is_torus()) throw LatticeError("vertex_at requires a torus lattice");
  if (static_cast<int>(coords.size()) != dimension_) throw LatticeError("coordinate arity mismatch");
  std::int64_t v = 0;
  for (int i = 0; i < dimension_; ++i) {
    int c = coords[i] % side_;
    if (c < 0) c += side_;
    v += c * coord_stride_[i];
  }
  return static_cast<std::int32_t>(v);
}

std::int32_t Lattice::torus_edge(std::int32_t v, int dir) const {
  if (!is_torus()) throw LatticeError("torus_edge requires a torus lattice");
  if (dir < 0 || dir >= dimension_) throw LatticeError("torus edge direction out of range");
  return v * dimension_ + dir;
}

std::pair<std::int32_t, int> Lattice::torus_edge_parts(std::int32_t e) const {
  if (!is_torus()) throw LatticeError("torus_edge_parts requires a torus lattice");
  if (e < 0 || e >= edge_count()) throw LatticeError("edge id out of range");
  return {e / dimension_, e % dimension_};
}

std::int32_t Lattice::shift_vertex(std::int32_t v, int dir, int delta) const {
  if (!is_torus()) throw LatticeError("shift_vertex requires a torus lattice");
  const int c = static_cast<int>((v / coord_stride_[dir]) % side_);
  int nc = (c + delta) % side_;
  if (nc < 0) nc += side_;
  return static_cast<std::int32_t>(v + std::int64_t(nc - c) * coord_stride_[dir]);
}

std::string Lattice::spec_string() const {
  if (is_torus()) {
    return "t" + std::to_string(dimension_) + "x" + std::to_string(side_);
  }
  return "g" + std::to_string(vertex_count_) + "e" + std::to_string(edge_count());
}

void Lattice::require_vertex(SigmaIndex x) const {
  if (!is_vertex(x)) throw LatticeError("site is not a vertex of this lattice");
}

void Lattice::require_edge(SigmaIndex x) const {
  if (!is_edge(x)) throw LatticeError("site is not an edge of this lattice");
}

void Lattice::require_site(SigmaIndex x) const {
  if (x < 0 || x >= sigma_size()) throw LatticeError("Sigma index out of range");
}

}  // namespace mdgs
