#include "mdgs/covering.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

namespace mdgs {

namespace {

bool sorted_contains(const std::vector<std::int32_t>& v, std::int32_t x) {
  return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

Covering::Covering(std::shared_ptr<const Lattice> lattice, std::vector<std::int32_t> dimers,
                   std::vector<std::int32_t> monomers)
    : lattice_(std::move(lattice)), dimers_(std::move(dimers)), monomers_(std::move(monomers)) {
  std::sort(dimers_.begin(), dimers_.end());
  std::sort(monomers_.begin(), monomers_.end());
  if (std::adjacent_find(dimers_.begin(), dimers_.end()) != dimers_.end()) {
    throw CoveringError("duplicate dimer");
  }
  if (std::adjacent_find(monomers_.begin(), monomers_.end()) != monomers_.end()) {
    throw CoveringError("duplicate monomer");
  }
  std::vector<std::int8_t> covered(lattice_->vertex_count(), 0);
  for (std::int32_t e : dimers_) {
    if (e < 0 || e >= lattice_->edge_count()) throw CoveringError("dimer edge id out of range");
    const auto [u, v] = lattice_->edge_endpoints(e);
    if (covered[u] || covered[v]) throw CoveringError("two dimers share an endpoint");
    covered[u] = covered[v] = 1;
  }
  for (std::int32_t v : monomers_) {
    if (v < 0 || v >= lattice_->vertex_count()) throw CoveringError("monomer vertex id out of range");
    if (covered[v]) throw CoveringError("monomer on a dimer endpoint");
    covered[v] = 1;
  }
  for (std::int32_t v = 0; v < lattice_->vertex_count(); ++v) {
    if (!covered[v]) throw CoveringError("vertex " + std::to_string(v) + " left uncovered");
  }
}

Covering Covering::all_monomers(std::shared_ptr<const Lattice> lattice) {
  std::vector<std::int32_t> monomers(lattice->vertex_count());
  for (std::int32_t v = 0; v < lattice->vertex_count(); ++v) monomers[v] = v;
  return Covering(std::move(lattice), {}, std::move(monomers));
}

Covering Covering::from_dimers(std::shared_ptr<const Lattice> lattice,
                               std::vector<std::int32_t> dimers) {
  std::vector<std::int8_t> covered(lattice->vertex_count(), 0);
  for (std::int32_t e : dimers) {
    const auto [u, v] = lattice->edge_endpoints(e);
    covered[u] = covered[v] = 1;
  }
  std::vector<std::int32_t> monomers;
  for (std::int32_t v = 0; v < lattice->vertex_count(); ++v) {
    if (!covered[v]) monomers.push_back(v);
  }
  return Covering(std::move(lattice), std::move(dimers), std::move(monomers));
}

bool Covering::occupied(SigmaIndex x) const {
  lattice_->require_site(x);
  if (lattice_->is_vertex(x)) return sorted_contains(monomers_, x);
  return sorted_contains(dimers_, lattice_->edge_of(x));
}

void Covering::write(std::ostream& out) const {
  for (SigmaIndex x = 0; x < lattice_->sigma_size(); ++x) {
    out << x << ',' << (occupied(x) ? 1 : 0) << '\n';
  }
}

Covering Covering::read(std::istream& in, std::shared_ptr<const Lattice> lattice) {
  std::vector<std::int32_t> dimers, monomers;
  std::string line;
  std::int64_t seen = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw CoveringError("malformed covering line: " + line);
    const long x = std::stol(line.substr(0, comma));
    const int status = std::stoi(line.substr(comma + 1));
    if (x < 0 || x >= lattice->sigma_size()) throw CoveringError("covering Sigma index out of range");
    if (status != 0 && status != 1) throw CoveringError("covering status must be 0 or 1");
    ++seen;
    if (status == 0) continue;
    if (lattice->is_vertex(static_cast<SigmaIndex>(x))) {
      monomers.push_back(static_cast<std::int32_t>(x));
    } else {
      dimers.push_back(lattice->edge_of(static_cast<SigmaIndex>(x)));
    }
  }
  if (seen != lattice->sigma_size()) throw CoveringError("covering file does not cover Sigma");
  return Covering(std::move(lattice), std::move(dimers), std::move(monomers));
}

double energy(const Covering& m, const WeightAssignment& j) {
  if (m.lattice().sigma_size() != j.lattice().sigma_size()) {
    throw CoveringError("energy: lattice mismatch");
  }
  double h = 0.0;
  for (std::int32_t v : m.monomers()) h += j.vertex_weight(v);
  for (std::int32_t e : m.dimers()) h += j.edge_weight(e);
  return h;
}

LocalConstraint LocalConstraint::single(SigmaIndex x, bool occupied) {
  LocalConstraint c;
  c.set(x, occupied);
  return c;
}

void LocalConstraint::set(SigmaIndex x, bool occupied) {
  auto it = std::lower_bound(statuses_.begin(), statuses_.end(), x,
                             [](const auto& p, SigmaIndex y) { return p.first < y; });
  if (it != statuses_.end() && it->first == x) {
    it->second = occupied;
  } else {
    statuses_.insert(it, {x, occupied});
  }
}

std::optional<bool> LocalConstraint::at(SigmaIndex x) const {
  auto it = std::lower_bound(statuses_.begin(), statuses_.end(), x,
                             [](const auto& p, SigmaIndex y) { return p.first < y; });
  if (it != statuses_.end() && it->first == x) return it->second;
  return std::nullopt;
}

std::vector<SigmaIndex> LocalConstraint::support() const {
  std::vector<SigmaIndex> out;
  out.reserve(statuses_.size());
  for (const auto& [x, s] : statuses_) out.push_back(x);
  return out;
}

std::vector<SigmaIndex> SymDiffComponent::side_elements(int which) const {
  std::vector<SigmaIndex> out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (side[i] == which) out.push_back(elements[i]);
  }
  return out;
}

std::size_t SymDiffDecomposition::total_elements() const {
  std::size_t n = 0;
  for (const auto& c : components) n += c.size();
  return n;
}

SymDiffDecomposition sym_diff_decompose(const Covering& m1, const Covering& m2) {
  const Lattice& lat = m1.lattice();
  if (lat.sigma_size() != m2.lattice().sigma_size()) {
    throw CoveringError("sym_diff_decompose: lattice mismatch");
  }
  // Differing edges and differing monomer statuses.
  std::vector<std::int32_t> d_edges, d_verts;
  std::set_symmetric_difference(m1.dimers().begin(), m1.dimers().end(), m2.dimers().begin(),
                                m2.dimers().end(), std::back_inserter(d_edges));
  std::set_symmetric_difference(m1.monomers().begin(), m1.monomers().end(), m2.monomers().begin(),
                                m2.monomers().end(), std::back_inserter(d_verts));

  // Within the difference every vertex meets at most two edges.
  std::vector<std::int32_t> inc(2 * static_cast<std::size_t>(lat.vertex_count()), -1);
  auto add_incident = [&](std::int32_t v, std::int32_t e) {
    if (inc[2 * v] < 0) {
      inc[2 * v] = e;
    } else if (inc[2 * v + 1] < 0) {
      inc[2 * v + 1] = e;
    } else {
      throw CoveringError("symmetric difference has a vertex of degree > 2");
    }
  };
  for (std::int32_t e : d_edges) {
    const auto [u, v] = lat.edge_endpoints(e);
    add_incident(u, e);
    add_incident(v, e);
  }

  auto side_of = [&](SigmaIndex x) -> std::int8_t {
    const bool in1 = m1.occupied(x);
    const bool in2 = m2.occupied(x);
    if (in1 == in2) throw CoveringError("element of the difference occupied by both/neither");
    return in1 ? 0 : 1;
  };

  std::vector<std::int8_t> edge_done(lat.edge_count(), 0);
  SymDiffDecomposition out;

  auto other_endpoint = [&](std::int32_t e, std::int32_t v) {
    const auto [a, b] = lat.edge_endpoints(e);
    return a == v ? b : a;
  };

  // Paths start at vertices whose monomer status differs.
  for (std::int32_t v0 : d_verts) {
    if (inc[2 * v0] < 0) throw CoveringError("differing monomer with no differing edge");
    if (inc[2 * v0 + 1] >= 0) throw CoveringError("path endpoint with two differing edges");
    if (edge_done[inc[2 * v0]]) continue;  // walked from the other end
    SymDiffComponent comp;
    comp.kind = SymDiffComponent::Kind::kPath;
    comp.elements.push_back(lat.vertex_sigma(v0));
    std::int32_t cur = v0;
    std::int32_t via = inc[2 * v0];
    while (true) {
      edge_done[via] = 1;
      comp.elements.push_back(lat.edge_sigma(via));
      cur = other_endpoint(via, cur);
      const bool cur_differs = std::binary_search(d_verts.begin(), d_verts.end(), cur);
      const std::int32_t e0 = inc[2 * cur], e1 = inc[2 * cur + 1];
      const std::int32_t next = (e0 == via) ? e1 : e0;
      if (cur_differs) {
        if (next >= 0) throw CoveringError("path endpoint with two differing edges");
        comp.elements.push_back(lat.vertex_sigma(cur));
        break;
      }
      if (next < 0) throw CoveringError("difference path ends without a differing monomer");
      via = next;
    }
    comp.side.reserve(comp.elements.size());
    for (SigmaIndex x : comp.elements) comp.side.push_back(side_of(x));
    out.components.push_back(std::move(comp));
  }

  // Remaining differing edges form loops.
  for (std::int32_t e0 : d_edges) {
    if (edge_done[e0]) continue;
    SymDiffComponent comp;
    comp.kind = SymDiffComponent::Kind::kLoop;
    const std::int32_t start = lat.edge_endpoints(e0).first;
    std::int32_t cur = start;
    std::int32_t via = e0;
    while (true) {
      edge_done[via] = 1;
      comp.elements.push_back(lat.edge_sigma(via));
      cur = other_endpoint(via, cur);
      if (cur == start) break;
      const std::int32_t a = inc[2 * cur], b = inc[2 * cur + 1];
      if (a < 0 || b < 0) throw CoveringError("difference loop is not 2-regular");
      via = (a == via) ? b : a;
    }
    comp.side.reserve(comp.elements.size());
    for (SigmaIndex x : comp.elements) comp.side.push_back(side_of(x));
    out.components.push_back(std::move(comp));
  }

  // Alternation along every component (cyclically for loops).
  for (const auto& comp : out.components) {
    for (std::size_t i = 0; i + 1 < comp.side.size(); ++i) {
      if (comp.side[i] == comp.side[i + 1]) {
        throw CoveringError("component elements do not alternate between the coverings");
      }
    }
    if (comp.kind == SymDiffComponent::Kind::kLoop) {
      if (comp.size() % 2 != 0 || comp.side.front() == comp.side.back()) {
        throw CoveringError("loop component does not alternate cyclically");
      }
    }
  }
  return out;
}

Covering apply_component_swap(const Covering& m, const SymDiffComponent& comp) {
  const Lattice& lat = m.lattice();
  // The component is compatible when M agrees with one of its two sides
  // on every component element.
  bool matches0 = true, matches1 = true;
  for (std::size_t i = 0; i < comp.elements.size(); ++i) {
    const bool occ = m.occupied(comp.elements[i]);
    if (occ != (comp.side[i] == 0)) matches0 = false;
    if (occ != (comp.side[i] == 1)) matches1 = false;
  }
  if (!matches0 && !matches1) {
    throw CoveringError("component is not compatible with the covering");
  }
  std::vector<std::int32_t> dimers = m.dimers();
  std::vector<std::int32_t> monomers = m.monomers();
  auto toggle = [&](std::vector<std::int32_t>& v, std::int32_t id) {
    auto it = std::lower_bound(v.begin(), v.end(), id);
    if (it != v.end() && *it == id) {
      v.erase(it);
    } else {
      v.insert(it, id);
    }
  };
  for (SigmaIndex x : comp.elements) {
    if (lat.is_vertex(x)) {
      toggle(monomers, x);
    } else {
      toggle(dimers, lat.edge_of(x));
    }
  }
  return Covering(m.lattice_ptr(), std::move(dimers), std::move(monomers));
}

namespace {

struct Enumerator {
  const std::shared_ptr<const Lattice>& lattice;
  const std::function<bool(const Covering&)>& visit;
  std::vector<std::int8_t> covered;
  std::vector<std::int32_t> dimers;
  std::vector<std::int32_t> monomers;
  bool stopped = false;

  bool emit() {
    Covering m(lattice, dimers, monomers);
    return visit(m);
  }

  void run(std::int32_t from) {
    if (stopped) return;
    std::int32_t v = from;
    while (v < lattice->vertex_count() && covered[v]) ++v;
    if (v == lattice->vertex_count()) {
      if (!emit()) stopped = true;
      return;
    }
    covered[v] = 1;
    monomers.push_back(v);
    run(v + 1);
    monomers.pop_back();
    for (std::int32_t e : lattice->incident_edges(v)) {
      const auto [a, b] = lattice->edge_endpoints(e);
      const std::int32_t w = (a == v) ? b : a;
      if (covered[w]) continue;
      covered[w] = 1;
      dimers.push_back(e);
      run(v + 1);
      dimers.pop_back();
      covered[w] = 0;
      if (stopped) break;
    }
    covered[v] = 0;
  }
};

}  // namespace

void enumerate_coverings(const std::shared_ptr<const Lattice>& lattice,
                         const std::function<bool(const Covering&)>& visit) {
  if (lattice->sigma_size() > 40) {
    throw CoveringError("enumerate_coverings is guarded to |Sigma| <= 40");
  }
  Enumerator en{lattice, visit, std::vector<std::int8_t>(lattice->vertex_count(), 0), {}, {}};
  en.run(0);
}

std::vector<Covering> enumerate_coverings(const std::shared_ptr<const Lattice>& lattice) {
  std::vector<Covering> out;
  enumerate_coverings(lattice, [&](const Covering& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::optional<Covering> extend_constraint(const std::shared_ptr<const Lattice>& lattice,
                                          const LocalConstraint& xi) {
  const Lattice& lat = *lattice;
  std::vector<std::int8_t> covered(lat.vertex_count(), 0);
  std::vector<std::int8_t> monomer_forced(lat.vertex_count(), 0);
  std::vector<std::int8_t> matched_forced(lat.vertex_count(), 0);
  std::vector<std::int8_t> edge_forbidden(lat.edge_count(), 0);
  std::vector<std::int32_t> dimers;

  for (const auto& [x, occ] : xi.statuses()) {
    lat.require_site(x);
    if (lat.is_vertex(x)) {
      (occ ? monomer_forced : matched_forced)[x] = 1;
    } else if (!occ) {
      edge_forbidden[lat.edge_of(x)] = 1;
    }
  }
  // Place forced dimers, checking the pairwise contradictions.
  for (const auto& [x, occ] : xi.statuses()) {
    if (!lat.is_edge(x) || !occ) continue;
    const std::int32_t e = lat.edge_of(x);
    const auto [u, v] = lat.edge_endpoints(e);
    if (covered[u] || covered[v]) return std::nullopt;          // overlapping forced dimers
    if (monomer_forced[u] || monomer_forced[v]) return std::nullopt;
    covered[u] = covered[v] = 1;
    dimers.push_back(e);
  }
  // Every forced-monomer vertex is simply left uncovered by dimers.
  // Forced-matched vertices need a partner: prefer another needy vertex,
  // then a vertex outside the constraint's closure, then anything eligible.
  const auto support = xi.support();
  const auto closure = lat.closure(support);
  auto in_support = [&](SigmaIndex s) {
    return std::binary_search(support.begin(), support.end(), s);
  };
  auto in_closure = [&](SigmaIndex s) {
    return std::binary_search(closure.begin(), closure.end(), s);
  };
  for (std::int32_t v = 0; v < lat.vertex_count(); ++v) {
    if (!matched_forced[v] || covered[v]) continue;
    std::int32_t best = -1, best_edge = -1;
    int best_rank = -1;
    for (std::int32_t e : lat.incident_edges(v)) {
      if (edge_forbidden[e]) continue;
      const auto [a, b] = lat.edge_endpoints(e);
      const std::int32_t w = (a == v) ? b : a;
      if (covered[w] || monomer_forced[w]) continue;
      int rank = 0;
      if (matched_forced[w]) {
        rank = 3;
      } else if (!in_closure(lat.vertex_sigma(w))) {
        rank = 2;
      } else if (!in_support(lat.vertex_sigma(w))) {
        rank = 1;
      }
      if (rank > best_rank || (rank == best_rank && w < best)) {
        best_rank = rank;
        best = w;
        best_edge = e;
      }
    }
    if (best_edge < 0) return std::nullopt;
    covered[v] = covered[best] = 1;
    dimers.push_back(best_edge);
  }
  Covering out = Covering::from_dimers(lattice, std::move(dimers));
  for (const auto& [x, occ] : xi.statuses()) {
    if (out.occupied(x) != occ) return std::nullopt;
  }
  return out;
}

}  // namespace mdgs
