#include "mdgs/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>

#include "mdgs/blossom.hpp"

namespace mdgs {

GainGraph::GainGraph(const WeightAssignment& j) {
  const Lattice& lat = j.lattice();
  gains_.resize(lat.edge_count());
  double abs_sum = 0.0;
  for (std::int32_t e = 0; e < lat.edge_count(); ++e) {
    const auto [u, v] = lat.edge_endpoints(e);
    gains_[e] = j.vertex_weight(u) + j.vertex_weight(v) - j.edge_weight(e);
    if (!std::isfinite(gains_[e])) throw SolverError("non-finite gain");
    abs_sum += std::abs(gains_[e]);
  }
  penalty_ = abs_sum + 2.0;
  vertex_weight_sum_ = 0.0;
  for (std::int32_t v = 0; v < lat.vertex_count(); ++v) vertex_weight_sum_ += j.vertex_weight(v);
}

namespace {

// Per-vertex state compiled from a constraint.
enum : std::int8_t { kFree = -1, kMustMatch = 0, kMonomer = 1 };

struct CompiledConstraint {
  std::vector<std::int8_t> vertex_state;  // kFree / kMustMatch / kMonomer
  std::vector<std::int8_t> edge_state;    // -1 free, 0 vacant, 1 dimer
  std::vector<std::int32_t> forced_dimers;
  std::vector<std::int8_t> covered;  // by forced dimers
  bool contradictory = false;
};

CompiledConstraint compile_constraint(const Lattice& lat, const LocalConstraint& xi) {
  CompiledConstraint cc;
  cc.vertex_state.assign(lat.vertex_count(), kFree);
  cc.edge_state.assign(lat.edge_count(), -1);
  cc.covered.assign(lat.vertex_count(), 0);
  for (const auto& [x, occ] : xi.statuses()) {
    lat.require_site(x);
    if (lat.is_vertex(x)) {
      cc.vertex_state[x] = occ ? kMonomer : kMustMatch;
    } else {
      cc.edge_state[lat.edge_of(x)] = occ ? 1 : 0;
    }
  }
  for (std::int32_t e = 0; e < lat.edge_count(); ++e) {
    if (cc.edge_state[e] != 1) continue;
    const auto [u, v] = lat.edge_endpoints(e);
    if (cc.covered[u] || cc.covered[v] || cc.vertex_state[u] == kMonomer ||
        cc.vertex_state[v] == kMonomer) {
      cc.contradictory = true;
      return cc;
    }
    cc.covered[u] = cc.covered[v] = 1;
    cc.forced_dimers.push_back(e);
  }
  return cc;
}

SolveResult solve_compiled(const WeightAssignment& j, const CompiledConstraint& cc) {
  const Lattice& lat = j.lattice();
  SolveResult out;
  if (cc.contradictory) return out;

  const GainGraph gg(j);
  const double b_penalty = gg.penalty();

  // Candidate edges with must-match bonuses; non-positive adjusted gains
  // can never help a maximum-weight matching and are dropped up front.
  std::vector<WeightedEdge> cand;
  std::vector<std::int32_t> cand_edge;
  cand.reserve(lat.edge_count());
  for (std::int32_t e = 0; e < lat.edge_count(); ++e) {
    if (cc.edge_state[e] == 0 || cc.edge_state[e] == 1) continue;
    const auto [u, v] = lat.edge_endpoints(e);
    if (cc.covered[u] || cc.covered[v]) continue;
    if (cc.vertex_state[u] == kMonomer || cc.vertex_state[v] == kMonomer) continue;
    double w = gg.gain(e);
    if (cc.vertex_state[u] == kMustMatch) w += b_penalty;
    if (cc.vertex_state[v] == kMustMatch) w += b_penalty;
    if (w <= 0.0) continue;
    cand.push_back({u, v, w});
    cand_edge.push_back(e);
  }

  const auto mate = max_weight_matching(lat.vertex_count(), cand);

  // A must-match vertex left single (and not covered by a forced dimer)
  // means the constraint set is infeasible.
  for (std::int32_t v = 0; v < lat.vertex_count(); ++v) {
    if (cc.vertex_state[v] == kMustMatch && !cc.covered[v] && mate[v] < 0) {
      return out;
    }
  }

  std::vector<std::int32_t> dimers = cc.forced_dimers;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (mate[cand[i].u] == cand[i].v) dimers.push_back(cand_edge[i]);
  }
  out.covering = Covering::from_dimers(j.lattice_ptr(), std::move(dimers));
  out.energy = energy(*out.covering, j);
  out.feasible = true;
  return out;
}

}  // namespace

SolveResult ground_state(const WeightAssignment& j) {
  return constrained_ground_state(j, LocalConstraint{});
}

SolveResult oracle_ground_state(const WeightAssignment& j) {
  const double tol = tie_tolerance(j);
  SolveResult out;
  enumerate_coverings(j.lattice_ptr(), [&](const Covering& m) {
    const double e = energy(m, j);
    if (!out.covering ||
        covering_beats(m, e, *out.covering, out.energy, tol, &out.tie_events)) {
      out.covering = m;
      out.energy = e;
    }
    return true;
  });
  out.feasible = out.covering.has_value();
  return out;
}

SolveResult constrained_ground_state(const WeightAssignment& j, const LocalConstraint& xi) {
  return solve_compiled(j, compile_constraint(j.lattice(), xi));
}

double tie_tolerance(const WeightAssignment& j) { return 1e-9 * j.magnitude(); }

bool covering_beats(const Covering& a, double ea, const Covering& b, double eb, double tol,
                    long* tie_events) {
  if (ea < eb - tol) return true;
  if (ea > eb + tol) return false;
  if (tie_events) ++*tie_events;
  // Lexicographic order on the sorted occupied Sigma-index sets.
  auto occupied_sigma = [](const Covering& m) {
    std::vector<SigmaIndex> out(m.monomers().begin(), m.monomers().end());
    for (std::int32_t e : m.dimers()) out.push_back(m.lattice().edge_sigma(e));
    return out;  // already sorted: monomers < all edge sigmas
  };
  return occupied_sigma(a) < occupied_sigma(b);
}

bool is_valid_constraint(const Lattice& lattice, const LocalConstraint& xi) {
  // Feasibility never depends on the weights; solve with zeros.
  WeightAssignment zeros(
      std::shared_ptr<const Lattice>(&lattice, [](const Lattice*) {}),
      std::vector<double>(lattice.sigma_size(), 0.0), Provenance{0, 0, "zeros", {}});
  return constrained_ground_state(zeros, xi).feasible;
}

double delta_H(const WeightAssignment& j, const LocalConstraint& xi, const LocalConstraint& xi2) {
  if (xi.support() != xi2.support()) {
    throw SolverError("delta_H: constraints must share a support");
  }
  const auto a = constrained_ground_state(j, xi);
  const auto b = constrained_ground_state(j, xi2);
  if (!a.feasible || !b.feasible) throw SolverError("delta_H: invalid constraint");
  return b.energy - a.energy;
}

std::optional<double> transition_point(const WeightAssignment& j, SigmaIndex x) {
  j.lattice().require_site(x);
  const auto r0 = constrained_ground_state(j, LocalConstraint::single(x, false));
  const auto r1 = constrained_ground_state(j, LocalConstraint::single(x, true));
  if (!r0.feasible || !r1.feasible) return std::nullopt;
  return r0.energy - r1.energy + j[x];
}

std::optional<double> flexibility(const WeightAssignment& j, SigmaIndex x) {
  const auto k = transition_point(j, x);
  if (!k) return std::nullopt;
  return std::abs(*k - j[x]);
}

double optimality(const WeightAssignment& j, std::int32_t v) {
  const Lattice& lat = j.lattice();
  lat.require_vertex(v);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int32_t e : lat.incident_edges(v)) {
    const auto [a, b] = lat.edge_endpoints(e);
    const std::int32_t u = (a == v) ? b : a;
    best = std::max(best, j.vertex_weight(u) + j.vertex_weight(v) - j.edge_weight(e));
  }
  return best;
}

bool is_inaccessible(const WeightAssignment& j, std::int32_t e) {
  const auto [u, v] = j.lattice().edge_endpoints(e);
  return j.edge_weight(e) > j.vertex_weight(u) + j.vertex_weight(v);
}

LocalConstraint metastate_cell(const WeightAssignment& j, std::span<const SigmaIndex> s,
                               long* tie_events) {
  if (s.size() > 20) throw SolverError("metastate_cell: |S| too large to enumerate");
  std::vector<SigmaIndex> sites(s.begin(), s.end());
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());

  const double tol = tie_tolerance(j);
  std::optional<LocalConstraint> best_xi;
  std::optional<SolveResult> best;
  long ties = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << sites.size()); ++mask) {
    LocalConstraint xi;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      xi.set(sites[i], (mask >> i) & 1);
    }
    auto r = constrained_ground_state(j, xi);
    if (!r.feasible) continue;
    if (!best || covering_beats(*r.covering, r.energy, *best->covering, best->energy, tol, &ties)) {
      best = std::move(r);
      best_xi = std::move(xi);
    }
  }
  if (!best_xi) throw SolverError("metastate_cell: no valid configuration on S");
  if (tie_events) *tie_events += ties;
  return *best_xi;
}

PathModReport path_modification_check(const WeightAssignment& j,
                                      std::span<const std::int32_t> path_vertices, int j_index,
                                      double eps, std::uint64_t seed, std::uint32_t sample_index) {
  const Lattice& lat = j.lattice();
  PathModReport report;
  const int k = static_cast<int>(path_vertices.size());
  if (k < 3) {
    report.detail = "path too short";
    return report;
  }
  if (!(eps > 0.0)) {
    report.detail = "eps must be positive";
    return report;
  }
  // Simple path: distinct vertices, consecutive ones adjacent.
  std::vector<std::int32_t> sorted(path_vertices.begin(), path_vertices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    report.detail = "path vertices not distinct";
    return report;
  }
  std::vector<std::int32_t> path_edges(k - 1);
  for (int i = 0; i + 1 < k; ++i) {
    const auto e = lat.edge_between(path_vertices[i], path_vertices[i + 1]);
    if (!e) {
      report.detail = "consecutive path vertices not adjacent";
      return report;
    }
    path_edges[i] = *e;
  }

  const auto gs = ground_state(j);
  const Covering& m = gs.covering_ref();
  // Edges alternately occupied, first edge a dimer.
  for (int i = 0; i + 1 < k; ++i) {
    const bool want = (i % 2 == 0);
    if (m.edge_is_dimer(path_edges[i]) != want) {
      report.detail = "path edges are not alternately occupied from a leading dimer";
      return report;
    }
  }
  if (!(j_index > 1 && j_index < k)) {
    report.detail = "j must satisfy 1 < j < k";
    return report;
  }
  if (!m.edge_is_dimer(path_edges[j_index - 1])) {  // (u_j, u_{j+1}), 1-based j
    report.detail = "(u_j, u_{j+1}) is not a dimer";
    return report;
  }
  const std::int32_t last_edge = path_edges[k - 2];
  const auto f_last = flexibility(j, lat.edge_sigma(last_edge));
  if (!f_last || *f_last < eps) {
    report.detail = "terminal edge flexibility below eps";
    return report;
  }

  // Proof order: gauge at u_1 by eps/2, make the off-path edges at the
  // interior vertices inaccessible on the gauged weights, then give u_1 back
  // its original weight. Edges at u_k stay untouched: u_k may be matched
  // outside S, and raising a matched edge would move the ground state.
  const std::int32_t u1 = path_vertices[0];
  const WeightAssignment gauged = gauge_transform(j, u1, eps / 2.0);
  std::vector<std::int32_t> sorted_path_edges = path_edges;
  std::sort(sorted_path_edges.begin(), sorted_path_edges.end());
  std::vector<std::int32_t> e_s;
  for (int i = 1; i + 1 < k; ++i) {
    for (std::int32_t e : lat.incident_edges(path_vertices[i])) {
      if (std::binary_search(sorted_path_edges.begin(), sorted_path_edges.end(), e)) continue;
      const auto [a, b] = lat.edge_endpoints(e);
      if (a == u1 || b == u1) continue;
      e_s.push_back(e);
    }
  }
  std::sort(e_s.begin(), e_s.end());
  e_s.erase(std::unique(e_s.begin(), e_s.end()), e_s.end());
  auto [raised, z] = make_inaccessible(gauged, e_s, seed, sample_index);
  const WeightAssignment perturbed =
      raised.with_value(u1, j.vertex_weight(u1), "drop u1 back");

  const auto gs2 = ground_state(perturbed);
  const Covering& m2 = gs2.covering_ref();
  const auto decomp = sym_diff_decompose(m, m2);
  if (decomp.empty()) {
    report.verdict = PathModVerdict::kEmptyBranch;
    return report;
  }
  report.verdict = PathModVerdict::kFail;
  if (decomp.components.size() != 1) {
    report.detail = "difference has several components";
    return report;
  }
  const auto& comp = decomp.components.front();
  if (comp.kind != SymDiffComponent::Kind::kPath) {
    report.detail = "difference is a loop";
    return report;
  }
  // Expect (u_1, (u_1,u_2), ..., (u_{p-1},u_p), u_p) with p <= k-1.
  std::vector<SigmaIndex> forward(comp.elements);
  if (forward.back() == lat.vertex_sigma(u1)) std::reverse(forward.begin(), forward.end());
  if (forward.front() != lat.vertex_sigma(u1)) {
    report.detail = "difference path does not start at u_1";
    return report;
  }
  const int steps = static_cast<int>(forward.size()) - 2;  // number of edges
  if (steps < 1 || steps > k - 2) {
    report.detail = "difference path length out of range";
    return report;
  }
  for (int i = 0; i < steps; ++i) {
    if (forward[1 + i] != lat.edge_sigma(path_edges[i])) {
      report.detail = "difference path leaves S";
      return report;
    }
  }
  if (forward.back() != lat.vertex_sigma(path_vertices[steps])) {
    report.detail = "difference path endpoint mismatch";
    return report;
  }
  report.verdict = PathModVerdict::kPathBranch;
  return report;
}

}  // namespace mdgs
