#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <optional>

#include "mdgs/blossom.hpp"
#include "mdgs/covering.hpp"
#include "mdgs/disorder.hpp"
#include "mdgs/solver.hpp"

using namespace mdgs;

namespace {

std::shared_ptr<const Lattice> path2() { return Lattice::from_edges(2, {{0, 1}}); }

WeightAssignment fixed(std::shared_ptr<const Lattice> lat, std::vector<double> values) {
  return WeightAssignment(std::move(lat), std::move(values), Provenance{0, 0, "fixed", {}});
}

// Restricted brute force: argmin over coverings agreeing with xi.
std::optional<Covering> brute_constrained(const WeightAssignment& j, const LocalConstraint& xi,
                                          double* out_energy = nullptr) {
  std::optional<Covering> best;
  double best_e = 0.0;
  long ties = 0;
  const double tol = tie_tolerance(j);
  enumerate_coverings(j.lattice_ptr(), [&](const Covering& m) {
    for (const auto& [x, s] : xi.statuses()) {
      if (m.occupied(x) != s) return true;
    }
    const double e = energy(m, j);
    if (!best || covering_beats(m, e, *best, best_e, tol, &ties)) {
      best = m;
      best_e = e;
    }
    return true;
  });
  if (out_energy && best) *out_energy = best_e;
  return best;
}

std::vector<std::shared_ptr<const Lattice>> small_zoo() {
  return {
      path2(),
      Lattice::from_edges(3, {{0, 1}, {1, 2}}),
      Lattice::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}),
      Lattice::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}),
      Lattice::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}),
      Lattice::from_edges(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}}),
      Lattice::torus(1, 5),
      Lattice::torus(1, 8),
      Lattice::torus(2, 3),
  };
}

}  // namespace

TEST_CASE("max_weight_matching on the textbook instance") {
  // Galil's running example: optimum pairs (2,4) and (3,5).
  std::vector<WeightedEdge> edges{{1, 2, 6}, {1, 3, 2}, {2, 3, 1},
                                  {2, 4, 7}, {3, 5, 9}, {4, 5, 3}};
  const auto mate = max_weight_matching(6, edges);
  CHECK(mate[2] == 4);
  CHECK(mate[4] == 2);
  CHECK(mate[3] == 5);
  CHECK(mate[5] == 3);
  CHECK(mate[1] == -1);
}

TEST_CASE("max_weight_matching leaves unhelpful edges out") {
  std::vector<WeightedEdge> edges{{0, 1, -1.0}};
  const auto mate = max_weight_matching(2, edges);
  CHECK(mate[0] == -1);
  CHECK(mate[1] == -1);
  CHECK(max_weight_matching(0, {}).empty());
}

TEST_CASE("ground state spec instances") {
  const auto p = path2();
  {
    const auto r = ground_state(fixed(p, {1.0, 2.0, 2.5}));
    CHECK(r.feasible);
    CHECK(r.energy == doctest::Approx(2.5));
    CHECK(r.covering_ref().dimers() == std::vector<std::int32_t>{0});
  }
  {
    const auto r = ground_state(fixed(p, {1.0, 2.0, 3.5}));
    CHECK(r.energy == doctest::Approx(3.0));
    CHECK(r.covering_ref().dimers().empty());
  }
  {
    const auto tri = Lattice::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    const auto r = ground_state(fixed(tri, {0, 0, 0, -1.0, -0.5, -0.25}));
    CHECK(r.energy == doctest::Approx(-1.0));
    CHECK(r.covering_ref().dimers() == std::vector<std::int32_t>{0});
    CHECK(r.covering_ref().monomers() == std::vector<std::int32_t>{2});
  }
}

TEST_CASE("oracle equivalence on random draws") {
  const auto dist = GoodDistribution::gaussian();
  for (const auto& lat : small_zoo()) {
    for (int t = 0; t < 150; ++t) {
      const auto j = sample(lat, dist, 1000 + t, static_cast<std::uint32_t>(t));
      const auto fast = ground_state(j);
      const auto slow = oracle_ground_state(j);
      REQUIRE(fast.feasible);
      CHECK(fast.covering_ref() == slow.covering_ref());
    }
  }
}

TEST_CASE("oracle equivalence with exponential and pareto weights") {
  const auto lat = Lattice::torus(2, 3);
  for (const auto& dist :
       {GoodDistribution::exponential(), GoodDistribution::pareto(5.0, 1.0)}) {
    for (int t = 0; t < 100; ++t) {
      const auto j = sample(lat, dist, 77 + t);
      CHECK(ground_state(j).covering_ref() == oracle_ground_state(j).covering_ref());
    }
  }
}

TEST_CASE("reduction identity for every covering") {
  const auto lat = Lattice::torus(2, 3);
  const auto j = sample(lat, GoodDistribution::gaussian(), 5);
  const GainGraph gg(j);
  CHECK(gg.penalty() > 1.0);
  enumerate_coverings(lat, [&](const Covering& m) {
    double gain_sum = 0.0;
    for (std::int32_t e : m.dimers()) gain_sum += gg.gain(e);
    CHECK(energy(m, j) + gain_sum == doctest::Approx(gg.vertex_weight_sum()).epsilon(1e-12));
    return true;
  });
}

TEST_CASE("exact tie resolved lexicographically with a counter") {
  const auto p = path2();
  const auto j = fixed(p, {1.0, 1.0, 2.0});  // dimer and monomers tie at H = 2
  const auto slow = oracle_ground_state(j);
  CHECK(slow.tie_events >= 1);
  // occupied sets: monomers {0,1} beats dimer {2} lexicographically
  CHECK(slow.covering_ref().dimers().empty());
  // the matching route drops the zero-gain edge and agrees here
  CHECK(ground_state(j).covering_ref() == slow.covering_ref());
}

TEST_CASE("constrained solves: spec instances") {
  const auto p = path2();
  const auto j = fixed(p, {1.0, 2.0, 2.5});
  // empty constraint equals the ground state
  CHECK(constrained_ground_state(j, LocalConstraint{}).covering_ref() ==
        ground_state(j).covering_ref());
  // forcing the edge vacant leaves only the all-monomer covering
  for (double je : {2.5, -10.0, 100.0}) {
    const auto jj = fixed(p, {1.0, 2.0, je});
    const auto r = constrained_ground_state(jj, LocalConstraint::single(2, false));
    CHECK(r.feasible);
    CHECK(r.covering_ref().dimers().empty());
    CHECK(r.energy == doctest::Approx(3.0));
  }
  // vertex and incident edge both occupied is infeasible
  LocalConstraint bad;
  bad.set(0, true);
  bad.set(2, true);
  CHECK_FALSE(constrained_ground_state(j, bad).feasible);
}

TEST_CASE("constrained solves match restricted brute force") {
  const auto dist = GoodDistribution::gaussian();
  const RngStream rng(31, Stream::kTrial, 0);
  int idx = 0;
  for (const auto& lat : small_zoo()) {
    for (int t = 0; t < 60; ++t) {
      const auto j = sample(lat, dist, 2000 + t, static_cast<std::uint32_t>(t));
      LocalConstraint xi;
      const int support = 1 + static_cast<int>(rng.uniform(idx++) * 3);
      for (int i = 0; i < support; ++i) {
        xi.set(static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size()),
               rng.uniform(idx++) < 0.5);
      }
      double brute_e = 0.0;
      const auto brute = brute_constrained(j, xi, &brute_e);
      const auto r = constrained_ground_state(j, xi);
      REQUIRE(r.feasible == brute.has_value());
      if (brute) {
        CHECK(r.covering_ref() == *brute);
        CHECK(r.energy == doctest::Approx(brute_e).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("constrained result ignores the weights on S") {
  const auto lat = Lattice::torus(2, 3);
  const auto dist = GoodDistribution::gaussian();
  const RngStream rng(37, Stream::kTrial, 0);
  int idx = 0;
  for (int t = 0; t < 40; ++t) {
    const auto j = sample(lat, dist, 3000 + t);
    LocalConstraint xi;
    for (int i = 0; i < 2; ++i) {
      xi.set(static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size()),
             rng.uniform(idx++) < 0.5);
    }
    const auto r = constrained_ground_state(j, xi);
    if (!r.feasible) continue;
    std::vector<double> values(j.values().begin(), j.values().end());
    for (SigmaIndex x : xi.support()) values[x] += 10.0 * rng.uniform(idx++) - 5.0;
    const auto jj = j.with_values(std::move(values), "scramble S");
    const auto r2 = constrained_ground_state(jj, xi);
    CHECK(r.covering_ref() == r2.covering_ref());
  }
}

TEST_CASE("delta_H: spec instances, antisymmetry, chain rule, tight bound") {
  const auto p = path2();
  const auto j = fixed(p, {1.0, 2.0, 2.5});
  const auto occ = LocalConstraint::single(2, true);
  const auto vac = LocalConstraint::single(2, false);
  CHECK(delta_H(j, occ, occ) == 0.0);
  CHECK(delta_H(j, occ, vac) == doctest::Approx(0.5));
  CHECK(delta_H(j, occ, vac) == doctest::Approx(-delta_H(j, vac, occ)));

  const auto lat = Lattice::torus(2, 4);
  const auto dist = GoodDistribution::gaussian();
  const RngStream rng(41, Stream::kTrial, 0);
  int idx = 0;
  for (int t = 0; t < 30; ++t) {
    const auto jj = sample(lat, dist, 4000 + t);
    std::vector<SigmaIndex> support;
    for (int i = 0; i < 3; ++i) {
      support.push_back(static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size()));
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    auto random_xi = [&]() {
      LocalConstraint xi;
      for (SigmaIndex x : support) xi.set(x, rng.uniform(idx++) < 0.5);
      return xi;
    };
    const auto a = random_xi(), b = random_xi(), c = random_xi();
    const bool all_ok = constrained_ground_state(jj, a).feasible &&
                        constrained_ground_state(jj, b).feasible &&
                        constrained_ground_state(jj, c).feasible;
    if (!all_ok) continue;
    CHECK(std::abs(delta_H(jj, a, b) + delta_H(jj, b, c) - delta_H(jj, a, c)) < 1e-9);
    double bound = 0.0;
    for (SigmaIndex x : lat->double_closure(support)) bound += std::abs(jj[x]);
    CHECK(std::abs(delta_H(jj, a, b)) <= bound + 1e-12);
  }
}

TEST_CASE("transition point: spec instances") {
  const auto p = path2();
  const auto j = fixed(p, {1.0, 2.0, 2.5});
  CHECK(transition_point(j, 2).value() == doctest::Approx(3.0));
  CHECK(transition_point(j, 0).value() == doctest::Approx(0.5));
  // u is not in the ground state since J_u = 1 > K = 0.5
  CHECK_FALSE(ground_state(j).covering_ref().occupied(0));
  CHECK(flexibility(j, 2).value() == doctest::Approx(0.5));
  CHECK(flexibility(j, 0).value() == doctest::Approx(0.5));
}

TEST_CASE("transition point is independent of the site weight") {
  const auto lat = Lattice::torus(2, 4);
  const auto dist = GoodDistribution::gaussian();
  const RngStream rng(43, Stream::kTrial, 0);
  for (int t = 0; t < 30; ++t) {
    const auto j = sample(lat, dist, 5000 + t);
    const auto x = static_cast<SigmaIndex>(rng.uniform(2 * t) * lat->sigma_size());
    const auto k = transition_point(j, x).value();
    const auto jj = j.with_value(x, 20.0 * rng.uniform(2 * t + 1) - 10.0, "move x");
    CHECK(std::abs(transition_point(jj, x).value() - k) < 1e-9);
    // membership iff J_x <= K
    const auto m = ground_state(jj).covering_ref();
    CHECK(m.occupied(x) == (jj[x] <= transition_point(jj, x).value()));
  }
}

TEST_CASE("flexibility equals |delta_H(x,0,1)| and is positive") {
  const auto lat = Lattice::torus(2, 4);
  const auto j = sample(lat, GoodDistribution::gaussian(), 99);
  const RngStream rng(47, Stream::kTrial, 0);
  for (int t = 0; t < 40; ++t) {
    const auto x = static_cast<SigmaIndex>(rng.uniform(t) * lat->sigma_size());
    const double f = flexibility(j, x).value();
    const double dh = delta_H(j, LocalConstraint::single(x, false),
                              LocalConstraint::single(x, true));
    CHECK(std::abs(f - std::abs(dh)) < 1e-9);
    CHECK(f > 0.0);
  }
}

TEST_CASE("optimality and inaccessibility: spec instances") {
  const auto p = path2();
  CHECK(optimality(fixed(p, {1.0, 2.0, 2.5}), 1) == doctest::Approx(0.5));
  const auto j2 = fixed(p, {1.0, 2.0, 3.5});
  CHECK(optimality(j2, 1) == doctest::Approx(-0.5));
  CHECK(ground_state(j2).covering_ref().occupied(1));  // v is a monomer

  CHECK(is_inaccessible(fixed(p, {1.0, 1.0, 2.5}), 0));
  CHECK_FALSE(is_inaccessible(fixed(p, {1.0, 1.0, 1.5}), 0));
}

TEST_CASE("lemma: inaccessible edges and negative-optimality vertices") {
  const auto lat = Lattice::torus(2, 4);
  for (int t = 0; t < 50; ++t) {
    const auto j = sample(lat, GoodDistribution::gaussian(), 6000 + t);
    const auto m = ground_state(j).covering_ref();
    for (std::int32_t e = 0; e < lat->edge_count(); ++e) {
      if (is_inaccessible(j, e)) CHECK_FALSE(m.edge_is_dimer(e));
    }
    for (std::int32_t v = 0; v < lat->vertex_count(); ++v) {
      if (optimality(j, v) < 0.0) CHECK(m.vertex_is_monomer(v));
    }
  }
}

TEST_CASE("metastate cell: spec instance and restriction consistency") {
  const auto p = path2();
  const auto j = fixed(p, {1.0, 2.0, 2.5});
  long ties = 0;
  const std::vector<SigmaIndex> s{2};
  const auto cell = metastate_cell(j, s, &ties);
  CHECK(cell.at(2) == true);

  const auto lat = Lattice::torus(2, 3);
  const RngStream rng(53, Stream::kTrial, 0);
  int idx = 0;
  for (int t = 0; t < 100; ++t) {
    const auto jj = sample(lat, GoodDistribution::gaussian(), 7000 + t);
    std::vector<SigmaIndex> support;
    const int size = 1 + static_cast<int>(rng.uniform(idx++) * 3);
    for (int i = 0; i < size; ++i) {
      support.push_back(static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size()));
    }
    const auto xi = metastate_cell(jj, support);
    const auto m = ground_state(jj).covering_ref();
    for (const auto& [x, stat] : xi.statuses()) CHECK(m.occupied(x) == stat);
  }

  // empty S gives the empty constraint
  CHECK(metastate_cell(j, std::vector<SigmaIndex>{}).empty());
}

TEST_CASE("lemma: gauge invariance of the ground state") {
  const auto lat = Lattice::torus(2, 4);
  const RngStream rng(59, Stream::kTrial, 0);
  for (int t = 0; t < 40; ++t) {
    const auto j = sample(lat, GoodDistribution::gaussian(), 8000 + t);
    const auto u = static_cast<std::int32_t>(rng.uniform(2 * t) * lat->vertex_count());
    const double lambda = 10.0 * rng.uniform(2 * t + 1) - 5.0;
    const auto m1 = ground_state(j).covering_ref();
    const auto m2 = ground_state(gauge_transform(j, u, lambda)).covering_ref();
    CHECK(m1 == m2);
  }
}

TEST_CASE("lemma: changing one occupied vertex weight gives a path from it") {
  const auto lat = Lattice::torus(2, 5);
  const RngStream rng(61, Stream::kTrial, 0);
  int idx = 0;
  int checked = 0;
  for (int t = 0; t < 60 && checked < 40; ++t) {
    const auto j = sample(lat, GoodDistribution::gaussian(), 9000 + t);
    const auto m = ground_state(j).covering_ref();
    if (m.monomers().empty()) continue;
    const auto v = m.monomers()[static_cast<std::size_t>(rng.uniform(idx++) *
                                                          m.monomers().size())];
    const auto jj = j.with_value(v, j[v] + 6.0 * rng.uniform(idx++) - 3.0, "move v");
    const auto mm = ground_state(jj).covering_ref();
    const auto d = sym_diff_decompose(m, mm);
    if (d.empty()) continue;
    ++checked;
    REQUIRE(d.components.size() == 1);
    const auto& comp = d.components.front();
    CHECK(comp.kind == SymDiffComponent::Kind::kPath);
    const bool starts_at_v = comp.elements.front() == lat->vertex_sigma(v) ||
                             comp.elements.back() == lat->vertex_sigma(v);
    CHECK(starts_at_v);
  }
  CHECK(checked > 0);
}

TEST_CASE("lemma: perturbations below the flexibility protect a site") {
  const auto lat = Lattice::torus(2, 4);
  const RngStream rng(67, Stream::kTrial, 0);
  int idx = 0;
  for (int t = 0; t < 40; ++t) {
    const auto j = sample(lat, GoodDistribution::gaussian(), 10000 + t);
    const auto x = static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size());
    const auto y = static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size());
    const double f = flexibility(j, x).value();
    const double eps = f * (0.05 + 0.9 * rng.uniform(idx++));
    const double sign = rng.uniform(idx++) < 0.5 ? -1.0 : 1.0;
    const auto jj = j.with_value(y, j[y] + sign * eps, "shift y");
    const auto m = ground_state(j).covering_ref();
    const auto mm = ground_state(jj).covering_ref();
    if (x == y) {
      CHECK(m == mm);
    } else {
      CHECK(m.occupied(x) == mm.occupied(x));
    }
  }
  // y == x explicitly
  for (int t = 0; t < 20; ++t) {
    const auto j = sample(lat, GoodDistribution::gaussian(), 11000 + t);
    const auto x = static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size());
    const double f = flexibility(j, x).value();
    const auto jj = j.with_value(x, j[x] - 0.5 * f, "shift x");
    CHECK(ground_state(j).covering_ref() == ground_state(jj).covering_ref());
  }
}

TEST_CASE("lemma: raising unoccupied weights keeps the ground state and flexibilities") {
  const auto lat = Lattice::torus(2, 4);
  const RngStream rng(71, Stream::kTrial, 0);
  int idx = 0;
  for (int t = 0; t < 15; ++t) {
    const auto j = sample(lat, GoodDistribution::gaussian(), 12000 + t);
    const auto m = ground_state(j).covering_ref();
    std::vector<double> values(j.values().begin(), j.values().end());
    for (SigmaIndex x = 0; x < lat->sigma_size(); ++x) {
      if (!m.occupied(x) && rng.uniform(idx++) < 0.4) {
        values[x] += 3.0 * rng.uniform(idx++);
      }
    }
    const auto jj = j.with_values(std::move(values), "raise unoccupied");
    CHECK(ground_state(jj).covering_ref() == m);
    for (int i = 0; i < 8; ++i) {
      const auto x = static_cast<SigmaIndex>(rng.uniform(idx++) * lat->sigma_size());
      CHECK(flexibility(jj, x).value() >= flexibility(j, x).value() - 1e-9);
    }
  }
}

namespace {

// An admissible alternating path: start from a dimer, extend with edges of
// alternating occupancy.
std::optional<std::vector<std::int32_t>> find_alternating_path(const Lattice& lat,
                                                               const Covering& m, int length,
                                                               const RngStream& rng,
                                                               int* idx) {
  if (m.dimers().empty()) return std::nullopt;
  const auto e0 = m.dimers()[static_cast<std::size_t>(rng.uniform((*idx)++) *
                                                       m.dimers().size())];
  auto [u1, u2] = lat.edge_endpoints(e0);
  if (rng.uniform((*idx)++) < 0.5) std::swap(u1, u2);
  std::vector<std::int32_t> path{u1, u2};
  while (static_cast<int>(path.size()) < length) {
    const auto cur = path.back();
    const bool want_dimer = path.size() % 2 == 1;  // edge i is a dimer iff i is even
    std::vector<std::int32_t> options;
    for (const auto e : lat.incident_edges(cur)) {
      const auto [a, b] = lat.edge_endpoints(e);
      const auto nxt = a == cur ? b : a;
      if (std::find(path.begin(), path.end(), nxt) != path.end()) continue;
      if (m.edge_is_dimer(e) != want_dimer) continue;
      options.push_back(nxt);
    }
    if (options.empty()) return std::nullopt;
    path.push_back(options[static_cast<std::size_t>(rng.uniform((*idx)++) *
                                                     options.size())]);
  }
  return path;
}

}  // namespace

TEST_CASE("lemma: alternating-path dichotomy never fails") {
  const auto lat = Lattice::torus(2, 5);
  const RngStream rng(73, Stream::kTrial, 0);
  int idx = 0;
  int ran = 0, empty_branch = 0, path_branch = 0;
  for (int t = 0; t < 60; ++t) {
    const auto j = sample(lat, GoodDistribution::gaussian(), 13000 + t);
    const auto m = ground_state(j).covering_ref();
    const int length = 4 + static_cast<int>(rng.uniform(idx++) * 3);
    const auto path = find_alternating_path(*lat, m, length, rng, &idx);
    if (!path) continue;
    const auto last = lat->edge_between((*path)[path->size() - 2], path->back());
    const auto f = flexibility(j, lat->edge_sigma(*last));
    if (!f || *f <= 1e-9) continue;
    const double eps = *f * (0.2 + 0.7 * rng.uniform(idx++));
    const auto rep = path_modification_check(j, *path, 3, eps, 14000 + t);
    if (rep.verdict == PathModVerdict::kSkip) continue;
    ++ran;
    INFO(rep.detail);
    CHECK(rep.verdict != PathModVerdict::kFail);
    if (rep.verdict == PathModVerdict::kEmptyBranch) ++empty_branch;
    if (rep.verdict == PathModVerdict::kPathBranch) ++path_branch;
  }
  CHECK(ran > 10);
}

TEST_CASE("path modification on a forced one-dimensional flip") {
  // Cycle of 6: a long alternating path with a weak start and a firm tail.
  const auto lat = Lattice::torus(1, 6);
  // vertices 0..5, edge i joins (i, i+1 mod 6)
  std::vector<double> values(lat->sigma_size(), 0.0);
  auto ews = [&](std::int32_t e, double w) { values[lat->edge_sigma(e)] = w; };
  values[0] = 0.2;   // u1 barely prefers being matched
  values[1] = 0.0;
  values[2] = 0.0;
  values[3] = 0.0;
  values[4] = 5.0;   // far side strongly favors matching 4-5
  values[5] = 5.0;
  ews(0, -1.0);      // dimer (0,1) in the ground state
  ews(1, 10.0);      // (1,2) inaccessible
  ews(2, -1.2);      // dimer (2,3)
  ews(3, 10.0);      // (3,4) inaccessible
  ews(4, -2.0);      // dimer (4,5), huge flexibility
  ews(5, 10.0);      // (5,0) inaccessible
  const auto j = fixed(lat, values);
  const auto m = ground_state(j).covering_ref();
  REQUIRE(m.dimers() == std::vector<std::int32_t>{0, 2, 4});
  const std::vector<std::int32_t> path{0, 1, 2, 3, 4, 5};
  const auto rep = path_modification_check(j, path, 3, 0.5, 99);
  INFO(rep.detail);
  CHECK(rep.verdict != PathModVerdict::kFail);
  CHECK(rep.verdict != PathModVerdict::kSkip);
}

TEST_CASE("solver feasibility flags degenerate single-site constraints") {
  // isolated vertex: forcing it matched is infeasible
  const auto g = Lattice::from_edges(2, {});
  const WeightAssignment j = fixed(g, {0.0, 0.0});
  CHECK_FALSE(constrained_ground_state(j, LocalConstraint::single(0, false)).feasible);
  CHECK_FALSE(transition_point(j, 0).has_value());
}
