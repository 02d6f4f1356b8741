#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "mdgs/lattice.hpp"
#include "mdgs/rng.hpp"

using namespace mdgs;

TEST_CASE("torus counts and degrees") {
  const auto t23 = Lattice::torus(2, 3);
  CHECK(t23->vertex_count() == 9);
  CHECK(t23->edge_count() == 18);
  CHECK(t23->sigma_size() == 27);
  for (std::int32_t v = 0; v < 9; ++v) CHECK(t23->degree(v) == 4);

  const auto t14 = Lattice::torus(1, 4);
  CHECK(t14->vertex_count() == 4);
  CHECK(t14->edge_count() == 4);
  for (std::int32_t v = 0; v < 4; ++v) {
    CHECK(t14->incident_edges(v).size() == 2);
    CHECK(t14->vertex_neighbors(v).size() == 2);
  }

  const auto t35 = Lattice::torus(3, 5);
  CHECK(t35->vertex_count() == 125);
  CHECK(t35->edge_count() == 3 * 125);
  CHECK(t35->sigma_size() == 4 * 125);
  CHECK(t35->degree(17) == 6);
}

TEST_CASE("torus rejects degenerate sides") {
  CHECK_THROWS_AS(Lattice::torus(2, 2), LatticeError);
  CHECK_THROWS_AS(Lattice::torus(1, 1), LatticeError);
  CHECK_THROWS_AS(Lattice::torus(0, 5), LatticeError);
}

TEST_CASE("explicit graph validation") {
  CHECK_THROWS_AS(Lattice::from_edges(3, {{0, 0}}), LatticeError);
  CHECK_THROWS_AS(Lattice::from_edges(3, {{0, 3}}), LatticeError);
  CHECK_THROWS_AS(Lattice::from_edges(3, {{0, 1}, {1, 0}}), LatticeError);
  const auto p2 = Lattice::from_edges(2, {{0, 1}});
  CHECK(p2->sigma_size() == 3);
  CHECK(p2->neighborhood(0) == std::vector<SigmaIndex>{0, 2});
}

TEST_CASE("edge list file round trip and errors") {
  std::istringstream in("4 3\n0 1\n1 2\n2 3\n");
  const auto g = Lattice::load_edge_list(in);
  CHECK(g->vertex_count() == 4);
  CHECK(g->edge_count() == 3);
  std::istringstream bad("4 3\n0 1\n");
  CHECK_THROWS_AS(Lattice::load_edge_list(bad), LatticeError);
}

TEST_CASE("neighborhood of a torus vertex") {
  const auto t = Lattice::torus(2, 3);
  const auto n0 = t->neighborhood(0);
  CHECK(n0.size() == 5);  // vertex + 2d incident edges
  CHECK(n0[0] == 0);
}

TEST_CASE("sigma adjacency and exterior boundary") {
  const auto p2 = Lattice::from_edges(2, {{0, 1}});
  // distinct vertices are not Sigma-adjacent under the vertex-set rule
  CHECK_FALSE(p2->sigma_adjacent(0, 1));
  CHECK(p2->sigma_adjacent(0, 2));
  CHECK(p2->sigma_adjacent(2, 1));

  CHECK(p2->exterior_boundary(std::vector<SigmaIndex>{}).empty());
  const std::vector<SigmaIndex> su{0};
  CHECK(p2->exterior_boundary(su) == std::vector<SigmaIndex>{2});

  const auto t25 = Lattice::torus(2, 5);
  const std::vector<SigmaIndex> sv{7};
  const auto bd = t25->exterior_boundary(sv);
  CHECK(bd.size() == 4);
  for (SigmaIndex x : bd) CHECK(t25->is_edge(x));
}

TEST_CASE("boundary monotonicity") {
  const auto t = Lattice::torus(2, 4);
  const RngStream rng(5, Stream::kTrial, 0);
  for (int trial = 0; trial < 50; ++trial) {
    std::set<SigmaIndex> s, tset;
    for (int i = 0; i < 4; ++i) {
      s.insert(static_cast<SigmaIndex>(rng.uniform(trial * 100 + i) * t->sigma_size()));
    }
    tset = s;
    for (int i = 4; i < 7; ++i) {
      tset.insert(static_cast<SigmaIndex>(rng.uniform(trial * 100 + i) * t->sigma_size()));
    }
    std::vector<SigmaIndex> sv(s.begin(), s.end()), tv(tset.begin(), tset.end());
    const auto bs = t->exterior_boundary(sv);
    const auto bt = t->exterior_boundary(tv);
    for (SigmaIndex x : bs) {
      const bool in_t = std::binary_search(tv.begin(), tv.end(), x);
      const bool in_bt = std::binary_search(bt.begin(), bt.end(), x);
      CHECK((in_t || in_bt));
    }
  }
}

TEST_CASE("graph distance") {
  const auto t16 = Lattice::torus(1, 6);
  CHECK(t16->graph_distance(0, 0) == 0);
  CHECK(t16->graph_distance(0, 3) == 3);
  CHECK(t16->graph_distance(0, 5) == 1);

  const auto t24 = Lattice::torus(2, 4);
  const auto v33 = t24->vertex_at(std::vector<int>{3, 3});
  CHECK(t24->graph_distance(0, v33) == 2);

  // explicit-graph BFS agrees with the torus metric on a converted torus
  const auto t = Lattice::torus(2, 4);
  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::int32_t e = 0; e < t->edge_count(); ++e) edges.push_back(t->edge_endpoints(e));
  const auto g = Lattice::from_edges(t->vertex_count(), edges);
  const RngStream rng(7, Stream::kTrial, 0);
  for (int i = 0; i < 100; ++i) {
    const auto a = static_cast<SigmaIndex>(rng.uniform(2 * i) * t->sigma_size());
    const auto b = static_cast<SigmaIndex>(rng.uniform(2 * i + 1) * t->sigma_size());
    CHECK(t->graph_distance(a, b) == g->graph_distance(a, b));
  }
}

TEST_CASE("distance triangle inequality and translation invariance") {
  const auto t = Lattice::torus(2, 5);
  const RngStream rng(11, Stream::kTrial, 0);
  for (int i = 0; i < 100; ++i) {
    const auto a = static_cast<std::int32_t>(rng.uniform(3 * i) * t->vertex_count());
    const auto b = static_cast<std::int32_t>(rng.uniform(3 * i + 1) * t->vertex_count());
    const auto c = static_cast<std::int32_t>(rng.uniform(3 * i + 2) * t->vertex_count());
    CHECK(t->graph_distance(a, c) <= t->graph_distance(a, b) + t->graph_distance(b, c));
    // translate both endpoints by one lattice step
    const auto as = t->shift_vertex(a, 0, 1);
    const auto bs = t->shift_vertex(b, 0, 1);
    CHECK(t->graph_distance(a, b) == t->graph_distance(as, bs));
  }
}

TEST_CASE("torus edge coordinates") {
  const auto t = Lattice::torus(2, 4);
  for (std::int32_t v = 0; v < t->vertex_count(); ++v) {
    for (int dir = 0; dir < 2; ++dir) {
      const auto e = t->torus_edge(v, dir);
      const auto [base, d2] = t->torus_edge_parts(e);
      CHECK(base == v);
      CHECK(d2 == dir);
      const auto [a, b] = t->edge_endpoints(e);
      const auto w = t->shift_vertex(v, dir, 1);
      CHECK(((a == v && b == w) || (a == w && b == v)));
    }
  }
  CHECK(t->spec_string() == "t2x4");
}
