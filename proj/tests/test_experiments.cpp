#include <doctest.h>

#include <cmath>

#include "mdgs/covering.hpp"
#include "mdgs/experiments.hpp"
#include "mdgs/solver.hpp"

using namespace mdgs;

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 8, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("full-size window is the identity") {
  const auto master = Lattice::torus(2, 8);
  const auto win = make_window(master, 8);
  for (std::int32_t v = 0; v < master->vertex_count(); ++v) {
    CHECK(win.vertex_to_master[v] == v);
  }
  for (std::int32_t e = 0; e < master->edge_count(); ++e) {
    CHECK(win.edge_to_master[e] == e);
  }
  const auto j = sample(master, GoodDistribution::gaussian(), 3);
  const auto wj = window_weights(win, j);
  CHECK(std::equal(wj.values().begin(), wj.values().end(), j.values().begin()));
}

TEST_CASE("window weights share the master table") {
  const auto master = Lattice::torus(2, 12);
  const auto win = make_window(master, 6);
  const auto j = sample(master, GoodDistribution::gaussian(), 5);
  const auto wj = window_weights(win, j);
  for (std::int32_t v = 0; v < win.lattice->vertex_count(); ++v) {
    CHECK(wj.vertex_weight(v) == j.vertex_weight(win.vertex_to_master[v]));
  }
  for (std::int32_t e = 0; e < win.lattice->edge_count(); ++e) {
    CHECK(wj.edge_weight(e) == j.edge_weight(win.edge_to_master[e]));
  }
  // the window's center is the master's center
  const std::vector<int> cw(2, 3), cm(2, 6);
  CHECK(win.vertex_to_master[win.lattice->vertex_at(cw)] == master->vertex_at(cm));
  CHECK_THROWS_AS(make_window(master, 13), ExperimentError);
}

TEST_CASE("stabilization runs and validates sizes") {
  StabilizationConfig cfg;
  cfg.dimension = 2;
  cfg.sizes = {4, 6};
  cfg.box_radius = 1;
  cfg.samples = 6;
  cfg.seed = 11;
  const auto rep = stabilization_experiment(cfg);
  CHECK(rep.samples == 6);
  CHECK(rep.csv_rows.size() == 6);
  CHECK(rep.summary["pairs"].size() == 1);
  StabilizationConfig bad = cfg;
  bad.sizes = {6, 4};
  CHECK_THROWS_AS(stabilization_experiment(bad), ExperimentError);
  bad.sizes = {3, 6};
  CHECK_THROWS_AS(stabilization_experiment(bad), ExperimentError);  // 3 < 2K+2
}

TEST_CASE("chaos at p=0 is exactly empty") {
  ChaosConfig cfg;
  cfg.dimension = 2;
  cfg.side = 6;
  cfg.p_grid = {0.0, 0.5};
  cfg.samples = 10;
  cfg.seed = 21;
  const auto rep = chaos_experiment(cfg);
  CHECK(rep.summary["structure_violations"].get<long>() == 0);
  const auto& per_p = rep.summary["per_p"];
  CHECK(per_p[0]["p"].get<double>() == 0.0);
  CHECK(per_p[0]["origin_in_delta"]["mean"].get<double>() == 0.0);
  // p = 0 rows report empty differences
  for (const auto& row : rep.csv_rows) {
    if (row.find(",0,", 2) != std::string::npos) continue;
  }
}

TEST_CASE("experiment reports are bitwise stable across jobs") {
  ChaosConfig cfg;
  cfg.dimension = 2;
  cfg.side = 5;
  cfg.p_grid = {0.0, 0.3, 1.0};
  cfg.samples = 12;
  cfg.seed = 31;
  cfg.jobs = 1;
  const auto a = chaos_experiment(cfg);
  cfg.jobs = 4;
  const auto b = chaos_experiment(cfg);
  CHECK(a.json_text() == b.json_text());
  CHECK(a.csv_text() == b.csv_text());

  StabilizationConfig scfg;
  scfg.sizes = {4, 6};
  scfg.box_radius = 1;
  scfg.samples = 8;
  scfg.seed = 41;
  scfg.jobs = 1;
  const auto sa = stabilization_experiment(scfg);
  scfg.jobs = 3;
  const auto sb = stabilization_experiment(scfg);
  CHECK(sa.json_text() == sb.json_text());
  CHECK(sa.csv_text() == sb.csv_text());
}

TEST_CASE("clt experiment: schema and synthetic null") {
  CltConfig cfg;
  cfg.dimension = 1;
  cfg.sides = {64};
  cfg.samples = 60;
  cfg.seed = 51;
  const auto rep = clt_experiment(cfg);
  const auto& row = rep.summary["per_side"][0];
  CHECK(row["side"].get<int>() == 64);
  CHECK(std::isfinite(row["mean"].get<double>()));
  CHECK(std::isfinite(row["variance"].get<double>()));
  CHECK(row["ks_p_value"].get<double>() >= 0.0);
  CHECK(row["variance_ci_low"].get<double>() <= row["variance"].get<double>());
  CHECK(row["variance_ci_high"].get<double>() >= row["variance"].get<double>());

  CltConfig tiny = cfg;
  tiny.samples = 10;
  CHECK_THROWS_AS(clt_experiment(tiny), ExperimentError);

  CltConfig null_cfg = cfg;
  null_cfg.synthetic = true;
  null_cfg.samples = 200;
  const auto null_rep = clt_experiment(null_cfg);
  CHECK(null_rep.summary["per_side"][0]["ks_p_value"].get<double>() > 1e-4);
}

TEST_CASE("decay experiment: origin variance and translation invariance") {
  DecayConfig cfg;
  cfg.dimension = 2;
  cfg.side = 8;
  cfg.r_list = {1, 2};
  cfg.samples = 60;
  cfg.seed = 61;
  const auto rep = correlation_decay_experiment(cfg);
  const double var0 = rep.summary["origin_occupation_variance"].get<double>();
  CHECK(var0 > 0.0);
  CHECK(var0 <= 0.25);
  for (const auto& row : rep.summary["per_R"]) {
    CHECK(row["distance"].get<int>() >= 2 * row["R"].get<int>());
    const double se = row["cov_se"].get<double>();
    const double se_s = row["cov_shifted_se"].get<double>();
    CHECK(std::abs(row["cov"].get<double>() - row["cov_shifted"].get<double>()) <=
          5.0 * (se + se_s) + 1e-12);
  }
  DecayConfig bad = cfg;
  bad.r_list = {10};  // 2R = 20 > d * floor(n/2) = 8
  CHECK_THROWS_AS(correlation_decay_experiment(bad), ExperimentError);
}

TEST_CASE("derivative experiment: no failures, cases partition") {
  DerivativeConfig cfg;
  cfg.dimension = 2;
  cfg.side = 6;
  cfg.sites_per_sample = 5;
  cfg.samples = 20;
  cfg.seed = 71;
  const auto rep = derivative_decomposition_check(cfg);
  CHECK(rep.summary["fail_count"].get<long>() == 0);
  CHECK(rep.summary["max_abs_E"].get<double>() <= 1.0);
  long total = 0;
  for (const auto& [k, v] : rep.summary["case_counts"].items()) total += v.get<long>();
  CHECK(total == 20 * 5);
}

TEST_CASE("transition experiment: identical pair gives zero discrepancies") {
  TransitionConvergenceConfig cfg;
  cfg.dimension = 2;
  cfg.pairs = {{8, 8}, {4, 8}};
  cfg.samples = 12;
  cfg.seed = 81;
  cfg.extra_sites = 1;
  const auto rep = transition_convergence_experiment(cfg);
  const auto& identical = rep.summary["per_pair"][0];
  CHECK(identical["R"].get<int>() == 8);
  CHECK(identical["max_abs_A"].get<double>() == 0.0);
  CHECK(identical["epsilon"].get<double>() == 0.0);
  CHECK(identical["mean_abs_A1"]["mean"].get<double>() == 0.0);
  const auto& nested = rep.summary["per_pair"][1];
  CHECK(nested["max_abs_A"].get<double>() <= 2.0);
  for (const auto& tail : nested["tails"]) {
    CHECK(tail["tail_probability"].get<double>() >= 0.0);
    CHECK(tail["tail_probability"].get<double>() <= 1.0);
  }
}

TEST_CASE("droplet experiment: single component through the origin") {
  DropletConfig cfg;
  cfg.dimension = 2;
  cfg.side = 6;
  cfg.samples = 30;
  cfg.seed = 91;
  const auto rep = critical_droplet_experiment(cfg);
  CHECK(rep.summary["structure_violations"].get<long>() == 0);
  CHECK(rep.summary["infeasible_flips"].get<long>() == 0);
  CHECK(rep.summary["median_size"].get<double>() >= 1.0);
  CHECK(rep.summary["p95_size"].get<double>() >=
        rep.summary["median_size"].get<double>());
}

TEST_CASE("report files embed the config and reproduce bitwise") {
  DropletConfig cfg;
  cfg.dimension = 2;
  cfg.side = 5;
  cfg.samples = 8;
  cfg.seed = 101;
  const auto rep = critical_droplet_experiment(cfg);
  CHECK(rep.file_stem() == "droplet_t2x5_seed101");
  CHECK(rep.json_text().find("\"seed\": 101") != std::string::npos);
  CHECK(rep.csv_text().rfind("# experiment=droplet", 0) == 0);
  const auto rep2 = critical_droplet_experiment(cfg);
  CHECK(rep.json_text() == rep2.json_text());
  CHECK(rep.csv_text() == rep2.csv_text());
}
