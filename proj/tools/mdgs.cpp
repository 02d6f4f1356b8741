#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdgs/covering.hpp"
#include "mdgs/disorder.hpp"
#include "mdgs/experiments.hpp"
#include "mdgs/lattice.hpp"
#include "mdgs/report.hpp"
#include "mdgs/solver.hpp"

namespace {

using namespace mdgs;

struct CommonOpts {
  std::vector<int> torus;  // d n
  std::string graph_path;
  std::string dist_name = "gaussian";
  double pareto_shape = 5.0;
  double pareto_scale = 1.0;
  std::uint64_t seed = 1;
  std::string outdir = "out";
  int jobs = 1;
};

void add_lattice_opts(CLI::App* cmd, CommonOpts& o) {
  auto* t = cmd->add_option("--torus", o.torus, "Torus lattice: dimension side")->expected(2);
  auto* g = cmd->add_option("--graph", o.graph_path,
                            "Explicit graph edge-list file (header \"V E\", lines \"u v\")");
  t->excludes(g);
}

void add_dist_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--dist", o.dist_name, "Weight distribution: gaussian|exponential|pareto")
      ->check(CLI::IsMember({"gaussian", "exponential", "pareto"}));
  cmd->add_option("--shape", o.pareto_shape, "Pareto shape (must exceed 4)");
  cmd->add_option("--scale", o.pareto_scale, "Pareto scale");
}

void add_run_opts(CLI::App* cmd, CommonOpts& o) {
  cmd->set_config("--config", "", "Key-value config file; command-line flags win");
  cmd->allow_config_extras(false);
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--out", o.outdir, "Output directory (MDGS_OUT overrides)");
  cmd->add_option("--jobs", o.jobs, "Worker threads; never affects output bytes")
      ->check(CLI::PositiveNumber);
}

std::shared_ptr<const Lattice> build_lattice(const CommonOpts& o) {
  if (!o.torus.empty()) return Lattice::torus(o.torus[0], o.torus[1]);
  if (!o.graph_path.empty()) return Lattice::load_edge_list_file(o.graph_path);
  throw CLI::ValidationError("lattice", "one of --torus or --graph is required");
}

GoodDistribution build_dist(const CommonOpts& o) {
  return GoodDistribution::parse(o.dist_name, o.pareto_shape, o.pareto_scale);
}

std::string resolve_outdir(const CommonOpts& o) {
  if (const char* env = std::getenv("MDGS_OUT"); env && *env) return env;
  return o.outdir;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

std::string config_header(const std::string& what, const CommonOpts& o,
                          const Lattice& lattice) {
  std::ostringstream os;
  os << "# " << what << " lattice=" << lattice.spec_string() << " dist=" << o.dist_name
     << " seed=" << o.seed << "\n";
  return os.str();
}

int emit_report(const ExperimentReport& report, const CommonOpts& o) {
  const std::string stem = report.write_files(resolve_outdir(o));
  std::cout << report.console_summary() << "report    : " << stem << ".{json,csv}\n";
  return 0;
}

// ---------------------------------------------------------------------------

int run_solve(const CommonOpts& o) {
  const auto lattice = build_lattice(o);
  const auto j = sample(lattice, build_dist(o), o.seed);
  const auto r = ground_state(j);
  const auto& m = r.covering_ref();
  const auto dir = std::filesystem::path(resolve_outdir(o));
  {
    auto f = open_out(dir / ("covering_" + lattice->spec_string() + "_seed" +
                             std::to_string(o.seed) + ".txt"));
    f << config_header("covering", o, *lattice);
    m.write(f);
  }
  {
    auto f = open_out(dir / ("weights_" + lattice->spec_string() + "_seed" +
                             std::to_string(o.seed) + ".csv"));
    j.write_csv(f);
  }
  std::cout << "lattice  : " << lattice->spec_string() << "\n"
            << "energy   : " << format_double(r.energy) << "\n"
            << "dimers   : " << m.dimers().size() << "\n"
            << "monomers : " << m.monomers().size() << "\n"
            << "files    : " << (dir / ("covering_" + lattice->spec_string() + "_seed" +
                                        std::to_string(o.seed) + ".txt"))
                                   .string()
            << "\n";
  return 0;
}

int run_site_table(const CommonOpts& o, const std::string& what) {
  const auto lattice = build_lattice(o);
  const auto j = sample(lattice, build_dist(o), o.seed);
  const auto dir = std::filesystem::path(resolve_outdir(o));
  auto f = open_out(dir / (what + "_" + lattice->spec_string() + "_seed" +
                           std::to_string(o.seed) + ".csv"));
  f << config_header(what, o, *lattice);
  if (what == "optimality") {
    f << "vertex,J,O\n";
    for (std::int32_t v = 0; v < lattice->vertex_count(); ++v) {
      f << v << ',' << format_double(j.vertex_weight(v)) << ','
        << format_double(optimality(j, v)) << "\n";
    }
  } else {
    f << "sigma,J,K,F\n";
    for (SigmaIndex x = 0; x < lattice->sigma_size(); ++x) {
      const auto k = transition_point(j, x);
      f << x << ',' << format_double(j[x]) << ','
        << (k ? format_double(*k) : std::string("nan")) << ','
        << (k ? format_double(std::abs(*k - j[x])) : std::string("nan")) << "\n";
    }
  }
  std::cout << what << " table written for " << lattice->spec_string() << "\n";
  return 0;
}

int run_decompose(const CommonOpts& o, std::uint64_t seed2) {
  const auto lattice = build_lattice(o);
  const auto dist = build_dist(o);
  const auto j1 = sample(lattice, dist, o.seed);
  const auto j2 = sample(lattice, dist, seed2);
  const auto m1 = ground_state(j1).covering_ref();
  const auto m2 = ground_state(j2).covering_ref();
  const auto decomp = sym_diff_decompose(m1, m2);
  nlohmann::ordered_json doc;
  doc["lattice"] = lattice->spec_string();
  doc["seed"] = o.seed;
  doc["seed2"] = seed2;
  doc["distribution"] = dist.name();
  auto comps = nlohmann::ordered_json::array();
  for (const auto& c : decomp.components) {
    nlohmann::ordered_json jc;
    jc["kind"] = c.kind == SymDiffComponent::Kind::kPath ? "path" : "loop";
    jc["elements"] = c.elements;
    jc["first_side"] = c.side_elements(0);
    jc["second_side"] = c.side_elements(1);
    comps.push_back(std::move(jc));
  }
  doc["components"] = comps;
  const auto dir = std::filesystem::path(resolve_outdir(o));
  const auto path = dir / ("decompose_" + lattice->spec_string() + "_seed" +
                           std::to_string(o.seed) + "_" + std::to_string(seed2) + ".json");
  open_out(path) << doc.dump(2) << "\n";
  std::cout << "components : " << decomp.components.size() << "\n"
            << "elements   : " << decomp.total_elements() << "\n"
            << "file       : " << path.string() << "\n";
  return 0;
}

int run_goodness(const CommonOpts& o, double z, double alpha) {
  const auto dist = build_dist(o);
  try {
    const double c = goodness_constant(dist, z, alpha);
    std::cout << "C(" << z << "," << alpha << ") for " << dist.name() << " = "
              << format_double(c) << "\n";
  } catch (const DisorderError& e) {
    std::cout << "divergent: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

struct OracleZooEntry {
  std::string name;
  std::shared_ptr<const Lattice> lattice;
};

std::vector<OracleZooEntry> oracle_zoo(int max_sigma) {
  std::vector<OracleZooEntry> zoo;
  auto add_graph = [&](const std::string& name, std::int32_t nv,
                       std::vector<std::pair<std::int32_t, std::int32_t>> edges) {
    auto lat = Lattice::from_edges(nv, std::move(edges));
    if (lat->sigma_size() <= max_sigma) zoo.push_back({name, lat});
  };
  add_graph("P2", 2, {{0, 1}});
  add_graph("P3", 3, {{0, 1}, {1, 2}});
  add_graph("triangle", 3, {{0, 1}, {1, 2}, {0, 2}});
  add_graph("C4", 4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  add_graph("K4", 4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  // 2x3 grid
  add_graph("grid2x3", 6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}});
  for (int n = 3; n <= 8; ++n) {
    auto lat = Lattice::torus(1, n);
    if (lat->sigma_size() <= max_sigma) zoo.push_back({"t1x" + std::to_string(n), lat});
  }
  {
    auto lat = Lattice::torus(2, 3);
    if (lat->sigma_size() <= max_sigma) zoo.push_back({"t2x3", lat});
  }
  return zoo;
}

int run_oracle_check(const CommonOpts& o, int max_sigma, int trials) {
  const auto dist = build_dist(o);
  const auto zoo = oracle_zoo(max_sigma);
  long mismatches = 0, reduction_breaches = 0, ties = 0;
  for (const auto& entry : zoo) {
    for (int t = 0; t < trials; ++t) {
      const auto j = sample(entry.lattice, dist, mix_seed(o.seed, t),
                            static_cast<std::uint32_t>(t));
      const auto fast = ground_state(j);
      const auto slow = oracle_ground_state(j);
      ties += slow.tie_events;
      if (!(fast.covering_ref() == slow.covering_ref())) {
        ++mismatches;
        std::cerr << "MISMATCH " << entry.name << " trial " << t << " fast="
                  << format_double(fast.energy) << " slow=" << format_double(slow.energy)
                  << "\n";
      }
      const GainGraph gg(j);
      double gain_sum = 0.0;
      for (std::int32_t e : fast.covering_ref().dimers()) gain_sum += gg.gain(e);
      if (std::abs(fast.energy + gain_sum - gg.vertex_weight_sum()) >
          1e-9 * j.magnitude()) {
        ++reduction_breaches;
      }
    }
    std::cout << entry.name << ": " << trials << " trials ok\n";
  }
  std::cout << "lattices=" << zoo.size() << " trials_each=" << trials
            << " mismatches=" << mismatches << " reduction_breaches=" << reduction_breaches
            << " tie_events=" << ties << "\n";
  return (mismatches == 0 && reduction_breaches == 0) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact ground states and seeded Monte Carlo experiments for the "
               "disordered monomer-dimer model"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* solve = app.add_subcommand("solve", "Ground state of one disorder sample");
  add_lattice_opts(solve, o);
  add_dist_opts(solve, o);
  add_run_opts(solve, o);

  auto* flex = app.add_subcommand("flexibility", "Per-site J, K and flexibility table");
  add_lattice_opts(flex, o);
  add_dist_opts(flex, o);
  add_run_opts(flex, o);

  auto* opt = app.add_subcommand("optimality", "Per-vertex optimality table");
  add_lattice_opts(opt, o);
  add_dist_opts(opt, o);
  add_run_opts(opt, o);

  auto* decomp = app.add_subcommand("decompose",
                                    "Symmetric-difference decomposition of two ground states");
  std::uint64_t seed2 = 2;
  add_lattice_opts(decomp, o);
  add_dist_opts(decomp, o);
  add_run_opts(decomp, o);
  decomp->add_option("--seed2", seed2, "Seed of the second disorder sample");

  auto* stab = app.add_subcommand("stabilize", "Nested-torus ground-state stabilization");
  StabilizationConfig stab_cfg;
  stab_cfg.sizes = {8, 16, 32};
  add_dist_opts(stab, o);
  add_run_opts(stab, o);
  stab->add_option("--dim", stab_cfg.dimension, "Torus dimension");
  stab->add_option("--sizes", stab_cfg.sizes, "Ascending torus sides")->expected(-2);
  stab->add_option("--box", stab_cfg.box_radius, "Comparison box radius K");
  stab->add_option("--samples", stab_cfg.samples, "Disorder samples");

  auto* chaos = app.add_subcommand("chaos", "Disorder chaos under p-resampling");
  ChaosConfig chaos_cfg;
  chaos_cfg.p_grid = {0.0, 0.01, 0.05, 0.2, 1.0};
  add_dist_opts(chaos, o);
  add_run_opts(chaos, o);
  chaos->add_option("--dim", chaos_cfg.dimension, "Torus dimension");
  chaos->add_option("--side", chaos_cfg.side, "Torus side");
  chaos->add_option("--p-grid", chaos_cfg.p_grid, "Resampling probabilities")->expected(-1);
  chaos->add_option("--samples", chaos_cfg.samples, "Disorder samples");

  auto* clt = app.add_subcommand("clt", "Ground-state energy CLT probe");
  CltConfig clt_cfg;
  clt_cfg.sides = {8, 16, 24};
  add_dist_opts(clt, o);
  add_run_opts(clt, o);
  clt->add_option("--dim", clt_cfg.dimension, "Torus dimension");
  clt->add_option("--sides", clt_cfg.sides, "Torus sides")->expected(-1);
  clt->add_option("--samples", clt_cfg.samples, "Disorder samples");
  clt->add_flag("--synthetic", clt_cfg.synthetic,
                "Pipeline null: feed i.i.d. standard normals instead of H");
  clt->add_option("--bootstrap", clt_cfg.bootstrap_resamples, "Bootstrap resamples");

  auto* decay = app.add_subcommand("decay", "Occupation covariance at distance >= 2R");
  DecayConfig decay_cfg;
  decay_cfg.r_list = {2, 4, 8};
  add_dist_opts(decay, o);
  add_run_opts(decay, o);
  decay->add_option("--dim", decay_cfg.dimension, "Torus dimension");
  decay->add_option("--side", decay_cfg.side, "Torus side");
  decay->add_option("--r-list", decay_cfg.r_list, "R values")->expected(-1);
  decay->add_option("--samples", decay_cfg.samples, "Disorder samples");

  auto* deriv = app.add_subcommand("derivative", "Replacement-derivative decomposition check");
  DerivativeConfig deriv_cfg;
  add_dist_opts(deriv, o);
  add_run_opts(deriv, o);
  deriv->add_option("--dim", deriv_cfg.dimension, "Torus dimension");
  deriv->add_option("--side", deriv_cfg.side, "Torus side");
  deriv->add_option("--sites", deriv_cfg.sites_per_sample, "Random sites per sample");
  deriv->add_option("--samples", deriv_cfg.samples, "Disorder samples");
  deriv->add_option("--tolerance", deriv_cfg.tolerance, "Identity tolerance");

  auto* trans = app.add_subcommand("transition", "Transition-point window convergence");
  TransitionConvergenceConfig trans_cfg;
  trans_cfg.pairs = {{6, 12}, {8, 24}};
  std::vector<int> pair_flat;
  add_dist_opts(trans, o);
  add_run_opts(trans, o);
  trans->add_option("--dim", trans_cfg.dimension, "Torus dimension");
  trans->add_option("--pairs", pair_flat, "Flattened (R, n) pairs: R1 n1 R2 n2 ...")
      ->expected(-2);
  trans->add_option("--extra-sites", trans_cfg.extra_sites, "Extra random sites near center");
  trans->add_option("--samples", trans_cfg.samples, "Disorder samples");
  trans->add_option("--delta", trans_cfg.delta_moment, "Moment delta in the eps exponent");
  trans->add_option("--delta-grid", trans_cfg.delta_grid, "Tail thresholds")->expected(-1);

  auto* droplet = app.add_subcommand("droplet", "Critical droplet at the origin");
  DropletConfig droplet_cfg;
  add_dist_opts(droplet, o);
  add_run_opts(droplet, o);
  droplet->add_option("--dim", droplet_cfg.dimension, "Torus dimension");
  droplet->add_option("--side", droplet_cfg.side, "Torus side");
  droplet->add_option("--samples", droplet_cfg.samples, "Disorder samples");

  auto* oracle = app.add_subcommand("oracle-check", "Solver vs brute-force enumeration");
  int max_sigma = 24, trials = 1000;
  add_dist_opts(oracle, o);
  add_run_opts(oracle, o);
  oracle->add_option("--max-sigma", max_sigma, "Largest |Sigma| admitted to the zoo");
  oracle->add_option("--trials", trials, "Random draws per lattice");

  auto* goodness = app.add_subcommand("goodness", "Goodness constant C(z, alpha)");
  double z = 1.0, alpha = 2.0;
  add_dist_opts(goodness, o);
  goodness->add_option("--z", z, "Shift z >= 0");
  goodness->add_option("--alpha", alpha, "Moment order alpha > 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(solve)) return run_solve(o);
    if (app.got_subcommand(flex)) return run_site_table(o, "flexibility");
    if (app.got_subcommand(opt)) return run_site_table(o, "optimality");
    if (app.got_subcommand(decomp)) return run_decompose(o, seed2);
    if (app.got_subcommand(goodness)) return run_goodness(o, z, alpha);
    if (app.got_subcommand(oracle)) return run_oracle_check(o, max_sigma, trials);
    if (app.got_subcommand(stab)) {
      stab_cfg.dist = build_dist(o);
      stab_cfg.seed = o.seed;
      stab_cfg.jobs = o.jobs;
      return emit_report(stabilization_experiment(stab_cfg), o);
    }
    if (app.got_subcommand(chaos)) {
      chaos_cfg.dist = build_dist(o);
      chaos_cfg.seed = o.seed;
      chaos_cfg.jobs = o.jobs;
      const auto report = chaos_experiment(chaos_cfg);
      const int rc = report.summary["structure_violations"].get<long>() > 0 ? 2 : 0;
      emit_report(report, o);
      return rc;
    }
    if (app.got_subcommand(clt)) {
      clt_cfg.dist = build_dist(o);
      clt_cfg.seed = o.seed;
      clt_cfg.jobs = o.jobs;
      return emit_report(clt_experiment(clt_cfg), o);
    }
    if (app.got_subcommand(decay)) {
      decay_cfg.dist = build_dist(o);
      decay_cfg.seed = o.seed;
      decay_cfg.jobs = o.jobs;
      return emit_report(correlation_decay_experiment(decay_cfg), o);
    }
    if (app.got_subcommand(deriv)) {
      deriv_cfg.dist = build_dist(o);
      deriv_cfg.seed = o.seed;
      deriv_cfg.jobs = o.jobs;
      const auto report = derivative_decomposition_check(deriv_cfg);
      const int rc = report.summary["fail_count"].get<long>() > 0 ? 2 : 0;
      emit_report(report, o);
      return rc;
    }
    if (app.got_subcommand(trans)) {
      if (!pair_flat.empty()) {
        if (pair_flat.size() % 2 != 0) throw ExperimentError("--pairs wants R n pairs");
        trans_cfg.pairs.clear();
        for (std::size_t i = 0; i + 1 < pair_flat.size(); i += 2) {
          trans_cfg.pairs.emplace_back(pair_flat[i], pair_flat[i + 1]);
        }
      }
      trans_cfg.dist = build_dist(o);
      trans_cfg.seed = o.seed;
      trans_cfg.jobs = o.jobs;
      return emit_report(transition_convergence_experiment(trans_cfg), o);
    }
    if (app.got_subcommand(droplet)) {
      droplet_cfg.dist = build_dist(o);
      droplet_cfg.seed = o.seed;
      droplet_cfg.jobs = o.jobs;
      const auto report = critical_droplet_experiment(droplet_cfg);
      const int rc = report.summary["structure_violations"].get<long>() > 0 ? 2 : 0;
      emit_report(report, o);
      return rc;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
