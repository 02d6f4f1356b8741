#ifndef MDGS_EXPERIMENTS_HPP
#define MDGS_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdgs/disorder.hpp"
#include "mdgs/lattice.hpp"
#include "mdgs/report.hpp"

namespace mdgs {

struct ExperimentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Splitmix-style derivation of independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Deterministic work distribution: fn(i) for i in [0, count), any thread
// count, results owned by the caller per index.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn);

// A size-r torus re-wrapped from the centered r-window of a master torus.
// Every window element carries the Sigma index of the master element whose
// weight it shares; the window equals the master when r == side.
struct TorusWindow {
  std::shared_ptr<const Lattice> lattice;
  std::shared_ptr<const Lattice> master;
  std::vector<std::int32_t> vertex_to_master;  // window vertex -> master vertex
  std::vector<std::int32_t> edge_to_master;    // window edge -> master edge

  // Window Sigma index of a master site, when the site lies in the window.
  std::int32_t window_sigma(SigmaIndex master_sigma) const;
};

TorusWindow make_window(const std::shared_ptr<const Lattice>& master, int r);
WeightAssignment window_weights(const TorusWindow& win, const WeightAssignment& master_j);

struct StabilizationConfig {
  int dimension = 2;
  std::vector<int> sizes;  // ascending, each >= 2*box_radius + 2
  int box_radius = 2;
  int samples = 200;
  GoodDistribution dist = GoodDistribution::gaussian();
  std::uint64_t seed = 1;
  int jobs = 1;
};
ExperimentReport stabilization_experiment(const StabilizationConfig& cfg);

struct ChaosConfig {
  int dimension = 2;
  int side = 24;
  std::vector<double> p_grid;
  int samples = 300;
  GoodDistribution dist = GoodDistribution::gaussian();
  std::uint64_t seed = 1;
  int jobs = 1;
};
ExperimentReport chaos_experiment(const ChaosConfig& cfg);

struct CltConfig {
  int dimension = 2;
  std::vector<int> sides;
  int samples = 1000;
  GoodDistribution dist = GoodDistribution::gaussian();
  std::uint64_t seed = 1;
  bool synthetic = false;  // feed i.i.d. standard normals through the pipeline
  int bootstrap_resamples = 1000;
  int jobs = 1;
};
ExperimentReport clt_experiment(const CltConfig& cfg);

struct DecayConfig {
  int dimension = 2;
  int side = 32;
  std::vector<int> r_list;
  int samples = 500;
  GoodDistribution dist = GoodDistribution::gaussian();
  std::uint64_t seed = 1;
  int jobs = 1;
};
ExperimentReport correlation_decay_experiment(const DecayConfig& cfg);

struct DerivativeConfig {
  int dimension = 2;
  int side = 12;
  int sites_per_sample = 20;
  int samples = 200;
  GoodDistribution dist = GoodDistribution::gaussian();
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  int jobs = 1;
};
ExperimentReport derivative_decomposition_check(const DerivativeConfig& cfg);

struct TransitionConvergenceConfig {
  int dimension = 2;
  std::vector<std::pair<int, int>> pairs;  // (R, n) with R <= n
  int extra_sites = 0;                     // random extra sites near the center
  int samples = 300;
  GoodDistribution dist = GoodDistribution::gaussian();
  std::uint64_t seed = 1;
  double delta_moment = 1.0;  // the delta in the eps(n,R) exponent (16+4d)/d
  std::vector<double> delta_grid = {0.1, 0.25, 0.5, 1.0};
  int jobs = 1;
};
ExperimentReport transition_convergence_experiment(const TransitionConvergenceConfig& cfg);

struct DropletConfig {
  int dimension = 2;
  int side = 24;
  int samples = 500;
  GoodDistribution dist = GoodDistribution::gaussian();
  std::uint64_t seed = 1;
  int jobs = 1;
};
ExperimentReport critical_droplet_experiment(const DropletConfig& cfg);

}  // namespace mdgs

#endif
