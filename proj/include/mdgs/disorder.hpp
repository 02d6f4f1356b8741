#ifndef MDGS_DISORDER_HPP
#define MDGS_DISORDER_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdgs/lattice.hpp"
#include "mdgs/rng.hpp"

namespace mdgs {

struct DisorderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family { kGaussian, kExponential, kPareto };

// A weight law with continuous, strictly positive density on (beta, inf)
// and finite 4+delta moment. The three built-in families qualify
// (Pareto needs shape > 4).
class GoodDistribution {
 public:
  static GoodDistribution gaussian();
  static GoodDistribution exponential();
  static GoodDistribution pareto(double shape, double scale = 1.0);
  static GoodDistribution parse(const std::string& name, double shape = 5.0,
                                double scale = 1.0);

  Family family() const { return family_; }
  double pareto_shape() const { return shape_; }
  double pareto_scale() const { return scale_; }

  // Lower bound of the support (-inf for Gaussian, 0 for exponential,
  // the scale for Pareto).
  double lower_bound() const;
  double density(double x) const;
  std::string name() const;

  // Inverse/transform sampling from one counter-indexed draw.
  double sample(const RngStream& rng, std::uint64_t index) const;

 private:
  GoodDistribution(Family f, double shape, double scale)
      : family_(f), shape_(shape), scale_(scale) {}
  Family family_;
  double shape_;
  double scale_;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::uint32_t sample_index = 0;
  std::string distribution;
  std::vector<std::string> transforms;
};

// The disorder J : Sigma -> R, one value per canonical Sigma index.
class WeightAssignment {
 public:
  WeightAssignment(std::shared_ptr<const Lattice> lattice, std::vector<double> values,
                   Provenance provenance);

  const Lattice& lattice() const { return *lattice_; }
  const std::shared_ptr<const Lattice>& lattice_ptr() const { return lattice_; }
  const Provenance& provenance() const { return provenance_; }

  double operator[](SigmaIndex x) const { return values_[x]; }
  double vertex_weight(std::int32_t v) const { return values_[v]; }
  double edge_weight(std::int32_t e) const { return values_[lattice_->edge_sigma(e)]; }
  std::span<const double> values() const { return values_; }

  // Scale used by the solver's tie tolerance.
  double magnitude() const;

  WeightAssignment with_values(std::vector<double> values, const std::string& transform) const;
  WeightAssignment with_value(SigmaIndex x, double value, const std::string& transform) const;

  // CSV "sigma_index,value" with 17 significant digits.
  void write_csv(std::ostream& out) const;
  static WeightAssignment read_csv(std::istream& in, std::shared_ptr<const Lattice> lattice);

 private:
  std::shared_ptr<const Lattice> lattice_;
  std::vector<double> values_;
  Provenance provenance_;
};

// I.i.d. draws, one per Sigma element, pure in (seed, sample_index, Sigma index).
WeightAssignment sample(std::shared_ptr<const Lattice> lattice, const GoodDistribution& dist,
                        std::uint64_t seed, std::uint32_t sample_index = 0);
// Second independent table from the same (seed, sample) pair.
WeightAssignment sample_prime(std::shared_ptr<const Lattice> lattice, const GoodDistribution& dist,
                              std::uint64_t seed, std::uint32_t sample_index = 0);

// Independently per x in Sigma, output J'_x with probability p, else J_x.
WeightAssignment resample_p(const WeightAssignment& j, const WeightAssignment& j_prime, double p,
                            std::uint64_t seed, std::uint32_t sample_index = 0);

// Adds lambda to J_u and to J_e for every e in E_u; the ground state is
// invariant under this map.
WeightAssignment gauge_transform(const WeightAssignment& j, std::int32_t u, double lambda);

// Computes z_S = max over (u,v) in E_S of |J_uv - J_u - J_v| plus an
// independent uniform(0,1) draw, and adds z_S to every edge of E_S.
// Afterwards every edge of E_S is inaccessible.
std::pair<WeightAssignment, double> make_inaccessible(const WeightAssignment& j,
                                                      std::span<const std::int32_t> edges,
                                                      std::uint64_t seed,
                                                      std::uint32_t sample_index = 0);

// The perturbation around a designated origin on a simple vertex path:
// z_S on the edges adjacent to the path except those adjacent to the origin,
// then +eps/2 on every edge incident to the origin. Drops the origin's
// optimality by exactly eps/2.
WeightAssignment perturb_origin_scheme(const WeightAssignment& j,
                                       std::span<const std::int32_t> path_vertices,
                                       std::int32_t origin, double eps, std::uint64_t seed,
                                       std::uint32_t sample_index = 0);

// Edges incident to the path's vertices, excluding the path's own edges and
// every edge incident to `origin` (pass origin = -1 to keep those).
std::vector<std::int32_t> off_path_edges(const Lattice& lattice,
                                         std::span<const std::int32_t> path_vertices,
                                         std::int32_t origin);

// C(z, alpha) = integral over (beta, inf) of g_z(x)^alpha p(x) dx with
// g_z(x) = p(x - z)/p(x). Analytic for the Gaussian family, adaptive
// quadrature otherwise. Throws DisorderError on a divergent integral.
double goodness_constant(const GoodDistribution& dist, double z, double alpha);
// Always-quadrature route, kept independent of the analytic fast path.
double goodness_constant_quadrature(const GoodDistribution& dist, double z, double alpha);

}  // namespace mdgs

#endif
