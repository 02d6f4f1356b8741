#include "mdgs/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace mdgs {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

}  // namespace

GoodDistribution GoodDistribution::gaussian() {
  return GoodDistribution(Family::kGaussian, 0.0, 0.0);
}

GoodDistribution GoodDistribution::exponential() {
  return GoodDistribution(Family::kExponential, 0.0, 0.0);
}

GoodDistribution GoodDistribution::pareto(double shape, double scale) {
  if (!(shape > 4.0)) {
    throw DisorderError("pareto shape must exceed 4 (finite 4+delta moment)");
  }
  if (!(scale > 0.0)) throw DisorderError("pareto scale must be positive");
  return GoodDistribution(Family::kPareto, shape, scale);
}

GoodDistribution GoodDistribution::parse(const std::string& name, double shape, double scale) {
  if (name == "gaussian") return gaussian();
  if (name == "exponential") return exponential();
  if (name == "pareto") return pareto(shape, scale);
  throw DisorderError("unknown distribution: " + name);
}

double GoodDistribution::lower_bound() const {
  switch (family_) {
    case Family::kGaussian: return -std::numeric_limits<double>::infinity();
    case Family::kExponential: return 0.0;
    case Family::kPareto: return scale_;
  }
  return 0.0;
}

double GoodDistribution::density(double x) const {
  switch (family_) {
    case Family::kGaussian:
      return kInvSqrt2Pi * std::exp(-0.5 * x * x);
    case Family::kExponential:
      return x > 0.0 ? std::exp(-x) : 0.0;
    case Family::kPareto:
      return x > scale_ ? shape_ * std::pow(scale_, shape_) * std::pow(x, -shape_ - 1.0) : 0.0;
  }
  return 0.0;
}

std::string GoodDistribution::name() const {
  switch (family_) {
    case Family::kGaussian: return "gaussian";
    case Family::kExponential: return "exponential";
    case Family::kPareto: {
      std::ostringstream os;
      os << "pareto(" << shape_ << "," << scale_ << ")";
      return os.str();
    }
  }
  return "?";
}

double GoodDistribution::sample(const RngStream& rng, std::uint64_t index) const {
  switch (family_) {
    case Family::kGaussian:
      return rng.normal(index);
    case Family::kExponential:
      return -std::log(rng.uniform_pos(index));
    case Family::kPareto:
      return scale_ * std::pow(rng.uniform_pos(index), -1.0 / shape_);
  }
  return 0.0;
}

WeightAssignment::WeightAssignment(std::shared_ptr<const Lattice> lattice,
                                   std::vector<double> values, Provenance provenance)
    : lattice_(std::move(lattice)), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (static_cast<std::int64_t>(values_.size()) != lattice_->sigma_size()) {
    throw DisorderError("weight table size does not match |Sigma|");
  }
}

double WeightAssignment::magnitude() const {
  double m = 1.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

WeightAssignment WeightAssignment::with_values(std::vector<double> values,
                                               const std::string& transform) const {
  Provenance prov = provenance_;
  prov.transforms.push_back(transform);
  return WeightAssignment(lattice_, std::move(values), std::move(prov));
}

WeightAssignment WeightAssignment::with_value(SigmaIndex x, double value,
                                              const std::string& transform) const {
  std::vector<double> values = values_;
  values[x] = value;
  return with_values(std::move(values), transform);
}

void WeightAssignment::write_csv(std::ostream& out) const {
  out << "# distribution=" << provenance_.distribution << " seed=" << provenance_.seed
      << " sample=" << provenance_.sample_index << " lattice=" << lattice_->spec_string() << "\n";
  out << "sigma_index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < values_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, values_[i]);
    out << buf;
  }
}

WeightAssignment WeightAssignment::read_csv(std::istream& in,
                                            std::shared_ptr<const Lattice> lattice) {
  std::vector<double> values(lattice->sigma_size(),
                             std::numeric_limits<double>::quiet_NaN());
  std::string line;
  std::size_t filled = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("sigma_index", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DisorderError("malformed weight CSV line: " + line);
    const long idx = std::stol(line.substr(0, comma));
    if (idx < 0 || idx >= lattice->sigma_size()) throw DisorderError("weight CSV index out of range");
    values[idx] = std::stod(line.substr(comma + 1));
    ++filled;
  }
  if (filled != values.size()) throw DisorderError("weight CSV does not cover Sigma");
  return WeightAssignment(std::move(lattice), std::move(values), Provenance{0, 0, "file", {}});
}

WeightAssignment sample(std::shared_ptr<const Lattice> lattice, const GoodDistribution& dist,
                        std::uint64_t seed, std::uint32_t sample_index) {
  const RngStream rng(seed, Stream::kWeights, sample_index);
  std::vector<double> values(lattice->sigma_size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = dist.sample(rng, i);
  }
  return WeightAssignment(std::move(lattice), std::move(values),
                          Provenance{seed, sample_index, dist.name(), {}});
}

WeightAssignment sample_prime(std::shared_ptr<const Lattice> lattice, const GoodDistribution& dist,
                              std::uint64_t seed, std::uint32_t sample_index) {
  const RngStream rng(seed, Stream::kWeightsPrime, sample_index);
  std::vector<double> values(lattice->sigma_size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = dist.sample(rng, i);
  }
  return WeightAssignment(std::move(lattice), std::move(values),
                          Provenance{seed, sample_index, dist.name(), {"prime"}});
}

WeightAssignment resample_p(const WeightAssignment& j, const WeightAssignment& j_prime, double p,
                            std::uint64_t seed, std::uint32_t sample_index) {
  if (j.lattice_ptr() != j_prime.lattice_ptr() &&
      j.lattice().sigma_size() != j_prime.lattice().sigma_size()) {
    throw DisorderError("resample_p: lattice mismatch");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw DisorderError("resample_p: p must lie in [0,1]");
  const RngStream coins(seed, Stream::kResampleCoins, sample_index);
  std::vector<double> values(j.values().begin(), j.values().end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (coins.uniform(i) < p) values[i] = j_prime[static_cast<SigmaIndex>(i)];
  }
  std::ostringstream tag;
  tag << "resample_p(p=" << p << ",seed=" << seed << ")";
  return j.with_values(std::move(values), tag.str());
}

WeightAssignment gauge_transform(const WeightAssignment& j, std::int32_t u, double lambda) {
  const Lattice& lat = j.lattice();
  lat.require_vertex(u);
  std::vector<double> values(j.values().begin(), j.values().end());
  values[u] += lambda;
  for (std::int32_t e : lat.incident_edges(u)) values[lat.edge_sigma(e)] += lambda;
  std::ostringstream tag;
  tag << "gauge(u=" << u << ",lambda=" << lambda << ")";
  return j.with_values(std::move(values), tag.str());
}

std::pair<WeightAssignment, double> make_inaccessible(const WeightAssignment& j,
                                                      std::span<const std::int32_t> edges,
                                                      std::uint64_t seed,
                                                      std::uint32_t sample_index) {
  const Lattice& lat = j.lattice();
  double gap = 0.0;
  for (std::int32_t e : edges) {
    if (e < 0 || e >= lat.edge_count()) throw DisorderError("make_inaccessible: not an edge id");
    const auto [u, v] = lat.edge_endpoints(e);
    gap = std::max(gap, std::abs(j.edge_weight(e) - j.vertex_weight(u) - j.vertex_weight(v)));
  }
  const double z = gap + RngStream(seed, Stream::kInaccessibleShift, sample_index).uniform(0);
  std::vector<double> values(j.values().begin(), j.values().end());
  for (std::int32_t e : edges) values[lat.edge_sigma(e)] += z;
  std::ostringstream tag;
  tag << "make_inaccessible(|E_S|=" << edges.size() << ",z=" << z << ")";
  return {j.with_values(std::move(values), tag.str()), z};
}

std::vector<std::int32_t> off_path_edges(const Lattice& lattice,
                                         std::span<const std::int32_t> path_vertices,
                                         std::int32_t origin) {
  std::vector<std::int32_t> path_edges;
  for (std::size_t i = 0; i + 1 < path_vertices.size(); ++i) {
    const auto e = lattice.edge_between(path_vertices[i], path_vertices[i + 1]);
    if (!e) throw DisorderError("off_path_edges: consecutive path vertices are not adjacent");
    path_edges.push_back(*e);
  }
  std::sort(path_edges.begin(), path_edges.end());
  std::vector<std::int32_t> out;
  for (std::int32_t v : path_vertices) {
    for (std::int32_t e : lattice.incident_edges(v)) {
      if (std::binary_search(path_edges.begin(), path_edges.end(), e)) continue;
      if (origin >= 0) {
        const auto [a, b] = lattice.edge_endpoints(e);
        if (a == origin || b == origin) continue;
      }
      out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

WeightAssignment perturb_origin_scheme(const WeightAssignment& j,
                                       std::span<const std::int32_t> path_vertices,
                                       std::int32_t origin, double eps, std::uint64_t seed,
                                       std::uint32_t sample_index) {
  const Lattice& lat = j.lattice();
  if (!(eps > 0.0)) throw DisorderError("perturb_origin_scheme: eps must be positive");
  if (std::find(path_vertices.begin(), path_vertices.end(), origin) == path_vertices.end()) {
    throw DisorderError("perturb_origin_scheme: origin not on the path");
  }
  const auto e_s = off_path_edges(lat, path_vertices, origin);
  auto [shifted, z] = make_inaccessible(j, e_s, seed, sample_index);
  std::vector<double> values(shifted.values().begin(), shifted.values().end());
  for (std::int32_t e : lat.incident_edges(origin)) values[lat.edge_sigma(e)] += eps / 2.0;
  std::ostringstream tag;
  tag << "perturb_origin(origin=" << origin << ",eps=" << eps << ",z=" << z << ")";
  return shifted.with_values(std::move(values), tag.str());
}

double goodness_constant_quadrature(const GoodDistribution& dist, double z, double alpha) {
  if (!(z >= 0.0)) throw DisorderError("goodness_constant: z must be >= 0");
  if (!(alpha > 1.0)) throw DisorderError("goodness_constant: alpha must exceed 1");
  if (z == 0.0) return 1.0;  // g_0 == 1 identically
  // g_z vanishes below beta + z, so the integrand lives on (beta + z, inf).
  const double beta = dist.lower_bound();
  const double lo = std::isinf(beta) ? -std::numeric_limits<double>::infinity() : beta + z;
  auto integrand = [&](double x) {
    const double px = dist.density(x);
    const double pz = dist.density(x - z);
    if (px <= 0.0 || pz <= 0.0) return 0.0;
    // g^alpha p = p(x-z)^alpha / p(x)^(alpha-1), in log form for stability.
    return std::exp(alpha * std::log(pz) - (alpha - 1.0) * std::log(px));
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  double value = 0.0;
  try {
    if (std::isinf(lo)) {
      // Two-sided: split at 0.
      boost::math::quadrature::exp_sinh<double> right;
      auto flipped = [&](double x) { return integrand(-x); };
      value = right.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(),
                              1e-10, &err, &l1) +
              right.integrate(flipped, 0.0, std::numeric_limits<double>::infinity(), 1e-10,
                              &err, &l1);
    } else {
      auto shifted = [&](double t) { return integrand(lo + t); };
      value = integrator.integrate(shifted, 0.0, std::numeric_limits<double>::infinity(),
                                   1e-10, &err, &l1);
    }
  } catch (const std::exception& ex) {
    throw DisorderError(std::string("goodness_constant: divergent or failed integral: ") +
                        ex.what());
  }
  if (!std::isfinite(value)) {
    throw DisorderError("goodness_constant: divergent integral");
  }
  return value;
}

double goodness_constant(const GoodDistribution& dist, double z, double alpha) {
  if (!(z >= 0.0)) throw DisorderError("goodness_constant: z must be >= 0");
  if (!(alpha > 1.0)) throw DisorderError("goodness_constant: alpha must exceed 1");
  if (z == 0.0) return 1.0;
  if (dist.family() == Family::kGaussian) {
    // g_z(x) = exp(zx - z^2/2) gives C(z,alpha) = exp(alpha(alpha-1) z^2 / 2).
    return std::exp(alpha * (alpha - 1.0) * z * z / 2.0);
  }
  return goodness_constant_quadrature(dist, z, alpha);
}

}  // namespace mdgs
