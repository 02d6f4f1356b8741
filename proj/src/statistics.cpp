#include "mdgs/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mdgs/rng.hpp"

namespace mdgs {

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / xs.size();
  if (xs.size() < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.variance = ss / (xs.size() - 1);
  s.std_error = std::sqrt(s.variance / xs.size());
  return s;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

namespace {

template <typename Cdf>
double ks_statistic(std::span<const double> xs, Cdf cdf) {
  if (xs.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return d;
}

}  // namespace

double ks_statistic_normal(std::span<const double> xs) {
  return ks_statistic(xs, [](double x) { return normal_cdf(x); });
}

double ks_statistic_uniform(std::span<const double> xs) {
  return ks_statistic(xs, [](double x) { return std::clamp(x, 0.0, 1.0); });
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-14 * (std::abs(sum) + 1e-300)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / sa.size() - double(j) / sb.size()));
  }
  return d;
}

double ks_two_sample_p_value(double d, std::size_t na, std::size_t nb) {
  const double ne = static_cast<double>(na) * nb / (na + nb);
  const double sn = std::sqrt(ne);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

std::pair<double, double> bootstrap_variance_ci(std::span<const double> xs, int resamples,
                                                std::uint64_t seed, double level) {
  if (xs.size() < 2) throw std::invalid_argument("bootstrap_variance_ci: need >= 2 samples");
  const RngStream rng(seed, Stream::kBootstrap);
  const std::size_t n = xs.size();
  std::vector<double> vars(resamples);
  std::vector<double> draw(n);
  for (int b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(rng.uniform(std::uint64_t(b) * n + i) * n);
      draw[i] = xs[idx < n ? idx : n - 1];
    }
    vars[b] = summarize(draw).variance;
  }
  std::sort(vars.begin(), vars.end());
  const double q = (1.0 - level) / 2.0;
  auto pick = [&](double p) {
    auto idx = static_cast<std::size_t>(p * (resamples - 1));
    return vars[std::min(idx, vars.size() - 1)];
  };
  return {pick(q), pick(1.0 - q)};
}

}  // namespace mdgs
