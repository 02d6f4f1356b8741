#ifndef MDGS_STATISTICS_HPP
#define MDGS_STATISTICS_HPP

#include <cstdint>
#include <span>
#include <utility>

namespace mdgs {

struct Summary {
  double mean = 0.0;
  double variance = 0.0;   // n-1 normalization
  double std_error = 0.0;  // sd / sqrt(n)
  std::size_t count = 0;
};

Summary summarize(std::span<const double> xs);

double normal_cdf(double x);

// One-sample KS statistic of `xs` against the standard normal CDF.
double ks_statistic_normal(std::span<const double> xs);
// Against the uniform CDF on [0,1].
double ks_statistic_uniform(std::span<const double> xs);

// Complement of the asymptotic Kolmogorov distribution,
// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

// Asymptotic p-value with Stephens' small-sample correction.
double ks_p_value(double d, std::size_t n);

// Two-sample KS statistic and its asymptotic p-value.
double ks_two_sample_statistic(std::span<const double> a, std::span<const double> b);
double ks_two_sample_p_value(double d, std::size_t na, std::size_t nb);

// Percentile bootstrap CI for the sample variance.
std::pair<double, double> bootstrap_variance_ci(std::span<const double> xs, int resamples,
                                                std::uint64_t seed, double level = 0.95);

}  // namespace mdgs

#endif
