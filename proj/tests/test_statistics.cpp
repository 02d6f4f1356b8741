#include <doctest.h>

#include <cmath>
#include <vector>

#include "mdgs/rng.hpp"
#include "mdgs/statistics.hpp"

using namespace mdgs;

TEST_CASE("summary statistics") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(xs);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(summarize(std::vector<double>{}).count == 0);
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-6));
  CHECK(normal_cdf(-8.0) < 1e-14);
}

TEST_CASE("kolmogorov distribution") {
  CHECK(kolmogorov_q(0.0) == 1.0);
  CHECK(kolmogorov_q(0.5) == doctest::Approx(0.9639).epsilon(1e-3));
  CHECK(kolmogorov_q(1.0) == doctest::Approx(0.2700).epsilon(1e-3));
  CHECK(kolmogorov_q(4.0) < 1e-10);
}

TEST_CASE("ks statistic against exact distributions") {
  const RngStream rng(5150, Stream::kSynthetic, 0);
  const int n = 2000;
  std::vector<double> normals(n), uniforms(n);
  for (int i = 0; i < n; ++i) {
    normals[i] = rng.normal(i);
    uniforms[i] = rng.uniform(std::uint64_t(n) + i);
  }
  CHECK(ks_p_value(ks_statistic_normal(normals), n) > 1e-3);
  CHECK(ks_p_value(ks_statistic_uniform(uniforms), n) > 1e-3);
  // a blatantly non-normal sample is rejected
  std::vector<double> shifted(normals);
  for (double& x : shifted) x += 1.0;
  CHECK(ks_p_value(ks_statistic_normal(shifted), n) < 1e-6);
}

TEST_CASE("null p-values are roughly uniform") {
  // repeated standard-normal samples: no excess of tiny p-values
  const int reps = 100, n = 400;
  int tiny = 0;
  for (int r = 0; r < reps; ++r) {
    const RngStream rng(8000 + r, Stream::kSynthetic, 0);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = rng.normal(i);
    if (ks_p_value(ks_statistic_normal(xs), n) < 0.01) ++tiny;
  }
  CHECK(tiny <= 5);
}

TEST_CASE("two-sample ks") {
  std::vector<double> a{1, 2, 3, 4, 5}, b{1.1, 2.1, 2.9, 4.2, 5.1};
  CHECK(ks_two_sample_statistic(a, a) == doctest::Approx(0.0));
  CHECK(ks_two_sample_statistic(a, b) <= 0.2 + 1e-12);
  std::vector<double> lo{0, 0.1, 0.2}, hi{10, 11, 12};
  CHECK(ks_two_sample_statistic(lo, hi) == doctest::Approx(1.0));
  CHECK(ks_two_sample_p_value(1.0, 3, 3) < 0.2);
}

TEST_CASE("bootstrap variance CI") {
  const RngStream rng(99, Stream::kSynthetic, 0);
  std::vector<double> xs(500);
  for (int i = 0; i < 500; ++i) xs[i] = 2.0 * rng.normal(i);
  const auto s = summarize(xs);
  const auto [lo, hi] = bootstrap_variance_ci(xs, 500, 1234);
  CHECK(lo < s.variance);
  CHECK(hi > s.variance);
  CHECK(lo > 0.5 * s.variance);
  CHECK(hi < 2.0 * s.variance);
  // deterministic
  const auto again = bootstrap_variance_ci(xs, 500, 1234);
  CHECK(again.first == lo);
  CHECK(again.second == hi);
}
