#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cavsyk/diagnostics.hpp"
#include "cavsyk/errors.hpp"
#include "cavsyk/syk.hpp"

using namespace cavsyk;

TEST_CASE("real Gaussian SYK couplings") {
  const int N = 10;
  const double pre = std::pow(2.0 * N, -1.5), J = 1.7;
  auto a = sample_syk_gaussian<double>(N, J, 4), b = sample_syk_gaussian<double>(N, J, 4);
  CHECK(a.pairs == b.pairs);
  CHECK(a.pairs == a.pairs.transpose());
  CHECK(a.pairs.rows() == pair_count(N));
  double sum = 0, sum2 = 0;
  int n = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = sample_syk_gaussian<double>(N, J, seed);
    for (Index r = 0; r < t.pairs.rows(); ++r)
      for (Index c = r; c < t.pairs.cols(); ++c) {
        double x = t.pairs(r, c) / (pre * J);
        sum += x, sum2 += x * x, ++n;
      }
  }
  CHECK(std::abs(sum / n) < 3 / std::sqrt(double(n)));
  CHECK(std::abs(sum2 / n - 1) < 3 * std::sqrt(2.0 / n));
  CHECK_THROWS_AS(sample_syk_gaussian<double>(1, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(sample_syk_gaussian<double>(4, 0.0, 0), InvalidArgument);
}

TEST_CASE("complex Gaussian SYK couplings") {
  const int N = 8;
  const double pre = std::pow(2.0 * N, -1.5);
  double re2 = 0, im2 = 0;
  int n = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto t = sample_syk_gaussian<cplx>(N, 1.0, seed);
    CHECK((t.pairs - t.pairs.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(t.pairs.diagonal().imag().isZero(0));
    for (Index r = 0; r < t.pairs.rows(); ++r)
      for (Index c = r + 1; c < t.pairs.cols(); ++c) {
        re2 += std::pow(t.pairs(r, c).real() / pre, 2);
        im2 += std::pow(t.pairs(r, c).imag() / pre, 2);
        ++n;
      }
  }
  CHECK(std::abs(re2 / n - 0.5) < 3 * 0.5 * std::sqrt(2.0 / n));
  CHECK(std::abs(im2 / n - 0.5) < 3 * 0.5 * std::sqrt(2.0 / n));
}

TEST_CASE("truncated Cauchy law") {
  const double gamma = 0.2, f = 0.975, a = cauchy_cutoff(gamma, f);
  CHECK(a == doctest::Approx(0.2 * std::tan(0.975 * std::numbers::pi / 2)));
  CHECK(a == doctest::Approx(5.0903).epsilon(1e-4));
  // Without truncation, [-a, a] holds a fraction f of the Cauchy mass.
  CHECK(2 * std::atan(a / gamma) / std::numbers::pi == doctest::Approx(f));
  CHECK(truncated_cauchy_quantile(0.5, gamma, a) == doctest::Approx(0).scale(1));
  CHECK(truncated_cauchy_quantile(1.0, gamma, a) == doctest::Approx(a));
  for (double u : {0.01, 0.3, 0.77})
    CHECK(truncated_cauchy_cdf(truncated_cauchy_quantile(u, gamma, a), gamma, a) == doctest::Approx(u));

  std::vector<double> v;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto t = sample_syk_cauchy(10, gamma, f, seed);
    CHECK(t.pairs == t.pairs.transpose());
    for (Index r = 0; r < t.pairs.rows(); ++r)
      for (Index c = r; c < t.pairs.cols(); ++c) v.push_back(t.pairs(r, c) * std::pow(20.0, 1.5));
  }
  double ks = ks_distance(v, [&](double x) { return truncated_cauchy_cdf(x, gamma, a); });
  CHECK(ks < 0.01);
  CHECK(*std::max_element(v.begin(), v.end()) <= a * (1 + 1e-12));
  CHECK_THROWS_AS(sample_syk_cauchy(4, 0.2, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(sample_syk_cauchy(4, -1.0, 0.5, 0), InvalidArgument);
}
