#include "cavsyk/syk.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cavsyk/errors.hpp"

namespace cavsyk {

namespace {

double prefactor(int N) { return std::pow(2.0 * N, -1.5); }

// Fills the upper triangle row-major with draw(diagonal?) and completes Hermitian.
template <typename Scalar, typename Draw>
CouplingTensor<Scalar> assemble(int N, Draw&& draw) {
  if (N < 2) throw InvalidArgument("SYK couplings need N >= 2");
  const Index P = pair_count(N);
  CouplingTensor<Scalar> t;
  t.N = N;
  t.pairs.resize(P, P);
  for (Index r = 0; r < P; ++r)
    for (Index c = r; c < P; ++c) {
      Scalar v = draw(r == c) * prefactor(N);
      t.pairs(r, c) = v;
      if constexpr (is_complex_v<Scalar>)
        t.pairs(c, r) = std::conj(v);
      else
        t.pairs(c, r) = v;
    }
  return t;
}

}  // namespace

template <typename Scalar>
CouplingTensor<Scalar> sample_syk_gaussian(int N, double J, std::uint64_t seed) {
  if (!(J > 0)) throw InvalidArgument("SYK scale J must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  return assemble<Scalar>(N, [&](bool diagonal) -> Scalar {
    if constexpr (is_complex_v<Scalar>) {
      if (diagonal) return Scalar(J * normal(rng), 0.0);
      double re = J * std::sqrt(0.5) * normal(rng);
      double im = J * std::sqrt(0.5) * normal(rng);
      return Scalar(re, im);
    } else {
      return J * normal(rng);
    }
  });
}

double cauchy_cutoff(double gamma, double f) { return gamma * std::tan(f * std::numbers::pi / 2); }

double truncated_cauchy_quantile(double u, double gamma, double a) {
  return gamma * std::tan((2 * u - 1) * std::atan(a / gamma));
}

double truncated_cauchy_cdf(double x, double gamma, double a) {
  if (x <= -a) return 0;
  if (x >= a) return 1;
  return 0.5 + std::atan(x / gamma) / (2 * std::atan(a / gamma));
}

CouplingTensor<double> sample_syk_cauchy(int N, double gamma, double f, std::uint64_t seed) {
  if (!(gamma > 0)) throw InvalidArgument("Cauchy width gamma must be positive");
  if (!(f > 0 && f < 1)) throw InvalidArgument("Cauchy mass fraction f must lie in (0, 1)");
  const double a = cauchy_cutoff(gamma, f);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  return assemble<double>(N, [&](bool) { return truncated_cauchy_quantile(uni(rng), gamma, a); });
}

template CouplingTensor<double> sample_syk_gaussian<double>(int, double, std::uint64_t);
template CouplingTensor<cplx> sample_syk_gaussian<cplx>(int, double, std::uint64_t);

}  // namespace cavsyk
