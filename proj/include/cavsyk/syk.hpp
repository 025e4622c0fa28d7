#pragma once

#include <cstdint>

#include "cavsyk/couplings.hpp"

namespace cavsyk {

// Reference SYK couplings with the 1/(2N)^{3/2} prefactor applied.
// Scalar = double draws the real variant, Scalar = cplx the complex one.
template <typename Scalar>
CouplingTensor<Scalar> sample_syk_gaussian(int N, double J, std::uint64_t seed);

// Truncation point a = gamma tan(f pi/2) of the truncated Cauchy law.
double cauchy_cutoff(double gamma, double f);

// Inverse CDF of the truncated Cauchy law on [-a, a], u in [0, 1].
double truncated_cauchy_quantile(double u, double gamma, double a);
double truncated_cauchy_cdf(double x, double gamma, double a);

CouplingTensor<double> sample_syk_cauchy(int N, double gamma, double f, std::uint64_t seed);

}  // namespace cavsyk
