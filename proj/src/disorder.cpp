#include "cavsyk/disorder.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cavsyk/errors.hpp"

namespace cavsyk {

double pupil_radius(const GridSpec& grid, double grains_per_linear_dim) {
  double radius = 0.5 * grid.L / grains_per_linear_dim;
  return kAiryInvE / radius;
}

namespace {

// Angular frequencies of an n-point FFT with spacing h, in FFT output order.
VectorXd fft_frequencies(int n, double h) {
  VectorXd k(n);
  for (int j = 0; j < n; ++j) {
    int f = j <= (n - 1) / 2 ? j : j - n;
    k[j] = 2 * std::numbers::pi * f / (n * h);
  }
  return k;
}

void inverse_fft_2d(ComplexField& a) {
  Eigen::FFT<double> fft;
  VectorXcd in, out;
  for (Index c = 0; c < a.cols(); ++c) {
    in = a.col(c);
    fft.inv(out, in);
    a.col(c) = out;
  }
  for (Index r = 0; r < a.rows(); ++r) {
    in = a.row(r).transpose();
    fft.inv(out, in);
    a.row(r) = out.transpose();
  }
}

}  // namespace

SpeckleField generate_speckle(const GridSpec& grid, double grains_per_linear_dim,
                              std::uint64_t seed) {
  if (!(grains_per_linear_dim > 0)) throw InvalidArgument("grain count must be positive");
  double grain = grid.L / grains_per_linear_dim;
  double K = pupil_radius(grid, grains_per_linear_dim);
  if (grain < 2 * grid.h || K >= std::numbers::pi / grid.h) {
    std::ostringstream os;
    os << grains_per_linear_dim << " grains across L=" << grid.L
       << " are not resolved by spacing " << grid.h;
    throw ResolutionError(os.str());
  }

  const int n = grid.nx;
  VectorXd k = fft_frequencies(n, grid.h);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  ComplexField a = ComplexField::Zero(n, n);
  // Phases are drawn for every pupil pixel in column-major order.
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (k[r] * k[r] + k[c] * k[c] <= K * K) a(r, c) = std::polar(1.0, phase(rng));
  inverse_fft_2d(a);

  SpeckleField s;
  s.intensity = a.cwiseAbs2();
  s.mean_intensity = s.intensity.mean();
  s.grains_per_linear_dim = grains_per_linear_dim;
  s.seed = seed;
  return s;
}

DetuningRatioField detuning_ratio(const SpeckleField& speckle, double strength) {
  double mean = speckle.intensity.mean();
  if (!(mean > 0)) throw DegenerateInputError("speckle has zero mean intensity");
  if (!(strength >= 0)) throw InvalidArgument("disorder strength must be non-negative");
  DetuningRatioField d;
  d.strength = strength;
  d.ratio = (1.0 + strength * speckle.intensity.array() / mean).matrix();
  return d;
}

}  // namespace cavsyk
