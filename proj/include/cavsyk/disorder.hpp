#pragma once

#include <cstdint>

#include "cavsyk/grid.hpp"

namespace cavsyk {

// First zero of (2 J1(x)/x)^2 - 1/e; sets the 1/e radius of the speckle autocorrelation.
inline constexpr double kAiryInvE = 1.9149920498475776;

struct SpeckleField {
  ScalarField intensity;
  double mean_intensity = 0;
  double grains_per_linear_dim = 0;
  std::uint64_t seed = 0;
};

// Pupil radius (angular wavenumber) giving a 1/e autocorrelation diameter of L/grains.
double pupil_radius(const GridSpec& grid, double grains_per_linear_dim);

SpeckleField generate_speckle(const GridSpec& grid, double grains_per_linear_dim,
                              std::uint64_t seed);

struct DetuningRatioField {
  ScalarField ratio;  // Delta_da(r)/Delta_da >= 1
  double strength = 1;
};

DetuningRatioField detuning_ratio(const SpeckleField& speckle, double strength = 1.0);

}  // namespace cavsyk
