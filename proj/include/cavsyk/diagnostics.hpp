#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cavsyk/fock.hpp"

namespace cavsyk {

struct TimeGrid {
  VectorXd t;
  std::string scheme;  // "log" or "linear"
};

TimeGrid log_time_grid(double t_min, double t_max, int per_decade);
TimeGrid linear_time_grid(double t_min, double t_max, int count);

struct OtocSeries {
  VectorXd t;
  VectorXcd F;
  int i = 0, j = 1;
  double beta = 0;
};

// F(t) = tr(W(t) V W(t) V)/D at beta = 0 with W = 2n_i - 1, V = 2n_j - 1 and
// W(t) = e^{-iHt} W e^{iHt}. The t = 0 entry is evaluated exactly in the occupation basis.
template <typename Scalar>
OtocSeries compute_otoc(const Spectrum<Scalar>& spectrum, int i, int j, const TimeGrid& times);

// First time where y drops to 1/e, linearly interpolated between grid points.
double extract_decay_time(const VectorXd& t, const VectorXd& y);

struct SffSeries {
  VectorXd t;
  VectorXd S;
  double beta = 0;
  Index D = 0;
};

// Affine map to the band centre with mean central spacing pi/D, so t_H = 2D.
VectorXd unfold_spectrum(const VectorXd& energies);

SffSeries compute_sff(const VectorXd& energies, const TimeGrid& times);

// Centred moving average over `window` points (window clipped at the ends).
VectorXd moving_average(const VectorXd& y, int window);

struct RampOptions {
  double threshold = 0.01;
  int smoothing = 1;
  // Fit windows; unset values use the automated defaults.
  std::optional<double> ramp_lo, ramp_hi, plateau_lo;
};

struct RampResult {
  double t_r = 0;
  double t_H = 0;
  double t_dip = 0;
  double ramp_slope = 0, ramp_intercept = 0;
  double plateau_slope = 0, plateau_intercept = 0;
  double ramp_lo = 0, ramp_hi = 0, plateau_lo = 0;
};

RampResult extract_ramp_and_heisenberg(const SffSeries& series, const RampOptions& options = {});

SffSeries rescale_to_heisenberg(const SffSeries& series, double t_H_own, double t_H_target);

// Locally unfolded, unit-mean nearest-neighbour spacings of the central spectrum.
struct Spacings {
  std::vector<double> s;
  int excluded_degenerate = 0;
};

Spacings unfolded_spacings(const VectorXd& energies, double keep_fraction = 0.8,
                           int window = 21);

double wigner_cdf(double s);
double poisson_cdf(double s);
double wigner_density(double s);

// Kolmogorov-Smirnov distance of samples to a continuous CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf);

struct SpacingStats {
  Spacings spacings;
  VectorXd centres, density;
  double ks_goe = 0, ks_poisson = 0;
};

SpacingStats spacing_statistics(const std::vector<double>& s, double bin_width = 0.1,
                                double s_max = 4.0);
SpacingStats level_spacing_distribution(const VectorXd& energies, double keep_fraction = 0.8,
                                        int window = 21);

struct PowerLaw {
  double alpha = 0;
  double alpha_stderr = 0;
  double log_prefactor = 0;
};

// Least squares of log y = c - alpha log x.
PowerLaw fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// |t_r - t_r_ref| / t_r_ref
double ramp_error(double t_r, double t_r_ref);

template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double d = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    double F = cdf(samples[k]);
    d = std::max({d, std::abs(double(k + 1) / n - F), std::abs(F - double(k) / n)});
  }
  return d;
}

}  // namespace cavsyk
