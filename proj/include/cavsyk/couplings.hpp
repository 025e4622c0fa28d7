#pragma once

#include <string>

#include "cavsyk/disorder.hpp"
#include "cavsyk/grid.hpp"

namespace cavsyk {

struct DriveProfile {
  enum class Kind { uniform, plane_wave };
  Kind kind = Kind::uniform;
  double kd = 0;  // k_d x0 for the plane-wave drive exp(i k_d x)

  static DriveProfile uniform() { return {}; }
  static DriveProfile plane_wave(double kd) { return {Kind::plane_wave, kd}; }
};

// Ordered pair index for i > j: p = i(i-1)/2 + j.
inline Index pair_index(int i, int j) { return Index(i) * (i - 1) / 2 + j; }
inline Index pair_count(int N) { return Index(N) * (N - 1) / 2; }

// I~[i][j][m] stored as an (N*N) x (M+1) matrix, row i*N + j.
template <typename Scalar>
struct IntegralTable {
  int N = 0;
  int M = 0;
  DriveProfile drive;
  MatrixX<Scalar> data;
  std::vector<int> m_sigma;

  Scalar operator()(int i, int j, int m) const { return data(Index(i) * N + j, m); }
};

template <typename Scalar>
IntegralTable<Scalar> compute_integrals(const GridSpec& grid, const TrapModeSet& trap,
                                        const CavityModeSet& cavity,
                                        const DetuningRatioField& detuning,
                                        const DriveProfile& drive);

// Antisymmetrized two-body amplitudes. Independent entries live in a P x P
// pair-space matrix K(p(i1,i2), p(j1,j2)) with i1 > i2 and j1 > j2.
template <typename Scalar>
struct CouplingTensor {
  int N = 0;
  MatrixX<Scalar> pairs;
  double delta_omega_tilde = 0;
  double zeta = 0;
  int M = -1;
  double J = 1;  // scale divided out by normalize_couplings

  Scalar operator()(int i1, int i2, int j1, int j2) const {
    if (i1 == i2 || j1 == j2) return Scalar(0);
    double sign = 1;
    if (i1 < i2) std::swap(i1, i2), sign = -sign;
    if (j1 < j2) std::swap(j1, j2), sign = -sign;
    return sign * pairs(pair_index(i1, i2), pair_index(j1, j2));
  }
};

template <typename Scalar>
CouplingTensor<Scalar> compute_coupling_tensor(const IntegralTable<Scalar>& table,
                                               double delta_omega_tilde, int M);

template <typename Scalar>
CouplingTensor<Scalar> normalize_couplings(const CouplingTensor<Scalar>& tensor);

// Complex sample variance (ddof = 1) of the independent entries.
template <typename Scalar>
double independent_variance(const CouplingTensor<Scalar>& tensor);

// Independent entries as reals; complex tensors contribute real and imaginary parts.
template <typename Scalar>
std::vector<double> independent_samples(const CouplingTensor<Scalar>& tensor);

struct PseudoVoigtFit {
  double rho = 0;
  double sigma = 0;
  double xbar = 0;
  double fit_error = 0;      // RMS density residual at the chosen binning
  double rho_binning = 0;    // max |delta rho| over half and double bin width
  double bin_width = 0;
  int bins = 0;
};

double pseudo_voigt_density(double x, double rho, double sigma, double xbar);
double freedman_diaconis_width(std::vector<double> samples);

// Histogram density over [lo, lo + bins*width); returns bin centres and densities.
std::pair<VectorXd, VectorXd> density_histogram(const std::vector<double>& samples, double lo,
                                                double width, int bins);

PseudoVoigtFit fit_pseudo_voigt(const std::vector<double>& samples);

}  // namespace cavsyk
