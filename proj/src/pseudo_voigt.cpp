#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cavsyk/couplings.hpp"
#include "cavsyk/errors.hpp"

namespace cavsyk {

double pseudo_voigt_density(double x, double rho, double sigma, double xbar) {
  const double pi = std::numbers::pi;
  double d = x - xbar;
  double gamma = std::sqrt(2 * std::log(2.0)) * sigma;  // Cauchy half width, shared FWHM
  double cauchy = gamma / (pi * (d * d + gamma * gamma));
  double gauss = std::exp(-0.5 * d * d / (sigma * sigma)) / (sigma * std::sqrt(2 * pi));
  return rho * cauchy + (1 - rho) * gauss;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  double pos = q * double(sorted.size() - 1);
  auto lo = std::size_t(std::floor(pos));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - double(lo)) * (sorted[hi] - sorted[lo]);
}

// Parameters (theta, log sigma, xbar) with rho = sin^2 theta.
struct VoigtResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;

  const VectorXd* x;
  const VectorXd* y;

  int inputs() const { return 3; }
  int values() const { return int(x->size()); }

  int operator()(const VectorXd& p, VectorXd& r) const {
    double rho = std::pow(std::sin(p[0]), 2);
    double sigma = std::exp(p[1]);
    for (Index k = 0; k < x->size(); ++k)
      r[k] = pseudo_voigt_density((*x)[k], rho, sigma, p[2]) - (*y)[k];
    return 0;
  }
};

struct SingleFit {
  double rho, sigma, xbar, rms;
  bool ok;
};

SingleFit fit_at_width(const std::vector<double>& sorted, double width) {
  double lo = sorted.front();
  int bins = std::max(1, int(std::ceil((sorted.back() - lo) / width)));
  auto [centres, density] = density_histogram(sorted, lo, width, bins);
  double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  double median = quantile(sorted, 0.5);

  VoigtResidual f{&centres, &density};
  Eigen::NumericalDiff<VoigtResidual> nd(f);
  SingleFit best{0, 0, 0, std::numeric_limits<double>::infinity(), false};
  for (double rho0 : {0.1, 0.5, 0.9}) {
    VectorXd p(3);
    p << std::asin(std::sqrt(rho0)), std::log(std::max(iqr, 1e-300) / 1.349), median;
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<VoigtResidual>> lm(nd);
    auto status = lm.minimize(p);
    bool ok = status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters &&
              status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation;
    VectorXd r(centres.size());
    f(p, r);
    double rms = std::sqrt(r.squaredNorm() / double(r.size()));
    if (ok && std::isfinite(rms) && rms < best.rms)
      best = {std::pow(std::sin(p[0]), 2), std::exp(p[1]), p[2], rms, true};
  }
  return best;
}

}  // namespace

double freedman_diaconis_width(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  double iqr = quantile(samples, 0.75) - quantile(samples, 0.25);
  return 2 * iqr / std::cbrt(double(samples.size()));
}

std::pair<VectorXd, VectorXd> density_histogram(const std::vector<double>& samples, double lo,
                                                double width, int bins) {
  VectorXd centres(bins), counts = VectorXd::Zero(bins);
  for (int b = 0; b < bins; ++b) centres[b] = lo + (b + 0.5) * width;
  for (double s : samples) {
    auto b = Index(std::floor((s - lo) / width));
    if (b == bins) b = bins - 1;  // right edge belongs to the last bin
    if (b >= 0 && b < bins) counts[b] += 1;
  }
  return {centres, counts / (double(samples.size()) * width)};
}

PseudoVoigtFit fit_pseudo_voigt(const std::vector<double>& samples) {
  if (samples.size() < 100) throw InvalidArgument("pseudo-Voigt fit needs at least 100 samples");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  double width = freedman_diaconis_width(sorted);
  if (!(width > 0)) throw DiagnosticError("samples have zero interquartile range", 0.0);

  SingleFit main = fit_at_width(sorted, width);
  if (!main.ok) throw DiagnosticError("pseudo-Voigt fit did not converge", main.rms);
  PseudoVoigtFit out;
  out.rho = main.rho;
  out.sigma = main.sigma;
  out.xbar = main.xbar;
  out.fit_error = main.rms;
  out.bin_width = width;
  out.bins = std::max(1, int(std::ceil((sorted.back() - sorted.front()) / width)));
  for (double scale : {0.5, 2.0}) {
    SingleFit alt = fit_at_width(sorted, width * scale);
    if (alt.ok) out.rho_binning = std::max(out.rho_binning, std::abs(alt.rho - main.rho));
  }
  return out;
}

}  // namespace cavsyk
