#include "cavsyk/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cavsyk/errors.hpp"

namespace cavsyk {

TimeGrid log_time_grid(double t_min, double t_max, int per_decade) {
  if (!(t_min > 0 && t_max > t_min) || per_decade < 1)
    throw InvalidArgument("log time grid needs 0 < t_min < t_max and per_decade >= 1");
  double decades = std::log10(t_max / t_min);
  auto count = Index(std::ceil(decades * per_decade - 1e-9)) + 1;
  TimeGrid g{VectorXd(count), "log"};
  for (Index k = 0; k < count; ++k)
    g.t[k] = t_min * std::pow(10.0, double(k) / per_decade);
  return g;
}

TimeGrid linear_time_grid(double t_min, double t_max, int count) {
  if (!(t_max > t_min) || count < 2) throw InvalidArgument("linear time grid needs t_max > t_min");
  return {VectorXd::LinSpaced(count, t_min, t_max), "linear"};
}

namespace {

VectorXd number_sign_diagonal(const FockSector& basis, int mode) {
  VectorXd d(basis.dim());
  for (Index k = 0; k < basis.dim(); ++k) d[k] = (basis.states[k] >> mode & 1) ? 1.0 : -1.0;
  return d;
}

}  // namespace

template <typename Scalar>
OtocSeries compute_otoc(const Spectrum<Scalar>& spectrum, int i, int j, const TimeGrid& times) {
  if (!spectrum.has_vectors()) throw InvalidArgument("OTOC needs eigenvectors");
  const int N = spectrum.basis.N;
  if (i == j || i < 0 || j < 0 || i >= N || j >= N)
    throw InvalidArgument("OTOC needs two distinct modes inside the sector");
  const auto& U = spectrum.vectors;
  const Index D = U.rows();
  MatrixX<Scalar> Wt = U.adjoint() * number_sign_diagonal(spectrum.basis, i).asDiagonal() * U;
  MatrixX<Scalar> Vt = U.adjoint() * number_sign_diagonal(spectrum.basis, j).asDiagonal() * U;
  const VectorXd& E = spectrum.energies;

  OtocSeries out;
  out.t = times.t;
  out.F.resize(times.t.size());
  out.i = i;
  out.j = j;
  const VectorXd w = number_sign_diagonal(spectrum.basis, i);
  const VectorXd v = number_sign_diagonal(spectrum.basis, j);
  MatrixXcd B(D, D);
  for (Index k = 0; k < times.t.size(); ++k) {
    const double t = times.t[k];
    if (t == 0) {
      // W and V are diagonal in the occupation basis, so W V W V is evaluated there exactly.
      out.F[k] = (w.array() * v.array() * w.array() * v.array()).sum() / double(D);
      continue;
    }
    // B = W~ diag(e^{iEt}) V~, F = sum_ac p_a p_c B_ac B_ca / D with p = e^{-iEt}.
    if constexpr (is_complex_v<Scalar>) {
      VectorXcd phase = (cplx(0, 1) * t * E.array()).exp().matrix();
      B.noalias() = Wt * phase.asDiagonal() * Vt;
    } else {
      VectorXd c = (t * E.array()).cos().matrix();
      VectorXd s = (t * E.array()).sin().matrix();
      B.real().noalias() = Wt * c.asDiagonal() * Vt;
      B.imag().noalias() = Wt * s.asDiagonal() * Vt;
    }
    VectorXcd p = (cplx(0, -1) * t * E.array()).exp().matrix();
    cplx acc = 0;
    for (Index c = 0; c < D; ++c) {
      cplx row = 0;
      for (Index a = 0; a < D; ++a) row += p[a] * B(a, c) * B(c, a);
      acc += row * p[c];
    }
    out.F[k] = acc / double(D);
  }
  return out;
}

template OtocSeries compute_otoc<double>(const Spectrum<double>&, int, int, const TimeGrid&);
template OtocSeries compute_otoc<cplx>(const Spectrum<cplx>&, int, int, const TimeGrid&);

double extract_decay_time(const VectorXd& t, const VectorXd& y) {
  const double level = std::exp(-1.0);
  if (t.size() != y.size() || t.size() < 2) throw InvalidArgument("decay series malformed");
  if (y[0] <= level) throw ExtractionError("series starts at or below 1/e");
  for (Index k = 0; k + 1 < t.size(); ++k) {
    if (y[k] > level && y[k + 1] <= level)
      return t[k] + (y[k] - level) * (t[k + 1] - t[k]) / (y[k] - y[k + 1]);
  }
  std::ostringstream os;
  os << "series never reaches 1/e; minimum " << y.minCoeff();
  throw ExtractionError(os.str());
}

VectorXd unfold_spectrum(const VectorXd& energies) {
  VectorXd E = energies;
  std::sort(E.data(), E.data() + E.size());
  const Index n = E.size();
  if (n < 2) throw DegenerateInputError("unfolding needs at least two levels");
  double median = n % 2 ? E[n / 2] : 0.5 * (E[n / 2 - 1] + E[n / 2]);
  auto lo = Index(0.4 * double(n)), hi = Index(0.6 * double(n));
  if (hi <= lo) lo = 0, hi = n - 1;
  double spacing = (E[hi] - E[lo]) / double(hi - lo);
  if (!(spacing > 0)) throw DegenerateInputError("central levels are degenerate");
  return ((E.array() - median) * (std::numbers::pi / double(n)) / spacing).matrix();
}

SffSeries compute_sff(const VectorXd& energies, const TimeGrid& times) {
  SffSeries out;
  out.t = times.t;
  out.D = energies.size();
  out.S.resize(times.t.size());
  const double D = double(energies.size());
  for (Index k = 0; k < times.t.size(); ++k) {
    double c = (times.t[k] * energies.array()).cos().sum();
    double s = (times.t[k] * energies.array()).sin().sum();
    out.S[k] = (c * c + s * s) / (D * D);
  }
  return out;
}

VectorXd moving_average(const VectorXd& y, int window) {
  if (window <= 1) return y;
  const Index half = window / 2, n = y.size();
  VectorXd out(n);
  for (Index k = 0; k < n; ++k) {
    Index a = std::max<Index>(0, k - half), b = std::min<Index>(n - 1, k + half);
    out[k] = y.segment(a, b - a + 1).mean();
  }
  return out;
}

namespace {

// Least squares y = a + b t over mask; returns (a, b).
std::pair<double, double> line_fit(const VectorXd& t, const VectorXd& y, double lo, double hi) {
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (Index k = 0; k < t.size(); ++k) {
    if (t[k] < lo || t[k] > hi) continue;
    n += 1, st += t[k], sy += y[k], stt += t[k] * t[k], sty += t[k] * y[k];
  }
  double det = n * stt - st * st;
  if (n < 2 || !(det > 0)) {
    std::ostringstream os;
    os << "fit window [" << lo << ", " << hi << "] holds " << n << " points";
    throw ExtractionError(os.str());
  }
  double b = (n * sty - st * sy) / det;
  return {(sy - b * st) / n, b};
}

double first_below(const VectorXd& t, const VectorXd& y, Index from, double a, double b,
                   double threshold, const char* what) {
  for (Index k = from + 1; k < t.size(); ++k) {
    double f = a + b * t[k];
    if (std::abs(y[k] - f) < threshold * std::abs(f)) return t[k];
  }
  throw ExtractionError(std::string(what) + " deviation never falls below threshold");
}

}  // namespace

RampResult extract_ramp_and_heisenberg(const SffSeries& series, const RampOptions& options) {
  const VectorXd& t = series.t;
  if (t.size() < 4) throw InvalidArgument("SFF series too short");
  VectorXd S = moving_average(series.S, options.smoothing);
  Index kdip;
  S.minCoeff(&kdip);

  RampResult r;
  r.t_dip = t[kdip];
  r.plateau_lo = options.plateau_lo.value_or(t[t.size() - 1] / 10);
  std::tie(r.plateau_intercept, r.plateau_slope) = line_fit(t, S, r.plateau_lo, t[t.size() - 1]);
  r.t_H = first_below(t, S, kdip, r.plateau_intercept, r.plateau_slope, options.threshold,
                      "plateau");

  r.ramp_lo = options.ramp_lo.value_or(2 * r.t_dip);
  r.ramp_hi = options.ramp_hi.value_or(double(series.D));
  std::tie(r.ramp_intercept, r.ramp_slope) = line_fit(t, S, r.ramp_lo, r.ramp_hi);
  r.t_r = first_below(t, S, kdip, r.ramp_intercept, r.ramp_slope, options.threshold, "ramp");
  return r;
}

SffSeries rescale_to_heisenberg(const SffSeries& series, double t_H_own, double t_H_target) {
  if (!(t_H_own > 0) || !(t_H_target > 0))
    throw InvalidArgument("rescaling needs positive Heisenberg times");
  SffSeries out = series;
  out.t *= t_H_target / t_H_own;
  return out;
}

Spacings unfolded_spacings(const VectorXd& energies, double keep_fraction, int window) {
  if (energies.size() < 50) throw InvalidArgument("level statistics need at least 50 levels");
  if (!(keep_fraction > 0 && keep_fraction <= 1)) throw InvalidArgument("keep_fraction in (0,1]");
  VectorXd E = energies;
  std::sort(E.data(), E.data() + E.size());
  const Index n = E.size();
  const double band = E[n - 1] - E[0];
  auto drop = Index(std::floor(double(n) * (1 - keep_fraction) / 2));

  Spacings out;
  std::vector<double> raw;
  for (Index k = drop; k + 1 < n - drop; ++k) {
    double d = E[k + 1] - E[k];
    if (d < 1e-12 * band)
      ++out.excluded_degenerate;
    else
      raw.push_back(d);
  }
  if (raw.empty()) throw DegenerateInputError("all spacings are degenerate");
  const auto m = Index(raw.size());
  const Index half = window / 2;
  std::vector<double> s(raw.size());
  double total = 0;
  for (Index k = 0; k < m; ++k) {
    Index a = std::max<Index>(0, k - half), b = std::min<Index>(m - 1, k + half);
    double local = 0;
    for (Index q = a; q <= b; ++q) local += raw[q];
    local /= double(b - a + 1);
    s[k] = raw[k] / local;
    total += s[k];
  }
  for (auto& v : s) v *= double(m) / total;
  out.s = std::move(s);
  return out;
}

double wigner_cdf(double s) { return s <= 0 ? 0 : 1 - std::exp(-std::numbers::pi * s * s / 4); }
double poisson_cdf(double s) { return s <= 0 ? 0 : 1 - std::exp(-s); }
double wigner_density(double s) {
  return std::numbers::pi * s / 2 * std::exp(-std::numbers::pi * s * s / 4);
}

SpacingStats spacing_statistics(const std::vector<double>& s, double bin_width, double s_max) {
  SpacingStats st;
  st.spacings.s = s;
  auto bins = Index(std::ceil(s_max / bin_width));
  st.centres.resize(bins);
  st.density = VectorXd::Zero(bins);
  for (Index b = 0; b < bins; ++b) st.centres[b] = (b + 0.5) * bin_width;
  for (double v : s) {
    auto b = Index(v / bin_width);
    if (b < bins) st.density[b] += 1;
  }
  st.density /= double(s.size()) * bin_width;
  st.ks_goe = ks_distance(s, wigner_cdf);
  st.ks_poisson = ks_distance(s, poisson_cdf);
  return st;
}

SpacingStats level_spacing_distribution(const VectorXd& energies, double keep_fraction,
                                        int window) {
  Spacings sp = unfolded_spacings(energies, keep_fraction, window);
  SpacingStats st = spacing_statistics(sp.s);
  st.spacings.excluded_degenerate = sp.excluded_degenerate;
  return st;
}

PowerLaw fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidArgument("power law needs >= 3 points");
  const auto n = Index(x.size());
  VectorXd lx(n), ly(n);
  for (Index k = 0; k < n; ++k) {
    if (!(x[k] > 0 && y[k] > 0)) throw InvalidArgument("power law needs positive data");
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
  }
  double mx = lx.mean(), my = ly.mean();
  double sxx = (lx.array() - mx).square().sum();
  if (!(sxx > 0)) throw InvalidArgument("power law needs distinct abscissae");
  double slope = ((lx.array() - mx) * (ly.array() - my)).sum() / sxx;
  double icpt = my - slope * mx;
  double ssr = (ly.array() - icpt - slope * lx.array()).square().sum();
  PowerLaw p;
  p.alpha = -slope;
  p.log_prefactor = icpt;
  p.alpha_stderr = std::sqrt(ssr / double(n - 2) / sxx);
  return p;
}

double ramp_error(double t_r, double t_r_ref) { return std::abs(t_r - t_r_ref) / t_r_ref; }

}  // namespace cavsyk
