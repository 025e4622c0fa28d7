#include "cavsyk/grid.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cavsyk/errors.hpp"

namespace cavsyk {

GridSpec make_grid(double L, int nx) {
  if (!(L > 0)) throw InvalidArgument("grid diameter must be positive");
  if (nx < 2) throw InvalidArgument("grid needs at least 2 points per axis");
  GridSpec g;
  g.L = L;
  g.nx = nx;
  g.h = L / (nx - 1);
  g.x.resize(nx);
  // Fill symmetrically so x[k] == -x[nx-1-k] bit for bit.
  for (int k = 0; k < nx; ++k) {
    int j = nx - 1 - k;
    double v = 0.5 * (k - j) * g.h;
    g.x[k] = v;
  }
  return g;
}

ScalarField TrapModeSet::mode(int i, const GridSpec& grid) const {
  return Eigen::Map<const MatrixXd>(modes.col(i).data(), grid.nx, grid.nx);
}

namespace {

void fix_sign(Eigen::Ref<VectorXd> v) {
  double cut = 1e-8 * v.cwiseAbs().maxCoeff();
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > cut) {
      if (v[k] < 0) v = -v;
      return;
    }
  }
}

struct Level {
  double energy;
  int nx, ny;
};

}  // namespace

TrapModeSet solve_trap_modes(const GridSpec& grid, int N) {
  if (N < 1) throw InvalidArgument("need at least one trap mode");
  // The 2D operator is a Kronecker sum of two copies of this 1D operator.
  const int n = grid.nx;
  const double h2 = grid.h * grid.h;
  VectorXd diag = 1.0 / h2 + 0.5 * grid.x.array().square();
  VectorXd sub = VectorXd::Constant(n - 1, -0.5 / h2);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("1D trap eigensolve failed");

  int shells = 0;
  while ((shells + 1) * (shells + 2) / 2 < N) ++shells;
  // One extra shell so that discretization splitting cannot hide a lower level.
  int nmax = std::min(shells + 1, n - 1);

  std::vector<Level> levels;
  for (int a = 0; a <= nmax; ++a)
    for (int b = 0; a + b <= nmax; ++b)
      levels.push_back({es.eigenvalues()[a] + es.eigenvalues()[b], a, b});
  std::stable_sort(levels.begin(), levels.end(), [](const Level& p, const Level& q) {
    if (p.energy != q.energy) return p.energy < q.energy;
    return p.ny < q.ny;
  });
  if (int(levels.size()) < N) throw ResolutionError("grid too small for requested mode count");
  levels.resize(N);

  int top = 0;
  for (const auto& l : levels) top = std::max(top, l.nx + l.ny);
  double kmax = std::sqrt(2.0 * (top + 1));
  if (!(grid.h < std::numbers::pi / kmax)) {
    std::ostringstream os;
    os << "trap mode shell " << top << " needs h < " << std::numbers::pi / kmax << ", got "
       << grid.h;
    throw ResolutionError(os.str());
  }

  MatrixXd v1 = es.eigenvectors().leftCols(nmax + 1) / std::sqrt(grid.h);
  for (int a = 0; a <= nmax; ++a) fix_sign(v1.col(a));

  TrapModeSet set;
  set.N = N;
  set.modes.resize(grid.size(), N);
  set.energies.resize(N);
  for (int i = 0; i < N; ++i) {
    const auto& l = levels[i];
    double exact = l.nx + l.ny + 1.0;
    if (std::abs(l.energy - exact) / exact >= 1e-3) {
      std::ostringstream os;
      os << "trap mode (" << l.nx << "," << l.ny << ") energy " << l.energy
         << " misses " << exact << " by more than 0.1%; enlarge L or N_x";
      throw ResolutionError(os.str());
    }
    Eigen::Map<MatrixXd> f(set.modes.col(i).data(), n, n);
    f.noalias() = v1.col(l.nx) * v1.col(l.ny).transpose();
    set.energies[i] = l.energy;
    set.quanta.emplace_back(l.nx, l.ny);
  }
  return set;
}

VectorXd apply_trap_operator(const GridSpec& grid, const VectorXd& field) {
  const int n = grid.nx;
  const double h2 = grid.h * grid.h;
  Eigen::Map<const MatrixXd> f(field.data(), n, n);
  VectorXd out(field.size());
  Eigen::Map<MatrixXd> o(out.data(), n, n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      double c = f(ix, iy);
      double nb = 0;
      if (ix > 0) nb += f(ix - 1, iy);
      if (ix + 1 < n) nb += f(ix + 1, iy);
      if (iy > 0) nb += f(ix, iy - 1);
      if (iy + 1 < n) nb += f(ix, iy + 1);
      double r2 = grid.x[ix] * grid.x[ix] + grid.x[iy] * grid.x[iy];
      o(ix, iy) = -0.5 * (nb - 4 * c) / h2 + 0.5 * r2 * c;
    }
  }
  return out;
}

std::uint64_t cantor_pair(std::int64_t nx, std::int64_t ny) {
  if (nx < 0 || ny < 0) throw InvalidArgument("cantor_pair needs non-negative inputs");
  std::uint64_t s = std::uint64_t(nx) + std::uint64_t(ny);
  return s * (s + 1) / 2 + std::uint64_t(ny);
}

std::pair<std::int64_t, std::int64_t> cantor_unpair(std::uint64_t m) {
  auto s = std::uint64_t((std::sqrt(8.0 * double(m) + 1.0) - 1.0) / 2.0);
  // Correct floating-point rounding of the triangular root.
  while (s * (s + 1) / 2 > m) --s;
  while ((s + 1) * (s + 2) / 2 <= m) ++s;
  std::uint64_t ny = m - s * (s + 1) / 2;
  return {std::int64_t(s - ny), std::int64_t(ny)};
}

VectorXd hermite_functions(int nmax, double u) {
  VectorXd h(nmax + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
  if (nmax >= 1) h[1] = std::sqrt(2.0) * u * h[0];
  for (int k = 1; k < nmax; ++k)
    h[k + 1] = std::sqrt(2.0 / (k + 1)) * u * h[k] - std::sqrt(double(k) / (k + 1)) * h[k - 1];
  return h;
}

double waist_scale(double zeta) { return 1.0 / zeta; }

bool nyquist_ok(const GridSpec& grid, int m_sigma, double zeta) {
  double kmax = std::sqrt(2.0 * (m_sigma + 1)) / waist_scale(zeta);
  return grid.h < std::numbers::pi / kmax;
}

namespace {

// Columns are psi_n sampled on the axis, n = 0..nmax, for waist scale s.
MatrixXd axis_modes(const GridSpec& grid, int nmax, double s) {
  MatrixXd out(grid.nx, nmax + 1);
  for (int k = 0; k < grid.nx; ++k)
    out.row(k) = hermite_functions(nmax, grid.x[k] / s).transpose() / std::sqrt(s);
  return out;
}

void check_nyquist(const GridSpec& grid, int m_sigma, double zeta) {
  if (nyquist_ok(grid, m_sigma, zeta)) return;
  std::ostringstream os;
  os << "cavity mode family " << m_sigma << " at zeta=" << zeta
     << " is not resolved by grid spacing " << grid.h;
  throw ResolutionError(os.str());
}

}  // namespace

ScalarField cavity_mode(std::uint64_t m, double zeta, const GridSpec& grid) {
  if (!(zeta > 0)) throw InvalidArgument("zeta must be positive");
  auto [nx, ny] = cantor_unpair(m);
  int top = int(nx + ny);
  check_nyquist(grid, top, zeta);
  MatrixXd ax = axis_modes(grid, top, waist_scale(zeta));
  return ax.col(nx) * ax.col(ny).transpose();
}

VectorXd CavityModeSet::weights(double delta_omega_tilde) const {
  VectorXd w(M + 1);
  for (int m = 0; m <= M; ++m) w[m] = 1.0 / (1.0 + m_sigma[m] * delta_omega_tilde);
  return w;
}

CavityModeSet make_cavity_modes(const GridSpec& grid, double zeta, int M) {
  if (!(zeta > 0)) throw InvalidArgument("zeta must be positive");
  if (M < 0) throw InvalidArgument("mode cutoff must be non-negative");
  CavityModeSet set;
  set.M = M;
  set.zeta = zeta;
  set.w0 = std::sqrt(2.0) * waist_scale(zeta);
  int top = int(cantor_unpair(M).first + cantor_unpair(M).second);
  check_nyquist(grid, top, zeta);
  MatrixXd ax = axis_modes(grid, top, waist_scale(zeta));
  set.modes.resize(grid.size(), M + 1);
  for (int m = 0; m <= M; ++m) {
    auto [nx, ny] = cantor_unpair(m);
    Eigen::Map<MatrixXd> f(set.modes.col(m).data(), grid.nx, grid.nx);
    f.noalias() = ax.col(nx) * ax.col(ny).transpose();
    set.m_sigma.push_back(int(nx + ny));
    set.quanta.emplace_back(int(nx), int(ny));
  }
  return set;
}

}  // namespace cavsyk
