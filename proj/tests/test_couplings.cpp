#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cavsyk/couplings.hpp"
#include "cavsyk/errors.hpp"

using namespace cavsyk;

namespace {

struct Setup {
  GridSpec grid;
  TrapModeSet trap;
  CavityModeSet cavity;
  DetuningRatioField detuning;
};

Setup make_setup(int N, int M, double zeta = 1.0, bool disorder = true, int nx = 200) {
  Setup s;
  s.grid = make_grid(10, nx);
  s.trap = solve_trap_modes(s.grid, N);
  s.cavity = make_cavity_modes(s.grid, zeta, M);
  if (disorder) {
    s.detuning = detuning_ratio(generate_speckle(s.grid, 17, 11));
  } else {
    s.detuning.ratio = ScalarField::Ones(s.grid.nx, s.grid.nx);
  }
  return s;
}

// Direct Riemann sum over grid points.
template <typename Scalar>
Scalar naive_integral(const Setup& s, const DriveProfile& drive, int i, int j, int m) {
  Scalar acc = 0;
  auto fi = s.trap.mode(i, s.grid), fj = s.trap.mode(j, s.grid);
  Eigen::Map<const MatrixXd> gm(s.cavity.modes.col(m).data(), s.grid.nx, s.grid.nx);
  for (int iy = 0; iy < s.grid.nx; ++iy)
    for (int ix = 0; ix < s.grid.nx; ++ix) {
      Scalar gd = 1;
      if constexpr (is_complex_v<Scalar>)
        if (drive.kind == DriveProfile::Kind::plane_wave) gd = std::polar(1.0, drive.kd * s.grid.x[ix]);
      acc += gd * gm(ix, iy) * fi(ix, iy) * fj(ix, iy) / s.detuning.ratio(ix, iy);
    }
  return acc * 0.5 * s.grid.h * s.grid.h;
}

// Four-term sum written out entry by entry.
template <typename Scalar>
Scalar naive_coupling(const IntegralTable<Scalar>& I, double dw, int M, int i1, int i2, int j1,
                      int j2) {
  auto cj = [](Scalar v) -> Scalar {
    if constexpr (is_complex_v<Scalar>) return std::conj(v);
    else return v;
  };
  Scalar acc = 0;
  for (int m = 0; m <= M; ++m) {
    Scalar term = I(i1, j1, m) * cj(I(j2, i2, m)) - I(i2, j1, m) * cj(I(j2, i1, m)) -
                  I(i1, j2, m) * cj(I(j1, i2, m)) + I(i2, j2, m) * cj(I(j1, i1, m));
    acc += term / (1.0 + I.m_sigma[m] * dw);
  }
  return acc;
}

}  // namespace

TEST_CASE("integral table matches a direct quadrature") {
  auto s = make_setup(5, 20, 1.0, true);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, DriveProfile::uniform());
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int m : {0, 3, 11, 20}) {
        CHECK(I(i, j, m) == doctest::Approx(naive_integral<double>(s, {}, i, j, m)).scale(1e-14));
        CHECK(I(i, j, m) == I(j, i, m));
      }
  auto Ic = compute_integrals<cplx>(s.grid, s.trap, s.cavity, s.detuning, DriveProfile::plane_wave(1.3));
  for (int i = 0; i < 5; ++i)
    for (int m : {0, 7}) {
      cplx ref = naive_integral<cplx>(s, DriveProfile::plane_wave(1.3), i, 4 - i, m);
      CHECK(std::abs(Ic(i, 4 - i, m) - ref) < 1e-13);
    }
  CHECK_THROWS_AS(compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning,
                                            DriveProfile::plane_wave(1.0)),
                  InvalidArgument);
  auto other = make_grid(10, 60);
  CHECK_THROWS_AS(compute_integrals<double>(other, s.trap, s.cavity, s.detuning, {}), InvalidArgument);
}

TEST_CASE("coupling tensor matches the four-term sum and its symmetries") {
  auto s = make_setup(6, 60, 1.0, true);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  auto T = compute_coupling_tensor(I, 0.3, 60);
  double scale = T.pairs.cwiseAbs().maxCoeff();
  double worst = 0;
  for (int i1 = 0; i1 < 6; ++i1)
    for (int i2 = 0; i2 < 6; ++i2)
      for (int j1 = 0; j1 < 6; ++j1)
        for (int j2 = 0; j2 < 6; ++j2) {
          double v = T(i1, i2, j1, j2);
          worst = std::max(worst, std::abs(v - naive_coupling(I, 0.3, 60, i1, i2, j1, j2)));
          CHECK(v == -T(i2, i1, j1, j2));
          CHECK(v == -T(i1, i2, j2, j1));
          CHECK(std::abs(v - T(j2, j1, i2, i1)) <= 1e-12 * scale);
          if (i1 == i2 || j1 == j2) CHECK(v == 0.0);
        }
  CHECK(worst < 1e-12 * scale);
  CHECK_THROWS_AS(compute_coupling_tensor(I, 0.0, 60), InvalidArgument);
  CHECK_THROWS_AS(compute_coupling_tensor(I, 0.1, 61), InvalidArgument);
}

TEST_CASE("parity selection rule without disorder") {
  auto s = make_setup(10, 40, 1.0, false);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  int checked = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      int pi = s.trap.quanta[i].first + s.trap.quanta[i].second;
      int pj = s.trap.quanta[j].first + s.trap.quanta[j].second;
      if ((pi + pj) % 2 == 0) continue;
      for (int m = 0; m <= 40; ++m) {
        auto [nx, ny] = s.cavity.quanta[m];
        if (nx % 2 || ny % 2) continue;
        CHECK(std::abs(I(i, j, m)) < 1e-10);
        ++checked;
      }
    }
  CHECK(checked > 100);
}

TEST_CASE("a very wide waist couples only identical modes") {
  auto s = make_setup(6, 0, 0.01, false);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  double g0 = 1 / (std::sqrt(std::numbers::pi) * waist_scale(0.01));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(std::abs(I(i, j, 0) / (0.5 * g0) - (i == j)) < 1e-3);
}

TEST_CASE("large detuning spread leaves the single mode") {
  auto s = make_setup(4, 60, 1.0, true);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  for (double dw : {10.0, 100.0, 1000.0}) {
    auto full = compute_coupling_tensor(I, dw, 60);
    auto single = compute_coupling_tensor(I, dw, 0);
    for (int i1 = 1; i1 < 4; ++i1)
      for (int i2 = 0; i2 < i1; ++i2)
        for (int j1 = 1; j1 < 4; ++j1)
          for (int j2 = 0; j2 < j1; ++j2) {
            // Triangle bound on the discarded m >= 1 terms, each weighted by at most 1/(1+dw).
            double bound = 0;
            for (int m = 1; m <= 60; ++m)
              bound += std::abs(I(i1, j1, m) * I(j2, i2, m)) + std::abs(I(i2, j1, m) * I(j2, i1, m)) +
                       std::abs(I(i1, j2, m) * I(j1, i2, m)) + std::abs(I(i2, j2, m) * I(j1, i1, m));
            bound /= 1 + dw;
            CHECK(std::abs(full(i1, i2, j1, j2) - single(i1, i2, j1, j2)) <= bound * (1 + 1e-12));
          }
  }
}

TEST_CASE("normalization") {
  auto s = make_setup(8, 60, 1.0, true);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  auto T = compute_coupling_tensor(I, 0.1, 60);
  auto n = normalize_couplings(T);
  CHECK(std::abs(independent_variance(n) - 1) < 1e-12);
  CHECK(n.J == doctest::Approx(std::sqrt(independent_variance(T))));
  CHECK(independent_samples(n).size() == 28 * 28);
  auto scaled = T;
  scaled.pairs *= 37.5;
  auto n2 = normalize_couplings(scaled);
  CHECK((n2.pairs - n.pairs).cwiseAbs().maxCoeff() < 1e-13);
  CouplingTensor<double> flat;
  flat.N = 3;
  flat.pairs = MatrixXd::Constant(3, 3, 2.0);
  CHECK_THROWS_AS(normalize_couplings(flat), DegenerateInputError);
}

TEST_CASE("plane-wave drive gives a complex Hermitian tensor") {
  auto s = make_setup(6, 40, 1.0, true);
  auto I = compute_integrals<cplx>(s.grid, s.trap, s.cavity, s.detuning, DriveProfile::plane_wave(1.0));
  auto T = normalize_couplings(compute_coupling_tensor(I, 0.1, 40));
  CHECK((T.pairs - T.pairs.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  // I~ is complex but symmetric in (i, j), so terms 1 and 4 (and 2 and 3) of the
  // antisymmetrized sum are complex conjugates and the amplitudes come out real.
  CHECK(I.data.imag().cwiseAbs().maxCoeff() > 1e-3);
  CHECK(T.pairs.imag().cwiseAbs().maxCoeff() < 1e-14);
  auto Tu = normalize_couplings(compute_coupling_tensor(
      compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {}), 0.1, 40));
  CHECK((T.pairs.real() - Tu.pairs).cwiseAbs().maxCoeff() > 1e-2);
  CHECK(std::abs(independent_variance(T) - 1) < 1e-12);
  CHECK(independent_samples(T).size() == 2 * 15 * 15);
  // Zero wavenumber reproduces the real table.
  auto I0 = compute_integrals<cplx>(s.grid, s.trap, s.cavity, s.detuning, DriveProfile::plane_wave(0.0));
  auto Ir = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  CHECK((I0.data - Ir.data.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("mode cutoff convergence between 240 and 500") {
  auto s = make_setup(6, 500, 1.0, true);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  for (double dw : {0.1, 1.0}) {
    auto a = compute_coupling_tensor(I, dw, 240), b = compute_coupling_tensor(I, dw, 500);
    double rel = (b.pairs - a.pairs).cwiseAbs().maxCoeff() / a.pairs.cwiseAbs().maxCoeff();
    CHECK(rel < 0.05);
  }
}

TEST_CASE("cavity-mode completeness reproduces the ground-state overlap") {
  // sum_m I_00m^2 -> (1/4) int phi_0^4 = 1/(8 pi) without disorder.
  auto s = make_setup(1, 240, 1.0, false, 200);
  auto I = compute_integrals<double>(s.grid, s.trap, s.cavity, s.detuning, {});
  double sum = I.data.row(0).squaredNorm();
  double direct = 0.25 * s.trap.modes.col(0).array().pow(4).sum() * s.grid.cell_area();
  CHECK(sum == doctest::Approx(direct).epsilon(1e-6));
  // The discrete ground state differs from the Gaussian at O(h^2).
  CHECK(sum == doctest::Approx(1 / (8 * std::numbers::pi)).epsilon(1e-3));
}
