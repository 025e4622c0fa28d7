#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cavsyk/types.hpp"

namespace cavsyk {

// Square grid in oscillator units, centred at the origin.
struct GridSpec {
  double L = 0;
  int nx = 0;
  double h = 0;
  VectorXd x;  // axis coordinates, shared by both axes

  double cell_area() const { return h * h; }
  Index size() const { return Index(nx) * nx; }
  bool same_as(const GridSpec& o) const { return L == o.L && nx == o.nx; }
};

GridSpec make_grid(double L, int nx);

// Lowest N eigenmodes of the discretized 2D oscillator H = (-lap + r^2)/2.
struct TrapModeSet {
  int N = 0;
  MatrixXd modes;  // size() x N, column i is phi_i flattened column-major
  VectorXd energies;
  std::vector<std::pair<int, int>> quanta;  // (n_x, n_y) of each mode

  ScalarField mode(int i, const GridSpec& grid) const;
};

TrapModeSet solve_trap_modes(const GridSpec& grid, int N);

// Applies the 5-point finite-difference oscillator operator to a flattened field.
VectorXd apply_trap_operator(const GridSpec& grid, const VectorXd& field);

std::uint64_t cantor_pair(std::int64_t nx, std::int64_t ny);
std::pair<std::int64_t, std::int64_t> cantor_unpair(std::uint64_t m);

// Normalized Hermite functions h_0..h_nmax at u, via the stable recurrence.
VectorXd hermite_functions(int nmax, double u);

// w0/sqrt(2) for zeta = x0/(w0/sqrt(2)) with x0 = 1.
double waist_scale(double zeta);

// Highest resolvable wavenumber check for a Hermite-Gauss mode of family m_sigma.
bool nyquist_ok(const GridSpec& grid, int m_sigma, double zeta);

ScalarField cavity_mode(std::uint64_t m, double zeta, const GridSpec& grid);

struct CavityModeSet {
  int M = 0;
  double zeta = 1;
  double w0 = 0;
  MatrixXd modes;  // size() x (M+1), column m is g_m flattened
  std::vector<int> m_sigma;
  std::vector<std::pair<int, int>> quanta;

  VectorXd weights(double delta_omega_tilde) const;
};

CavityModeSet make_cavity_modes(const GridSpec& grid, double zeta, int M);

}  // namespace cavsyk
