#include "cavsyk/couplings.hpp"

#include <cmath>

#include "cavsyk/errors.hpp"

namespace cavsyk {

namespace {

template <typename Scalar>
VectorX<Scalar> drive_field(const GridSpec& grid, const DriveProfile& drive) {
  VectorX<Scalar> g(grid.size());
  if (drive.kind == DriveProfile::Kind::uniform) {
    g.setOnes();
    return g;
  }
  if constexpr (is_complex_v<Scalar>) {
    for (int iy = 0; iy < grid.nx; ++iy)
      for (int ix = 0; ix < grid.nx; ++ix)
        g[Index(iy) * grid.nx + ix] = std::polar(1.0, drive.kd * grid.x[ix]);
    return g;
  } else {
    throw InvalidArgument("plane-wave drive needs a complex integral table");
  }
}

}  // namespace

template <typename Scalar>
IntegralTable<Scalar> compute_integrals(const GridSpec& grid, const TrapModeSet& trap,
                                        const CavityModeSet& cavity,
                                        const DetuningRatioField& detuning,
                                        const DriveProfile& drive) {
  const Index G = grid.size();
  if (trap.modes.rows() != G || cavity.modes.rows() != G || detuning.ratio.size() != G)
    throw InvalidArgument("trap modes, cavity modes and detuning must share one grid");
  const int N = trap.N;
  VectorX<Scalar> weight = drive_field<Scalar>(grid, drive);
  Eigen::Map<const VectorXd> ratio(detuning.ratio.data(), G);
  weight.array() /= ratio.array().template cast<Scalar>();

  // Column (i, j) of A holds g_d phi_i phi_j / ratio; I = h^2/2 A^T G.
  MatrixX<Scalar> A(G, Index(N) * N);
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      A.col(Index(i) * N + j) =
          (trap.modes.col(i).array() * trap.modes.col(j).array()).template cast<Scalar>() *
          weight.array();
      if (j != i) A.col(Index(j) * N + i) = A.col(Index(i) * N + j);
    }
  IntegralTable<Scalar> t;
  t.N = N;
  t.M = cavity.M;
  t.drive = drive;
  t.m_sigma = cavity.m_sigma;
  t.data.noalias() = A.transpose() * cavity.modes.template cast<Scalar>();
  t.data *= Scalar(0.5 * grid.cell_area());
  return t;
}

template <typename Scalar>
CouplingTensor<Scalar> compute_coupling_tensor(const IntegralTable<Scalar>& table,
                                               double delta_omega_tilde, int M) {
  if (!(delta_omega_tilde > 0)) throw InvalidArgument("delta_omega_tilde must be positive");
  if (M < 0 || M > table.M) throw InvalidArgument("mode cutoff outside the integral table");
  const int N = table.N;
  VectorXd w(M + 1);
  for (int m = 0; m <= M; ++m) w[m] = 1.0 / (1.0 + table.m_sigma[m] * delta_omega_tilde);
  auto X = table.data.leftCols(M + 1);
  // T[(a,b),(c,d)] = sum_m w_m I_ab,m conj(I_cd,m)
  MatrixX<Scalar> T = X * w.template cast<Scalar>().asDiagonal() * X.adjoint();
  auto t = [&](int a, int b, int c, int d) { return T(Index(a) * N + b, Index(c) * N + d); };

  const Index P = pair_count(N);
  CouplingTensor<Scalar> out;
  out.N = N;
  out.M = M;
  out.delta_omega_tilde = delta_omega_tilde;
  out.pairs.resize(P, P);
  for (int i1 = 1; i1 < N; ++i1)
    for (int i2 = 0; i2 < i1; ++i2)
      for (int j1 = 1; j1 < N; ++j1)
        for (int j2 = 0; j2 < j1; ++j2)
          out.pairs(pair_index(i1, i2), pair_index(j1, j2)) =
              t(i1, j1, j2, i2) - t(i2, j1, j2, i1) - t(i1, j2, j1, i2) + t(i2, j2, j1, i1);
  return out;
}

template <typename Scalar>
double independent_variance(const CouplingTensor<Scalar>& tensor) {
  const Index n = tensor.pairs.size();
  if (n < 2) throw DegenerateInputError("need at least two independent entries");
  Scalar mean = tensor.pairs.mean();
  return (tensor.pairs.array() - mean).abs2().sum() / double(n - 1);
}

template <typename Scalar>
CouplingTensor<Scalar> normalize_couplings(const CouplingTensor<Scalar>& tensor) {
  double var = independent_variance(tensor);
  if (!(var > 0)) throw DegenerateInputError("coupling tensor has zero variance");
  double J = std::sqrt(var);
  CouplingTensor<Scalar> out = tensor;
  out.pairs /= J;
  out.J = tensor.J * J;
  return out;
}

template <typename Scalar>
std::vector<double> independent_samples(const CouplingTensor<Scalar>& tensor) {
  std::vector<double> v;
  v.reserve(tensor.pairs.size() * (is_complex_v<Scalar> ? 2 : 1));
  for (Index c = 0; c < tensor.pairs.cols(); ++c)
    for (Index r = 0; r < tensor.pairs.rows(); ++r) {
      v.push_back(std::real(tensor.pairs(r, c)));
      if constexpr (is_complex_v<Scalar>) v.push_back(std::imag(tensor.pairs(r, c)));
    }
  return v;
}

#define CAVSYK_INSTANTIATE(S)                                                               \
  template IntegralTable<S> compute_integrals<S>(const GridSpec&, const TrapModeSet&,       \
                                                 const CavityModeSet&,                      \
                                                 const DetuningRatioField&,                 \
                                                 const DriveProfile&);                      \
  template CouplingTensor<S> compute_coupling_tensor<S>(const IntegralTable<S>&, double,    \
                                                        int);                               \
  template CouplingTensor<S> normalize_couplings<S>(const CouplingTensor<S>&);              \
  template double independent_variance<S>(const CouplingTensor<S>&);                        \
  template std::vector<double> independent_samples<S>(const CouplingTensor<S>&);

CAVSYK_INSTANTIATE(double)
CAVSYK_INSTANTIATE(cplx)
#undef CAVSYK_INSTANTIATE

}  // namespace cavsyk
