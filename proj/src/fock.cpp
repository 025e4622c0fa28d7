#include "cavsyk/fock.hpp"

#include <Eigen/Eigenvalues>
#include <sstream>

#include "cavsyk/errors.hpp"

namespace cavsyk {

FockSector enumerate_sector(int N, int Np) {
  if (N > kDenseGuard) {
    std::ostringstream os;
    os << "N=" << N << " exceeds the dense diagonalization guard N <= " << kDenseGuard;
    throw CapacityError(os.str());
  }
  if (N < 0 || Np < 0 || Np > N) throw InvalidArgument("need 0 <= N_p <= N");
  FockSector s;
  s.N = N;
  s.Np = Np;
  s.index.assign(std::size_t(1) << N, -1);
  for (Bits b = 0; b < (Bits(1) << N); ++b) {
    if (std::popcount(b) != Np) continue;
    s.index[b] = std::int32_t(s.states.size());
    s.states.push_back(b);
  }
  return s;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::effective: return "effective";
    case Provenance::syk_gauss_real: return "syk_gauss_real";
    case Provenance::syk_gauss_complex: return "syk_gauss_complex";
    case Provenance::syk_cauchy: return "syk_cauchy";
  }
  return "unknown";
}

Provenance provenance_from_string(const std::string& s) {
  for (auto p : {Provenance::effective, Provenance::syk_gauss_real,
                 Provenance::syk_gauss_complex, Provenance::syk_cauchy})
    if (to_string(p) == s) return p;
  throw InvalidArgument("unknown model '" + s + "'");
}

template <typename Scalar>
ManyBodyMatrix<Scalar> build_effective_hamiltonian(const CouplingTensor<Scalar>& tensor,
                                                   const FockSector& sector,
                                                   Provenance provenance, std::uint64_t seed) {
  if (tensor.N != sector.N) throw InvalidArgument("tensor and sector mode counts differ");
  const int N = sector.N;
  const Index D = sector.dim();
  ManyBodyMatrix<Scalar> out;
  out.sector = sector;
  out.provenance = provenance;
  out.seed = seed;
  out.H = MatrixX<Scalar>::Zero(D, D);

  // Restricting to i1 > i2, j1 > j2 covers each operator 4 times over in the full sum.
  for (Index col = 0; col < D; ++col) {
    const Bits s = sector.states[col];
    for (int j1 = 1; j1 < N; ++j1) {
      if (!(s >> j1 & 1)) continue;
      for (int j2 = 0; j2 < j1; ++j2) {
        if (!(s >> j2 & 1)) continue;
        Bits a = s;
        double sign = jw_sign(a, j2);
        a &= ~(Bits(1) << j2);
        sign *= jw_sign(a, j1);
        a &= ~(Bits(1) << j1);
        const Index pj = pair_index(j1, j2);
        for (int i1 = 1; i1 < N; ++i1) {
          if (a >> i1 & 1) continue;
          for (int i2 = 0; i2 < i1; ++i2) {
            if (a >> i2 & 1) continue;
            double sg = sign * jw_sign(a, i2);
            Bits b = a | (Bits(1) << i2);
            sg *= jw_sign(b, i1);
            b |= Bits(1) << i1;
            out.H(sector.find(b), col) += Scalar(4 * sg) * tensor.pairs(pair_index(i1, i2), pj);
          }
        }
      }
    }
  }
  return out;
}

template <typename Scalar>
Spectrum<Scalar> diagonalize(const ManyBodyMatrix<Scalar>& matrix, bool keep_vectors) {
  if (matrix.sector.N > kDenseGuard) throw CapacityError("sector beyond dense guard");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(
      matrix.H, keep_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eigensolver failed for D=" << matrix.H.rows()
       << ", |H|_max=" << matrix.H.cwiseAbs().maxCoeff()
       << ", hermiticity defect=" << (matrix.H - matrix.H.adjoint()).cwiseAbs().maxCoeff();
    throw NumericalError(os.str());
  }
  Spectrum<Scalar> sp;
  sp.energies = es.eigenvalues();
  if (keep_vectors) sp.vectors = es.eigenvectors();
  sp.basis = matrix.sector;
  return sp;
}

template ManyBodyMatrix<double> build_effective_hamiltonian<double>(
    const CouplingTensor<double>&, const FockSector&, Provenance, std::uint64_t);
template ManyBodyMatrix<cplx> build_effective_hamiltonian<cplx>(const CouplingTensor<cplx>&,
                                                                const FockSector&, Provenance,
                                                                std::uint64_t);
template Spectrum<double> diagonalize<double>(const ManyBodyMatrix<double>&, bool);
template Spectrum<cplx> diagonalize<cplx>(const ManyBodyMatrix<cplx>&, bool);

}  // namespace cavsyk
