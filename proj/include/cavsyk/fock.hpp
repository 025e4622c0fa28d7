#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "cavsyk/couplings.hpp"

namespace cavsyk {

inline constexpr int kDenseGuard = 20;

using Bits = std::uint32_t;

// Fixed-filling occupation basis; bit k of a state is mode k.
struct FockSector {
  int N = 0;
  int Np = 0;
  std::vector<Bits> states;   // strictly increasing
  std::vector<std::int32_t> index;  // 2^N entries, -1 outside the sector

  Index dim() const { return Index(states.size()); }
  Index find(Bits s) const { return index[s]; }
};

FockSector enumerate_sector(int N, int Np);

// Jordan-Wigner sign of acting on mode j: (-1)^(occupied modes below j).
inline double jw_sign(Bits s, int j) {
  return (std::popcount(s & ((Bits(1) << j) - 1)) & 1) ? -1.0 : 1.0;
}

enum class Provenance { effective, syk_gauss_real, syk_gauss_complex, syk_cauchy };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

template <typename Scalar>
struct ManyBodyMatrix {
  MatrixX<Scalar> H;
  FockSector sector;
  Provenance provenance = Provenance::effective;
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct Spectrum {
  VectorXd energies;  // ascending
  MatrixX<Scalar> vectors;  // empty unless requested
  FockSector basis;

  bool has_vectors() const { return vectors.size() > 0; }
};

// Matrix of sum_{i1 i2 j1 j2} J c+_{i1} c+_{i2} c_{j1} c_{j2} within the sector.
template <typename Scalar>
ManyBodyMatrix<Scalar> build_effective_hamiltonian(const CouplingTensor<Scalar>& tensor,
                                                   const FockSector& sector,
                                                   Provenance provenance = Provenance::effective,
                                                   std::uint64_t seed = 0);

template <typename Scalar>
Spectrum<Scalar> diagonalize(const ManyBodyMatrix<Scalar>& matrix, bool keep_vectors);

}  // namespace cavsyk
