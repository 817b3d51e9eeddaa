#pragma once

#include <array>
#include <cstdint>

#include "qnet/linalg.hpp"

namespace qnet {

using Vec3 = std::array<double, 3>;

/// Two-qubit density operator with its Bloch decomposition cached at
/// construction: local Bloch vectors, correlation tensor
/// T[j][k] = Tr[rho sigma_j (x) sigma_k], and the descending singular
/// values of T (the correlation spectrum that all bound formulas use).
struct TwoQubitState {
  ComplexMatrix rho;  // 4x4, trace 1, PSD
  Vec3 bloch_u{};
  Vec3 bloch_v{};
  Tensor3 correlation;
  std::array<double, 3> spectrum{};  // E1 >= E2 >= E3 >= 0
};

/// v |psi-><psi-| + (1-v) I4/4. Correlation tensor -v I, spectrum (v,v,v).
TwoQubitState werner(double v);

/// rho = (1/4)(I + u.sigma (x) I + I (x) v.sigma + sum T_jk sigma_j (x) sigma_k).
/// Throws if the resulting matrix is not a valid state.
TwoQubitState from_bloch(const Vec3& u, const Vec3& v, const Tensor3& t);

/// Wrap an explicit 4x4 density matrix (validated, decomposition cached).
TwoQubitState from_matrix(const ComplexMatrix& rho);

std::array<double, 3> correlation_spectrum(const TwoQubitState& s);

/// Seeded Ginibre sample: rho = G G^dag / Tr[G G^dag] with G a 4x4 matrix
/// of standard complex Gaussians. The generator is pinned (xoshiro256**
/// seeded by splitmix64, Box-Muller from 53-bit uniforms) so identical
/// seeds give bit-identical states everywhere.
TwoQubitState random_state(std::uint64_t seed);

/// The pinned PRNG behind random_state, reusable wherever audits need
/// reproducible streams.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed);
  std::uint64_t next_u64();
  /// uniform in [0,1) with 53 bits
  double next_double();
  /// standard normal via Box-Muller
  double next_gaussian();

 private:
  std::array<std::uint64_t, 4> s_{};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qnet
