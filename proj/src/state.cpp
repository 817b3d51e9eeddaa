#include "qnet/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qnet {

namespace {

TwoQubitState decompose(ComplexMatrix rho) {
  if (rho.dim() != 4) throw std::invalid_argument("two-qubit state must be 4x4");
  if (!rho.is_hermitian()) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > tol::structural)
    throw std::invalid_argument("density matrix trace is not 1");
  const auto eigs = eigenvalues_hermitian(rho);
  if (eigs.front() < -tol::structural)
    throw std::invalid_argument("density matrix is not positive semidefinite");

  TwoQubitState s;
  s.rho = std::move(rho);
  for (int j = 1; j <= 3; ++j) {
    s.bloch_u[j - 1] = (kron(pauli(j), identity2()) * s.rho).trace().real();
    s.bloch_v[j - 1] = (kron(identity2(), pauli(j)) * s.rho).trace().real();
    for (int k = 1; k <= 3; ++k)
      s.correlation(j - 1, k - 1) = (kron(pauli(j), pauli(k)) * s.rho).trace().real();
  }
  s.spectrum = singular_values_3x3(s.correlation);
  return s;
}

}  // namespace

TwoQubitState werner(double v) {
  if (v < 0.0 || v > 1.0) throw std::invalid_argument("werner visibility must be in [0,1]");
  ComplexMatrix rho(4);
  // |psi-> = (|01> - |10>)/sqrt(2)
  rho.at(1, 1) = rho.at(2, 2) = v * 0.5;
  rho.at(1, 2) = rho.at(2, 1) = -v * 0.5;
  for (int i = 0; i < 4; ++i) rho.at(i, i) += (1.0 - v) * 0.25;
  return decompose(std::move(rho));
}

TwoQubitState from_bloch(const Vec3& u, const Vec3& v, const Tensor3& t) {
  ComplexMatrix rho = ComplexMatrix::identity(4);
  rho += kron(dot_sigma(u), identity2());
  rho += kron(identity2(), dot_sigma(v));
  for (int j = 1; j <= 3; ++j)
    for (int k = 1; k <= 3; ++k) {
      const double c = t(j - 1, k - 1);
      if (c != 0.0) rho += cplx{c, 0.0} * kron(pauli(j), pauli(k));
    }
  rho *= 0.25;
  return decompose(std::move(rho));
}

TwoQubitState from_matrix(const ComplexMatrix& rho) { return decompose(rho); }

std::array<double, 3> correlation_spectrum(const TwoQubitState& s) { return s.spectrum; }

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

SplitRng::SplitRng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

std::uint64_t SplitRng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double SplitRng::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double SplitRng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

TwoQubitState random_state(std::uint64_t seed) {
  SplitRng rng(seed);
  ComplexMatrix g(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.at(i, j) = cplx{rng.next_gaussian(), rng.next_gaussian()};
  ComplexMatrix rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho *= 1.0 / tr;
  return from_matrix(rho);
}

}  // namespace qnet
