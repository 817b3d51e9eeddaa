#pragma once

#include <array>
#include <string>
#include <vector>

#include "qnet/linalg.hpp"
#include "qnet/state.hpp"

namespace qnet {

/// Setting plane for the equatorial measurement families:
/// XZ: n_j = ((-1)^j cos t, 0, sin t)
/// XY: n_j = (cos t, (-1)^j sin t, 0)
enum class Plane { XZ, XY };

/// Noisy dichotomic Von Neumann observable M = eta (direction . sigma)
/// with sharpness eta in [0,1] and ||direction|| <= 1.
struct DichotomicObservable {
  double eta = 1.0;
  Vec3 direction{0.0, 0.0, 1.0};

  /// effective Bloch vector eta * direction
  Vec3 effective() const;
  ComplexMatrix operator_matrix() const;
};

/// POVM (E_+, E_-) = ((I +- M)/2); outcome bit 0 <-> +1 eigensign.
std::array<ComplexMatrix, 2> povm_elements(const DichotomicObservable& obs);

/// One party's pair of settings.
struct MeasurementPair {
  DichotomicObservable m0;
  DichotomicObservable m1;

  const DichotomicObservable& setting(int j) const { return j == 0 ? m0 : m1; }
};

/// The +- equatorial family: eta (sin t s3 + (-1)^j cos t s1) for XZ,
/// eta (cos t s1 + (-1)^j sin t s2) for XY.
MeasurementPair equatorial_pair(Plane plane, double t, double eta);

struct CompatibilityResult {
  bool compatible = false;
  /// 1 - (||m0+m1|| + ||m0-m1||)/2 over effective vectors; >= 0 iff
  /// a parent POVM exists (Busch criterion).
  double margin = 0.0;
};

CompatibilityResult is_compatible(const MeasurementPair& pair);

/// eta* = 1/(|cos t| + |sin t|): the pair at angle t is compatible iff
/// eta <= eta*. Same threshold in either plane.
double compatibility_threshold(Plane plane, double t);

/// Four-outcome joint measurement G[l0][l1] whose deterministic
/// response p(a | setting j, l) = delta(a, l_j) reproduces both settings.
struct ParentPOVM {
  std::array<std::array<ComplexMatrix, 2>, 2> elements;  // [l0][l1]
};

/// Closed-form parent for a compatible pair:
/// G_ab = (1/4)[(1 + a b c) I + (a m0 + b m1).sigma],
/// c = (||m0+m1|| - ||m0-m1||)/2, outcome signs a,b = (-1)^bit.
/// Throws if the pair is incompatible.
ParentPOVM parent_povm(const MeasurementPair& pair);

/// Orthonormal entangled basis with n-bit outcome labels.
struct EntangledBasisMeasurement {
  int n_qubits = 0;
  int label_bits = 0;
  /// basis_states[label] is the 2^n-dim state vector for that label
  std::vector<std::vector<cplx>> basis_states;

  int outcomes() const { return static_cast<int>(basis_states.size()); }
  ComplexMatrix projector(int label) const;
};

/// Bell basis with labels (a1, a2): a1 = ZZ parity bit, a2 = XX parity
/// bit, so (0,0)=phi+, (0,1)=phi-, (1,0)=psi+, (1,1)=psi-.
EntangledBasisMeasurement bell_basis();

/// GHZ basis (|0,b> + (-1)^{b0} |1, b~>)/sqrt(2), labels (b0, b).
EntangledBasisMeasurement ghz_basis(int n);

/// Eigenvalue sign of the Pauli string on each basis state.
/// pauli_string entries: 0=I, 1=X, 2=Y, 3=Z. Throws if the operator is
/// not diagonal in the basis.
std::vector<int> parity_readout(const EntangledBasisMeasurement& basis,
                                const std::vector<int>& pauli_string);

}  // namespace qnet
