#include "qnet/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace qnet {

namespace {

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 add3(const Vec3& a, const Vec3& b, double sb) {
  return {a[0] + sb * b[0], a[1] + sb * b[1], a[2] + sb * b[2]};
}

}  // namespace

Vec3 DichotomicObservable::effective() const {
  return {eta * direction[0], eta * direction[1], eta * direction[2]};
}

ComplexMatrix DichotomicObservable::operator_matrix() const { return dot_sigma(effective()); }

std::array<ComplexMatrix, 2> povm_elements(const DichotomicObservable& obs) {
  const ComplexMatrix m = obs.operator_matrix();
  ComplexMatrix plus = identity2();
  plus += m;
  plus *= 0.5;
  ComplexMatrix minus = identity2();
  minus -= m;
  minus *= 0.5;
  return {plus, minus};
}

MeasurementPair equatorial_pair(Plane plane, double t, double eta) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0,1]");
  MeasurementPair p;
  for (int j = 0; j < 2; ++j) {
    const double sign = (j == 0) ? 1.0 : -1.0;
    Vec3 n{};
    if (plane == Plane::XZ)
      n = {sign * std::cos(t), 0.0, std::sin(t)};
    else
      n = {std::cos(t), sign * std::sin(t), 0.0};
    (j == 0 ? p.m0 : p.m1) = DichotomicObservable{eta, n};
  }
  return p;
}

CompatibilityResult is_compatible(const MeasurementPair& pair) {
  const Vec3 m0 = pair.m0.effective();
  const Vec3 m1 = pair.m1.effective();
  const double s = norm3(add3(m0, m1, 1.0));
  const double d = norm3(add3(m0, m1, -1.0));
  CompatibilityResult r;
  r.margin = 1.0 - 0.5 * (s + d);
  // structural guard keeps pairs placed exactly on the boundary compatible
  r.compatible = r.margin >= -tol::structural;
  return r;
}

double compatibility_threshold(Plane, double t) {
  return 1.0 / (std::abs(std::cos(t)) + std::abs(std::sin(t)));
}

ParentPOVM parent_povm(const MeasurementPair& pair) {
  const auto compat = is_compatible(pair);
  if (!compat.compatible && compat.margin < -tol::structural)
    throw std::invalid_argument("parent POVM requires a compatible pair");
  const Vec3 m0 = pair.m0.effective();
  const Vec3 m1 = pair.m1.effective();
  const double s = norm3(add3(m0, m1, 1.0));
  const double d = norm3(add3(m0, m1, -1.0));
  const double c = 0.5 * (s - d);

  ParentPOVM g;
  for (int l0 = 0; l0 < 2; ++l0)
    for (int l1 = 0; l1 < 2; ++l1) {
      const double a = (l0 == 0) ? 1.0 : -1.0;
      const double b = (l1 == 0) ? 1.0 : -1.0;
      ComplexMatrix e = identity2();
      e *= 1.0 + a * b * c;
      e += dot_sigma(add3({a * m0[0], a * m0[1], a * m0[2]}, m1, b));
      e *= 0.25;
      g.elements[l0][l1] = std::move(e);
    }
  return g;
}

ComplexMatrix EntangledBasisMeasurement::projector(int label) const {
  const auto& psi = basis_states.at(label);
  const int d = static_cast<int>(psi.size());
  ComplexMatrix p(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) p.at(i, j) = psi[i] * std::conj(psi[j]);
  return p;
}

EntangledBasisMeasurement bell_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  EntangledBasisMeasurement b;
  b.n_qubits = 2;
  b.label_bits = 2;
  b.basis_states.resize(4);
  // labels (a1, a2): a1 = ZZ parity, a2 = XX parity
  b.basis_states[0b00] = {r, 0.0, 0.0, r};    // phi+
  b.basis_states[0b01] = {r, 0.0, 0.0, -r};   // phi-
  b.basis_states[0b10] = {0.0, r, r, 0.0};    // psi+
  b.basis_states[0b11] = {0.0, r, -r, 0.0};   // psi-
  return b;
}

EntangledBasisMeasurement ghz_basis(int n) {
  if (n < 2) throw std::invalid_argument("GHZ basis needs n >= 2 qubits");
  const int dim = 1 << n;
  const double r = 1.0 / std::sqrt(2.0);
  EntangledBasisMeasurement g;
  g.n_qubits = n;
  g.label_bits = n;
  g.basis_states.resize(dim);
  for (int label = 0; label < dim; ++label) {
    const int b0 = (label >> (n - 1)) & 1;
    const int rest = label & ((1 << (n - 1)) - 1);
    // |0,b> + (-1)^{b0} |1,~b>, qubit 0 most significant
    std::vector<cplx> psi(dim, 0.0);
    const int i0 = rest;
    const int i1 = (1 << (n - 1)) | (~rest & ((1 << (n - 1)) - 1));
    psi[i0] = r;
    psi[i1] = (b0 == 0) ? r : -r;
    g.basis_states[label] = std::move(psi);
  }
  return g;
}

std::vector<int> parity_readout(const EntangledBasisMeasurement& basis,
                                const std::vector<int>& pauli_string) {
  if (static_cast<int>(pauli_string.size()) != basis.n_qubits)
    throw std::invalid_argument("Pauli string length does not match basis");
  ComplexMatrix op = ComplexMatrix::identity(1);
  for (int p : pauli_string) op = kron(op, p == 0 ? identity2() : pauli(p));

  std::vector<int> signs(basis.outcomes());
  const int d = op.dim();
  for (int label = 0; label < basis.outcomes(); ++label) {
    const auto& psi = basis.basis_states[label];
    std::vector<cplx> image(d, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) image[i] += op.at(i, j) * psi[j];
    cplx overlap = 0.0;
    for (int i = 0; i < d; ++i) overlap += std::conj(psi[i]) * image[i];
    const double ev = overlap.real();
    double defect = std::abs(overlap.imag());
    for (int i = 0; i < d; ++i) defect = std::max(defect, std::abs(image[i] - ev * psi[i]));
    if (defect > tol::structural || std::abs(std::abs(ev) - 1.0) > tol::structural)
      throw std::invalid_argument("Pauli string is not diagonal in the given basis");
    signs[label] = ev > 0.0 ? 1 : -1;
  }
  return signs;
}

}  // namespace qnet
