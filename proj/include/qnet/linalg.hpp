#pragma once

#include <array>
#include <complex>
#include <vector>

namespace qnet {

using cplx = std::complex<double>;

// Centralized numeric tolerances.
// structural: Hermiticity / PSD / normalization checks.
// reconstruct: algebraic identities that should hold to rounding.
// report: comparisons between independently computed quantities.
namespace tol {
inline constexpr double structural = 1e-10;
inline constexpr double reconstruct = 1e-12;
inline constexpr double report = 1e-9;
}  // namespace tol

/// Dense square complex matrix, row-major. Dimensions stay small
/// (multi-qubit operators up to 2^12), so everything is plain loops.
///
/// Qubit index convention: qubit 0 is the leftmost (most significant)
/// tensor factor throughout the code base.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

  static ComplexMatrix identity(int dim);
  static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }

  int dim() const { return dim_; }

  cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

  ComplexMatrix adjoint() const;
  cplx trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  /// max |A[i][j] - conj(A[j][i])|
  double hermiticity_defect() const;
  bool is_hermitian(double tolerance = tol::structural) const {
    return hermiticity_defect() <= tolerance;
  }

  /// max entrywise |A - B|
  double max_abs_diff(const ComplexMatrix& o) const;

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

/// 3x3 real matrix; carrier for two-qubit correlation tensors.
struct Tensor3 {
  std::array<std::array<double, 3>, 3> m{};

  double& operator()(int r, int c) { return m[r][c]; }
  double operator()(int r, int c) const { return m[r][c]; }

  static Tensor3 diagonal(double a, double b, double c);
  static Tensor3 scaled_identity(double s) { return diagonal(s, s, s); }

  Tensor3 transposed() const;
  friend Tensor3 operator*(const Tensor3& a, const Tensor3& b);
};

// Pauli matrices and friends.
const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
const ComplexMatrix& identity2();
/// sigma(1)=X, sigma(2)=Y, sigma(3)=Z
const ComplexMatrix& pauli(int index);
/// v . sigma for a real 3-vector
ComplexMatrix dot_sigma(const std::array<double, 3>& v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reindex an m-qubit operator so that input qubit p becomes output
/// qubit perm[p]. perm must be a bijection on {0..m-1}.
ComplexMatrix permute_qubits(const ComplexMatrix& a, const std::vector<int>& perm);

/// Trace out the listed qubits of an m-qubit operator; remaining qubits
/// keep their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& a, int m_qubits, const std::vector<int>& traced);

/// Eigenvalues of a Hermitian matrix, ascending. Throws if the input is
/// not Hermitian within the tolerance. Cyclic Jacobi on the real
/// symmetric embedding; deterministic at these sizes.
std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a,
                                          double herm_tol = tol::structural);

/// Full eigensystem of a symmetric 3x3 matrix (values ascending,
/// columns of `vectors` are the matching eigenvectors).
struct Sym3Eigen {
  std::array<double, 3> values{};
  Tensor3 vectors;  // column j <-> values[j]
};
Sym3Eigen sym3_eigen(const Tensor3& s);

/// Singular values of a 3x3 real matrix, descending. Square roots of
/// the eigenvalues of T^t T.
std::array<double, 3> singular_values_3x3(const Tensor3& t);

}  // namespace qnet
