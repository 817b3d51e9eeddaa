#include "qnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qnet {

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) r.at(i, j) = std::conj(at(j, i));
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (int i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("matrix dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("matrix dimension mismatch");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("matrix dimension mismatch");
  const int n = a.dim_;
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx aik = a.at(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (int j = 0; j < n; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

double ComplexMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
  return worst;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("matrix dimension mismatch");
  double worst = 0.0;
  for (size_t i = 0; i < a_.size(); ++i) worst = std::max(worst, std::abs(a_[i] - o.a_[i]));
  return worst;
}

Tensor3 Tensor3::diagonal(double a, double b, double c) {
  Tensor3 t;
  t(0, 0) = a;
  t(1, 1) = b;
  t(2, 2) = c;
  return t;
}

Tensor3 Tensor3::transposed() const {
  Tensor3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

Tensor3 operator*(const Tensor3& a, const Tensor3& b) {
  Tensor3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

namespace {

ComplexMatrix make_pauli(int which) {
  ComplexMatrix m(2);
  switch (which) {
    case 0:
      m.at(0, 0) = 1.0;
      m.at(1, 1) = 1.0;
      break;
    case 1:
      m.at(0, 1) = 1.0;
      m.at(1, 0) = 1.0;
      break;
    case 2:
      m.at(0, 1) = cplx{0.0, -1.0};
      m.at(1, 0) = cplx{0.0, 1.0};
      break;
    case 3:
      m.at(0, 0) = 1.0;
      m.at(1, 1) = -1.0;
      break;
  }
  return m;
}

}  // namespace

const ComplexMatrix& identity2() {
  static const ComplexMatrix m = make_pauli(0);
  return m;
}
const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = make_pauli(1);
  return m;
}
const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m = make_pauli(2);
  return m;
}
const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = make_pauli(3);
  return m;
}

const ComplexMatrix& pauli(int index) {
  switch (index) {
    case 1:
      return pauli_x();
    case 2:
      return pauli_y();
    case 3:
      return pauli_z();
    default:
      throw std::invalid_argument("pauli index must be 1, 2 or 3");
  }
}

ComplexMatrix dot_sigma(const std::array<double, 3>& v) {
  ComplexMatrix m(2);
  m.at(0, 0) = v[2];
  m.at(1, 1) = -v[2];
  m.at(0, 1) = cplx{v[0], -v[1]};
  m.at(1, 0) = cplx{v[0], v[1]};
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const int da = a.dim(), db = b.dim();
  ComplexMatrix r(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      const cplx aij = a.at(i, j);
      if (aij == cplx{0.0, 0.0}) continue;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) r.at(i * db + k, j * db + l) = aij * b.at(k, l);
    }
  return r;
}

ComplexMatrix permute_qubits(const ComplexMatrix& a, const std::vector<int>& perm) {
  const int m = static_cast<int>(perm.size());
  if ((1 << m) != a.dim()) throw std::invalid_argument("permutation size does not match matrix");
  std::vector<bool> seen(m, false);
  for (int p : perm) {
    if (p < 0 || p >= m || seen[p]) throw std::invalid_argument("permutation is not a bijection");
    seen[p] = true;
  }
  // index map: bit of qubit q lives at position m-1-q (qubit 0 most significant)
  std::vector<int> newindex(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    int j = 0;
    for (int q = 0; q < m; ++q) {
      const int bit = (i >> (m - 1 - q)) & 1;
      if (bit) j |= 1 << (m - 1 - perm[q]);
    }
    newindex[i] = j;
  }
  ComplexMatrix r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r.at(newindex[i], newindex[j]) = a.at(i, j);
  return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, int m_qubits, const std::vector<int>& traced) {
  if ((1 << m_qubits) != a.dim()) throw std::invalid_argument("qubit count does not match matrix");
  std::vector<bool> is_traced(m_qubits, false);
  for (int q : traced) {
    if (q < 0 || q >= m_qubits || is_traced[q]) throw std::invalid_argument("bad traced qubit list");
    is_traced[q] = true;
  }
  std::vector<int> kept;
  for (int q = 0; q < m_qubits; ++q)
    if (!is_traced[q]) kept.push_back(q);
  const int kept_n = static_cast<int>(kept.size());
  const int traced_n = m_qubits - kept_n;
  const int out_dim = 1 << kept_n;
  auto full_index = [&](int kept_idx, int traced_idx) {
    int f = 0;
    int kb = 0, tb = 0;
    for (int q = 0; q < m_qubits; ++q) {
      int bit;
      if (is_traced[q])
        bit = (traced_idx >> (traced_n - 1 - tb++)) & 1;
      else
        bit = (kept_idx >> (kept_n - 1 - kb++)) & 1;
      if (bit) f |= 1 << (m_qubits - 1 - q);
    }
    return f;
  };
  ComplexMatrix r(out_dim);
  for (int i = 0; i < out_dim; ++i)
    for (int j = 0; j < out_dim; ++j) {
      cplx acc = 0.0;
      for (int c = 0; c < (1 << traced_n); ++c) acc += a.at(full_index(i, c), full_index(j, c));
      r.at(i, j) = acc;
    }
  return r;
}

namespace {

// Cyclic Jacobi for a dense real symmetric matrix. Returns eigenvalues
// ascending; optionally accumulates eigenvectors (columns).
void jacobi_symmetric(std::vector<double>& s, int n, std::vector<double>* vecs) {
  auto el = [&](int i, int j) -> double& { return s[static_cast<size_t>(i) * n + j]; };
  std::vector<double> v;
  if (vecs) {
    v.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;
  }
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += el(p, q) * el(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = el(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (el(q, q) - el(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = el(k, p), akq = el(k, q);
          el(k, p) = c * akp - sn * akq;
          el(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = el(p, k), aqk = el(q, k);
          el(p, k) = c * apk - sn * aqk;
          el(q, k) = sn * apk + c * aqk;
        }
        if (vecs)
          for (int k = 0; k < n; ++k) {
            const double vkp = v[static_cast<size_t>(k) * n + p];
            const double vkq = v[static_cast<size_t>(k) * n + q];
            v[static_cast<size_t>(k) * n + p] = c * vkp - sn * vkq;
            v[static_cast<size_t>(k) * n + q] = sn * vkp + c * vkq;
          }
      }
  }
  if (vecs) *vecs = std::move(v);
}

}  // namespace

std::vector<double> eigenvalues_hermitian(const ComplexMatrix& a, double herm_tol) {
  if (!a.is_hermitian(herm_tol)) throw std::invalid_argument("matrix is not Hermitian");
  // Real symmetric embedding [[Re, -Im], [Im, Re]]: each eigenvalue of A
  // appears twice.
  const int n = a.dim();
  const int m = 2 * n;
  std::vector<double> s(static_cast<size_t>(m) * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx z = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
      s[static_cast<size_t>(i) * m + j] = z.real();
      s[static_cast<size_t>(i) * m + (j + n)] = -z.imag();
      s[static_cast<size_t>(i + n) * m + j] = z.imag();
      s[static_cast<size_t>(i + n) * m + (j + n)] = z.real();
    }
  jacobi_symmetric(s, m, nullptr);
  std::vector<double> all(m);
  for (int i = 0; i < m; ++i) all[i] = s[static_cast<size_t>(i) * m + i];
  std::sort(all.begin(), all.end());
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (all[2 * i] + all[2 * i + 1]);
  return out;
}

Sym3Eigen sym3_eigen(const Tensor3& sym) {
  std::vector<double> s(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s[static_cast<size_t>(i) * 3 + j] = 0.5 * (sym(i, j) + sym(j, i));
  std::vector<double> vecs;
  jacobi_symmetric(s, 3, &vecs);
  std::array<int, 3> order{0, 1, 2};
  std::array<double, 3> vals{s[0], s[4], s[8]};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  Sym3Eigen out;
  for (int k = 0; k < 3; ++k) {
    out.values[k] = vals[order[k]];
    for (int i = 0; i < 3; ++i) out.vectors(i, k) = vecs[static_cast<size_t>(i) * 3 + order[k]];
  }
  return out;
}

std::array<double, 3> singular_values_3x3(const Tensor3& t) {
  const Tensor3 tt = t.transposed() * t;
  const Sym3Eigen e = sym3_eigen(tt);
  std::array<double, 3> out{};
  for (int k = 0; k < 3; ++k) out[k] = std::sqrt(std::max(0.0, e.values[2 - k]));
  return out;
}

}  // namespace qnet
