#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qnet/measurement.hpp"
#include "qnet/state.hpp"

using namespace qnet;

namespace {

MeasurementPair pair_from_directions(const Vec3& d0, const Vec3& d1, double eta) {
  return {DichotomicObservable{eta, d0}, DichotomicObservable{eta, d1}};
}

Vec3 random_unit(SplitRng& rng) {
  while (true) {
    Vec3 v{rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (n > 1e-6) return {v[0] / n, v[1] / n, v[2] / n};
  }
}

bool psd2(const ComplexMatrix& m, double tolerance) {
  return m.is_hermitian() && oracle::eig2_closed(m)[0] >= -tolerance;
}

}  // namespace

TEST_CASE("povm elements are a valid two-outcome POVM") {
  SplitRng rng(31);
  for (int rep = 0; rep < 20; ++rep) {
    const DichotomicObservable obs{rng.next_double(), random_unit(rng)};
    const auto e = povm_elements(obs);
    CHECK(psd2(e[0], tol::structural));
    CHECK(psd2(e[1], tol::structural));
    CHECK((e[0] + e[1]).max_abs_diff(identity2()) < tol::reconstruct);
    // outcome bit 0 carries the +1 eigensign
    ComplexMatrix diff = e[0];
    diff -= e[1];
    CHECK(diff.max_abs_diff(obs.operator_matrix()) < tol::reconstruct);
  }
}

TEST_CASE("equatorial families follow the stated conventions") {
  const double t = 0.3;
  const MeasurementPair xz = equatorial_pair(Plane::XZ, t, 0.8);
  CHECK(xz.m0.direction[0] == doctest::Approx(std::cos(t)));
  CHECK(xz.m1.direction[0] == doctest::Approx(-std::cos(t)));
  CHECK(xz.m0.direction[2] == doctest::Approx(std::sin(t)));
  CHECK(xz.m1.direction[2] == doctest::Approx(std::sin(t)));
  CHECK(xz.m0.direction[1] == 0.0);

  const MeasurementPair xy = equatorial_pair(Plane::XY, t, 0.8);
  CHECK(xy.m0.direction[0] == doctest::Approx(std::cos(t)));
  CHECK(xy.m1.direction[0] == doctest::Approx(std::cos(t)));
  CHECK(xy.m0.direction[1] == doctest::Approx(std::sin(t)));
  CHECK(xy.m1.direction[1] == doctest::Approx(-std::sin(t)));
  CHECK(xy.m0.direction[2] == 0.0);

  CHECK_THROWS(equatorial_pair(Plane::XZ, t, 1.2));
}

TEST_CASE("compatibility threshold and margin") {
  const double t = M_PI / 4.0;
  const double eta_star = compatibility_threshold(Plane::XZ, t);
  CHECK(eta_star == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(is_compatible(equatorial_pair(Plane::XZ, t, eta_star - 1e-6)).compatible);
  CHECK_FALSE(is_compatible(equatorial_pair(Plane::XZ, t, eta_star + 1e-6)).compatible);
  CHECK(is_compatible(equatorial_pair(Plane::XY, t, eta_star - 1e-6)).compatible);

  // unsharp sigma1/sigma3 pair at eta = 0.939
  const auto r = is_compatible(equatorial_pair(Plane::XZ, t, 0.939));
  CHECK(r.margin == doctest::Approx(1.0 - 0.939 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.margin == doctest::Approx(-0.328).epsilon(1e-3));

  // the threshold at generic angles: compatible exactly up to eta*
  for (double angle : {0.1, 0.7, 1.2}) {
    const double es = compatibility_threshold(Plane::XY, angle);
    CHECK(is_compatible(equatorial_pair(Plane::XY, angle, es)).margin ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("parent POVM exists exactly on the compatible region") {
  SplitRng rng(32);
  for (int rep = 0; rep < 40; ++rep) {
    const double eta = 0.5 + 0.5 * rng.next_double();
    const MeasurementPair pair =
        pair_from_directions(random_unit(rng), random_unit(rng), eta);
    const auto compat = is_compatible(pair);
    if (!compat.compatible) {
      CHECK_THROWS(parent_povm(pair));
      continue;
    }
    const ParentPOVM g = parent_povm(pair);
    ComplexMatrix sum = ComplexMatrix::zero(2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        CHECK(psd2(g.elements[a][b], tol::structural));
        sum += g.elements[a][b];
      }
    CHECK(sum.max_abs_diff(identity2()) < tol::reconstruct);
    // marginals reproduce both settings exactly
    for (int a = 0; a < 2; ++a) {
      const ComplexMatrix m0 = g.elements[a][0] + g.elements[a][1];
      CHECK(m0.max_abs_diff(povm_elements(pair.m0)[a]) < tol::reconstruct);
      const ComplexMatrix m1 = g.elements[0][a] + g.elements[1][a];
      CHECK(m1.max_abs_diff(povm_elements(pair.m1)[a]) < tol::reconstruct);
    }
  }
  // right at the Busch boundary the parent still exists
  const MeasurementPair boundary =
      equatorial_pair(Plane::XZ, M_PI / 4.0, compatibility_threshold(Plane::XZ, M_PI / 4.0));
  const ParentPOVM g = parent_povm(boundary);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) CHECK(psd2(g.elements[a][b], 1e-9));
}

TEST_CASE("bell basis: orthonormal, complete, parity readouts") {
  const auto bell = bell_basis();
  REQUIRE(bell.outcomes() == 4);
  ComplexMatrix sum = ComplexMatrix::zero(4);
  for (int i = 0; i < 4; ++i) {
    sum += bell.projector(i);
    for (int j = 0; j < 4; ++j) {
      cplx ip = 0.0;
      for (int k = 0; k < 4; ++k) ip += std::conj(bell.basis_states[i][k]) * bell.basis_states[j][k];
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < tol::reconstruct);
    }
  }
  CHECK(sum.max_abs_diff(kron(identity2(), identity2())) < tol::reconstruct);

  const auto zz = parity_readout(bell, {3, 3});
  const auto xx = parity_readout(bell, {1, 1});
  const auto yy = parity_readout(bell, {2, 2});
  for (int label = 0; label < 4; ++label) {
    const int a1 = (label >> 1) & 1, a2 = label & 1;
    CHECK(zz[label] == (a1 ? -1 : 1));
    CHECK(xx[label] == (a2 ? -1 : 1));
    // YY = -XX.ZZ on the Bell states
    CHECK(yy[label] == -zz[label] * xx[label]);
  }
  CHECK_THROWS(parity_readout(bell, {1, 3}));  // XZ maps Bell states across labels
  CHECK_THROWS(parity_readout(bell, {1}));
}

TEST_CASE("GHZ basis generalizes the Bell basis") {
  for (int n = 2; n <= 4; ++n) {
    const auto ghz = ghz_basis(n);
    REQUIRE(ghz.outcomes() == (1 << n));
    ComplexMatrix sum = ComplexMatrix::zero(1 << n);
    for (int i = 0; i < ghz.outcomes(); ++i) {
      sum += ghz.projector(i);
      cplx norm = 0.0;
      for (const cplx& c : ghz.basis_states[i]) norm += std::conj(c) * c;
      CHECK(std::abs(norm - 1.0) < tol::reconstruct);
    }
    CHECK(sum.max_abs_diff(ComplexMatrix::identity(1 << n)) < tol::reconstruct);

    // X...X is diagonal with sign (-1)^{b0}
    const auto xs = parity_readout(ghz, std::vector<int>(n, 1));
    for (int label = 0; label < (1 << n); ++label)
      CHECK(xs[label] == (((label >> (n - 1)) & 1) ? -1 : 1));
  }
  // n=2 GHZ states coincide with Bell states up to label permutation
  const auto ghz2 = ghz_basis(2);
  const auto bell = bell_basis();
  const int bell_label_of_ghz[4] = {0b00, 0b10, 0b01, 0b11};
  for (int g = 0; g < 4; ++g) {
    double diff = 0.0;
    for (int k = 0; k < 4; ++k)
      diff = std::max(diff,
                      std::abs(ghz2.basis_states[g][k] - bell.basis_states[bell_label_of_ghz[g]][k]));
    CHECK(diff < tol::reconstruct);
  }
}
